"""Textual automaton format, parser, canonical serializer and DOT export.

The format names one automaton per file::

    mia Spec {
      inputs: req;
      outputs: ack;
      initial s0;
      must s0 -req-> {s1, s2};
      may s1 -ack-> s0;
    }

dMTS files declare ``actions:`` instead of the input/output split, and IA
files write plain transitions (``s0 -req-> s1;``) whose modality follows
from the action kind.  In IA and MIA files an input must-declaration
implies its underlying may-transitions.  ``#`` starts a line comment.

State names produced by the operators (pairs ``(p,q)``, conjunctions
``p&q``, disjunctions ``p|q``, tags ``p@L``) parse back structurally, so
serialized results are themselves valid input.  Only states that occur in
the initial declaration or some transition are representable; isolated
states are omitted when serializing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .model import (DMTS, FLAVORS, IA, MIA, TAU, ModalAutomaton, StateId,
                    Violation, atom, make_automaton, pair_id, tagged_id,
                    validate, vee_id, wedge_id)
from .model import MialibError


class ParseError(MialibError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Lexer

_PUNCT = set("{}(),;:@&|")


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident | punct | dash | arrow | eof
    value: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "-":
            if text.startswith("->", i):
                toks.append(_Tok("arrow", "->", line, col))
                i += 2
                col += 2
            else:
                toks.append(_Tok("dash", "-", line, col))
                i += 1
                col += 1
        elif ch in _PUNCT:
            toks.append(_Tok("punct", ch, line, col))
            i += 1
            col += 1
        elif ch.isalnum() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("ident", text[i:j], line, col))
            col += j - i
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser


@dataclass
class SourceDocument:
    """A parsed file: its text, the automaton and per-declaration positions."""

    text: str
    automaton: ModalAutomaton
    spans: dict = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect_punct(self, ch: str) -> _Tok:
        tok = self.next()
        if tok.kind != "punct" or tok.value != ch:
            self.fail(f"expected {ch!r}, found {tok.value!r}", tok)
        return tok

    def expect_ident(self, what: str = "identifier") -> _Tok:
        tok = self.next()
        if tok.kind != "ident":
            self.fail(f"expected {what}, found {tok.value!r}", tok)
        return tok

    # -- structured state ids ---------------------------------------------

    def state_id(self) -> StateId:
        left = self.postfix()
        while self.peek().kind == "punct" and self.peek().value in "&|":
            op = self.next().value
            right = self.postfix()
            left = wedge_id(left, right) if op == "&" else vee_id(left, right)
        return left

    def postfix(self) -> StateId:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            sid = atom(tok.value)
        elif tok.kind == "punct" and tok.value == "(":
            self.next()
            first = self.state_id()
            sep = self.next()
            if sep.kind == "punct" and sep.value == ",":
                second = self.state_id()
                self.expect_punct(")")
                sid = pair_id(first, second)
            elif sep.kind == "punct" and sep.value == ")":
                sid = first
            else:
                self.fail("expected ',' or ')' in state name", sep)
        else:
            self.fail(f"expected state name, found {tok.value!r}", tok)
            raise AssertionError
        while self.peek().kind == "punct" and self.peek().value == "@":
            self.next()
            tag = self.expect_ident("tag")
            sid = tagged_id(sid, tag.value)
        return sid

    # -- document -----------------------------------------------------------

    def document(self) -> tuple[ModalAutomaton, dict]:
        spans: dict = {}
        head = self.expect_ident("flavor (ia, dmts or mia)")
        if head.value not in FLAVORS:
            self.fail(f"unknown flavor {head.value!r}", head)
        flavor = head.value
        name = self.expect_ident("automaton name")
        spans[("header",)] = (head.line, head.col)
        self.expect_punct("{")

        inputs: set[str] = set()
        outputs: set[str] = set()
        while self.peek().kind == "ident" and self.peek().value in ("inputs", "outputs", "actions"):
            kind_tok = self.next()
            kind = kind_tok.value
            if kind == "actions" and flavor != DMTS:
                self.fail("'actions' is only valid in dmts files", kind_tok)
            if kind in ("inputs", "outputs") and flavor == DMTS:
                self.fail(f"'{kind}' is not valid in dmts files; use 'actions'", kind_tok)
            self.expect_punct(":")
            spans[("alphabet", kind)] = (kind_tok.line, kind_tok.col)
            while self.peek().kind == "ident":
                action = self.next()
                if action.value == TAU:
                    self.fail("'tau' cannot be declared as an action", action)
                (inputs if kind == "inputs" else outputs).add(action.value)
                if self.peek().kind == "punct" and self.peek().value == ",":
                    self.next()
                else:
                    break
            self.expect_punct(";")

        init_tok = self.peek()
        if not (init_tok.kind == "ident" and init_tok.value == "initial"):
            self.fail("expected 'initial'", init_tok)
        self.next()
        initial = self.state_id()
        spans[("initial",)] = (init_tok.line, init_tok.col)
        self.expect_punct(";")

        may: set = set()
        must: set = set()
        while not (self.peek().kind == "punct" and self.peek().value == "}"):
            self.transition(flavor, inputs, may, must, spans)
        self.expect_punct("}")
        if self.peek().kind != "eof":
            self.fail("trailing input after closing '}'")

        automaton = make_automaton(flavor, name.value, inputs, outputs,
                                   initial, may, must)
        return automaton, spans

    def transition(self, flavor: str, inputs: set[str], may: set, must: set,
                   spans: dict) -> None:
        tok = self.peek()
        modality = ""
        if tok.kind == "ident" and tok.value in ("may", "must"):
            modality = tok.value
            self.next()
        elif flavor != IA:
            # a bare transition only makes sense where modality is implied
            if tok.kind != "ident" and not (tok.kind == "punct" and tok.value == "("):
                self.fail(f"expected transition, found {tok.value!r}", tok)
            self.fail("transitions in dmts/mia files need 'may' or 'must'", tok)
        src = self.state_id()
        dash = self.next()
        if dash.kind != "dash":
            self.fail("expected '-label->'", dash)
        label_tok = self.expect_ident("action label")
        label = label_tok.value
        arrow = self.next()
        if arrow.kind != "arrow":
            self.fail("expected '->'", arrow)

        targets: list[StateId] = []
        braced = False
        if self.peek().kind == "punct" and self.peek().value == "{":
            braced = True
            if flavor == IA:
                self.fail("set targets are not allowed in ia files")
            self.next()
            targets.append(self.state_id())
            while self.peek().kind == "punct" and self.peek().value == ",":
                self.next()
                targets.append(self.state_id())
            self.expect_punct("}")
        else:
            targets.append(self.state_id())
        self.expect_punct(";")

        pos = (tok.line, tok.col)
        if modality == "must" or (modality == "" and flavor == IA and label in inputs):
            if label == TAU:
                raise ParseError("silent must-transitions are not allowed",
                                 label_tok.line, label_tok.col)
            tset = frozenset(targets)
            must.add((src, label, tset))
            spans[("must", src, label, tset)] = pos
            if flavor in (IA, MIA) and label in inputs:
                for t in targets:
                    may.add((src, label, t))
        if modality in ("", "may") and not (modality == "" and flavor == IA and label in inputs):
            if len(targets) > 1:
                self.fail("may-transitions take a single target state", tok)
            may.add((src, label, targets[0]))
            spans[("may", src, label, targets[0])] = pos


def parse_document(text: str) -> SourceDocument:
    automaton, spans = _Parser(text).document()
    return SourceDocument(text=text, automaton=automaton, spans=spans)


def parse(text: str) -> ModalAutomaton:
    """Parse one automaton; raises :class:`ParseError` with a position."""
    return parse_document(text).automaton


def parse_file(path) -> ModalAutomaton:
    return parse(Path(path).read_text(encoding="utf-8"))


def validate_document(doc: SourceDocument) -> list[tuple[Violation, tuple[int, int] | None]]:
    """Validate and attach source positions where a declaration is known."""
    out = []
    for violation in validate(doc.automaton):
        out.append((violation, doc.spans.get(violation.subject)))
    return out


# ---------------------------------------------------------------------------
# Serializer


def _fmt_alphabet(label: str, actions) -> str:
    return f"  {label}: {', '.join(sorted(actions))};"


def _fmt_target(targets: frozenset[StateId]) -> str:
    if len(targets) == 1:
        return next(iter(targets)).text
    return "{" + ", ".join(sorted(t.text for t in targets)) + "}"


def serialize(aut: ModalAutomaton) -> str:
    """Render in canonical order; reparsing yields the same automaton.

    Canonical order is lexicographic over the rendered transition lines.
    MIA input-mays underlying a must are implied and not written.  States
    that appear in no transition and are not initial cannot be expressed in
    the format and are dropped.
    """
    lines = [f"{aut.flavor} {aut.name} {{"]
    if aut.flavor == DMTS:
        lines.append(_fmt_alphabet("actions", aut.alphabet.outputs))
    else:
        lines.append(_fmt_alphabet("inputs", aut.alphabet.inputs))
        lines.append(_fmt_alphabet("outputs", aut.alphabet.outputs))
    lines.append(f"  initial {aut.initial.text};")

    if aut.flavor == IA:
        for src, label, tgt in sorted(aut.may, key=lambda e: (e[0].text, e[1], e[2].text)):
            lines.append(f"  {src.text} -{label}-> {tgt.text};")
    else:
        covered = set()
        for src, label, targets in aut.sorted_must:
            lines.append(f"  must {src.text} -{label}-> {_fmt_target(targets)};")
            if label in aut.alphabet.inputs:
                covered.update((src, label, t) for t in targets)
        for src, label, tgt in sorted(aut.may, key=lambda e: (e[0].text, e[1], e[2].text)):
            if (src, label, tgt) not in covered:
                lines.append(f"  may {src.text} -{label}-> {tgt.text};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT export


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _edge_label(aut: ModalAutomaton, label: str) -> str:
    if label == TAU:
        return TAU
    if aut.alphabet.is_input(label):
        return f"{label}?"
    return f"{label}!"


def export_dot(aut: ModalAutomaton) -> str:
    """Graphviz rendering: solid musts, dashed may-only transitions.

    Disjunctive musts are routed through a point-shaped junction node and
    the initial state gets a double border.
    """
    out = [f"digraph {_q(aut.name)} {{", "  rankdir=LR;",
           "  node [shape=ellipse];"]
    for state in aut.sorted_states:
        extra = " peripheries=2" if state == aut.initial else ""
        out.append(f"  {_q(state.text)} [label={_q(state.text)}{extra}];")
    covered = set()
    junction = 0
    for src, label, targets in aut.sorted_must:
        covered.update((src, label, t) for t in targets)
        text = _edge_label(aut, label)
        if len(targets) == 1:
            tgt = next(iter(targets))
            out.append(f"  {_q(src.text)} -> {_q(tgt.text)} [label={_q(text)}];")
        else:
            j = f"__junction_{junction}"
            junction += 1
            out.append(f"  {_q(j)} [shape=point label=\"\"];")
            out.append(f"  {_q(src.text)} -> {_q(j)} [label={_q(text)} arrowhead=none];")
            for tgt in sorted(targets):
                out.append(f"  {_q(j)} -> {_q(tgt.text)};")
    for src, label, tgt in sorted(aut.may, key=lambda e: (e[0].text, e[1], e[2].text)):
        if (src, label, tgt) in covered:
            continue
        text = _edge_label(aut, label)
        out.append(f"  {_q(src.text)} -> {_q(tgt.text)} [label={_q(text)} style=dashed];")
    out.append("}")
    return "\n".join(out) + "\n"
