"""Shared automaton model for the three interface theories.

A single :class:`ModalAutomaton` type represents Interface Automata (IA),
disjunctive Modal Transition Systems (dMTS) and Modal Interface Automata
(MIA).  The ``flavor`` tag selects which validity rules apply:

* ``ia`` -- input-deterministic, inputs are stored as singleton
  must-transitions plus their underlying may-transitions; outputs and the
  silent action are may-transitions only.
* ``dmts`` -- a single action set (stored in ``alphabet.outputs`` with empty
  inputs), disjunctive must-transitions allowed freely.
* ``mia`` -- inputs and outputs; at most one must-transition per input and
  state, and every input may-transition is underlain by that must.

All automata are immutable after construction and safe to share across
threads.  Iteration over states and transitions is deterministic
(lexicographic in the canonical state strings).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

TAU = "tau"

IA = "ia"
DMTS = "dmts"
MIA = "mia"
FLAVORS = (IA, DMTS, MIA)


class MialibError(Exception):
    """Base class for errors raised by this library."""


class AlphabetMismatchError(MialibError):
    """Two automata do not share the alphabets required by an operator."""


class FlavorMismatchError(MialibError):
    """An operator was applied to automata of the wrong flavor."""


class NotComposableError(MialibError):
    """Two automata share an action that is not an input/output match."""

    def __init__(self, action: str):
        super().__init__(f"shared action {action!r} is not an input of one "
                         "side and an output of the other")
        self.action = action


# ---------------------------------------------------------------------------
# Structured state identifiers


class StateId:
    """Structured state name recording operator provenance.

    A state id is an atom, a product pair ``(l,r)``, a conjunction ``l&r``,
    a disjunction ``l|r`` or a tagged id ``l@T`` (used both for disjoint
    renaming and for universal states ``u@Name``).  Ids compare, hash and
    sort by their canonical string, and distinct structures render to
    distinct strings.
    """

    __slots__ = ("kind", "parts", "text")

    ATOM = "atom"
    PAIR = "pair"
    WEDGE = "wedge"
    VEE = "vee"
    TAG = "tag"

    def __init__(self, kind: str, parts: tuple):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "text", _render(kind, parts))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("StateId is immutable")

    def __eq__(self, other):
        return isinstance(other, StateId) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __lt__(self, other: "StateId"):
        return self.text < other.text

    def __le__(self, other: "StateId"):
        return self.text <= other.text

    def __repr__(self):
        return f"StateId({self.text!r})"

    def __str__(self):
        return self.text


def _wrap(child: StateId) -> str:
    # Wedge/vee children need grouping parentheses; pairs, tags and atoms
    # are self-delimiting.
    if child.kind in (StateId.WEDGE, StateId.VEE):
        return f"({child.text})"
    return child.text


def _render(kind: str, parts: tuple) -> str:
    if kind == StateId.ATOM:
        return parts[0]
    if kind == StateId.PAIR:
        left, right = parts
        return f"({left.text},{right.text})"
    if kind == StateId.WEDGE:
        left, right = parts
        return f"{_wrap(left)}&{_wrap(right)}"
    if kind == StateId.VEE:
        left, right = parts
        return f"{_wrap(left)}|{_wrap(right)}"
    if kind == StateId.TAG:
        inner, tag = parts
        return f"{_wrap(inner)}@{tag}"
    raise ValueError(f"unknown state id kind {kind!r}")


def atom(name: str) -> StateId:
    return StateId(StateId.ATOM, (name,))


def pair_id(left: StateId, right: StateId) -> StateId:
    return StateId(StateId.PAIR, (left, right))


def wedge_id(left: StateId, right: StateId) -> StateId:
    return StateId(StateId.WEDGE, (left, right))


def vee_id(left: StateId, right: StateId) -> StateId:
    return StateId(StateId.VEE, (left, right))


def tagged_id(inner: StateId, tag: str) -> StateId:
    return StateId(StateId.TAG, (inner, tag))


def universal_id(automaton_name: str) -> StateId:
    """The fresh catch-all state added by the dMTS embedding."""
    return tagged_id(atom("u"), automaton_name)


def is_pair(state: StateId) -> bool:
    return state.kind == StateId.PAIR


def pair_parts(state: StateId) -> tuple[StateId, StateId]:
    if state.kind != StateId.PAIR:
        raise ValueError(f"{state} is not a pair state")
    return state.parts


# ---------------------------------------------------------------------------
# Alphabet


@dataclass(frozen=True)
class Alphabet:
    """Disjoint input and output action sets; ``tau`` belongs to neither."""

    inputs: frozenset[str]
    outputs: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))

    @property
    def actions(self) -> frozenset[str]:
        return self.inputs | self.outputs

    def is_input(self, label: str) -> bool:
        return label in self.inputs

    def is_output(self, label: str) -> bool:
        return label in self.outputs


MayEdge = tuple[StateId, str, StateId]
MustEdge = tuple[StateId, str, frozenset[StateId]]


def _freeze_must(must: Iterable) -> frozenset[MustEdge]:
    out = set()
    for src, label, targets in must:
        out.add((src, label, frozenset(targets)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# The automaton


@dataclass(frozen=True)
class ModalAutomaton:
    """Finite automaton with may- and disjunctive must-transitions."""

    flavor: str
    name: str
    alphabet: Alphabet
    states: frozenset[StateId]
    initial: StateId
    may: frozenset[MayEdge]
    must: frozenset[MustEdge]
    _may_by_src: dict = field(default_factory=dict, repr=False, compare=False)
    _must_by_src: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "may", frozenset(self.may))
        object.__setattr__(self, "must", _freeze_must(self.must))
        may_by_src: dict[StateId, list] = {}
        for src, label, tgt in sorted(self.may, key=_may_key):
            may_by_src.setdefault(src, []).append((label, tgt))
        must_by_src: dict[StateId, list] = {}
        for src, label, targets in sorted(self.must, key=_must_key):
            must_by_src.setdefault(src, []).append((label, targets))
        object.__setattr__(self, "_may_by_src", may_by_src)
        object.__setattr__(self, "_must_by_src", must_by_src)

    # -- deterministic views ------------------------------------------------

    @property
    def sorted_states(self) -> list[StateId]:
        return sorted(self.states)

    @property
    def sorted_may(self) -> list[MayEdge]:
        return sorted(self.may, key=_may_key)

    @property
    def sorted_must(self) -> list[MustEdge]:
        return sorted(self.must, key=_must_key)

    # -- local lookups ------------------------------------------------------

    def may_from(self, state: StateId) -> list[tuple[str, StateId]]:
        return self._may_by_src.get(state, [])

    def musts_from(self, state: StateId) -> list[tuple[str, frozenset[StateId]]]:
        return self._must_by_src.get(state, [])

    def may_targets(self, state: StateId, label: str) -> list[StateId]:
        return [t for (lab, t) in self.may_from(state) if lab == label]

    def must_sets(self, state: StateId, label: str) -> list[frozenset[StateId]]:
        return [T for (lab, T) in self.musts_from(state) if lab == label]

    def has_may(self, state: StateId, label: str) -> bool:
        return any(lab == label for (lab, _) in self.may_from(state))

    def has_must(self, state: StateId, label: str) -> bool:
        return any(lab == label for (lab, _) in self.musts_from(state))


def _may_key(edge: MayEdge):
    src, label, tgt = edge
    return (src.text, label, tgt.text)


def _must_key(edge: MustEdge):
    src, label, targets = edge
    return (src.text, label, tuple(sorted(t.text for t in targets)))


def make_automaton(flavor: str,
                   name: str,
                   inputs: Iterable[str],
                   outputs: Iterable[str],
                   initial: StateId,
                   may: Iterable[MayEdge] = (),
                   must: Iterable = (),
                   states: Iterable[StateId] = ()) -> ModalAutomaton:
    """Build an automaton, collecting states from transition endpoints."""
    may = frozenset(may)
    must = _freeze_must(must)
    all_states = set(states)
    all_states.add(initial)
    for src, _, tgt in may:
        all_states.add(src)
        all_states.add(tgt)
    for src, _, targets in must:
        all_states.add(src)
        all_states.update(targets)
    return ModalAutomaton(flavor=flavor, name=name,
                          alphabet=Alphabet(frozenset(inputs), frozenset(outputs)),
                          states=frozenset(all_states), initial=initial,
                          may=may, must=must)


def make_ia(name: str,
            inputs: Iterable[str],
            outputs: Iterable[str],
            initial: StateId,
            transitions: Iterable[MayEdge],
            states: Iterable[StateId] = ()) -> ModalAutomaton:
    """Build an IA from plain transitions.

    Input transitions become singleton musts plus their underlying mays;
    output and tau transitions become mays only.
    """
    inputs = frozenset(inputs)
    may = set()
    must = set()
    for src, label, tgt in transitions:
        may.add((src, label, tgt))
        if label in inputs:
            must.add((src, label, frozenset([tgt])))
    return make_automaton(IA, name, inputs, outputs, initial, may, must,
                          states=states)


def ia_transitions(aut: ModalAutomaton) -> frozenset[MayEdge]:
    """The plain transition relation of an IA (its may-transitions)."""
    return aut.may


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    """One broken invariant; ``subject`` keys the offending declaration."""

    rule: str
    message: str
    subject: tuple | None = None

    def __str__(self):
        return f"[{self.rule}] {self.message}"


def validate(aut: ModalAutomaton) -> list[Violation]:
    """Check all flavor invariants; an empty list means the automaton is valid."""
    out: list[Violation] = []
    bad = out.append
    alph = aut.alphabet

    if aut.flavor not in FLAVORS:
        bad(Violation("flavor", f"unknown flavor {aut.flavor!r}"))
        return out

    overlap = alph.inputs & alph.outputs
    if overlap:
        bad(Violation("alphabet-disjoint",
                      f"actions both input and output: {sorted(overlap)}"))
    if TAU in alph.actions:
        bad(Violation("tau-reserved", "'tau' may not appear in the alphabet"))
    if aut.flavor == DMTS and alph.inputs:
        bad(Violation("dmts-io-split",
                      "dMTS stores its action set as outputs; inputs must be empty"))

    if aut.initial not in aut.states:
        bad(Violation("initial-state", f"initial state {aut.initial} not in state set"))

    labels = alph.actions
    for src, label, tgt in aut.sorted_may:
        subj = ("may", src, label, tgt)
        if src not in aut.states or tgt not in aut.states:
            bad(Violation("unknown-state", f"may {src} -{label}-> {tgt} leaves the state set", subj))
        if label != TAU and label not in labels:
            bad(Violation("unknown-action", f"may {src} -{label}-> {tgt} uses an undeclared action", subj))

    may_set = aut.may
    for src, label, targets in aut.sorted_must:
        subj = ("must", src, label, targets)
        tgt_text = "{" + ",".join(sorted(t.text for t in targets)) + "}"
        if label == TAU:
            bad(Violation("tau-must", f"must {src} -tau-> {tgt_text}: silent musts are not allowed", subj))
            continue
        if label not in labels:
            bad(Violation("unknown-action", f"must {src} -{label}-> {tgt_text} uses an undeclared action", subj))
        if not targets:
            bad(Violation("empty-must-target", f"must {src} -{label}-> {{}} has no targets", subj))
        if src not in aut.states or any(t not in aut.states for t in targets):
            bad(Violation("unknown-state", f"must {src} -{label}-> {tgt_text} leaves the state set", subj))
        for t in sorted(targets):
            if (src, label, t) not in may_set:
                bad(Violation("syntactic-consistency",
                              f"must {src} -{label}-> {tgt_text} lacks underlying may to {t}", subj))

    if aut.flavor == IA:
        _validate_ia(aut, bad)
    elif aut.flavor == MIA:
        _validate_mia(aut, bad)
    return out


def _validate_ia(aut: ModalAutomaton, bad) -> None:
    alph = aut.alphabet
    for src, label, targets in aut.sorted_must:
        subj = ("must", src, label, targets)
        if label not in alph.inputs:
            bad(Violation("ia-output-must",
                          f"must {src} -{label}->: IA musts exist only for inputs", subj))
        if len(targets) != 1:
            bad(Violation("ia-must-shape",
                          f"must {src} -{label}-> has {len(targets)} targets; IA musts are singletons", subj))
    must_pairs = {(src, label) for src, label, _ in aut.must}
    for state in aut.sorted_states:
        for a in sorted(aut.alphabet.inputs):
            targets = aut.may_targets(state, a)
            if len(targets) > 1:
                bad(Violation("ia-input-determinism",
                              f"{state} has {len(targets)} transitions on input {a}",
                              ("may", state, a, targets[0])))
            for t in targets:
                if (state, a) not in must_pairs:
                    bad(Violation("ia-input-encoding",
                                  f"input may {state} -{a}-> {t} lacks its singleton must",
                                  ("may", state, a, t)))


def _validate_mia(aut: ModalAutomaton, bad) -> None:
    for state in aut.sorted_states:
        for i in sorted(aut.alphabet.inputs):
            sets = aut.must_sets(state, i)
            if len(sets) > 1:
                bad(Violation("mia-input-must-unique",
                              f"{state} has {len(sets)} distinct musts on input {i}",
                              ("must", state, i, sets[0])))
            covered = set().union(*sets) if sets else set()
            for t in aut.may_targets(state, i):
                if t not in covered:
                    bad(Violation("mia-input-may-under-must",
                                  f"input may {state} -{i}-> {t} is not underlain by an {i}-must",
                                  ("may", state, i, t)))


# ---------------------------------------------------------------------------
# Weak transition closure


@dataclass(frozen=True)
class WeakClosure:
    """Weak transition relations of one automaton.

    ``eps`` is the reflexive-transitive closure of silent may-steps.  For a
    label ``l`` (actions and ``tau`` alike), ``weak[l]`` relates ``q`` to
    ``q'`` when some silent run from ``q`` is followed by exactly one
    ``l``-may-step ending in ``q'``; there are no trailing silent steps.
    """

    eps: frozenset[tuple[StateId, StateId]]
    weak: Mapping[str, frozenset[tuple[StateId, StateId]]]
    _eps_succ: dict = field(default_factory=dict, repr=False, compare=False)
    _weak_succ: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        eps_succ: dict[StateId, set[StateId]] = {}
        for a, b in self.eps:
            eps_succ.setdefault(a, set()).add(b)
        weak_succ: dict[tuple[StateId, str], set[StateId]] = {}
        for label, rel in self.weak.items():
            for a, b in rel:
                weak_succ.setdefault((a, label), set()).add(b)
        object.__setattr__(self, "_eps_succ", {k: frozenset(v) for k, v in eps_succ.items()})
        object.__setattr__(self, "_weak_succ", {k: frozenset(v) for k, v in weak_succ.items()})

    def eps_succ(self, state: StateId) -> frozenset[StateId]:
        return self._eps_succ.get(state, frozenset([state]))

    def weak_succ(self, state: StateId, label: str) -> frozenset[StateId]:
        return self._weak_succ.get((state, label), frozenset())

    def weak_hat_succ(self, state: StateId, alpha: str) -> frozenset[StateId]:
        """Successors under the hat convention: tau matches by silent runs."""
        if alpha == TAU:
            return self.eps_succ(state)
        return self.weak_succ(state, alpha)

    def can_weak(self, state: StateId, label: str) -> bool:
        return bool(self.weak_succ(state, label))


def weak_closure(aut: ModalAutomaton) -> WeakClosure:
    """Precompute the weak relations over the automaton's may-transitions."""
    eps_succ: dict[StateId, set[StateId]] = {}
    for state in aut.sorted_states:
        seen = {state}
        stack = [state]
        while stack:
            cur = stack.pop()
            for label, tgt in aut.may_from(cur):
                if label == TAU and tgt not in seen:
                    seen.add(tgt)
                    stack.append(tgt)
        eps_succ[state] = seen
    eps = frozenset((s, t) for s, succ in eps_succ.items() for t in succ)

    labels = set(aut.alphabet.actions) | {TAU}
    weak: dict[str, set[tuple[StateId, StateId]]] = {label: set() for label in labels}
    for state in aut.sorted_states:
        for mid in eps_succ[state]:
            for label, tgt in aut.may_from(mid):
                weak[label].add((state, tgt))
    return WeakClosure(eps=eps, weak={k: frozenset(v) for k, v in weak.items()})


# ---------------------------------------------------------------------------
# Plumbing shared by the operator modules


def rename_disjoint(a: ModalAutomaton, b: ModalAutomaton) -> tuple[ModalAutomaton, ModalAutomaton]:
    """Return isomorphic copies with guaranteed-disjoint state sets.

    Already-disjoint automata are returned unchanged; otherwise every state
    of ``a`` gets the ``@L`` tag and every state of ``b`` the ``@R`` tag.
    """
    if not (a.states & b.states):
        return a, b
    return _tag_states(a, "L"), _tag_states(b, "R")


def _tag_states(aut: ModalAutomaton, tag: str) -> ModalAutomaton:
    ren = {s: tagged_id(s, tag) for s in aut.states}
    return ModalAutomaton(
        flavor=aut.flavor, name=aut.name, alphabet=aut.alphabet,
        states=frozenset(ren.values()), initial=ren[aut.initial],
        may=frozenset((ren[s], l, ren[t]) for s, l, t in aut.may),
        must=frozenset((ren[s], l, frozenset(ren[t] for t in T)) for s, l, T in aut.must))


def disjoint_operands(p: ModalAutomaton, q: ModalAutomaton,
                      combine) -> tuple[ModalAutomaton, ModalAutomaton]:
    """Disjoint copies whose combined ids also avoid the component states.

    ``combine`` builds the fresh id for a state pair (pair, wedge or vee).
    A collision can only occur when an operand already contains
    operator-shaped names; one tagging round then separates everything.
    """
    p, q = rename_disjoint(p, q)
    fresh = {combine(a, b) for a in p.states for b in q.states}
    if fresh & (p.states | q.states):
        p, q = _tag_states(p, "L"), _tag_states(q, "R")
        fresh = {combine(a, b) for a in p.states for b in q.states}
        assert not (fresh & (p.states | q.states))
    return p, q


def as_dmts(aut: ModalAutomaton, name: str | None = None) -> ModalAutomaton:
    """View an IA or MIA as a dMTS by flattening the input/output split."""
    return ModalAutomaton(
        flavor=DMTS, name=name or aut.name,
        alphabet=Alphabet(frozenset(), aut.alphabet.actions),
        states=aut.states, initial=aut.initial, may=aut.may, must=aut.must)


def reachable_states(aut: ModalAutomaton, start: StateId | None = None) -> frozenset[StateId]:
    """States reachable from ``start`` via may-steps (must targets included)."""
    start = aut.initial if start is None else start
    seen = {start}
    stack = [start]
    while stack:
        cur = stack.pop()
        for _, tgt in aut.may_from(cur):
            if tgt not in seen:
                seen.add(tgt)
                stack.append(tgt)
        for _, targets in aut.musts_from(cur):
            for tgt in targets:
                if tgt not in seen:
                    seen.add(tgt)
                    stack.append(tgt)
    return frozenset(seen)


def remove_states(aut: ModalAutomaton, dead: Iterable[StateId],
                  name: str | None = None) -> ModalAutomaton:
    """Delete states: drop transitions touching them and shrink must targets.

    A must whose target set empties out must have its source among the
    deleted states as well; this is asserted rather than repaired.
    """
    dead = frozenset(dead)
    keep = aut.states - dead
    may = frozenset((s, l, t) for s, l, t in aut.may if s in keep and t in keep)
    must = set()
    for s, l, T in aut.must:
        if s not in keep:
            continue
        T2 = frozenset(T - dead)
        assert T2, f"pruning emptied must {s} -{l}-> at a surviving state"
        must.add((s, l, T2))
    return ModalAutomaton(flavor=aut.flavor, name=name or aut.name,
                          alphabet=aut.alphabet, states=keep,
                          initial=aut.initial, may=may, must=frozenset(must))


def restrict_reachable(aut: ModalAutomaton) -> ModalAutomaton:
    """Drop states unreachable from the initial state."""
    keep = reachable_states(aut)
    if keep == aut.states:
        return aut
    return remove_states(aut, aut.states - keep)


def require_same_alphabets(a: ModalAutomaton, b: ModalAutomaton) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError(
            f"{a.name} and {b.name} have different alphabets")


def require_flavor(aut: ModalAutomaton, flavor: str) -> None:
    if aut.flavor != flavor:
        raise FlavorMismatchError(f"{aut.name} is {aut.flavor}, expected {flavor}")
