from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from mialib.model import (DMTS, IA, MIA, TAU, atom, make_automaton, make_ia,
                          pair_id, rename_disjoint, tagged_id, universal_id,
                          validate, vee_id, wedge_id, weak_closure)
from mialib.testkit import gen_random

s0, s1, s2, s3 = atom("s0"), atom("s1"), atom("s2"), atom("s3")


# ---------------------------------------------------------------------------
# State ids


def test_state_id_rendering():
    assert pair_id(atom("p"), atom("q")).text == "(p,q)"
    assert wedge_id(atom("p"), atom("q")).text == "p&q"
    assert vee_id(atom("p"), atom("q")).text == "p|q"
    assert tagged_id(atom("p"), "L").text == "p@L"
    assert universal_id("P").text == "u@P"
    # nested composites get grouped, pairs are self-delimiting
    assert wedge_id(vee_id(atom("a"), atom("b")), atom("c")).text == "(a|b)&c"
    assert wedge_id(atom("a"), vee_id(atom("b"), atom("c"))).text == "a&(b|c)"
    assert wedge_id(pair_id(atom("a"), atom("b")), atom("c")).text == "(a,b)&c"
    assert tagged_id(wedge_id(atom("a"), atom("b")), "L").text == "(a&b)@L"


_ids = st.deferred(lambda: st.one_of(
    st.sampled_from("abcxyz").map(atom),
    st.tuples(_ids, _ids).map(lambda t: pair_id(*t)),
    st.tuples(_ids, _ids).map(lambda t: wedge_id(*t)),
    st.tuples(_ids, _ids).map(lambda t: vee_id(*t)),
    st.tuples(_ids, st.sampled_from(["L", "R"])).map(lambda t: tagged_id(*t)),
))


@given(_ids, _ids)
def test_distinct_ids_render_distinctly(a, b):
    if (a.kind, a.parts) != (b.kind, b.parts):
        assert a.text != b.text
    else:
        assert a == b


# ---------------------------------------------------------------------------
# Validation


@pytest.mark.parametrize("flavor", [IA, DMTS, MIA])
def test_single_state_no_transitions_is_valid(flavor):
    inputs = [] if flavor == DMTS else ["a"]
    aut = make_automaton(flavor, "single", inputs, ["o"], s0)
    assert validate(aut) == []


def test_ia_input_nondeterminism_rejected():
    aut = make_ia("bad", ["a"], [], s0, [(s0, "a", s1), (s0, "a", s2)])
    rules = {v.rule for v in validate(aut)}
    assert "ia-input-determinism" in rules


def test_mia_input_may_without_must_rejected():
    aut = make_automaton(MIA, "bad", ["i"], [], s0, may=[(s0, "i", s1)])
    rules = {v.rule for v in validate(aut)}
    assert "mia-input-may-under-must" in rules


def test_syntactic_consistency_required():
    aut = make_automaton(DMTS, "bad", [], ["a"], s0,
                         may=[], must=[(s0, "a", [s1])])
    rules = {v.rule for v in validate(aut)}
    assert "syntactic-consistency" in rules


def test_tau_must_rejected():
    aut = make_automaton(DMTS, "bad", [], ["a"], s0,
                         may=[(s0, TAU, s1)], must=[(s0, TAU, [s1])])
    assert any(v.rule == "tau-must" for v in validate(aut))


def test_alphabet_overlap_and_tau_rejected():
    aut = make_automaton(MIA, "bad", ["a"], ["a"], s0)
    assert any(v.rule == "alphabet-disjoint" for v in validate(aut))
    aut2 = make_automaton(DMTS, "bad2", [], [TAU], s0)
    assert any(v.rule == "tau-reserved" for v in validate(aut2))


def test_mia_two_input_musts_rejected():
    aut = make_automaton(MIA, "bad", ["i"], [], s0,
                         may=[(s0, "i", s1), (s0, "i", s2)],
                         must=[(s0, "i", [s1]), (s0, "i", [s2])])
    assert any(v.rule == "mia-input-must-unique" for v in validate(aut))


# ---------------------------------------------------------------------------
# Weak closure


def test_weak_closure_reflexive_only_without_tau():
    aut = make_automaton(DMTS, "a", [], ["o"], s0)
    wc = weak_closure(aut)
    assert wc.eps == frozenset([(s0, s0)])


def test_weak_closure_no_trailing_tau():
    aut = make_automaton(DMTS, "a", [], ["o"], s0, may=[
        (s0, TAU, s1), (s1, TAU, s2), (s0, "o", s3)])
    wc = weak_closure(aut)
    assert (s0, s3) in wc.weak["o"]
    assert wc.weak_succ(s0, "o") == frozenset([s3])


def _enumerate_weak(aut, label):
    """Independent oracle: enumerate all tau*;label paths."""
    found = set()
    for start in aut.states:
        frontier = {start}
        closed = set()
        while frontier:
            cur = frontier.pop()
            closed.add(cur)
            for lab, tgt in aut.may_from(cur):
                if lab == TAU and tgt not in closed:
                    frontier.add(tgt)
        for mid in closed:
            for lab, tgt in aut.may_from(mid):
                if lab == label:
                    found.add((start, tgt))
    return found


def test_weak_closure_chain_matches_path_enumeration():
    # q -tau-> q1 -o-> q2 -tau-> q3: the trailing silent step is excluded
    q, q1, q2, q3 = (atom(n) for n in ("q", "q1", "q2", "q3"))
    aut = make_automaton(DMTS, "a", [], ["o"], q, may=[
        (q, TAU, q1), (q1, "o", q2), (q2, TAU, q3)])
    wc = weak_closure(aut)
    expected = _enumerate_weak(aut, "o")
    assert expected == {(q, q2), (q1, q2)}
    assert wc.weak["o"] == frozenset(expected)
    assert (q, q3) not in wc.weak["o"]


@pytest.mark.parametrize("seed", range(25))
def test_weak_closure_properties(seed):
    aut = gen_random(DMTS, seed=seed, transition_density=0.5)
    wc = weak_closure(aut)
    succ = {s: wc.eps_succ(s) for s in aut.states}
    for s in aut.states:
        assert s in succ[s]  # reflexive
        for t in succ[s]:    # transitive
            assert succ[t] <= succ[s]
    # prefixing eps on the left changes nothing
    for label in list(aut.alphabet.actions) + [TAU]:
        for s in aut.states:
            via_eps = set()
            for mid in succ[s]:
                via_eps |= wc.weak_succ(mid, label)
            assert via_eps == set(wc.weak_succ(s, label))
        # matches the independent path enumeration as well
        assert wc.weak[label] == frozenset(_enumerate_weak(aut, label))


def test_weak_closure_idempotent_view():
    aut = gen_random(MIA, seed=9, transition_density=0.5)
    assert weak_closure(aut).eps == weak_closure(aut).eps


# ---------------------------------------------------------------------------
# Disjoint renaming


def test_rename_disjoint_keeps_disjoint_inputs():
    a = make_automaton(DMTS, "a", [], ["x"], atom("p"))
    b = make_automaton(DMTS, "b", [], ["x"], atom("q"))
    a2, b2 = rename_disjoint(a, b)
    assert a2 is a and b2 is b


def test_rename_disjoint_tags_overlap():
    a = make_automaton(DMTS, "a", [], ["x"], atom("p"))
    b = make_automaton(DMTS, "b", [], ["x"], atom("p"))
    a2, b2 = rename_disjoint(a, b)
    assert a2.initial.text == "p@L"
    assert b2.initial.text == "p@R"
    assert not (a2.states & b2.states)


def test_rename_disjoint_same_object():
    a = make_automaton(DMTS, "a", [], ["x"], atom("p"), may=[(atom("p"), "x", atom("p"))])
    a2, b2 = rename_disjoint(a, a)
    assert not (a2.states & b2.states)
    assert a2.initial == tagged_id(atom("p"), "L")
    assert a2.may == frozenset([(a2.initial, "x", a2.initial)])
