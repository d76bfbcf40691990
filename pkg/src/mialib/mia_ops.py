"""All operators for Modal Interface Automata.

Conjunction treats inputs like IA-conjunction (strong matching, escape to a
component when only one side constrains the input) and outputs/tau like the
dMTS product (weak matching); inconsistency only ever arises from output
requirements.  Parallel composition synchronizes matched actions into
silent may-transitions and prunes incompatible states, removing every must
that can reach the pruned zone together with exactly its underlying mays.
"""

from __future__ import annotations

from .dmts_ops import (Conjunction, ConjunctiveProduct, InconsistencySet,
                       _inconsistent, _prune)
from .ia_ops import Composition, IncompatibilitySet, composed_alphabets
from .model import (MIA, TAU, ModalAutomaton, StateId, disjoint_operands,
                    make_automaton, pair_id, require_flavor,
                    require_same_alphabets, vee_id, weak_closure)

Pair = tuple[StateId, StateId]


def mia_conj_product(p: ModalAutomaton, q: ModalAutomaton) -> ConjunctiveProduct:
    """Conjunctive product; carries the component automata alongside pairs."""
    require_flavor(p, MIA)
    require_flavor(q, MIA)
    require_same_alphabets(p, q)
    p, q = disjoint_operands(p, q, pair_id)
    pw, qw = weak_closure(p), weak_closure(q)
    inputs = p.alphabet.inputs
    outputs = p.alphabet.outputs

    may = set(p.may) | set(q.may)
    must = set(p.must) | set(q.must)
    for ps in p.sorted_states:
        for qs in q.sorted_states:
            state = pair_id(ps, qs)
            for o, p_targets in p.musts_from(ps):        # (OMust1)
                if o not in outputs:
                    continue
                partners = qw.weak_succ(qs, o)
                if partners:
                    must.add((state, o, frozenset(
                        pair_id(pt, qt) for pt in p_targets for qt in partners)))
            for o, q_targets in q.musts_from(qs):        # (OMust2)
                if o not in outputs:
                    continue
                partners = pw.weak_succ(ps, o)
                if partners:
                    must.add((state, o, frozenset(
                        pair_id(pt, qt) for pt in partners for qt in q_targets)))
            for i in sorted(inputs):
                p_sets = p.must_sets(ps, i)
                q_sets = q.must_sets(qs, i)
                if p_sets and not q_sets:                # (IMust1)
                    must.add((state, i, p_sets[0]))
                elif q_sets and not p_sets:              # (IMust2)
                    must.add((state, i, q_sets[0]))
                elif p_sets and q_sets:                  # (IMust3)
                    must.add((state, i, frozenset(
                        pair_id(pt, qt) for pt in p_sets[0] for qt in q_sets[0])))
                p_mays = p.may_targets(ps, i)
                q_mays = q.may_targets(qs, i)
                if p_mays and not q_mays:                # (IMay1)
                    for pt in p_mays:
                        may.add((state, i, pt))
                elif q_mays and not p_mays:              # (IMay2)
                    for qt in q_mays:
                        may.add((state, i, qt))
                else:                                    # (IMay3)
                    for pt in p_mays:
                        for qt in q_mays:
                            may.add((state, i, pair_id(pt, qt)))
            for pt in sorted(pw.weak_succ(ps, TAU)):     # (May1)
                may.add((state, TAU, pair_id(pt, qs)))
            for qt in sorted(qw.weak_succ(qs, TAU)):     # (May2)
                may.add((state, TAU, pair_id(ps, qt)))
            for alpha in sorted(outputs) + [TAU]:        # (May3)
                for pt in sorted(pw.weak_succ(ps, alpha)):
                    for qt in sorted(qw.weak_succ(qs, alpha)):
                        may.add((state, alpha, pair_id(pt, qt)))

    pairs = {pair_id(ps, qs): (ps, qs) for ps in p.states for qs in q.states}
    states = set(p.states) | set(q.states) | set(pairs)
    automaton = make_automaton(MIA, f"{p.name}_and_{q.name}", inputs, outputs,
                               pair_id(p.initial, q.initial), may, must,
                               states=states)
    return ConjunctiveProduct(automaton=automaton, left=p, right=q,
                              left_weak=pw, right_weak=qw, pairs=pairs)


def mia_inconsistent(product: ConjunctiveProduct) -> InconsistencySet:
    """Inconsistency fixpoint; only output musts seed it, pairs only."""
    return _inconsistent(product, outputs_only=True)


def mia_conjoin(p: ModalAutomaton, q: ModalAutomaton) -> Conjunction:
    """Conjunctive product minus inconsistent pairs; a MIA when defined."""
    product = mia_conj_product(p, q)
    bad = mia_inconsistent(product)
    return _prune(product, bad, f"{p.name}_and_{q.name}")


def mia_disjoin(p: ModalAutomaton, q: ModalAutomaton) -> ModalAutomaton:
    """Least upper bound; input mays at ``p|q`` need both sides to agree."""
    require_flavor(p, MIA)
    require_flavor(q, MIA)
    require_same_alphabets(p, q)
    p, q = disjoint_operands(p, q, vee_id)
    inputs = p.alphabet.inputs
    actions = p.alphabet.actions

    may = set(p.may) | set(q.may)
    must = set(p.must) | set(q.must)
    for ps in p.sorted_states:
        for qs in q.sorted_states:
            v = vee_id(ps, qs)
            for a in sorted(actions):                    # (Must)
                for p_targets in p.must_sets(ps, a):
                    for q_targets in q.must_sets(qs, a):
                        must.add((v, a, frozenset(p_targets | q_targets)))
            for alpha, pt in p.may_from(ps):             # (May1)
                if alpha in inputs and not q.has_may(qs, alpha):
                    continue
                may.add((v, alpha, pt))
            for alpha, qt in q.may_from(qs):             # (May2)
                if alpha in inputs and not p.has_may(ps, alpha):
                    continue
                may.add((v, alpha, qt))

    states = (set(p.states) | set(q.states)
              | {vee_id(ps, qs) for ps in p.states for qs in q.states})
    return make_automaton(MIA, f"{p.name}_or_{q.name}", inputs,
                          p.alphabet.outputs, vee_id(p.initial, q.initial),
                          may, must, states=states)


def mia_parallel_product(p1: ModalAutomaton, p2: ModalAutomaton) -> ModalAutomaton:
    """Product over reachable pairs; musts lift componentwise."""
    require_flavor(p1, MIA)
    require_flavor(p2, MIA)
    inputs, outputs = composed_alphabets(p1, p2)
    a1, a2 = p1.alphabet.actions, p2.alphabet.actions

    init = pair_id(p1.initial, p2.initial)
    may: set[tuple[StateId, str, StateId]] = set()
    must: set[tuple[StateId, str, frozenset[StateId]]] = set()
    seen = {init}
    stack = [init]
    while stack:
        cur = stack.pop()
        s1, s2 = cur.parts
        new_may = []
        for a, targets in p1.musts_from(s1):             # (Must1)
            if a not in a2:
                must.add((cur, a, frozenset(pair_id(t, s2) for t in targets)))
        for a, targets in p2.musts_from(s2):             # (Must2)
            if a not in a1:
                must.add((cur, a, frozenset(pair_id(s1, t) for t in targets)))
        for alpha, t1 in p1.may_from(s1):
            if alpha not in a2:                          # (May1)
                new_may.append((alpha, pair_id(t1, s2)))
            else:                                        # (May3)
                for beta, t2 in p2.may_from(s2):
                    if beta == alpha:
                        new_may.append((TAU, pair_id(t1, t2)))
        for alpha, t2 in p2.may_from(s2):
            if alpha not in a1:                          # (May2)
                new_may.append((alpha, pair_id(s1, t2)))
        for label, tgt in new_may:
            may.add((cur, label, tgt))
            if tgt not in seen:
                seen.add(tgt)
                stack.append(tgt)
    return make_automaton(MIA, f"{p1.name}_x_{p2.name}", inputs, outputs,
                          init, may, must, states=seen)


def mia_incompatible(product: ModalAutomaton, p1: ModalAutomaton,
                     p2: ModalAutomaton) -> IncompatibilitySet:
    """Error pairs (an output may the partner has no must for) plus closure."""
    shared = p1.alphabet.actions & p2.alphabet.actions
    errors = {}
    for state in product.sorted_states:
        s1, s2 = state.parts
        for a in sorted(shared):
            if (a in p1.alphabet.outputs and p1.has_may(s1, a)
                    and not p2.has_must(s2, a)):
                errors[state] = ("error-(a)", a)
                break
            if (a in p2.alphabet.outputs and p2.has_may(s2, a)
                    and not p1.has_must(s1, a)):
                errors[state] = ("error-(b)", a)
                break

    autonomous = product.alphabet.outputs | {TAU}
    provenance = dict(errors)
    incompatible = set(errors)
    changed = True
    while changed:
        changed = False
        for src, label, tgt in product.sorted_may:
            if src in incompatible or label not in autonomous:
                continue
            if tgt in incompatible:
                incompatible.add(src)
                provenance[src] = ("autonomous-step", f"{src} -{label}-> {tgt}")
                changed = True
    return IncompatibilitySet(errors=frozenset(errors),
                              incompatible=frozenset(incompatible),
                              provenance=provenance)


def mia_parallel_compose(p1: ModalAutomaton, p2: ModalAutomaton) -> Composition:
    """Prune the product: besides transitions touching removed states, a
    must with any removed target goes away along with its underlying mays."""
    product = mia_parallel_product(p1, p2)
    incompat = mia_incompatible(product, p1, p2)
    bad = incompat.incompatible
    if product.initial in bad:
        return Composition(product=product, incompatibility=incompat, automaton=None)

    keep = product.states - bad
    removed_may = set()
    must = set()
    for src, label, targets in product.must:
        if src in keep and not (targets & bad):
            must.add((src, label, targets))
        else:
            removed_may.update((src, label, t) for t in targets)
    may = frozenset((s, l, t) for s, l, t in product.may
                    if s in keep and t in keep and (s, l, t) not in removed_may)
    pruned = make_automaton(MIA, f"{p1.name}_par_{p2.name}",
                            product.alphabet.inputs, product.alphabet.outputs,
                            product.initial, may, must, states=keep)
    return Composition(product=product, incompatibility=incompat, automaton=pruned)


def is_mia_witness(product: ConjunctiveProduct, w: set[Pair]) -> bool:
    """Witness conditions with the must checks restricted to outputs."""
    left, right = product.left, product.right
    lw, rw = product.left_weak, product.right_weak
    outputs = left.alphabet.outputs
    aut = product.automaton
    members = {pair_id(ps, qs) for ps, qs in w}
    component = set(left.states) | set(right.states)
    for ps, qs in w:
        for a, _ in left.musts_from(ps):                 # (W1)
            if a in outputs and not rw.can_weak(qs, a):
                return False
        for a, _ in right.musts_from(qs):                # (W2)
            if a in outputs and not lw.can_weak(ps, a):
                return False
        state = pair_id(ps, qs)
        for _, targets in aut.musts_from(state):         # (W3)
            if not (targets & (members | component)):
                return False
    return True
