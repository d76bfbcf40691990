"""Refinement preorders for IA, dMTS and MIA.

All three relations are decided by the same greatest-fixpoint procedure:
start from every candidate state pair and repeatedly delete pairs that
violate one of the two defining clauses until the set is stable.

* clause (i): every must-transition of the specification state is matched
  by a must-transition of the implementation state whose targets all relate
  to some target of the specification's.
* clause (ii): every may-transition of the implementation state (restricted
  to outputs and tau for IA and MIA) is matched by a weak may-transition of
  the specification state.

For IA this coincides with alternating simulation because inputs are stored
as singleton musts; for dMTS clause (ii) ranges over every action.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (DMTS, IA, MIA, TAU, FlavorMismatchError, ModalAutomaton,
                    StateId, reachable_states, require_flavor,
                    require_same_alphabets, weak_closure)

Pair = tuple[StateId, StateId]


@dataclass(frozen=True)
class FailureCertificate:
    """Root cause of a failed refinement check.

    ``pair`` is the first structurally failing pair reached from the initial
    pair by following, at each step, the earliest-eliminated pair that the
    failing obligation needed.  ``clause`` is ``"i"`` or ``"ii"`` and
    ``transition`` describes the unmatched must (clause i, on the
    specification side) or may (clause ii, on the implementation side).
    """

    pair: Pair
    clause: str
    transition: str

    def __str__(self):
        impl, spec = self.pair
        return (f"pair {impl} <= {spec} violates clause ({self.clause}) "
                f"on {self.transition}")


@dataclass(frozen=True)
class RefinementWitness:
    kind: str
    pairs: frozenset[Pair]
    verdict: bool
    failure: FailureCertificate | None = None

    @property
    def holds(self) -> bool:
        return self.verdict


def _may_domain(flavor: str, outputs: frozenset[str]) -> frozenset[str] | None:
    """Labels whose implementation mays clause (ii) inspects; None = all."""
    if flavor == DMTS:
        return None
    return outputs | {TAU}


class _Checker:
    def __init__(self, impl: ModalAutomaton, spec: ModalAutomaton, flavor: str,
                 impl_state: StateId, spec_state: StateId):
        self.impl = impl
        self.spec = spec
        self.domain = _may_domain(flavor, spec.alphabet.outputs)
        self.spec_weak = weak_closure(spec)
        self.root = (impl_state, spec_state)
        # Dependency closure from the roots is enough: eliminating a pair
        # outside it can never affect the verdict.
        self.alive: set[Pair] = set()
        for p in sorted(reachable_states(impl, impl_state)):
            for q in sorted(reachable_states(spec, spec_state)):
                self.alive.add((p, q))
        self.elim_order: dict[Pair, int] = {}
        self.elim_cause: dict[Pair, tuple[str, str]] = {}
        self.cited: dict[Pair, set[Pair]] = {}
        self.citers: dict[Pair, set[Pair]] = {}

    def run(self) -> None:
        pending = sorted(self.alive, key=lambda pq: (pq[0].text, pq[1].text))
        counter = 0
        while pending:
            batch, pending = pending, []
            for pair in batch:
                if pair not in self.alive:
                    continue
                ok, cited, cause = self._check(pair)
                if ok:
                    self._record_citations(pair, cited)
                    continue
                counter += 1
                self.alive.discard(pair)
                self.elim_order[pair] = counter
                self.elim_cause[pair] = cause
                for citer in sorted(self.citers.pop(pair, ()),
                                    key=lambda pq: (pq[0].text, pq[1].text)):
                    if citer in self.alive:
                        pending.append(citer)

    def _record_citations(self, pair: Pair, cited: set[Pair]) -> None:
        for old in self.cited.get(pair, ()):
            self.citers.get(old, set()).discard(pair)
        self.cited[pair] = cited
        for dep in cited:
            self.citers.setdefault(dep, set()).add(pair)

    def _check(self, pair: Pair) -> tuple[bool, set[Pair], tuple[str, str]]:
        p, q = pair
        cited: set[Pair] = set()
        # clause (i): spec musts flow to impl musts.
        for a, spec_targets in self.spec.musts_from(q):
            matched = False
            for b, impl_targets in self.impl.musts_from(p):
                if b != a:
                    continue
                picks = []
                for p2 in impl_targets:
                    choice = next((q2 for q2 in sorted(spec_targets)
                                   if (p2, q2) in self.alive), None)
                    if choice is None:
                        break
                    picks.append((p2, choice))
                else:
                    matched = True
                    cited.update(picks)
                    break
            if not matched:
                tgt = "{" + ",".join(sorted(t.text for t in spec_targets)) + "}"
                return False, cited, ("i", f"spec must {q} -{a}-> {tgt}")
        # clause (ii): impl mays flow to weak spec mays.
        for alpha, p2 in self.impl.may_from(p):
            if self.domain is not None and alpha not in self.domain:
                continue
            choice = next((q2 for q2 in sorted(self.spec_weak.weak_hat_succ(q, alpha))
                           if (p2, q2) in self.alive), None)
            if choice is None:
                return False, cited, ("ii", f"impl may {p} -{alpha}-> {p2}")
            cited.add((p2, choice))
        return True, cited, ("", "")

    def certificate(self) -> FailureCertificate:
        """Walk blame from the root to the first eliminated ancestor."""
        pair = self.root
        while True:
            clause, transition = self.elim_cause[pair]
            blamed = self._blamed_successor(pair, clause, transition)
            if blamed is None:
                return FailureCertificate(pair=pair, clause=clause,
                                          transition=transition)
            pair = blamed

    def _blamed_successor(self, pair: Pair, clause: str, transition: str) -> Pair | None:
        p, q = pair
        candidates: set[Pair] = set()
        if clause == "i":
            for a, spec_targets in self.spec.musts_from(q):
                for b, impl_targets in self.impl.musts_from(p):
                    if b == a:
                        candidates.update((p2, q2) for p2 in impl_targets
                                          for q2 in spec_targets)
        else:
            for alpha, p2 in self.impl.may_from(p):
                if self.domain is not None and alpha not in self.domain:
                    continue
                candidates.update((p2, q2)
                                  for q2 in self.spec_weak.weak_hat_succ(q, alpha))
        my_order = self.elim_order[pair]
        eliminated = [(self.elim_order[c], c) for c in candidates
                      if c in self.elim_order and self.elim_order[c] < my_order]
        if not eliminated:
            return None
        return min(eliminated)[1]


def _decide(impl: ModalAutomaton, spec: ModalAutomaton, flavor: str,
            impl_state: StateId | None, spec_state: StateId | None) -> RefinementWitness:
    impl_state = impl.initial if impl_state is None else impl_state
    spec_state = spec.initial if spec_state is None else spec_state
    checker = _Checker(impl, spec, flavor, impl_state, spec_state)
    checker.run()
    if (impl_state, spec_state) in checker.alive:
        return RefinementWitness(kind=flavor, pairs=frozenset(checker.alive),
                                 verdict=True)
    return RefinementWitness(kind=flavor, pairs=frozenset(checker.alive),
                             verdict=False, failure=checker.certificate())


def ia_refines(impl: ModalAutomaton, spec: ModalAutomaton,
               impl_state: StateId | None = None,
               spec_state: StateId | None = None) -> RefinementWitness:
    """Alternating simulation between IA states."""
    require_flavor(impl, IA)
    require_flavor(spec, IA)
    require_same_alphabets(impl, spec)
    return _decide(impl, spec, IA, impl_state, spec_state)


def dmts_refines(impl: ModalAutomaton, spec: ModalAutomaton,
                 impl_state: StateId | None = None,
                 spec_state: StateId | None = None) -> RefinementWitness:
    """Observational modal refinement between dMTS states."""
    require_flavor(impl, DMTS)
    require_flavor(spec, DMTS)
    require_same_alphabets(impl, spec)
    return _decide(impl, spec, DMTS, impl_state, spec_state)


def mia_refines(impl: ModalAutomaton, spec: ModalAutomaton,
                impl_state: StateId | None = None,
                spec_state: StateId | None = None) -> RefinementWitness:
    """Observational MIA refinement; input mays are implicitly allowed."""
    require_flavor(impl, MIA)
    require_flavor(spec, MIA)
    require_same_alphabets(impl, spec)
    return _decide(impl, spec, MIA, impl_state, spec_state)


_BY_FLAVOR = {IA: ia_refines, DMTS: dmts_refines, MIA: mia_refines}


def refines(impl: ModalAutomaton, spec: ModalAutomaton,
            impl_state: StateId | None = None,
            spec_state: StateId | None = None) -> RefinementWitness:
    """Dispatch on flavor; both automata must share it."""
    if impl.flavor != spec.flavor:
        raise FlavorMismatchError(
            f"cannot compare {impl.flavor} against {spec.flavor}")
    return _BY_FLAVOR[impl.flavor](impl, spec, impl_state, spec_state)


def holds(impl: ModalAutomaton, spec: ModalAutomaton,
          impl_state: StateId | None = None,
          spec_state: StateId | None = None) -> bool:
    return refines(impl, spec, impl_state, spec_state).verdict


def mia_equiv(a: ModalAutomaton, b: ModalAutomaton,
              a_state: StateId | None = None,
              b_state: StateId | None = None) -> bool:
    """Mutual MIA refinement."""
    return (mia_refines(a, b, a_state, b_state).verdict
            and mia_refines(b, a, b_state, a_state).verdict)


def equiv(a: ModalAutomaton, b: ModalAutomaton,
          a_state: StateId | None = None,
          b_state: StateId | None = None) -> bool:
    """Mutual refinement in the automata's shared flavor."""
    return (refines(a, b, a_state, b_state).verdict
            and refines(b, a, b_state, a_state).verdict)
