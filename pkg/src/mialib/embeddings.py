"""Modality-assigning translations of IA into dMTS and MIA.

The dMTS embedding adds a fresh catch-all state reachable by every missing
input; the MIA embedding keeps the carrier untouched because MIA treats
unspecified inputs as implicitly allowed.  Both preserve and reflect
refinement.
"""

from __future__ import annotations

from .model import (DMTS, IA, MIA, Alphabet, ModalAutomaton,
                    require_flavor, universal_id)


def embed_ia_to_dmts(p: ModalAutomaton) -> ModalAutomaton:
    """Embed an IA into dMTS over the flattened action set.

    Every transition becomes a may, inputs additionally become singleton
    musts, each missing input gains a may into the fresh universal state,
    and the universal state allows every action of the alphabet.
    """
    require_flavor(p, IA)
    actions = p.alphabet.actions
    inputs = p.alphabet.inputs
    u = universal_id(p.name)
    assert u not in p.states

    may = set(p.may)
    must = set(p.must)
    for state in p.sorted_states:
        for a in sorted(inputs):
            if not p.has_may(state, a):
                may.add((state, a, u))
    for a in sorted(actions):
        may.add((u, a, u))

    return ModalAutomaton(
        flavor=DMTS, name=f"{p.name}_as_dmts",
        alphabet=Alphabet(frozenset(), actions),
        states=p.states | {u}, initial=p.initial,
        may=frozenset(may), must=frozenset(must))


def embed_ia_to_mia(p: ModalAutomaton) -> ModalAutomaton:
    """Embed an IA into MIA: same carrier, inputs become singleton musts.

    On the shared transition store this is a re-flavoring; the transitions
    of an IA are already kept as mays with singleton musts on inputs.
    """
    require_flavor(p, IA)
    return ModalAutomaton(
        flavor=MIA, name=f"{p.name}_as_mia", alphabet=p.alphabet,
        states=p.states, initial=p.initial, may=p.may, must=p.must)
