"""
Hereditary saturated ideals, quotient systems and maximal tails.

An ideal of a finite powerset algebra is I_H for an atom set H, so every
predicate here is checked on atoms. In the dual graph (u -l-> dual_map(l)(u)):
  - H is hereditary iff it is closed under predecessors
  - a maximal tail T = {A : A meets W} has its support W closed under successors,
    and A >= C on atoms means a dual path from C's atom to A's atom
"""
from dataclasses import dataclass
from typing import NamedTuple, Optional

import networkx as nx

from src.algebra.boolean import Atom, BooleanSet
from src.algebra.dynamics import BdsSpec, Word, apply_theta, check_condition_L
from src.algebra.stone_dual import dual_graph, is_ultrafilter_cycle, reach, return_language_single_power
from src.utils.errors import NotACyclicWitnessError, SizeLimitError, ValidationError

ENUMERATION_LIMIT = 20


def check_size(spec: BdsSpec, limit: int = ENUMERATION_LIMIT):
    if spec.size > limit:
        raise SizeLimitError(spec.size, limit)


@dataclass(frozen=True)
class HsIdeal:
    atom_set: BooleanSet
    proper: bool

    def __contains__(self, a: BooleanSet):
        return a <= self.atom_set


class CyclicWitness(NamedTuple):
    word: Word
    atom: Atom
    base: BooleanSet


@dataclass(frozen=True)
class MaximalTail:
    support: BooleanSet
    cyclic_witness: Optional[CyclicWitness] = None

    def __contains__(self, a: BooleanSet):
        """ the tail itself, T = {A : A n W != 0} """
        return bool(a & self.support)

    @property
    def cyclic(self) -> bool:
        return self.cyclic_witness is not None

    @property
    def complement(self) -> BooleanSet:
        return self.support.complement()


def is_hereditary(spec: BdsSpec, h: BooleanSet) -> bool:
    for images in spec.dual_maps:
        for u, v in enumerate(images):
            if v is not None and v in h and u not in h:
                return False
    return True


def _saturation_forced(spec: BdsSpec, h: BooleanSet) -> list:
    """ regular atoms outside H all of whose theta_l images fall inside H """
    forced = []
    for u in range(spec.size):
        if u in h or not spec.atom_delta[u]:
            continue
        if all(spec.preimages[spec.label_index(l)][u] <= h.members for l in spec.atom_delta[u]):
            forced.append(u)
    return forced


def is_saturated(spec: BdsSpec, h: BooleanSet) -> bool:
    return not _saturation_forced(spec, h)


def hereditary_closure(spec: BdsSpec, s: BooleanSet) -> BooleanSet:
    graph = dual_graph(spec).graph
    members = set(s.members)
    for u in s:
        members |= nx.ancestors(graph, u)
    return BooleanSet.of(spec.size, members)


def saturation_closure(spec: BdsSpec, s: BooleanSet) -> HsIdeal:
    h = hereditary_closure(spec, s)
    while True:
        forced = _saturation_forced(spec, h)
        if not forced:
            break
        h = hereditary_closure(spec, h | BooleanSet.of(spec.size, forced))
    return HsIdeal(h, proper=len(h) < spec.size)


def dominates(spec: BdsSpec, a: BooleanSet, b: BooleanSet) -> bool:
    """ A >= B: B <= theta_alpha(A) for some word alpha (the empty word included) """
    seen = {a}
    frontier = [a]
    while frontier:
        current = frontier.pop()
        if b <= current:
            return True
        for label in spec.labels:
            image = apply_theta(spec, Word((label,)), current)
            if image and image not in seen:
                seen.add(image)
                frontier.append(image)
    return False


def _hereditary_sets(spec: BdsSpec):
    """ every predecessor-closed atom set, built as unions of principal closures """
    graph = dual_graph(spec).graph
    principal = [frozenset(nx.ancestors(graph, u)) | {u} for u in range(spec.size)]
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        current = frontier.pop()
        for u in range(spec.size):
            if u in current:
                continue
            grown = current | principal[u]
            if grown not in found:
                found.add(grown)
                frontier.append(grown)
    return found


def enumerate_hs_ideals(spec: BdsSpec) -> list:
    check_size(spec)
    ideals = []
    for members in _hereditary_sets(spec):
        h = BooleanSet(members, spec.size)
        if is_saturated(spec, h):
            ideals.append(HsIdeal(h, proper=len(h) < spec.size))
    return sorted(ideals, key=lambda ideal: ideal.atom_set.sort_key)


def quotient_bds(spec: BdsSpec, h) -> BdsSpec:
    """ The system on B/I_H, realised on the atoms outside H with their original ids """
    h = h.atom_set if isinstance(h, HsIdeal) else h
    if len(h) == spec.size:
        raise ValidationError(f'Quotient by the improper ideal {spec.render(h)}')
    if not is_hereditary(spec, h) or not is_saturated(spec, h):
        raise ValidationError(f'{spec.render(h)} is not a hereditary saturated ideal')
    keep = [u for u in range(spec.size) if u not in h]
    position = {u: i for i, u in enumerate(keep)}
    dual_maps = tuple(
        tuple(None if images[u] is None else position[images[u]] for u in keep)
        for images in spec.dual_maps)
    return BdsSpec(tuple(spec.atoms[u] for u in keep), spec.labels, dual_maps)


def lift(spec: BdsSpec, quotient: BdsSpec, a: BooleanSet) -> BooleanSet:
    """ Map a set of quotient atoms back onto the original atoms by id """
    return BooleanSet.of(spec.size, (spec.atom_index(quotient.atoms[u]) for u in a))


def _co_reachable(spec: BdsSpec, w: BooleanSet) -> bool:
    """ T5 on atoms: for atoms, {w} >= {c} is a dual path c -> w, so any two atoms of W need a common ancestor in W """
    graph = dual_graph(spec).graph
    ancestors = {u: (frozenset(nx.ancestors(graph, u)) | {u}) & w.members for u in w}
    members = sorted(w.members)
    for i, w1 in enumerate(members):
        for w2 in members[i:]:
            if not ancestors[w1] & ancestors[w2]:
                return False
    return True


def is_maximal_tail(spec: BdsSpec, w: BooleanSet) -> bool:
    if not w:
        return False
    h = w.complement()
    if not is_hereditary(spec, h) or not is_saturated(spec, h):
        return False
    return _co_reachable(spec, w)


def is_cyclic_tail(spec: BdsSpec, w: BooleanSet) -> Optional[CyclicWitness]:
    if not is_maximal_tail(spec, w):
        raise ValidationError(f'{spec.render(w)} is not the support of a maximal tail')
    for u in w:
        if reach(spec, u) != w:
            continue
        verdict = return_language_single_power(spec, u)
        if verdict.single_power is not None:
            return CyclicWitness(verdict.single_power, spec.atom_objects[u], BooleanSet.of(spec.size, [u]))
    return None


def tail_from_ultrafilter_cycle(spec: BdsSpec, alpha: Word, u) -> MaximalTail:
    u = u.index if isinstance(u, Atom) else u
    atom = spec.atom_objects[u]
    if not is_ultrafilter_cycle(spec, alpha, u):
        raise NotACyclicWitnessError(f'({alpha}, {atom}^) is not an ultrafilter cycle')
    w = return_language_single_power(spec, u).single_power
    # alpha returns to u, so it is a power of w exactly when w exists
    if w is None or len(alpha) % len(w) or alpha.letters != w.letters * (len(alpha) // len(w)):
        raise NotACyclicWitnessError(f'Returns at {atom} are not all powers of "{alpha}"')
    return MaximalTail(reach(spec, u), CyclicWitness(alpha, atom, BooleanSet.of(spec.size, [u])))


def enumerate_maximal_tails(spec: BdsSpec) -> list:
    check_size(spec)
    tails = []
    for ideal in enumerate_hs_ideals(spec):
        w = ideal.atom_set.complement()
        if w and _co_reachable(spec, w):
            tails.append(MaximalTail(w, is_cyclic_tail(spec, w)))
    return sorted(tails, key=lambda tail: tail.support.sort_key)


def quotient_fails_L(spec: BdsSpec, h: BooleanSet) -> bool:
    return not check_condition_L(quotient_bds(spec, h)).holds
