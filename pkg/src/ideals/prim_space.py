"""
The space of maximal tails and the lattice of hereditary saturated ideals.

A finite space is determined by its specialization preorder, and here closure
is support containment: T lies in the closure of a set of tails iff W_T is
inside the union of their supports.
"""
import itertools
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import networkx as nx

from src.algebra.boolean import BooleanSet, all_sets
from src.algebra.dynamics import BdsSpec
from src.algebra.stone_dual import dual_graph
from src.ideals.condition_k import decide_k_direct
from src.ideals.tails import HsIdeal, MaximalTail, check_size, enumerate_hs_ideals, enumerate_maximal_tails, \
    is_maximal_tail, saturation_closure
from src.utils.errors import DisagreementError, ValidationError

COMPLETE_LATTICE = 'complete ideal lattice of C*(B,L,theta)'
GAUGE_INVARIANT_ONLY = 'gauge-invariant ideals only'


@dataclass
class TailSpace:
    spec: BdsSpec
    tails: list
    closure_table: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.tails)

    def basis_set(self, a: BooleanSet) -> frozenset:
        """ U_A, the tails containing A """
        return frozenset(i for i, tail in enumerate(self.tails) if a in tail)

    def basis(self) -> dict:
        """ A -> U_A for every element A """
        return {a: self.basis_set(a) for a in _all_elements(self.spec)}

    def basis_witness(self, a1: BooleanSet, a2: BooleanSet, t: int) -> BooleanSet:
        """ C with T in U_C and U_C inside U_A1 n U_A2, from a common ancestor in W_T """
        tail = self.tails[t]
        if a1 not in tail or a2 not in tail:
            raise ValidationError(f'Tail {t} is not in U_A1 n U_A2')
        graph = dual_graph(self.spec).graph
        w1 = min((a1 & tail.support).members)
        w2 = min((a2 & tail.support).members)
        common = (nx.ancestors(graph, w1) | {w1}) & (nx.ancestors(graph, w2) | {w2}) & tail.support.members
        return BooleanSet.of(self.spec.size, [min(common)])


def _all_elements(spec: BdsSpec):
    return all_sets(spec.size)


def _verify_basis(space: TailSpace):
    """ U_A is a union of U_{u}, so checking atom pairs covers every pair of elements """
    atoms = [BooleanSet.of(space.spec.size, [u]) for u in range(space.spec.size)]
    for a1, a2 in itertools.combinations_with_replacement(atoms, 2):
        both = space.basis_set(a1) & space.basis_set(a2)
        for t in both:
            c = space.basis_witness(a1, a2, t)
            u_c = space.basis_set(c)
            if t not in u_c or not u_c <= both:
                raise DisagreementError(f'Basis witness {space.spec.render(c)} fails for tail {t}')


def build_tail_space(spec: BdsSpec) -> TailSpace:
    space = TailSpace(spec, enumerate_maximal_tails(spec))
    _verify_basis(space)
    return space


def closure_of(space: TailSpace, s) -> frozenset:
    s = frozenset(s)
    bad = [i for i in s if not 0 <= i < len(space)]
    if bad:
        raise ValidationError(f'Tail indices {sorted(bad)} UNKNOWN')
    if s not in space.closure_table:
        union = BooleanSet.empty(space.spec.size)
        for i in s:
            union = union | space.tails[i].support
        space.closure_table[s] = frozenset(i for i, tail in enumerate(space.tails) if tail.support <= union)
    return space.closure_table[s]


def specialization_order(space: TailSpace) -> frozenset:
    """ pairs (t, s) with T in the closure of {S} """
    return frozenset((t, s) for s in range(len(space)) for t in closure_of(space, {s}))


LATTICE_PAIR_CHECK_LIMIT = 256


@dataclass
class IdealLattice:
    spec: BdsSpec
    elements: list  # HsIdeals, canonical order
    covers: list    # (i, j): H_i covered by H_j
    prime_flags: list
    label: str
    positions: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.positions = {ideal.atom_set: i for i, ideal in enumerate(self.elements)}

    def index(self, h: BooleanSet) -> int:
        try:
            return self.positions[h]
        except KeyError:
            raise ValidationError(f'{self.spec.render(h)} is not a hereditary saturated ideal') from None

    def meet(self, i: int, j: int) -> int:
        return self.index(self.elements[i].atom_set & self.elements[j].atom_set)

    def join(self, i: int, j: int) -> int:
        return self.index(saturation_closure(self.spec, self.elements[i].atom_set | self.elements[j].atom_set).atom_set)

    def check_pairs(self) -> list:
        """ every pair up to LATTICE_PAIR_CHECK_LIMIT elements, else the pairs of upper covers of one element """
        if len(self.elements) <= LATTICE_PAIR_CHECK_LIMIT:
            return list(itertools.combinations(range(len(self.elements)), 2))
        upper = {}
        for i, j in self.covers:
            upper.setdefault(i, []).append(j)
        return [pair for js in upper.values() for pair in itertools.combinations(js, 2)]

    def is_lattice(self) -> bool:
        bounds = (BooleanSet.empty(self.spec.size), BooleanSet.unit(self.spec.size))
        if any(h not in self.positions for h in bounds):
            return False
        try:
            for i, j in self.check_pairs():
                self.meet(i, j)
                self.join(i, j)
        except ValidationError:
            return False
        return True


def _covers(spec: BdsSpec, elements: list) -> list:
    """ the upper covers of H are the minimal closures of H + {u}, u outside H """
    positions = {ideal.atom_set: i for i, ideal in enumerate(elements)}
    covers = []
    for i, ideal in enumerate(elements):
        grown = {saturation_closure(spec, ideal.atom_set | BooleanSet.of(spec.size, [u])).atom_set
                 for u in range(spec.size) if u not in ideal.atom_set}
        for h in grown:
            if not any(g < h for g in grown):
                if h not in positions:
                    raise DisagreementError(f'{spec.render(h)} is missing from the hereditary saturated ideals')
                covers.append((i, positions[h]))
    return sorted(covers)


def ideal_lattice(spec: BdsSpec) -> IdealLattice:
    check_size(spec)
    elements = enumerate_hs_ideals(spec)
    covers = _covers(spec, elements)
    primes = [ideal.proper and is_maximal_tail(spec, ideal.atom_set.complement()) for ideal in elements]
    label = COMPLETE_LATTICE if decide_k_direct(spec).satisfied else GAUGE_INVARIANT_ONLY
    return IdealLattice(spec, elements, covers, primes, label)


class PrimEntry(NamedTuple):
    tail: MaximalTail
    ideal: HsIdeal


@dataclass(frozen=True)
class PrimReport:
    entries: tuple
    order_check: bool
    condition_k: bool
    warning: Optional[str] = None


def prim_report(spec: BdsSpec) -> PrimReport:
    space = build_tail_space(spec)
    lattice = ideal_lattice(spec)
    condition_k = lattice.label == COMPLETE_LATTICE
    warning = None
    if not condition_k:
        warning = 'Condition (K) fails: maximal tails only describe the gauge-invariant primitive ideals'
        warnings.warn(warning)

    entries = []
    for tail in space.tails:
        i = lattice.index(tail.complement)
        if not lattice.prime_flags[i]:
            raise DisagreementError(f'Complement of tail {spec.render(tail.support)} is not flagged prime')
        entries.append(PrimEntry(tail, lattice.elements[i]))
    if len(entries) != sum(lattice.prime_flags):
        raise DisagreementError('Prime ideals and maximal tails are not in bijection')

    order_check = all(
        (t in closure_of(space, {s})) == (entries[s].ideal.atom_set <= entries[t].ideal.atom_set)
        for s, t in itertools.product(range(len(space)), repeat=2))
    return PrimReport(tuple(entries), order_check, condition_k, warning)


def _dot(name: str, nodes: list, edges: list, shapes: dict = None) -> str:
    shapes = shapes or {}
    lines = [f'digraph {name} {{', '\trankdir = BT;']
    for i, node in enumerate(nodes):
        shape = f', shape = {shapes[i]}' if i in shapes else ''
        lines.append(f'\t"{node}" [label="{node}"{shape}];')
    for i, j in edges:
        lines.append(f'\t"{nodes[i]}" -> "{nodes[j]}";')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def tail_space_dot(space: TailSpace) -> str:
    """ edge S -> T when T is in the closure of {S}, transitively reduced """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(space)))
    graph.add_edges_from((s, t) for t, s in specialization_order(space) if s != t)
    edges = sorted(nx.transitive_reduction(graph).edges)
    nodes = [f'W={space.spec.render(tail.support)}' for tail in space.tails]
    return _dot('tails', nodes, edges, {i: 'doublecircle' for i, tail in enumerate(space.tails) if tail.cyclic})


def lattice_dot(lattice: IdealLattice) -> str:
    nodes = [f'H={lattice.spec.render(ideal.atom_set)}' for ideal in lattice.elements]
    return _dot('ideals', nodes, lattice.covers, {i: 'box' for i, prime in enumerate(lattice.prime_flags) if prime})


def write_dot(text: str, path: str):
    with open(path, 'w') as f:
        f.write(text)
