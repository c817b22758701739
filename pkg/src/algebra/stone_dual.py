"""
Dual dynamics on ultrafilters.

Every ultrafilter is principal, so theta-hat_alpha acts on atoms through the
dual partial maps. The dual graph has an edge u -l-> v whenever
dual_map(l)(u) = v; a walk u -l1-> ... -lm-> u is read in consumption order,
which is the reverse of the word alpha with dual_step(alpha, u) = u.

SWAP2 trace: the walk x -a-> y -a-> x reads "aa", reversed "aa", and
dual_step(aa, x) = a(a(x)) = x.
"""
from functools import lru_cache
from typing import NamedTuple, Optional

import networkx as nx

from src.algebra.boolean import Atom, BooleanSet
from src.algebra.dynamics import BdsSpec, Word, check_word
from src.utils.errors import ValidationError


class DualGraph:
    def __init__(self, spec: BdsSpec):
        self.spec = spec
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(spec.size))
        for label, images in zip(spec.labels, spec.dual_maps):
            for u, v in enumerate(images):
                if v is not None:
                    graph.add_edge(u, v, key=label)
        self.graph = graph

        components = {}
        for component in nx.strongly_connected_components(graph):
            component = frozenset(component)
            for u in component:
                components[u] = component
        self._components = components

    def component(self, u: int) -> frozenset:
        return self._components[u]

    def out_edges(self, u: int):
        """ (label, target) pairs, label order """
        for label, images in zip(self.spec.labels, self.spec.dual_maps):
            if images[u] is not None:
                yield label, images[u]

    def reach(self, u: int) -> frozenset:
        return frozenset(nx.descendants(self.graph, u)) | {u}

    def edge_label(self, u: int, v: int) -> str:
        """ first label (in label order) of an edge u -> v """
        for label, target in self.out_edges(u):
            if target == v:
                return label
        raise KeyError((u, v))

    def shortest_return(self, u: int) -> Optional[tuple]:
        """ Labels of a shortest closed walk at u in consumption order, or None """
        component = self.component(u)
        best = None
        for label, v in self.out_edges(u):
            if v not in component:
                continue
            nodes = nx.shortest_path(self.graph, v, u)
            walk = (label,) + tuple(self.edge_label(a, b) for a, b in zip(nodes, nodes[1:]))
            if best is None or len(walk) < len(best):
                best = walk
        return best


@lru_cache(maxsize=256)
def dual_graph(spec: BdsSpec) -> DualGraph:
    return DualGraph(spec)


def _position(u) -> int:
    return u.index if isinstance(u, Atom) else u


def dual_step(spec: BdsSpec, alpha: Word, u) -> Optional[int]:
    u = _position(u)
    for l in reversed(check_word(spec, alpha)):
        u = spec.dual_maps[l][u]
        if u is None:
            return None
    return u


def is_ultrafilter_cycle(spec: BdsSpec, alpha: Word, u) -> bool:
    if not len(alpha):
        raise ValidationError('An ultrafilter cycle needs a nonempty word')
    return dual_step(spec, alpha, u) == _position(u)


def reach(spec: BdsSpec, u) -> BooleanSet:
    return BooleanSet.of(spec.size, dual_graph(spec).reach(_position(u)))


def primitive_root(word: Word) -> Word:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word.letters[:p] * (n // p) == word.letters:
            return word.prefix(p)
    return word


class ReturnVerdict(NamedTuple):
    atom: Atom
    has_return: bool
    single_power: Optional[Word]  # shortest return word, when every return is a power of it
    root: Optional[Word] = None


def return_language_single_power(spec: BdsSpec, u) -> ReturnVerdict:
    """ Decide whether every closed walk at u reads a power of one word.

    Product of SCC(u) with the cyclic automaton of a shortest return walk: from
    (u, 0) every transition inside the component must carry the expected letter,
    and entering u is only allowed at phase 0.
    """
    u = _position(u)
    atom = spec.atom_objects[u]
    graph = dual_graph(spec)
    walk = graph.shortest_return(u)
    if walk is None:
        return ReturnVerdict(atom, False, None)

    component = graph.component(u)
    period = len(walk)
    seen = {(u, 0)}
    stack = [(u, 0)]
    while stack:
        v, phase = stack.pop()
        for label, target in graph.out_edges(v):
            if target not in component:
                continue
            if label != walk[phase]:
                return ReturnVerdict(atom, True, None)
            state = (target, (phase + 1) % period)
            if target == u and state[1] != 0:
                return ReturnVerdict(atom, True, None)
            if state not in seen:
                seen.add(state)
                stack.append(state)

    word = Word(walk[::-1])
    return ReturnVerdict(atom, True, word, primitive_root(word))
