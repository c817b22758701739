"""
Boolean dynamical systems built from finite directed graphs.

Edges follow the s/r convention: an edge e goes from s(e) to r(e).

vertex construction   atoms are vertices, theta_e(A) = {r(e)} if s(e) in A,
                      so dual_map(e) sends r(e) to s(e)
boundary construction atoms are boundary paths, dual_map(e)(x) = ex

The boundary path space of a finite graph is finite exactly when no cycle has
an exit. Then every cycle vertex has a single out-edge, the vertices off the
cycles form a DAG, and a boundary path is a stem through that DAG ending
either at a sink or on a cycle it follows forever.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional

import networkx as nx

from src.algebra.dynamics import BdsSpec
from src.utils.errors import DisagreementError, InfiniteBoundaryError, ValidationError

INFINITY = '^∞'


class Edge(NamedTuple):
    name: str
    source: str
    range: str


@dataclass(frozen=True)
class GraphSpec:
    vertices: tuple
    edges: tuple  # of Edge

    def __post_init__(self):
        if not self.vertices:
            raise ValidationError('A graph needs at least one vertex')
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError(f'Duplicate vertex ids in {list(self.vertices)}')
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise ValidationError(f'Duplicate edge names in {names}')
        declared = set(self.vertices)
        for e in self.edges:
            for end in (e.source, e.range):
                if end not in declared:
                    raise ValidationError(f'Edge "{e.name}" endpoint "{end}" UNKNOWN')

    @classmethod
    def of(cls, vertices, edges) -> 'GraphSpec':
        """ GraphSpec.of('uv', [('e', 'u', 'v')]) """
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            graph.add_edge(e.source, e.range, key=e.name)
        return graph

    @cached_property
    def edge(self) -> dict:
        return {e.name: e for e in self.edges}

    def out_edges(self, v: str) -> list:
        return [e for e in self.edges if e.source == v]

    @cached_property
    def components(self) -> dict:
        found = {}
        for component in nx.strongly_connected_components(self.graph):
            for v in component:
                found[v] = frozenset(component)
        return found

    def on_cycle(self, v: str) -> bool:
        return len(self.components[v]) > 1 or self.graph.has_edge(v, v)


def vertex_construction(e_graph: GraphSpec) -> BdsSpec:
    maps = {e.name: {e.range: e.source} for e in e_graph.edges}
    return BdsSpec.from_maps(e_graph.vertices, [e.name for e in e_graph.edges], maps)


def shortest_closed_path(e_graph: GraphSpec, v: str) -> Optional[tuple]:
    """ edge names of a shortest closed path based at v """
    component = e_graph.components[v]
    best = None
    for first in e_graph.out_edges(v):
        if first.range not in component:
            continue
        nodes = nx.shortest_path(e_graph.graph, first.range, v)
        path = (first.name,) + tuple(
            next(e.name for e in e_graph.out_edges(a) if e.range == b) for a, b in zip(nodes, nodes[1:]))
        if best is None or len(path) < len(best):
            best = path
    return best


def graph_condition_k(e_graph: GraphSpec) -> bool:
    """ False iff some vertex has all of its closed paths equal to powers of one path """
    for v in e_graph.vertices:
        if not e_graph.on_cycle(v):
            continue
        cycle = shortest_closed_path(e_graph, v)
        component = e_graph.components[v]
        single = True
        seen = {(v, 0)}
        stack = [(v, 0)]
        while stack and single:
            w, phase = stack.pop()
            for e in e_graph.out_edges(w):
                if e.range not in component:
                    continue
                state = (e.range, (phase + 1) % len(cycle))
                if e.name != cycle[phase] or (e.range == v and state[1] != 0):
                    single = False
                    break
                if state not in seen:
                    seen.add(state)
                    stack.append(state)
        if single:
            return False
    return True


@dataclass(frozen=True)
class BoundaryPath:
    start: str      # s(x)
    stem: tuple     # edge names, the whole path when finite
    cycle: tuple = ()  # edge names repeated forever, empty when finite

    @property
    def kind(self) -> str:
        return 'eventually-cyclic-infinite' if self.cycle else 'finite-to-singular'

    @property
    def finite(self) -> bool:
        return not self.cycle

    @property
    def id(self) -> str:
        if self.finite:
            return '.'.join(self.stem) if self.stem else self.start
        loop = self.cycle[0] if len(self.cycle) == 1 else f'({".".join(self.cycle)})'
        return '.'.join(self.stem + (loop + INFINITY,))


def _rotation(e_graph: GraphSpec, v: str) -> tuple:
    """ the cycle through v read from v, every cycle vertex having one out-edge """
    path = []
    w = v
    while True:
        (e,) = e_graph.out_edges(w)
        path.append(e.name)
        w = e.range
        if w == v:
            return tuple(path)


def _check_exit_free(e_graph: GraphSpec):
    for v in e_graph.vertices:
        if e_graph.on_cycle(v) and len(e_graph.out_edges(v)) > 1:
            cycle = shortest_closed_path(e_graph, v)
            exit_edge = next(e.name for e in e_graph.out_edges(v) if e.name != cycle[0])
            raise InfiniteBoundaryError(cycle, exit_edge)


def boundary_path_count(e_graph: GraphSpec) -> int:
    """ exact number of boundary paths, counted over the stem DAG """
    counts = {}
    for v in reversed(list(nx.topological_sort(_stem_dag(e_graph)))):
        if e_graph.on_cycle(v) or not e_graph.out_edges(v):
            counts[v] = 1
        else:
            counts[v] = sum(counts[e.range] for e in e_graph.out_edges(v))
    return sum(counts.values())


def _stem_dag(e_graph: GraphSpec) -> nx.DiGraph:
    dag = nx.DiGraph()
    dag.add_nodes_from(e_graph.vertices)
    dag.add_edges_from((e.source, e.range) for e in e_graph.edges if not e_graph.on_cycle(e.source))
    return dag


def boundary_paths(e_graph: GraphSpec) -> list:
    _check_exit_free(e_graph)
    budget = boundary_path_count(e_graph)
    paths = []

    def extend(start, v, stem):
        if len(paths) > budget:
            raise DisagreementError(f'Boundary enumeration passed its budget of {budget} paths')
        if e_graph.on_cycle(v):
            paths.append(BoundaryPath(start, stem, _rotation(e_graph, v)))
        elif not e_graph.out_edges(v):
            paths.append(BoundaryPath(start, stem))
        else:
            for e in e_graph.out_edges(v):
                extend(start, e.range, stem + (e.name,))

    for v in e_graph.vertices:
        extend(v, v, ())
    if len(paths) != budget:
        raise DisagreementError(f'Enumerated {len(paths)} boundary paths, counted {budget}')
    return sorted(paths, key=lambda x: (len(x.stem), x.id))


def prepend(e_graph: GraphSpec, e: Edge, x: BoundaryPath) -> BoundaryPath:
    """ ex, for r(e) = s(x) """
    if x.cycle and not x.stem and e_graph.on_cycle(e.source):
        return BoundaryPath(e.source, (), (e.name,) + x.cycle[:-1])
    return BoundaryPath(e.source, (e.name,) + x.stem, x.cycle)


def boundary_construction(e_graph: GraphSpec) -> BdsSpec:
    paths = boundary_paths(e_graph)
    ids = [x.id for x in paths]
    maps = {}
    for e in e_graph.edges:
        mapping = {}
        for x in paths:
            if x.start == e.range:
                ex = prepend(e_graph, e, x)
                if ex.id not in ids:
                    raise DisagreementError(f'{e.name}.{x.id} is missing from the boundary paths')
                mapping[x.id] = ex.id
        maps[e.name] = mapping
    return BdsSpec.from_maps(ids, [e.name for e in e_graph.edges], maps)
