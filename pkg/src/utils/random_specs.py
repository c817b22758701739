"""
Seeded generators of random systems and graphs.

Every generator takes a numpy Generator; suites sharded over processes derive
one Generator per shard from SeedSequence(seed).spawn(n), so a shard can be
replayed alone.
"""
import itertools
import string

import numpy as np

from src.algebra.dynamics import BdsSpec
from src.graphs.adapter import Edge, GraphSpec

ATOM_NAMES = 'xyzwvu' + string.ascii_lowercase[:20]
LABEL_NAMES = 'abcdefgh'


def atom_ids(n: int) -> tuple:
    return tuple(ATOM_NAMES[:n]) if n <= len(ATOM_NAMES) else tuple(f'x{i}' for i in range(n))


def spawn_rngs(seed: int, shards: int) -> list:
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(shards)]


def random_spec(rng: np.random.Generator, max_atoms: int = 6, max_labels: int = 3, density: float = None) -> BdsSpec:
    """ A random system with partial dual maps; density is the chance an atom has an image """
    n = int(rng.integers(1, max_atoms + 1))
    k = int(rng.integers(1, max_labels + 1))
    density = float(rng.uniform(0.3, 1.0)) if density is None else density
    dual_maps = []
    for _ in range(k):
        defined = rng.random(n) < density
        targets = rng.integers(0, n, size=n)
        dual_maps.append(tuple(int(t) if d else None for d, t in zip(defined, targets)))
    return BdsSpec(atom_ids(n), tuple(LABEL_NAMES[:k]), tuple(dual_maps))


def all_specs(max_atoms: int, max_labels: int):
    """ every system with up to max_atoms atoms and max_labels labels, each partial map once """
    for n in range(1, max_atoms + 1):
        partial_maps = list(itertools.product([None] + list(range(n)), repeat=n))
        for k in range(1, max_labels + 1):
            for dual_maps in itertools.product(partial_maps, repeat=k):
                yield BdsSpec(atom_ids(n), tuple(LABEL_NAMES[:k]), dual_maps)


def random_graph(rng: np.random.Generator, max_vertices: int = 6, max_edges: int = 10) -> GraphSpec:
    n = int(rng.integers(1, max_vertices + 1))
    m = int(rng.integers(1, max_edges + 1))
    vertices = tuple(f'v{i}' for i in range(n))
    ends = rng.integers(0, n, size=(m, 2))
    edges = tuple(Edge(f'e{i}', vertices[s], vertices[r]) for i, (s, r) in enumerate(ends))
    return GraphSpec(vertices, edges)


def random_exit_free_graph(rng: np.random.Generator, max_vertices: int = 5) -> GraphSpec:
    """ A graph whose cycles have no exits: disjoint simple cycles, plus a DAG
    of the remaining vertices feeding into them or into sinks """
    n = int(rng.integers(1, max_vertices + 1))
    vertices = [f'v{i}' for i in range(n)]
    order = [vertices[i] for i in rng.permutation(n)]
    cycle_count = int(rng.integers(0, n + 1))
    on_cycle, rest = order[:cycle_count], order[cycle_count:]

    edges = []
    i = 0
    while i < len(on_cycle):
        length = int(rng.integers(1, len(on_cycle) - i + 1))
        cycle = on_cycle[i:i + length]
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            edges.append((a, b))
        i += length
    for j, v in enumerate(rest):
        targets = rest[j + 1:] + on_cycle
        if not targets:
            continue
        for _ in range(int(rng.integers(0, 3))):
            edges.append((v, targets[int(rng.integers(0, len(targets)))]))

    if not edges:
        # a lone sink still needs a label for the boundary construction
        vertices.append(f'v{n}')
        edges.append((vertices[0], vertices[-1]))
    return GraphSpec(tuple(vertices), tuple(Edge(f'e{k}', s, r) for k, (s, r) in enumerate(edges)))
