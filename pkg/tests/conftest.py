import random
from itertools import combinations

import pytest

from trireg.enumeration import EnumSpec, enumerate_regular
from trireg.graph import Graph, are_isomorphic, from_edge_list

# every (n, r2) with n <= 10 that admits an r2-regular graph
SMALL_ORDERS = [(n, r) for n in range(1, 11) for r in range(n) if n * r % 2 == 0]


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return from_edge_list(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def brute_triangles(G: Graph) -> list[int]:
    """Per-vertex triangle counts over all vertex triples."""
    counts = [0] * G.n
    for a, b, c in combinations(range(G.n), 3):
        if G.has_edge(a, b) and G.has_edge(b, c) and G.has_edge(a, c):
            counts[a] += 1
            counts[b] += 1
            counts[c] += 1
    return counts


def cycle(n: int) -> Graph:
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def labelled_regular(n: int, r: int):
    """Every labelled r-regular graph on n vertices, by plain backtracking."""
    rows = [0] * n

    def fill(v):
        if v == n:
            yield Graph(n, rows)
            return
        need = r - rows[v].bit_count()
        free = [u for u in range(v + 1, n) if rows[u].bit_count() < r]
        if need < 0 or need > len(free):
            return
        for chosen in combinations(free, need):
            for u in chosen:
                rows[v] |= 1 << u
                rows[u] |= 1 << v
            yield from fill(v + 1)
            for u in chosen:
                rows[v] &= ~(1 << u)
                rows[u] &= ~(1 << v)

    yield from fill(0)


def naive_classes(n: int, r: int) -> list[Graph]:
    reps: list[Graph] = []
    for G in labelled_regular(n, r):
        if not any(are_isomorphic(G, H) for H in reps):
            reps.append(G)
    return reps


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def regular_catalogue():
    """All regular graphs up to isomorphism for n <= 10, keyed by (n, r2)."""
    return {(n, r): list(enumerate_regular(EnumSpec(n, r))) for n, r in SMALL_ORDERS}
