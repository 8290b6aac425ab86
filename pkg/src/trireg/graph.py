"""Immutable simple graphs on vertices ``0..n-1`` with bit-packed adjacency rows.

Each row is a Python ``int`` whose bit ``u`` is set iff the vertex is adjacent
to ``u``; common neighbourhoods are a single ``&`` plus ``bit_count``.
"""

from __future__ import annotations

from collections import Counter, deque
from typing import Iterable, Iterator, NamedTuple

from trireg.errors import (
    EmptyFactor,
    EmptyGraph,
    InvalidEdge,
    NotAnEdge,
    TooManyVertices,
    VertexOutOfRange,
)

MAX_VERTICES = 1024


class Parameters(NamedTuple):
    """Common vertex degree ``r2`` and common triangle degree ``r3``."""

    r2: int
    r3: int

    def __add__(self, other):  # componentwise, as for Cartesian products
        return Parameters(self.r2 + other[0], self.r3 + other[1])


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """A finite simple undirected graph. Instances are never mutated."""

    __slots__ = ("_n", "_rows")

    def __init__(self, n: int, rows: Iterable[int]):
        rows = tuple(rows)
        if n < 0 or len(rows) != n:
            raise ValueError("row count must equal n")
        if n > MAX_VERTICES:
            raise TooManyVertices(f"n={n} exceeds the supported {MAX_VERTICES} vertices")
        full = (1 << n) - 1
        for v, row in enumerate(rows):
            if row & ~full or row < 0:
                raise VertexOutOfRange(f"row {v} references a vertex >= {n}")
            if row >> v & 1:
                raise InvalidEdge(f"self-loop at vertex {v}")
        for v, row in enumerate(rows):
            for u in iter_bits(row):
                if not rows[u] >> v & 1:
                    raise ValueError(f"adjacency is not symmetric at {u},{v}")
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_rows", rows)

    @classmethod
    def _trusted(cls, n: int, rows) -> "Graph":
        # skips validation; callers guarantee symmetry and no loops
        g = object.__new__(cls)
        object.__setattr__(g, "_n", n)
        object.__setattr__(g, "_rows", tuple(rows))
        return g

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @property
    def n(self) -> int:
        return self._n

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._n, self._rows))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.edge_count()})"

    def _check(self, v: int) -> None:
        if not 0 <= v < self._n:
            raise VertexOutOfRange(f"vertex {v} not in 0..{self._n - 1}")

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return bool(self._rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        self._check(v)
        return list(iter_bits(self._rows[v]))

    def degree(self, v: int) -> int:
        self._check(v)
        return self._rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self._rows]

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self._rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        out = []
        for u, row in enumerate(self._rows):
            for v in iter_bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def relabel(self, perm) -> "Graph":
        """Graph in which old vertex ``v`` becomes ``perm[v]``."""
        if sorted(perm) != list(range(self._n)):
            raise ValueError("perm is not a permutation of the vertices")
        rows = [0] * self._n
        for v, row in enumerate(self._rows):
            mask = 0
            for u in iter_bits(row):
                mask |= 1 << perm[u]
            rows[perm[v]] = mask
        return Graph._trusted(self._n, rows)

    def complement(self) -> "Graph":
        full = (1 << self._n) - 1
        return Graph._trusted(self._n, ((~row & full) ^ (1 << v) for v, row in enumerate(self._rows)))


def from_edge_list(n: int, edges) -> Graph:
    """Build a graph from unordered pairs; duplicates collapse to one edge."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_VERTICES:
        raise TooManyVertices(f"n={n} exceeds the supported {MAX_VERTICES} vertices")
    rows = [0] * n
    for edge in edges:
        ends = tuple(edge)
        if len(ends) == 1:  # a set literal such as {0, 0}
            ends = ends * 2
        if len(ends) != 2:
            raise InvalidEdge(f"not a vertex pair: {edge!r}")
        u, v = ends
        for w in (u, v):
            if not 0 <= w < n:
                raise VertexOutOfRange(f"vertex {w} not in 0..{n - 1}")
        if u == v:
            raise InvalidEdge(f"self-loop at vertex {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph._trusted(n, rows)


def triangle_degree_edge(G: Graph, u: int, v: int) -> int:
    if not G.has_edge(u, v):
        raise NotAnEdge(f"{u}{v} is not an edge")
    return (G.rows[u] & G.rows[v]).bit_count()


def triangle_degree_vertex(G: Graph, v: int) -> int:
    G._check(v)
    rows = G.rows
    row = rows[v]
    total = sum((rows[u] & row).bit_count() for u in iter_bits(row))
    return total // 2


def triangle_degrees(G: Graph) -> list[int]:
    return [triangle_degree_vertex(G, v) for v in range(G.n)]


def regularity_parameters(G: Graph) -> Parameters | None:
    """``(r2, r3)`` if every vertex shares degree and triangle degree, else ``None``."""
    if G.n == 0:
        raise EmptyGraph("regularity is undefined for the empty graph")
    degs = G.degrees()
    if any(d != degs[0] for d in degs):
        return None
    tris = triangle_degrees(G)
    if any(t != tris[0] for t in tris):
        return None
    return Parameters(degs[0], tris[0])


def cartesian_product(G: Graph, H: Graph) -> Graph:
    """G □ H with vertex ``(u, v)`` stored at index ``u * H.n + v``."""
    if G.n == 0 or H.n == 0:
        raise EmptyFactor("Cartesian product needs two non-empty factors")
    m = H.n
    n = G.n * m
    if n > MAX_VERTICES:
        raise TooManyVertices(f"product has {n} vertices (cap {MAX_VERTICES})")
    rows = []
    for u in range(G.n):
        # copies of H along the row block of u, one G-edge per other row block
        for v in range(m):
            mask = H.rows[v] << (u * m)
            for w in iter_bits(G.rows[u]):
                mask |= 1 << (w * m + v)
            rows.append(mask)
    return Graph._trusted(n, rows)


def disjoint_union(G: Graph, H: Graph) -> Graph:
    shift = G.n
    rows = list(G.rows) + [row << shift for row in H.rows]
    return Graph._trusted(G.n + H.n, rows)


def is_connected(G: Graph) -> bool:
    if G.n == 0:
        raise EmptyGraph("connectivity is undefined for the empty graph")
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= G.rows[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << G.n) - 1


def components(G: Graph) -> list[list[int]]:
    left = (1 << G.n) - 1
    out = []
    while left:
        start = (left & -left).bit_length() - 1
        seen = 1 << start
        queue = deque([start])
        while queue:
            v = queue.popleft()
            new = G.rows[v] & ~seen
            seen |= new
            queue.extend(iter_bits(new))
        out.append(list(iter_bits(seen)))
        left &= ~seen
    return out


def _refined_colors(graphs: list[Graph]) -> list[list[int]]:
    """Colour refinement run jointly so colour ids are comparable across graphs."""
    colors = []
    for G in graphs:
        tris = triangle_degrees(G)
        colors.append([(G.rows[v].bit_count(), tris[v]) for v in range(G.n)])
    palette = {sig: i for i, sig in enumerate(sorted({c for cs in colors for c in cs}))}
    colors = [[palette[c] for c in cs] for cs in colors]
    classes = len(palette)
    while True:
        sigs = [
            [(cs[v], tuple(sorted(cs[u] for u in iter_bits(G.rows[v])))) for v in range(G.n)]
            for G, cs in zip(graphs, colors)
        ]
        palette = {sig: i for i, sig in enumerate(sorted({s for ss in sigs for s in ss}))}
        colors = [[palette[s] for s in ss] for ss in sigs]
        if len(palette) == classes:
            return colors
        classes = len(palette)


def are_isomorphic(G: Graph, H: Graph) -> bool:
    """Isomorphism test by joint colour refinement followed by backtracking."""
    if G.n != H.n or G.edge_count() != H.edge_count():
        return False
    if G.n == 0:
        return True
    cg, ch = _refined_colors([G, H])
    if Counter(cg) != Counter(ch):
        return False

    # smallest colour classes first, then grow along edges so adjacency
    # constraints bite early
    class_size = Counter(cg)
    order: list[int] = []
    placed = 0
    while len(order) < G.n:
        frontier = 0
        for v in order:
            frontier |= G.rows[v]
        frontier &= ~placed
        pool = list(iter_bits(frontier)) or [v for v in range(G.n) if not placed >> v & 1]
        v = min(pool, key=lambda x: (class_size[cg[x]], x))
        order.append(v)
        placed |= 1 << v

    by_color: dict[int, list[int]] = {}
    for h, c in enumerate(ch):
        by_color.setdefault(c, []).append(h)

    image = [-1] * G.n
    used = [False] * H.n

    def extend(i: int) -> bool:
        if i == G.n:
            return True
        g = order[i]
        for h in by_color[cg[g]]:
            if used[h]:
                continue
            ok = True
            for j in range(i):
                g2 = order[j]
                if (G.rows[g] >> g2 & 1) != (H.rows[h] >> image[g2] & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[g] = h
            used[h] = True
            if extend(i + 1):
                return True
            used[h] = False
        image[g] = -1
        return False

    return extend(0)
