"""Isomorph-free generation of regular graphs at desk scale.

Graphs are grown one vertex at a time.  A partial graph on ``m`` vertices is
kept only if it could still be an induced subgraph of an r2-regular graph on
``n`` vertices (degree window, deficit and parity checks).  Isomorph rejection
is canonical augmentation: a child is accepted only when its newest vertex
lies in the automorphism orbit of the child's canonical deletion vertex, and
children of one parent are deduplicated by canonical code.

The canonical code of a graph is its row-major upper-triangle adjacency bit
string, minimised over the labellings reached by partition refinement and
individualisation (with automorphism pruning).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterator

from trireg.errors import DeskScaleExceeded
from trireg.graph import (
    Graph,
    are_isomorphic,
    is_connected,
    iter_bits,
    regularity_parameters,
)
from trireg.search import _check_degree_sequence

DESK_SCALE_CAP = 12
HARD_CAP = 14


# -- canonical labelling ------------------------------------------------------


def _refine(cells: list[list[int]], rows) -> list[list[int]]:
    """Coarsest equitable refinement; split cells are ordered by signature."""
    while True:
        masks = []
        for cell in cells:
            mask = 0
            for v in cell:
                mask |= 1 << v
            masks.append(mask)
        out = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                row = rows[v]
                groups.setdefault(tuple((row & m).bit_count() for m in masks), []).append(v)
            if len(groups) == 1:
                out.append(cell)
            else:
                changed = True
                out.extend(groups[sig] for sig in sorted(groups))
        cells = out
        if not changed:
            return cells


def code_of(rows, order) -> int:
    """Row-major upper-triangle bit string of the graph relabelled by ``order``.

    ``order[i]`` is the vertex placed at position ``i``; the pair (0, 1) is
    the most significant bit.
    """
    n = len(order)
    code = 0
    for i in range(n):
        row = rows[order[i]]
        for j in range(i + 1, n):
            code = code << 1 | (row >> order[j] & 1)
    return code


def _orbit_roots(n: int, generators) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for v in range(n):
            a, b = find(v), find(g[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def canonical_labeling(rows, n: int, cells: list[list[int]] | None = None) -> tuple[int, list[int]]:
    """Return ``(code, order)`` where ``order[i]`` is the vertex at canonical position ``i``.

    ``cells`` is an optional ordered initial partition (vertex colouring).
    """
    if n == 0:
        return 0, []
    start = [sorted(c) for c in cells] if cells is not None else [list(range(n))]
    best_code = None
    best_order: list[int] = []
    automorphisms: list[list[int]] = []

    def visit(cells, path):
        nonlocal best_code, best_order
        cells = _refine(cells, rows)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            code = code_of(rows, order)
            if best_code is None or code < best_code:
                best_code, best_order = code, order
            elif code == best_code:
                gamma = [0] * n
                for pos, v in enumerate(order):
                    gamma[v] = best_order[pos]
                automorphisms.append(gamma)
            return
        explored: list[int] = []
        for v in cells[target]:
            if explored:
                fixing = [g for g in automorphisms if all(g[p] == p for p in path)]
                if fixing:
                    roots = _orbit_roots(n, fixing)
                    if any(roots[v] == roots[u] for u in explored):
                        continue
            rest = [u for u in cells[target] if u != v]
            visit(cells[:target] + [[v], rest] + cells[target + 1 :], path + [v])
            explored.append(v)

    visit(start, [])
    return best_code, best_order


def canonical_code(G: Graph) -> int:
    return canonical_labeling(G.rows, G.n)[0]


def canonical_form(G: Graph) -> Graph:
    _, order = canonical_labeling(G.rows, G.n)
    perm = [0] * G.n
    for pos, v in enumerate(order):
        perm[v] = pos
    return G.relabel(perm)


# -- generation ---------------------------------------------------------------


@dataclass(frozen=True)
class EnumSpec:
    n: int
    r2: int
    connected_only: bool = False
    filter_r3: int | None = None
    allow_large: bool = False

    def __post_init__(self):
        _check_degree_sequence(self.n, self.r2)
        if self.n > HARD_CAP:
            raise DeskScaleExceeded(f"n={self.n} is beyond the hard limit of {HARD_CAP}")
        if self.n > DESK_SCALE_CAP:
            if not self.allow_large:
                raise DeskScaleExceeded(
                    f"n={self.n} exceeds the desk-scale cap of {DESK_SCALE_CAP}; pass allow_large to override"
                )
            warnings.warn(f"enumerating n={self.n} > {DESK_SCALE_CAP}; this may take very long", stacklevel=2)


def _completable(degs: list[int], n: int, r: int) -> bool:
    """Necessary conditions for extending to an r-regular graph on n vertices."""
    m = len(degs)
    k = n - m
    deficit = 0
    for d in degs:
        if d > r or d < r - k:
            return False
        deficit += r - d
    # the k missing vertices supply k*r endpoints: deficit + 2*(edges among them)
    if deficit > k * r or deficit < k * r - k * (k - 1):
        return False
    return (k * r - deficit) % 2 == 0


def _invariant(rows, degs, v):
    row = rows[v]
    tri = 0
    nsum = 0
    for u in iter_bits(row):
        nsum += degs[u]
        tri += (rows[u] & row).bit_count()
    return (degs[v], nsum, tri)


def _accept(rows, degs, m: int):
    """Canonical-augmentation test for the child whose newest vertex is ``m``.

    Returns the child's canonical code when accepted, else ``None``.
    """
    n = m + 1
    inv = [_invariant(rows, degs, v) for v in range(n)]
    top = max(inv)
    if inv[m] != top:
        return None
    tied = [v for v in range(n) if inv[v] == top]
    code, order = canonical_labeling(rows, n)
    if len(tied) == 1:
        return code
    position = {v: i for i, v in enumerate(order)}
    w = min(tied, key=position.__getitem__)
    if w == m:
        return code
    others = [v for v in range(n) if v != w]
    code_w, _ = canonical_labeling(rows, n, [[w], others])
    others = [v for v in range(n) if v != m]
    code_m, _ = canonical_labeling(rows, n, [[m], others])
    return code if code_w == code_m else None


def _children(rows, n_target: int, r: int):
    """Yield ``(child_rows, child_degs)`` for every admissible neighbour set."""
    m = len(rows)
    degs = [row.bit_count() for row in rows]
    lower_next = r - (n_target - m - 1)  # degree floor once the child exists
    forced = [v for v in range(m) if degs[v] < lower_next]
    if any(degs[v] + 1 < lower_next for v in forced):
        return
    optional = [v for v in range(m) if lower_next <= degs[v] < r]
    lo = max(lower_next, 0) - len(forced)
    hi = r - len(forced)
    if hi < 0:
        return
    forced_mask = 0
    for v in forced:
        forced_mask |= 1 << v

    def subsets(i, size_left_min, size_left_max, acc):
        if size_left_max < 0:
            return
        if i == len(optional):
            if size_left_min <= 0:
                yield acc
            return
        if len(optional) - i < size_left_min:
            return
        yield from subsets(i + 1, size_left_min - 1, size_left_max - 1, acc | 1 << optional[i])
        yield from subsets(i + 1, size_left_min, size_left_max, acc)

    for extra in subsets(0, lo, hi, 0):
        mask = forced_mask | extra
        child = list(rows)
        for v in iter_bits(mask):
            child[v] |= 1 << m
        child.append(mask)
        child_degs = degs[:]
        for v in iter_bits(mask):
            child_degs[v] += 1
        child_degs.append(mask.bit_count())
        if _completable(child_degs, n_target, r):
            yield child, child_degs


def _generate(n: int, r: int) -> Iterator[Graph]:
    def grow(rows):
        m = len(rows)
        if m == n:
            yield Graph._trusted(n, rows)
            return
        seen = set()
        for child, degs in _children(rows, n, r):
            code = _accept(child, degs, m)
            if code is None or code in seen:
                continue
            seen.add(code)
            yield from grow(child)

    yield from grow([])


def _canonical_graph(G: Graph) -> tuple[int, Graph]:
    code, order = canonical_labeling(G.rows, G.n)
    perm = [0] * G.n
    for pos, v in enumerate(order):
        perm[v] = pos
    return code, G.relabel(perm)


def enumerate_regular(spec: EnumSpec) -> Iterator[Graph]:
    """One canonical representative per isomorphism class, ordered by canonical code.

    Degrees above ``(n - 1) / 2`` are enumerated through complements.
    """
    n, r = spec.n, spec.r2
    complement = 2 * r > n - 1
    base = n - 1 - r if complement else r
    reps = []
    for G in _generate(n, base):
        if complement:
            G = G.complement()
        reps.append(_canonical_graph(G))
    reps.sort(key=lambda t: t[0])
    for _, G in reps:
        if spec.connected_only and not is_connected(G):
            continue
        if spec.filter_r3 is not None and regularity_parameters(G) != (r, spec.filter_r3):
            continue
        yield G


def find_with_parameters(n: int, r2: int, r3: int, connected_only: bool = False,
                         allow_large: bool = False) -> list[Graph]:
    spec = EnumSpec(n, r2, connected_only=connected_only, filter_r3=r3, allow_large=allow_large)
    return list(enumerate_regular(spec))


@dataclass
class UniquenessReport:
    holds: bool
    checked_orders: list
    offending: list  # (n, Graph) pairs

    def __bool__(self):
        return self.holds


def verify_turan_uniqueness(m: int, n_max: int) -> UniquenessReport:
    """Check that Turan(2m+2, m+1) is the only connected graph with
    parameters ``(2m, 4*C(m, 2))`` on at most ``n_max`` vertices.

    Evidence up to ``n_max`` only; says nothing about larger orders.
    """
    from trireg.constructions import turan

    if m < 2:
        raise ValueError("the characterisation needs m >= 2")
    if n_max > DESK_SCALE_CAP:
        raise DeskScaleExceeded(f"n_max={n_max} exceeds the desk-scale cap of {DESK_SCALE_CAP}")
    r2 = 2 * m
    r3 = 2 * m * (m - 1)
    reference = turan(2 * m + 2, m + 1)
    checked = []
    offending = []
    seen_reference = False
    for n in range(r2 + 1, n_max + 1):
        if n * r2 % 2:
            continue
        checked.append(n)
        for G in find_with_parameters(n, r2, r3, connected_only=True):
            if are_isomorphic(G, reference):
                seen_reference = True
            else:
                offending.append((n, G))
    holds = not offending and (seen_reference or n_max < reference.n)
    return UniquenessReport(holds=holds, checked_orders=checked, offending=offending)
