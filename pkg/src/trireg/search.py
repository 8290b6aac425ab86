"""Seeded local search for graphs with prescribed parameters ``(r2, r3)``.

A restart draws an r2-regular start graph from the pairing model and then
hill-climbs with degree-preserving 2-switches, accepting a move whenever the
fitness does not drop.  Fitness is kept as an exact integer numerator over a
fixed common denominator, so "did not drop" and "equals 1" are exact.

RNG contract: restart ``i`` uses ``random.Random(seed + i)`` (MT19937 seeded
from the integer), and only ``randrange``/``shuffle`` are drawn from it.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb, lcm

from trireg.errors import DegreeTooLarge, EmptyGraph, GenerationFailed, ParityError
from trireg.graph import Graph, Parameters, iter_bits, regularity_parameters, triangle_degrees

SWITCH_ATTEMPTS = 64


def _as_rng(rng) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)


def _check_degree_sequence(n: int, r2: int) -> None:
    if n < 1:
        raise EmptyGraph("need at least one vertex")
    if r2 < 0:
        raise ValueError("degree must be non-negative")
    if r2 >= n:
        raise DegreeTooLarge(f"degree {r2} needs more than {n} vertices")
    if n * r2 % 2:
        raise ParityError(f"n * r2 = {n * r2} is odd")


PAIRING_ATTEMPTS = 2_000


def circulant_regular(n: int, r2: int) -> Graph:
    """Deterministic r2-regular graph: i ~ i +- 1..r2//2, plus i ~ i + n/2 when r2 is odd."""
    _check_degree_sequence(n, r2)
    rows = [0] * n
    for i in range(n):
        for k in range(1, r2 // 2 + 1):
            rows[i] |= 1 << (i + k) % n | 1 << (i - k) % n
        if r2 % 2:
            rows[i] |= 1 << (i + n // 2) % n
    return Graph._trusted(n, rows)


def random_regular(n: int, r2: int, rng=None, max_attempts: int = PAIRING_ATTEMPTS,
                   fallback: bool = True) -> Graph:
    """Simple r2-regular graph on n vertices via the pairing model.

    Stubs are shuffled and paired consecutively; any loop or repeated pair
    discards the whole pairing.  Dense requests (``r2 > (n - 1) / 2``) are
    generated as the complement of an ``(n - 1 - r2)``-regular graph, which
    keeps the rejection rate low.

    The pairing model succeeds with probability about ``exp(-(r2^2 - 1) / 4)``,
    so for moderate degrees it is abandoned after ``max_attempts`` pairings:
    with ``fallback`` a circulant graph is randomised by ``10 * m`` 2-switches
    from the same stream, otherwise :class:`GenerationFailed` is raised.
    """
    _check_degree_sequence(n, r2)
    rng = _as_rng(rng)
    if 2 * r2 > n - 1:
        return random_regular(n, n - 1 - r2, rng, max_attempts, fallback).complement()
    stubs_template = [v for v in range(n) for _ in range(r2)]
    for _ in range(max_attempts):
        stubs = stubs_template[:]
        rng.shuffle(stubs)
        rows = [0] * n
        ok = True
        for k in range(0, len(stubs), 2):
            u, v = stubs[k], stubs[k + 1]
            if u == v or rows[u] >> v & 1:
                ok = False
                break
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if ok:
            return Graph._trusted(n, rows)
    if not fallback:
        raise GenerationFailed(f"no simple pairing for n={n}, r2={r2} in {max_attempts} attempts")
    G = circulant_regular(n, r2)
    rows = list(G.rows)
    edges = G.edges()
    for _ in range(10 * len(edges)):
        move = _sample_switch(rows, edges, rng)
        if move is None:
            break
        i, j, a, b, c, d = move
        rows[a] ^= 1 << b | 1 << c
        rows[b] ^= 1 << a | 1 << d
        rows[c] ^= 1 << d | 1 << a
        rows[d] ^= 1 << c | 1 << b
        edges[i] = (a, c)
        edges[j] = (b, d)
    return Graph._trusted(n, rows)


def _sample_switch(rows, edges, rng: random.Random, attempts: int = SWITCH_ATTEMPTS):
    """Pick ``(i, j, a, b, c, d)``: edges[i] = ab, edges[j] = cd, with ac and bd absent."""
    m = len(edges)
    if m < 2:
        return None
    for _ in range(attempts):
        i = rng.randrange(m)
        j = rng.randrange(m - 1)
        if j >= i:
            j += 1
        a, b = edges[i]
        c, d = edges[j]
        if rng.randrange(2):
            c, d = d, c
        if a != c and a != d and b != c and b != d and not rows[a] >> c & 1 and not rows[b] >> d & 1:
            return i, j, a, b, c, d
    valid = []
    for i in range(m):
        a, b = edges[i]
        for j in range(m):
            if j == i:
                continue
            for c, d in (edges[j], edges[j][::-1]):
                if len({a, b, c, d}) == 4 and not rows[a] >> c & 1 and not rows[b] >> d & 1:
                    valid.append((i, j, a, b, c, d))
    if not valid:
        return None
    return valid[rng.randrange(len(valid))]


def apply_switch(G: Graph, a: int, b: int, c: int, d: int) -> Graph:
    """Replace edges ab, cd by ac, bd."""
    if len({a, b, c, d}) != 4:
        raise ValueError("a 2-switch needs four distinct vertices")
    if not (G.has_edge(a, b) and G.has_edge(c, d)):
        raise ValueError("ab and cd must be edges")
    if G.has_edge(a, c) or G.has_edge(b, d):
        raise ValueError("ac and bd must be non-edges")
    rows = list(G.rows)
    for u, v in ((a, b), (c, d)):
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
    for u, v in ((a, c), (b, d)):
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph._trusted(G.n, rows)


def two_switch(G: Graph, rng=None, attempts: int = SWITCH_ATTEMPTS) -> Graph | None:
    """A uniformly chosen 2-switch of G, or ``None`` if G admits none."""
    if G.n == 0:
        raise EmptyGraph("cannot switch the empty graph")
    rng = _as_rng(rng)
    move = _sample_switch(G.rows, G.edges(), rng, attempts)
    if move is None:
        return None
    _, _, a, b, c, d = move
    return apply_switch(G, a, b, c, d)


def fitness(G: Graph, r3: int) -> Fraction:
    if G.n == 0:
        raise EmptyGraph("fitness is undefined for the empty graph")
    total = sum(Fraction(1, (abs(t - r3) + 1) ** 2) for t in triangle_degrees(G))
    return total / G.n


class _SearchState:
    """Mutable working copy of an r2-regular graph with incremental fitness.

    ``score / (n * denom)`` is the fitness; every triangle-degree change goes
    through :meth:`_bump`, so the score never drifts from a full recount.
    """

    def __init__(self, G: Graph, r3: int, max_deviation: int):
        self.n = G.n
        self.r3 = r3
        self.rows = list(G.rows)
        self.edges = G.edges()
        self.tri = triangle_degrees(G)
        self.denom = lcm(*((d + 1) ** 2 for d in range(max_deviation + 1)))
        self.terms = [self.denom // (d + 1) ** 2 for d in range(max_deviation + 1)]
        self.score = sum(self.terms[abs(t - r3)] for t in self.tri)

    @property
    def target(self) -> int:
        return self.n * self.denom

    def fitness(self) -> Fraction:
        return Fraction(self.score, self.target)

    def graph(self) -> Graph:
        return Graph._trusted(self.n, self.rows)

    def _bump(self, v: int, delta: int) -> None:
        old = self.tri[v]
        self.tri[v] = old + delta
        self.score += self.terms[abs(old + delta - self.r3)] - self.terms[abs(old - self.r3)]

    def _remove(self, u: int, v: int) -> None:
        rows = self.rows
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        common = rows[u] & rows[v]
        k = common.bit_count()
        if k:
            self._bump(u, -k)
            self._bump(v, -k)
            for w in iter_bits(common):
                self._bump(w, -1)

    def _add(self, u: int, v: int) -> None:
        rows = self.rows
        common = rows[u] & rows[v]
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        k = common.bit_count()
        if k:
            self._bump(u, k)
            self._bump(v, k)
            for w in iter_bits(common):
                self._bump(w, 1)

    def apply(self, move) -> None:
        i, j, a, b, c, d = move
        self._remove(a, b)
        self._remove(c, d)
        self._add(a, c)
        self._add(b, d)
        self.edges[i] = (a, c)
        self.edges[j] = (b, d)

    def undo(self, move) -> None:
        i, j, a, b, c, d = move
        self._remove(a, c)
        self._remove(b, d)
        self._add(a, b)
        self._add(c, d)
        self.edges[i] = (a, b)
        self.edges[j] = (c, d)


@dataclass(frozen=True)
class SearchConfig:
    r2: int
    r3: int
    n: int
    max_iterations: int = 200_000
    restarts: int = 32
    plateau_limit: int = 2_000
    seed: int = 0

    def __post_init__(self):
        _check_degree_sequence(self.n, self.r2)
        if self.r3 < 0:
            raise ValueError("r3 must be non-negative")
        for name in ("max_iterations", "restarts", "plateau_limit"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def max_deviation(self) -> int:
        return max(self.r3, comb(self.r2, 2) - self.r3, 0)


@dataclass
class SearchResult:
    status: str  # "Found" | "Exhausted"
    best_graph: Graph
    best_fitness: Fraction
    fitness_trace: list = field(default_factory=list)
    iterations_used: int = 0
    best_restart: int = 0
    restarts_used: int = 0

    @property
    def found(self) -> bool:
        return self.status == "Found"


@dataclass
class _RestartOutcome:
    index: int
    rows: tuple
    score: int
    target: int
    trace: list  # (local iteration, score)
    iterations: int


def _run_restart(config: SearchConfig, index: int) -> _RestartOutcome:
    rng = random.Random(config.seed + index)
    state = _SearchState(random_regular(config.n, config.r2, rng), config.r3, config.max_deviation())
    trace = [(0, state.score)]
    plateau = 0
    it = 0
    # plateau counts every non-improving step, accepted or rejected
    while state.score != state.target and it < config.max_iterations and plateau < config.plateau_limit:
        move = _sample_switch(state.rows, state.edges, rng)
        if move is None:
            break
        it += 1
        before = state.score
        state.apply(move)
        if state.score < before:
            state.undo(move)
            plateau += 1
        elif state.score == before:
            plateau += 1
        else:
            plateau = 0
            trace.append((it, state.score))
    return _RestartOutcome(index, tuple(state.rows), state.score, state.target, trace, it)


def default_workers() -> int:
    env = os.environ.get("TRIREG_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_search(config: SearchConfig, workers: int = 1) -> SearchResult:
    """Run restarts in index order until one reaches fitness 1.

    With ``workers > 1`` restarts are evaluated in batches on a process pool;
    the merge keeps the earliest successful restart and ignores later ones,
    so the result matches the sequential run exactly.
    """
    outcomes: list[_RestartOutcome] = []
    if workers <= 1:
        for i in range(config.restarts):
            out = _run_restart(config, i)
            outcomes.append(out)
            if out.score == out.target:
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for start in range(0, config.restarts, workers):
                idx = range(start, min(start + workers, config.restarts))
                batch = list(pool.map(_run_restart, [config] * len(idx), idx))
                done = False
                for out in batch:
                    outcomes.append(out)
                    if out.score == out.target:
                        done = True
                        break
                if done:
                    break

    trace = []
    offset = 0
    best = outcomes[0]
    for out in outcomes:
        for it, score in out.trace:
            trace.append((offset + it, Fraction(score, out.target)))
        offset += out.iterations
        if out.score * best.target > best.score * out.target:
            best = out
    graph = Graph._trusted(config.n, best.rows)
    best_fitness = Fraction(best.score, best.target)
    found = best_fitness == 1 and regularity_parameters(graph) == Parameters(config.r2, config.r3)
    return SearchResult(
        status="Found" if found else "Exhausted",
        best_graph=graph,
        best_fitness=best_fitness,
        fitness_trace=trace,
        iterations_used=offset,
        best_restart=best.index,
        restarts_used=len(outcomes),
    )


def feasible_orders(r2: int, n_max: int) -> list[int]:
    """Vertex counts n <= n_max that admit an r2-regular graph, ascending."""
    return [n for n in range(r2 + 1, n_max + 1) if n * r2 % 2 == 0]


def scan_search(r2: int, r3: int, n_max: int, workers: int = 1, **budgets) -> tuple[int | None, SearchResult | None]:
    """Search each feasible n in turn; return the first n that succeeds."""
    last = None
    for n in feasible_orders(r2, n_max):
        result = run_search(SearchConfig(r2=r2, r3=r3, n=n, **budgets), workers=workers)
        if result.found:
            return n, result
        last = result
    return None, last


def config_dict(config: SearchConfig) -> dict:
    return asdict(config)
