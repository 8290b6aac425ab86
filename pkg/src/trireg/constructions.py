"""Witness graphs and construction recipes for known parameter pairs.

A recipe is a small expression tree: atoms (complete graphs, balanced Turán
graphs, the catalogued graphs G1..G5) combined by Cartesian products.  The
parameters of a product are the componentwise sums of its factors'
parameters, which is what makes the search in :func:`construct_for` a
knapsack over parameter space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import comb

from trireg.errors import (
    EmptyFactor,
    EmptyGraph,
    IndivisibleParts,
    InvalidRecipe,
    TriregError,
    UnknownGraph,
)
from trireg.graph import Graph, Parameters, cartesian_product, from_edge_list

NAMED_IDS = ("G1", "G2", "G3", "G4", "G5")

# captioned parameters and orders of the catalogued graphs
NAMED_PARAMETERS = {
    "G1": Parameters(5, 5),
    "G2": Parameters(6, 8),
    "G3": Parameters(6, 9),
    "G4": Parameters(7, 13),
    "G5": Parameters(8, 14),
}
NAMED_ORDERS = {"G1": 12, "G2": 18, "G3": 10, "G4": 12, "G5": 15}


def complete(n: int) -> Graph:
    if n < 1:
        raise EmptyGraph("complete(n) needs n >= 1")
    full = (1 << n) - 1
    return Graph._trusted(n, (full ^ (1 << v) for v in range(n)))


def turan(n: int, r: int) -> Graph:
    """Complete r-partite graph with ``n / r`` vertices per part.

    Part ``i`` holds the vertices ``i*s .. i*s + s - 1`` where ``s = n // r``.
    """
    if r < 1:
        raise ValueError("turan needs r >= 1")
    if n < 1:
        raise EmptyGraph("turan needs n >= 1")
    if n % r:
        raise IndivisibleParts(f"{r} does not divide {n}")
    size = n // r
    full = (1 << n) - 1
    rows = []
    for v in range(n):
        part = ((1 << size) - 1) << (v // size * size)
        rows.append(full & ~part)
    return Graph._trusted(n, rows)


def turan_parameters(n: int, r: int) -> Parameters:
    if n < 1 or r < 1:
        raise ValueError("turan_parameters needs n, r >= 1")
    if n % r:
        raise IndivisibleParts(f"{r} does not divide {n}")
    s = n // r
    if r >= 3:
        return Parameters(s * (r - 1), comb(r - 1, 2) * s * s)
    # r = 1 is edgeless, r = 2 is K_{s,s}; both triangle-free
    return Parameters(s * (r - 1), 0)


@lru_cache(maxsize=None)
def _named_edges(gid: str) -> tuple[tuple[int, int], ...]:
    text = resources.files("trireg").joinpath(f"data/{gid}.edges").read_text()
    return tuple(tuple(map(int, line.split())) for line in text.splitlines() if line.strip())


def named_graph(gid: str) -> Graph:
    if gid not in NAMED_IDS:
        raise UnknownGraph(f"unknown graph id {gid!r}; expected one of {', '.join(NAMED_IDS)}")
    return from_edge_list(NAMED_ORDERS[gid], _named_edges(gid))


def blow_up(G: Graph) -> Graph:
    """``G □ K2``; shifts parameters ``(r2, r3)`` to ``(r2 + 1, r3)``."""
    if G.n == 0:
        raise EmptyFactor("cannot blow up the empty graph")
    return cartesian_product(G, complete(2))


# -- recipes -----------------------------------------------------------------

_PRODUCT_SIGN = " □ "


@dataclass(frozen=True)
class Complete:
    n: int

    @property
    def parameters(self) -> Parameters:
        if self.n < 1:
            raise InvalidRecipe(f"K{self.n} is not a graph")
        return Parameters(self.n - 1, comb(self.n - 1, 2))

    @property
    def order(self) -> int:
        return self.n

    def sort_key(self):
        # larger complete graphs sort first, so "K5 x K4" rather than "K4 x K5"
        return (0, -self.n)

    def __str__(self):
        return f"K{self.n}"

    def expr(self) -> str:
        return f"K{self.n}"


@dataclass(frozen=True)
class Turan:
    n: int
    r: int

    @property
    def parameters(self) -> Parameters:
        try:
            return turan_parameters(self.n, self.r)
        except (TriregError, ValueError) as exc:
            raise InvalidRecipe(f"Turan({self.n},{self.r}): {exc}") from None

    @property
    def order(self) -> int:
        return self.n

    def sort_key(self):
        return (1, -self.n, -self.r)

    def __str__(self):
        return f"Turan({self.n},{self.r})"

    def expr(self) -> str:
        return f"T{self.n},{self.r}"


@dataclass(frozen=True)
class Named:
    id: str

    @property
    def parameters(self) -> Parameters:
        if self.id not in NAMED_PARAMETERS:
            raise InvalidRecipe(f"unknown named graph {self.id!r}")
        return NAMED_PARAMETERS[self.id]

    @property
    def order(self) -> int:
        return NAMED_ORDERS[self.id]

    def sort_key(self):
        return (2, NAMED_IDS.index(self.id))

    def __str__(self):
        return self.id

    def expr(self) -> str:
        return self.id


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __init__(self, *factors):
        if len(factors) == 1 and isinstance(factors[0], (tuple, list)):
            factors = tuple(factors[0])
        object.__setattr__(self, "factors", tuple(factors))

    @property
    def parameters(self) -> Parameters:
        if len(self.factors) < 2:
            raise InvalidRecipe("a product needs at least two factors")
        total = Parameters(0, 0)
        for f in self.factors:
            if not isinstance(f, RECIPE_TYPES):
                raise InvalidRecipe(f"not a recipe: {f!r}")
            total = total + f.parameters
        return total

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.order
        return out

    def atoms(self) -> list:
        out = []
        for f in self.factors:
            out.extend(f.atoms() if isinstance(f, Product) else [f])
        return out

    def __str__(self):
        return _PRODUCT_SIGN.join(
            f"({f})" if isinstance(f, Product) else str(f) for f in self.factors
        )

    def expr(self) -> str:
        return " x ".join(f"({f.expr()})" if isinstance(f, Product) else f.expr() for f in self.factors)


RECIPE_TYPES = (Complete, Turan, Named, Product)
ConstructionRecipe = Complete | Turan | Named | Product


def expected_parameters(recipe) -> Parameters:
    if not isinstance(recipe, RECIPE_TYPES):
        raise InvalidRecipe(f"not a recipe: {recipe!r}")
    return recipe.parameters


def atoms_of(recipe) -> list:
    return recipe.atoms() if isinstance(recipe, Product) else [recipe]


def evaluate(recipe) -> Graph:
    """Build the recipe's graph; products fold left-to-right, row-major."""
    expected_parameters(recipe)  # validates the whole tree
    if isinstance(recipe, Complete):
        return complete(recipe.n)
    if isinstance(recipe, Turan):
        return turan(recipe.n, recipe.r)
    if isinstance(recipe, Named):
        return named_graph(recipe.id)
    graphs = [evaluate(f) for f in recipe.factors]
    out = graphs[0]
    for g in graphs[1:]:
        out = cartesian_product(out, g)
    return out


def blow_up_recipe(recipe):
    return Product(*atoms_of(recipe), Complete(2)) if isinstance(recipe, Product) else Product(recipe, Complete(2))


_TOKEN = re.compile(r"\s*(?:(K)(\d+)|(T)(\d+)\s*,\s*(\d+)|(G)(\d+)|([x□*])|(\()|(\)))")


def parse_recipe(text: str):
    """Parse ``K<n>``, ``T<n>,<r>``, ``G1..G5`` joined by ``x`` with parentheses."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidRecipe(f"cannot parse recipe at {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            tokens.append(Complete(int(m.group(2))))
        elif m.group(3):
            tokens.append(Turan(int(m.group(4)), int(m.group(5))))
        elif m.group(6):
            tokens.append(Named("G" + m.group(7)))
        elif m.group(8):
            tokens.append("x")
        else:
            tokens.append(m.group(9) or m.group(10))

    def parse_expr(i):
        factors = []
        node, i = parse_term(i)
        factors.append(node)
        while i < len(tokens) and tokens[i] == "x":
            node, i = parse_term(i + 1)
            factors.append(node)
        return (factors[0] if len(factors) == 1 else Product(*factors)), i

    def parse_term(i):
        if i >= len(tokens):
            raise InvalidRecipe("unexpected end of recipe")
        tok = tokens[i]
        if tok == "(":
            node, i = parse_expr(i + 1)
            if i >= len(tokens) or tokens[i] != ")":
                raise InvalidRecipe("unbalanced parentheses")
            return node, i + 1
        if isinstance(tok, str):
            raise InvalidRecipe(f"unexpected token {tok!r}")
        return tok, i + 1

    if not tokens:
        raise InvalidRecipe("empty recipe")
    node, i = parse_expr(0)
    if i != len(tokens):
        raise InvalidRecipe("trailing tokens in recipe")
    expected_parameters(node)
    return node


# -- parameter-space search ---------------------------------------------------

DEFAULT_MAX_R2 = 32


def curated_atoms(max_r2: int = DEFAULT_MAX_R2) -> list:
    """Atom set ordered by sort key; one atom per parameter pair."""
    candidates = [Complete(n) for n in range(2, max_r2 + 2)]
    for n in range(2, max_r2 + 3):
        for r in range(2, n):
            if n % r == 0:
                candidates.append(Turan(n, r))
    candidates.extend(Named(g) for g in NAMED_IDS)
    candidates.sort(key=lambda a: a.sort_key())
    seen = set()
    atoms = []
    for a in candidates:
        p = a.parameters
        if p.r2 == 0 or p.r2 > max_r2 or p in seen:
            continue
        seen.add(p)
        atoms.append(a)
    return atoms


@lru_cache(maxsize=8)
def _recipe_table(max_r2: int) -> dict:
    """Fewest-atom, then lexicographically smallest, atom multiset per pair."""
    atoms = curated_atoms(max_r2)
    by_r3 = sorted(atoms, key=lambda a: a.parameters.r3)
    max_r3 = comb(max_r2, 2)
    # entry: (atom count, sorted atom keys, atoms in key order)
    best: dict = {(0, 0): (0, (), ())}
    for s2 in range(1, max_r2 + 1):
        for s3 in range(0, max_r3 + 1):
            found = None
            for a in by_r3:
                a2, a3 = a.parameters
                if a3 > s3:
                    break
                if a2 > s2:
                    continue
                prev = best.get((s2 - a2, s3 - a3))
                if prev is None or (found is not None and prev[0] + 1 > found[0]):
                    continue
                key = a.sort_key()
                i = 0
                while i < len(prev[1]) and prev[1][i] <= key:
                    i += 1
                cand = (
                    prev[0] + 1,
                    prev[1][:i] + (key,) + prev[1][i:],
                    prev[2][:i] + (a,) + prev[2][i:],
                )
                if found is None or cand[:2] < found[:2]:
                    found = cand
            if found is not None:
                best[(s2, s3)] = found
    return best


def construct_for(r2: int, r3: int, max_r2: int = DEFAULT_MAX_R2):
    """A recipe realising ``(r2, r3)`` from the curated atoms, or ``None``."""
    if r2 < 0 or r3 < 0:
        raise ValueError("parameters must be non-negative")
    if r2 == 0:
        return Complete(1) if r3 == 0 else None
    if r2 > max_r2:
        return None
    entry = _recipe_table(max_r2).get((r2, r3))
    if entry is None:
        return None
    atoms = list(entry[2])
    return atoms[0] if len(atoms) == 1 else Product(*atoms)
