"""Classification of parameter pairs ``(r2, r3)``.

Rules are applied in a fixed order so verdicts stay deterministic where the
forbidden ranges overlap:

1. ``UpperBound``        r3 > C(r2, 2)
2. ``TheoremDownGap``    r3 = C(r2, 2) - c,   1 <= c <= (r2 - 1)/2, r2 >= 3
3. ``PropositionMidGap`` r3 = C(r2-1, 2) + c, 0 < c < (r2 - 2)/2,  r2 > 4
4. ``EdgeHandshake``     no admissible multiset of edge triangle degrees
5. ``CuratedExhaustive`` pairs excluded by case analysis (data file)

All interval endpoints are compared in integers (``2c <= r2 - 1`` rather than
``c <= (r2 - 1) / 2``).
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import comb

from trireg.constructions import DEFAULT_MAX_R2, construct_for
from trireg.graph import Parameters

log = logging.getLogger(__name__)


class Rule(str, enum.Enum):
    UpperBound = "UpperBound"
    TheoremDownGap = "TheoremDownGap"
    PropositionMidGap = "PropositionMidGap"
    EdgeHandshake = "EdgeHandshake"
    CuratedExhaustive = "CuratedExhaustive"


CLOSED_FORM_RULES = (Rule.UpperBound, Rule.TheoremDownGap, Rule.PropositionMidGap)


@dataclass(frozen=True)
class Verdict:
    status: str  # "forbidden" | "exists" | "unknown"
    rule: Rule | None = None
    witness: object = None

    @classmethod
    def forbidden(cls, rule: Rule) -> "Verdict":
        return cls("forbidden", rule=rule)

    @classmethod
    def exists(cls, witness) -> "Verdict":
        return cls("exists", witness=witness)

    @property
    def is_forbidden(self) -> bool:
        return self.status == "forbidden"

    @property
    def is_exists(self) -> bool:
        return self.status == "exists"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"

    def __str__(self):
        if self.is_forbidden:
            return f"Forbidden({self.rule.value})"
        if self.is_exists:
            return f"Exists({self.witness})"
        return "Unknown"


@lru_cache(maxsize=1)
def _data() -> dict:
    text = resources.files("trireg").joinpath("data/feasibility.json").read_text()
    return json.loads(text)


def curated_forbidden() -> frozenset:
    return frozenset(Parameters(e["r2"], e["r3"]) for e in _data()["curated_forbidden"])


def documented_unknown() -> frozenset:
    return frozenset(Parameters(e["r2"], e["r3"]) for e in _data()["unknown"])


def closed_form_forbidden(r2: int, r3: int) -> Rule | None:
    if r2 < 0 or r3 < 0:
        raise ValueError("parameters must be non-negative")
    if r3 > comb(r2, 2):
        return Rule.UpperBound
    c = comb(r2, 2) - r3
    if r2 >= 3 and c >= 1 and 2 * c <= r2 - 1:
        return Rule.TheoremDownGap
    c = r3 - comb(r2 - 1, 2) if r2 > 4 else 0
    if c > 0 and 2 * c < r2 - 2:
        return Rule.PropositionMidGap
    return None


def edge_degree_feasible_set(r2: int, r3: int) -> set[int]:
    """Triangle degrees an edge may carry in a graph with parameters ``(r2, r3)``."""
    if r2 < 1 or r3 < 0:
        raise ValueError("need r2 >= 1 and r3 >= 0")
    return {
        k
        for k in range(min(r3, r2 - 1) + 1)
        if 2 * r3 <= (r2 - k - 1) * (r2 - 2) + k * (k + 1)
    }


def edge_degree_multisets(r2: int, r3: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """Sorted r2-tuples over the feasible set summing to ``2 * r3``."""
    values = sorted(edge_degree_feasible_set(r2, r3))
    out: list[tuple[int, ...]] = []

    def rec(start, left, total, acc):
        if limit is not None and len(out) >= limit:
            return
        if left == 0:
            if total == 0:
                out.append(tuple(acc))
            return
        for i in range(start, len(values)):
            k = values[i]
            if k * left > total:
                break
            if values[-1] * left < total:
                return
            acc.append(k)
            rec(i, left - 1, total - k, acc)
            acc.pop()

    rec(0, r2, 2 * r3, [])
    return out


def edge_handshake_feasible(r2: int, r3: int) -> bool:
    """Can ``r2`` feasible edge degrees sum to ``2 * r3``?"""
    values = edge_degree_feasible_set(r2, r3)
    mask = (1 << (2 * r3 + 1)) - 1
    reachable = 1  # bit s set iff sum s is reachable with the items so far
    for _ in range(r2):
        step = 0
        for k in values:
            step |= reachable << k
        reachable = step & mask
        if not reachable:
            return False
    return bool(reachable >> (2 * r3) & 1)


def atom_sum_decomposition(r2: int, r3: int, atoms) -> list[tuple[int, ...]]:
    """All non-negative coefficient vectors with sum(c_i * atom_i) = (r2, r3)."""
    atoms = [Parameters(*a) for a in atoms]
    if not atoms:
        raise ValueError("need at least one atom")
    if any(a.r2 == 0 and a.r3 == 0 for a in atoms):
        raise ValueError("the (0, 0) atom admits unboundedly many coefficients")
    solutions: list[tuple[int, ...]] = []
    coeffs = [0] * len(atoms)

    def rec(i, left2, left3):
        if i == len(atoms):
            if left2 == 0 and left3 == 0:
                solutions.append(tuple(coeffs))
            return
        a = atoms[i]
        bound = min(left // part for left, part in ((left2, a.r2), (left3, a.r3)) if part)
        for c in range(bound + 1):
            coeffs[i] = c
            rec(i + 1, left2 - c * a.r2, left3 - c * a.r3)
        coeffs[i] = 0

    rec(0, r2, r3)
    return solutions


def classify(r2: int, r3: int, max_r2: int = DEFAULT_MAX_R2) -> Verdict:
    rule = closed_form_forbidden(r2, r3)
    if rule is not None:
        return Verdict.forbidden(rule)
    if r2 >= 1 and not edge_handshake_feasible(r2, r3):
        return Verdict.forbidden(Rule.EdgeHandshake)
    if (r2, r3) in curated_forbidden():
        return Verdict.forbidden(Rule.CuratedExhaustive)
    recipe = construct_for(r2, r3, max_r2=max_r2)
    if recipe is not None:
        return Verdict.exists(recipe)
    return Verdict("unknown")


def edge_handshake_only_cells(max_r2: int) -> list[Parameters]:
    """Pairs rejected by the edge handshake rule but by no closed-form rule."""
    cells = []
    for r2 in range(1, max_r2 + 1):
        for r3 in range(comb(r2, 2) + 1):
            if closed_form_forbidden(r2, r3) is None and not edge_handshake_feasible(r2, r3):
                cells.append(Parameters(r2, r3))
                log.info("edge handshake alone forbids (%d, %d)", r2, r3)
    return cells


def known_threshold(r3: int, max_r2: int = DEFAULT_MAX_R2) -> int | None:
    """Smallest r2 <= max_r2 with a known witness; an upper bound on the true threshold.

    Edgeless graphs are not considered, so the answer for ``r3 = 0`` is 1 (K2).
    """
    if r3 < 0:
        raise ValueError("r3 must be non-negative")
    for r2 in range(1, max_r2 + 1):
        if classify(r2, r3, max_r2=max_r2).is_exists:
            return r2
    return None


# -- the admissibility grid ---------------------------------------------------


@dataclass(frozen=True)
class Cell:
    r2: int
    r3: int
    verdict: Verdict
    arrow: bool  # witness derivable as (left cell's witness) □ K2

    @property
    def label(self) -> str:
        """Table-style label: No1..No4, an arrow, a recipe, or Unknown."""
        v = self.verdict
        if v.is_forbidden:
            return RULE_LABELS[v.rule](self.r2)
        if v.is_exists:
            return "→" if self.arrow else str(v.witness)
        return "Unknown"


RULE_LABELS = {
    Rule.UpperBound: lambda r2: "No1",
    # the two gap rules appear in the table through the even/odd corollaries
    Rule.TheoremDownGap: lambda r2: "No2" if r2 % 2 == 0 else "No3",
    Rule.PropositionMidGap: lambda r2: "No2" if r2 % 2 == 0 else "No3",
    Rule.CuratedExhaustive: lambda r2: "No4",
    Rule.EdgeHandshake: lambda r2: "NoEH",
}


@dataclass(frozen=True)
class AdmissibilityTable:
    r2_values: tuple[int, ...]
    r3_values: tuple[int, ...]
    cells: dict

    def __getitem__(self, key) -> Cell:
        return self.cells[tuple(key)]

    def ordered(self):
        """Cells ordered by ``(r3, r2)``."""
        for r3 in self.r3_values:
            for r2 in self.r2_values:
                yield self.cells[(r2, r3)]


def admissibility_table(max_r2: int, max_r3: int, min_r2: int = 2, min_r3: int = 1,
                        max_construct_r2: int = DEFAULT_MAX_R2) -> AdmissibilityTable:
    if max_r2 < 1 or max_r3 < 1:
        raise ValueError("table bounds must be >= 1")
    r2_values = tuple(range(min_r2, max_r2 + 1))
    r3_values = tuple(range(min_r3, max_r3 + 1))
    cells = {}
    for r3 in r3_values:
        left = classify(min_r2 - 1, r3, max_r2=max_construct_r2) if min_r2 >= 1 else None
        for r2 in r2_values:
            verdict = classify(r2, r3, max_r2=max_construct_r2)
            arrow = verdict.is_exists and left is not None and left.is_exists
            cells[(r2, r3)] = Cell(r2, r3, verdict, arrow)
            left = verdict
    return AdmissibilityTable(r2_values, r3_values, cells)


def render_markdown(table: AdmissibilityTable) -> str:
    header = ["r3 \\ r2"] + [str(r2) for r2 in table.r2_values]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for r3 in table.r3_values:
        row = [str(r3)] + [table[(r2, r3)].label for r2 in table.r2_values]
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_csv(table: AdmissibilityTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r2", "r3", "status", "rule", "label", "witness"])
    for cell in table.ordered():
        v = cell.verdict
        writer.writerow([
            cell.r2,
            cell.r3,
            v.status,
            v.rule.value if v.rule else "",
            cell.label,
            v.witness.expr() if v.witness is not None else "",
        ])
    return buf.getvalue()
