import logging
from math import comb
from pathlib import Path

import pytest

from trireg.constructions import Complete, Named, Product, Turan, evaluate, expected_parameters
from trireg.feasibility import (
    Rule,
    admissibility_table,
    atom_sum_decomposition,
    classify,
    closed_form_forbidden,
    curated_forbidden,
    documented_unknown,
    edge_degree_feasible_set,
    edge_degree_multisets,
    edge_handshake_feasible,
    edge_handshake_only_cells,
    known_threshold,
    render_csv,
    render_markdown,
)
from trireg.graph import regularity_parameters

GOLDEN = Path(__file__).resolve().parent.parent / "docs" / "admissibility_golden.md"


def parse_markdown_table(text: str) -> dict:
    lines = [line for line in text.splitlines() if line.startswith("|")]
    header = [c.strip() for c in lines[0].strip("|").split("|")]
    r2s = [int(c) for c in header[1:]]
    cells = {}
    for line in lines[2:]:
        row = [c.strip() for c in line.strip("|").split("|")]
        r3 = int(row[0])
        for r2, label in zip(r2s, row[1:]):
            cells[(r2, r3)] = label
    return cells


def normalise(label: str) -> str:
    if label.startswith("No") or label == "Unknown":
        return label
    return "exists"


def corollary_forbidden(r2: int, r3: int) -> bool:
    """Union of the even/odd gap ranges, strict inequalities throughout."""
    top = comb(r2, 2)
    below = comb(r2 - 1, 2)
    if r2 >= 4 and r2 % 2 == 0:
        mid = 4 * comb(r2 // 2, 2)
        return mid < r3 < top or below < r3 < mid
    if r2 >= 3 and r2 % 2 == 1:
        return below < r3 < top
    return False


class TestClosedForm:
    @pytest.mark.parametrize("pair,rule", [
        ((3, 4), Rule.UpperBound),
        ((5, 9), Rule.TheoremDownGap),
        ((6, 11), Rule.PropositionMidGap),
        ((4, 5), Rule.TheoremDownGap),
        ((3, 2), Rule.TheoremDownGap),
    ])
    def test_examples(self, pair, rule):
        assert closed_form_forbidden(*pair) == rule

    @pytest.mark.parametrize("pair", [(2, 1), (3, 3), (4, 4), (6, 12), (7, 14), (8, 17), (9, 23), (5, 0)])
    def test_not_closed_form(self, pair):
        assert closed_form_forbidden(*pair) is None

    def test_gap_rules_equal_corollary_ranges(self):
        for r2 in range(1, 61):
            for r3 in range(comb(r2, 2) + 1):
                rule = closed_form_forbidden(r2, r3)
                assert (rule is not None) == corollary_forbidden(r2, r3), (r2, r3)

    def test_integer_endpoints(self):
        # c = (r2 - 1) / 2 exactly is included; c = r2 / 2 for even r2 is not
        assert closed_form_forbidden(7, comb(7, 2) - 3) == Rule.TheoremDownGap
        assert closed_form_forbidden(7, comb(7, 2) - 4) == Rule.PropositionMidGap
        assert closed_form_forbidden(8, comb(8, 2) - 3) == Rule.TheoremDownGap
        assert closed_form_forbidden(8, comb(8, 2) - 4) is None
        # mid gap: c = (r2 - 2) / 2 is excluded
        assert closed_form_forbidden(8, comb(7, 2) + 2) == Rule.PropositionMidGap
        assert closed_form_forbidden(8, comb(7, 2) + 3) is None

    def test_precedence(self):
        # (5, 9) also lies in no mid gap; the theorem rule is reported first everywhere it applies
        for r2 in range(3, 30):
            for c in range(1, (r2 - 1) // 2 + 1):
                assert closed_form_forbidden(r2, comb(r2, 2) - c) == Rule.TheoremDownGap


class TestEdgeDegrees:
    def test_feasible_sets(self):
        assert edge_degree_feasible_set(6, 12) == {4, 5}
        assert edge_degree_feasible_set(2, 1) == {1}
        assert edge_degree_feasible_set(3, 3) == {2}
        assert edge_degree_feasible_set(4, 5) == {3}

    def test_handshake(self):
        assert edge_handshake_feasible(6, 12)
        assert edge_degree_multisets(6, 12) == [(4,) * 6]
        assert not edge_handshake_feasible(4, 5)
        for r2 in range(1, 20):
            assert edge_handshake_feasible(r2, 0)

    def test_multisets_agree_with_dp(self):
        for r2 in range(1, 10):
            for r3 in range(comb(r2, 2) + 1):
                assert bool(edge_degree_multisets(r2, r3, limit=1)) == edge_handshake_feasible(r2, r3)

    def test_handshake_only_cells_logged(self, caplog):
        with caplog.at_level(logging.INFO, logger="trireg.feasibility"):
            cells = edge_handshake_only_cells(12)
        # computed answer: the handshake rule adds nothing beyond the closed forms up to r2 = 12
        assert cells == []
        assert len(caplog.records) == len(cells)

    def test_invalid(self):
        with pytest.raises(ValueError):
            edge_degree_feasible_set(0, 0)


class TestDecomposition:
    ATOMS = [(1, 0), (2, 1), (3, 3)]

    def test_examples(self):
        assert atom_sum_decomposition(4, 4, self.ATOMS) == []
        assert atom_sum_decomposition(4, 2, self.ATOMS) == [(0, 2, 0)]
        assert atom_sum_decomposition(2, 1, self.ATOMS) == [(0, 1, 0)]

    def test_solutions_are_exact(self):
        for sol in atom_sum_decomposition(7, 4, self.ATOMS):
            assert sum(c * a[0] for c, a in zip(sol, self.ATOMS)) == 7
            assert sum(c * a[1] for c, a in zip(sol, self.ATOMS)) == 4

    def test_errors(self):
        with pytest.raises(ValueError):
            atom_sum_decomposition(2, 1, [])
        with pytest.raises(ValueError):
            atom_sum_decomposition(2, 1, [(0, 0), (1, 0)])


class TestClassify:
    def test_examples(self):
        assert classify(2, 1).witness == Complete(3)
        v = classify(7, 14)
        assert v.is_forbidden and v.rule == Rule.CuratedExhaustive
        assert classify(8, 17).is_unknown
        assert classify(9, 23).is_unknown

    def test_data_file(self):
        assert curated_forbidden() == {(7, 14)}
        assert documented_unknown() == {(8, 17), (9, 23)}
        for pair in documented_unknown():
            assert classify(*pair).is_unknown

    def test_triangle_free_extension(self):
        for r2 in range(1, 10):
            v = classify(r2, 0)
            assert v.is_exists
            assert regularity_parameters(evaluate(v.witness)) == (r2, 0)

    def test_soundness_meta(self):
        """No witness ever lands in a forbidden range."""
        curated = curated_forbidden()
        for r2 in range(1, 33):
            for r3 in range(comb(r2, 2) + 1):
                v = classify(r2, r3)
                if v.is_exists:
                    assert closed_form_forbidden(r2, r3) is None
                    assert edge_handshake_feasible(r2, r3)
                    assert (r2, r3) not in curated
                    assert expected_parameters(v.witness) == (r2, r3)

    def test_monotone_blow_up(self):
        for r2 in range(1, 32):
            for r3 in range(comb(r2, 2) + 1):
                if classify(r2, r3).is_exists:
                    assert classify(r2 + 1, r3).is_exists, (r2, r3)

    def test_str(self):
        assert str(classify(4, 5)) == "Forbidden(TheoremDownGap)"
        assert str(classify(8, 17)) == "Unknown"
        assert str(classify(7, 9)) == "Exists(K5 □ K4)"


class TestThreshold:
    @pytest.mark.parametrize("r3,expected", [(1, 2), (5, 5), (0, 1), (3, 3), (17, 10)])
    def test_examples(self, r3, expected):
        assert known_threshold(r3) == expected

    def test_bound(self):
        assert known_threshold(17, max_r2=8) is None
        with pytest.raises(ValueError):
            known_threshold(-1)


class TestTable:
    def test_matches_golden(self):
        golden = parse_markdown_table(GOLDEN.read_text(encoding="utf-8"))
        table = admissibility_table(8, 17)
        ours = parse_markdown_table(render_markdown(table))
        assert set(ours) == set(golden)
        for cell, label in golden.items():
            assert normalise(ours[cell]) == normalise(label), cell

    def test_golden_forbidden_cells_use_closed_forms(self):
        golden = parse_markdown_table(GOLDEN.read_text(encoding="utf-8"))
        for (r2, r3), label in golden.items():
            if label in ("No1", "No2", "No3"):
                assert closed_form_forbidden(r2, r3) is not None
            if label == "No1":
                assert closed_form_forbidden(r2, r3) == Rule.UpperBound

    def test_golden_recipes_have_cell_parameters(self):
        from trireg.constructions import parse_recipe

        golden = parse_markdown_table(GOLDEN.read_text(encoding="utf-8"))
        for cell, label in golden.items():
            if normalise(label) == "exists" and label != "→":
                recipe = parse_recipe(label.replace("Turan(", "T").replace(")", "").replace("□", "x"))
                assert expected_parameters(recipe) == cell
                assert regularity_parameters(evaluate(recipe)) == cell

    def test_arrows_are_blow_ups(self):
        table = admissibility_table(8, 17)
        for cell in table.ordered():
            if cell.arrow:
                left = classify(cell.r2 - 1, cell.r3)
                assert left.is_exists
                assert cell.label == "→"

    def test_small_grids(self):
        t = admissibility_table(2, 1)
        assert list(t.cells) == [(2, 1)]
        assert t[(2, 1)].verdict.is_exists and t[(2, 1)].label == "K3"
        t = admissibility_table(3, 6)
        assert t[(2, 2)].verdict.rule == Rule.UpperBound
        assert t[(2, 3)].verdict.rule == Rule.UpperBound
        assert t[(3, 3)].verdict.is_exists

    def test_labels(self):
        t = admissibility_table(8, 17)
        assert t[(7, 14)].label == "No4"
        assert t[(8, 17)].label == "Unknown"
        assert t[(4, 5)].label == "No2"
        assert t[(5, 9)].label == "No3"
        assert t[(6, 7)].label == "K5 □ K3"

    def test_csv(self):
        text = render_csv(admissibility_table(8, 17))
        lines = text.splitlines()
        assert lines[0] == "r2,r3,status,rule,label,witness"
        assert len(lines) == 1 + 7 * 17
        assert "7,14,forbidden,CuratedExhaustive,No4," in lines
        assert "7,9,exists,,→,K5 x K4" in lines

    def test_bounds(self):
        with pytest.raises(ValueError):
            admissibility_table(0, 5)
