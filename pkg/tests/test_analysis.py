from fractions import Fraction
from math import comb

import pytest

from incidencelab.analysis import (
    TABLE_I,
    TABLE_II,
    bipartite_edges,
    determinant_monomials,
    joint_bound,
    joint_bound_value,
    match_structure,
    minimality_audit,
    monomial_name,
    monte_carlo,
    parse_monomial,
    flatness_audit,
)
from incidencelab.configs import ColoredLineConfig
from incidencelab.constructions import (
    ProbParams,
    default_generic_slits,
    gen_two_slit,
    quadric_ruling,
    quadric_ruling_slits,
)
from incidencelab.exactgeom import Line, ProjPoint
from incidencelab.gridmodel import ColoredGridConfig, GridLine
from incidencelab.structure import IncidenceStructure, extract_structure_lines


class TestMonomialNotation:
    def test_round_trip(self):
        assert monomial_name(parse_monomial("a1b2c3")) == "a1b2c3"
        assert parse_monomial("b1c3d2") == frozenset({(2, 0), (3, 2), (4, 1)})


class TestTables:
    def test_shapes(self):
        assert len(TABLE_I) == len(TABLE_II) == 12
        assert all(len(m) == 3 for m in TABLE_I | TABLE_II)

    def test_tables_not_isomorphic(self):
        s = IncidenceStructure(TABLE_I, (3, 3, 3, 3))
        assert match_structure(s, "I") is not None
        assert match_structure(s, "II") is None
        s2 = IncidenceStructure(TABLE_II, (3, 3, 3, 3))
        assert match_structure(s2, "II") is not None
        assert match_structure(s2, "I") is None

    def test_isomorphism_is_verified_map(self, reye):
        s = extract_structure_lines(reye)
        iso = match_structure(s, "I")
        assert iso is not None
        assert iso.apply(s.colorful_triples()) == TABLE_I

    def test_desargues_matches_II_only(self, desargues):
        s = extract_structure_lines(desargues)
        assert match_structure(s, "II") is not None
        assert match_structure(s, "I") is None

    def test_wrong_shape_rejected(self):
        s = IncidenceStructure(frozenset(), (3, 3, 3))
        with pytest.raises(ValueError):
            match_structure(s, "I")


class TestDeterminant:
    def test_twelve_positive_terms(self):
        monos = determinant_monomials()
        assert len(monos) == 12
        assert parse_monomial("a1b2c3") in monos
        assert monos == TABLE_I


class TestJointBound:
    def test_m4_k3(self):
        assert joint_bound_value(4, 3) == Fraction(10, 3)

    def test_m6_k5(self):
        assert joint_bound_value(6, 5) == Fraction(126, 5)

    @pytest.mark.parametrize("k", [3, 4, 5, 6])
    def test_colorful_case_closed_form(self, k):
        # with m = k+1 colors the bound simplifies to C(2k-1, k) / k,
        # i.e. C(2k, k) / (2k): exponential growth in k
        assert joint_bound_value(k + 1, k) == Fraction(comb(2 * k - 1, k), k)
        assert joint_bound_value(k + 1, k) == Fraction(comb(2 * k, k), 2 * k)

    def test_algebraic_satisfies(self, algebraic_3_2):
        rep = joint_bound(algebraic_3_2, 3)
        assert rep.total_lines == 128
        assert rep.bound == Fraction(10, 3)
        assert rep.satisfied


class TestMinimality:
    def test_algebraic_minimal(self, algebraic_3_2):
        verdict = minimality_audit(algebraic_3_2, 3)
        assert verdict.minimal
        assert verdict.removable == ()

    def test_redundant_line_detected(self):
        # two colors, one line of color 1 crossed by two color-2 lines:
        # either color-2 line alone already provides every needed incidence
        cfg = ColoredGridConfig(
            2,
            2,
            [
                [GridLine(1, (0, 1, 1))],
                [GridLine(2, (1, 0, 1)), GridLine(2, (2, 0, 1))],
            ],
        )
        verdict = minimality_audit(cfg, 2)
        assert not verdict.minimal
        assert len(verdict.removable) >= 1

    def test_empty_vacuously_minimal(self):
        cfg = ColoredGridConfig(2, 2, [[], [], []])
        assert minimality_audit(cfg, 2).minimal

    def test_requires_consistency(self, algebraic_3_2):
        smaller = algebraic_3_2.without_line((1, 0))
        with pytest.raises(ValueError):
            minimality_audit(smaller, 3)


class TestFlatness:
    def test_coplanar_triple_is_flat(self):
        at = ProjPoint.affine((0, 0, 0))
        lines = [
            Line(at, ProjPoint.affine((1, 0, 0))),
            Line(at, ProjPoint.affine((0, 1, 0))),
            Line(at, ProjPoint.affine((1, 1, 0))),
        ]
        cfg = ColoredLineConfig(3, [[lines[0]], [lines[1]], [lines[2]]])
        records = flatness_audit(cfg, 3)
        assert len(records) == 1
        assert records[0].rank == 2 and records[0].flat

    def test_independent_directions_not_flat(self):
        at = ProjPoint.affine((0, 0, 0))
        lines = [
            Line(at, ProjPoint.affine((1, 0, 0))),
            Line(at, ProjPoint.affine((0, 1, 0))),
            Line(at, ProjPoint.affine((0, 0, 1))),
        ]
        cfg = ColoredLineConfig(3, [[lines[0]], [lines[1]], [lines[2]]])
        records = flatness_audit(cfg, 3)
        assert records[0].rank == 3 and not records[0].flat


class TestMonteCarlo:
    def test_golden_csv_bit_exact(self, golden_dir):
        report = monte_carlo([ProbParams(3, 32, 7)], 100)
        golden = (golden_dir / "monte_carlo_k3_n32_seed7_t100.csv").read_text()
        assert report.to_csv() == golden

    def test_summary_fields(self):
        report = monte_carlo([ProbParams(3, 8, 3)], 5)
        (s,) = report.summaries
        assert s.trials == 5
        assert 0 <= s.consistency_rate <= 1
        assert s.colorful_within_k_rate == 1.0
        assert len(s.size_quartiles) == 3

    def test_mixed_k_rejected(self):
        with pytest.raises(ValueError):
            monte_carlo([ProbParams(3, 8, 1), ProbParams(4, 4, 1)], 2)

    def test_aggregates_invariant_under_row_order(self):
        import random

        report = monte_carlo([ProbParams(3, 8, 11)], 8)
        (summary,) = report.summaries
        rows = list(report.rows)
        random.Random(0).shuffle(rows)
        rate = sum(r["consistent"] for r in rows) / len(rows)
        mean_bad = sum(r["bad_lines"] for r in rows) / len(rows)
        assert rate == summary.consistency_rate
        assert mean_bad == summary.mean_bad_lines


class TestBipartite:
    def test_empty(self):
        assert bipartite_edges([], []).edges == 0

    def test_crossing_pair(self):
        a = Line(ProjPoint.affine((0, 0, 0)), ProjPoint.affine((1, 0, 0)))
        b = Line(ProjPoint.affine((0, 0, 0)), ProjPoint.affine((0, 1, 0)))
        rep = bipartite_edges([a], [b])
        assert rep.edges == 1 and rep.k33 is None

    def test_quadric_k33_found(self):
        slits = quadric_ruling_slits()
        A = gen_two_slit(1, slits, 5, seed=2) + [
            quadric_ruling(2, (1, t)) for t in (3, 4, 5)
        ]
        B = gen_two_slit(2, slits, 5, seed=2) + [
            quadric_ruling(1, (t, 1)) for t in (3, 4, 5)
        ]
        rep = bipartite_edges(A, B)
        assert rep.k33 is not None
        (ta, tb) = rep.k33
        from incidencelab.exactgeom import meet

        for i in ta:
            for j in tb:
                assert meet(A[i], B[j]) is not None

    def test_generic_no_k33(self):
        slits = default_generic_slits()
        A = gen_two_slit(1, slits, 20, seed=8)
        B = gen_two_slit(2, slits, 20, seed=8)
        assert bipartite_edges(A, B).k33 is None
