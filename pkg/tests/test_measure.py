import math
from fractions import Fraction

import numpy as np
import pytest

from bernsum.measure import (
    LogMeasure,
    density_l,
    dirichlet_pdf,
    dist_sup,
    dist_tv,
    maximal_pmf,
    normalizing_constant,
    polytope_measure,
    simplex_hausdorff,
)
from bernsum.pmf import SumPmf

from oracles import quad_simplex

B_HALF_3 = SumPmf([0.125, 0.375, 0.375, 0.125])


def pmf_at(coords) -> SumPmf:
    last = 1.0 - math.fsum(coords)
    return SumPmf([max(float(c), 0.0) for c in coords] + [max(last, 0.0)])


def random_interior_pmf(rng: np.random.Generator, d: int) -> SumPmf:
    vals = rng.dirichlet(np.ones(d + 1))
    return SumPmf(tuple(vals / vals.sum()))


class TestLogMeasure:
    def test_construction_and_value(self):
        m = LogMeasure.from_value(0.5)
        assert math.isclose(m.value, 0.5)
        assert LogMeasure.from_value(0.0).is_zero
        assert LogMeasure.zero().value == 0.0
        assert LogMeasure.one().log == 0.0
        with pytest.raises(ValueError):
            LogMeasure.from_value(-1.0)

    def test_product_and_ratio(self):
        a = LogMeasure.from_value(2.0)
        b = LogMeasure.from_value(3.0)
        assert math.isclose((a * b).value, 6.0)
        assert math.isclose((b / a).value, 1.5)
        assert (a * LogMeasure.zero()).is_zero
        with pytest.raises(ZeroDivisionError):
            a / LogMeasure.zero()


class TestSimplexHausdorff:
    def test_zero_dimension_is_one(self):
        assert simplex_hausdorff(0, 0.3).value == 1.0
        assert simplex_hausdorff(0, 0.0).value == 1.0

    def test_segment_and_triangle(self):
        assert math.isclose(simplex_hausdorff(1, 1.0).value, math.sqrt(2), rel_tol=1e-14)
        assert math.isclose(simplex_hausdorff(2, 1.0).value, math.sqrt(3) / 2, rel_tol=1e-14)

    def test_degenerate_side(self):
        assert simplex_hausdorff(3, 0.0).is_zero

    def test_input_guards(self):
        with pytest.raises(ValueError):
            simplex_hausdorff(-1, 0.5)
        with pytest.raises(ValueError):
            simplex_hausdorff(2, -0.5)


class TestPolytopeMeasure:
    def test_d2_segment(self):
        m = polytope_measure(SumPmf([0.25, 0.5, 0.25]))
        assert math.isclose(m["ambient"].value, math.sqrt(2) / 2, rel_tol=1e-14)
        assert math.isclose(m["intrinsic"].value, math.sqrt(2) / 2, rel_tol=1e-14)

    def test_point_mass_mid_level(self):
        m = polytope_measure(SumPmf([0, 1, 0, 0]))
        assert m["ambient"].is_zero
        assert math.isclose(m["intrinsic"].value, math.sqrt(3) / 2, rel_tol=1e-14)

    def test_symmetric_binomial_d3(self):
        m = polytope_measure(B_HALF_3)
        closed_form = (3 / 8) ** 4 * 3 / 4
        assert math.isclose(m["ambient"].log, math.log(closed_form), rel_tol=1e-12)
        assert math.isclose(m["ambient"].value, 0.01483154296875, rel_tol=1e-12)

    def test_ambient_factorizes_through_density(self):
        rng = np.random.default_rng(61)
        for d in range(2, 11):
            p = random_interior_pmf(rng, d)
            ambient = polytope_measure(p)["ambient"]
            halves = sum(0.5 * math.log(math.comb(d, k)) for k in range(d + 1))
            expected = density_l(p).log + halves
            assert math.isclose(ambient.log, expected, rel_tol=1e-10, abs_tol=1e-10)


class TestDensity:
    def test_d2_collapses_to_middle_coordinate(self):
        p = SumPmf([0.3, 0.45, 0.25])
        assert math.isclose(density_l(p).value, 0.45, rel_tol=1e-14)

    def test_mode_value_d3(self):
        assert math.isclose(density_l(maximal_pmf(3)).value, 1 / 64, rel_tol=1e-14)

    def test_zero_on_missing_supported_block(self):
        assert density_l(SumPmf([0.5, 0, 0, 0.5])).is_zero


class TestNormalizingConstant:
    def test_d1_segment_length(self):
        assert math.isclose(normalizing_constant(1).value, math.sqrt(2), rel_tol=1e-14)

    def test_d2_exact_third(self):
        assert math.isclose(normalizing_constant(2).value, 1 / 3, rel_tol=1e-14)

    def test_d3_value(self):
        assert math.isclose(normalizing_constant(3).value, math.sqrt(8) / 5040, rel_tol=1e-14)

    @pytest.mark.parametrize("d,tol", [(1, 1e-12), (2, 1e-9), (3, 1e-6)])
    def test_quadrature_identity(self, d, tol):
        total, err = quad_simplex(lambda coords: density_l(pmf_at(coords)).value, d, nodes=16)
        assert err < tol
        assert math.isclose(math.sqrt(2**d) * total, normalizing_constant(d).value, abs_tol=tol)

    def test_guard(self):
        with pytest.raises(ValueError):
            normalizing_constant(0)


class TestDirichletPdf:
    def test_d2_closed_form(self):
        assert math.isclose(dirichlet_pdf(SumPmf([0.25, 0.5, 0.25])), 3.0, rel_tol=1e-12)

    def test_d1_uniform(self):
        assert math.isclose(dirichlet_pdf(SumPmf([0.3, 0.7])), 1.0, rel_tol=1e-12)

    def test_boundary_zero(self):
        assert dirichlet_pdf(SumPmf([0.5, 0.0, 0.5])) == 0.0

    @pytest.mark.parametrize("d,tol", [(1, 1e-9), (2, 1e-9), (3, 1e-6)])
    def test_integrates_to_one(self, d, tol):
        total, err = quad_simplex(lambda coords: dirichlet_pdf(pmf_at(coords)), d, nodes=16)
        assert err < tol
        assert math.isclose(total, 1.0, abs_tol=10 * tol)

    def test_proportional_to_density(self):
        rng = np.random.default_rng(67)
        for _ in range(100):
            d = int(rng.integers(1, 7))
            p = random_interior_pmf(rng, d)
            lhs = density_l(p).log + 0.5 * d * math.log(2) - normalizing_constant(d).log
            rhs = math.log(dirichlet_pdf(p))
            assert math.isclose(lhs, rhs, rel_tol=1e-10, abs_tol=1e-10)

    def test_mean_is_symmetric_binomial(self):
        for d in (2, 3, 5):
            alphas = [math.comb(d, k) for k in range(d + 1)]
            mean = [a / sum(alphas) for a in alphas]
            binom = [math.comb(d, k) / 2**d for k in range(d + 1)]
            assert mean == binom


class TestMaximalPmf:
    def test_small_dimensions(self):
        assert maximal_pmf(2).values == (0, Fraction(1), 0)
        assert maximal_pmf(3).values == (0, Fraction(1, 2), Fraction(1, 2), 0)
        assert maximal_pmf(4).values == (
            0, Fraction(3, 11), Fraction(5, 11), Fraction(3, 11), 0,
        )

    def test_guard(self):
        with pytest.raises(ValueError):
            maximal_pmf(1)

    def test_beats_random_search(self):
        rng = np.random.default_rng(71)
        for d in range(2, 9):
            n_k = np.array([math.comb(d, k) - 1 for k in range(d + 1)], dtype=float)
            cols = n_k > 0
            const = sum(math.lgamma(v + 1) for v in n_k[cols])
            best = density_l(maximal_pmf(d)).log
            samples = rng.dirichlet(np.ones(d + 1), size=10_000)
            with np.errstate(divide="ignore"):
                logs = (np.log(samples[:, cols]) * n_k[cols]).sum(axis=1) - const
            assert np.all(logs <= best + 1e-12)


class TestDistances:
    def test_identical(self):
        assert dist_tv(B_HALF_3, B_HALF_3) == 0.0
        assert dist_sup(B_HALF_3, B_HALF_3) == 0.0

    def test_disjoint_point_masses(self):
        a = SumPmf([1, 0, 0, 0])
        b = SumPmf([0, 0, 0, 1])
        assert dist_tv(a, b) == 1.0
        assert dist_sup(a, b) == 1.0

    def test_binomial_vs_mode_d3(self):
        pm = maximal_pmf(3)
        assert math.isclose(dist_tv(B_HALF_3, pm), 0.25, rel_tol=1e-14)
        assert math.isclose(dist_sup(B_HALF_3, pm), 0.125, rel_tol=1e-14)

    def test_sup_below_tv(self):
        rng = np.random.default_rng(73)
        for _ in range(10_000):
            d = int(rng.integers(1, 6))
            p = random_interior_pmf(rng, d)
            q = random_interior_pmf(rng, d)
            assert dist_sup(p, q) <= dist_tv(p, q) + 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dist_tv(B_HALF_3, SumPmf([0.5, 0.5]))
