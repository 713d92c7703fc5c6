import math

import mpmath as mp
import numpy as np
import pytest

from oracles import bracket_exact, jackson_sum, two_tail_sum
from qcalc.core import DivergenceError, GuardTripped, QDomainError, SummationControl, q_bracket
from qcalc.deriv import PolynomialRep
from qcalc.integrate import (
    GUARD_TRIPPED,
    PARTIAL,
    PointMeasure,
    Sign,
    antiderivative_at,
    bump,
    delta_eval,
    equivalent_on_lattice,
    jackson_integral,
    jackson_integral_improper,
    jackson_integral_interval,
    jackson_integral_real_line,
    jackson_measure,
    lattice_points,
    lattice_table,
    monotonicity_counterexample,
    plateau,
)

one = lambda x: 1.0
ident = lambda x: x
CTRL = SummationControl(tol=1e-14, magnitude_bound=10.0)


class TestDelta:
    def test_point_evaluation(self):
        assert delta_eval(lambda x: x * x, 3.0) == 9.0
        assert delta_eval(one, -7.0) == 1.0

    def test_finite_atom_list(self):
        m = PointMeasure(np.array([1.0, 2.0]), np.array([0.5, 0.5]))
        assert m.integrate(ident) == 1.5
        assert m.atoms == [(1.0, 0.5), (2.0, 0.5)]


class TestFinite:
    @pytest.mark.parametrize(
        "f, expected", [(one, 1.0), (ident, 0.4), (lambda x: x * x, 1 / 5.25)]
    )
    def test_examples(self, f, expected):
        res = jackson_integral(f, 0.5, 1.0)
        assert res.value == pytest.approx(expected, rel=1e-12)
        assert res.converged and not res.flags
        assert res.tail_estimate <= 1e-12

    def test_examples_against_direct_sum(self):
        for f in (one, ident, lambda x: x * x):
            assert float(jackson_sum(f, "0.5", 1, terms=60)) == pytest.approx(
                jackson_integral(f, 0.5, 1.0).value, rel=1e-13
            )

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
    @pytest.mark.parametrize("b", [0.1, 1.0, 7.0])
    def test_normalisation(self, q, b):
        assert jackson_integral(one, q, b).value == pytest.approx(b, abs=1e-10)

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
    def test_monomial_law(self, q):
        for m in range(11):
            got = jackson_integral(lambda x: x**m, q, 1.3, CTRL).value
            want = 1.3 ** (m + 1) / float(bracket_exact(m + 1, q))
            raw = float(jackson_sum(lambda x: x**m, q, "1.3", terms=200))
            assert got == pytest.approx(want, rel=1e-9)
            assert got == pytest.approx(raw, rel=1e-9)

    def test_never_samples_zero(self):
        seen = []

        def f(x):
            seen.append(x)
            return 1.0

        ctrl = SummationControl(magnitude_bound=1e300, tol=1e-300, on_divergence="return_partial_with_flag")
        res = jackson_integral(f, 0.5, 1.0, ctrl)
        assert len(seen) > 400 and min(seen) > 0
        # the deepest points underflow before the tail bound can reach tol
        assert PARTIAL in res.flags

    def test_bad_limit(self):
        with pytest.raises(QDomainError):
            jackson_integral(one, 0.5, 0.0)

    def test_guard(self):
        f = lambda x: 1.0 / x
        with pytest.raises(GuardTripped):
            jackson_integral(f, 0.5, 1.0, SummationControl(magnitude_bound=100.0))
        res = jackson_integral(
            f, 0.5, 1.0, SummationControl(magnitude_bound=100.0, on_divergence="return_partial_with_flag")
        )
        assert GUARD_TRIPPED in res.flags and not res.converged

    def test_max_terms(self):
        tight = SummationControl(max_terms=5)
        with pytest.raises(DivergenceError):
            jackson_integral(one, 0.5, 1.0, tight)
        res = jackson_integral(one, 0.5, 1.0, SummationControl(max_terms=5, on_divergence="return_partial_with_flag"))
        assert res.terms_used == 5 and PARTIAL in res.flags
        assert res.value == pytest.approx(1 - 0.25**5, rel=1e-15)

    def test_deterministic(self):
        f = lambda x: math.sin(3 * x) + x**2
        a = jackson_integral(f, 0.77, 2.0)
        b = jackson_integral(f, 0.77, 2.0)
        assert a.value.hex() == b.value.hex()

    def test_linear(self):
        f, g = math.sin, math.exp
        lhs = jackson_integral(lambda x: 2 * f(x) - g(x), 0.6, 1.5).value
        rhs = 2 * jackson_integral(f, 0.6, 1.5).value - jackson_integral(g, 0.6, 1.5).value
        assert lhs == pytest.approx(rhs, abs=1e-12)


class TestMeasure:
    @pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
    @pytest.mark.parametrize("b", [0.1, 1.0, 7.0])
    def test_weights_positive_total_mass(self, q, b):
        m = jackson_measure(q, b)
        assert np.all(m.weights > 0)
        assert m.total_mass == pytest.approx(b, abs=1e-10)

    def test_measure_matches_integral(self):
        m = jackson_measure(0.5, 2.0)
        assert m.integrate(math.cos) == jackson_integral(math.cos, 0.5, 2.0).value


class TestInterval:
    def test_examples(self):
        assert jackson_integral_interval(one, 0.5, 0.5, 1.0).value == pytest.approx(0.5, abs=1e-12)
        assert jackson_integral_interval(ident, 0.5, 0.5, 1.0).value == pytest.approx(0.3, rel=1e-12)
        assert jackson_integral_interval(math.exp, 0.5, 0.7, 0.7).value == 0.0

    def test_additivity(self):
        f = lambda x: x**3 - x
        whole = jackson_integral(f, 0.6, 2.0).value
        parts = jackson_integral(f, 0.6, 0.9).value + jackson_integral_interval(f, 0.6, 0.9, 2.0).value
        assert whole == pytest.approx(parts, abs=1e-15)

    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.5)])
    def test_rejects(self, a, b):
        with pytest.raises(QDomainError):
            jackson_integral_interval(one, 0.5, a, b)


def _split(x):
    return x if x <= 1 else x**-3


class TestImproper:
    def test_zero(self):
        assert jackson_integral_improper(lambda x: 0.0, 0.5).value == 0.0

    def test_two_tail_value(self):
        # small points sum to q^2/(1-q^4), large ones to 4/15; times 3/2 gives 0.8
        oracle = float(two_tail_sum(_split, "0.5"))
        assert oracle == pytest.approx(0.8, rel=1e-30)
        res = jackson_integral_improper(_split, 0.5, CTRL)
        assert res.converged
        assert res.value == pytest.approx(0.8, abs=1e-12)

    def test_divergent_large_tail(self):
        f = lambda x: 1.0 / x if x >= 1 else 0.0
        # oracle: raw large-tail terms never decay
        q = 0.5
        raw = [q ** (2 * n + 1) * f(q ** (2 * n + 1)) for n in range(-10, 0)]
        assert raw == [1.0] * 10
        with pytest.raises(DivergenceError, match="large-point tail"):
            jackson_integral_improper(f, q)
        res = jackson_integral_improper(f, q, SummationControl(max_terms=50, on_divergence="return_partial_with_flag"))
        assert PARTIAL in res.flags and not res.converged

    def test_gaussian_like(self):
        f = lambda x: math.exp(-x * x)
        oracle = float(two_tail_sum(lambda x: mp.exp(-x * x), "0.7", -80, 200))
        assert jackson_integral_improper(f, 0.7, CTRL).value == pytest.approx(oracle, rel=1e-12)

    def test_compact_support_stops(self):
        res = jackson_integral_improper(lambda x: 1.0 if x < 3 else 0.0, 0.5)
        assert res.converged


class TestRealLine:
    def test_odd_cancels(self):
        f = lambda x: x * math.exp(-x * x)
        assert jackson_integral_real_line(f, 0.5).value == 0.0
        assert jackson_integral_real_line(lambda x: x**3 / (1 + x**6), 0.8).value == 0.0

    def test_zero(self):
        assert jackson_integral_real_line(lambda x: 0.0, 0.5).value == 0.0

    def test_even_doubles(self):
        f = lambda x: math.exp(-x * x)
        two = jackson_integral_real_line(f, 0.5).value
        assert two == 2 * jackson_integral_improper(f, 0.5).value

    def test_negative_side_divergence_named(self):
        f = lambda x: -1.0 / x if x <= -1 else 0.0
        with pytest.raises(DivergenceError, match="negative"):
            jackson_integral_real_line(f, 0.5)


class TestAntiderivative:
    def test_examples(self):
        assert antiderivative_at(one, 0.5, 1.0) == pytest.approx(1.0, abs=1e-12)
        assert antiderivative_at(one, 0.5, 1.0, 2.5) == pytest.approx(3.5, abs=1e-12)
        assert antiderivative_at(ident, 0.5, 2.0) == pytest.approx(1.6, rel=1e-12)
        assert float(jackson_sum(ident, "0.5", 2)) == pytest.approx(1.6, rel=1e-15)


class TestLattice:
    def test_examples(self):
        lat = lattice_points(0.5, 1.0, 0, 2)
        assert lat.points.tolist() == [0.5, 0.125, 0.03125]
        assert lattice_points(0.5, 1.0, -1, -1).points.tolist() == [2.0]

    def test_scale_rejected(self):
        with pytest.raises(QDomainError):
            lattice_points(0.5, 0.0, 0, 2)
        with pytest.raises(QDomainError):
            lattice_points(0.5, 1.0, 3, 2)

    def test_both_signs_order(self):
        lat = lattice_points(0.5, 2.0, -1, 1, Sign.BOTH)
        assert lat.points.tolist() == [4.0, -4.0, 1.0, -1.0, 0.25, -0.25]
        assert lat.indices.tolist() == [-1, -1, 0, 0, 1, 1]
        assert len(set(lat.points.tolist())) == len(lat)

    def test_points_formula(self):
        lat = lattice_points(0.3, 1.7, -5, 5, "negative")
        for n, s, p in zip(lat.indices, lat.signs, lat.points):
            assert p == pytest.approx(s * 1.7 * 0.3 ** (2 * n + 1), rel=1e-15)

    def test_table_columns(self):
        rows = lattice_table(0.5, 1.0, 0, 3, f=ident)
        assert list(rows[0]) == ["n", "location", "weight", "f_value", "term"]
        assert rows[0]["weight"] == 0.75 and rows[0]["term"] == 0.375


class TestEquivalence:
    def test_same(self):
        assert equivalent_on_lattice(math.sin, math.sin, 0.5, 5)

    def test_off_lattice_bump(self):
        f = lambda x: x * x
        b = bump(0.125, 0.5)
        g = lambda x: x * x + b(x)
        assert g(0.3) > f(0.3)
        assert equivalent_on_lattice(f, g, 0.5, 10, 0.0)
        # oracle: every lattice point by hand
        for n in range(-10, 11):
            for s in (1, -1):
                p = s * 0.5 ** (2 * n + 1)
                assert f(p) == g(p)

    def test_shift_detected(self):
        assert not equivalent_on_lattice(ident, lambda x: x + 0.1, 0.5, 3, 1e-9)

    def test_depth(self):
        with pytest.raises(QDomainError):
            equivalent_on_lattice(ident, ident, 0.5, 0)


class TestCounterexample:
    def test_paper_configuration(self):
        ce = monotonicity_counterexample(0.5, 0.8, 1.0)
        grid = np.linspace(0.8, 1.0, 1000)
        assert min(ce.f_spec(x) - ce.g_spec(x) for x in grid) > 0
        assert ce.int_g - ce.int_f >= 0.1
        # term-level oracle: only the atom at q*b = 0.5 sees g, with weight 0.75
        assert ce.g_spec(0.5) == 3.0
        assert ce.int_g == pytest.approx(0.75 * 3.0, rel=1e-15)
        assert ce.int_f == pytest.approx(0.2, abs=1e-12)

    def test_plateau_avoids_lower_samples(self):
        ce = monotonicity_counterexample(0.5, 0.8, 1.0)
        for n in range(40):
            assert ce.g_spec(0.8 * 0.5 ** (2 * n + 1)) == 0.0

    def test_swapped(self):
        ce = monotonicity_counterexample(0.5, 0.8, 1.0, swap=True)
        grid = np.linspace(0.8, 1.0, 1000)
        assert all(ce.g_spec(x) > ce.f_spec(x) for x in grid)
        assert ce.int_f > ce.int_g

    @pytest.mark.parametrize("q, a, b", [(0.9, 0.85, 1.0), (0.3, 0.2, 1.0), (0.7, 1.5, 2.0), (0.5, 0.3, 1.0)])
    def test_other_parameters(self, q, a, b):
        ce = monotonicity_counterexample(q, a, b)
        grid = np.linspace(a, b, 1000)
        assert all(ce.f_spec(x) > ce.g_spec(x) for x in grid)
        assert ce.int_g - ce.int_f >= 0.1

    @pytest.mark.parametrize("a, b", [(0.2, 1.0), (1.0, 0.8), (0.0, 1.0)])
    def test_precondition(self, a, b):
        with pytest.raises(QDomainError):
            monotonicity_counterexample(0.5, a, b)


def test_helpers():
    assert plateau(1.0, 2.0, 3.0)(1.0) == 3.0 and plateau(1.0, 2.0, 3.0)(2.1) == 0.0
    b = bump(0.0, 2.0, 5.0)
    assert b(1.0) == 5.0 and b(0.0) == 0.0 and b(2.0) == 0.0


def test_polynomial_evaluator_integrates():
    p = PolynomialRep([1, 0, 3])
    want = 1.0 + 3.0 / q_bracket(3, 0.5)
    assert jackson_integral(p, 0.5, 1.0).value == pytest.approx(want, rel=1e-12)
