import math

import numpy as np
import pytest

from slabmodes.numerics import (
    ContourPath,
    InvalidIntervalError,
    MaxSubdivisionError,
    contour_integral,
    derivative_5pt,
    integrate_2d,
    integrate_adaptive,
    scan_roots,
    winding_number,
)


class TestScanRoots:
    def test_sine_zeros(self):
        roots = scan_roots(math.sin, 0.1, 10.0, n_grid=1000, tol=1e-12)
        assert len(roots) == 3
        for got, m in zip(roots, (1, 2, 3)):
            assert got == pytest.approx(m * math.pi, abs=1e-12)

    def test_no_real_roots(self):
        assert scan_roots(lambda x: x * x + 1.0, -5.0, 5.0) == []

    def test_invalid_interval(self):
        with pytest.raises(InvalidIntervalError):
            scan_roots(math.sin, 2.0, 1.0)
        with pytest.raises(InvalidIntervalError):
            scan_roots(math.sin, 0.0, 1.0, n_grid=1)

    def test_skips_non_finite_cells(self):
        f = lambda x: 1.0 / (x - 0.5) if abs(x - 0.5) > 1e-300 else math.nan
        roots = scan_roots(f, 0.0, 1.0, n_grid=101)
        # the pole is not a root; adjacent cells are discarded
        assert all(abs(r - 0.5) > 1e-3 for r in roots)

    def test_root_quality(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a, b, c = rng.uniform(0.5, 2.0, 3)
            f = lambda x: math.sin(a * x) - c * 0.3 * math.cos(b * x)
            roots = scan_roots(f, 0.0, 12.0, n_grid=2000, tol=1e-12)
            for r in roots:
                assert abs(f(r)) <= max(abs(f(r - 1e-12)), abs(f(r + 1e-12))) + 1e-14


class TestIntegrateAdaptive:
    def test_polynomial(self):
        res = integrate_adaptive(lambda x: x ** 2, 0.0, 1.0)
        assert res.value == pytest.approx(1.0 / 3.0, rel=1e-14)
        assert res.evaluations > 0

    def test_exponential_tail(self):
        res = integrate_adaptive(lambda x: np.exp(-x), 0.0, math.inf)
        assert res.value == pytest.approx(1.0, rel=1e-12)

    def test_bose_integral(self):
        # int_0^inf 2y/(e^{2y} - 1) dy = pi^2/12
        f = lambda y: 2.0 * y / np.expm1(2.0 * y) if np.ndim(y) == 0 else \
            np.where(y > 0, 2.0 * y / np.expm1(2.0 * y), 1.0)
        with np.errstate(over="ignore"):
            res = integrate_adaptive(f, 1e-12, math.inf)
        assert res.value == pytest.approx(math.pi ** 2 / 12.0, rel=1e-10)

    def test_high_degree_exactness(self):
        # a single Kronrod panel integrates degree <= 22 exactly
        res = integrate_adaptive(lambda x: 23.0 * x ** 22, 0.0, 1.0, rel_tol=1e-13)
        assert res.value == pytest.approx(1.0, rel=1e-13)

    def test_linearity(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            a, b = rng.uniform(-2.0, 2.0, 2)
            f = lambda x: np.sin(3.0 * x)
            g = lambda x: np.exp(-x * x)
            lhs = integrate_adaptive(lambda x: a * f(x) + b * g(x), 0.0, 2.0)
            rhs_f = integrate_adaptive(f, 0.0, 2.0)
            rhs_g = integrate_adaptive(g, 0.0, 2.0)
            combined = a * rhs_f.value + b * rhs_g.value
            budget = lhs.error_estimate + abs(a) * rhs_f.error_estimate \
                + abs(b) * rhs_g.error_estimate + 1e-13
            assert abs(lhs.value - combined) <= budget

    def test_max_subdivision_reports_estimate(self):
        f = lambda x: abs(x - 1.0 / 3.0) ** -0.9 if np.ndim(x) == 0 else \
            np.abs(x - 1.0 / 3.0) ** -0.9
        with pytest.raises(MaxSubdivisionError) as excinfo:
            with np.errstate(divide="ignore", over="ignore"):
                integrate_adaptive(f, 0.0, 1.0, rel_tol=1e-13, max_intervals=40)
        assert math.isfinite(excinfo.value.error_estimate)


class TestIntegrate2D:
    def test_separable_exponential(self):
        res = integrate_2d(lambda R, y: np.exp(-R - y), math.inf, math.inf)
        assert res.value == pytest.approx(1.0, rel=1e-8)

    def test_zero(self):
        res = integrate_2d(lambda R, y: 0.0 * np.asarray(y), 3.0, 3.0)
        assert res.value == 0.0

    def test_conductor_limit_integrand(self):
        # int R dR int Omega'' dln F = pi^4/360 (twice this is pi^4/180)
        def f(R, y):
            q = np.hypot(R, y)
            with np.errstate(over="ignore"):
                return 2.0 * y ** 2 / (q * np.expm1(2.0 * q))
        res = integrate_2d(f, math.inf, math.inf, rel_tol=1e-9)
        assert res.value == pytest.approx(math.pi ** 4 / 360.0, rel=1e-7)


class TestContours:
    def test_unit_circle_residue(self):
        res = contour_integral(lambda z: 1.0 / z, ContourPath.circle(0.0, 1.0),
                               rel_tol=1e-12)
        assert abs(res.value - 2j * math.pi) < 1e-10

    def test_polynomial_over_rectangle(self):
        path = ContourPath.rectangle(-1.0 - 1.0j, 2.0 + 1.5j)
        res = contour_integral(lambda z: z ** 3 - 2.0 * z + 1.0, path, rel_tol=1e-13)
        assert abs(res.value) < 1e-12

    def test_winding_counts_zeros(self):
        f = lambda z: (z - 0.3) * (z + 0.4j) * (z - 2.0)
        fp = lambda z: (z + 0.4j) * (z - 2.0) + (z - 0.3) * (z - 2.0) \
            + (z - 0.3) * (z + 0.4j)
        res = winding_number(f, ContourPath.circle(0.0, 1.0), fprime=fp)
        assert res.count == 2
        assert res.residual < 1e-3

    def test_winding_numerical_derivative(self):
        res = winding_number(lambda z: np.sin(z), ContourPath.circle(0.1, 1.0))
        assert res.count == 1 and res.residual < 1e-3

    def test_open_path_rejected(self):
        path = ContourPath.polyline([0.0, 1.0 + 1.0j])
        with pytest.raises(ValueError):
            winding_number(lambda z: z, path)


def test_derivative_5pt():
    assert derivative_5pt(math.sin, 0.7) == pytest.approx(math.cos(0.7), rel=1e-9)
