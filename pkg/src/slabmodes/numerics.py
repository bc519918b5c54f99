"""Shared numerical kernels: root bracketing, adaptive Gauss-Kronrod quadrature
on finite and semi-infinite intervals, iterated 2D quadrature, and complex
contour integration with winding-number extraction.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "QuadratureResult",
    "ContourPath",
    "WindingResult",
    "InvalidIntervalError",
    "NonConvergenceError",
    "MaxSubdivisionError",
    "scan_roots",
    "integrate_adaptive",
    "integrate_2d",
    "contour_integral",
    "winding_number",
    "derivative_5pt",
]

# 15-point Kronrod nodes/weights on [-1, 1] with the embedded 7-point Gauss
# weights (zero where the node is Kronrod-only).
_XGK = np.array([
    -0.99145537112081263921, -0.94910791234275852453, -0.86486442335976907279,
    -0.74153118559939443986, -0.58608723546769113029, -0.40584515137739716691,
    -0.20778495500789846760, 0.0,
    0.20778495500789846760, 0.40584515137739716691, 0.58608723546769113029,
    0.74153118559939443986, 0.86486442335976907279, 0.94910791234275852453,
    0.99145537112081263921,
])
_WGK = np.array([
    0.022935322010529224964, 0.063092092629978553291, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801, 0.20443294007529889241,
    0.19035057806478540991, 0.16900472663926790283, 0.14065325971552591875,
    0.10479001032225018384, 0.063092092629978553291, 0.022935322010529224964,
])
_WG = np.array([
    0.0, 0.12948496616886969327, 0.0, 0.27970539148927666790, 0.0,
    0.38183005050511894495, 0.0, 0.41795918367346938776, 0.0,
    0.38183005050511894495, 0.0, 0.27970539148927666790, 0.0,
    0.12948496616886969327, 0.0,
])


class InvalidIntervalError(ValueError):
    """Scan or integration interval is empty or malformed."""


class NonConvergenceError(RuntimeError):
    """Root refinement failed to converge within the iteration budget."""


class MaxSubdivisionError(RuntimeError):
    """Adaptive quadrature hit the subdivision cap; carries the best estimate."""

    def __init__(self, message, estimate, error_estimate, evaluations):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate
        self.evaluations = evaluations


@dataclass
class QuadratureResult:
    """Value of an integral with an adaptive-scheme error heuristic."""

    value: complex | float | np.ndarray
    error_estimate: float
    evaluations: int


class _Evaluator:
    """Calls f on node arrays, falling back to per-point evaluation for
    scalar-only callables.  Tracks the evaluation count."""

    def __init__(self, f: Callable):
        self.f = f
        self.count = 0
        self._vectorized: bool | None = None

    def __call__(self, xs: np.ndarray) -> np.ndarray:
        self.count += len(xs)
        if self._vectorized is None:
            try:
                out = np.asarray(self.f(xs))
                if out.shape[: xs.ndim] == xs.shape:
                    self._vectorized = True
                    return out
            except Exception:
                pass
            self._vectorized = False
        if self._vectorized:
            return np.asarray(self.f(xs))
        return np.asarray([self.f(float(x)) for x in xs])


def _gk15_panel(ev: _Evaluator, a: float, b: float):
    """One Gauss-Kronrod panel on [a, b]: returns (K15 value, error estimate)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = ev(mid + half * _XGK)
    # values may be scalar, complex or a trailing vector axis
    k15 = half * np.tensordot(_WGK, fx, axes=(0, 0))
    g7 = half * np.tensordot(_WG, fx, axes=(0, 0))
    diff = np.max(np.abs(np.atleast_1d(k15 - g7)))
    # QUADPACK-style sharpened estimate: the raw K15-G7 difference is usually
    # pessimistic once the panel resolves the integrand
    err = float((200.0 * diff) ** 1.5 if 200.0 * diff < 1.0 else diff)
    return k15, err


def _adaptive_core(ev: _Evaluator, a: float, b: float, rel_tol: float,
                   abs_tol: float, max_intervals: int):
    value, err = _gk15_panel(ev, a, b)
    heap = [(-err, 0, a, b, value, err)]
    frozen = []  # intervals already at floating-point resolution
    counter = 1
    total_err = err

    def current_total():
        # deterministic summation in left-to-right panel order
        panels = sorted([(it[2], it[4]) for it in heap] + [(fr[0], fr[2]) for fr in frozen])
        vals = [p[1] for p in panels]
        if isinstance(vals[0], np.ndarray):
            return np.sum(np.stack(vals), axis=0)
        return complex(math.fsum(v.real for v in map(complex, vals)),
                       math.fsum(v.imag for v in map(complex, vals)))

    while True:
        total = current_total()
        mag = float(np.max(np.abs(np.atleast_1d(total))))
        if not isinstance(total, np.ndarray) and total.imag == 0.0:
            total = total.real
        bound = max(abs_tol, rel_tol * mag)
        if total_err <= bound or not heap:
            return total, total_err
        if len(heap) + len(frozen) >= max_intervals:
            raise MaxSubdivisionError(
                f"adaptive quadrature did not reach tol={rel_tol} within "
                f"{max_intervals} intervals (err={total_err:.3e})",
                estimate=total, error_estimate=total_err, evaluations=ev.count)
        _, _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # cannot subdivide further; keep the value, demote the error to roundoff
            total_err -= e
            e_round = 1e-16 * float(np.max(np.abs(np.atleast_1d(v))))
            total_err += e_round
            frozen.append((lo, hi, v, e_round))
            continue
        total_err -= e
        for lo2, hi2 in ((lo, mid), (mid, hi)):
            v2, e2 = _gk15_panel(ev, lo2, hi2)
            heapq.heappush(heap, (-e2, counter, lo2, hi2, v2, e2))
            total_err += e2
            counter += 1


def integrate_adaptive(f: Callable, a: float, b: float, rel_tol: float = 1e-10,
                       abs_tol: float = 0.0, max_intervals: int = 4000) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of f over [a, b]; b may be +inf.

    The semi-infinite case applies x = a + t/(1-t) on t in [0, 1), which is
    adequate for integrands with super-algebraic decay.  f may be scalar- or
    array-valued and is called on arrays of nodes when it supports that.
    """
    if not (b > a):
        if b == a:
            return QuadratureResult(0.0, 0.0, 0)
        raise InvalidIntervalError(f"invalid interval [{a}, {b}]")
    ev = _Evaluator(f)
    if math.isinf(b):
        def mapped(t):
            vals = np.asarray(ev(a + t / (1.0 - t)))
            jac = (1.0 - t) ** -2
            if vals.ndim > np.ndim(t):
                jac = np.reshape(jac, np.shape(t) + (1,) * (vals.ndim - np.ndim(t)))
            return vals * jac

        base = _Evaluator(mapped)
        base._vectorized = True
        value, err = _adaptive_core(base, 0.0, 1.0, rel_tol, abs_tol, max_intervals)
    else:
        value, err = _adaptive_core(ev, a, b, rel_tol, abs_tol, max_intervals)
    out = value
    if isinstance(out, np.ndarray) and out.ndim == 0:
        out = out.item()
    if isinstance(out, complex) and out.imag == 0.0:
        out = out.real
    return QuadratureResult(out, err, ev.count)


def integrate_2d(f: Callable, r_max: float, y_max: float, rel_tol: float = 1e-8,
                 max_intervals: int = 4000) -> QuadratureResult:
    """Iterated integral  int_0^{r_max} R dR int_0^{y_max} f(R, y) dy.

    Outer and inner integrals both use the adaptive kernel; the error
    estimate combines the outer estimate with the accumulated inner
    estimates in quadrature.
    """
    inner_tol = rel_tol / 4.0
    inner_err_frac = [0.0]
    evals = [0]

    def outer_integrand(R: float) -> float:
        res = integrate_adaptive(lambda y: f(R, y), 0.0, y_max,
                                 rel_tol=inner_tol, max_intervals=max_intervals)
        evals[0] += res.evaluations
        if res.value != 0.0:
            inner_err_frac[0] = max(inner_err_frac[0],
                                    res.error_estimate / abs(res.value))
        return R * res.value

    outer = integrate_adaptive(outer_integrand, 0.0, r_max, rel_tol=rel_tol,
                               max_intervals=max_intervals)
    err = math.hypot(outer.error_estimate, inner_err_frac[0] * abs(outer.value))
    return QuadratureResult(outer.value, err, outer.evaluations + evals[0])


def scan_roots(f: Callable[[float], float], a: float, b: float,
               n_grid: int = 1000, tol: float = 1e-12) -> list[float]:
    """All sign-change roots of f on [a, b] from an n_grid-point scan.

    Each bracket is refined by Brent's method to |dx| < tol.  Grid points
    with non-finite f are skipped together with their adjacent cells.  Roots
    of even multiplicity (no sign change) are not found.
    """
    if not (b > a) or n_grid < 2:
        raise InvalidIntervalError(f"invalid scan interval [{a}, {b}] with n_grid={n_grid}")
    xs = np.linspace(a, b, n_grid)
    ev = _Evaluator(f)
    fs = np.asarray(ev(xs), dtype=float)
    roots: list[float] = []
    for i in range(n_grid - 1):
        f0, f1 = fs[i], fs[i + 1]
        if not (np.isfinite(f0) and np.isfinite(f1)):
            continue
        if f0 == 0.0:
            if not roots or abs(xs[i] - roots[-1]) > tol:
                roots.append(float(xs[i]))
            continue
        if f0 * f1 < 0.0:
            try:
                root = brentq(f, xs[i], xs[i + 1], xtol=tol, rtol=1e-15, maxiter=200)
            except RuntimeError as exc:
                raise NonConvergenceError(
                    f"root refinement failed in [{xs[i]}, {xs[i+1]}]: {exc}") from exc
            roots.append(float(root))
    if np.isfinite(fs[-1]) and fs[-1] == 0.0:
        if not roots or abs(xs[-1] - roots[-1]) > tol:
            roots.append(float(xs[-1]))
    return roots


@dataclass(frozen=True)
class ContourPath:
    """A polyline (optionally closed) or a circle in the complex plane.

    Circles are positively (counter-clockwise) oriented unless
    orientation=-1.
    """

    kind: str
    vertices: tuple = field(default=())
    center: complex = 0j
    radius: float = 0.0
    closed: bool = False
    orientation: int = 1

    @classmethod
    def polyline(cls, vertices: Sequence[complex], closed: bool = False) -> "ContourPath":
        verts = tuple(complex(v) for v in vertices)
        if len(verts) < 2:
            raise ValueError("polyline needs at least 2 vertices")
        return cls(kind="polyline", vertices=verts, closed=closed)

    @classmethod
    def rectangle(cls, corner0: complex, corner1: complex) -> "ContourPath":
        """Closed counter-clockwise rectangle with opposite corners corner0, corner1."""
        x0, x1 = sorted((corner0.real, corner1.real))
        y0, y1 = sorted((corner0.imag, corner1.imag))
        if x0 == x1 or y0 == y1:
            raise ValueError("degenerate rectangle")
        verts = (complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1))
        return cls(kind="polyline", vertices=verts, closed=True)

    @classmethod
    def circle(cls, center: complex, radius: float, orientation: int = 1) -> "ContourPath":
        if radius <= 0:
            raise ValueError("circle radius must be positive")
        return cls(kind="circle", center=complex(center), radius=float(radius),
                   orientation=1 if orientation >= 0 else -1)

    def segments(self):
        if self.kind != "polyline":
            raise ValueError("segments are defined for polylines only")
        verts = list(self.vertices)
        if self.closed:
            verts.append(verts[0])
        return list(zip(verts[:-1], verts[1:]))

    @property
    def is_closed(self) -> bool:
        return self.kind == "circle" or self.closed


def contour_integral(f: Callable[[complex], complex], path: ContourPath,
                     rel_tol: float = 1e-10, abs_tol: float = 1e-13) -> QuadratureResult:
    """Integral of f along the path by adaptive quadrature per segment."""
    total = 0j
    err = 0.0
    evals = 0
    if path.kind == "circle":
        c, r, s = path.center, path.radius, path.orientation

        def g(theta):
            z = c + r * np.exp(1j * s * np.asarray(theta))
            return f(z) * (1j * s * r * np.exp(1j * s * np.asarray(theta)))

        res = integrate_adaptive(g, 0.0, 2.0 * math.pi, rel_tol=rel_tol, abs_tol=abs_tol)
        total, err, evals = res.value, res.error_estimate, res.evaluations
    else:
        for z0, z1 in path.segments():
            dz = z1 - z0

            def g(t, z0=z0, dz=dz):
                return f(z0 + np.asarray(t) * dz) * dz

            res = integrate_adaptive(g, 0.0, 1.0, rel_tol=rel_tol, abs_tol=abs_tol)
            total += res.value
            err += res.error_estimate
            evals += res.evaluations
    if not np.all(np.isfinite([total.real, total.imag])):
        raise NonConvergenceError("non-finite contour integrand on path")
    return QuadratureResult(total, err, evals)


@dataclass(frozen=True)
class WindingResult:
    """Integer winding count, the raw contour value, and |raw - count|."""

    count: int
    raw: complex
    residual: float

    @property
    def ok(self) -> bool:
        return self.residual <= 0.1


def winding_number(f: Callable[[complex], complex], path: ContourPath,
                   fprime: Callable[[complex], complex] | None = None,
                   rel_tol: float = 1e-9) -> WindingResult:
    """Zero count of f inside a closed path via (1/2 pi i) oint f'/f dz.

    With fprime omitted, the logarithmic derivative uses a central
    difference with step scaled to the path size.
    """
    if not path.is_closed:
        raise ValueError("winding number requires a closed path")
    if fprime is None:
        scale = path.radius if path.kind == "circle" else max(
            abs(v - path.vertices[0]) for v in path.vertices[1:])
        h = 1e-6 * max(scale, 1e-6)

        def logdf(z):
            return (f(z + h) - f(z - h)) / (2.0 * h) / f(z)
    else:
        def logdf(z):
            return fprime(z) / f(z)

    res = contour_integral(logdf, path, rel_tol=rel_tol, abs_tol=1e-11)
    raw = res.value / (2j * math.pi)
    count = int(round(raw.real))
    residual = abs(raw - count)
    return WindingResult(count=count, raw=raw, residual=residual)


def derivative_5pt(f: Callable[[float], float], x: float, h: float | None = None) -> float:
    """Fourth-order central difference derivative with default step
    h = 1e-6 * max(1, |x|)."""
    if h is None:
        h = 1e-6 * max(1.0, abs(x))
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h)
