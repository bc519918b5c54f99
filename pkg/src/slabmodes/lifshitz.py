"""Lifshitz functional core: the slab response function F, its imaginary-axis
double integral, the real-axis spectral summation (pole sum plus phase
integral), the contour identity connecting them, and physical interaction
energies and pressures.

Dimensionless bookkeeping: I_imag = 2 int_0^R0 R dR int_0^rho Omega''
d/dOmega'' ln F(i Omega'') dOmega'', and the real-axis counterpart carries
the -2 pi prefactor, so both converge to the same number as the cutoffs
grow.  The interaction energy per unit area of one polarization is
U^s = -(hbar c / Lz^3) W0 I^s with W0 = 1/(8 pi^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import media, openmodes
from .media import (
    ConstantDielectric,
    PerfectConductor,
    PermittivityModel,
    Plasma,
    UnsupportedModelError,
    branch_points,
    chi_continued,
    dchi_continued,
    model_spec,
)
from .numerics import ContourPath, MaxSubdivisionError, QuadratureResult, \
    contour_integral, integrate_2d, integrate_adaptive

__all__ = [
    "HBAR",
    "C_LIGHT",
    "W0",
    "LifshitzResult",
    "SpectralSummation",
    "CauchyReport",
    "DensityOfStates",
    "PhysicalSetup",
    "InteractionEnergyResult",
    "F_value",
    "dF_value",
    "imag_axis_integrand",
    "imag_axis_log",
    "I_imag",
    "I_real",
    "cauchy_identity",
    "interaction_energy",
    "density_of_states",
]

HBAR = 1.054571817e-34   # J s
C_LIGHT = 299792458.0    # m / s
W0 = 1.0 / (8.0 * math.pi ** 2)   # normalization reproducing the conductor limit


# ---------------------------------------------------------------------------
# the slab function F and its analytic continuation

def F_value(s: str, omega: complex, R_t: float, model: PermittivityModel) -> complex:
    """F = 1 - r^2 e^{2 i chi_II} with the Fresnel-type interface ratio r.

    Uses the upper-half-plane branch of the chi's; the lower half-plane is
    the Schwarz reflection conj(F(conj Omega)).  The perfect conductor is
    the r -> 1 limit, F = 1 - e^{2 i chi_II}.
    """
    omega = complex(omega)
    if omega.imag < 0:
        return F_value(s, omega.conjugate(), R_t, model).conjugate()
    chi2 = chi_continued(model, "II", omega, R_t)
    if isinstance(model, PerfectConductor):
        return 1.0 - np.exp(2j * chi2)
    chi1 = chi_continued(model, "I", omega, R_t)
    w = media.kappa(model, omega) if s == "TM" else 1.0
    r = (chi1 - w * chi2) / (chi1 + w * chi2)
    return 1.0 - r * r * np.exp(2j * chi2)


def dF_value(s: str, omega: complex, R_t: float, model: PermittivityModel) -> complex:
    """Analytic derivative dF/dOmega on the same branch as :func:`F_value`."""
    omega = complex(omega)
    if omega.imag < 0:
        return dF_value(s, omega.conjugate(), R_t, model).conjugate()
    chi2 = chi_continued(model, "II", omega, R_t)
    dchi2 = dchi_continued(model, "II", omega, R_t)
    ph = np.exp(2j * chi2)
    if isinstance(model, PerfectConductor):
        return -2j * dchi2 * ph
    chi1 = chi_continued(model, "I", omega, R_t)
    dchi1 = dchi_continued(model, "I", omega, R_t)
    if s == "TM":
        w = media.kappa(model, omega)
        if isinstance(model, Plasma):
            dw = 2.0 * model.xi / omega ** 3
        else:
            dw = 0.0
    else:
        w, dw = 1.0, 0.0
    num = chi1 - w * chi2
    den = chi1 + w * chi2
    r = num / den
    dnum = dchi1 - dw * chi2 - w * dchi2
    dden = dchi1 + dw * chi2 + w * dchi2
    dr = (dnum * den - num * dden) / (den * den)
    return -ph * (2.0 * r * dr + 2j * dchi2 * r * r)


def _q_values(model, omega_pp, R_t):
    """(q_I, q_II) = -i chi on the imaginary axis, both real positive."""
    omega_pp = np.asarray(omega_pp, dtype=float)
    q2 = np.hypot(omega_pp, R_t)
    if isinstance(model, ConstantDielectric):
        q1 = np.sqrt(R_t * R_t + model.xi * omega_pp ** 2)
    elif isinstance(model, Plasma):
        q1 = np.sqrt(R_t * R_t + model.xi + omega_pp ** 2)
    else:
        q1 = None
    return q1, q2


def imag_axis_log(s: str, omega_pp, R_t: float, model: PermittivityModel):
    """ln F(i Omega'') for real Omega'' >= 0 (real for these models)."""
    omega_pp = np.asarray(omega_pp, dtype=float)
    q1, q2 = _q_values(model, omega_pp, R_t)
    if isinstance(model, PerfectConductor):
        return np.log1p(-np.exp(-2.0 * q2))
    if q1 is None:
        raise UnsupportedModelError(f"no imaginary-axis form for {model!r}")
    if s == "TM":
        if isinstance(model, ConstantDielectric):
            w = np.full_like(q2, model.xi)
        else:
            with np.errstate(divide="ignore"):
                w = 1.0 + model.xi / omega_pp ** 2
        # divide through by w so the plasma w -> inf limit at Omega'' = 0
        # stays finite (r -> -1)
        with np.errstate(divide="ignore"):
            qw = q1 / w
        r = (qw - q2) / (qw + q2)
    else:
        r = (q1 - q2) / (q1 + q2)
    return np.log1p(-r * r * np.exp(-2.0 * q2))


def imag_axis_integrand(s: str, omega_pp, R_t: float,
                        model: PermittivityModel):
    """Omega'' d/dOmega'' ln F(i Omega''), real, vanishing at Omega'' = 0."""
    omega_pp = np.asarray(omega_pp, dtype=float)
    scalar = omega_pp.ndim == 0
    x = np.atleast_1d(omega_pp).astype(float)
    q1, q2 = _q_values(model, x, R_t)
    dq2 = x / q2
    if isinstance(model, PerfectConductor):
        with np.errstate(over="ignore"):
            out = 2.0 * x ** 2 / (q2 * np.expm1(2.0 * q2))
    else:
        if q1 is None:
            raise UnsupportedModelError(f"no imaginary-axis form for {model!r}")
        if isinstance(model, ConstantDielectric):
            dq1 = model.xi * x / q1
            kap = np.full_like(x, model.xi)
            dkap = np.zeros_like(x)
        else:
            dq1 = x / q1
            with np.errstate(divide="ignore"):
                kap = 1.0 + model.xi / x ** 2
                dkap = -2.0 * model.xi / x ** 3
        if s == "TM":
            w, dw = kap, dkap
        else:
            w, dw = np.ones_like(x), np.zeros_like(x)
        num = q1 - w * q2
        den = q1 + w * q2
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            r = num / den
            dr = ((dq1 - dw * q2 - w * dq2) * den
                  - num * (dq1 + dw * q2 + w * dq2)) / den ** 2
            e = np.exp(-2.0 * q2)
            F = 1.0 - r * r * e
            dF = -e * (2.0 * r * dr - 2.0 * dq2 * r * r)
            out = x * dF / F
    out = np.where(x == 0.0, 0.0, out)
    out = np.where(np.isfinite(out), out, 0.0)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# imaginary-axis double integral

@dataclass(frozen=True)
class LifshitzResult:
    """Dimensionless imaginary-axis double integral with cutoffs."""

    value: float
    s: str
    model: str
    R0: float
    rho: float
    error_estimate: float
    evaluations: int


def I_imag(s: str, model: PermittivityModel, R0: float = math.inf,
           rho: float = math.inf, rel_tol: float = 1e-8,
           by_parts: bool = False) -> LifshitzResult:
    """2 int_0^R0 R dR int_0^rho Omega'' d ln F(i Omega'') / dOmega'' dOmega''.

    With by_parts=True the inner integral is evaluated as
    rho ln F(i rho) - int_0^rho ln F dOmega'' (the boundary term vanishes
    for rho = inf); both forms agree to quadrature accuracy.
    """
    if not by_parts:
        res = integrate_2d(lambda R, y: imag_axis_integrand(s, y, R, model),
                           R0, rho, rel_tol=rel_tol)
        value = 2.0 * res.value
        err = 2.0 * res.error_estimate
        evals = res.evaluations
    else:
        inner_tol = rel_tol / 4.0
        evals_box = [0]

        def outer(R):
            inner = integrate_adaptive(lambda y: imag_axis_log(s, y, R, model),
                                       0.0, rho, rel_tol=inner_tol)
            evals_box[0] += inner.evaluations
            boundary = 0.0
            if math.isfinite(rho):
                boundary = rho * float(imag_axis_log(s, rho, R, model))
            return R * (boundary - inner.value)

        res = integrate_adaptive(outer, 0.0, R0, rel_tol=rel_tol)
        value = 2.0 * res.value
        err = 2.0 * res.error_estimate
        evals = res.evaluations + evals_box[0]
    return LifshitzResult(value=value, s=s, model=model_spec(model), R0=R0,
                          rho=rho, error_estimate=err, evaluations=evals)


# ---------------------------------------------------------------------------
# real-axis spectral summation

@dataclass(frozen=True)
class SpectralSummation:
    """-2 pi int R dR [sum_p Omega_p + (1/pi) int Omega' ddelta] split into
    its pole and continuum parts (total = pole_part + continuum_part)."""

    pole_part: float
    continuum_part: float
    s: str
    model: str
    R0: float
    Lambda: float
    error_estimate: float
    pole_counts: tuple[tuple[float, int], ...] = field(default=())

    @property
    def total(self) -> float:
        return self.pole_part + self.continuum_part


def _phase_derivative_integrand(s, model, R_t):
    """Omega' times the principal-value phase derivative -Im[F'/F] on the axis."""

    def d_at(wi):
        # quadrature nodes can land inside the branch-point guard; nudge off
        for shift in (0.0, -1e-12, 1e-12, -1e-10, 1e-10):
            try:
                wn = wi * (1.0 + shift)
                return wn, dF_value(s, wn, R_t, model)
            except media.BranchPointError:
                continue
        raise media.BranchPointError(f"no evaluable point near Omega={wi}")

    def integrand(w):
        w = np.atleast_1d(np.asarray(w, dtype=float))
        vals = np.empty(len(w))
        for i, wi in enumerate(w):
            wn, dF = d_at(float(wi))
            F = F_value(s, wn, R_t, model)
            vals[i] = -wn * (dF / F).imag
        return vals

    return integrand


def _integrate_panel(f, a, b, sing_left, sing_right, rel_tol):
    """Adaptive panel integral with sqrt substitutions absorbing the
    integrable 1/sqrt branch-point singularities at flagged endpoints."""
    if sing_left and sing_right:
        mid = 0.5 * (a + b)
        r1 = _integrate_panel(f, a, mid, True, False, rel_tol)
        r2 = _integrate_panel(f, mid, b, False, True, rel_tol)
        return r1[0] + r2[0], r1[1] + r2[1]
    try:
        if sing_left:
            g = lambda t: f(a + np.asarray(t) ** 2) * 2.0 * np.asarray(t)
            res = integrate_adaptive(g, 0.0, math.sqrt(b - a), rel_tol=rel_tol,
                                     abs_tol=1e-12, max_intervals=800)
        elif sing_right:
            g = lambda t: f(b - np.asarray(t) ** 2) * 2.0 * np.asarray(t)
            res = integrate_adaptive(g, 0.0, math.sqrt(b - a), rel_tol=rel_tol,
                                     abs_tol=1e-12, max_intervals=800)
        else:
            res = integrate_adaptive(f, a, b, rel_tol=rel_tol,
                                     abs_tol=1e-12, max_intervals=800)
    except MaxSubdivisionError as exc:
        # localized near-branch-point structure can exhaust the budget at
        # tolerances far tighter than the spectral-sum target; keep the
        # best estimate and its error
        return exc.estimate, exc.error_estimate
    return res.value, res.error_estimate


def _phase_integral(s, model, R_t, Lambda, poles, rel_tol):
    bp = branch_points(model, R_t)
    lo = bp.omega_b1
    branch_hi = bp.omega_b2
    cuts = sorted({p for p in poles if lo < p < Lambda}
                  | ({branch_hi} if lo < branch_hi < Lambda else set()))
    edges = [lo] + cuts + [Lambda]
    integrand = _phase_derivative_integrand(s, model, R_t)
    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        sing_left = a in (lo, branch_hi)
        sing_right = b == branch_hi
        v, e = _integrate_panel(integrand, a, b, sing_left, sing_right, rel_tol)
        total += v
        err += e
    return total, err


def _half_mode(model, R: float) -> float:
    """Weight of the half-order zero of F at the chi_II branch point.

    F ~ sqrt(Omega - R) there whenever chi_I(R) != 0, carrying half a mode
    at Omega = R; for a degenerate filling (kappa(R) = 1, F identically
    regular) it is absent.
    """
    if abs(media._w_poly(model, "I", R) - R * R) <= 1e-9 * R * R:
        return 0.0
    return 0.5 * R


def I_real(s: str, model: PermittivityModel, R0: float, Lambda: float,
           rel_tol: float = 1e-5, validate_poles: bool = False) -> SpectralSummation:
    """Real-axis spectral summation truncated at transverse cutoff R0 and
    frequency cutoff Lambda (which must clear the second branch point for
    every R <= R0)."""
    if isinstance(model, PerfectConductor):
        raise UnsupportedModelError(
            "the real-axis summation needs a finite permittivity model")
    top = branch_points(model, R0).omega_b2
    if Lambda < top:
        raise ValueError(f"Lambda={Lambda} below the largest branch point {top}")
    counts: dict[float, int] = {}
    # the pole and continuum contributions cancel almost completely, so the
    # adaptive tolerance must act on their combined bracket; the pole split
    # rides along with a tiny scale so it never drives the error estimate
    split_scale = 1e-12

    def outer(R):
        if R == 0.0:
            return np.zeros(2)
        scan = openmodes.pole_scan(s, R, model, omega_max=Lambda,
                                   validate=validate_poles)
        counts[float(R)] = scan.count
        pole_sum = sum(p.omega for p in scan.poles) + _half_mode(model, R)
        phase, _ = _phase_integral(s, model, R, Lambda,
                                   [p.omega for p in scan.poles], rel_tol / 4.0)
        bracket = pole_sum + phase / math.pi
        return np.array([R * bracket, split_scale * R * pole_sum])

    res = integrate_adaptive(outer, 0.0, R0, rel_tol=rel_tol, max_intervals=2000)
    total = -2.0 * math.pi * float(res.value[0])
    pole_part = -2.0 * math.pi * float(res.value[1]) / split_scale
    return SpectralSummation(pole_part=pole_part,
                             continuum_part=total - pole_part,
                             s=s, model=model_spec(model), R0=R0, Lambda=Lambda,
                             error_estimate=2.0 * math.pi * res.error_estimate,
                             pole_counts=tuple(sorted(counts.items())))


# ---------------------------------------------------------------------------
# the contour identity

def _F_tilde_vec(s, model, R_t, z):
    """F-tilde and its derivative on complex arrays (Schwarz reflected)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    F = np.empty_like(z)
    dF = np.empty_like(z)
    for i, zi in enumerate(z):
        F[i] = F_value(s, zi, R_t, model)
        dF[i] = dF_value(s, zi, R_t, model)
    return F, dF


@dataclass(frozen=True)
class CauchyReport:
    """Imaginary- versus real-axis comparison plus rectangle zero checks."""

    I_imag: float
    I_real: float
    discrepancy_abs: float
    discrepancy_rel: float
    rectangle_max: float
    rectangles: int
    seed: int

    def passes(self, rel_tol: float = 2e-2, rect_tol: float = 1e-8) -> bool:
        return self.discrepancy_rel < rel_tol and self.rectangle_max < rect_tol


def cauchy_rectangle(s: str, model: PermittivityModel, R_t: float,
                     corner0: complex, corner1: complex,
                     rel_tol: float = 1e-10) -> complex:
    """oint Omega dln F-tilde over a pole/cut-free rectangle (should be ~0)."""
    path = ContourPath.rectangle(corner0, corner1)

    def f(z):
        F, dF = _F_tilde_vec(s, model, R_t, z)
        return z * dF / F

    return contour_integral(f, path, rel_tol=rel_tol, abs_tol=1e-12).value


def cauchy_identity(s: str, model: PermittivityModel, R0: float, rho: float,
                    n_rect: int = 20, seed: int = 20260809,
                    rel_tol_imag: float = 1e-8, rel_tol_real: float = 1e-5,
                    skip_real: bool = False) -> CauchyReport:
    """Check I_imag(R0, rho) against I_real(R0, rho) and Cauchy's theorem on
    random singularity-free rectangles in the cut plane."""
    rng = np.random.default_rng(seed)
    rect_max = 0.0
    for _ in range(n_rect):
        R_t = float(rng.uniform(0.5, max(1.0, 0.8 * R0)))
        b2 = branch_points(model, R_t).omega_b2
        x0 = float(rng.uniform(0.05, 1.2)) * b2
        x1 = x0 + float(rng.uniform(0.2, 1.0)) * b2
        y0 = float(rng.uniform(0.05, 0.6))
        y1 = y0 + float(rng.uniform(0.3, 2.0))
        if rng.uniform() < 0.5:
            y0, y1 = -y1, -y0   # Schwarz-reflected side
        val = cauchy_rectangle(s, model, R_t, complex(x0, y0), complex(x1, y1))
        rect_max = max(rect_max, abs(val))
    ii = I_imag(s, model, R0, rho, rel_tol=rel_tol_imag)
    if skip_real:
        ir = float("nan")
        dabs = drel = float("nan")
    else:
        ir = I_real(s, model, R0, rho, rel_tol=rel_tol_real).total
        dabs = abs(ir - ii.value)
        drel = dabs / abs(ii.value) if ii.value != 0.0 else dabs
    return CauchyReport(I_imag=ii.value, I_real=ir, discrepancy_abs=dabs,
                        discrepancy_rel=drel, rectangle_max=rect_max,
                        rectangles=n_rect, seed=seed)


# ---------------------------------------------------------------------------
# physical interaction energy and pressure

@dataclass(frozen=True)
class PhysicalSetup:
    """Slab width in meters plus the material law in physical units.

    Exactly one of omega_p (rad/s, plasma), eps_r (relative permittivity) or
    perfect_conductor must be given; the dimensionless xi follows from the
    nondimensionalization Omega = omega Lz / c.
    """

    Lz: float
    omega_p: float | None = None
    eps_r: float | None = None
    perfect_conductor: bool = False

    def __post_init__(self):
        if not self.Lz > 0:
            raise ValueError("Lz must be positive")
        given = sum(x is not None for x in (self.omega_p, self.eps_r))
        given += bool(self.perfect_conductor)
        if given != 1:
            raise ValueError("specify exactly one of omega_p, eps_r, perfect_conductor")

    def xi(self, Lz: float | None = None) -> float:
        Lz = self.Lz if Lz is None else Lz
        if self.omega_p is not None:
            return (self.omega_p * Lz / C_LIGHT) ** 2
        if self.eps_r is not None:
            return self.eps_r
        return math.inf

    def model(self, Lz: float | None = None) -> PermittivityModel:
        if self.omega_p is not None:
            return Plasma(xi=self.xi(Lz))
        if self.eps_r is not None:
            return ConstantDielectric(xi=self.eps_r)
        return PerfectConductor()


@dataclass(frozen=True)
class InteractionEnergyResult:
    """Interaction energy per unit area (J/m^2) and pressure magnitude (Pa)."""

    U_per_pol: dict
    U_total: float
    P_total: float
    Lz: float
    model: str


def _U_of_Lz(setup: PhysicalSetup, pols, Lz: float, rel_tol: float) -> float:
    model = setup.model(Lz)
    total = 0.0
    for s in pols:
        ii = I_imag(s, model, rel_tol=rel_tol)
        total += -HBAR * C_LIGHT * W0 / Lz ** 3 * ii.value
    return total


def interaction_energy(setup: PhysicalSetup, pol: str = "both",
                       rel_tol: float = 1e-7) -> InteractionEnergyResult:
    """Lifshitz interaction energy per unit area and the pressure magnitude.

    For width-independent xi (constant dielectric, perfect conductor) the
    pressure is the exact scaling law 3|U|/Lz; the plasma model re-derives
    xi at each width and uses a five-point central difference.
    """
    pols = ("TE", "TM") if pol == "both" else (pol,)
    U = {}
    for s in pols:
        ii = I_imag(s, setup.model(), rel_tol=rel_tol)
        U[s] = -HBAR * C_LIGHT * W0 / setup.Lz ** 3 * ii.value
    U_total = sum(U.values())
    if setup.omega_p is None:
        P = 3.0 * abs(U_total) / setup.Lz
    else:
        h = 1e-4 * setup.Lz
        f = lambda lz: _U_of_Lz(setup, pols, lz, rel_tol)
        dU = (f(setup.Lz - 2 * h) - 8.0 * f(setup.Lz - h)
              + 8.0 * f(setup.Lz + h) - f(setup.Lz + 2 * h)) / (12.0 * h)
        P = abs(dU)
    return InteractionEnergyResult(U_per_pol=U, U_total=U_total, P_total=P,
                                   Lz=setup.Lz, model=model_spec(setup.model()))


# ---------------------------------------------------------------------------
# density of states

@dataclass(frozen=True)
class DensityOfStates:
    """Distributional interaction density of states aggregated over R.

    atoms are (Omega_p, weight) pairs from the R quadrature of the pole sum;
    continuum holds (1/pi) d delta/d Omega' aggregated over R with its
    Heaviside support.  first_moment approximates int Omega' dN and
    -2 pi first_moment reproduces the real-axis summation.
    """

    atoms: tuple[tuple[float, float], ...]
    omega_grid: tuple[float, ...]
    continuum: tuple[float, ...]
    first_moment: float
    s: str
    model: str
    R0: float
    Lambda: float

    @property
    def spectral_total(self) -> float:
        return -2.0 * math.pi * self.first_moment


def density_of_states(s: str, model: PermittivityModel, R0: float,
                      omega_grid, Lambda: float | None = None,
                      n_r: int = 24, rel_tol: float = 1e-6) -> DensityOfStates:
    """Gauss-Legendre aggregation of pole atoms and the phase-derivative
    continuum over transverse wavenumbers up to R0."""
    omega_grid = np.asarray(sorted(float(w) for w in omega_grid))
    if Lambda is None:
        Lambda = float(omega_grid[-1])
    xg, wg = np.polynomial.legendre.leggauss(n_r)
    R_nodes = 0.5 * R0 * (xg + 1.0)
    R_weights = 0.5 * R0 * wg
    atoms: list[tuple[float, float]] = []
    continuum = np.zeros_like(omega_grid)
    moment = 0.0
    for R_t, w_R in zip(R_nodes, R_weights):
        scan = openmodes.pole_scan(s, float(R_t), model,
                                   omega_max=max(Lambda, branch_points(model, R_t).omega_b2),
                                   validate=False)
        b1 = branch_points(model, float(R_t)).omega_b1
        for p in scan.poles:
            atoms.append((p.omega, w_R * R_t))
        half = _half_mode(model, float(R_t))
        if half:
            # half-weight atom at the chi_II branch point (half-order zero of F)
            atoms.append((float(R_t), 0.5 * w_R * R_t))
        integrand = _phase_derivative_integrand(s, model, float(R_t))
        mask = omega_grid > b1
        if np.any(mask):
            vals = integrand(omega_grid[mask]) / omega_grid[mask]
            continuum[mask] += w_R * R_t * vals / math.pi
        phase, _ = _phase_integral(s, model, float(R_t), Lambda,
                                   [p.omega for p in scan.poles], rel_tol)
        moment += w_R * R_t * (sum(p.omega for p in scan.poles) + half
                               + phase / math.pi)
    return DensityOfStates(atoms=tuple(atoms), omega_grid=tuple(omega_grid),
                           continuum=tuple(continuum), first_moment=moment,
                           s=s, model=model_spec(model), R0=R0, Lambda=Lambda)
