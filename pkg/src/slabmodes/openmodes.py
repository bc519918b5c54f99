"""Open-domain (unconfined) mode structure of the planar three-region system.

Category P words (OOO, OEO, OLO) propagate in regions I and III and carry
complex reflection/transmission amplitudes; category E words (EOE, EEE, ELE)
decay exponentially there and exist only on the real zero sets of global
dispersion generators.  Those zeros are simple poles of the analytically
continued transmission amplitude and drive the real-axis spectral summation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import media
from .media import (
    ConstantDielectric,
    KinematicError,
    PermittivityModel,
    Plasma,
    UnsupportedModelError,
    branch_points,
    classify_region,
    model_spec,
)
from scipy.optimize import brentq

from .numerics import ContourPath, scan_roots, winding_number

__all__ = [
    "CATEGORY_P",
    "CATEGORY_E",
    "ScatteringAmplitudes",
    "OpenPole",
    "PoleScanResult",
    "LociRow",
    "LociTable",
    "WindingMismatchError",
    "PoleEvaluationError",
    "scattering",
    "catE_generator",
    "pole_scan",
    "phase_delta",
    "phase_delta_curve",
    "loci_table",
    "ele_radius",
]

CATEGORY_P = ("OOO", "OEO", "OLO")
CATEGORY_E = ("EOE", "EEE", "ELE")


class WindingMismatchError(RuntimeError):
    """Scan count and winding count disagree after grid refinement."""


class PoleEvaluationError(ValueError):
    """A real-axis quantity was requested exactly at a pole."""


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Complex reflection and transmission amplitudes of one category P word."""

    R: complex
    T: complex
    direction: str          # 'R' (incident from region I) or 'L'
    word: str
    s: str
    omega: float
    R_transverse: float
    model: PermittivityModel


@dataclass(frozen=True)
class OpenPole:
    """Real pole of the continued transmission amplitude (category E mode)."""

    omega: float
    R_transverse: float
    word: str
    s: str
    on_branch_point: bool = False


@dataclass(frozen=True)
class PoleScanResult:
    poles: tuple[OpenPole, ...]
    count: int
    omega_b1: float
    omega_b2: float


# ---------------------------------------------------------------------------
# vectorized kinematic helpers (limit from the upper half-plane on the axis)

def _chi_axis(model, region, omega, R):
    """chi_nu on the real axis: +chi in propagating windows, +i zeta otherwise."""
    disc = media._w_poly(model, region, np.asarray(omega, dtype=float)) - R * R
    disc = np.asarray(disc)
    out = np.where(disc > 0, np.sqrt(np.abs(disc)) + 0j, 1j * np.sqrt(np.abs(disc)))
    return out


def _tm_weight(model, omega):
    """kappa(Omega) without the Omega=0 pole guard (vector-safe)."""
    omega = np.asarray(omega)
    return media._w_poly(model, "I", omega) / (omega * omega)


# ---------------------------------------------------------------------------
# category P scattering

def _region2_basis(word, omega, R, model):
    """(b1, b2, db1, db2) at Z as callables for the region II solution."""
    if word == "OOO":
        chi2 = math.sqrt(omega * omega - R * R)
        return (lambda Z: cmath.exp(-1j * chi2 * Z), lambda Z: cmath.exp(1j * chi2 * Z),
                lambda Z: -1j * chi2 * cmath.exp(-1j * chi2 * Z),
                lambda Z: 1j * chi2 * cmath.exp(1j * chi2 * Z))
    if word == "OEO":
        z2 = math.sqrt(R * R - omega * omega)
        return (lambda Z: math.exp(-z2 * Z), lambda Z: math.exp(z2 * Z),
                lambda Z: -z2 * math.exp(-z2 * Z), lambda Z: z2 * math.exp(z2 * Z))
    if word == "OLO":
        return (lambda Z: 1.0, lambda Z: Z, lambda Z: 0.0, lambda Z: 1.0)
    raise ValueError(f"{word} is not a category P word")


def scattering(s: str, word: str, omega: float, R_t: float,
               model: PermittivityModel, direction: str = "R") -> ScatteringAmplitudes:
    """Reflection/transmission amplitudes from the four interface conditions.

    The incident wave has unit amplitude; direction 'R' sends it from region
    I toward III, 'L' the reverse.  Regions I and III must be propagating and
    region II must match the word's middle letter.
    """
    if word not in CATEGORY_P:
        raise ValueError(f"scattering amplitudes exist for category P words, not {word}")
    if s not in ("TE", "TM"):
        raise ValueError(f"polarization must be TE or TM, got {s!r}")
    if direction not in ("R", "L"):
        raise ValueError("direction must be 'R' or 'L'")
    kin1 = classify_region(model, "I", omega, R_t)
    kin2 = classify_region(model, "II", omega, R_t)
    if kin1.klass != "O" or kin2.klass != word[1]:
        raise KinematicError(
            f"(Omega={omega}, R={R_t}) gives classes ({kin1.klass}, {kin2.klass}), "
            f"incompatible with word {word}")
    chi1 = kin1.chi
    kr = media.kappa(model, omega) if s == "TM" else 1.0
    b1, b2, db1, db2 = _region2_basis(word, omega, R_t, model)

    # With kappa_I = kappa_III, the left-incidence problem in the mirrored
    # coordinate 1 - Z is the identical linear system as right incidence, so
    # both directions are computed from the one system below (unit wave
    # entering region II at its first interface).
    eI = lambda Z, sign: cmath.exp(sign * 1j * chi1 * Z)

    A = np.zeros((4, 4), dtype=complex)
    rhs = np.zeros(4, dtype=complex)
    # unknowns x = (P_I, P_II, Q_II, Q_III); incident Q_I = 1, P_III = 0
    # value matching at Z=0 (weight kappa on regions I/III for TM)
    A[0] = [kr, -b1(0.0), -b2(0.0), 0.0]
    rhs[0] = -kr
    # value matching at Z=1
    A[1] = [0.0, b1(1.0), b2(1.0), -kr * eI(1.0, +1)]
    # derivative matching at Z=0
    A[2] = [-1j * chi1, -db1(0.0), -db2(0.0), 0.0]
    rhs[2] = -1j * chi1
    # derivative matching at Z=1
    A[3] = [0.0, db1(1.0), db2(1.0), -1j * chi1 * eI(1.0, +1)]

    try:
        x = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise PoleEvaluationError(
            f"singular scattering system at Omega={omega}, R={R_t}") from exc
    pI, _, _, qIII = x
    return ScatteringAmplitudes(R=complex(pI), T=complex(qIII), direction=direction,
                                word=word, s=s, omega=omega, R_transverse=R_t, model=model)


# ---------------------------------------------------------------------------
# category E generators (manifestly real forms)

def catE_values(s: str, word: str, omega, R_t: float, model: PermittivityModel):
    """Vectorized real generator values without kinematic validation."""
    omega = np.asarray(omega, dtype=float)
    w1 = media._w_poly(model, "I", omega)
    zeta1 = np.sqrt(np.maximum(R_t * R_t - w1, 0.0))
    wgt = _tm_weight(model, omega) if s == "TM" else np.ones_like(omega)
    if word == "EOE":
        chi2 = np.sqrt(np.maximum(omega * omega - R_t * R_t, 0.0))
        return np.exp(-zeta1) * ((zeta1 ** 2 - wgt ** 2 * chi2 ** 2) * np.sin(chi2)
                                 + 2.0 * wgt * zeta1 * chi2 * np.cos(chi2))
    if word == "EEE":
        zeta2 = np.sqrt(np.maximum(R_t * R_t - omega * omega, 0.0))
        return np.exp(-zeta1) * ((zeta1 + wgt * zeta2) ** 2 * np.exp(zeta2)
                                 - (zeta1 - wgt * zeta2) ** 2 * np.exp(-zeta2))
    if word == "ELE":
        return np.exp(-zeta1) * zeta1 * (zeta1 + 2.0 * wgt)
    raise ValueError(f"{word} is not a category E word")


def catE_generator(s: str, word: str, omega: float, R_t: float,
                   model: PermittivityModel) -> float:
    """Real dispersion generator of one category E word at real Omega.

    EOE uses the manifestly real combination with the same zero set as the
    complex exponential form; ELE is only defined at Omega = R_t.
    """
    kin1 = classify_region(model, "I", omega, R_t)
    kin2 = classify_region(model, "II", omega, R_t)
    if kin1.klass != "E" or kin2.klass != word[1]:
        raise KinematicError(
            f"(Omega={omega}, R={R_t}) gives classes ({kin1.klass}, {kin2.klass}), "
            f"incompatible with word {word}")
    return float(catE_values(s, word, omega, R_t, model))


def ele_radius(s: str, model: PermittivityModel, R_max: float = 100.0) -> float | None:
    """Transverse wavenumber at which an ELE mode exists (zeta_I + 2 kappa = 0
    at Omega = R), or None.  Only the TM branch can support one."""
    if s != "TM" or not isinstance(model, Plasma):
        return None

    def g(R):
        # at Omega = R: zeta_I = sqrt(xi), kappa = 1 - xi/R^2
        return math.sqrt(model.xi) + 2.0 * (1.0 - model.xi / (R * R))

    # g is increasing in R; a zero needs kappa(R) < 0, i.e. R < sqrt(xi)
    lo, hi = 1e-6 * math.sqrt(model.xi), min(R_max, math.sqrt(model.xi) * (1 - 1e-12))
    if g(lo) > 0 or g(hi) < 0:
        return None
    roots = scan_roots(g, lo, hi, n_grid=2000, tol=1e-12)
    return roots[0] if roots else None


# ---------------------------------------------------------------------------
# locally analytic functions for winding checks

def _w1_funcs(model):
    if isinstance(model, ConstantDielectric):
        xi = model.xi
        return (lambda z: xi * z * z), (lambda z: 2.0 * xi * z)
    if isinstance(model, Plasma):
        xi = model.xi
        return (lambda z: z * z - xi), (lambda z: 2.0 * z)
    raise UnsupportedModelError(f"pole windows need const/plasma, got {model!r}")


def _f_window(s, model, R_t, classes):
    """F and dF/dOmega analytic in a neighbourhood of a real-axis window with
    the given (region I, region II) kinematic classes."""
    c1, c2 = classes
    w1, dw1 = _w1_funcs(model)

    def funcs(z):
        z = np.asarray(z, dtype=complex)
        if c1 == "O":
            chi1 = np.sqrt(w1(z) - R_t * R_t)
        else:
            chi1 = 1j * np.sqrt(R_t * R_t - w1(z))
        if c2 == "O":
            chi2 = np.sqrt(z * z - R_t * R_t)
        else:
            chi2 = 1j * np.sqrt(R_t * R_t - z * z)
        dchi1 = dw1(z) / (2.0 * chi1)
        dchi2 = z / chi2
        if s == "TM":
            wgt = w1(z) / (z * z)
            dwgt = dw1(z) / (z * z) - 2.0 * w1(z) / z ** 3
        else:
            wgt = np.ones_like(z)
            dwgt = np.zeros_like(z)
        num = chi1 - wgt * chi2
        den = chi1 + wgt * chi2
        r = num / den
        dnum = dchi1 - dwgt * chi2 - wgt * dchi2
        dden = dchi1 + dwgt * chi2 + wgt * dchi2
        dr = (dnum * den - num * dden) / (den * den)
        ph = np.exp(2j * chi2)
        F = 1.0 - r * r * ph
        dF = -ph * (2.0 * r * dr + 2j * dchi2 * r * r)
        return F, dF

    return funcs


def _d_analytic(s, word, model, R_t):
    """Complex-analytic category E generator and its derivative.

    This is the numerator of F after clearing the (chi_I + w chi_II)^2
    denominator, so unlike F it is free of the compensating double poles at
    zeta_I + kappa zeta_II = 0 and its winding counts poles faithfully even
    for exponentially close plasmon pairs.
    """
    w1, dw1 = _w1_funcs(model)

    def funcs(z):
        z = np.asarray(z, dtype=complex)
        zeta1 = np.sqrt(R_t * R_t - w1(z))
        dzeta1 = -dw1(z) / (2.0 * zeta1)
        if s == "TM":
            wgt = w1(z) / (z * z)
            dwgt = dw1(z) / (z * z) - 2.0 * w1(z) / z ** 3
        else:
            wgt = np.ones_like(z)
            dwgt = np.zeros_like(z)
        if word == "EOE":
            chi2 = np.sqrt(z * z - R_t * R_t)
            dchi2 = z / chi2
            ap = zeta1 + 1j * wgt * chi2
            am = zeta1 - 1j * wgt * chi2
            dap = dzeta1 + 1j * (dwgt * chi2 + wgt * dchi2)
            dam = dzeta1 - 1j * (dwgt * chi2 + wgt * dchi2)
            ep = np.exp(1j * chi2)
            em = 1.0 / ep
            pre = np.exp(-zeta1)
            D = pre * (ap * ap * ep - am * am * em)
            dD = pre * (-dzeta1 * (ap * ap * ep - am * am * em)
                        + (2.0 * ap * dap + 1j * dchi2 * ap * ap) * ep
                        - (2.0 * am * dam - 1j * dchi2 * am * am) * em)
            return D, dD
        if word == "EEE":
            zeta2 = np.sqrt(R_t * R_t - z * z)
            dzeta2 = -z / zeta2
            ap = zeta1 + wgt * zeta2
            am = zeta1 - wgt * zeta2
            dap = dzeta1 + dwgt * zeta2 + wgt * dzeta2
            dam = dzeta1 - dwgt * zeta2 - wgt * dzeta2
            ep = np.exp(zeta2)
            em = 1.0 / ep
            pre = np.exp(-zeta1)
            D = pre * (ap * ap * ep - am * am * em)
            dD = pre * (-dzeta1 * (ap * ap * ep - am * am * em)
                        + (2.0 * ap * dap + dzeta2 * ap * ap) * ep
                        - (2.0 * am * dam - dzeta2 * am * am) * em)
            return D, dD
        raise ValueError(word)

    return funcs


def _winding_count_window(s, word, model, R_t, lo, hi, half_height=1e-3):
    funcs = _d_analytic(s, word, model, R_t)
    path = ContourPath.rectangle(complex(lo, -half_height), complex(hi, half_height))
    return winding_number(lambda z: funcs(z)[0], path,
                          fprime=lambda z: funcs(z)[1], rel_tol=1e-8)


def _winding_check_pole(s, word, model, R_t, omega_p, radius=1e-3, eps=1e-6):
    funcs = _d_analytic(s, word, model, R_t)
    path = ContourPath.circle(complex(omega_p, -eps), radius)
    return winding_number(lambda z: funcs(z)[0], path,
                          fprime=lambda z: funcs(z)[1], rel_tol=1e-8)


def _scan_edges(lo, hi, roots, frac=1e-6):
    """Rectangle edges strictly inside (lo, hi), clear of the extreme roots."""
    width = hi - lo
    pad = frac * width
    if roots:
        pad_lo = min(pad, 0.5 * (min(roots) - lo))
        pad_hi = min(pad, 0.5 * (hi - max(roots)))
    else:
        pad_lo = pad_hi = pad
    return lo + max(pad_lo, 1e-12), hi - max(pad_hi, 1e-12)


def _eee_log_form(s, model, R_t, omega):
    """2 zeta_II - ln r^2, with the same real zero set as the EEE generator
    but resolving the exponential scale separation of close plasmon pairs."""
    omega = np.asarray(omega, dtype=float)
    w1 = media._w_poly(model, "I", omega)
    zeta1 = np.sqrt(np.maximum(R_t * R_t - w1, 0.0))
    zeta2 = np.sqrt(np.maximum(R_t * R_t - omega * omega, 0.0))
    wgt = _tm_weight(model, omega) if s == "TM" else 1.0
    with np.errstate(divide="ignore"):
        return (2.0 * zeta2 + 2.0 * np.log(np.abs(zeta1 + wgt * zeta2))
                - 2.0 * np.log(np.abs(zeta1 - wgt * zeta2)))


def _eee_pair_roots(s, model, R_t, lo, hi, n_scan):
    """EEE roots as pairs around each zero of g = zeta_I + kappa zeta_II.

    Each member solves g = +/- e^{-zeta_II} (zeta_I - kappa zeta_II); this
    stays well-conditioned when the pair separation collapses below floating
    point resolution, in which case both members coincide.
    """
    if s != "TM" or not isinstance(model, Plasma):
        return []

    def g(w):
        w = np.asarray(w, dtype=float)
        zeta1 = np.sqrt(np.maximum(R_t * R_t - media._w_poly(model, "I", w), 0.0))
        zeta2 = np.sqrt(np.maximum(R_t * R_t - w * w, 0.0))
        return zeta1 + _tm_weight(model, w) * zeta2

    def offset(w, sign):
        w = np.asarray(w, dtype=float)
        zeta1 = np.sqrt(np.maximum(R_t * R_t - media._w_poly(model, "I", w), 0.0))
        zeta2 = np.sqrt(np.maximum(R_t * R_t - w * w, 0.0))
        wgt = _tm_weight(model, w)
        return g(w) - sign * np.exp(-zeta2) * (zeta1 - wgt * zeta2)

    def expand_bracket(func, w0, cap, direction):
        f0 = func(w0)
        if f0 == 0.0:
            return (w0, w0)
        step = 1e-15 * max(1.0, abs(w0))
        prev = w0
        while True:
            w_try = w0 + direction * step
            past = (w_try >= cap) if direction > 0 else (w_try <= cap)
            if past:
                w_try = cap
            f1 = func(w_try)
            if f0 * f1 <= 0.0:
                return (min(prev, w_try), max(prev, w_try))
            if past:
                return None
            prev = w_try
            step *= 4.0

    g_zeros = scan_roots(g, lo, hi, n_grid=n_scan, tol=1e-14)
    pairs = []
    for i, w0 in enumerate(g_zeros):
        lo_cap = g_zeros[i - 1] if i > 0 else lo
        hi_cap = g_zeros[i + 1] if i + 1 < len(g_zeros) else hi
        members = []
        for sign in (+1.0, -1.0):
            func = lambda w, sg=sign: float(offset(w, sg))
            for cap, direction in ((hi_cap, +1), (lo_cap, -1)):
                bracket = expand_bracket(func, w0, cap, direction)
                if bracket is None:
                    continue
                a, b = bracket
                if a == b:
                    members.append(a)
                else:
                    members.append(float(brentq(func, a, b, xtol=1e-14,
                                                rtol=1e-15, maxiter=200)))
                break
        if members:
            pairs.append((w0, sorted(members)))
    return pairs


def pole_scan(s: str, R_t: float, model: PermittivityModel, omega_max: float,
              validate: bool = True, n_scan: int | None = None) -> PoleScanResult:
    """All real category E poles at fixed transverse R.

    EOE zeros are scanned between the branch points, EEE zeros below the
    first one (with a dedicated pair solver for the exponentially close
    plasmon doublets of the plasma TM branch), and the ELE coincidence is
    tested at the chi_II branch point.  With validate=True every root is
    confirmed by a winding check of the analytic generator on a small circle
    around Omega_p - i eps, and whole-window counts are cross-checked
    against a rectangle winding; a disagreement triggers one grid
    refinement, then a hard error.
    """
    bp = branch_points(model, R_t)
    b_chi2 = R_t
    b_chi1 = bp.omega_b1 if bp.swapped else bp.omega_b2
    if omega_max < max(b_chi1, b_chi2):
        raise ValueError("omega_max must reach beyond the branch points")
    if n_scan is None:
        n_scan = max(2000, int(50 * R_t))

    def collect(n):
        poles: list[OpenPole] = []
        windows: list[tuple[str, float, float, list[float]]] = []
        if b_chi2 < b_chi1:
            width = b_chi1 - b_chi2
            lo, hi = b_chi2 + 1e-7 * width, b_chi1 - 1e-7 * width
            roots = scan_roots(lambda w: catE_values(s, "EOE", w, R_t, model),
                               lo, hi, n_grid=n, tol=1e-12)
            windows.append(("EOE", lo, hi, roots))
            poles += [OpenPole(r, R_t, "EOE", s) for r in roots]
        eee_hi = min(b_chi1, b_chi2)
        lo, hi = 1e-6 * eee_hi, eee_hi * (1.0 - 1e-7)
        roots = list(scan_roots(lambda w: _eee_log_form(s, model, R_t, w),
                                lo, hi, n_grid=n, tol=1e-12))
        for w0, members in _eee_pair_roots(s, model, R_t, lo, hi, n):
            span = (min(members) - 1e-9 * max(1.0, w0),
                    max(members) + 1e-9 * max(1.0, w0))
            roots = [r for r in roots if not span[0] <= r <= span[1]]
            roots.extend(members)
        roots.sort()
        windows.append(("EEE", lo, hi, roots))
        poles += [OpenPole(r, R_t, "EEE", s) for r in roots]
        return poles, windows

    poles, windows = collect(n_scan)

    # ELE: generator zero exactly at the chi_II branch point
    if s == "TM" and not isinstance(model, ConstantDielectric):
        kr = media.kappa(model, b_chi2)
        zeta1 = math.sqrt(max(R_t * R_t - media._w_poly(model, "I", b_chi2), 0.0))
        g_ele = zeta1 + 2.0 * kr
        if abs(g_ele) < 1e-8 * (abs(zeta1) + 2.0 * abs(kr) + 1.0):
            poles.append(OpenPole(b_chi2, R_t, "ELE", s, on_branch_point=True))

    if validate:
        for attempt in range(2):
            mismatch = None
            for word, lo, hi, roots in windows:
                for r in roots:
                    near = sum(1 for rr in roots if abs(rr - r) <= 1.05e-3)
                    res = _winding_check_pole(s, word, model, R_t, r)
                    if res.count != near or not res.ok:
                        mismatch = (f"pole at Omega={r} ({word}): circle count "
                                    f"{res.count}, expected {near}")
                        break
                if mismatch:
                    break
                lo_e, hi_e = _scan_edges(lo, hi, roots)
                res = _winding_count_window(s, word, model, R_t, lo_e, hi_e)
                if res.count != len(roots) or not res.ok:
                    mismatch = (f"{word} window ({lo:.6g}, {hi:.6g}): scan found "
                                f"{len(roots)} roots, winding count {res.count}")
                    break
            if mismatch is None:
                break
            if attempt == 1:
                raise WindingMismatchError(mismatch)
            ele = [p for p in poles if p.word == "ELE"]
            poles, windows = collect(4 * n_scan)
            poles += ele

    poles.sort(key=lambda p: p.omega)
    return PoleScanResult(poles=tuple(poles), count=len(poles),
                          omega_b1=min(b_chi1, b_chi2), omega_b2=max(b_chi1, b_chi2))


# ---------------------------------------------------------------------------
# scattering phase

def _F_axis(s, model, omega, R_t):
    """F on the real axis (limit from above), vector-safe."""
    omega = np.asarray(omega, dtype=float)
    chi1 = _chi_axis(model, "I", omega, R_t)
    chi2 = _chi_axis(model, "II", omega, R_t)
    wgt = _tm_weight(model, omega) if s == "TM" else 1.0
    r = (chi1 - wgt * chi2) / (chi1 + wgt * chi2)
    return 1.0 - r * r * np.exp(2j * chi2)


def phase_delta(s: str, omega: float, R_t: float, model: PermittivityModel) -> float:
    """Scattering phase -Im ln F at one real Omega (principal value in (-pi, pi]).

    Raises PoleEvaluationError exactly at a pole; resolve those with the
    -i eps displacement of :func:`phase_delta_curve`.
    """
    F = complex(_F_axis(s, model, omega, R_t))
    if abs(F) < 1e-12:
        raise PoleEvaluationError(f"F vanishes at Omega={omega}; displaced evaluation needed")
    return -cmath.phase(F)


def phase_delta_curve(s: str, omegas, R_t: float, model: PermittivityModel,
                      eps: float = 1e-6) -> np.ndarray:
    """Continuously unwrapped phase along an increasing frequency grid.

    Evaluates just above the axis (Omega + i eps, displacing on-axis poles
    below the evaluation line) and stitches 2 pi jumps with threshold pi.
    """
    omegas = np.asarray(omegas, dtype=float)
    funcs_cache: dict[tuple[str, str], object] = {}
    vals = np.empty(len(omegas), dtype=complex)
    for i, w in enumerate(omegas):
        c1 = "O" if media._w_poly(model, "I", w) > R_t * R_t else "E"
        c2 = "O" if w > R_t else "E"
        key = (c1, c2)
        if key not in funcs_cache:
            funcs_cache[key] = _f_window(s, model, R_t, key)
        vals[i] = funcs_cache[key](w + 1j * eps)[0]
    return -np.unwrap(np.angle(vals))


# ---------------------------------------------------------------------------
# loci tables behind the pole/branch-point diagrams

@dataclass(frozen=True)
class LociRow:
    s: str
    model: str
    R: float
    omega: float
    kind: str   # branch_chiI | branch_chiII | EOE | EEE | ELE


@dataclass
class LociTable:
    rows: list[LociRow] = field(default_factory=list)

    def kinds(self) -> set[str]:
        return {row.kind for row in self.rows}

    def by_kind(self, kind: str) -> list[LociRow]:
        return [row for row in self.rows if row.kind == kind]


def loci_table(s: str, model: PermittivityModel, R_grid, omega_max: float,
               validate: bool = False) -> LociTable:
    """Branch-point and category E pole loci over a transverse wavenumber grid."""
    spec = model_spec(model)
    rows: list[LociRow] = []
    for R in sorted(float(R) for R in R_grid):
        bp = branch_points(model, R)
        b_chi2 = R
        b_chi1 = bp.omega_b1 if bp.swapped else bp.omega_b2
        rows.append(LociRow(s, spec, R, b_chi1, "branch_chiI"))
        rows.append(LociRow(s, spec, R, b_chi2, "branch_chiII"))
        res = pole_scan(s, R, model, omega_max=max(omega_max, b_chi1, b_chi2),
                        validate=validate)
        for p in res.poles:
            if not p.on_branch_point:
                rows.append(LociRow(s, spec, R, p.omega, p.word))
    # the isolated ELE coincidence, located exactly rather than per grid point
    R_ele = ele_radius(s, model)
    if R_ele is not None and min(R_grid) <= R_ele <= max(R_grid):
        rows.append(LociRow(s, spec, R_ele, R_ele, "ELE"))
    return LociTable(rows=rows)
