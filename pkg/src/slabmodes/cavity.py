"""Closed-cavity discrete spectra for the three-region cuboid.

Each mode family is labelled by polarization s in {TE, TM} and a three-letter
word (one letter per region) from {OOO, OEO, OLO, EOE, EEE, ELE, LOL, LEL}
with O oscillatory, E evanescent and L affine-linear Z-dependence.  The
boundary/interface conditions give a homogeneous 6x6 system; its determinant
is the spectrum generator and real zeros are the cavity eigenfrequencies.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import media
from .media import (
    ConstantDielectric,
    KinematicError,
    PermittivityModel,
    Plasma,
    UnsupportedModelError,
    classify_region,
)
from .numerics import scan_roots

__all__ = [
    "WORDS",
    "CavityConfig",
    "CavityRoot",
    "ModeCoefficients",
    "DiophantineSolution",
    "EnergyDifferenceReport",
    "boundary_matrix",
    "generator",
    "closed_form_generator",
    "scan_window",
    "word_point",
    "enumerate_roots",
    "mode_coefficients",
    "diophantine_search",
    "energy_difference",
    "cavity_pressure",
]

WORDS = ("OOO", "OEO", "OLO", "EOE", "EEE", "ELE", "LOL", "LEL")

HBAR = 1.054571817e-34  # J s
C_LIGHT = 299792458.0   # m / s

cos, sin, cosh, sinh = math.cos, math.sin, math.cosh, math.sinh


@dataclass(frozen=True)
class CavityConfig:
    """One (s, word, nx, ny) mode family in a cavity of aspect lambdas=(l1, l2, l)."""

    s: str
    word: str
    nx: int
    ny: int
    lambdas: tuple[float, float, float]
    model: PermittivityModel

    def __post_init__(self):
        if self.s not in ("TE", "TM"):
            raise ValueError(f"polarization must be TE or TM, got {self.s!r}")
        if self.word not in WORDS:
            raise ValueError(f"unknown mode word {self.word!r}")
        if self.nx < 0 or self.ny < 0 or (self.nx == 0 and self.ny == 0):
            raise ValueError("nx, ny must be non-negative and not both zero")
        if self.s == "TM" and (self.nx == 0 or self.ny == 0):
            raise ValueError("TM modes vanish when nx or ny is zero")
        if any(not (v > 0) for v in self.lambdas):
            raise ValueError("aspect ratios must be positive")
        if isinstance(self.model, media.PerfectConductor):
            raise UnsupportedModelError("cavity spectra need a finite permittivity model")

    @property
    def R(self) -> float:
        l1, l2, _ = self.lambdas
        return math.pi / l1 * math.sqrt(self.nx ** 2 + (l2 * self.ny) ** 2)

    @property
    def lam(self) -> float:
        return self.lambdas[2]


@dataclass(frozen=True)
class CavityRoot:
    """A discrete eigenfrequency with residual diagnostics."""

    omega: float
    config: CavityConfig
    residual: float         # |D(omega)| after refinement
    residual_scale: float   # typical |D| magnitude near the root
    sigma_min: float        # smallest singular value of the boundary matrix
    matrix_norm: float      # largest singular value


@dataclass(frozen=True)
class ModeCoefficients:
    """Six mode amplitudes (P_I, Q_I, P_II, Q_II, P_III, Q_III), max-magnitude 1."""

    values: tuple[float, ...]
    matrix_residual: float
    interface_residual: float
    boundary_residual: float


# ---------------------------------------------------------------------------
# kinematic helpers

def _region1_quantity(model, letter, omega, R, relaxed):
    """chi_I (letter O) or zeta_I (letter E) at real Omega; L returns 0."""
    if letter == "L":
        return np.zeros_like(np.asarray(omega, dtype=float))
    disc = media._w_poly(model, "I", np.asarray(omega, dtype=float)) - R * R
    want_pos = letter == "O"
    if not relaxed and bool(np.any((disc > 0) != want_pos)):
        raise KinematicError(
            f"region I is not class {letter} everywhere on the scan at R={R}")
    return np.sqrt(np.abs(disc))


def _region2_quantity(letter, omega, R, relaxed):
    if letter == "L":
        return np.zeros_like(np.asarray(omega, dtype=float))
    disc = np.asarray(omega, dtype=float) ** 2 - R * R
    want_pos = letter == "O"
    if not relaxed and bool(np.any((disc > 0) != want_pos)):
        raise KinematicError(
            f"region II is not class {letter} everywhere on the scan at R={R}")
    return np.sqrt(np.abs(disc))


def word_point(word: str, model: PermittivityModel, R: float) -> float:
    """The single Omega at which an L-carrying word can exist.

    X L X words pin Omega = R (chi_II = 0); L X L words pin the
    self-consistent chi_I = 0 frequency, i.e. kappa(Omega) Omega^2 = R^2.
    """
    if word in ("OLO", "ELE"):
        return R
    if word in ("LOL", "LEL"):
        if isinstance(model, ConstantDielectric):
            return R / math.sqrt(model.xi)
        if isinstance(model, Plasma):
            # self-consistency kappa(Omega) Omega^2 = R^2 reads
            # Omega^2 - xi = R^2; iterate u <- R^2 + xi (converges in one step)
            u = R * R
            for _ in range(100):
                u_next = R * R + model.xi
                done = abs(u_next - u) <= 1e-12 * max(1.0, u_next)
                u = u_next
                if done:
                    break
            return math.sqrt(u)
        raise UnsupportedModelError(f"no L-point rule for {model!r}")
    raise ValueError(f"word {word} carries no L letter")


def scan_window(config: CavityConfig, relaxed: bool = False) -> tuple[float, float] | None:
    """Open Omega interval on which the word's classes hold (None if empty).

    For the L-words the strict window is a single point; with relaxed=True
    the returned interval is where the non-degenerate regions keep their
    class (used by positivity scans).
    """
    R = config.R
    bp = media.branch_points(config.model, R)
    b_chi2 = R
    b_chi1 = bp.omega_b1 if bp.swapped else bp.omega_b2
    word = config.word
    if word == "OOO":
        return (max(b_chi1, b_chi2), math.inf)
    if word == "OEO":
        return (b_chi1, b_chi2) if b_chi1 < b_chi2 else None
    if word == "EOE":
        return (b_chi2, b_chi1) if b_chi2 < b_chi1 else None
    if word == "EEE":
        return (0.0, min(b_chi1, b_chi2))
    if not relaxed:
        return None
    if word in ("OLO", "ELE"):
        # region I class away from Omega = R
        return (b_chi1, math.inf) if word == "OLO" else (0.0, b_chi1)
    # LOL / LEL: region II class away from chi_I = 0
    return (b_chi2, math.inf) if word == "LOL" else (0.0, b_chi2)


# ---------------------------------------------------------------------------
# boundary matrices (Appendix forms, columns P_I, Q_I, P_II, Q_II, P_III, Q_III)

def _matrix_batch(config: CavityConfig, omega, relaxed: bool = False) -> np.ndarray:
    """Stack of 6x6 boundary matrices over an array of frequencies."""
    s, word, lam = config.s, config.word, config.lam
    R = config.R
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    cos, sin, cosh, sinh = np.cos, np.sin, np.cosh, np.sinh
    q1 = _region1_quantity(config.model, word[0], omega, R, relaxed)
    q2 = _region2_quantity(word[1], omega, R, relaxed)
    kr = media._w_poly(config.model, "I", omega) / omega ** 2
    eta = (1.0 + lam) * q1

    if word == "OOO":
        c1, s1, c2, s2 = cos(q1), sin(q1), cos(q2), sin(q2)
        cl, sl, ce, se = cos(lam * q1), sin(lam * q1), cos(eta), sin(eta)
        if s == "TE":
            rows = [[1, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -c1, -s1],
                    [0, q1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, -q2 * c2, -q1 * s1, q1 * c1],
                    [cl, -sl, 0, 0, 0, 0],
                    [0, 0, 0, 0, ce, se]]
        else:
            rows = [[0, q1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, -q2 * c2, -q1 * s1, q1 * c1],
                    [kr, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -kr * c1, -kr * s1],
                    [sl, cl, 0, 0, 0, 0],
                    [0, 0, 0, 0, se, -ce]]
    elif word == "OEO":
        c1, s1, c2, s2 = cos(q1), sin(q1), cosh(q2), sinh(q2)
        cl, sl, ce, se = cos(lam * q1), sin(lam * q1), cos(eta), sin(eta)
        if s == "TE":
            rows = [[1, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -c1, -s1],
                    [0, q1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, q2 * c2, q1 * s1, -q1 * c1],
                    [cl, -sl, 0, 0, 0, 0],
                    [0, 0, 0, 0, ce, se]]
        else:
            rows = [[0, q1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, q2 * c2, q1 * s1, -q1 * c1],
                    [kr, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -kr * c1, -kr * s1],
                    [sl, cl, 0, 0, 0, 0],
                    [0, 0, 0, 0, se, -ce]]
    elif word == "OLO":
        c1, s1 = cos(q1), sin(q1)
        cl, sl, ce, se = cos(lam * q1), sin(lam * q1), cos(eta), sin(eta)
        if s == "TE":
            rows = [[1, 0, -1, 0, 0, 0],
                    [0, 0, 1, 1, -c1, -s1],
                    [0, q1, 0, -1, 0, 0],
                    [0, 0, 0, 1, q1 * s1, -q1 * c1],
                    [cl, -sl, 0, 0, 0, 0],
                    [0, 0, 0, 0, ce, se]]
        else:
            rows = [[0, q1, 0, -1, 0, 0],
                    [0, 0, 0, 1, q1 * s1, -q1 * c1],
                    [kr, 0, -1, 0, 0, 0],
                    [0, 0, 1, 1, -kr * c1, -kr * s1],
                    [sl, cl, 0, 0, 0, 0],
                    [0, 0, 0, 0, se, -ce]]
    elif word == "EOE":
        c1, s1, c2, s2 = cosh(q1), sinh(q1), cos(q2), sin(q2)
        cl, sl, ce, se = cosh(lam * q1), sinh(lam * q1), cosh(eta), sinh(eta)
        if s == "TE":
            rows = [[1, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -c1, -s1],
                    [0, q1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, -q2 * c2, q1 * s1, q1 * c1],
                    [cl, -sl, 0, 0, 0, 0],
                    [0, 0, 0, 0, ce, se]]
        else:
            rows = [[0, q1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, -q2 * c2, q1 * s1, q1 * c1],
                    [kr, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -kr * c1, -kr * s1],
                    [sl, -cl, 0, 0, 0, 0],
                    [0, 0, 0, 0, se, ce]]
    elif word == "EEE":
        c1, s1, c2, s2 = cosh(q1), sinh(q1), cosh(q2), sinh(q2)
        cl, sl, ce, se = cosh(lam * q1), sinh(lam * q1), cosh(eta), sinh(eta)
        if s == "TE":
            rows = [[1, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -c1, -s1],
                    [0, q1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, q2 * c2, -q1 * s1, -q1 * c1],
                    [cl, -sl, 0, 0, 0, 0],
                    [0, 0, 0, 0, ce, se]]
        else:
            rows = [[0, q1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, q2 * c2, -q1 * s1, -q1 * c1],
                    [kr, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -kr * c1, -kr * s1],
                    [sl, -cl, 0, 0, 0, 0],
                    [0, 0, 0, 0, se, ce]]
    elif word == "ELE":
        c1, s1 = cosh(q1), sinh(q1)
        cl, sl, ce, se = cosh(lam * q1), sinh(lam * q1), cosh(eta), sinh(eta)
        if s == "TE":
            rows = [[1, 0, -1, 0, 0, 0],
                    [0, 0, 1, 1, -c1, -s1],
                    [0, q1, 0, -1, 0, 0],
                    [0, 0, 0, 1, -q1 * s1, -q1 * c1],
                    [cl, -sl, 0, 0, 0, 0],
                    [0, 0, 0, 0, ce, se]]
        else:
            rows = [[0, q1, 0, -1, 0, 0],
                    [0, 0, 0, 1, -q1 * s1, -q1 * c1],
                    [kr, 0, -1, 0, 0, 0],
                    [0, 0, 1, 1, -kr * c1, -kr * s1],
                    [sl, -cl, 0, 0, 0, 0],
                    [0, 0, 0, 0, se, ce]]
    elif word == "LOL":
        c2, s2 = cos(q2), sin(q2)
        if s == "TE":
            rows = [[1, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -1, -1],
                    [0, 1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, -q2 * c2, 0, 1],
                    [1, -lam, 0, 0, 0, 0],
                    [0, 0, 0, 0, 1, 1 + lam]]
        else:
            rows = [[0, 1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, -q2 * c2, 0, 1],
                    [kr, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -kr, -kr],
                    [0, 1, 0, 0, 0, 0],
                    [0, 0, 0, 0, 0, 1]]
    elif word == "LEL":
        c2, s2 = cosh(q2), sinh(q2)
        if s == "TE":
            rows = [[1, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -1, -1],
                    [0, 1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, q2 * c2, 0, -1],
                    [1, -lam, 0, 0, 0, 0],
                    [0, 0, 0, 0, 1, 1 + lam]]
        else:
            rows = [[0, 1, 0, -q2, 0, 0],
                    [0, 0, q2 * s2, q2 * c2, 0, -1],
                    [kr, 0, -1, 0, 0, 0],
                    [0, 0, c2, s2, -kr, -kr],
                    [0, 1, 0, 0, 0, 0],
                    [0, 0, 0, 0, 0, 1]]
    else:  # pragma: no cover
        raise ValueError(word)
    M = np.zeros((len(omega), 6, 6))
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            M[:, i, j] = entry
    return M


def boundary_matrix(config: CavityConfig, omega: float, relaxed: bool = False) -> np.ndarray:
    """The 6x6 homogeneous boundary/interface matrix at real Omega > 0.

    relaxed=True skips the kinematic-class validation so the L-word
    generators can be scanned away from their degenerate point.
    """
    if not relaxed:
        for region, letter in (("I", config.word[0]), ("II", config.word[1])):
            kin = classify_region(config.model, region, float(omega), config.R)
            if kin.klass != letter:
                raise KinematicError(
                    f"word {config.word} needs class {letter} in region {region} "
                    f"at Omega={omega}, R={config.R}; found {kin.klass}")
    return _matrix_batch(config, omega, relaxed=True)[0]


def generator(config: CavityConfig, omega, relaxed: bool = False):
    """Spectrum generator: LU determinant of the boundary matrix.

    Accepts a scalar or an array of frequencies (kinematic classes are then
    validated window-wise rather than per point)."""
    if np.ndim(omega) == 0:
        return float(np.linalg.det(boundary_matrix(config, float(omega), relaxed)))
    return np.linalg.det(_matrix_batch(config, omega, relaxed))


def closed_form_generator(s: str, word: str, q1: float, q2: float,
                          kr: float, lam: float) -> float:
    """Reference closed-form determinants used as regression oracles.

    q1 is chi_I or zeta_I and q2 is chi_II or zeta_II depending on the word.
    These reproduce the LU determinant up to the constant factors returned by
    :func:`closed_form_gamma`.
    """
    key = (s, word)
    if key == ("TE", "OOO"):
        return sin(q2) * (q2 ** 2 * sin(lam * q1) ** 2 - q1 ** 2 * cos(lam * q1) ** 2) \
            - q1 * q2 * cos(q2) * sin(2 * lam * q1)
    if key == ("TM", "OOO"):
        # cross-term sign fixed to agree with the boundary matrix (the kappa=1
        # limit must reduce to chi^2 sin((1+2 lam) chi))
        return sin(q2) * (kr ** 2 * q2 ** 2 * cos(lam * q1) ** 2
                          - q1 ** 2 * sin(lam * q1) ** 2) \
            + kr * q1 * q2 * cos(q2) * sin(2 * lam * q1)
    if key == ("TE", "OEO"):
        return sinh(q2) * (q2 ** 2 * sin(lam * q1) ** 2 + q1 ** 2 * cos(lam * q1) ** 2) \
            + q1 * q2 * cosh(q2) * sin(2 * lam * q1)
    if key == ("TM", "OEO"):
        return sinh(q2) * (kr ** 2 * q2 ** 2 * cos(lam * q1) ** 2
                           + q1 ** 2 * sin(lam * q1) ** 2) \
            - kr * q1 * q2 * cosh(q2) * sin(2 * lam * q1)
    if key == ("TE", "OLO"):
        return q1 * cos(lam * q1) * (2 * sin(lam * q1) + q1 * cos(lam * q1))
    if key == ("TM", "OLO"):
        return q1 * sin(lam * q1) * (2 * kr * cos(lam * q1) - q1 * sin(lam * q1))
    if key == ("TE", "EOE"):
        return sin(q2) * (q2 ** 2 * sinh(lam * q1) ** 2 - q1 ** 2 * cosh(lam * q1) ** 2) \
            - q1 * q2 * cos(q2) * sinh(2 * lam * q1)
    if key == ("TM", "EOE"):
        return sin(q2) * (kr ** 2 * q2 ** 2 * cosh(lam * q1) ** 2
                          - q1 ** 2 * sinh(lam * q1) ** 2) \
            - kr * q1 * q2 * cos(q2) * sinh(2 * lam * q1)
    if key == ("TE", "EEE"):
        return sinh(q2) * (q2 ** 2 * sinh(lam * q1) ** 2 + q1 ** 2 * cosh(lam * q1) ** 2) \
            + q1 * q2 * cosh(q2) * sinh(2 * lam * q1)
    if key == ("TM", "EEE"):
        return sinh(q2) * (kr ** 2 * q2 ** 2 * cosh(lam * q1) ** 2
                           + q1 ** 2 * sinh(lam * q1) ** 2) \
            + kr * q1 * q2 * cosh(q2) * sinh(2 * lam * q1)
    if key == ("TE", "ELE"):
        return q1 * cosh(lam * q1) * (2 * sinh(lam * q1) + q1 * cosh(lam * q1))
    if key == ("TM", "ELE"):
        return q1 * sinh(lam * q1) * (q1 * sinh(lam * q1) + 2 * kr * cosh(lam * q1))
    if key == ("TE", "LOL"):
        return sin(q2) * (lam ** 2 * q2 ** 2 - 1) - 2 * lam * q2 * cos(q2)
    if key == ("TM", "LOL"):
        return sin(q2)
    if key == ("TE", "LEL"):
        return sinh(q2) * (lam ** 2 * q2 ** 2 + 1) + 2 * lam * q2 * cosh(q2)
    if key == ("TM", "LEL"):
        return sinh(q2)
    raise ValueError(f"no closed form for {key}")


def closed_form_gamma(s: str, word: str, q2: float, kr: float) -> float:
    """Constant (or analytically known) ratio LU determinant / closed form."""
    key = (s, word)
    if key == ("TM", "OLO"):
        return 1.0
    if key == ("TM", "LOL"):
        return kr ** 2 * q2 ** 2
    if key == ("TM", "LEL"):
        return kr ** 2 * q2 ** 2
    return -1.0


# ---------------------------------------------------------------------------
# root enumeration and mode reconstruction

def _trim_window(lo: float, hi: float, omega_max: float) -> tuple[float, float] | None:
    hi = min(hi, omega_max)
    if not hi > lo:
        return None
    # stay strictly inside the window so the kinematic classes hold
    pad = 1e-9 * max(1.0, hi - lo if math.isfinite(hi) else 1.0)
    lo2, hi2 = lo + pad, hi - pad if math.isfinite(hi) else hi
    return (lo2, hi2) if hi2 > lo2 else None


def enumerate_roots(config: CavityConfig, omega_max: float,
                    n_grid: int | None = None) -> list[CavityRoot]:
    """All sign-change roots of the generator in the word window up to omega_max.

    L-carrying words have point spectra: the word point is returned only when
    the generator vanishes there (the Diophantine coincidences).
    """
    if not omega_max > 0:
        raise ValueError("omega_max must be positive")
    if "L" in config.word:
        point = word_point(config.word, config.model, config.R)
        window = scan_window(config, relaxed=True)
        if point > omega_max or window is None or not (window[0] <= point <= window[1]):
            return []
        val = generator(config, point, relaxed=True)
        scale = max(abs(val), _local_scale(config, point))
        if abs(val) <= 1e-9 * max(1.0, scale):
            return [_package_root(config, point, abs(val), scale, relaxed=True)]
        return []
    window = scan_window(config)
    if window is None:
        return []
    trimmed = _trim_window(window[0], window[1], omega_max)
    if trimmed is None:
        return []
    lo, hi = trimmed
    if n_grid is None:
        n_grid = max(200, min(int(2000 * (hi - lo)) + 1, 200_000))
    f = lambda w: generator(config, w)
    roots = scan_roots(f, lo, hi, n_grid=n_grid, tol=1e-12)
    out = []
    grid_scale = _grid_scale(config, lo, hi)
    for r in roots:
        out.append(_package_root(config, r, abs(generator(config, r)), grid_scale))
    return out


def _grid_scale(config, lo, hi, n=64):
    vals = np.abs(generator(config, np.linspace(lo, hi, n)))
    return float(np.max(vals)) if len(vals) else 1.0


def _local_scale(config, point):
    eps = 1e-3 * max(1.0, point)
    vals = []
    for w in (point - eps, point + eps):
        if w > 0:
            try:
                vals.append(abs(generator(config, w, relaxed=True)))
            except (KinematicError, ValueError):
                pass
    return max(vals) if vals else 1.0


def _package_root(config, omega, residual, scale, relaxed=False):
    M = boundary_matrix(config, omega, relaxed=relaxed)
    svals = np.linalg.svd(M, compute_uv=False)
    return CavityRoot(omega=float(omega), config=config, residual=float(residual),
                      residual_scale=float(scale), sigma_min=float(svals[-1]),
                      matrix_norm=float(svals[0]))


def _basis(letter: str, q: float):
    """Pair of (value, derivative) callables for one region's Z-dependence."""
    if letter == "O":
        return ((lambda Z: math.cos(q * Z), lambda Z: -q * math.sin(q * Z)),
                (lambda Z: math.sin(q * Z), lambda Z: q * math.cos(q * Z)))
    if letter == "E":
        return ((lambda Z: math.cosh(q * Z), lambda Z: q * math.sinh(q * Z)),
                (lambda Z: math.sinh(q * Z), lambda Z: q * math.cosh(q * Z)))
    return ((lambda Z: 1.0, lambda Z: 0.0), (lambda Z: Z, lambda Z: 1.0))


def mode_coefficients(root: CavityRoot, sigma_tol: float = 1e-8,
                      degenerate_tol: float = 1e-6) -> ModeCoefficients:
    """Null vector of the boundary matrix at a root, with residual checks.

    The returned amplitudes are the right-singular vector of the smallest
    singular value, scaled so the largest magnitude is one.  Interface and
    endpoint residuals are evaluated from the reconstructed piecewise
    profile, independent of the matrix rows.
    """
    config = root.config
    relaxed = "L" in config.word
    M = boundary_matrix(config, root.omega, relaxed=relaxed)
    U, svals, Vh = np.linalg.svd(M)
    if root.sigma_min > sigma_tol * max(svals[0], 1.0):
        raise ValueError(
            f"sigma_min={root.sigma_min} too large at Omega={root.omega}; not a root")
    if svals[-2] - svals[-1] < degenerate_tol * max(svals[0], 1.0):
        warnings.warn("nearly degenerate nullspace at the root; coefficients "
                      "span may be two-dimensional", RuntimeWarning, stacklevel=2)
    v = Vh[-1]
    imax = int(np.argmax(np.abs(v)))
    v = v / v[imax]
    matrix_residual = float(np.linalg.norm(M @ v))

    word, lam, R = config.word, config.lam, config.R
    q1 = _region1_quantity(config.model, word[0], root.omega, R, relaxed=True)
    q2 = _region2_quantity(word[1], root.omega, R, relaxed=True)
    kr = media.kappa(config.model, root.omega)
    bI = _basis(word[0], q1)
    bII = _basis(word[1], q2)

    def psi(region, Z, deriv):
        basis = bI if region in ("I", "III") else bII
        off = {"I": 0, "II": 2, "III": 4}[region]
        idx = 1 if deriv else 0
        return v[off] * basis[0][idx](Z) + v[off + 1] * basis[1][idx](Z)

    if config.s == "TE":
        iface = [psi("I", 0.0, 0) - psi("II", 0.0, 0),
                 psi("I", 0.0, 1) - psi("II", 0.0, 1),
                 psi("II", 1.0, 0) - psi("III", 1.0, 0),
                 psi("II", 1.0, 1) - psi("III", 1.0, 1)]
        bound = [psi("I", -lam, 0), psi("III", 1.0 + lam, 0)]
    else:
        iface = [kr * psi("I", 0.0, 0) - psi("II", 0.0, 0),
                 psi("I", 0.0, 1) - psi("II", 0.0, 1),
                 psi("II", 1.0, 0) - kr * psi("III", 1.0, 0),
                 psi("II", 1.0, 1) - psi("III", 1.0, 1)]
        bound = [psi("I", -lam, 1), psi("III", 1.0 + lam, 1)]
    return ModeCoefficients(values=tuple(float(x) for x in v),
                            matrix_residual=matrix_residual,
                            interface_residual=float(max(abs(x) for x in iface)),
                            boundary_residual=float(max(abs(x) for x in bound)))


# ---------------------------------------------------------------------------
# Diophantine special cases

@dataclass(frozen=True)
class DiophantineSolution:
    nx: int
    ny: int
    ell: int
    omega: float


def _as_fraction(x) -> Fraction | None:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    frac = Fraction(x).limit_denominator(10 ** 9)
    if abs(float(frac) - x) <= 1e-15 * max(1.0, abs(x)):
        return frac
    return None


def diophantine_search(s: str, word: str, xi, lambda1=1.0, lambda2=1.0, lam=1.0,
                       n_max: int = 10) -> list[DiophantineSolution]:
    """Integer triples (nx, ny, ell) solving the affine-linear word conditions.

    OLO (TE, constant dielectric, xi > 1): cos(lam chi_I) = 0 at Omega = R
    gives nx^2 + lambda2^2 ny^2 = lambda1^2 (ell + 1/2)^2 / (lam^2 (xi - 1)).
    LOL (TM, 0 < xi < 1): sin(chi_II) = 0 at the chi_I = 0 point gives
    nx^2 + lambda2^2 ny^2 = lambda1^2 ell^2 xi/(1 - xi), with
    Omega = ell pi / sqrt(1 - xi).

    Equality is tested in exact rational arithmetic when all inputs are
    rational, otherwise with absolute tolerance 1e-9.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    xi_f = float(xi) if not isinstance(xi, str) else float(Fraction(xi))
    if (s, word) == ("TE", "OLO"):
        if not xi_f > 1:
            raise ValueError("OLO Diophantine modes need xi > 1")
    elif (s, word) == ("TM", "LOL"):
        if not 0 < xi_f < 1:
            raise ValueError("LOL TM Diophantine modes need 0 < xi < 1")
    else:
        raise ValueError(f"no Diophantine family for ({s}, {word})")

    fr = [_as_fraction(v) for v in (xi, lambda1, lambda2, lam)]
    exact = all(f is not None for f in fr)
    l1_f, l2_f, lam_f = float(lambda1), float(lambda2), float(lam)
    out = []
    ny_min = 1 if s == "TM" else 0
    for nx in range(ny_min, n_max + 1):
        for ny in range(ny_min, n_max + 1):
            if nx == 0 and ny == 0:
                continue
            if word == "OLO":
                if exact:
                    xi_r, l1, l2, lm = fr
                    K = (nx ** 2 + l2 ** 2 * ny ** 2) * lm ** 2 * (xi_r - 1) / l1 ** 2
                    K4 = 4 * K
                    if K4.denominator != 1:
                        continue
                    m = math.isqrt(K4.numerator)
                    if m * m != K4.numerator or m % 2 == 0:
                        continue
                    ell = (m - 1) // 2
                else:
                    K = (nx ** 2 + l2_f ** 2 * ny ** 2) * lam_f ** 2 * (xi_f - 1) / l1_f ** 2
                    ell = round(math.sqrt(K) - 0.5)
                    if ell < 0:
                        continue
                    lhs = nx ** 2 + l2_f ** 2 * ny ** 2
                    rhs = l1_f ** 2 * (ell + 0.5) ** 2 / (lam_f ** 2 * (xi_f - 1))
                    if abs(lhs - rhs) >= 1e-9:
                        continue
                omega = math.pi / l1_f * math.sqrt(nx ** 2 + (l2_f * ny) ** 2)
            else:  # LOL, TM
                if exact:
                    xi_r, l1, l2, lm = fr
                    Ksq = (nx ** 2 + l2 ** 2 * ny ** 2) * (1 / xi_r - 1) / l1 ** 2
                    if Ksq.denominator != 1:
                        continue
                    ell = math.isqrt(Ksq.numerator)
                    if ell * ell != Ksq.numerator or ell == 0:
                        continue
                else:
                    Ksq = (nx ** 2 + l2_f ** 2 * ny ** 2) * (1 / xi_f - 1) / l1_f ** 2
                    ell = round(math.sqrt(Ksq))
                    if ell == 0:
                        continue
                    lhs = nx ** 2 + l2_f ** 2 * ny ** 2
                    rhs = l1_f ** 2 * ell ** 2 / (1 / xi_f - 1)
                    if abs(lhs - rhs) >= 1e-9:
                        continue
                omega = ell * math.pi / math.sqrt(1 - xi_f)
            out.append(DiophantineSolution(nx=nx, ny=ny, ell=int(ell), omega=omega))
    out.sort(key=lambda sol: (sol.omega, sol.nx, sol.ny))
    return out


# ---------------------------------------------------------------------------
# truncated energy differences and pressure

@dataclass
class EnergyDifferenceReport:
    """Truncated mode-sum energy difference between two material fillings."""

    total: float                       # dimensionless sum of (Omega - Omega_ref)
    partial_by_shell: list[tuple[int, float]]
    mismatches: list[tuple[str, str, int, int, int, int]]
    n_max: int
    omega_max: float

    def energy_joules(self, Lz: float) -> float:
        """hbar c/(2 Lz) times the dimensionless sum."""
        return 0.5 * HBAR * C_LIGHT / Lz * self.total


def _family_roots(s, word, nx, ny, lambdas, model, omega_max):
    try:
        cfg = CavityConfig(s=s, word=word, nx=nx, ny=ny, lambdas=lambdas, model=model)
    except (ValueError, UnsupportedModelError):
        return None
    return [r.omega for r in enumerate_roots(cfg, omega_max)]


def energy_difference(lambdas: tuple[float, float, float],
                      model: PermittivityModel, model_ref: PermittivityModel,
                      n_max: int, omega_max: float,
                      words: tuple[str, ...] = WORDS) -> EnergyDifferenceReport:
    """Sum of paired root differences over all words, polarizations and
    transverse integers up to n_max, roots up to omega_max.

    Roots are paired by index within each (s, word, nx, ny) family; families
    whose two member counts differ contribute only the common prefix and are
    recorded as mismatches.
    """
    total = 0.0
    mismatches = []
    shell_sums: dict[int, float] = {}
    for s in ("TE", "TM"):
        for word in words:
            for nx in range(0, n_max + 1):
                for ny in range(0, n_max + 1):
                    if nx == 0 and ny == 0:
                        continue
                    a = _family_roots(s, word, nx, ny, lambdas, model, omega_max)
                    if a is None:
                        continue
                    b = _family_roots(s, word, nx, ny, lambdas, model_ref, omega_max)
                    if len(a) != len(b):
                        mismatches.append((s, word, nx, ny, len(a), len(b)))
                    contrib = sum(x - y for x, y in zip(a, b))
                    total += contrib
                    shell = max(nx, ny)
                    shell_sums[shell] = shell_sums.get(shell, 0.0) + contrib
    partial = []
    running = 0.0
    for shell in sorted(shell_sums):
        running += shell_sums[shell]
        partial.append((shell, running))
    return EnergyDifferenceReport(total=total, partial_by_shell=partial,
                                  mismatches=mismatches, n_max=n_max,
                                  omega_max=omega_max)


def _rescale_model(model: PermittivityModel, factor: float) -> PermittivityModel:
    """Model at a dilated slab width: plasma xi scales as Lz^2, others fixed."""
    if isinstance(model, Plasma):
        return Plasma(xi=model.xi * factor ** 2)
    return model


def cavity_pressure(lambdas: tuple[float, float, float],
                    model: PermittivityModel, model_ref: PermittivityModel,
                    n_max: int, omega_max: float, Lz: float,
                    rel_step: float = 1e-4) -> float:
    """Normal pressure difference -d[E/(Lx Ly)]/dLz by central difference.

    Lx, Ly and Lf are held fixed in physical units, so the aspect ratios and
    (for the plasma model) xi are recomputed at each perturbed width.
    """
    l1, l2, lam = lambdas
    h = rel_step * Lz
    area = (l1 * Lz) * (l1 * Lz / l2)

    def energy_at(lz: float) -> float:
        scale = lz / Lz
        lam_scaled = (l1 / scale, l2, lam / scale)
        rep = energy_difference(lam_scaled, _rescale_model(model, scale),
                                _rescale_model(model_ref, scale), n_max, omega_max)
        return rep.energy_joules(lz)

    dE = (energy_at(Lz + h) - energy_at(Lz - h)) / (2.0 * h)
    return -dE / area
