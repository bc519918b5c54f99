"""Permittivity models and per-region kinematics for the three-region planar system.

Regions I and III carry the same material (relative permittivity kappa);
region II is always vacuum (kappa = 1).  Frequencies and transverse wave
numbers are the dimensionless Omega = omega*Lz/c and R = k*Lz.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "ConstantDielectric",
    "Plasma",
    "Lorentz",
    "PerfectConductor",
    "PermittivityModel",
    "RegionKinematics",
    "BranchPoints",
    "DomainError",
    "UnsupportedModelError",
    "BranchPointError",
    "KinematicError",
    "parse_model",
    "model_spec",
    "kappa",
    "kappa_region",
    "classify_region",
    "chi_continued",
    "branch_points",
]

# Absolute tolerance on the discriminant kappa*Omega^2 - R^2 below which a
# point is classified as affine-linear (class L).
CLASS_L_TOL = 1e-12

# Relative proximity to a branch point at which analytic continuation refuses
# to evaluate.
BRANCH_TOL = 1e-14

REGIONS = ("I", "II", "III")


class DomainError(ValueError):
    """A permittivity law was evaluated at an excluded frequency."""


class UnsupportedModelError(TypeError):
    """The requested operation is undefined for this permittivity model."""


class BranchPointError(ValueError):
    """Evaluation requested too close to a branch point of chi."""


class KinematicError(ValueError):
    """Frequency/wavenumber pair incompatible with the requested mode classes."""


@dataclass(frozen=True)
class ConstantDielectric:
    """kappa(Omega) = xi for all Omega (xi > 0)."""

    xi: float

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError(f"constant dielectric requires xi > 0, got {self.xi}")


@dataclass(frozen=True)
class Plasma:
    """Metallic plasma law kappa(Omega) = 1 - xi/Omega^2 (xi > 0)."""

    xi: float

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError(f"plasma model requires xi > 0, got {self.xi}")


@dataclass(frozen=True)
class Lorentz:
    """Single-pole Lorentz law kappa = 1 + Omega0^2 (kappa0 - 1)/(Omega0^2 - Omega^2)."""

    kappa0: float
    omega0: float

    def __post_init__(self):
        if not self.kappa0 > 0 or self.kappa0 == 1.0:
            raise ValueError(f"Lorentz model requires kappa0 > 0 and != 1, got {self.kappa0}")
        if not self.omega0 > 0:
            raise ValueError(f"Lorentz model requires Omega0 > 0, got {self.omega0}")


@dataclass(frozen=True)
class PerfectConductor:
    """Symbolic kappa -> infinity limit; only closed-form limit expressions apply."""


PermittivityModel = Union[ConstantDielectric, Plasma, Lorentz, PerfectConductor]


def parse_model(spec: str) -> PermittivityModel:
    """Parse a model specification string.

    Accepted forms: ``const:xi=<float>``, ``plasma:xi=<float>``,
    ``lorentz:kappa0=<float>,omega0=<float>``, ``pc``.
    """
    spec = spec.strip()
    if spec == "pc":
        return PerfectConductor()
    head, _, tail = spec.partition(":")
    kv = {}
    if tail:
        for item in tail.split(","):
            key, _, val = item.partition("=")
            if not val:
                raise ValueError(f"malformed model parameter {item!r} in {spec!r}")
            kv[key.strip()] = float(val)
    try:
        if head == "const":
            return ConstantDielectric(xi=kv.pop("xi"))
        if head == "plasma":
            return Plasma(xi=kv.pop("xi"))
        if head == "lorentz":
            return Lorentz(kappa0=kv.pop("kappa0"), omega0=kv.pop("omega0"))
    except KeyError as exc:
        raise ValueError(f"missing parameter {exc} in model spec {spec!r}") from None
    raise ValueError(f"unknown model spec {spec!r}")


def model_spec(model: PermittivityModel) -> str:
    """Inverse of :func:`parse_model` (floats printed round-trip exact)."""
    if isinstance(model, ConstantDielectric):
        return f"const:xi={model.xi!r}"
    if isinstance(model, Plasma):
        return f"plasma:xi={model.xi!r}"
    if isinstance(model, Lorentz):
        return f"lorentz:kappa0={model.kappa0!r},omega0={model.omega0!r}"
    if isinstance(model, PerfectConductor):
        return "pc"
    raise UnsupportedModelError(f"not a permittivity model: {model!r}")


def kappa(model: PermittivityModel, omega: complex) -> complex:
    """Relative permittivity kappa(Omega) of regions I/III.

    Real input yields a real (float) result.  Raises DomainError on the
    excluded points (Omega = 0 for plasma, Omega^2 = Omega0^2 for Lorentz)
    and UnsupportedModelError for the perfect conductor, which has no finite
    kappa.
    """
    if isinstance(model, ConstantDielectric):
        return model.xi if isinstance(omega, (int, float)) else complex(model.xi)
    if isinstance(model, Plasma):
        if omega == 0:
            raise DomainError("plasma permittivity is undefined at Omega = 0")
        return 1.0 - model.xi / (omega * omega)
    if isinstance(model, Lorentz):
        w0sq = model.omega0 ** 2
        denom = w0sq - omega * omega
        if denom == 0:
            raise DomainError("Lorentz permittivity is undefined at the resonance pole")
        return 1.0 + w0sq * (model.kappa0 - 1.0) / denom
    if isinstance(model, PerfectConductor):
        raise UnsupportedModelError("perfect conductor has no finite kappa; use limit forms")
    raise UnsupportedModelError(f"not a permittivity model: {model!r}")


def kappa_region(model: PermittivityModel, region: str, omega: complex) -> complex:
    """kappa in the named region; region II is always vacuum."""
    if region not in REGIONS:
        raise ValueError(f"unknown region {region!r}")
    if region == "II":
        return 1.0 if isinstance(omega, (int, float)) else complex(1.0)
    return kappa(model, omega)


def _w_poly(model: PermittivityModel, region: str, omega):
    """kappa(Omega) * Omega^2 in polynomial form (finite at Omega = 0 for plasma)."""
    if region == "II":
        return omega * omega
    if isinstance(model, ConstantDielectric):
        return model.xi * omega * omega
    if isinstance(model, Plasma):
        return omega * omega - model.xi
    if isinstance(model, Lorentz):
        return kappa(model, omega) * omega * omega
    raise UnsupportedModelError("perfect conductor has no kinematic discriminant")


def _dw_poly(model: PermittivityModel, region: str, omega):
    """d(kappa*Omega^2)/dOmega matching :func:`_w_poly`."""
    if region == "II":
        return 2.0 * omega
    if isinstance(model, ConstantDielectric):
        return 2.0 * model.xi * omega
    if isinstance(model, Plasma):
        return 2.0 * omega
    if isinstance(model, Lorentz):
        w0sq = model.omega0 ** 2
        denom = w0sq - omega * omega
        # d/dOmega [Omega^2 + w0^2 (k0-1) Omega^2 / (w0^2 - Omega^2)]
        return 2.0 * omega + w0sq * (model.kappa0 - 1.0) * (
            2.0 * omega / denom + 2.0 * omega ** 3 / denom ** 2
        )
    raise UnsupportedModelError("perfect conductor has no kinematic discriminant")


@dataclass(frozen=True)
class RegionKinematics:
    """Kinematic class of one region at real (Omega, R).

    klass 'O' (oscillatory) carries chi = sqrt(kappa Omega^2 - R^2),
    klass 'E' (evanescent) carries zeta = sqrt(R^2 - kappa Omega^2),
    klass 'L' is the affine-linear degenerate case kappa Omega^2 = R^2.
    """

    region: str
    klass: str
    chi: float | None = None
    zeta: float | None = None


def classify_region(
    model: PermittivityModel,
    region: str,
    omega: float,
    R: float,
    tol: float = CLASS_L_TOL,
) -> RegionKinematics:
    """Classify a region as O, E or L at real Omega > 0, R > 0."""
    if not (omega > 0 and R > 0):
        raise ValueError("classify_region requires Omega > 0 and R > 0")
    disc = _w_poly(model, region, omega) - R * R
    if abs(disc) <= tol:
        return RegionKinematics(region, "L")
    if disc > 0:
        return RegionKinematics(region, "O", chi=math.sqrt(disc))
    return RegionKinematics(region, "E", zeta=math.sqrt(-disc))


def chi_continued(model: PermittivityModel, region: str, omega: complex, R: float) -> complex:
    """Analytic continuation of chi = sqrt(kappa Omega^2 - R^2).

    Branch: Im chi >= 0 throughout the upper half-plane (so e^{i chi Z}
    decays where fields must be bounded); the lower half-plane is the
    Schwarz reflection conj(chi(conj Omega)).  Real Omega is treated as the
    limit from above, giving +chi in propagating windows and +i*zeta in
    evanescent ones.
    """
    omega = complex(omega)
    w = _w_poly(model, region, omega)
    d = w - R * R
    if abs(d) < BRANCH_TOL * max(1.0, abs(w)):
        raise BranchPointError(
            f"Omega={omega} is within branch-point tolerance for region {region}"
        )
    if omega.imag > 0:
        return 1j * cmath.sqrt(R * R - w)
    if omega.imag < 0:
        return (1j * cmath.sqrt((R * R - w).conjugate())).conjugate()
    # real axis: limit from the upper half-plane
    dr = d.real
    if dr > 0:
        return complex(math.sqrt(dr))
    return 1j * math.sqrt(-dr)


def dchi_continued(model: PermittivityModel, region: str, omega: complex, R: float) -> complex:
    """Derivative d chi/d Omega on the same branch as :func:`chi_continued`."""
    chi = chi_continued(model, region, omega, R)
    omega = complex(omega)
    if omega.imag < 0:
        dw = _dw_poly(model, region, omega.conjugate())
        return (dw / (2.0 * chi.conjugate())).conjugate()
    return _dw_poly(model, region, omega) / (2.0 * chi)


@dataclass(frozen=True)
class BranchPoints:
    """Ordered positive real branch points; swapped=True when the chi_I zero
    lies below the chi_II zero (constant dielectric with xi > 1)."""

    omega_b1: float
    omega_b2: float
    swapped: bool = False


def branch_points(model: PermittivityModel, R: float) -> BranchPoints:
    """Positive real zeros of chi_II (at Omega = R) and chi_I."""
    if R <= 0:
        raise ValueError("branch_points requires R > 0")
    b_chi2 = R
    if isinstance(model, ConstantDielectric):
        b_chi1 = R / math.sqrt(model.xi)
    elif isinstance(model, Plasma):
        b_chi1 = math.sqrt(R * R + model.xi)
    else:
        raise UnsupportedModelError(
            "branch points are defined for the constant dielectric and plasma models"
        )
    if b_chi1 < b_chi2:
        return BranchPoints(omega_b1=b_chi1, omega_b2=b_chi2, swapped=True)
    return BranchPoints(omega_b1=b_chi2, omega_b2=b_chi1, swapped=False)
