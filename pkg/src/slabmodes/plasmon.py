"""Non-retarded surface-plasmon energetics for the single-pole Lorentz model.

The TM doubly-evanescent branch supports two coupled surface modes whose
frequencies solve e^{2 k Lz} = ((1 - kappa)/(1 + kappa))^2 in closed form.
Summing their zero-point shifts over transverse wavenumbers gives the
interaction energy per unit area as a rapidly convergent series in
delta = (kappa0 - 1)/(kappa0 + 1), with an independent quadrature oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .numerics import integrate_adaptive

__all__ = [
    "HBAR",
    "PlasmonSetup",
    "omega_pm",
    "a_coeff",
    "vk_series_energy",
    "vk_quadrature_energy",
    "plasmon_stress",
    "nonretarded_residual",
]

HBAR = 1.054571817e-34  # J s


@dataclass(frozen=True)
class PlasmonSetup:
    """Lorentz oscillator (kappa0, omega0) filling both half-spaces around a
    vacuum gap of width Lz."""

    kappa0: float
    omega0: float   # rad/s
    Lz: float       # m

    def __post_init__(self):
        if not self.kappa0 > 0 or self.kappa0 == 1.0:
            raise ValueError("kappa0 must be positive and != 1")
        if not self.omega0 > 0 or not self.Lz > 0:
            raise ValueError("omega0 and Lz must be positive")

    @property
    def delta(self) -> float:
        return (self.kappa0 - 1.0) / (self.kappa0 + 1.0)

    @property
    def omega_top(self) -> float:
        """Common k -> inf asymptote omega0 sqrt((kappa0 + 1)/2)."""
        return self.omega0 * math.sqrt(0.5 * (self.kappa0 + 1.0))


def omega_pm(k: float, setup: PlasmonSetup) -> tuple[float, float]:
    """The two coupled surface-mode frequencies at transverse wavenumber k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    e = math.exp(-k * setup.Lz)
    base = 0.5 * setup.omega0 ** 2
    plus = math.sqrt(base * (setup.kappa0 + 1.0 + (setup.kappa0 - 1.0) * e))
    minus = math.sqrt(base * (setup.kappa0 + 1.0 - (setup.kappa0 - 1.0) * e))
    return plus, minus


def nonretarded_residual(k: float, omega: float, setup: PlasmonSetup) -> float:
    """Residual of e^{2 k Lz} = ((1 - kappa(omega))/(1 + kappa(omega)))^2.

    The two frequencies of :func:`omega_pm` are its exact zeros."""
    w0sq = setup.omega0 ** 2
    kap = 1.0 + w0sq * (setup.kappa0 - 1.0) / (w0sq - omega * omega)
    return math.exp(2.0 * k * setup.Lz) - ((1.0 - kap) / (1.0 + kap)) ** 2


def a_coeff(n: int) -> Fraction:
    """Binomial square-root coefficient (2n)! / (4^n (2n - 1) (n!)^2), exact."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(math.factorial(2 * n),
                    4 ** n * (2 * n - 1) * math.factorial(n) ** 2)


def vk_series_energy(setup: PlasmonSetup, n_terms: int = 30) -> float:
    """Interaction energy per unit area from the closed series (J/m^2).

    U = -(hbar omega0 / 8 pi Lz^2) sqrt((kappa0+1)/2) sum a_{2n} delta^{2n}/n^2;
    truncation error is bounded by the first omitted term.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    d2 = setup.delta ** 2
    total = 0.0
    for n in range(1, n_terms + 1):
        total += float(a_coeff(2 * n)) * d2 ** n / n ** 2
    pref = HBAR * setup.omega0 / (8.0 * math.pi * setup.Lz ** 2)
    return -pref * math.sqrt(0.5 * (setup.kappa0 + 1.0)) * total


def vk_quadrature_energy(setup: PlasmonSetup, rel_tol: float = 1e-11) -> float:
    """Direct zero-point quadrature oracle for :func:`vk_series_energy`.

    Integrates (hbar/2) (1/pi^2) (pi/2) int_0^inf k [omega_+ + omega_- -
    2 omega_top] dk, written in the dimensionless variable u = k Lz.
    """
    delta = setup.delta

    def bracket(u):
        e = math.exp(-u)
        return u * (math.sqrt(1.0 + delta * e) + math.sqrt(1.0 - delta * e) - 2.0)

    res = integrate_adaptive(bracket, 0.0, math.inf, rel_tol=rel_tol)
    pref = HBAR * setup.omega_top / (4.0 * math.pi * setup.Lz ** 2)
    return pref * res.value


def plasmon_stress(setup: PlasmonSetup, n_terms: int = 30) -> float:
    """|dU/dLz| from the closed 1/Lz^2 scaling of the series energy (Pa)."""
    return 2.0 * abs(vk_series_energy(setup, n_terms)) / setup.Lz
