"""Named verification suites behind the CLI and the acceptance tests.

Each suite runs a set of checks with explicit tolerances and returns a
structured report; randomized sweeps are seeded and record their seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cavity, lifshitz, media, openmodes, plasmon
from .media import ConstantDielectric, PerfectConductor, PermittivityModel, Plasma

__all__ = ["VerifyCheck", "VerifyReport", "SUITES", "run_suite"]


@dataclass(frozen=True)
class VerifyCheck:
    label: str
    passed: bool
    value: float
    tol: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.label}: value={self.value:.6g} tol={self.tol:.3g}"


@dataclass
class VerifyReport:
    suite: str
    seed: int
    checks: list[VerifyCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, label: str, value: float, tol: float):
        self.checks.append(VerifyCheck(label=label, passed=bool(value < tol),
                                       value=float(value), tol=float(tol)))


def _random_model(rng) -> PermittivityModel:
    if rng.uniform() < 0.5:
        xi = float(rng.uniform(0.05, 0.95) if rng.uniform() < 0.5
                   else rng.uniform(1.05, 10.0))
        return ConstantDielectric(xi=xi)
    return Plasma(xi=float(rng.uniform(0.5, 50.0)))


def _ooo_omega(model, R, rng):
    """A random frequency in the doubly propagating window."""
    b2 = media.branch_points(model, R).omega_b2
    return float(b2 * (1.0 + rng.uniform(0.05, 3.0)))


def suite_unitarity(seed: int = 0, n: int = 100, tol: float = 1e-10) -> VerifyReport:
    """|R|^2 + |T|^2 = 1 for random lossless propagating configurations."""
    rng = np.random.default_rng(seed)
    rep = VerifyReport(suite="unitarity", seed=seed)
    worst = 0.0
    for _ in range(n):
        model = _random_model(rng)
        R_t = float(rng.uniform(0.2, 10.0))
        omega = _ooo_omega(model, R_t, rng)
        for s in ("TE", "TM"):
            amp = openmodes.scattering(s, "OOO", omega, R_t, model)
            worst = max(worst, abs(abs(amp.R) ** 2 + abs(amp.T) ** 2 - 1.0))
    rep.add(f"max | |R|^2+|T|^2 - 1 | over {n} configs x 2 pols", worst, tol)
    return rep


def suite_kappa1(seed: int = 0, tol_F: float = 1e-14,
                 tol_roots: float = 1e-10) -> VerifyReport:
    """The xi = 1 filling is indistinguishable from vacuum."""
    rng = np.random.default_rng(seed)
    rep = VerifyReport(suite="kappa1", seed=seed)
    model = ConstantDielectric(xi=1.0)
    worst = 0.0
    for _ in range(1000):
        R_t = float(rng.uniform(0.1, 20.0))
        if rng.uniform() < 0.5:
            omega = complex(rng.uniform(0.1, 30.0), rng.uniform(0.01, 10.0))
        else:
            omega = 1j * float(rng.uniform(0.1, 30.0))
        for s in ("TE", "TM"):
            worst = max(worst, abs(lifshitz.F_value(s, omega, R_t, model) - 1.0))
    rep.add("max |F - 1| at 1000 random complex points", worst, tol_F)

    worst = 0.0
    for _ in range(20):
        lam = float(rng.uniform(0.3, 2.5))
        nx = int(rng.integers(0, 4))
        ny = int(rng.integers(0 if nx else 1, 4))
        cfg = cavity.CavityConfig("TE", "OOO", nx, ny, (1.0, 1.0, lam), model)
        L = 1.0 + 2.0 * lam
        omega_max = math.sqrt(cfg.R ** 2 + (8 * math.pi / L) ** 2)
        roots = cavity.enumerate_roots(cfg, omega_max)
        exact = [math.sqrt(cfg.R ** 2 + (m * math.pi / L) ** 2) for m in range(1, 9)]
        for got, want in zip(roots, exact):
            worst = max(worst, abs(got.omega - want))
    rep.add("max |root - closed form| for 20 random vacuum cavities", worst, tol_roots)

    ii = lifshitz.I_imag("TE", model, 10.0, 10.0)
    rep.add("|I_imag| at xi = 1", abs(ii.value), 1e-14)
    return rep


def suite_positivity(seed: int = 0, n_points: int = 10_000) -> VerifyReport:
    """No real zeros of the evanescent-word cavity generators for positive
    constant permittivity (sign changes counted on dense scans)."""
    rep = VerifyReport(suite="positivity", seed=seed)
    for xi in (0.5, 2.0, 10.0):
        model = ConstantDielectric(xi=xi)
        for s in ("TE", "TM"):
            for word in ("EEE", "ELE", "LEL"):
                cfg = cavity.CavityConfig(s, word, 1, 1, (1.0, 1.0, 1.0), model)
                window = cavity.scan_window(cfg, relaxed=True)
                lo, hi = window
                hi = min(hi, 3.0 * cfg.R)
                xs = np.linspace(lo + 1e-9 * (hi - lo), hi - 1e-9 * (hi - lo), n_points)
                vals = cavity.generator(cfg, xs, relaxed=True)
                flips = int(np.sum(np.signbit(vals[:-1]) != np.signbit(vals[1:])))
                rep.add(f"sign changes of D^{s}_{word} at xi={xi}", flips, 1)
    return rep


def suite_pc(Lz: float = 1e-6, tol_I: float = 1e-6, tol_U: float = 1e-6,
             tol_P: float = 1e-5, rel_tol: float = 1e-8) -> VerifyReport:
    """Perfect-conductor limit: the dimensionless integral and the physical
    Casimir energy/pressure normalization."""
    rep = VerifyReport(suite="pc", seed=0)
    ref = math.pi ** 4 / 180.0
    ii = lifshitz.I_imag("TE", PerfectConductor(), rel_tol=rel_tol)
    rep.add("rel err of I_imag(PC) vs pi^4/180", abs(ii.value - ref) / ref, tol_I)
    setup = lifshitz.PhysicalSetup(Lz=Lz, perfect_conductor=True)
    res = lifshitz.interaction_energy(setup, rel_tol=rel_tol)
    U_ref = -math.pi ** 2 * lifshitz.HBAR * lifshitz.C_LIGHT / (1440.0 * Lz ** 3)
    for s in ("TE", "TM"):
        rep.add(f"rel err of U^{s} vs -pi^2 hbar c/1440 Lz^3",
                abs(res.U_per_pol[s] - U_ref) / abs(U_ref), tol_U)
    P_ref = math.pi ** 2 * lifshitz.HBAR * lifshitz.C_LIGHT / (240.0 * Lz ** 4)
    rep.add("rel err of |P| vs pi^2 hbar c/240 Lz^4",
            abs(res.P_total - P_ref) / P_ref, tol_P)
    return rep


def suite_cauchy(model: PermittivityModel | None = None, seed: int = 20260809,
                 s: str = "TE", R0: float = 10.0, rho: float = 100.0,
                 n_rect: int = 20, tol_rect: float = 1e-8,
                 tol_identity: float = 2e-2, skip_identity: bool = False) -> VerifyReport:
    """Cauchy rectangle zeros plus the imaginary/real-axis identity."""
    if model is None:
        model = Plasma(xi=30.0)
    rep = VerifyReport(suite="cauchy", seed=seed)
    report = lifshitz.cauchy_identity(s, model, R0, rho, n_rect=n_rect,
                                      seed=seed, skip_real=skip_identity)
    rep.add(f"max |oint Omega dlnF| over {n_rect} rectangles",
            report.rectangle_max, tol_rect)
    if not skip_identity:
        rep.add(f"|I_real - I_imag|/|I_imag| at (R0, rho)=({R0}, {rho})",
                report.discrepancy_rel, tol_identity)
    return rep


def suite_vankampen(kappa0: float = 3.0, omega0: float = 1.0e15,
                    Lz: float = 1e-8, n_terms: int = 30,
                    tol_series: float = 1e-8, tol_scale: float = 1e-10,
                    tol_asym: float = 1e-6) -> VerifyReport:
    """Surface-plasmon series vs quadrature, scaling laws, asymptotes."""
    rep = VerifyReport(suite="vankampen", seed=0)
    st = plasmon.PlasmonSetup(kappa0=kappa0, omega0=omega0, Lz=Lz)
    Us = plasmon.vk_series_energy(st, n_terms)
    Uq = plasmon.vk_quadrature_energy(st)
    rep.add(f"series ({n_terms} terms) vs quadrature rel err",
            abs(Us - Uq) / abs(Uq), tol_series)
    st2 = plasmon.PlasmonSetup(kappa0=kappa0, omega0=omega0, Lz=2.0 * Lz)
    ratio = plasmon.vk_series_energy(st, n_terms) / plasmon.vk_series_energy(st2, n_terms)
    rep.add("|U(Lz)/U(2Lz) - 4|", abs(ratio - 4.0), tol_scale)
    sratio = plasmon.plasmon_stress(st) / plasmon.plasmon_stress(st2)
    rep.add("|stress(Lz)/stress(2Lz) - 8|", abs(sratio - 8.0), tol_scale)
    wp, wm = plasmon.omega_pm(20.0 / Lz, st)
    top = st.omega_top
    rep.add("surface-mode asymptote rel err at k Lz = 20",
            max(abs(wp - top), abs(wm - top)) / top, tol_asym)
    return rep


SUITES = {
    "cauchy": suite_cauchy,
    "unitarity": suite_unitarity,
    "kappa1": suite_kappa1,
    "positivity": suite_positivity,
    "pc": suite_pc,
    "vankampen": suite_vankampen,
}


def run_suite(name: str, model: PermittivityModel | None = None,
              seed: int | None = None, tol: float | None = None,
              **kwargs) -> VerifyReport:
    """Dispatch a named suite with optional model/seed/tolerance overrides."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    if name == "cauchy":
        if seed is not None:
            kwargs["seed"] = seed
        if tol is not None:
            kwargs["tol_identity"] = tol
        return fn(model=model, **kwargs)
    if name in ("unitarity", "kappa1", "positivity"):
        if seed is not None:
            kwargs["seed"] = seed
        if tol is not None and name == "unitarity":
            kwargs["tol"] = tol
        return fn(**kwargs)
    return fn(**kwargs)
