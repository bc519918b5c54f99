import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from slabmodes import cavity, media
from slabmodes.cavity import (
    CavityConfig,
    closed_form_gamma,
    closed_form_generator,
    diophantine_search,
    energy_difference,
    enumerate_roots,
    generator,
    mode_coefficients,
    scan_window,
    word_point,
)
from slabmodes.media import ConstantDielectric, KinematicError, Plasma

REGRESSION_PAIRS = [("TE", "OOO"), ("TM", "OOO"), ("TE", "OEO"), ("TE", "EOE"),
                    ("TM", "EOE"), ("TE", "EEE"), ("TM", "EEE")]


def _window_sample(cfg, rng):
    win = scan_window(cfg)
    assert win is not None
    lo, hi = win
    if math.isinf(hi):
        hi = lo + 6.0
    return float(rng.uniform(lo + 0.02 * (hi - lo), hi - 0.02 * (hi - lo)))


class TestDeterminantVsClosedForm:
    @pytest.mark.parametrize("s,word", REGRESSION_PAIRS)
    def test_ratio_is_constant(self, s, word):
        rng = np.random.default_rng(hash((s, word)) % 2 ** 32)
        xi_range = {"OOO": (1.2, 6.0), "OEO": (1.3, 8.0),
                    "EOE": (0.05, 0.8), "EEE": (0.1, 0.9)}[word]
        for _ in range(100):
            xi = float(rng.uniform(*xi_range))
            lam = float(rng.uniform(0.3, 2.0))
            cfg = CavityConfig(s, word, 1, 1, (1.0, 1.0, lam), ConstantDielectric(xi=xi))
            omega = _window_sample(cfg, rng)
            det = generator(cfg, omega)
            q1 = float(cavity._region1_quantity(cfg.model, word[0], omega, cfg.R, False))
            q2 = float(cavity._region2_quantity(word[1], omega, cfg.R, False))
            cf = closed_form_generator(s, word, q1, q2, xi, lam)
            gamma = closed_form_gamma(s, word, q2, xi)
            assert det == pytest.approx(gamma * cf, rel=1e-8, abs=1e-12 * abs(det) + 1e-300)

    def test_l_word_gammas(self):
        rng = np.random.default_rng(42)
        for s, word in (("TE", "OLO"), ("TM", "OLO"), ("TE", "LOL"), ("TM", "LOL"),
                        ("TE", "ELE"), ("TM", "ELE"), ("TE", "LEL"), ("TM", "LEL")):
            for _ in range(20):
                need_low = word in ("OLO",)  # OLO needs xi > 1, ELE/LOL xi < 1
                xi = float(rng.uniform(1.3, 5.0) if word == "OLO"
                           else rng.uniform(0.1, 0.8))
                # LEL needs xi > 1 so the L-point sits below the chi_II zero
                if word == "LEL":
                    xi = float(rng.uniform(1.3, 5.0))
                lam = float(rng.uniform(0.4, 1.8))
                cfg = CavityConfig(s, word, 1, 1, (1.0, 1.0, lam), ConstantDielectric(xi=xi))
                point = word_point(word, cfg.model, cfg.R)
                det = generator(cfg, point, relaxed=True)
                q1 = float(cavity._region1_quantity(cfg.model, word[0], point, cfg.R, True))
                q2 = float(cavity._region2_quantity(word[1], point, cfg.R, True))
                cf = closed_form_generator(s, word, q1, q2, xi, lam)
                gamma = closed_form_gamma(s, word, q2, xi)
                assert det == pytest.approx(gamma * cf, rel=1e-8, abs=1e-10)


class TestVacuumReduction:
    def test_roots_match_closed_form(self):
        rng = np.random.default_rng(2024)
        model = ConstantDielectric(xi=1.0)
        for _ in range(20):
            lam = float(rng.uniform(0.3, 2.5))
            nx = int(rng.integers(0, 4))
            ny = int(rng.integers(0 if nx else 1, 4))
            cfg = CavityConfig("TE", "OOO", nx, ny, (1.0, 1.0, lam), model)
            L = 1.0 + 2.0 * lam
            omega_max = math.sqrt(cfg.R ** 2 + (6.3 * math.pi / L) ** 2)
            roots = enumerate_roots(cfg, omega_max)
            exact = [math.sqrt(cfg.R ** 2 + (m * math.pi / L) ** 2) for m in range(1, 7)]
            assert len(roots) >= 5
            for got, want in zip(roots, exact):
                assert got.omega == pytest.approx(want, abs=1e-10)

    def test_spectrum_example(self):
        cfg = CavityConfig("TE", "OOO", 1, 1, (1.0, 1.0, 1.0), ConstantDielectric(xi=1.0))
        R = math.pi * math.sqrt(2.0)
        assert cfg.R == pytest.approx(R, rel=1e-15)
        roots = enumerate_roots(cfg, 9.0)
        exact = [math.sqrt(R ** 2 + (m * math.pi / 3.0) ** 2) for m in range(1, 20)]
        for got, want in zip(roots, exact):
            assert got.omega == pytest.approx(want, abs=1e-10)


class TestPositivityWords:
    def test_eee_has_no_roots(self):
        for s in ("TE", "TM"):
            cfg = CavityConfig(s, "EEE", 1, 1, (1.0, 1.0, 1.0), ConstantDielectric(xi=2.0))
            assert enumerate_roots(cfg, 50.0) == []
            lo, hi = scan_window(cfg)
            vals = generator(cfg, np.linspace(lo + 1e-9, hi - 1e-9, 2000))
            assert np.all(vals > 0) or np.all(vals < 0)

    def test_lel_generator_proportional_to_sinh(self):
        cfg = CavityConfig("TM", "LEL", 1, 1, (1.0, 1.0, 1.0), ConstantDielectric(xi=4.0))
        lo, hi = scan_window(cfg, relaxed=True)
        xs = np.linspace(lo + 1e-6, hi * (1 - 1e-9), 500)
        vals = generator(cfg, xs, relaxed=True)
        q2 = cavity._region2_quantity("E", xs, cfg.R, True)
        kr = 4.0
        expected = kr ** 2 * q2 ** 2 * np.sinh(q2)
        assert np.allclose(vals, expected, rtol=1e-10)
        assert enumerate_roots(cfg, 50.0) == []

    def test_tm_lol_rows_pick_unit_amplitudes(self):
        cfg = CavityConfig("TM", "LOL", 1, 1, (1.0, 1.0, 1.0), ConstantDielectric(xi=0.5))
        point = word_point("LOL", cfg.model, cfg.R)
        M = cavity.boundary_matrix(cfg, point, relaxed=True)
        assert list(M[4]) == [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]
        assert list(M[5]) == [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]


class TestEnumerateRoots:
    def test_plasma_eoe_roots_inside_window(self):
        cfg = CavityConfig("TE", "EOE", 1, 1, (1.0, 1.0, 1.0), Plasma(xi=30.0))
        roots = enumerate_roots(cfg, 60.0)
        assert roots
        lo, hi = scan_window(cfg)
        for r in roots:
            assert lo < r.omega < hi
            assert r.residual <= 1e-10 * max(r.residual_scale, 1e-30)
            assert r.sigma_min <= 1e-8 * r.matrix_norm

    def test_olo_empty_for_generic_xi(self):
        for s in ("TE", "TM"):
            cfg = CavityConfig(s, "OLO", 1, 1, (1.0, 1.0, 1.0), ConstantDielectric(xi=2.0))
            assert enumerate_roots(cfg, 50.0) == []

    def test_olo_diophantine_point_found(self):
        cfg = CavityConfig("TE", "OLO", 1, 1, (1.0, 1.0, 1.0),
                           ConstantDielectric(xi=9.0 / 8.0))
        roots = enumerate_roots(cfg, 50.0)
        assert len(roots) == 1
        assert roots[0].omega == pytest.approx(cfg.R, rel=1e-15)

    def test_kinematic_mismatch_raises(self):
        cfg = CavityConfig("TE", "OOO", 1, 1, (1.0, 1.0, 1.0), Plasma(xi=30.0))
        with pytest.raises(KinematicError):
            generator(cfg, cfg.R * 1.01)  # inside the EOE window, not OOO


class TestModeCoefficients:
    def _root(self, cfg, omega_max=12.0):
        roots = enumerate_roots(cfg, omega_max)
        assert roots
        return roots[0]

    @pytest.mark.parametrize("s,word,model", [
        ("TE", "OOO", ConstantDielectric(xi=2.0)),
        ("TM", "OOO", ConstantDielectric(xi=2.0)),
        ("TE", "EOE", Plasma(xi=30.0)),
        ("TM", "EOE", Plasma(xi=30.0)),
    ])
    def test_residuals(self, s, word, model):
        cfg = CavityConfig(s, word, 1, 1, (1.0, 1.0, 0.7), model)
        root = self._root(cfg, 60.0)
        mc = mode_coefficients(root)
        assert mc.matrix_residual < 1e-8
        assert mc.interface_residual < 1e-8
        assert mc.boundary_residual < 1e-8
        assert max(abs(v) for v in mc.values) == pytest.approx(1.0, rel=1e-12)

    def test_vacuum_mode_is_single_sinusoid(self):
        cfg = CavityConfig("TE", "OOO", 1, 1, (1.0, 1.0, 1.0), ConstantDielectric(xi=1.0))
        root = self._root(cfg)
        mc = mode_coefficients(root)
        chi = math.sqrt(root.omega ** 2 - cfg.R ** 2)
        v = mc.values

        def psi(region, Z):
            off = {"I": 0, "II": 2, "III": 4}[region]
            return v[off] * math.cos(chi * Z) + v[off + 1] * math.sin(chi * Z)

        # one sinusoid sin(chi (Z + lam)) across the whole cavity, up to scale
        ref = lambda Z: math.sin(chi * (Z + 1.0))
        scale = psi("I", -0.5) / ref(-0.5)
        for region, Z in (("I", -0.9), ("I", -0.2), ("II", 0.3), ("II", 0.8),
                          ("III", 1.4), ("III", 1.9)):
            assert psi(region, Z) == pytest.approx(scale * ref(Z), abs=1e-9)

    def test_scaling_invariance(self):
        cfg = CavityConfig("TM", "OOO", 1, 2, (1.0, 1.0, 0.9), ConstantDielectric(xi=3.0))
        root = self._root(cfg)
        a = mode_coefficients(root)
        b = mode_coefficients(root)
        assert a.values == b.values


class TestDiophantine:
    def test_olo_contains_paper_solutions(self):
        sols = diophantine_search("TE", "OLO", "9/8", n_max=10)
        triples = {(s.nx, s.ny, s.ell) for s in sols}
        assert (1, 1, 0) in triples and (3, 3, 1) in triples

    def test_olo_matches_brute_force(self):
        sols = diophantine_search("TE", "OLO", Fraction(9, 8), n_max=10)
        got = {(s.nx, s.ny, s.ell) for s in sols}
        expect = set()
        for nx in range(0, 11):
            for ny in range(0, 11):
                if nx == 0 and ny == 0:
                    continue
                for ell in range(0, 40):
                    if (nx * nx + ny * ny) * 8 == (2 * ell + 1) ** 2 * 4:
                        expect.add((nx, ny, ell))
        assert got == expect
        # ... and the generator itself vanishes at every solution point
        for nx, ny, ell in sorted(expect):
            cfg = CavityConfig("TE", "OLO", nx, ny, (1.0, 1.0, 1.0),
                               ConstantDielectric(xi=9.0 / 8.0))
            assert abs(generator(cfg, cfg.R, relaxed=True)) < 1e-9 * max(
                1.0, cavity._local_scale(cfg, cfg.R))

    def test_olo_xi_2_has_none(self):
        assert diophantine_search("TE", "OLO", 2, n_max=50) == []

    def test_lol_pythagorean(self):
        sols = diophantine_search("TM", "LOL", "1/2", n_max=6)
        match = [s for s in sols if (s.nx, s.ny, s.ell) == (3, 4, 5)]
        assert match
        assert match[0].omega == pytest.approx(5.0 * math.pi * math.sqrt(2.0), abs=1e-12)

    def test_float_tolerance_path(self):
        exact = diophantine_search("TE", "OLO", Fraction(9, 8), n_max=6)
        via_float = diophantine_search("TE", "OLO", 1.125, n_max=6)
        assert [(s.nx, s.ny, s.ell) for s in exact] \
            == [(s.nx, s.ny, s.ell) for s in via_float]

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            diophantine_search("TE", "OLO", 0.5)
        with pytest.raises(ValueError):
            diophantine_search("TM", "LOL", 2.0)
        with pytest.raises(ValueError):
            diophantine_search("TM", "OLO", 2.0)


class TestEnergyDifference:
    def test_identical_models_vanish(self):
        rep = energy_difference((1.0, 1.0, 1.0), ConstantDielectric(xi=2.0),
                                ConstantDielectric(xi=2.0), n_max=3, omega_max=10.0)
        assert rep.total == 0.0
        assert rep.mismatches == []

    def test_vacuum_vs_vacuum(self):
        rep = energy_difference((1.0, 1.0, 1.0), ConstantDielectric(xi=1.0),
                                ConstantDielectric(xi=1.0), n_max=2, omega_max=8.0)
        assert rep.total == 0.0

    def test_cutoff_report_structure(self):
        rep = energy_difference((1.0, 1.0, 1.0), ConstantDielectric(xi=1.1),
                                ConstantDielectric(xi=1.0), n_max=3, omega_max=10.0)
        shells = [n for n, _ in rep.partial_by_shell]
        assert shells == sorted(shells)
        assert rep.partial_by_shell[-1][1] == pytest.approx(rep.total, rel=1e-12)
        # the vacuum reference has no OEO window, so mismatches are recorded
        assert any(word == "OEO" for (_, word, *_rest) in rep.mismatches)

    def test_pressure_null_and_sign_stability(self):
        p0 = cavity.cavity_pressure((1.0, 1.0, 1.0), ConstantDielectric(xi=2.0),
                                    ConstantDielectric(xi=2.0), 2, 8.0, 1e-6)
        assert p0 == 0.0
        args = ((1.0, 1.0, 1.0), ConstantDielectric(xi=1.1),
                ConstantDielectric(xi=1.0), 2, 8.0, 1e-6)
        p1 = cavity.cavity_pressure(*args, rel_step=1e-4)
        p2 = cavity.cavity_pressure(*args, rel_step=5e-5)
        assert p1 != 0.0
        assert math.copysign(1.0, p1) == math.copysign(1.0, p2)
