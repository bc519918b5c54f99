import cmath
import math

import numpy as np
import pytest

from slabmodes import media
from slabmodes.media import (
    BranchPointError,
    ConstantDielectric,
    DomainError,
    Lorentz,
    PerfectConductor,
    Plasma,
    UnsupportedModelError,
    branch_points,
    chi_continued,
    classify_region,
    kappa,
    model_spec,
    parse_model,
)


class TestKappa:
    def test_plasma_real_axis(self):
        assert kappa(Plasma(xi=30.0), 6.0) == pytest.approx(1.0 / 6.0, rel=1e-15)

    def test_constant(self):
        assert kappa(ConstantDielectric(xi=0.01), 3.7) == 0.01

    def test_plasma_imaginary_axis(self):
        val = kappa(Plasma(xi=30.0), 2j)
        assert val == pytest.approx(8.5, rel=1e-15)
        assert val.imag == 0.0

    def test_plasma_origin_excluded(self):
        with pytest.raises(DomainError):
            kappa(Plasma(xi=30.0), 0.0)

    def test_lorentz_pole_excluded(self):
        with pytest.raises(DomainError):
            kappa(Lorentz(kappa0=3.0, omega0=2.0), 2.0)

    def test_lorentz_value(self):
        model = Lorentz(kappa0=3.0, omega0=2.0)
        assert kappa(model, 1.0) == pytest.approx(1.0 + 4.0 * 2.0 / 3.0, rel=1e-15)

    def test_perfect_conductor_unsupported(self):
        with pytest.raises(UnsupportedModelError):
            kappa(PerfectConductor(), 1.0)

    def test_region_II_always_vacuum(self):
        assert media.kappa_region(Plasma(xi=30.0), "II", 6.0) == 1.0


class TestClassifyRegion:
    def test_plasma_evanescent(self):
        kin = classify_region(Plasma(xi=30.0), "I", 6.0, 5.0)
        assert kin.klass == "E"
        assert kin.zeta == pytest.approx(math.sqrt(19.0), rel=1e-15)

    def test_vacuum_oscillatory(self):
        kin = classify_region(Plasma(xi=30.0), "II", 6.0, 5.0)
        assert kin.klass == "O"
        assert kin.chi == pytest.approx(math.sqrt(11.0), rel=1e-15)

    def test_degenerate_is_linear(self):
        kin = classify_region(ConstantDielectric(xi=2.0), "II", 5.0, 5.0)
        assert kin.klass == "L"

    def test_defining_identities(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            model = Plasma(xi=float(rng.uniform(0.5, 40.0)))
            omega = float(rng.uniform(0.1, 20.0))
            R = float(rng.uniform(0.1, 20.0))
            for region in ("I", "II"):
                kin = classify_region(model, region, omega, R)
                k = media.kappa_region(model, region, omega)
                if kin.klass == "O":
                    assert kin.chi ** 2 + R * R == pytest.approx(k * omega ** 2, rel=1e-14)
                elif kin.klass == "E":
                    assert kin.zeta ** 2 == pytest.approx(R * R - k * omega ** 2, rel=1e-14)

    def test_partition_property(self):
        rng = np.random.default_rng(5)
        models = [ConstantDielectric(xi=0.3), ConstantDielectric(xi=4.0),
                  Plasma(xi=10.0)]
        for _ in range(10_000 // len(models)):
            omega = float(rng.uniform(1e-3, 30.0))
            R = float(rng.uniform(1e-3, 30.0))
            for model in models:
                kin = classify_region(model, "I", omega, R)
                assert kin.klass in ("O", "E", "L")
                assert (kin.chi is not None) + (kin.zeta is not None) \
                    == (0 if kin.klass == "L" else 1)


class TestChiContinued:
    def test_imaginary_axis_vacuum(self):
        val = chi_continued(ConstantDielectric(xi=1.0), "II", 1j, 1.0)
        assert val == pytest.approx(1j * math.sqrt(2.0), rel=1e-15)

    def test_real_axis_matches_classification(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            model = Plasma(xi=float(rng.uniform(1.0, 40.0)))
            omega = float(rng.uniform(0.2, 25.0))
            R = float(rng.uniform(0.2, 25.0))
            for region in ("I", "II"):
                kin = classify_region(model, region, omega, R)
                if kin.klass == "L":
                    continue
                val = chi_continued(model, region, omega, R)
                if kin.klass == "O":
                    assert val == pytest.approx(kin.chi, rel=1e-14)
                else:
                    assert val == pytest.approx(1j * kin.zeta, rel=1e-14)

    def test_schwarz_symmetry(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            model = (ConstantDielectric(xi=float(rng.uniform(0.05, 6.0)))
                     if rng.uniform() < 0.5 else Plasma(xi=float(rng.uniform(0.5, 40.0))))
            omega = complex(rng.uniform(0.1, 20.0),
                            rng.uniform(0.01, 10.0) * (1 if rng.uniform() < 0.5 else -1))
            R = float(rng.uniform(0.1, 20.0))
            for region in ("I", "II"):
                a = chi_continued(model, region, omega.conjugate(), R)
                b = chi_continued(model, region, omega, R)
                assert abs(a - b.conjugate()) < 1e-14 * abs(b)

    def test_upper_half_plane_branch(self):
        rng = np.random.default_rng(17)
        for _ in range(500):
            model = Plasma(xi=float(rng.uniform(0.5, 40.0)))
            omega = complex(rng.uniform(0.05, 25.0), rng.uniform(1e-3, 15.0))
            val = chi_continued(model, "I", omega, float(rng.uniform(0.1, 20.0)))
            assert val.imag >= 0.0

    def test_branch_point_proximity_error(self):
        with pytest.raises(BranchPointError):
            chi_continued(ConstantDielectric(xi=1.0), "II", 5.0 + 0j, 5.0)


class TestBranchPoints:
    def test_plasma(self):
        bp = branch_points(Plasma(xi=30.0), 5.0)
        assert bp.omega_b1 == 5.0
        assert bp.omega_b2 == pytest.approx(math.sqrt(55.0), rel=1e-15)
        assert not bp.swapped

    def test_enz(self):
        bp = branch_points(ConstantDielectric(xi=0.01), 1.0)
        assert (bp.omega_b1, bp.omega_b2) == (1.0, pytest.approx(10.0, rel=1e-15))

    def test_ratio_law(self):
        for xi in (0.01, 0.2, 0.9):
            for R in (0.3, 2.0, 11.0):
                bp = branch_points(ConstantDielectric(xi=xi), R)
                assert bp.omega_b2 / bp.omega_b1 == pytest.approx(1.0 / math.sqrt(xi),
                                                                  rel=1e-15)

    def test_degenerate(self):
        bp = branch_points(ConstantDielectric(xi=1.0), 1.0)
        assert bp.omega_b1 == bp.omega_b2 == 1.0

    def test_swap_flag(self):
        bp = branch_points(ConstantDielectric(xi=4.0), 2.0)
        assert bp.swapped and bp.omega_b1 == 1.0 and bp.omega_b2 == 2.0


class TestModelSpecs:
    @pytest.mark.parametrize("spec", ["const:xi=0.25", "plasma:xi=30.0",
                                      "lorentz:kappa0=3.0,omega0=2.0", "pc"])
    def test_round_trip(self, spec):
        model = parse_model(spec)
        assert parse_model(model_spec(model)) == model

    def test_rejects_garbage(self):
        for bad in ("", "const", "const:xi=", "metal:xi=2", "plasma:x=2"):
            with pytest.raises(ValueError):
                parse_model(bad)

    def test_rejects_invalid_parameters(self):
        with pytest.raises(ValueError):
            Plasma(xi=-1.0)
        with pytest.raises(ValueError):
            ConstantDielectric(xi=0.0)
        with pytest.raises(ValueError):
            Lorentz(kappa0=1.0, omega0=2.0)
