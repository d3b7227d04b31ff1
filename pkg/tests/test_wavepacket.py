import math

import numpy as np
import pytest

from sqring import wavepacket
from sqring.wavepacket import DisplacementGrid, WavePacketParams


class TestEvaluatePsi:
    def test_peak_value(self):
        params = WavePacketParams(C=3.0, x0=2.0, w0=0.7, p0=0.0)
        assert wavepacket.evaluate_psi(params, 2.0) == pytest.approx(3.0)

    def test_default_amplitude_gives_density_25(self):
        params = WavePacketParams()  # C=5
        psi = wavepacket.evaluate_psi(params, params.x0)
        assert abs(psi) ** 2 == pytest.approx(25.0)

    def test_one_width_offset(self):
        params = WavePacketParams(C=2.0, x0=1.0, w0=1.5, p0=0.0)
        assert wavepacket.evaluate_psi(params, 1.0 + 1.5) == pytest.approx(
            2.0 * math.exp(-0.5)
        )

    def test_momentum_phase(self):
        params = WavePacketParams(C=1.0, x0=0.0, w0=1.0, p0=2.0)
        psi = wavepacket.evaluate_psi(params, 3.0)
        expected = math.exp(-4.5) * complex(math.cos(6.0), math.sin(6.0))
        assert psi == pytest.approx(expected, abs=1e-15)


class TestDensityProfile:
    def test_independent_of_p0(self):
        grid = DisplacementGrid()
        a = wavepacket.density_profile(WavePacketParams(p0=0.0), grid)
        b = wavepacket.density_profile(WavePacketParams(p0=10.0), grid)
        np.testing.assert_array_equal(a, b)

    def test_peak_at_center_index(self):
        grid = DisplacementGrid(0.0, 10.0, 1001)
        dens = wavepacket.density_profile(WavePacketParams(C=5.0, x0=5.0, w0=1.0), grid)
        i = int(np.argmax(dens))
        assert grid.xs()[i] == 5.0
        assert dens[i] == pytest.approx(25.0)

    def test_symmetric_about_center(self):
        grid = DisplacementGrid(1.0, 9.0, 801)
        dens = wavepacket.density_profile(WavePacketParams(x0=5.0), grid)
        assert np.max(np.abs(dens - dens[::-1])) < 1e-12

    def test_nonnegative(self):
        grid = DisplacementGrid(-20.0, 20.0, 101)
        dens = wavepacket.density_profile(WavePacketParams(), grid)
        assert np.all(dens >= 0.0)

    def test_matches_evaluate_psi_modulus(self):
        grid = DisplacementGrid(0.0, 10.0, 101)
        params = WavePacketParams(C=2.5, x0=4.0, w0=1.3, p0=3.0)
        dens = wavepacket.density_profile(params, grid)
        psi = wavepacket.evaluate_psi(params, grid.xs())
        np.testing.assert_allclose(dens, np.abs(psi) ** 2, atol=1e-13)


class TestSqueezedWidth:
    def test_r_zero_unchanged(self):
        params = WavePacketParams()
        assert wavepacket.squeezed_width(params, 0.0) == params

    def test_narrows(self):
        out = wavepacket.squeezed_width(WavePacketParams(w0=1.0), 0.5)
        assert out.w0 == pytest.approx(math.exp(-0.5))

    def test_negative_broadens(self):
        out = wavepacket.squeezed_width(WavePacketParams(w0=1.0), -0.5)
        assert out.w0 == pytest.approx(math.exp(0.5))

    def test_second_moment_scaling(self):
        r = 0.3
        base = WavePacketParams(C=wavepacket.normalization_amplitude(1.0), x0=0.0)
        narrow = wavepacket.squeezed_width(base, r)
        grid = DisplacementGrid(-10.0, 10.0, 4001)
        xs = grid.xs()

        def m2(p):
            d = wavepacket.density_profile(p, grid)
            return float(np.trapezoid(d * xs**2, xs) / np.trapezoid(d, xs))

        assert m2(narrow) / m2(base) == pytest.approx(math.exp(-2 * r), rel=1e-6)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            wavepacket.squeezed_width(WavePacketParams(), math.inf)


class TestNormalization:
    def test_integral_is_one(self):
        w0 = 1.0
        params = WavePacketParams(
            C=wavepacket.normalization_amplitude(w0), x0=5.0, w0=w0
        )
        grid = DisplacementGrid(5.0 - 4 * w0, 5.0 + 4 * w0, 1001)
        integral = np.trapezoid(wavepacket.density_profile(params, grid), grid.xs())
        assert integral == pytest.approx(1.0, abs=1e-6)


class TestAngularFrequency:
    def test_value_at_1550nm(self):
        omega = wavepacket.angular_frequency(1.55)
        assert omega == pytest.approx(
            2 * math.pi * 299792458.0 / 1.55e-6, rel=1e-15
        )
        assert omega == pytest.approx(1.2153e15, rel=1e-4)

    def test_definition_inversion(self):
        lambda_um = 2 * math.pi * 299792458.0 * 1e6  # 2*pi*c metres, in um
        assert wavepacket.angular_frequency(lambda_um) == pytest.approx(1.0, rel=1e-12)

    def test_roundtrip_recovers_c(self):
        lam = 1.3
        omega = wavepacket.angular_frequency(lam)
        assert omega * lam * 1e-6 / (2 * math.pi) == pytest.approx(
            299792458.0, rel=1e-14
        )

    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            wavepacket.angular_frequency(bad)


class TestValidation:
    def test_rejects_bad_width(self):
        with pytest.raises(ValueError):
            WavePacketParams(w0=0.0)

    def test_rejects_negative_amplitude(self):
        with pytest.raises(ValueError):
            WavePacketParams(C=-1.0)

    @pytest.mark.parametrize(
        "kwargs", [dict(x_min=1.0, x_max=1.0), dict(points=1), dict(x_min=2.0, x_max=0.0)]
    )
    def test_rejects_bad_grid(self, kwargs):
        with pytest.raises(ValueError):
            DisplacementGrid(**{**dict(x_min=0.0, x_max=10.0, points=11), **kwargs})
