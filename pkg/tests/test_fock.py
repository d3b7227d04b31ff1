import math
import warnings

import numpy as np
import pytest

from helpers import coherent_amplitudes, squeezed_vacuum_prob
from sqring import fock
from sqring.fock import (
    FockOperator,
    FockSpace,
    OscillatorFrame,
    QuantumState,
    SqueezeSpec,
    TruncationError,
    required_dim,
)


class TestLadderOperators:
    def test_annihilation_dim3(self):
        a = fock.annihilation(FockSpace(3)).matrix
        expected = np.array(
            [[0, 1, 0], [0, 0, math.sqrt(2)], [0, 0, 0]], dtype=complex
        )
        np.testing.assert_array_equal(a, expected)

    def test_annihilation_dim2(self):
        a = fock.annihilation(FockSpace(2)).matrix
        np.testing.assert_array_equal(a, np.array([[0, 1], [0, 0]], dtype=complex))

    def test_number_operator_diagonal(self):
        space = FockSpace(4)
        n = fock.creation(space) @ fock.annihilation(space)
        np.testing.assert_allclose(n.matrix, np.diag([0.0, 1.0, 2.0, 3.0]), atol=1e-15)

    def test_rejects_small_dim(self):
        with pytest.raises(ValueError):
            FockSpace(1)

    def test_mixed_dims_rejected(self):
        a2 = fock.annihilation(FockSpace(2))
        a3 = fock.annihilation(FockSpace(3))
        with pytest.raises(ValueError):
            _ = a2 @ a3
        with pytest.raises(ValueError):
            a2.apply(fock.vacuum(FockSpace(3)))

    @pytest.mark.parametrize("dim", [2, 16, 64, 128])
    def test_commutator_block_identity(self, dim):
        a = fock.annihilation(FockSpace(dim)).matrix
        comm = a @ a.conj().T - a.conj().T @ a
        block = comm[: dim - 1, : dim - 1] - np.eye(dim - 1)
        assert np.max(np.abs(block)) < 1e-12
        # known truncation artifact in the last diagonal entry
        assert comm[dim - 1, dim - 1] == pytest.approx(-(dim - 1))


class TestQuadratures:
    def test_dim2_natural_units(self):
        x, p = fock.quadratures(FockSpace(2), OscillatorFrame())
        np.testing.assert_allclose(
            x.matrix, np.array([[0, 1], [1, 0]]) / math.sqrt(2), atol=1e-15
        )
        np.testing.assert_allclose(
            p.matrix, 1j * np.array([[0, -1], [1, 0]]) / math.sqrt(2), atol=1e-15
        )

    @pytest.mark.parametrize("frame", [OscillatorFrame(), OscillatorFrame(2.0, 3.0, 0.5)])
    def test_hermitian(self, frame):
        x, p = fock.quadratures(FockSpace(32), frame)
        assert np.max(np.abs(x.matrix - x.matrix.conj().T)) < 1e-14
        assert np.max(np.abs(p.matrix - p.matrix.conj().T)) < 1e-14

    def test_vacuum_moments(self):
        space = FockSpace(16)
        x, _ = fock.quadratures(space, OscillatorFrame())
        vac = fock.vacuum(space)
        assert x.expectation(vac) == pytest.approx(0.0, abs=1e-15)
        x2 = x @ x
        assert x2.expectation(vac).real == pytest.approx(0.5, abs=1e-14)


class TestDisplacement:
    def test_zero_is_identity(self):
        d = fock.displacement(FockSpace(8), 0.0)
        np.testing.assert_array_equal(d.matrix, np.eye(8))

    def test_coherent_mean_photon_number(self):
        space = FockSpace(64)
        d = fock.displacement(space, 2.0)
        state = QuantumState(space, d.apply(fock.vacuum(space)))
        n = fock.number_operator(space)
        assert n.expectation(state).real == pytest.approx(4.0, abs=1e-8)
        # oracle: the series coherent state
        np.testing.assert_allclose(
            state.amplitudes, coherent_amplitudes(2.0, 64), atol=1e-10
        )

    def test_inverse_composition(self):
        space = FockSpace(48)
        d = fock.displacement(space, 1.0 + 0.5j)
        dinv = fock.displacement(space, -(1.0 + 0.5j))
        np.testing.assert_allclose((d @ dinv).matrix, np.eye(48), atol=1e-10)

    @pytest.mark.parametrize("dim", [16, 64, 128])
    def test_unitary(self, dim):
        alpha = 0.5
        d = fock.displacement(FockSpace(dim), alpha).matrix
        assert np.max(np.abs(d.conj().T @ d - np.eye(dim))) < 1e-10

    def test_truncation_gate(self):
        with pytest.raises(TruncationError):
            fock.displacement(FockSpace(8), 3.0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            fock.displacement(FockSpace(8), 3.0, force=True)
        assert any("truncation" in str(w.message) for w in caught)


class TestSqueeze:
    def test_zero_is_identity(self):
        s = fock.squeeze(FockSpace(8), 0.0)
        np.testing.assert_array_equal(s.matrix, np.eye(8))

    def test_parity_of_squeezed_vacuum(self):
        space = FockSpace(40)
        st = fock.squeezed_coherent_state(space, SqueezeSpec(0.0, 0.5, 0.0))
        probs = fock.photon_distribution(st)
        assert np.max(probs[1::2]) < 1e-12

    @pytest.mark.parametrize("r", [0.25, 0.5, 1.0])
    def test_even_photon_statistics_vs_analytic(self, r):
        space = FockSpace(160)
        st = fock.squeezed_coherent_state(space, SqueezeSpec(0.0, r, 0.0))
        probs = fock.photon_distribution(st)
        for n in range(0, 40, 2):
            assert probs[n] == pytest.approx(squeezed_vacuum_prob(n, r), abs=1e-8)

    @pytest.mark.parametrize("dim", [16, 64, 128])
    def test_unitary_and_inverse(self, dim):
        xi = 0.5 * np.exp(0.7j)
        s = fock.squeeze(FockSpace(dim), xi).matrix
        sinv = fock.squeeze(FockSpace(dim), -xi).matrix
        assert np.max(np.abs(s.conj().T @ s - np.eye(dim))) < 1e-10
        assert np.max(np.abs(s @ sinv - np.eye(dim))) < 1e-10

    def test_truncation_gate(self):
        with pytest.raises(TruncationError):
            fock.squeeze(FockSpace(16), 1.5)


class TestSqueezedCoherentState:
    def test_identity_limits(self):
        space = FockSpace(16)
        st = fock.squeezed_coherent_state(space, SqueezeSpec(0.0, 0.0, 0.0))
        np.testing.assert_array_equal(st.amplitudes, fock.vacuum(space).amplitudes)

    def test_squeezed_vacuum_is_centered(self):
        space = FockSpace(40)
        st = fock.squeezed_coherent_state(space, SqueezeSpec(0.0, 0.5, 0.0))
        x, p = fock.quadratures(space, OscillatorFrame())
        assert abs(x.expectation(st)) < 1e-12
        assert abs(p.expectation(st)) < 1e-12

    def test_coherent_position_expectation(self):
        space = FockSpace(32)
        st = fock.squeezed_coherent_state(space, SqueezeSpec(1.0, 0.0, 0.0))
        x, _ = fock.quadratures(space, OscillatorFrame())
        assert x.expectation(st).real == pytest.approx(math.sqrt(2.0), abs=1e-10)
        np.testing.assert_allclose(
            st.amplitudes, coherent_amplitudes(1.0, 32), atol=1e-10
        )

    def test_operator_ordering_squeeze_then_displace(self):
        # D(a) S(xi) |0> differs from S(xi) D(a) |0>; pin the former
        space = FockSpace(96)
        spec = SqueezeSpec(1.0, 0.5, 0.0)
        st = fock.squeezed_coherent_state(space, spec)
        d = fock.displacement(space, spec.alpha).matrix
        s = fock.squeeze(space, spec.xi).matrix
        vac = fock.vacuum(space).amplitudes
        np.testing.assert_allclose(st.amplitudes, d @ (s @ vac), atol=1e-12)
        swapped = s @ (d @ vac)
        assert np.max(np.abs(st.amplitudes - swapped)) > 1e-3

    def test_normalized_within_1e12(self):
        st = fock.squeezed_coherent_state(FockSpace(96), SqueezeSpec(1.0, 0.5, 1.0))
        assert abs(st.norm() - 1.0) < 1e-12


class TestVariances:
    def test_vacuum(self):
        rep = fock.variances(fock.vacuum(FockSpace(16)), OscillatorFrame())
        assert rep.var_x == pytest.approx(0.5, abs=1e-12)
        assert rep.var_p == pytest.approx(0.5, abs=1e-12)
        assert rep.product == pytest.approx(0.5, abs=1e-12)

    def test_squeezed_vacuum_closed_form_dim40(self):
        st = fock.squeezed_coherent_state(FockSpace(40), SqueezeSpec(0.0, 0.5, 0.0))
        rep = fock.variances(st, OscillatorFrame())
        assert rep.var_x == pytest.approx(0.5 * math.exp(-1.0), rel=1e-6)
        assert rep.var_p == pytest.approx(0.5 * math.exp(1.0), rel=1e-6)

    @pytest.mark.parametrize("r", [0.0, 0.25, 0.5, 1.0, 1.5])
    def test_closed_forms_at_adequate_dim(self, r):
        # dims where the truncated tail is negligible (all >= 64)
        dim = 64 if r <= 0.5 else 256
        frame = OscillatorFrame(hbar=2.0, m=0.5, omega=3.0)
        st = fock.squeezed_coherent_state(FockSpace(dim), SqueezeSpec(0.0, r, 0.0))
        rep = fock.variances(st, frame)
        assert rep.var_x * (2 * frame.m * frame.omega / frame.hbar) == pytest.approx(
            math.exp(-2 * r), rel=1e-6
        )
        assert rep.var_p * (2 / (frame.m * frame.hbar * frame.omega)) == pytest.approx(
            math.exp(2 * r), rel=1e-6
        )

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0])
    def test_minimum_uncertainty_displaced(self, alpha):
        frame = OscillatorFrame()
        st = fock.squeezed_coherent_state(FockSpace(192), SqueezeSpec(alpha, 1.0, 0.0))
        rep = fock.variances(st, frame)
        assert rep.product == pytest.approx(frame.hbar / 2.0, abs=1e-6)

    def test_heisenberg_bound(self):
        rng = np.random.default_rng(3)
        space = FockSpace(24)
        for _ in range(25):
            amps = rng.normal(size=24) + 1j * rng.normal(size=24)
            rep = fock.variances(QuantumState(space, amps), OscillatorFrame())
            assert rep.product >= 0.5 - 1e-9

    def test_rejects_non_normalized(self):
        st = fock.vacuum(FockSpace(8))
        st.amplitudes = st.amplitudes * 2.0
        with pytest.raises(ValueError):
            fock.variances(st, OscillatorFrame())

    def test_dim_convergence(self):
        vals = [
            fock.variances(
                fock.squeezed_coherent_state(FockSpace(d), SqueezeSpec(0.0, 0.5, 0.0))
            ).var_x
            for d in (64, 128)
        ]
        assert abs(vals[0] - vals[1]) < 1e-8


class TestPhotonDistribution:
    def test_vacuum(self):
        probs = fock.photon_distribution(fock.vacuum(FockSpace(8)))
        assert probs[0] == pytest.approx(1.0, abs=1e-15)
        assert np.max(probs[1:]) == 0.0

    def test_poisson_for_coherent(self):
        st = fock.squeezed_coherent_state(FockSpace(64), SqueezeSpec(1.0, 0.0, 0.0))
        probs = fock.photon_distribution(st)
        for n in range(16):
            assert probs[n] == pytest.approx(
                math.exp(-1.0) / math.factorial(n), abs=1e-8
            )

    def test_sums_to_one(self):
        st = fock.squeezed_coherent_state(FockSpace(128), SqueezeSpec(1.5, 0.5, 0.4))
        assert fock.photon_distribution(st).sum() == pytest.approx(1.0, abs=1e-12)


class TestSqueezeSpec:
    def test_phi_normalized(self):
        spec = SqueezeSpec(0.0, 1.0, -math.pi)
        assert 0.0 <= spec.phi < 2 * math.pi
        assert spec.xi == pytest.approx(1.0 * np.exp(1j * math.pi))

    def test_negative_r_rejected(self):
        with pytest.raises(ValueError):
            SqueezeSpec(0.0, -0.1, 0.0)

    def test_required_dim_monotone(self):
        assert required_dim(0, 0) == 10
        assert required_dim(2.0, 1.5) > required_dim(2.0, 0.5) > required_dim(0, 0)


class TestFrameValidation:
    @pytest.mark.parametrize("bad", [dict(hbar=0.0), dict(m=-1.0), dict(omega=0.0)])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            OscillatorFrame(**bad)


class TestFockOperator:
    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            FockOperator(FockSpace(3), np.zeros((2, 2)))

    def test_zero_state_rejected(self):
        with pytest.raises(ValueError):
            QuantumState(FockSpace(4), np.zeros(4))
