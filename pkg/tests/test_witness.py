import numpy as np
import pytest

from causalsig import channels, linalg, witness
from causalsig.witness import (
    cnot_causal_witness,
    dephasing_gap,
    measurement_channel,
    sm_cnot,
)


class TestMeasurementChannel:
    def test_basis_state_fixed(self):
        m = measurement_channel()
        p0 = np.diag([1.0, 0.0]).astype(complex)
        assert np.abs(channels.apply(m, p0) - p0).max() <= 1e-14

    def test_plus_dephases(self):
        m = measurement_channel()
        plus = np.full((2, 2), 0.5, dtype=complex)
        assert np.abs(channels.apply(m, plus) - np.eye(2) / 2).max() <= 1e-14

    def test_idempotent_choi(self):
        m = measurement_channel()
        mm = channels.compose(m, m)
        assert np.abs(mm.choi - m.choi).max() <= 1e-12


class TestCnotWitness:
    def test_report(self):
        w = cnot_causal_witness()
        minus = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)
        plus = np.full((2, 2), 0.5, dtype=complex)
        assert abs(w.certified_lower_bound - 2.0) <= 1e-12
        assert np.abs(w.bprime_marginal_true - minus).max() <= 1e-12
        assert np.abs(w.bprime_marginal_factorized - plus).max() <= 1e-12

    def test_states_are_physical(self):
        w = cnot_causal_witness()
        for state in (w.probe_state, w.true_output):
            assert abs(np.trace(state) - 1.0) <= 1e-10
            assert np.linalg.eigvalsh(state).min() >= -1e-10

    def test_marginal_trace_distance_is_two(self):
        w = cnot_causal_witness()
        gap = linalg.trace_norm(w.bprime_marginal_true - w.bprime_marginal_factorized)
        assert abs(gap - 2.0) <= 1e-12


class TestDephasingGap:
    def test_p_one(self):
        psi = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
        assert dephasing_gap(psi) <= 1e-14

    def test_p_half(self):
        psi = np.array([1.0, 1.0, 0.0, 0.0], dtype=complex) / np.sqrt(2)
        assert abs(dephasing_gap(psi) - 1.0) <= 1e-14

    def test_bell_state(self):
        psi = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2)
        assert abs(dephasing_gap(psi) - 1.0) <= 1e-14

    def test_matches_trace_norm_on_haar_states(self):
        rng = np.random.default_rng(0)
        m = measurement_channel()
        dephase = channels.tensor(channels.identity_channel((2,)), m)
        for _ in range(100):
            psi = rng.normal(size=4) + 1j * rng.normal(size=4)
            psi /= np.linalg.norm(psi)
            rho = np.outer(psi, psi.conj())
            direct = linalg.trace_norm(rho - channels.apply(dephase, rho))
            assert abs(direct - dephasing_gap(psi)) <= 1e-9

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            dephasing_gap(np.array([1.0, 1.0, 0.0, 0.0], dtype=complex))


class TestSmCnot:
    def test_analytic_value(self):
        assert sm_cnot() == 1.0

    def test_sdp_cross_check(self):
        from causalsig.quantifiers import diamond_norm
        from causalsig.channels import HermitianMap

        marg = channels.marginal_to_b(channels.gate_zoo("cnot"))
        fact = channels.tensor(channels.trace_channel((2,)), measurement_channel())
        val = diamond_norm(HermitianMap(marg.dims, marg.choi - fact.choi))
        assert abs(val - sm_cnot()) <= 1e-6

    def test_upper_bounds_signalling(self):
        from causalsig.quantifiers import signalling

        s = signalling(channels.gate_zoo("cnot")).value
        assert s <= sm_cnot() + 1e-4

    def test_witness_matches_sdp(self):
        from causalsig.quantifiers import causal_influence

        w = cnot_causal_witness()
        c = causal_influence(channels.gate_zoo("cnot")).value
        assert abs(w.certified_lower_bound - c) <= 1e-3
