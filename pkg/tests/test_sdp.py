import numpy as np
import pytest

from causalsig import sdp

SY = np.array([[0, -1j], [1j, 0]], dtype=complex)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


class TestEmbedHermitian:
    def test_identity(self):
        assert np.array_equal(sdp.embed_hermitian(np.eye(2, dtype=complex)), np.eye(4))

    def test_sigma_y_spectrum(self):
        w = np.sort(np.linalg.eigvalsh(sdp.embed_hermitian(SY)))
        assert np.allclose(w, [-1, -1, 1, 1])

    def test_doubled_spectrum(self):
        rng = np.random.default_rng(0)
        h = random_hermitian(rng, 5)
        w_orig = np.sort(np.linalg.eigvalsh(h))
        w_emb = np.sort(np.linalg.eigvalsh(sdp.embed_hermitian(h)))
        assert np.abs(w_emb - np.repeat(w_orig, 2)).max() <= 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            sdp.embed_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def _min_trace_above_identity() -> sdp.SdpProblem:
    # minimize Tr X s.t. X >= I via a slack block: X - S = I
    p = sdp.SdpProblem()
    p.add_block("X", 2, complex=True)
    p.add_block("S", 2, complex=True)
    p.objective = {"X": np.eye(2, dtype=complex)}
    for i in range(2):
        for j in range(i, 2):
            p.add_eq({"X": {(i, j): 1.0}, "S": {(i, j): -1.0}}, 1.0 if i == j else 0.0)
            if i != j:
                p.add_eq({"X": {(i, j): 1j}, "S": {(i, j): -1j}}, 0.0)
    return p


class TestSolve:
    def test_min_trace_above_identity(self):
        sol = sdp.solve(_min_trace_above_identity())
        assert sol.status == "optimal"
        assert abs(sol.primal_value - 2.0) <= 1e-6
        assert np.abs(sol.block_values["X"] - np.eye(2)).max() <= 1e-5

    def test_operator_norm_epigraph(self):
        # minimize t s.t. t I - sigma_x >= 0
        sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        p = sdp.SdpProblem()
        p.add_block("T", 1, complex=False)
        p.add_block("Y", 2, complex=True)
        p.objective = {"T": {(0, 0): 1.0}}
        for i in range(2):
            for j in range(i, 2):
                coeffs = {"Y": {(i, j): 1.0}}
                if i == j:
                    coeffs["T"] = {(0, 0): -1.0}
                p.add_eq(coeffs, -sx[i, j].real)
                if i != j:
                    p.add_eq({"Y": {(i, j): 1j}}, -sx[i, j].imag)

        sol = sdp.solve(p)
        assert sol.status == "optimal"
        assert abs(sol.primal_value - 1.0) <= 1e-6

    def test_weak_duality(self):
        sol = sdp.solve(_min_trace_above_identity())
        assert sol.dual_value <= sol.primal_value + 1e-9

    def test_objective_scaling(self):
        p1 = _min_trace_above_identity()
        sol1 = sdp.solve(p1)
        p2 = _min_trace_above_identity()
        p2.objective = {"X": 3.0 * np.eye(2, dtype=complex)}
        sol2 = sdp.solve(p2)
        rel = abs(sol2.primal_value - 3.0 * sol1.primal_value) / abs(sol2.primal_value)
        assert rel <= 1e-8

    def test_deterministic_resolve(self):
        a = sdp.solve(_min_trace_above_identity())
        b = sdp.solve(_min_trace_above_identity())
        assert a.primal_value == b.primal_value
        assert a.dual_value == b.dual_value
        assert np.array_equal(a.block_values["X"], b.block_values["X"])

    def test_infeasible(self):
        p = sdp.SdpProblem()
        p.add_block("X", 2, complex=True)
        p.objective = {"X": np.eye(2, dtype=complex)}
        p.add_eq({"X": {(0, 0): 1.0}}, -1.0)  # X_00 >= 0 forced to -1
        sol = sdp.solve(p)
        assert sol.status == "infeasible"

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            sdp.solve(_min_trace_above_identity(), tol=0.0)

    def test_rejects_undeclared_block(self):
        p = sdp.SdpProblem()
        p.add_block("X", 2)
        p.add_eq({"Y": {(0, 0): 1.0}}, 0.0)
        with pytest.raises(ValueError):
            sdp.solve(p)

    def test_rejects_duplicate_block(self):
        p = sdp.SdpProblem()
        p.add_block("X", 2)
        with pytest.raises(ValueError):
            p.add_block("X", 3)

    def test_hermitian_entry_functionals(self):
        # pin a full Hermitian 2x2 block to a target matrix, check recovery
        rng = np.random.default_rng(1)
        h = random_hermitian(rng, 2)
        h = h + 2.5 * np.eye(2)  # keep it PSD
        p = sdp.SdpProblem()
        p.add_block("X", 2, complex=True)
        p.objective = {"X": np.eye(2, dtype=complex)}
        for i in range(2):
            for j in range(i, 2):
                p.add_eq({"X": {(i, j): 1.0}}, h[i, j].real)
                if i != j:
                    p.add_eq({"X": {(i, j): 1j}}, h[i, j].imag)
        sol = sdp.solve(p)
        assert sol.status == "optimal"
        assert np.abs(sol.block_values["X"] - h).max() <= 1e-6
