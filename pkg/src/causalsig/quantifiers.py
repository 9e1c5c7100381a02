# src/causalsig/quantifiers.py

"""Diamond-norm programs and the signalling / causal-influence quantifiers.

The diamond norm of a Hermitian-preserving map with Choi matrix J is the
optimum of

    minimize (t0 + t1)/2
    s.t.     [[Y0, -J], [-J†, Y1]] ⪰ 0,   Tr_out Y_i ⪯ t_i · I_in.

Both quantifiers are single joint SDPs: the Choi matrix of the channel
being optimized over enters J linearly, so the infimum over channels folds
into the same program with an extra PSD block constrained to be trace
preserving.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from . import channels, linalg, sdp
from .channels import Channel, HermitianMap, SystemDims, UnitaryGate

QUANTIFIER_TOL = 1e-6
BOUND_SLACK = 1e-4
SANDWICH_COEFF = 2.0 * np.sqrt(2.0)


class SolverFailure(RuntimeError):
    """Raised when the conic solver does not certify an optimum."""

    def __init__(self, status: str):
        super().__init__(f"SDP solver failed with status {status!r}")
        self.status = status


@dataclass
class QuantifierResult:
    value: float
    primal: float
    dual: float
    gap: float
    optimizer_choi: np.ndarray
    iterations: int
    wall_time: float


@dataclass
class BoundReport:
    s_value: float
    c_value: float
    lower_ok: bool
    upper_ok: bool
    slack: float


@dataclass
class _VarChannel:
    """A channel-valued SDP variable embedded linearly into the target Choi."""

    n_out: int
    n_in: int
    embed: sp.csr_matrix  # maps vec(J_var) to vec(J_embedded), row-major

    @property
    def side(self) -> int:
        return self.n_out * self.n_in


def choi_tensor_embedding(
    var_dims: Tuple[int, int], fixed_choi: np.ndarray, fixed_dims: Tuple[int, int],
    var_first: bool,
) -> sp.csr_matrix:
    """Sparse map vec(J_V) -> vec(J(V⊗F)) (or J(F⊗V)) for fixed channel F.

    ``var_dims`` and ``fixed_dims`` are (out, in) pairs; the resulting Choi
    lives on the composite output ⊗ composite input with the usual factor
    ordering (first map's factors slower).
    """
    ov, iv = var_dims
    of, if_ = fixed_dims
    side = ov * of * iv * if_
    nv = ov * iv
    jf = fixed_choi.reshape(of, if_, of, if_)
    r1, c1 = np.divmod(np.arange(nv * nv), nv)  # vec index of J_V -> (row, col)
    vo, vi = np.divmod(r1, iv)
    vo2, vi2 = np.divmod(c1, iv)
    rows_all, cols_all, vals_all = [], [], []
    fo, fi, fo2, fi2 = np.nonzero(np.abs(jf) > 0)
    for a, x, a2, x2 in zip(fo, fi, fo2, fi2):
        v = jf[a, x, a2, x2]
        if var_first:
            big_r = (vo * of + a) * (iv * if_) + (vi * if_ + x)
            big_c = (vo2 * of + a2) * (iv * if_) + (vi2 * if_ + x2)
        else:
            big_r = (a * ov + vo) * (if_ * iv) + (x * iv + vi)
            big_c = (a2 * ov + vo2) * (if_ * iv) + (x2 * iv + vi2)
        rows_all.append(big_r * side + big_c)
        cols_all.append(np.arange(nv * nv))
        vals_all.append(np.full(nv * nv, v, dtype=complex))
    rows = np.concatenate(rows_all)
    cols = np.concatenate(cols_all)
    vals = np.concatenate(vals_all)
    return sp.csr_matrix((vals, (rows, cols)), shape=(side * side, nv * nv))


def _dnorm_problem(
    j0: np.ndarray, d_out: int, d_in: int, var: Optional[_VarChannel]
) -> sdp.SdpProblem:
    doi = d_out * d_in
    p = sdp.SdpProblem()
    p.add_block("Z", 2 * doi, complex=True)
    p.add_block("S0", d_in, complex=True)
    p.add_block("S1", d_in, complex=True)
    p.add_block("T0", 1, complex=False)
    p.add_block("T1", 1, complex=False)
    if var is not None:
        p.add_block("JV", var.side, complex=True)
    p.objective = {"T0": {(0, 0): 0.5}, "T1": {(0, 0): 0.5}}

    # Off-diagonal coupling: Z12 - E(J_V) = -j0 entrywise (Re and Im).
    ev = var.embed if var is not None else None
    for r in range(doi):
        for c in range(doi):
            zc = {(r, doi + c): 1.0}
            vrow = None
            if ev is not None:
                row = ev.getrow(r * doi + c)
                if row.nnz:
                    vrow = {
                        divmod(int(k), var.side): -np.conj(v)
                        for k, v in zip(row.indices, row.data)
                    }
            val = j0[r, c]
            for phase, rhs in ((1.0, -val.real), (1j, -val.imag)):
                coeffs = {"Z": {k: phase * v for k, v in zc.items()}}
                if vrow:
                    coeffs["JV"] = {k: phase * v for k, v in vrow.items()}
                p.add_eq(coeffs, rhs)

    # Tr_out Y_i + S_i - t_i I = 0 on the input space, upper triangle.
    for which, slack, tvar, base in (("0", "S0", "T0", 0), ("1", "S1", "T1", doi)):
        for i in range(d_in):
            for j in range(i, d_in):
                zc = {
                    (base + o * d_in + i, base + o * d_in + j): 1.0
                    for o in range(d_out)
                }
                coeffs = {"Z": zc, slack: {(i, j): 1.0}}
                if i == j:
                    coeffs[tvar] = {(0, 0): -1.0}
                p.add_eq(coeffs, 0.0)
                if i != j:
                    p.add_eq(
                        {
                            "Z": {k: 1j * v for k, v in zc.items()},
                            slack: {(i, j): 1j},
                        },
                        0.0,
                    )

    # Trace preservation of the variable channel: Tr_out J_V = I.
    if var is not None:
        for i in range(var.n_in):
            for j in range(i, var.n_in):
                coeffs = {
                    "JV": {
                        (o * var.n_in + i, o * var.n_in + j): 1.0
                        for o in range(var.n_out)
                    }
                }
                p.add_eq(coeffs, 1.0 if i == j else 0.0)
                if i != j:
                    p.add_eq(
                        {"JV": {k: 1j * v for k, v in coeffs["JV"].items()}}, 0.0
                    )
    return p


def _solve_dnorm(
    j0: np.ndarray,
    d_out: int,
    d_in: int,
    var: Optional[_VarChannel],
    tol: float,
) -> Tuple[sdp.SdpSolution, Optional[np.ndarray]]:
    prob = _dnorm_problem(j0, d_out, d_in, var)
    sol = sdp.solve(prob, tol=max(tol / 10.0, 1e-9))
    if sol.status == "max_iterations" and sol.gap > tol:
        raise SolverFailure(sol.status)
    if sol.status == "infeasible":
        raise SolverFailure(sol.status)
    jv = None
    if var is not None:
        jv = channels.cptp_project(
            sol.block_values["JV"], var.n_out, var.n_in
        )
    return sol, jv


def diamond_norm(h: HermitianMap, tol: float = sdp.DEFAULT_TOL) -> float:
    """Certified diamond norm of a Hermitian-preserving map."""
    sol, _ = _solve_dnorm(h.choi, h.dims.dim_out, h.dims.dim_in, None, tol)
    return max(sol.primal_value, 0.0)


def channel_difference(c1: Channel, c2: Channel) -> HermitianMap:
    if (c1.dim_in, c1.dim_out) != (c2.dim_in, c2.dim_out):
        raise ValueError("channel dimensions do not match")
    return HermitianMap(c1.dims, c1.choi - c2.choi)


def dnorm_lower_bound(c1: Channel, c2: Channel, iters: int = 50) -> float:
    """Seesaw lower bound on ‖Φ1 − Φ2‖⋄.

    Alternates between the Helstrom projector for a fixed ancilla-assisted
    pure input and the best pure input for a fixed projector; the reported
    value is monotonically non-decreasing.
    """
    if (c1.dim_in, c1.dim_out) != (c2.dim_in, c2.dim_out):
        raise ValueError("channel dimensions do not match")
    d, do = c1.dim_in, c1.dim_out
    jd = (c1.choi - c2.choi).reshape(do, d, do, d)
    # maximally entangled start on E ⊗ A with E ≅ A
    psi = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    best = 0.0
    for _ in range(max(iters, 1)):
        rho = np.outer(psi, psi.conj()).reshape(d, d, d, d)
        sigma = np.einsum("oipq,eifq->eofp", jd, rho).reshape(d * do, d * do)
        w, v = linalg.eigh(sigma)
        best = max(best, float(np.abs(w).sum()))
        pos = v[:, w > 0]
        proj = (pos @ pos.conj().T).reshape(d, do, d, do)
        # adjoint: M[(e,i),(e2,i2)] = Σ_{o,o2} J[o,i,o2,i2] P[(e2,o2),(e,o)]
        m = np.einsum("oipq,fpeo->eifq", jd, proj).reshape(d * d, d * d)
        _, mv = linalg.eigh(linalg.hermitize(m))
        psi = mv[:, 0]
    return best


def _signalling_var(u: UnitaryGate) -> _VarChannel:
    da = u.dims.in_dims[0]
    db = u.dims.in_dims[1]
    db_out = u.dims.out_dims[1]
    embed = choi_tensor_embedding(
        (db_out, db), np.eye(da, dtype=complex), (1, da), var_first=False
    )
    return _VarChannel(db_out, db, embed)


def signalling(u: UnitaryGate, tol: float = QUANTIFIER_TOL) -> QuantifierResult:
    """Distance of U's Bob marginal from the nearest discard-⊗-channel map."""
    start = time.perf_counter()
    marg = channels.marginal_to_b(u)
    var = _signalling_var(u)
    sol, jv = _solve_dnorm(marg.choi, marg.dim_out, marg.dim_in, var, tol)
    return _result(sol, jv, start)


def causal_influence(u: UnitaryGate, tol: float = QUANTIFIER_TOL) -> QuantifierResult:
    """Distance of the swap-probe conjugation from the nearest factorized map."""
    start = time.perf_counter()
    probe = channels.swap_probe(u)
    da2 = u.dims.in_dims[0] ** 2
    db_out = u.dims.out_dims[1]
    jid = channels.identity_channel((db_out,)).choi
    embed = choi_tensor_embedding(
        (da2, da2), jid, (db_out, db_out), var_first=True
    )
    var = _VarChannel(da2, da2, embed)
    sol, jv = _solve_dnorm(probe.choi, probe.dim_out, probe.dim_in, var, tol)
    return _result(sol, jv, start)


def _result(sol: sdp.SdpSolution, jv: Optional[np.ndarray], start: float) -> QuantifierResult:
    value = min(max(sol.primal_value, 0.0), 2.0)
    return QuantifierResult(
        value=value,
        primal=sol.primal_value,
        dual=sol.dual_value,
        gap=sol.gap,
        optimizer_choi=jv,
        iterations=sol.iterations,
        wall_time=time.perf_counter() - start,
    )


def check_bounds(u: UnitaryGate, tol: float = QUANTIFIER_TOL) -> BoundReport:
    """Evaluate S ≤ C + slack and C ≤ 2√2·√S + slack for one gate."""
    s = signalling(u, tol)
    c = causal_influence(u, tol)
    slack = BOUND_SLACK
    lower_ok = s.value <= c.value + slack
    upper_ok = c.value <= SANDWICH_COEFF * np.sqrt(max(s.value, 0.0)) + slack
    return BoundReport(s.value, c.value, lower_ok, upper_ok, slack)


def is_no_signalling(u: UnitaryGate, tol: float = QUANTIFIER_TOL) -> bool:
    return signalling(u, tol).value <= tol


def is_no_causal_influence(u: UnitaryGate, tol: float = QUANTIFIER_TOL) -> bool:
    return causal_influence(u, tol).value <= tol


def check_continuity_bound(c: Channel, tol: float = BOUND_SLACK) -> Tuple[float, float, bool]:
    """Continuity bound for channels that keep the B factor.

    lhs = (inf over channels D of ‖C − D⊗I_B‖⋄)² via a joint SDP,
    rhs = 4·‖(Tr_A'⊗I_B)C − Tr_A⊗I_B‖⋄; returns (lhs, rhs, lhs ≤ rhs + tol).
    """
    if len(c.dims.in_dims) != 2 or len(c.dims.out_dims) != 2:
        raise ValueError("bipartite channel required")
    da, db = c.dims.in_dims
    da_out, db_out = c.dims.out_dims
    if db_out != db:
        raise ValueError("output B factor must equal input B factor")
    jid = channels.identity_channel((db,)).choi
    embed = choi_tensor_embedding((da_out, da), jid, (db, db), var_first=True)
    var = _VarChannel(da_out, da, embed)
    sol, _ = _solve_dnorm(c.choi, c.dim_out, c.dim_in, var, tol=QUANTIFIER_TOL)
    lhs = max(sol.primal_value, 0.0) ** 2

    marg = compose_marginal(c)
    discard_a = channels.tensor(channels.trace_channel((da,)), channels.identity_channel((db,)))
    diff = HermitianMap(marg.dims, marg.choi - discard_a.choi)
    rhs = 4.0 * diamond_norm(diff)
    return lhs, rhs, lhs <= rhs + tol


def compose_marginal(c: Channel) -> Channel:
    """(Tr_A' ⊗ I_B') ∘ C for a bipartite channel."""
    da_out, db_out = c.dims.out_dims
    j = linalg.partial_trace(
        c.choi, (da_out, db_out, c.dims.in_dims[0], c.dims.in_dims[1]), {0}
    )
    return Channel(SystemDims(c.dims.in_dims, (db_out,)), j)
