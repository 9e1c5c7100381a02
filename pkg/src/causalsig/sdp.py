# src/causalsig/sdp.py

"""Small dense semidefinite-programming layer.

Problems are stated in primal standard form over PSD variable blocks:

    minimize    Σ_k Re Tr(C_k† X_k)
    subject to  Σ_k Re Tr(A_k† X_k) = b      (one row per constraint)
                X_k ⪰ 0

Blocks may be complex Hermitian or real symmetric.  Complex data is
embedded to real symmetric form at the boundary, H -> [[Re H, -Im H],
[Im H, Re H]]; the factor-of-2 trace distortion of the embedding is
compensated by a single factor 1/2 in row assembly.  The conic solve is
delegated to SCS (operator splitting), which is deterministic for fixed
input and reports certified primal and dual objective values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse as sp
import scs

from . import linalg

DEFAULT_TOL = 1e-7

# Coefficient matrices: a dense ndarray or a {(row, col): value} dict.
CoeffLike = object


@dataclass(frozen=True)
class SdpBlock:
    name: str
    side: int
    complex: bool = True


@dataclass
class SdpProblem:
    """Block-PSD conic program in minimization sense."""

    blocks: List[SdpBlock] = field(default_factory=list)
    objective: Dict[str, CoeffLike] = field(default_factory=dict)
    eq_constraints: List[Tuple[Dict[str, CoeffLike], float]] = field(default_factory=list)

    def add_block(self, name: str, side: int, complex: bool = True) -> SdpBlock:
        if any(b.name == name for b in self.blocks):
            raise ValueError(f"duplicate block {name!r}")
        blk = SdpBlock(name, side, complex)
        self.blocks.append(blk)
        return blk

    def add_eq(self, coeffs: Dict[str, CoeffLike], rhs: float) -> None:
        self.eq_constraints.append((coeffs, float(rhs)))

    def _check(self) -> None:
        names = {b.name for b in self.blocks}
        for coeffs, rhs in self.eq_constraints:
            if not np.isfinite(rhs):
                raise ValueError("non-finite constraint right-hand side")
            for k in coeffs:
                if k not in names:
                    raise ValueError(f"constraint references undeclared block {k!r}")
        for k in self.objective:
            if k not in names:
                raise ValueError(f"objective references undeclared block {k!r}")


@dataclass
class SdpSolution:
    primal_value: float
    dual_value: float
    gap: float
    block_values: Dict[str, np.ndarray]
    status: str  # optimal | max_iterations | infeasible
    iterations: int = 0
    solve_time: float = 0.0


def embed_hermitian(h: np.ndarray) -> np.ndarray:
    """Real symmetric embedding [[Re h, -Im h], [Im h, Re h]].

    PSD iff h is PSD; every eigenvalue of h appears twice.
    """
    if not linalg.is_hermitian(h):
        raise ValueError("embed_hermitian requires a Hermitian matrix")
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def _coeff_items(a: CoeffLike):
    if isinstance(a, dict):
        return list(a.items())
    arr = np.asarray(a)
    rows, cols = np.nonzero(arr)
    return [((int(r), int(c)), arr[r, c]) for r, c in zip(rows, cols)]


def _svec_index(n: int):
    """Map (i, j) with i >= j to the SCS svec position (lower tri, col-major)."""
    idx = {}
    k = 0
    for j in range(n):
        for i in range(j, n):
            idx[(i, j)] = k
            k += 1
    return idx, k


_SQRT2 = np.sqrt(2.0)


class _Assembler:
    """Turns block functionals into rows over the stacked svec variables."""

    def __init__(self, blocks: List[SdpBlock]):
        self.blocks = blocks
        self.real_side = {}
        self.offset = {}
        self.svec_idx = {}
        off = 0
        for b in blocks:
            n = 2 * b.side if b.complex else b.side
            self.real_side[b.name] = n
            idx, length = _svec_index(n)
            self.svec_idx[b.name] = idx
            self.offset[b.name] = off
            off += length
        self.total = off

    def row_entries(self, coeffs: Dict[str, CoeffLike]):
        """Sparse (position, value) pairs for one functional Σ Re Tr(A_k† X_k)."""
        out: Dict[int, float] = {}
        for name, a in coeffs.items():
            blk = next(b for b in self.blocks if b.name == name)
            # hermitize: only the Hermitian part of A contributes to Re Tr(A† X)
            herm: Dict[Tuple[int, int], complex] = {}
            for (r, c), v in _coeff_items(a):
                herm[(r, c)] = herm.get((r, c), 0.0) + v / 2
                herm[(c, r)] = herm.get((c, r), 0.0) + np.conj(v) / 2
            n = blk.side
            idx = self.svec_idx[name]
            off = self.offset[name]
            if blk.complex:
                # real embedding entries of the Hermitian coefficient, lower
                # triangle only, with the compensating factor 1/2
                for (r, c), v in herm.items():
                    for (i, j), w in (
                        ((r, c), v.real),
                        ((r + n, c + n), v.real),
                        ((r + n, c), v.imag),
                        ((r, c + n), -v.imag),
                    ):
                        if w == 0.0:
                            continue
                        if i < j:
                            continue  # symmetric partner covers it
                        # off-diagonal: (i,j) and (j,i) both enter the trace,
                        # and svec stores sqrt(2)*S_ij, hence 2/sqrt(2)
                        scale = 0.5 if i == j else 0.5 * _SQRT2
                        pos = off + idx[(i, j)]
                        out[pos] = out.get(pos, 0.0) + scale * w
            else:
                for (r, c), v in herm.items():
                    w = float(np.real(v))
                    if w == 0.0 or r < c:
                        continue
                    scale = 1.0 if r == c else _SQRT2
                    pos = off + idx[(r, c)]
                    out[pos] = out.get(pos, 0.0) + scale * w
        return out

    def unpack(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        values = {}
        for b in self.blocks:
            n = self.real_side[b.name]
            off = self.offset[b.name]
            idx = self.svec_idx[b.name]
            m = np.zeros((n, n))
            for (i, j), k in idx.items():
                v = x[off + k]
                if i == j:
                    m[i, i] = v
                else:
                    m[i, j] = m[j, i] = v / _SQRT2
            if b.complex:
                s = b.side
                re = (m[:s, :s] + m[s:, s:]) / 2
                im = (m[s:, :s] - m[:s, s:]) / 2
                values[b.name] = linalg.hermitize(re + 1j * im)
            else:
                values[b.name] = (m + m.T) / 2
        return values


def solve(problem: SdpProblem, tol: float = DEFAULT_TOL, max_iters: int = 200_000) -> SdpSolution:
    """Solve the block SDP with SCS; deterministic for identical inputs."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    problem._check()
    asm = _Assembler(problem.blocks)

    c = np.zeros(asm.total)
    for pos, v in asm.row_entries(problem.objective).items():
        c[pos] += v

    rows, cols, vals = [], [], []
    b_eq = []
    for i, (coeffs, rhs) in enumerate(problem.eq_constraints):
        for pos, v in asm.row_entries(coeffs).items():
            rows.append(i)
            cols.append(pos)
            vals.append(v)
        b_eq.append(rhs)
    m_eq = len(b_eq)

    # PSD membership: s_block = x_block, i.e. -I x + s = 0 per block
    psd_sizes = [asm.real_side[b.name] for b in problem.blocks]
    n_psd = asm.total
    a_eq = sp.csc_matrix(
        (vals, (rows, cols)), shape=(m_eq, asm.total)
    )
    a_psd = -sp.identity(asm.total, format="csc")
    a_mat = sp.vstack([a_eq, a_psd], format="csc")
    b_vec = np.concatenate([np.array(b_eq, dtype=float), np.zeros(n_psd)])

    data = dict(A=a_mat, b=b_vec, c=c)
    cone = dict(z=m_eq, s=psd_sizes)
    eps = min(tol / 10.0, 1e-8)
    out = scs.solve(
        data,
        cone,
        verbose=False,
        eps_abs=eps,
        eps_rel=eps,
        max_iters=max_iters,
    )
    info = out["info"]
    primal = float(info["pobj"])
    dual = float(info["dobj"])
    gap = abs(primal - dual) / max(1.0, abs(primal))
    status = info["status"].lower()
    if "infeasible" in status:
        state = "infeasible"
    elif status == "solved" and gap <= tol:
        state = "optimal"
    else:
        state = "max_iterations"
    values = asm.unpack(out["x"]) if out["x"] is not None else {}
    return SdpSolution(
        primal_value=primal,
        dual_value=dual,
        gap=gap,
        block_values=values,
        status=state,
        iterations=int(info["iter"]),
        solve_time=float(info["solve_time"]) / 1000.0,
    )
