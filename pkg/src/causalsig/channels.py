# src/causalsig/channels.py

"""Choi-representation channel calculus.

A channel is stored as its unnormalized Choi matrix on output ⊗ input,
J(Φ) = Σ_ij Φ(|i><j|) ⊗ |i><j|.  With this convention trace preservation
is "partial trace over the output factor equals the identity on the input",
which is the invariant validated on construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import linalg

PSD_TOL = 1e-9
TP_TOL = 1e-9
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class SystemDims:
    """Ordered factor dimensions of the input and output registers."""

    in_dims: Tuple[int, ...]
    out_dims: Tuple[int, ...]

    def __post_init__(self):
        if any(d < 1 for d in self.in_dims + self.out_dims):
            raise ValueError("all system dimensions must be >= 1")

    @property
    def dim_in(self) -> int:
        return int(np.prod(self.in_dims)) if self.in_dims else 1

    @property
    def dim_out(self) -> int:
        return int(np.prod(self.out_dims)) if self.out_dims else 1


def _require_bipartite(dims: SystemDims) -> None:
    if len(dims.in_dims) != 2 or len(dims.out_dims) != 2:
        raise ValueError("bipartite (A,B)/(A',B') split metadata required")


@dataclass(frozen=True)
class Channel:
    """A CPTP map stored as a Choi matrix on output ⊗ input."""

    dims: SystemDims
    choi: np.ndarray

    def __post_init__(self):
        d_in, d_out = self.dims.dim_in, self.dims.dim_out
        if self.choi.shape != (d_out * d_in, d_out * d_in):
            raise ValueError("Choi matrix does not match declared dimensions")
        if not linalg.is_hermitian(self.choi, rtol=1e-9):
            raise ValueError("Choi matrix is not Hermitian")
        wmin = float(np.linalg.eigvalsh(linalg.hermitize(self.choi)).min())
        if wmin < -PSD_TOL * max(1.0, float(np.abs(self.choi).max())):
            raise ValueError(f"Choi matrix is not PSD (min eigenvalue {wmin:.3e})")
        tp = linalg.partial_trace(self.choi, (d_out, d_in), {0})
        if np.abs(tp - np.eye(d_in)).max() > TP_TOL * max(1.0, d_in):
            raise ValueError("channel is not trace preserving")

    @property
    def dim_in(self) -> int:
        return self.dims.dim_in

    @property
    def dim_out(self) -> int:
        return self.dims.dim_out


@dataclass(frozen=True)
class UnitaryGate:
    """A unitary with declared register structure (square overall)."""

    dims: SystemDims
    u: np.ndarray

    def __post_init__(self):
        d_in, d_out = self.dims.dim_in, self.dims.dim_out
        if d_in != d_out:
            raise ValueError("unitary gate needs matching input/output dimension")
        if self.u.shape != (d_in, d_in):
            raise ValueError("matrix does not match declared dimensions")
        err = np.abs(linalg.dag(self.u) @ self.u - np.eye(d_in)).max()
        if err > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (residual {err:.3e})")

    @property
    def dim(self) -> int:
        return self.dims.dim_in

    def inverse(self) -> "UnitaryGate":
        return UnitaryGate(
            SystemDims(self.dims.out_dims, self.dims.in_dims), linalg.dag(self.u)
        )

    @property
    def dim_a(self) -> int:
        _require_bipartite(self.dims)
        return self.dims.in_dims[0]

    @property
    def dim_b(self) -> int:
        _require_bipartite(self.dims)
        return self.dims.in_dims[1]


@dataclass(frozen=True)
class HermitianMap:
    """A Hermitian-preserving map (difference of CP maps) as a Choi matrix."""

    dims: SystemDims
    choi: np.ndarray

    def __post_init__(self):
        d = self.dims.dim_out * self.dims.dim_in
        if self.choi.shape != (d, d):
            raise ValueError("Choi matrix does not match declared dimensions")
        if not linalg.is_hermitian(self.choi, rtol=1e-12):
            raise ValueError("Choi matrix is not Hermitian")


def channel_from_unitary(g: UnitaryGate) -> Channel:
    """Rank-one Choi |u>><<u| induced by row-major vectorization of u."""
    v = g.u.reshape(-1)
    choi = np.outer(v, v.conj())
    return Channel(SystemDims(g.dims.in_dims, g.dims.out_dims), choi)


def identity_channel(dims: Tuple[int, ...]) -> Channel:
    d = int(np.prod(dims)) if dims else 1
    g = UnitaryGate(SystemDims(dims, dims), np.eye(d, dtype=complex))
    return channel_from_unitary(g)


def trace_channel(dims: Tuple[int, ...]) -> Channel:
    """The channel that discards its input (output is the trivial system)."""
    d = int(np.prod(dims)) if dims else 1
    return Channel(SystemDims(dims, (1,)), np.eye(d, dtype=complex))


def apply(c: Channel, rho: np.ndarray) -> np.ndarray:
    """Φ(ρ) by contracting the Choi matrix against ρ on the input factor."""
    d_in, d_out = c.dim_in, c.dim_out
    if rho.shape != (d_in, d_in):
        raise ValueError("state dimension does not match channel input")
    j = c.choi.reshape(d_out, d_in, d_out, d_in)
    return np.einsum("oipq,iq->op", j, rho)


def _choi_apply(choi: np.ndarray, d_out: int, d_in: int, rho: np.ndarray) -> np.ndarray:
    j = choi.reshape(d_out, d_in, d_out, d_in)
    return np.einsum("oipq,iq->op", j, rho)


def tensor(c1: Channel, c2: Channel) -> Channel:
    """Choi of the tensor map Φ1 ⊗ Φ2."""
    o1, i1 = c1.dim_out, c1.dim_in
    o2, i2 = c2.dim_out, c2.dim_in
    j = linalg.kron(c1.choi, c2.choi)
    # factors (o1, i1, o2, i2) -> (o1, o2, i1, i2)
    j = linalg.permute_factors(j, (o1, i1, o2, i2), (0, 2, 1, 3))
    dims = SystemDims(c1.dims.in_dims + c2.dims.in_dims, c1.dims.out_dims + c2.dims.out_dims)
    return Channel(dims, j)


def compose(c2: Channel, c1: Channel) -> Channel:
    """Choi of the composite map Φ2 ∘ Φ1."""
    if c1.dims.out_dims != c2.dims.in_dims:
        if c1.dim_out != c2.dim_in:
            raise ValueError("inner dimensions do not match for composition")
    d = c1.dim_in
    o = c2.dim_out
    choi = np.zeros((o * d, o * d), dtype=complex)
    j1 = c1.choi.reshape(c1.dim_out, d, c1.dim_out, d)
    j2 = c2.choi.reshape(o, c2.dim_in, o, c2.dim_in)
    # J(Φ2∘Φ1)[(o,i),(o',i')] = Σ_m,m' J2[o,m,o',m'] J1[m,i,m',i']
    j = np.einsum("ompn,minj->oipj", j2, j1)
    choi = j.reshape(o * d, o * d)
    return Channel(SystemDims(c1.dims.in_dims, c2.dims.out_dims), choi)


def marginal_to_b(u: UnitaryGate) -> Channel:
    """The CP map (Tr_A' ⊗ I_B') ∘ U from A⊗B to B'."""
    _require_bipartite(u.dims)
    da_out, db_out = u.dims.out_dims
    full = channel_from_unitary(u)
    # Choi factors: (A', B', A, B); trace the A' output factor.
    j = linalg.partial_trace(
        full.choi, (da_out, db_out, u.dims.in_dims[0], u.dims.in_dims[1]), {0}
    )
    return Channel(SystemDims(u.dims.in_dims, (db_out,)), j)


def swap_matrix(d: int) -> np.ndarray:
    """The swap operator on two d-dimensional factors."""
    s = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            s[b * d + a, a * d + b] = 1.0
    return s


def swap_probe_gate(u: UnitaryGate) -> UnitaryGate:
    """The probe unitary (I_Ā ⊗ U)(S ⊗ I_B)(I_Ā ⊗ U⁻¹) on Ā ⊗ A' ⊗ B'.

    Register order is (probe copy Ā, A', B'); the gate's bipartite split
    groups (Ā, A') as the Alice side and B' as the Bob side.
    """
    _require_bipartite(u.dims)
    da, db = u.dims.in_dims
    if u.dims.out_dims != (da, db):
        raise ValueError("swap probe requires matching input/output splits")
    i_a = np.eye(da, dtype=complex)
    i_b = np.eye(db, dtype=complex)
    t = (
        linalg.kron(i_a, u.u)
        @ linalg.kron(swap_matrix(da), i_b)
        @ linalg.kron(i_a, linalg.dag(u.u))
    )
    dims = SystemDims((da * da, db), (da * da, db))
    return UnitaryGate(dims, t)


def swap_probe(u: UnitaryGate) -> Channel:
    """The probe channel of ``swap_probe_gate`` in Choi form."""
    return channel_from_unitary(swap_probe_gate(u))


def stinespring(c: Channel) -> Tuple[np.ndarray, int]:
    """Minimal isometric dilation V with Tr_E(V ρ V†) = Φ(ρ).

    The environment dimension is the numerical Choi rank (eigenvalues above
    1e-10); V maps the input to E ⊗ output with E as the slower factor.
    """
    d_in, d_out = c.dim_in, c.dim_out
    w, vecs = linalg.eigh(c.choi)
    keep = w > 1e-10
    rank = int(keep.sum())
    v = np.zeros((rank * d_out, d_in), dtype=complex)
    for k, (lam, col) in enumerate(zip(w[keep], vecs[:, keep].T)):
        kraus = np.sqrt(lam) * col.reshape(d_out, d_in)
        v[k * d_out : (k + 1) * d_out, :] = kraus
    return v, rank


def cptp_project(choi: np.ndarray, d_out: int, d_in: int) -> np.ndarray:
    """Nudge a near-CPTP Choi matrix onto the CPTP set.

    Clips negative eigenvalues, then conjugates the input factor by
    (Tr_out J)^{-1/2} to restore exact trace preservation.  Intended for
    solver output with residuals well below 1e-6.
    """
    w, v = linalg.eigh(linalg.hermitize(choi))
    j = (v * np.maximum(w, 0.0)) @ v.conj().T
    x = linalg.partial_trace(j, (d_out, d_in), {0})
    xw, xv = linalg.eigh(x)
    inv_sqrt = (xv * (1.0 / np.sqrt(np.maximum(xw, 1e-12)))) @ xv.conj().T
    fix = linalg.kron(np.eye(d_out, dtype=complex), inv_sqrt)
    return linalg.hermitize(fix @ j @ fix.conj().T)


# --- gate zoo -------------------------------------------------------------

_QUBIT_PAIR = SystemDims((2, 2), (2, 2))


def _cnot_matrix() -> np.ndarray:
    """Cnot with the first qubit as target: |ab> -> |(a⊕b) b>."""
    m = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            m[2 * (a ^ b) + b, 2 * a + b] = 1.0
    return m


def local_gate(ua: np.ndarray, ub: np.ndarray) -> UnitaryGate:
    """Product gate U_A ⊗ U_B with the bipartite split declared."""
    da, db = ua.shape[0], ub.shape[0]
    return UnitaryGate(SystemDims((da, db), (da, db)), linalg.kron(ua, ub))


def gate_zoo(name: str, theta: Optional[float] = None) -> UnitaryGate:
    """Named two-qubit gates, with the bipartite split declared.

    Parameterized families: cz(θ) = diag(1,1,1,e^{iθ}) and
    pswap(θ) = cos θ · I + i sin θ · S.
    """
    name = name.lower()
    if name == "identity":
        return UnitaryGate(_QUBIT_PAIR, np.eye(4, dtype=complex))
    if name == "cnot":
        return UnitaryGate(_QUBIT_PAIR, _cnot_matrix())
    if name == "swap":
        return UnitaryGate(_QUBIT_PAIR, swap_matrix(2))
    if name == "cz":
        if theta is None:
            raise ValueError("cz requires a theta parameter")
        return UnitaryGate(
            _QUBIT_PAIR, np.diag([1.0, 1.0, 1.0, np.exp(1j * theta)]).astype(complex)
        )
    if name == "pswap":
        if theta is None:
            raise ValueError("pswap requires a theta parameter")
        m = np.cos(theta) * np.eye(4, dtype=complex) + 1j * np.sin(theta) * swap_matrix(2)
        return UnitaryGate(_QUBIT_PAIR, m)
    raise ValueError(f"unknown gate {name!r}")


ZOO_FIXED = ("identity", "cnot", "swap")
ZOO_FAMILIES = ("cz", "pswap")


# --- Haar sampling --------------------------------------------------------

def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase-fixed R diagonal."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def haar_gate(rng: np.random.Generator, da: int = 2, db: int = 2) -> UnitaryGate:
    return UnitaryGate(SystemDims((da, db), (da, db)), haar_unitary(da * db, rng))


def random_channel(
    rng: np.random.Generator,
    in_dims: Tuple[int, ...],
    out_dims: Tuple[int, ...],
    env_dim: int = 2,
) -> Channel:
    """Random CPTP map from a Haar-distributed Stinespring isometry."""
    d_in = int(np.prod(in_dims))
    d_out = int(np.prod(out_dims))
    big = haar_unitary(d_out * env_dim, rng)
    v = big[:, :d_in]  # isometry d_in -> d_out * env, env slower
    choi = np.zeros((d_out * d_in, d_out * d_in), dtype=complex)
    for k in range(env_dim):
        kraus = v[k * d_out : (k + 1) * d_out, :]
        vec = kraus.reshape(-1)
        choi += np.outer(vec, vec.conj())
    return Channel(SystemDims(in_dims, out_dims), choi)


# --- gate file format -----------------------------------------------------

def gate_to_json(g: UnitaryGate) -> dict:
    _require_bipartite(g.dims)
    return {
        "dims": {
            "a": g.dims.in_dims[0],
            "b": g.dims.in_dims[1],
            "a_out": g.dims.out_dims[0],
            "b_out": g.dims.out_dims[1],
        },
        "matrix": [
            [{"re": float(x.real), "im": float(x.imag)} for x in row]
            for row in g.u
        ],
    }


def gate_from_json(doc: dict) -> UnitaryGate:
    try:
        d = doc["dims"]
        da, db = int(d["a"]), int(d["b"])
        da_o, db_o = int(d["a_out"]), int(d["b_out"])
        rows = doc["matrix"]
        m = np.array(
            [[complex(e["re"], e["im"]) for e in row] for row in rows], dtype=complex
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed gate document: {exc}") from exc
    return UnitaryGate(SystemDims((da, db), (da_o, db_o)), m)


def load_gate(path: str) -> UnitaryGate:
    with open(path) as fh:
        return gate_from_json(json.load(fh))


def save_gate(g: UnitaryGate, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(gate_to_json(g), fh)
