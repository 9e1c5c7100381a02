# src/causalsig/linalg.py

"""Dense complex linear algebra primitives.

Matrices are plain ``numpy.ndarray`` objects with complex dtype, row-major.
Multi-system operators use a big-endian factor convention: the leftmost
tensor factor is the slowest-varying index, so |a>⊗|b> for qubits sits at
index 2a+b.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

import numpy as np

HERMITICITY_RTOL = 1e-12


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def is_hermitian(m: np.ndarray, rtol: float = HERMITICITY_RTOL) -> bool:
    """Check max|M - M†| <= rtol * max|M| (absolute for the zero matrix)."""
    scale = max(np.abs(m).max(), 1.0) if m.size else 1.0
    return bool(np.abs(m - dag(m)).max() <= rtol * scale)


def hermitize(m: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (M + M†)/2."""
    return (m + dag(m)) / 2


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the slower (leftmost) factor."""
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def _check_shape(m: np.ndarray, dims: Sequence[int]) -> None:
    d = int(np.prod(dims))
    if m.shape != (d, d):
        raise ValueError(
            f"matrix of shape {m.shape} does not match factor dims {tuple(dims)}"
        )


def permute_factors(
    m: np.ndarray, dims: Sequence[int], perm: Sequence[int]
) -> np.ndarray:
    """Conjugate ``m`` by the unitary that reorders tensor factors.

    ``perm[k]`` names the old factor that becomes the new factor ``k``; the
    result has factor dims ``[dims[p] for p in perm]``.  Applying ``perm``
    and then its inverse returns ``m`` exactly.
    """
    _check_shape(m, dims)
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {tuple(perm)} is not a permutation of {n} factors")
    t = m.reshape(*dims, *dims)
    axes = list(perm) + [n + p for p in perm]
    new_dims = [dims[p] for p in perm]
    d = int(np.prod(dims))
    return t.transpose(axes).reshape(d, d)


def inverse_permutation(perm: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return tuple(inv)


def partial_trace(
    m: np.ndarray, dims: Sequence[int], traced: Iterable[int]
) -> np.ndarray:
    """Trace out the named tensor factors; preserves the full trace.

    Tracing every factor returns the 1x1 matrix [Tr m].
    """
    _check_shape(m, dims)
    traced = sorted(set(traced))
    n = len(dims)
    if traced and (traced[0] < 0 or traced[-1] >= n):
        raise ValueError(f"traced factors {traced} out of range for {n} factors")
    t = m.reshape(*dims, *dims)
    cur = n
    for idx in reversed(traced):
        t = np.trace(t, axis1=idx, axis2=idx + cur)
        cur -= 1
    kept = [d for k, d in enumerate(dims) if k not in traced]
    d = int(np.prod(kept)) if kept else 1
    return t.reshape(d, d)


def eigh(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues in descending order and the matching eigenvector
    columns.  Non-Hermitian input is rejected; the accepted input is
    symmetrized before factorization to suppress roundoff drift.
    """
    if not is_hermitian(m):
        raise ValueError("eigh requires a Hermitian matrix")
    w, v = np.linalg.eigh(hermitize(m))
    order = np.argsort(w)[::-1]
    return w[order].real, v[:, order]


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values; Hermitian inputs use the eigenvalue path."""
    if m.shape[0] == m.shape[1] and is_hermitian(m, rtol=1e-10):
        w = np.linalg.eigvalsh(hermitize(m))
        return float(np.abs(w).sum())
    return float(np.linalg.svd(m, compute_uv=False).sum())


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(m, 2))
