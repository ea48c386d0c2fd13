"""Secrecy-gated compressive-sensing cipher.

The shared key is the seed of a Gaussian measurement matrix; encryption
is the projection y = Phi @ x of a sparse signal, decryption is greedy
sparse recovery (orthogonal matching pursuit). Confidentiality is the
empirical key-mismatch failure rate, not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .secrecy import SecrecyResult

__all__ = [
    "CsKey",
    "SparseSignal",
    "RecoveryError",
    "should_encrypt",
    "keygen",
    "encrypt",
    "decrypt",
    "random_sparse_signal",
]


class RecoveryError(RuntimeError):
    """Sparse recovery hit a rank-deficient support."""


@dataclass(frozen=True)
class CsKey:
    """Seed plus dimensions of the secret measurement matrix (m x n, m < n)."""

    seed: int
    n: int
    m: int

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not 0 < self.m < self.n:
            raise ValueError(f"need 0 < m < n, got m={self.m!r}, n={self.n!r}")


@dataclass(frozen=True)
class SparseSignal:
    """Length-n vector with exactly k nonzero entries."""

    values: np.ndarray
    k: int

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        nnz = int(np.count_nonzero(values))
        if nnz != self.k:
            raise ValueError(f"signal has {nnz} nonzero entries, declared k={self.k!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k!r}")

    @classmethod
    def from_dense(cls, values: np.ndarray) -> "SparseSignal":
        values = np.asarray(values, dtype=np.float64)
        return cls(values=values, k=int(np.count_nonzero(values)))


def should_encrypt(cs: SecrecyResult, gate_threshold: float) -> bool:
    """Add the cipher exactly when the clamped secrecy capacity is below the gate."""
    if not (math.isfinite(gate_threshold) and gate_threshold >= 0):
        raise ValueError(f"gate_threshold must be >= 0, got {gate_threshold!r}")
    return cs.clamped < gate_threshold


def keygen(key: CsKey) -> np.ndarray:
    """The m x n measurement matrix: i.i.d. N(0, 1/m) entries from the seed."""
    rng = np.random.default_rng(key.seed)
    return rng.standard_normal((key.m, key.n)) / math.sqrt(key.m)


def encrypt(x: SparseSignal | np.ndarray, key: CsKey) -> np.ndarray:
    """Measurement vector y = Phi @ x; linear in x."""
    values = x.values if isinstance(x, SparseSignal) else np.asarray(x, dtype=np.float64)
    if values.shape != (key.n,):
        raise ValueError(f"signal dimension {values.shape} does not match n={key.n}")
    return keygen(key) @ values


def decrypt(y: np.ndarray, key: CsKey, k: int) -> SparseSignal:
    """Recover a k-sparse signal from measurements by orthogonal matching pursuit.

    Runs k greedy iterations: pick the column most correlated with the
    residual (normalized by column norm), then least-squares on the
    selected support. Raises :class:`RecoveryError` if the support goes
    rank-deficient.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (key.m,):
        raise ValueError(f"measurement dimension {y.shape} does not match m={key.m}")
    if not 1 <= k <= key.m:
        raise ValueError(f"need 1 <= k <= m, got k={k!r}")
    phi = keygen(key)
    norms = np.linalg.norm(phi, axis=0)
    residual = y.copy()
    support: list[int] = []
    coef = np.zeros(0)
    for _ in range(k):
        corr = np.abs(phi.T @ residual) / norms
        corr[support] = 0.0
        support.append(int(np.argmax(corr)))
        sub = phi[:, support]
        coef, _, rank, _ = np.linalg.lstsq(sub, y, rcond=None)
        if rank < len(support):
            raise RecoveryError(f"rank-deficient support after {len(support)} atoms")
        residual = y - sub @ coef
    values = np.zeros(key.n)
    values[support] = coef
    return SparseSignal.from_dense(values)


def random_sparse_signal(n: int, k: int, rng: np.random.Generator) -> SparseSignal:
    """A k-sparse test signal with Gaussian values on a random support."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k!r}, n={n!r}")
    support = rng.choice(n, size=k, replace=False)
    vals = rng.standard_normal(k)
    while np.any(vals == 0.0):  # zero draws would break the declared sparsity
        vals = rng.standard_normal(k)
    values = np.zeros(n)
    values[support] = vals
    return SparseSignal(values=values, k=k)
