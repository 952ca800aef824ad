"""Small dense linear algebra over the prime field F_p."""

from __future__ import annotations

import numpy as np


def rref(A, p: int):
    """Reduced row echelon form mod p; returns (R, pivot columns)."""
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and R[i, c]:
                R[i] = (R[i] - R[i, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, p: int) -> int:
    A = np.atleast_2d(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0 mod p}."""
    A = np.atleast_2d(np.array(A, dtype=np.int64))
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = (-R[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def solve(A, b, p: int):
    """One solution x of A x = b mod p, or None."""
    A = np.array(A, dtype=np.int64)
    b = np.array(b, dtype=np.int64).reshape(-1, 1)
    R, piv = rref(np.hstack([A, b]), p)
    n = A.shape[1]
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return x


def span_basis(vectors, p: int) -> list[int]:
    """Indices of a greedy maximal independent subset of ``vectors``."""
    chosen: list[int] = []
    rows: list = []
    for k, v in enumerate(vectors):
        trial = rows + [np.asarray(v).ravel()]
        if rank(np.array(trial), p) > len(rows):
            rows = trial
            chosen.append(k)
    return chosen
