"""Explicit unitary irreducible representations."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from ..group_core import Group, SemidirectSpec, semidirect_pq
from .characters import TOL, RepError, character_table


@dataclass(frozen=True, eq=False)
class Irrep:
    label: str
    dim: int
    matrices: np.ndarray                  # |G| x d x d
    h_diagonal: dict | None = field(default=None, repr=False)

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    def check(self, G: Group, tol: float = TOL) -> None:
        R = self.matrices
        d = self.dim
        if not np.allclose(R[0], np.eye(d), atol=tol):
            raise RepError(f"{self.label}: R(1) is not the identity")
        eye = np.eye(d)
        for g in G.elements():
            if not np.allclose(R[g] @ R[g].conj().T, eye, atol=tol):
                raise RepError(f"{self.label}: R({g}) is not unitary")
        prod = np.einsum("aij,bjk->abik", R, R, optimize=True)
        if not np.allclose(prod, R[G.mul], atol=tol):
            raise RepError(f"{self.label}: not a homomorphism")


def _regular_blocks(G: Group, chi: np.ndarray, d: int):
    """Orthonormal basis of the isotypic component and the restricted regular rep."""
    n = G.order
    # P[y, x] = d/|G| conj(chi(y x^-1))
    yx = G.mul[np.arange(n)[:, None], G.inv[None, :]]
    P = d / n * np.conj(chi[yx])
    vals, vecs = np.linalg.eigh((P + P.conj().T) / 2)
    B = vecs[:, vals > 0.5]
    if B.shape[1] != d * d:
        raise RepError("isotypic component has the wrong dimension")
    # (L(g) B)[y] = B[g^-1 y]
    rho = np.array([B.conj().T @ B[G.mul[G.inv[g]]] for g in G.elements()])
    return B, rho


def irreps(G: Group, seed: int = 0, retries: int = 8) -> tuple:
    return _irreps(G, seed, retries)


@lru_cache(maxsize=64)
def _irreps(G: Group, seed: int, retries: int) -> tuple:
    table = character_table(G)
    labels = table.labels()
    rng = np.random.default_rng(seed)
    out = []
    for row, (d, label) in enumerate(zip(table.dims, labels)):
        chi = table.character(row)
        if d == 1:
            out.append(Irrep(label, 1, chi.reshape(-1, 1, 1).astype(complex)))
            continue
        for _ in range(retries):
            _, rho = _regular_blocks(G, chi, d)
            X = rng.normal(size=(d * d, d * d)) + 1j * rng.normal(size=(d * d, d * d))
            X = X + X.conj().T
            T = np.sum(rho @ X @ rho.conj().transpose(0, 2, 1), axis=0) / G.order
            vals, vecs = np.linalg.eigh((T + T.conj().T) / 2)
            if vals[-d] - vals[-d - 1] < 1e-8:
                continue
            Qm = vecs[:, -d:]
            R = Qm.conj().T @ rho @ Qm
            rep = Irrep(label, d, R)
            try:
                rep.check(G)
            except RepError:
                continue
            if not np.allclose(rep.character(), chi, atol=1e-8):
                continue
            out.append(rep)
            break
        else:
            raise RepError(f"could not extract irreducible copy for {label}")
    return tuple(out)


def semidirect_irrep(spec: SemidirectSpec | tuple, omega_index: int) -> Irrep:
    """The q-dimensional induced irrep of ℤp⋊ℤq (element a^i b^k has index i + p k)."""
    if not isinstance(spec, SemidirectSpec):
        spec = SemidirectSpec(*spec)
    p, q, t = spec.p, spec.q, spec.t
    if not 1 <= omega_index <= p - 1:
        raise RepError("omega_index must lie in 1..p-1")
    omega = np.exp(2j * np.pi * omega_index / p)
    Ra = np.diag([omega ** pow(t, k, p) for k in range(q)])
    Rb = np.roll(np.eye(q), 1, axis=1)       # ones above the diagonal, one in the lower-left
    mats = []
    for x in range(p * q):
        i, k = x % p, x // p
        mats.append(np.linalg.matrix_power(Ra, i) @ np.linalg.matrix_power(Rb, k))
    rep = Irrep(f"ind{omega_index}", q, np.array(mats))
    rep.check(semidirect_pq(spec))
    return rep


def diagonalize_on_H(R: Irrep, H, seed: int = 0) -> Irrep:
    """Change basis so every R(h), h ∈ H (abelian), is diagonal; record the diagonals."""
    H = sorted(H)
    rng = np.random.default_rng(seed)
    A = np.zeros((R.dim, R.dim), dtype=complex)
    for h in H:
        c = rng.normal() + 1j * rng.normal()
        A += c * R(h) + np.conj(c) * R(h).conj().T
    _, U = np.linalg.eigh(A)
    mats = U.conj().T @ R.matrices @ U
    diag = {}
    for h in H:
        m = mats[h]
        if not np.allclose(m, np.diag(np.diag(m)), atol=1e-9):
            raise RepError("R restricted to H is not simultaneously diagonalizable")
        diag[h] = np.diag(m).copy()
    return replace(R, matrices=mats, h_diagonal=diag)


def find_irrep(G: Group, name: str) -> Irrep:
    reps = irreps(G)
    if name.endswith("d") and name[:-1].isdigit():
        d = int(name[:-1])
        for r in reps:
            if r.dim == d:
                return r
    if name.startswith("#"):
        return reps[int(name[1:])]
    for r in reps:
        if r.label == name:
            return r
    raise KeyError(f"no irrep {name!r}")
