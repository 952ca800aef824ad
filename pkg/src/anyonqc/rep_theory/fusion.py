"""Fusion amplitudes F_{h→γ} of a charge pair |R(h)⟩_R into a one-dimensional charge γ."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..group_core import Group, SemidirectSpec, conjugacy_class_of
from .characters import TOL, OneDimRep, RepError, one_dim_reps
from .irreps import Irrep, diagonalize_on_H, irreps

PHASE_CONVENTION = "invariant vector scaled to Tr(V†V)/d = 1, first non-zero row-major entry real positive"


@dataclass(frozen=True)
class FusionAmplitudeTable:
    rep: str
    gamma: str
    entries: dict
    phase_convention: str = PHASE_CONVENTION

    def to_rows(self) -> list[dict]:
        rows = []
        for key, z in self.entries.items():
            if isinstance(key, tuple):
                i, j = key
            else:
                i, j = key, self.gamma
            rows.append({"i": i, "j": j, "re": float(z.real), "im": float(z.imag),
                         "magnitude2": float(abs(z) ** 2)})
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["i", "j", "re", "im", "magnitude2"], lineterminator="\n")
        w.writeheader()
        w.writerows(self.to_rows())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"rep": self.rep, "gamma": self.gamma,
                           "phase_convention": self.phase_convention, "rows": self.to_rows()})


def fusion_F_semidirect(spec: SemidirectSpec | tuple, omega_index: int = 1) -> FusionAmplitudeTable:
    """F_{i→j} = (1/q) Σ_{k=1..q} γ^{-kj} ω^{i t^{k-1}}, γ = e^{2πi/q}, ω = e^{2πi·idx/p}."""
    if not isinstance(spec, SemidirectSpec):
        spec = SemidirectSpec(*spec)
    p, q, t = spec.p, spec.q, spec.t
    if not 1 <= omega_index <= p - 1:
        raise RepError("omega_index must lie in 1..p-1")
    gam = np.exp(2j * np.pi / q)
    om = np.exp(2j * np.pi * omega_index / p)
    entries = {}
    for i in range(p):
        for j in range(q):
            entries[(i, j)] = sum(gam ** (-k * j) * om ** ((i * pow(t, k - 1, p)) % p)
                                  for k in range(1, q + 1)) / q
    return FusionAmplitudeTable(f"ind{omega_index}", "gamma^j", entries,
                                phase_convention="[γ^j] = diag(γ^j, γ^{2j}, ..., γ^{qj})")


def gamma_multiplicity(G: Group, R: Irrep, gamma: OneDimRep) -> int:
    chi = R.character()
    m = np.sum(np.abs(chi) ** 2 * np.conj(gamma.values)) / G.order
    return int(round(m.real))


def invariant_vector(G: Group, R: Irrep, gamma: OneDimRep) -> np.ndarray:
    """Unit vector (d x d matrix) spanning the γ-component of R ⊗ R*."""
    return _invariant_vector(G, R, gamma)


@lru_cache(maxsize=512)
def _invariant_vector(G: Group, R: Irrep, gamma: OneDimRep) -> np.ndarray:
    if gamma_multiplicity(G, R, gamma) != 1:
        raise RepError(f"{gamma.label} does not occur exactly once in {R.label} ⊗ {R.label}*")
    d = R.dim
    M = R.matrices
    S = np.einsum("g,gij,gkl->ikjl", np.conj(gamma.values), M, M.conj()).reshape(d * d, d * d) / G.order
    vals, vecs = np.linalg.eigh((S + S.conj().T) / 2)
    if int(np.sum(vals > 0.5)) != 1:
        raise RepError("P_γ does not have rank one")
    v = vecs[:, -1]
    k = next(i for i, z in enumerate(v) if abs(z) > 1e-9)
    v = v * abs(v[k]) / v[k]
    V = v.reshape(d, d) * np.sqrt(d)
    V.setflags(write=False)
    return V


def fusion_F_general(G: Group, R: Irrep, gamma: OneDimRep, h: int) -> complex:
    """F_{h→γ} = ⟨V_γ, R(h)⟩ with ⟨M1, M2⟩ = Tr(M1† M2)/d."""
    V = invariant_vector(G, R, gamma)
    return complex(np.trace(V.conj().T @ R(h)) / R.dim)


def fusion_table_general(G: Group, R: Irrep, gamma: OneDimRep, elements) -> FusionAmplitudeTable:
    return FusionAmplitudeTable(R.label, gamma.label,
                                {h: fusion_F_general(G, R, gamma, h) for h in elements})


def F_squared_formula(G: Group, R: Irrep, gamma: OneDimRep, h: int) -> float:
    """(1/(d|G|²)) Σ_i |Σ_g γ̄(g) ω_i(g h g⁻¹)|², needs R diagonal on a normal abelian H ∋ h."""
    if R.h_diagonal is None:
        raise RepError("h_diagonal absent; call diagonalize_on_H first")
    total = np.zeros(R.dim, dtype=complex)
    for g in G.elements():
        total += np.conj(gamma(g)) * R.h_diagonal[G.conj(g, h)]
    return float(np.sum(np.abs(total) ** 2) / (R.dim * G.order ** 2))


def vacuum_amplitude(G: Group, R: Irrep, h: int) -> float:
    """|F_{h→I}|² = (1/(d|C(h)|²)) Σ_i |Σ_{h'∈C(h)} ω_i(h')|²."""
    if R.h_diagonal is None:
        raise RepError("h_diagonal absent; call diagonalize_on_H first")
    C = conjugacy_class_of(G, h)
    total = sum(R.h_diagonal[x] for x in C)
    return float(np.sum(np.abs(total) ** 2) / (R.dim * len(C) ** 2))


@dataclass(frozen=True, eq=False)
class ChargePair:
    R: Irrep
    gamma: OneDimRep
    amplitudes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Fallback:
    reason: str
    route: str = "amplify_lambda"


def select_charge_pair(dec, tol: float = TOL):
    """First (R, γ) in table order with F_{λ→γ} ≠ 0 on every non-trivial λ ∈ Λ̃."""
    G = dec.Gt
    lam = sorted(x for x in dec.lambda_tilde if x)
    for R in irreps(G):
        if R.dim == 1:
            continue
        for gamma in one_dim_reps(G):
            if gamma.trivial or not gamma.is_trivial_on(dec.S_tilde):
                continue
            if gamma_multiplicity(G, R, gamma) != 1:
                continue
            amps = {h: fusion_F_general(G, R, gamma, h) for h in dec.H_tilde}
            if all(abs(amps[x]) > tol for x in lam):
                return ChargePair(R, gamma, amps)
    return Fallback("no (R, γ) with non-vanishing F on Λ̃ \\ {1}; use the vacuum-amplification route")


def diagonal_irreps(dec) -> list[Irrep]:
    return [diagonalize_on_H(R, dec.H_tilde) for R in irreps(dec.Gt)]
