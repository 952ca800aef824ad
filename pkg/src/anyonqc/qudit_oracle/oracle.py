"""Reference qudit simulator.

Conventions: X|i⟩ = |i+1⟩, Z|i⟩ = ω^i|i⟩ with ω = e^{2πi/d}, and the
conjugate basis |ĩ⟩ = Σ_j ω^{-ij}|j⟩/√d, so X|ĩ⟩ = ω^i|ĩ⟩ and Z|ĩ⟩ = |(i-1)~⟩.
Qudit 0 is the most significant digit of the flat index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np


class OracleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QuditState:
    d: int
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.size != self.d ** self.n:
            raise OracleError("amplitude vector has the wrong length")
        object.__setattr__(self, "amplitudes", a)

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "QuditState":
        return QuditState(self.d, self.n, self.amplitudes / self.norm())

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n,
                "re": self.amplitudes.real.tolist(), "im": self.amplitudes.imag.tolist()}

    @classmethod
    def from_json(cls, data) -> "QuditState":
        return cls(data["d"], data["n"], np.array(data["re"]) + 1j * np.array(data["im"]))


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def basis_state(d: int, digits) -> QuditState:
    digits = list(digits)
    v = np.zeros(d ** len(digits), dtype=complex)
    v[int(np.ravel_multi_index(tuple(x % d for x in digits), (d,) * len(digits)))] = 1
    return QuditState(d, len(digits), v)


def tilde_state(d: int, i: int) -> np.ndarray:
    return omega(d) ** (-i * np.arange(d) % d) / np.sqrt(d)


@dataclass(frozen=True)
class Gate:
    kind: str                 # X, Z, CX, TOFFOLI, PHASE, MULT
    qudits: tuple
    power: int = 1
    fn: Callable | None = None

    @staticmethod
    def X(q, k=1):
        return Gate("X", (q,), k)

    @staticmethod
    def Z(q, k=1):
        return Gate("Z", (q,), k)

    @staticmethod
    def CX(src, tgt, k=1):
        return Gate("CX", (src, tgt), k)

    @staticmethod
    def Toffoli(a, b, c):
        return Gate("TOFFOLI", (a, b, c))

    @staticmethod
    def Phase(a, b, f):
        """|i,j⟩ -> ω^{f(i,j)} |i,j⟩"""
        return Gate("PHASE", (a, b), 1, f)

    @staticmethod
    def Mult(q, c):
        return Gate("MULT", (q,), c)


def oracle_apply(state: QuditState, gate: Gate) -> QuditState:
    d, n = state.d, state.n
    if any(not 0 <= q < n for q in gate.qudits) or len(set(gate.qudits)) != len(gate.qudits):
        raise OracleError(f"bad qudit indices {gate.qudits}")
    T = state.tensor
    idx = np.indices(T.shape)
    k = gate.power
    if gate.kind == "X":
        out = np.roll(T, k, axis=gate.qudits[0])
    elif gate.kind == "Z":
        out = T * omega(d) ** ((k * idx[gate.qudits[0]]) % d)
    elif gate.kind in ("CX", "TOFFOLI", "MULT"):
        tgt = gate.qudits[-1]
        if gate.kind == "CX":
            shift = k * idx[gate.qudits[0]]
        elif gate.kind == "TOFFOLI":
            shift = idx[gate.qudits[0]] * idx[gate.qudits[1]]
        if gate.kind == "MULT":
            if k % d == 0:
                raise OracleError("multiplier must be non-zero mod d")
            new_t = (k * idx[tgt]) % d
        else:
            new_t = (idx[tgt] + shift) % d
        out = np.zeros_like(T)
        dest = list(idx)
        dest[tgt] = new_t
        np.add.at(out, tuple(dest), T)
    elif gate.kind == "PHASE":
        a, b = gate.qudits
        f = np.vectorize(lambda i, j: gate.fn(int(i), int(j)) % d)(idx[a], idx[b])
        out = T * omega(d) ** f
    else:
        raise OracleError(f"unknown gate {gate.kind}")
    return QuditState(d, n, out.reshape(-1))


def apply_all(state: QuditState, gates) -> QuditState:
    for g in gates:
        state = oracle_apply(state, g)
    return state


def oracle_measure(state: QuditState, qudit: int, basis: str = "Z", seed=None,
                   enumerate_all: bool = False):
    """Born-rule measurement.  With ``enumerate_all`` returns [(outcome, prob, post)]."""
    d, n = state.d, state.n
    T = np.moveaxis(state.tensor, qudit, 0)
    if basis == "X":
        F = np.array([tilde_state(d, j) for j in range(d)]).conj()   # rows ⟨j̃|
        T = np.tensordot(F, T, axes=(1, 0))
    elif basis != "Z":
        raise OracleError("basis must be Z or X")
    branches = []
    for j in range(d):
        comp = np.zeros_like(T)
        comp[j] = T[j]
        prob = float(np.sum(np.abs(T[j]) ** 2))
        if prob <= 1e-15:
            continue
        if basis == "X":
            comp = np.tensordot(F.conj().T, comp, axes=(1, 0))
        post = np.moveaxis(comp, 0, qudit).reshape(-1) / np.sqrt(prob)
        branches.append((j, prob, QuditState(d, n, post)))
    if enumerate_all:
        return branches
    rng = np.random.default_rng(seed)
    probs = np.array([b[1] for b in branches])
    k = rng.choice(len(branches), p=probs / probs.sum())
    return branches[k][0], branches[k][2]


@dataclass(frozen=True)
class CompareReport:
    max_deficit: float
    deficits: dict
    phases: dict

    def ok(self, tol: float) -> bool:
        return self.max_deficit < tol

    def to_json(self) -> dict:
        return {"max_deficit": self.max_deficit,
                "deficits": {str(k): v for k, v in self.deficits.items()},
                "phases": {str(k): v for k, v in self.phases.items()}}


def oracle_compare(anyon_result: Mapping, oracle_result: Mapping) -> CompareReport:
    """Per-branch fidelity, insensitive to a global phase per branch."""
    if set(anyon_result) != set(oracle_result):
        raise OracleError("branch labels differ between the two results")
    deficits, phases = {}, {}
    for key in anyon_result:
        a = np.asarray(getattr(anyon_result[key], "amplitudes", anyon_result[key]), dtype=complex)
        o = np.asarray(getattr(oracle_result[key], "amplitudes", oracle_result[key]), dtype=complex)
        if a.shape != o.shape:
            raise OracleError(f"encoding mismatch on branch {key}")
        ov = np.vdot(o, a) / (np.linalg.norm(a) * np.linalg.norm(o))
        deficits[key] = float(max(0.0, 1 - abs(ov) ** 2))
        phases[key] = float(np.angle(ov))
    return CompareReport(max(deficits.values(), default=0.0), deficits, phases)
