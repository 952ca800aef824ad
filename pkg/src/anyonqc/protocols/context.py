"""Shared protocol plumbing: the computer context, compiled words, outcomes, stages."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from ..anyon_sim import AnyonRegister, ReplayChooser, SampleChooser, SimError, TerminalResult, \
    choose_branch, enumerate_branches
from ..group_core import (Arg, Comm, Const, ConjWord, Decomposition, DecompositionError, Group,
                          base_case_exponent, decompose, eval_word)
from ..rep_theory import (Fallback, diagonalize_on_H, fusion_F_general, gamma_multiplicity,
                          one_dim_reps, select_charge_pair)


class ProtocolError(RuntimeError):
    pass


@dataclass
class ControllerConfig:
    max_rounds: int | None = None          # default 2(p-1)
    tolerance: float = 1e-9
    stop_on_zero_run: int | None = None    # default 3(p-1)
    z_rounds: int = 4                      # copies per shift in a Z measurement
    x_rounds: int = 1                      # copies per shift in an X measurement
    budget: int = 100_000

    def rounds(self, p: int) -> int:
        r = self.max_rounds if self.max_rounds is not None else 2 * (p - 1)
        if r < p - 1:
            raise ProtocolError("max_rounds must be at least p - 1")
        return r

    def zero_run(self, p: int) -> int:
        return self.stop_on_zero_run if self.stop_on_zero_run is not None else 3 * (p - 1)


@dataclass
class ProtocolOutcome:
    name: str
    success: bool
    label: str = ""
    probability: float = 1.0
    post: AnyonRegister | None = field(default=None, repr=False)
    transcript: list = field(default_factory=list, repr=False)
    p_PP_estimate: float | None = None
    approximate: bool = False
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "success": self.success, "label": self.label,
                "probability": self.probability, "p_PP_estimate": self.p_PP_estimate,
                "approximate": self.approximate, "data": _jsonable(self.data),
                "transcript": self.transcript}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


@dataclass
class GatePlan:
    """Named-slot circuit: steps ("zero", name) | ("cx", src, tgt, k) | ("x", s, k) | ("move", src, dst)."""
    steps: list
    corrections: dict = field(default_factory=dict)


# ------------------------------------------------------------------ compiled words

def _nested(b_inv: int, b: int, count: int) -> ConjWord:
    w = ConjWord(Arg(0), Const(b_inv))
    for _ in range(count):
        w = ConjWord(Comm(w, ConjWord(Const(b))))
    return w


def compile_controlled_x(dec: Decomposition, form: str = "auto") -> ConjWord:
    """A word f with f(h b h⁻¹) = h on every h ∈ H̃."""
    G = dec.Gt
    b, b_inv = dec.b, G.invert(dec.b)
    if form == "auto":
        form = "power" if dec.n == 1 else "commutator"
    if form == "power":
        t = base_case_exponent(dec)
        if t is None:
            raise ProtocolError("the power form needs a cyclic H̃")
        e = pow((1 - t) % dec.p, -1, dec.p)
        w = ConjWord(Arg(0), Const(b_inv)) ** e
    elif form == "commutator":
        w = _nested(b_inv, b, dec.period - 1)
    else:
        raise ProtocolError(f"unknown form {form!r}")
    _verify_cx(dec, w)
    return w


def _verify_cx(dec: Decomposition, w: ConjWord) -> None:
    G = dec.Gt
    for h in dec.H_tilde:
        if eval_word(w, [G.conj(h, dec.b)], G) != h:
            raise ProtocolError("controlled-X word fails f(h b h⁻¹) = h")


def extended_controlled_x(dec: Decomposition) -> ConjWord:
    """Nested commutator word that also maps all of G̃ into H̃."""
    G = dec.Gt
    l = dec.period
    k = l - 1
    while k < dec.depth:
        k += l
    w = _nested(G.invert(dec.b), dec.b, k)
    _verify_cx(dec, w)
    if any(eval_word(w, [g], G) not in dec.H_tilde for g in G.elements()):
        raise ProtocolError("extended word leaves H̃")
    return w


def compile_times_t_gate(spec_or_dec) -> GatePlan:
    """|i⟩ -> |it⟩ from a |0⟩ ancilla, CX^t down and CX^(-1/t) up."""
    if isinstance(spec_or_dec, Decomposition):
        t, p = base_case_exponent(spec_or_dec), spec_or_dec.p
    else:
        t, p = spec_or_dec.t, spec_or_dec.p
    back = (-pow(t, -1, p)) % p
    return GatePlan([("zero", "anc"), ("cx", "data", "anc", t % p), ("cx", "anc", "data", back),
                     ("move", "anc", "data")])


# ------------------------------------------------------------------ computer

class AnyonComputer:
    """A decomposed group with its computational basis |i⟩ = |aⁱ b a⁻ⁱ⟩ and compiled gates."""

    def __init__(self, group: Group | Decomposition, cfg: ControllerConfig | None = None,
                 cx_form: str = "auto"):
        self.dec = group if isinstance(group, Decomposition) else decompose(group)
        dec = self.dec
        self.G = G = dec.Gt
        self.p = self.d = dec.p
        self.a = dec.a_star
        self.b = dec.b
        self.cfg = cfg or ControllerConfig()
        self.powers = [G.power(self.a, i) for i in range(self.p)]
        self.basis = [G.conj(x, self.b) for x in self.powers]
        self.index = {g: i for i, g in enumerate(self.basis)}
        self.cx_word = compile_controlled_x(dec, cx_form)
        self._ext = None
        self._charge = None

    # ------------------------------------------------------------ registers
    def register(self, mode: str = "enumerate", seed: int | None = 0, vacuum_factor: float = 1.0):
        chooser = ReplayChooser() if mode == "enumerate" else SampleChooser(seed)
        return AnyonRegister(self.G, chooser, vacuum_factor)

    @property
    def ext_word(self) -> ConjWord:
        if self._ext is None:
            self._ext = extended_controlled_x(self.dec)
        return self._ext

    def h_of(self, flux: int) -> int:
        """The h ∈ H̃ with flux = h b h⁻¹."""
        return eval_word(self.cx_word, [flux], self.G)

    def extended_flux(self, h: int) -> int:
        return self.G.conj(h, self.b)

    # ------------------------------------------------------------ supplies
    def zero(self, reg: AnyonRegister, name: str = "") -> int:
        return reg.add_flux_ancilla(self.b, name or "zero")

    def ket(self, reg: AnyonRegister, i: int, name: str = "") -> int:
        return reg.add_flux_ancilla(self.basis[i % self.p], name or f"ket{i % self.p}")

    def qudit(self, reg: AnyonRegister, amps, name: str = "") -> int:
        """Inject a single-qudit state Σ amps[i] |i⟩ (reservoir ancilla or test input)."""
        return reg.add_flux_state({self.basis[i]: complex(a) for i, a in enumerate(amps) if abs(a) > 0},
                                  name)

    def qudits(self, reg: AnyonRegister, state: Mapping[tuple, complex] | np.ndarray, n: int | None = None,
               names: Sequence[str] = ()) -> list[int]:
        """Inject a joint computational-basis state (dict keyed by digit tuples, or a dense vector)."""
        if isinstance(state, np.ndarray):
            n = n or round(np.log(state.size) / np.log(self.p))
            state = {tuple(int(x) for x in np.unravel_index(k, (self.p,) * n)): v
                     for k, v in enumerate(state) if abs(v) > 1e-15}
        return reg.add_joint_state({tuple(self.basis[i] for i in k): v for k, v in state.items()}, names)

    def tilde(self, reg: AnyonRegister, i: int = 0, name: str = "") -> int:
        w = np.exp(2j * np.pi / self.p)
        return self.qudit(reg, [w ** (-(i * j) % self.p) / np.sqrt(self.p) for j in range(self.p)],
                          name or f"tilde{i % self.p}")

    # ------------------------------------------------------------ gates
    def x(self, reg: AnyonRegister, s: int, k: int = 1) -> None:
        """Conjugation by an ancilla of flux aᵏ."""
        if k % self.p:
            reg.apply_conjugation(s, ConjWord(Const(self.powers[k % self.p])))

    def cx(self, reg: AnyonRegister, src: int, tgt: int, k: int = 1) -> None:
        k %= self.p
        if k:
            reg.apply_conjugation(tgt, self.cx_word ** k, [src])

    def z(self, reg: AnyonRegister, s: int, k: int = 1) -> None:
        """Z^k as a controlled-X from the qudit into a |1̃⟩ reservoir ancilla."""
        k %= self.p
        if not k:
            return
        res = self.tilde(reg, 1, "tilde1")
        self.cx(reg, s, res, k)
        reg.remove_product_slot(res)

    def run_plan(self, reg: AnyonRegister, plan: GatePlan, bind: dict) -> dict:
        bind = dict(bind)
        for step in plan.steps:
            op = step[0]
            if op == "zero":
                bind[step[1]] = self.zero(reg, step[1])
            elif op == "cx":
                self.cx(reg, bind[step[1]], bind[step[2]], step[3])
            elif op == "x":
                self.x(reg, bind[step[1]], step[2])
            elif op == "move":
                reg.remove_product_slot(bind[step[2]])
                bind[step[2]] = bind.pop(step[1])
            else:
                raise ProtocolError(f"unknown plan step {op!r}")
        return bind

    # ------------------------------------------------------------ readout
    def vector(self, reg: AnyonRegister, slots: Sequence[int], strict: bool = True) -> np.ndarray:
        """Dense amplitude vector over the computational basis of ``slots`` (no dead/extra slots)."""
        comps = reg.env_components(slots)
        if len(comps) != 1:
            raise ProtocolError("register is entangled with slots outside the readout")
        (comp,) = comps.values()
        vec = np.zeros(self.p ** len(slots), dtype=complex)
        for key, a in comp.items():
            try:
                digits = [self.index[g] for g in key]
            except KeyError:
                if strict:
                    raise ProtocolError("state leaves the computational subspace") from None
                continue
            vec[np.ravel_multi_index(digits, (self.p,) * len(slots))] += a
        return vec

    def fidelity(self, reg: AnyonRegister, slots: Sequence[int], target) -> float:
        """⟨target|ρ|target⟩ on ``slots`` with all other slots traced out."""
        target = np.asarray(getattr(target, "amplitudes", target), dtype=complex).reshape(-1)
        ref = {}
        n = len(slots)
        for k, v in enumerate(target):
            if abs(v) > 1e-15:
                digits = np.unravel_index(k, (self.p,) * n)
                ref[tuple(self.basis[int(i)] for i in digits)] = v
        return reg.fidelity(ref, slots)

    def in_computational(self, reg: AnyonRegister, slots: Sequence[int]) -> bool:
        ps = [reg.pos(s) for s in slots]
        return all(k[p] in self.index for k in reg.amps for p in ps)

    # ------------------------------------------------------------ charges
    def charge_pair(self):
        """(R diagonal on H̃, γ, F table on H̃) for the electric-charge projections."""
        if self._charge is None:
            sel = select_charge_pair(self.dec)
            if isinstance(sel, Fallback):
                self._charge = sel
            else:
                R = diagonalize_on_H(sel.R, self.dec.H_tilde)
                F = {h: fusion_F_general(self.G, R, sel.gamma, h) for h in self.dec.H_tilde}
                self._charge = (R, sel.gamma, F)
        if isinstance(self._charge, Fallback):
            raise ProtocolError(self._charge.reason)
        return self._charge

    def detectable_charges(self, R) -> list:
        return [g for g in one_dim_reps(self.G) if gamma_multiplicity(self.G, R, g) == 1]


# ------------------------------------------------------------------ stages

def _same_state(r1: AnyonRegister, r2: AnyonRegister, tol: float = 1e-9) -> bool:
    if [(s.sid, s.dead) for s in r1.slots] != [(s.sid, s.dead) for s in r2.slots]:
        return False
    if set(r1.amps) != set(r2.amps):
        return False
    keys = list(r1.amps)
    u = np.array([r1.amps[k] for k in keys])
    v = np.array([r2.amps[k] for k in keys])
    return abs(abs(np.vdot(u, v)) - 1) < tol


def staged(reg: AnyonRegister, name: str, fn: Callable[[AnyonRegister], ProtocolOutcome],
           terminal_failure: bool = True, budget: int = 100_000) -> ProtocolOutcome:
    """Run a sub-protocol as one branching step.

    Sampling runs it in place.  Enumeration expands it separately, merges
    leaves with the same outcome and the same state, and branches over the
    merged results; failures end the outer protocol unless
    ``terminal_failure`` is off.
    """
    if reg.mode == "sample":
        return fn(reg)
    leaves = enumerate_branches(reg, fn, budget)
    groups: list[dict] = []
    for lf in leaves:
        res = lf.result
        if isinstance(res, TerminalResult) or res is None:
            res = ProtocolOutcome(name, False, getattr(res, "label", "failure"))
        key = (bool(res.success), res.label)
        fail = not res.success and terminal_failure
        for g in groups:
            if g["key"] == key and (fail or g["reg"] is None or lf.register is None
                                    or _same_state(g["reg"], lf.register)):
                g["prob"] += lf.probability
                if g["reg"] is None:
                    g["reg"] = lf.register
                break
        else:
            groups.append({"key": key, "prob": lf.probability, "reg": lf.register, "res": res})
    for g in groups:
        if g["reg"] is None:
            g["reg"] = reg.copy()
    options = [(f"{'ok' if g['key'][0] else 'fail'}:{g['key'][1]}", g["prob"], g["reg"]) for g in groups]
    terminal = [k for k, g in enumerate(groups) if terminal_failure and not g["key"][0]]
    k = choose_branch(reg, name, options, terminal)
    g = groups[k]
    return replace(g["res"], probability=g["prob"], post=reg)


def run_enumerated(reg: AnyonRegister, fn: Callable, budget: int = 100_000):
    """All leaves of ``fn`` on ``reg``: list of (probability, ProtocolOutcome or terminal, register)."""
    return enumerate_branches(reg, fn, budget)


def outcome(name: str, reg: AnyonRegister, w0: float, success: bool, label: str = "", **kw) -> ProtocolOutcome:
    prob = reg.weight / w0 if w0 else 0.0
    return ProtocolOutcome(name, success, label or ("success" if success else "failure"), prob, reg,
                           [], **kw)
