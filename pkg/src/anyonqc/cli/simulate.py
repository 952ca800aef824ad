"""Protocol runners for the ``simulate`` subcommand."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..anyon_sim import TerminalResult, enumerate_branches
from ..protocols import (AnyonComputer, ProtocolError, apply_toffoli,
                         bootstrap_one_ancillas, distill_tilde0, leakage_correct, m1_state, m2_state,
                         magic_p2, make_magic, measure_basis, pp_computational_subspace, pp_lambda,
                         pp_tilde0, pp_zero, pp_zero_perp)
from ..qudit_oracle import Gate, QuditState, oracle_apply


class UsageError(ValueError):
    pass


@dataclass
class Runner:
    qudits: int
    run: Callable            # (comp, reg, psi, cfg) -> (outcome, ctx)
    deficit: Callable | None = None   # (comp, reg, outcome, ctx, psi) -> float


def _inject(comp, reg, psi, n):
    if n == 1:
        return [comp.qudit(reg, psi, "data")]
    return comp.qudits(reg, psi, n)


def _proj_runner(op, P_of, slot_of=lambda res, s: s):
    def run(comp, reg, psi, cfg):
        (s,) = _inject(comp, reg, psi, 1)
        return op(comp, reg, s, cfg), s

    def deficit(comp, reg, res, s, psi):
        P = P_of(comp.p)
        v = P @ psi
        if np.linalg.norm(v) < 1e-12:
            return 1.0
        return 1 - comp.fidelity(reg, [slot_of(res, s)], v / np.linalg.norm(v))
    return Runner(1, run, deficit)


def _P0(d):
    P = np.zeros((d, d))
    P[0, 0] = 1
    return P


def _Pt(d):
    return np.ones((d, d)) / d


def _measure(basis):
    def run(comp, reg, psi, cfg):
        (s,) = _inject(comp, reg, psi, 1)
        return measure_basis(comp, reg, s, basis, cfg), s

    def deficit(comp, reg, res, s, psi):
        # a reported outcome must have non-zero probability under the oracle
        d = comp.p
        j = res.data["outcome"]
        amp = psi[j] if basis == "Z" else np.vdot(np.exp(-2j * np.pi * j * np.arange(d) / d) / np.sqrt(d), psi)
        return 0.0 if abs(amp) > 1e-12 else 1.0
    return Runner(1, run, deficit)


def _leakage():
    def run(comp, reg, psi, cfg):
        (s,) = _inject(comp, reg, psi, 1)
        return leakage_correct(comp, reg, s, cfg), s

    def deficit(comp, reg, res, s, psi):
        return 1 - comp.fidelity(reg, [res.data["slot"]], psi)
    return Runner(1, run, deficit)


def _toffoli():
    def run(comp, reg, psi, cfg):
        slots = _inject(comp, reg, psi, 3)
        return apply_toffoli(comp, reg, tuple(slots), cfg=cfg), slots

    def deficit(comp, reg, res, slots, psi):
        ref = oracle_apply(QuditState(comp.p, 3, psi), Gate.Toffoli(0, 1, 2)).amplitudes
        return 1 - comp.fidelity(reg, res.data["slots"], ref)
    return Runner(3, run, deficit)


def _distill():
    def run(comp, reg, psi, cfg):
        return distill_tilde0(comp, reg), None

    def deficit(comp, reg, res, ctx, psi):
        orbit = sorted({comp.G.conj(h, comp.b) for h in comp.dec.H_tilde})
        return 1 - reg.fidelity({(g,): 1 / np.sqrt(len(orbit)) for g in orbit}, [res.data["slot"]])
    return Runner(0, run, deficit)


def _orbit(op, allowed_of):
    """Input: uniform superposition over the H̃-orbit of b; success support must lie in the target."""
    def run(comp, reg, psi, cfg):
        orbit = sorted({comp.G.conj(h, comp.b) for h in comp.dec.H_tilde})
        s = reg.add_flux_state({g: 1 / np.sqrt(len(orbit)) for g in orbit})
        return op(comp, reg, s), s

    def deficit(comp, reg, res, s, psi):
        return 0.0 if reg.support(s) <= allowed_of(comp) else 1.0
    return Runner(0, run, deficit)


def _bootstrap():
    def run(comp, reg, psi, cfg):
        # each redraw multiplies the branch tree, so enumeration stops at one attempt
        attempts = 1 if reg.mode == "enumerate" else 8
        return bootstrap_one_ancillas(comp, reg, max_attempts=attempts, cfg=cfg), None
    return Runner(0, run, None)


def _magic_p2():
    def run(comp, reg, psi, cfg):
        if comp.p != 2:
            raise UsageError("magic_p2 needs a group with p = 2 (e.g. a4)")
        return magic_p2(comp, reg), None

    def deficit(comp, reg, res, ctx, psi):
        return 1 - comp.fidelity(reg, res.data["slots"], m1_state(2))
    return Runner(0, run, deficit)


RUNNERS: dict[str, Runner] = {
    "pp_zero": _proj_runner(lambda c, r, s, cfg: pp_zero(c, r, s), _P0),
    "pp_tilde0": _proj_runner(lambda c, r, s, cfg: pp_tilde0(c, r, s), _Pt,
                              slot_of=lambda res, s: res.data["slot"]),
    "pp_zero_perp": _proj_runner(lambda c, r, s, cfg: pp_zero_perp(c, r, s, cfg), lambda d: np.eye(d) - _P0(d)),
    "pp_lambda": _orbit(pp_lambda, lambda c: {c.G.conj(h, c.b) for h in c.dec.lambda_tilde}),
    "pp_computational_subspace": _orbit(pp_computational_subspace, lambda c: set(c.basis)),
    "distill_tilde0": _distill(),
    "measure_z": _measure("Z"),
    "measure_x": _measure("X"),
    "bootstrap": _bootstrap(),
    "leakage_correct": _leakage(),
    "toffoli": _toffoli(),
    "magic_p2": _magic_p2(),
}
MAGIC = {"magic_m1": ("M1", m1_state), "magic_m2": ("M2", m2_state)}
PROTOCOLS = sorted(list(RUNNERS) + list(MAGIC))


def parse_input(text: str | None, d: int, n: int, seed: int) -> np.ndarray | None:
    """'0,1,2' (basis digits), 'uniform', or 'random' (seeded)."""
    if n == 0:
        return None
    dim = d ** n
    if text in (None, "random"):
        rng = np.random.default_rng(seed)
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return v / np.linalg.norm(v)
    if text == "uniform":
        return np.ones(dim, dtype=complex) / np.sqrt(dim)
    try:
        digits = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --input {text!r}") from None
    if len(digits) != n or not all(0 <= x < d for x in digits):
        raise UsageError(f"--input needs {n} digits in 0..{d - 1}")
    v = np.zeros(dim, dtype=complex)
    v[np.ravel_multi_index(digits, (d,) * n)] = 1
    return v


def simulate(comp: AnyonComputer, protocol: str, mode: str, seed: int, input_text: str | None,
             tolerance: float) -> dict:
    if protocol in MAGIC:
        kind, target = MAGIC[protocol]
        try:
            o = make_magic(comp, kind, mode=mode, seed=seed)
        except ProtocolError as e:
            raise UsageError(str(e)) from None
        dfc = 1 - comp.fidelity(o.post, o.data["slots"], target(comp.p)) if o.success else None
        return {"protocol": protocol, "success_probability": o.probability if o.success else 0.0,
                "branches": [{"probability": o.probability, "success": o.success, "label": o.label,
                              "deficit": dfc}],
                "max_deficit": dfc, "ok": bool(o.success and dfc < tolerance)}
    if protocol not in RUNNERS:
        raise UsageError(f"unknown protocol {protocol!r}; choose from {', '.join(PROTOCOLS)}")
    runner = RUNNERS[protocol]
    psi = parse_input(input_text, comp.p, runner.qudits, seed)

    def body(reg):
        return runner.run(comp, reg, psi, comp.cfg)

    if mode == "enumerate":
        leaves = enumerate_branches(comp.register("enumerate"), body, comp.cfg.budget)
    else:
        reg = comp.register("sample", seed)
        leaves = [_Leaf(reg, body(reg))]
    branches = []
    for lf in leaves:
        if isinstance(lf.result, TerminalResult) or lf.result is None:
            branches.append({"probability": lf.probability, "success": False,
                             "label": getattr(lf.result, "label", "failure"), "deficit": None})
            continue
        res, ctx = lf.result
        dfc = None
        if res.success and runner.deficit is not None:
            dfc = float(runner.deficit(comp, lf.register, res, ctx, psi))
        branches.append({"probability": lf.probability, "success": bool(res.success), "label": res.label,
                         "deficit": dfc, "data": _plain_data(res.data)})
    defs = [b["deficit"] for b in branches if b["deficit"] is not None]
    worst = max(defs) if defs else None
    return {"protocol": protocol,
            "input": None if psi is None else [[float(z.real), float(z.imag)] for z in psi],
            "probability_sum": float(sum(b["probability"] for b in branches)),
            "success_probability": float(sum(b["probability"] for b in branches if b["success"])),
            "branches": branches, "max_deficit": worst,
            "ok": worst is None or worst < tolerance}


@dataclass
class _Leaf:
    register: object
    result: object

    @property
    def probability(self) -> float:
        return 1.0


def _plain_data(data: dict) -> dict:
    out = {}
    for k, v in data.items():
        if k == "plans":
            continue
        if isinstance(v, (int, float, str, bool)) or v is None:
            out[k] = v
        elif isinstance(v, (list, tuple)) and all(isinstance(x, (int, float, str)) for x in v):
            out[k] = list(v)
    return out
