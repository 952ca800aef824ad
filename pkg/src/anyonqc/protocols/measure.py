"""Measurements built from projections, |1⟩/|1̃⟩ bootstrap, and leakage correction."""

from __future__ import annotations

import numpy as np

from ..anyon_sim import AnyonRegister, SimError
from .context import AnyonComputer, ControllerConfig, GatePlan, ProtocolError, ProtocolOutcome, outcome


def _x_rounds(comp: AnyonComputer, cfg: ControllerConfig) -> int:
    from ..group_core import conjugacy_class_of
    if cfg.x_rounds is not None and len(conjugacy_class_of(comp.G, comp.b)) == comp.p:
        return cfg.x_rounds
    return max(cfg.x_rounds or 1, cfg.z_rounds)


def measure_basis(comp: AnyonComputer, reg: AnyonRegister, slot: int, basis: str = "Z",
                  cfg: ControllerConfig | None = None) -> ProtocolOutcome:
    """Shifted copies of the qudit are projected one at a time; the first vacuum names the outcome.

    A reported outcome is never wrong.  If every copy fails the result is
    "inconclusive" and the data slot may be disturbed.
    """
    cfg = cfg or comp.cfg
    p = comp.p
    w0 = reg.weight
    name = f"measure_{basis}"
    if basis == "Z":
        rounds = cfg.z_rounds
    elif basis == "X":
        rounds = _x_rounds(comp, cfg)
    else:
        raise ProtocolError("basis must be Z or X")
    tries = 0
    for _ in range(rounds):
        for j in range(p):
            tries += 1
            if basis == "Z":
                c = comp.zero(reg, "copy")
                comp.cx(reg, slot, c)
                comp.x(reg, c, -j)
                res = reg.fuse_with_flux_ancilla(c, comp.b, replace=False)
            else:
                c = comp.tilde(reg, 0, "copy")
                comp.cx(reg, c, slot, -1)
                comp.z(reg, c, j)
                res = reg.fuse_internal(c)
            if res.success:
                reg.drop_dead_product_slots()
                return outcome(name, reg, w0, True, str(j), data={"outcome": j, "copies": tries})
    return outcome(name, reg, w0, False, "inconclusive", data={"outcome": None, "copies": tries})


def _z_vectors(comp: AnyonComputer):
    return [{comp.basis[j]: 1.0} for j in range(comp.p)]


def _x_vectors(comp: AnyonComputer):
    w = np.exp(2j * np.pi / comp.p)
    return [{comp.basis[k]: w ** (-(j * k) % comp.p) / np.sqrt(comp.p) for k in range(comp.p)}
            for j in range(comp.p)]


def bootstrap_one_ancillas(comp: AnyonComputer, reg: AnyonRegister, force: tuple | None = None,
                           natural_one: bool = False, max_attempts: int = 8,
                           cfg: ControllerConfig | None = None) -> ProtocolOutcome:
    """Make |x⟩ and |ỹ⟩ by entangling with a partner the environment then measures.

    The X gate is CX from the |x⟩ reference and Z is CX into the |ỹ⟩
    reference.  A draw with x = 0 or y = 0 is caught by applying the candidate
    gate to a |0⟩ (resp. |0̃⟩) probe and measuring it, and is redrawn.
    ``force`` = (x, y) fixes the environment's outcomes.
    """
    cfg = cfg or comp.cfg
    p = comp.p
    w0 = reg.weight
    for attempt in range(1, max_attempts + 1):
        if natural_one:
            one = comp.ket(reg, 1, "one")
            x = 1
        else:
            one = comp.tilde(reg, 0, "one")
            partner = comp.zero(reg, "partner")
            comp.cx(reg, one, partner)
            x = reg.environment_projection(partner, _z_vectors(comp), list(range(p)),
                                           force=None if force is None else force[0])
        tone = comp.tilde(reg, 0, "tilde_one")
        partner = comp.zero(reg, "partner")
        comp.cx(reg, tone, partner)
        # Σ|i⟩|i⟩ = Σ|j̃⟩|(-j)~⟩, so an X outcome k on the partner leaves |(-k)~⟩
        k = reg.environment_projection(partner, _x_vectors(comp), list(range(p)),
                                       force=None if force is None else (-force[1]) % p)
        y = (-k) % p
        # test X on |0⟩ and Z on |0̃⟩
        probe = comp.zero(reg, "probe")
        comp.cx(reg, one, probe)
        mz = measure_basis(comp, reg, probe, "Z", cfg)
        probe2 = comp.tilde(reg, 0, "probe")
        comp.cx(reg, probe2, tone)
        mx = measure_basis(comp, reg, probe2, "X", cfg)
        if not (mz.success and mx.success):
            return outcome("bootstrap", reg, w0, False, "inconclusive", data={"attempts": attempt})
        for s in (probe, probe2):
            if s in [sl.sid for sl in reg.slots]:
                reg.remove_product_slot(s)
        zx, zy = mz.data["outcome"], (-mx.data["outcome"]) % p
        if zx != 0 and zy != 0:
            plans = {"X": GatePlan([("cx", "one", "target", 1)]),
                     "Z": GatePlan([("cx", "target", "tilde_one", 1)])}
            return outcome("bootstrap", reg, w0, True, "success",
                           data={"one": one, "tilde_one": tone, "x": zx, "y": zy, "attempts": attempt,
                                 "plans": {k: v.steps for k, v in plans.items()}})
        if force is not None:
            return outcome("bootstrap", reg, w0, False, "degenerate", data={"x": zx, "y": zy})
        reg.remove_product_slot(one)
        reg.remove_product_slot(tone)
    return outcome("bootstrap", reg, w0, False, "max-attempts", data={"attempts": max_attempts})


def leakage_correct(comp: AnyonComputer, reg: AnyonRegister, slot: int,
                    cfg: ControllerConfig | None = None) -> ProtocolOutcome:
    """Teleport ``slot`` into a fresh Bell pair; the output always lies in the computational subspace.

    data["slot"] is the output.  An inconclusive Bell measurement is reported
    as failure, and the output is then uncorrected but still in the subspace.
    """
    cfg = cfg or comp.cfg
    w0 = reg.weight
    a1 = comp.tilde(reg, 0, "bell1")
    a2 = comp.zero(reg, "bell2")
    comp.cx(reg, a1, a2)
    comp.cx(reg, a1, slot, -1)
    mz = measure_basis(comp, reg, slot, "Z", cfg)
    mx = measure_basis(comp, reg, a1, "X", cfg)
    ok = mz.success and mx.success
    m = mz.data["outcome"] or 0
    c = mx.data["outcome"] or 0
    if ok:
        comp.x(reg, a2, m)
        comp.z(reg, a2, -c)
        for s in (slot, a1):
            try:
                reg.remove_product_slot(s)
            except SimError:
                pass
    return outcome("leakage_correct", reg, w0, ok, f"{m},{c}" if ok else "inconclusive",
                   data={"slot": a2, "z": m, "x": c})
