"""Probabilistic projections: onto |0⟩, |0̃⟩, |0⟩⊥, Λ̃ and the computational subspace."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..anyon_sim import AnyonRegister
from ..group_core import ConjWord, Const
from ..rep_theory import Irrep, fusion_F_general
from .context import AnyonComputer, ControllerConfig, ProtocolError, ProtocolOutcome, outcome


def pp_zero(comp: AnyonComputer, reg: AnyonRegister, slot: int) -> ProtocolOutcome:
    """Fuse against an ancilla of flux b⁻¹; vacuum certifies |0⟩."""
    w0 = reg.weight
    res = reg.fuse_with_flux_ancilla(slot, comp.b)
    c = len(reg.slot(slot).cls)
    return outcome("pp_zero", reg, w0, res.success, res.kind, p_PP_estimate=1 / c,
                   data={"slot": slot})


def _class_ppp(comp: AnyonComputer) -> float:
    from ..group_core import conjugacy_class_of
    return comp.p / len(conjugacy_class_of(comp.G, comp.b))


def pp_tilde0(comp: AnyonComputer, reg: AnyonRegister, slot: int,
              supply: Callable[[AnyonRegister], int] | None = None) -> ProtocolOutcome:
    """Internal fusion; on vacuum a fresh |0̃⟩ from ``supply`` takes the slot's place."""
    w0 = reg.weight
    res = reg.fuse_internal(slot)
    if not res.success:
        return outcome("pp_tilde0", reg, w0, False, res.kind, p_PP_estimate=_class_ppp(comp))
    new = supply(reg) if supply is not None else comp.tilde(reg, 0)
    return outcome("pp_tilde0", reg, w0, True, "vacuum", p_PP_estimate=_class_ppp(comp),
                   data={"slot": new})


def distill_tilde0(comp: AnyonComputer, reg: AnyonRegister, sector=None) -> ProtocolOutcome:
    """A vacuum pair, an incomplete swap into a |0,...,0⟩ ancilla, and a b⁻¹ fusion."""
    from ..group_core import conjugacy_class_of
    w0 = reg.weight
    if sector is None:
        sector = conjugacy_class_of(comp.G, comp.b)
    vac = reg.add_vacuum_pair(sector, "vac")
    anc = comp.zero(reg, "anc")
    reg.apply_conjugation(anc, comp.ext_word, [vac])
    reg.apply_conjugation(vac, comp.cx_word, [anc], inverse=True)
    res = reg.fuse_with_flux_ancilla(vac, comp.b, replace=False)
    if not res.success:
        return outcome("distill_tilde0", reg, w0, False, res.kind)
    return outcome("distill_tilde0", reg, w0, True, "vacuum", data={"slot": anc})


# ------------------------------------------------------------------ electric charges

def _f_rows(comp: AnyonComputer, gammas) -> list[np.ndarray]:
    """F[j][k] = F_{a^k → γ_j} for the diagonalized charge pair."""
    R = comp.charge_pair()[0]
    key = ("rows", tuple(g.label for g in gammas))
    cache = comp.__dict__.setdefault("_f_cache", {})
    if key not in cache:
        cache[key] = [np.array([fusion_F_general(comp.G, R, g, x) for x in comp.powers]) for g in gammas]
    return cache[key]


def zero_perp_bound(comp: AnyonComputer) -> float:
    """min_{i>0} |F_{i→γ}|^{2(p-1)} for the selected charge pair."""
    R, gamma, _ = comp.charge_pair()
    (row,) = _f_rows(comp, [gamma])
    return float(np.min(np.abs(row[1:])) ** (2 * (comp.p - 1)))


def pp_zero_perp(comp: AnyonComputer, reg: AnyonRegister, slot: int,
                 cfg: ControllerConfig | None = None) -> ProtocolOutcome:
    """Charge sweeps β = 1, 2, ... with f(i) = a^{βi} until the F products balance on i ≠ 0."""
    cfg = cfg or comp.cfg
    p = comp.p
    R, gamma, _ = comp.charge_pair()
    gammas = comp.detectable_charges(R)
    rows = _f_rows(comp, gammas)
    w0 = reg.weight
    m = np.ones(p, dtype=complex)
    zero_run = 0
    outcomes = []
    bound = zero_perp_bound(comp)
    for r in range(cfg.rounds(p)):
        beta = r % (p - 1) + 1
        c = reg.add_vacuum_pair(R, "charge")
        reg.apply_charge_braiding(c, "left", comp.cx_word ** beta, [slot])
        res = reg.fuse_charge_pair(c, gammas)
        if res.kind == "residue":
            return outcome("pp_zero_perp", reg, w0, False, "residue", p_PP_estimate=bound,
                           data={"outcomes": outcomes})
        j = next(k for k, g in enumerate(gammas) if g.label == res.label)
        outcomes.append(res.label)
        m = m * rows[j][(beta * np.arange(p)) % p]
        m = m / np.max(np.abs(m)) if np.max(np.abs(m)) > 0 else m
        zero_run = zero_run + 1 if gammas[j].trivial else 0
        if abs(m[0]) < cfg.tolerance and np.all(np.abs(m[1:] - m[1]) < cfg.tolerance) and abs(m[1]) > 0:
            return outcome("pp_zero_perp", reg, w0, True, "success", p_PP_estimate=bound,
                           data={"outcomes": outcomes, "rounds": r + 1})
        if zero_run >= cfg.zero_run(p):
            return outcome("pp_zero_perp", reg, w0, False, "zero", p_PP_estimate=bound,
                           data={"outcomes": outcomes})
    return outcome("pp_zero_perp", reg, w0, False, "max-rounds", p_PP_estimate=bound,
                   data={"outcomes": outcomes})


def _phi_word(comp: AnyonComputer, phi) -> ConjWord:
    return phi.word.substitute({0: comp.cx_word})


def pp_lambda(comp: AnyonComputer, reg: AnyonRegister, slot: int) -> ProtocolOutcome:
    """For each separating map φ: |b⟩ ancilla conjugated by φ(h), then pp_zero on it."""
    w0 = reg.weight
    for k, phi in enumerate(comp.dec.lam.separating):
        anc = comp.zero(reg, f"lambda{k}")
        reg.apply_conjugation(anc, _phi_word(comp, phi), [slot])
        res = reg.fuse_with_flux_ancilla(anc, comp.b, replace=False)
        if not res.success:
            return outcome("pp_lambda", reg, w0, False, res.kind, data={"map": k})
    return outcome("pp_lambda", reg, w0, True, "success")


def pp_zero_perp_in_lambda(comp: AnyonComputer, reg: AnyonRegister, slot: int,
                           skip_lambda: bool = False) -> ProtocolOutcome:
    """Project out |0,...,0⟩ inside Λ̃ with one γ-targeted fusion per balanced map."""
    R, gamma, _ = comp.charge_pair()
    w0 = reg.weight
    if not skip_lambda:
        res = pp_lambda(comp, reg, slot)
        if not res.success:
            return outcome("pp_zero_perp_in_lambda", reg, w0, False, "lambda:" + res.label)
    for k, phi in enumerate(comp.dec.phi_set):
        c = reg.add_vacuum_pair(R, "charge")
        reg.apply_charge_braiding(c, "left", _phi_word(comp, phi), [slot])
        res = reg.fuse_charge_pair(c, gamma)
        if res.kind == "residue":
            return outcome("pp_zero_perp_in_lambda", reg, w0, False, "residue", data={"map": k})
    return outcome("pp_zero_perp_in_lambda", reg, w0, True, "success",
                   data={"maps": len(comp.dec.phi_set)})


def pp_computational_subspace(comp: AnyonComputer, reg: AnyonRegister, slot: int) -> ProtocolOutcome:
    """pp_lambda, then remove every λ ∈ Λ̃ outside ⟨a⟩ by shifting it to |0⟩ and projecting."""
    G = comp.G
    w0 = reg.weight
    res = pp_lambda(comp, reg, slot)
    if not res.success:
        return outcome("pp_computational_subspace", reg, w0, False, "lambda:" + res.label)
    cyc = set(comp.powers)
    for lam in sorted(set(comp.dec.lam.subgroup) - cyc):
        reg.apply_conjugation(slot, ConjWord(Const(G.invert(lam))))
        res = pp_zero_perp_in_lambda(comp, reg, slot, skip_lambda=True)
        reg.apply_conjugation(slot, ConjWord(Const(lam)))
        if not res.success:
            return outcome("pp_computational_subspace", reg, w0, False, res.label, data={"lambda": lam})
    return outcome("pp_computational_subspace", reg, w0, True, "success")


def amplify_lambda(comp: AnyonComputer, reg: AnyonRegister, slot: int, R: Irrep | None = None,
                   cfg: ControllerConfig | None = None, cycles: int | None = None) -> ProtocolOutcome:
    """Approximate route: vacuum-targeted fusions with f(h) = h a^{-i}, i cycling over ℤp.

    The controller tracks the multiplier of every h ∈ H̃ and stops once the
    largest out-of-⟨a⟩ multiplier, relative to the ⟨a⟩ ones, is below the
    tolerance.  The true residual mass is reported in ``data``.
    """
    from ..rep_theory import one_dim_reps
    cfg = cfg or comp.cfg
    G, p = comp.G, comp.p
    if R is None:
        from ..rep_theory import diagonal_irreps
        cands = [r for r in diagonal_irreps(comp.dec)
                 if any(abs(np.trace(r(h)) / r.dim - 1) > 1e-9 for h in comp.dec.H_tilde)]
        if not cands:
            raise ProtocolError("no irrep acts non-trivially on H̃")
        R = cands[0]
    vac = next(g for g in one_dim_reps(G) if g.trivial)
    H = sorted(comp.dec.H_tilde)
    F = {h: fusion_F_general(G, R, vac, h) for h in H}
    cyc = set(comp.powers)
    m = {h: 1.0 + 0j for h in H}
    w0 = reg.weight
    max_cycles = cycles if cycles is not None else (cfg.max_rounds or 50)
    ratios = []

    def ratio():
        inside = min(abs(m[h]) for h in cyc)
        outside = max((abs(m[h]) for h in H if h not in cyc), default=0.0)
        return (outside / inside) ** 2 if inside > 0 else np.inf

    for cyc_no in range(max_cycles):
        for i in range(p):
            shift = G.invert(comp.powers[i])
            c = reg.add_vacuum_pair(R, "charge")
            reg.apply_charge_braiding(c, "left", comp.cx_word * ConjWord(Const(shift)), [slot])
            res = reg.fuse_charge_pair(c, vac)
            if res.kind == "residue":
                return outcome("amplify_lambda", reg, w0, False, "residue", approximate=True,
                               data={"ratios": ratios})
            for h in H:
                m[h] *= F[G.mul[h, shift]]
        ratios.append(ratio())
        if ratios[-1] < cfg.tolerance:
            break
    resid = residual_mass(comp, reg, slot)
    ok = ratios[-1] < cfg.tolerance if ratios else True
    return outcome("amplify_lambda", reg, w0, ok, "success" if ok else "max-rounds", approximate=True,
                   data={"ratios": ratios, "residual_mass": resid, "cycles": len(ratios)})


def residual_mass(comp: AnyonComputer, reg: AnyonRegister, slot: int) -> float:
    """Probability mass of ``slot`` outside the computational basis."""
    p = reg.pos(slot)
    return float(sum(abs(a) ** 2 for k, a in reg.amps.items() if k[p] not in comp.index))
