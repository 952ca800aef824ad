"""Magic states, the phase walk, the teleported Toffoli, and the p = 2 route."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..anyon_sim import AnyonRegister, enumerate_branches
from ..group_core import ConjWord, Const, Arg, Inv
from .context import AnyonComputer, ControllerConfig, ProtocolError, ProtocolOutcome, outcome, staged
from .measure import measure_basis
from .projections import pp_zero_perp, pp_zero_perp_in_lambda


def m1_state(d: int) -> np.ndarray:
    v = np.zeros(d ** 3, dtype=complex)
    for i in range(d):
        for j in range(d):
            v[(i * d + j) * d + (i * j) % d] = 1 / d
    return v


def m2_state(d: int) -> np.ndarray:
    w = np.exp(2j * np.pi / d)
    v = np.full(d * d, 1 / d, dtype=complex)
    v[0] *= w
    return v


# ------------------------------------------------------------------ building blocks

def _stage(comp: AnyonComputer, reg: AnyonRegister, name: str, fn: Callable) -> ProtocolOutcome:
    return staged(reg, name, fn, budget=comp.cfg.budget)


def project_out_zero(comp: AnyonComputer, reg: AnyonRegister, slot: int) -> ProtocolOutcome:
    """pp onto |0⟩⊥, as a single stage: the F-sweep when H̃ is cyclic, the balanced maps otherwise."""
    if comp.dec.n == 1:
        fn = lambda r: pp_zero_perp(comp, r, slot)
    else:
        fn = lambda r: pp_zero_perp_in_lambda(comp, r, slot)
    return _stage(comp, reg, "pp_zero_perp", fn)


def remove_component(comp: AnyonComputer, reg: AnyonRegister, slot: int, i: int) -> ProtocolOutcome:
    """Remove |i⟩ from the qudit: shift it to |0⟩, project onto |0⟩⊥, shift back."""
    comp.x(reg, slot, -i)
    res = project_out_zero(comp, reg, slot)
    comp.x(reg, slot, i)
    return res


def erase(comp: AnyonComputer, reg: AnyonRegister, slot: int, value: int = 0) -> ProtocolOutcome:
    """X-basis erasure accepting only outcome ``value``; the slot is consumed."""
    def fn(r):
        w0 = r.weight
        comp.z(r, slot, value)
        res = r.fuse_internal(slot)
        return outcome("erase", r, w0, res.success, res.kind)
    return _stage(comp, reg, "erase", fn)


def plus01(comp: AnyonComputer, reg: AnyonRegister) -> tuple[int, bool]:
    """(|0⟩+|1⟩)/√2 from |0̃⟩ by removing |2⟩, ..., |d-1⟩."""
    s = comp.tilde(reg, 0, "plus01")
    for i in range(2, comp.p):
        if not remove_component(comp, reg, s, i).success:
            return s, False
    return s, True


def psi_prime(comp: AnyonComputer, reg: AnyonRegister, s: int) -> tuple[int, bool]:
    """Append t with t = δ_{i,0} for the value i of ``s``."""
    t, ok = plus01(comp, reg)
    if not ok:
        return t, False
    for k in range(1, comp.p):
        comp.cx(reg, s, t, k)
        res = project_out_zero(comp, reg, t)
        comp.cx(reg, s, t, -k)
        if not res.success:
            return t, False
    return t, True


def phi_prime(comp: AnyonComputer, reg: AnyonRegister, u1: int, u2: int) -> tuple[int, bool]:
    """For u1, u2 ∈ {0,1} append v = u1·u2.

    Starting from t ∈ {0,1}, each sweep removes the states with
    t + k(u1 + u2) + c ≡ 0.  (k, c) = (1/2, -1) removes 001 and 110;
    (1, -2) removes 101 and 011.  The kept states are exactly t = u1·u2.
    """
    d = comp.p
    if d == 2:
        raise ProtocolError("the three-qudit extension needs an odd prime")
    t, ok = plus01(comp, reg)
    if not ok:
        return t, False
    for k, c in ((pow(2, -1, d), -1), (1, -2)):
        comp.cx(reg, u1, t, k)
        comp.cx(reg, u2, t, k)
        comp.x(reg, t, c)
        res = project_out_zero(comp, reg, t)
        comp.x(reg, t, -c)
        comp.cx(reg, u1, t, -k)
        comp.cx(reg, u2, t, -k)
        if not res.success:
            return t, False
    return t, True


def delta_gadget(comp: AnyonComputer, reg: AnyonRegister, s1: int, s2: int, n: int, m: int) -> tuple[int, bool]:
    """Append e = δ_{i,n} δ_{j,m} for the values i, j of s1, s2."""
    comp.x(reg, s1, -n)
    comp.x(reg, s2, -m)
    try:
        u1, ok = psi_prime(comp, reg, s1)
        if not ok:
            return u1, False
        u2, ok = psi_prime(comp, reg, s2)
        if not ok:
            return u2, False
        e, ok = phi_prime(comp, reg, u1, u2)
        if not ok:
            return e, False
        for u in (u1, u2):
            if not erase(comp, reg, u, 0).success:
                return e, False
        return e, True
    finally:
        comp.x(reg, s1, n)
        comp.x(reg, s2, m)


def prepare_m1(comp: AnyonComputer, reg: AnyonRegister) -> ProtocolOutcome:
    """(1/d) Σ |i⟩|j⟩|ij⟩ from |0̃⟩|0̃⟩|0⟩."""
    w0 = reg.weight
    d = comp.p
    s1, s2 = comp.tilde(reg, 0, "m1a"), comp.tilde(reg, 0, "m1b")
    s3 = comp.zero(reg, "m1c")
    gadgets = []
    for n in range(1, d):
        for m in range(1, d):
            e, ok = delta_gadget(comp, reg, s1, s2, n, m)
            if not ok:
                return outcome("make_magic", reg, w0, False, f"gadget{n}{m}")
            comp.cx(reg, e, s3, n * m)
            gadgets.append(e)
    for e in gadgets:
        if not erase(comp, reg, e, 0).success:
            return outcome("make_magic", reg, w0, False, "erase")
    return outcome("make_magic", reg, w0, True, "M1", data={"slots": [s1, s2, s3]})


def prepare_m2(comp: AnyonComputer, reg: AnyonRegister) -> ProtocolOutcome:
    """(1/d) Σ ω^{δ_{i,0}δ_{j,0}} |i⟩|j⟩ from |0̃⟩|0̃⟩."""
    w0 = reg.weight
    s1, s2 = comp.tilde(reg, 0, "m2a"), comp.tilde(reg, 0, "m2b")
    u1, ok = psi_prime(comp, reg, s1)
    if ok:
        u2, ok = psi_prime(comp, reg, s2)
    if ok:
        v, ok = phi_prime(comp, reg, u1, u2)
    if not ok:
        return outcome("make_magic", reg, w0, False, "gadget")
    for slot, val in ((u1, 0), (u2, 0), (v, 1)):
        if not erase(comp, reg, slot, val).success:
            return outcome("make_magic", reg, w0, False, "erase")
    return outcome("make_magic", reg, w0, True, "M2", data={"slots": [s1, s2]})


def make_magic(comp: AnyonComputer, kind: str = "M1", mode: str = "enumerate", seed: int = 0,
               restarts: int = 1000) -> ProtocolOutcome:
    """Prepare M1 or M2 on a fresh register.

    Enumeration returns the exact success probability and the (unique)
    success register.  Sampling restarts on failure.
    """
    prep = {"M1": prepare_m1, "M2": prepare_m2}.get(kind)
    if prep is None:
        raise ProtocolError("kind must be M1 or M2")
    if comp.p == 2:
        raise ProtocolError("qubit magic states use magic_p2")
    if mode == "enumerate":
        leaves = enumerate_branches(comp.register("enumerate"), lambda r: prep(comp, r), comp.cfg.budget)
        good = [lf for lf in leaves if lf.result is not None and getattr(lf.result, "success", False)]
        if not good:
            return ProtocolOutcome("make_magic", False, "no-success", 0.0)
        prob = sum(lf.probability for lf in good)
        res = good[0].result
        return ProtocolOutcome("make_magic", True, kind, prob, good[0].register, good[0].transcript,
                               data={**res.data, "success_branches": len(good),
                                     "total": sum(lf.probability for lf in leaves)})
    rng = np.random.default_rng(seed)
    for attempt in range(1, restarts + 1):
        reg = comp.register("sample", int(rng.integers(2 ** 63)))
        res = prep(comp, reg)
        if res.success:
            return ProtocolOutcome("make_magic", True, kind, 1 / attempt, reg, reg.transcript,
                                   data={**res.data, "attempts": attempt})
    return ProtocolOutcome("make_magic", False, "restarts", 0.0, data={"attempts": restarts})


# ------------------------------------------------------------------ phase walk

def phase_walk(comp: AnyonComputer, reg: AnyonRegister, pair: tuple[int, int],
               target_f: Callable[[int, int], int], mode: str = "frame", seed: int = 0,
               max_steps: int = 10 ** 7, m2_supply: Callable[[AnyonRegister], list] | None = None,
               cfg: ControllerConfig | None = None) -> ProtocolOutcome:
    """Apply |a,b⟩ -> ω^{target_f(a,b)} |a,b⟩ (up to a global phase) with M2 consumptions.

    Each M2 use multiplies the |α,β⟩ amplitude by ω for a uniformly random
    (α,β); the classical controller stops once the accumulated exponents equal
    the target up to a constant.  In "full" mode every step is simulated with
    an injected M2 and two Z measurements on the register.  In "frame" mode
    the walk is run classically (each step is the certified gadget) and its
    accumulated diagonal is applied to the register once at the end.
    """
    cfg = cfg or comp.cfg
    d = comp.p
    w0 = reg.weight
    target = np.array([[target_f(a, b) % d for b in range(d)] for a in range(d)])
    # diff = f - target mod d; the walk is done when every entry has the same residue
    diff = [int(-x) % d for x in target.flat]
    counts = [diff.count(r) for r in range(d)]
    rng = np.random.default_rng(seed)
    batch: list = []
    steps = 0
    sa, sb = pair
    while max(counts) < d * d:
        if steps >= max_steps:
            break
        steps += 1
        if mode == "frame":
            if not batch:
                batch = rng.integers(d, size=(4096, 2)).tolist()[::-1]
            al, be = batch.pop()
        elif mode == "full":
            m1, m2 = m2_supply(reg) if m2_supply else comp.qudits(reg, m2_state(d), 2, ["m2a", "m2b"])
            comp.cx(reg, sa, m1)
            comp.cx(reg, sb, m2)
            r1 = measure_basis(comp, reg, m1, "Z", cfg)
            r2 = measure_basis(comp, reg, m2, "Z", cfg) if r1.success else r1
            if not (r1.success and r2.success):
                return outcome("phase_walk", reg, w0, False, "inconclusive",
                               data={"steps": steps, "f": ((np.array(diff).reshape(d, d) + target) % d).tolist()})
            reg.remove_product_slot(m1)
            reg.remove_product_slot(m2)
            al, be = r1.data["outcome"], r2.data["outcome"]
        else:
            raise ProtocolError("mode must be frame or full")
        k = al * d + be
        counts[diff[k]] -= 1
        diff[k] = (diff[k] + 1) % d
        counts[diff[k]] += 1
    done = max(counts) == d * d
    f = (np.array(diff).reshape(d, d) + target) % d
    if mode == "frame" and steps:
        w = np.exp(2j * np.pi / d)
        fa = (f - f[0, 0]) % d
        reg.apply_diagonal([sa, sb], lambda x, y: w ** fa[comp.index[x], comp.index[y]]
                           if x in comp.index and y in comp.index else 1.0, op="phase_walk")
    return outcome("phase_walk", reg, w0, done, "success" if done else "max-steps",
                   data={"steps": steps, "f": f.tolist()})


# ------------------------------------------------------------------ Toffoli

def apply_toffoli(comp: AnyonComputer, reg: AnyonRegister, slots: tuple[int, int, int],
                  m1_supply: Callable[[AnyonRegister], list] | None = None, walk_mode: str = "frame",
                  walk_seed: int = 0, cfg: ControllerConfig | None = None) -> ProtocolOutcome:
    """Teleported Toffoli |a,b,c⟩ -> |a,b,ab+c⟩ through an M1 state.

    data["slots"] are the output qudits (the former M1 slots).
    """
    cfg = cfg or comp.cfg
    d = comp.p
    w0 = reg.weight
    x, y, z = slots
    anc = m1_supply(reg) if m1_supply else comp.qudits(reg, m1_state(d), 3, ["t1", "t2", "t3"])
    e1, e2, e3 = anc
    comp.cx(reg, e1, x, -1)
    comp.cx(reg, e2, y, -1)
    comp.cx(reg, z, e3, 1)
    meas = []
    for s, basis in ((x, "Z"), (y, "Z"), (z, "X")):
        res = _stage(comp, reg, f"measure_{basis}", lambda r, s=s, basis=basis: measure_basis(comp, r, s, basis, cfg))
        if not res.success:
            return outcome("toffoli", reg, w0, False, "inconclusive", data={"measured": meas})
        meas.append(res.data["outcome"])
    al, be, ga = meas
    for s in (x, y, z):
        reg.remove_product_slot(s)
    comp.x(reg, e1, al)
    comp.x(reg, e2, be)
    comp.x(reg, e3, -al * be)
    comp.cx(reg, e1, e3, be)
    comp.cx(reg, e2, e3, al)
    comp.z(reg, e3, -ga)
    walk = phase_walk(comp, reg, (e1, e2), lambda a, b: ga * a * b, mode=walk_mode, seed=walk_seed, cfg=cfg)
    if not walk.success:
        return outcome("toffoli", reg, w0, False, "walk:" + walk.label, data={"measured": meas})
    return outcome("toffoli", reg, w0, True, f"{al},{be},{ga}",
                   data={"slots": [e1, e2, e3], "measured": meas, "walk_steps": walk.data["steps"]})


# ------------------------------------------------------------------ qubits

def magic_p2(comp: AnyonComputer, reg: AnyonRegister, x_sequence: tuple | None = None,
             approximate: bool = False, rounds: int = 4) -> ProtocolOutcome:
    """Qubit M1 = (1/2) Σ |i,j,ij⟩ on three |0̃⟩ qubits.

    Exact route: for each x, a |b⟩ ancilla is conjugated by
    f = a^{1-i} (bab⁻¹)^{1-j} x^k, projected onto |0⟩⊥ inside Λ̃, and
    un-conjugated; the three x ∈ {a, bab⁻¹, abab⁻¹} remove 110, 011, 101
    and 001.  The approximate route uses f = a^i (bab⁻¹)^j x^{1-k} with
    vacuum-targeted charge fusions instead.
    """
    if comp.p != 2:
        raise ProtocolError("magic_p2 needs p = 2")
    G = comp.G
    a, b = comp.a, comp.b
    c1 = G.conj(b, a)
    w0 = reg.weight
    lam = comp.dec.lam.subgroup
    if not approximate and c1 not in lam:
        raise ProtocolError("b a b⁻¹ is not in Λ̃; use the approximate route")
    if x_sequence is None:
        x_sequence = (a, c1, G.mul[a, c1])
    data = [comp.tilde(reg, 0, n) for n in ("q1", "q2", "q3")]
    h = [comp.cx_word.substitute({0: ConjWord(Arg(k))}) for k in range(3)]
    bw, bi = ConjWord(Const(b)), ConjWord(Const(G.invert(b)))

    def conj_b(w):
        return bw * w * bi

    def pow_of(x, w):
        # x^k as a word in k's h = a^k (x is a, bab⁻¹ or their product)
        if x == a:
            return w
        if x == c1:
            return conj_b(w)
        if x == G.mul[a, c1]:
            return w * conj_b(w)
        raise ProtocolError("x must be a, bab⁻¹ or abab⁻¹")

    for x in x_sequence:
        if not approximate:
            f = (ConjWord(Const(a)) * ConjWord(Inv(h[0])) * ConjWord(Const(c1)) * ConjWord(Inv(conj_b(h[1])))
                 * pow_of(x, h[2]))
            anc = comp.zero(reg, "p2anc")
            reg.apply_conjugation(anc, f, data)
            res = _stage(comp, reg, "pp_zero_perp_in_lambda",
                         lambda r, anc=anc: pp_zero_perp_in_lambda(comp, r, anc))
            if not res.success:
                return outcome("magic_p2", reg, w0, False, res.label)
            reg.apply_conjugation(anc, f, data, inverse=True)
            reg.remove_product_slot(anc)
        else:
            from ..rep_theory import one_dim_reps
            R = comp.charge_pair()[0]
            vac = next(g for g in one_dim_reps(G) if g.trivial)
            f = h[0] * conj_b(h[1]) * ConjWord(Const(x)) * ConjWord(Inv(pow_of(x, h[2])))
            for _ in range(rounds):
                c = reg.add_vacuum_pair(R, "charge")
                reg.apply_charge_braiding(c, "left", f, data)
                res = reg.fuse_charge_pair(c, vac)
                if res.kind == "residue":
                    return outcome("magic_p2", reg, w0, False, "residue", approximate=True)
    return outcome("magic_p2", reg, w0, True, "M1", approximate=approximate, data={"slots": data})


def m2_from_m1(comp: AnyonComputer, reg: AnyonRegister, slots: list) -> ProtocolOutcome:
    """X-measure the third qubit of M1.

    Outcome 1 leaves (-1)^{ij} on the first two; X on both moves the phase to |0,0⟩.
    """
    w0 = reg.weight
    res = measure_basis(comp, reg, slots[2], "X")
    if not res.success:
        return outcome("m2_from_m1", reg, w0, False, "inconclusive")
    if res.data["outcome"] != 1:
        return outcome("m2_from_m1", reg, w0, False, f"outcome{res.data['outcome']}")
    reg.remove_product_slot(slots[2])
    comp.x(reg, slots[0])
    comp.x(reg, slots[1])
    return outcome("m2_from_m1", reg, w0, True, "M2", data={"slots": slots[:2]})
