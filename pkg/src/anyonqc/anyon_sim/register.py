"""Sparse state-vector simulator for flux pairs and charge pairs.

A basis state of the register is a tuple with one entry per slot: the flux g
of a flux pair (g, g⁻¹), or the flattened index i·d + j of a charge pair's
matrix entry M_ij.  Charge amplitudes carry the 1/√d normalization, so the
vacuum pair |R(1)⟩_R has amplitude 1/√d on each diagonal entry.

Fusion results that the protocols discard are kept as *dead* slots: the
failure Kraus operator is applied and the slot becomes part of the
environment.  The register therefore stays a pure state and every reduced
quantity (fidelity, support) traces the dead slots out exactly.
"""

from __future__ import annotations

import copy
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from ..group_core import ConjWord, Group, conjugacy_class_of, eval_word
from ..rep_theory import Irrep, OneDimRep, gamma_multiplicity, invariant_vector

NORM_TOL = 1e-9
PRUNE = 1e-13


class SimError(RuntimeError):
    pass


class BudgetExceeded(SimError):
    pass


@dataclass
class Slot:
    sid: int
    kind: str                         # "flux" | "charge"
    cls: frozenset | None = None
    rep: Irrep | None = None
    name: str = ""
    dead: bool = False

    def describe(self) -> dict:
        out = {"sid": self.sid, "kind": self.kind, "name": self.name, "dead": self.dead}
        if self.kind == "flux":
            out["class"] = sorted(self.cls)
        else:
            out["rep"] = self.rep.label
        return out


@dataclass
class FusionOutcome:
    kind: str                         # vacuum | gamma | residue | no-vacuum
    probability: float
    label: str = ""

    @property
    def success(self) -> bool:
        return self.kind in ("vacuum", "gamma")


# ------------------------------------------------------------------ choosers

class SampleChooser:
    def __init__(self, seed: int | None = 0):
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def choose(self, probs: Sequence[float], terminal: Sequence[int] = ()) -> int:
        p = np.asarray(probs, dtype=float)
        p = np.where(p < 0, 0, p)
        return int(self.rng.choice(len(p), p=p / p.sum()))


class ReplayChooser:
    """Follows a fixed prefix of choices, then takes the first live option and records the rest."""

    def __init__(self, prefix: Sequence[int] = ()):
        self.prefix = list(prefix)
        self.taken: list[int] = []
        self.pending: list[list[int]] = []
        self.closed: list[tuple] = []     # terminal branches recorded without replay

    def choose(self, probs: Sequence[float], terminal: Sequence[int] = ()) -> int:
        live = [k for k, p in enumerate(probs) if p > PRUNE]
        if not live:
            raise SimError("no branch with non-zero probability")
        depth = len(self.taken)
        if depth < len(self.prefix):
            k = self.prefix[depth]
        else:
            open_ = [k for k in live if k not in terminal] or live
            k = open_[0]
            for alt in live:
                if alt == k:
                    continue
                if alt in terminal:
                    self.closed.append((self.taken + [alt], probs[alt]))
                else:
                    self.pending.append(self.taken + [alt])
        self.taken.append(k)
        return k


# ------------------------------------------------------------------ register

class AnyonRegister:
    def __init__(self, G: Group, chooser=None, vacuum_factor: float = 1.0):
        self.G = G
        self.slots: list[Slot] = []
        self.amps: dict[tuple, complex] = {(): 1.0 + 0j}
        self.chooser = chooser if chooser is not None else SampleChooser(0)
        self.vacuum_factor = vacuum_factor
        self.transcript: list[dict] = []
        self.weight = 1.0
        self.damaged = False
        self._next = 0
        self._closed: list[tuple] = []

    # -------------------------------------------------------------- basics
    @property
    def mode(self) -> str:
        return "enumerate" if isinstance(self.chooser, ReplayChooser) else "sample"

    def copy(self, chooser=None) -> "AnyonRegister":
        r = copy.copy(self)
        r.slots = [copy.copy(s) for s in self.slots]
        r.amps = dict(self.amps)
        r.transcript = list(self.transcript)
        r._closed = []
        if chooser is not None:
            r.chooser = chooser
        return r

    def pos(self, sid: int) -> int:
        for k, s in enumerate(self.slots):
            if s.sid == sid:
                return k
        raise SimError(f"no slot {sid}")

    def slot(self, sid: int) -> Slot:
        return self.slots[self.pos(sid)]

    def live_slots(self) -> list[int]:
        return [s.sid for s in self.slots if not s.dead]

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amps.values())))

    def check(self, tol: float = NORM_TOL) -> None:
        if abs(self.norm() - 1) > tol:
            raise SimError(f"register norm {self.norm()} != 1")
        for k, s in enumerate(self.slots):
            if s.kind == "flux":
                for key in self.amps:
                    if key[k] not in s.cls:
                        raise SimError(f"slot {s.sid} leaves its conjugacy class")

    def _new(self, slot: Slot) -> int:
        slot.sid = self._next
        self._next += 1
        self.slots.append(slot)
        return slot.sid

    def _tensor(self, local: Mapping[tuple, complex]) -> None:
        self.amps = {k + lk: a * la for k, a in self.amps.items() for lk, la in local.items()
                     if abs(a * la) > PRUNE}

    def _log(self, op: str, sid, outcome, prob: float, **extra) -> None:
        entry = {"op": op, "slot": sid, "outcome": outcome, "probability": float(prob)}
        entry.update(extra)
        self.transcript.append(entry)

    # -------------------------------------------------------------- creation
    def add_flux_ancilla(self, g: int, name: str = "") -> int:
        cls = conjugacy_class_of(self.G, g)
        sid = self._new(Slot(0, "flux", cls=cls, name=name))
        self._tensor({(g,): 1.0})
        return sid

    def add_flux_state(self, state: Mapping[int, complex], name: str = "") -> int:
        """A single flux slot in the superposition Σ state[g] |g⟩ (one class)."""
        elems = [g for g, a in state.items() if abs(a) > PRUNE]
        cls = conjugacy_class_of(self.G, elems[0])
        if any(g not in cls for g in elems):
            raise SimError("superposition across conjugacy classes is not allowed")
        nrm = np.sqrt(sum(abs(state[g]) ** 2 for g in elems))
        sid = self._new(Slot(0, "flux", cls=cls, name=name))
        self._tensor({(g,): state[g] / nrm for g in elems})
        return sid

    def add_joint_state(self, state: Mapping[tuple, complex], names: Sequence[str] = ()) -> list[int]:
        """Several new flux slots in a joint (possibly entangled) state."""
        keys = [k for k, a in state.items() if abs(a) > PRUNE]
        width = len(keys[0])
        nrm = np.sqrt(sum(abs(state[k]) ** 2 for k in keys))
        sids = []
        for c in range(width):
            cls = conjugacy_class_of(self.G, keys[0][c])
            if any(k[c] not in cls for k in keys):
                raise SimError("superposition across conjugacy classes is not allowed")
            sids.append(self._new(Slot(0, "flux", cls=cls, name=names[c] if c < len(names) else "")))
        self._tensor({k: state[k] / nrm for k in keys})
        return sids

    def add_vacuum_pair(self, sector, name: str = "") -> int:
        """``sector`` is a conjugacy class (magnetic) or an Irrep (electric)."""
        if isinstance(sector, Irrep):
            d = sector.dim
            sid = self._new(Slot(0, "charge", rep=sector, name=name))
            self._tensor({(i * d + i,): 1 / np.sqrt(d) for i in range(d)})
            return sid
        members = getattr(sector, "members", sector)
        members = frozenset(members)
        if not members or conjugacy_class_of(self.G, min(members)) != members:
            raise SimError("unknown sector")
        sid = self._new(Slot(0, "flux", cls=members, name=name))
        self._tensor({(g,): 1 / np.sqrt(len(members)) for g in sorted(members)})
        return sid

    # -------------------------------------------------------------- braiding
    def _word_values(self, word: ConjWord, src_pos: Sequence[int]):
        cache: dict = {}
        G = self.G

        def f(key):
            args = tuple(key[p] for p in src_pos)
            v = cache.get(args)
            if v is None:
                v = cache[args] = eval_word(word, args, G)
            return v
        return f

    def _check_arity(self, word: ConjWord, sources) -> None:
        if word.arity > len(sources):
            raise SimError(f"word needs {word.arity} sources, got {len(sources)}")

    def apply_conjugation(self, target: int, word: ConjWord, sources: Sequence[int] = (),
                          inverse: bool = False) -> None:
        """|g_s, g_t⟩ -> |g_s, f g_t f⁻¹⟩ with f = word(g_s)."""
        if target in sources:
            raise SimError("target cannot be one of the sources")
        self._check_arity(word, sources)
        t = self.pos(target)
        if self.slots[t].kind != "flux":
            raise SimError("conjugation target must be a flux pair")
        src = [self.pos(s) for s in sources]
        f = self._word_values(word, src)
        G = self.G
        out: dict = {}
        for key, a in self.amps.items():
            x = f(key)
            if inverse:
                x = G.invert(x)
            new = key[:t] + (G.conj(x, key[t]),) + key[t + 1:]
            out[new] = out.get(new, 0) + a
        self.amps = out

    def apply_charge_braiding(self, charge: int, side: str, word: ConjWord,
                              sources: Sequence[int] = ()) -> None:
        """left: M -> R(f) M;  right: M -> M R(f⁻¹)."""
        if side not in ("left", "right"):
            raise SimError("side must be left or right")
        self._check_arity(word, sources)
        c = self.pos(charge)
        slot = self.slots[c]
        if slot.kind != "charge":
            raise SimError("not a charge slot")
        R, d = slot.rep, slot.rep.dim
        src = [self.pos(s) for s in sources]
        f = self._word_values(word, src)
        out: dict = {}
        for key, a in self.amps.items():
            x = f(key)
            i, j = divmod(key[c], d)
            if side == "left":
                col = R(x)[:, i]
                for k in range(d):
                    if abs(col[k]) > PRUNE:
                        new = key[:c] + (k * d + j,) + key[c + 1:]
                        out[new] = out.get(new, 0) + col[k] * a
            else:
                row = R(self.G.invert(x))[j, :]
                for k in range(d):
                    if abs(row[k]) > PRUNE:
                        new = key[:c] + (i * d + k,) + key[c + 1:]
                        out[new] = out.get(new, 0) + row[k] * a
        self.amps = {k: v for k, v in out.items() if abs(v) > PRUNE}

    def swap_slots(self, s1: int, s2: int) -> None:
        i, j = self.pos(s1), self.pos(s2)
        self.slots[i], self.slots[j] = self.slots[j], self.slots[i]

        def sw(key):
            key = list(key)
            key[i], key[j] = key[j], key[i]
            return tuple(key)
        self.amps = {sw(k): a for k, a in self.amps.items()}

    # -------------------------------------------------------------- branching
    def branch(self, op: str, sid, options: list, terminal: Sequence[int] = ()) -> int:
        """options: [(outcome label, probability, thunk)]; the chooser picks one.

        Options listed in ``terminal`` end the protocol; branch enumeration
        records them as leaves without replaying them.
        """
        probs = [o[1] for o in options]
        total = sum(probs)
        if abs(total - 1) > 1e-8:
            raise SimError(f"{op}: branch probabilities sum to {total}")
        closed = getattr(self.chooser, "closed", None)
        n_closed = len(closed) if closed is not None else 0
        k = self.chooser.choose(probs, terminal)
        if closed is not None:
            for path, p in closed[n_closed:]:
                self._closed.append((path, p, self.weight, options[path[-1]][0]))
        label, prob, thunk = options[k]
        thunk()
        self.weight *= prob
        self._log(op, sid, label, prob)
        return k

    def _renorm(self, amps: dict, prob: float) -> dict:
        s = 1 / np.sqrt(prob)
        return {k: a * s for k, a in amps.items() if abs(a) > PRUNE}

    def _remove_pos(self, amps: dict, p: int) -> dict:
        out: dict = {}
        for k, a in amps.items():
            nk = k[:p] + k[p + 1:]
            if nk in out:
                raise SimError("removing a slot that is not in a definite state")
            out[nk] = a
        return out

    def fuse_with_flux_ancilla(self, sid: int, h: int, replace: bool = True) -> FusionOutcome:
        """Fuse the pair with an ancilla of flux h⁻¹; vacuum only if the pair carried h."""
        p = self.pos(sid)
        slot = self.slots[p]
        if slot.kind != "flux" or slot.dead:
            raise SimError("fuse_with_flux_ancilla needs a live flux pair")
        c = len(conjugacy_class_of(self.G, h))
        e_vac = self.vacuum_factor / c
        mass_h = sum(abs(a) ** 2 for k, a in self.amps.items() if k[p] == h)
        p_vac = mass_h * e_vac
        outcome = FusionOutcome("vacuum", p_vac)

        def vac():
            self.amps = self._renorm({k: a for k, a in self.amps.items() if k[p] == h}, mass_h)
            if not replace:
                self.amps = self._remove_pos(self.amps, p)
                del self.slots[p]

        def fail():
            s = np.sqrt(1 - e_vac)
            amps = {k: (a * s if k[p] == h else a) for k, a in self.amps.items()}
            self.amps = self._renorm(amps, 1 - p_vac)
            slot.dead = True
            outcome.kind = "no-vacuum"
            outcome.probability = 1 - p_vac

        self.branch("fuse_flux", sid, [("vacuum", p_vac, vac), ("no-vacuum", 1 - p_vac, fail)])
        return outcome

    def fuse_internal(self, sid: int) -> FusionOutcome:
        """Fuse the two members of the pair; vacuum amplitude ⟨Vac(C)|ψ⟩."""
        p = self.pos(sid)
        slot = self.slots[p]
        if slot.kind != "flux" or slot.dead:
            raise SimError("fuse_internal needs a live flux pair")
        nC = len(slot.cls)
        coef: dict = {}
        for k, a in self.amps.items():
            rest = k[:p] + k[p + 1:]
            coef[rest] = coef.get(rest, 0) + a / np.sqrt(nC)
        mass = sum(abs(c) ** 2 for c in coef.values())
        p_vac = mass * self.vacuum_factor
        outcome = FusionOutcome("vacuum", p_vac)

        def vac():
            self.amps = self._renorm(coef, mass)
            del self.slots[p]

        def fail():
            # Kraus sqrt(1 - f |vac><vac|); f = vacuum_factor
            # the vacuum vector spans the whole class, so keys outside the support appear too
            s = 1 - np.sqrt(1 - self.vacuum_factor)
            amps = dict(self.amps)
            for rest, c in coef.items():
                for g in sorted(slot.cls):
                    k = rest[:p] + (g,) + rest[p:]
                    amps[k] = amps.get(k, 0) - s * c / np.sqrt(nC)
            self.amps = self._renorm({k: a for k, a in amps.items() if abs(a) > PRUNE}, 1 - p_vac)
            slot.dead = True
            outcome.kind = "no-vacuum"
            outcome.probability = 1 - p_vac

        self.branch("fuse_internal", sid, [("vacuum", p_vac, vac), ("no-vacuum", 1 - p_vac, fail)])
        return outcome

    def _gamma_coefficients(self, p: int, R: Irrep, gamma: OneDimRep):
        d = R.dim
        V = invariant_vector(self.G, R, gamma).reshape(-1) / np.sqrt(d)
        coef: dict = {}
        for k, a in self.amps.items():
            rest = k[:p] + k[p + 1:]
            coef[rest] = coef.get(rest, 0) + np.conj(V[k[p]]) * a
        return V, coef

    def fuse_charge_pair(self, sid: int, gamma: OneDimRep | Sequence[OneDimRep]) -> FusionOutcome:
        """Fuse a charge pair, detecting the listed one-dimensional charges.

        With a single γ the outcomes are "γ" and "residue"; with a list, one
        outcome per listed γ plus the residue.
        """
        p = self.pos(sid)
        slot = self.slots[p]
        if slot.kind != "charge" or slot.dead:
            raise SimError("fuse_charge_pair needs a live charge pair")
        R = slot.rep
        gammas = [gamma] if isinstance(gamma, OneDimRep) else list(gamma)
        for g in gammas:
            if gamma_multiplicity(self.G, R, g) > 1:
                raise SimError(f"{g.label} has multiplicity > 1 in {R.label} ⊗ {R.label}*")
        parts = []
        for g in gammas:
            if gamma_multiplicity(self.G, R, g) == 0:
                continue
            V, coef = self._gamma_coefficients(p, R, g)
            parts.append((g, V, coef, sum(abs(c) ** 2 for c in coef.values())))
        outcome = FusionOutcome("residue", 0.0)
        options = []
        for g, V, coef, mass in parts:
            def take(g=g, coef=coef, mass=mass):
                self.amps = self._renorm(coef, mass)
                del self.slots[p]
                outcome.kind = "gamma" if not g.trivial else "vacuum"
                outcome.label = g.label
                outcome.probability = mass
            options.append((g.label, mass, take))
        p_res = max(0.0, 1 - sum(o[1] for o in options))

        def residue():
            amps = dict(self.amps)
            for g, V, coef, mass in parts:
                for rest, c in coef.items():
                    for idx in range(len(V)):
                        if abs(V[idx]) > PRUNE:
                            k = rest[:p] + (idx,) + rest[p:]
                            amps[k] = amps.get(k, 0) - c * V[idx]
            self.amps = self._renorm({k: a for k, a in amps.items() if abs(a) > 1e-12}, p_res)
            slot.dead = True
            outcome.kind = "residue"
            outcome.label = "residue"
            outcome.probability = p_res
        options.append(("residue", p_res, residue))
        self.branch("fuse_charge", sid, options)
        return outcome

    def environment_projection(self, sid: int, vectors: Sequence[Mapping[int, complex]],
                               labels: Sequence, force=None):
        """The environment measures a flux slot in an orthonormal basis; the slot is removed.

        ``force`` selects the outcome instead of the chooser (the path weight
        still records its probability).  Returns the outcome label.
        """
        p = self.pos(sid)
        options = []
        for lab, vec in zip(labels, vectors):
            coef: dict = {}
            for k, a in self.amps.items():
                c = vec.get(k[p])
                if c is not None:
                    rest = k[:p] + k[p + 1:]
                    coef[rest] = coef.get(rest, 0) + np.conj(c) * a
            mass = sum(abs(c) ** 2 for c in coef.values())

            def take(coef=coef, mass=mass):
                self.amps = self._renorm(coef, mass)
                del self.slots[p]
            options.append((lab, mass, take))
        if force is not None:
            k = list(labels).index(force)
            lab, prob, thunk = options[k]
            if prob <= PRUNE:
                raise SimError(f"forced outcome {force!r} has probability 0")
            thunk()
            self.weight *= prob
            self._log("environment", sid, lab, prob, forced=True)
            return lab
        return labels[self.branch("environment", sid, options)]

    def apply_diagonal(self, sids: Sequence[int], phase: Callable[..., complex], op: str = "diagonal") -> None:
        """Multiply each basis state by phase(values of ``sids``); used for certified gadget macros."""
        ps = [self.pos(s) for s in sids]
        cache: dict = {}
        out = {}
        for k, a in self.amps.items():
            key = tuple(k[p] for p in ps)
            v = cache.get(key)
            if v is None:
                v = cache[key] = phase(*key)
            out[k] = a * v
        self.amps = out
        self.transcript.append({"op": op, "slot": list(sids), "outcome": None, "probability": 1.0})

    # -------------------------------------------------------------- structure
    def local_state(self, sid: int) -> dict:
        """State of a slot if the register factorizes across it, else raise."""
        p = self.pos(sid)
        rows: dict = {}
        for k, a in self.amps.items():
            rows.setdefault(k[:p] + k[p + 1:], {})[k[p]] = a
        rests = list(rows)
        vals = sorted({v for r in rows.values() for v in r})
        M = np.array([[rows[r].get(v, 0) for v in vals] for r in rests])
        u, s, vh = np.linalg.svd(M, full_matrices=False)
        if len(s) > 1 and s[1] > 1e-9:
            raise SimError(f"slot {sid} is entangled with the rest of the register")
        vec = vh[0]
        k = int(np.argmax(np.abs(vec)))
        vec = vec * abs(vec[k]) / vec[k]
        return {v: complex(c) for v, c in zip(vals, vec) if abs(c) > 1e-12}

    def remove_product_slot(self, sid: int) -> dict:
        """Split off a slot that is in a product state with the rest; returns its state."""
        st = self.local_state(sid)
        p = self.pos(sid)
        ref, ref_amp = max(st.items(), key=lambda kv: abs(kv[1]))
        out = {}
        for k, a in self.amps.items():
            if k[p] == ref:
                out[k[:p] + k[p + 1:]] = a / ref_amp
        n = np.sqrt(sum(abs(a) ** 2 for a in out.values()))
        self.amps = {k: a / n for k, a in out.items()}
        del self.slots[p]
        return st

    def drop_definite_slots(self, dead_only: bool = False) -> None:
        """Remove every slot whose value is the same across the whole support."""
        for s in list(self.slots):
            if dead_only and not s.dead:
                continue
            p = self.pos(s.sid)
            vals = {k[p] for k in self.amps}
            if len(vals) == 1:
                self.amps = self._remove_pos(self.amps, p)
                del self.slots[p]

    def drop_dead_product_slots(self) -> None:
        for s in [s for s in self.slots if s.dead]:
            try:
                self.remove_product_slot(s.sid)
            except SimError:
                pass

    def env_components(self, order: Sequence[int] | None = None) -> dict:
        """{dead-slot values: {live-slot tuple (in ``order``): amplitude}}."""
        order = list(order) if order is not None else self.live_slots()
        lp = [self.pos(s) for s in order]
        dp = [k for k, s in enumerate(self.slots) if s.dead]
        covered = set(lp) | set(dp)
        extra = [k for k, s in enumerate(self.slots) if k not in covered]
        dp = dp + extra     # live slots outside ``order`` are traced out too
        out: dict = {}
        for k, a in self.amps.items():
            env = tuple(k[p] for p in dp)
            out.setdefault(env, {})[tuple(k[p] for p in lp)] = a
        return out

    def fidelity(self, reference: Mapping[tuple, complex], order: Sequence[int] | None = None) -> float:
        """⟨ref|ρ|ref⟩ for the reduced state on ``order`` (default: all live slots)."""
        nrm = np.sqrt(sum(abs(v) ** 2 for v in reference.values()))
        if nrm == 0:
            raise SimError("reference state is zero")
        total = 0.0
        width = len(order) if order is not None else len(self.live_slots())
        if any(len(k) != width for k in reference):
            raise SimError("reference shape does not match the register")
        for comp in self.env_components(order).values():
            ov = sum(np.conj(v) * comp.get(k, 0) for k, v in reference.items())
            total += abs(ov) ** 2
        return float(total / nrm ** 2)

    def support(self, sid: int) -> set:
        p = self.pos(sid)
        return {k[p] for k in self.amps}

    def to_json(self) -> dict:
        return {"group": self.G.label,
                "slots": [s.describe() for s in self.slots],
                "amplitudes": [{"basis": list(map(int, k)), "re": float(a.real), "im": float(a.imag)}
                               for k, a in sorted(self.amps.items())],
                "transcript": self.transcript, "weight": self.weight}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# ------------------------------------------------------------------ enumeration

@dataclass
class Branch:
    transcript: list
    probability: float
    register: AnyonRegister | None
    result: object = None

    @property
    def terminal(self) -> bool:
        return self.register is None


def enumerate_branches(reg: AnyonRegister, protocol: Callable[[AnyonRegister], object],
                       budget: int = 100_000) -> list[Branch]:
    """Depth-first expansion of every outcome of ``protocol`` by replay."""
    stack: list[list[int]] = [[]]
    leaves = []
    runs = 0
    while stack:
        prefix = stack.pop()
        runs += 1
        if runs > budget:
            raise BudgetExceeded(f"more than {budget} branches")
        chooser = ReplayChooser(prefix)
        r = reg.copy(chooser=chooser)
        r.weight = reg.weight
        result = protocol(r)
        leaves.append(Branch(r.transcript[len(reg.transcript):], r.weight / reg.weight if reg.weight else 0.0,
                             r, result))
        for path, prob, weight, label in r._closed:
            rel = weight / reg.weight if reg.weight else 0.0
            leaves.append(Branch([{"op": "terminal", "outcome": label, "path": path}], rel * prob, None,
                                 TerminalResult(label)))
        stack.extend(reversed(chooser.pending))
    return leaves


@dataclass
class TerminalResult:
    label: str
    success: bool = False


def choose_branch(reg: AnyonRegister, op: str, branches: Sequence[tuple],
                  terminal: Sequence[int] = ()) -> int:
    """Adopt one of several precomputed (label, probability, register) outcomes."""
    def adopt(r):
        def f():
            reg.slots = [copy.copy(s) for s in r.slots]
            reg.amps = dict(r.amps)
            reg._next = max(reg._next, r._next)
        return f
    return reg.branch(op, None, [(lab, p, adopt(r)) for lab, p, r in branches], terminal)
