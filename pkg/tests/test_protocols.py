import itertools

import numpy as np
import pytest

from anyonqc.anyon_sim import TerminalResult, enumerate_branches
from anyonqc.group_core import ConjWord, Const, conjugacy_class_of, eval_word, fixture, semidirect_pq
from anyonqc.protocols import (AnyonComputer, ControllerConfig, ProtocolError, amplify_lambda, apply_toffoli,
                               bootstrap_one_ancillas, compile_controlled_x, compile_times_t_gate,
                               distill_tilde0, leakage_correct, m1_state, m2_from_m1, m2_state, magic_p2,
                               make_magic, measure_basis, phase_walk, pp_computational_subspace, pp_lambda,
                               pp_tilde0, pp_zero, pp_zero_perp, pp_zero_perp_in_lambda, remove_component,
                               residual_mass, zero_perp_bound)
from anyonqc.qudit_oracle import Gate, QuditState, basis_state, oracle_apply

S3, Z7Z3 = (3, 2, 2), (7, 3, 2)


@pytest.fixture(scope="module")
def comp():
    return AnyonComputer(semidirect_pq(S3))


def leaves_of(comp, fn, total=1.0):
    out = enumerate_branches(comp.register(), fn)
    assert sum(lf.probability for lf in out) == pytest.approx(total, abs=1e-9)
    return out


def ok_leaves(leaves, pick=lambda r: r):
    return [lf for lf in leaves
            if not isinstance(lf.result, TerminalResult) and lf.result is not None and pick(lf.result).success]


# ------------------------------------------------------------------ compiled words

@pytest.mark.parametrize("G", [semidirect_pq(S3), semidirect_pq(Z7Z3), semidirect_pq((13, 3, 3)),
                               fixture("a4"), fixture("z3z3_q8"), fixture("z3z3_d4"), fixture("z3z3_z3z2")],
                         ids=lambda G: G.label)
def test_controlled_x_word(G):
    comp = AnyonComputer(G)
    dec = comp.dec
    for h in dec.H_tilde:
        assert eval_word(comp.cx_word, [dec.Gt.conj(h, dec.b)], dec.Gt) == h
        assert eval_word(comp.ext_word, [dec.Gt.conj(h, dec.b)], dec.Gt) == h
    assert eval_word(comp.cx_word, [dec.b], dec.Gt) == 0
    assert all(eval_word(comp.ext_word, [g], dec.Gt) in dec.H_tilde for g in dec.Gt.elements())


def test_controlled_x_forms_agree_on_s3(comp):
    power = compile_controlled_x(comp.dec, "power")
    comm = compile_controlled_x(comp.dec, "commutator")
    for x in comp.basis:
        assert eval_word(power, [x], comp.G) == eval_word(comm, [x], comp.G)
    with pytest.raises(ProtocolError):
        compile_controlled_x(comp.dec, "nope")


def test_z7z3_power_exponent():
    assert pow((1 - 2) % 7, -1, 7) == 6
    comp = AnyonComputer(semidirect_pq(Z7Z3))
    assert sum(1 for _ in comp.cx_word.expand(comp.G)) > 0


@pytest.mark.parametrize("spec", [S3, Z7Z3, (13, 3, 3)])
def test_times_t_gate(spec):
    comp = AnyonComputer(semidirect_pq(spec))
    p, q, t = spec
    plan = compile_times_t_gate(semidirect_pq(spec) and comp.dec)
    for i in range(p):
        reg = comp.register()
        s = comp.ket(reg, i)
        out = comp.run_plan(reg, plan, {"data": s})["data"]
        assert reg.support(out) == {comp.basis[(i * t) % p]}
        reg = comp.register()
        s = comp.ket(reg, i)
        for _ in range(q):
            s = comp.run_plan(reg, plan, {"data": s})["data"]
        assert reg.support(s) == {comp.basis[i]}


@pytest.mark.parametrize("G,form", [(semidirect_pq(S3), "auto"), (fixture("a4"), "commutator")])
def test_gates_against_oracle(G, form):
    comp = AnyonComputer(G, cx_form=form)
    d = comp.p
    rng = np.random.default_rng(3)
    v = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
    v /= np.linalg.norm(v)
    reg = comp.register()
    s, t = comp.qudits(reg, v, 2)
    comp.cx(reg, s, t)
    comp.x(reg, t)
    comp.z(reg, s)
    ref = QuditState(d, 2, v)
    for g in (Gate.CX(0, 1), Gate.X(1), Gate.Z(0)):
        ref = oracle_apply(ref, g)
    assert comp.fidelity(reg, [s, t], ref) == pytest.approx(1, abs=1e-10)


# ------------------------------------------------------------------ projections

@pytest.mark.parametrize("amps,want", [([1, 0, 0], 1 / 3), ([0, 1, 0], 0.0), ([1, 1, 0], 1 / 6)])
def test_pp_zero(comp, amps, want):
    def run(reg):
        s = comp.qudit(reg, amps)
        return pp_zero(comp, reg, s), s
    good = ok_leaves(leaves_of(comp, run), lambda r: r[0])
    assert sum(lf.probability for lf in good) == pytest.approx(want, abs=1e-12)
    for lf in good:
        assert lf.register.support(lf.result[1]) == {comp.b}


@pytest.mark.parametrize("make,want", [("tilde0", 1.0), ("tilde1", 0.0), ("zero", 1 / 3)])
def test_pp_tilde0(comp, make, want):
    def run(reg):
        s = {"tilde0": lambda: comp.tilde(reg, 0), "tilde1": lambda: comp.tilde(reg, 1),
             "zero": lambda: comp.zero(reg)}[make]()
        return pp_tilde0(comp, reg, s)
    good = ok_leaves(leaves_of(comp, run))
    assert sum(lf.probability for lf in good) == pytest.approx(want, abs=1e-12)
    for lf in good:
        assert comp.fidelity(lf.register, [lf.result.data["slot"]], np.ones(3) / np.sqrt(3)) == pytest.approx(1)


def test_pp_zero_perp_contract(comp):
    d = comp.p
    rng = np.random.default_rng(5)
    bound = zero_perp_bound(comp)
    assert bound == pytest.approx(9 / 16)
    for trial in range(3):
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        if trial == 0:
            v[0] = 0
        v /= np.linalg.norm(v)
        target = v.copy()
        target[0] = 0

        def run(reg):
            s = comp.qudit(reg, v)
            return pp_zero_perp(comp, reg, s), s
        good = ok_leaves(leaves_of(comp, run), lambda r: r[0])
        for lf in good:
            f = comp.fidelity(lf.register, [lf.result[1]], target / np.linalg.norm(target))
            assert f == pytest.approx(1, abs=1e-9)
        if trial == 0:
            assert sum(lf.probability for lf in good) >= bound - 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_pp_zero_perp_sampled_z7z3(seed):
    # three charges per round make full enumeration too large here, so sample
    comp = AnyonComputer(semidirect_pq(Z7Z3))
    rng = np.random.default_rng(seed)
    v = rng.normal(size=7) + 1j * rng.normal(size=7)
    v /= np.linalg.norm(v)
    target = v.copy()
    target[0] = 0
    reg = comp.register("sample", seed)
    s = comp.qudit(reg, v)
    res = pp_zero_perp(comp, reg, s)
    if res.success:
        assert comp.fidelity(reg, [s], target / np.linalg.norm(target)) == pytest.approx(1, abs=1e-9)
    else:
        assert res.label in ("zero", "max-rounds", "residue")


def test_pp_zero_perp_on_zero_never_succeeds(comp):
    def run(reg):
        return pp_zero_perp(comp, reg, comp.zero(reg))
    leaves = leaves_of(comp, run)
    assert not ok_leaves(leaves)
    assert {lf.result.label for lf in leaves} <= {"zero", "max-rounds", "residue"}


def test_pp_zero_perp_two_sign_rounds(comp):
    # uniform input: the branch with two sign outcomes has probability 3/8 and leaves (|1⟩+|2⟩)/√2
    def run(reg):
        s = comp.qudit(reg, [1, 1, 1])
        return pp_zero_perp(comp, reg, s), s
    leaves = leaves_of(comp, run)
    sign = [g.label for g in comp.detectable_charges(comp.charge_pair()[0]) if not g.trivial][0]
    two = [lf for lf in leaves if lf.result[0].data.get("outcomes") == [sign, sign]]
    assert sum(lf.probability for lf in two) == pytest.approx(3 / 8)
    for lf in two:
        assert lf.result[0].success
        assert comp.fidelity(lf.register, [lf.result[1]], np.array([0, 1, 1]) / np.sqrt(2)) == pytest.approx(1)


def test_max_rounds_validated(comp):
    with pytest.raises(ProtocolError):
        ControllerConfig(max_rounds=1).rounds(3)


def orbit_of(comp):
    return sorted({comp.G.conj(h, comp.b) for h in comp.dec.H_tilde})


@pytest.mark.parametrize("name", ["z3z3_d4", "z3z3_q8"])
def test_pp_lambda_support(name):
    comp = AnyonComputer(fixture(name))
    orbit = orbit_of(comp)
    allowed = {comp.G.conj(h, comp.b) for h in comp.dec.lambda_tilde}

    def run(reg):
        s = reg.add_flux_state({g: 1 for g in orbit})
        return pp_lambda(comp, reg, s), s
    good = ok_leaves(leaves_of(comp, run), lambda r: r[0])
    assert good
    for lf in good:
        assert lf.register.support(lf.result[1]) <= allowed


def test_pp_lambda_trivial_on_s3(comp):
    assert comp.dec.lam.separating == () or len(comp.dec.lam.separating) == 0
    def run(reg):
        s = comp.qudit(reg, [1, 1, 1])
        return pp_lambda(comp, reg, s)
    leaves = leaves_of(comp, run)
    assert len(leaves) == 1 and leaves[0].result.success


def test_pp_zero_perp_in_lambda_balance():
    comp = AnyonComputer(semidirect_pq(Z7Z3))

    def run(reg):
        s = comp.qudit(reg, np.ones(7))
        return pp_zero_perp_in_lambda(comp, reg, s), s
    good = ok_leaves(leaves_of(comp, run), lambda r: r[0])
    assert good
    ref = np.ones(7)
    ref[0] = 0
    for lf in good:
        assert comp.fidelity(lf.register, [lf.result[1]], ref / np.linalg.norm(ref)) == pytest.approx(1, abs=1e-10)

    def run0(reg):
        return pp_zero_perp_in_lambda(comp, reg, comp.zero(reg))
    assert not ok_leaves(leaves_of(comp, run0))


def test_pp_computational_subspace_q8():
    comp = AnyonComputer(fixture("z3z3_q8"))
    orbit = orbit_of(comp)
    assert len(orbit) == 9

    def run(reg):
        s = reg.add_flux_state({g: 1 for g in orbit})
        return pp_computational_subspace(comp, reg, s), s
    good = ok_leaves(leaves_of(comp, run), lambda r: r[0])
    assert good
    for lf in good:
        assert comp.fidelity(lf.register, [lf.result[1]], np.ones(3) / np.sqrt(3)) == pytest.approx(1, abs=1e-9)


def test_amplify_lambda_is_approximate_and_monotone():
    comp = AnyonComputer(fixture("z3z3_q8"), ControllerConfig(tolerance=1e-6))
    orbit = orbit_of(comp)
    reg = comp.register("sample", 1)
    s = reg.add_flux_state({g: 1 for g in orbit})
    before = residual_mass(comp, reg, s)
    res = amplify_lambda(comp, reg, s)
    assert res.approximate
    if res.success:
        r = res.data["ratios"]
        assert all(y < x for x, y in zip(r, r[1:]))
        assert res.data["residual_mass"] < before


# ------------------------------------------------------------------ distillation, measurement

@pytest.mark.parametrize("G", [semidirect_pq(S3), fixture("a4")], ids=lambda G: G.label)
def test_distill_tilde0(G):
    comp = AnyonComputer(G)
    orbit = orbit_of(comp)
    ref = {(g,): 1 / np.sqrt(len(orbit)) for g in orbit}
    good = ok_leaves(leaves_of(comp, lambda r: distill_tilde0(comp, r)))
    assert sum(lf.probability for lf in good) == pytest.approx(1 / len(conjugacy_class_of(comp.G, comp.b)))
    for lf in good:
        assert lf.register.fidelity(ref, [lf.result.data["slot"]]) == pytest.approx(1, abs=1e-10)


def test_distill_wrong_sector(comp):
    other = conjugacy_class_of(comp.G, comp.a)
    assert not ok_leaves(leaves_of(comp, lambda r: distill_tilde0(comp, r, other)))


def test_measure_examples(comp):
    def z2(reg):
        return measure_basis(comp, reg, comp.ket(reg, 2), "Z")
    good = ok_leaves(leaves_of(comp, z2))
    assert {lf.result.data["outcome"] for lf in good} == {2}

    def x0(reg):
        return measure_basis(comp, reg, comp.tilde(reg, 0), "X")
    good = ok_leaves(leaves_of(comp, x0))
    assert {lf.result.data["outcome"] for lf in good} == {0}

    def sup(reg):
        s = comp.qudit(reg, [1, 1, 0])
        return measure_basis(comp, reg, s, "Z"), s
    good = ok_leaves(leaves_of(comp, sup), lambda r: r[0])
    p = {}
    for lf in good:
        j = lf.result[0].data["outcome"]
        p[j] = p.get(j, 0) + lf.probability
        assert lf.register.support(lf.result[1]) == {comp.basis[j]}
    tot = sum(p.values())
    assert set(p) == {0, 1} and p[0] / tot == pytest.approx(0.5) and p[1] / tot == pytest.approx(0.5)


@pytest.mark.parametrize("force", [(1, 1), (2, 1), (1, 2)])
def test_bootstrap_forced(comp, force):
    def run(reg):
        res = bootstrap_one_ancillas(comp, reg, force=force)
        if not res.success:
            return res, None
        # X-plan on |0⟩ and Z-plan on |0̃⟩ must act non-trivially
        t = comp.zero(reg)
        comp.cx(reg, res.data["one"], t)
        u = comp.tilde(reg, 0)
        comp.cx(reg, u, res.data["tilde_one"])
        return res, (t, u)
    # each forced environment outcome keeps its probability 1/3 in the path weight
    good = ok_leaves(leaves_of(comp, run, total=1 / 9), lambda r: r[0])
    assert good
    for lf in good:
        res, (t, u) = lf.result
        assert (res.data["x"], res.data["y"]) == force
        assert lf.register.support(t) == {comp.basis[force[0]]}
        w = np.exp(2j * np.pi / 3)
        tilde_m = np.array([w ** (-(-force[1]) * j % 3) for j in range(3)]) / np.sqrt(3)
        assert comp.fidelity(lf.register, [u], tilde_m) == pytest.approx(1)


def test_bootstrap_degenerate_and_natural(comp):
    leaves = leaves_of(comp, lambda r: bootstrap_one_ancillas(comp, r, force=(0, 1)), total=1 / 9)
    assert not ok_leaves(leaves)
    good = ok_leaves(leaves_of(comp, lambda r: bootstrap_one_ancillas(comp, r, natural_one=True, force=(1, 1)),
                                 total=1 / 3))
    assert good and all(lf.result.data["x"] == 1 for lf in good)


def test_leakage_correct_in_subspace(comp):
    psi = np.array([1, np.exp(2j * np.pi / 3), 0]) / np.sqrt(2)

    def run(reg):
        return leakage_correct(comp, reg, comp.qudit(reg, psi))
    good = ok_leaves(leaves_of(comp, run))
    assert len({lf.result.label for lf in good}) == 9
    for lf in good:
        assert comp.fidelity(lf.register, [lf.result.data["slot"]], psi) == pytest.approx(1, abs=1e-10)


def test_leakage_correct_leaked(comp):
    leaked = [g for g in comp.G.elements() if g not in comp.index]
    for g in leaked:
        def run(reg, g=g):
            return leakage_correct(comp, reg, reg.add_flux_ancilla(g))
        for lf in leaves_of(comp, run):
            if lf.register is not None and not isinstance(lf.result, TerminalResult):
                assert lf.register.support(lf.result.data["slot"]) <= set(comp.basis)


def test_leakage_mixed_input_uniform_outcomes(comp):
    # half of a Bell pair is maximally mixed; outcomes are uniform over the d² corrections
    def run(reg):
        s, partner = comp.qudits(reg, {(i, i): 1 for i in range(3)})
        return leakage_correct(comp, reg, s)
    good = ok_leaves(leaves_of(comp, run))
    p = {}
    for lf in good:
        p[lf.result.label] = p.get(lf.result.label, 0) + lf.probability
    vals = np.array(list(p.values()))
    assert len(p) == 9 and np.allclose(vals, vals[0])


# ------------------------------------------------------------------ magic states, Toffoli, phase walk

def test_remove_component(comp):
    def run(reg):
        s = comp.tilde(reg, 0)
        return remove_component(comp, reg, s, 2), s
    good = ok_leaves(leaves_of(comp, run), lambda r: r[0])
    assert good
    for lf in good:
        assert comp.fidelity(lf.register, [lf.result[1]], np.array([1, 1, 0]) / np.sqrt(2)) == pytest.approx(1)


def test_make_magic_m2(comp):
    o = make_magic(comp, "M2")
    assert o.success and o.probability > 0
    assert comp.fidelity(o.post, o.data["slots"], m2_state(3)) == pytest.approx(1, abs=1e-9)
    w = np.exp(2j * np.pi / 3)
    assert m2_state(3)[0] == pytest.approx(w / 3) and m2_state(3)[1] == pytest.approx(1 / 3)


def test_make_magic_rejects(comp):
    with pytest.raises(ProtocolError):
        make_magic(comp, "M3")
    with pytest.raises(ProtocolError):
        make_magic(AnyonComputer(fixture("a4")), "M1")


def test_m1_state_definition():
    v = m1_state(3)
    for i, j, k in itertools.product(range(3), repeat=3):
        assert v[i * 9 + j * 3 + k] == pytest.approx(1 / 3 if k == i * j % 3 else 0)


def test_phase_walk_zero_target(comp):
    reg = comp.register()
    s, t = comp.qudits(reg, np.ones(9) / 3, 2)
    res = phase_walk(comp, reg, (s, t), lambda a, b: 0)
    assert res.success and res.data["steps"] == 0


@pytest.mark.parametrize("gamma", [1, 2])
def test_phase_walk_frame(comp, gamma):
    reg = comp.register()
    s, t = comp.qudits(reg, np.ones(9) / 3, 2)
    res = phase_walk(comp, reg, (s, t), lambda a, b: gamma * a * b, seed=gamma)
    assert res.success and res.data["steps"] > 0
    w = np.exp(2j * np.pi / 3)
    ref = np.array([w ** (gamma * a * b) for a in range(3) for b in range(3)]) / 3
    assert comp.fidelity(reg, [s, t], ref) == pytest.approx(1, abs=1e-10)


def test_phase_walk_full_matches_frame(comp):
    reg = comp.register("sample", 4)
    s, t = comp.qudits(reg, np.ones(9) / 3, 2)
    res = phase_walk(comp, reg, (s, t), lambda a, b: a * b, mode="full", seed=4,
                     cfg=ControllerConfig(z_rounds=40))
    w = np.exp(2j * np.pi / 3)
    if res.success:
        ref = np.array([w ** (a * b) for a in range(3) for b in range(3)]) / 3
        assert comp.fidelity(reg, [s, t], ref) == pytest.approx(1, abs=1e-10)
    else:
        pytest.skip("a Z measurement was inconclusive on this seed")


def test_single_m2_step(comp):
    # one M2 use at (α,β) = (0,0) multiplies only the |0,0⟩ amplitude by ω
    w = np.exp(2j * np.pi / 3)

    def run(reg):
        s, t = comp.qudits(reg, np.ones(9) / 3, 2)
        m1, m2 = comp.qudits(reg, m2_state(3), 2)
        comp.cx(reg, s, m1)
        comp.cx(reg, t, m2)
        r1 = measure_basis(comp, reg, m1, "Z")
        r2 = measure_basis(comp, reg, m2, "Z") if r1.success else r1
        return r1, r2, s, t
    for lf in leaves_of(comp, run):
        r1, r2, s, t = lf.result
        if r1.success and r2.success and (r1.data["outcome"], r2.data["outcome"]) == (0, 0):
            ref = np.ones(9, dtype=complex) / 3
            ref[0] *= w
            assert comp.fidelity(lf.register, [s, t], ref) == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("abc", [(1, 1, 0), (0, 2, 1), (2, 2, 2)])
def test_toffoli_basis(comp, abc):
    a, b, c = abc

    def run(reg):
        return apply_toffoli(comp, reg, tuple(comp.qudits(reg, {abc: 1.0})))
    good = ok_leaves(leaves_of(comp, run))
    assert good
    ref = basis_state(3, [a, b, (a * b + c) % 3]).amplitudes
    for lf in good:
        assert comp.fidelity(lf.register, lf.result.data["slots"], ref) == pytest.approx(1, abs=1e-9)


def test_toffoli_superposition(comp):
    rng = np.random.default_rng(9)
    v = rng.normal(size=27) + 1j * rng.normal(size=27)
    v /= np.linalg.norm(v)

    def run(reg):
        return apply_toffoli(comp, reg, tuple(comp.qudits(reg, v, 3)))
    good = ok_leaves(leaves_of(comp, run))
    ref = oracle_apply(QuditState(3, 3, v), Gate.Toffoli(0, 1, 2)).amplitudes
    for lf in good:
        assert comp.fidelity(lf.register, lf.result.data["slots"], ref) == pytest.approx(1, abs=1e-9)


def test_magic_p2_and_m2_from_m1():
    comp = AnyonComputer(fixture("a4"))

    def run(reg):
        res = magic_p2(comp, reg)
        if not res.success:
            return res, None
        return res, m2_from_m1(comp, reg, res.data["slots"])
    leaves = leaves_of(comp, run)
    good = ok_leaves(leaves, lambda r: r[0])
    assert good
    for lf in good:
        res, m2 = lf.result
        assert not res.approximate
        if m2.success:
            assert comp.fidelity(lf.register, m2.data["slots"], m2_state(2)) == pytest.approx(1, abs=1e-9)


def test_magic_p2_requires_qubits(comp):
    with pytest.raises(ProtocolError):
        magic_p2(comp, comp.register())
