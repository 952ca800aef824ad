import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from anyonqc.group_core import (FIXTURES, Arg, ArgInv, Comm, ConjWord, Const, Group, GroupError,
                                SemidirectSpec, alternating, centralizer, classify, commutator_subgroup,
                                compute_lambda, conjugacy_class_of, conjugacy_classes, cyclic, decompose,
                                dihedral, direct_product, eval_word, fixture, generate, is_normal,
                                normal_closure, normal_subgroups, permutation_group, quaternion, quotient,
                                semidirect_pq, series, symmetric, zpn)
from anyonqc.group_core.decompose import check_balanced

SPECS = [(3, 2, 2), (5, 2, 4), (7, 2, 6), (7, 3, 2), (7, 3, 4), (13, 3, 3), (11, 5, 3)]


def all_groups():
    out = [cyclic(1), cyclic(2), cyclic(5), quaternion(), dihedral(4), symmetric(3), symmetric(4),
           alternating(4), alternating(5), zpn(2, 3), direct_product(cyclic(2), symmetric(3))]
    out += [semidirect_pq(s) for s in SPECS]
    out += [fixture(n) for n in FIXTURES]
    return out


def check_axioms(G: Group):
    m = G.mul
    n = G.order
    assert np.array_equal(m[m, :][:, :, None].shape and m[m[:, :, None], np.arange(n)], m[:, m])
    assert all(m[0, x] == x == m[x, 0] for x in range(n))
    assert all(m[x, G.invert(x)] == 0 == m[G.invert(x), x] for x in range(n))


def as_sympy(G: Group) -> PermutationGroup:
    """Left-regular representation, an independent oracle for series and flags."""
    return PermutationGroup([Permutation([int(G.op(g, x)) for x in range(G.order)]) for g in range(G.order)])


# ------------------------------------------------------------------ construction

@pytest.mark.parametrize("G", all_groups(), ids=lambda G: G.label)
def test_group_axioms(G):
    check_axioms(G)
    assert G.identity == 0


def test_known_orders():
    assert semidirect_pq((3, 2, 2)).order == 6
    assert cyclic(1).order == 1
    assert fixture("a4").order == 12
    assert alternating(5).order == 60
    assert quaternion().order == 8
    assert [fixture(n).order for n in FIXTURES] == [12, 54, 72, 72]


def test_s3_is_symmetric_group():
    # same class structure and element orders as the permutation S3
    G, S = semidirect_pq((3, 2, 2)), symmetric(3)
    assert sorted(len(c) for c in conjugacy_classes(G)) == sorted(len(c) for c in conjugacy_classes(S)) == [1, 2, 3]
    assert sorted(G.element_order(x) for x in G.elements()) == sorted(S.element_order(x) for x in S.elements())


@pytest.mark.parametrize("bad", [(3, 2, 1), (4, 2, 3), (7, 3, 3), (3, 3, 2), (5, 2, 2)])
def test_semidirect_spec_rejects(bad):
    with pytest.raises(GroupError):
        SemidirectSpec(*bad)


def test_bad_tables_rejected():
    with pytest.raises(GroupError):
        Group(np.array([[0, 1], [1, 1]]))
    with pytest.raises(GroupError):
        Group(np.array([[1, 0], [0, 1]]))


def test_json_round_trip():
    G = fixture("a4")
    H = Group.from_json(G.to_json())
    assert np.array_equal(G.mul, H.mul)


@given(st.sampled_from(SPECS))
def test_semidirect_relation(spec):
    p, q, t = spec
    G = semidirect_pq(spec)
    a, b = 1, p
    assert G.element_order(a) == p and G.element_order(b) == q
    assert G.conj(b, a) == G.power(a, t)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=3))
def test_direct_products_are_groups(ns):
    G = direct_product(*[cyclic(n) for n in ns])
    assert G.order == int(np.prod(ns))
    check_axioms(G)
    assert classify(G).abelian


# ------------------------------------------------------------------ classes and subgroups

def test_classes_examples(s3, z7z3):
    assert sorted(len(c) for c in conjugacy_classes(s3)) == [1, 2, 3]
    assert len(conjugacy_classes(cyclic(5))) == 5
    cls = {c.members for c in conjugacy_classes(z7z3)}
    assert frozenset({1, 2, 4}) in cls and frozenset({3, 5, 6}) in cls


def test_commutators_and_closures(s3, z7z3):
    assert commutator_subgroup(s3, s3.elements(), s3.elements()) == frozenset({0, 1, 2})
    assert commutator_subgroup(s3, s3.elements(), [0]) == frozenset({0})
    A4 = fixture("a4")
    assert len(commutator_subgroup(A4, A4.elements(), A4.elements())) == 4
    assert normal_closure(s3, 1) == frozenset({0, 1, 2})
    assert normal_closure(s3, 0) == frozenset({0})
    assert normal_closure(z7z3, 1) == frozenset(range(7))


def test_normal_subgroups(s3):
    assert [len(N) for N in normal_subgroups(s3)] == [1, 3, 6]
    assert [len(N) for N in normal_subgroups(cyclic(7))] == [1, 7]
    assert [len(N) for N in normal_subgroups(fixture("a4"))] == [1, 4, 12]
    for N in normal_subgroups(fixture("z3z3_z3z2")):
        assert is_normal(fixture("z3z3_z3z2"), N)


def test_quotients(s3):
    Q = quotient(s3, {0, 1, 2})
    assert Q.group.order == 2
    assert np.array_equal(quotient(s3, {0}).group.mul, s3.mul)
    G = fixture("z3z3_z3z2")
    Q = quotient(G, generate(G, [7]))
    assert Q.group.order == 18


def test_centralizer(s3):
    assert centralizer(s3, [1]) == frozenset({0, 1, 2})


def test_series_examples(s3):
    sc = series(s3, "exhaustive-commutator")
    assert [len(x) for x in sc.chain] == [6, 3] and len(sc.limit) == 3
    assert [len(x) for x in series(cyclic(5), "derived").chain] == [5, 1]
    A5 = alternating(5)
    assert len(series(A5, "derived").limit) == 60


@pytest.mark.parametrize("G", all_groups()[:-2], ids=lambda G: G.label)
def test_series_against_sympy(G):
    P = as_sympy(G)
    der = [len(x) for x in series(G, "derived").chain]
    lcs = [len(x) for x in series(G, "exhaustive-commutator").chain]
    assert der == _dedupe([H.order() for H in P.derived_series()])
    assert lcs == _dedupe([H.order() for H in P.lower_central_series()])
    c = classify(G)
    assert c.solvable == P.is_solvable
    assert c.nilpotent == P.is_nilpotent
    assert c.abelian == P.is_abelian


def _dedupe(orders):
    out = []
    for o in orders:
        if not out or out[-1] != o:
            out.append(o)
    return out


@pytest.mark.parametrize("G", all_groups(), ids=lambda G: G.label)
def test_series_limits_match_flags(G):
    c = classify(G)
    assert (len(series(G, "derived").limit) == 1) == c.solvable
    assert (len(series(G, "exhaustive-commutator").limit) == 1) == c.nilpotent
    assert not c.nilpotent or c.solvable
    for kind in ("derived", "exhaustive-commutator"):
        ch = series(G, kind)
        assert ch.chain[0] == frozenset(G.elements())
        assert all(x > y for x, y in zip(ch.chain, ch.chain[1:]))
        other = ch.limit if kind == "derived" else G.elements()
        assert commutator_subgroup(G, ch.limit, other) == ch.limit


def test_table_one():
    rows = {"Z2": cyclic(2), "Q": quaternion(), "S3": symmetric(3), "A5": alternating(5)}
    got = {k: classify(G).as_dict() for k, G in rows.items()}
    assert got["Z2"] == {"abelian": True, "nilpotent": True, "solvable": True, "power": "I"}
    assert got["Q"] == {"abelian": False, "nilpotent": True, "solvable": True, "power": "X"}
    assert got["S3"] == {"abelian": False, "nilpotent": False, "solvable": True, "power": "CX"}
    assert got["A5"]["power"] == "Toffoli" and not got["A5"]["solvable"]


def test_permutation_group_composition():
    G = permutation_group([(1, 0, 2), (0, 2, 1)])
    assert G.order == 6


# ------------------------------------------------------------------ words

def test_eval_word_basics(s3):
    G = s3
    w = ConjWord(Const(1), Arg(1), Const(3))
    for g in G.elements():
        assert eval_word(w, {1: g}, G) == G.prod(1, g, 3)
    b, binv = 3, G.invert(3)
    comm = ConjWord(Comm(ConjWord(Arg(0), Const(binv)), ConjWord(Const(b))))
    power = ConjWord(Arg(0), Const(binv)) ** 2
    for h in (0, 1, 2):
        flux = G.conj(h, b)
        assert eval_word(comm, [flux], G) == h
        assert eval_word(power, [flux], G) == h


words = st.recursive(
    st.lists(st.one_of(st.builds(Const, st.integers(0, 5)), st.builds(Arg, st.integers(0, 1)),
                       st.builds(ArgInv, st.integers(0, 1))), max_size=4).map(lambda f: ConjWord(*f)),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda xy: ConjWord(Comm(*xy))),
        st.tuples(inner, st.integers(-3, 3)).map(lambda wk: wk[0] ** wk[1]),
        inner.map(lambda w: w.inverse()),
        st.tuples(inner, inner).map(lambda xy: xy[0] * xy[1])),
    max_leaves=6)


@given(words, st.integers(0, 5), st.integers(0, 5))
def test_word_expand_and_inverse(w, x, y):
    G = semidirect_pq((3, 2, 2))
    v = eval_word(w, [x, y], G)
    assert eval_word(ConjWord(*w.expand(G)), [x, y], G) == v
    assert G.op(v, eval_word(w.inverse(), [x, y], G)) == 0


# ------------------------------------------------------------------ decomposition

def test_decompose_examples(s3):
    d = decompose(s3)
    assert len(d.N) == 1 and len(d.H_tilde) == 3 and (d.p, d.n, d.q) == (3, 1, 2)
    assert s3.element_order(d.b) == 2
    d = decompose(fixture("a4"))
    assert len(d.N) == 1 and (d.p, d.n, d.q) == (2, 2, 3)
    d = decompose(fixture("z3z3_z3z2"))
    assert d.N == generate(d.G, [7]) and len(d.H_tilde) == 3 and d.q == 2


@pytest.mark.parametrize("G", [semidirect_pq(s) for s in SPECS] + [fixture(n) for n in FIXTURES],
                         ids=lambda G: G.label)
def test_decomposition_invariants(G):
    d = decompose(G)
    Gt, Ht = d.Gt, d.H_tilde
    assert series(Gt, "exhaustive-commutator").limit == Ht
    comm = {h: Gt.comm(d.b, h) for h in Ht}
    assert sorted(comm.values()) == sorted(Ht)
    assert (Gt.order // len(d.S_tilde)) % d.p != 0
    for x in Ht - {0}:
        assert generate(Gt, {Gt.conj(g, x) for g in Gt.elements()}) == Ht
    assert d.a_star in d.lambda_tilde
    check_balanced(d, d.phi_set, d.lambda_tilde)
    for phi in d.phi_set:
        for h in Ht:
            assert eval_word(phi.word, [h], Gt) == d.elem(phi.apply_vec(d.vec(h), d.p))
    for M, w in zip(d.lam.algebra_basis, d.lam.witnesses):
        for h in Ht:
            assert eval_word(w, [h], Gt) == d.elem(tuple(int(x) for x in (M @ np.array(d.vec(h))) % d.p))


def test_decompose_rejects_bad_input():
    with pytest.raises(GroupError):
        decompose(quaternion())
    with pytest.raises(GroupError):
        decompose(alternating(5))


def lambda_oracle(d, a):
    """Close {h ↦ g h g⁻¹} under pointwise products and composition; intersect kernels of maps killing a."""
    Gt, Ht = d.Gt, sorted(d.H_tilde)
    pos = {h: k for k, h in enumerate(Ht)}
    gens = {tuple(Gt.conj(g, h) for h in Ht) for g in Gt.elements()}
    maps = set(gens)
    frontier = list(maps)
    while frontier:
        new = []
        for f in frontier:
            for g in list(maps):
                for cand in (tuple(Gt.op(x, y) for x, y in zip(f, g)),
                             tuple(f[pos[y]] for y in g), tuple(g[pos[y]] for y in f)):
                    if cand not in maps:
                        maps.add(cand)
                        new.append(cand)
        frontier = new
    lam = set(Ht)
    for f in maps:
        if f[pos[a]] == 0:
            lam &= {h for h in Ht if f[pos[h]] == 0}
    return frozenset(lam), len(maps)


@pytest.mark.parametrize("name", ["s3", "z7z3", "a4", "z3z3_z3z2", "z3z3_q8", "z3z3_d4"])
def test_lambda_against_brute_force(name):
    G = {"s3": semidirect_pq((3, 2, 2)), "z7z3": semidirect_pq((7, 3, 2))}.get(name) or fixture(name)
    d = decompose(G)
    for a in sorted(d.H_tilde - {0}):
        oracle, _ = lambda_oracle(d, a)
        assert compute_lambda(d, a).subgroup == oracle


def test_lambda_values():
    # n = 1: Λ̃ = H̃
    for s in SPECS:
        d = decompose(semidirect_pq(s))
        assert d.lambda_tilde == d.H_tilde
    # the quaternion and dihedral fixtures: the conjugation algebra is all of M_2(F_3), so Λ̃ = ⟨a⟩
    for n in ("z3z3_q8", "z3z3_d4"):
        d = decompose(fixture(n))
        _, size = lambda_oracle(d, d.a_star)
        assert size == 81
        assert len(d.lambda_tilde) == 3


def test_balanced_map_examples(s3, z7z3):
    d = decompose(s3)
    imgs = sorted(tuple(eval_word(phi.word, [h], d.Gt) for h in (1, 2)) for phi in d.phi_set)
    assert imgs == [(1, 2), (2, 1)]
    d = decompose(z7z3)
    imgs = {tuple(eval_word(phi.word, [h], d.Gt) for h in range(1, 7)) for phi in d.phi_set}
    assert imgs == {tuple((j * h) % 7 for h in range(1, 7)) for j in range(1, 7)}
    d = decompose(fixture("a4"))
    assert d.lambda_tilde == d.H_tilde and len(d.H_tilde) == 4 and len(d.phi_set) >= 1
