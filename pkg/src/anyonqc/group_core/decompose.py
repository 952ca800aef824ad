"""The N ⊂ H ⊂ HK ⊂ G tower of a solvable, non-nilpotent group.

Everything downstream (controlled-X words, charge selection, the Λ̃
projections) runs on the quotient G̃ = G/N, where H̃ = H/N is elementary
abelian, identified with F_p^n through a fixed generating set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import fp
from .groups import Group, GroupError, prime_factors
from .structure import (Quotient, centralizer, classify, commutator_subgroup, generate, is_normal,
                        is_subgroup, normal_subgroups, quotient, series, sort_key,
                        subgroup_elements_of_order_power)
from .words import Arg, ConjWord, Const, eval_word


class DecompositionError(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    """An F_p-linear map of H̃ realized as a product of conjugates of its argument."""

    matrix: np.ndarray
    coefficients: tuple
    word: ConjWord

    def apply_vec(self, v, p: int) -> tuple:
        return tuple(int(x) for x in (self.matrix @ np.asarray(v)) % p)


@dataclass(frozen=True, eq=False)
class LambdaData:
    subgroup: frozenset
    a: int
    algebra_basis: tuple          # matrices ρ(g_j) spanning the algebra
    basis_elements: tuple         # the g_j themselves
    witnesses: tuple              # ConjWord per basis matrix
    separating: tuple             # AlgebraMaps whose common kernel is Λ̃


@dataclass(eq=False)
class Decomposition:
    G: Group
    H: frozenset
    N: frozenset
    quot: Quotient
    H_tilde: frozenset
    p: int
    n: int
    generators: tuple
    q: int
    HK: frozenset
    X: frozenset
    b: int
    S_tilde: frozenset
    coord: dict = field(repr=False)
    element_of: dict = field(repr=False)
    rho: dict = field(repr=False)
    period: int = 0
    depth: int = 0
    lam: LambdaData | None = None
    a_star: int = -1
    phi_set: tuple = ()

    @property
    def quotient(self) -> Group:
        return self.quot.group

    @property
    def Gt(self) -> Group:
        return self.quot.group

    @property
    def lambda_tilde(self) -> frozenset:
        return self.lam.subgroup

    @property
    def K_label(self) -> str:
        return f"Z{self.q}-Sylow"

    def vec(self, h: int) -> tuple:
        return self.coord[h]

    def elem(self, v) -> int:
        return self.element_of[tuple(int(x) % self.p for x in v)]

    def summary(self) -> dict:
        Gt = self.Gt
        return {
            "group": self.G.label, "order": self.G.order,
            "N": sorted(self.N), "N_order": len(self.N),
            "quotient_order": Gt.order,
            "H_order": len(self.H),
            "H_tilde": sorted(self.H_tilde), "p": self.p, "n": self.n,
            "generators": list(self.generators),
            "q": self.q, "HK_order": len(self.HK),
            "b": self.b, "b_name": Gt.name(self.b),
            "S_tilde_order": len(self.S_tilde),
            "lambda_tilde": sorted(self.lambda_tilde),
            "a_star": self.a_star, "phi_set_size": len(self.phi_set),
            "period": self.period,
        }


def _elementary_abelian(Gt: Group, Ht: frozenset):
    elems = sorted(Ht)
    if any(Gt.op(x, y) != Gt.op(y, x) for x in elems for y in elems):
        raise DecompositionError("H̃ is not abelian")
    orders = {Gt.element_order(x) for x in elems if x}
    if len(orders) != 1 or list(orders)[0] not in prime_factors(len(elems)):
        raise DecompositionError("H̃ is not elementary abelian")
    p = orders.pop()
    n = round(np.log(len(elems)) / np.log(p))
    if p ** n != len(elems):
        raise DecompositionError("H̃ order is not a prime power")
    gens: list[int] = []
    span = frozenset([0])
    for x in elems:
        if x not in span:
            gens.append(x)
            span = generate(Gt, gens)
    coord, element_of = {}, {}
    for v in itertools.product(range(p), repeat=n):
        x = 0
        for g, c in zip(gens, v):
            x = Gt.op(x, Gt.power(g, c))
        coord[x] = v
        element_of[v] = x
    return p, n, tuple(gens), coord, element_of


def decompose(G: Group) -> Decomposition:
    cls = classify(G)
    if not cls.solvable or cls.nilpotent:
        raise DecompositionError("decompose needs a solvable, non-nilpotent group")
    H = series(G, "exhaustive-commutator").limit
    candidates = [N for N in normal_subgroups(G) if N < H]
    maximal = [N for N in candidates if not any(N < M for M in candidates)]
    N = min(maximal, key=sort_key)
    quot = quotient(G, N)
    Gt = quot.group
    Ht = quot.image(H)
    p, n, gens, coord, element_of = _elementary_abelian(Gt, Ht)

    Qh = quotient(Gt, Ht)
    chosen = None
    for q in sorted(prime_factors(Qh.group.order)):
        Kq = subgroup_elements_of_order_power(Qh.group, Qh.group.elements(), q)
        if not is_subgroup(Qh.group, Kq):
            raise DecompositionError("G̃/H̃ is not nilpotent")
        HK = Qh.preimage(Kq)
        if commutator_subgroup(Gt, HK, Ht) == Ht:
            chosen = (q, HK)
            break
    if chosen is None:
        raise DecompositionError("no Sylow factor K with [H̃K, H̃] = H̃")
    q, HK = chosen
    X = centralizer(Gt, Ht, within=HK)
    b = None
    for g in sorted(HK):
        if all(Gt.comm(g, y) in X for y in HK) and {Gt.comm(g, h) for h in Ht} == set(Ht):
            b = g
            break
    if b is None:
        raise DecompositionError("no element b with [b, H̃] = H̃")
    S = centralizer(Gt, Ht)

    rho = {}
    for g in Gt.elements():
        cols = [coord[Gt.conj(g, a)] for a in gens]
        rho[g] = np.array(cols, dtype=np.int64).T % p

    # period of h -> [h, b] on H̃
    def psi(h):
        return Gt.comm(h, b)

    period = 1
    while any(_iterate(psi, h, period) != h for h in Ht):
        period += 1
    chain = series(Gt, "exhaustive-commutator").chain
    depth = next(k for k, S_ in enumerate(chain) if S_ == Ht)

    dec = Decomposition(G=G, H=H, N=N, quot=quot, H_tilde=Ht, p=p, n=n, generators=gens, q=q,
                        HK=HK, X=X, b=b, S_tilde=S, coord=coord, element_of=element_of, rho=rho,
                        period=period, depth=depth)
    a = min(x for x in Ht if x)
    dec.lam = compute_lambda(dec, a)
    dec.a_star = min(x for x in dec.lam.subgroup if x)
    if dec.a_star != a:
        dec.lam = compute_lambda(dec, dec.a_star)
    dec.phi_set = tuple(balanced_maps(dec, dec.lam.subgroup, dec.a_star))
    check_decomposition(dec)
    return dec


def _iterate(f, x, k):
    for _ in range(k):
        x = f(x)
    return x


def _witness(dec: Decomposition, elements, coeffs) -> ConjWord:
    Gt = dec.Gt
    toks = []
    for g, c in zip(elements, coeffs):
        for _ in range(int(c) % dec.p):
            toks += [Const(g), Arg(0), Const(Gt.invert(g))]
    return ConjWord(*toks)


def _algebra(dec: Decomposition):
    p = dec.p
    elems = list(dec.Gt.elements())
    mats = [dec.rho[g] for g in elems]
    idx = fp.span_basis([m.ravel() for m in mats], p)
    basis_elems = tuple(elems[k] for k in idx)
    basis = tuple(dec.rho[g] for g in basis_elems)
    # the span of a matrix group is closed under products; verify anyway
    B = np.array([m.ravel() for m in basis]).T
    for x in basis:
        for y in basis:
            if fp.solve(B, (x @ y).ravel() % p, p) is None:
                raise DecompositionError("conjugation algebra not closed under products")
    return basis_elems, basis


def compute_lambda(dec: Decomposition, a: int) -> LambdaData:
    if a == 0 or a not in dec.H_tilde:
        raise DecompositionError("a must be a non-trivial element of H̃")
    p, n = dec.p, dec.n
    basis_elems, basis = _algebra(dec)
    av = np.array(dec.vec(a))
    cols = np.array([(m @ av) % p for m in basis]).T  # n x m
    kill = fp.nullspace(cols, p)                      # coefficient vectors c with (Σ c_j ρ_j) a = 0
    separating = []
    rows = []
    for c in kill:
        M = sum(int(cj) * m for cj, m in zip(c, basis)) % p
        separating.append(AlgebraMap(M, tuple(int(x) for x in c), _witness(dec, basis_elems, c)))
        rows.append(M)
    if rows:
        lam_vecs = fp.nullspace(np.vstack(rows), p)
        span = [tuple(int(x) for x in (np.array(cc) @ lam_vecs) % p)
                for cc in itertools.product(range(p), repeat=len(lam_vecs))]
        sub = frozenset(dec.elem(v) for v in span)
    else:
        sub = frozenset(dec.H_tilde)
    witnesses = tuple(_witness(dec, basis_elems, [1 if i == j else 0 for i in range(len(basis))])
                      for j in range(len(basis)))
    return LambdaData(sub, a, basis, basis_elems, witnesses, tuple(separating))


def balanced_maps(dec: Decomposition, lam: frozenset, a: int, limit: int = 200_000) -> list[AlgebraMap]:
    """Every algebra element φ with φ(a) ∈ Λ̃ \\ {1}, checked for balance on Λ̃."""
    p = dec.p
    basis_elems, basis = dec.lam.basis_elements, dec.lam.algebra_basis
    if p ** len(basis) > limit:
        raise DecompositionError("algebra too large to enumerate")
    av = np.array(dec.vec(a))
    out = []
    for c in itertools.product(range(p), repeat=len(basis)):
        M = sum(cj * m for cj, m in zip(c, basis)) % p if any(c) else np.zeros((dec.n, dec.n), dtype=np.int64)
        img = dec.elem((M @ av) % p)
        if img != 0 and img in lam:
            out.append(AlgebraMap(M, tuple(c), _witness(dec, basis_elems, c)))
    if not out:
        raise DecompositionError("no balanced maps: the class of a does not generate H̃")
    check_balanced(dec, out, lam)
    return out


def check_balanced(dec: Decomposition, maps, lam: frozenset) -> None:
    nontriv = sorted(x for x in lam if x)
    counts = {l1: {l2: 0 for l2 in nontriv} for l1 in nontriv}
    for phi in maps:
        for l1 in nontriv:
            img = dec.elem(phi.apply_vec(dec.vec(l1), dec.p))
            if img == 0 or img not in lam:
                raise DecompositionError("a map in Φ does not preserve Λ̃ \\ {1}")
            counts[l1][img] += 1
    for l2 in nontriv:
        if len({counts[l1][l2] for l1 in nontriv}) != 1:
            raise DecompositionError("Φ is not balanced on Λ̃")


def check_decomposition(dec: Decomposition) -> None:
    Gt = dec.Gt
    Ht = dec.H_tilde
    if series(Gt, "exhaustive-commutator").limit != Ht:
        raise DecompositionError("H̃ is not the limit of the exhaustive-commutator series of G̃")
    if not is_normal(dec.G, dec.N) or not dec.N < dec.H:
        raise DecompositionError("N is not a proper normal subgroup of H")
    if sorted(Gt.comm(dec.b, h) for h in Ht) != sorted(Ht):
        raise DecompositionError("h -> [b, h] is not a bijection of H̃")
    if (Gt.order // len(dec.S_tilde)) % dec.p == 0:
        raise DecompositionError("p divides |G̃/S̃|")
    for x in Ht:
        if x and generate(Gt, {Gt.conj(g, x) for g in Gt.elements()}) != Ht:
            raise DecompositionError("H̃ has a proper non-trivial subgroup normal in G̃")
    if dec.a_star not in dec.lambda_tilde:
        raise DecompositionError("a_star not in Λ̃")
    for phi in dec.phi_set:
        for h in Ht:
            if eval_word(phi.word, [h], Gt) != dec.elem(phi.apply_vec(dec.vec(h), dec.p)):
                raise DecompositionError("witness word disagrees with its matrix")


def base_case_exponent(dec: Decomposition) -> int | None:
    """For n = 1: t with b a b^-1 = a^t, else None."""
    if dec.n != 1:
        return None
    a = dec.generators[0]
    img = dec.Gt.conj(dec.b, a)
    return dec.vec(img)[0]
