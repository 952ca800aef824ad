"""Finite groups as dense multiplication tables.

Every group built here has the identity at index 0.  Subgroups are passed
around as frozensets of element indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

MAX_ORDER = 512


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Group:
    """A finite group given by its Cayley table."""

    mul: np.ndarray
    label: str = "G"
    names: tuple[str, ...] | None = None
    generators: tuple[int, ...] = ()
    inv: np.ndarray = field(init=False)
    _m: list = field(init=False, repr=False)
    _i: list = field(init=False, repr=False)

    def __post_init__(self):
        mul = np.asarray(self.mul, dtype=np.int64)
        n = mul.shape[0]
        if mul.shape != (n, n) or n == 0:
            raise GroupError("multiplication table must be square and non-empty")
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("table entries out of range")
        if not (np.array_equal(mul[0], np.arange(n)) and np.array_equal(mul[:, 0], np.arange(n))):
            raise GroupError("index 0 is not a two-sided identity")
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(mul == 0)
        inv[rows] = cols
        if (inv < 0).any() or not np.array_equal(mul[inv, np.arange(n)], np.zeros(n, dtype=np.int64)):
            raise GroupError("some element has no two-sided inverse")
        mul.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "inv", inv)
        object.__setattr__(self, "_m", mul.tolist())
        object.__setattr__(self, "_i", inv.tolist())

    @property
    def order(self) -> int:
        return len(self._i)

    @property
    def identity(self) -> int:
        return 0

    def __len__(self):
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def op(self, x: int, y: int) -> int:
        return self._m[x][y]

    def prod(self, *xs: int) -> int:
        r = 0
        for x in xs:
            r = self._m[r][x]
        return r

    def invert(self, x: int) -> int:
        return self._i[x]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self._m[self._m[g][x]][self._i[g]]

    def comm(self, x: int, y: int) -> int:
        """[x, y] = x y x^-1 y^-1"""
        m, i = self._m, self._i
        return m[m[m[x][y]][i[x]]][i[y]]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self._i[x], -k
        r = 0
        for _ in range(k):
            r = self._m[r][x]
        return r

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self._m[y][x]
            k += 1
        return k

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def check_associative(self, chunk: int = 64) -> bool:
        m = self.mul
        n = self.order
        for start in range(0, n, chunk):
            a = np.arange(start, min(n, start + chunk))
            left = m[m[a]]  # (ab)c indexed [a, b, c]
            right = m[a[:, None, None], m[None, :, :]]
            if not np.array_equal(left, right):
                return False
        return True

    def to_json(self) -> dict:
        return {"label": self.label, "order": self.order, "mul": self.mul.tolist()}

    @classmethod
    def from_json(cls, data: Mapping) -> "Group":
        g = cls(np.array(data["mul"]), label=data.get("label", "G"))
        if g.order != data.get("order", g.order):
            raise GroupError("order field disagrees with table")
        return g


def from_elements(elements: Sequence[Hashable], op: Callable, label: str = "G",
                  names: Sequence[str] | None = None, generators: Sequence[int] = (),
                  validate: bool = True) -> Group:
    """Tabulate ``op`` on a list of hashable elements whose first entry is the identity."""
    index = {e: k for k, e in enumerate(elements)}
    if len(index) != len(elements):
        raise GroupError("duplicate elements")
    n = len(elements)
    if n > MAX_ORDER:
        raise GroupError(f"group order {n} exceeds bound {MAX_ORDER}")
    mul = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            try:
                mul[i, j] = index[op(x, y)]
            except KeyError:
                raise GroupError("element set is not closed under the operation") from None
    g = Group(mul, label=label, names=tuple(names) if names else None, generators=tuple(generators))
    if validate and not g.check_associative():
        raise GroupError("operation is not associative")
    return g


def closure_elements(gens: Sequence[Hashable], op: Callable, identity: Hashable,
                     limit: int = MAX_ORDER) -> list:
    """Elements generated by ``gens`` in BFS order, identity first."""
    seen = {identity: None}
    order = [identity]
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = op(x, g)
            if y not in seen:
                seen[y] = None
                order.append(y)
                if len(order) > limit:
                    raise GroupError(f"generated group exceeds bound {limit}")
                queue.append(y)
    return order


# ---------------------------------------------------------------- builders

def cyclic(n: int) -> Group:
    if n < 1:
        raise GroupError("cyclic order must be positive")
    idx = np.arange(n)
    names = ["1"] + [f"a^{k}" if k > 1 else "a" for k in range(1, n)]
    return Group((idx[:, None] + idx[None, :]) % n, label=f"Z{n}", names=tuple(names),
                 generators=(1,) if n > 1 else ())


def direct_product(*factors: Group, label: str | None = None) -> Group:
    """Index of (x_1, ..., x_r) is x_1 + |G_1| (x_2 + |G_2| (...)): first factor fastest."""
    if not factors:
        return cyclic(1)
    g = factors[0]
    for h in factors[1:]:
        g = _direct2(g, h)
    return Group(g.mul, label=label or "x".join(f.label for f in factors), names=g.names,
                 generators=g.generators)


def _direct2(A: Group, B: Group) -> Group:
    na, nb = A.order, B.order
    ia = np.arange(na * nb) % na
    ib = np.arange(na * nb) // na
    mul = A.mul[ia[:, None], ia[None, :]] + na * B.mul[ib[:, None], ib[None, :]]
    names = tuple(f"({A.name(x)},{B.name(y)})" for y in range(nb) for x in range(na))
    gens = tuple(a for a in A.generators) + tuple(na * b for b in B.generators)
    return Group(mul, label=f"{A.label}x{B.label}", names=names, generators=gens)


def extend_action(K: Group, gen_action: Mapping[int, Sequence[int]], n_normal: int) -> list[tuple[int, ...]]:
    """Extend automorphisms given on generators of K to every element of K."""
    ident = tuple(range(n_normal))
    theta: dict[int, tuple[int, ...]] = {0: ident}
    queue = deque([0])
    gens = list(gen_action)
    while queue:
        k = queue.popleft()
        for g in gens:
            kg = K.op(k, g)
            img = tuple(theta[k][x] for x in gen_action[g])
            if kg not in theta:
                theta[kg] = img
                queue.append(kg)
    if len(theta) != K.order:
        raise GroupError("given generators do not generate the acting group")
    return [theta[k] for k in range(K.order)]


def semidirect(A: Group, K: Group, action: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
               label: str | None = None) -> Group:
    """A ⋊ K with k a k^-1 = action[k](a).

    ``action`` is either a full list (one automorphism per element of K) or a
    map from generator indices of K to automorphisms.  Element (a, k) has
    index a + |A| k.
    """
    na, nk = A.order, K.order
    if isinstance(action, Mapping):
        theta = extend_action(K, action, na)
    else:
        theta = [tuple(t) for t in action]
    if len(theta) != nk:
        raise GroupError("need one automorphism per element of K")
    th = np.array(theta, dtype=np.int64)
    for k in range(nk):
        t = th[k]
        if sorted(t.tolist()) != list(range(na)):
            raise GroupError(f"action of K element {k} is not a bijection")
        if not np.array_equal(t[A.mul], A.mul[t[:, None], t[None, :]]):
            raise GroupError(f"action of K element {k} is not an automorphism")
    for k1 in range(nk):
        for k2 in range(nk):
            if not np.array_equal(th[K.op(k1, k2)], th[k1][th[k2]]):
                raise GroupError("action is not a homomorphism K -> Aut(A)")
    idx = np.arange(na * nk)
    ia, ik = idx % na, idx // na
    # (a1,k1)(a2,k2) = (a1 θ_k1(a2), k1 k2)
    a_part = A.mul[ia[:, None], th[ik[:, None], ia[None, :]]]
    k_part = K.mul[ik[:, None], ik[None, :]]
    names = tuple(f"{A.name(a)}·{K.name(k)}" if k else A.name(a) for k in range(nk) for a in range(na))
    gens = tuple(A.generators) + tuple(na * k for k in K.generators)
    return Group(a_part + na * k_part, label=label or f"{A.label}⋊{K.label}", names=names,
                 generators=gens)


@dataclass(frozen=True)
class SemidirectSpec:
    p: int
    q: int
    t: int

    def __post_init__(self):
        if not (_is_prime(self.p) and _is_prime(self.q)):
            raise GroupError("p and q must be prime")
        if self.p == self.q:
            raise GroupError("p and q must differ")
        if not 1 < self.t < self.p:
            raise GroupError("t must lie strictly between 1 and p")
        if pow(self.t, self.q, self.p) != 1:
            raise GroupError(f"t^q = {pow(self.t, self.q, self.p)} mod p, need 1")

    @property
    def label(self) -> str:
        return f"Z{self.p}⋊(t={self.t})Z{self.q}"


def semidirect_pq(spec: SemidirectSpec | tuple) -> Group:
    """ℤp⋊ℤq with b a b^-1 = a^t; element a^i b^k has index i + p k."""
    if not isinstance(spec, SemidirectSpec):
        spec = SemidirectSpec(*spec)
    p, q, t = spec.p, spec.q, spec.t
    n = p * q
    idx = np.arange(n)
    i, k = idx % p, idx // p
    tk = np.array([pow(t, int(x), p) for x in range(q)])
    mul = (i[:, None] + i[None, :] * tk[k][:, None]) % p + p * ((k[:, None] + k[None, :]) % q)
    names = []
    for x in range(n):
        ii, kk = x % p, x // p
        s = "".join([("a" if ii == 1 else f"a^{ii}") if ii else "", ("b" if kk == 1 else f"b^{kk}") if kk else ""])
        names.append(s or "1")
    return Group(mul, label=spec.label, names=tuple(names), generators=(1, p))


def permutation_group(generators: Sequence[Sequence[int]], label: str = "Perm") -> Group:
    """Group generated by permutations given in array form; (στ)(x) = σ(τ(x))."""
    gens = [tuple(g) for g in generators]
    if not gens:
        return cyclic(1)
    deg = len(gens[0])
    if any(sorted(g) != list(range(deg)) for g in gens):
        raise GroupError("generators must be permutations of equal degree")
    compose = lambda s, t: tuple(s[x] for x in t)
    elems = closure_elements(gens, compose, tuple(range(deg)))
    gidx = tuple(elems.index(g) for g in gens)
    names = [_cycle_str(e) for e in elems]
    return from_elements(elems, compose, label=label, names=names, generators=gidx, validate=False)


def _cycle_str(perm) -> str:
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen or perm[s] == s:
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "1"


def symmetric(n: int) -> Group:
    if n < 1:
        raise GroupError("degree must be positive")
    if n == 1:
        return Group(np.zeros((1, 1), dtype=np.int64), label="S1")
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return permutation_group(gens, label=f"S{n}")


def alternating(n: int) -> Group:
    if n < 3:
        return Group(np.zeros((1, 1), dtype=np.int64), label=f"A{n}")
    # 3-cycles (0 1 k) generate A_n
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return permutation_group(gens, label=f"A{n}")


def dihedral(n: int) -> Group:
    """Symmetries of a regular n-gon (order 2n)."""
    if n < 3:
        raise GroupError("dihedral group needs n >= 3")
    r = tuple((x + 1) % n for x in range(n))
    s = tuple((-x) % n for x in range(n))
    return permutation_group([r, s], label=f"D{n}")


def _qmul(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def quaternion() -> Group:
    """Q8 = {±1, ±i, ±j, ±k}; generators i, j."""
    one, qi, qj = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)
    elems = closure_elements([qi, qj], _qmul, one)
    labels = ["1", "i", "j", "k"]

    def nm(e):
        pos = [k for k in range(4) if e[k]][0]
        return ("-" if e[pos] < 0 else "") + labels[pos]

    return from_elements(elems, _qmul, label="Q8", names=[nm(e) for e in elems],
                         generators=(elems.index(qi), elems.index(qj)), validate=False)


# ------------------------------------------------------- elementary abelian

def zpn(p: int, n: int) -> Group:
    """ℤp^n with index Σ x_k p^k."""
    return direct_product(*[cyclic(p)] * n, label=f"Z{p}^{n}")


def coords(x: int, p: int, n: int) -> tuple[int, ...]:
    return tuple((x // p ** k) % p for k in range(n))


def from_coords(v: Iterable[int], p: int) -> int:
    return sum((int(c) % p) * p ** k for k, c in enumerate(v))


def linear_automorphism(p: int, n: int, fn: Callable[[tuple], tuple]) -> tuple[int, ...]:
    return tuple(from_coords(fn(coords(x, p, n)), p) for x in range(p ** n))


def fixture(name: str) -> Group:
    """Example groups used throughout: a4, z3z3_z3z2, z3z3_q8, z3z3_d4."""
    name = name.lower()
    if name == "a4":
        # b a1^i a2^j b^-1 = a1^j a2^(i+j)
        th = linear_automorphism(2, 2, lambda v: (v[1], v[0] + v[1]))
        return semidirect(zpn(2, 2), cyclic(3), {1: th}, label="Z2^2⋊Z3")
    if name == "z3z3_z3z2":
        K = direct_product(cyclic(3), cyclic(2))
        x = linear_automorphism(3, 2, lambda v: (-v[1], v[0] - v[1]))
        b = linear_automorphism(3, 2, lambda v: (-v[0], -v[1]))
        return semidirect(zpn(3, 2), K, {1: x, 3: b}, label="Z3^2⋊(Z3xZ2)")
    if name == "z3z3_q8":
        Q = quaternion()
        i, j = Q.generators
        act_i = linear_automorphism(3, 2, lambda v: (v[1], -v[0]))
        act_j = linear_automorphism(3, 2, lambda v: (v[0] + v[1], v[0] - v[1]))
        return semidirect(zpn(3, 2), Q, {i: act_i, j: act_j}, label="Z3^2⋊Q8")
    if name == "z3z3_d4":
        D = permutation_group([(1, 2, 3, 0), (1, 0, 3, 2)], label="D4")
        beta, gamma = D.generators
        act_b = linear_automorphism(3, 2, lambda v: (v[1], -v[0]))
        act_g = linear_automorphism(3, 2, lambda v: (v[1], v[0]))
        return semidirect(zpn(3, 2), D, {beta: act_b, gamma: act_g}, label="Z3^2⋊D4")
    raise GroupError(f"unknown fixture {name!r}")


FIXTURES = ("a4", "z3z3_z3z2", "z3z3_q8", "z3z3_d4")


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def is_prime(n: int) -> bool:
    return _is_prime(n)


def prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while n > 1:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    return out
