"""Character tables (Burnside's class-sum method) and one-dimensional representations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..group_core import Group, conjugacy_classes, quotient
from ..group_core.structure import class_index, commutator_subgroup, generate

TOL = 1e-9


class RepError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class CharacterTable:
    classes: tuple
    rows: np.ndarray          # irreps x classes
    dims: tuple
    class_of: tuple           # element -> class position
    group_order: int

    def chi(self, row: int, g: int) -> complex:
        return self.rows[row, self.class_of[g]]

    def character(self, row: int) -> np.ndarray:
        """Values on every element."""
        return self.rows[row][list(self.class_of)]

    def labels(self) -> list[str]:
        out, seen = [], {}
        for d in self.dims:
            k = seen.get(d, 0)
            seen[d] = k + 1
            out.append(f"{d}{chr(ord('a') + k)}")
        return out

    def check(self, tol: float = TOL) -> None:
        sizes = np.array([len(c) for c in self.classes])
        if sum(d * d for d in self.dims) != self.group_order:
            raise RepError("sum of squared dimensions differs from |G|")
        gram = (self.rows * sizes) @ self.rows.conj().T / self.group_order
        if not np.allclose(gram, np.eye(len(self.dims)), atol=tol * 100):
            raise RepError("character rows are not orthonormal")


def _class_matrices(G: Group, classes, cls_of) -> list[np.ndarray]:
    k = len(classes)
    reps = [c.representative for c in classes]
    mats = []
    for c in classes:
        M = np.zeros((k, k))
        for t in range(k):
            z = reps[t]
            for x in c.members:
                M[cls_of[G.op(G.invert(x), z)], t] += 1
        mats.append(M)
    return mats


@lru_cache(maxsize=64)
def character_table(G: Group, seed: int = 0, retries: int = 20) -> CharacterTable:
    classes = conjugacy_classes(G)
    cls_of = class_index(G, classes)
    sizes = np.array([len(c) for c in classes], dtype=float)
    mats = _class_matrices(G, classes, cls_of)
    k = len(classes)
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        coeff = rng.normal(size=k) + 1j * rng.normal(size=k)
        A = sum(c * M for c, M in zip(coeff, mats))
        vals, vecs = np.linalg.eig(A)
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(k) * 1e9
        if gaps.min() > 1e-6:
            break
    else:
        raise RepError("class-sum eigenvalues stayed degenerate after recombination retries")
    rows, dims = [], []
    for j in range(k):
        u = vecs[:, j] / vecs[0, j]
        d2 = G.order / np.sum(np.abs(u) ** 2 / sizes)
        d = int(round(math.sqrt(d2.real)))
        if abs(d * d - d2) > 1e-6:
            raise RepError("non-integral irrep dimension")
        rows.append(u * d / sizes)
        dims.append(d)
    rows = np.array(rows)
    rows = np.where(np.abs(rows.real) < 1e-12, 1j * rows.imag, rows)
    rows = np.where(np.abs(rows.imag) < 1e-12, rows.real + 0j, rows)

    def key(j):
        return (dims[j], tuple((-round(z.real, 8), -round(z.imag, 8)) for z in rows[j]))

    order = sorted(range(k), key=key)
    table = CharacterTable(tuple(classes), rows[order], tuple(dims[j] for j in order),
                           tuple(cls_of), G.order)
    table.check()
    return table


@dataclass(frozen=True, eq=False)
class OneDimRep:
    """A homomorphism G -> U(1) with values exp(2πi·exponents[g]/modulus)."""

    label: str
    modulus: int
    exponents: tuple

    def __call__(self, g: int) -> complex:
        return np.exp(2j * np.pi * self.exponents[g] / self.modulus)

    @property
    def values(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.array(self.exponents) / self.modulus)

    @property
    def trivial(self) -> bool:
        return not any(self.exponents)

    def is_trivial_on(self, S) -> bool:
        return all(self.exponents[s] == 0 for s in S)


@lru_cache(maxsize=64)
def one_dim_reps(G: Group) -> tuple:
    D = commutator_subgroup(G, G.elements(), G.elements())
    Q = quotient(G, D)
    A = Q.group
    e = 1
    for x in A.elements():
        e = math.lcm(e, A.element_order(x))
    gens: list[int] = []
    span = frozenset([0])
    for x in A.elements():
        if x not in span:
            gens.append(x)
            span = generate(A, gens)
    homs = set()
    choices = [[v for v in range(e) if (A.element_order(g) * v) % e == 0] for g in gens]
    for assign in _product(choices):
        val = {0: 0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g, v in zip(gens, assign):
                y = A.op(x, g)
                if y not in val:
                    val[y] = (val[x] + v) % e
                    frontier.append(y)
        if all(val[A.op(x, y)] == (val[x] + val[y]) % e for x in A.elements() for y in A.elements()):
            homs.add(tuple(val[x] for x in A.elements()))
    if len(homs) != A.order:
        raise RepError("wrong number of one-dimensional representations")
    pulled = sorted({tuple(h[Q.projection[g]] for g in G.elements()) for h in homs})
    pulled.sort(key=lambda t: (any(t), t))
    out = []
    for k, ex in enumerate(pulled):
        out.append(OneDimRep("trivial" if not any(ex) else f"gamma{k}", e, ex))
    return tuple(out)


def _product(choices):
    if not choices:
        yield ()
        return
    for v in choices[0]:
        for rest in _product(choices[1:]):
            yield (v,) + rest


def find_one_dim(G: Group, name: str) -> OneDimRep:
    reps = one_dim_reps(G)
    if name == "sign":
        for r in reps:
            if not r.trivial and all(2 * x % r.modulus == 0 for x in r.exponents):
                return r
    for r in reps:
        if r.label == name:
            return r
    raise KeyError(f"no one-dimensional representation {name!r}")
