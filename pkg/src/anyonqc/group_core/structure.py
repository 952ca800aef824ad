"""Subgroups, conjugacy classes, series, classification and quotients."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .groups import MAX_ORDER, Group, GroupError

Subgroup = frozenset


@dataclass(frozen=True)
class ConjugacyClass:
    members: frozenset
    representative: int

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members


@dataclass(frozen=True)
class SeriesChain:
    kind: str
    chain: tuple
    limit: frozenset


@dataclass(frozen=True)
class Classification:
    abelian: bool
    nilpotent: bool
    solvable: bool
    power: str

    def as_dict(self) -> dict:
        return {"abelian": self.abelian, "nilpotent": self.nilpotent,
                "solvable": self.solvable, "power": self.power}


def generate(G: Group, gens: Iterable[int]) -> frozenset:
    gens = [g for g in set(gens) if g != 0]
    seen = {0}
    queue = deque([0])
    m = G._m
    while queue:
        x = queue.popleft()
        for g in gens:
            y = m[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def is_subgroup(G: Group, S: Iterable[int]) -> bool:
    S = set(S)
    if 0 not in S:
        return False
    m = G._m
    return all(m[x][y] in S for x in S for y in S)


def is_normal(G: Group, S: Iterable[int]) -> bool:
    S = set(S)
    return is_subgroup(G, S) and all(G.conj(g, x) in S for g in G.elements() for x in S)


def conjugacy_class_of(G: Group, x: int) -> frozenset:
    return frozenset(G.conj(g, x) for g in G.elements())


def conjugacy_classes(G: Group) -> list[ConjugacyClass]:
    seen = [False] * G.order
    out = []
    for x in G.elements():
        if seen[x]:
            continue
        cls = conjugacy_class_of(G, x)
        for y in cls:
            seen[y] = True
        out.append(ConjugacyClass(cls, min(cls)))
    return out


def class_index(G: Group, classes: Sequence[ConjugacyClass] | None = None) -> list[int]:
    classes = classes if classes is not None else conjugacy_classes(G)
    idx = [0] * G.order
    for k, c in enumerate(classes):
        for x in c.members:
            idx[x] = k
    return idx


def commutator_subgroup(G: Group, A: Iterable[int], B: Iterable[int]) -> frozenset:
    A, B = frozenset(A), frozenset(B)
    for S, name in ((A, "A"), (B, "B")):
        if not is_subgroup(G, S):
            raise GroupError(f"{name} is not a subgroup")
    return generate(G, {G.comm(x, y) for x in A for y in B})


def normal_closure(G: Group, x: int) -> frozenset:
    return generate(G, conjugacy_class_of(G, x))


def centralizer(G: Group, S: Iterable[int], within: Iterable[int] | None = None) -> frozenset:
    S = list(S)
    pool = G.elements() if within is None else within
    m = G._m
    return frozenset(g for g in pool if all(m[g][s] == m[s][g] for s in S))


def series(G: Group, kind: str) -> SeriesChain:
    """``kind`` is 'exhaustive-commutator' (lower central) or 'derived'."""
    if kind not in ("exhaustive-commutator", "derived"):
        raise ValueError(f"unknown series kind {kind!r}")
    whole = frozenset(G.elements())
    chain = [whole]
    while True:
        cur = chain[-1]
        nxt = commutator_subgroup(G, cur, whole if kind == "exhaustive-commutator" else cur)
        if nxt == cur:
            break
        chain.append(nxt)
    return SeriesChain(kind, tuple(chain), chain[-1])


def classify(G: Group) -> Classification:
    abelian = all(len(c) == 1 for c in conjugacy_classes(G))
    nilpotent = len(series(G, "exhaustive-commutator").limit) == 1
    solvable = len(series(G, "derived").limit) == 1
    if abelian:
        power = "I"
    elif nilpotent:
        power = "X"
    elif solvable:
        power = "CX"
    else:
        power = "Toffoli"
    return Classification(abelian, nilpotent, solvable, power)


def normal_subgroups(G: Group, bound: int = MAX_ORDER) -> list[frozenset]:
    """All normal subgroups, sorted by (order, members)."""
    if G.order > bound:
        raise GroupError(f"group order {G.order} exceeds bound {bound}")
    classes = [c.members for c in conjugacy_classes(G)]
    start = frozenset([0])
    found = {start}
    queue = deque([start])
    while queue:
        N = queue.popleft()
        for c in classes:
            if c <= N:
                continue
            M = generate(G, N | c)
            if M not in found:
                found.add(M)
                queue.append(M)
    return sorted(found, key=sort_key)


def sort_key(S: Iterable[int]):
    s = sorted(S)
    return (len(s), s)


@dataclass(frozen=True, eq=False)
class Quotient:
    group: Group
    projection: tuple
    cosets: tuple

    def image(self, S: Iterable[int]) -> frozenset:
        return frozenset(self.projection[x] for x in S)

    def preimage(self, S: Iterable[int]) -> frozenset:
        S = set(S)
        return frozenset(x for x, c in enumerate(self.projection) if c in S)


def quotient(G: Group, N: Iterable[int], label: str | None = None) -> Quotient:
    N = frozenset(N)
    if not is_normal(G, N):
        raise GroupError("N is not a normal subgroup")
    proj = [-1] * G.order
    cosets = []
    for x in G.elements():
        if proj[x] >= 0:
            continue
        coset = sorted(G.op(x, n) for n in N)
        for y in coset:
            proj[y] = len(cosets)
        cosets.append(tuple(coset))
    reps = [c[0] for c in cosets]
    k = len(cosets)
    mul = np.array([[proj[G.op(reps[i], reps[j])] for j in range(k)] for i in range(k)], dtype=np.int64)
    names = tuple(G.name(r) + ("N" if len(N) > 1 else "") for r in reps) if G.names else None
    Q = Group(mul, label=label or (f"{G.label}/N" if len(N) > 1 else G.label), names=names)
    return Quotient(Q, tuple(proj), tuple(cosets))


def subgroup_elements_of_order_power(G: Group, S: Iterable[int], q: int) -> frozenset:
    """Elements of S whose order is a power of q."""
    out = []
    for x in S:
        o = G.element_order(x)
        while o % q == 0:
            o //= q
        if o == 1:
            out.append(x)
    return frozenset(out)
