"""Group-spec mini-language.

    spec := term (('x' | '⋊(t=' int ')' | 'xsd(t=' int ')') term)*
    term := 'Z' int | 'S' int | 'A' int | 'Q8' | 'D' int | '(' spec ')' | fixture-name

The semidirect operator takes a cyclic ℤp on the left and ℤq on the right,
with b a b⁻¹ = aᵗ.  'x' binds like '⋊'; operators associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..group_core import (FIXTURES, Group, GroupError, SemidirectSpec, alternating, cyclic, dihedral,
                          direct_product, fixture, quaternion, semidirect_pq, symmetric)


class SpecSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Cyclic:
    n: int


@dataclass(frozen=True)
class Family:
    kind: str      # S, A, D, Q
    n: int


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple


@dataclass(frozen=True)
class SemidirectPQ:
    p: int
    q: int
    t: int


@dataclass(frozen=True)
class Named:
    name: str


_NAMES = "|".join(sorted(FIXTURES, key=len, reverse=True))
# known names first, so 'x' after a name still reads as the product operator
_TOKEN = re.compile(rf"""
    (?P<ws>\s+)
  | (?P<sdp>⋊\(t=(?P<t1>\d+)\)|xsd\(t=(?P<t2>\d+)\))
  | (?P<name>{_NAMES})
  | (?P<x>x)
  | (?P<q8>Q8)
  | (?P<fam>[ZSAD])(?P<n>\d+)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<badname>[a-z][a-z0-9_]*)
""", re.VERBOSE)


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text.startswith("⋊", pos) or text.startswith("xsd", pos):
                raise SpecSyntaxError("semidirect product needs an action '(t=..)'", pos)
            raise SpecSyntaxError(f"unexpected {text[pos]!r}", pos)
        for k in ("sdp", "name", "x", "q8", "fam", "lp", "rp", "badname"):
            if m.group(k) is not None:
                kind = k
                break
        else:
            kind = "ws"
        if kind != "ws":
            out.append((kind, m, pos))
        pos = m.end()
    out.append(("end", None, pos))
    return out


def parse_group_spec(text: str):
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def term():
        kind, m, pos = take()
        if kind == "lp":
            node = spec()
            if peek()[0] != "rp":
                raise SpecSyntaxError("expected ')'", peek()[2])
            take()
            return node
        if kind == "q8":
            return Family("Q", 8)
        if kind == "fam":
            n = int(m.group("n"))
            if n < 1:
                raise SpecSyntaxError("order must be positive", pos)
            return Cyclic(n) if m.group("fam") == "Z" else Family(m.group("fam"), n)
        if kind == "name":
            return Named(m.group("name"))
        if kind == "badname":
            raise SpecSyntaxError(f"unknown named group {m.group('badname')!r}", pos)
        raise SpecSyntaxError("expected a group term", pos)

    def spec():
        left = term()
        while peek()[0] in ("x", "sdp"):
            kind, m, pos = take()
            right = term()
            if kind == "x":
                fs = left.factors if isinstance(left, DirectProduct) else (left,)
                left = DirectProduct(fs + (right,))
            else:
                t = int(m.group("t1") or m.group("t2"))
                if not (isinstance(left, Cyclic) and isinstance(right, Cyclic)):
                    raise SpecSyntaxError("'⋊(t=..)' needs cyclic groups on both sides", pos)
                try:
                    SemidirectSpec(left.n, right.n, t)
                except GroupError as e:
                    raise SpecSyntaxError(f"invalid action: {e}", pos) from None
                left = SemidirectPQ(left.n, right.n, t)
        return left

    node = spec()
    if peek()[0] != "end":
        raise SpecSyntaxError("trailing input", peek()[2])
    return node


def print_group_spec(node) -> str:
    if isinstance(node, Cyclic):
        return f"Z{node.n}"
    if isinstance(node, Family):
        return "Q8" if node.kind == "Q" else f"{node.kind}{node.n}"
    if isinstance(node, SemidirectPQ):
        return f"Z{node.p}⋊(t={node.t})Z{node.q}"
    if isinstance(node, Named):
        return node.name
    if isinstance(node, DirectProduct):
        parts = [print_group_spec(f) for f in node.factors]
        parts = [f"({s})" if isinstance(f, (DirectProduct, SemidirectPQ)) else s
                 for f, s in zip(node.factors, parts)]
        return "x".join(parts)
    raise TypeError(f"not a group spec node: {node!r}")


def build_group(node) -> Group:
    if isinstance(node, Cyclic):
        return cyclic(node.n)
    if isinstance(node, Family):
        return {"S": symmetric, "A": alternating, "D": dihedral, "Q": lambda n: quaternion()}[node.kind](node.n)
    if isinstance(node, SemidirectPQ):
        return semidirect_pq((node.p, node.q, node.t))
    if isinstance(node, Named):
        return fixture(node.name)
    if isinstance(node, DirectProduct):
        return direct_product(*[build_group(f) for f in node.factors])
    raise TypeError(f"not a group spec node: {node!r}")


def group_from_text(text: str) -> Group:
    return build_group(parse_group_spec(text))
