"""Conjugation words: group-valued functions of flux arguments.

A word is a product of tokens.  Evaluating it on the fluxes of some source
slots gives the element f by which a target flux is conjugated.  Besides the
three flat tokens (constant, argument, inverted argument) a token can be a
nested word, its inverse, a power, or a commutator of two words.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .groups import Group


@dataclass(frozen=True)
class Const:
    element: int


@dataclass(frozen=True)
class Arg:
    slot: int


@dataclass(frozen=True)
class ArgInv:
    slot: int


@dataclass(frozen=True)
class Comm:
    left: "ConjWord"
    right: "ConjWord"


@dataclass(frozen=True)
class Pow:
    word: "ConjWord"
    exponent: int


@dataclass(frozen=True)
class Inv:
    word: "ConjWord"


Token = Union[Const, Arg, ArgInv, Comm, Pow, Inv, "ConjWord"]


class UnboundSlot(KeyError):
    pass


@dataclass(frozen=True)
class ConjWord:
    factors: tuple = ()

    def __init__(self, *factors: Token):
        if len(factors) == 1 and isinstance(factors[0], (list, tuple)):
            factors = tuple(factors[0])
        object.__setattr__(self, "factors", tuple(factors))

    def __mul__(self, other: "ConjWord") -> "ConjWord":
        return ConjWord(*self.factors, *other.factors)

    def __pow__(self, k: int) -> "ConjWord":
        if k < 0:
            return ConjWord(Pow(ConjWord(Inv(self)), -k))
        return ConjWord(Pow(self, k))

    def inverse(self) -> "ConjWord":
        return ConjWord(Inv(self))

    def slots(self) -> set[int]:
        out = set()
        for t in self.factors:
            if isinstance(t, (Arg, ArgInv)):
                out.add(t.slot)
            elif isinstance(t, Comm):
                out |= t.left.slots() | t.right.slots()
            elif isinstance(t, (Pow, Inv)):
                out |= t.word.slots()
            elif isinstance(t, ConjWord):
                out |= t.slots()
        return out

    @property
    def arity(self) -> int:
        s = self.slots()
        return max(s) + 1 if s else 0

    def substitute(self, mapping: Mapping[int, "ConjWord"]) -> "ConjWord":
        """Replace Arg(k) by the word mapping[k] (and ArgInv(k) by its inverse)."""
        out = []
        for t in self.factors:
            if isinstance(t, Arg) and t.slot in mapping:
                out.append(mapping[t.slot])
            elif isinstance(t, ArgInv) and t.slot in mapping:
                out.append(Inv(mapping[t.slot]))
            elif isinstance(t, Comm):
                out.append(Comm(t.left.substitute(mapping), t.right.substitute(mapping)))
            elif isinstance(t, Pow):
                out.append(Pow(t.word.substitute(mapping), t.exponent))
            elif isinstance(t, Inv):
                out.append(Inv(t.word.substitute(mapping)))
            elif isinstance(t, ConjWord):
                out.append(t.substitute(mapping))
            else:
                out.append(t)
        return ConjWord(*out)

    def expand(self, G: Group) -> list:
        """Flatten to Const/Arg/ArgInv tokens (a plain braiding sequence)."""
        flat: list = []
        for t in self.factors:
            flat.extend(_expand_token(t, G))
        merged: list = []
        for t in flat:
            if isinstance(t, Const) and merged and isinstance(merged[-1], Const):
                merged[-1] = Const(G.op(merged[-1].element, t.element))
            else:
                merged.append(t)
            if (len(merged) >= 2 and isinstance(merged[-1], (Arg, ArgInv))
                    and isinstance(merged[-2], (Arg, ArgInv))
                    and merged[-1].slot == merged[-2].slot
                    and type(merged[-1]) is not type(merged[-2])):
                merged.pop()
                merged.pop()
        return [t for t in merged if not (isinstance(t, Const) and t.element == 0)]

    def __call__(self, G: Group, args: Mapping[int, int] | list | tuple) -> int:
        return eval_word(self, args, G)


def _expand_token(t, G: Group) -> list:
    if isinstance(t, (Const, Arg, ArgInv)):
        return [t]
    if isinstance(t, ConjWord):
        return t.expand(G)
    if isinstance(t, Inv):
        return [_invert_flat(x, G) for x in reversed(t.word.expand(G))]
    if isinstance(t, Pow):
        return t.word.expand(G) * t.exponent
    if isinstance(t, Comm):
        x, y = t.left.expand(G), t.right.expand(G)
        xi = [_invert_flat(z, G) for z in reversed(x)]
        yi = [_invert_flat(z, G) for z in reversed(y)]
        return x + y + xi + yi
    raise TypeError(f"bad token {t!r}")


def _invert_flat(t, G: Group):
    if isinstance(t, Const):
        return Const(G.invert(t.element))
    if isinstance(t, Arg):
        return ArgInv(t.slot)
    return Arg(t.slot)


def eval_word(w: ConjWord, args: Mapping[int, int] | list | tuple, G: Group) -> int:
    """Evaluate left to right; commutators are x y x^-1 y^-1."""
    m, inv = G._m, G._i
    r = 0
    for t in w.factors:
        if isinstance(t, Const):
            v = t.element
        elif isinstance(t, Arg):
            v = _lookup(args, t.slot)
        elif isinstance(t, ArgInv):
            v = inv[_lookup(args, t.slot)]
        elif isinstance(t, ConjWord):
            v = eval_word(t, args, G)
        elif isinstance(t, Inv):
            v = inv[eval_word(t.word, args, G)]
        elif isinstance(t, Pow):
            v = G.power(eval_word(t.word, args, G), t.exponent)
        elif isinstance(t, Comm):
            v = G.comm(eval_word(t.left, args, G), eval_word(t.right, args, G))
        else:
            raise TypeError(f"bad token {t!r}")
        r = m[r][v]
    return r


def _lookup(args, slot):
    try:
        return args[slot]
    except (KeyError, IndexError):
        raise UnboundSlot(slot) from None


def const(g: int) -> ConjWord:
    return ConjWord(Const(g))


def arg(k: int = 0) -> ConjWord:
    return ConjWord(Arg(k))


def word_to_str(w: ConjWord, G: Group | None = None) -> str:
    parts = []
    for t in w.factors:
        if isinstance(t, Const):
            parts.append(G.name(t.element) if G is not None else f"c{t.element}")
        elif isinstance(t, Arg):
            parts.append(f"g{t.slot}")
        elif isinstance(t, ArgInv):
            parts.append(f"g{t.slot}⁻¹")
        elif isinstance(t, ConjWord):
            parts.append("(" + word_to_str(t, G) + ")")
        elif isinstance(t, Inv):
            parts.append("(" + word_to_str(t.word, G) + ")⁻¹")
        elif isinstance(t, Pow):
            parts.append("(" + word_to_str(t.word, G) + f")^{t.exponent}")
        elif isinstance(t, Comm):
            parts.append("[" + word_to_str(t.left, G) + ", " + word_to_str(t.right, G) + "]")
    return "·".join(parts) or "1"
