"""PBW monomials and normal ordering in the universal enveloping algebra.

A monomial is a tuple of generators sorted by :func:`affvir.lie.order_key`
(f < e < h < d < C, indices increasing inside a family); repeated factors
encode exponents.  Normal ordering swaps adjacent out-of-order factors using
xy = yx + [x, y]; each swap either lowers the number of inversions or, for the
bracket term, shortens the word, so the rewriting terminates.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from affvir.arith import Q, Rational, format_rational
from affvir.lie import Gen, as_element, bracket_gens, order_key

Monomial = tuple  # tuple[Gen, ...] in canonical order


def is_canonical(mono: Sequence[Gen]) -> bool:
    return all(order_key(a) <= order_key(b) for a, b in zip(mono, mono[1:]))


def canonical(gens: Iterable[Gen]) -> Monomial:
    return tuple(sorted(gens, key=order_key))


def exponents(mono: Monomial) -> dict[Gen, int]:
    return dict(Counter(mono))


def monomial_to_json(mono: Monomial) -> list:
    return [[g.family, g.index, n] for g, n in sorted(Counter(mono).items(), key=lambda kv: order_key(kv[0]))]


def monomial_from_json(data) -> Monomial:
    out = []
    for fam, idx, n in data:
        out.extend([Gen.from_json([fam, idx])] * int(n))
    return canonical(out)


def monomial_repr(mono: Monomial) -> str:
    if not mono:
        return "1"
    parts = []
    for g, n in sorted(Counter(mono).items(), key=lambda kv: order_key(kv[0])):
        parts.append(repr(g) if n == 1 else f"{g!r}^{n}")
    return "*".join(parts)


# lru_cache is internally locked, so the memo tables are safe to share
# between threads; entries are immutable tuples.
@lru_cache(maxsize=None)
def _insert(x: Gen, mono: Monomial) -> tuple[tuple[Monomial, Rational], ...]:
    """Normal form of x * mono for a canonical monomial."""
    if not mono or order_key(x) <= order_key(mono[0]):
        return (((x,) + mono, Rational(1)),)
    y, rest = mono[0], mono[1:]
    out: dict[Monomial, Rational] = {}
    # x y rest = y (x rest) + [x, y] rest
    for m, c in _insert(x, rest):
        for m2, c2 in _insert(y, m):
            _acc(out, m2, c * c2)
    for g, cg in bracket_gens(x, y):
        for m, c in _insert(g, rest):
            _acc(out, m, cg * c)
    return tuple(out.items())


def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


@lru_cache(maxsize=None)
def _straighten_word(word: tuple[Gen, ...]) -> tuple[tuple[Monomial, Rational], ...]:
    if len(word) <= 1:
        return ((word, Rational(1)),)
    out: dict[Monomial, Rational] = {}
    for m, c in _straighten_word(word[1:]):
        for m2, c2 in _insert(word[0], m):
            _acc(out, m2, c * c2)
    return tuple(out.items())


class UEAElement:
    """Rational combination of canonical PBW monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, object] | None = None):
        out: dict[Monomial, Rational] = {}
        for m, c in (terms or {}).items():
            if not is_canonical(m):
                raise ValueError(f"monomial {m} is not in canonical order")
            c = Q(c)
            if c:
                out[tuple(m)] = c
        self.terms = out

    def __eq__(self, other) -> bool:
        if not isinstance(other, UEAElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "UEAElement") -> "UEAElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return UEAElement(out)

    def __mul__(self, c) -> "UEAElement":
        c = Q(c)
        return UEAElement({m: v * c for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: [order_key(g) for g in kv[0]])

    def to_json(self) -> list:
        return [[monomial_to_json(m), format_rational(c)] for m, c in self.items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            monomial_repr(m) if c == 1 else f"({format_rational(c)})*{monomial_repr(m)}"
            for m, c in self.items()
        )


def straighten_word(word: Sequence[Gen]) -> UEAElement:
    return UEAElement(dict(_straighten_word(tuple(word))))


def straighten(factors: Sequence, coeff=1) -> UEAElement:
    """Normal-order a product of Lie elements (or generators), times ``coeff``.

    Factors are expanded multilinearly into words in the basis symbols.
    """
    words: dict[tuple[Gen, ...], Rational] = {(): Q(coeff)}
    for fac in factors:
        el = as_element(fac)
        nxt: dict[tuple[Gen, ...], Rational] = {}
        for w, c in words.items():
            for g, cg in el.coeffs.items():
                _acc(nxt, w + (g,), c * cg)
        words = nxt
    out: dict[Monomial, Rational] = {}
    for w, c in words.items():
        for m, cm in _straighten_word(w):
            _acc(out, m, c * cm)
    return UEAElement(out)


def straighten_element(x: UEAElement) -> UEAElement:
    out: dict[Monomial, Rational] = {}
    for m, c in x.terms.items():
        for m2, c2 in _straighten_word(m):
            _acc(out, m2, c * c2)
    return UEAElement(out)


def clear_caches() -> None:
    _insert.cache_clear()
    _straighten_word.cache_clear()


# ---------------------------------------------------------------------------
# total order on the bases of the induced module and the tensor module

class IncomparableBases(ValueError):
    pass


@dataclass(frozen=True)
class BasisKey:
    """A basis element of the induced module ("B1") or of the tensor module ("B2").

    ``mono`` is the lowering monomial (no d_0 factors), ``d0`` the exponent of
    d_0 (B1) or of s (B2), and ``i`` the exponent of t.
    """

    family: str
    mono: Monomial
    d0: int
    i: int

    def coordinates(self, width: int) -> tuple[int, ...]:
        ex = Counter(self.mono)
        coords: list[int] = []
        for fam, start in (("d", 1), ("h", 1), ("e", 1), ("f", 0)):
            coords.extend(ex.get(Gen(fam, -k), 0) for k in range(start, width + 1))
        coords.extend((self.d0, self.i))
        return tuple(coords)

    def width(self) -> int:
        return max((-g.index for g in self.mono), default=0)


def pbw_compare(a: BasisKey, b: BasisKey) -> int:
    """-1, 0 or 1 as ``a`` precedes, equals or follows ``b``.

    Exponent tuples (D_{-1}, .., H_{-1}, .., E_{-1}, .., F_0, F_{-1}, .., D_0, i)
    padded with zeros to a common length, compared lexicographically.
    """
    if a.family != b.family:
        raise IncomparableBases(f"cannot compare {a.family} with {b.family} basis elements")
    w = max(a.width(), b.width(), 1)
    ca, cb = a.coordinates(w), b.coordinates(w)
    return (ca > cb) - (ca < cb)


def order_tuple(key: BasisKey, width: int) -> tuple[int, ...]:
    """Sort key realizing the same order for keys of width at most ``width``."""
    return key.coordinates(width)
