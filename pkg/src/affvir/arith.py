"""Rational scalars and sparse polynomials in (s, t) and in t alone.

Scalars are ``gmpy2.mpq`` values (exported here as ``Rational``), always in
lowest terms with a positive denominator.  Polynomials store only nonzero coefficients and
iterate in lexicographic exponent order so that serialization is stable.
"""

from __future__ import annotations

from gmpy2 import mpq as Rational
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Union

Scalar = Union[int, Rational]

ZERO = Rational(0)
ONE = Rational(1)


def Q(x) -> Rational:
    """Coerce ints, Fractions and "p/q" strings to a Rational."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, int):
        return Rational(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, Fraction):
        return Rational(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def parse_rational(text: str) -> Rational:
    s = text.strip().replace("−", "-")
    if not s:
        raise ValueError("empty rational")
    if "/" in s:
        num, den = s.split("/", 1)
        try:
            p, q = int(num), int(den)
        except ValueError:
            raise ValueError(f"malformed rational {text!r}") from None
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Rational(p, q)
    try:
        return Rational(int(s))
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


def format_rational(x: Scalar) -> str:
    x = Rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=None)
def _shift_row(p: int, a: int) -> tuple[tuple[int, int], ...]:
    # (x - a)^p = sum_i C(p, i) (-a)^(p-i) x^i
    return tuple(
        (i, comb(p, i) * (-a) ** (p - i)) for i in range(p + 1) if (p == i or a != 0)
    )


class Poly2:
    """Sparse polynomial in s and t with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Rational] = {}
        if terms:
            for (a, b), c in terms.items():
                if a < 0 or b < 0:
                    raise ValueError("negative exponent")
                if c:
                    clean[(a, b)] = Rational(c)
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[tuple[int, int], Rational]) -> "Poly2":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly2":
        return cls._raw({(0, 0): Rational(c)} if c else {})

    @classmethod
    def monomial(cls, a: int, b: int, c: Scalar = 1) -> "Poly2":
        return cls({(a, b): c})

    @classmethod
    def s(cls) -> "Poly2":
        return cls.monomial(1, 0)

    @classmethod
    def t(cls) -> "Poly2":
        return cls.monomial(0, 1)

    @classmethod
    def from_t(cls, p: "Poly1") -> "Poly2":
        return cls._raw({(0, k): c for k, c in p.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Rational)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "Poly2":
        if isinstance(other, (int, Rational)):
            other = Poly2.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly2._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly2":
        return Poly2._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "Poly2":
        if isinstance(other, (int, Rational)):
            other = Poly2.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly2":
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly2":
        if not c:
            return Poly2._raw({})
        return Poly2._raw({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "Poly2":
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        out: dict[tuple[int, int], Rational] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                v = out.get(k, ZERO) + c1 * c2
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Poly2._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly2":
        out = Poly2.const(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, a: int, b: int) -> "Poly2":
        """Return g(s - a, t - b), fully expanded."""
        if a == 0 and b == 0:
            return self
        out: dict[tuple[int, int], Rational] = {}
        for (p, q), c in self.terms.items():
            srow = _shift_row(p, a)
            trow = _shift_row(q, b)
            for i, ci in srow:
                for j, cj in trow:
                    k = (i, j)
                    v = out.get(k, ZERO) + c * (ci * cj)
                    if v:
                        out[k] = v
                    else:
                        del out[k]
        return Poly2._raw(out)

    def eval(self, s0: Scalar, t0: Scalar) -> Rational:
        s0, t0 = Rational(s0), Rational(t0)
        return sum((c * s0**a * t0**b for (a, b), c in self.terms.items()), ZERO)

    def degree_s(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    def degree_t(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def coeff_of_s(self, i: int) -> "Poly1":
        """The polynomial a_i(t) in g = sum_i a_i(t) s^i."""
        return Poly1._raw({b: c for (a, b), c in self.terms.items() if a == i})

    def is_t_only(self) -> bool:
        return all(a == 0 for a, _ in self.terms)

    def to_poly1(self) -> "Poly1":
        if not self.is_t_only():
            raise ValueError("polynomial depends on s")
        return Poly1._raw({b: c for (_, b), c in self.terms.items()})

    def items(self):
        return sorted(self.terms.items())

    def to_json(self) -> list:
        return [[a, b, format_rational(c)] for (a, b), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data: Iterable) -> "Poly2":
        out: dict[tuple[int, int], Rational] = {}
        for a, b, c in data:
            out[(int(a), int(b))] = out.get((int(a), int(b)), ZERO) + Q(c)
        return cls(out)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            mono = "*".join(
                x for x in (
                    ("s" if a == 1 else f"s^{a}") if a else "",
                    ("t" if b == 1 else f"t^{b}") if b else "",
                ) if x
            )
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({format_rational(c)})*{mono}")
        return " + ".join(parts)


class Poly1:
    """Sparse polynomial in t with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[Scalar] | None = None):
        clean: dict[int, Rational] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else enumerate(terms)
            for k, c in items:
                if k < 0:
                    raise ValueError("negative exponent")
                if c:
                    clean[k] = Rational(c)
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[int, Rational]) -> "Poly1":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly1":
        return cls._raw({0: Rational(c)} if c else {})

    @classmethod
    def t(cls) -> "Poly1":
        return cls._raw({1: ONE})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Rational)):
            other = Poly1.const(other)
        if not isinstance(other, Poly1):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self) -> int:
        return max(self.terms, default=-1)

    def lc(self) -> Rational:
        return self.terms[self.degree()] if self.terms else ZERO

    def __add__(self, other) -> "Poly1":
        if isinstance(other, (int, Rational)):
            other = Poly1.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly1._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly1":
        return Poly1._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "Poly1":
        if isinstance(other, (int, Rational)):
            other = Poly1.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly1":
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly1":
        if not c:
            return Poly1._raw({})
        return Poly1._raw({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "Poly1":
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        if not isinstance(other, Poly1):
            return NotImplemented
        out: dict[int, Rational] = {}
        for a, c1 in self.terms.items():
            for b, c2 in other.terms.items():
                v = out.get(a + b, ZERO) + c1 * c2
                if v:
                    out[a + b] = v
                else:
                    del out[a + b]
        return Poly1._raw(out)

    __rmul__ = __mul__

    def shift(self, b: int) -> "Poly1":
        """Return g(t - b)."""
        if b == 0:
            return self
        out: dict[int, Rational] = {}
        for q, c in self.terms.items():
            for j, cj in _shift_row(q, b):
                v = out.get(j, ZERO) + c * cj
                if v:
                    out[j] = v
                else:
                    del out[j]
        return Poly1._raw(out)

    def eval(self, t0: Scalar) -> Rational:
        t0 = Rational(t0)
        return sum((c * t0**k for k, c in self.terms.items()), ZERO)

    def divmod(self, other: "Poly1") -> tuple["Poly1", "Poly1"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        quo: dict[int, Rational] = {}
        rem = dict(self.terms)
        dv, lv = other.degree(), other.lc()
        while rem:
            dr = max(rem)
            if dr < dv:
                break
            c = rem[dr] / lv
            quo[dr - dv] = c
            for k, ck in other.terms.items():
                v = rem.get(k + dr - dv, ZERO) - c * ck
                if v:
                    rem[k + dr - dv] = v
                else:
                    rem.pop(k + dr - dv, None)
        return Poly1._raw(quo), Poly1._raw(rem)

    def monic(self) -> "Poly1":
        return self.scale(1 / self.lc()) if self.terms else self

    def cauchy_bound(self) -> Rational:
        """Every complex root has absolute value at most this bound."""
        d = self.degree()
        if d <= 0:
            return ZERO
        lc = self.lc()
        return 1 + max((abs(c / lc) for k, c in self.terms.items() if k != d), default=ZERO)

    def to_json(self) -> list:
        return [[k, format_rational(c)] for k, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data: Iterable) -> "Poly1":
        out: dict[int, Rational] = {}
        for k, c in data:
            out[int(k)] = out.get(int(k), ZERO) + Q(c)
        return cls(out)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            format_rational(c) if k == 0 else f"({format_rational(c)})*t^{k}"
            for k, c in sorted(self.terms.items())
        )


def ext_gcd(a: Poly1, b: Poly1) -> tuple[Poly1, Poly1, Poly1]:
    """Return (g, u, v) with u*a + v*b = g and g monic (or zero)."""
    r0, r1 = a, b
    u0, u1 = Poly1.const(1), Poly1()
    v0, v1 = Poly1(), Poly1.const(1)
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if r0:
        inv = 1 / r0.lc()
        return r0.scale(inv), u0.scale(inv), v0.scale(inv)
    return r0, u0, v0
