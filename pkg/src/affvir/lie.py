"""The affine-Virasoro algebra of type A1 as a structure-constant engine.

Basis: e_i, f_i, h_i, d_i (i in Z) and the central element C.  Brackets:

    [e_i, f_j] = h_{i+j} + i delta_{i+j,0} C
    [h_i, e_j] = 2 e_{i+j}           [h_i, f_j] = -2 f_{i+j}
    [d_i, d_j] = (j - i) d_{i+j} + delta_{i+j,0} (i^3 - i)/12 C
    [d_i, x_j] = j x_{i+j}           for x in {e, f, h}
    [h_i, h_j] = 2 i delta_{i+j,0} C
    [e_i, e_j] = [f_i, f_j] = [C, -] = 0

The h-h cocycle carries the sign +2i; with -2i the Jacobi identity fails on
(e, f, h) triples with nonzero h-index.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

from affvir.arith import Q, Rational, format_rational

FAMILIES = ("f", "e", "h", "d", "C")
FAMILY_RANK = {fam: r for r, fam in enumerate(FAMILIES)}


class Gen(NamedTuple):
    family: str
    index: int = 0

    def __repr__(self) -> str:
        return "C" if self.family == "C" else f"{self.family}{self.index}"

    def to_json(self) -> dict:
        return {"family": self.family, "index": self.index}

    @classmethod
    def from_json(cls, data) -> "Gen":
        if isinstance(data, (list, tuple)):
            fam, idx = data[0], int(data[1])
        else:
            fam, idx = data["family"], int(data.get("index", 0))
        fam = {"E": "e", "F": "f", "H": "h", "D": "d", "c": "C", "Central": "C"}.get(fam, fam)
        if fam not in FAMILY_RANK:
            raise ValueError(f"unknown generator family {fam!r}")
        if fam == "C" and idx != 0:
            raise ValueError("the central element carries index 0 only")
        return cls(fam, idx)


CENTRAL = Gen("C", 0)


def e(i: int) -> Gen:
    return Gen("e", i)


def f(i: int) -> Gen:
    return Gen("f", i)


def h(i: int) -> Gen:
    return Gen("h", i)


def d(i: int) -> Gen:
    return Gen("d", i)


def order_key(g: Gen) -> tuple[int, int]:
    """Canonical PBW order: f < e < h < d < C, indices increasing in a family."""
    return (FAMILY_RANK[g.family], g.index)


def parse_gen(text: str) -> Gen:
    """Parse strings like "e1", "f-2", "d0", "C"."""
    text = text.strip().replace("−", "-")
    if text in ("C", "c"):
        return CENTRAL
    fam, rest = text[0].lower(), text[1:].strip("_{}")
    if fam not in "efhd" or not rest:
        raise ValueError(f"cannot parse generator {text!r}")
    return Gen(fam, int(rest))


@lru_cache(maxsize=None)
def bracket_gens(x: Gen, y: Gen) -> tuple[tuple[Gen, Rational], ...]:
    """[x, y] for basis elements, as a tuple of (generator, coefficient)."""
    a, i = x
    b, j = y
    if a == "C" or b == "C":
        return ()
    out: list[tuple[Gen, Rational]] = []
    k = i + j
    if a == "d" and b == "d":
        if j != i:
            out.append((d(k), Rational(j - i)))
        if k == 0 and i**3 != i:
            out.append((CENTRAL, Rational(i**3 - i, 12)))
    elif a == "d":
        if j:
            out.append((Gen(b, k), Rational(j)))
    elif b == "d":
        if i:
            out.append((Gen(a, k), Rational(-i)))
    elif a == "h" and b == "h":
        if k == 0 and i:
            out.append((CENTRAL, Rational(2 * i)))
    elif a == "h":
        if b == "e":
            out.append((e(k), Rational(2)))
        else:
            out.append((f(k), Rational(-2)))
    elif b == "h":
        if a == "e":
            out.append((e(k), Rational(-2)))
        else:
            out.append((f(k), Rational(2)))
    elif a == "e" and b == "f":
        out.append((h(k), Rational(1)))
        if k == 0 and i:
            out.append((CENTRAL, Rational(i)))
    elif a == "f" and b == "e":
        out.append((h(k), Rational(-1)))
        if k == 0 and j:
            out.append((CENTRAL, Rational(-j)))
    return tuple(out)


class LieElement:
    """A finite rational combination of basis symbols."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Gen, object] | Iterable[tuple[Gen, object]] | None = None):
        items = coeffs.items() if isinstance(coeffs, Mapping) else (coeffs or ())
        out: dict[Gen, Rational] = {}
        for g, c in items:
            g = g if isinstance(g, Gen) else Gen(*g)
            v = out.get(g, Rational(0)) + Q(c)
            if v:
                out[g] = v
            else:
                out.pop(g, None)
        self.coeffs = out

    @classmethod
    def basis(cls, g: Gen) -> "LieElement":
        return cls({g: 1})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Gen):
            other = LieElement.basis(other)
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other) -> "LieElement":
        if isinstance(other, Gen):
            other = LieElement.basis(other)
        return LieElement(list(self.coeffs.items()) + list(other.coeffs.items()))

    def __sub__(self, other) -> "LieElement":
        if isinstance(other, Gen):
            other = LieElement.basis(other)
        return self + (-other)

    def __neg__(self) -> "LieElement":
        return LieElement({g: -c for g, c in self.coeffs.items()})

    def __mul__(self, c) -> "LieElement":
        c = Q(c)
        return LieElement({g: v * c for g, v in self.coeffs.items()})

    __rmul__ = __mul__

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: order_key(kv[0]))

    def to_json(self) -> list:
        return [[g.to_json(), format_rational(c)] for g, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "LieElement":
        return cls([(Gen.from_json(g), Q(c)) for g, c in data])

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(
            repr(g) if c == 1 else f"({format_rational(c)})*{g!r}" for g, c in self.items()
        )


def as_element(x) -> LieElement:
    return LieElement.basis(x) if isinstance(x, Gen) else x


def bracket(x, y) -> LieElement:
    """Bilinear extension of the basis brackets."""
    x, y = as_element(x), as_element(y)
    out: dict[Gen, Rational] = {}
    for g1, c1 in x.coeffs.items():
        for g2, c2 in y.coeffs.items():
            for g, c in bracket_gens(g1, g2):
                v = out.get(g, Rational(0)) + c1 * c2 * c
                if v:
                    out[g] = v
                else:
                    del out[g]
    return LieElement(out)


def jacobi_check(x, y, z) -> LieElement:
    """[x,[y,z]] + [y,[z,x]] + [z,[x,y]]; zero for a Lie algebra."""
    return bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))


_INVOLUTION_FAMILY = {"e": "f", "f": "e", "h": "h", "d": "d", "C": "C"}


def anti_involution_gen(g: Gen) -> Gen:
    if g.family == "C":
        return CENTRAL
    return Gen(_INVOLUTION_FAMILY[g.family], -g.index)


def anti_involution(x) -> LieElement:
    """e_i -> f_{-i}, f_i -> e_{-i}, h_i -> h_{-i}, d_i -> d_{-i}, C -> C."""
    x = as_element(x)
    return LieElement({anti_involution_gen(g): c for g, c in x.coeffs.items()})


def generators(max_index: int, include_central: bool = True) -> list[Gen]:
    gens = [Gen(fam, i) for fam in "efhd" for i in range(-max_index, max_index + 1)]
    if include_central:
        gens.append(CENTRAL)
    return gens


def is_lowering(g: Gen) -> bool:
    """Generators spanning the lowering part: f_{-k} (k >= 0) and e, h, d with negative index."""
    if g.family == "f":
        return g.index <= 0
    return g.family != "C" and g.index < 0
