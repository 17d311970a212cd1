"""Truncated Verma modules and their irreducible quotients.

Vectors are dicts from lowering monomials to rationals; the monomial m stands
for m . v_h.  Lowering generators are f_{-k} (k >= 0) and e_{-k}, h_{-k},
d_{-k} (k >= 1).  Weight spaces are graded by depth (sum of negated indices)
and charge (+2 per e factor, -2 per f factor), so that
d_0 v = (eta - depth) v and h_0 v = (epsilon + charge) v.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from affvir.arith import Q, Rational, format_rational
from affvir.lie import CENTRAL, Gen, anti_involution_gen, as_element, bracket_gens, is_lowering, order_key
from affvir.linalg import Echelon, axpy, kernel
from affvir.pbw import Monomial, monomial_from_json, monomial_repr, monomial_to_json

Vector = dict  # Monomial -> Rational


class TruncationOverflow(ArithmeticError):
    """An action left the depth window of a truncated module."""


@dataclass(frozen=True)
class HighestWeight:
    eta: Rational
    eps: Rational
    theta: Rational

    def __post_init__(self):
        for name in ("eta", "eps", "theta"):
            object.__setattr__(self, name, Q(getattr(self, name)))

    def to_json(self) -> dict:
        return {
            "eta": format_rational(self.eta),
            "epsilon": format_rational(self.eps),
            "theta": format_rational(self.theta),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HighestWeight":
        return cls(Q(data["eta"]), Q(data.get("epsilon", data.get("eps"))), Q(data["theta"]))


class WeightKey(NamedTuple):
    depth: int
    charge: int


def depth_of(mono: Monomial) -> int:
    return -sum(g.index for g in mono)


def charge_of(mono: Monomial) -> int:
    return sum(2 if g.family == "e" else -2 if g.family == "f" else 0 for g in mono)


def weight_of(mono: Monomial) -> WeightKey:
    return WeightKey(depth_of(mono), charge_of(mono))


def vector_depth(vec: Vector) -> int:
    return max((depth_of(m) for m in vec), default=0)


def _multisets(slots: list[Gen], depth: int, start: int = 0):
    """Multisets of generators from ``slots`` (positive depth each) with total depth."""
    if depth == 0:
        yield ()
        return
    for k in range(start, len(slots)):
        g = slots[k]
        dg = -g.index
        if dg > depth:
            continue
        for rest in _multisets(slots, depth - dg, k):
            yield (g,) + rest


def verma_basis(key: WeightKey) -> list[Monomial]:
    """All lowering PBW monomials of the given depth and charge."""
    depth, charge = key
    if depth < 0 or charge % 2:
        return []
    slots = [Gen(fam, -k) for k in range(1, depth + 1) for fam in "fehd"]
    out = []
    for ms in _multisets(slots, depth):
        n_e = sum(1 for g in ms if g.family == "e")
        n_f = sum(1 for g in ms if g.family == "f")
        f0 = n_e - n_f - charge // 2
        if f0 < 0:
            continue
        out.append(tuple(sorted(ms + (Gen("f", 0),) * f0, key=order_key)))
    out.sort(key=lambda m: [order_key(g) for g in m])
    return out


def weight_keys(max_depth: int, charge_min: int, charge_max: int) -> list[WeightKey]:
    return [
        WeightKey(dp, c)
        for dp in range(max_depth + 1)
        for c in range(charge_min, charge_max + 1)
        if c % 2 == 0
    ]


def raising_operators(depth: int) -> list[Gen]:
    """e_0 together with every positive-index generator up to ``depth``."""
    ops = [Gen("e", 0)]
    for j in range(1, depth + 1):
        ops.extend(Gen(fam, j) for fam in "efhd")
    return ops


class VermaModule:
    """The Verma module with highest weight (eta, epsilon, theta), optionally truncated.

    With ``quotient=True`` vectors are kept reduced modulo the radical of the
    contravariant form, which realizes the irreducible quotient weight space by
    weight space.
    """

    def __init__(self, hw: HighestWeight, max_depth: int | None = None, quotient: bool = False):
        self.hw = hw
        self.max_depth = max_depth
        self.quotient = quotient
        # plain dicts: single-key reads/writes are atomic under the GIL and
        # cached values are never mutated, so sharing across threads is safe
        self._memo: dict[tuple[Gen, Monomial], tuple] = {}
        self._gram: dict[WeightKey, list[list[Rational]]] = {}
        self._radical: dict[WeightKey, Echelon] = {}

    # -- action on the Verma module -------------------------------------------------

    def _act_free(self, x: Gen, mono: Monomial) -> tuple:
        key = (x, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out: dict[Monomial, Rational] = {}
        if x == CENTRAL:
            out[mono] = self.hw.theta
        elif not mono:
            if is_lowering(x):
                out[(x,)] = Rational(1)
            elif x == Gen("d", 0):
                if self.hw.eta:
                    out[()] = self.hw.eta
            elif x == Gen("h", 0):
                if self.hw.eps:
                    out[()] = self.hw.eps
        elif is_lowering(x) and order_key(x) <= order_key(mono[0]):
            out[(x,) + mono] = Rational(1)
        elif -x.index > 0 or depth_of(mono) >= x.index:
            # x y rest = y (x rest) + [x, y] rest
            y, rest = mono[0], mono[1:]
            for m, c in self._act_free(x, rest):
                for m2, c2 in self._act_free(y, m):
                    _acc(out, m2, c * c2)
            for g, cg in bracket_gens(x, y):
                for m, c in self._act_free(g, rest):
                    _acc(out, m, cg * c)
        # otherwise x lowers the depth below zero and kills the vector
        res = tuple(out.items())
        self._memo[key] = res
        return res

    def act_gen(self, x: Gen, mono: Monomial) -> Vector:
        new_depth = depth_of(mono) - x.index
        if self.max_depth is not None and new_depth > self.max_depth and x != CENTRAL:
            raise TruncationOverflow(f"{x!r} on depth {depth_of(mono)} exceeds depth cap {self.max_depth}")
        out = dict(self._act_free(x, mono))
        return self.reduce(out) if self.quotient else out

    def act(self, x, vec: Vector) -> Vector:
        """Action of a generator or Lie element on a vector."""
        out: dict[Monomial, Rational] = {}
        for g, cg in as_element(x).coeffs.items():
            for m, c in vec.items():
                axpy(out, cg * c, self.act_gen(g, m))
        return out

    def act_word(self, word: Iterable[Gen], vec: Vector) -> Vector:
        """Apply the generators of ``word`` from right to left (as a product)."""
        for g in reversed(list(word)):
            vec = self.act(g, vec)
        return vec

    def monomial_vector(self, mono: Monomial) -> Vector:
        vec = {tuple(mono): Rational(1)}
        return self.reduce(vec) if self.quotient else vec

    # -- weight spaces -------------------------------------------------------------

    def basis(self, key: WeightKey) -> list[Monomial]:
        return verma_basis(key)

    def singular_vectors(self, key: WeightKey) -> list[Vector]:
        """Basis of the vectors in weight space ``key`` killed by every raising operator."""
        key = WeightKey(*key)
        if key.depth < 0 or (key.depth == 0 and key.charge >= 0):
            raise ValueError("singular vectors are sought at depth >= 1 or at depth 0 with negative charge")
        basis = self.basis(key)
        ops = raising_operators(key.depth)
        images = []
        for m in basis:
            img: dict = {}
            for k, op in enumerate(ops):
                for m2, c in self._act_free(op, m):
                    img[(k, m2)] = c
            images.append(img)
        return [{basis[j]: c for j, c in sorted(vec.items())} for vec in kernel(images)]

    def pairing(self, ma: Monomial, mb: Monomial) -> Rational:
        """Coefficient of v_h in omega(ma) . mb . v_h (unreduced Verma)."""
        if weight_of(ma) != weight_of(mb):
            return Rational(0)
        vec: dict[Monomial, Rational] = {tuple(mb): Rational(1)}
        for y in ma:
            w = anti_involution_gen(y)
            out: dict[Monomial, Rational] = {}
            for m, c in vec.items():
                for m2, c2 in self._act_free(w, m):
                    _acc(out, m2, c * c2)
            vec = out
        return vec.get((), Rational(0))

    def gram(self, key: WeightKey) -> list[list[Rational]]:
        key = WeightKey(*key)
        g = self._gram.get(key)
        if g is None:
            basis = self.basis(key)
            g = [[self.pairing(a, b) for b in basis] for a in basis]
            self._gram[key] = g
        return g

    def form(self, u: Vector, w: Vector) -> Rational:
        total = Rational(0)
        for a, ca in u.items():
            for b, cb in w.items():
                if weight_of(a) == weight_of(b):
                    total += ca * cb * self.pairing(a, b)
        return total

    def shapovalov_radical(self, key: WeightKey) -> list[Vector]:
        key = WeightKey(*key)
        basis = self.basis(key)
        g = self.gram(key)
        images = [{a: g[a][b] for a in range(len(basis)) if g[a][b]} for b in range(len(basis))]
        return [{basis[j]: c for j, c in sorted(vec.items())} for vec in kernel(images)]

    def _radical_echelon(self, key: WeightKey) -> Echelon:
        ech = self._radical.get(key)
        if ech is None:
            ech = Echelon()
            for v in self.shapovalov_radical(key):
                ech.add(v)
            self._radical[key] = ech
        return ech

    def reduce(self, vec: Vector) -> Vector:
        """Normal form modulo the radical (identity on the Verma module itself)."""
        if not self.quotient or not vec:
            return vec
        by_key: dict[WeightKey, dict] = {}
        for m, c in vec.items():
            by_key.setdefault(weight_of(m), {})[m] = c
        out: dict[Monomial, Rational] = {}
        for key, part in by_key.items():
            out.update(self._radical_echelon(key).reduce(part))
        return out

    def reduce_rows(self, key: WeightKey) -> list[tuple[Monomial, dict]]:
        """Pivot rows of the radical at ``key`` (empty for the Verma module)."""
        if not self.quotient:
            return []
        return [(piv, row) for piv, row, _ in self._radical_echelon(WeightKey(*key)).rows]

    def is_zero(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    def annihilation_bound(self, vec: Vector) -> int:
        """Least K >= 1 with d_m, e_m, f_m, h_m killing ``vec`` for every m >= K."""
        vec = self.reduce(vec)
        if not vec:
            raise ValueError("annihilation bound of the zero vector")
        top = vector_depth(vec)
        bound = 1
        for m in range(1, top + 1):
            if any(self.act(Gen(fam, m), vec) for fam in "defh"):
                bound = m + 1
        return bound


def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def vector_to_json(vec: Vector) -> list:
    return [
        [monomial_to_json(m), format_rational(c)]
        for m, c in sorted(vec.items(), key=lambda kv: [order_key(g) for g in kv[0]])
    ]


def vector_from_json(data) -> Vector:
    out: dict = {}
    for mono, c in data:
        _acc(out, monomial_from_json(mono), Q(c))
    return out


def vector_repr(vec: Vector) -> str:
    if not vec:
        return "0"
    return " + ".join(
        f"({format_rational(c)})*{monomial_repr(m)}.v"
        for m, c in sorted(vec.items(), key=lambda kv: [order_key(g) for g in kv[0]])
    )
