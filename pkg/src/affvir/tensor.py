"""Tensor products M(lambda, alpha, beta, gamma) (x) V(eta, epsilon, theta).

A tensor element is stored as a map from Verma monomials to polynomials in
(s, t): {v_j: p_j} stands for sum_j p_j (x) v_j.  Verma monomials are linearly
independent (and in quotient mode they are kept in normal form modulo the
radical), so this representation is canonical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable

from affvir.arith import Poly1, Poly2, Q, Rational, format_rational
from affvir.lie import CENTRAL, Gen, as_element, generators, order_key
from affvir.linalg import Echelon, solve_square
from affvir.pbw import Monomial, monomial_from_json, monomial_repr, monomial_to_json
from affvir.polymod import ModuleParams, act_gen, theta_irreducible
from affvir.verma import (
    HighestWeight,
    TruncationOverflow,
    VermaModule,
    WeightKey,
    verma_basis,
)


class HypothesisViolation(ValueError):
    """Theta with 2*beta a nonnegative integer, where irreducibility is required."""


class PreconditionError(ValueError):
    pass


@lru_cache(maxsize=64)
def _verma(hw: HighestWeight, max_depth: int | None, quotient: bool) -> VermaModule:
    return VermaModule(hw, max_depth=max_depth, quotient=quotient)


@dataclass(frozen=True)
class TensorSpec:
    params: ModuleParams
    hw: HighestWeight
    quotient: bool = False
    max_depth: int | None = None

    @property
    def verma(self) -> VermaModule:
        return _verma(self.hw, self.max_depth, self.quotient)

    def require_irreducible_factor(self) -> None:
        if self.params.flavor == "theta" and not theta_irreducible(self.params.beta):
            raise HypothesisViolation(
                f"Theta module with 2*beta = {format_rational(2 * self.params.beta)} in Z_+ is reducible"
            )

    def normalize(self, w: "TensorElement") -> "TensorElement":
        """Reduce the Verma side modulo the radical (no-op for the Verma module)."""
        if not self.quotient:
            return w
        V = self.verma
        out: dict[Monomial, Poly2] = {}
        for mono, p in w.terms.items():
            for m2, c in V.monomial_vector(mono).items():
                _acc_poly(out, m2, p.scale(c))
        return TensorElement._raw(out)

    def to_json(self) -> dict:
        out = {"module": self.params.to_json(), "highest_weight": self.hw.to_json(), "quotient": self.quotient}
        if self.max_depth is not None:
            out["max_depth"] = self.max_depth
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TensorSpec":
        module = data.get("module") or {k: data[k] for k in ("flavor", "lambda", "alpha", "beta", "gamma") if k in data}
        hw = data.get("highest_weight") or {k: data[k] for k in ("eta", "epsilon", "theta") if k in data}
        return cls(
            ModuleParams.from_json(module),
            HighestWeight.from_json(hw),
            bool(data.get("quotient", False)),
            data.get("max_depth"),
        )


def _acc_poly(out: dict, key, p: Poly2) -> None:
    if not p:
        return
    q = out.get(key)
    q = p if q is None else q + p
    if q:
        out[key] = q
    else:
        out.pop(key, None)


class TensorElement:
    """sum_j p_j(s, t) (x) v_j over distinct Verma monomials v_j."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | Iterable | None = None):
        out: dict[Monomial, Poly2] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for mono, p in items:
            _acc_poly(out, tuple(sorted(mono, key=order_key)), p)
        self.terms = out

    @classmethod
    def _raw(cls, terms: dict) -> "TensorElement":
        w = cls.__new__(cls)
        w.terms = terms
        return w

    @classmethod
    def pure(cls, p: Poly2 | int | Rational, vec: dict | Monomial = ()) -> "TensorElement":
        """p (x) v for a polynomial and a Verma vector (or a single monomial)."""
        if not isinstance(p, Poly2):
            p = Poly2.const(p)
        if not isinstance(vec, dict):
            vec = {tuple(vec): Rational(1)}
        return cls({m: p.scale(c) for m, c in vec.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for m, p in other.terms.items():
            _acc_poly(out, m, p)
        return TensorElement._raw(out)

    def __neg__(self) -> "TensorElement":
        return self.scale(-1)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = Q(c)
        if not c:
            return TensorElement()
        return TensorElement._raw({m: p.scale(c) for m, p in self.terms.items()})

    def mul_poly(self, q: Poly2) -> "TensorElement":
        out: dict = {}
        for m, p in self.terms.items():
            _acc_poly(out, m, p * q)
        return TensorElement._raw(out)

    def s_degree(self) -> int:
        return max((p.degree_s() for p in self.terms.values()), default=-1)

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=lambda m: [order_key(g) for g in m])

    def coeff_of_s(self, i: int) -> dict[Monomial, Poly1]:
        """The vector of t-polynomials multiplying s^i."""
        out = {}
        for m in self.monomials():
            a = self.terms[m].coeff_of_s(i)
            if a:
                out[m] = a
        return out

    def flat(self) -> dict:
        """Coordinates keyed by (monomial, s-exponent, t-exponent)."""
        return {(m, a, b): c for m, p in self.terms.items() for (a, b), c in p.terms.items()}

    def is_constant_pure(self) -> bool:
        """True when the element is 1 (x) v' for a nonzero v'."""
        return bool(self.terms) and all(set(p.terms) == {(0, 0)} for p in self.terms.values())

    def to_json(self) -> list:
        return [{"monomial": monomial_to_json(m), "poly": self.terms[m].to_json()} for m in self.monomials()]

    @classmethod
    def from_json(cls, data) -> "TensorElement":
        return cls([(monomial_from_json(item["monomial"]), Poly2.from_json(item["poly"])) for item in data])

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[m]!r})(x){monomial_repr(m)}" for m in self.monomials())


def random_element(rng: random.Random, depth: int = 2) -> TensorElement:
    """A nonzero element with 1 to 3 Verma components of depth <= min(depth, 2)."""
    monos = [m for dp in range(min(depth, 2) + 1) for ch in (-2, 0, 2) for m in verma_basis(WeightKey(dp, ch))]
    terms = []
    for mono in rng.sample(monos, rng.randint(1, 3)):
        poly = Poly2({(rng.randint(0, 2), rng.randint(0, 2)): Q(f"{rng.randint(-5, 5) or 1}/{rng.randint(1, 3)}")
                      for _ in range(rng.randint(1, 3))})
        terms.append((mono, poly))
    w = TensorElement(terms)
    return w if w else TensorElement.pure(1)


def tensor_act(x, w: TensorElement, spec: TensorSpec) -> TensorElement:
    """x(p (x) v) = (x.p) (x) v + p (x) (x.v); C acts by theta."""
    V = spec.verma
    out: dict[Monomial, Poly2] = {}
    for g, cg in as_element(x).coeffs.items():
        for mono, p in w.terms.items():
            if g != CENTRAL:
                _acc_poly(out, mono, act_gen(g, p, spec.params).scale(cg))
            for m2, c in V.act_gen(g, mono).items():
                _acc_poly(out, m2, p.scale(cg * c))
    return TensorElement._raw(out)


def act_word(word: Iterable[Gen], w: TensorElement, spec: TensorSpec) -> TensorElement:
    """Apply generators in the order given (first entry acts first)."""
    for g in word:
        w = tensor_act(g, w, spec)
    return w


def annihilation_bound(w: TensorElement, spec: TensorSpec) -> int:
    """Max of K(v) over the Verma monomials of ``w``."""
    V = spec.verma
    return max((V.annihilation_bound(V.monomial_vector(m)) for m in w.terms), default=1)


def _t_lin(c0, c1) -> Poly2:
    return Poly2({(0, 0): c0, (0, 1): c1})


def power_act(family: str, m: int, k: int, w: TensorElement, spec: TensorSpec) -> TensorElement:
    """Closed form of x_m^k w for m at least the annihilation bound of w."""
    family = family.lower()
    if family not in "efhd" or len(family) != 1:
        raise ValueError(f"unknown family {family!r}")
    if k < 1:
        raise ValueError("k must be positive")
    if w and m < annihilation_bound(w, spec):
        raise PreconditionError(f"m = {m} is below the annihilation bound {annihilation_bound(w, spec)}")
    p = spec.params
    lam_m = p.lam**m
    half = Rational(1, 2)
    b = p.beta
    if family == "h":
        fac, scalar, ds, dt = Poly2.monomial(0, k), lam_m**k, k * m, 0
    elif family == "d":
        fac = Poly2.const(1)
        for i in range(k):
            fac = fac * Poly2({(1, 0): 1, (0, 0): m * p.gamma - m * i})
        scalar, ds, dt = lam_m**k, k * m, 0
    elif family == "e":
        ds, dt = k * m, 2 * k
        fac = Poly2.const(1)
        if p.flavor == "omega":
            scalar = (lam_m * p.alpha) ** k
        elif p.flavor == "theta":
            scalar = (lam_m * p.alpha) ** k
            for n in range(k):
                fac = fac * _t_lin(b - n, half)
        else:
            scalar = (-lam_m / p.alpha) ** k
            for n in range(k):
                fac = fac * _t_lin(b - n, half) * _t_lin(-b - 1 - n, half)
    else:
        ds, dt = k * m, -2 * k
        fac = Poly2.const(1)
        if p.flavor == "delta":
            scalar = (lam_m * p.alpha) ** k
        elif p.flavor == "theta":
            scalar = (-lam_m / p.alpha) ** k
            for n in range(k):
                fac = fac * _t_lin(-b + n, half)
        else:
            scalar = (-lam_m / p.alpha) ** k
            for n in range(k):
                fac = fac * _t_lin(-b + n, half) * _t_lin(b + 1 + n, half)
    fac = fac.scale(scalar)
    return TensorElement._raw({mono: fac * q.shift(ds, dt) for mono, q in w.terms.items()})


# -- omega operators ---------------------------------------------------------------


def omega_terms(l: int, m: int, r: int) -> list[tuple[Rational, tuple[Gen, Gen]]]:
    """sum_i C(r,i)(-1)^(r-i) d_{l-m-i} d_{m+i} as (coefficient, (first applied, second applied))."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return [
        (Rational(comb(r, i) * (-1) ** (r - i)), (Gen("d", m + i), Gen("d", l - m - i)))
        for i in range(r + 1)
    ]


def omega_apply(l: int, m: int, r: int, w, target):
    """Apply omega_{l,m}^{(r)} to a Poly2 (target ModuleParams) or a TensorElement (target TensorSpec)."""
    if isinstance(w, Poly2):
        out = Poly2()
        for c, (first, second) in omega_terms(l, m, r):
            out = out + act_gen(second, act_gen(first, w, target), target).scale(c)
        return out
    out = TensorElement()
    for c, (first, second) in omega_terms(l, m, r):
        out = out + act_word((first, second), w, target).scale(c)
    return out


def binomial_moment(r: int, j: int) -> int:
    """sum_i C(r,i)(-1)^(r-i) i^j, which vanishes for j < r."""
    return sum(comb(r, i) * (-1) ** (r - i) * i**j for i in range(r + 1))


# -- Vandermonde extraction ----------------------------------------------------------


@dataclass
class VandermondeResult:
    element: TensorElement
    power: int  # which coefficient w_j of sum_j m^j w_j was extracted
    combination: list[tuple[Rational, int]]  # (coefficient, m): element = sum c lam^-m d_m w
    bound: int
    degree: int


def vandermonde_extract(w: TensorElement, spec: TensorSpec) -> VandermondeResult:
    """Isolate the top m-power coefficient of lam^-m d_m w over m = K..K+r+1."""
    if not w:
        raise ValueError("vandermonde extraction of the zero element")
    K = annihilation_bound(w, spec)
    r = max(w.s_degree(), 0)
    ms = list(range(K, K + r + 2))
    images = [tensor_act(Gen("d", mm), w, spec).scale(spec.params.lam ** (-mm)) for mm in ms]
    vinv = solve_square([[Rational(mm) ** j for j in range(r + 2)] for mm in ms])
    j = r + 1 if spec.params.gamma else r
    combo = [(vinv[j][idx], mm) for idx, mm in enumerate(ms) if vinv[j][idx]]
    out = TensorElement()
    for c, mm in combo:
        out = out + images[ms.index(mm)].scale(c)
    return VandermondeResult(out, j, combo, K, r)


# -- generation span --------------------------------------------------------------


@dataclass
class SpanResult:
    reached: list
    missing: list
    span_dim: int
    skipped_overflows: int

    @property
    def complete(self) -> bool:
        return not self.missing

    def to_json(self) -> dict:
        return {
            "complete": self.complete,
            "reached": self.reached,
            "missing": self.missing,
            "span_dim": self.span_dim,
            "skipped_overflows": self.skipped_overflows,
        }


def _window_label(mono: Monomial, a: int, b: int) -> str:
    vec = f"{monomial_repr(mono)} v_h" if mono else "v_h"
    return f"s^{a} t^{b} (x) {vec}"


def generation_span(
    w: TensorElement,
    spec: TensorSpec,
    max_word_length: int = 3,
    max_index: int = 1,
    s_max: int = 2,
    t_max: int = 2,
    depth: int = 0,
    charge_min: int = 0,
    charge_max: int = 0,
) -> SpanResult:
    """Span of u.w over words of bounded length, tested on the window basis.

    Applications that leave the depth cap of ``spec`` are skipped, so the
    computed span is a subspace of the true one and every reported hit is sound.
    """
    if not w:
        raise ValueError("generation span of the zero element")
    w = spec.normalize(w)
    gens = generators(max_index, include_central=False)
    span = Echelon()
    span.add(w.flat())
    frontier = [w]
    skipped = 0
    for _ in range(max_word_length):
        nxt = []
        for v in frontier:
            for x in gens:
                try:
                    u = tensor_act(x, v, spec)
                except TruncationOverflow:
                    skipped += 1
                    continue
                if u and span.add(u.flat()) is None:
                    nxt.append(u)
        frontier = nxt
        if not frontier:
            break
    V = spec.verma
    reached, missing = [], []
    for dp in range(depth + 1):
        for ch in range(charge_min, charge_max + 1):
            for mono in verma_basis(WeightKey(dp, ch)):
                for a in range(s_max + 1):
                    for b in range(t_max + 1):
                        vec = TensorElement.pure(Poly2.monomial(a, b), V.monomial_vector(mono))
                        if not vec:
                            continue
                        label = _window_label(mono, a, b)
                        (reached if span.contains(vec.flat()) else missing).append(label)
    return SpanResult(reached, missing, span.rank, skipped)


# -- isomorphism classification --------------------------------------------------------


def modules_isomorphic(p1: ModuleParams, p2: ModuleParams) -> bool:
    if p1.flavor != p2.flavor:
        return False
    if p1 == p2:
        return True
    if p1.flavor == "theta":
        return False
    return (p1.lam, p1.alpha, p1.gamma) == (p2.lam, p2.alpha, p2.gamma) and p1.beta == -p2.beta - 1


def classify_isomorphism(spec1: TensorSpec, spec2: TensorSpec) -> bool:
    """Isomorphism of two irreducible tensor modules, decided on parameters."""
    spec1.require_irreducible_factor()
    spec2.require_irreducible_factor()
    return modules_isomorphic(spec1.params, spec2.params) and spec1.hw == spec2.hw


# -- d-injectivity -----------------------------------------------------------------


@dataclass
class InjectivityResult:
    index: int
    injective: bool
    domain_dim: int
    rank: int

    def to_json(self) -> dict:
        return {"index": self.index, "injective": self.injective, "domain_dim": self.domain_dim, "rank": self.rank}


def d_injectivity_check(
    i: int,
    spec: TensorSpec,
    s_max: int = 2,
    t_max: int = 2,
    depth: int = 2,
    charge_min: int = -2,
    charge_max: int = 2,
) -> InjectivityResult:
    """Rank of d_i on the window s^a t^b (x) v, (depth, charge) in range."""
    V = _verma(spec.hw, None, spec.quotient)
    free = TensorSpec(spec.params, spec.hw, spec.quotient, None)
    domain = []
    for dp in range(depth + 1):
        for ch in range(charge_min, charge_max + 1):
            for mono in verma_basis(WeightKey(dp, ch)):
                vec = V.monomial_vector(mono)
                if spec.quotient and vec != {mono: 1}:
                    continue  # not a normal-form basis monomial of the quotient
                domain.extend(
                    TensorElement.pure(Poly2.monomial(a, b), mono)
                    for a in range(s_max + 1)
                    for b in range(t_max + 1)
                )
    if not domain:
        raise ValueError("empty window")
    ech = Echelon()
    for v in domain:
        ech.add(tensor_act(Gen("d", i), v, free).flat())
    return InjectivityResult(i, ech.rank == len(domain), len(domain), ech.rank)
