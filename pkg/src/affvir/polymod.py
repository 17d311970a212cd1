"""Rank-one modules Omega, Delta and Theta on C[s, t].

For parameters lambda, alpha (nonzero), beta, gamma the actions are

    Omega:  e_i g = lam^i alpha g(s-i, t-2)
            f_i g = -(lam^i/alpha) (t/2 - beta)(t/2 + beta + 1) g(s-i, t+2)
    Delta:  e_i g = -(lam^i/alpha) (t/2 + beta)(t/2 - beta - 1) g(s-i, t-2)
            f_i g = lam^i alpha g(s-i, t+2)
    Theta:  e_i g = lam^i alpha (t/2 + beta) g(s-i, t-2)
            f_i g = -(lam^i/alpha) (t/2 - beta) g(s-i, t+2)

and for all three h_i g = lam^i t g(s-i, t), d_i g = lam^i (s + i gamma) g(s-i, t),
C g = 0.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from affvir.arith import Poly2, Q, Rational, format_rational
from affvir.lie import Gen, as_element, bracket, generators
from affvir.linalg import Echelon

FLAVORS = ("omega", "delta", "theta")
_FLAVOR_ALIASES = {
    "omega": "omega", "Ω": "omega", "o": "omega",
    "delta": "delta", "Δ": "delta",
    "theta": "theta", "Θ": "theta",
}


def normalize_flavor(name: str) -> str:
    try:
        return _FLAVOR_ALIASES[name.strip() if name.strip() in _FLAVOR_ALIASES else name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown module flavor {name!r}") from None


@dataclass(frozen=True)
class ModuleParams:
    flavor: str
    lam: Rational
    alpha: Rational
    beta: Rational = Rational(0)
    gamma: Rational = Rational(0)

    def __post_init__(self):
        object.__setattr__(self, "flavor", normalize_flavor(self.flavor))
        for name in ("lam", "alpha", "beta", "gamma"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if not self.lam or not self.alpha:
            raise ValueError("lambda and alpha must be nonzero")

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "lambda": format_rational(self.lam),
            "alpha": format_rational(self.alpha),
            "beta": format_rational(self.beta),
            "gamma": format_rational(self.gamma),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModuleParams":
        return cls(
            data["flavor"],
            Q(data.get("lambda", data.get("lam"))),
            Q(data["alpha"]),
            Q(data.get("beta", "0")),
            Q(data.get("gamma", "0")),
        )


def _t_poly(*coeffs) -> Poly2:
    return Poly2({(0, k): c for k, c in enumerate(coeffs)})


@lru_cache(maxsize=None)
def raising_factor(p: ModuleParams) -> tuple[Rational, Poly2]:
    """(scalar, polynomial) with e_i g = lam^i * scalar * poly * g(s-i, t-2)."""
    half = Rational(1, 2)
    b = p.beta
    if p.flavor == "omega":
        return p.alpha, Poly2.const(1)
    if p.flavor == "delta":
        return -1 / p.alpha, _t_poly(b, half) * _t_poly(-b - 1, half)
    return p.alpha, _t_poly(b, half)


@lru_cache(maxsize=None)
def lowering_factor(p: ModuleParams) -> tuple[Rational, Poly2]:
    """(scalar, polynomial) with f_i g = lam^i * scalar * poly * g(s-i, t+2)."""
    half = Rational(1, 2)
    b = p.beta
    if p.flavor == "omega":
        return -1 / p.alpha, _t_poly(-b, half) * _t_poly(b + 1, half)
    if p.flavor == "delta":
        return p.alpha, Poly2.const(1)
    return -1 / p.alpha, _t_poly(-b, half)


def act_gen(g: Gen, poly: Poly2, p: ModuleParams) -> Poly2:
    fam, i = g
    if fam == "C" or not poly:
        return Poly2()
    lam_i = p.lam**i
    if fam == "h":
        return (Poly2.t() * poly.shift(i, 0)).scale(lam_i)
    if fam == "d":
        return (Poly2({(1, 0): 1, (0, 0): i * p.gamma}) * poly.shift(i, 0)).scale(lam_i)
    if fam == "e":
        c, fac = raising_factor(p)
        return (fac * poly.shift(i, 2)).scale(lam_i * c)
    c, fac = lowering_factor(p)
    return (fac * poly.shift(i, -2)).scale(lam_i * c)


def m_act(x, poly: Poly2, p: ModuleParams) -> Poly2:
    """Action of a generator or Lie element on a polynomial."""
    out = Poly2()
    for g, c in as_element(x).coeffs.items():
        out = out + act_gen(g, poly, p).scale(c)
    return out


@dataclass
class AxiomReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checked": self.checked, "violations": self.violations, "ok": self.ok}


class _ActionTable:
    """Memoized generator action on monomials s^a t^b, extended linearly."""

    def __init__(self, p: ModuleParams):
        self.p = p
        self.cache: dict[tuple[Gen, tuple[int, int]], Poly2] = {}

    def mono(self, g: Gen, key: tuple[int, int]) -> Poly2:
        r = self.cache.get((g, key))
        if r is None:
            r = act_gen(g, Poly2.monomial(*key), self.p)
            self.cache[(g, key)] = r
        return r

    def act(self, x, poly: Poly2) -> Poly2:
        out: dict = {}
        for g, cg in as_element(x).coeffs.items():
            for key, c in poly.terms.items():
                for k, v in self.mono(g, key).terms.items():
                    w = out.get(k, 0) + cg * c * v
                    if w:
                        out[k] = w
                    else:
                        del out[k]
        return Poly2._raw(out)


def module_axiom_check(p: ModuleParams, index_window: int = 3, degree_window: int = 4) -> AxiomReport:
    """Check [x,y].g = x.(y.g) - y.(x.g) on generator pairs and monomials s^a t^b."""
    if index_window < 1 or degree_window < 1:
        raise ValueError("windows must be >= 1")
    table = _ActionTable(p)
    gens = generators(index_window)
    report = AxiomReport()
    monos = [(a, b) for a in range(degree_window + 1) for b in range(degree_window + 1)]
    for x, y in itertools.combinations(gens, 2):
        br = bracket(x, y)
        for key in monos:
            g = Poly2.monomial(*key)
            lhs = table.act(br, g)
            rhs = table.act(x, table.act(y, g)) - table.act(y, table.act(x, g))
            report.checked += 1
            if lhs != rhs:
                report.violations.append(
                    {"x": repr(x), "y": repr(y), "monomial": list(key),
                     "lhs": lhs.to_json(), "rhs": rhs.to_json()}
                )
    return report


def theta_irreducible(beta) -> bool:
    """Theta(lam, alpha, beta, gamma) is irreducible iff 2*beta is not a nonnegative integer."""
    tb = 2 * Q(beta)
    return not (tb.denominator == 1 and tb >= 0)


def random_params(flavor: str, rng: random.Random, max_num: int = 7, max_den: int = 4) -> ModuleParams:
    def rat(nonzero=False):
        while True:
            x = Rational(rng.randint(-max_num, max_num), rng.randint(1, max_den))
            if x or not nonzero:
                return x
    return ModuleParams(flavor, rat(True), rat(True), rat(), rat())


@dataclass
class CyclicityResult:
    cyclic: bool
    reached: list
    missing: list
    span_dim: int
    word_length: int

    def to_json(self) -> dict:
        return {
            "cyclic": self.cyclic,
            "reached": self.reached,
            "missing": self.missing,
            "span_dim": self.span_dim,
            "word_length": self.word_length,
        }


def cyclicity_probe(
    g: Poly2,
    p: ModuleParams,
    max_word_length: int = 4,
    max_index: int = 2,
    s_max: int = 2,
    t_max: int = 2,
) -> CyclicityResult:
    """Span of {u.g} over words of bounded length, tested against the window s^a t^b.

    A window monomial counts as reached only if it lies in the span of the
    generated vectors themselves; nothing is projected away, so ``cyclic`` is
    a sound witness.  A negative answer is evidence only.
    """
    if not g:
        raise ValueError("cyclicity probe needs a nonzero polynomial")
    table = _ActionTable(p)
    gens = generators(max_index, include_central=False)
    span = Echelon()
    span.add(dict(g.terms))
    frontier = [g]
    for _ in range(max_word_length):
        nxt = []
        for v in frontier:
            for x in gens:
                w = table.act(x, v)
                if w and span.add(dict(w.terms)) is None:
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    window = [(a, b) for a in range(s_max + 1) for b in range(t_max + 1)]
    reached = [list(k) for k in window if span.contains({k: Rational(1)})]
    missing = [list(k) for k in window if list(k) not in reached]
    return CyclicityResult(not missing, reached, missing, span.rank, max_word_length)


def invariant_under_all(sub_basis: list[Poly2], p: ModuleParams, predicate, max_index: int = 2) -> bool:
    """True when every generator maps each basis polynomial into the set cut out by ``predicate``."""
    for x in generators(max_index):
        for v in sub_basis:
            if not predicate(act_gen(x, v, p)):
                return False
    return True
