"""Exact reducibility test for the Verma module with highest weight (eta, epsilon, theta).

With tau = theta + 2 the module is reducible iff one of

    (i)   epsilon + m tau - n = 0            for some integers m, n >= 0
    (ii)  -epsilon + m tau - n - 1 = 0       for some integers m, n >= 1
    (iii) tau != 0 and F(m, n) = 0           for some integers m, n >= 1

where F(m, n) = A (m^2 + n^2) + sqrt(D) (m^2 - n^2) - 24 m n + B + 48 eta'
with eta' = eta + (epsilon^2 + 2 epsilon) / (4 tau) and

    A = (-theta^2 + 14 theta + 26) / tau
    B = (2 theta^2 - 4 theta - 4) / tau
    D = (theta^2 - 2 theta - 2)(theta^2 - 26 theta - 50) / tau^2.

Conditions (i) and (ii) are linear in (m, n) and reduce to a congruence.
For (iii) note A^2 - D = 144 identically.  If D is not the square of a
rational, sqrt(D) is irrational or imaginary and F = 0 forces m = n.  If
D = s^2, put a = A + s (either sign of s); then a != 0 and

    a F(m, n) = (a m - 12 n)^2 + a c,     c = B + 48 eta',

so F = 0 iff -a c = r^2 for a rational r and a m - 12 n = +-r, again a linear
condition.  Every case is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import gmpy2

from affvir.arith import Q, Rational, format_rational
from affvir.verma import HighestWeight, VermaModule, WeightKey, weight_keys

CONDITIONS = ("i", "ii", "iii")


@dataclass(frozen=True)
class Witness:
    condition: str
    m: int
    n: int
    branch: str | None = None  # sign of sqrt(D) used for (iii) when D is a square

    def to_json(self) -> dict:
        out = {"condition": self.condition, "m": self.m, "n": self.n}
        if self.branch is not None:
            out["branch"] = self.branch
        return out

    def key(self) -> WeightKey:
        """Weight of the corresponding submodule generator: (depth, charge)."""
        if self.condition == "i":
            return WeightKey((self.n + 1) * self.m, -2 * (self.n + 1))
        if self.condition == "ii":
            return WeightKey(self.n * self.m, 2 * self.n)
        return WeightKey(self.m * self.n, 0)


@dataclass
class Verdict:
    verdict: str  # "reducible" | "irreducible" | "unknown_up_to_bound"
    witness: Witness | None = None
    witnesses: list[Witness] = field(default_factory=list)
    coefficients: dict | None = None
    search_bound: int = 0

    @property
    def reducible(self) -> bool:
        return self.verdict == "reducible"

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict, "search_bound": self.search_bound}
        if self.witness is not None:
            out.update(self.witness.to_json())
        out["witnesses"] = [w.to_json() for w in self.witnesses]
        if self.coefficients is not None:
            out["coefficients"] = self.coefficients
        return out


def rational_sqrt(x: Rational) -> Rational | None:
    """The nonnegative rational square root of x, or None."""
    x = Q(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    if not (gmpy2.is_square(p) and gmpy2.is_square(q)):
        return None
    return Rational(gmpy2.isqrt(p), gmpy2.isqrt(q))


def _ceil(x: Rational) -> int:
    return int(gmpy2.ceil(x))


def solve_linear(c0, tau, m_min: int, n_min: int) -> tuple[int, int] | None:
    """Integers m >= m_min, n >= n_min with n = c0 + m tau, minimizing m + n.

    Returns None when there is no solution.
    """
    c0, tau = Q(c0), Q(tau)
    if tau == 0:
        if c0.denominator == 1 and c0 >= n_min:
            return m_min, int(c0)
        return None
    # c0 + m tau integral  <=>  m P = -A (mod L) with L the common denominator
    L = int(c0.denominator * tau.denominator // gcd(int(c0.denominator), int(tau.denominator)))
    P = int(tau * L) % L
    A = int(c0 * L) % L
    g = gcd(P, L)
    if (-A) % g:
        return None
    mod = L // g
    r = 0 if mod == 1 else ((-A) // g) * pow(P // g, -1, mod) % mod

    def first_at_least(lo: int) -> int:
        return lo + (r - lo) % mod

    def last_at_most(hi: int) -> int:
        return hi - (hi - r) % mod

    if tau > 0:
        lo = max(m_min, _ceil((n_min - c0) / tau))
        m = first_at_least(lo)
    else:
        hi = int(gmpy2.floor((c0 - n_min) / (-tau)))
        lo = first_at_least(m_min)
        if lo > hi:
            return None
        # m + n = c0 + m (1 + tau) is monotone in m
        m = lo if 1 + tau >= 0 else last_at_most(hi)
    n = c0 + m * tau
    return m, int(n)


def criterion_coefficients(theta) -> dict | None:
    theta = Q(theta)
    tau = theta + 2
    if tau == 0:
        return None
    return {
        "A": (-theta**2 + 14 * theta + 26) / tau,
        "B": (2 * theta**2 - 4 * theta - 4) / tau,
        "D": (theta**2 - 2 * theta - 2) * (theta**2 - 26 * theta - 50) / tau**2,
    }


def condition_i(hw: HighestWeight) -> Witness | None:
    sol = solve_linear(hw.eps, hw.theta + 2, 0, 0)
    return Witness("i", *sol) if sol else None


def condition_ii(hw: HighestWeight) -> Witness | None:
    sol = solve_linear(-hw.eps - 1, hw.theta + 2, 1, 1)
    return Witness("ii", *sol) if sol else None


def condition_iii(hw: HighestWeight) -> Witness | None:
    coeffs = criterion_coefficients(hw.theta)
    if coeffs is None:
        return None
    tau = hw.theta + 2
    A, B, D = coeffs["A"], coeffs["B"], coeffs["D"]
    c = B + 48 * (hw.eta + (hw.eps**2 + 2 * hw.eps) / (4 * tau))
    s = rational_sqrt(D)
    if s is None:
        # m = n; then (2A - 24) m^2 + c = 0
        lead = 2 * A - 24
        if lead == 0:
            return Witness("iii", 1, 1) if c == 0 else None
        root = rational_sqrt(-c / lead)
        if root is None or root.denominator != 1 or root < 1:
            return None
        return Witness("iii", int(root), int(root))
    best: Witness | None = None
    for sign, label in ((1, "+"), (-1, "-")):
        a = A + sign * s
        r = rational_sqrt(-a * c)
        if r is None:
            continue
        for rr in {r, -r}:
            # a m - 12 n = rr  <=>  n = -rr/12 + m a/12
            sol = solve_linear(-rr / 12, a / 12, 1, 1)
            if sol is None:
                continue
            w = Witness("iii", *sol, branch=label)
            if best is None or (w.m + w.n, w.m) < (best.m + best.n, best.m):
                best = w
    return best


def residual_iii(hw: HighestWeight, m: int, n: int, sqrt_d) -> Rational:
    """F(m, n) for an explicit (rational) choice of sqrt(D)."""
    coeffs = criterion_coefficients(hw.theta)
    tau = hw.theta + 2
    A, B = coeffs["A"], coeffs["B"]
    eta_p = hw.eta + (hw.eps**2 + 2 * hw.eps) / (4 * tau)
    return A * (m * m + n * n) + sqrt_d * (m * m - n * n) - 24 * m * n + B + 48 * eta_p


def brute_force_witnesses(hw: HighestWeight, bound: int) -> list[Witness]:
    """Every (condition, m, n) with m, n <= bound satisfied exactly (square D only for (iii))."""
    out = []
    tau = hw.theta + 2
    coeffs = criterion_coefficients(hw.theta)
    s = rational_sqrt(coeffs["D"]) if coeffs else None
    for m in range(bound + 1):
        for n in range(bound + 1):
            if hw.eps + m * tau - n == 0:
                out.append(Witness("i", m, n))
            if m >= 1 and n >= 1:
                if -hw.eps + m * tau - n - 1 == 0:
                    out.append(Witness("ii", m, n))
                if coeffs is not None:
                    if s is None:
                        if m == n and residual_iii(hw, m, n, 0) == 0:
                            out.append(Witness("iii", m, n))
                    else:
                        for sign, label in ((1, "+"), (-1, "-")):
                            if residual_iii(hw, m, n, sign * s) == 0:
                                out.append(Witness("iii", m, n, branch=label))
    return out


def verma_reducibility_criterion(hw: HighestWeight, search_bound: int = 50) -> Verdict:
    """Decide reducibility; the reported witness minimizes m + n (ties by condition order)."""
    if search_bound < 1:
        raise ValueError("search_bound must be >= 1")
    found = [w for w in (condition_i(hw), condition_ii(hw), condition_iii(hw)) if w is not None]
    # the small-range scan can only confirm what the exact analysis finds
    scanned = brute_force_witnesses(hw, min(search_bound, 12))
    for w in scanned:
        assert any(f.condition == w.condition for f in found), f"exact analysis missed {w}"
    coeffs = criterion_coefficients(hw.theta)
    coeffs_json = {k: format_rational(v) for k, v in coeffs.items()} if coeffs else None
    if not found:
        return Verdict("irreducible", coefficients=coeffs_json, search_bound=search_bound)
    best = min(found, key=lambda w: (w.m + w.n, CONDITIONS.index(w.condition)))
    return Verdict("reducible", best, found, coeffs_json, search_bound)


@dataclass
class CrossCheck:
    """One-sided comparison of the verdict with the truncated Verma module."""

    verdict: Verdict
    max_depth: int
    radical_dims: dict[WeightKey, int]
    checked_witnesses: list[Witness]
    problems: list[str]

    @property
    def consistent(self) -> bool:
        return not self.problems

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.to_json(),
            "max_depth": self.max_depth,
            "nonzero_radicals": [
                {"depth": k.depth, "charge": k.charge, "dim": n} for k, n in sorted(self.radical_dims.items()) if n
            ],
            "checked_witnesses": [w.to_json() for w in self.checked_witnesses],
            "problems": self.problems,
            "consistent": self.consistent,
        }


def verma_cross_check(hw: HighestWeight, max_depth: int = 2, search_bound: int = 50) -> CrossCheck:
    """Compare the verdict with radicals of the contravariant form up to ``max_depth``.

    An irreducible verdict requires every radical in the window to vanish.  A
    reducible verdict requires a nonzero radical at the key of every witness
    that fits in the window, and a singular vector there when the witness is
    (i) with m = 0 (the vector f_0^(n+1) v_h).
    """
    verdict = verma_reducibility_criterion(hw, search_bound)
    V = VermaModule(hw)
    cmax = 2 * max_depth + 2
    cmin = -cmax - 4
    dims = {key: len(V.shapovalov_radical(key)) for key in weight_keys(max_depth, cmin, cmax)}
    problems: list[str] = []
    checked: list[Witness] = []
    if not verdict.reducible:
        problems.extend(f"radical of dimension {n} at {tuple(k)}" for k, n in dims.items() if n)
    for w in verdict.witnesses:
        key = w.key()
        if key not in dims:
            continue
        checked.append(w)
        if not dims[key]:
            problems.append(f"witness {w.to_json()} but zero radical at {tuple(key)}")
        if w.condition == "i" and w.m == 0 and not V.singular_vectors(key):
            problems.append(f"witness {w.to_json()} but no singular vector at {tuple(key)}")
    return CrossCheck(verdict, max_depth, dims, checked, problems)
