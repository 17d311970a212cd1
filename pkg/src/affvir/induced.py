"""Induced modules from the subalgebra b_lam and their tensor realization.

b_lam is spanned by dt_m = d_m - lam^m d_0 (m >= 1), f_m (m >= 1), h_n, e_n
(n >= 0) and C.  It acts on C[t] by

    dt_m g = lam^m (m gamma - eta) g           h_n g = lam^n (t + [n=0] epsilon) g
    C g = theta g

with e_n and f_m acting through the same factors as on the rank-one modules
(with s set aside).  The induced module Ind = U(L) (x)_{U(b_lam)} C[t] has basis
x (x) t^i with x a PBW monomial in the lowering generators and d_0, and

    phi(x (x) t^i) = x . (t^i (x) v_h)

maps it into M(lam, alpha, beta, gamma) (x) V(eta, epsilon, theta).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import NamedTuple

from affvir.arith import Poly1, Poly2, Q, Rational, format_rational
from affvir.criterion import verma_reducibility_criterion
from affvir.lie import CENTRAL, Gen, LieElement, as_element, bracket, bracket_gens, generators, order_key
from affvir.linalg import Echelon
from affvir.pbw import BasisKey, Monomial, monomial_repr, pbw_compare
from affvir.polymod import AxiomReport, ModuleParams, normalize_flavor, theta_irreducible
from affvir.tensor import TensorElement, TensorSpec, tensor_act
from affvir.verma import HighestWeight, TruncationOverflow, WeightKey, depth_of, verma_basis


class NotInSubalgebra(ValueError):
    def __init__(self, residue: LieElement):
        super().__init__(f"element leaves b_lambda; residue {residue!r}")
        self.residue = residue


class BGen(NamedTuple):
    """Spanning symbol of b_lam: family 'dt' (d_m - lam^m d_0), 'f', 'h', 'e' or 'C'."""

    family: str
    index: int = 0

    def __repr__(self) -> str:
        return "C" if self.family == "C" else f"{self.family}{self.index}"


def b_spanning_set(window: int) -> list[BGen]:
    out = [BGen("dt", m) for m in range(1, window + 1)]
    out += [BGen("f", m) for m in range(1, window + 1)]
    out += [BGen("h", n) for n in range(window + 1)]
    out += [BGen("e", n) for n in range(window + 1)]
    out.append(BGen("C", 0))
    return out


class BElement:
    """Finite combination of b_lam spanning symbols."""

    __slots__ = ("coeffs", "lam")

    def __init__(self, coeffs: dict, lam):
        self.lam = Q(lam)
        self.coeffs = {BGen(*k): Q(c) for k, c in coeffs.items() if c}

    def __eq__(self, other) -> bool:
        if isinstance(other, BElement):
            return self.coeffs == other.coeffs and self.lam == other.lam
        return NotImplemented

    def to_lie(self) -> LieElement:
        out: dict[Gen, Rational] = {}
        for b, c in self.coeffs.items():
            if b.family == "dt":
                for g, v in ((Gen("d", b.index), c), (Gen("d", 0), -c * self.lam**b.index)):
                    out[g] = out.get(g, 0) + v
            else:
                g = CENTRAL if b.family == "C" else Gen(b.family, b.index)
                out[g] = out.get(g, 0) + c
        return LieElement(out)

    def to_json(self) -> list:
        return [[{"family": b.family, "index": b.index}, format_rational(c)]
                for b, c in sorted(self.coeffs.items())]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({format_rational(c)})*{b!r}" for b, c in sorted(self.coeffs.items()))


def project_to_b(x, lam) -> BElement:
    """Coordinates of a Lie element in the spanning set of b_lam."""
    lam = Q(lam)
    x = as_element(x)
    out: dict[BGen, Rational] = {}
    residue: dict[Gen, Rational] = {}
    d0 = Rational(0)
    for g, c in x.coeffs.items():
        fam, i = g
        if fam == "d" and i >= 1:
            out[BGen("dt", i)] = c
            d0 += c * lam**i
        elif fam == "d" and i == 0:
            d0 += c
        elif (fam == "f" and i >= 1) or (fam in "he" and i >= 0):
            out[BGen(fam, i)] = c
        elif fam == "C":
            out[BGen("C", 0)] = c
        else:
            residue[g] = c
    if d0:
        residue[Gen("d", 0)] = d0
    if residue:
        raise NotInSubalgebra(LieElement(residue))
    return BElement(out, lam)


@dataclass(frozen=True)
class BModuleParams:
    flavor: str
    lam: Rational
    alpha: Rational
    beta: Rational = Rational(0)
    gamma: Rational = Rational(0)
    eta: Rational = Rational(0)
    eps: Rational = Rational(0)
    theta: Rational = Rational(0)

    def __post_init__(self):
        object.__setattr__(self, "flavor", normalize_flavor(self.flavor))
        for name in ("lam", "alpha", "beta", "gamma", "eta", "eps", "theta"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if not self.lam or not self.alpha:
            raise ValueError("lambda and alpha must be nonzero")

    @property
    def module(self) -> ModuleParams:
        return ModuleParams(self.flavor, self.lam, self.alpha, self.beta, self.gamma)

    @property
    def hw(self) -> HighestWeight:
        return HighestWeight(self.eta, self.eps, self.theta)

    def tensor_spec(self) -> TensorSpec:
        return TensorSpec(self.module, self.hw)

    def to_json(self) -> dict:
        out = self.module.to_json()
        out.update(self.hw.to_json())
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BModuleParams":
        return cls(
            data["flavor"], Q(data.get("lambda", data.get("lam"))), Q(data["alpha"]),
            Q(data.get("beta", "0")), Q(data.get("gamma", "0")),
            Q(data.get("eta", "0")), Q(data.get("epsilon", data.get("eps", "0"))), Q(data.get("theta", "0")),
        )


def _t_lin(c0, c1) -> Poly1:
    return Poly1({0: c0, 1: c1})


def b_act_gen(b: BGen, g: Poly1, p: BModuleParams, keep_theta_gamma: bool = False) -> Poly1:
    fam, n = b
    half = Rational(1, 2)
    if fam == "C":
        return g.scale(p.theta)
    lam_n = p.lam**n
    if fam == "dt":
        return g.scale(lam_n * (n * p.gamma - p.eta))
    if fam == "h":
        return (_t_lin(p.eps if n == 0 else 0, 1) * g).scale(lam_n)
    if fam == "e":
        if p.flavor == "omega":
            return g.shift(2).scale(lam_n * p.alpha)
        if p.flavor == "delta":
            fac = _t_lin(p.beta, half) * _t_lin(-p.beta - 1, half)
            return (fac * g.shift(2)).scale(-lam_n / p.alpha)
        c = lam_n * p.alpha * (p.gamma if keep_theta_gamma else 1)
        return (_t_lin(p.beta, half) * g.shift(2)).scale(c)
    if fam == "f":
        if p.flavor == "delta":
            return g.shift(-2).scale(lam_n * p.alpha)
        fac = _t_lin(-p.beta, half)
        if p.flavor == "omega":
            fac = fac * _t_lin(p.beta + 1, half)
        return (fac * g.shift(-2)).scale(-lam_n / p.alpha)
    raise ValueError(f"unknown b_lambda symbol {b!r}")


def b_act(x, g: Poly1, p: BModuleParams, keep_theta_gamma: bool = False) -> Poly1:
    """Action of a b_lam element (BElement or BGen) on g(t)."""
    items = [(x, Rational(1))] if isinstance(x, BGen) else x.coeffs.items()
    out = Poly1()
    for b, c in items:
        out = out + b_act_gen(b, g, p, keep_theta_gamma).scale(c)
    return out


def _bgen_lie(b: BGen, lam: Rational) -> LieElement:
    return BElement({b: 1}, lam).to_lie()


def b_module_axiom_check(
    p: BModuleParams, index_window: int = 3, degree_window: int = 4, keep_theta_gamma: bool = False
) -> AxiomReport:
    """Check [x,y] g = x(y g) - y(x g) over spanning pairs, brackets projected back into b_lam."""
    report = AxiomReport()
    span = b_spanning_set(index_window)
    polys = [Poly1({k: 1}) for k in range(degree_window + 1)]
    for x, y in itertools.combinations(span, 2):
        br = project_to_b(bracket(_bgen_lie(x, p.lam), _bgen_lie(y, p.lam)), p.lam)
        for g in polys:
            lhs = b_act(br, g, p, keep_theta_gamma)
            rhs = (b_act(x, b_act(y, g, p, keep_theta_gamma), p, keep_theta_gamma)
                   - b_act(y, b_act(x, g, p, keep_theta_gamma), p, keep_theta_gamma))
            report.checked += 1
            if lhs != rhs:
                report.violations.append({"x": repr(x), "y": repr(y), "g": g.to_json(),
                                          "lhs": lhs.to_json(), "rhs": rhs.to_json()})
    return report


def random_bparams(flavor: str, rng: random.Random, max_num: int = 7, max_den: int = 4) -> BModuleParams:
    def rat(nonzero=False):
        while True:
            x = Rational(rng.randint(-max_num, max_num), rng.randint(1, max_den))
            if x or not nonzero:
                return x
    return BModuleParams(flavor, rat(True), rat(True), rat(), rat(), rat(), rat(), rat())


# -- the induced module ---------------------------------------------------------------

def in_n_minus(g: Gen) -> bool:
    """Lowering generators together with d_0."""
    if g.family == "f":
        return g.index <= 0
    if g.family == "d":
        return g.index <= 0
    return g.family != "C" and g.index < 0


InducedVector = dict  # (monomial incl. d_0 factors, t-exponent) -> Rational


def d0_count(mono: Monomial) -> int:
    return sum(1 for g in mono if g == Gen("d", 0))


@dataclass(frozen=True)
class InducedCaps:
    depth: int = 4
    d0: int = 3
    degree: int = 4
    charge_min: int = -2
    charge_max: int = 2


def induced_basis(caps: InducedCaps) -> list[tuple[Monomial, int]]:
    """Basis elements x (x) t^i within caps, as (monomial, i)."""
    out = []
    for dp in range(caps.depth + 1):
        for ch in range(caps.charge_min, caps.charge_max + 1):
            for mono in verma_basis(WeightKey(dp, ch)):
                for j in range(caps.d0 + 1):
                    full = mono + (Gen("d", 0),) * j
                    out.extend((full, i) for i in range(caps.degree + 1))
    return out


class InducedModule:
    """U(L) acting on U(L) (x)_{U(b_lam)} C[t], in the PBW basis."""

    def __init__(self, p: BModuleParams, caps: InducedCaps | None = None):
        self.p = p
        self.caps = caps
        self._memo: dict = {}

    def _vacuum(self, z: Gen, g: Poly1) -> dict:
        """z acting on 1 (x) g, as {monomial: Poly1}."""
        if in_n_minus(z):
            return {(z,): g}
        if z.family == "d":
            # d_m = dt_m + lam^m d_0
            out = {}
            _acc1(out, (), b_act_gen(BGen("dt", z.index), g, self.p))
            _acc1(out, (Gen("d", 0),), g.scale(self.p.lam**z.index))
            return out
        b = BGen("C", 0) if z == CENTRAL else BGen(z.family, z.index)
        return {(): b_act_gen(b, g, self.p)}

    def _act(self, z: Gen, mono: Monomial, g: Poly1) -> dict:
        key = (z, mono, g)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not mono:
            out = self._vacuum(z, g)
        elif in_n_minus(z) and order_key(z) <= order_key(mono[0]):
            out = {(z,) + mono: g}
        else:
            # z y rest = y (z rest) + [z, y] rest
            y, rest = mono[0], mono[1:]
            out = {}
            for m, q in self._act(z, rest, g).items():
                for m2, q2 in self._act(y, m, q).items():
                    _acc1(out, m2, q2)
            for b, cb in bracket_gens(z, y):
                for m, q in self._act(b, rest, g).items():
                    _acc1(out, m, q.scale(cb))
        self._memo[key] = out
        return out

    def act(self, x, v: InducedVector) -> InducedVector:
        out: dict = {}
        for z, cz in as_element(x).coeffs.items():
            for (mono, i), c in v.items():
                for m2, q in self._act(z, mono, Poly1({i: 1})).items():
                    for k, ck in q.terms.items():
                        _acc(out, (m2, k), cz * c * ck)
        if self.caps is not None:
            for mono, i in out:
                if depth_of(mono) > self.caps.depth:
                    raise TruncationOverflow(f"depth {depth_of(mono)} exceeds cap {self.caps.depth}")
        return out


def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _acc1(out: dict, key, q: Poly1) -> None:
    if not q:
        return
    r = out.get(key)
    r = q if r is None else r + q
    if r:
        out[key] = r
    else:
        out.pop(key, None)


def basis_vector(mono: Monomial, i: int) -> InducedVector:
    return {(tuple(sorted(mono, key=order_key)), i): Rational(1)}


class Phi:
    """phi(x (x) t^i) = x . (t^i (x) v_h), cached per basis element."""

    def __init__(self, p: BModuleParams):
        self.p = p
        self.spec = p.tensor_spec()
        self._cache: dict[tuple[Monomial, int], TensorElement] = {}

    def basis_image(self, mono: Monomial, i: int) -> TensorElement:
        key = (mono, i)
        hit = self._cache.get(key)
        if hit is None:
            if not mono:
                hit = TensorElement.pure(Poly2.monomial(0, i))
            else:
                # x = y1 y2 ... yk acts as y1 (y2 ... yk . (t^i (x) v_h))
                hit = tensor_act(mono[0], self.basis_image(mono[1:], i), self.spec)
            self._cache[key] = hit
        return hit

    def __call__(self, v: InducedVector) -> TensorElement:
        out = TensorElement()
        for (mono, i), c in v.items():
            out = out + self.basis_image(mono, i).scale(c)
        return out


def phi(v: InducedVector, p: BModuleParams) -> TensorElement:
    return Phi(p)(v)


def _b2_key(mono: Monomial, a: int, b: int) -> BasisKey:
    return BasisKey("B2", mono, a, b)


def leading_term(w: TensorElement) -> tuple[BasisKey, Rational] | None:
    """The ≺-largest basis element s^a t^b (x) x v_h of ``w`` and its coefficient."""
    best = None
    for mono, poly in w.terms.items():
        for (a, b), c in poly.terms.items():
            key = _b2_key(mono, a, b)
            if best is None or pbw_compare(key, best[0]) > 0:
                best = (key, c)
    return best


@dataclass
class IntertwiningReport:
    checked: int = 0
    violations: list = field(default_factory=list)
    basis_size: int = 0
    rank: int = 0
    injectivity_method: str = ""

    @property
    def full_rank(self) -> bool:
        return self.rank == self.basis_size

    @property
    def ok(self) -> bool:
        return not self.violations and self.full_rank

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "violations": self.violations,
            "basis_size": self.basis_size,
            "rank": self.rank,
            "full_rank": self.full_rank,
            "injectivity_method": self.injectivity_method,
            "ok": self.ok,
        }


def injectivity_certificate(images: list[tuple[tuple[Monomial, int], TensorElement]]) -> tuple[int, str]:
    """Rank of phi on a window: triangularity when leading terms are distinct partners, else exact rank."""
    partners = set()
    triangular = True
    for (mono, i), img in images:
        lead = leading_term(img)
        plain = tuple(g for g in mono if g != Gen("d", 0))
        partner = _b2_key(plain, d0_count(mono), i)
        if lead is None or lead[1] != 1 or pbw_compare(lead[0], partner) != 0 or partner in partners:
            triangular = False
            break
        partners.add(partner)
    if triangular:
        return len(images), "leading-term triangularity"
    ech = Echelon()
    for _, img in images:
        ech.add(img.flat())
    return ech.rank, "exact rank"


def phi_intertwining_check(
    p: BModuleParams,
    caps: InducedCaps = InducedCaps(depth=3, d0=1, degree=3),
    max_index: int = 2,
) -> IntertwiningReport:
    """phi(z b) = z phi(b) for generators |index| <= max_index over the basis window, and injectivity."""
    ind = InducedModule(p)
    ph = Phi(p)
    spec = ph.spec
    report = IntertwiningReport()
    basis = induced_basis(caps)
    report.basis_size = len(basis)
    gens = generators(max_index)
    for mono, i in basis:
        b = {(mono, i): Rational(1)}
        img = ph.basis_image(mono, i)
        for z in gens:
            lhs = ph(ind.act(z, b))
            rhs = tensor_act(z, img, spec)
            report.checked += 1
            if lhs != rhs:
                report.violations.append({"generator": repr(z), "basis": f"{monomial_repr(mono)} (x) t^{i}"})
    report.rank, report.injectivity_method = injectivity_certificate(
        [((mono, i), ph.basis_image(mono, i)) for mono, i in basis]
    )
    return report


@dataclass
class InducedVerdict:
    verdict: str
    reason: str
    criterion: dict | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "reason": self.reason}
        if self.criterion is not None:
            out["criterion"] = self.criterion
        return out


def induced_reducibility(p: BModuleParams, bound: int = 50) -> InducedVerdict:
    """Reducible iff the Theta factor is (2 beta in Z_+) or the Verma factor is."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if p.flavor == "theta" and not theta_irreducible(p.beta):
        return InducedVerdict("reducible", "2*beta is a nonnegative integer")
    v = verma_reducibility_criterion(p.hw, bound)
    reason = f"condition ({v.witness.condition})" if v.reducible else "no condition holds"
    return InducedVerdict(v.verdict, reason, v.to_json())
