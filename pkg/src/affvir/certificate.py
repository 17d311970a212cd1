"""Constructive irreducibility certificates for tensor modules.

Starting from a nonzero element w, the probe reaches a vector 1 (x) v' by a
chain of explicit steps.  Each step is a finite sum of terms
``coeff * word . source``: ``word`` is a sequence of generators applied in the
order listed (first entry acts first) and ``source`` is the id of an earlier
step (0 is the input).  Every step records the element it claims to produce, so
a verifier only needs the module action to replay the chain.

Pipeline, with K the annihilation bound of the Verma components (so index-m
generators with m >= K see only the polynomial factor):

1. Remove s.  Combine lam^-m d_m w over m = K..K+r+1 to isolate the top power of
   m (a Vandermonde system).  If gamma = 0 the result still carries one factor s,
   removed by a difference of two e_m (or f_m for Delta) actions.
2. Make the element a pure tensor a(t) (x) v'.  With T = lam^-m h_m acting as
   multiplication by t and sigma a normalized e_m or f_m, the combination
   sigma(a)_1(T) u - a_1(T) sigma(u) kills the first component and is nonzero
   unless all components are already proportional.
3. Reach 1 (x) v'.  Pick the least k >= 1 for which the two polynomials produced
   by k-fold e_m / f_m actions are coprime and apply a Bezout combination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import gmpy2

from affvir.arith import Poly1, Q, Rational, ext_gcd, format_rational
from affvir.lie import Gen
from affvir.tensor import (
    TensorElement,
    TensorSpec,
    act_word,
    annihilation_bound,
    vandermonde_extract,
)
from affvir.verma import TruncationOverflow

FORMAT = "affvir-tensor-certificate/1"


class ProbeFailure(RuntimeError):
    """The pipeline could not reach 1 (x) v'; ``reason`` says why."""

    def __init__(self, message: str, reason: str, partial: dict):
        super().__init__(message)
        self.reason = reason  # "quotient-collapse" | "truncation" | "internal"
        self.partial = partial


Term = tuple  # (coefficient, word tuple, source id)


@dataclass
class Certificate:
    spec: TensorSpec
    input: TensorElement
    steps: list[dict] = field(default_factory=list)
    values: list[TensorElement] = field(default_factory=list)
    shift: int | None = None

    @property
    def final(self) -> TensorElement:
        return self.values[-1]

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "spec": self.spec.to_json(),
            "input": self.input.to_json(),
            "steps": self.steps,
            "coprime_shift": self.shift,
            "final": self.final.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


class _Recorder:
    def __init__(self, spec: TensorSpec, w: TensorElement):
        self.spec = spec
        self.cert = Certificate(spec, w, values=[w])

    def step(self, label: str, terms: list[Term]) -> int:
        value = _evaluate(terms, self.cert.values, self.spec)
        self.cert.steps.append({
            "id": len(self.cert.values),
            "label": label,
            "terms": [
                {"coeff": format_rational(c), "word": [g.to_json() for g in word], "source": src}
                for c, word, src in terms
            ],
            "claimed": value.to_json(),
        })
        self.cert.values.append(value)
        return len(self.cert.values) - 1

    def value(self, idx: int) -> TensorElement:
        return self.cert.values[idx]

    def fail(self, message: str, reason: str):
        raise ProbeFailure(message, reason, self.cert.to_json())


def _evaluate(terms: list[Term], values: list[TensorElement], spec: TensorSpec) -> TensorElement:
    out = TensorElement()
    for c, word, src in terms:
        out = out + act_word(word, values[src], spec).scale(c)
    return out


def _poly_terms(u: Poly1, m: int, lam: Rational, src: int, prefix: tuple = (), scale=1) -> list[Term]:
    """Terms realizing u(T) applied after ``prefix``, with T = lam^-m h_m."""
    h = Gen("h", m)
    return [
        (Q(scale) * c * lam ** (-m * k), prefix + (h,) * k, src)
        for k, c in sorted(u.terms.items())
    ]


def _components(w: TensorElement) -> list[tuple]:
    return [(mono, w.terms[mono].to_poly1()) for mono in w.monomials()]


def _proportional(comps) -> bool:
    _, a1 = comps[0]
    return all(a * a1.lc() == a1 * a.lc() for _, a in comps[1:])


def _sigma(spec: TensorSpec, m: int) -> tuple[Gen, Rational]:
    """Normalized shift operator: e_m (Omega, Theta) or f_m (Delta) scaled by lam^-m / alpha."""
    p = spec.params
    g = Gen("f", m) if p.flavor == "delta" else Gen("e", m)
    return g, 1 / (p.lam**m * p.alpha)


def _shifted_pair(a: Poly1, k: int, spec: TensorSpec) -> tuple[Poly1, Poly1]:
    """The t-polynomials of the two elements whose gcd decides the shift k."""
    p = spec.params
    if p.flavor == "omega":
        return a, a.shift(2 * k)
    if p.flavor == "delta":
        return a, a.shift(-2 * k)
    half = Rational(1, 2)
    x, y = a.shift(2 * k), a.shift(-2 * k)
    for n in range(k):
        x = x * Poly1({0: p.beta - n, 1: half})
        y = y * Poly1({0: -p.beta + n, 1: half})
    return x, y


def irreducibility_probe(w: TensorElement, spec: TensorSpec) -> Certificate:
    """Build a certificate that the submodule generated by ``w`` contains some 1 (x) v'."""
    spec.require_irreducible_factor()
    w = spec.normalize(w)
    if not w:
        raise ValueError("irreducibility probe needs a nonzero element")
    rec = _Recorder(spec, w)
    p = spec.params
    collapse = "quotient-collapse" if spec.quotient else "internal"
    cur = 0
    try:
        # 1. remove s
        if w.s_degree() > 0:
            vr = vandermonde_extract(w, spec)
            terms = [(c * p.lam ** (-mm), (Gen("d", mm),), cur) for c, mm in vr.combination]
            cur = rec.step(f"vandermonde m={vr.bound}..{vr.bound + vr.degree + 1}, coefficient of m^{vr.power}", terms)
            if not rec.value(cur):
                rec.fail("Vandermonde extraction vanished", collapse)
            if rec.value(cur).s_degree() > 0:
                K = annihilation_bound(rec.value(cur), spec)
                fam = "f" if p.flavor == "delta" else "e"
                terms = [
                    (1 / (p.lam**K * p.alpha), (Gen(fam, K),), cur),
                    (-1 / (p.lam ** (K + 1) * p.alpha), (Gen(fam, K + 1),), cur),
                ]
                cur = rec.step(f"difference {fam}_{K} - {fam}_{K + 1} removes s", terms)
                if rec.value(cur).s_degree() > 0 or not rec.value(cur):
                    rec.fail("s-removal did not produce an s-free element", collapse)

        # 2. reduce to a pure tensor
        while True:
            comps = _components(rec.value(cur))
            if _proportional(comps):
                break
            m = annihilation_bound(rec.value(cur), spec)
            g, norm = _sigma(spec, m)
            sig = rec.step(f"shift by {g!r}", [(norm, (g,), cur)])
            mono1, a1 = comps[0]
            sa1 = rec.value(sig).terms[mono1].to_poly1()
            terms = _poly_terms(sa1, m, p.lam, cur) + _poly_terms(-a1, m, p.lam, sig)
            cur = rec.step(f"eliminate component {mono1!r}", terms)
            if not rec.value(cur) or mono1 in rec.value(cur).terms:
                rec.fail("component elimination failed", collapse)

        # 3. coprime shift and Bezout combination
        comps = _components(rec.value(cur))
        a = comps[0][1]
        if a.degree() > 0:
            m = annihilation_bound(rec.value(cur), spec)
            limit = int(gmpy2.floor(a.cauchy_bound() + abs(p.beta))) + 2
            for k in range(1, limit + 1):
                x, y = _shifted_pair(a, k, spec)
                g, u, v = ext_gcd(x, y)
                if g.degree() == 0:
                    break
            else:
                rec.fail(f"no coprime shift up to k = {limit}", "internal")
            rec.cert.shift = k
            if p.flavor == "theta":
                e_norm = (p.lam**m * p.alpha) ** (-k)
                f_norm = (-p.alpha * p.lam ** (-m)) ** k
                xs = rec.step(f"e_{m}^{k}", [(e_norm, (Gen("e", m),) * k, cur)])
                ys = rec.step(f"f_{m}^{k}", [(f_norm, (Gen("f", m),) * k, cur)])
            else:
                sg, norm = _sigma(spec, m)
                xs = cur
                ys = rec.step(f"{sg!r}^{k}", [(norm**k, (sg,) * k, cur)])
            terms = _poly_terms(u, m, p.lam, xs) + _poly_terms(v, m, p.lam, ys)
            cur = rec.step(f"Bezout combination (coprime shift k={k})", terms)
    except TruncationOverflow as exc:
        rec.fail(f"truncation overflow: {exc}", "truncation")
    if not rec.value(cur).is_constant_pure():
        rec.fail("pipeline ended away from 1 (x) v'", collapse)
    return rec.cert


@dataclass
class VerificationReport:
    ok: bool
    steps_checked: int
    errors: list[str]

    def to_json(self) -> dict:
        return {"ok": self.ok, "steps_checked": self.steps_checked, "errors": self.errors}


def verify_certificate(data: dict | str | Certificate) -> VerificationReport:
    """Replay every step of a certificate and check that it ends at 1 (x) v' with v' != 0."""
    if isinstance(data, Certificate):
        data = data.to_json()
    if isinstance(data, str):
        data = json.loads(data)
    errors: list[str] = []
    if data.get("format") != FORMAT:
        return VerificationReport(False, 0, [f"unknown certificate format {data.get('format')!r}"])
    spec = TensorSpec.from_json(data["spec"])
    try:
        spec.require_irreducible_factor()
    except ValueError as exc:
        errors.append(str(exc))
    values = [spec.normalize(TensorElement.from_json(data["input"]))]
    if not values[0]:
        errors.append("input element is zero")
    checked = 0
    for step in data["steps"]:
        sid = step["id"]
        if sid != len(values):
            errors.append(f"step ids out of sequence at {sid}")
            break
        terms = []
        for t in step["terms"]:
            src = int(t["source"])
            if not 0 <= src < sid:
                errors.append(f"step {sid} refers to unknown source {src}")
                break
            terms.append((Q(t["coeff"]), tuple(Gen.from_json(g) for g in t["word"]), src))
        try:
            value = _evaluate(terms, values, spec)
        except TruncationOverflow as exc:
            errors.append(f"step {sid}: truncation overflow ({exc})")
            break
        claimed = spec.normalize(TensorElement.from_json(step["claimed"]))
        if value != claimed:
            errors.append(f"step {sid} ({step.get('label', '')}): replayed value differs from claim")
        values.append(value)
        checked += 1
    final = values[-1]
    if not final.is_constant_pure():
        errors.append("final element is not of the form 1 (x) v' with v' nonzero")
    if "final" in data and spec.normalize(TensorElement.from_json(data["final"])) != final:
        errors.append("recorded final element differs from the replayed one")
    return VerificationReport(not errors, checked, errors)
