import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affvir.arith import Poly1, Poly2, Q
from affvir.lie import CENTRAL, Gen, bracket, generators
from affvir.polymod import FLAVORS, ModuleParams
from affvir.tensor import (
    HypothesisViolation,
    PreconditionError,
    TensorElement,
    TensorSpec,
    act_word,
    annihilation_bound,
    binomial_moment,
    classify_isomorphism,
    d_injectivity_check,
    generation_span,
    omega_apply,
    power_act,
    tensor_act,
    vandermonde_extract,
)
from affvir.verma import HighestWeight, TruncationOverflow, verma_basis, weight_keys

s, t = Poly2.s(), Poly2.t()
e, f, h, d = (lambda i, fam=fam: Gen(fam, i) for fam in "efhd")
ONE = TensorElement.pure(1)


def spec(flavor="omega", lam=1, alpha=1, beta=0, gamma=0, eta=1, eps="1/2", theta="1/3", **kw):
    return TensorSpec(
        ModuleParams(flavor, Q(lam), Q(alpha), Q(beta), Q(gamma)),
        HighestWeight(Q(eta), Q(eps), Q(theta)),
        **kw,
    )


def test_tensor_act_examples():
    sp_ = spec(gamma=3, eps=2, theta=5)
    for m in (1, 2, 4):
        assert tensor_act(d(m), ONE, sp_) == TensorElement.pure(s + 3 * m)
    w = TensorElement.pure(s * t + 1, {(f(0),): Q(1)}) + TensorElement.pure(t, ())
    assert tensor_act(CENTRAL, w, sp_) == w.scale(5)
    assert tensor_act(h(0), ONE, sp_) == TensorElement.pure(t + 2)


def test_tensor_act_lowers_verma_side():
    sp_ = spec()
    out = tensor_act(f(0), ONE, sp_)
    assert out.terms[(f(0),)] == Poly2.const(1)
    assert out.terms[()] == (t.scale(Q("1/2")) * (t.scale(Q("1/2")) + 1)).scale(-1)


def test_leibniz_representation_property():
    sp_ = spec("delta", lam=2, alpha=Q("-1/3"), beta=Q("1/4"), gamma=1, eta=2, eps=-1, theta=3)
    gens = generators(2)
    window = [
        TensorElement.pure(Poly2.monomial(a, b), mono)
        for a in range(2) for b in range(2)
        for key in weight_keys(1, -2, 2) for mono in verma_basis(key)
    ]
    for x, y in itertools.combinations(gens, 2):
        br = bracket(x, y)
        for w in window:
            lhs = tensor_act(br, w, sp_)
            rhs = tensor_act(x, tensor_act(y, w, sp_), sp_) - tensor_act(y, tensor_act(x, w, sp_), sp_)
            assert lhs == rhs, (x, y, w)


def test_power_act_examples():
    a = TensorElement.pure(t * t + 3)
    assert power_act("h", 1, 2, a, spec()) == a.mul_poly(t * t)
    assert power_act("d", 2, 2, ONE, spec(gamma=1)) == TensorElement.pure((s + 2) * s)
    beta = Q("1/3")
    th = spec("theta", beta=beta, gamma=4)
    half = t.scale(Q("1/2"))
    expected = TensorElement.pure((half + beta) * (half + beta - 1) * (t * t + 3).shift(0, 4))
    assert power_act("e", 1, 2, a, th) == expected


@pytest.mark.parametrize("flavor", FLAVORS)
@pytest.mark.parametrize("family", "efhd")
def test_power_act_equals_iterated_action(flavor, family):
    sp_ = spec(flavor, lam=Q("2/3"), alpha=Q(-2), beta=Q("1/5"), gamma=Q(3), eta=2, eps=1, theta=4)
    w = TensorElement.pure(s * t + t, {(d(-1),): Q(1)}) + TensorElement.pure(t * t - 1)
    K = annihilation_bound(w, sp_)
    for m in (K, K + 1):
        iterated = w
        for k in range(1, 5):
            iterated = tensor_act(Gen(family, m), iterated, sp_)
            assert power_act(family, m, k, w, sp_) == iterated


def test_power_act_precondition():
    w = TensorElement.pure(1, {(d(-1),): Q(1)})
    with pytest.raises(PreconditionError):
        power_act("d", 1, 1, w, spec())


def test_binomial_moments():
    for r in range(1, 7):
        for j in range(r):
            assert binomial_moment(r, j) == 0
        assert binomial_moment(r, r) != 0


@pytest.mark.parametrize("flavor", FLAVORS)
def test_omega_vanishes_on_polynomial_module(flavor):
    p = ModuleParams(flavor, Q("3/2"), Q(2), Q("1/3"), Q(-1))
    g = s * s * t
    for r in (3, 4):
        for l, m in itertools.product(range(-2, 3), repeat=2):
            assert not omega_apply(l, m, r, g, p)


def test_omega_first_order_example():
    assert omega_apply(0, 0, 1, Poly2.const(1), ModuleParams("omega", 1, 1, 0, 0)) == s


def test_omega_nonzero_on_tensor():
    out = omega_apply(4, -5, 3, ONE, spec(max_depth=6))
    assert out
    # the v-side survivors are d_{-2} .. d_{-5} acting on v_h
    assert {(d(-k),) for k in range(2, 6)} <= set(out.terms)


def test_omega_tensor_truncation():
    with pytest.raises(TruncationOverflow):
        omega_apply(4, -5, 3, ONE, spec(max_depth=3))


def test_vandermonde_examples():
    a = t + 5
    g2 = spec(gamma=2)
    assert vandermonde_extract(TensorElement.pure(a), g2).element == TensorElement.pure(a.scale(2))
    v_prime = {(h(-1),): Q(1)}
    w = TensorElement.pure(t * t, v_prime) + TensorElement.pure(a * s)
    assert vandermonde_extract(w, g2).element == TensorElement.pure(a.scale(-2))
    g0 = spec(gamma=0)
    assert vandermonde_extract(TensorElement.pure(a), g0).element == TensorElement.pure(a * s)


def test_vandermonde_sign_when_gamma_vanishes():
    # gamma = 0, r = 1: the top coefficient is (-1)^r s a_r(t) (x) v_r
    w = TensorElement.pure(t * s) + TensorElement.pure(t * t, {(h(-1),): Q(1)})
    res = vandermonde_extract(w, spec(gamma=0))
    assert res.element == TensorElement.pure(t * s).scale(-1)


def test_vandermonde_result_is_replayable():
    sp_ = spec("theta", beta=Q("1/3"), gamma=Q("5/2"), eta=0, eps=0, theta=0)
    w = TensorElement.pure(s * s * t + s, {(f(0),): Q(1)}) + TensorElement.pure(t - 1)
    res = vandermonde_extract(w, sp_)
    replay = TensorElement()
    for c, m in res.combination:
        replay = replay + tensor_act(d(m), w, sp_).scale(c * sp_.params.lam ** (-m))
    assert replay == res.element


def test_generation_span_examples():
    sp_ = spec(max_depth=3)
    full = generation_span(ONE, sp_)
    assert full.complete and len(full.reached) == 9
    from_t = generation_span(TensorElement.pure(t), sp_)
    assert "s^0 t^0 (x) v_h" in from_t.reached
    with pytest.raises(ValueError):
        generation_span(TensorElement(), sp_)


def test_classify_examples():
    V = dict(eta=1, eps=1, theta=1)
    assert classify_isomorphism(spec("omega", 1, 2, 3, 4, **V), spec("omega", 1, 2, -4, 4, **V))
    assert not classify_isomorphism(spec("theta", 1, 2, Q("1/3"), 4, **V), spec("theta", 1, 2, Q("-4/3"), 4, **V))
    assert not classify_isomorphism(spec("omega", 1, 2, 3, 4, **V), spec("delta", 1, 2, 3, 4, **V))
    assert not classify_isomorphism(spec("omega", 1, 2, 3, 4, **V), spec("omega", 1, 2, 3, 4, eta=2, eps=1, theta=1))
    with pytest.raises(HypothesisViolation):
        classify_isomorphism(spec("theta", 1, 2, 3, 4, **V), spec("theta", 1, 2, -4, 4, **V))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["omega", "delta"]), st.integers(-4, 4), st.integers(-4, 4))
def test_classify_beta_reflection(flavor, beta, gamma):
    a = spec(flavor, 2, 3, beta, gamma)
    b = spec(flavor, 2, 3, -beta - 1, gamma)
    assert classify_isomorphism(a, b) and classify_isomorphism(b, a)


def test_d_injectivity():
    sp_ = spec(eta=1, eps=1, theta=1)
    for i in (1, 0):
        assert d_injectivity_check(i, sp_).injective
    res = d_injectivity_check(-1, sp_, depth=3)
    assert res.injective and res.rank == res.domain_dim


def test_quotient_mode_normalizes():
    q = spec(eps=0, eta=3, theta=1, quotient=True)
    w = TensorElement.pure(t, {(f(0),): Q(1)})
    assert not q.normalize(w)
    assert tensor_act(f(0), ONE, q).terms.get((f(0),)) is None


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(FLAVORS), st.integers(0, 2), st.integers(0, 2), st.integers(1, 3))
def test_act_word_composes(flavor, a, b, m):
    sp_ = spec(flavor, beta=Q("1/3"), gamma=2)
    w = TensorElement.pure(Poly2.monomial(a, b))
    word = (e(m), f(-m), h(0))
    step = w
    for g in word:
        step = tensor_act(g, step, sp_)
    assert act_word(word, w, sp_) == step


def test_element_json_and_helpers():
    w = TensorElement.pure(s * t.scale(Q("2/3")) + 1, {(f(0), e(-1)): Q(2)})
    assert TensorElement.from_json(w.to_json()) == w
    assert w.s_degree() == 1
    assert w.coeff_of_s(1) == {(f(0), e(-1)): Poly1({1: Q("4/3")})}
    assert TensorElement.pure(7).is_constant_pure() and not w.is_constant_pure()
    assert TensorSpec.from_json(spec(quotient=True).to_json()) == spec(quotient=True)


def test_random_elements_closed_under_action():
    rng = random.Random(4)
    sp_ = spec("theta", beta=Q("-1/2"), gamma=1)
    for _ in range(5):
        w = TensorElement.pure(Poly2.monomial(rng.randint(0, 2), rng.randint(0, 2)))
        x = rng.choice(generators(2))
        assert isinstance(tensor_act(x, w, sp_), TensorElement)
