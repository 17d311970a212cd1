import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affvir.arith import Poly1, Poly2, Q
from affvir.induced import (
    BElement,
    BGen,
    BModuleParams,
    InducedCaps,
    InducedModule,
    NotInSubalgebra,
    Phi,
    b_act,
    b_module_axiom_check,
    b_spanning_set,
    basis_vector,
    induced_basis,
    induced_reducibility,
    leading_term,
    phi,
    phi_intertwining_check,
    project_to_b,
    random_bparams,
)
from affvir.lie import CENTRAL, Gen, LieElement, bracket, generators
from affvir.pbw import BasisKey, pbw_compare
from affvir.polymod import FLAVORS
from affvir.tensor import TensorElement, tensor_act

s, t = Poly2.s(), Poly2.t()
e, f, h, d = (lambda i, fam=fam: Gen(fam, i) for fam in "efhd")
tt = Poly1.t()


def bp(flavor="omega", lam=1, alpha=1, beta=0, gamma=0, eta=0, eps=0, theta=0):
    return BModuleParams(flavor, *(Q(x) for x in (lam, alpha, beta, gamma, eta, eps, theta)))


def test_projection_examples():
    lam = Q(3)
    assert project_to_b(LieElement({d(2): 1, d(0): -lam**2}), lam) == BElement({BGen("dt", 2): 1}, lam)
    dt1 = BElement({BGen("dt", 1): 1}, lam).to_lie()
    dt2 = BElement({BGen("dt", 2): 1}, lam).to_lie()
    expected = BElement({BGen("dt", 3): 1, BGen("dt", 1): lam**2, BGen("dt", 2): -2 * lam}, lam)
    assert project_to_b(bracket(dt1, dt2), lam) == expected
    with pytest.raises(NotInSubalgebra):
        project_to_b(LieElement.basis(d(0)), lam)
    with pytest.raises(NotInSubalgebra) as info:
        project_to_b(LieElement({e(-1): 2, h(0): 1}), lam)
    assert info.value.residue == LieElement({e(-1): 2})


def test_subalgebra_is_closed():
    lam = Q("-2/3")
    span = b_spanning_set(3)
    for x, y in itertools.combinations(span, 2):
        br = bracket(BElement({x: 1}, lam).to_lie(), BElement({y: 1}, lam).to_lie())
        assert project_to_b(br, lam).to_lie() == br


def test_b_act_examples():
    p = bp(gamma=5, eta=2, eps=Q("1/2"), alpha=7)
    assert b_act(BGen("dt", 1), tt * tt, p) == (tt * tt).scale(3)
    g = tt * tt + 1
    assert b_act(BGen("h", 0), g, p) == (tt + Q("1/2")) * g
    assert b_act(BGen("e", 0), Poly1.const(1), p) == Poly1.const(7)
    assert b_act(BGen("C", 0), g, bp(theta=4)) == g.scale(4)


def test_theta_pair_e1_f1_on_one():
    p = bp("theta", lam=2, alpha=3, beta=Q("1/3"), gamma=5)
    one = Poly1.const(1)
    lhs = b_act(project_to_b(bracket(e(1), f(1)), p.lam), one, p)
    rhs = b_act(BGen("e", 1), b_act(BGen("f", 1), one, p), p) - b_act(BGen("f", 1), b_act(BGen("e", 1), one, p), p)
    assert lhs == rhs == tt.scale(4)


@pytest.mark.parametrize("flavor", FLAVORS)
def test_b_axioms_random_tuples(flavor):
    rng = random.Random(f"b-{flavor}")
    for _ in range(5):
        report = b_module_axiom_check(random_bparams(flavor, rng), index_window=2, degree_window=3)
        assert report.ok, report.violations[:2]


def test_stray_gamma_breaks_axioms():
    p = bp("theta", lam=1, alpha=1, beta=Q("1/3"), gamma=2)
    assert b_module_axiom_check(p, 2, 2).ok
    bad = b_module_axiom_check(p, 2, 2, keep_theta_gamma=True)
    assert not bad.ok
    assert all({v["x"][0], v["y"][0]} & {"e"} for v in bad.violations)
    # gamma = 1 is the only value where the extra factor is harmless
    assert b_module_axiom_check(bp("theta", beta=Q("1/3"), gamma=1), 2, 2, keep_theta_gamma=True).ok


b_symbols = st.one_of(
    st.builds(BGen, st.just("dt"), st.integers(1, 3)),
    st.builds(BGen, st.just("f"), st.integers(1, 3)),
    st.builds(BGen, st.sampled_from("he"), st.integers(0, 3)),
    st.just(BGen("C", 0)),
)
small = st.integers(-4, 4).flatmap(lambda a: st.integers(1, 3).map(lambda b: Q(f"{a}/{b}")))
nonzero_small = small.filter(bool)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(FLAVORS), nonzero_small, nonzero_small, small, small, small, small, small,
       b_symbols, st.integers(0, 3))
def test_b_action_is_the_tensor_action_on_the_top_line(flavor, lam, alpha, beta, gamma, eta, eps, theta, b, k):
    p = BModuleParams(flavor, lam, alpha, beta, gamma, eta, eps, theta)
    g = Poly1({k: 1})
    expected = TensorElement.pure(Poly2.from_t(b_act(b, g, p)))
    assert tensor_act(BElement({b: 1}, lam).to_lie(), TensorElement.pure(Poly2.from_t(g)), p.tensor_spec()) == expected


def test_induced_basis_depth_zero():
    caps = InducedCaps(depth=0, d0=2, degree=1, charge_min=0, charge_max=0)
    assert induced_basis(caps) == [
        ((), 0), ((), 1), ((d(0),), 0), ((d(0),), 1), ((d(0), d(0)), 0), ((d(0), d(0)), 1)
    ]


def test_induced_action_examples():
    p = bp(alpha=Q("3/2"))
    M = InducedModule(p)
    v = basis_vector((), 2)
    # e_0 (1 (x) t^2) = alpha (t - 2)^2
    assert M.act(e(0), v) == {((), 2): Q("3/2"), ((), 1): Q(-6), ((), 0): Q(6)}
    assert M.act(d(-1), v) == {((d(-1),), 2): Q(1)}
    # d_1 = dt_1 + lam d_0 on the vacuum
    assert M.act(d(1), basis_vector((), 0)) == {((d(0),), 0): Q(1)}


def test_phi_examples():
    p = bp("omega", lam=2, alpha=3, beta=Q("1/2"), gamma=1, eta=5, eps=1, theta=2)
    for i in range(3):
        assert phi(basis_vector((), i), p) == TensorElement.pure(Poly2.monomial(0, i))
    assert phi(basis_vector((d(0),), 0), p) == TensorElement.pure(s + 5)
    half = t.scale(Q("1/2"))
    expected = (TensorElement.pure((half - p.beta) * (half + p.beta + 1)).scale(-1 / p.alpha)
                + TensorElement.pure(1, {(f(0),): Q(1)}))
    assert phi(basis_vector((f(0),), 0), p) == expected
    assert phi({}, p) == TensorElement()


def test_leading_term_of_mixed_monomial():
    p = bp("delta", lam=Q("1/2"), alpha=2, beta=Q("1/3"), gamma=1, eta=1, eps=2, theta=3)
    mono = (f(0), e(-1), d(-1))
    img = phi(basis_vector(mono, 1), p)
    key, coeff = leading_term(img)
    assert coeff == 1
    assert pbw_compare(key, BasisKey("B2", mono, 0, 1)) == 0
    for m, poly in img.terms.items():
        for (a, b) in poly.terms:
            other = BasisKey("B2", m, a, b)
            assert pbw_compare(other, key) <= 0


@pytest.mark.parametrize("flavor", FLAVORS)
def test_intertwining_small_window(flavor):
    p = bp(flavor, lam=Q("2/3"), alpha=-2, beta=Q("1/3"), gamma=Q("3/2"), eta=1, eps=Q("1/2"), theta=Q("1/3"))
    report = phi_intertwining_check(p, InducedCaps(depth=2, d0=1, degree=2, charge_min=-2, charge_max=2), 1)
    assert report.ok, report.violations[:3]
    assert report.injectivity_method == "leading-term triangularity"


def test_phi_composition_on_words():
    p = bp("theta", lam=3, alpha=Q("1/2"), beta=Q("-1/2"), gamma=2, eta=-1, eps=3, theta=1)
    M, ph = InducedModule(p), Phi(p)
    spec = p.tensor_spec()
    b = basis_vector((h(-1),), 1)
    for x, y in itertools.product(generators(1), repeat=2):
        assert ph(M.act(x, M.act(y, b))) == tensor_act(x, ph(M.act(y, b)), spec)


def test_induced_reducibility_examples():
    assert induced_reducibility(bp("theta", beta=1, eta=1, eps=Q("1/2"), theta=Q("1/3"))).verdict == "reducible"
    v = induced_reducibility(bp("omega", eta=3, eps=0, theta=2))
    assert v.verdict == "reducible" and v.criterion["condition"] == "i"
    assert (v.criterion["m"], v.criterion["n"]) == (0, 0)
    assert induced_reducibility(bp("omega", eta=1, eps=Q("1/2"), theta=-2)).verdict == "irreducible"
    # Theta with 2 beta outside Z_+ defers to the criterion
    assert induced_reducibility(bp("theta", beta=Q("1/3"), eta=1, eps=Q("1/2"), theta=-2)).verdict == "irreducible"
    with pytest.raises(ValueError):
        induced_reducibility(bp(), 0)


def test_params_json_round_trip():
    p = bp("delta", lam=2, alpha=Q("-1/3"), beta=1, gamma=2, eta=3, eps=4, theta=5)
    assert BModuleParams.from_json(p.to_json()) == p
    with pytest.raises(ValueError):
        bp(alpha=0)


def test_central_acts_by_theta_on_induced():
    p = bp(theta=Q("7/2"))
    M = InducedModule(p)
    v = basis_vector((f(0), d(0)), 1)
    assert M.act(CENTRAL, v) == {k: c * Q("7/2") for k, c in v.items()}
