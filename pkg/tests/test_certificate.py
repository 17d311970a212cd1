import copy
import json
import random

import pytest

from affvir.arith import Poly2, Q
from affvir.certificate import FORMAT, irreducibility_probe, verify_certificate
from affvir.lie import Gen
from affvir.polymod import ModuleParams
from affvir.tensor import HypothesisViolation, TensorElement, TensorSpec, random_element
from affvir.verma import HighestWeight

s, t = Poly2.s(), Poly2.t()
f, h, d = (lambda i, fam=fam: Gen(fam, i) for fam in "fhd")


def spec(flavor, lam=1, alpha=1, beta=0, gamma=1, hw=("1", "1/2", "1/3"), quotient=False):
    return TensorSpec(ModuleParams(flavor, Q(lam), Q(alpha), Q(beta), Q(gamma)),
                      HighestWeight(*map(Q, hw)), quotient)


def test_linear_input_reaches_highest_weight_vector():
    cert = irreducibility_probe(TensorElement.pure(t), spec("omega"))
    assert cert.final.is_constant_pure()
    assert set(cert.final.terms) == {()}
    assert verify_certificate(cert).ok


def test_trivial_certificate():
    cert = irreducibility_probe(TensorElement.pure(1), spec("omega"))
    assert cert.steps == [] and cert.final == TensorElement.pure(1)
    assert verify_certificate(cert.dumps()).ok


def test_theta_example_with_product_factors():
    sp_ = spec("theta", beta=Q("1/3"), gamma=1, hw=("0", "0", "0"))
    cert = irreducibility_probe(TensorElement.pure(s + t), sp_)
    assert cert.final.is_constant_pure()
    report = verify_certificate(cert.to_json())
    assert report.ok and report.steps_checked == len(cert.steps)


@pytest.mark.parametrize("flavor, beta", [("omega", "2"), ("delta", "-3/2"), ("theta", "1/3"), ("theta", "-1")])
@pytest.mark.parametrize("gamma", ["0", "5/2"])
def test_random_elements(flavor, beta, gamma):
    sp_ = spec(flavor, lam=Q("2/3"), alpha=Q(-3), beta=Q(beta), gamma=Q(gamma))
    rng = random.Random(f"{flavor}:{beta}:{gamma}")
    for _ in range(3):
        w = random_element(rng, 2)
        cert = irreducibility_probe(w, sp_)
        report = verify_certificate(json.loads(cert.dumps()))
        assert report.ok, report.errors


def test_multi_component_elements():
    sp_ = spec("delta", beta=Q("1/2"), gamma=0)
    w = (TensorElement.pure(s * t + 1, {(f(0),): Q(1)})
         + TensorElement.pure(t * t, {(h(-1),): Q(2)})
         + TensorElement.pure(s, {(d(-1),): Q(-1)}))
    cert = irreducibility_probe(w, sp_)
    assert verify_certificate(cert).ok
    labels = [step["label"] for step in cert.steps]
    assert any("vandermonde" in label for label in labels)
    assert any("eliminate" in label for label in labels)


def test_quotient_mode_probe():
    sp_ = spec("omega", hw=("2", "0", "1"), quotient=True)
    w = TensorElement.pure(t, {(d(-1),): Q(1)}) + TensorElement.pure(s)
    cert = irreducibility_probe(w, sp_)
    assert verify_certificate(cert).ok


def test_tampered_certificate_is_rejected():
    cert = irreducibility_probe(TensorElement.pure(t * t + s), spec("omega")).to_json()
    bad = copy.deepcopy(cert)
    bad["steps"][0]["terms"][0]["coeff"] = "12345"
    report = verify_certificate(bad)
    assert not report.ok and any("differs" in err for err in report.errors)
    longer = irreducibility_probe(TensorElement.pure(t * t + t), spec("omega")).to_json()
    assert len(longer["steps"]) > 1
    truncated = copy.deepcopy(longer)
    truncated["steps"] = truncated["steps"][:-1]
    del truncated["final"]
    assert not verify_certificate(truncated).ok
    assert not verify_certificate({**cert, "format": "other"}).ok
    assert cert["format"] == FORMAT


def test_forward_reference_is_rejected():
    cert = irreducibility_probe(TensorElement.pure(t), spec("omega")).to_json()
    cert["steps"][0]["terms"][0]["source"] = 5
    assert not verify_certificate(cert).ok


def test_probe_preconditions():
    with pytest.raises(HypothesisViolation):
        irreducibility_probe(TensorElement.pure(t), spec("theta", beta=1))
    with pytest.raises(ValueError):
        irreducibility_probe(TensorElement(), spec("omega"))
