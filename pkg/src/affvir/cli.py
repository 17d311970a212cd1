"""Command-line front end: JSON report on stdout, short summary on stderr.

Settings resolve as command-line flag, then config file (``--config``), then
the ``AFFVIR_DEFAULT_CAPS`` environment variable (caps only), then built-in
defaults.  Exit status: 0 all checks pass, 1 a check failed, 2 invalid input,
3 a truncated computation overflowed its depth cap.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from typing import Any, Callable

from affvir.arith import Poly2, Q
from affvir.certificate import ProbeFailure, irreducibility_probe, verify_certificate
from affvir.criterion import verma_cross_check
from affvir.induced import (
    BModuleParams,
    InducedCaps,
    b_module_axiom_check,
    induced_reducibility,
    phi_intertwining_check,
)
from affvir.linalg import Echelon
from affvir.lie import LieElement, bracket, generators, jacobi_check, parse_gen
from affvir.polymod import ModuleParams, m_act, module_axiom_check
from affvir.tensor import (
    HypothesisViolation,
    TensorElement,
    TensorSpec,
    classify_isomorphism,
    d_injectivity_check,
    omega_apply,
    random_element,
    tensor_act,
)
from affvir.verma import (
    HighestWeight,
    TruncationOverflow,
    VermaModule,
    vector_from_json,
    vector_to_json,
    weight_keys,
)

EXIT_PASS, EXIT_FAIL, EXIT_SCHEMA, EXIT_OVERFLOW = 0, 1, 2, 3
CAPS_ENV = "AFFVIR_DEFAULT_CAPS"
CAP_KEYS = ("window", "degree", "depth", "d0", "word_length", "max_index", "bound")

DEFAULTS: dict[str, Any] = {
    "flavor": "omega", "lambda": "1", "alpha": "1", "beta": "0", "gamma": "0",
    "eta": "1", "epsilon": "1/2", "theta": "1/3",
    "window": 3, "degree": 4, "depth": 2, "d0": 1, "word_length": 3, "max_index": 1,
    "bound": 50, "seed": 0, "count": 3, "mode": "poly", "target": "module",
    "l": 4, "m": -5, "r": 3,
}


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class Settings:
    """Flag > config file > environment caps > defaults."""

    def __init__(self, args: argparse.Namespace):
        self.args = vars(args)
        self.config: dict = {}
        if args.config:
            try:
                with open(args.config) as fh:
                    raw = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise SchemaError("config", str(exc)) from None
            for section in ("params", "caps"):
                self.config.update(raw.get(section, {}))
            self.config.update({k: v for k, v in raw.items() if k not in ("params", "caps", "command")})
        self.env_caps: dict = {}
        if os.environ.get(CAPS_ENV):
            try:
                self.env_caps = json.loads(os.environ[CAPS_ENV])
            except json.JSONDecodeError as exc:
                raise SchemaError(CAPS_ENV, str(exc)) from None

    def explicit(self, key: str):
        """The value set by flag, config file or environment, else None."""
        flag = self.args.get(key.replace("-", "_"))
        if flag is not None:
            return flag
        if key in self.config:
            return self.config[key]
        if key in CAP_KEYS and key in self.env_caps:
            return self.env_caps[key]
        return None

    def get(self, key: str):
        value = self.explicit(key)
        return DEFAULTS.get(key) if value is None else value

    def rational(self, key: str):
        value = self.get(key)
        try:
            return Q(str(value))
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"params.{key}", f"malformed rational {value!r} ({exc})") from None

    def cap(self, key: str, minimum: int = 1) -> int:
        value = self.get(key)
        try:
            value = int(value)
        except (TypeError, ValueError):
            raise SchemaError(f"caps.{key}", f"expected an integer, got {value!r}") from None
        if value < minimum:
            raise SchemaError(f"caps.{key}", f"must be >= {minimum}")
        return value

    def integer(self, key: str) -> int:
        value = self.get(key)
        try:
            return int(value)
        except (TypeError, ValueError):
            raise SchemaError(f"params.{key}", f"expected an integer, got {value!r}") from None

    def module(self) -> ModuleParams:
        try:
            return ModuleParams(self.get("flavor"), self.rational("lambda"), self.rational("alpha"),
                                self.rational("beta"), self.rational("gamma"))
        except ValueError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError("params", str(exc)) from None

    def hw(self) -> HighestWeight:
        return HighestWeight(self.rational("eta"), self.rational("epsilon"), self.rational("theta"))

    def bparams(self) -> BModuleParams:
        m, hw = self.module(), self.hw()
        return BModuleParams(m.flavor, m.lam, m.alpha, m.beta, m.gamma, hw.eta, hw.eps, hw.theta)


class Report:
    def __init__(self, command: str):
        self.command = command
        self.checks: list[dict] = []
        self.result: dict = {}

    def check(self, cid: str, anchor: str, passed: bool, **details) -> bool:
        self.checks.append({"id": cid, "anchor": anchor, "passed": bool(passed), **details})
        return passed

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "status": "PASS" if self.passed else "FAIL",
            "checks": sorted(self.checks, key=lambda c: c["id"]),
            "result": self.result,
        }


def _load_json_arg(text: str, path: str):
    """A JSON literal or the path of a JSON file."""
    if text is None:
        return None
    try:
        if os.path.exists(text):
            with open(text) as fh:
                return json.load(fh)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(path, f"invalid JSON ({exc})") from None


def _parse_lie(text: str, path: str) -> LieElement:
    text = text.strip()
    if text.startswith("["):
        try:
            return LieElement.from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise SchemaError(path, str(exc)) from None
    try:
        return LieElement.basis(parse_gen(text))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


# -- commands ----------------------------------------------------------------------


def cmd_check_axioms(s: Settings, rep: Report) -> None:
    target = s.get("target")
    if target == "lie":
        window = s.cap("window")
        gens = generators(window)
        bad = 0
        count = 0
        for x in gens:
            for y in gens:
                for z in gens:
                    count += 1
                    if jacobi_check(x, y, z):
                        bad += 1
        rng = random.Random(s.integer("seed"))
        for _ in range(100):
            els = [LieElement({g: Q(f"{rng.randint(-9, 9)}/{rng.randint(1, 5)}")
                               for g in rng.sample(gens, 4)}) for _ in range(3)]
            count += 1
            if jacobi_check(*els):
                bad += 1
        rep.check("jacobi", "jacobi-identity", bad == 0, checked=count, violations=bad)
    elif target == "b-module":
        p = s.bparams()
        r = b_module_axiom_check(p, s.cap("window"), s.cap("degree"), bool(s.get("keep_theta_gamma")))
        rep.result = {"params": p.to_json(), "keep_theta_gamma": bool(s.get("keep_theta_gamma"))}
        rep.check("b-module-axioms", "b-lambda-module-representation", r.ok,
                  checked=r.checked, violations=len(r.violations), first=r.violations[:3])
    elif target == "module":
        p = s.module()
        r = module_axiom_check(p, s.cap("window"), s.cap("degree"))
        rep.result = {"params": p.to_json()}
        rep.check("module-axioms", "rank-one-module-representation", r.ok,
                  checked=r.checked, violations=len(r.violations), first=r.violations[:3])
    else:
        raise SchemaError("target", f"unknown target {target!r} (module, b-module, lie)")


def cmd_bracket(s: Settings, rep: Report) -> None:
    x = _parse_lie(s.get("x") or "", "x")
    y = _parse_lie(s.get("y") or "", "y")
    z = bracket(x, y)
    rep.result = {"x": x.to_json(), "y": y.to_json(), "bracket": z.to_json(), "text": repr(z)}
    rep.check("antisymmetry", "bracket-antisymmetry", bracket(y, x) == -z)


def cmd_act(s: Settings, rep: Report) -> None:
    x = _parse_lie(s.get("x") or "", "x")
    target = s.get("target")
    if target == "module":
        p = s.module()
        g = Poly2.from_json(_load_json_arg(s.get("element") or "[[0,0,\"1\"]]", "element"))
        out = m_act(x, g, p)
        rep.result = {"params": p.to_json(), "input": g.to_json(), "output": out.to_json(), "text": repr(out)}
    elif target == "verma":
        V = VermaModule(s.hw(), max_depth=s.cap("depth"))
        vec = vector_from_json(_load_json_arg(s.get("element") or "[[[], \"1\"]]", "element"))
        out = V.act(x, vec)
        rep.result = {"highest_weight": s.hw().to_json(), "output": vector_to_json(out)}
    elif target == "tensor":
        spec = TensorSpec(s.module(), s.hw(), bool(s.get("quotient")), s.cap("depth"))
        w = TensorElement.from_json(_load_json_arg(s.get("element") or
                                                   '[{"monomial": [], "poly": [[0,0,"1"]]}]', "element"))
        out = tensor_act(x, spec.normalize(w), spec)
        rep.result = {"spec": spec.to_json(), "output": out.to_json(), "text": repr(out)}
    else:
        raise SchemaError("target", f"unknown target {target!r} (module, verma, tensor)")
    rep.check("action", "module-action", True)


def cmd_singular_vectors(s: Settings, rep: Report) -> None:
    hw = s.hw()
    depth = s.cap("depth", 0)
    cmin = s.explicit("charge_min")
    cmax = s.explicit("charge_max")
    cmin = -(2 * depth + 6) if cmin is None else int(cmin)
    cmax = (2 * depth + 6) if cmax is None else int(cmax)
    V = VermaModule(hw)
    spaces = []
    consistent = True
    for key in weight_keys(depth, cmin, cmax):
        if key.depth == 0 and key.charge >= 0:
            continue
        sing = V.singular_vectors(key)
        rad = V.shapovalov_radical(key)
        ech = Echelon()
        for v in rad:
            ech.add(v)
        consistent &= all(ech.contains(v) for v in sing)
        if sing or rad:
            spaces.append({
                "depth": key.depth, "charge": key.charge,
                "singular_dim": len(sing), "radical_dim": len(rad),
                "singular_basis": [vector_to_json(v) for v in sing],
            })
    rep.result = {"highest_weight": hw.to_json(), "charge_range": [cmin, cmax], "depth": depth,
                  "nonzero_spaces": spaces}
    rep.check("singular-in-radical", "contravariant-form-radical", consistent)


def cmd_verma_reducible(s: Settings, rep: Report) -> None:
    hw = s.hw()
    cross = verma_cross_check(hw, s.cap("depth"), s.cap("bound"))
    v = cross.verdict
    rep.result = {"highest_weight": hw.to_json(), **v.to_json()}
    rep.check("criterion", "verma-reducibility-criterion", True, verdict=v.verdict.upper())
    rep.check("criterion-vs-radical", "contravariant-form-radical", cross.consistent,
              max_depth=cross.max_depth, problems=cross.problems,
              witnesses_in_window=[w.to_json() for w in cross.checked_witnesses])


def cmd_tensor_probe(s: Settings, rep: Report) -> None:
    spec = TensorSpec(s.module(), s.hw(), bool(s.get("quotient")), None)
    element = s.get("element")
    if element is not None:
        elements = [TensorElement.from_json(_load_json_arg(element, "element"))]
    else:
        rng = random.Random(s.integer("seed"))
        elements = [random_element(rng, s.cap("depth")) for _ in range(s.cap("count"))]
    certs = []
    for k, w in enumerate(elements):
        try:
            cert = irreducibility_probe(w, spec)
        except ProbeFailure as exc:
            rep.check(f"probe-{k:03d}", "tensor-irreducibility", False, reason=exc.reason, error=str(exc))
            continue
        ver = verify_certificate(cert.to_json())
        rep.check(f"probe-{k:03d}", "tensor-irreducibility", ver.ok, steps=len(cert.steps),
                  coprime_shift=cert.shift, errors=ver.errors)
        certs.append(cert.to_json())
    rep.result = {"spec": spec.to_json(), "certificates": certs}
    out = s.get("out")
    if out and certs:
        with open(out, "w") as fh:
            json.dump(certs[0] if len(certs) == 1 else certs, fh, sort_keys=True, indent=1)


def cmd_verify_certificate(s: Settings, rep: Report) -> None:
    data = _load_json_arg(s.get("certificate"), "certificate")
    items = data if isinstance(data, list) else [data]
    for k, item in enumerate(items):
        ver = verify_certificate(item)
        rep.check(f"certificate-{k:03d}", "tensor-irreducibility", ver.ok,
                  steps_checked=ver.steps_checked, errors=ver.errors)


def cmd_classify_iso(s: Settings, rep: Report) -> None:
    a = TensorSpec.from_json(_load_json_arg(s.get("spec_a"), "spec_a"))
    b = TensorSpec.from_json(_load_json_arg(s.get("spec_b"), "spec_b"))
    iso = classify_isomorphism(a, b)
    rep.result = {"spec_a": a.to_json(), "spec_b": b.to_json(), "isomorphic": iso}
    rep.check("classification", "tensor-isomorphism-classification", True, isomorphic=iso)


def cmd_omega_test(s: Settings, rep: Report) -> None:
    l, m, r = s.integer("l"), s.integer("m"), s.integer("r")
    if r < 0:
        raise SchemaError("params.r", "must be nonnegative")
    mode = s.get("mode")
    p = s.module()
    if mode == "poly":
        degree = s.cap("degree", 0)
        nonzero = []
        for a in range(degree + 1):
            for b in range(degree + 1):
                if omega_apply(l, m, r, Poly2.monomial(a, b), p):
                    nonzero.append([a, b])
        rep.result = {"mode": mode, "l": l, "m": m, "r": r, "params": p.to_json(),
                      "outcome": "NONZERO" if nonzero else "ZERO", "nonzero_on": nonzero}
        if r > 2:
            rep.check("omega-poly", "omega-operator-vanishes-on-rank-one", not nonzero)
    elif mode == "tensor":
        hw = s.hw()
        cap = s.explicit("depth")
        cap = max(6, -m + 1, l - m + r) if cap is None else s.cap("depth")
        spec = TensorSpec(p, hw, bool(s.get("quotient")), cap)
        out = omega_apply(l, m, r, TensorElement.pure(1), spec)
        rep.result = {"mode": mode, "l": l, "m": m, "r": r, "spec": spec.to_json(),
                      "outcome": "NONZERO" if out else "ZERO", "output": out.to_json()}
        if r > 2 and l == r + 1 and m == -r - 2:
            hyp = bool(hw.eta or hw.eps or hw.theta)
            rep.result["hypothesis"] = "eta, epsilon, theta not all zero"
            rep.result["hypothesis_holds"] = hyp
            if hyp or not spec.quotient:
                rep.check("omega-tensor", "omega-operator-nonzero-on-tensor", bool(out))
        inj = d_injectivity_check(1, spec)
        rep.result["d1_injective_on_window"] = inj.to_json()
    else:
        raise SchemaError("params.mode", f"unknown mode {mode!r} (poly, tensor)")


def cmd_induced_verify(s: Settings, rep: Report) -> None:
    p = s.bparams()
    caps = InducedCaps(depth=s.cap("depth", 0), d0=s.cap("d0", 0), degree=s.cap("degree", 0))
    ax = b_module_axiom_check(p, 3, min(caps.degree, 4) or 1)
    rep.check("b-module-axioms", "b-lambda-module-representation", ax.ok, violations=len(ax.violations))
    r = phi_intertwining_check(p, caps, s.cap("max_index") if s.explicit("max_index") is not None else 2)
    rep.check("phi-homomorphism", "induced-to-tensor-homomorphism", not r.violations,
              checked=r.checked, violations=r.violations[:5])
    rep.check("phi-injective", "induced-to-tensor-injective", r.full_rank,
              basis_size=r.basis_size, rank=r.rank, method=r.injectivity_method)
    rep.result = {"params": p.to_json(), "caps": {"depth": caps.depth, "d0": caps.d0, "degree": caps.degree,
                                                  "charge": [caps.charge_min, caps.charge_max]}}


def cmd_induced_reducible(s: Settings, rep: Report) -> None:
    p = s.bparams()
    v = induced_reducibility(p, s.cap("bound"))
    rep.result = {"params": p.to_json(), **v.to_json()}
    rep.check("induced-criterion", "induced-module-reducibility", True, verdict=v.verdict.upper())


COMMANDS: dict[str, tuple[Callable, str]] = {
    "check-axioms": (cmd_check_axioms, "representation and Jacobi checks"),
    "bracket": (cmd_bracket, "Lie bracket of two elements"),
    "act": (cmd_act, "action of a Lie element on a module element"),
    "singular-vectors": (cmd_singular_vectors, "singular vectors and radical per weight space"),
    "verma-reducible": (cmd_verma_reducible, "exact reducibility verdict for a Verma module"),
    "tensor-probe": (cmd_tensor_probe, "irreducibility certificates in a tensor module"),
    "verify-certificate": (cmd_verify_certificate, "replay certificates"),
    "classify-iso": (cmd_classify_iso, "isomorphism of two tensor modules"),
    "omega-test": (cmd_omega_test, "omega operator dichotomy"),
    "induced-verify": (cmd_induced_verify, "induced module homomorphism and injectivity"),
    "induced-reducible": (cmd_induced_reducible, "reducibility verdict for an induced module"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flags override it)")
    common.add_argument("--seed", type=int)
    for name in ("flavor", "lambda", "alpha", "beta", "gamma", "eta", "epsilon", "theta"):
        common.add_argument(f"--{name}", dest=name)
    for name in ("window", "degree", "depth", "d0", "bound", "count", "max-index", "word-length"):
        common.add_argument(f"--{name}", dest=name.replace("-", "_"), type=int)
    common.add_argument("--quotient", action="store_const", const=True,
                        help="use the irreducible quotient instead of the Verma module")

    parser = argparse.ArgumentParser(prog="affvir", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("check-axioms", "act"):
            sp.add_argument("--target")
        if name == "check-axioms":
            sp.add_argument("--keep-theta-gamma", dest="keep_theta_gamma", action="store_const", const=True)
        if name in ("bracket", "act"):
            sp.add_argument("--x")
        if name == "bracket":
            sp.add_argument("--y")
        if name in ("act", "tensor-probe"):
            sp.add_argument("--element", help="JSON literal or file")
        if name == "tensor-probe":
            sp.add_argument("--out", help="write certificate JSON here")
        if name == "singular-vectors":
            sp.add_argument("--charge-min", dest="charge_min", type=int)
            sp.add_argument("--charge-max", dest="charge_max", type=int)
        if name == "verify-certificate":
            sp.add_argument("certificate")
        if name == "classify-iso":
            sp.add_argument("spec_a")
            sp.add_argument("spec_b")
        if name == "omega-test":
            sp.add_argument("--l", type=int)
            sp.add_argument("--m", type=int)
            sp.add_argument("--r", type=int)
            sp.add_argument("--mode", choices=("poly", "tensor"))
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    rep = Report(args.command)
    start = time.perf_counter()
    try:
        settings = Settings(args)
        COMMANDS[args.command][0](settings, rep)
        status = EXIT_PASS if rep.passed else EXIT_FAIL
        doc = rep.to_json()
    except SchemaError as exc:
        status = EXIT_SCHEMA
        doc = {"command": args.command, "status": "SCHEMA_ERROR",
               "errors": [{"path": exc.path, "message": exc.message}]}
    except HypothesisViolation as exc:
        status = EXIT_SCHEMA
        doc = {"command": args.command, "status": "SCHEMA_ERROR",
               "errors": [{"path": "params.beta", "message": str(exc)}]}
    except TruncationOverflow as exc:
        status = EXIT_OVERFLOW
        doc = {"command": args.command, "status": "TRUNCATION_OVERFLOW", "message": str(exc)}
    json.dump(doc, stdout, sort_keys=True, indent=1)
    stdout.write("\n")
    elapsed = time.perf_counter() - start
    for c in doc.get("checks", []):
        print(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['id']} ({c['anchor']})", file=stderr)
    print(f"{args.command}: {doc['status']} in {elapsed:.2f}s", file=stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
