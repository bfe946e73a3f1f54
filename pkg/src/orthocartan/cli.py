"""Command-line front end producing JSON verification certificates.

Exit codes: 0 when every verdict passes, 2 for usage or validation errors,
3 when a mathematical check fails or the descent does not converge.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .cartan import (family_orthogonal_cartan, standard_cartan, verify_cartan,
                     verify_orthogonal)
from .coxeter import (cartan_in_bracket_image, coxeter_fixed_point_check, coxeter_lift_su,
                      regular_strengthening_report, strengthen_to_regular)
from .descent import (STRATEGIES, descend_to_complement, descent_report, goto_factorize,
                      kostant_projection_check, one_and_half_check, one_and_half_span,
                      orthogonality_residual, root_space_decomposition)
from .exceptions import (ConjugationError, DimensionError, NonConvergenceError,
                         OrthoCartanError, ParameterError, StructureError)
from .liealg import FAMILIES, _MIN_N, algebra
from .numkernel import Tolerances, subspace_distance, orthocomplement
from .serialize import decode_matrix, encode_matrix

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 2, 3
COMMANDS = ("construct", "coxeter", "descend", "factorize", "kostant", "suite")

# sizes exercised by ``suite --sweep``
SWEEP = {"su": range(2, 9), "so": range(3, 11), "sp": range(1, 5)}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    family: str = "su"
    n: int = 2
    tol: float = 1e-8
    seed: int = 0
    max_iter: int = 10000
    strategy: str = "descent"
    output: str | None = None
    input: str | None = None
    random: bool = False
    samples: int = 200
    jobs: int = 1
    sweep: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < _MIN_N[self.family]:
            raise ParameterError(f"{self.family}(n) needs n >= {_MIN_N[self.family]}")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ParameterError("tol must be a positive finite number")
        if self.max_iter < 1 or self.samples < 1 or self.jobs < 1:
            raise ParameterError("max-iter, samples and jobs must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed must fit in 64 bits")
        if self.strategy not in STRATEGIES:
            raise ParameterError(f"unknown strategy {self.strategy!r}")
        if self.strategy == "coxeter" and self.family != "su":
            raise ParameterError("the coxeter strategy requires family su")

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(tol_residual=self.tol, max_iter=self.max_iter)

    def algebra(self):
        return algebra(self.family, self.n, self.tolerances)


def _verdict(passed, residual):
    residual = float(residual)
    if not math.isfinite(residual):
        return {"pass": False, "residual": None}
    return {"pass": bool(passed), "residual": residual}


def certificate(command, config: RunConfig, verdicts, payload) -> dict:
    return {
        "command": command,
        "config": dataclasses.asdict(config),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "verdicts": verdicts,
        "payload": payload,
        "version": __version__,
    }


def certificate_passed(cert) -> bool:
    return bool(cert["verdicts"]) and all(v["pass"] for v in cert["verdicts"].values())


def _load_element(config: RunConfig, A):
    if config.input is not None:
        with open(config.input, encoding="utf-8") as fh:
            data = json.load(fh)
        X = decode_matrix(data["matrix"] if isinstance(data, dict) and "matrix" in data else data)
        return A.check_element(X)
    if config.random:
        return A.random_element(config.seed)
    raise ParameterError("give --input <path> or --random")


# -- commands ----------------------------------------------------------------

def cmd_construct(config: RunConfig) -> dict:
    A = config.algebra()
    C = standard_cartan(A)
    C2 = family_orthogonal_cartan(A)
    r1, r2 = verify_cartan(C, config.seed), verify_cartan(C2, config.seed)
    orth = verify_orthogonal(C, C2)

    def worst(r):
        return max(r.residuals["abelian"], r.residuals["self_centralizing"])

    verdicts = {
        "standard_cartan": _verdict(r1.ok, worst(r1)),
        "orthogonal_cartan": _verdict(r2.ok, worst(r2)),
        "orthogonality": _verdict(orth < config.tol, orth),
    }
    payload = {"standard": C.to_dict(), "orthogonal": C2.to_dict(),
               "reports": {"standard": r1.to_dict(), "orthogonal": r2.to_dict()}}
    return certificate("construct", config, verdicts, payload)


def cmd_coxeter(config: RunConfig) -> dict:
    if config.family != "su":
        raise ParameterError("coxeter lifts are implemented for su(m) only")
    A = config.algebra()
    lift = coxeter_lift_su(config.n)
    C = standard_cartan(A)
    res = lift.residuals()
    exp_res = max(res["exp_N"], res["n_gDg"], res["exp_Lambda"])
    fixed = coxeter_fixed_point_check(lift, C)
    image = cartan_in_bracket_image(C, lift.N)
    a = strengthen_to_regular(A, lift.N, config.seed)
    strong = regular_strengthening_report(A, lift.N, a, C)
    verdicts = {
        "exp_matches": _verdict(exp_res < config.tol, exp_res),
        "no_fixed_points": _verdict(fixed.ok, fixed.residuals["abs_det"]),
        "cartan_in_image": _verdict(image.ok, image.residuals["max_lstsq"]),
        "regular_strengthening": _verdict(strong.ok, max(strong.residuals.values())),
    }
    payload = lift.to_dict()
    payload["checks"] = {r.name: r.to_dict() for r in (fixed, image, strong)}
    payload["a"] = encode_matrix(a)
    return certificate("coxeter", config, verdicts, payload)


def _descent_verdicts(A, x, trace, C, config):
    rep = descent_report(x, trace, C)
    bound = config.tol * max(1.0, A.norm(x))
    return {
        "converged": _verdict(trace.converged and rep["proj_C"] < bound, rep["proj_C"]),
        "strict_decrease": _verdict(rep["strict_decrease"] and rep["decrement"] < config.tol,
                                    rep["decrement"]),
        "group_membership": _verdict(rep["group"] < config.tol, rep["group"]),
    }


def cmd_descend(config: RunConfig) -> dict:
    A = config.algebra()
    x = _load_element(config, A)
    C = standard_cartan(A)
    R = root_space_decomposition(C, config.seed)
    try:
        trace = descend_to_complement(x, R=R, seed=config.seed)
    except NonConvergenceError as err:
        err.certificate = certificate(
            "descend", config, _descent_verdicts(A, x, err.trace, C, config),
            {"x": encode_matrix(x), "trace": err.trace.to_dict()})
        raise
    payload = {"x": encode_matrix(x), "trace": trace.to_dict()}
    return certificate("descend", config, _descent_verdicts(A, x, trace, C, config), payload)


def cmd_factorize(config: RunConfig) -> dict:
    A = config.algebra()
    x = _load_element(config, A)
    w = goto_factorize(A, x, config.strategy, config.seed)
    rel = w.residual / max(1.0, A.norm(x))
    orth = orthogonality_residual(A, x, w.a)
    verdicts = {
        "reconstruction": _verdict(rel < config.tol, rel),
        "a_regular": _verdict(w.a_regular, 0.0),
        "orthogonal_to_cartan": _verdict(orth < config.tol, orth),
    }
    return certificate("factorize", config, verdicts, w.to_dict())


def cmd_kostant(config: RunConfig) -> dict:
    if config.family != "su" or config.n > 5:
        raise ParameterError("the convexity check covers su(n) with n <= 5")
    A = config.algebra()
    if config.input is not None:
        x = _load_element(config, A)
    else:
        x = standard_cartan(A).generic_element(config.seed)
    rep = kostant_projection_check(A, x, config.samples, config.seed)
    verdicts = {
        "all_in_hull": _verdict(rep.max_distance < config.tol, rep.max_distance),
        "zero_in_hull": _verdict(rep.zero_distance < config.tol, rep.zero_distance),
    }
    payload = rep.to_dict()
    payload["x"] = encode_matrix(x)
    return certificate("kostant", config, verdicts, payload)


def _suite_one(config: RunConfig) -> dict:
    """Every check for one (family, n); verdict names are prefixed by section."""
    A = config.algebra()
    verdicts, payload = {}, {}

    def absorb(name, cert):
        for k, v in cert["verdicts"].items():
            verdicts[f"{name}.{k}"] = v

    absorb("construct", cmd_construct(config))
    C = standard_cartan(A)
    R = root_space_decomposition(C, config.seed)
    rel = R.relation_residuals()
    worst = max(rel.values())
    verdicts["roots.relations"] = _verdict(worst < config.tol, worst)
    payload["roots"] = {"count": R.count, "residuals": rel}

    a = A.random_regular(config.seed)
    d = subspace_distance(orthocomplement(A.centralizer(a), A.tol), A.ad_image(a))
    verdicts["image_is_complement"] = _verdict(d < config.tol, d)

    rnd = dataclasses.replace(config, random=True, input=None)
    absorb("descend", cmd_descend(rnd))
    absorb("factorize", cmd_factorize(dataclasses.replace(rnd, strategy="descent")))
    if A.family == "su":
        absorb("factorize_coxeter", cmd_factorize(dataclasses.replace(rnd, strategy="coxeter")))
        absorb("coxeter", cmd_coxeter(config))
        if A.n <= 5:
            absorb("kostant", cmd_kostant(dataclasses.replace(config, input=None)))

    b = one_and_half_span(A, a, config.seed)
    span = one_and_half_check(A, a, b)
    ab = abs(A.trace_inner(a, b))
    Za, Zb = A.centralizer(a), A.centralizer(b)
    zz = float(np.abs(Za.basis @ Zb.basis.T).max(initial=0.0))
    verdicts["one_and_half.spans"] = _verdict(span["spans"], A.dim - span["sum_dim"])
    verdicts["one_and_half.orthogonal"] = _verdict(ab < config.tol, ab)
    verdicts["one_and_half.centralizers_orthogonal"] = _verdict(zz < config.tol, zz)
    payload["one_and_half"] = span
    return {"family": A.family, "n": A.n, "verdicts": verdicts, "payload": payload}


def cmd_suite(config: RunConfig) -> dict:
    if not config.sweep:
        out = _suite_one(config)
        return certificate("suite", config, out["verdicts"], out["payload"])
    configs = [dataclasses.replace(config, family=f, n=n, sweep=False)
               for f in FAMILIES for n in SWEEP[f]]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as ex:
            parts = list(ex.map(_suite_one, configs))
    else:
        parts = [_suite_one(c) for c in configs]
    verdicts, payload = {}, {}
    for p in parts:
        tag = f"{p['family']}({p['n']})"
        payload[tag] = p["payload"]
        for k, v in p["verdicts"].items():
            verdicts[f"{tag}.{k}"] = v
    return certificate("suite", config, verdicts, payload)


HANDLERS = {"construct": cmd_construct, "coxeter": cmd_coxeter, "descend": cmd_descend,
            "factorize": cmd_factorize, "kostant": cmd_kostant, "suite": cmd_suite}


# -- argument handling ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", default="su", help="su, so or sp")
    common.add_argument("--n", type=int, default=3)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-iter", type=int, default=10000)
    common.add_argument("--strategy", default="descent", help="descent or coxeter")
    common.add_argument("--output", help="write the certificate here instead of stdout")
    common.add_argument("--input", help="JSON matrix: nested rows of [re, im] pairs or reals")
    common.add_argument("--random", action="store_true", help="use a seeded random element")
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--sweep", action="store_true",
                        help="suite only: run every family over the default size range")
    parser = argparse.ArgumentParser(prog="orthocartan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _emit(cert, path):
    text = json.dumps(cert, indent=2, allow_nan=False)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _error_certificate(command, config, err):
    cfg = dataclasses.asdict(config) if config is not None else None
    return {"command": command, "config": cfg,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "verdicts": {"error": {"pass": False, "residual": None}},
            "payload": {"error": type(err).__name__, "message": str(err)},
            "version": __version__}


USAGE_ERRORS = (ParameterError, DimensionError, StructureError, ConjugationError,
                OSError, json.JSONDecodeError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    opts = {k: v for k, v in vars(args).items() if k in fields}
    config = None
    try:
        config = RunConfig(**opts)
        cert = HANDLERS[args.command](config)
    except NonConvergenceError as err:
        cert = getattr(err, "certificate", None) or _error_certificate(args.command, config, err)
        _emit(cert, args.output)
        return EXIT_CHECK
    except USAGE_ERRORS as err:
        _emit(_error_certificate(args.command, config, err), args.output)
        return EXIT_USAGE
    except OrthoCartanError as err:
        _emit(_error_certificate(args.command, config, err), args.output)
        return EXIT_CHECK
    _emit(cert, args.output)
    return EXIT_OK if certificate_passed(cert) else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
