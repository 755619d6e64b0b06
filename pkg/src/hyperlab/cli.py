"""Command-line front end.

Subcommands ``kronecker``, ``orbit``, ``probe``, ``normalform`` and
``repro``.  Settings come from built-in defaults, then ``--config``, then
inline flags; the merged config is validated against a JSON schema and
embedded in every report.

Exit codes: 0 success (or verdict match under ``--expect``), 1 verdict
mismatch, 2 configuration error, 3 mathematical precondition violated.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np

from . import __version__
from .constructions import (
    a2_cover,
    angle_grid,
    make_alpha,
    parse_token,
    radial_grid,
    sample_A_alpha,
    sample_A_alpha_beta,
    sample_B,
    sample_Z_module,
)
from .density import DENSE, INCONCLUSIVE, NOT_DENSE, PolyDisc, VerdictThresholds, Window, density_trend
from .errors import ConfigError, HyperlabError, NoNontrivialCanonical, PreconditionError
from .io import matrix_from_json, vector_from_json, write_atomic, write_json
from .linalg import as_float, subspace_from_basis
from .normal_form import check_K_eta_membership, normal_form
from .repro import SUITES, run_suite
from .semigroup import (
    canonical_invariant_subspace,
    example_dense_spectrum_C2,
    example_G_theta,
    example_R3,
    hypercyclicity_probe,
    is_invariant,
    make_semigroup,
    orbit,
    orbit_cover,
    subspace_hypercyclicity_probe,
    witness_in_subspace,
)

SCHEMA_ID = "hyperlab-report/1"
VERDICTS = (DENSE, NOT_DENSE, INCONCLUSIVE)
KINDS = ("A_alpha", "A_alpha_beta", "A2", "B", "Z_module")
EXAMPLES = ("G_theta", "dense_spectrum_C2", "R3", "identity")

_scalar = {"type": ["number", "string"]}
_window = {
    "oneOf": [
        {"type": "string"},
        {"type": "object", "required": ["lo", "hi"], "additionalProperties": False,
         "properties": {"lo": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                        "hi": {"type": "array", "items": {"type": "number"}, "minItems": 1}}},
        {"type": "object", "required": ["polydisc", "radius"], "additionalProperties": False,
         "properties": {"polydisc": {"type": "integer", "minimum": 1},
                        "radius": {"type": "number", "exclusiveMinimum": 0}}},
    ]
}
_matrix = {"type": "object", "required": ["entries"],
           "properties": {"field": {"enum": ["R", "C"]}, "n": {"type": "integer", "minimum": 1},
                          "entries": {"type": "array", "items": {"type": "array"}}}}

CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "command": {"enum": ["kronecker", "orbit", "probe", "normalform", "repro"]},
        "kind": {"enum": list(KINDS)},
        "primes": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "beta_primes": {"type": ["array", "null"], "items": {"type": "integer"}},
        "gens": {"type": ["array", "null"], "items": {"type": "array", "items": _scalar}},
        "theta": {"type": "array", "items": _scalar, "minItems": 1, "maxItems": 2},
        "radial_step": {"type": "number", "exclusiveMinimum": 0},
        "index_bound": {"enum": ["all", "s"]},
        "window": {"anyOf": [_window, {"type": "null"}]},
        "eps": {"type": "number", "exclusiveMinimum": 0},
        "schedule": {"type": ["array", "null"], "items": {"type": "integer", "minimum": 0}, "minItems": 1},
        "mode": {"enum": ["float", "exact"]},
        "seed": {"type": "integer"},
        "thresholds": {"type": "object", "additionalProperties": False,
                       "properties": {"dense": {"type": "number"}, "not_dense": {"type": "number"},
                                      "plateau": {"type": "number"}}},
        "example": {"type": ["string", "null"], "enum": [*EXAMPLES, None]},
        "p": {"type": "integer"},
        "q": {"type": "integer"},
        "semigroup": {"type": ["object", "null"], "required": ["generators"],
                      "properties": {"generators": {"type": "array", "items": _matrix, "minItems": 1},
                                     "field": {"enum": ["R", "C"]}, "abelian": {"type": "boolean"},
                                     "weights": {"type": "array", "items": {"type": "number", "minimum": 0}}}},
        "vector": {"type": ["array", "null"]},
        "subspace": {"anyOf": [{"enum": ["canonical", "none"]},
                               {"type": "object", "required": ["basis"],
                                "properties": {"basis": {"type": "array", "items": {"type": "array"}}}}]},
        "cross_checks": {"type": "integer", "minimum": 0},
        "points": {"type": "boolean"},
        "id": {"type": ["string", "null"]},
    },
}

DEFAULTS = {
    "kind": "A_alpha",
    "primes": [2, 3],
    "beta_primes": None,
    "gens": None,
    "theta": ["sqrt(2)", "sqrt(3)"],
    "radial_step": 0.05,
    "index_bound": "all",
    "window": None,
    "eps": 0.1,
    "schedule": None,
    "mode": "float",
    "seed": 0,
    "thresholds": {"dense": 0.9, "not_dense": 0.5, "plateau": 0.01},
    "example": None,
    "p": 2,
    "q": 3,
    "semigroup": None,
    "vector": None,
    "subspace": "canonical",
    "cross_checks": 0,
    "points": False,
    "id": None,
}


# config -----------------------------------------------------------------

def parse_gens(text: str) -> list[list[str]]:
    """``"1,0;√2,√3"`` -> ``[["1", "0"], ["√2", "√3"]]``."""
    rows = [r.strip() for r in text.split(";") if r.strip()]
    if not rows:
        raise ConfigError("empty generator list")
    return [[x.strip() for x in r.split(",")] for r in rows]


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config must be a JSON object")
        cfg.update(loaded)
    inline = {
        "kind": getattr(args, "kind", None),
        "primes": _int_list(args.primes) if getattr(args, "primes", None) else None,
        "beta_primes": _int_list(args.beta_primes) if getattr(args, "beta_primes", None) else None,
        "gens": parse_gens(args.gens) if getattr(args, "gens", None) else None,
        "index_bound": getattr(args, "index_bound", None),
        "window": getattr(args, "window", None),
        "eps": getattr(args, "eps", None),
        "schedule": _int_list(args.schedule) if getattr(args, "schedule", None) else None,
        "mode": getattr(args, "mode", None),
        "seed": getattr(args, "seed", None),
        "example": getattr(args, "example", None),
        "id": getattr(args, "item", None),
        "points": True if getattr(args, "points", False) else None,
    }
    if getattr(args, "theta", None):
        inline["theta"] = [t.strip() for t in args.theta.split(",")]
    cfg.update({k: v for k, v in inline.items() if v is not None})
    cfg["command"] = command
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config does not match schema: {exc.message}") from None
    return cfg


def parse_window(obj, d: int):
    if isinstance(obj, dict) and "polydisc" in obj:
        region = PolyDisc(int(obj["polydisc"]), float(obj["radius"]))
    else:
        region = Window.from_json(obj)
    if region.dim != d:
        raise ConfigError(f"window has dimension {region.dim}, expected {d}")
    return region


def _window_json(region) -> dict:
    return region.to_json()


def _thresholds(cfg) -> VerdictThresholds:
    return VerdictThresholds(**cfg["thresholds"])


# kronecker --------------------------------------------------------------

def kronecker_sampler(cfg: dict):
    """Return ``(sampler, region, default schedule, sample_fn)`` for the set kind."""
    kind, mode = cfg["kind"], cfg["mode"]
    if kind in ("A_alpha", "A_alpha_beta"):
        alpha = make_alpha(len(cfg["primes"]), cfg["primes"])
        ib = cfg["index_bound"]
        if kind == "A_alpha":
            d = alpha.n
            region = parse_window(cfg["window"], d) if cfg["window"] is not None else Window.cube(d, 0.0, 1.0)
            fn = lambda S: sample_A_alpha(alpha, S, region, mode, ib)  # noqa: E731
        else:
            if not cfg["beta_primes"]:
                raise ConfigError("A_alpha_beta needs beta_primes")
            beta = make_alpha(len(cfg["beta_primes"]), cfg["beta_primes"])
            if beta.n != alpha.n:
                raise ConfigError("alpha and beta need the same length")
            d = 2 * alpha.n
            region = parse_window(cfg["window"], d) if cfg["window"] is not None else Window.cube(d, 0.0, 1.0)
            fn = lambda S: sample_A_alpha_beta(alpha, beta, S, region, mode, ib)  # noqa: E731
        return fn, region, [50, 100, 200], fn
    if kind == "A2":
        thetas = [float(parse_token(t)) for t in cfg["theta"]]
        if len(thetas) != 2:
            raise ConfigError("A2 needs two angles")
        region = parse_window(cfg["window"], 4) if cfg["window"] is not None else PolyDisc(2, 1.0)
        radii = radial_grid(cfg["radial_step"], region.radius if isinstance(region, PolyDisc) else
                            max(abs(x) for x in region.lo + region.hi) * math.sqrt(2))
        fn = lambda S: a2_cover(thetas[0], thetas[1], radii, S, region, cfg["eps"])  # noqa: E731
        return fn, region, [50, 100, 200], None
    if kind == "B":
        region = parse_window(cfg["window"], 2) if cfg["window"] is not None else Window.cube(2, -1.0, 1.0)
        r_max = max(abs(x) for x in region.lo + region.hi) * math.sqrt(2)

        def fn(k):
            if k < 1:
                raise ConfigError("B budgets must be >= 1")
            return sample_B(radial_grid(1.0 / k, r_max), angle_grid(4 * k))
        return fn, region, [8, 16, 32], fn
    if not cfg["gens"]:
        raise ConfigError("Z_module needs --gens")
    gens = [[parse_token(x) for x in g] for g in cfg["gens"]]
    d = len(gens[0])
    region = parse_window(cfg["window"], d) if cfg["window"] is not None else Window.cube(d, -2.0, 2.0)
    fn = lambda K: sample_Z_module(gens, K, region, mode)  # noqa: E731
    return fn, region, [2, 4, 8], fn


def cmd_kronecker(cfg: dict, out: Optional[Path]) -> dict:
    sampler, region, sched, sample_fn = kronecker_sampler(cfg)
    if cfg["schedule"] is None:
        cfg["schedule"] = sched
    cfg["window"] = _window_json(region)
    rep = density_trend(sampler, region, cfg["eps"], cfg["schedule"], _thresholds(cfg))
    result = {"report": rep.to_json()}
    if out is not None and cfg["points"] and sample_fn is not None:
        samp = sample_fn(cfg["schedule"][-1])
        write_atomic(out / "points.csv", samp.to_csv())
        result["points_file"] = "points.csv"
        result["flags"] = list(samp.flags)
    return {"verdict": rep.verdict, "result": result}


# semigroups -------------------------------------------------------------

class HyperlabErrorExit(Exception):
    """Error carrying an explicit exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def build_semigroup(cfg: dict):
    ex = cfg["example"]
    if ex == "G_theta":
        theta = cfg["theta"][0]
        return example_G_theta(cfg["p"], cfg["q"], parse_token(theta) if isinstance(theta, str) else theta)
    if ex == "dense_spectrum_C2":
        return example_dense_spectrum_C2()
    if ex == "R3":
        return example_R3()
    if ex == "identity":
        return make_semigroup([np.eye(2)], "R", True, names=("I",))
    desc = cfg["semigroup"]
    if desc is None:
        raise ConfigError("need a semigroup descriptor (config 'semigroup') or --example")
    mats = [matrix_from_json(m)[0] for m in desc["generators"]]
    field = desc.get("field")
    if field is None:
        field = "C" if any(m.get("field") == "C" for m in desc["generators"]) else "R"
    return make_semigroup(mats, field, desc.get("abelian"), desc.get("weights"))


def _vector(cfg: dict, G):
    if cfg["vector"] is None:
        v = np.ones(G.n)
        return v.astype(complex) if G.field == "C" else v
    v = vector_from_json(cfg["vector"], G.field)
    if len(v) != G.n:
        raise ConfigError(f"vector has length {len(v)}, expected {G.n}")
    return as_float(v)


def _ambient_window(cfg, G):
    d = 2 * G.n if G.field == "C" else G.n
    return parse_window(cfg["window"], d) if cfg["window"] is not None else Window.cube(d, -2.0, 2.0)


def cmd_orbit(cfg: dict, out: Optional[Path]) -> dict:
    G = build_semigroup(cfg)
    if not G.abelian:
        raise HyperlabErrorExit(3, "orbit enumeration needs commuting generators")
    window = _ambient_window(cfg, G)
    cfg["window"] = window.to_json()
    if cfg["schedule"] is None:
        cfg["schedule"] = [10, 20, 40]
    v = _vector(cfg, G)
    rep = density_trend(lambda K: orbit_cover(G, v, K, window, cfg["eps"]), window, cfg["eps"], cfg["schedule"],
                        _thresholds(cfg))
    result = {"semigroup": G.to_json(), "report": rep.to_json()}
    if out is not None and cfg["points"]:
        samp = orbit(G, v, cfg["schedule"][-1], window)
        write_atomic(out / "points.csv", samp.to_csv())
        result["points_file"] = "points.csv"
    return {"verdict": rep.verdict, "result": result}


def cmd_probe(cfg: dict, out: Optional[Path]) -> dict:
    G = build_semigroup(cfg)
    if not G.abelian:
        raise HyperlabErrorExit(3, "probe needs commuting generators")
    window = _ambient_window(cfg, G)
    cfg["window"] = window.to_json()
    if cfg["schedule"] is None:
        cfg["schedule"] = [10, 20, 40]
    th = _thresholds(cfg)
    pr = hypercyclicity_probe(G, window, cfg["eps"], cfg["schedule"], th, cfg["cross_checks"], cfg["seed"])
    result = {"hypercyclicity": pr.to_json()}
    sub = cfg["subspace"]
    if sub != "none":
        try:
            if sub == "canonical":
                M = canonical_invariant_subspace(pr.normal_form)
            else:
                M = subspace_from_basis([vector_from_json(b, G.field) for b in sub["basis"]])
            inv, err = is_invariant(G, M)
            entry = {"basis": _basis_json(M), "invariant": inv, "invariance_error": err}
            if cfg["vector"] is not None:
                rep = subspace_hypercyclicity_probe(G, M, _vector(cfg, G), None, cfg["eps"], cfg["schedule"], th)
                entry["report"] = rep.to_json()
            else:
                y, rep = witness_in_subspace(G, M, None, cfg["eps"], cfg["schedule"])
                entry["witness"] = None if y is None else _vec_json(y)
                entry["report"] = rep.to_json() if rep is not None else None
            result["subspace"] = entry
        except NoNontrivialCanonical as exc:
            result["subspace"] = {"error": "NoNontrivialCanonical", "message": str(exc)}
    return {"verdict": pr.report.verdict, "result": result}


def _vec_json(v):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return [[float(z.real), float(z.imag)] for z in v]
    return [float(x) for x in v]


def _basis_json(M):
    return [_vec_json(b) for b in M.basis.T]


def cmd_normalform(cfg: dict, out: Optional[Path]) -> dict:
    G = build_semigroup(cfg)
    nf = normal_form(G.float_generators(), G.field)
    checks = [check_K_eta_membership(A, nf.eta) for A in nf.conjugated]
    result = {"normal_form": nf.to_json(), "u_eta": _vec_json(nf.u_eta()),
              "membership": [{"ok": ok, "residual": r} for ok, r in checks]}
    return {"verdict": None, "result": result}


def cmd_repro(cfg: dict, out: Optional[Path]) -> dict:
    item = cfg["id"]
    if item is None:
        raise ConfigError("repro needs an item id")
    res = run_suite(item)
    return {"verdict": None, "passed": res.passed, "result": res.to_json()}


COMMANDS = {"kronecker": cmd_kronecker, "orbit": cmd_orbit, "probe": cmd_probe,
            "normalform": cmd_normalform, "repro": cmd_repro}


# argparse -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (inline flags override it)")
    common.add_argument("--out", help="output directory for report.json and point dumps")
    common.add_argument("--expect", choices=VERDICTS, help="exit 1 unless the verdict matches")
    common.add_argument("--mode", choices=("float", "exact"))
    common.add_argument("--window", help='box such as "0,1x0,1"')
    common.add_argument("--eps", type=float)
    common.add_argument("--schedule", help="comma-separated budgets")
    common.add_argument("--seed", type=int)
    common.add_argument("--points", action="store_true", help="also write points.csv")
    common.add_argument("--quiet", action="store_true")

    ap = argparse.ArgumentParser(prog="hyperlab", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"hyperlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kronecker", parents=[common], help="sample one of the dense sets and grade its coverage")
    k.add_argument("--kind", choices=KINDS)
    k.add_argument("--primes", help="radicands of alpha, e.g. 2,3")
    k.add_argument("--beta-primes", dest="beta_primes", help="radicands of beta (A_alpha_beta)")
    k.add_argument("--gens", help='Z-module generators, rows split by ";", e.g. "1,0;√2,√3"')
    k.add_argument("--theta", help="angles for A2, e.g. sqrt(2),sqrt(3)")
    k.add_argument("--index-bound", dest="index_bound", choices=("all", "s"),
                   help="cap every index at the budget (all) or only s (s)")

    for name, text in (("orbit", "orbit coverage of a vector"), ("probe", "hypercyclicity and subspace probes"),
                       ("normalform", "normal form of a commuting family")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--example", choices=EXAMPLES)
        p.add_argument("--theta", help="rotation angle for G_theta, e.g. sqrt(2)")

    r = sub.add_parser("repro", parents=[common], help="run a canned reproduction suite")
    r.add_argument("item", help=f"one of {', '.join(SUITES)}")
    return ap


def _error_code(exc: BaseException) -> int:
    if isinstance(exc, HyperlabErrorExit):
        return exc.code
    if isinstance(exc, ConfigError):
        return 2
    if isinstance(exc, (PreconditionError, HyperlabError, ArithmeticError)):
        return 3
    return 2


def run(argv=None) -> tuple[int, dict]:
    """Parse ``argv``, execute, write the report; returns ``(exit code, report)``."""
    args = build_parser().parse_args(argv)
    out = Path(args.out) if args.out else None
    report = {"schema": SCHEMA_ID, "version": __version__, "command": args.command}
    try:
        cfg = resolve_config(args.command, args)
        report["config"] = cfg
        outcome = COMMANDS[args.command](cfg, out)
    except Exception as exc:  # mapped to an exit code below
        if not isinstance(exc, (HyperlabError, HyperlabErrorExit, ArithmeticError, ValueError)):
            raise
        code = _error_code(exc)
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        report["exit_code"] = code
        _emit(report, out, args)
        return code, report
    report["config"] = cfg
    report.update(outcome)
    code = 0
    if "passed" in outcome and not outcome["passed"]:
        code = 1
    if args.expect is not None and outcome.get("verdict") != args.expect:
        code = 1
    report["exit_code"] = code
    _emit(report, out, args)
    return code, report


def _emit(report: dict, out: Optional[Path], args) -> None:
    if out is not None:
        name = "report.json" if args.command != "repro" else f"repro-{getattr(args, 'item', 'x')}.json"
        write_json(out / name, report)
    if getattr(args, "quiet", False):
        return
    if "error" in report:
        print(f"error [{report['error']['type']}]: {report['error']['message']}", file=sys.stderr)
        return
    res = report["result"]
    if args.command == "repro":
        for line in res["lines"]:
            print(line)
        for name, c in res["checks"].items():
            print(f"{'PASS' if c['passed'] else 'FAIL'}  {name}")
        print(f"{res['id']}: {'PASS' if res['passed'] else 'FAIL'}")
        return
    if args.command == "normalform":
        nf = res["normal_form"]
        print(f"eta = {nf['eta']}  residual = {nf.get('residual')}")
        return
    rep = res["report"] if "report" in res else res["hypercyclicity"]["report"]
    print(f"{args.command}: verdict {rep['verdict']}  coverage {rep['coverage']:.4f}  trend {rep['trend']}")
    if "subspace" in res:
        s = res["subspace"]
        if "error" in s:
            print(f"canonical subspace: {s['error']} ({s['message']})")
        elif s.get("report"):
            print(f"subspace probe: verdict {s['report']['verdict']}  trend {s['report']['trend']}")


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
