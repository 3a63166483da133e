"""Command-line front end: ``wspin-index {analyze,index,jump,verify,glue-check}``."""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import sys
from fractions import Fraction
from importlib import resources

import jsonschema

from .errors import InputValidationError, NonIntegralDegree, WSpinError
from .index import (
    WeightMatrix,
    cylindrical_total_index,
    gluing_check,
    local_end_index_smooth,
    glued_cylinder_index,
    smooth_total_index,
    spin_jump,
    spin_jump_table,
    split_glued_index,
    nondegeneracy_warnings,
)
from .maslov import Orientation
from .oracle import GridConfig, HalfCylinderProblem, discrete_index, glue_numeric, mode_count
from .qpoly import QPoly, check_nondegeneracy, symmetry_group
from .wspin import DecoratedOrbicurve, MarkedPoint, Metric, validate_structure
from ._rational import to_fraction

log = logging.getLogger("wspin_index")

DEFAULT_SWEEP_CAP = 10**4


# -- serialization -----------------------------------------------------------


def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def dumps(report: dict) -> str:
    """Canonical JSON: sorted keys, rationals as strings."""
    return json.dumps(_plain(report), sort_keys=True, indent=2) + "\n"


def load_schema(name: str) -> dict:
    text = resources.files("wspin_index").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate_json(data, name: str):
    try:
        jsonschema.validate(data, load_schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputValidationError(f"{name} file invalid at {where}: {exc.message}") from None


def load_json_file(path: str, schema: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"{path} is not valid JSON: {exc}") from None
    validate_json(data, schema)
    return data


# -- argument helpers --------------------------------------------------------


def parse_range(text: str) -> list[int]:
    """``"0..3"``, ``"2"`` or ``"0,2,4"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


def parse_rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from None


def parse_grid(text: str) -> GridConfig:
    try:
        return GridConfig.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise InputValidationError(f"{args.command} requires {', '.join(missing)}")


# -- commands ----------------------------------------------------------------


def cmd_analyze(args) -> dict:
    _require(args, "poly")
    W = QPoly.from_text(args.poly)
    nd = check_nondegeneracy(W)
    G = symmetry_group(W, cap=args.cap or 10**6)
    result = {
        "polynomial": W.render(),
        "variables": list(W.variables),
        "exponents": [list(r) for r in W.exponents],
        "weights": list(W.q),
        "d": W.weights.d,
        "k": list(W.weights.k),
        "nondegeneracy": {
            "weights_unique": nd.weights_unique,
            "isolated_singularity": nd.isolated_singularity.value,
            "atoms": [{"kind": a.kind, "variables": [W.variables[i] for i in a.variables],
                       "exponents": list(a.exponents)} for a in nd.atoms],
            "reason": nd.reason,
        },
        "group": {
            "order": G.order,
            "invariant_factors": list(G.invariant_factors),
            "generators": [{"phases": list(g.phases), "order": n} for g, n in G.generators],
        },
    }
    return {"command": "analyze", "results": [result]}


def _load_weights(args):
    return load_json_file(args.weights, "weights") if args.weights else None


def _index_for_structure(structure, metric, weights, warnings):
    t = structure.poly.t
    reports = []
    for j in range(1, t + 1):
        if metric is Metric.SMOOTH:
            reports.append(smooth_total_index(structure, j, warnings).to_dict())
        else:
            if not weights or "reference" not in weights or "delta" not in weights:
                raise InputValidationError("cylindrical metric needs --weights with delta and reference")
            delta = WeightMatrix(weights["delta"])
            ref = WeightMatrix(weights["reference"]["delta"])
            ref_index = weights["reference"]["index"]
            if delta.shape[0] != t or ref.shape[0] != t or len(ref_index) != t:
                raise InputValidationError(f"weights must have one row per variable ({t})")
            reports.append(
                cylindrical_total_index(
                    structure, j, delta.entries[j - 1], ref.entries[j - 1], ref_index[j - 1], warnings
                ).to_dict()
            )
    return reports


def cmd_index(args) -> dict:
    _require(args, "poly", "curve")
    W = QPoly.from_text(args.poly)
    metric = Metric(args.metric)
    weights = _load_weights(args)
    data = load_json_file(args.curve, "curve")

    if not args.all_decorations:
        points = data.get("points", [])
        if any("decoration" not in p for p in points):
            raise InputValidationError("every point needs a decoration unless --all-decorations is given")
        curve = DecoratedOrbicurve.from_dict(data)
        structure = validate_structure(curve, W)
        warnings = nondegeneracy_warnings(W)
        return {
            "command": "index",
            "results": [{
                "curve": curve.to_dict(),
                "degrees": list(structure.degrees),
                "reports": _index_for_structure(structure, metric, weights, warnings),
            }],
        }

    genus = data["genus"]
    k = len(data.get("points", []))
    G = symmetry_group(W)
    cap = args.cap or DEFAULT_SWEEP_CAP
    results = []
    warnings = nondegeneracy_warnings(W)
    for n, decs in enumerate(itertools.product(G.elements, repeat=k)):
        if n >= cap:
            log.warning("decoration sweep stopped at the cap of %d", cap)
            break
        curve = DecoratedOrbicurve(genus, tuple(MarkedPoint(h) for h in decs))
        entry = {"decorations": [list(h.phases) for h in decs]}
        try:
            structure = validate_structure(curve, W)
        except NonIntegralDegree as exc:
            entry["valid"] = False
            entry["failures"] = [{"j": j, "degree": deg} for j, deg in exc.failures]
        else:
            entry["valid"] = True
            entry["degrees"] = list(structure.degrees)
            entry["reports"] = _index_for_structure(structure, metric, weights, warnings)
        results.append(entry)
    return {"command": "index", "results": results}


def cmd_jump(args) -> dict:
    _require(args, "weights")
    weights = _load_weights(args)
    if "delta" not in weights or "delta_prime" not in weights:
        raise InputValidationError("jump needs delta and delta_prime in the weights file")
    d, dp = WeightMatrix(weights["delta"]), WeightMatrix(weights["delta_prime"])
    return {
        "command": "jump",
        "results": [{"jump": spin_jump(d, dp), "entries": spin_jump_table(d, dp)}],
    }


def cmd_verify(args) -> dict:
    _require(args, "v", "weight")
    grid = args.grid or GridConfig()
    results = []
    for v in args.v:
        problem = HalfCylinderProblem(v, args.weight, args.orientation)
        mc = mode_count(problem)
        disc = discrete_index(problem, grid)
        cert = {
            "v": v,
            "w": problem.w,
            "orientation": problem.orientation.value,
            "mode_count": {"kernel": mc.kernel, "cokernel": mc.cokernel, "index": mc.index, "bound": mc.bound},
            "discrete": disc.to_dict(),
            "grid": {"T": grid.T, "N_t": grid.N_t, "N_theta": grid.N_theta},
            "agree": mc.index == disc.index,
        }
        if problem.orientation is Orientation.STANDARD and 0 < problem.w < 1:
            cert["formula"] = local_end_index_smooth(v)
            cert["passed"] = cert["agree"] and mc.index == cert["formula"]
        else:
            cert["passed"] = cert["agree"]
        results.append(cert)
    return {"command": "verify", "results": results}


def cmd_glue_check(args) -> dict:
    _require(args, "v")
    w = args.weight if args.weight is not None else Fraction(1, 2)
    results = []
    for v in args.v:
        numeric = glue_numeric(v, w, args.orientation).to_dict()
        plus, minus = split_glued_index(v)
        formula = gluing_check(plus, minus, glued_cylinder_index(v)).to_dict()
        results.append({"numeric": numeric, "formula": formula,
                        "passed": numeric["passed"] and formula["passed"]})
    return {"command": "glue-check", "results": results}


COMMANDS = {
    "analyze": cmd_analyze,
    "index": cmd_index,
    "jump": cmd_jump,
    "verify": cmd_verify,
    "glue-check": cmd_glue_check,
}


# -- table output ------------------------------------------------------------


def _table(report: dict) -> str:
    cmd = report["command"]
    lines = []
    for r in report["results"]:
        if cmd == "analyze":
            lines.append(f"W = {r['polynomial']}")
            lines.append("q = (" + ", ".join(str(x) for x in r["weights"]) + f"), d = {r['d']}")
            nd = r["nondegeneracy"]
            lines.append(f"weights unique: {nd['weights_unique']}; singularity: {nd['isolated_singularity']} ({nd['reason']})")
            lines.append(f"|H| = {r['group']['order']}")
            for g in r["group"]["generators"]:
                lines.append("  generator (" + ", ".join(str(x) for x in g["phases"]) + f") of order {g['order']}")
        elif cmd == "index":
            label = r.get("decorations", [p["decoration"] for p in r.get("curve", {}).get("points", [])])
            if r.get("valid") is False:
                lines.append(f"{label}: rejected")
                continue
            for rep in r["reports"]:
                lines.append(
                    f"{label} j={rep['j']} {rep['metric']}: total {rep['total']}"
                    f" (interior {rep['interior']}, locals {rep['locals']}, correction {rep['correction']})"
                )
        elif cmd == "jump":
            for e in r["entries"]:
                lines.append(f"({e['j']},{e['l']}) {e['delta']} -> {e['delta_prime']}: {e['jump']:+d}")
            lines.append(f"total jump {r['jump']}")
        elif cmd == "verify":
            lines.append(
                f"v={r['v']} w={r['w']}: mode count {r['mode_count']['index']}, discrete {r['discrete']['index']}"
                f" (gap {r['discrete']['gap_ratio']:.2e}) {'PASS' if r['passed'] else 'FAIL'}"
            )
        elif cmd == "glue-check":
            n = r["numeric"]
            lines.append(
                f"v={n['v']}: {n['ind_plus']} + {n['ind_minus']} = {n['glued']}"
                f" {'PASS' if r['passed'] else 'FAIL'}"
            )
    return "\n".join(lines) + "\n"


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--poly")
    common.add_argument("--curve")
    common.add_argument("--metric", choices=[m.value for m in Metric], default="smooth")
    common.add_argument("--weights")
    common.add_argument("--v", type=parse_range)
    common.add_argument("--weight", type=parse_rational)
    common.add_argument("--orientation", choices=[o.value for o in Orientation], default="standard")
    common.add_argument("--grid", type=parse_grid)
    common.add_argument("--output", choices=["json", "table"], default="json")
    common.add_argument("--all-decorations", action="store_true")
    common.add_argument("--cap", type=int)

    parser = argparse.ArgumentParser(prog="wspin-index", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("WSPIN_LOG", "WARNING").upper(), format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        report = _plain(COMMANDS[args.command](args))
        validate_json(report, "report")
        code = 0
    except WSpinError as exc:
        report = {"command": args.command, "error": exc.to_dict()}
        code = exc.exit_code
        log.info("%s failed: %s", args.command, exc)
    if args.output == "table" and "error" not in report:
        sys.stdout.write(_table(report))
    elif args.output == "table":
        sys.stderr.write(f"error [{report['error']['code']}]: {report['error']['message']}\n")
    else:
        sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
