"""Command-line front end.

Exit codes: 0 every check passed, 1 a check failed, 2 invalid input,
3 the cone-count budget would be exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .constructions.lifting import LiftInput, build_lifted_fan
from .constructions.modification import check_small_modification
from .constructions.plm import DEFAULT_BUDGET, chain_check, fan_plm, plm_cone_count, rays_plm, rays_plm_count
from .errors import BudgetExceeded, FmToricError, PreconditionError
from .fan import Fan, is_complete, validate_fan
from .intersection import find_ample
from .lattice import LatticeMap, LatVec
from .report import Report, jsonable
from .weights import (WeightSystem, center_set, check_identification, diagonal_set, domain_check, P,
                      threshold_data)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path} is not valid JSON: {exc.msg}") from exc


def _load_fan(path: str) -> Fan:
    obj = _load_json(path)
    if isinstance(obj, dict) and "fan" in obj and "rays" not in obj:
        obj = obj["fan"]
    return Fan.from_json_obj(obj)


def _load_vectors(path: str) -> list[LatVec]:
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("vectors", obj.get("rays"))
    if not isinstance(obj, list):
        raise PreconditionError(f"{path} must hold a list of integer vectors")
    try:
        return [LatVec(v) for v in obj]
    except TypeError as exc:
        raise PreconditionError(f"{path}: {exc}") from exc


def parse_weights(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"cannot parse weights {text!r}") from exc


def fan_report(fan: Fan, command: str) -> Report:
    rep = Report(command)
    v = validate_fan(fan)
    rep.extend(v.report)
    complete = fan.is_pure_full_dimensional() and v.valid and is_complete(fan)
    rep.add("fan is complete", complete)
    rep.add("fan is smooth", v.smooth)
    ample = find_ample(fan) if complete else None
    rep.add("an ample divisor exists", ample is not None, {"divisor": ample} if ample is not None else None)
    rep.info.update({"rays": len(fan.rays), "max_cones": len(fan.max_cones)})
    return rep


# --- subcommands ----------------------------------------------------------------


def cmd_fan_plm(args) -> tuple[Report, dict]:
    command = f"fan plm -d {args.d} -n {args.n}"
    if args.rays_only:
        rays = rays_plm(args.d, args.n)
        rep = Report(command + " --rays-only")
        rep.add("ray count matches the closed formula", len(rays) == rays_plm_count(args.d, args.n),
                {"rays": len(rays), "formula": rays_plm_count(args.d, args.n)})
        return rep, {"rays": [list(r) for r in rays]}
    fan = fan_plm(args.d, args.n, budget=args.max_cones)
    rep = fan_report(fan, command)
    rep.add("rays equal the closed-form ray list", list(fan.rays) == rays_plm(args.d, args.n))
    counts = plm_cone_count(args.d, args.n)
    rep.add("cone counts match the prediction",
            len(fan.max_cones) == counts["max_cones"] and len(fan.cones()) == counts["cones"], counts)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(fan.to_json_obj(), fh)
            fh.write("\n")
    return rep, {"fan": fan.to_json_obj()}


def cmd_fan_verify(args) -> tuple[Report, dict]:
    fan = _load_fan(args.file)
    return fan_report(fan, f"fan verify {args.file}"), {"fan": fan.to_json_obj()}


def cmd_check_chain(args):
    return chain_check(args.d, args.n), {}


def cmd_check_sqm(args):
    return check_small_modification(args.m, args.n), {}


def cmd_check_identify(args):
    return check_identification(args.d, args.n), {}


def cmd_lift(args):
    target = _load_fan(args.target)
    proj = LatticeMap.from_json_obj(_load_json(args.proj))
    inp = LiftInput(target, proj, tuple(_load_vectors(args.gamma)), tuple(_load_vectors(args.gammak)))
    result = build_lifted_fan(inp)
    return result.certificates, {"fan": result.fan.to_json_obj(), "ample": result.ample}


def cmd_weights_gsets(args):
    ws = WeightSystem(args.d, args.n, tuple(parse_weights(args.weights)))
    rep = Report(f"weights gsets -d {args.d} -n {args.n} --weights {args.weights}")
    dom = domain_check(ws, P)
    rep.extend(dom)
    if not dom.passed:
        return rep, {}
    centers = center_set(ws)
    rep.add("every center has the dimension of its product form", all(h.dim == h.dim_computed for h in centers))
    rep.info["centers"] = [h.label() for h in centers]
    rep.info["diagonal_set"] = sorted(diagonal_set(ws))
    return rep, {"centers": [h.to_json_obj() for h in centers]}


def cmd_example_d2n5(args):
    d, n = 2, 5
    rep = Report("example d2n5")
    td = threshold_data(d, n)
    rep.add("thresholds: epsilon = 1/3, epsilon_hat = 1/9", (td.epsilon, td.epsilon_hat) == (Fraction(1, 3), Fraction(1, 9)),
            {"w": list(td.w), "L_exponents": list(td.L_exponents)})
    a1 = WeightSystem(d, n, (1, 1, 1, 1, 1))
    a2 = WeightSystem(d, n, (1, 1, 1, Fraction(1, 2), Fraction(1, 2)))
    g1 = [h.label() for h in center_set(a1)]
    g2 = [h.label() for h in center_set(a2)]
    exp1 = ["H_{3,4} = ([0:1],[0:1])", "H_{3,5} = ([1:0],[1:0])", "H_{4,5} = ([1:1],[1:1])"]
    rep.add("G_A1 is the three points", g1 == exp1, g1)
    rep.add("G_A2 is two of them", g2 == exp1[:2], g2)
    fan = fan_plm(d, n)
    v = validate_fan(fan)
    rep.add("toric model has the six expected rays", list(fan.rays) == rays_plm(d, n),
            [list(r) for r in fan.rays])
    rep.add("toric model is a smooth complete fan", v.valid and v.smooth and is_complete(fan))
    rep.add("toric model is projective", find_ample(fan) is not None)
    rep.extend(check_identification(d, n), prefix="identification: ")
    rep.info["G_A1"] = g1
    rep.info["G_A2"] = g2
    return rep, {"fan": fan.to_json_obj()}


# --- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fmtoric", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="print the serialized report on stdout")
    parser.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0 for reproducible output")
    sub = parser.add_subparsers(dest="group", required=True)

    fan = sub.add_parser("fan").add_subparsers(dest="action", required=True)
    p = fan.add_parser("plm", help="build the toric Losev-Manin type fan")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--rays-only", action="store_true")
    p.add_argument("--max-cones", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", help="write the fan to this file")
    p.set_defaults(func=cmd_fan_plm)
    p = fan.add_parser("verify", help="validate a fan file")
    p.add_argument("file")
    p.set_defaults(func=cmd_fan_verify)

    check = sub.add_parser("check").add_subparsers(dest="action", required=True)
    p = check.add_parser("chain")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_check_chain)
    p = check.add_parser("sqm")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_check_sqm)
    p = check.add_parser("identify")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_check_identify)

    p = sub.add_parser("lift", help="lift a target fan along a lattice map")
    p.add_argument("--target", required=True)
    p.add_argument("--proj", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--gammak", required=True)
    p.set_defaults(func=cmd_lift)

    weights = sub.add_parser("weights").add_subparsers(dest="action", required=True)
    p = weights.add_parser("gsets")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--weights", required=True, help="comma-separated rationals, e.g. 1,1,1,1/2,1/2")
    p.set_defaults(func=cmd_weights_gsets)

    example = sub.add_parser("example").add_subparsers(dest="action", required=True)
    p = example.add_parser("d2n5")
    p.set_defaults(func=cmd_example_d2n5)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rep, extra = args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PreconditionError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FmToricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rep.elapsed_ms = 0 if args.no_timing else int((time.perf_counter() - start) * 1000)
    if args.json:
        print(rep.render(), file=sys.stderr)
        obj = rep.to_json_obj()
        obj.update(extra)
        print(json.dumps(jsonable(obj)))
    else:
        print(rep.render())
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
