"""Scenario-driven command line front end.

Usage:
    twistorcheck run scenario.json [--out report.json]
    twistorcheck solve-fiber --model quadric --zeta 0 --point 1,1,1
    twistorcheck quotient-census --group Q8
    twistorcheck classify --model deformed --seed 1

Every subcommand accepts --model/--tol/--seed/--out/--exact where relevant;
a human summary goes to stdout, the machine-readable report only to --out.
Exit codes: 0 all checks pass, 1 at least one check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .analysis import (SolveConfig, branch_test, classify_hypercomplex,
                       component_label, normal_splitting,
                       rank_one_matrix_oracle, sample_sections, singular_scan,
                       solve_fiber, sym_matrix_model)
from .errors import ScenarioError, TwistorCheckError
from .models import (build_deformed, build_quadric, build_smooth_o11,
                     glue_cone_twistor, models_structurally_equal,
                     quadric_params, quadric_tuple, validate_model)
from .projline import P1Point, SigmaCoordRule
from .quotients import (FiniteQuaternionGroup, builtin_group,
                        closure_equals_quotient, component_count,
                        involution_census)
from .serialize import (decode_scalar, jsonable, load_model_file,
                        load_scenario, model_from_dict, validate_scenario,
                        write_report)

DEFAULT_LAMBDA_FLOAT = [1j, 0.0, -1j]
DEFAULT_LAMBDA_EXACT = ["i", "0", "-i"]


def _parse_complex_list(text: str):
    return [complex(tok) for tok in text.split(",") if tok.strip()]


def _parse_zeta(spec):
    if spec is None:
        return 0j
    if isinstance(spec, P1Point):
        return spec
    if isinstance(spec, str):
        s = spec.strip()
        if s == "inf":
            return P1Point.inf(0j)
        if s.startswith("inf:"):
            return P1Point.inf(complex(s[4:]))
        return complex(s)
    if isinstance(spec, dict):
        value = decode_scalar(spec.get("value", 0.0), exact=False)
        return P1Point(spec.get("chart", "std"), value)
    if isinstance(spec, (list, tuple)):
        return complex(spec[0], spec[1])
    return complex(spec)


def _parse_section(args_dict, model, exact=False):
    if args_dict.get("params") is not None:
        vals = args_dict["params"]
        if isinstance(vals, str):
            vals = [float(t) for t in vals.split(",") if t.strip()]
        return np.array([float(v) for v in vals])
    sec = args_dict.get("section")
    if sec is None:
        raise ScenarioError("task needs a 'section' or 'params' argument")
    if isinstance(sec, str):
        vals = _parse_complex_list(sec)
    else:
        vals = [decode_scalar(v, exact=False) for v in sec]
    if len(vals) != 5 or (model is not None and len(model.degrees) != 3):
        raise ScenarioError("coefficient tuples require the 3-coordinate model; "
                            "use 'params' otherwise")
    return quadric_params(*vals)


def build_model_from_spec(spec, exact: bool = False):
    if spec in (None, {}, ""):
        return None
    if isinstance(spec, str):
        spec = {"builtin": spec} if not spec.endswith(".json") else {"file": spec}
    if "file" in spec:
        return load_model_file(spec["file"])
    if "inline" in spec:
        return model_from_dict(spec["inline"])
    name = spec.get("builtin", "quadric")
    exact = spec.get("exact", exact)
    if name == "quadric":
        return build_quadric(exact=exact)
    if name in ("smooth-o11", "smooth"):
        return build_smooth_o11(exact=exact)
    if name == "deformed":
        lam = spec.get("lambda")
        if lam is None:
            lam = DEFAULT_LAMBDA_EXACT if exact else DEFAULT_LAMBDA_FLOAT
        if isinstance(lam, str):
            lam = [t for t in lam.split(",") if t.strip()]
        coeffs = [decode_scalar(v, exact) for v in lam]
        return build_deformed(coeffs, spec.get("reality", "antireal"), exact=exact)
    raise ScenarioError(f"unknown builtin model {name!r}")


def _load_group(args) -> FiniteQuaternionGroup:
    if args.get("group_file"):
        with open(args["group_file"], "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        if "table" in doc:
            return FiniteQuaternionGroup.from_table(
                doc["table"], int(doc.get("identity", 0)),
                name=doc.get("name", "group"))
        return FiniteQuaternionGroup.from_quaternions(
            doc["quaternions"], name=doc.get("name", "group"))
    name = args.get("group")
    if not name:
        raise ScenarioError("quotient-census needs --group or --group-file")
    return builtin_group(name)


def _check_expect(numbers: dict, expect) -> str:
    if not expect:
        return "info"
    for key, want in expect.items():
        got = numbers.get(key)
        if jsonable(got) != jsonable(want):
            return "fail"
    return "pass"


def execute_task(op: str, args: dict, model, cfg: SolveConfig, exact: bool):
    """Run one task; returns a report record."""
    record = {"op": op, "inputs": jsonable({k: v for k, v in args.items()
                                            if k != "expect"})}
    numbers = {}
    evidence = {}
    expect = args.get("expect")

    if op == "validate":
        rep = validate_model(model)
        numbers = {"passed": rep.passed,
                   "dimension": rep.info.get("real_parameter_dimension")}
        evidence = {"failures": rep.failures, "notes": rep.notes,
                    "equation_signs": rep.equation_signs}
        record["status"] = _check_expect(numbers, expect) if expect else \
            ("pass" if rep.passed else "fail")
    elif op == "sections":
        basis = model.section_basis
        numbers = {"dimension": basis.nparams}
        evidence = {"parameters": basis.param_names,
                    "forms": basis.describe()}
        record["status"] = _check_expect(numbers, expect)
    elif op == "solve-fiber":
        zeta = _parse_zeta(args.get("zeta"))
        point = args.get("point")
        if isinstance(point, str):
            point = _parse_complex_list(point)
        else:
            point = [decode_scalar(v, exact=False) for v in point]
        res = solve_fiber(model, zeta, tuple(point), cfg)
        numbers = {"count": len(res.solutions), "complete": res.complete,
                   "family_dim": res.family.dim if res.family else 0}
        evidence = {"method": res.method,
                    "solutions": [list(map(float, s)) for s in res.solutions]}
        if len(model.degrees) == 3 and model.nparams == 9:
            evidence["solution_tuples"] = [jsonable(quadric_tuple(s))
                                           for s in res.solutions]
        record["status"] = _check_expect(numbers, expect)
    elif op == "singular-scan":
        n = int(args.get("samples", cfg.scan_samples))
        rng = np.random.default_rng(int(args.get("seed", cfg.seed)))
        points = list(sample_sections(model, n, rng, cfg))
        if args.get("include_origin", True):
            points.append(np.zeros(model.nparams))
        rep = singular_scan(model, points, cfg)
        numbers = {"singular_count": len(rep.singular),
                   "clusters": len(rep.clusters),
                   "regular": rep.regular_count}
        evidence = {"clusters": rep.clusters, "skipped": rep.skipped}
        record["status"] = _check_expect(numbers, expect)
    elif op == "branch":
        section = _parse_section(args, model)
        zeta = _parse_zeta(args.get("zeta"))
        rep = branch_test(model, section, zeta, cfg)
        numbers = {"verdict": rep.verdict, "rank": rep.rank}
        record["status"] = _check_expect(numbers, expect)
    elif op == "normal-bundle":
        section = _parse_section(args, model)
        rep = normal_splitting(model, section, cfg)
        numbers = {
            "splitting": list(rep.splitting.degrees) if rep.splitting else None,
            "h0": rep.h0, "h0_minus2": rep.h0_minus2,
            "degenerate": bool(rep.degenerate)}
        evidence = {"degenerate_rows": jsonable(rep.degenerate),
                    "regular_point": rep.regular_point}
        record["status"] = _check_expect(numbers, expect)
    elif op == "classify":
        cls = classify_hypercomplex(model, cfg)
        numbers = {"verdict": cls.verdict,
                   "family_dimension": cls.evidence.get("family_dimension", 0)}
        evidence = cls.evidence
        record["status"] = _check_expect(numbers, expect)
    elif op == "matrix-model":
        if args.get("oracle_q") is not None:
            q = args["oracle_q"]
            if isinstance(q, str):
                q = [float(t) for t in q.split(",")]
            rep = rank_one_matrix_oracle([float(v) for v in q])
            numbers = {"t": float(rep.t), "trace_b": float(rep.trace_b),
                       "rank_a": rep.rank_a,
                       "displayed_form_residual": rep.displayed_residual_norm,
                       "product_identity_residual": rep.product_identity_norm}
            evidence = {"b": jsonable(rep.b)}
        else:
            section = _parse_section(args, model)
            label = args.get("label")
            if label is None:
                lab = component_label(section)
                label = 1 if lab == "boundary" else lab
            b, t = sym_matrix_model(section, int(label))
            numbers = {"t": float(t),
                       "trace_b": float(np.trace(np.asarray(b, dtype=float))),
                       "label": int(label)}
            evidence = {"b": jsonable(b)}
        record["status"] = _check_expect(numbers, expect)
    elif op == "quotient-census":
        group = _load_group(args)
        census = involution_census(group)
        count, flags = component_count(group)
        numbers = {"order": group.order, "involutions": len(census.involutions),
                   "classes": census.class_count,
                   "component_count": count,
                   "predicate": closure_equals_quotient(group)}
        evidence = {"classes": census.classes, "assumptions": flags,
                    "group": group.name}
        record["status"] = _check_expect(numbers, expect)
    elif op == "cone-glue":
        weights = args.get("weights", [1, 1, 1])
        if isinstance(weights, str):
            weights = [int(t) for t in weights.split(",")]
        level = int(args.get("l", 2))
        eq_spec = args.get("equations")
        if eq_spec is None:
            eq_spec = [[{"exponents": [1, 1, 0], "coeff": 1},
                        {"exponents": [0, 0, 2], "coeff": -1}]]
        equations = [[(tuple(m["exponents"]), decode_scalar(m["coeff"], False))
                      for m in eq] for eq in eq_spec]
        rules_spec = args.get("rules")
        if rules_spec is None:
            degs = [level * w for w in weights]
            rules = (SigmaCoordRule(1, 1, degs[0]), SigmaCoordRule(0, 1, degs[1]),
                     SigmaCoordRule(2, -1, degs[2]))
        else:
            rules = tuple(SigmaCoordRule(int(r["target"]), int(r["sign"]),
                                         int(r["twist"])) for r in rules_spec)
        glued = glue_cone_twistor(equations, weights, level, rules)
        numbers = {"degrees": list(glued.degrees),
                   "twists": [eq.twist for eq in glued.equations]}
        compare = args.get("compare")
        if compare:
            ref = build_model_from_spec(compare)
            numbers["equals_builtin"] = models_structurally_equal(
                glued, ref, ignore_component_equations=True, tol=1e-12)
        evidence = {"family": glued.family}
        record["status"] = _check_expect(numbers, expect)
    else:
        raise ScenarioError(f"unknown op {op!r}")

    record["numbers"] = jsonable(numbers)
    record["evidence"] = jsonable(evidence)
    return record


def _needs_model(op):
    return op not in ("quotient-census", "cone-glue", "matrix-model")


def run_scenario_doc(doc: dict, out_path=None) -> int:
    validate_scenario(doc)
    exact = bool(doc.get("exact", False))
    cfg = SolveConfig(seed=int(doc.get("seed", 0)))
    tols = doc.get("tolerances", {})
    for key in ("tol", "rank_rtol", "newton_tol", "dedup_radius", "fiber_tol"):
        if key in tols:
            setattr(cfg, key, float(tols[key]))
    model = build_model_from_spec(doc.get("model"), exact=exact)
    records = []
    for task in doc["tasks"]:
        args = dict(task)
        op = args.pop("op")
        task_model = model
        if args.get("model") is not None:
            task_model = build_model_from_spec(args["model"], exact=exact)
        if _needs_model(op) and task_model is None:
            raise ScenarioError(f"op {op!r} requires a model")
        records.append(execute_task(op, args, task_model, cfg, exact))
    report = {
        "toolkit": {"name": "twistorcheck", "version": __version__},
        "mode": "exact" if exact else "float",
        "seed": doc.get("seed"),
        "config": {k: getattr(cfg, k) for k in
                   ("tol", "rank_rtol", "newton_tol", "max_iter",
                    "dedup_radius", "multistart", "fiber_tol",
                    "scan_samples", "branch_checks", "continuation_step",
                    "cluster_radius")},
        "scenario": doc,
        "tasks": records,
        "summary": {
            "pass": sum(1 for r in records if r["status"] == "pass"),
            "fail": sum(1 for r in records if r["status"] == "fail"),
            "info": sum(1 for r in records if r["status"] == "info"),
        },
    }
    for rec in records:
        marker = {"pass": "PASS", "fail": "FAIL", "info": "info"}[rec["status"]]
        brief = ", ".join(f"{k}={v}" for k, v in rec["numbers"].items())
        print(f"[{marker}] {rec['op']}: {brief}")
    target = out_path or doc.get("out") or doc.get("outputPath")
    if target:
        write_report(report, target)
        print(f"report written to {target}")
    return 1 if report["summary"]["fail"] else 0


def run_scenario(path: str, out_path=None) -> int:
    """Execute a scenario file; exit code 0/1/2 per the contract."""
    try:
        doc = load_scenario(path)
        return run_scenario_doc(doc, out_path)
    except (ScenarioError, TwistorCheckError, OSError, ValueError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2


def _add_common(parser, model=True):
    if model:
        parser.add_argument("--model", default="quadric",
                            help="builtin name (quadric|deformed|smooth-o11) or model file")
        parser.add_argument("--lam", help="deformation coefficients c0,c1,c2")
        parser.add_argument("--reality", default="antireal",
                            choices=["real", "antireal"])
    parser.add_argument("--exact", action="store_true",
                        help="exact rational arithmetic where supported")
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="write the machine-readable report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistorcheck",
        description="Verification toolkit for twistor models over the projective line")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario file")
    run_p.add_argument("scenario")
    run_p.add_argument("--out")

    specs = {
        "validate": [],
        "sections": [],
        "solve-fiber": [("--zeta", {"default": "0"}),
                        ("--point", {"required": True}),
                        ("--expect-count", {"type": int})],
        "singular-scan": [("--samples", {"type": int, "default": 60})],
        "branch": [("--section", {}), ("--params", {}),
                   ("--zeta", {"default": "0"})],
        "normal-bundle": [("--section", {}), ("--params", {})],
        "classify": [],
        "matrix-model": [("--section", {}), ("--params", {}),
                         ("--label", {"type": int}), ("--oracle-q", {})],
        "quotient-census": [("--group", {}), ("--group-file", {})],
        "cone-glue": [("--weights", {"default": "1,1,1"}),
                      ("--l", {"type": int, "default": 2}),
                      ("--equations-json", {}),
                      ("--rules-json", {}),
                      ("--compare", {})],
    }
    for name, extra in specs.items():
        p = sub.add_parser(name)
        _add_common(p, model=name not in ("quotient-census", "cone-glue",
                                          "matrix-model") or name == "matrix-model")
        for flag, kw in extra:
            p.add_argument(flag, **kw)
    return parser


def _args_to_task(command, ns) -> dict:
    args = {}
    mapping = {
        "solve-fiber": ["zeta", "point"],
        "singular-scan": ["samples"],
        "branch": ["section", "params", "zeta"],
        "normal-bundle": ["section", "params"],
        "matrix-model": ["section", "params", "label"],
        "quotient-census": ["group", "group_file"],
        "cone-glue": ["weights", "l", "compare"],
    }
    for key in mapping.get(command, []):
        val = getattr(ns, key.replace("-", "_"), None)
        if val is not None:
            args[key] = val
    if command == "solve-fiber" and getattr(ns, "expect_count", None) is not None:
        args["expect"] = {"count": ns.expect_count}
    if command == "matrix-model" and getattr(ns, "oracle_q", None) is not None:
        args["oracle_q"] = ns.oracle_q
    if command == "cone-glue":
        if getattr(ns, "equations_json", None):
            args["equations"] = json.loads(ns.equations_json)
        if getattr(ns, "rules_json", None):
            args["rules"] = json.loads(ns.rules_json)
    args["seed"] = ns.seed
    return args


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "run":
        return run_scenario(ns.scenario, getattr(ns, "out", None))
    try:
        exact = bool(getattr(ns, "exact", False))
        cfg = SolveConfig(seed=ns.seed, tol=ns.tol)
        model = None
        if hasattr(ns, "model"):
            spec = {"builtin": ns.model} if not ns.model.endswith(".json") \
                else {"file": ns.model}
            if ns.model == "deformed" and ns.lam:
                spec["lambda"] = ns.lam
                spec["reality"] = ns.reality
            model = build_model_from_spec(spec, exact=exact)
        task = _args_to_task(ns.command, ns)
        record = execute_task(ns.command, task, model, cfg, exact)
    except (ScenarioError, TwistorCheckError, OSError, ValueError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    brief = ", ".join(f"{k}={v}" for k, v in record["numbers"].items())
    marker = {"pass": "PASS", "fail": "FAIL", "info": "info"}[record["status"]]
    print(f"[{marker}] {record['op']}: {brief}")
    if record["evidence"]:
        print(json.dumps(record["evidence"], sort_keys=True, indent=2)[:2000])
    if getattr(ns, "out", None):
        report = {
            "toolkit": {"name": "twistorcheck", "version": __version__},
            "mode": "exact" if exact else "float",
            "seed": ns.seed,
            "config": {k: getattr(cfg, k) for k in
                       ("tol", "rank_rtol", "newton_tol", "max_iter",
                        "dedup_radius", "multistart", "fiber_tol")},
            "tasks": [record],
            "summary": {"pass": int(record["status"] == "pass"),
                        "fail": int(record["status"] == "fail"),
                        "info": int(record["status"] == "info")},
        }
        write_report(report, ns.out)
    return 1 if record["status"] == "fail" else 0


if __name__ == "__main__":
    sys.exit(main())
