"""JSON (de)serialization for models, scenarios and reports.

Numbers are encoded as plain floats, ``[re, im]`` pairs for complex values,
or ``"p/q"`` strings for exact rationals (pairs of strings for exact complex
values).  Reports are dumped with sorted keys so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

import numpy as np

from .errors import ScenarioError
from .models import (FiberEquation, TwistorModel, _tag_family)
from .mpoly import MPoly
from .projline import CoeffPoly, SigmaCoordRule
from .scalars import GaussianRational, parse_exact_scalar

KNOWN_OPS = ("validate", "sections", "solve-fiber", "singular-scan", "branch",
             "normal-bundle", "classify", "matrix-model", "quotient-census",
             "cone-glue")
SAMPLING_OPS = {"singular-scan", "classify"}


def encode_scalar(x):
    if isinstance(x, GaussianRational):
        return [str(x.re), str(x.im)]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return float(x)
    return x


def decode_scalar(v, exact: bool):
    if isinstance(v, str):
        g = parse_exact_scalar(v)
        if exact:
            return g if g.im != 0 else g.re
        return complex(g)
    if isinstance(v, (list, tuple)):
        re, im = v
        if exact:
            re = parse_exact_scalar(str(re)) if isinstance(re, str) else Fraction(re)
            im = parse_exact_scalar(str(im)) if isinstance(im, str) else Fraction(im)
            re = re.re if isinstance(re, GaussianRational) else re
            im = im.re if isinstance(im, GaussianRational) else im
            return GaussianRational(re, im)
        re = float(parse_exact_scalar(re).re) if isinstance(re, str) else float(re)
        im = float(parse_exact_scalar(im).re) if isinstance(im, str) else float(im)
        return complex(re, im)
    if exact:
        if isinstance(v, float) and not v.is_integer():
            raise ScenarioError(f"exact mode requires rational strings, got {v}")
        return Fraction(int(v)) if isinstance(v, float) else Fraction(v)
    return complex(v)


def jsonable(x):
    """Recursive conversion to JSON-serializable structures."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (GaussianRational, Fraction, complex)):
        return encode_scalar(x)
    if isinstance(x, (np.floating, np.integer)):
        return float(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


def _coeffpoly_to_list(cp: CoeffPoly):
    return [encode_scalar(c) for c in cp.coeffs]


def _coeffpoly_from_list(vals, bound: int, exact: bool) -> CoeffPoly:
    return CoeffPoly(bound, [decode_scalar(v, exact) for v in vals])


def model_to_dict(model: TwistorModel) -> dict:
    eqs = []
    for eq in model.equations:
        eqs.append({
            "twist": eq.twist,
            "monomials": [{"exponents": list(exps),
                           "coeffs": _coeffpoly_to_list(coeff)}
                          for exps, coeff in eq.monomials],
        })
    comps = []
    for comp in model.component_equations:
        comps.append([{"exponents": list(e), "coeff": encode_scalar(c)}
                      for e, c in sorted(comp.terms.items())])
    out = {
        "name": model.name,
        "mode": "exact" if model.exact else "float",
        "degrees": list(model.degrees),
        "coordinates": list(model.coordinates),
        "rules": [{"target": r.partner, "sign": r.sign, "twist": r.twist}
                  for r in model.rules],
        "equations": eqs,
        "componentEquations": comps,
    }
    if model.lam is not None:
        out["lambda"] = _coeffpoly_to_list(model.lam)
        out["reality"] = model.reality
    return out


def model_from_dict(d: dict) -> TwistorModel:
    exact = d.get("mode", "float") == "exact"
    degrees = tuple(int(k) for k in d["degrees"])
    coords = tuple(d.get("coordinates") or [f"u{i}" for i in range(len(degrees))])
    rules = tuple(SigmaCoordRule(int(r["target"]), int(r["sign"]),
                                 int(r.get("twist", degrees[i])))
                  for i, r in enumerate(d["rules"]))
    eqs = []
    for eq in d.get("equations", []):
        twist = int(eq["twist"])
        monos = []
        for mono in eq["monomials"]:
            exps = tuple(int(e) for e in mono["exponents"])
            bound = twist - sum(e * k for e, k in zip(exps, degrees))
            monos.append((exps, _coeffpoly_from_list(mono["coeffs"], bound, exact)))
        eqs.append(FiberEquation(twist, tuple(monos)))
    model = TwistorModel(d.get("name", "model"), degrees, coords, rules,
                         tuple(eqs), exact=exact)
    comps = []
    for comp in d.get("componentEquations", []):
        terms = {}
        for term in comp:
            exps = tuple(int(e) for e in term["exponents"])
            terms[exps] = decode_scalar(term["coeff"], exact)
        comps.append(MPoly(model.nparams, terms))
    model.component_equations = tuple(comps)
    if d.get("lambda") is not None:
        model.lam = _coeffpoly_from_list(d["lambda"], 2, exact)
        model.reality = d.get("reality")
    _tag_family(model)
    return model


def load_model_file(path: str) -> TwistorModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def save_model_file(model: TwistorModel, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True, indent=2)
        fh.write("\n")


def validate_scenario(doc: dict) -> dict:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    tasks = doc.get("tasks")
    if not isinstance(tasks, list) or not tasks:
        raise ScenarioError("scenario needs a non-empty 'tasks' list")
    for t in tasks:
        if not isinstance(t, dict) or "op" not in t:
            raise ScenarioError("each task needs an 'op' field")
        if t["op"] not in KNOWN_OPS:
            raise ScenarioError(f"unknown op {t['op']!r}")
        if t["op"] in SAMPLING_OPS and doc.get("seed") is None \
                and t.get("seed") is None:
            raise ScenarioError(f"op {t['op']!r} samples and requires a seed")
    return doc


def load_scenario(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from exc
    return validate_scenario(doc)


def dump_report(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def write_report(report: dict, path: str):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_report(report))
