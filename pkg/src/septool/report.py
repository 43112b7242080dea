"""Pipelines behind the command line, and their JSON reports.

Reports are plain dicts: exact rationals become ``"p/q"`` strings, floats are
rounded to 15 significant digits and sit under keys flagged ``approximate``.
No timestamps or paths go in, so identical inputs give identical bytes.
"""
from __future__ import annotations

import hashlib
import json
from contextlib import contextmanager
from fractions import Fraction

from . import __version__
from .blowup import ReductionTree, blowup_direction, ramify_to_xi, second_transform_Ya, \
    seidenberg_reduce
from .divergence import borel_radius, divergence_cross_check, elizarov_derivative
from .dsl import Document, parse_series, render_series
from .errors import HypothesisViolated, InsufficientData, SeptoolError
from .fields import Field3, PlanarField, Tag, check_first_integral, classify_singularity, \
    isolated_singularity_witness, tangent_cone
from .index import radius_stabilized_index, winding_index
from .models import X_a, Y_a, a_from_alpha, require_flat, second_transform_formula, xi_alpha
from .separatrix import FormalCurve, SeparatrixReport, _series_dict, separatrix_search, \
    verify_invariance
from .series import DEFAULT_TRUNC, Series, format_rational, format_series

SCHEMA = "septool-report/1"
COMMANDS = ("reduce", "separatrix", "index", "diverge", "check-integral", "paper-example")


class StageError(SeptoolError):
    """A pipeline error tagged with the stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)


@contextmanager
def stage(name: str):
    try:
        yield
    except StageError:
        raise
    except SeptoolError as exc:
        raise StageError(name, exc) from exc


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def field_dict(F) -> dict:
    return {
        "vars": list(F.vars),
        "components": {f"d{v}": render_series(c) for v, c in zip(F.vars, F.components)},
        "exact": F.exact,
    }


def tree_dict(tree: ReductionTree) -> dict:
    nodes = tree.nodes()
    ids = {id(n): k for k, n in enumerate(nodes)}
    out = []
    for k, n in enumerate(nodes):
        d = {
            "id": k,
            "depth": n.depth,
            "field": field_dict(n.field),
            "classification": None if n.classification is None else n.classification.to_dict(),
            "chart": None if n.chart is None else n.chart.to_dict(),
            "divisors": sorted(n.divisors),
            "children": [ids[id(c)] for c in n.children],
            "status": n.status,
        }
        if n.cone is not None:
            d["tangent_cone"] = n.cone.to_dict()
        if n.note:
            d["note"] = n.note
        if n.weak_pursuit:
            d["weak_pursuit"] = True
        out.append(d)
    return {"max_depth": tree.max_depth, "nodes": out,
            "leaves": [ids[id(n)] for n in tree.leaves()]}


def _check_assumptions(doc: Document):
    for kind, name in doc.assumptions:
        if kind == "flat":
            require_flat(doc.series[name], name)


def _planar(doc: Document, command: str) -> PlanarField:
    if not isinstance(doc.field, PlanarField):
        raise HypothesisViolated(f"{command} needs a planar field")
    return doc.field


def _invariance_dict(F, curve: FormalCurve) -> dict:
    chk = verify_invariance(F, curve)
    return {"residual": format_series(chk.residual), "residual_zero": chk.residual.is_zero(),
            "guaranteed_order": chk.guaranteed_order, "h_nonzero": chk.h_nonzero}


def _separatrices(F, N: int, max_depth: int) -> tuple[SeparatrixReport, PlanarField]:
    if isinstance(F, Field3):
        if not F.C.is_zero():
            raise HypothesisViolated("3D search needs d/d{0} = 0 (a fibration by {0})"
                                     .format(F.vars[2]))
        Y = F.restrict_to_fiber(F.vars[2])
        rep = separatrix_search(Y, N, max_depth)
        rep.curves = [FormalCurve(c.form, c.series,
                                  c.gamma + (Series.zero(c.gamma[0].vars, c.gamma[0].trunc),),
                                  c.chain, c.role) for c in rep.curves]
        rep.fiber = f"{F.vars[2]}=0"
        return rep, F
    return separatrix_search(F, N, max_depth), F


def _alpha(doc: Document | None, flags: dict) -> Series:
    if flags.get("alpha"):
        return parse_series(flags["alpha"], "z")
    if doc is not None and "alpha" in doc.series:
        s = doc.series["alpha"]
        return s.rename({s.vars[0]: "z"})
    if doc is not None:
        raise HypothesisViolated("needs --alpha or a 'series alpha(z) = ...' line")
    return parse_series("z^2", "z")


def run_pipeline(command: str, doc: Document | None, flags: dict | None = None) -> dict:
    """Run one command and return its report (raises :class:`StageError`)."""
    flags = dict(flags or {})
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    trunc = flags.get("trunc") or (doc.trunc if doc is not None and doc.trunc else None)
    stages: dict = {}
    if doc is not None:
        with stage("hypotheses"):
            _check_assumptions(doc)
        stages["input"] = {"name": doc.name, "field": field_dict(doc.field)}

    if command == "reduce":
        with stage("reduce"):
            F = _planar(doc, command)
            tree = seidenberg_reduce(F, flags.get("max_depth", 8), flags.get("pursue_weak", 0))
        stages["reduce"] = tree_dict(tree)

    elif command == "separatrix":
        N = trunc or DEFAULT_TRUNC
        with stage("separatrix"):
            rep, F = _separatrices(doc.field, N, flags.get("max_depth", 8))
        out = rep.to_dict()
        with stage("verify"):
            for c, d in zip(rep.curves, out["curves"]):
                d["invariance"] = _invariance_dict(F, c)
        stages["separatrix"] = out

    elif command == "index":
        with stage("index"):
            F = _planar(doc, command)
            witness = isolated_singularity_witness(F)
            if witness.verdict == "no":
                raise HypothesisViolated("singular point is not isolated: " + witness.certificate)
            radius = flags.get("radius") or Fraction(1, 4)
            rep = radius_stabilized_index(F, radius)
            if flags.get("csv"):
                winding_index(F, rep.radius, keep_points=True).write_csv(flags["csv"])
        stages["isolation"] = witness.to_dict()
        stages["index"] = rep.to_dict()

    elif command == "diverge":
        N = trunc or DEFAULT_TRUNC
        with stage("diverge"):
            alpha = _alpha(doc, flags)
            delta = flags.get("delta", Fraction(1, 10))
            cc = divergence_cross_check(alpha, delta, N)
        stages["diverge"] = _cross_dict(cc, alpha)
        if flags.get("csv") and cc.gevrey is not None:
            cc.gevrey.write_csv(flags["csv"])

    elif command == "check-integral":
        with stage("check-integral"):
            f = doc.function
            if flags.get("function"):
                from .dsl import parse_expression
                f = parse_expression(flags["function"], doc.field.vars, doc.series, trunc)
            if f is None:
                raise HypothesisViolated("no function given: add 'f = ...' or --function")
            F = doc.field.truncate(trunc) if trunc else doc.field
            res = check_first_integral(f, F)
        stages["check-integral"] = {"function": render_series(f), "residual": render_series(res),
                                    "residual_zero": res.is_zero(), "guaranteed_order": res.trunc}

    else:
        stages.update(paper_example(_alpha(doc, flags) if (flags.get("alpha") or doc) else None,
                                    flags.get("trunc") or 40, flags.get("delta", Fraction(1, 10))))

    return {
        "schema": SCHEMA,
        "tool": {"name": "septool", "version": __version__},
        "command": command,
        "inputs_digest": inputs_digest(command, doc, flags),
        "stages": stages,
    }


def _cross_dict(cc, alpha: Series) -> dict:
    d = cc.to_dict()
    d["alpha"] = render_series(alpha)
    if not cc.separatrix.is_zero():
        try:
            d["borel"] = borel_radius(cc.separatrix, (10, None)).to_dict()
        except InsufficientData as exc:
            d["borel"] = {"unavailable": str(exc)}
    return d


def inputs_digest(command: str, doc: Document | None, flags: dict) -> str:
    canon = {k: (format_rational(v) if isinstance(v, Fraction) else v)
             for k, v in sorted(flags.items()) if k not in ("json", "csv") and v is not None}
    blob = json.dumps({"command": command, "source": doc.source if doc else "",
                       "flags": canon}, sort_keys=True)
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


# -- the worked example ------------------------------------------------------

def paper_example(alpha: Series | None = None, N: int = 40, delta=Fraction(1, 10)) -> dict:
    """The full chain ``alpha -> Y_a -> blow-ups -> xi_alpha -> divergence`` with golden checks."""
    if alpha is None:
        alpha = parse_series("z^2", "z")
    out: dict = {}
    with stage("hypotheses"):
        require_flat(alpha, "alpha")
        a = a_from_alpha(alpha)
    with stage("Y_a"):
        exact = alpha.is_exact
        Y = Y_a(a) if exact else Y_a(a, 2 * N + 2)
        out["Y_a"] = {"a": render_series(a), "field": field_dict(Y)}
    with stage("tangent-cone"):
        cone = tangent_cone(Y)
        x, y = (Series.var(v, Y.vars) for v in Y.vars)
        golden = y ** 3 + x * x * y
        out["tangent_cone"] = {**cone.to_dict(),
                               "golden": format_series(golden),
                               "match": cone.polynomial == golden}
    with stage("first-blowup"):
        G, chart = blowup_direction(Y, 0)
        c1 = classify_singularity(G)
        out["p1"] = {"chart": chart.to_dict(), "field": field_dict(G),
                     "classification": c1.to_dict(),
                     "saddle_node": c1.tag is Tag.SADDLE_NODE}
    with stage("second-transform"):
        T = 12
        H = second_transform_Ya(a, T)
        golden2 = second_transform_formula(a, T)
        c2 = classify_singularity(H)
        out["p2"] = {"field": field_dict(H), "trunc": T, "display_match": H == golden2,
                     "classification": c2.to_dict(), "saddle_node": c2.tag is Tag.SADDLE_NODE}
    with stage("xi_alpha"):
        T = 16
        xi = ramify_to_xi(second_transform_Ya(a, 2 * T + 2), alpha, T)
        out["xi_alpha"] = {"field": field_dict(xi), "trunc": T,
                           "formula_match": xi == xi_alpha(alpha, T).truncate(T)}
    with stage("uniqueness"):
        rep = separatrix_search(Y if exact else Y.truncate(24), 14)
        out["separatrix"] = {"count": len(rep.curves), "uniqueness": rep.uniqueness,
                             "curves": [_series_dict(c.gamma[1]) for c in rep.curves]}
    with stage("X_a"):
        X = X_a(a) if exact else X_a(a, 2 * N + 2)
        z = Series.var("z", X.vars)
        res = check_first_integral(z, X)
        out["X_a"] = {"field": field_dict(X), "first_integral": "z",
                      "residual": render_series(res), "residual_zero": res.is_zero(),
                      "fiber_is_Y_a": X.restrict_to_fiber("z") == Y,
                      "isolated": isolated_singularity_witness(X).to_dict()}
    with stage("elizarov"):
        el = elizarov_derivative(alpha, N)
        out["elizarov"] = el.to_dict()
    with stage("divergence"):
        out["divergence"] = _cross_dict(divergence_cross_check(alpha, delta, N), alpha)
    out["golden_all_match"] = all([out["tangent_cone"]["match"], out["p1"]["saddle_node"],
                                   out["p2"]["display_match"], out["p2"]["saddle_node"],
                                   out["xi_alpha"]["formula_match"],
                                   out["X_a"]["residual_zero"], out["X_a"]["fiber_is_Y_a"]])
    return out


__all__ = ["SCHEMA", "COMMANDS", "StageError", "run_pipeline", "paper_example", "dumps",
           "tree_dict", "field_dict", "inputs_digest"]
