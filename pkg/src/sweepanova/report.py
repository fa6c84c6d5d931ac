"""Analysis pipeline and text / JSON rendering."""

import json
from dataclasses import dataclass

import numpy as np

from .anova import build_table
from .dataio import ingest, require_design
from .design import bib_check, efficiency_report, incidence, is_connected
from .exceptions import DisconnectedDesignError, MissingColumnError
from .model import indicator_matrix, sweep_mean
from .spectral import projector_from_design
from .sweep import bib_three_stage, sequential_sweep

P_FLOOR = 1e-12
EXISTENCE_CAVEAT = (
    "these conditions are necessary only; a design with these parameters may still not exist"
)


@dataclass
class AnalysisReport:
    table: object
    effects: dict
    efficiency: object
    design: object
    units: object
    config: object
    three_stage_deviation: float = None

    @property
    def diagnostics(self):
        return list(self.table.diagnostics)


def fmt(x):
    return "-" if x is None else f"{x:.6g}"


def fmt_p(p):
    if p is None:
        return "-"
    return "<1e-12" if p < P_FLOOR else f"{p:.6g}"


def run_analysis(config):
    units, design = ingest(config.design_path, config)
    design = require_design(design, config)
    if units.response is None:
        raise MissingColumnError(f"response column {config.response_column!r} not found")
    tol = config.tol
    if not is_connected(incidence(design)):
        raise DisconnectedDesignError("design is disconnected")

    y = units.response
    ystar = sweep_mean(y)
    terms = [design.block_term(config.block_column), design.treatment_term(config.treatment_column)]
    terms += [indicator_matrix(units.factor(c)) for c in config.extra_factor_columns]
    sweep = sequential_sweep(terms, ystar, tol)
    layout = "blocks" if len(terms) == 2 else "units"
    table = build_table(sweep, ystar, [t.factor_name for t in terms], layout=layout, tol=tol)

    trt = sweep.fits[1]
    effects = {str(label): float(v) for label, v in zip(design.treatment_labels, trt.effects)}
    eff = efficiency_report(design, tol)

    deviation = None
    if eff.is_bib:
        pb = projector_from_design(terms[0].design, tol)
        pt = projector_from_design(terms[1].design, tol)
        three = bib_three_stage(pb, pt, float(eff.e_bib), y, tol)
        swept = y - pb.matrix @ y
        two = swept - trt.projector.matrix @ swept
        deviation = float(np.max(np.abs(three - two)))
    return AnalysisReport(table, effects, eff, design, units, config, deviation)


def efficiency_dict(eff):
    out = {
        "cefs": [float(c) for c in eff.cefs],
        "E": eff.E_harmonic,
        "geometric": eff.geometric_mean,
        "min": eff.min_cef,
    }
    if eff.is_bib:
        out["bib"] = {"lambda": eff.lambda_, "e": float(eff.e_bib), "e_exact": str(eff.e_bib)}
    return out


def design_echo(design, units, config):
    """Lossless JSON echo of the ingested design, re-ingestible by :func:`ingest`."""
    rows = []
    for h in range(design.n):
        row = {
            config.block_column: str(design.block_labels[design.blocks[h]]),
            config.treatment_column: str(design.treatment_labels[design.treatments[h]]),
        }
        for col in config.extra_factor_columns:
            f = units.factor(col)
            row[col] = str(f.labels[f.levels[h]])
        if units.response is not None:
            row[config.response_column] = float(units.response[h])
        rows.append(row)
    columns = [config.block_column, config.treatment_column, *config.extra_factor_columns]
    if units.response is not None:
        columns.append(config.response_column)
    return {"columns": columns, "units": rows}


def report_dict(rep):
    eff = efficiency_dict(rep.efficiency)
    if rep.three_stage_deviation is not None:
        eff["bib"]["three_stage_max_deviation"] = rep.three_stage_deviation
    return {
        "anova": rep.table.to_dict(),
        "effects": rep.effects,
        "efficiency": eff,
        "diagnostics": rep.diagnostics,
        "design": design_echo(rep.design, rep.units, rep.config),
    }


def render_json(obj):
    return json.dumps(obj, indent=2)


def _table_lines(table):
    head = f"{'Source':<34}{'df':>5}{'SS':>14}{'MS':>14}{'F':>12}{'p':>12}"
    lines = [head, "-" * len(head)]
    for label, rows in table.strata:
        lines.append(label)
        for r in rows:
            lines.append(f"  {r.source:<32}{r.df:>5}{fmt(r.ss):>14}{fmt(r.ms):>14}{fmt(r.f):>12}{fmt_p(r.p):>12}")
    t = table.total
    lines.append("-" * len(head))
    lines.append(f"{t.source:<34}{t.df:>5}{fmt(t.ss):>14}")
    return lines


def _efficiency_lines(eff):
    lines = [
        "Canonical efficiency factors: " + ", ".join(fmt(c) for c in eff.cefs),
        f"Average efficiency factor E (harmonic mean): {fmt(eff.E_harmonic)}",
        f"Geometric mean of cefs: {fmt(eff.geometric_mean)}",
        f"Smallest cef: {fmt(eff.min_cef)}",
    ]
    if eff.is_bib:
        lines.append(f"BIB design: lambda = {eff.lambda_}, e = {eff.e_bib} ({fmt(float(eff.e_bib))})")
    return lines


def render_text(rep):
    d = rep.design
    lines = [f"Design: v={d.v} treatments, b={d.b} blocks, k={d.k}, r={d.r}, n={d.n}", ""]
    lines += ["Analysis of variance", *_table_lines(rep.table), ""]
    lines.append("Treatment effects (adjusted for blocks, centred)")
    lines += [f"  {label:<12}{fmt(v):>14}" for label, v in rep.effects.items()]
    lines += ["", "Efficiency", *("  " + s for s in _efficiency_lines(rep.efficiency))]
    if rep.three_stage_deviation is not None:
        lines.append(
            "  Three-stage sweep vs two-stage residual: max abs deviation "
            f"{rep.three_stage_deviation:.3e}"
        )
    if rep.diagnostics:
        lines += ["", "Diagnostics", *("  " + s for s in rep.diagnostics)]
    return "\n".join(lines) + "\n"


def analyze(config):
    rep = run_analysis(config)
    if config.output_format == "json":
        return render_json(report_dict(rep)) + "\n"
    return render_text(rep)


def efficiency(config):
    _, design = ingest(config.design_path, config)
    design = require_design(design, config)
    if not is_connected(incidence(design)):
        raise DisconnectedDesignError("design is disconnected")
    eff = efficiency_report(design, config.tol)
    if config.output_format == "json":
        doc = {"v": design.v, "b": design.b, "k": design.k, "r": design.r, "efficiency": efficiency_dict(eff)}
        return render_json(doc) + "\n"
    lines = [f"Design: v={design.v} treatments, b={design.b} blocks, k={design.k}, r={design.r}"]
    lines += _efficiency_lines(eff)
    return "\n".join(lines) + "\n"


def check_bib_cmd(v, k, r, output_format="text"):
    res = bib_check(v, k, r)
    if output_format == "json":
        doc = {
            "v": v,
            "k": k,
            "r": r,
            "lambda": str(res.lambda_),
            "b": str(res.b),
            "feasible": res.feasible,
            "e": None if res.e is None else float(res.e),
            "e_exact": None if res.e is None else str(res.e),
            "note": EXISTENCE_CAVEAT,
        }
        return render_json(doc) + "\n"
    lines = [
        f"v={v} k={k} r={r}",
        f"lambda = r(k-1)/(v-1) = {res.lambda_}",
        f"b = vr/k = {res.b}",
        f"feasible: {'yes' if res.feasible else 'no'}",
    ]
    if res.feasible:
        lines.append(f"efficiency factor e = {res.e} ({fmt(float(res.e))})")
    lines.append(f"note: {EXISTENCE_CAVEAT}")
    return "\n".join(lines) + "\n"
