"""JSON/CSV report builders shared by the command-line verbs.

Each builder returns ``(report, status)``.  Reports hold only inputs and
exact results, in a fixed key order, so the same inputs always serialize
to the same bytes regardless of thread count.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from . import __version__
from .field import GF
from .functions import PAryFunction, component, direct_sum, graph
from .matrixchar import (
    BudgetError,
    design_factorization_check,
    is_partially_bent,
    kronecker_verify,
    linear_structures,
    matrix_budget,
    t_a_lemma_check,
    verify_delta_energy,
    delta_energy,
    verify_mmm,
    verify_second_derivative_sum,
)
from .pgds import (
    PreconditionError,
    expected_graph_params,
    group_ring_lemma_check,
    verify_nf_characterization,
    verify_partition_theorem,
    verify_pgds_character,
    verify_pgds_delta,
)
from .sequences import (
    classify_decimation,
    correlation_total_closed_form,
    cross_correlation,
    decimate,
    m_sequence,
    walsh_bridge_check,
)
from .walsh import classify, classify_vectorial, walsh_fast

OK = 0
FINDING = 1
USAGE = 2
INTERNAL = 3


def field_block(F: GF) -> dict:
    sigma = F.primitive
    return {
        **F.spec.to_json(),
        "modulus_text": F.spec.modulus_str(),
        "sigma": {"index": int(sigma), "coeffs": list(F.coeffs_of(sigma))},
    }


def header(command: str, F: GF, inputs: dict) -> dict:
    return {
        "tool": "plateau_lab",
        "version": __version__,
        "command": command,
        "field": field_block(F),
        "inputs": inputs,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def csv_text(rows: list[str]) -> str:
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------

def field_report(F: GF) -> tuple[dict, int]:
    traces = F.trace_table
    report = header("field", F, {"p": F.p, "n": F.n})
    report["result"] = {
        "order": F.order,
        "is_canonical": F.spec.is_canonical,
        "trace_value_counts": np.bincount(traces, minlength=F.p).tolist(),
        "trace_of_basis": [int(F.trace(F.p**i)) for i in range(F.n)],
    }
    return report, OK


def _matrix_block(f: PAryFunction, cls) -> tuple[dict, bool, bool]:
    """Matrix characterization of one p-ary function.

    Returns (block, agrees, energy_agrees); agreement failures of the
    matrix identity or second-derivative sums are internal errors, while a
    delta-energy mismatch is reported as a finding.
    """
    budget = matrix_budget()
    if f.domain.order > budget:
        reason = f"p^n = {f.domain.order} exceeds the matrix budget {budget}"
        return {"skipped": reason}, True, True
    block: dict = {}
    mv = verify_mmm(f, cls)
    block["mmm"] = mv.to_json()
    agrees = mv.agrees
    sd = verify_second_derivative_sum(f)
    block["second_derivative_sum"] = sd.to_json()
    agrees &= sd.constant == cls.is_plateaued and sd.s == cls.s
    es = verify_delta_energy(f)
    block["delta_energy"] = {"value": delta_energy(f).to_json(), "s": es, "classify_s": cls.s}
    return block, agrees, es == cls.s


def analyze_report(F, source: dict, jobs: int = 1) -> tuple[dict, int]:
    """Classification, graph PGDS, N_F characterization and matrix checks."""
    vec = F.as_vectorial() if isinstance(F, PAryFunction) else F
    report = header("analyze", F.domain, source)
    report["codomain"] = vec.codomain.spec.to_json()
    status = OK
    vc = classify_vectorial(vec, jobs=jobs)
    report["classification"] = vc.to_json()
    if isinstance(F, PAryFunction):
        report["component_class"] = vc.components[1].to_json()

    G = graph(vec)
    dv = verify_pgds_delta(G.members, G.group)
    cv = verify_pgds_character(G.members, G.group)
    expected = None
    if vc.is_s_plateaued:
        try:
            expected = expected_graph_params(vec.p, vec.n, vec.m, vc.s)
        except ValueError:
            expected = None
    report["graph_pgds"] = {
        "delta": dv.to_json(),
        "character": cv.to_json(),
        "expected": expected.to_json() if expected else None,
    }
    agree = dv.is_pgds == cv.is_pgds and dv.params == cv.params
    agree &= dv.is_pgds == vc.is_s_plateaued
    agree &= not vc.is_s_plateaued or expected is None or dv.params == expected

    nf = verify_nf_characterization(vec)
    report["nf_characterization"] = nf.to_json()
    agree &= nf.bridge_holds and nf.agrees_with_graph

    f1 = component(vec, 1)
    block, mat_ok, energy_ok = _matrix_block(f1, vc.components[1])
    block["component_b"] = 1
    report["matrix"] = block
    agree &= mat_ok
    report["cross_method_agreement"] = bool(agree)
    report["delta_energy_agrees"] = bool(energy_ok)
    if not agree:
        status = INTERNAL
    elif not energy_ok:
        status = FINDING
    return report, status


def partition_report(F: GF, d: int, jobs: int = 1) -> tuple[dict, int]:
    report = header("partition", F, {"d": d})
    r = verify_partition_theorem(F, d, jobs=jobs)
    report["result"] = r.to_json()
    if not r.methods_agree:
        return report, INTERNAL
    return report, OK if r.all_pgds else FINDING


def xcorr_report(F: GF, d: int, jobs: int = 1) -> tuple[dict, int, list[str]]:
    u = m_sequence(F)
    spectrum = cross_correlation(u, decimate(u, d), jobs=jobs)
    bridge = walsh_bridge_check(F, d, jobs=jobs)
    tv = classify_decimation(F, d, jobs=jobs)
    report = header("xcorr", F, {"d": d})
    report["result"] = {
        "period": spectrum.__len__(),
        "gcd_d_q_minus_1": math.gcd(d, F.order - 1),
        "value_set": spectrum.value_set(),
        "theta": [row.tolist() for row in spectrum.values],
        "sum_theta": spectrum.total().to_json(),
        "sum_theta_closed_form": correlation_total_closed_form(F, d).to_json(),
        "bridge": bridge.to_json(),
        "three_valued": tv.to_json(),
    }
    status = OK
    if not tv.agrees:
        status = INTERNAL
    elif not (bridge.literal_holds and tv.three_valued):
        status = FINDING
    return report, status, spectrum.csv_rows()


def kronecker_report(f: PAryFunction, g: PAryFunction, sources: list) -> tuple[dict, int, PAryFunction]:
    h = direct_sum(f, g)
    report = header("kronecker", h.domain, {"files": sources})
    report["f_field"] = f.domain.spec.to_json()
    report["g_field"] = g.domain.spec.to_json()
    c1, c2 = classify(walsh_fast(f)), classify(walsh_fast(g))
    ch = classify(walsh_fast(h))
    report["s1"], report["s2"] = c1.s, c2.s
    report["direct_sum_class"] = ch.to_json()
    ok = c1.s is None or c2.s is None or ch.s == c1.s + c2.s
    try:
        kv = kronecker_verify(f, g)
        report["kronecker"] = kv.to_json()
        ok &= kv.matches_direct_sum
        if c1.is_plateaued and c2.is_plateaued:
            ok &= kv.holds
    except BudgetError as exc:
        report["kronecker"] = {"skipped": str(exc)}
    return report, OK if ok else FINDING, h


def pgds_report(group, members, source: str) -> tuple[dict, int]:
    report = {
        "tool": "plateau_lab",
        "version": __version__,
        "command": "pgds-verify",
        "group": group.to_json(),
        "inputs": {"file": source, "k": int(len(members))},
    }
    try:
        dv = verify_pgds_delta(members, group)
        cv = verify_pgds_character(members, group)
    except PreconditionError as exc:
        report["error"] = str(exc)
        return report, USAGE
    report["delta"] = dv.to_json()
    report["character"] = cv.to_json()
    report["group_ring_lemma"] = group_ring_lemma_check(members, group).to_json()
    agree = dv.is_pgds == cv.is_pgds and dv.params == cv.params
    report["methods_agree"] = agree
    if not agree or not report["group_ring_lemma"]["holds"]:
        return report, INTERNAL
    return report, OK if dv.is_pgds else FINDING


def matrix_report(f: PAryFunction, source: dict) -> tuple[dict, int]:
    report = header("matrix-verify", f.domain, source)
    report["budget"] = matrix_budget()
    cls = classify(walsh_fast(f))
    report["classification"] = cls.to_json()
    block, agree, energy_ok = _matrix_block(f, cls)
    report.update(block)
    report["linear_structures"] = linear_structures(f).to_json()
    pb = is_partially_bent(f)
    report["partially_bent"] = pb.to_json()
    agree &= pb.consistent
    if f(0) == 0:
        report["t_a_lemma"] = t_a_lemma_check(f).to_json()
        agree &= report["t_a_lemma"]["holds_on_lambda"]
        try:
            dv = design_factorization_check(f)
            report["design"] = dv.to_json()
        except (PreconditionError, BudgetError) as exc:
            report["design"] = {"skipped": str(exc)}
    else:
        report["t_a_lemma"] = {"skipped": "needs f(0) = 0"}
        report["design"] = {"skipped": "needs f(0) = 0"}
    report["cross_method_agreement"] = bool(agree)
    report["delta_energy_agrees"] = bool(energy_ok)
    if not agree:
        return report, INTERNAL
    design_ok = report["design"].get("holds", True)
    return report, OK if energy_ok and design_ok else FINDING


def spectrum_csv(f: PAryFunction) -> list[str]:
    return walsh_fast(f).csv_rows()


# ---------------------------------------------------------------------------
# sweeps

SWEEP_CHECKS = ("classify", "graph-pgds", "partition", "xcorr")
SUMMARY_FIELDS = [
    "d", "gcd", "kind", "s", "graph_pgds", "partition_all_pgds", "three_valued", "theta_s",
]


def sweep_one(F: GF, d: int, checks: tuple[str, ...]) -> dict:
    from .functions import power_map

    out: dict = {"d": d, "gcd": math.gcd(d, F.order - 1)}
    Fd = power_map(F, d)
    if "classify" in checks or "graph-pgds" in checks:
        vc = classify_vectorial(Fd)
        out["classification"] = vc.to_json()
    if "graph-pgds" in checks:
        G = graph(Fd)
        out["graph_pgds"] = verify_pgds_delta(G.members, G.group).to_json()
    if "partition" in checks:
        try:
            out["partition"] = verify_partition_theorem(F, d).to_json()
        except PreconditionError as exc:
            out["partition"] = {"skipped": str(exc)}
    if "xcorr" in checks:
        tv = classify_decimation(F, d)
        out["xcorr"] = tv.to_json()
    return out


def summary_row(entry: dict) -> dict:
    cls = entry.get("classification", {})
    part = entry.get("partition", {})
    xc = entry.get("xcorr", {})
    gp = entry.get("graph_pgds", {})

    def opt(v):
        return "" if v is None else str(v).lower() if isinstance(v, bool) else str(v)

    return {
        "d": entry["d"],
        "gcd": entry["gcd"],
        "kind": opt(cls.get("kind")),
        "s": opt(cls.get("s")),
        "graph_pgds": opt(gp.get("is_pgds")),
        "partition_all_pgds": opt(part.get("all_pgds")),
        "three_valued": opt(xc.get("three_valued")),
        "theta_s": opt(xc.get("s")),
    }


def summary_csv(entries: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    w.writeheader()
    for e in sorted(entries, key=lambda e: e["d"]):
        w.writerow(summary_row(e))
    return buf.getvalue()
