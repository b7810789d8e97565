"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run under pytest (lines are repeated in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""
import contextlib
import io
import time

import numpy as np
import pytest

from plateau_lab import cyclotomic as cyc
from plateau_lab.cli import main
from plateau_lab.field import field
from plateau_lab.functions import (
    constant,
    direct_sum,
    graph,
    level_sets,
    power_map,
    random_function,
    trace_polynomial,
    trace_power,
)
from plateau_lab.groups import AbelianGroup
from plateau_lab.matrixchar import (
    design_factorization_check,
    is_partially_bent,
    kronecker_verify,
    t_a_lemma_check,
    verify_delta_energy,
    verify_mmm,
    verify_second_derivative_sum,
)
from plateau_lab.pgds import (
    group_ring_lemma_check,
    verify_partition_theorem,
    verify_pgds_character,
    verify_pgds_delta,
)
from plateau_lab.sequences import (
    classify_decimation,
    cross_correlation,
    decimate,
    m_sequence,
    walsh_bridge_check,
)
from plateau_lab.walsh import (
    VECTORIAL_S_PLATEAUED,
    classify,
    classify_vectorial,
    convolve,
    exponent_table,
    fourier,
    walsh_fast,
    walsh_naive,
)

RESULTS: list[str] = []

CORPUS_SEED = 2024
CORPUS_SIZE = 200


def report(number: int, title: str, ok: bool, detail: str, elapsed: float) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail}; {elapsed:.1f}s)"
    RESULTS.append(line)
    print(line)


@contextlib.contextmanager
def stopwatch():
    box = {}
    start = time.perf_counter()
    yield box
    box["elapsed"] = time.perf_counter() - start


# ---------------------------------------------------------------------------

def test_criterion_1_graph_equivalence():
    with stopwatch() as t:
        F = power_map(field(3, 3), 5)
        vc = classify_vectorial(F)
        G = graph(F)
        dv = verify_pgds_delta(G.members, G.group)
        cv = verify_pgds_character(G.members, G.group)
    checks = {
        "vectorial s=1": vc.kind == VECTORIAL_S_PLATEAUED and vc.s == 1,
        "delta (729,27,24,105)": dv.is_pgds and dv.params.astuple() == (729, 27, 24, 105),
        "character agrees": cv.is_pgds and cv.params == dv.params,
    }
    ok = all(checks.values()) and t["elapsed"] < 10
    report(1, "x^5 on F_27 graph is a PGDS iff vectorial 1-plateaued", ok,
           ", ".join(f"{k}={v}" for k, v in checks.items()), t["elapsed"])
    assert ok


def test_criterion_2_partition():
    with stopwatch() as t:
        good = verify_partition_theorem(field(3, 3), 5)
        bad = verify_partition_theorem(field(3, 5), 7)
    params = [
        tuple(s["delta"][k] for k in ("v", "k", "alpha", "beta")) for s in good.sets
    ]
    ok_good = good.all_pgds and good.methods_agree and params == [(27, 9, 24, 33)] * 3
    ok_bad = bad.methods_agree and not bad.all_pgds
    ok = ok_good and ok_bad and t["elapsed"] < 30
    report(2, "level sets of Tr(x^5) on F_27 are PGDS; d=7 on F_243 fails", ok,
           f"n=3 params={params[0]} all={good.all_pgds}; n=5 failing sets="
           f"{sum(not s['delta']['is_pgds'] for s in bad.sets)}", t["elapsed"])
    assert ok


def test_criterion_3_cross_correlation():
    details = []
    ok = True
    with stopwatch() as t:
        for n, d, values in [(3, 5, {-1, 8, -10}), (5, 5, {-1, 26, -28}), (5, 7, {-1, 26, -28})]:
            F = field(3, n)
            u = m_sequence(F)
            spec = cross_correlation(u, decimate(u, d))
            vals, rational = spec.rational()
            got = set(int(x) for x in vals[rational])
            in_set = bool(rational.all()) and got <= values and len(spec) == 3**n - 1
            # theta(tau) = -1 + W_{F_1}(-sigma^tau * (-1)) at every shift
            W = walsh_fast(trace_power(F, d)).values
            sig_tau = F.exp[np.arange(u.period) % (F.order - 1)]
            arg = F.neg(F.mul(F.neg(sig_tau), 1))
            rhs = W[arg] - cyc.scalar(3, 1)
            bridge = bool(np.array_equal(spec.values, rhs))
            assert bridge == walsh_bridge_check(F, d).literal_holds
            ok &= in_set and bridge and got == values
            details.append(f"n={n} d={d} values={sorted(got)} bridge={bridge}")
    ok &= t["elapsed"] < 60
    report(3, "three-valued cross-correlation and its Walsh bridge", ok, "; ".join(details), t["elapsed"])
    assert ok


def matrix_corpus():
    F = field(3, 3)
    rng = np.random.default_rng(CORPUS_SEED)
    corpus = []
    for _ in range(CORPUS_SIZE):
        terms = int(rng.integers(1, 4))
        spec = [(int(rng.integers(1, 27)), int(rng.integers(1, 27))) for _ in range(terms)]
        corpus.append((f"Tr({' + '.join(f'{a}x^{d}' for a, d in spec)})", trace_polynomial(F, spec)))
    corpus += [(f"Tr(x^{d})", trace_power(F, d)) for d in range(1, 27)]
    return corpus


def test_criterion_4_matrix_characterization():
    legs = {"mmm": 0, "second_derivative": 0, "delta_energy": 0}
    energy_misses = []
    with stopwatch() as t:
        corpus = matrix_corpus()
        for name, f in corpus:
            cls = classify(walsh_fast(f))
            legs["mmm"] += verify_mmm(f, cls).s == cls.s
            sv = verify_second_derivative_sum(f)
            legs["second_derivative"] += sv.constant == cls.is_plateaued and sv.s == cls.s
            es = verify_delta_energy(f)
            if es == cls.s:
                legs["delta_energy"] += 1
            else:
                energy_misses.append(name)
    total = len(corpus)
    ok = all(v == total for v in legs.values()) and t["elapsed"] < 300
    detail = ", ".join(f"{k} {v}/{total}" for k, v in legs.items())
    if energy_misses:
        detail += f"; energy p^(2n+s) without a plateaued spectrum: {', '.join(energy_misses)}"
    report(4, "matrix identity, second-derivative sums and delta energy agree with classify",
           ok, detail, t["elapsed"])
    assert ok


def test_criterion_5_kronecker():
    with stopwatch() as t:
        bent9 = trace_power(field(3, 2), 2)
        bent3 = trace_power(field(3, 1), 2)
        h1 = direct_sum(bent9, bent3)
        c1 = classify(walsh_fast(h1))
        h2 = direct_sum(bent9, trace_power(field(3, 3), 5))
        c2 = classify(walsh_fast(h2))
        kv = kronecker_verify(bent9, bent3)
    checks = {
        "F9+F3 bent": h1.domain.order == 27 and c1.s == 0,
        "F9+F27 1-plateaued": h2.domain.order == 243 and c2.s == 1,
        "PP*P = 27 P": kv.holds and kv.factor == 3 ** (2 + 1 + 0 + 0) and kv.matches_direct_sum,
    }
    ok = all(checks.values()) and t["elapsed"] < 60
    report(5, "direct sums add plateau indices; Kronecker identity", ok,
           ", ".join(f"{k}={v}" for k, v in checks.items()), t["elapsed"])
    assert ok


def walsh_fields(limit=243):
    out = []
    for p in range(2, limit + 1):
        if any(p % r == 0 for r in range(2, int(p**0.5) + 1)):
            continue
        n = 1
        while p**n <= limit:
            out.append((p, n))
            n += 1
    return out


def test_criterion_6_property_suites():
    rng = np.random.default_rng(6)
    parts = {}
    with stopwatch() as t:
        fields = walsh_fields()
        fast_ok = parseval_ok = True
        for p, n in fields:
            F = field(p, n)
            for _ in range(100):
                f = random_function(F, rng)
                fast, naive = walsh_fast(f), walsh_naive(f)
                fast_ok &= fast == naive
                parseval_ok &= cyc.to_cycint(fast.norm_sq.sum(axis=0)) == F.order**2
        parts["a fast=naive"] = f"{fast_ok} on {len(fields)} fields"
        parts["b Parseval"] = str(parseval_ok)

        F27 = field(3, 3)
        conv_ok = True
        for _ in range(50):
            A = exponent_table(random_function(F27, rng))
            B = exponent_table(random_function(F27, rng))
            conv = convolve(F27, A, B[F27.neg(F27.all)])
            conv_ok &= bool(np.array_equal(
                fourier(F27, conv), cyc.ring_mul(fourier(F27, A), fourier(F27, B))
            ))
        parts["c convolution"] = str(conv_ok)

        agree_ok = lemma_ok = True
        positives = 0
        for G in (AbelianGroup.of_field(F27), AbelianGroup.product(field(3, 2), field(3, 1))):
            for _ in range(50):
                k = int(rng.integers(3, G.order))
                S = rng.choice(G.order, size=k, replace=False)
                dv, cv = verify_pgds_delta(S, G), verify_pgds_character(S, G)
                agree_ok &= dv.is_pgds == cv.is_pgds and dv.params == cv.params
                positives += dv.is_pgds
                lemma_ok &= group_ring_lemma_check(S, G).holds
        parts["d verifier agreement"] = f"{agree_ok} ({positives}/100 PGDS)"
        parts["e lemma"] = str(lemma_ok)
    ok = fast_ok and parseval_ok and conv_ok and agree_ok and lemma_ok
    report(6, "property suites", ok, ", ".join(f"{k}: {v}" for k, v in parts.items()), t["elapsed"])
    assert ok


def test_criterion_7_partially_bent_pipeline():
    with stopwatch() as t:
        f = direct_sum(trace_power(field(3, 2), 2), constant(field(3, 1)))
        pb = is_partially_bent(f)
        tv = t_a_lemma_check(f)
        dv = design_factorization_check(f)
    checks = {
        "partially bent dim 1 = s": pb.partially_bent and pb.dim == 1 == pb.classify_s,
        "T_a on Lambda": tv.holds_on_lambda,
        "multiplicity 3": dv.multiplicity == 3,
        "NN^tN at 81 points": dv.holds and dv.points == 81,
    }
    ok = all(checks.values()) and t["elapsed"] < 120
    report(7, "partially bent pipeline", ok, ", ".join(f"{k}={v}" for k, v in checks.items()), t["elapsed"])
    assert ok


DETERMINISM_RUNS = [
    ["analyze", "--p", "3", "--n", "3", "--power", "5"],
    ["partition", "--n", "3", "--d", "5"],
    ["partition", "--n", "5", "--d", "7"],
    ["xcorr", "--p", "3", "--n", "3", "--d", "5"],
    ["xcorr", "--p", "3", "--n", "5", "--d", "5"],
    ["xcorr", "--p", "3", "--n", "5", "--d", "7"],
]


def cli_bytes(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        main(argv)
    return buf.getvalue().encode()


def test_criterion_8_determinism():
    same = 0
    with stopwatch() as t:
        for argv in DETERMINISM_RUNS:
            a = cli_bytes(argv + ["--jobs", "1"])
            b = cli_bytes(argv + ["--jobs", "8"])
            same += a == b and len(a) > 0
    ok = same == len(DETERMINISM_RUNS)
    report(8, "byte-identical reports for --jobs 1 and --jobs 8", ok,
           f"{same}/{len(DETERMINISM_RUNS)} reports identical", t["elapsed"])
    assert ok


if __name__ == "__main__":
    import sys

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                with contextlib.redirect_stdout(io.StringIO()):
                    fn()
            except AssertionError:
                failures += 1
    print("\n".join(RESULTS))
    sys.exit(1 if failures else 0)
