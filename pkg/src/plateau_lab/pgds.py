"""Partial geometric difference sets.

A k-subset S of an abelian group G (order v) is a PGDS with parameters
(v, k; alpha, beta) when ``T(x) = sum_{y in S} delta(x - y)`` equals beta on
S and alpha off S, delta(g) counting pairs (s, t) in S x S with s - t = g.

Two independent verifiers are provided: :func:`verify_pgds_delta` counts
differences, :func:`verify_pgds_character` inspects character sums.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import cyclotomic as cyc
from .field import GF
from .functions import (
    PAryFunction,
    VectorialFunction,
    from_level_sets,
    graph,
    level_sets,
    trace_power,
)
from .groups import AbelianGroup
from .walsh import NOT_PLATEAUED, classify, classify_vectorial, walsh_fast

DELTA = "delta"
CHARACTER = "character"

_CHUNK = 1 << 22


class PreconditionError(ValueError):
    """An input violates a stated hypothesis of a verifier."""


@dataclass(frozen=True)
class PgdsParams:
    v: int
    k: int
    alpha: int
    beta: int

    def consistent(self) -> bool:
        """k^3 = (beta - alpha) k + alpha v."""
        return self.k**3 == (self.beta - self.alpha) * self.k + self.alpha * self.v

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.alpha, self.beta)

    def to_json(self) -> dict:
        return {"v": self.v, "k": self.k, "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class PgdsVerdict:
    is_pgds: bool
    params: Optional[PgdsParams]
    witness: Optional[int]
    method: str
    detail: str = ""

    def to_json(self) -> dict:
        p = self.params
        return {
            "is_pgds": self.is_pgds,
            "v": p.v if p else None,
            "k": p.k if p else None,
            "alpha": p.alpha if p else None,
            "beta": p.beta if p else None,
            "method": self.method,
            "witness": self.witness,
        }


def _members(S) -> np.ndarray:
    arr = np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))
    return arr


def _check_size(S: np.ndarray, G: AbelianGroup):
    k = len(S)
    if not 2 < k < G.order:
        raise PreconditionError(f"PGDS needs v > k > 2, got v={G.order}, k={k}")
    if S.min() < 0 or S.max() >= G.order:
        raise PreconditionError("set has members outside the group")


# ---------------------------------------------------------------------------
# difference counting

def delta_table(S, G: AbelianGroup) -> np.ndarray:
    """g -> #{(s, t) in S x S : s - t = g}."""
    S = _members(S)
    v = G.order
    out = np.zeros(v, dtype=np.int64)
    if len(S) == 0:
        return out
    step = max(1, _CHUNK // len(S))
    for i in range(0, len(S), step):
        diffs = G.sub(S[i : i + step, None], S[None, :])
        out += np.bincount(diffs.ravel(), minlength=v)
    return out


def t_table(S, G: AbelianGroup, delta: np.ndarray | None = None) -> np.ndarray:
    """x -> sum_{y in S} delta(x - y)."""
    S = _members(S)
    if delta is None:
        delta = delta_table(S, G)
    v = G.order
    out = np.zeros(v, dtype=np.int64)
    x = np.arange(v, dtype=np.int64)
    step = max(1, _CHUNK // v)
    for i in range(0, len(S), step):
        out += delta[G.sub(x[:, None], S[None, i : i + step])].sum(axis=1)
    return out


def verify_pgds_delta(S, G: AbelianGroup) -> PgdsVerdict:
    S = _members(S)
    _check_size(S, G)
    T = t_table(S, G)
    inside = np.zeros(G.order, dtype=bool)
    inside[S] = True
    beta = int(T[S[0]])
    alpha = int(T[np.flatnonzero(~inside)[0]])
    expected = np.where(inside, beta, alpha)
    bad = np.flatnonzero(T != expected)
    if len(bad):
        return PgdsVerdict(False, None, int(bad[0]), DELTA, "T(x) not two-valued on S / off S")
    return PgdsVerdict(True, PgdsParams(G.order, len(S), alpha, beta), None, DELTA)


# ---------------------------------------------------------------------------
# character sums

def character_norms(S, G: AbelianGroup) -> np.ndarray:
    """Reduced |chi(S)|^2 for every character label."""
    return cyc.norm_sq(G.character_sums(S))


def verify_pgds_character(S, G: AbelianGroup) -> PgdsVerdict:
    S = _members(S)
    _check_size(S, G)
    v, k = G.order, len(S)
    norms = character_norms(S, G)[1:]  # label 0 is principal
    vals, rational = cyc.rational_part(norms)
    irr = np.flatnonzero(~rational)
    if len(irr):
        return PgdsVerdict(False, None, int(irr[0]) + 1, CHARACTER, "|chi(S)|^2 is irrational")
    nz = np.flatnonzero(vals != 0)
    theta = int(vals[nz[0]]) if len(nz) else 0
    bad = nz[vals[nz] != theta]
    if len(bad):
        return PgdsVerdict(
            False, None, int(bad[0]) + 1, CHARACTER, "two distinct nonzero |chi(S)|^2 values"
        )
    num = k**3 - theta * k
    if num % v or num < 0:
        return PgdsVerdict(
            False, None, None, CHARACTER, f"alpha = {Fraction(num, v)} is not a non-negative integer"
        )
    alpha = num // v
    return PgdsVerdict(True, PgdsParams(v, k, alpha, alpha + theta), None, CHARACTER)


@dataclass(frozen=True)
class LemmaCheck:
    holds: bool
    total: int
    expected: int

    def to_json(self) -> dict:
        return {"holds": self.holds, "total": self.total, "expected": self.expected}


def group_ring_lemma_check(S, G: AbelianGroup) -> LemmaCheck:
    """sum over all characters of chi(S S^-1) equals v * |S|."""
    S = _members(S)
    expected = G.order * len(S)
    if len(S) == 0:
        return LemmaCheck(True, 0, 0)
    total = cyc.to_cycint(character_norms(S, G).sum(axis=0))
    value = total.as_rational_integer()
    return LemmaCheck(value == expected, value if value is not None else -1, expected)


def expected_graph_params(p: int, n: int, m: int, s: int) -> PgdsParams:
    """Parameters of the graph of a vectorial s-plateaued F_{p^n} -> F_{p^m}."""
    if not 0 <= s <= n:
        raise ValueError(f"s={s} outside [0, n={n}]")
    alpha = Fraction(p ** (2 * n) - p ** (n + s), p**m)
    if alpha.denominator != 1:
        raise ValueError(f"alpha = {alpha} is not integral for (p,n,m,s)=({p},{n},{m},{s})")
    a = int(alpha)
    return PgdsParams(p ** (n + m), p**n, a, p ** (n + s) + a)


def graph_group(F) -> AbelianGroup:
    return graph(F).group


# ---------------------------------------------------------------------------
# second-derivative counts N_F(c, x)

def nf_table(F: VectorialFunction) -> np.ndarray:
    """N[c, x] = #{(t, a) : D_t F(a) - D_t F(x) = c}."""
    D, C = F.domain, F.codomain
    qn, qm = D.order, C.order
    out = np.zeros((qm, qn), dtype=np.int64)
    x = D.all
    c = C.all
    for t in range(qn):
        dt = C.sub(F.values[D.add(x, t)], F.values)
        hist = np.bincount(dt, minlength=qm)
        # pairs with D_t F(a) = D_t F(x) + c
        out += hist[C.add(dt[None, :], c[:, None])]
    return out


def n_f_counts(F: VectorialFunction, c: int, x: int) -> int:
    D, C = F.domain, F.codomain
    total = 0
    xs = D.all
    for t in range(D.order):
        dt = C.sub(F.values[D.add(xs, t)], F.values)
        total += int(np.count_nonzero(C.sub(dt, dt[int(x)]) == int(c)))
    return total


@dataclass(frozen=True)
class NfVerdict:
    two_valued: bool
    alpha: Optional[int]
    beta: Optional[int]
    witness: Optional[tuple[int, int]]
    graph_verdict: PgdsVerdict
    bridge_holds: bool

    @property
    def agrees_with_graph(self) -> bool:
        if self.two_valued != self.graph_verdict.is_pgds:
            return False
        if not self.two_valued:
            return True
        gp = self.graph_verdict.params
        return (gp.alpha, gp.beta) == (self.alpha, self.beta)

    def to_json(self) -> dict:
        return {
            "two_valued": self.two_valued,
            "alpha": self.alpha,
            "beta": self.beta,
            "witness": list(self.witness) if self.witness else None,
            "graph": self.graph_verdict.to_json(),
            "bridge_holds": self.bridge_holds,
            "agrees_with_graph": self.agrees_with_graph,
        }


def verify_nf_characterization(F) -> NfVerdict:
    """N_F(c, x) two-valued in (c = 0, c != 0) and independent of x.

    Also checks pointwise that N_F(c, x) = T((x, F(x) - c)) for the graph,
    which links the count to the PGDS sum.
    """
    if isinstance(F, PAryFunction):
        F = F.as_vectorial()
    N = nf_table(F)
    beta = int(N[0, 0])
    alpha = int(N[1, 0]) if N.shape[0] > 1 else None
    expected = np.full_like(N, alpha if alpha is not None else 0)
    expected[0] = beta
    bad = np.argwhere(N != expected)
    witness = (int(bad[0][0]), int(bad[0][1])) if len(bad) else None
    two = witness is None

    G = graph(F)
    group = G.group
    T = t_table(G.members, group)
    qn = F.domain.order
    C = F.codomain
    ys = C.sub(F.values[None, :], C.all[:, None])  # [c, x] -> F(x) - c
    bridge = bool(np.array_equal(N, T[F.domain.all[None, :] + qn * ys]))
    gv = verify_pgds_delta(G.members, group)
    return NfVerdict(two, alpha if two else None, beta if two else None, witness, gv, bridge)


# ---------------------------------------------------------------------------
# the ternary partition theorem

def partition_stated_params(n: int) -> PgdsParams:
    return PgdsParams(3**n, 3 ** (n - 1), 3 ** (2 * n - 3) - 3 ** (n - 2),
                      3 ** (n - 1) + 3 ** (2 * n - 3) - 3 ** (n - 2))


def partition_general_params(n: int, s: int) -> Optional[PgdsParams]:
    """Level-set parameters for amplitude^2 3^(n+s-2); None if non-integral."""
    theta = Fraction(3) ** (n + s - 2)
    k = 3 ** (n - 1)
    alpha = (Fraction(k) ** 3 - theta * k) / 3**n
    if theta.denominator != 1 or alpha.denominator != 1:
        return None
    return PgdsParams(3**n, k, int(alpha), int(alpha + theta))


def _isqrt_exact(x: int) -> Optional[int]:
    if x < 0:
        return None
    r = math.isqrt(x)
    return r if r * r == x else None


def _half_power(base: int, twice_exp: int) -> Optional[int]:
    """base^(twice_exp / 2) if it is an integer."""
    if twice_exp < 0 or twice_exp % 2:
        return None
    return base ** (twice_exp // 2)


def decimation_k(p: int, n: int, d: int) -> Optional[int]:
    """k with d = (p^(2k) + 1) / 2, searched over 1 <= k <= 2n."""
    for k in range(1, 2 * n + 1):
        if (p ** (2 * k) + 1) // 2 == d:
            return k
    return None


@dataclass
class PartitionReport:
    n: int
    d: int
    s: Optional[int]
    hypotheses: dict
    stated_params: dict
    general_params: Optional[dict]
    amplitude_flag: bool
    sets: list = dc_field(default_factory=list)
    proof_table: dict = dc_field(default_factory=dict)

    @property
    def all_pgds(self) -> bool:
        return all(s["delta"]["is_pgds"] and s["character"]["is_pgds"] for s in self.sets)

    @property
    def any_pgds(self) -> bool:
        return any(s["delta"]["is_pgds"] for s in self.sets)

    @property
    def methods_agree(self) -> bool:
        return all(s["methods_agree"] for s in self.sets)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "s": self.s,
            "hypotheses": self.hypotheses,
            "stated_params": self.stated_params,
            "general_params": self.general_params,
            "amplitude_flag": self.amplitude_flag,
            "all_pgds": self.all_pgds,
            "methods_agree": self.methods_agree,
            "sets": self.sets,
            "proof_table": self.proof_table,
        }


def _verify_set(D, G):
    try:
        dv = verify_pgds_delta(D, G)
        cv = verify_pgds_character(D, G)
    except PreconditionError as exc:
        empty = PgdsVerdict(False, None, None, DELTA, str(exc))
        return empty, PgdsVerdict(False, None, None, CHARACTER, str(exc))
    return dv, cv


def _verdicts_agree(dv: PgdsVerdict, cv: PgdsVerdict) -> bool:
    return dv.is_pgds == cv.is_pgds and dv.params == cv.params


def verify_partition_theorem(domain: GF, d: int, jobs: int = 1) -> PartitionReport:
    """Check the level sets of Tr(x^d) over F_{3^n} as PGDS, with proof steps."""
    if domain.p != 3:
        raise PreconditionError("the partition theorem is stated for p = 3")
    n = domain.n
    if n < 3:
        raise PreconditionError("the partition theorem needs n >= 3")
    f = trace_power(domain, d)
    spec_cls = classify(walsh_fast(f))
    s = spec_cls.s
    k = decimation_k(3, n, d)
    s_hyp = math.gcd(n, k) if k else None
    hyp = {
        "d_form_k": k,
        "gcd_n_k": s_hyp,
        "n_over_s_odd": bool(s_hyp and (n // s_hyp) % 2 == 1),
        "gcd_d_q_minus_1": math.gcd(d, 3**n - 1),
        "walsh_class": spec_cls.to_json(),
    }
    hyp["holds"] = bool(k and hyp["n_over_s_odd"])
    stated = partition_stated_params(n)
    general = partition_general_params(n, s) if s is not None else None
    report = PartitionReport(
        n=n,
        d=d,
        s=s,
        hypotheses=hyp,
        stated_params=stated.to_json(),
        general_params=general.to_json() if general else None,
        amplitude_flag=(s != 1),
    )

    G = AbelianGroup.of_field(domain)
    sets = level_sets(f)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(lambda D: _verify_set(D, G), sets))
    else:
        verdicts = [_verify_set(D, G) for D in sets]
    for i, (D, (dv, cv)) in enumerate(zip(sets, verdicts)):
        report.sets.append({
            "i": i,
            "size": int(len(D)),
            "delta": dv.to_json(),
            "character": cv.to_json(),
            "methods_agree": _verdicts_agree(dv, cv),
            "matches_stated": dv.params == stated,
            "matches_general": general is not None and dv.params == general,
        })
    report.proof_table = _proof_table(domain, f, sets, G, s)
    return report


_TUPLES = ["(0,0)", "(0,C)", "(0,-C)", "(C,C)", "(C,0)", "(C,2C)", "(-C,-C)", "(-C,-2C)", "(-C,0)"]
_EXCLUDED = {"(C,2C)", "(-C,-2C)", "(C,0)", "(-C,0)"}


def _tuple_label(x: int, y: int, C: int) -> str:
    def t(v):
        if v == 0:
            return "0"
        for mult, name in ((1, "C"), (-1, "-C"), (2, "2C"), (-2, "-2C")):
            if v == mult * C:
                return name
        return None

    a, b = t(x), t(y)
    label = f"({a},{b})" if a is not None and b is not None else None
    return label if label in _TUPLES else "other"


def _proof_table(domain: GF, f: PAryFunction, sets, G: AbelianGroup, s) -> dict:
    """Decompose chi_a(D_1) = x_a + y_a z and check the proof's identities."""
    n = domain.n
    chi = [G.character_sums(D) for D in sets]
    x_a, y_a = chi[1][:, 0], chi[1][:, 1]
    spectrum = walsh_fast(f).values
    neg = domain.neg(domain.all)
    nz = np.arange(1, domain.order)
    conj_ok = bool(np.array_equal(chi[2][nz], cyc.conj(chi[1][nz])))
    d0_ok = bool(np.all(chi[0][nz, 0] == y_a[nz] - 2 * x_a[nz]) and np.all(chi[0][nz, 1] == 0))
    w_neg = spectrum[neg]  # W(-a)
    w_pos = spectrum
    wneg_ok = bool(np.all(w_neg[nz, 0] == -3 * x_a[nz]) and np.all(w_neg[nz, 1] == 0))
    wpos_ok = bool(np.all(w_pos[nz, 0] == 3 * (y_a[nz] - x_a[nz])) and np.all(w_pos[nz, 1] == 0))
    prod_sum = cyc.to_cycint(cyc.ring_mul(w_pos, w_neg).sum(axis=0))
    C = _half_power(3, n + s - 2) if s is not None else None
    census: dict[str, int] = {}
    if C is not None:
        for a in nz:
            lab = _tuple_label(int(x_a[a]), int(y_a[a]), C)
            census[lab] = census.get(lab, 0) + 1
    excluded_absent = C is not None and not any(census.get(t, 0) for t in _EXCLUDED)
    return {
        "C": C,
        "chi_D2_is_conj_chi_D1": conj_ok,
        "chi_D0_equals_y_minus_2x": d0_ok,
        "walsh_minus_a_equals_minus_3x": wneg_ok,
        "walsh_a_equals_3_y_minus_x": wpos_ok,
        "sum_walsh_a_times_walsh_minus_a": prod_sum.to_json(),
        "tuple_census": dict(sorted(census.items())),
        "excluded_tuples_absent": excluded_absent,
    }


# ---------------------------------------------------------------------------
# converse: a PGDS partition gives a plateaued function

@dataclass
class ConverseResult:
    s: Optional[int]
    hypotheses: dict
    function: Optional[PAryFunction] = None
    diagnosis: str = ""
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "hypotheses": self.hypotheses,
            "constructed": self.function is not None,
            "diagnosis": self.diagnosis,
            "witness": self.witness,
        }


def converse_partition_check(domain: GF, D0, D1, D2, lam: int) -> ConverseResult:
    """Test the converse hypotheses on a partition; build f on success."""
    if domain.p != 3:
        raise PreconditionError("the converse construction is stated for p = 3")
    n, q = domain.n, domain.order
    parts = [_members(D) for D in (D0, D1, D2)]
    cover = np.concatenate(parts)
    if len(cover) != q or len(np.unique(cover)) != q or cover.min() < 0 or cover.max() >= q:
        raise PreconditionError("D0, D1, D2 do not partition the field")
    e = 0
    val = int(lam)
    while val > 1 and val % 3 == 0:
        val //= 3
        e += 1
    if val != 1 or lam < 1:
        raise PreconditionError(f"lambda={lam} is not a power of 3")
    s = 2 * e - n + 1
    hyp: dict = {"lambda": int(lam), "s": s, "s_in_range": 0 <= s <= n}
    result = ConverseResult(s=s, hypotheses=hyp)
    if not hyp["s_in_range"]:
        result.diagnosis = f"lambda gives s={s} outside [0, n]"
        return result

    G = AbelianGroup.of_field(domain)
    pg = []
    for D in parts:
        try:
            pg.append(verify_pgds_character(D, G).is_pgds)
        except PreconditionError:
            pg.append(False)
    hyp["each_pgds"] = pg

    chi = [G.character_sums(D) for D in parts]
    allowed = [np.zeros(2, dtype=np.int64)]
    for sign in (1, -1):
        for j in range(3):
            allowed.append(sign * lam * cyc.reduce(np.eye(3, dtype=np.int64)[j]))
    allowed = np.array(allowed)
    membership_witness = None
    for i, c in enumerate(chi):
        ok = np.any(np.all(c[1:, None, :] == allowed[None, :, :], axis=-1), axis=1)
        if not ok.all():
            membership_witness = {"set": i, "a": int(np.flatnonzero(~ok)[0]) + 1}
            break
    hyp["membership"] = membership_witness is None

    sizes = sorted(len(D) for D in parts)
    half = _half_power(3, n + s - 2)
    base = 3 ** (n - 1)
    case = None
    if sizes[0] == sizes[2]:
        case = "equal"
    elif half is not None and sizes == sorted([base - half, base - half, base + 2 * half]):
        case = "two_small"
    elif half is not None and sizes == sorted([base + half, base + half, base - 2 * half]):
        case = "two_large"
    hyp["cardinality_case"] = case
    # diagnostic only: the size condition rewritten as |W(0)|^2 in {0, 3 lambda^2}
    w0 = cyc.counts_to_reduced(np.repeat(np.arange(3), [len(D) for D in parts]), 3)
    hyp["zero_norm_condition"] = int(cyc.rational_part(cyc.norm_sq(w0))[0]) in (0, 3 * lam * lam)

    # <z_a, e> = sum_i chi_a(D_i) conj(z^i)
    inner = sum(cyc.ring_mul(chi[i], cyc.reduce(np.roll(np.eye(3, dtype=np.int64)[0], -i)))
                for i in range(3))
    norms = cyc.norm_sq(inner[1:])
    vals, rat = cyc.rational_part(norms)
    ok_inner = rat & ((vals == 0) | (vals == 3 * lam * lam))
    hyp["inner_product"] = bool(ok_inner.all())

    failed = [name for name, good in (
        ("each_pgds", all(pg)),
        ("membership", membership_witness is None),
        ("cardinality_case", case is not None),
        ("inner_product", hyp["inner_product"]),
    ) if not good]
    if failed:
        result.diagnosis = "hypotheses fail: " + ", ".join(failed)
        if membership_witness is not None:
            result.witness = membership_witness
        elif not hyp["inner_product"]:
            result.witness = {"a": int(np.flatnonzero(~ok_inner)[0]) + 1}
        return result

    f = from_level_sets(domain, parts)
    cls = classify(walsh_fast(f))
    hyp["constructed_class"] = cls.to_json()
    if cls.kind == NOT_PLATEAUED or cls.s != s:
        result.diagnosis = f"constructed function classifies as {cls.kind} s={cls.s}, expected s={s}"
        return result
    result.function = f
    result.diagnosis = "ok"
    return result


def graph_equivalence(F, jobs: int = 1) -> dict:
    """Walsh classification versus the graph PGDS verifiers for one F."""
    if isinstance(F, PAryFunction):
        F = F.as_vectorial()
    vc = classify_vectorial(F, jobs=jobs)
    G = graph(F)
    dv = verify_pgds_delta(G.members, G.group)
    cv = verify_pgds_character(G.members, G.group)
    expected = None
    if vc.is_s_plateaued:
        try:
            expected = expected_graph_params(F.p, F.n, F.m, vc.s)
        except ValueError:
            expected = None
    agree = _verdicts_agree(dv, cv) and (
        dv.is_pgds == vc.is_s_plateaued and (not vc.is_s_plateaued or dv.params == expected)
    )
    return {
        "vectorial_class": vc,
        "delta": dv,
        "character": cv,
        "expected_params": expected,
        "agree": agree,
    }
