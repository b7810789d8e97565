"""Matrix characterization of plateaued functions and its consequences.

M has entries ``z^f(x+y)``.  f is s-plateaued exactly when
``M M* M = p^(n+s) M``; the same information is carried by the
second-derivative sums and by the energy of the autocorrelation Delta_f.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import cyclotomic as cyc
from .cyclotomic import CycInt
from .functions import PAryFunction, direct_sum, graph
from .pgds import PgdsParams, PreconditionError, verify_pgds_delta
from .walsh import SpectrumClass, classify, delta_transform, walsh_fast

BUDGET_ENV = "PLATEAU_LAB_BUDGET"
DEFAULT_BUDGET = 243
DESIGN_POINT_LIMIT = 729

# float64 matmul is exact while every partial sum stays below 2^53
_EXACT_LIMIT = 1 << 53


class BudgetError(ValueError):
    """Dense matrix dimension exceeds the configured budget."""


def matrix_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{BUDGET_ENV}={raw!r} is not an integer") from exc
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value


def _check_budget(dim: int):
    budget = matrix_budget()
    if dim > budget:
        raise BudgetError(f"matrix dimension {dim} exceeds budget {budget} (set {BUDGET_ENV})")


class CycMatrix:
    """Square matrix whose entries are p-th roots of unity z^E[x, y]."""

    def __init__(self, p: int, exponents: np.ndarray):
        e = np.asarray(exponents, dtype=np.int64) % p
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("exponent table must be square")
        self.p = p
        self.exponents = e
        self.exponents.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.exponents.shape[0]

    def entry(self, x: int, y: int) -> CycInt:
        return CycInt.root_power(self.p, int(self.exponents[x, y]))

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.exponents, self.exponents.T))

    def reduced(self) -> np.ndarray:
        """Entries as reduced coefficient arrays, shape (d, d, p-1)."""
        g = np.zeros(self.exponents.shape + (self.p,), dtype=np.int64)
        np.put_along_axis(g, self.exponents[..., None], 1, axis=-1)
        return cyc.reduce(g)

    def layers(self) -> np.ndarray:
        """0/1 indicator of each exponent value, shape (p, d, d)."""
        return (self.exponents[None, :, :] == np.arange(self.p)[:, None, None]).astype(np.float64)

    def kron(self, other: "CycMatrix") -> "CycMatrix":
        """Kronecker product, blocks ordered row-major by self."""
        if other.p != self.p:
            raise ValueError("characteristics differ")
        e = self.exponents[:, None, :, None] + other.exponents[None, :, None, :]
        d = self.dimension * other.dimension
        return CycMatrix(self.p, e.reshape(d, d))

    def __eq__(self, other):
        return (
            isinstance(other, CycMatrix)
            and self.p == other.p
            and np.array_equal(self.exponents, other.exponents)
        )

    def csv_rows(self) -> list[str]:
        red = self.reduced()
        return [
            ",".join(";".join(str(int(c)) for c in red[x, y]) for y in range(self.dimension))
            for x in range(self.dimension)
        ]


def build_m(f: PAryFunction) -> CycMatrix:
    D = f.domain
    _check_budget(D.order)
    return CycMatrix(D.p, f.values[D.add_table])


def _to_int(a: np.ndarray) -> np.ndarray:
    if np.abs(a).max(initial=0) >= _EXACT_LIMIT:
        raise OverflowError("matrix product left the exact float64 range")
    return np.rint(a).astype(np.int64)


def mmstar_m(M: CycMatrix) -> np.ndarray:
    """M M* M as reduced coefficients, shape (d, d, p-1)."""
    p, d = M.p, M.dimension
    if d**3 >= _EXACT_LIMIT:
        raise OverflowError("dimension too large for exact float64 products")
    L = M.layers()
    # (M M*)[x, z] = sum_y z^(E[x,y] - E[z,y])
    K = np.zeros((p, d, d))
    for i in range(p):
        for j in range(p):
            K[(i - j) % p] += L[i] @ L[j].T
    out = np.zeros((p, d, d))
    for k in range(p):
        for l in range(p):
            out[(k + l) % p] += K[k] @ L[l]
    g = np.moveaxis(_to_int(out), 0, -1)
    return cyc.reduce(g)


@dataclass(frozen=True)
class MmmVerdict:
    proportional: bool
    factor: Optional[CycInt]
    s: Optional[int]
    witness: Optional[tuple[int, int]]
    classify_s: Optional[int]

    @property
    def agrees(self) -> bool:
        return self.s == self.classify_s

    def to_json(self) -> dict:
        return {
            "proportional": self.proportional,
            "factor": self.factor.to_json() if self.factor is not None else None,
            "s": self.s,
            "witness": list(self.witness) if self.witness else None,
            "classify_s": self.classify_s,
            "agrees": self.agrees,
        }


def _power_exponent(value: Optional[int], p: int) -> Optional[int]:
    if value is None or value < 1:
        return None
    k = 0
    while value % p == 0:
        value //= p
        k += 1
    return k if value == 1 else None


def _identity_check(M: CycMatrix, n_total: int):
    """Test M M* M = lambda M; return (proportional, lambda, s, witness)."""
    R = mmstar_m(M)
    p = M.p
    # M[0,0] is a unit z^e, so lambda = R[0,0] z^-e
    lam = cyc.ring_mul(R[0, 0], cyc.reduce(np.roll(np.eye(p, dtype=np.int64)[0], -int(M.exponents[0, 0]))))
    expected = cyc.ring_mul(M.reduced(), lam)
    bad = np.argwhere(np.any(R != expected, axis=-1))
    factor = cyc.to_cycint(lam)
    if len(bad):
        return False, None, None, (int(bad[0][0]), int(bad[0][1]))
    k = _power_exponent(factor.as_rational_integer(), p)
    s = k - n_total if k is not None and n_total <= k <= 2 * n_total else None
    return True, factor, s, None


def verify_mmm(f: PAryFunction, cls: Optional[SpectrumClass] = None) -> MmmVerdict:
    M = build_m(f)
    prop, factor, s, witness = _identity_check(M, f.n)
    if cls is None:
        cls = classify(walsh_fast(f))
    return MmmVerdict(prop, factor, s, witness, cls.s)


# ---------------------------------------------------------------------------
# second-derivative sums

def second_derivative_sum(f: PAryFunction, u: int) -> CycInt:
    """sum_{a,b} z^(D_a D_b f(u))."""
    return cyc.to_cycint(_second_derivative_rows(f, np.array([int(u)]))[0])


def _second_derivative_rows(f: PAryFunction, us: np.ndarray) -> np.ndarray:
    D = f.domain
    S = D.add_table
    v = f.values
    out = np.empty((len(us), D.p - 1), dtype=np.int64)
    for i, u in enumerate(us):
        ua = S[u]  # u + a, indexed by a
        # f(u + a + b) - f(u + a) - f(u + b) + f(u)
        e = v[S[ua]] - v[ua][:, None] - v[ua][None, :] + v[u]
        out[i] = cyc.counts_to_reduced(e.ravel(), D.p)
    return out


def second_derivative_sums(f: PAryFunction, jobs: int = 1) -> np.ndarray:
    """Reduced second-derivative sum for every u, shape (q, p-1)."""
    q = f.domain.order
    us = np.arange(q, dtype=np.int64)
    if jobs > 1:
        chunks = np.array_split(us, jobs)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda c: _second_derivative_rows(f, c), chunks))
        return np.concatenate(parts)
    return _second_derivative_rows(f, us)


@dataclass(frozen=True)
class SumVerdict:
    constant: bool
    value: Optional[CycInt]
    s: Optional[int]
    witness: Optional[int]

    def to_json(self) -> dict:
        return {
            "constant": self.constant,
            "value": self.value.to_json() if self.value is not None else None,
            "s": self.s,
            "witness": self.witness,
        }


def verify_second_derivative_sum(f: PAryFunction, jobs: int = 1) -> SumVerdict:
    sums = second_derivative_sums(f, jobs)
    bad = np.flatnonzero(np.any(sums != sums[0], axis=1))
    if len(bad):
        return SumVerdict(False, None, None, int(bad[0]))
    value = cyc.to_cycint(sums[0])
    k = _power_exponent(value.as_rational_integer(), f.p)
    s = k - f.n if k is not None and f.n <= k <= 2 * f.n else None
    return SumVerdict(True, value, s, None)


def delta_energy(f: PAryFunction) -> CycInt:
    """sum_a |Delta_f(a)|^2 from the directly summed autocorrelation."""
    return cyc.to_cycint(cyc.norm_sq(delta_transform(f)).sum(axis=0))


def verify_delta_energy(f: PAryFunction) -> Optional[int]:
    """s with energy p^(2n+s), or None when the energy has no such form."""
    k = _power_exponent(delta_energy(f).as_rational_integer(), f.p)
    n = f.n
    if k is None or not 2 * n <= k <= 3 * n:
        return None
    return k - 2 * n


# ---------------------------------------------------------------------------
# Kronecker products and direct sums

@dataclass(frozen=True)
class KroneckerVerdict:
    holds: bool
    s1: Optional[int]
    s2: Optional[int]
    expected_factor: Optional[int]
    factor: Optional[CycInt]
    witness: Optional[tuple[int, int]]
    matches_direct_sum: bool
    diagnosis: str = ""

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "s1": self.s1,
            "s2": self.s2,
            "expected_factor": self.expected_factor,
            "factor": self.factor.to_json() if self.factor is not None else None,
            "witness": list(self.witness) if self.witness else None,
            "matches_direct_sum": self.matches_direct_sum,
            "diagnosis": self.diagnosis,
        }


def kronecker_verify(f: PAryFunction, g: PAryFunction) -> KroneckerVerdict:
    """P = M(f) (x) M(g) satisfies P P* P = p^(n+m+s1+s2) P."""
    if f.p != g.p:
        raise ValueError("Kronecker product needs a common characteristic")
    _check_budget(f.domain.order * g.domain.order)
    P = CycMatrix(f.p, f.values[f.domain.add_table]).kron(
        CycMatrix(g.p, g.values[g.domain.add_table])
    )
    # the Kronecker product is the matrix of the direct sum, index for index
    same = P == CycMatrix(f.p, direct_sum(f, g).values[_sum_table(f, g)])
    c1, c2 = classify(walsh_fast(f)), classify(walsh_fast(g))
    prop, factor, _, witness = _identity_check(P, f.n + g.n)
    if not (c1.is_plateaued and c2.is_plateaued):
        return KroneckerVerdict(
            False, c1.s, c2.s, None, factor, witness, same,
            "input not plateaued; identity " + ("holds" if prop else "fails"),
        )
    expected = f.p ** (f.n + g.n + c1.s + c2.s)
    holds = prop and factor == expected
    return KroneckerVerdict(holds, c1.s, c2.s, expected, factor, witness, same,
                            "" if holds else "identity fails")


def _sum_table(f: PAryFunction, g: PAryFunction) -> np.ndarray:
    from .field import field

    return field(f.p, f.n + g.n).add_table


@dataclass(frozen=True)
class DirectSumVerdict:
    s1: Optional[int]
    s2: Optional[int]
    s: Optional[int]
    holds: bool

    def to_json(self) -> dict:
        return {"s1": self.s1, "s2": self.s2, "s": self.s, "holds": self.holds}


def verify_direct_sum(f: PAryFunction, g: PAryFunction) -> DirectSumVerdict:
    h = direct_sum(f, g)
    s1, s2 = classify(walsh_fast(f)).s, classify(walsh_fast(g)).s
    s = classify(walsh_fast(h)).s
    ok = s1 is None or s2 is None or s == s1 + s2
    return DirectSumVerdict(s1, s2, s, ok)


# ---------------------------------------------------------------------------
# linear structures and partially bent functions

def _derivative_matrix(f: PAryFunction) -> np.ndarray:
    """[a, x] -> D_a f(x)."""
    v = f.values
    return (v[f.domain.add_table] - v[None, :]) % f.p


@dataclass(frozen=True)
class LinearStructureSpace:
    members: tuple[int, ...]
    constants: dict

    @property
    def size(self) -> int:
        return len(self.members)

    def dimension(self, p: int) -> int:
        return _power_exponent(self.size, p)

    def to_json(self) -> dict:
        return {
            "members": list(self.members),
            "constants": {str(a): c for a, c in self.constants.items()},
        }


def linear_structures(f: PAryFunction) -> LinearStructureSpace:
    D = f.domain
    der = _derivative_matrix(f)
    const = np.all(der == der[:, :1], axis=1)
    members = np.flatnonzero(const)
    consts = {int(a): int(der[a, 0]) for a in members}
    member_set = set(consts)
    for a in members:
        sums = D.add(int(a), members)
        if not all(int(b) in member_set for b in sums):
            raise ArithmeticError("linear structures are not closed under addition")
        for b, ab in zip(members, sums):
            if consts[int(ab)] != (consts[int(a)] + consts[int(b)]) % f.p:
                raise ArithmeticError("linear structure constants are not additive")
    return LinearStructureSpace(tuple(int(a) for a in members), consts)


@dataclass(frozen=True)
class PartiallyBentVerdict:
    partially_bent: bool
    dim: Optional[int]
    classify_s: Optional[int]
    witness: Optional[int]

    @property
    def consistent(self) -> bool:
        return not self.partially_bent or self.dim == self.classify_s

    def to_json(self) -> dict:
        return {
            "partially_bent": self.partially_bent,
            "dim_lambda": self.dim,
            "classify_s": self.classify_s,
            "witness": self.witness,
            "consistent": self.consistent,
        }


def is_partially_bent(f: PAryFunction) -> PartiallyBentVerdict:
    der = _derivative_matrix(f)
    q, p = f.domain.order, f.p
    counts = np.stack([np.count_nonzero(der == c, axis=1) for c in range(p)], axis=1)
    balanced = np.all(counts == q // p, axis=1)
    constant = np.any(counts == q, axis=1)
    bad = np.flatnonzero(~(balanced | constant))
    cls = classify(walsh_fast(f))
    if len(bad):
        return PartiallyBentVerdict(False, None, cls.s, int(bad[0]))
    dim = _power_exponent(int(np.count_nonzero(constant)), p)
    return PartiallyBentVerdict(True, dim, cls.s, None)


@dataclass(frozen=True)
class TaVerdict:
    holds_on_lambda: bool
    lambda_members: tuple[int, ...]
    outside_equalities: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "holds_on_lambda": self.holds_on_lambda,
            "lambda": list(self.lambda_members),
            "equal_outside_lambda": list(self.outside_equalities),
        }


def _t_a_members(f: PAryFunction, a: int) -> np.ndarray:
    """{(x + a, f(x) + f(a))} as sorted pair indices."""
    D = f.domain
    xs = D.add(D.all, a)
    ys = (f.values + f.values[a]) % f.p
    return np.sort(xs + D.order * ys)


def t_a_lemma_check(f: PAryFunction) -> TaVerdict:
    if f(0) != 0:
        raise PreconditionError("the T_a lemma needs f(0) = 0")
    lam = linear_structures(f)
    G = graph(f).members
    equal = [a for a in range(f.domain.order) if np.array_equal(_t_a_members(f, a), G)]
    on = all(a in equal for a in lam.members)
    outside = tuple(a for a in equal if a not in lam.constants)
    return TaVerdict(on, lam.members, outside)


@dataclass
class DesignVerdict:
    holds: bool
    multiplicity: Optional[int]
    lambda_size: int
    points: int
    blocks: int
    distinct_blocks: int
    graph_params: Optional[PgdsParams]
    coefficients: Optional[tuple[str, str]]
    corollary: dict = dc_field(default_factory=dict)
    diagnosis: str = ""
    block_list: list = dc_field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "multiplicity": self.multiplicity,
            "lambda_size": self.lambda_size,
            "points": self.points,
            "blocks": self.blocks,
            "distinct_blocks": self.distinct_blocks,
            "graph_params": self.graph_params.to_json() if self.graph_params else None,
            "coefficients": list(self.coefficients) if self.coefficients else None,
            "corollary": self.corollary,
            "diagnosis": self.diagnosis,
        }


def design_factorization_check(f: PAryFunction) -> DesignVerdict:
    """Development design of the graph: repeated blocks and N N^t N."""
    if f(0) != 0:
        raise PreconditionError("the factorization needs f(0) = 0")
    p, n, q = f.p, f.n, f.domain.order
    v = q * p
    if v > DESIGN_POINT_LIMIT:
        raise BudgetError(f"{v} points exceeds the design limit {DESIGN_POINT_LIMIT}")
    lam = linear_structures(f)
    if lam.size < p:
        raise PreconditionError("the factorization needs a linear structure of dimension >= 1")
    Gr = graph(f)
    group = Gr.group
    base = Gr.members
    blocks = np.sort(group.add(base[None, :], np.arange(v)[:, None]), axis=1)
    distinct, counts = np.unique(blocks, axis=0, return_counts=True)
    verdict = DesignVerdict(
        holds=False, multiplicity=None, lambda_size=lam.size, points=v, blocks=v,
        distinct_blocks=len(distinct), graph_params=None, coefficients=None,
        block_list=[row.tolist() for row in distinct],
    )
    if not np.all(counts == counts[0]):
        verdict.diagnosis = "block multiplicity is not constant"
        return verdict
    mult = int(counts[0])
    verdict.multiplicity = mult
    if mult != lam.size:
        verdict.diagnosis = f"multiplicity {mult} differs from |Lambda| = {lam.size}"
        return verdict
    gv = verify_pgds_delta(base, group)
    if not gv.is_pgds:
        verdict.diagnosis = "graph is not a PGDS"
        return verdict
    verdict.graph_params = gv.params
    alpha, beta = gv.params.alpha, gv.params.beta
    c_n = Fraction(beta - alpha, mult)
    c_j = Fraction(alpha, mult)
    verdict.coefficients = (str(c_n), str(c_j))
    N = np.zeros((v, len(distinct)), dtype=np.int64)
    N[distinct.ravel(), np.repeat(np.arange(len(distinct)), distinct.shape[1])] = 1
    lhs = N @ N.T @ N
    if c_n.denominator != 1 or c_j.denominator != 1:
        verdict.diagnosis = "identity coefficients are not integral"
        return verdict
    rhs = int(c_n) * N + int(c_j)
    verdict.holds = bool(np.array_equal(lhs, rhs))
    if not verdict.holds:
        verdict.diagnosis = "N N^t N identity fails"
    s = lam.dimension(p)
    replication = int(N.sum(axis=1)[0]) if np.all(N.sum(axis=1) == N.sum(axis=1)[0]) else None
    stated = {
        "v": p ** (n + 1),
        "b": p ** (n + 1 - s),
        "k": p**n,
        "r": p ** (n - s),
        "alpha": p ** (2 * n - 1 - s) - p ** (n - 1) if 2 * n - 1 - s >= 0 and n >= 1 else None,
        "beta": None,
    }
    if stated["alpha"] is not None:
        stated["beta"] = p**n + stated["alpha"]
    observed = {
        "v": v,
        "b": len(distinct),
        "k": int(distinct.shape[1]),
        "r": replication,
        "alpha": int(c_j),
        "beta": int(c_n) + int(c_j),
    }
    verdict.corollary = {"stated": stated, "observed": observed, "matches": stated == observed}
    return verdict
