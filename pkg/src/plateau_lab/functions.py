"""p-ary and vectorial functions as dense value tables.

A table is indexed by element index (see :mod:`plateau_lab.field`).  Values
of a p-ary function are residues in ``[0, p)``; values of a vectorial
function are element indices of the codomain field.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .field import GF, field
from .groups import AbelianGroup


def _frozen(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


class PAryFunction:
    """f: F_{p^n} -> F_p."""

    def __init__(self, domain: GF, values):
        values = np.asarray(values)
        if values.shape != (domain.order,):
            raise ValueError(
                f"table must have exactly {domain.order} entries, got shape {values.shape}"
            )
        if values.size and (values.min() < 0 or values.max() >= domain.p):
            raise ValueError(f"entries must lie in [0, {domain.p})")
        self.domain = domain
        self.values = _frozen(values)

    @property
    def spec(self):
        return self.domain.spec

    @property
    def p(self) -> int:
        return self.domain.p

    @property
    def n(self) -> int:
        return self.domain.n

    def __call__(self, x) -> int:
        return int(self.values[int(x)])

    def __len__(self):
        return self.domain.order

    def __eq__(self, other):
        return (
            isinstance(other, PAryFunction)
            and self.domain.spec == other.domain.spec
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.domain.spec, self.values.tobytes()))

    def __add__(self, other: "PAryFunction") -> "PAryFunction":
        return PAryFunction(self.domain, (self.values + other.values) % self.p)

    def __sub__(self, other: "PAryFunction") -> "PAryFunction":
        return PAryFunction(self.domain, (self.values - other.values) % self.p)

    def scale(self, c: int) -> "PAryFunction":
        return PAryFunction(self.domain, (c * self.values) % self.p)

    def __repr__(self):
        head = self.values[:8].tolist()
        return f"PAryFunction({self.domain!r}, {head}{'...' if len(self) > 8 else ''})"

    def as_vectorial(self) -> "VectorialFunction":
        return VectorialFunction(self.domain, field(self.p, 1), self.values)


class VectorialFunction:
    """F: F_{p^n} -> F_{p^m}."""

    def __init__(self, domain: GF, codomain: GF, values):
        if domain.p != codomain.p:
            raise ValueError("domain and codomain must share the characteristic")
        values = np.asarray(values)
        if values.shape != (domain.order,):
            raise ValueError(
                f"table must have exactly {domain.order} entries, got shape {values.shape}"
            )
        if values.size and (values.min() < 0 or values.max() >= codomain.order):
            raise ValueError(f"entries must lie in [0, {codomain.order})")
        self.domain = domain
        self.codomain = codomain
        self.values = _frozen(values)

    @property
    def p(self) -> int:
        return self.domain.p

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def m(self) -> int:
        return self.codomain.n

    def __call__(self, x) -> int:
        return int(self.values[int(x)])

    def __eq__(self, other):
        return (
            isinstance(other, VectorialFunction)
            and self.domain.spec == other.domain.spec
            and self.codomain.spec == other.codomain.spec
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.domain.spec, self.codomain.spec, self.values.tobytes()))

    def __repr__(self):
        return f"VectorialFunction({self.domain!r} -> {self.codomain!r})"


class GraphSet:
    """{(x, F(x))} inside F_{p^n} x F_{p^m}, pair index x + p^n * y."""

    def __init__(self, group: AbelianGroup, members):
        self.group = group
        self.members = _frozen(np.sort(np.asarray(members, dtype=np.int64)))
        qn = group.factors[0].order
        xs = self.members % qn
        if len(self.members) != qn or len(np.unique(xs)) != qn:
            raise ValueError("a graph has exactly one member per domain element")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members.tolist())


def _as_vectorial(F) -> VectorialFunction:
    return F.as_vectorial() if isinstance(F, PAryFunction) else F


# ---------------------------------------------------------------------------
# constructions

def from_callable(domain: GF, fn: Callable[[int], int]) -> PAryFunction:
    return PAryFunction(domain, [fn(x) % domain.p for x in range(domain.order)])


def power_map(domain: GF, d: int) -> VectorialFunction:
    """x -> x^d on F_{p^n}; 0^0 is taken as 1."""
    if d < 0:
        raise ValueError("exponent must be non-negative")
    return VectorialFunction(domain, domain, domain.pow(domain.all, d))


def trace_power(domain: GF, d: int) -> PAryFunction:
    """x -> Tr_n(x^d)."""
    if d < 0:
        raise ValueError("exponent must be non-negative")
    return PAryFunction(domain, domain.trace(domain.pow(domain.all, d)))


def trace_polynomial(domain: GF, terms: Iterable[tuple[int, int]]) -> PAryFunction:
    """x -> Tr_n(sum a_i x^{d_i}) for (a_i, d_i) pairs (a_i an element index)."""
    acc = np.zeros(domain.order, dtype=np.int64)
    for a, d in terms:
        acc = domain.add(acc, domain.mul(a, domain.pow(domain.all, d)))
    return PAryFunction(domain, domain.trace(acc))


def linear(domain: GF, c: int) -> PAryFunction:
    """x -> Tr_n(c x)."""
    return PAryFunction(domain, domain.trace(domain.mul(c, domain.all)))


def constant(domain: GF, value: int = 0) -> PAryFunction:
    return PAryFunction(domain, np.full(domain.order, value % domain.p))


def random_function(domain: GF, rng: np.random.Generator) -> PAryFunction:
    return PAryFunction(domain, rng.integers(0, domain.p, size=domain.order))


def component(F: VectorialFunction, b: int) -> PAryFunction:
    """F_b(x) = Tr_m(b F(x)) for nonzero b."""
    b = int(b)
    if b == 0:
        raise ValueError("component functions need a nonzero b")
    cod = F.codomain
    return PAryFunction(F.domain, cod.trace(cod.mul(b, F.values)))


def component_tables(F: VectorialFunction) -> np.ndarray:
    """All nonzero components stacked: row b-1 is F_b."""
    cod = F.codomain
    bs = np.arange(1, cod.order, dtype=np.int64)
    return cod.trace(cod.mul(bs[:, None], F.values[None, :]))


# ---------------------------------------------------------------------------
# derivatives

def derivative(f: PAryFunction, a: int) -> PAryFunction:
    """D_a f(x) = f(x + a) - f(x)."""
    D = f.domain
    shifted = f.values[D.add(D.all, int(a))]
    return PAryFunction(D, (shifted - f.values) % f.p)


def second_derivative(f: PAryFunction, a: int, b: int) -> PAryFunction:
    """D_a D_b f(x) = f(x+a+b) + f(x) - f(x+a) - f(x+b)."""
    D = f.domain
    x = D.all
    v = f.values
    val = v[D.add(D.add(x, int(a)), int(b))] + v - v[D.add(x, int(a))] - v[D.add(x, int(b))]
    return PAryFunction(D, val % f.p)


def vectorial_derivative(F: VectorialFunction, t: int) -> VectorialFunction:
    """D_t F(x) = F(x + t) - F(x) in the codomain."""
    D = F.domain
    shifted = F.values[D.add(D.all, int(t))]
    return VectorialFunction(D, F.codomain, F.codomain.sub(shifted, F.values))


def is_balanced(values: np.ndarray, p: int) -> bool:
    counts = np.bincount(np.asarray(values) % p, minlength=p)
    return bool(np.all(counts == counts[0]))


# ---------------------------------------------------------------------------
# sets

def graph(F) -> GraphSet:
    F = _as_vectorial(F)
    group = AbelianGroup.product(F.domain, F.codomain)
    members = F.domain.all + F.domain.order * F.values
    return GraphSet(group, members)


def level_sets(f: PAryFunction) -> list[np.ndarray]:
    """[f^{-1}(0), ..., f^{-1}(p-1)] as sorted index arrays."""
    return [np.flatnonzero(f.values == i) for i in range(f.p)]


def from_level_sets(domain: GF, sets: Sequence[Iterable[int]]) -> PAryFunction:
    values = np.full(domain.order, -1, dtype=np.int64)
    for i, s in enumerate(sets):
        idx = np.asarray(list(s), dtype=np.int64)
        if np.any(values[idx] >= 0):
            raise ValueError("level sets overlap")
        values[idx] = i
    if np.any(values < 0):
        raise ValueError("level sets do not cover the domain")
    return PAryFunction(domain, values)


def direct_sum(f: PAryFunction, g: PAryFunction) -> PAryFunction:
    """h on F_{p^(n+m)} with h(x) = f(w) + g(u), x = (u | w) by coordinates.

    The first m coordinates of x (the subgroup H) feed g and the last n
    feed f, so ``h[u + p^m * w] = f[w] + g[u]``.
    """
    if f.p != g.p:
        raise ValueError("direct sum needs a common characteristic")
    p = f.p
    big = field(p, f.n + g.n)
    qm = g.domain.order
    x = big.all
    return PAryFunction(big, (f.values[x // qm] + g.values[x % qm]) % p)


def subfield_embedding(big: GF, small: GF) -> np.ndarray:
    """Index table of an embedding F_{p^m} -> F_{p^n} (m | n).

    The generator X of the small field goes to the smallest-index root of
    its modulus in the big field, which makes the choice reproducible.
    """
    if big.p != small.p or big.n % small.n:
        raise ValueError(f"F_{small.p}^{small.n} is not a subfield of F_{big.p}^{big.n}")
    mod = small.spec.modulus
    x = big.all
    acc = np.zeros(big.order, dtype=np.int64)
    for c in reversed(mod):  # Horner over all candidates at once
        acc = big.add(big.mul(acc, x), big.scalar(c))
    root = int(np.flatnonzero(acc == 0)[0])
    powers = [1]
    for _ in range(small.n - 1):
        powers.append(int(big.mul(powers[-1], root)))
    table = np.zeros(small.order, dtype=np.int64)
    for k, pk in enumerate(powers):
        table = big.add(table, big.mul(big.scalar(small.coords[:, k]), pk))
    return table


def relative_trace(big: GF, small: GF, values) -> np.ndarray:
    """Tr^n_m(y) = sum_i y^(p^(m i)) as small-field indices."""
    emb = subfield_embedding(big, small)
    back = np.full(big.order, -1, dtype=np.int64)
    back[emb] = np.arange(small.order, dtype=np.int64)
    y = np.asarray(values, dtype=np.int64)
    acc = np.zeros_like(y)
    cur = y
    for _ in range(big.n // small.n):
        acc = big.add(acc, cur)
        cur = big.pow(cur, small.order)
    out = back[acc]
    if np.any(out < 0):
        raise ArithmeticError("relative trace left the subfield")
    return out


def relative_trace_power(domain: GF, codomain: GF, d: int) -> VectorialFunction:
    """x -> Tr^n_m(x^d) as a map F_{p^n} -> F_{p^m}."""
    if codomain.spec == domain.spec:
        return power_map(domain, d)
    values = relative_trace(domain, codomain, domain.pow(domain.all, d))
    return VectorialFunction(domain, codomain, values)
