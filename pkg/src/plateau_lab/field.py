"""Finite fields F_{p^n} in a polynomial basis.

Elements are identified with integers in ``[0, p^n)``: the coefficient tuple
``(c_0, ..., c_{n-1})`` of ``c_0 + c_1 x + ... + c_{n-1} x^{n-1}`` maps to
``sum(c_i * p**i)``.  Index 0 is zero and index 1 is one.

Bulk arithmetic works on numpy index arrays through precomputed log/exp and
coordinate tables, so that every downstream table is a gather.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

__all__ = [
    "FieldSpec",
    "GF",
    "FieldElement",
    "canonical_modulus",
    "is_irreducible",
    "field",
    "find_primitive",
    "element_powers",
    "prime_factors",
]


# ---------------------------------------------------------------------------
# polynomials over Z_p, little-endian coefficient lists

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    """Remainder of a modulo m (m need not be monic)."""
    a = _trim(x % p for x in a)
    m = _trim(m)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a = _trim(a)
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(c % p for c in out)


def _poly_mulmod(a, b, m, p):
    return _poly_mod(_poly_mul(a, b, p), m, p)


def _poly_powmod(a, e, m, p):
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def prime_factors(k: int) -> list[int]:
    """Distinct prime factors of k, ascending (trial division)."""
    out = []
    d = 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def _is_prime(k: int) -> bool:
    return k >= 2 and prime_factors(k) == [k]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial given as (c_0, ..., c_n)."""
    f = _trim(c % p for c in modulus)
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    # x^(p^n) == x mod f
    if _poly_powmod(x, p**n, f, p) != _poly_mod(x, f, p):
        return False
    for r in prime_factors(n):
        h = _poly_powmod(x, p ** (n // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_poly_gcd(f, _trim(h), p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over Z_p.

    The ordering is on ``(c_{n-1}, ..., c_0)``; the result is returned
    little-endian as ``(c_0, ..., c_{n-1}, 1)``.
    """
    if not _is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    for high_first in itertools.product(range(p), repeat=n):
        cand = tuple(reversed(high_first)) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.n < 1:
            raise ValueError("extension degree must be >= 1")
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.n + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.n}: {self.modulus}")
        if not is_irreducible(mod, self.p):
            raise ValueError(f"modulus {list(mod)} is reducible over Z_{self.p}")

    @classmethod
    def canonical(cls, p: int, n: int) -> "FieldSpec":
        return cls(p, n, canonical_modulus(p, n))

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def is_canonical(self) -> bool:
        return self.modulus == canonical_modulus(self.p, self.n)

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def modulus_str(self) -> str:
        terms = []
        for i in range(self.n, -1, -1):
            c = self.modulus[i]
            if c == 0:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i > 0 else (f"{c}" if i == 0 else f"{c}{mono}"))
        return " + ".join(terms)


class GF:
    """The field F_{p^n} with index-based vectorized arithmetic.

    Arithmetic methods accept ints or integer numpy arrays of element
    indices and return numpy values of the same shape.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.n = spec.n
        self.order = spec.order
        p, n = self.p, self.n
        self.weights = p ** np.arange(n, dtype=np.int64)
        digits = np.arange(self.order, dtype=np.int64)[:, None] // self.weights % p
        digits.setflags(write=False)
        self.coords = digits

    def __repr__(self):
        return f"GF({self.p}^{self.n}, modulus={list(self.spec.modulus)})"

    # -- index <-> coefficients ------------------------------------------
    def index_of(self, coeffs) -> np.ndarray:
        """Index of coefficient vectors (last axis = coordinate)."""
        return (np.asarray(coeffs, dtype=np.int64) % self.p) @ self.weights

    def coeffs_of(self, i: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.coords[int(i)])

    def element(self, i: int) -> "FieldElement":
        i = int(i)
        if not 0 <= i < self.order:
            raise IndexError(f"element index {i} outside [0, {self.order})")
        return FieldElement(self, i)

    def __iter__(self):
        return (FieldElement(self, i) for i in range(self.order))

    # -- scalar polynomial arithmetic (reference path) -------------------
    def _poly(self, i: int) -> list[int]:
        return _trim(self.coeffs_of(i))

    def _from_poly(self, a) -> int:
        a = list(a) + [0] * (self.n - len(a))
        return int(sum(c * self.p**k for k, c in enumerate(a)))

    def poly_mul(self, a: int, b: int) -> int:
        """Product by explicit polynomial multiplication and reduction."""
        return self._from_poly(
            _poly_mulmod(self._poly(a), self._poly(b), list(self.spec.modulus), self.p)
        )

    def poly_pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("poly_pow takes a non-negative exponent")
        return self._from_poly(
            _poly_powmod(self._poly(a), e, list(self.spec.modulus), self.p)
        )

    # -- tables ------------------------------------------------------------
    @cached_property
    def primitive(self) -> int:
        return _smallest_primitive(self)

    @cached_property
    def _exp_log(self):
        q, p, n = self.order, self.p, self.n
        g = self.primitive
        # columns: g * x^j
        mat = np.array(
            [self.coeffs_of(self.poly_mul(g, self._from_poly([0] * j + [1]))) for j in range(n)],
            dtype=np.int64,
        ).T
        times_g = ((self.coords @ mat.T) % p) @ self.weights
        exp = np.empty(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = 1
        tg = times_g.tolist()
        for t in range(q - 1):
            exp[t] = cur
            log[cur] = t
            cur = tg[cur]
        if cur != 1 or (q > 2 and np.any(log[1:] < 0)):
            raise AssertionError("primitive element does not generate the multiplicative group")
        exp.setflags(write=False)
        log.setflags(write=False)
        return exp, log

    @property
    def exp(self) -> np.ndarray:
        return self._exp_log[0]

    @property
    def log(self) -> np.ndarray:
        """Discrete log base ``primitive``; -1 at zero."""
        return self._exp_log[1]

    @cached_property
    def trace_basis(self) -> np.ndarray:
        """Tr(x^i) for the basis monomials x^0..x^{n-1}."""
        out = []
        for i in range(self.n):
            mono = self._from_poly([0] * i + [1])
            out.append(self.scalar_trace(mono))
        return np.array(out, dtype=np.int64)

    @cached_property
    def trace_table(self) -> np.ndarray:
        t = (self.coords @ self.trace_basis) % self.p
        t.setflags(write=False)
        return t

    @cached_property
    def bilinear(self) -> np.ndarray:
        """B[i, j] = Tr(x^i * x^j); Tr(mu * x) = coords(mu) @ B @ coords(x)."""
        n = self.n
        if n == 1:
            return np.array([[1]], dtype=np.int64)
        x = self._from_poly([0, 1])
        tr = [self.scalar_trace(self.poly_pow(x, k)) for k in range(2 * n - 1)]
        return np.array([[tr[i + j] for j in range(n)] for i in range(n)], dtype=np.int64)

    @cached_property
    def dual(self) -> np.ndarray:
        """Permutation mu -> index of B @ coords(mu)."""
        d = ((self.coords @ self.bilinear) % self.p) @ self.weights
        d.setflags(write=False)
        return d

    def scalar_trace(self, a: int) -> int:
        """Tr(a) = sum_i a^(p^i) evaluated directly."""
        total = 0
        x = int(a)
        for _ in range(self.n):
            total = self.add(total, x)
            x = self.poly_pow(x, self.p)
        # the sum lies in the prime field: index equals its value
        if total >= self.p:
            raise AssertionError("trace left the prime field")
        return int(total)

    # -- vectorized arithmetic --------------------------------------------
    def add(self, a, b):
        return self.index_of(self.coords[a] + self.coords[b])

    def sub(self, a, b):
        return self.index_of(self.coords[a] - self.coords[b])

    def neg(self, a):
        return self.index_of(-self.coords[a])

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        res = self.exp[(la + lb) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, res)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.exp[(-self.log[a]) % (self.order - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e < 0 and np.any(a == 0):
            raise ZeroDivisionError("negative power of zero")
        res = self.exp[(self.log[a] * (e % (self.order - 1))) % (self.order - 1)]
        zero_val = 1 if e == 0 else 0
        return np.where(a == 0, zero_val, res)

    def trace(self, a):
        return self.trace_table[a]

    def scalar(self, c):
        """Index of the prime-field constant c (identical to c mod p)."""
        return np.asarray(c, dtype=np.int64) % self.p

    @cached_property
    def all(self) -> np.ndarray:
        a = np.arange(self.order, dtype=np.int64)
        a.setflags(write=False)
        return a

    @cached_property
    def add_table(self) -> np.ndarray:
        """Full addition table; intended for orders up to a few thousand."""
        t = self.add(self.all[:, None], self.all[None, :])
        t.setflags(write=False)
        return t


def _smallest_primitive(F: GF) -> int:
    q = F.order
    factors = prime_factors(q - 1)
    # F_2 has the single unit 1, which is then primitive
    for g in range(1, q):
        if all(F.poly_pow(g, (q - 1) // r) != 1 for r in factors):
            return g
    raise AssertionError("no primitive element found")


@lru_cache(maxsize=64)
def _field_for(spec: FieldSpec) -> GF:
    return GF(spec)


def field(p: int | FieldSpec, n: int | None = None, modulus: Sequence[int] | None = None) -> GF:
    """Shared field instance for (p, n[, modulus]) or a FieldSpec."""
    if isinstance(p, FieldSpec):
        return _field_for(p)
    if n is None:
        raise TypeError("field(p, n) needs a degree")
    spec = FieldSpec.canonical(p, n) if modulus is None else FieldSpec(p, n, tuple(modulus))
    return _field_for(spec)


def find_primitive(spec: FieldSpec | GF) -> "FieldElement":
    F = spec if isinstance(spec, GF) else field(spec)
    return F.element(F.primitive)


def element_powers(sigma: "FieldElement") -> list["FieldElement"]:
    """sigma^0, ..., sigma^(q-2); sigma must be primitive."""
    F = sigma.field
    if sigma.multiplicative_order() != F.order - 1:
        raise ValueError(f"element {sigma.index} is not primitive in {F}")
    out = []
    cur = 1
    for _ in range(F.order - 1):
        out.append(F.element(cur))
        cur = F.poly_mul(cur, sigma.index)
    return out


@dataclass(frozen=True)
class FieldElement:
    field: GF
    index: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs_of(self.index)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other.index
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _wrap(self, i) -> "FieldElement":
        return FieldElement(self.field, int(i))

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.index, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.index, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.index))

    def __neg__(self):
        return self._wrap(self.field.neg(self.index))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.poly_mul(self.index, o))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.index == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self._wrap(o).inverse()

    def __pow__(self, e: int):
        e = int(e)
        q = self.field.order
        if self.index == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return self._wrap(1 if e == 0 else 0)
        return self._wrap(self.field.poly_pow(self.index, e % (q - 1)))

    def trace(self) -> int:
        return self.field.scalar_trace(self.index)

    def multiplicative_order(self) -> int:
        if self.index == 0:
            raise ValueError("zero has no multiplicative order")
        q = self.field.order
        order = q - 1
        for r in prime_factors(q - 1):
            while order % r == 0 and self.field.poly_pow(self.index, order // r) == 1:
                order //= r
        return order

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"FieldElement({self.index}, coeffs={list(self.coeffs)})"
