"""Exact arithmetic in Z[zeta_p].

Scalars are :class:`CycInt` values in the power basis ``1, z, ..., z^(p-2)``.
Bulk data (spectra, character sums, matrices) is kept in numpy arrays whose
last axis holds the ``p - 1`` reduced coefficients; the helpers below work on
such arrays.  Intermediate products use the group-ring form ``Z[C_p]`` (last
axis of length ``p``) and are reduced with ``z^(p-1) = -(1 + ... + z^(p-2))``.
"""
from __future__ import annotations

import cmath
from typing import Iterable

import numpy as np

INT64_MAX = 2**63 - 1


def _check(c: int) -> int:
    if c > INT64_MAX or c < -INT64_MAX:
        raise OverflowError(
            f"cyclotomic coefficient {c} exceeds 64-bit range; reduce the field size"
        )
    return c


class CycInt:
    """An element sum(c_i z^i, i < p-1) of Z[zeta_p]."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[int]):
        coeffs = tuple(_check(int(c)) for c in coeffs)
        if len(coeffs) != p - 1:
            raise ValueError(f"need {p - 1} coefficients for p={p}, got {len(coeffs)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CycInt is immutable")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_int(cls, p: int, value: int) -> "CycInt":
        return cls(p, (value,) + (0,) * (p - 2))

    @classmethod
    def root_power(cls, p: int, e: int) -> "CycInt":
        """zeta_p ** e."""
        return cls.from_group_ring(p, _unit_vector(p, e % p))

    @classmethod
    def from_group_ring(cls, p: int, counts) -> "CycInt":
        """sum(counts[j] * z^j for j < p)."""
        counts = [int(c) for c in counts]
        if len(counts) != p:
            raise ValueError(f"group-ring vector must have length {p}")
        top = counts[-1]
        return cls(p, (c - top for c in counts[:-1]))

    @classmethod
    def from_array(cls, p: int, arr) -> "CycInt":
        return cls(p, (int(c) for c in arr))

    # -- views -------------------------------------------------------------
    def group_ring(self) -> list[int]:
        return list(self.coeffs) + [0]

    def to_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.p)
        return sum(c * z**i for i, c in enumerate(self.coeffs))

    def as_rational_integer(self) -> int | None:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # -- ring operations --------------------------------------------------
    def _other(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise ValueError(f"mixing Z[zeta_{self.p}] and Z[zeta_{other.p}]")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.from_int(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return CycInt(self.p, (a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, (-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return CycInt(self.p, (a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        acc[(i + j) % p] += a * b
        for c in acc:
            _check(c)
        return CycInt.from_group_ring(p, acc)

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        """Complex conjugate: z -> z^(p-1)."""
        p = self.p
        acc = [0] * p
        for i, c in enumerate(self.coeffs):
            acc[(-i) % p] += c
        return CycInt.from_group_ring(p, acc)

    def norm_sq(self) -> "CycInt":
        return self * self.conj()

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = CycInt.from_int(self.p, int(other))
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"CycInt(p={self.p}, {list(self.coeffs)})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        s = "".join(f" {sgn} {b}" for sgn, b in terms).strip()
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def root_power(p: int, e: int) -> CycInt:
    return CycInt.root_power(p, e)


def _unit_vector(p: int, j: int) -> list[int]:
    v = [0] * p
    v[j] = 1
    return v


# ---------------------------------------------------------------------------
# array helpers; reduced arrays have last axis p-1, group-ring arrays p

def reduce(group_ring: np.ndarray) -> np.ndarray:
    g = np.asarray(group_ring, dtype=np.int64)
    return g[..., :-1] - g[..., -1:]


def lift(reduced: np.ndarray) -> np.ndarray:
    r = np.asarray(reduced, dtype=np.int64)
    return np.concatenate([r, np.zeros(r.shape[:-1] + (1,), dtype=np.int64)], axis=-1)


def counts_to_reduced(exponents: np.ndarray, p: int, axis: int = -1) -> np.ndarray:
    """Reduce sum(z ** e) along `axis` of an exponent array."""
    e = np.moveaxis(np.asarray(exponents, dtype=np.int64) % p, axis, -1)
    lead = e.shape[:-1]
    flat = e.reshape(-1, e.shape[-1])
    rows = np.arange(flat.shape[0], dtype=np.int64)[:, None]
    counts = np.bincount((rows * p + flat).ravel(), minlength=flat.shape[0] * p)
    return reduce(counts.reshape(lead + (p,)))


# above this p the cyclic product goes through an FFT; rounding is exact
# while every coefficient stays far below 2^52
_FFT_MIN_P = 17
_FFT_EXACT_BOUND = 1 << 40


def ring_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product of reduced arrays (broadcasting)."""
    A, B = lift(a), lift(b)
    p = A.shape[-1]
    if p >= _FFT_MIN_P:
        bound = np.abs(A).sum(axis=-1).max(initial=0) * np.abs(B).max(initial=0)
        if bound < _FFT_EXACT_BOUND:
            prod = np.fft.irfft(np.fft.rfft(A, axis=-1) * np.fft.rfft(B, axis=-1), n=p, axis=-1)
            return reduce(np.rint(prod).astype(np.int64))
    out = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
    for i in range(p - 1):
        out += np.roll(B, i, axis=-1) * A[..., i : i + 1]
    return reduce(out)


def conj(a: np.ndarray) -> np.ndarray:
    A = lift(a)
    idx = (-np.arange(A.shape[-1])) % A.shape[-1]
    return reduce(A[..., idx])


def norm_sq(a: np.ndarray) -> np.ndarray:
    return ring_mul(a, conj(a))


def rational_part(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(value, mask): mask marks entries that are rational integers."""
    a = np.asarray(a, dtype=np.int64)
    return a[..., 0], ~np.any(a[..., 1:] != 0, axis=-1)


def to_complex(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    p = a.shape[-1] + 1
    z = np.exp(2j * np.pi * np.arange(p - 1) / p)
    return a @ z


def scalar(p: int, value: int) -> np.ndarray:
    v = np.zeros(p - 1, dtype=np.int64)
    v[0] = value
    return v


def to_cycint(a: np.ndarray) -> CycInt:
    a = np.asarray(a)
    return CycInt.from_array(a.shape[-1] + 1, a)
