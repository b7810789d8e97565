"""Additive groups F_{p^n}, F_{p^n} x F_{p^m} and bare Z_p^N.

All three are elementary abelian, so an element is a vector of base-p digits;
a pair (x, y) of the product group has index ``x + p^n * y``.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import transform
from .field import GF, field


class AbelianGroup:
    """Elementary abelian p-group with trace-labelled characters.

    For field factors the character with label ``a + p^n * b`` is
    ``(x, y) -> z^(Tr_n(a x) + Tr_m(b y))``; for a bare ``Z_p^N`` the label
    is the digit vector ``w`` of ``x -> z^<w, x>``.
    """

    def __init__(self, p: int, factors: tuple[GF, ...] = (), N: int | None = None):
        self.p = p
        self.factors = tuple(factors)
        if self.factors:
            if any(F.p != p for F in self.factors):
                raise ValueError("all factors must share the characteristic")
            N = sum(F.n for F in self.factors)
        if N is None or N < 1:
            raise ValueError("group needs at least one digit")
        self.N = N
        self.order = p**N
        self.weights = p ** np.arange(N, dtype=np.int64)

    @classmethod
    def of_field(cls, F: GF) -> "AbelianGroup":
        return cls(F.p, (F,))

    @classmethod
    def product(cls, F: GF, Fm: GF) -> "AbelianGroup":
        return cls(F.p, (F, Fm))

    @classmethod
    def elementary(cls, p: int, N: int) -> "AbelianGroup":
        return cls(p, (), N)

    @classmethod
    def from_order(cls, v: int) -> "AbelianGroup":
        from .field import prime_factors

        ps = prime_factors(v)
        if len(ps) != 1:
            raise ValueError(f"group order {v} is not a prime power")
        p = ps[0]
        N = 0
        while p ** (N + 1) <= v:
            N += 1
        return cls.elementary(p, N)

    def __eq__(self, other):
        return (
            isinstance(other, AbelianGroup)
            and self.p == other.p
            and self.N == other.N
            and tuple(F.spec for F in self.factors) == tuple(F.spec for F in other.factors)
        )

    def __hash__(self):
        return hash((self.p, self.N, tuple(F.spec for F in self.factors)))

    def __repr__(self):
        if not self.factors:
            return f"AbelianGroup(Z_{self.p}^{self.N})"
        inner = " x ".join(f"F_{F.p}^{F.n}" for F in self.factors)
        return f"AbelianGroup({inner})"

    def to_json(self) -> dict:
        if not self.factors:
            return {"p": self.p, "N": self.N, "order": self.order}
        return {
            "order": self.order,
            "factors": [F.spec.to_json() for F in self.factors],
        }

    # -- element arithmetic ------------------------------------------------
    @cached_property
    def coords(self) -> np.ndarray:
        c = np.arange(self.order, dtype=np.int64)[:, None] // self.weights % self.p
        c.setflags(write=False)
        return c

    def index_of(self, digits) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) % self.p) @ self.weights

    def add(self, a, b):
        return self.index_of(self.coords[a] + self.coords[b])

    def sub(self, a, b):
        return self.index_of(self.coords[a] - self.coords[b])

    def neg(self, a):
        return self.index_of(-self.coords[a])

    # -- characters --------------------------------------------------------
    @cached_property
    def label_to_w(self) -> np.ndarray:
        """Character label -> index of its dual digit vector."""
        if not self.factors:
            return np.arange(self.order, dtype=np.int64)
        out = np.zeros(1, dtype=np.int64)
        stride = 1
        for F in self.factors:
            out = (out[None, :] + stride * F.dual[:, None]).ravel()
            stride *= F.order
        # flat position b * q_n + a holds label a + q_n * b
        return out

    def character_sums(self, members) -> np.ndarray:
        """Reduced chi(S) for every character label, shape (v, p-1)."""
        g = transform.indicator_group_ring(members, self.order, self.p)
        sums = transform.character_sums_reduced(g, self.p, self.N, sign=1)
        return sums[self.label_to_w]

    def character_value_exponent(self, label: int, x) -> np.ndarray:
        """Exponent e with chi_label(x) = z^e (direct evaluation)."""
        w = self.coords[self.label_to_w[label]]
        return (self.coords[x] @ w) % self.p

    def describe_label(self, label: int) -> dict:
        label = int(label)
        if not self.factors:
            return {"w": label}
        if len(self.factors) == 1:
            return {"a": label}
        qn = self.factors[0].order
        return {"a": label % qn, "b": label // qn}


def field_group(p: int, n: int) -> AbelianGroup:
    return AbelianGroup.of_field(field(p, n))
