"""Exact Fourier transform over the elementary abelian group Z_p^N.

Values live in the group ring Z[C_p] (last axis of length p); multiplying by
z^k is a cyclic roll of that axis, so every p-point butterfly is exact.
Element ``x`` has little-endian base-p digits; the pairing is the plain dot
product of digit vectors.
"""
from __future__ import annotations

import numpy as np

from . import cyclotomic as cyc


def zp_fourier(values: np.ndarray, p: int, N: int, sign: int = 1) -> np.ndarray:
    """out[..., w, :] = sum_x z^(sign * <w, x>) * values[..., x, :].

    ``values`` has shape ``batch + (p**N, p)``; the result has the same shape.
    """
    a = np.asarray(values, dtype=np.int64)
    batch = a.shape[:-2]
    if a.shape[-2:] != (p**N, p):
        raise ValueError(f"expected trailing shape {(p**N, p)}, got {a.shape[-2:]}")
    a = a.reshape(batch + (p,) * N + (p,))
    nb = len(batch)
    for axis in range(nb, nb + N):
        moved = np.moveaxis(a, axis, 0)
        a = np.moveaxis(_axis_transform(moved, p, sign), 0, axis)
    return np.ascontiguousarray(a).reshape(batch + (p**N, p))


def _axis_transform(moved: np.ndarray, p: int, sign: int) -> np.ndarray:
    """out[w] = sum_x z^(sign w x) moved[x] along the leading axis."""
    w = np.arange(p, dtype=np.int64)
    rest = moved.shape[1:-1]
    R = int(np.prod(rest, dtype=np.int64))
    flat = moved.reshape(p, R, p)
    x, r, j = np.nonzero(flat)
    vals = flat[x, r, j]
    # sparse inputs (exponent tables) scatter each nonzero p times
    if len(vals) * 4 < R * p * p and np.abs(vals).sum() < 1 << 52:
        shift = (j[:, None] + sign * w[None, :] * x[:, None]) % p
        target = (w[None, :] * R + r[:, None]) * p + shift
        acc = np.bincount(target.ravel(), weights=np.repeat(vals, p).astype(np.float64),
                          minlength=p * R * p)
        return np.rint(acc).astype(np.int64).reshape(moved.shape)
    out = np.zeros_like(moved)
    for xi in range(p):
        # multiplying by z^(sign w x) rotates the group-ring axis
        idx = (w[None, :] - sign * w[:, None] * xi) % p
        out += np.moveaxis(moved[xi][..., idx], -2, 0)
    return out


def indicator_group_ring(members, size: int, p: int) -> np.ndarray:
    """Group-ring table of a set: z^0 at members, zero elsewhere."""
    g = np.zeros((size, p), dtype=np.int64)
    g[np.asarray(list(members), dtype=np.int64), 0] = 1
    return g


def exponent_group_ring(exponents: np.ndarray, p: int) -> np.ndarray:
    """Group-ring table of x -> z^(e(x)) for an exponent table (any batch)."""
    e = np.asarray(exponents, dtype=np.int64) % p
    out = np.zeros(e.shape + (p,), dtype=np.int64)
    np.put_along_axis(out, e[..., None], 1, axis=-1)
    return out


def character_sums_reduced(group_ring: np.ndarray, p: int, N: int, sign: int = 1) -> np.ndarray:
    return cyc.reduce(zp_fourier(group_ring, p, N, sign))
