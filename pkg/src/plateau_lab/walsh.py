"""Exact Walsh spectra, plateau classification and convolution.

The Walsh value at mu is ``sum_x z^(f(x) - Tr(mu x))`` in Z[zeta_p].
:func:`walsh_naive` evaluates that double sum literally;
:func:`walsh_fast` runs a digit-by-digit transform over Z_p^n and relabels
the output through the trace bilinear form.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import cyclotomic as cyc
from . import transform
from .cyclotomic import CycInt
from .field import GF
from .functions import PAryFunction, VectorialFunction, component_tables

BENT = "bent"
S_PLATEAUED = "s-plateaued"
NOT_PLATEAUED = "not-plateaued"

# bound on (rows x columns) materialised at once by the quadratic loops
_CHUNK = 1 << 22


class ParsevalError(ArithmeticError):
    pass


class WalshSpectrum:
    """mu -> W(mu) for every mu, reduced coefficients of shape (p^n, p-1)."""

    def __init__(self, domain: GF, values: np.ndarray, check: bool = True):
        values = np.asarray(values, dtype=np.int64)
        if values.shape != (domain.order, domain.p - 1):
            raise ValueError(f"spectrum shape {values.shape} does not match {domain!r}")
        self.domain = domain
        self.values = values
        self.values.setflags(write=False)
        if check:
            total = cyc.to_cycint(self.norm_sq.sum(axis=0))
            if total != domain.order**2:
                raise ParsevalError(f"sum of |W|^2 is {total}, expected {domain.order ** 2}")

    @property
    def p(self) -> int:
        return self.domain.p

    def __getitem__(self, mu) -> CycInt:
        return cyc.to_cycint(self.values[int(mu)])

    def __len__(self):
        return self.domain.order

    def __eq__(self, other):
        return (
            isinstance(other, WalshSpectrum)
            and self.domain.spec == other.domain.spec
            and np.array_equal(self.values, other.values)
        )

    @property
    def norm_sq(self) -> np.ndarray:
        return cyc.norm_sq(self.values)

    def csv_rows(self) -> list[str]:
        norms = self.norm_sq
        rows = ["mu_index,coeffs,norm_sq"]
        for mu in range(self.domain.order):
            coeffs = ";".join(str(int(c)) for c in self.values[mu])
            val, rat = cyc.rational_part(norms[mu])
            norm = str(int(val)) if rat else ";".join(str(int(c)) for c in norms[mu])
            rows.append(f"{mu},{coeffs},{norm}")
        return rows


@dataclass(frozen=True)
class SpectrumClass:
    kind: str
    s: Optional[int]
    amplitude_sq: Optional[int]
    support_size: int
    witness: Optional[int] = None

    @property
    def is_plateaued(self) -> bool:
        return self.kind != NOT_PLATEAUED

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "s": self.s,
            "amplitude_sq": self.amplitude_sq,
            "support_size": self.support_size,
            "witness": self.witness,
        }


# ---------------------------------------------------------------------------
# transforms

def walsh_naive(f: PAryFunction) -> WalshSpectrum:
    D = f.domain
    q, p = D.order, D.p
    out = np.empty((q, p - 1), dtype=np.int64)
    step = max(1, _CHUNK // q)
    x = D.all
    for start in range(0, q, step):
        mu = np.arange(start, min(q, start + step), dtype=np.int64)
        tr = D.trace(D.mul(mu[:, None], x[None, :]))
        out[start : start + len(mu)] = cyc.counts_to_reduced(f.values[None, :] - tr, p)
    return WalshSpectrum(D, out)


def walsh_tables(domain: GF, tables: np.ndarray) -> np.ndarray:
    """Fast transform of a batch of value tables, shape (B, q) -> (B, q, p-1)."""
    tables = np.atleast_2d(np.asarray(tables, dtype=np.int64))
    g = transform.exponent_group_ring(tables, domain.p)
    h = transform.zp_fourier(g, domain.p, domain.n, sign=-1)
    return cyc.reduce(h[:, domain.dual])


def walsh_fast(f: PAryFunction) -> WalshSpectrum:
    return WalshSpectrum(f.domain, walsh_tables(f.domain, f.values[None, :])[0])


def fourier(domain: GF, table: np.ndarray, sign: int = -1) -> np.ndarray:
    """mu -> sum_x T(x) z^(sign Tr(mu x)) for a reduced table T."""
    g = cyc.lift(table)
    h = transform.zp_fourier(g, domain.p, domain.n, sign=sign)
    return cyc.reduce(h[domain.dual])


def inverse_walsh(spectrum: WalshSpectrum) -> np.ndarray:
    """x -> sum_mu W(mu) z^Tr(mu x), which equals p^n z^f(x)."""
    return fourier(spectrum.domain, spectrum.values, sign=1)


def recover_function(spectrum: WalshSpectrum) -> PAryFunction:
    D = spectrum.domain
    back = cyc.lift(inverse_walsh(spectrum))
    q = D.order
    # p^n z^e in group-ring form, modulo the all-ones vector
    shifted = back - back.min(axis=1, keepdims=True)
    values = np.argmax(shifted, axis=1)
    expected = np.zeros_like(shifted)
    expected[np.arange(q), values] = q
    if not np.array_equal(shifted, expected):
        raise ArithmeticError("inverse transform is not p^n times a root of unity")
    return PAryFunction(D, values)


# ---------------------------------------------------------------------------
# classification

def _p_log(value: int, p: int) -> Optional[int]:
    k = 0
    while value > 1 and value % p == 0:
        value //= p
        k += 1
    return k if value == 1 else None


def classify_norms(norms: np.ndarray, p: int, n: int) -> SpectrumClass:
    """Classify from reduced |W|^2 values of shape (p^n, p-1)."""
    vals, rational = cyc.rational_part(norms)
    nonzero = np.flatnonzero(np.any(norms != 0, axis=1))
    support = len(nonzero)
    irr = np.flatnonzero(~rational)
    if len(irr):
        return SpectrumClass(NOT_PLATEAUED, None, None, support, int(irr[0]))
    if support == 0:
        raise ParsevalError("empty Walsh support")
    ref = int(vals[nonzero[0]])
    bad = nonzero[vals[nonzero] != ref]
    if len(bad):
        return SpectrumClass(NOT_PLATEAUED, None, None, support, int(bad[0]))
    k = _p_log(ref, p)
    if k is None or not n <= k <= 2 * n:
        return SpectrumClass(NOT_PLATEAUED, None, None, support, int(nonzero[0]))
    s = k - n
    if support != p ** (n - s):
        # unreachable when Parseval holds; kept as an explicit cross-check
        raise ParsevalError(f"support {support} inconsistent with s={s}")
    kind = BENT if s == 0 else S_PLATEAUED
    return SpectrumClass(kind, s, ref, support, None)


def classify(spectrum: WalshSpectrum) -> SpectrumClass:
    D = spectrum.domain
    return classify_norms(spectrum.norm_sq, D.p, D.n)


def classify_function(f: PAryFunction) -> SpectrumClass:
    return classify(walsh_fast(f))


def classify_tables(domain: GF, tables: np.ndarray) -> list[SpectrumClass]:
    spectra = walsh_tables(domain, tables)
    norms = cyc.norm_sq(spectra)
    return [classify_norms(nm, domain.p, domain.n) for nm in norms]


VECTORIAL_S_PLATEAUED = "vectorial-s-plateaued"
VECTORIAL_PLATEAUED = "vectorial-plateaued"


@dataclass(frozen=True)
class VectorialClass:
    kind: str
    s: Optional[int]
    witness: Optional[int]
    components: dict = dc_field(repr=False)

    @property
    def is_s_plateaued(self) -> bool:
        return self.kind == VECTORIAL_S_PLATEAUED

    def to_json(self, with_components: bool = False) -> dict:
        out = {"kind": self.kind, "s": self.s, "witness_b": self.witness}
        if with_components:
            out["components"] = {str(b): c.to_json() for b, c in self.components.items()}
        return out


def classify_vectorial(F: VectorialFunction, jobs: int = 1) -> VectorialClass:
    """Classify every nonzero component F_b; verdict with first failing b."""
    D = F.domain
    tables = component_tables(F)
    B = len(tables)
    step = max(1, _CHUNK // (D.order * D.p))
    chunks = [(i, tables[i : i + step]) for i in range(0, B, step)]

    def run(chunk):
        return classify_tables(D, chunk[1])

    if jobs > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    classes = [c for part in parts for c in part]
    comps = {b: cls for b, cls in zip(range(1, B + 1), classes)}
    for b, cls in comps.items():
        if not cls.is_plateaued:
            return VectorialClass(NOT_PLATEAUED, None, b, comps)
    s_values = [cls.s for cls in comps.values()]
    if len(set(s_values)) == 1:
        return VectorialClass(VECTORIAL_S_PLATEAUED, s_values[0], None, comps)
    first = s_values[0]
    witness = next(b for b, cls in comps.items() if cls.s != first)
    return VectorialClass(VECTORIAL_PLATEAUED, None, witness, comps)


# ---------------------------------------------------------------------------
# autocorrelation and convolution

def delta_transform(f: PAryFunction) -> np.ndarray:
    """a -> Delta_f(a) = sum_x z^(D_a f(x)), reduced (q, p-1)."""
    D = f.domain
    q, p = D.order, D.p
    out = np.empty((q, p - 1), dtype=np.int64)
    step = max(1, _CHUNK // q)
    x = D.all
    for start in range(0, q, step):
        a = np.arange(start, min(q, start + step), dtype=np.int64)
        shifted = f.values[D.add(x[None, :], a[:, None])]
        out[start : start + len(a)] = cyc.counts_to_reduced(shifted - f.values[None, :], p)
    return out


def convolve(domain: GF, F_table: np.ndarray, G_table: np.ndarray) -> np.ndarray:
    """(F * G)(a) = sum_x F(x) G(x - a) for reduced tables."""
    D = domain
    q = D.order
    F_table = np.asarray(F_table, dtype=np.int64)
    G_table = np.asarray(G_table, dtype=np.int64)
    out = np.empty_like(F_table)
    x = D.all
    for a in range(q):
        out[a] = cyc.ring_mul(F_table, G_table[D.sub(x, a)]).sum(axis=0)
    return out


def exponent_table(f: PAryFunction) -> np.ndarray:
    """x -> z^f(x) as a reduced table."""
    return cyc.reduce(transform.exponent_group_ring(f.values, f.p))
