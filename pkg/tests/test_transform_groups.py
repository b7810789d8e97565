import itertools

import numpy as np
import pytest

from plateau_lab import cyclotomic as cyc
from plateau_lab.field import field
from plateau_lab.groups import AbelianGroup
from plateau_lab.transform import exponent_group_ring, zp_fourier


@pytest.mark.parametrize("p,N", [(2, 3), (3, 2), (3, 3), (5, 2)])
def test_fourier_against_direct_sum(p, N, rng):
    q = p**N
    e = rng.integers(0, p, size=q)
    out = cyc.reduce(zp_fourier(exponent_group_ring(e, p), p, N, sign=1))
    digits = np.array(list(itertools.product(range(p), repeat=N)))[:, ::-1]
    z = np.exp(2j * np.pi / p)
    pair = digits @ digits.T
    direct = (z ** (e[None, :] + pair)).sum(axis=1)
    assert np.allclose(cyc.to_complex(out), direct)


@pytest.mark.parametrize("pn", [(3, 2), (3, 3), (2, 3), (5, 1)])
def test_field_characters_use_trace_pairing(pn, rng):
    F = field(*pn)
    G = AbelianGroup.of_field(F)
    S = rng.choice(F.order, size=F.order // 2, replace=False)
    sums = cyc.to_complex(G.character_sums(S))
    z = np.exp(2j * np.pi / F.p)
    for a in range(F.order):
        direct = (z ** F.trace(F.mul(a, S))).sum()
        assert abs(sums[a] - direct) < 1e-9


def test_product_group_labels(rng):
    F9, F3 = field(3, 2), field(3, 1)
    G = AbelianGroup.product(F9, F3)
    S = rng.choice(G.order, size=10, replace=False)
    sums = cyc.to_complex(G.character_sums(S))
    z = np.exp(2j * np.pi / 3)
    x, y = S % 9, S // 9
    for label in range(G.order):
        a, b = label % 9, label // 9
        direct = (z ** (F9.trace(F9.mul(a, x)) + F3.trace(F3.mul(b, y)))).sum()
        assert abs(sums[label] - direct) < 1e-9
        d = G.describe_label(label)
        assert (d["a"], d["b"]) == (a, b)


def test_group_arithmetic_and_order():
    G = AbelianGroup.from_order(27)
    assert (G.p, G.N) == (3, 3)
    a = np.arange(27)
    assert np.all(G.add(a, G.neg(a)) == 0)
    with pytest.raises(ValueError):
        AbelianGroup.from_order(12)


@pytest.mark.parametrize("p,N", [(3, 3), (17, 1), (5, 2)])
def test_fourier_dense_input(p, N, rng):
    # arbitrary group-ring entries exercise the dense rotation path
    q = p**N
    g = rng.integers(-3, 4, size=(q, p))
    out = cyc.reduce(zp_fourier(g, p, N, sign=-1))
    digits = np.array(list(itertools.product(range(p), repeat=N)))[:, ::-1]
    z = np.exp(2j * np.pi / p)
    vals = g @ (z ** np.arange(p))
    direct = (z ** (-(digits @ digits.T)) * vals[None, :]).sum(axis=1)
    assert np.allclose(cyc.to_complex(out), direct)


@pytest.mark.parametrize("p", [17, 241])
def test_fourier_large_prime_sparse_path(p, rng):
    e = rng.integers(0, p, size=p)
    out = cyc.reduce(zp_fourier(exponent_group_ring(e, p), p, 1, sign=1))
    z = np.exp(2j * np.pi / p)
    x = np.arange(p)
    direct = (z ** ((e[None, :] + x[:, None] * x[None, :]) % p)).sum(axis=1)
    assert np.allclose(cyc.to_complex(out), direct, atol=1e-6)
