import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plateau_lab import cyclotomic as cyc
from plateau_lab.field import field
from plateau_lab.functions import (
    PAryFunction,
    constant,
    direct_sum,
    linear,
    power_map,
    random_function,
    trace_power,
)
from plateau_lab.walsh import (
    BENT,
    NOT_PLATEAUED,
    S_PLATEAUED,
    VECTORIAL_S_PLATEAUED,
    classify,
    classify_vectorial,
    convolve,
    delta_transform,
    exponent_table,
    fourier,
    recover_function,
    walsh_fast,
    walsh_naive,
)

from conftest import SMALL_FIELDS

WALSH_FIELDS = SMALL_FIELDS + [(3, 4), (2, 5)]


def complex_walsh(f: PAryFunction) -> np.ndarray:
    """Floating-point oracle computed straight from the definition."""
    F = f.domain
    z = np.exp(2j * np.pi / F.p)
    mu, x = np.meshgrid(F.all, F.all, indexing="ij")
    return (z ** ((f.values[x] - F.trace(F.mul(mu, x))) % F.p)).sum(axis=1)


@pytest.mark.parametrize("pn", WALSH_FIELDS)
def test_fast_matches_naive_and_complex_oracle(pn, rng):
    F = field(*pn)
    for _ in range(5):
        f = random_function(F, rng)
        fast, naive = walsh_fast(f), walsh_naive(f)
        assert fast == naive
        assert np.allclose(cyc.to_complex(fast.values), complex_walsh(f))


@given(st.sampled_from(WALSH_FIELDS), st.integers(0, 2**32 - 1))
def test_parseval_and_inversion(pn, seed):
    F = field(*pn)
    f = random_function(F, np.random.default_rng(seed))
    W = walsh_fast(f)
    assert cyc.to_cycint(W.norm_sq.sum(axis=0)) == F.order**2
    assert recover_function(W) == f


@given(st.sampled_from([(3, 2), (3, 3), (5, 1), (2, 3)]), st.integers(0, 2**32 - 1))
def test_convolution_theorem(pn, seed):
    F = field(*pn)
    rng = np.random.default_rng(seed)
    A = exponent_table(random_function(F, rng))
    B = exponent_table(random_function(F, rng))
    # convolve correlates: (A * B)(a) = sum_x A(x) B(x - a);
    # reflecting B turns it into the ordinary convolution
    B_reflected = B[F.neg(F.all)]
    conv = convolve(F, A, B_reflected)
    assert np.array_equal(
        fourier(F, conv), cyc.ring_mul(fourier(F, A), fourier(F, B))
    )
    # without the reflection the second factor is evaluated at -mu
    corr = convolve(F, A, B)
    assert np.array_equal(
        fourier(F, corr), cyc.ring_mul(fourier(F, A), fourier(F, B)[F.neg(F.all)])
    )


def test_worked_classifications():
    F9, F27 = field(3, 2), field(3, 3)
    c = classify(walsh_fast(trace_power(F9, 2)))
    assert (c.kind, c.s, c.amplitude_sq) == (BENT, 0, 9)
    c = classify(walsh_fast(trace_power(F27, 5)))
    assert (c.kind, c.s, c.amplitude_sq, c.support_size) == (S_PLATEAUED, 1, 81, 9)
    c = classify(walsh_fast(linear(F27, 4)))
    assert (c.s, c.support_size) == (3, 1)
    c = classify(walsh_fast(constant(F27)))
    assert c.s == 3


def test_not_plateaued_reports_witness():
    F = field(3, 2)
    f = PAryFunction(F, [1, 0, 0, 0, 0, 0, 0, 0, 0])
    c = classify(walsh_fast(f))
    assert c.kind == NOT_PLATEAUED and c.s is None and c.witness is not None


def test_vectorial_classification():
    vc = classify_vectorial(power_map(field(3, 3), 5))
    assert (vc.kind, vc.s) == (VECTORIAL_S_PLATEAUED, 1)
    assert len(vc.components) == 26
    assert classify_vectorial(power_map(field(3, 3), 5), jobs=4) == vc


def test_direct_sum_adds_plateau_index():
    bent9 = trace_power(field(3, 2), 2)
    bent3 = trace_power(field(3, 1), 2)
    assert classify(walsh_fast(direct_sum(bent9, bent3))).s == 0
    h = direct_sum(bent9, trace_power(field(3, 3), 5))
    assert classify(walsh_fast(h)).s == 1


@pytest.mark.parametrize("pn", [(3, 2), (3, 3), (5, 1)])
def test_delta_transform_is_fourier_of_power_spectrum(pn, rng):
    F = field(*pn)
    f = random_function(F, rng)
    D = delta_transform(f)
    back = fourier(F, walsh_fast(f).norm_sq, sign=1)
    # sum_mu |W(mu)|^2 z^Tr(mu a) = p^n Delta_f(a)
    assert np.array_equal(back, F.order * D)
