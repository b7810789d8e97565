import math

import numpy as np
import pytest

from plateau_lab import cyclotomic as cyc
from plateau_lab.field import field
from plateau_lab.sequences import (
    CrossCorrSpectrum,
    DecimationRejected,
    classify_decimation,
    component_scaling_check,
    correlation_total_closed_form,
    cross_correlation,
    decimate,
    known_decimations,
    m_sequence,
    three_valued_classify,
    walsh_bridge_check,
)


def lfsr_oracle(F):
    """u(t) = Tr(sigma^t) by repeated scalar multiplication."""
    sigma = F.primitive
    out, cur = [], 1
    for _ in range(F.order - 1):
        out.append(F.scalar_trace(cur))
        cur = F.poly_mul(cur, sigma)
    return np.array(out)


def theta_oracle(u, v, p):
    z = np.exp(2j * np.pi / p)
    N = len(u)
    return np.array([sum(z ** ((u[(t + tau) % N] - v[t]) % p) for t in range(N)) for tau in range(N)])


@pytest.mark.parametrize("pn", [(3, 1), (3, 2), (3, 3), (2, 4), (5, 2)])
def test_m_sequence_matches_scalar_oracle(pn):
    F = field(*pn)
    u = m_sequence(F)
    assert np.array_equal(u.values, lfsr_oracle(F))
    assert u.period == F.order - 1


def test_m_sequence_balance():
    u = m_sequence(field(3, 3))
    assert u.value_counts() == [8, 9, 9]
    assert m_sequence(field(3, 1)).values.tolist() == [1, 2]


def test_decimation_definition():
    u = m_sequence(field(3, 2))
    v = decimate(u, 5)
    assert all(v[t] == u.values[5 * t % 8] for t in range(8))


@pytest.mark.parametrize("d", [1, 2, 5, 7])
def test_cross_correlation_matches_complex_oracle(d):
    F = field(3, 3)
    u = m_sequence(F)
    v = decimate(u, d)
    got = cross_correlation(u, v)
    assert np.allclose(cyc.to_complex(got.values), theta_oracle(u.values, v, 3))
    assert np.array_equal(cross_correlation(u, v, jobs=4).values, got.values)


def test_three_valued_examples():
    F = field(3, 3)
    u = m_sequence(F)
    spec = cross_correlation(u, decimate(u, 5))
    assert sorted(spec.value_set()) == [-10, -1, 8]
    tv = classify_decimation(F, 5)
    assert tv.three_valued and tv.s == 1 and tv.amplitude == 9 and tv.agrees
    # d = 1 is two-valued, so not three-valued
    assert not classify_decimation(F, 1).three_valued


@pytest.mark.parametrize("d", [5, 7])
def test_three_valued_n5(d):
    tv = classify_decimation(field(3, 5), d)
    assert sorted(tv.value_set) == [-28, -1, 26]
    assert tv.three_valued and tv.s == 1 and tv.vectorial_s == 1


def test_three_valued_needs_exact_set():
    spec = CrossCorrSpectrum(3, np.array([[-1, 0], [8, 0], [-1, 0]]))
    assert not three_valued_classify(spec, 3, 3).three_valued
    spec = CrossCorrSpectrum(3, np.array([[-1, 0], [8, 0], [-10, 0]]))
    assert three_valued_classify(spec, 3, 3).s == 1


@pytest.mark.parametrize("n,d", [(3, 5), (3, 2), (2, 2), (3, 7), (3, 11)])
def test_sum_of_theta_closed_form(n, d):
    F = field(3, n)
    u = m_sequence(F)
    assert cross_correlation(u, decimate(u, d)).total() == correlation_total_closed_form(F, d)


@pytest.mark.parametrize("n,d", [(3, 5), (5, 5), (5, 7), (2, 3)])
def test_bridge_literal_form(n, d):
    v = walsh_bridge_check(field(3, n), d)
    assert v.literal_holds and v.conjugate_holds and v.shifts == 3**n - 1


@pytest.mark.parametrize("n", [2, 3])
def test_bridge_needs_conjugate_for_complex_spectra(n):
    v = walsh_bridge_check(field(3, n), 2)
    assert v.conjugate_holds and not v.literal_holds and v.literal_witness is not None


def test_known_decimations():
    ds = known_decimations(3, 3, 1)
    assert [x.d for x in ds] == [5, 7]
    assert all(x.s == 1 and x.coprime for x in ds)
    with pytest.raises(DecimationRejected):
        known_decimations(3, 4, 2)
    with pytest.raises(DecimationRejected):
        known_decimations(2, 3, 1)


@pytest.mark.parametrize("n,k", [(3, 1), (5, 1)])
def test_known_decimations_are_three_valued(n, k):
    for dec in known_decimations(3, n, k):
        tv = classify_decimation(field(3, n), dec.d)
        assert tv.three_valued and tv.s == dec.s


@pytest.mark.parametrize("b", [1, 2, 5, 17, 26])
def test_component_scaling(b):
    step = component_scaling_check(field(3, 3), 5, b)
    assert step.holds and step.zero_at_origin
    assert math.gcd(5, 26) == 1
    with pytest.raises(ValueError):
        component_scaling_check(field(3, 3), 2, b)
