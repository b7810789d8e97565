import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plateau_lab.field import field
from plateau_lab.functions import (
    PAryFunction,
    component,
    component_tables,
    derivative,
    direct_sum,
    from_level_sets,
    graph,
    is_balanced,
    level_sets,
    power_map,
    random_function,
    relative_trace,
    relative_trace_power,
    subfield_embedding,
    trace_polynomial,
    trace_power,
)
from plateau_lab.walsh import classify_vectorial


def test_graph_of_square_on_f3():
    G = graph(power_map(field(3, 1), 2))
    assert sorted(G.members.tolist()) == [0, 4, 5]


def test_level_sets_of_trace_fifth_power():
    f = trace_power(field(3, 3), 5)
    assert [len(D) for D in level_sets(f)] == [9, 9, 9]
    assert is_balanced(f.values, 3)


def test_components_of_fifth_power_are_distinct():
    tables = component_tables(power_map(field(3, 3), 5))
    assert len(tables) == 26
    assert len({t.tobytes() for t in tables}) == 26


def test_component_is_trace_of_scaled_function():
    F = field(3, 3)
    P = power_map(F, 5)
    for b in (1, 2, 7, 26):
        want = F.trace(F.mul(b, P.values))
        assert np.array_equal(component(P, b).values, want)


def test_trace_polynomial_sums_terms():
    F = field(3, 2)
    f = trace_polynomial(F, [(1, 2), (2, 4)])
    want = (F.trace(F.pow(F.all, 2)) + F.trace(F.mul(2, F.pow(F.all, 4)))) % 3
    assert np.array_equal(f.values, want)


def test_table_validation():
    F = field(3, 1)
    with pytest.raises(ValueError):
        PAryFunction(F, [0, 1])
    with pytest.raises(ValueError):
        PAryFunction(F, [0, 1, 3])


@given(st.integers(0, 2**32 - 1))
def test_level_sets_round_trip(seed):
    F = field(3, 2)
    f = random_function(F, np.random.default_rng(seed))
    assert from_level_sets(F, level_sets(f)) == f


def test_direct_sum_indexing():
    f = trace_power(field(3, 2), 2)
    g = trace_power(field(3, 1), 1)
    h = direct_sum(f, g)
    assert h.domain.order == 27
    for w in range(9):
        for u in range(3):
            assert h(u + 3 * w) == (f(w) + g(u)) % 3


def test_derivative_definition():
    F = field(3, 2)
    f = trace_power(F, 2)
    Da = derivative(f, 5)
    assert np.array_equal(Da.values, (f.values[F.add(F.all, 5)] - f.values) % 3)


@pytest.mark.parametrize("n,m", [(4, 2), (2, 1), (6, 3), (6, 2)])
def test_subfield_embedding_is_ring_homomorphism(n, m):
    big, small = field(3, n), field(3, m)
    e = subfield_embedding(big, small)
    a, b = np.meshgrid(small.all, small.all, indexing="ij")
    assert np.array_equal(e[small.add(a, b)], big.add(e[a], e[b]))
    assert np.array_equal(e[small.mul(a, b)], big.mul(e[a], e[b]))
    assert len(set(e.tolist())) == small.order


def test_relative_trace_is_onto_and_transitive():
    big, mid = field(3, 4), field(3, 2)
    tr = relative_trace(big, mid, big.all)
    assert np.all(np.bincount(tr, minlength=9) == 9)
    # Tr^2_1 after Tr^4_2 is the absolute trace
    assert np.array_equal(mid.trace(tr), big.trace(big.all))


def test_relative_trace_power_quadratic_is_vectorial_bent():
    F = relative_trace_power(field(3, 4), field(3, 2), 2)
    vc = classify_vectorial(F)
    assert vc.is_s_plateaued and vc.s == 0
