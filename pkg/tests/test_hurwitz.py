from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from hurwitz_wedge.hurwitz import (
    HurwitzQuery,
    InvalidQuery,
    asymptotic_report,
    aut_order,
    check_gap_conjecture,
    classical_hurwitz,
    disconnected_hurwitz_series,
    hurwitz_number,
    normalisation,
    partitions_of,
    set_partitions,
    structure_coefficients,
)
from hurwitz_wedge import oracle

SMALL = [mu for d in range(1, 6) for mu in partitions_of(d)]


def H(mu, g, r=1, connected=True):
    return hurwitz_number(HurwitzQuery(mu, g, r, connected))


def test_query_fields():
    q = HurwitzQuery((1, 2, 1), 1)
    assert q.mu == (2, 1, 1) and q.d == 4 and q.n == 3 and q.k == 7
    assert HurwitzQuery((4,), 0, r=2).k == 1
    with pytest.raises(InvalidQuery):
        HurwitzQuery((3,), 0, r=2)
    with pytest.raises(InvalidQuery):
        HurwitzQuery((0, 1), 0)


def test_helpers():
    assert aut_order((2, 1, 1)) == 2
    assert aut_order((1, 1, 1)) == 6
    assert normalisation((2, 1, 1)) == 48
    assert normalisation((4,), 2) == 2**2 * 2 * 4
    assert sum(1 for _ in set_partitions(4)) == 15


@pytest.mark.parametrize("g", range(6))
def test_two_one_family(g):
    assert H((2, 1), g) == Fraction(3 ** (2 * g + 3) - 3, 6)


@pytest.mark.parametrize("g", range(4))
def test_two_one_one_family(g):
    k = 2 * g + 5
    assert H((2, 1, 1), g) == Fraction(6**k - 8 * 3**k - 3 * 2**k + 24, 24)


def test_small_values():
    assert H((1, 1), 0) == 1
    assert H((2,), 3) == Fraction(1, 2)
    assert H((1,), 0) == 1
    assert H((1,), 1) == 0
    assert H((2, 1), -1) == 0


def test_disconnected_numbers():
    # every product of an odd number of transpositions in S_3 has type (2,1)
    series = disconnected_hurwitz_series((2, 1), 3)
    for g, v in series.items():
        assert v == Fraction(3 ** (2 * g + 3), 6)
        if g >= 0:
            assert v == H((2, 1), g) + Fraction(1, 2)
    assert H((2, 1), 0, connected=False) == Fraction(9, 2)
    assert disconnected_hurwitz_series((1, 1), 1) == {-1: 1, 0: 1, 1: 1}
    with pytest.raises(InvalidQuery):
        H((2,), 0, r=2, connected=False)


def test_disconnected_against_oracle():
    for mu in [(2, 1), (2, 2), (3, 1), (2, 1, 1)]:
        d, n = sum(mu), len(mu)
        for g in (0, 1):
            k = d + 2 * g - 2 + n
            q = oracle.FactorizationQuery(d, mu, k, transitive=False)
            want = Fraction(oracle.count_by_convolution(q) * aut_order(mu), factorial(d))
            assert H(mu, g, connected=False) == want


def test_structure_table():
    t = structure_coefficients((3, 2))
    assert t.C == {1: 20, 2: 15, 4: -10, 5: -4, 10: 1}
    assert t.top_coefficient() == 1
    assert t.to_json()["C"]["10"] == "1"
    assert t.closed_form().startswith("2/")


@given(st.sampled_from([mu for mu in SMALL if sum(mu) >= 2]))
def test_structure_coefficients_are_integers_with_parity(mu):
    # the correlator is a product of d + n - 2 q-integers
    t = structure_coefficients(mu)
    assert t.combo.parity == ("odd" if (sum(mu) + len(mu)) % 2 else "even")
    assert all(isinstance(c, int) for c in t.C.values())
    assert max(t.C) == sum(mu) * (sum(mu) - 1) // 2


@given(st.sampled_from(SMALL), st.integers(0, 1))
def test_wedge_matches_convolution_oracle(mu, g):
    d, n = sum(mu), len(mu)
    assert H(mu, g) == oracle.connected_count(d, mu, d + 2 * g - 2 + n)


def test_classical_d5():
    value, B = classical_hurwitz(0, 5)
    assert B == {10: 1, 6: -25, 5: 16, 4: -100, 3: 400, 2: 600, 1: -4000}
    assert value == H((1,) * 5, 0) / factorial(5)
    assert classical_hurwitz(0, 3)[0] == 4


def test_orbifold():
    for g in range(5):
        assert H((2,), g, r=2) == Fraction(1, 2)
    t = structure_coefficients((4,), 2)
    assert t.combo.parity == "odd" and t.C == {2: 1, 6: 1}
    for mu in [(2, 1), (3, 1), (2, 2)]:
        assert H(mu, 1, r=1) == H(mu, 1)


def test_asymptotics():
    rep = asymptotic_report(HurwitzQuery((3, 2), 3))
    assert rep.estimate_over_exact * rep.exact_over_estimate == 1
    assert abs(float(rep.estimate_over_exact) - 1.00237788894) < 1e-10


@pytest.mark.parametrize("mu", [mu for d in range(2, 6) for mu in partitions_of(d)])
def test_gap(mu):
    assert check_gap_conjecture(mu).holds


def test_partitions_of():
    assert list(partitions_of(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert [sum(1 for _ in partitions_of(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
