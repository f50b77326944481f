from fractions import Fraction
from itertools import product
from math import factorial

import pytest
from hypothesis import given, strategies as st

from hurwitz_wedge import oracle
from hurwitz_wedge.hurwitz import HurwitzQuery, aut_order, hurwitz_number, partitions_of
from hurwitz_wedge.oracle import (
    BudgetExceeded,
    DegreeTooLarge,
    FactorizationQuery as Q,
    connected_count,
    count_by_convolution,
    count_factorizations,
    monotone_count,
    orbifold_count,
)
from hurwitz_wedge.oracle import kernels
from hurwitz_wedge.oracle.perm import (
    compose,
    cycle_type,
    inverse,
    perm_from_cycles,
    sign,
    standard_perm,
    symmetric_group,
)

SMALL = [(d, mu) for d in range(1, 5) for mu in partitions_of(d)]


def test_perm_basics():
    p = perm_from_cycles(4, [(0, 1, 2)])
    assert cycle_type(p) == (3, 1)
    assert sign(p) == 1
    assert compose(p, inverse(p)) == tuple(range(4))
    assert cycle_type(standard_perm((2, 2, 1))) == (2, 2, 1)
    g = symmetric_group(4)
    assert g.transpositions == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert g.block_start == [0, 1, 1, 3, 3, 3]
    assert len(g.class_indices((2, 2))) == 3


def test_spec_examples():
    assert count_factorizations(Q(3, (2, 1), 3)) == 24
    assert count_factorizations(Q(3, (2, 1), 3, transitive=False)) == 27
    assert count_factorizations(Q(2, (2,), 1)) == 1
    assert count_by_convolution(Q(3, (2, 1), 3, transitive=False)) == 27
    assert count_by_convolution(Q(2, (1, 1), 0, transitive=False)) == 1
    assert connected_count(3, (2, 1), 3) == 4
    assert connected_count(4, (2, 1, 1), 5) == 240
    assert connected_count(2, (1, 1), 2) == 1


def test_four_cycle_forces_transitivity():
    for k in (3, 5):
        full = count_by_convolution(Q(4, (4,), k, transitive=False))
        assert full == count_factorizations(Q(4, (4,), k))
        assert full == hurwitz_number(HurwitzQuery((4,), (k - 3) // 2)) * factorial(4)


def test_monotone_examples():
    assert monotone_count(3, perm_from_cycles(3, [(0, 1, 2)]), 2) == 2
    assert monotone_count(2, (1, 0), 7) == 1
    assert monotone_count(3, perm_from_cycles(3, [(0, 1)]), 3, transitive=True) == 4


def test_orbifold_examples():
    assert orbifold_count(3, 1, (2, 1), 3) == 4
    assert orbifold_count(2, 2, (2,), 0) == Fraction(1, 2)
    assert oracle.ORBIFOLD_CALIBRATION == 1


@pytest.mark.parametrize("r,d", [(2, 2), (2, 4), (3, 3), (4, 4)])
def test_orbifold_weight_against_wedge(r, d):
    for mu in partitions_of(d):
        for g in (0, 1):
            q = HurwitzQuery(mu, g, r)
            assert orbifold_count(d, r, mu, q.k) == hurwitz_number(q)


@pytest.mark.parametrize("mu,r", [((6,), 2), ((4, 2), 2), ((3, 3), 2), ((2, 2, 2), 2), ((6,), 3), ((3, 3), 3)])
def test_orbifold_ratio_terms_against_wedge(mu, r):
    # these correlators carry [aB]/[B] terms with a > 1
    from hurwitz_wedge.correlator import OperatorWord, connected

    assert connected(OperatorWord.hurwitz(mu, r)).qproduct_form is None
    q = HurwitzQuery(mu, 0, r)
    assert orbifold_count(6, r, mu, q.k) == hurwitz_number(q)


@pytest.mark.parametrize("d,mu", SMALL)
def test_exhaustive_and_convolution_agree(d, mu):
    for k in range(7):
        assert count_factorizations(Q(d, mu, k, transitive=False)) == count_by_convolution(
            Q(d, mu, k, transitive=False)
        )


@pytest.mark.parametrize("d,mu", SMALL)
def test_connected_count_against_exhaustive(d, mu):
    for k in range(7):
        trans = count_factorizations(Q(d, mu, k))
        assert connected_count(d, mu, k) == Fraction(trans * aut_order(mu), factorial(d))


@pytest.mark.parametrize("d,mu", SMALL)
def test_monotone_dp_against_exhaustive(d, mu):
    p = standard_perm(mu)
    for k in range(7):
        for transitive in (False, True):
            ex_fixed = count_factorizations(Q(d, p, k, transitive=transitive, monotone=True, fixed=True))
            ex_class = count_factorizations(Q(d, mu, k, transitive=transitive, monotone=True))
            assert monotone_count(d, p, k, True, transitive) == ex_fixed
            assert monotone_count(d, mu, k, False, transitive) == ex_class


def _brute(d, k, monotone, left_to_right):
    g = symmetric_group(d)
    ts = [(a, b) for (a, b) in g.transpositions]
    out = {}
    for tup in product(range(len(ts)), repeat=k):
        if monotone and any(ts[tup[i]][1] > ts[tup[i + 1]][1] for i in range(k - 1)):
            continue
        p = tuple(range(d))
        for i in tup:
            t = g.t_perms[i]
            p = compose(t, p) if left_to_right else compose(p, t)
        ct = cycle_type(p)
        out[ct] = out.get(ct, 0) + 1
    return out


@pytest.mark.parametrize("d,k", [(3, 3), (4, 2), (4, 4)])
def test_class_counts_do_not_depend_on_product_convention(d, k):
    for mono in (False, True):
        a = _brute(d, k, mono, False)
        assert a == _brute(d, k, mono, True)
        for mu, c in a.items():
            assert count_factorizations(Q(d, mu, k, transitive=False, monotone=mono)) == c


@given(st.sampled_from(SMALL), st.integers(0, 6))
def test_parity_vanishing(dm, k):
    d, mu = dm
    sgn = -1 if (d - len(mu)) % 2 else 1
    if (-1) ** k != sgn:
        assert count_by_convolution(Q(d, mu, k, transitive=False)) == 0
        assert monotone_count(d, mu, k, fixed_target=False) == 0


def test_budget_and_degree_limits():
    with pytest.raises(BudgetExceeded):
        count_factorizations(Q(5, (5,), 8), budget=1000)
    with pytest.raises(DegreeTooLarge):
        count_by_convolution(Q(8, (8,), 7, transitive=False))
    with pytest.raises(ValueError):
        count_by_convolution(Q(3, (3,), 2, transitive=True))
    with pytest.raises(ValueError):
        Q(3, (2, 2), 1)


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="extension not built")
@pytest.mark.parametrize("d,k,mono", [(3, 4, False), (4, 5, True), (5, 3, False)])
def test_backends_agree(d, k, mono):
    seeds = [(symmetric_group(d).identity, 0)]
    assert kernels.enumerate_tuples(d, seeds, k, mono, "python") == kernels.enumerate_tuples(d, seeds, k, mono, "compiled")
    vec = list(range(symmetric_group(d).order))
    assert kernels.apply_transpositions(d, vec, name="python") == kernels.apply_transpositions(d, vec, name="compiled")
    assert list(kernels.connectivity(d, "python")) == list(kernels.connectivity(d, "compiled"))


def test_large_convolution_entries_stay_exact():
    # beyond int64 the dispatcher hands the step to the Python kernel
    big = [2**70] + [0] * (symmetric_group(3).order - 1)
    out = kernels.apply_transpositions(3, big)
    assert sum(out) == 3 * 2**70


def test_degree_one_is_transitive():
    assert count_factorizations(Q(1, (1,), 0)) == 1
    assert connected_count(1, (1,), 0) == 1


def test_json():
    res = oracle.evaluate(Q(3, (2, 1), 3))
    assert res.to_json() == {
        "query": {"d": 3, "target": [2, 1], "fixed": False, "k": 3, "transitive": True,
                  "monotone": False, "orbifold_r": None},
        "count": "24",
        "weighted": "4",
        "method": "exhaustive",
    }
    assert oracle.evaluate(Q(3, (2, 1), 3, transitive=False)).method == "convolution"
    assert oracle.evaluate(Q(3, (2, 1), 3, monotone=True)).method == "dp"
