"""Bell polynomials: the two construction routes and the seed oracle."""

import math

import pytest

from dresschain.bell import (
    BellTable,
    bell_generalized_explicit,
    bell_generalized_recurrence,
    bell_standard,
)
from dresschain.closedform import tanh_sigma_jet
from dresschain.diffpoly import DiffPoly

S0 = DiffPoly.sigma(0)
S1 = DiffPoly.sigma(1)
S2 = DiffPoly.sigma(2)


def test_standard_low_orders():
    assert bell_standard(0) == DiffPoly.constant(1)
    assert bell_standard(1) == S0
    assert bell_standard(2) == S1 + S0 ** 2
    assert bell_standard(3) == S2 + 3 * S0 * S1 + S0 ** 3


@pytest.mark.parametrize("route", [bell_generalized_recurrence, bell_generalized_explicit])
def test_generalized_base_row(route):
    for n in range(6):
        assert route(n, 0) == DiffPoly.constant(1)


@pytest.mark.parametrize("route", [bell_generalized_recurrence, bell_generalized_explicit])
def test_generalized_low_entries(route):
    assert route(2, 1) == S0
    assert route(2, 2) == 2 * S1 + S0 ** 2
    # single-term sum C(3,3) * B_{3,0} * sigma
    assert route(3, 1) == S0


def test_routes_agree_exactly_up_to_8():
    for n in range(9):
        for k in range(n + 1):
            assert bell_generalized_recurrence(n, k) == bell_generalized_explicit(n, k)


def test_index_errors():
    with pytest.raises(IndexError):
        bell_generalized_recurrence(2, 3)
    with pytest.raises(IndexError):
        bell_generalized_explicit(1, -1)


def test_seed_oracle_cosh():
    # with sigma = tanh x, B_n evaluates to cosh^{-1}(x) d^n cosh / dx^n
    for x in (0.3, 1.0, 2.5):
        jet = tanh_sigma_jet(x, 5)
        for n in range(6):
            ref = 1.0 if n % 2 == 0 else math.tanh(x)
            val = bell_standard(n).evaluate(jet)
            assert abs(val - ref) <= 1e-9 * abs(ref)


def test_table_consistency():
    table = BellTable(5)
    for n in range(6):
        assert table[n, 0] == DiffPoly.constant(1)
    for n in range(1, 6):
        # diagonal recurrence read as the diagonal definition
        assert table[n, n] == table[n - 1, n - 1].total_derivative() + bell_standard(n)
    explicit = BellTable(5, route="explicit")
    assert all(table[nk] == explicit[nk] for nk, _ in table.items())
    with pytest.raises(IndexError):
        table[6, 0]


def test_dt_consistency_second_order():
    # expanding the coefficient transform with this table reproduces
    # a0[1] = u - 2 s' for L = -D^2 + u (checked as exact polynomials)
    b22 = bell_generalized_recurrence(2, 2)
    b11 = bell_generalized_recurrence(1, 1)
    shift = (-1) * b22 + S0 * b11
    assert shift == -2 * S1
