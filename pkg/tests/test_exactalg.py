from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bethe_q0.exactalg import (
    IntMatrix,
    LaurentPoly,
    TruncSeries,
    det,
    series_jacobian,
    series_solve_v,
    smith_normal_form,
)


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for p in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total


def square_matrices(max_dim=6, lo=-9, hi=9):
    return st.integers(1, max_dim).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )


def test_det_examples():
    assert det([[3, 1], [1, 3]]) == 8
    assert det([[1]]) == 1
    assert det([[7, 1, 1], [1, 7, 1], [1, 1, 7]]) == 324
    assert det(IntMatrix(0, 0, ())) == 1


def test_det_rejects_non_square():
    with pytest.raises(ValueError):
        det([[1, 2, 3], [4, 5, 6]])


@settings(max_examples=200, deadline=None)
@given(square_matrices(max_dim=5))
def test_det_matches_leibniz(rows):
    assert det(rows) == leibniz_det(rows)


def test_det_needs_pivot_swap():
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[0, 0, 1], [0, 1, 0], [1, 0, 0]]) == -1


@pytest.mark.parametrize(
    "rows, diag",
    [
        ([[3, 1], [1, 3]], (1, 8)),
        ([[2, 0], [0, 2]], (2, 2)),
        ([[1]], (1,)),
        ([[2, 0], [0, 3]], (1, 6)),
        ([[0, 0], [0, 0]], (0, 0)),
    ],
)
def test_snf_examples(rows, diag):
    assert smith_normal_form(rows).invariant_factors == diag


@settings(max_examples=500, deadline=None)
@given(square_matrices())
def test_snf_reconstructs_input(rows):
    a = IntMatrix.from_rows(rows)
    snf = smith_normal_form(a)
    n = a.rows
    assert snf.U @ snf.S @ snf.V == a
    assert snf.U @ snf.U_inv == IntMatrix.identity(n)
    assert snf.V @ snf.V_inv == IntMatrix.identity(n)
    assert abs(det(snf.U)) == 1 and abs(det(snf.V)) == 1
    assert snf.S.is_diagonal()
    d = snf.invariant_factors
    assert all(x >= 0 for x in d)
    for x, y in zip(d, d[1:]):
        assert (y == 0) if x == 0 else (y % x == 0)
    prod = 1
    for x in d:
        prod *= x
    assert prod == abs(det(a))


@settings(max_examples=100, deadline=None)
@given(
    st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
        lambda rc: st.lists(
            st.lists(st.integers(-9, 9), min_size=rc[1], max_size=rc[1]),
            min_size=rc[0],
            max_size=rc[0],
        )
    )
)
def test_snf_rectangular(rows):
    a = IntMatrix.from_rows(rows)
    snf = smith_normal_form(a)
    assert snf.U @ snf.S @ snf.V == a
    assert snf.S.is_diagonal()


laurents = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)


@given(laurents, laurents, laurents)
def test_laurent_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(laurents, laurents)
def test_laurent_product_is_convolution(a, b):
    prod = a * b
    for e in range(-12, 13):
        expected = sum(a.coeff(i) * b.coeff(e - i) for i in range(-6, 7))
        assert prod.coeff(e) == expected


def test_laurent_basics():
    x = LaurentPoly.monomial(1)
    assert (x + x ** -1) ** 2 == LaurentPoly({2: 1, 0: 2, -2: 1})
    assert LaurentPoly({0: 0, 3: 1}).coeffs == {3: 1}
    assert (x ** 3 + 2).mirror() == LaurentPoly({-3: 1, 0: 2})
    assert LaurentPoly({4: 1, 2: 5, -2: 7}).window(0, 3) == LaurentPoly({2: 5})
    assert str(LaurentPoly({1: 1, -1: -2})) == "x - 2*x^-1"
    with pytest.raises(ValueError):
        (x + 1) ** -1


def test_geometric_series():
    v = TruncSeries.variable(1, 3, 0)
    assert (1 - v) ** -1 == TruncSeries(1, 3, {(0,): 1, (1,): 1, (2,): 1, (3,): 1})


@pytest.mark.parametrize("beta", [-3, 0, 2, 5])
def test_negative_binomial_expansion(beta):
    from math import comb

    def gen_binom(x, n):
        out = Fraction(1)
        for j in range(n):
            out *= Fraction(x - j, j + 1)
        return out

    z = TruncSeries.variable(1, 6, 0)
    series = (1 - z) ** (-beta - 1)
    for n in range(7):
        assert series.coeff((n,)) == gen_binom(beta + n, n)
    if beta >= 0:
        assert series.coeff((2,)) == comb(beta + 2, 2)


def test_inverse_requires_unit():
    with pytest.raises(ZeroDivisionError):
        TruncSeries.variable(2, 3, 0).inverse()


@settings(max_examples=50, deadline=None)
@given(
    st.dictionaries(
        st.tuples(st.integers(0, 3), st.integers(0, 3)),
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        max_size=6,
    ),
    st.fractions(min_value=1, max_value=3, max_denominator=3),
)
def test_inverse_round_trip(coeffs, c0):
    coeffs = dict(coeffs)
    coeffs[(0, 0)] = c0
    s = TruncSeries(2, 5, coeffs)
    assert s * s.inverse() == TruncSeries.one(2, 5)


def test_coefficient_beyond_order_is_an_error():
    with pytest.raises(ValueError):
        TruncSeries.one(2, 3).coeff((2, 2))


def test_truncation_drops_high_degree():
    x, y = TruncSeries.variables(2, 2)
    assert (x * y * x).is_zero()
    assert ((x + y) ** 2).coeff((1, 1)) == 2


def test_jacobian_of_identity():
    for n in (1, 2, 3):
        assert series_jacobian(TruncSeries.variables(n, 4)) == TruncSeries.one(n, 3)


def test_jacobian_polynomial_map():
    # f = (x + x*y, y + x^2): det = (1 + y) * 1 - x * 2x
    x, y = TruncSeries.variables(2, 4)
    jac = series_jacobian([x + x * y, y + x * x])
    assert jac == (1 + y - 2 * x * x).truncate(3)


def test_solve_v_examples():
    (v1,) = series_solve_v(1, 2)
    assert v1 == TruncSeries(1, 2, {(1,): 1, (2,): -2})
    v = series_solve_v(2, 1)
    assert v == TruncSeries.variables(2, 1)


@pytest.mark.parametrize("l, order", [(1, 6), (2, 5), (3, 4)])
def test_solve_v_round_trip(l, order):
    v = series_solve_v(l, order)
    w = TruncSeries.variables(l, order)
    for i in range(1, l + 1):
        back = v[i - 1]
        for k in range(1, l + 1):
            back = back * (1 - v[k - 1]) ** (-2 * min(i, k))
        assert back == w[i - 1]
        # linear part is w_i
        for j in range(l):
            e = [0] * l
            e[j] = 1
            assert v[i - 1].coeff(e) == (1 if j == i - 1 else 0)


def test_first_difference():
    x, y = TruncSeries.variables(2, 3)
    assert (x + y).first_difference(y + x) is None
    assert (x + 2 * y * y).first_difference(x + 3 * y * y) == ((0, 2), 2, 3)
