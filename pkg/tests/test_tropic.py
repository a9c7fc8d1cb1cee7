from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeminor.poly import ExactPoly, PolyMatrix
from treeminor.radicals import QRad
from treeminor.tropic import PrecisionError, PuiseuxTrunc, cholesky, series_det

F = Fraction


# --- QRad --------------------------------------------------------------------


def test_qrad_square_extraction():
    assert str(QRad.sqrt_of(8)) == "2*sqrt(2)"
    assert str(QRad.sqrt_of(F(3, 2))) == "(1/2)*sqrt(6)"
    assert QRad.sqrt_of(9) == F(3)
    assert QRad.sqrt_of(0) == 0


def test_qrad_requires_squarefree_radicands():
    with pytest.raises(ValueError):
        QRad({4: F(1)})
    with pytest.raises(ValueError):
        QRad.sqrt_of(F(-1, 2))


def test_qrad_products_do_not_nest():
    r2, r3 = QRad.sqrt_of(2), QRad.sqrt_of(3)
    assert r2 * r2 == 2
    assert r2 * r3 == QRad.sqrt_of(6)
    assert (1 + r2) * (1 - r2) == -1
    assert 2 * r2 + QRad.sqrt_of(8) == QRad.sqrt_of(32)


def test_qrad_inverse():
    r2, r3 = QRad.sqrt_of(2), QRad.sqrt_of(3)
    assert (1 + r2).inverse() == r2 - 1
    x = r2 + r3
    assert x * x.inverse() == 1
    y = QRad.of(F(1, 2)) + r2 + QRad.sqrt_of(6)
    assert y * y.inverse() == 1
    assert (QRad.of(1) / (1 + r2)) == r2 - 1
    with pytest.raises(ZeroDivisionError):
        QRad().inverse()


def test_qrad_exact_sign_near_zero():
    r2 = QRad.sqrt_of(2)
    # 577/408 is a convergent of sqrt(2), a hair above it
    assert (r2 - F(577, 408)).sign() == -1
    assert (r2 - F(1)).sign() == 1
    assert QRad().sign() == 0
    assert r2 > F(14, 10)
    assert r2 < F(15, 10)


def test_qrad_as_fraction():
    assert QRad.of(F(3, 2)).as_fraction() == F(3, 2)
    with pytest.raises(ValueError):
        QRad.sqrt_of(2).as_fraction()


# --- series basics -------------------------------------------------------------


def test_series_rendering():
    s = PuiseuxTrunc.from_terms(
        [(F(3, 2), 2), (F(0), 1), (F(-1), F(-1, 8))], cutoff=F(-5, 2)
    )
    assert str(s) == "2*t^(3/2) + 1 - (1/8)*t^(-1) + O(t^(-5/2))"
    assert str(PuiseuxTrunc.zero()) == "0"
    assert str(PuiseuxTrunc.t_power(1).truncate(0)) == "t + O(1)"
    assert str(PuiseuxTrunc.zero().truncate(-2)) == "0"  # exact zero stays exact


def test_series_valuation_and_precision():
    s = PuiseuxTrunc.from_poly(ExactPoly.t_power(3) - ExactPoly.t_power(1))
    assert s.valuation() == 3
    assert s.sign() == 1
    assert PuiseuxTrunc.zero().valuation() is None
    hidden = PuiseuxTrunc.constant(1).truncate(2)  # the 1 fell below the cutoff
    assert hidden.is_truncated_zero()
    with pytest.raises(PrecisionError, match="insufficient precision"):
        hidden.valuation()
    with pytest.raises(PrecisionError):
        hidden.sign()
    with pytest.raises(ValueError):
        PuiseuxTrunc.zero().leading()


def test_series_mul_cutoff_propagation():
    a = PuiseuxTrunc.constant(1).truncate(F(-1))  # 1 + O(t^-1)
    b = PuiseuxTrunc.t_power(2)  # exact
    p = a * b
    assert p.terms() == [(F(2), F(1))]
    assert p.cutoff == F(1)


def test_series_comparison():
    a = PuiseuxTrunc.from_poly(ExactPoly.t_power(2) - ExactPoly.t_power(1))
    b = PuiseuxTrunc.t_power(1)
    assert a > b
    assert b < a
    t_trunc = PuiseuxTrunc.t_power(1).truncate(0)
    with pytest.raises(PrecisionError):
        t_trunc < PuiseuxTrunc.t_power(1)


def test_series_division_frozen():
    num = PuiseuxTrunc.t_power(1)
    den = PuiseuxTrunc.from_terms([(F(1), 1), (F(0), 1)])  # t + 1
    q = num.divide(den, cutoff=F(-4))
    assert str(q) == "1 - t^(-1) + t^(-2) - t^(-3) + O(t^(-4))"
    with pytest.raises(ValueError):
        num / den  # exact non-monomial divisor without a cutoff
    assert str(num / PuiseuxTrunc.t_power(3, 2)) == "(1/2)*t^(-2)"


def test_series_sqrt_frozen():
    s = PuiseuxTrunc.from_terms([(F(2), 1), (F(1), 1)])  # t^2 + t
    r = s.sqrt(cutoff=F(-2))
    assert str(r) == "t + 1/2 - (1/8)*t^(-1) + O(t^(-2))"
    assert str(PuiseuxTrunc.t_power(2, 4).sqrt()) == "2*t"
    assert str(PuiseuxTrunc.t_power(1).sqrt()) == "t^(1/2)"
    resq = r * r - s
    assert not resq.terms()  # zero up to the carried cutoff


def test_series_sqrt_irrational_lead():
    s = PuiseuxTrunc.from_terms([(F(2), F(3, 2)), (F(0), 1)])
    r = s.sqrt(cutoff=F(-1))
    e, c = r.leading()
    assert e == 1
    assert c == QRad.sqrt_of(F(3, 2))
    assert "sqrt(6)" in str(r)
    with pytest.raises(ArithmeticError):
        PuiseuxTrunc.from_terms([(F(2), F(-1))]).sqrt()


@st.composite
def small_polys(draw):
    n = draw(st.integers(0, 4))
    terms = []
    for _ in range(n):
        e = F(draw(st.integers(-3, 3)), draw(st.integers(1, 2)))
        c = F(draw(st.integers(-4, 4)), draw(st.integers(1, 3)))
        terms.append((e, c))
    return ExactPoly.from_terms(terms)


@settings(max_examples=60, deadline=None)
@given(small_polys(), small_polys())
def test_series_exact_ops_match_poly(a, b):
    sa, sb = PuiseuxTrunc.from_poly(a), PuiseuxTrunc.from_poly(b)
    assert sa + sb == PuiseuxTrunc.from_poly(a + b)
    assert sa * sb == PuiseuxTrunc.from_poly(a * b)
    assert sa - sb == PuiseuxTrunc.from_poly(a - b)


@settings(max_examples=40, deadline=None)
@given(small_polys(), small_polys())
def test_series_division_roundtrip(a, b):
    if not list(b.terms()):
        return
    prod = PuiseuxTrunc.from_poly(a * b)
    got = prod.divide(PuiseuxTrunc.from_poly(b), cutoff=F(-6))
    diff = got - PuiseuxTrunc.from_poly(a)
    assert not diff.terms()
    assert diff.is_exact_zero() or diff.cutoff is not None


# --- matrices ------------------------------------------------------------------


def test_series_det_matches_poly():
    a = ExactPoly.t_power(2) + ExactPoly.one()
    b = ExactPoly.t_power(1)
    c = ExactPoly.t_power(3)
    d = ExactPoly.constant(F(1, 2))
    grid = [[PuiseuxTrunc.from_poly(x) for x in row] for row in [[a, b], [c, d]]]
    assert series_det(grid) == PuiseuxTrunc.from_poly(a * d - b * c)


def test_cholesky_exact_integer_factor():
    t = ExactPoly.t_power(1)
    one, zero = ExactPoly.one(), ExactPoly.zero()
    a = [[ExactPoly.constant(2), zero, zero], [t, one, zero], [one, t, ExactPoly.constant(3)]]
    m = [[sum((a[i][k] * a[j][k] for k in range(3)), zero) for j in range(3)] for i in range(3)]
    sym = PolyMatrix(m, kind="symmetric")
    low = cholesky(sym)
    for i in range(3):
        for j in range(3):
            assert low[i][j] == PuiseuxTrunc.from_poly(a[i][j])


def test_cholesky_identity_and_diagonal():
    one, zero = ExactPoly.one(), ExactPoly.zero()
    low = cholesky([[one, zero], [zero, one]])
    assert low[0][0] == PuiseuxTrunc.constant(1)
    assert low[1][0].is_exact_zero()
    d = cholesky([[ExactPoly.constant(4), zero], [zero, ExactPoly.t_power(2)]])
    assert d[0][0] == PuiseuxTrunc.constant(2)
    assert d[1][1] == PuiseuxTrunc.t_power(1)


def test_cholesky_with_window():
    t2p1 = ExactPoly.t_power(2) + ExactPoly.one()
    t = ExactPoly.t_power(1)
    m = [[t2p1, t], [t, ExactPoly.constant(4)]]
    low = cholesky(m, window=F(8))
    assert low[0][0].leading() == (F(1), F(1))
    assert low[0][0].terms()[1] == (F(-1), F(1, 2))
    # residual L L^T - m vanishes to the working precision
    for i in range(2):
        for j in range(2):
            got = sum(
                (low[i][k] * low[j][k] for k in range(2)), PuiseuxTrunc.zero()
            )
            diff = got - PuiseuxTrunc.from_poly(m[i][j])
            assert not diff.terms()


def test_cholesky_failure_modes():
    zero = ExactPoly.zero()
    with pytest.raises(ArithmeticError, match="negative"):
        cholesky([[ExactPoly.constant(-4)]])
    with pytest.raises(ArithmeticError, match="singular"):
        cholesky([[zero]])
    with pytest.raises(PrecisionError):
        cholesky(
            [[ExactPoly.one(), zero], [zero, ExactPoly.t_power(-20)]],
            window=F(4),
        )
    with pytest.raises(ValueError):
        cholesky([[ExactPoly.one() + ExactPoly.t_power(2)]])  # needs a window
