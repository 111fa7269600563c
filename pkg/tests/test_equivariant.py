"""Equivariant complexes: map formulas, grading extensions, triangle identities."""

from fractions import Fraction
from random import Random

import pytest

from floergamma.equivariant import (
    BarElement,
    CheckElement,
    HatElement,
    Window,
    WindowOverflowError,
    bar_add,
    check_add,
    check_d,
    check_sub,
    deg_bar,
    hat_d,
    htpy_k,
    map_i,
    map_j,
    map_p,
    mdeg_bar,
    mdeg_check,
    mdeg_hat,
    verify_triangle,
    x_action_bar,
    x_action_check,
    x_action_hat,
)
from floergamma.floer_datum import load_datum
from floergamma.novikov import INF, NovikovElement

from datagen import random_datum

WINDOW = Window(6, 4)


def nov(c, e):
    return NovikovElement.term(Fraction(c), Fraction(e))


def one():
    return NovikovElement.one()


@pytest.fixture(scope="module")
def s3():
    return load_datum("s3")


@pytest.fixture(scope="module")
def sigma():
    return load_datum("sigma_2_3_5")


@pytest.fixture(scope="module")
def neg_sigma():
    return load_datum("neg_sigma_2_3_5")


def test_window_bounds():
    with pytest.raises(ValueError):
        Window(1, 4)
    with pytest.raises(ValueError):
        Window(6, 0)


def test_hat_d_examples(s3, neg_sigma):
    assert hat_d(s3, HatElement({}, {0: one(), 1: one()})).is_zero()
    out = hat_d(neg_sigma, HatElement({}, {0: one()}))
    assert out.chain == {"alpha_star": nov(-1, "1/120")} and not out.poly
    out = hat_d(neg_sigma, HatElement({}, {1: one()}))
    assert out.chain == {"beta_star": nov(-8, "49/120")} and not out.poly


def test_check_d_examples(sigma, s3):
    out = check_d(sigma, CheckElement(sigma.basis_vector("alpha"), {}), WINDOW)
    assert not out.chain and out.tail == {-1: nov(1, "1/120")}
    out = check_d(sigma, CheckElement(sigma.basis_vector("beta"), {}), WINDOW)
    assert out.tail == {-2: nov(8, "49/120")}
    assert check_d(s3, CheckElement({}, {-1: one()}), WINDOW).is_zero()


def test_x_action_examples(sigma, neg_sigma):
    out = x_action_hat(sigma, HatElement(sigma.basis_vector("beta"), {}), WINDOW)
    assert out.chain == {"alpha": nov(8, "2/5")} and not out.poly
    out = x_action_hat(sigma, HatElement(sigma.basis_vector("alpha"), {}), WINDOW)
    assert not out.chain and out.poly == {0: nov(1, "1/120")}
    out = x_action_check(neg_sigma, CheckElement({}, {-1: one()}))
    assert out.chain == {"alpha_star": nov(1, "1/120")} and not out.tail


def test_x_action_overflow():
    datum = load_datum("s3")
    with pytest.raises(WindowOverflowError):
        x_action_hat(datum, HatElement({}, {WINDOW.N: one()}), WINDOW)
    with pytest.raises(WindowOverflowError):
        x_action_bar(BarElement({WINDOW.N: one()}), WINDOW)
    shifted = x_action_bar(BarElement({-WINDOW.T: one()}), WINDOW)
    assert shifted.coeffs == {-WINDOW.T + 1: one()}


def test_map_i_examples(s3, neg_sigma):
    out = map_i(s3, BarElement({-1: one(), 2: one()}))
    assert not out.chain and out.tail == {-1: one()}
    out = map_i(neg_sigma, BarElement({0: one()}))
    assert out.chain == {"alpha_star": nov(1, "1/120")} and not out.tail
    out = map_i(neg_sigma, BarElement({1: one()}))
    assert out.chain == {"beta_star": nov(8, "49/120")}


def test_map_j_examples(sigma):
    e = CheckElement(sigma.basis_vector("alpha"), {-1: one()})
    assert map_j(e) == HatElement(sigma.basis_vector("alpha"), {})
    assert map_j(CheckElement({}, {-2: one()})).is_zero()
    assert map_j(check_d(sigma, CheckElement(sigma.basis_vector("alpha"), {}),
                         WINDOW)).is_zero()


def test_map_p_examples(sigma, s3):
    out = map_p(sigma, HatElement(sigma.basis_vector("alpha"), {}), WINDOW)
    assert out.coeffs == {-1: nov(1, "1/120")}
    out = map_p(sigma, HatElement(sigma.basis_vector("beta"), {2: one()}), WINDOW)
    assert out.coeffs == {-2: nov(8, "49/120"), 2: one()}
    out = map_p(s3, HatElement({}, {0: one(), 1: one()}), WINDOW)
    assert out.coeffs == {0: one(), 1: one()}


def test_deg_and_mdeg_examples():
    assert deg_bar(BarElement({-3: nov(1, "1/2"), 1: nov(2, 0)})) == 1
    with pytest.raises(ValueError):
        deg_bar(BarElement({}))
    assert mdeg_hat(HatElement({}, {0: nov(1, 1), 1: nov(1, -2)})) == -2
    assert mdeg_check(CheckElement({}, {-2: nov(1, 3)})) == 3
    assert mdeg_check(CheckElement({}, {})) == INF
    assert mdeg_bar(BarElement({-3: nov(1, 5), -1: nov(1, 2)})) == 2
    assert mdeg_bar(BarElement({-2: nov(1, 7), 1: nov(1, 4)})) == 4
    assert mdeg_bar(BarElement({})) == INF


def test_mdeg_hat_prefers_poly(sigma):
    e = HatElement(sigma.basis_vector("alpha"), {1: nov(1, 3)})
    assert mdeg_hat(e) == 3
    e = HatElement({"alpha": nov(1, "-1/120")}, {})
    assert mdeg_hat(e) == Fraction(-1, 120)


def test_triangle_fixtures():
    for name, window in (("sigma_2_3_5", Window(6, 4)),
                         ("neg_sigma_2_3_5", Window(6, 4)),
                         ("s3", Window(3, 2)),
                         ("remark_nonpositive", Window(6, 4))):
        rep = verify_triangle(load_datum(name), window)
        assert rep.ok, (name, rep.failures)


def test_triangle_random_data():
    rng = Random(23)
    for _ in range(30):
        datum = random_datum(rng)
        rep = verify_triangle(datum, WINDOW)
        assert rep.ok, rep.failures


def test_triangle_window_stability():
    rng = Random(29)
    for _ in range(5):
        datum = random_datum(rng)
        assert verify_triangle(datum, Window(6, 4)).ok
        assert verify_triangle(datum, Window(8, 6)).ok


def test_pj_equals_minus_k_checkd():
    rng = Random(31)
    for _ in range(10):
        datum = random_datum(rng)
        for g in datum.names():
            e = CheckElement(datum.basis_vector(g), {-1: nov(2, "1/2")})
            lhs = map_p(datum, map_j(e), WINDOW)
            rhs = htpy_k(check_d(datum, e, WINDOW))
            assert bar_add(lhs, rhs).is_zero()


def test_x_equivariance_of_i_and_p(sigma):
    z = BarElement({0: nov(3, "1/2"), -2: one()})
    lhs = map_i(sigma, x_action_bar(z, WINDOW))
    rhs = x_action_check(sigma, map_i(sigma, z))
    assert check_sub(lhs, rhs).is_zero()
    e = HatElement(sigma.basis_vector("beta"), {1: one()})
    lhs = map_p(sigma, x_action_hat(sigma, e, WINDOW), WINDOW)
    rhs = x_action_bar(map_p(sigma, e, WINDOW), WINDOW)
    # compare inside the window interior: the shift loses slot -T
    interior = {i for i in range(-WINDOW.T + 1, WINDOW.N + 1)}
    assert {i: c for i, c in lhs.coeffs.items() if i in interior} == \
        {i: c for i, c in rhs.coeffs.items() if i in interior}
