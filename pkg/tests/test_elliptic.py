"""Jacobi kernel: identities, limits, and two independent oracles
(adaptive quadrature of the defining integral, and scipy.special)."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import ellipj, ellipk

from rotheta.elliptic import (EllipticModulus, complete_K, jacobi,
                              modulus_to_parameter)

params = st.floats(min_value=0.0, max_value=0.999, allow_nan=False)
args = st.floats(min_value=-20.0, max_value=20.0, allow_nan=False)


def test_complete_K_trivial_and_edges():
    assert complete_K(0.0) == pytest.approx(math.pi / 2.0, abs=1e-15)
    with pytest.raises(ValueError):
        complete_K(1.0)            # logarithmic divergence
    with pytest.raises(ValueError):
        complete_K(-0.1)
    with pytest.raises(ValueError):
        complete_K(1.5)


def test_complete_K_matches_quadrature():
    for m in (0.1, 0.5, 0.9, 0.99):
        ref, err = quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2),
                        0.0, math.pi / 2.0, epsabs=1e-13, epsrel=1e-13)
        assert err < 1e-12
        assert complete_K(m) == pytest.approx(ref, abs=1e-12)


@given(params)
def test_complete_K_matches_scipy(m):
    assert complete_K(m) == pytest.approx(float(ellipk(m)), rel=1e-12)


def test_jacobi_at_zero():
    for m in (0.0, 0.3, 0.8, 1.0):
        assert jacobi(0.0, m) == (0.0, 1.0, 1.0)


def test_jacobi_degenerate_limits():
    for u in (-2.3, 0.4, 1.9):
        assert jacobi(u, 0.0) == (math.sin(u), math.cos(u), 1.0)
        sech = 1.0 / math.cosh(u)
        assert jacobi(u, 1.0) == (math.tanh(u), sech, sech)


@given(args, params)
def test_pythagorean_identities(u, m):
    sn, cn, dn = jacobi(u, m)
    assert abs(sn * sn + cn * cn - 1.0) <= 1e-12
    assert abs(m * sn * sn + dn * dn - 1.0) <= 1e-12
    assert abs(sn) <= 1.0 + 1e-12 and dn >= 0.0


@given(args, st.floats(min_value=0.05, max_value=0.95))
def test_real_periodicity(u, m):
    per = 4.0 * complete_K(m)
    sn1, cn1, dn1 = jacobi(u, m)
    sn2, cn2, dn2 = jacobi(u + per, m)
    assert sn1 == pytest.approx(sn2, abs=1e-10)
    assert cn1 == pytest.approx(cn2, abs=1e-10)
    assert dn1 == pytest.approx(dn2, abs=1e-10)


def test_sn_by_inverting_the_incomplete_integral():
    # u = integral_0^am (1 - m sin^2 t)^(-1/2) dt defines the amplitude am(u);
    # sn = sin(am).  Solve for am by bracketed root finding on the quadrature.
    m, u = 0.7, 1.3

    def incomplete(am):
        val, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2),
                      0.0, am, epsabs=1e-13, epsrel=1e-13)
        return val

    am = brentq(lambda a: incomplete(a) - u, 0.0, math.pi / 2.0, xtol=1e-14)
    sn, cn, dn = jacobi(u, m)
    assert sn == pytest.approx(math.sin(am), abs=1e-10)
    assert cn == pytest.approx(math.cos(am), abs=1e-10)
    assert dn == pytest.approx(math.sqrt(1.0 - m * math.sin(am) ** 2), abs=1e-10)


@settings(max_examples=150)
@given(args, params)
def test_jacobi_matches_scipy(u, m):
    sn, cn, dn = jacobi(u, m)
    s2, c2, d2, _ = ellipj(u, m)
    assert sn == pytest.approx(float(s2), abs=2e-10)
    assert cn == pytest.approx(float(c2), abs=2e-10)
    assert dn == pytest.approx(float(d2), abs=2e-10)


def test_grid_identity_sweep():
    # the acceptance-grade sweep in miniature: 2000 points, 1e-12
    us = np.linspace(-8.0, 8.0, 500)
    for m in (0.1, 0.5, 0.9, 0.999):
        worst = max(abs(jacobi(u, m)[0] ** 2 + jacobi(u, m)[1] ** 2 - 1.0) for u in us)
        assert worst <= 1e-12


def test_modulus_conversion_is_square():
    assert modulus_to_parameter(0.5) == 0.25
    assert EllipticModulus(0.25).m == 0.25
    with pytest.raises(ValueError):
        EllipticModulus(1.5)
