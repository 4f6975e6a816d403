"""Vector fields and first integrals.

The conservation oracle here is deliberately primitive: partial derivatives
of H by central differences of `FirstIntegral.eval` (never `.partials`),
dotted with the flow.  Anything conserved must kill that dot product to
rounding; the published theta=1/2 and theta=1 forms must NOT.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rotheta.field import (SingularLineError, build_first_integral,
                           conservation_defect, eval_f, eval_g, eval_f_prime,
                           published_first_integral, rhs_regular, rhs_singular)
from rotheta.params import WaveParams

T14 = Fraction(1, 4)
T12 = Fraction(1, 2)
T11 = Fraction(1, 1)

coeff = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


def wp_of(theta, C1, C2, C3, K):
    return WaveParams(theta=theta, C1=C1, C2=C2, C3=C3, K=K)


# --- f, g, and the two rhs forms -------------------------------------------


@given(coeff, coeff, coeff, coeff)
def test_f_vanishes_at_zero(C1, C2, C3, K):
    assert eval_f(wp_of(T14, C1, C2, C3, K), 0.0) == 0.0


@given(coeff, coeff, coeff, st.floats(min_value=-5, max_value=5, allow_nan=False))
def test_f_factors_through_g(C2, C3, K, phi):
    wp = wp_of(T14, 0.0, C2, C3, K)
    scale = 1.0 + abs(phi) ** 4 * (1.0 + abs(C3))
    assert abs(eval_f(wp, phi) - phi * eval_g(wp, phi)) <= 1e-12 * scale


def test_rhs_forms_agree_off_line():
    wp = wp_of(T14, 0.3, -0.7, -1.1, 0.4)
    for phi, y in [(-1.4, 0.8), (0.2, -0.5), (2.0, 1.7)]:
        den = float(wp.theta) * phi - float(wp.C1)
        xs = rhs_singular(wp, (phi, y))
        xt = rhs_regular(wp, (phi, y))
        assert xs[0] == pytest.approx(xt[0] / den, rel=1e-14)
        assert xs[1] == pytest.approx(xt[1] / den, rel=1e-14)


def test_rhs_singular_raises_on_line():
    wp = wp_of(T14, 0.25, 0.0, -1.0, 1.0)
    with pytest.raises(SingularLineError):
        rhs_singular(wp, (1.0, 0.5))       # phi = C1/theta = 1


def test_origin_is_stationary_for_any_c1():
    wp = wp_of(T14, 0.7, 1.0, -1.0, 2.0)
    assert rhs_regular(wp, (0.0, 0.0)) == (0.0, 0.0)


def test_phi_frozen_on_line():
    wp = wp_of(T14, 0.5, 0.3, -1.0, 1.0)
    s = float(wp.singular_line)
    for y in (-2.0, -0.1, 1.3):
        assert rhs_regular(wp, (s, y))[0] == 0.0


def test_line_pair_is_stationary():
    # at theta = 1/4 the on-line equilibria are (4C1, +-2 sqrt(f(4C1)))
    wp = wp_of(T14, 0.3, 2.0, -1.0, 3.0)
    s = float(wp.singular_line)
    fs = eval_f(wp, s)
    assert fs > 0.0
    ystar = 2.0 * math.sqrt(fs)
    for y in (ystar, -ystar):
        pdot, ydot = rhs_regular(wp, (s, y))
        assert abs(pdot) <= 1e-14 and abs(ydot) <= 1e-12


# --- conservation of the constructed first integral ------------------------


def fd_flow_derivative(fi, wp, phi, y, step=1e-6):
    """Finite-difference dH/dtau, sharing no code with fi.partials."""
    hp = (fi.eval(phi + step, y) - fi.eval(phi - step, y)) / (2 * step)
    hy = (fi.eval(phi, y + step) - fi.eval(phi, y - step)) / (2 * step)
    pdot, ydot = rhs_regular(wp, (phi, y))
    scale = max(1.0, abs(hp * pdot), abs(hy * ydot))
    return abs(hp * pdot + hy * ydot) / scale


@pytest.mark.parametrize("theta", [T14, T12, T11, Fraction(1, 3)])
def test_flow_derivative_vanishes(theta):
    wp = wp_of(theta, 0.4, -0.6, -1.2, 0.9)
    fi = build_first_integral(wp)
    s = float(wp.singular_line)
    worst = 0.0
    for dphi in (-1.9, -0.8, 0.7, 1.6):
        for y in (-1.1, 0.4, 1.8):
            worst = max(worst, fd_flow_derivative(fi, wp, s + dphi, y))
    # central differences at step 1e-6 floor out around 1e-10
    assert worst <= 5e-9


def test_quarter_theta_polynomial_matches_printed_form_exactly():
    # exact Fraction coefficients; the printed polynomial tail in ascending
    # powers phi^1..phi^6 (the phi^0 gauge constant is free)
    C1, C2, C3, K = (Fraction(3, 10), Fraction(2), Fraction(-1), Fraction(3))
    fi = build_first_integral(wp_of(T14, C1, C2, C3, K))
    printed_tail = [
        Fraction(0),                       # phi^1
        -2 * C1 * K,                       # phi^2
        (K - 2 * C1) / 3,                  # phi^3
        Fraction(1, 8) - C1 * C2,          # phi^4
        (C2 - 4 * C1 * C3) / 5,            # phi^5
        C3 / 6,                            # phi^6
    ]
    assert fi.phi_poly_coeffs()[1:] == printed_tail
    assert fi.y2_coeff == Fraction(-1, 8)
    assert fi.y2_power == 2
    assert fi.line == 4 * C1
    assert fi.log_coeff == 0 and fi.pole_coeffs == ()


def test_quarter_theta_H_zero_at_origin():
    # the printed polynomial has no constant term, so H(0, 0) = 0 in that
    # convention; the constructed H matches it up to a single gauge constant
    wp = wp_of(T14, 0.4, 1.0, -1.0, 2.0)
    printed = published_first_integral(wp)
    assert printed(0.0, 0.0) == 0.0
    fi = build_first_integral(wp)
    gauge = fi.eval(0.0, 0.0) - printed(0.0, 0.0)
    for phi, y in [(-1.2, 0.5), (0.8, -1.1), (2.4, 0.3)]:
        assert fi.eval(phi, y) - printed(phi, y) == pytest.approx(gauge, abs=1e-9)


def test_half_theta_log_coefficient_vanishes_with_c1():
    fi = build_first_integral(wp_of(T12, Fraction(0), Fraction(9, 10),
                                    Fraction(-1), Fraction(-1, 20)))
    assert fi.log_coeff == 0
    assert fi.pole_coeffs == ()


def test_half_theta_eval_raises_on_line():
    wp = wp_of(T12, 0.3, 0.5, -1.0, 0.2)
    fi = build_first_integral(wp)
    assert fi.log_coeff != 0
    with pytest.raises(SingularLineError):
        fi.eval(0.6, 1.0)                  # phi = 2 C1


def test_full_theta_carries_pole():
    fi = build_first_integral(wp_of(T11, 0.5, 0.3, -1.0, 0.7))
    assert fi.y2_power == -1
    assert any(j == 1 for j, _ in fi.pole_coeffs)


unit = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([T14, T12, T11]), unit, unit,
       st.floats(min_value=-2.0, max_value=-0.2), unit)
def test_construction_conserved_for_random_parameters(theta, C1, C2, C3, K):
    wp = wp_of(theta, C1, C2, C3, K)
    fi = build_first_integral(wp)      # internal spot check runs here too
    s = float(wp.singular_line)
    # 1e-7 sits well above the FD noise floor (~2e-8 at |H| ~ 1e2) and far
    # below the >= 1e-3 defect of a non-conserved candidate
    assert fd_flow_derivative(fi, wp, s + 1.3, 0.8) <= 1e-7


# --- the published closed forms, audited as black boxes ---------------------

PROBES = [(0.9, 0.4), (-0.7, 1.1), (1.8, -0.6), (0.3, 0.9)]


def shifted_probes(wp):
    s = float(wp.singular_line)
    return [(s + dphi, y) for dphi, y in PROBES]


def test_published_quarter_theta_is_conserved():
    wp = wp_of(T14, 0.3, 2.0, -1.0, 3.0)
    defect = conservation_defect(published_first_integral(wp), wp, shifted_probes(wp))
    assert defect <= 1e-6


@pytest.mark.parametrize("theta,C", [
    (T12, dict(C1=0.3, C2=0.5, C3=-1.0, K=0.2)),
    (T11, dict(C1=0.5, C2=0.3, C3=-1.0, K=0.7)),
])
def test_published_forms_flagged_not_conserved(theta, C):
    wp = wp_of(theta, **C)
    probes = shifted_probes(wp)
    published = conservation_defect(published_first_integral(wp), wp, probes)
    machine = conservation_defect(build_first_integral(wp).eval, wp, probes)
    assert published >= 1e-3               # defective as printed
    assert machine <= 1e-6                 # replacement actually conserved


def test_validity_note_mentions_the_discrepancy():
    note = build_first_integral(wp_of(T12, 0.3, 0.5, -1.0, 0.2)).validity_note
    assert "not conserved" in note


# --- partials agree with the finite-difference stencil ----------------------


@given(st.floats(min_value=-2, max_value=2, allow_nan=False),
       st.floats(min_value=-2, max_value=2, allow_nan=False))
def test_partials_match_finite_differences(dphi, y):
    wp = wp_of(T11, 0.4, 0.2, -0.8, 0.6)
    fi = build_first_integral(wp)
    s = float(wp.singular_line)
    phi = s + (dphi if abs(dphi) > 0.3 else 0.3 + abs(dphi))
    hp, hy = fi.partials(phi, y)
    step = 1e-6
    hp_fd = (fi.eval(phi + step, y) - fi.eval(phi - step, y)) / (2 * step)
    hy_fd = (fi.eval(phi, y + step) - fi.eval(phi, y - step)) / (2 * step)
    scale = 1.0 + abs(hp) + abs(hy)
    assert abs(hp - hp_fd) <= 2e-7 * scale
    assert abs(hy - hy_fd) <= 2e-7 * scale
