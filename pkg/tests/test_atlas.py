"""Region classification, menu prediction, and numeric observation."""

from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, assume, settings
from hypothesis import strategies as st

from rotheta.atlas import (ObservedMenu, PRESENT, WaveMenu, classify_region,
                           menu_agrees, observe_wave_menu, predict_wave_menu,
                           sweep_singular_line)
from rotheta.equilibria import census
from rotheta.params import WaveParams


D1_REGIME = WaveParams(Fraction(1, 4), 0.3, 2.0, -1.0, 3.0)


def test_quarter_theta_window_label():
    wp = D1_REGIME
    lab = classify_region(wp, census(wp))
    assert (lab.theorem, lab.domain) == ("T1", "D1")
    assert lab.in_peakon_window
    assert not lab.boundary
    assert lab.singular_line_position == "0 < 4C1 < phi1"
    assert len(lab.phi_roots) == 1
    assert lab.phi_roots[0] == pytest.approx(2.6256, abs=1e-3)


def test_quarter_theta_outside_window():
    wp = replace(D1_REGIME, C1=0.8)        # line at 3.2 > phi1
    lab = classify_region(wp, census(wp))
    assert lab.domain == "D1"
    assert not lab.in_peakon_window
    assert lab.singular_line_position == "4C1 > phi1"
    menu = predict_wave_menu(lab)
    assert menu.peakon == 0 and menu.periodic_peakon == 0
    assert menu.smooth_any


def test_half_theta_labels():
    wp = WaveParams(Fraction(1, 2), 0.5, 0.9, -1.0, -0.05)
    lab = classify_region(wp, census(wp))
    assert (lab.theorem, lab.domain) == ("T2", "D5")
    assert not lab.in_peakon_window        # window language is theta = 1/4 only
    menu = predict_wave_menu(lab)
    assert menu.peakon == 0 and menu.periodic_peakon == 0 and menu.smooth_any

    wp0 = replace(wp, K=0.0)
    assert classify_region(wp0, census(wp0)).domain == "D6"

    wp3 = replace(wp, C1=0.0)
    lab3 = classify_region(wp3, census(wp3))
    assert (lab3.theorem, lab3.domain) == ("T3", "D3")
    menu3 = predict_wave_menu(lab3)
    assert menu3.solitary == 2 and menu3.periodic_smooth == 2


def test_zero_k_domain_at_quarter_theta():
    wp = replace(D1_REGIME, K=0.0)
    lab = classify_region(wp, census(wp))
    assert lab.domain == "D5"
    assert lab.in_peakon_window            # line at 1.2 < phi1 ~ 2.22
    menu = predict_wave_menu(lab)
    assert menu.peakon == 1 and menu.periodic_peakon == 2


def test_tangent_minimum_gives_d2():
    # g = -(1/6)(phi + 1)^2 (phi - 2): exact double root at the minimum
    wp = WaveParams(Fraction(1, 4), 0.3, 0.0, -1.0 / 6.0, 1.0 / 3.0)
    lab = classify_region(wp, census(wp))
    assert lab.domain == "D2"
    assert not lab.boundary
    assert lab.in_peakon_window
    menu = predict_wave_menu(lab)
    assert menu.peakon == 0 and menu.periodic_peakon == 2


def test_uncatalogued_parameters():
    wp = WaveParams(Fraction(1, 4), 0.3, 0.0, 1.0, 3.0)   # 4 C2^2 < 6 C3
    lab = classify_region(wp, census(wp))
    assert lab.domain == "UNCOVERED"
    menu = predict_wave_menu(lab)
    assert menu.peakon is PRESENT and not menu.smooth_any

    with pytest.raises(ValueError):
        classify_region(WaveParams(Fraction(1, 3), 0.3, 2.0, -1.0, 3.0),
                        census(WaveParams(Fraction(1, 3), 0.3, 2.0, -1.0, 3.0)))


def test_boundary_label_refuses_prediction():
    wp = replace(D1_REGIME, K=1e-8)        # inside the K ~ 0 boundary band
    lab = classify_region(wp, census(wp))
    assert lab.boundary
    with pytest.raises(ValueError):
        predict_wave_menu(lab)


@given(st.floats(min_value=0.05, max_value=0.55))
@settings(max_examples=30, deadline=None)
def test_label_is_locally_constant(c1):
    wp = replace(D1_REGIME, C1=c1)
    cen = census(wp)
    lab = classify_region(wp, cen)
    assume(not lab.boundary)
    s = 4.0 * c1
    assume(all(abs(s - e) > 1e-6 for e in (0.0,) + lab.phi_roots))
    wp2 = replace(wp, C1=c1 * (1.0 + 1e-9))
    assert classify_region(wp2, census(wp2)) == lab


def test_menu_agreement_semantics():
    claim = WaveMenu(peakon=1, periodic_peakon=2, smooth_any=True)
    assert menu_agrees(claim, ObservedMenu(peakon=2, periodic_peakon=2,
                                           periodic_smooth=1))
    assert not menu_agrees(claim, ObservedMenu(peakon=0, periodic_peakon=2,
                                               periodic_smooth=1))
    assert not menu_agrees(claim, ObservedMenu(peakon=1, periodic_peakon=2))
    zero = WaveMenu(peakon=0, periodic_peakon=0)
    assert not menu_agrees(zero, ObservedMenu(peakon=1))
    assert menu_agrees(WaveMenu(), ObservedMenu())     # vacuous claims


# --- observation ---------------------------------------------------------------


def test_window_regime_observes_claimed_menu():
    wp = D1_REGIME
    cen = census(wp)
    menu = predict_wave_menu(classify_region(wp, cen))
    obs, diag = observe_wave_menu(wp, cen)
    assert menu_agrees(menu, obs)
    assert obs.peakon >= 1
    assert obs.periodic_peakon >= 2
    arch_tags = {d["tag"] for d in diag if d["kind"] == "arch"}
    assert "Peakon" in arch_tags


def test_second_window_observes_peakons():
    # three g-roots (2, -1, -3) with the line in the left window (phi3, phi2)
    wp = WaveParams(Fraction(1, 4), -0.5, -0.2, -0.1, 0.6)
    cen = census(wp)
    lab = classify_region(wp, cen)
    assert lab.domain == "D4"
    assert lab.singular_line_position == "phi3 < 4C1 < phi2"
    assert lab.in_peakon_window
    obs, _ = observe_wave_menu(wp, cen)
    assert menu_agrees(predict_wave_menu(lab), obs)
    assert obs.peakon >= 1
    assert obs.periodic_peakon >= 2


def test_reduced_point_observation_is_exact():
    wp = WaveParams(Fraction(1, 2), 0.0, 0.9, -1.0, -0.05)
    obs, diag = observe_wave_menu(wp)
    assert diag[0]["kind"] == "plane"      # profile-plane observer
    assert obs.solitary == 2
    assert obs.periodic_smooth >= 2
    assert obs.peakon == 0 and obs.periodic_peakon == 0

    one = WaveParams(Fraction(1, 2), 0.0, 0.0, -1.0, 1.0)
    obs1, _ = observe_wave_menu(one)
    assert (obs1.solitary, obs1.periodic_smooth) == (0, 1)


# --- sweep ---------------------------------------------------------------------


def test_sweep_across_the_window_edge():
    rep = sweep_singular_line(D1_REGIME, (0.75, 0.05), 5)
    c1s = [s.c1 for s in rep.samples]
    assert c1s == sorted(c1s, reverse=True)
    assert rep.n_boundary == 0
    assert rep.agreement_fraction == 1.0
    assert rep.disagreements() == []
    # line leaves the window between the first two samples
    assert rep.samples[0].label.singular_line_position == "4C1 > phi1"
    assert not rep.samples[0].label.in_peakon_window
    assert rep.samples[0].observed.peakon == 0
    for s in rep.samples[1:]:
        assert s.label.singular_line_position == "0 < 4C1 < phi1"
        assert s.label.in_peakon_window
        assert s.observed.peakon >= 1
        assert s.observed.periodic_peakon >= 2


def test_sweep_scores_the_reduced_point():
    base = WaveParams(Fraction(1, 2), 0.1, 0.9, -1.0, -0.05)
    rep = sweep_singular_line(base, (0.1, -0.1), 5)
    mid = rep.samples[2]
    assert mid.c1 == 0.0
    assert mid.label.theorem == "T3"
    assert mid.agreement is True           # scored, not boundary-excluded
    assert {s.label.theorem for s in rep.samples} == {"T2", "T3"}
    assert rep.agreement_fraction == 1.0


def test_sweep_input_validation():
    with pytest.raises(ValueError):
        sweep_singular_line(D1_REGIME, (0.75, 0.05), 1)
    with pytest.raises(ValueError):
        sweep_singular_line(D1_REGIME, (0.05, 0.75), 5)
