"""Acceptance gate: every release-blocking claim, one test per claim.

Each test drives the corresponding end-to-end verification check at the
default seed and requires both a pass and completion inside the check's
pinned wall-clock budget.  Run with -v for a one-line verdict per claim.
"""

from rotheta.verification import DEFAULT_SEED, run_checks


def _run(name):
    results = run_checks(seed=DEFAULT_SEED, names={name})
    assert len(results) == 1
    r = results[0]
    assert r.passed, f"{name} failed:\n" + "\n".join(r.details)
    assert r.within_budget, (f"{name} exceeded its {r.budget:.0f}s budget "
                             f"({r.elapsed:.1f}s)")
    return r


def test_physical_parameter_identities():
    # rotation-free limit and the exact-rational coefficient pipeline
    r = _run("parameter-identities")
    assert r.budget == 1.0


def test_first_integral_is_conserved_along_flow():
    r = _run("first-integral-conservation")
    assert r.budget == 60.0


def test_printed_formula_audit_flags_defective_forms():
    r = _run("printed-formula-audit")
    assert r.budget == 30.0


def test_equilibrium_census_matches_companion_oracle():
    r = _run("equilibrium-census")
    assert r.budget == 30.0


def test_elliptic_kernel_against_quadrature():
    r = _run("elliptic-kernel")
    assert r.budget == 5.0


def test_closed_form_profiles_satisfy_the_ode():
    r = _run("closed-form-residuals")
    assert r.budget == 30.0


def test_peakon_arch_detection_in_the_window_regime():
    r = _run("peakon-detection")
    assert r.budget == 60.0


def test_atlas_predictions_agree_with_observation():
    r = _run("atlas-agreement")
    assert r.budget == 300.0


def test_artifacts_are_deterministic():
    r = _run("determinism")
    assert r.budget == 60.0
