"""Bifurcation atlas: theorem-region classification, wave-menu prediction,
numeric observation, and singular-line sweeps.

Three regimes are covered:

* T1 (theta = 1/4): five domains D1..D5 by the signs of g at its local
  minimum / maximum plus the K = 0 family, each carrying a conditional
  peakon claim on a window of singular-line positions;
* T2 (theta = 1/2, C1 != 0): six domains, all claiming smooth waves only
  (the singular line carries no equilibria at theta = 1/2);
* T3 (theta = 1/2, C1 = 0): three domains with exact periodic / solitary
  counts backed by the closed forms.

Domains defined by an equality (e.g. "g at its minimum vanishes") are
genuine measure-zero regions: parameters within `eq_tol` of the equality
get that label cleanly, while parameters in the wider `boundary_tol` band
around it keep the adjacent open-domain label but are flagged boundary.
Other theta values have no theorem coverage and classification raises.

Observation runs in the tau plane, where the singular line is invariant,
except at the T3 point: there the line passes through an equilibrium and
severs orbits that are perfectly smooth in the xi-profile plane, so the
observer switches to the regular reduced system phi'' = 2 g(phi).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .closedform import profile_rhs
from .equilibria import EquilibriumCensus, SADDLE, census, find_g_roots, g_critical_points
from .field import (SingularLineError, build_first_integral, eval_f, eval_g,
                    eval_g_prime)
from .orbits import (
    ANTI_PEAKON, PEAKON, PERIODIC_PEAKON, PERIODIC_SMOOTH, SOLITARY,
    classify_orbit, integrate, measure_axis_period, shoot_connection,
    trace_level_curve,
)
from .params import WaveParams

__all__ = [
    "PRESENT",
    "RegionLabel",
    "WaveMenu",
    "ObservedMenu",
    "SweepSample",
    "SweepReport",
    "canonical_levels",
    "classify_region",
    "predict_wave_menu",
    "observe_wave_menu",
    "menu_agrees",
    "sweep_singular_line",
]

# Menu value for a tag the theorem mentions without counting ("solitary
# and (or) periodic"): no per-tag claim; the disjunction lives in smooth_any.
PRESENT = "present"


@dataclass(frozen=True)
class RegionLabel:
    theorem: str                 # T1 | T2 | T3
    domain: str                  # D1.. | UNCOVERED
    boundary: bool
    singular_line_position: str  # e.g. "0 < 4C1 < phi1"
    phi_roots: tuple             # real roots of g, descending
    in_peakon_window: bool = False
    note: str = ""


@dataclass(frozen=True)
class WaveMenu:
    """Claimed wave counts per tag.  An integer is a claim (0 = absent,
    n > 0 = at least n families); the string "present" makes no per-tag
    claim.  `smooth_any` asserts that at least one smooth family
    (solitary or periodic) exists -- the theorems' disjunctive clause."""

    peakon: object = PRESENT
    periodic_peakon: object = PRESENT
    solitary: object = PRESENT
    periodic_smooth: object = PRESENT
    smooth_any: bool = False
    note: str = ""


@dataclass(frozen=True)
class ObservedMenu:
    peakon: int = 0
    periodic_peakon: int = 0
    solitary: int = 0
    periodic_smooth: int = 0

    @property
    def smooth_total(self) -> int:
        return self.solitary + self.periodic_smooth


def _line_symbol(wp: WaveParams) -> str:
    inv = 1 / wp.theta
    return f"{inv.numerator}C1" if inv.denominator == 1 else "C1/theta"


def _position_descriptor(wp: WaveParams, roots_desc, tol=1e-9) -> str:
    """Ordering descriptor of the singular line among {0} U g-roots."""
    sym = _line_symbol(wp)
    s = float(wp.singular_line)
    marks = [(f"phi{i + 1}", r) for i, r in enumerate(roots_desc)]
    marks.append(("0", 0.0))
    marks.sort(key=lambda kv: -kv[1])
    for name, v in marks:
        if abs(s - v) <= tol * (1.0 + abs(v)):
            return f"{sym} = {name}"
    above = [name for name, v in marks if v > s]
    below = [name for name, v in marks if v < s]
    if not above:
        return f"{sym} > {marks[0][0]}"
    if not below:
        return f"{sym} < {marks[-1][0]}"
    return f"{below[0]} < {sym} < {above[-1]}"


def _peakon_window(wp: WaveParams, domain: str, roots_desc) -> bool:
    """Literal theorem windows, guarded by existence of the line pair.

    The printed windows (0 < 4C1 < phi1 for D1-D3; that or
    phi3 < 4C1 < phi2 for D4/D5) describe where f(4C1) > 0 in the
    canonical root configuration phi3 < phi2 < 0 < phi1; the f > 0 guard
    keeps the prediction truthful in every configuration, and C3 < 0
    ensures the level sets are bounded so arches actually close.
    """
    s = float(wp.singular_line)
    if float(wp.C3) >= 0.0 or eval_f(wp, s) <= 0.0:
        return False
    lit = False
    if roots_desc:
        lit = 0.0 < s < roots_desc[0]
    if domain in ("D4", "D5") and len(roots_desc) >= 3 and not lit:
        lit = roots_desc[2] < s < roots_desc[1]
    return lit


def classify_region(wp: WaveParams, cen: EquilibriumCensus, *,
                    eq_tol=1e-9, boundary_tol=1e-6, c1_tol=1e-9) -> RegionLabel:
    """Theorem/domain label for the parameter point, with boundary flagging.

    theta = 1/4 -> T1; theta = 1/2 -> T3 when |C1| <= c1_tol else T2; any
    other theta raises ValueError (no theorem covers it).  Domains follow
    the sign of g at its local minimum (g_min) and maximum (g_max), with
    K = 0 taking precedence (T1/D5, T2/D6); delta = 4 C2^2 - 6 C3 <= 0 or
    a sign pattern outside the catalogue yields UNCOVERED.
    """
    theta = wp.theta
    if theta == Fraction(1, 4):
        theorem = "T1"
    elif theta == Fraction(1, 2):
        theorem = "T3" if abs(float(wp.C1)) <= c1_tol else "T2"
    else:
        raise ValueError(f"no theorem covers theta = {theta}")

    delta = 4.0 * float(wp.C2) ** 2 - 6.0 * float(wp.C3)
    roots_desc = tuple(sorted((r for r, _ in find_g_roots(wp)), reverse=True))
    pos = _position_descriptor(wp, roots_desc)

    def label(domain, boundary=False, note="", window=False):
        return RegionLabel(theorem=theorem, domain=domain, boundary=boundary,
                           singular_line_position=pos, phi_roots=roots_desc,
                           in_peakon_window=window, note=note)

    dscale = 1.0 + 4.0 * float(wp.C2) ** 2 + 6.0 * abs(float(wp.C3))
    if delta <= boundary_tol * dscale:
        return label("UNCOVERED",
                     boundary=abs(delta) <= boundary_tol * dscale,
                     note="needs 4C2^2 > 6C3 (two critical points of g)")

    phi_min, phi_max = g_critical_points(wp)
    if phi_min is None or phi_max is None:
        return label("UNCOVERED", boundary=True,
                     note="critical points of g numerically degenerate")
    gmin, gmax = eval_g(wp, phi_min), eval_g(wp, phi_max)
    gscale = 1.0 + max(abs(gmin), abs(gmax))

    kscale = 1.0 + abs(float(wp.C2)) + abs(float(wp.C3))
    k_is_zero = abs(float(wp.K)) <= eq_tol * kscale
    k_near_zero = abs(float(wp.K)) <= boundary_tol * kscale

    if theorem in ("T1", "T2"):
        # the window concept is T1-only: at theta = 1/2 the line carries
        # no equilibria, so no arch can terminate on it
        def window(domain):
            return (_peakon_window(wp, domain, roots_desc)
                    if theorem == "T1" else False)

        if k_is_zero:
            kdom = "D5" if theorem == "T1" else "D6"
            return label(kdom, window=window("D5"))
        if abs(gmin) <= eq_tol * gscale:
            return label("D2", boundary=k_near_zero, window=window("D2"))
        if abs(gmax) <= eq_tol * gscale:
            return label("D3", boundary=k_near_zero, window=window("D3"))
        near = min(abs(gmin), abs(gmax)) <= boundary_tol * gscale
        if gmin > 0.0:
            dom = "D1"
        elif gmax < 0.0:
            dom = "D4" if theorem == "T2" else "UNCOVERED"
        else:
            dom = "D5" if theorem == "T2" else "D4"
        note = "" if dom != "UNCOVERED" else \
            "g negative at both critical points (no catalogued portrait)"
        return label(dom, boundary=near or k_near_zero, note=note,
                     window=window(dom))

    # T3
    if abs(gmin) <= eq_tol * gscale:
        return label("D1", boundary=True,
                     note="g_min = 0: shared edge of D1 and D2")
    if gmin > 0.0:
        return label("D1", boundary=gmin <= boundary_tol * gscale)
    if gmax > eq_tol * gscale:
        return label("D3", boundary=gmax <= boundary_tol * gscale)
    return label("D2", boundary=abs(gmax) <= boundary_tol * gscale)


def predict_wave_menu(label: RegionLabel) -> WaveMenu:
    """The theorem's asserted menu for a non-boundary region label."""
    if label.boundary:
        raise ValueError(f"boundary label has no clean prediction: {label}")
    if label.domain == "UNCOVERED":
        return WaveMenu(note="no theorem claim here")

    if label.theorem == "T1":
        if not label.in_peakon_window:
            return WaveMenu(peakon=0, periodic_peakon=0, smooth_any=True,
                            note="singular line outside the peakon windows")
        if label.domain == "D2":
            return WaveMenu(peakon=0, periodic_peakon=2, smooth_any=True,
                            note="two periodic peakons, no peakon")
        return WaveMenu(peakon=1, periodic_peakon=2, smooth_any=True,
                        note="peakon window active")

    if label.theorem == "T2":
        return WaveMenu(peakon=0, periodic_peakon=0, smooth_any=True,
                        note="all waves smooth at theta = 1/2")

    # T3
    if label.domain == "D3":
        return WaveMenu(peakon=0, periodic_peakon=0, solitary=2,
                        periodic_smooth=2, smooth_any=True,
                        note="two periodic and two solitary waves")
    return WaveMenu(peakon=0, periodic_peakon=0, solitary=0,
                    periodic_smooth=1, smooth_any=True,
                    note="one periodic wave")


def menu_agrees(pred: WaveMenu, obs: ObservedMenu) -> bool:
    """Observation satisfies a claim: integer 0 means observed 0, integer
    n > 0 means observed >= n, "present" is vacuous; smooth_any needs at
    least one smooth family of either kind."""

    def ok(claim, got):
        if claim == PRESENT:
            return True
        return got == 0 if claim == 0 else got >= claim

    return (ok(pred.peakon, obs.peakon)
            and ok(pred.periodic_peakon, obs.periodic_peakon)
            and ok(pred.solitary, obs.solitary)
            and ok(pred.periodic_smooth, obs.periodic_smooth)
            and (not pred.smooth_any or obs.smooth_total >= 1))


# ---------------------------------------------------------------------------
# numeric observation


def _level_samples(crit, dh_frac=1e-3):
    """Canonical levels: midpoints between consecutive critical levels,
    plus critical +- dh_frac x spread."""
    if not crit:
        return []
    spread = crit[-1] - crit[0]
    if spread <= 0.0:
        spread = 1.0 + abs(crit[0])
    dh = dh_frac * spread
    samples = [0.5 * (a + b) for a, b in zip(crit, crit[1:])]
    for h in crit:
        samples += [h - dh, h + dh]
    return samples


def canonical_levels(wp: WaveParams, cen: EquilibriumCensus = None, fi=None):
    """(critical levels, canonical sample levels) of the first integral:
    the H values of the axis equilibria and of the singular-line pair,
    merged, plus midpoint/offset samples around them."""
    cen = cen if cen is not None else census(wp)
    fi = fi if fi is not None else build_first_integral(wp)
    crit = {float(fi.eval(e.phi, 0.0))
            for e in cen.equilibria if not e.on_singular_line}
    pair = [e for e in cen.line_pair if e.kind == SADDLE]
    if len(pair) == 2:
        try:
            crit.add(float(fi.eval(pair[0].phi, pair[0].y)))
        except SingularLineError:
            pass  # m < 0: H is infinite on the line, no finite pair level
    crit = sorted(crit)
    hscale = 1.0 + max((abs(h) for h in crit), default=0.0)
    merged = []
    for h in crit:
        if not merged or h - merged[-1] > 1e-10 * hscale:
            merged.append(h)
    return merged, _level_samples(merged)


def _count(families, tag):
    """An annulus counts toward every tag it exhibits (its orbits deform
    smoothly into line-hugging ones near a critical level)."""
    return sum(1 for tags in families.values() if tag in tags)


def observe_wave_menu(wp: WaveParams, cen: EquilibriumCensus = None,
                      fi=None, *, mode="fast", escape_radius=50.0,
                      c1_tol=1e-9):
    """Count wave families numerically.

    Arches between the singular-line saddles and homoclinic loops at axis
    saddles are found by shooting; periodic families by classifying one
    closed level-curve branch per (level interval, branch) cell over the
    canonical level samples.  "fast" loosens the level-orbit integration
    tolerances; shooting always runs tight (weak saddles drift otherwise).
    Returns (ObservedMenu, diagnostics).
    """
    if wp.theta == Fraction(1, 2) and abs(float(wp.C1)) <= c1_tol:
        return _observe_profile(wp, escape_radius=escape_radius)

    cen = cen if cen is not None else census(wp)
    fi = fi if fi is not None else build_first_integral(wp)
    if mode == "full":
        orb = dict(rtol=1e-10, atol=1e-12, drift_limit=1e-8, max_retries=1)
    else:
        orb = dict(rtol=1e-9, atol=1e-11, drift_limit=1e-6, max_retries=0)
    diag = []

    pair = sorted((e for e in cen.line_pair if e.kind == SADDLE),
                  key=lambda e: -e.y)
    peakon = 0
    if len(pair) == 2:
        for side in ("left", "right"):
            hit, traj = shoot_connection(wp, pair[0], pair[1], side=side,
                                         sep_tol=1e-3,
                                         escape_radius=escape_radius)
            oc = classify_orbit(wp, traj, cen) if hit else None
            if oc is not None and oc.tag in (PEAKON, ANTI_PEAKON):
                peakon += 1
                diag.append({"kind": "arch", "side": side, "tag": oc.tag,
                             "jump": oc.derivative_jump,
                             "xi_extent": oc.period_xi})
            else:
                diag.append({"kind": "arch", "side": side, "tag": None})

    solitary = 0
    axis_saddles = [e for e in cen.equilibria
                    if e.kind == SADDLE and not e.on_singular_line]
    for eq in axis_saddles:
        for side in ("left", "right"):
            hit, traj = shoot_connection(wp, eq, eq, side=side, sep_tol=1e-4,
                                         escape_radius=escape_radius)
            oc = classify_orbit(wp, traj, cen) if hit else None
            if oc is not None and oc.tag == SOLITARY:
                solitary += 1
                diag.append({"kind": "loop", "phi": eq.phi, "side": side,
                             "tag": oc.tag})

    merged, samples = canonical_levels(wp, cen, fi)

    phis = [e.phi for e in cen.equilibria] + [float(wp.singular_line)]
    pad = 1.0 + 0.5 * (max(phis) - min(phis))
    window = (min(phis) - pad, max(phis) + pad)
    crit_arr = np.asarray(merged)

    families = {}
    for h in samples:
        interval = int(np.searchsorted(crit_arr, h))
        closed = [b for b in trace_level_curve(fi, h, window, n=1501) if b.closed]
        for bi, br in enumerate(closed):
            if br.phi[-1] - br.phi[0] <= 1e-9 * (1.0 + abs(br.phi[0])):
                continue  # point branch at a center
            traj = integrate(wp, br.interior_point(), tau_span=3000.0, fi=fi,
                             escape_radius=escape_radius,
                             stop_after_crossings=3, **orb)
            oc = classify_orbit(wp, traj, cen)
            if oc.tag in (PERIODIC_PEAKON, PERIODIC_SMOOTH):
                families.setdefault((interval, bi), set()).add(oc.tag)
                diag.append({"kind": "level-orbit", "h": h, "interval": interval,
                             "branch": bi, "tag": oc.tag,
                             "period_xi": oc.period_xi,
                             "jump": oc.derivative_jump})

    obs = ObservedMenu(peakon=peakon,
                       periodic_peakon=_count(families, PERIODIC_PEAKON),
                       solitary=solitary,
                       periodic_smooth=_count(families, PERIODIC_SMOOTH))
    return obs, diag


def _observe_profile(wp: WaveParams, *, escape_radius=50.0):
    """Observer for the reduced point theta = 1/2, C1 = 0.

    The tau plane is useless here (the invariant line phi = 0 passes
    through an equilibrium and severs every orbit crossing it), so count
    in the regular profile plane phi' = y, y' = 2 g(phi), whose energy is
    4h = Q(phi) - y^2 with Q the antiderivative of 4g.
    """
    wp0 = replace(wp, C1=0.0) if float(wp.C1) != 0.0 else wp
    rhs = profile_rhs(wp0)
    diag = [{"kind": "plane", "note": "profile plane (reduced system)"}]

    C2, C3, K = float(wp0.C2), float(wp0.C3), float(wp0.K)
    q_coeffs = (C3, 4.0 * C2 / 3.0, 1.0, 4.0 * K, 0.0)
    roots = [(r, eval_g_prime(wp0, r)) for r, _ in find_g_roots(wp0)]

    solitary = 0
    for r, gp in roots:
        if gp <= 0.0:
            continue  # centers; only saddles carry loops
        lam = math.sqrt(2.0 * gp)
        nv = math.hypot(1.0, lam)
        v = (1.0 / nv, lam / nv)
        tol = 1e-4 * (1.0 + abs(r))
        span = 60.0 / min(lam, 1.0) + 60.0

        def ev_arrive(_t, x, r=r, tol=tol):
            return math.hypot(x[0] - r, x[1]) - tol
        ev_arrive.terminal = True
        ev_arrive.direction = -1

        def ev_escape(_t, x):
            return x[0] * x[0] + x[1] * x[1] - escape_radius ** 2
        ev_escape.terminal = True

        for sgn in (1.0, -1.0):
            start = (r + 1e-8 * sgn * v[0], 1e-8 * sgn * v[1])
            res = solve_ivp(rhs, (0.0, span), list(start), method="DOP853",
                            rtol=1e-12, atol=1e-14,
                            events=[ev_arrive, ev_escape])
            if len(res.t_events[0]) > 0 and len(res.t_events[1]) == 0:
                solitary += 1
                diag.append({"kind": "loop", "phi": r,
                             "side": "right" if sgn > 0 else "left",
                             "tag": SOLITARY})

    crit = sorted({0.25 * float(np.polyval(q_coeffs, r)) for r, _ in roots})
    samples = _level_samples(crit)
    crit_arr = np.asarray(crit)
    span_phi = max((abs(r) for r, _ in roots), default=1.0)
    window = (-span_phi - 2.0, span_phi + 2.0)

    periodic = set()
    for h in samples:
        interval = int(np.searchsorted(crit_arr, h))
        for bi, (lo, hi) in enumerate(_profile_branches(q_coeffs, h, window)):
            phi0 = 0.5 * (lo + hi)
            y0 = math.sqrt(max(np.polyval(q_coeffs, phi0) - 4.0 * h, 0.0))
            period, _tc = measure_axis_period(rhs, (phi0, y0), span=2000.0)
            if period is not None:
                periodic.add((interval, bi))
                diag.append({"kind": "level-orbit", "h": h, "interval": interval,
                             "branch": bi, "tag": PERIODIC_SMOOTH,
                             "period_xi": period})

    obs = ObservedMenu(peakon=0, periodic_peakon=0, solitary=solitary,
                       periodic_smooth=len(periodic))
    return obs, diag


def _profile_branches(q_coeffs, h, window, n=1501):
    """Closed runs of {Q(phi) - 4h > 0} as (lo, hi) turning-point pairs."""

    def P(phi):
        return np.polyval(q_coeffs, phi) - 4.0 * h

    grid = np.linspace(window[0], window[1], n)
    vals = P(grid)
    runs = []
    i = 0
    while i < n:
        if vals[i] <= 0.0:
            i += 1
            continue
        j = i
        while j + 1 < n and vals[j + 1] > 0.0:
            j += 1
        if i > 0 and j + 1 < n:  # interior run: both ends bracketed
            lo = brentq(P, grid[i - 1], grid[i], xtol=1e-14, rtol=1e-15)
            hi = brentq(P, grid[j], grid[j + 1], xtol=1e-14, rtol=1e-15)
            if hi - lo > 1e-9 * (1.0 + abs(lo)):
                runs.append((lo, hi))
        i = j + 1
    return runs


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepSample:
    c1: float
    label: RegionLabel
    predicted: WaveMenu | None   # None when the label is boundary
    observed: ObservedMenu
    agreement: bool | None       # None when boundary-excluded
    boundary: bool
    diagnostics: tuple = ()


@dataclass
class SweepReport:
    base: WaveParams
    samples: list

    @property
    def n_boundary(self) -> int:
        return sum(1 for s in self.samples if s.boundary)

    @property
    def agreement_fraction(self) -> float:
        scored = [s for s in self.samples if s.agreement is not None]
        if not scored:
            return float("nan")
        return sum(1 for s in scored if s.agreement) / len(scored)

    def disagreements(self):
        return [s for s in self.samples if s.agreement is False]


def _near_window_edge(wp: WaveParams, label: RegionLabel, rel=1e-3) -> bool:
    """T1 samples whose singular line sits within rel of a window edge
    have marginal geometry (vanishing arches); flagged, not scored."""
    if label.theorem != "T1":
        return False
    s = float(wp.singular_line)
    edges = [0.0] + list(label.phi_roots)
    return any(abs(s - e) <= rel * (1.0 + abs(e)) for e in edges)


def _sweep_one(args):
    base, c1, mode, escape_radius, eq_tol, boundary_tol = args
    wp = replace(base, C1=float(c1))
    cen = census(wp)
    label = classify_region(wp, cen, eq_tol=eq_tol, boundary_tol=boundary_tol)
    # census boundaries are degenerate portraits -- except at T3, where the
    # line-through-equilibrium configuration is the covered case itself
    structural = cen.is_boundary and label.theorem != "T3"
    boundary = label.boundary or structural or _near_window_edge(wp, label)
    predicted = None if label.boundary else predict_wave_menu(label)
    observed, diag = observe_wave_menu(wp, cen, mode=mode,
                                       escape_radius=escape_radius)
    agreement = None
    if not boundary and predicted is not None:
        agreement = menu_agrees(predicted, observed)
    return SweepSample(c1=float(c1), label=label, predicted=predicted,
                       observed=observed, agreement=agreement,
                       boundary=boundary, diagnostics=tuple(diag))


def sweep_singular_line(base: WaveParams, c1_range, sample_count: int, *,
                        mode="fast", escape_radius=50.0,
                        eq_tol=1e-9, boundary_tol=1e-6,
                        max_workers=None) -> SweepReport:
    """Classify/predict/observe across a right-to-left sweep of C1.

    `c1_range` = (right, left) with right > left; samples are strictly
    decreasing.  Samples on domain boundaries, on census boundaries, or
    within 1e-3 of a peakon-window edge are flagged and excluded from the
    agreement statistics (their rows still carry full diagnostics).
    Samples are evaluated independently and concurrently; the report is
    assembled in input order.
    """
    if sample_count < 2:
        raise ValueError("sample_count must be >= 2")
    hi, lo = float(c1_range[0]), float(c1_range[1])
    if not hi > lo:
        raise ValueError("c1_range must be ordered right-to-left (hi > lo)")
    c1s = np.linspace(hi, lo, sample_count)
    jobs = [(base, c1, mode, escape_radius, eq_tol, boundary_tol) for c1 in c1s]
    workers = max_workers or min(8, os.cpu_count() or 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    return SweepReport(base=base, samples=results)
