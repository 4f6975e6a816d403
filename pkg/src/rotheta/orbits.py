"""Numeric orbits of the tau-form system: integration, level curves,
separatrix shooting and wave-type classification.

The integrator wraps scipy's DOP853 with dense output and three events
(escape radius, singular-line crossing, axis crossing).  The first integral
is monitored along every accepted trajectory; if the relative drift exceeds
the limit the run is retried once at tighter tolerances.

Classification vocabulary (the `tag` of :class:`OrbitClass`):

* ``PeriodicSmooth``  closed orbit, profile smooth.
* ``PeriodicPeakon``  closed orbit hugging the singular line with a rapid
  derivative jump (only possible when the line carries a saddle pair, whose
  arch is the limiting shape).
* ``Peakon`` / ``AntiPeakon``  arch heteroclinic between the two line
  saddles, crest pointing toward (left arch) or away from (right arch)
  larger phi.
* ``Solitary``  homoclinic loop to an axis saddle.
* ``Unbounded``  escaped the working radius.
* ``BoundaryDegenerate``  none of the above could be certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .equilibria import EquilibriumCensus, SADDLE
from .field import (FirstIntegral, SingularLineError, hamiltonian_partials,
                    rhs_regular, regular_jacobian)
from .params import WaveParams

__all__ = [
    "Trajectory",
    "OrbitClass",
    "LevelBranch",
    "integrate",
    "trace_level_curve",
    "y_squared_fn",
    "classify_orbit",
    "shoot_connection",
    "measure_axis_period",
]

PERIODIC_SMOOTH = "PeriodicSmooth"
PERIODIC_PEAKON = "PeriodicPeakon"
PEAKON = "Peakon"
ANTI_PEAKON = "AntiPeakon"
SOLITARY = "Solitary"
UNBOUNDED = "Unbounded"
BOUNDARY_DEGENERATE = "BoundaryDegenerate"


@dataclass
class Trajectory:
    wp: WaveParams
    t: np.ndarray
    states: np.ndarray          # shape (n, 2)
    sol: object                 # scipy OdeSolution (dense)
    escaped: bool
    line_crossings: np.ndarray  # times where theta*phi - C1 changed sign
    axis_crossings: np.ndarray  # times where y changed sign
    h0: float | None = None
    h_drift_max: float | None = None
    rtol_used: float = 0.0
    status: str = ""

    def state(self, t):
        return self.sol(t)

    def dense(self, n=2001):
        tg = np.linspace(self.t[0], self.t[-1], n)
        return tg, self.sol(tg).T

    @property
    def diameter(self):
        lo = self.states.min(axis=0)
        hi = self.states.max(axis=0)
        return float(np.hypot(hi[0] - lo[0], hi[1] - lo[1]))

    def min_distance_to(self, point, n=2001):
        _, xs = self.dense(n)
        return float(np.min(np.hypot(xs[:, 0] - point[0], xs[:, 1] - point[1])))

    def min_line_distance(self, n=2001):
        s = float(self.wp.singular_line)
        _, xs = self.dense(n)
        return float(np.min(np.abs(xs[:, 0] - s)))

    def xi_of_tau(self, t_grid):
        """xi(tau) on a grid via cumulative trapezoid of theta*phi - C1."""
        theta, C1 = float(self.wp.theta), float(self.wp.C1)
        phis = self.sol(t_grid)[0]
        integrand = theta * phis - C1
        xi = np.concatenate(
            ([0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(t_grid))))
        return xi

    def line_events(self, strip):
        """Singular-line interaction records: (tau, phi - s) at the axis
        crossings with |phi - s| <= strip.  The line distance |phi - s| is
        monotone in y's sign (d(phi-s)^2/dtau = 2 theta y (phi-s)^2), so
        every closest approach to the line happens at a y = 0 crossing."""
        s = float(self.wp.singular_line)
        out = []
        for t in self.axis_crossings:
            phi = float(self.sol(t)[0])
            if abs(phi - s) <= strip:
                out.append((float(t), phi - s))
        return out


def _h_scale(h_values, h0):
    return max(abs(h0), float(np.max(np.abs(h_values))), 1e-9)


def integrate(wp: WaveParams, start, tau_span=10.0, *, fi: FirstIntegral | None = None,
              rtol=1e-10, atol=1e-12, escape_radius=50.0,
              drift_limit=1e-8, max_retries=1,
              stop_after_crossings: int | None = None) -> Trajectory:
    """Integrate the tau-form from `start` over [0, tau_span].

    With `fi` given, the relative drift of H along the samples is measured
    (scale: max(|H0|, max |H|, 1e-9)); if it exceeds drift_limit the run is
    repeated once with 100x tighter tolerances and the better run returned.
    When H carries a pole or logarithm on the singular line (m < 0), its
    gradient blows up as orbits approach the line, and a sample is excluded
    from the measurement when |grad H| * rtol * (1 + |x|) exceeds the bound
    being certified: there the requested drift_limit is unverifiable at the
    attempted tolerance no matter how well the solver did.  Orbits that
    collapse onto the line can end up with no measurable samples; the drift
    then reads 0.
    Escape beyond `escape_radius` terminates with `escaped=True`; step-size
    failure near degenerate points returns the partial orbit with a status.
    `stop_after_crossings=n` ends the run at the n-th y = 0 crossing (a
    closed orbit needs three to exhibit one full period), saving the cost of
    integrating hundreds of redundant cycles.
    """
    theta, C1 = float(wp.theta), float(wp.C1)

    def rhs(_t, x):
        phi, y = x
        return (y * (theta * phi - C1),
                (theta - 0.5) * y * y + phi * (wp.K + phi * (0.5 + phi * (wp.C2 + phi * wp.C3))))

    r2 = escape_radius * escape_radius

    def ev_escape(_t, x):
        return x[0] * x[0] + x[1] * x[1] - r2
    ev_escape.terminal = True

    def ev_line(_t, x):
        return theta * x[0] - C1

    def ev_axis(_t, x):
        return x[1]
    if stop_after_crossings is not None:
        ev_axis.terminal = int(stop_after_crossings)

    attempt_rtol, attempt_atol = rtol, atol
    best = None
    for _ in range(max_retries + 1):
        res = solve_ivp(rhs, (0.0, tau_span), [float(start[0]), float(start[1])],
                        method="DOP853", rtol=attempt_rtol, atol=attempt_atol,
                        dense_output=True, events=[ev_escape, ev_line, ev_axis])
        traj = Trajectory(
            wp=wp, t=res.t, states=res.y.T, sol=res.sol,
            escaped=len(res.t_events[0]) > 0,
            line_crossings=res.t_events[1], axis_crossings=res.t_events[2],
            rtol_used=attempt_rtol,
            status="ok" if res.success else (res.message or "solver failure"),
        )
        if fi is not None:
            tg, xs = traj.dense(512)
            h0 = fi.eval(*start)
            traj.h0 = h0
            if wp.m < 0:
                cert = drift_limit * max(abs(h0), 1e-9)
                kept = []
                for p, y in xs:
                    try:
                        dhp, dhy = hamiltonian_partials(fi, (p, y))
                    except SingularLineError:
                        continue
                    err = (abs(dhp) + abs(dhy)) * attempt_rtol * (1.0 + math.hypot(p, y))
                    if err <= cert:
                        kept.append(fi.eval(p, y))
                hs = np.asarray(kept)
            else:
                hs = np.array([fi.eval(p, y) for p, y in xs])
            if len(hs) == 0:
                traj.h_drift_max = 0.0
                return traj
            traj.h_drift_max = float(np.max(np.abs(hs - h0))) / _h_scale(hs, h0)
            if traj.h_drift_max > drift_limit and attempt_rtol > 1e-13:
                if best is None or traj.h_drift_max < best.h_drift_max:
                    best = traj
                attempt_rtol, attempt_atol = attempt_rtol * 1e-2, attempt_atol * 1e-2
                continue
        return traj
    return best if best is not None else traj


def y_squared_fn(fi: FirstIntegral, h: float):
    """phi -> y^2 on the level H = h (may be negative or infinite).

    H = A(phi) y^2 + B(phi) with A = y2_coeff * (phi - line)^(m+1), so
    y^2 = (h - B)/A.  Returns +-inf at poles; raises nothing.
    """

    def y2(phi):
        try:
            b = fi.eval(phi, 0.0)
        except SingularLineError:
            return math.inf
        w = phi - float(fi.line)
        a = float(fi.y2_coeff) * w ** fi.y2_power
        if a == 0.0:
            return math.inf if (h - b) >= 0 else -math.inf
        return (h - b) / a

    return y2


@dataclass
class LevelBranch:
    phi: np.ndarray       # ascending
    y: np.ndarray         # nonnegative branch; full curve is the +- mirror
    closed: bool          # both ends are genuine turning points
    note: str = ""

    @property
    def phi_range(self):
        return float(self.phi[0]), float(self.phi[-1])

    def interior_point(self):
        i = int(np.argmax(self.y))
        return float(self.phi[i]), float(self.y[i])


def trace_level_curve(fi: FirstIntegral, h: float, phi_window, n=2001):
    """Branches of {H = h} inside phi_window, each as the y >= 0 half.

    The grid run is split at the singular line (level curves only meet the
    line at the critical level), turning points are refined by bisection on
    y^2, and a branch is `closed` when both of its ends are turning points
    strictly inside the window.
    """
    lo, hi = float(phi_window[0]), float(phi_window[1])
    s = float(fi.line)
    y2 = y_squared_fn(fi, h)
    grid = np.linspace(lo, hi, n)
    if lo < s < hi:
        # make the line an explicit split point
        grid = np.unique(np.concatenate([grid, [s]]))
    vals = np.array([y2(p) if p != s else -math.inf for p in grid])

    branches = []
    i = 0
    N = len(grid)
    while i < N:
        if not (np.isfinite(vals[i]) and vals[i] > 0.0):
            i += 1
            continue
        j = i
        while j + 1 < N and np.isfinite(vals[j + 1]) and vals[j + 1] > 0.0:
            j += 1
        # refine endpoints
        phis = list(grid[i:j + 1])
        left_closed = right_closed = False
        if i > 0 and np.isfinite(vals[i - 1]):
            try:
                root = brentq(y2, grid[i - 1], grid[i], xtol=1e-14, rtol=1e-15)
                phis.insert(0, root)
                left_closed = True
            except ValueError:
                pass
        if j + 1 < N and np.isfinite(vals[j + 1]):
            try:
                root = brentq(y2, grid[j], grid[j + 1], xtol=1e-14, rtol=1e-15)
                phis.append(root)
                right_closed = True
            except ValueError:
                pass
        phi_arr = np.array(phis)
        y_arr = np.sqrt(np.maximum([y2(p) for p in phi_arr], 0.0))
        note = ""
        if not left_closed and math.isclose(phi_arr[0], s, abs_tol=2 * (hi - lo) / n):
            note = "asymptotic to the singular line"
        if not right_closed and math.isclose(phi_arr[-1], s, abs_tol=2 * (hi - lo) / n):
            note = "asymptotic to the singular line"
        branches.append(LevelBranch(phi=phi_arr, y=y_arr,
                                    closed=left_closed and right_closed, note=note))
        i = j + 1
    return branches


@dataclass
class OrbitClass:
    tag: str
    amplitude: float
    period_tau: float | None = None
    period_xi: float | None = None
    derivative_jump: float | None = None
    min_line_distance: float | None = None
    detail: str = ""

    @property
    def period(self):
        """Period in the wave variable xi (None for non-periodic orbits)."""
        return self.period_xi


def _line_pair(census: EquilibriumCensus):
    pair = census.line_pair
    if len(pair) == 2:
        up = max(pair, key=lambda e: e.y)
        dn = min(pair, key=lambda e: e.y)
        return up, dn
    return None


def _measure_jump(traj: Trajectory, t_lo, t_hi, s, strip, n=4001):
    """y-variation across passes through the strip |phi - s| <= strip."""
    tg = np.linspace(t_lo, t_hi, n)
    xs = traj.sol(tg).T
    inside = np.abs(xs[:, 0] - s) <= strip
    if not inside.any():
        return 0.0
    return float(xs[inside, 1].max() - xs[inside, 1].min())


def classify_orbit(wp: WaveParams, traj: Trajectory, census: EquilibriumCensus, *,
                   jump_frac=0.1, prox_frac=0.05, sep_tol=1e-3,
                   close_tol=1e-5) -> OrbitClass:
    """Assign a wave-type label to an integrated trajectory.

    Closed orbits (two same-direction axis crossings returning to the same
    state within close_tol * scale) are split into PeriodicPeakon vs
    PeriodicSmooth: a peakon-like period requires (a) the singular line to
    carry a saddle pair, (b) closest approach within prox_frac of the orbit
    diameter, and (c) a slope jump across the near-line strip of at least
    jump_frac times the phi-amplitude (the finite jump inherited from the
    limiting arch).  Non-recurrent orbits are checked for saddle-to-saddle
    connections (arch => Peakon/AntiPeakon, loop => Solitary).
    """
    s = float(wp.singular_line)
    if traj.escaped:
        return OrbitClass(tag=UNBOUNDED, amplitude=float("nan"),
                          detail="left the working radius")

    xs = traj.states
    amp = float(xs[:, 0].max() - xs[:, 0].min())
    diam = traj.diameter
    start = xs[0]
    scale = 1.0 + float(np.max(np.abs(xs)))
    if diam <= 1e-8 * scale:
        return OrbitClass(tag=BOUNDARY_DEGENERATE, amplitude=0.0,
                          detail="stationary (started at an equilibrium)")

    pair = _line_pair(census)

    # --- recurrence via axis crossings -----------------------------------
    tc = traj.axis_crossings
    tc = tc[tc > 1e-12]
    if len(tc) >= 3:
        t1, t3 = tc[0], tc[2]
        s1, s3 = traj.sol(t1), traj.sol(t3)
        if np.hypot(*(s3 - s1)) <= close_tol * scale:
            period_tau = float(t3 - t1)
            tg = np.linspace(t1, t3, 4001)
            xi = traj.xi_of_tau(tg)
            period_xi = float(abs(xi[-1]))
            dense_states = traj.sol(tg).T
            min_line = float(np.min(np.abs(dense_states[:, 0] - s)))
            if pair is not None and min_line <= prox_frac * max(diam, 1e-12):
                strip = max(2.0 * min_line, 0.02 * diam)
                jump = _measure_jump(traj, t1, t3, s, strip)
                if jump >= jump_frac * amp:
                    return OrbitClass(tag=PERIODIC_PEAKON, amplitude=amp,
                                      period_tau=period_tau, period_xi=period_xi,
                                      derivative_jump=jump, min_line_distance=min_line,
                                      detail="closed orbit with near-line slope jump")
            return OrbitClass(tag=PERIODIC_SMOOTH, amplitude=amp,
                              period_tau=period_tau, period_xi=period_xi,
                              min_line_distance=min_line,
                              detail="closed orbit")

    # --- saddle connections ----------------------------------------------
    saddles = [e for e in census.equilibria if e.kind == SADDLE]
    end = xs[-1]

    # tolerances relative to the equilibrium's own scale, matching the
    # arrival event of shoot_connection; 1% slack for event-location error
    def near(eq, pt, tol_factor):
        tol = tol_factor * (1.0 + math.hypot(eq.phi, eq.y))
        return math.hypot(pt[0] - eq.phi, pt[1] - eq.y) <= tol

    start_sad = next((e for e in saddles if near(e, start, 1e-3)), None)
    end_sad = next((e for e in saddles if near(e, end, 1.01 * sep_tol)), None)
    if start_sad is not None and end_sad is not None:
        if pair is not None and {id(start_sad), id(end_sad)} == {id(pair[0]), id(pair[1])}:
            jump = abs(pair[0].y - pair[1].y)
            side = "left" if np.min(xs[:, 0]) < s - 1e-12 else "right"
            tg = np.linspace(traj.t[0], traj.t[-1], 4001)
            xi = traj.xi_of_tau(tg)
            label = PEAKON if side == "left" else ANTI_PEAKON
            return OrbitClass(tag=label, amplitude=amp,
                              period_xi=float(abs(xi[-1])),
                              derivative_jump=jump, min_line_distance=0.0,
                              detail=f"{side} arch between the line saddles "
                                     f"(finite xi extent {abs(xi[-1]):.6g})")
        if start_sad is end_sad:
            return OrbitClass(tag=SOLITARY, amplitude=amp,
                              detail=f"homoclinic loop to phi = {start_sad.phi:.6g}")
    return OrbitClass(tag=BOUNDARY_DEGENERATE, amplitude=amp,
                      detail="no recurrence or certified connection within the span")


def _unstable_ray(wp: WaveParams, eq):
    """Unit eigenvector of the positive eigenvalue at a saddle."""
    (a, b), (c, d) = regular_jacobian(wp, eq.point)
    tr, det = a + d, a * d - b * c
    disc = max(tr * tr - 4.0 * det, 0.0)
    lam = 0.5 * (tr + math.sqrt(disc))
    v = (b, lam - a)
    if math.hypot(*v) < 1e-12:
        v = (lam - d, c)
    nv = math.hypot(*v)
    return (v[0] / nv, v[1] / nv), lam


def shoot_connection(wp: WaveParams, from_eq, to_eq, *, side=None, offset=1e-8,
                     span=None, sep_tol=1e-3, escape_radius=50.0,
                     rtol=1e-12, atol=1e-14):
    """Shoot along the unstable manifold of `from_eq`, stop near `to_eq`.

    `side` picks the ray whose initial phi displacement has that sign
    ("left"/"right"); with side=None both rays are tried.  Returns
    (hit, Trajectory) for the first ray that lands within sep_tol of the
    target (scaled), else (False, last trajectory).  The default span covers
    the ~ln(1/offset)/lambda departure and arrival transients plus one sweep
    of the loop itself.
    """
    ray, lam = _unstable_ray(wp, from_eq)
    if lam <= 0:
        return False, None
    if span is None:
        span = 60.0 / min(lam, 1.0) + 60.0
    theta, C1 = float(wp.theta), float(wp.C1)

    def rhs(_t, x):
        phi, y = x
        return (y * (theta * phi - C1),
                (theta - 0.5) * y * y + phi * (wp.K + phi * (0.5 + phi * (wp.C2 + phi * wp.C3))))

    tol = sep_tol * (1.0 + math.hypot(*to_eq.point))
    r2 = escape_radius * escape_radius

    def ev_escape(_t, x):
        return x[0] * x[0] + x[1] * x[1] - r2
    ev_escape.terminal = True

    def ev_arrive(_t, x):
        return math.hypot(x[0] - to_eq.phi, x[1] - to_eq.y) - tol
    ev_arrive.terminal = True
    ev_arrive.direction = -1

    def ev_axis(_t, x):
        return x[1]

    if side is None:
        rays = [ray, (-ray[0], -ray[1])]
    else:
        want = 1.0 if side == "right" else -1.0
        rays = [ray if ray[0] * want > 0 else (-ray[0], -ray[1])]
    last = None
    for v in rays:
        start = (from_eq.phi + offset * v[0], from_eq.y + offset * v[1])
        res = solve_ivp(rhs, (0.0, span), list(start), method="DOP853",
                        rtol=rtol, atol=atol, dense_output=True,
                        events=[ev_escape, ev_arrive, ev_axis])
        traj = Trajectory(
            wp=wp, t=res.t, states=res.y.T, sol=res.sol,
            escaped=len(res.t_events[0]) > 0,
            line_crossings=np.array([]), axis_crossings=res.t_events[2],
            status="ok" if res.success else (res.message or "solver failure"),
        )
        last = traj
        if len(res.t_events[1]) > 0 and not traj.escaped:
            return True, traj
    return False, last


def measure_axis_period(rhs, start, *, span=200.0, rtol=1e-12, atol=1e-14):
    """Period of a closed orbit of a generic planar `rhs`, via the time
    between the first and third y = 0 crossing starting off-axis.  Returns
    (period, crossing_times); period is None if fewer than 3 crossings."""

    def ev_axis(_t, x):
        return x[1]
    ev_axis.terminal = 4  # two periods suffice; don't integrate the full span

    res = solve_ivp(rhs, (0.0, span), list(start), method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True, events=[ev_axis])
    tc = res.t_events[0]
    tc = tc[tc > 1e-12]
    if len(tc) < 3:
        return None, tc
    return float(tc[2] - tc[0]), tc
