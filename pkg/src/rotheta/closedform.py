"""Closed-form traveling-wave profiles for theta = 1/2 with the singular
line through the origin (C1 = 0).

In that corner the profile equation collapses to phi'' = 2 g(phi), with the
orbit polynomial

    (phi')^2 = P(phi) = C3 phi^4 + (4 C2 / 3) phi^3 + phi^2 + 4 K phi - 4 h

on the level H = h.  The root configuration of P dictates the wave family:

* two simple real roots + a complex pair  -> one periodic orbit, cn-shaped;
* four simple real roots                  -> two periodic orbits, sn-shaped
  (right orbit on [p2, p1], left orbit on [p4, p3]);
* a double middle root                    -> two solitary waves homoclinic
  to the double root (right hump to p1, left dip to p3).

All profiles are expressed through Jacobi elliptic functions with modulus
and frequency derived from the roots; `ode_residual` provides the
finite-difference check that a constructed profile actually satisfies the
equation, independent of how it was derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .elliptic import complete_K, jacobi
from .params import WaveParams
from .polyroots import merge_close_roots, quartic_roots

__all__ = [
    "OrbitPolynomial",
    "WaveSolution",
    "orbit_polynomial",
    "closed_form_menu",
    "construct_cn",
    "construct_sn",
    "construct_solitary",
    "ode_residual",
    "profile_rhs",
]


def _require_reduced(wp: WaveParams):
    if wp.theta != Fraction(1, 2) or float(wp.C1) != 0.0:
        raise ValueError("closed forms require theta = 1/2 with C1 = 0")


def profile_rhs(wp: WaveParams):
    """Planar RHS (phi, y) -> (y, 2 g(phi)) of the reduced profile equation."""
    _require_reduced(wp)
    C2, C3, K = float(wp.C2), float(wp.C3), float(wp.K)

    def rhs(_t, x):
        phi, y = x
        return (y, 2.0 * (K + phi * (0.5 + phi * (C2 + phi * C3))))

    return rhs


@dataclass(frozen=True)
class OrbitPolynomial:
    """P(phi) = (phi')^2 on a level h, with its factored real structure."""

    coeffs: tuple          # descending, degree 4
    h: float
    real_roots: tuple      # (root, multiplicity), ascending
    complex_pairs: tuple   # upper-half-plane representatives

    @property
    def lead(self) -> float:
        return self.coeffs[0]

    def __call__(self, phi):
        return np.polyval(self.coeffs, phi)


def orbit_polynomial(wp: WaveParams, h: float, rel_tol: float = 1e-7) -> OrbitPolynomial:
    _require_reduced(wp)
    coeffs = (float(wp.C3), 4.0 * float(wp.C2) / 3.0, 1.0, 4.0 * float(wp.K), -4.0 * h)
    reals, pairs = quartic_roots(*coeffs, rel_tol=rel_tol)
    merged = merge_close_roots(reals, rel_tol=rel_tol)
    _validate_factorization(coeffs, merged, pairs, rel_tol)
    return OrbitPolynomial(coeffs=coeffs, h=h, real_roots=tuple(merged),
                           complex_pairs=tuple(pairs))


def _validate_factorization(coeffs, merged, pairs, rel_tol):
    """Reassemble lead * prod(phi - r) and compare against the coefficients."""
    poly = [1.0]
    for r, mult in merged:
        for _ in range(mult):
            poly = np.convolve(poly, [1.0, -r])
    for z in pairs:
        poly = np.convolve(poly, [1.0, -2.0 * z.real, abs(z) ** 2])
    poly = np.asarray(poly) * coeffs[0]
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    err = float(np.max(np.abs(poly - np.asarray(coeffs)))) / scale
    if err > 1e-9 + 10 * rel_tol:
        raise ArithmeticError(
            f"quartic factorization failed to reassemble (residual {err:.3e})")


@dataclass
class WaveSolution:
    kind: str                  # cn-periodic | sn-periodic-right | sn-periodic-left
    #                          | solitary-right | solitary-left
    wp: WaveParams
    h: float
    modulus_m: float           # parameter m = k^2; NaN for solitary
    omega: float
    period: float | None       # in xi; None for solitary waves
    phi_range: tuple           # (min, max) attained by the profile
    roots: tuple               # the roots entering the formula, descending
    detail: str = ""

    def __call__(self, xi):
        return self.profile(xi)

    def profile(self, xi):
        raise NotImplementedError  # bound per-instance by the constructors


def _bind(sol: WaveSolution, fn):
    sol.profile = fn
    return sol


def construct_cn(wp: WaveParams, pol: OrbitPolynomial) -> WaveSolution:
    """Periodic orbit between the two real roots, complex pair present.

    With p1 > p2 real, b +- a i complex, A = |lead|:
        A1 = sqrt((p1-b)^2 + a^2),  B1 = sqrt((p2-b)^2 + a^2),
        m  = ((p1-p2)^2 - (A1-B1)^2) / (4 A1 B1),
        omega = sqrt(A * A1 * B1),
        phi = (p1 B1 (1-cn) + p2 A1 (1+cn)) / ((A1+B1) + (A1-B1) cn),
    cn = cn(omega xi | m); phi(0) = p2, phi(2K/omega) = p1, period 4K/omega.
    """
    reals = [r for r, _ in pol.real_roots]
    if len(reals) != 2 or not pol.complex_pairs:
        raise ValueError("cn form needs exactly two simple real roots and a complex pair")
    p2, p1 = sorted(reals)
    z = pol.complex_pairs[0]
    b1, a1 = z.real, abs(z.imag)
    A = abs(pol.lead)
    A1 = math.hypot(p1 - b1, a1)
    B1 = math.hypot(p2 - b1, a1)
    m = ((p1 - p2) ** 2 - (A1 - B1) ** 2) / (4.0 * A1 * B1)
    m = min(max(m, 0.0), 1.0)
    omega = math.sqrt(A * A1 * B1)
    period = 4.0 * complete_K(m) / omega

    def fn(xi):
        xi = np.asarray(xi, dtype=float)
        cn = np.vectorize(lambda u: jacobi(u, m)[1])(omega * xi)
        return (p1 * B1 * (1.0 - cn) + p2 * A1 * (1.0 + cn)) / \
               ((A1 + B1) + (A1 - B1) * cn)

    sol = WaveSolution(kind="cn-periodic", wp=wp, h=pol.h, modulus_m=m,
                       omega=omega, period=period, phi_range=(p2, p1),
                       roots=(p1, p2, complex(b1, a1)),
                       detail="oscillates between the two real turning points")
    return _bind(sol, fn)


def construct_sn(wp: WaveParams, pol: OrbitPolynomial, side: str) -> WaveSolution:
    """Periodic orbit for four simple real roots p1 > p2 > p3 > p4.

    Both orbits share
        m = (p1-p2)(p3-p4) / ((p1-p3)(p2-p4)),
        omega = sqrt(A (p1-p3)(p2-p4)) / 2,   A = |lead|,
    and have period 2K(m)/omega (the formulas depend on sn^2).
    Right orbit on [p2, p1]:
        phi = (p2 (p1-p3) - p3 (p1-p2) sn^2) / ((p1-p3) - (p1-p2) sn^2).
    Left orbit on [p4, p3]:
        phi = (p4 (p1-p3) + p1 (p3-p4) sn^2) / ((p1-p3) + (p3-p4) sn^2).
    """
    reals = [r for r, _ in pol.real_roots]
    if len(reals) != 4:
        raise ValueError("sn form needs four simple real roots")
    p4, p3, p2, p1 = sorted(reals)
    A = abs(pol.lead)
    m = (p1 - p2) * (p3 - p4) / ((p1 - p3) * (p2 - p4))
    m = min(max(m, 0.0), 1.0)
    omega = 0.5 * math.sqrt(A * (p1 - p3) * (p2 - p4))
    period = 2.0 * complete_K(m) / omega

    if side == "right":
        def fn(xi):
            xi = np.asarray(xi, dtype=float)
            sn2 = np.vectorize(lambda u: jacobi(u, m)[0] ** 2)(omega * xi)
            return (p2 * (p1 - p3) - p3 * (p1 - p2) * sn2) / \
                   ((p1 - p3) - (p1 - p2) * sn2)
        rng = (p2, p1)
    elif side == "left":
        def fn(xi):
            xi = np.asarray(xi, dtype=float)
            sn2 = np.vectorize(lambda u: jacobi(u, m)[0] ** 2)(omega * xi)
            return (p4 * (p1 - p3) + p1 * (p3 - p4) * sn2) / \
                   ((p1 - p3) + (p3 - p4) * sn2)
        rng = (p4, p3)
    else:
        raise ValueError("side must be 'left' or 'right'")

    sol = WaveSolution(kind=f"sn-periodic-{side}", wp=wp, h=pol.h, modulus_m=m,
                       omega=omega, period=period, phi_range=rng,
                       roots=(p1, p2, p3, p4),
                       detail=f"{side} orbit of the four-real-root level")
    return _bind(sol, fn)


def construct_solitary(wp: WaveParams, pol: OrbitPolynomial, side: str) -> WaveSolution:
    """Homoclinic profiles for roots p1 > d (double) > p3, A = |lead|.

    With a = (p1-d)(d-p3), b = p1 - 2d + p3, omega = sqrt(A a):
        right hump: phi = d + 2a / ((p1-p3) cosh(omega xi) - b),  phi(0) = p1,
        left dip:   phi = d - 2a / ((p1-p3) cosh(omega xi) + b),  phi(0) = p3,
    both tending to the double root d as |xi| -> infinity.
    """
    dbl = [r for r, mult in pol.real_roots if mult == 2]
    simples = sorted(r for r, mult in pol.real_roots if mult == 1)
    if len(dbl) != 1 or len(simples) != 2:
        raise ValueError("solitary form needs one double root between two simple roots")
    d = dbl[0]
    p3, p1 = simples
    if not p3 < d < p1:
        raise ValueError("double root must lie between the simple roots")
    A = abs(pol.lead)
    a = (p1 - d) * (d - p3)
    b = p1 - 2.0 * d + p3
    omega = math.sqrt(A * a)

    if side == "right":
        def fn(xi):
            xi = np.asarray(xi, dtype=float)
            return d + 2.0 * a / ((p1 - p3) * np.cosh(omega * xi) - b)
        rng = (d, p1)
    elif side == "left":
        def fn(xi):
            xi = np.asarray(xi, dtype=float)
            return d - 2.0 * a / ((p1 - p3) * np.cosh(omega * xi) + b)
        rng = (p3, d)
    else:
        raise ValueError("side must be 'left' or 'right'")

    sol = WaveSolution(kind=f"solitary-{side}", wp=wp, h=pol.h,
                       modulus_m=float("nan"), omega=omega, period=None,
                       phi_range=rng, roots=(p1, d, p3),
                       detail=f"homoclinic to phi = {d:.6g}, decay rate {omega:.6g}")
    return _bind(sol, fn)


def closed_form_menu(wp: WaveParams, h: float, rel_tol: float = 1e-7):
    """All closed-form profiles available on the level H = h.

    Returns a list of WaveSolution (possibly empty: levels whose bounded
    component degenerates to a point, or root patterns outside the three
    catalogued configurations, yield no profile).
    """
    pol = orbit_polynomial(wp, h, rel_tol=rel_tol)
    reals = pol.real_roots
    n_simple = sum(1 for _, mult in reals if mult == 1)
    n_double = sum(1 for _, mult in reals if mult == 2)

    out = []
    if n_double == 0 and n_simple == 2 and pol.complex_pairs:
        out.append(construct_cn(wp, pol))
    elif n_double == 0 and n_simple == 4:
        out.append(construct_sn(wp, pol, "right"))
        out.append(construct_sn(wp, pol, "left"))
    elif n_double == 1 and n_simple == 2:
        d = next(r for r, mult in reals if mult == 2)
        lo, hi = (r for r, mult in reals if mult == 1)
        if lo < d < hi:
            out.append(construct_solitary(wp, pol, "right"))
            out.append(construct_solitary(wp, pol, "left"))
        # an outermost double root bounds no orbit of positive length
    return out


def ode_residual(sol: WaveSolution, n: int = 41, halfwidth: float = None) -> float:
    """Max relative defect of phi'' = 2 g(phi) along the profile.

    Second derivatives are taken by central differences with one Richardson
    sweep at step 4e-3 / max(1, omega); the residual is scaled by
    max(1, |2 g(phi)|) pointwise.  Also checks (phi')^2 = P(phi) the same
    way at step 1e-5 / max(1, omega) and returns the larger defect.
    """
    wp = sol.wp
    C2, C3, K = float(wp.C2), float(wp.C3), float(wp.K)
    pol = orbit_polynomial(wp, sol.h)
    if sol.period is not None:
        xi = np.linspace(-0.45 * sol.period, 0.45 * sol.period, n)
    else:
        if halfwidth is None:
            halfwidth = 6.0 / sol.omega
        xi = np.linspace(-halfwidth, halfwidth, n)

    h2 = 4e-3 / max(1.0, sol.omega)
    h1 = 1e-5 / max(1.0, sol.omega)

    def second(x, hh):
        return (sol(x + hh) - 2.0 * sol(x) + sol(x - hh)) / (hh * hh)

    def first(x, hh):
        return (sol(x + hh) - sol(x - hh)) / (2.0 * hh)

    d2 = (4.0 * second(xi, h2 / 2) - second(xi, h2)) / 3.0
    d1 = (4.0 * first(xi, h1 / 2) - first(xi, h1)) / 3.0
    phi = sol(xi)
    g2 = 2.0 * (K + phi * (0.5 + phi * (C2 + phi * C3)))
    res2 = np.abs(d2 - g2) / np.maximum(1.0, np.abs(g2))
    res1 = np.abs(d1 * d1 - pol(phi)) / np.maximum(1.0, np.abs(pol(phi)))
    return float(max(res2.max(), res1.max()))
