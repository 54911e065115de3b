"""Numeric particular solutions for the factorable power-coefficient form.

A second-order operator that factors as (D + a*x^n I)(D - a*x^n I) splits the
equation into two first-order linear solves,

    phi' + a x^n phi = q(x)        then        y' - a x^n y = phi(x),

each with the closed-form integrating factor exp(+-a x^(n+1)/(n+1)).  Note
the product rule: expanding the factored operator gives

    D^2 - (a n x^(n-1) + a^2 x^(2n)) I,

so the equation actually solved by the two stages is
y'' - (a n x^(n-1) + a^2 x^(2n)) y = q; the first-order cross term vanishes
only for n = 0 or a = 0.  All residual checks here use that factored form.

The closed-form integrals are generally non-elementary, so the primary path
marches both stages simultaneously with classical fourth-order Runge-Kutta
from zero initial values (any initial values give a particular solution;
zero is the reproducible choice).  The closed forms are still used: adaptive
quadrature evaluates them at a handful of probe points as an independent
cross-check of the march.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .algebra import Expr, evaluate
from .errors import NotFactorable, OverflowGuard, StepTooLarge

#: exp argument cap: |a x^(n+1)/(n+1)| above this overflows doubles.
EXP_ARG_LIMIT = 700.0


@dataclass(frozen=True)
class PowerCoefODE:
    """The factorable form with parameters a and n on a domain [x0, x1].

    ``forcing`` is an :class:`Expr` in x or any float callable; it only ever
    gets evaluated numerically.
    """

    a: float
    n: int
    forcing: object
    x0: float
    x1: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError("n must be a nonnegative integer")
        if not self.x1 > self.x0:
            raise ValueError("need x1 > x0")
        if isinstance(self.forcing, Expr):
            needs_positive = any(t.logpow > 0 or t.tpow < 0 for t in self.forcing.terms)
            if needs_positive and self.x0 <= 0:
                raise ValueError("forcing with logs needs x0 > 0")
        elif not callable(self.forcing):
            raise TypeError("forcing must be an Expr or a callable")

    def forcing_callable(self):
        f = self.forcing
        if isinstance(f, Expr):
            return lambda x: evaluate(f, x).real
        return lambda x: float(f(x))

    def coefficient(self, x):
        """w(x) in the factored-form equation y'' - w(x) y = q."""
        a, n = self.a, self.n
        w = a * a * x ** (2 * n)
        if n >= 1:
            w = w + a * n * x ** (n - 1)
        return w


@dataclass
class NumericSolution:
    """Sampled stage function phi and particular solution y on a uniform grid,
    with the residual diagnostics filled in by the solver."""

    xs: np.ndarray
    phi: np.ndarray
    y: np.ndarray
    h: float
    stage1_residuals: np.ndarray = field(default=None, repr=False)
    stage2_residuals: np.ndarray = field(default=None, repr=False)
    fd_residuals: np.ndarray = field(default=None, repr=False)
    max_stage1_residual: float = math.nan
    max_stage2_residual: float = math.nan
    max_fd_residual: float = math.nan
    probe_xs: np.ndarray = field(default=None, repr=False)
    probe_phi_errors: np.ndarray = field(default=None, repr=False)
    probe_y_errors: np.ndarray = field(default=None, repr=False)


def recognize_factorable(b: float, m: int, forcing=None,
                         x0: float = 0.0, x1: float = 1.0) -> PowerCoefODE:
    """Match y'' + b*x^m*y = q against the factorable pattern -a^2 x^(2n).

    Succeeds iff b < 0 and m is even, giving a = sqrt(-b) and n = m/2.
    Raises :class:`NotFactorable` with the reason otherwise.
    """
    if not isinstance(m, int):
        raise TypeError("m must be an integer")
    if b >= 0:
        raise NotFactorable(
            f"coefficient b = {b} must be negative: -a^2 has no real a otherwise"
        )
    if m % 2 != 0:
        raise NotFactorable(f"power m = {m} must be even to match x^(2n)")
    if forcing is None:
        forcing = lambda x: 0.0
    return PowerCoefODE(math.sqrt(-b), m // 2, forcing, x0, x1)


def _exp_arg(a: float, n: int, x: float) -> float:
    return a * x ** (n + 1) / (n + 1)


def solve_varcoef(ode: PowerCoefODE, h: float, stage_tol: float = 1e-6,
                  probe_points: int = 5, probe_tol: float = 1e-6) -> NumericSolution:
    """March both first-order stages left-to-right with classical RK4.

    Zero initial values at x0 give the canonical particular solution.  After
    the march the stage residuals are checked (:class:`StepTooLarge` if they
    exceed ``stage_tol``) and the integrating-factor closed forms are
    evaluated by adaptive quadrature at ``probe_points`` probe nodes as an
    independent cross-check.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    worst = max(abs(_exp_arg(ode.a, ode.n, ode.x0)), abs(_exp_arg(ode.a, ode.n, ode.x1)))
    if worst > EXP_ARG_LIMIT:
        raise OverflowGuard(
            f"integrating factor exponent reaches {worst:.1f} > {EXP_ARG_LIMIT:.0f} "
            "on this domain; shrink the domain or the parameters"
        )

    span = ode.x1 - ode.x0
    steps = max(4, round(span / h))
    h_eff = span / steps
    q = ode.forcing_callable()
    a, n = ode.a, ode.n

    def rhs(x, phi, y):
        axn = a * x ** n
        return q(x) - axn * phi, phi + axn * y

    xs = np.empty(steps + 1)
    phis = np.empty(steps + 1)
    ys = np.empty(steps + 1)
    xs[0], phis[0], ys[0] = ode.x0, 0.0, 0.0
    phi, y = 0.0, 0.0
    for i in range(steps):
        x = ode.x0 + i * h_eff
        k1p, k1y = rhs(x, phi, y)
        k2p, k2y = rhs(x + h_eff / 2, phi + h_eff / 2 * k1p, y + h_eff / 2 * k1y)
        k3p, k3y = rhs(x + h_eff / 2, phi + h_eff / 2 * k2p, y + h_eff / 2 * k2y)
        k4p, k4y = rhs(x + h_eff, phi + h_eff * k3p, y + h_eff * k3y)
        phi += h_eff / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        y += h_eff / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        xs[i + 1] = ode.x0 + (i + 1) * h_eff
        phis[i + 1] = phi
        ys[i + 1] = y
    if not (np.all(np.isfinite(phis)) and np.all(np.isfinite(ys))):
        raise OverflowGuard("solution is not finite on the grid")

    sol = NumericSolution(xs=xs, phi=phis, y=ys, h=h_eff)
    r1, r2, rfd = _residual_arrays(sol, ode)
    sol.stage1_residuals, sol.stage2_residuals, sol.fd_residuals = r1, r2, rfd
    sol.max_stage1_residual = float(np.nanmax(np.abs(r1)))
    sol.max_stage2_residual = float(np.nanmax(np.abs(r2)))
    sol.max_fd_residual = float(np.nanmax(np.abs(rfd)))
    if max(sol.max_stage1_residual, sol.max_stage2_residual) > stage_tol:
        raise StepTooLarge(
            f"stage residuals {sol.max_stage1_residual:.3e}, "
            f"{sol.max_stage2_residual:.3e} exceed {stage_tol:.1e}; reduce h"
        )

    if probe_points > 0:
        _cross_check(sol, ode, probe_points, probe_tol)
    return sol


def _cross_check(sol: NumericSolution, ode: PowerCoefODE,
                 probe_points: int, probe_tol: float):
    """Evaluate the closed-form integrating-factor solutions by adaptive
    quadrature at a few grid nodes and compare with the march."""
    a, n, x0 = ode.a, ode.n, ode.x0
    q = ode.forcing_callable()

    def big_a(x):
        return _exp_arg(a, n, x)

    def phi_exact(x):
        integral, _ = quad(lambda s: math.exp(big_a(s)) * q(s), x0, x,
                           epsabs=1e-12, epsrel=1e-10, limit=200)
        return math.exp(-big_a(x)) * integral

    def y_exact(x):
        integral, _ = quad(lambda s: math.exp(-big_a(s)) * phi_exact(s), x0, x,
                           epsabs=1e-10, epsrel=1e-8, limit=200)
        return math.exp(big_a(x)) * integral

    count = len(sol.xs)
    idx = np.unique(np.linspace(1, count - 1, probe_points).astype(int))
    probe_xs = sol.xs[idx]
    phi_scale = max(1.0, float(np.max(np.abs(sol.phi))))
    y_scale = max(1.0, float(np.max(np.abs(sol.y))))
    phi_err = np.array([abs(phi_exact(x) - sol.phi[i]) for i, x in zip(idx, probe_xs)])
    y_err = np.array([abs(y_exact(x) - sol.y[i]) for i, x in zip(idx, probe_xs)])
    sol.probe_xs = probe_xs
    sol.probe_phi_errors = phi_err
    sol.probe_y_errors = y_err
    if np.max(phi_err) > probe_tol * phi_scale or np.max(y_err) > probe_tol * y_scale:
        raise StepTooLarge(
            f"quadrature cross-check deviates by {float(np.max(phi_err)):.3e} (phi) / "
            f"{float(np.max(y_err)):.3e} (y); the march is not resolved, reduce h"
        )


def _residual_arrays(sol: NumericSolution, ode: PowerCoefODE):
    xs, phi, y, h = sol.xs, sol.phi, sol.y, sol.h
    a, n = ode.a, ode.n
    q = ode.forcing_callable()
    qv = np.array([q(x) for x in xs])
    axn = a * xs ** n

    # fourth-order centered first derivative, defined on nodes 2..N-2
    def d4(u):
        out = np.full_like(u, np.nan)
        out[2:-2] = (-u[4:] + 8 * u[3:-1] - 8 * u[1:-3] + u[:-4]) / (12 * h)
        return out

    # second-order centered second derivative, defined on nodes 1..N-1
    def d2(u):
        out = np.full_like(u, np.nan)
        out[1:-1] = (u[2:] - 2 * u[1:-1] + u[:-2]) / (h * h)
        return out

    r1 = d4(phi) + axn * phi - qv
    r2 = d4(y) - axn * y - phi
    w = np.array([ode.coefficient(x) for x in xs])
    rfd = d2(y) - w * y - qv
    return r1, r2, rfd


def residual_varcoef(sol: NumericSolution, ode: PowerCoefODE):
    """Maximum residuals of the two stage equations (fourth-order centered
    differences) and of the factored-form second-order equation (centered
    second differences), over the interior nodes."""
    r1, r2, rfd = _residual_arrays(sol, ode)
    return (
        float(np.nanmax(np.abs(r1))),
        float(np.nanmax(np.abs(r2))),
        float(np.nanmax(np.abs(rfd))),
    )
