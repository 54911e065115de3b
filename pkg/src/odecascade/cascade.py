"""The cascaded first-order solver.

Factoring the operator p(D) into first-order factors (D - r_i I) reduces the
equation to one first-order linear solve per characteristic root.  Each stage
applies the integrating-factor formula

    phi(t) = e^(r t) * integral( e^(-r t) * g(t) dt )

with the constant of integration omitted, so the output is one specific
particular solution.  Resonant forcings need no special casing: when a
forcing rate equals the stage root the shifted integrand has rate zero and
the antiderivative simply gains a power of t.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Expr, RealExpr, exponential, multiply, realify, scale
from .errors import NotClosedForm, NotConjugateSymmetric, VerificationFailed
from .model import LinearODE
from .roots import characteristic, find_roots
from .scalars import GaussianRational, as_scalar, conj as _conj, is_exact


@dataclass(frozen=True)
class CascadeStage:
    """One first-order solve: output phi satisfies phi' - root*phi = input."""

    root: object
    input: Expr
    output: Expr


@dataclass(frozen=True)
class CascadeTrace:
    """Full derivation record.

    ``stages[i].output`` is ``stages[i+1].input``; the first input is the
    forcing divided by the leading coefficient.  ``y_p`` is the final
    particular solution (conjugate-symmetrized for real problems, which can
    only change it by a homogeneous solution); ``y_p_real`` is its real form
    when the problem is real.
    """

    stages: tuple
    leading_coeff: object
    y_p: Expr
    y_p_real: RealExpr | None


def solve_first_order(r, g: Expr) -> Expr:
    """Particular solution of phi' - r*phi = g by the integrating factor."""
    r = as_scalar(r)
    shifted = multiply(exponential(-r), g)
    anti = shifted.integrate()
    return multiply(exponential(r), anti)


def _roots_conjugate_closed(seq) -> bool:
    if all(isinstance(r, GaussianRational) for r in seq):
        return Counter(seq) == Counter(_conj(r) for r in seq)
    values = [complex(r) for r in seq]
    tol = 1e-9 * (1.0 + max((abs(v) for v in values), default=0.0))
    unmatched = list(values)
    for v in values:
        target = v.conjugate()
        best = min(unmatched, key=lambda u: abs(u - target), default=None)
        if best is None or abs(best - target) > tol:
            return False
        unmatched.remove(best)
    return True


def _forcing_symmetric(q: Expr) -> bool:
    if q.is_exact():
        return q.conjugate() == q
    return q.conjugate().approx_equal(q)


def cascade(roots_seq, q: Expr, a_n=1) -> CascadeTrace:
    """Run every stage across the given root sequence.

    ``roots_seq`` must already be expanded to the full equation order
    (repeated roots listed repeatedly).  Raises :class:`NotClosedForm`,
    annotated with the failing stage, when an integrand leaves the algebra.
    """
    a_n = as_scalar(a_n)
    g = scale(GaussianRational(1) / a_n if is_exact(a_n) and q.is_exact()
              else 1.0 / complex(a_n), q)
    stages = []
    for idx, r in enumerate(roots_seq, start=1):
        try:
            phi = solve_first_order(r, g)
        except NotClosedForm as exc:
            raise NotClosedForm(
                f"stage {idx} (root {r}): {exc}", terms=exc.terms, stage=idx
            ) from exc
        stages.append(CascadeStage(as_scalar(r), g, phi))
        g = phi

    y_p = g
    y_real = None
    if _roots_conjugate_closed([st.root for st in stages]) and _forcing_symmetric(q):
        # Real problem: drop the skew part, which is a homogeneous solution,
        # so the result is a real function.
        half = GaussianRational(Fraction(1, 2)) if y_p.is_exact() else 0.5
        y_p = scale(half, y_p + y_p.conjugate())
        try:
            y_real = realify(y_p)
        except NotConjugateSymmetric:
            y_real = None
    return CascadeTrace(tuple(stages), a_n, y_p, y_real)


def particular_solution(ode: LinearODE):
    """End-to-end pipeline: characteristic -> roots -> cascade -> realify.

    Returns ``(solution, trace)`` where the solution is the real form when
    the problem admits one, otherwise the complex-exponential form.  The
    result is checked against the equation before returning; a nonzero
    residual raises :class:`VerificationFailed` (internal bug guard).
    """
    from .verify import residual_symbolic

    poly = characteristic(ode)
    rootset = find_roots(poly)
    q = ode.forcing
    a_n = ode.coeffs[-1]
    if not rootset.all_exact() or not q.is_exact():
        q = q.to_float()
        a_n = float(a_n)
        seq = tuple(complex(r) for r in rootset.expand())
        check_ode = ode.to_float()
    else:
        seq = rootset.expand()
        check_ode = ode
    trace = cascade(seq, q, a_n)
    res = residual_symbolic(check_ode, trace.y_p)
    if not res.is_zero:
        raise VerificationFailed(
            f"cascade result failed the residual check: {res.expr!r}"
        )
    solution = trace.y_p_real if trace.y_p_real is not None else trace.y_p
    return solution, trace
