"""Symbolic verification and the undetermined-coefficients oracle.

``apply_operator`` applies the full differential operator to a candidate;
``residual_symbolic`` automates the "substitute into the original equation"
check.  ``oracle_undetermined_coefficients`` computes a particular solution
by a completely different route (ansatz plus a triangular linear solve), so
cascade results can be cross-checked method against method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import REL_EPS, Expr, Term, differentiate, normalize, scale
from .errors import LogForcingUnsupported
from .model import LinearODE
from .roots import CharPoly, characteristic
from .scalars import GaussianRational

STATUS_EXACT_ZERO = "exact-zero"
STATUS_ZERO_TOL = "zero-within-tolerance"
STATUS_NONZERO = "nonzero"


@dataclass(frozen=True)
class Residual:
    """L[y] - q after normalization, with the backend's zero verdict."""

    expr: Expr
    is_zero: bool
    status: str


def apply_operator(ode: LinearODE, y: Expr) -> Expr:
    """Sum a_k * d^k y / dt^k, normalized."""
    out = Expr.zero()
    d = y
    for k, a in enumerate(ode.coeffs):
        if k > 0:
            d = differentiate(d)
        if a:
            out = out + scale(a, d)
    return out


def _zero_verdict(diff: Expr, exact: bool, scale_ref: float,
                  eps: float) -> tuple[bool, str]:
    if exact and diff.is_exact():
        return (diff.is_zero, STATUS_EXACT_ZERO if diff.is_zero else STATUS_NONZERO)
    ok = all(abs(t.coeff) <= eps * max(scale_ref, 1.0) for t in diff.terms)
    return (ok, STATUS_ZERO_TOL if ok else STATUS_NONZERO)


def residual_symbolic(ode: LinearODE, y_p: Expr, eps: float = REL_EPS) -> Residual:
    """Apply the operator, subtract the forcing, and test for zero.

    The approximate backend's zero test is relative to the coefficient scale
    of L[y_p] and q, not of the residual itself, so cancellations down to
    roundoff count as zero.
    """
    applied = apply_operator(ode, y_p)
    diff = applied - ode.forcing
    exact = applied.is_exact() and ode.forcing.is_exact()
    scale_ref = max(applied.max_coeff_mag(), ode.forcing.max_coeff_mag())
    is_zero, status = _zero_verdict(diff, exact, scale_ref, eps)
    return Residual(diff, is_zero, status)


def equal_mod_homogeneous(ode: LinearODE, y1: Expr, y2: Expr,
                          eps: float = REL_EPS) -> bool:
    """True iff L[y1 - y2] is zero, i.e. y1 and y2 differ by a homogeneous
    solution: the right equivalence for particular solutions."""
    applied1 = apply_operator(ode, y1)
    applied2 = apply_operator(ode, y2)
    diff = applied1 - applied2
    exact = applied1.is_exact() and applied2.is_exact()
    scale_ref = max(applied1.max_coeff_mag(), applied2.max_coeff_mag())
    is_zero, _ = _zero_verdict(diff, exact, scale_ref, eps)
    return is_zero


# ---------------------------------------------------------------------------
# undetermined-coefficients oracle
# ---------------------------------------------------------------------------

def _derivative_chain(p: CharPoly):
    chain = [p]
    while chain[-1].degree >= 1:
        chain.append(chain[-1].derivative())
    return chain


def _rate_multiplicity(chain, lam, exact: bool) -> int:
    """Number of leading derivatives of p vanishing at lam."""
    for i, poly in enumerate(chain):
        value = poly.eval(lam)
        if exact:
            if value:
                return i
        else:
            scale_ = sum(abs(complex(c)) for c in poly.coeffs) \
                * max(1.0, abs(complex(lam))) ** poly.degree
            if abs(complex(value)) > 1e-8 * max(scale_, 1.0):
                return i
    return len(chain) - 1


def oracle_undetermined_coefficients(ode: LinearODE, q: Expr) -> Expr:
    """Particular solution by the classical ansatz, solved triangularly.

    For each forcing rate lam with top power K and multiplicity s of lam
    among the characteristic roots, the ansatz basis is
    { t^j e^(lam t) : s <= j <= s+K }.  L maps t^j e^(lam t) into the span of
    lower powers at the same rate, with known leading factor p^(s)(lam)/s!,
    so the coefficient equations solve top-down with no linear algebra.

    Forcings with logarithm terms are outside this method entirely; they
    raise :class:`LogForcingUnsupported` (the cascade handles them).
    """
    log_terms = [t for t in q.terms if t.logpow > 0]
    if log_terms:
        raise LogForcingUnsupported(
            "the undetermined-coefficients ansatz cannot represent logarithm "
            "forcings; use the cascade solver"
        )

    p = characteristic(ode)
    exact = q.is_exact() and all(isinstance(c, Fraction) for c in ode.coeffs)
    if not exact:
        q = q.to_float()
        p = CharPoly(tuple(float(c) for c in p.coeffs))
    chain = _derivative_chain(p)
    n = p.degree

    groups: dict = {}
    for t in q.terms:
        groups.setdefault(t.exponent, {})[t.tpow] = t.coeff

    zero = GaussianRational(0) if exact else 0j
    result_terms = []
    for lam, powers in groups.items():
        big_k = max(powers)
        s = _rate_multiplicity(chain, lam, exact)
        # D[i] = p^(i)(lam) / i!
        d_values = {}
        for i in range(s, min(s + big_k, n) + 1):
            d_values[i] = chain[i].eval(lam) / math.factorial(i)
        coeffs: dict[int, object] = {}
        for m in range(big_k, -1, -1):
            target = powers.get(m, zero)
            acc = zero
            for j in range(m + s + 1, s + big_k + 1):
                i = j - m
                if i > n or i not in d_values:
                    continue
                acc = acc + d_values[i] * math.perm(j, i) * coeffs[j]
            denom = d_values[s] * math.perm(m + s, s)
            coeffs[m + s] = (target - acc) / denom
        for j, c in coeffs.items():
            result_terms.append(Term(c, j, 0, lam))
    return normalize(result_terms)
