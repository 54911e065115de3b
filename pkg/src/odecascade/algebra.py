"""Closed algebra of exponential-polynomial-logarithm terms.

Every symbolic object in the solver is a finite sum of terms

    c * t^k * ln(t)^m * e^(lam*t)

with complex coefficient ``c`` and rate ``lam`` (exact Gaussian rationals or
complex floats, see :mod:`odecascade.scalars`), integer ``k`` and nonnegative
integer ``m``.  The class is closed under addition, multiplication and
differentiation, and closed under antidifferentiation except when a term has
both a nonzero rate and a logarithm factor (or a negative power of t), in
which case :class:`NotClosedForm` is raised.

``k`` may be negative so that differentiation never leaves the algebra
(d/dt ln t = 1/t); the parser and the solvers only ever produce k >= 0.

Expressions are kept in a canonical form: terms sorted by
(Re lam, Im lam, tpow, logpow), one term per key, no zero coefficients.  Two
expressions represent the same function iff they are structurally equal
(exact backend) or their difference passes the relative zero test
(approximate backend).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, NotClosedForm, NotConjugateSymmetric
from .scalars import GaussianRational, as_scalar, conj as _conj_scalar, is_exact

#: Relative tolerance of the approximate backend's zero test.  A coefficient
#: counts as zero when its magnitude is at most REL_EPS times the largest
#: coefficient magnitude in the enclosing expression.
REL_EPS = 1e-12


@dataclass(frozen=True)
class Term:
    """One summand c * t^tpow * ln(t)^logpow * e^(exponent*t)."""

    coeff: object
    tpow: int = 0
    logpow: int = 0
    exponent: object = GaussianRational(0)

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_scalar(self.coeff))
        object.__setattr__(self, "exponent", as_scalar(self.exponent))
        if not isinstance(self.tpow, int) or not isinstance(self.logpow, int):
            raise TypeError("tpow and logpow must be integers")
        if self.logpow < 0:
            raise ValueError("logpow must be nonnegative")

    @property
    def key(self):
        return (self.tpow, self.logpow, self.exponent)

    def is_exact(self) -> bool:
        return is_exact(self.coeff) and is_exact(self.exponent)


def _term_to_float(t: Term) -> Term:
    return Term(complex(t.coeff), t.tpow, t.logpow, complex(t.exponent))


def _sort_key(t: Term):
    lam = t.exponent
    if isinstance(lam, GaussianRational):
        return (lam.re, lam.im, t.tpow, t.logpow)
    return (lam.real, lam.imag, t.tpow, t.logpow)


def _snap_exponents(terms, eps):
    """Float backend: zero out tiny rate components and merge rates that
    agree within tolerance, so resonant cancellations are recognized."""
    scale = max((abs(t.exponent) for t in terms), default=0.0)
    tol = eps * max(1.0, scale)

    def snap(lam):
        re = 0.0 if abs(lam.real) <= tol else lam.real
        im = 0.0 if abs(lam.imag) <= tol else lam.imag
        return complex(re, im)

    terms = [Term(t.coeff, t.tpow, t.logpow, snap(t.exponent)) for t in terms]

    # Cluster near-identical rates onto a single representative.
    reps: list[complex] = []
    mapping: dict[complex, complex] = {}
    for lam in sorted({t.exponent for t in terms}, key=lambda z: (z.real, z.imag)):
        for rep in reps:
            if abs(lam - rep) <= tol:
                mapping[lam] = rep
                break
        else:
            reps.append(lam)
            mapping[lam] = lam
    return [Term(t.coeff, t.tpow, t.logpow, mapping[t.exponent]) for t in terms]


class Expr:
    """Canonical finite sum of Terms.  The zero function is the empty sum."""

    __slots__ = ("terms",)

    def __init__(self, terms=(), *, _canonical=False):
        if _canonical:
            object.__setattr__(self, "terms", tuple(terms))
        else:
            object.__setattr__(self, "terms", _canonicalize(terms))

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    # -- basics ---------------------------------------------------------

    @staticmethod
    def zero() -> "Expr":
        return Expr((), _canonical=True)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return all(t.is_exact() for t in self.terms)

    def to_float(self) -> "Expr":
        return normalize([_term_to_float(t) for t in self.terms])

    def max_coeff_mag(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "Expr(0)"
        bits = ", ".join(
            f"({t.coeff})*t^{t.tpow}*ln^{t.logpow}*e^({t.exponent}t)" for t in self.terms
        )
        return f"Expr[{bits}]"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Expr):
            return normalize(list(self.terms) + list(other.terms))
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Expr):
            return self + (-other)
        return NotImplemented

    def __neg__(self):
        return Expr([Term(-t.coeff, t.tpow, t.logpow, t.exponent) for t in self.terms])

    def __mul__(self, other):
        if isinstance(other, Expr):
            return multiply(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    # -- calculus ---------------------------------------------------------

    def diff(self) -> "Expr":
        return differentiate(self)

    def integrate(self) -> "Expr":
        return antiderivative(self)

    def conjugate(self) -> "Expr":
        return Expr(
            [Term(_conj_scalar(t.coeff), t.tpow, t.logpow, _conj_scalar(t.exponent))
             for t in self.terms]
        )

    def eval(self, t: float):
        return evaluate(self, t)

    def realify(self, eps: float = REL_EPS) -> "RealExpr":
        return realify(self, eps)

    def approx_equal(self, other: "Expr", eps: float = REL_EPS) -> bool:
        """Equality within the approximate backend's zero test.

        Exact expressions compare structurally; otherwise the difference must
        vanish relative to the larger of the two coefficient scales.
        """
        if self.is_exact() and other.is_exact():
            return self == other
        diff = self.to_float() - other.to_float()
        scale_ref = max(self.max_coeff_mag(), other.max_coeff_mag(), 1.0)
        return all(abs(t.coeff) <= eps * scale_ref for t in diff.terms)


def _canonicalize(terms, eps: float = REL_EPS) -> tuple:
    terms = [t if isinstance(t, Term) else Term(*t) for t in terms]
    if not terms:
        return ()
    exact = all(t.is_exact() for t in terms)
    if not exact:
        terms = [_term_to_float(t) for t in terms]
        terms = _snap_exponents(terms, eps)

    merged: dict[tuple, object] = {}
    for t in terms:
        if t.key in merged:
            merged[t.key] = merged[t.key] + t.coeff
        else:
            merged[t.key] = t.coeff

    out = [Term(c, k[0], k[1], k[2]) for k, c in merged.items()]
    if exact:
        out = [t for t in out if t.coeff]
    else:
        scale_ = max((abs(t.coeff) for t in out), default=0.0)
        out = [t for t in out if abs(t.coeff) > eps * scale_]
    out.sort(key=_sort_key)
    return tuple(out)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def normalize(raw, eps: float = REL_EPS) -> Expr:
    """Canonical form of a list of terms (merge keys, drop zeros, sort)."""
    if isinstance(raw, Expr):
        raw = raw.terms
    return Expr(_canonicalize(raw, eps), _canonical=True)


def add(a: Expr, b: Expr) -> Expr:
    return a + b


def scale(c, a: Expr) -> Expr:
    c = as_scalar(c)
    return Expr([Term(c * t.coeff, t.tpow, t.logpow, t.exponent) for t in a.terms])


def multiply(a: Expr, b: Expr) -> Expr:
    out = []
    for ta in a.terms:
        for tb in b.terms:
            out.append(Term(
                ta.coeff * tb.coeff,
                ta.tpow + tb.tpow,
                ta.logpow + tb.logpow,
                ta.exponent + tb.exponent,
            ))
    return normalize(out)


def conjugate(e: Expr) -> Expr:
    return e.conjugate()


def differentiate(e: Expr) -> Expr:
    """Exact derivative, linear in e.  Never leaves the algebra."""
    out = []
    for t in e.terms:
        if t.exponent:
            out.append(Term(t.coeff * t.exponent, t.tpow, t.logpow, t.exponent))
        if t.tpow:
            out.append(Term(t.coeff * t.tpow, t.tpow - 1, t.logpow, t.exponent))
        if t.logpow:
            out.append(Term(t.coeff * t.logpow, t.tpow - 1, t.logpow - 1, t.exponent))
    return normalize(out)


def _integrate_poly_exp(coeff, k: int, lam) -> list:
    # int t^k e^(lam t) dt by repeated integration by parts, k >= 0, lam != 0.
    out = []
    c = coeff / lam
    j = k
    while True:
        out.append(Term(c, j, 0, lam))
        if j == 0:
            break
        c = -(c * j) / lam
        j -= 1
    return out


def _integrate_poly_log(coeff, k: int, m: int) -> list:
    # int t^k ln(t)^m dt, k != -1:  t^(k+1) ln^m / (k+1) - m/(k+1) * I(k, m-1).
    out = []
    c = coeff
    mm = m
    while True:
        out.append(Term(c / (k + 1), k + 1, mm, 0))
        if mm == 0:
            break
        c = -(c * mm) / (k + 1)
        mm -= 1
    return out


def antiderivative(e: Expr) -> Expr:
    """One antiderivative with no constant of integration.

    Integrating a nonconstant term never produces a constant term; the
    constant c itself integrates to c*t.  Raises :class:`NotClosedForm` when
    a term has a nonzero rate together with a log factor or a negative power
    of t (the result would need exponential-integral functions).
    """
    out = []
    offending = []
    for t in e.terms:
        if t.exponent:
            if t.logpow > 0 or t.tpow < 0:
                offending.append(t)
            else:
                out.extend(_integrate_poly_exp(t.coeff, t.tpow, t.exponent))
        elif t.tpow == -1:
            out.append(Term(t.coeff / (t.logpow + 1), 0, t.logpow + 1, 0))
        else:
            out.extend(_integrate_poly_log(t.coeff, t.tpow, t.logpow))
    if offending:
        parts = ", ".join(
            f"t^{t.tpow}*ln^{t.logpow}(t)*e^({t.exponent}t)" for t in offending
        )
        raise NotClosedForm(
            f"no closed-form antiderivative for: {parts}", terms=offending
        )
    return normalize(out)


def evaluate(e, t: float):
    """Numeric value at t.  Expr gives a complex, RealExpr a float.

    Raises :class:`DomainError` at t <= 0 when log terms are present and at
    t = 0 when negative powers are present.
    """
    if isinstance(e, RealExpr):
        return _evaluate_real(e, t)
    total = 0j
    for term in e.terms:
        total += complex(term.coeff) * _basis_value(term.tpow, term.logpow, t) \
            * cmath.exp(complex(term.exponent) * t)
    return total


def _basis_value(k: int, m: int, t: float) -> float:
    if m > 0 and t <= 0:
        raise DomainError(f"ln(t) term evaluated at t={t} <= 0")
    if k < 0 and t == 0:
        raise DomainError(f"t^{k} term evaluated at t=0")
    value = float(t) ** k
    if m:
        value *= math.log(t) ** m
    return value


# ---------------------------------------------------------------------------
# real-basis expressions
# ---------------------------------------------------------------------------

COS = "cos"
SIN = "sin"


@dataclass(frozen=True)
class RealTerm:
    """One summand r * t^tpow * ln(t)^logpow * e^(alpha t) * cos/sin(beta t)."""

    coeff: object
    tpow: int = 0
    logpow: int = 0
    alpha: object = Fraction(0)
    beta: object = Fraction(0)
    kind: str = COS

    def __post_init__(self):
        if self.kind not in (COS, SIN):
            raise ValueError("kind must be 'cos' or 'sin'")
        if isinstance(self.beta, (int, Fraction)) and self.beta < 0:
            raise ValueError("beta must be nonnegative")

    @property
    def key(self):
        return (self.alpha, self.beta, self.tpow, self.logpow, self.kind)


class RealExpr:
    """Canonical sum of real-basis terms, produced by :func:`realify`."""

    __slots__ = ("terms",)

    def __init__(self, terms=(), *, _canonical=False):
        if _canonical:
            object.__setattr__(self, "terms", tuple(terms))
        else:
            object.__setattr__(self, "terms", _canonicalize_real(terms))

    def __setattr__(self, name, value):
        raise AttributeError("RealExpr is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return all(isinstance(t.coeff, (int, Fraction)) for t in self.terms)

    def __eq__(self, other):
        if not isinstance(other, RealExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "RealExpr(0)"
        bits = ", ".join(
            f"({t.coeff})*t^{t.tpow}*ln^{t.logpow}*e^({t.alpha}t)*{t.kind}({t.beta}t)"
            for t in self.terms
        )
        return f"RealExpr[{bits}]"

    def eval(self, t: float) -> float:
        return _evaluate_real(self, t)

    def to_expr(self) -> Expr:
        """Embed back into the complex-exponential algebra."""
        out = []
        for rt in self.terms:
            c = _real_scalar_to_scalar(rt.coeff)
            alpha = _real_scalar_to_scalar(rt.alpha)
            beta = _real_scalar_to_scalar(rt.beta)
            if _scalar_is_zero(beta):
                if rt.kind == COS:
                    out.append(Term(c, rt.tpow, rt.logpow, alpha))
                continue
            i = _imag_unit_like(c, alpha, beta)
            lam_p = alpha + i * beta
            lam_m = alpha - i * beta
            half = _half_like(c)
            if rt.kind == COS:
                out.append(Term(c * half, rt.tpow, rt.logpow, lam_p))
                out.append(Term(c * half, rt.tpow, rt.logpow, lam_m))
            else:
                out.append(Term(c * half * (-i), rt.tpow, rt.logpow, lam_p))
                out.append(Term(c * half * i, rt.tpow, rt.logpow, lam_m))
        return normalize(out)


def _real_scalar_to_scalar(v):
    if isinstance(v, (int, Fraction)):
        return GaussianRational(v)
    return complex(v)


def _scalar_is_zero(v) -> bool:
    return not v


def _imag_unit_like(*values):
    if all(isinstance(v, GaussianRational) for v in values):
        return GaussianRational(0, 1)
    return 1j


def _half_like(c):
    if isinstance(c, GaussianRational):
        return GaussianRational(Fraction(1, 2))
    return 0.5


def _canonicalize_real(terms, eps: float = REL_EPS) -> tuple:
    # sin(0*t) is the zero function, so beta = 0 sine terms drop out
    terms = [t for t in terms if not (t.kind == SIN and not t.beta)]
    if not terms:
        return ()
    exact = all(
        isinstance(t.coeff, (int, Fraction))
        and isinstance(t.alpha, (int, Fraction))
        and isinstance(t.beta, (int, Fraction))
        for t in terms
    )
    if not exact:
        terms = [
            RealTerm(float(t.coeff), t.tpow, t.logpow, float(t.alpha), float(t.beta), t.kind)
            for t in terms
        ]
    merged: dict[tuple, object] = {}
    for t in terms:
        merged[t.key] = merged.get(t.key, 0) + t.coeff
    out = [RealTerm(c, k[2], k[3], k[0], k[1], k[4]) for k, c in merged.items()]
    if exact:
        out = [t for t in out if t.coeff]
    else:
        scale_ = max((abs(t.coeff) for t in out), default=0.0)
        out = [t for t in out if abs(t.coeff) > eps * scale_]
    out.sort(key=lambda t: (float(t.alpha), float(t.beta), t.tpow, t.logpow, t.kind))
    return tuple(out)


def _evaluate_real(e: RealExpr, t: float) -> float:
    total = 0.0
    for rt in e.terms:
        v = float(rt.coeff) * _basis_value(rt.tpow, rt.logpow, t)
        v *= math.exp(float(rt.alpha) * t)
        angle = float(rt.beta) * t
        v *= math.cos(angle) if rt.kind == COS else math.sin(angle)
        total += v
    return total


def realify(e: Expr, eps: float = REL_EPS) -> RealExpr:
    """Rewrite a conjugate-symmetric expression in the cos/sin real basis.

    Every term with rate lam, Im lam != 0, must be matched by a term with the
    conjugate rate and conjugate coefficient (exactly in the exact backend,
    within the relative zero test otherwise); purely real rates must carry
    real coefficients.  Raises :class:`NotConjugateSymmetric` otherwise.
    """
    exact = e.is_exact()
    coeff_scale = max(e.max_coeff_mag(), 1.0)
    rate_scale = max((abs(t.exponent) for t in e.terms), default=0.0)
    rate_tol = eps * max(1.0, rate_scale)

    def im_of(lam):
        return lam.im if isinstance(lam, GaussianRational) else lam.imag

    def re_of(lam):
        return lam.re if isinstance(lam, GaussianRational) else lam.real

    by_key = {t.key: t.coeff for t in e.terms}
    consumed = set()
    out = []

    for t in e.terms:
        if t.key in consumed:
            continue
        lam = t.exponent
        lam_im = im_of(lam)
        if not lam_im:
            c = t.coeff
            c_im = c.im if isinstance(c, GaussianRational) else c.imag
            if exact:
                if c_im:
                    raise NotConjugateSymmetric(
                        f"real-rate term has complex coefficient {c}"
                    )
                r = c.re
            else:
                if abs(c_im) > eps * coeff_scale:
                    raise NotConjugateSymmetric(
                        f"real-rate term has complex coefficient {c}"
                    )
                r = c.real
            alpha = re_of(lam)
            out.append(RealTerm(r, t.tpow, t.logpow, alpha, type(alpha)(0), COS))
            consumed.add(t.key)
            continue

        if lam_im < 0:
            # handled when its positive-imaginary partner is visited
            continue

        partner_key = (t.tpow, t.logpow, _conj_scalar(lam))
        partner = by_key.get(partner_key)
        if partner is None and not exact:
            # tolerant search: the clustered float rates need not be
            # bitwise-conjugate
            target = _conj_scalar(lam)
            best = None
            for key in by_key:
                if key in consumed or key[0] != t.tpow or key[1] != t.logpow:
                    continue
                if im_of(key[2]) >= 0:
                    continue
                d = abs(complex(key[2]) - complex(target))
                if d <= rate_tol and (best is None or d < best[0]):
                    best = (d, key)
            if best is not None:
                partner_key = best[1]
                partner = by_key[partner_key]
        if partner is None:
            raise NotConjugateSymmetric(
                f"no conjugate partner for rate {lam} (tpow={t.tpow}, logpow={t.logpow})"
            )

        c = t.coeff
        mismatch = partner - _conj_scalar(c)
        if exact:
            if mismatch:
                raise NotConjugateSymmetric(
                    f"coefficients at rates {lam}, {_conj_scalar(lam)} are not conjugate"
                )
        elif abs(mismatch) > eps * coeff_scale:
            raise NotConjugateSymmetric(
                f"coefficients at rates {lam}, {_conj_scalar(lam)} are not conjugate"
            )

        alpha = re_of(lam)
        beta = lam_im
        if exact:
            r_cos = 2 * c.re
            r_sin = -2 * c.im
        else:
            r_cos = 2.0 * c.real
            r_sin = -2.0 * c.imag
        out.append(RealTerm(r_cos, t.tpow, t.logpow, alpha, beta, COS))
        out.append(RealTerm(r_sin, t.tpow, t.logpow, alpha, beta, SIN))
        consumed.add(t.key)
        consumed.add(partner_key)

    return RealExpr(out)


# ---------------------------------------------------------------------------
# convenience constructors
# ---------------------------------------------------------------------------

def term(coeff, tpow: int = 0, logpow: int = 0, exponent=0) -> Term:
    return Term(coeff, tpow, logpow, exponent)


def expr(*terms) -> Expr:
    return normalize(list(terms))


def const(c) -> Expr:
    return expr(term(c))


def exponential(rate) -> Expr:
    """The single-term expression e^(rate*t)."""
    return expr(term(1, 0, 0, rate))
