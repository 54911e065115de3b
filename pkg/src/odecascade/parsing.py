"""Text input and output: forcing expressions, whole ODEs, rendering.

The grammar (shipped in docs/grammar.ebnf) covers sums, differences and
products of rational and decimal literals, the variable (t or x), integer
powers via ^, exp(c*t) and the e^(c*t) sugar, sin(b*t) and cos(b*t) with real
b, and ln(t) with integer powers.  Trigonometric input is Euler-expanded
immediately, so everything lands in the complex-exponential algebra.

Two extensions beyond that core make rendering round-trip on every
expression the solver can produce: the imaginary unit ``i`` is a literal,
and exp arguments may be complex-linear, e.g. exp((1+2*i)*t).

Division is only by numeric literals; explicit ``*`` is required except
between a literal and a power of the variable ("5t", "2t^3").
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    COS,
    Expr,
    RealExpr,
    RealTerm,
    Term,
    const,
    expr as make_expr,
    exponential,
    multiply,
    normalize,
    scale,
    term as make_term,
)
from .errors import NotLinearConstantCoefficient, ParseError, UnsupportedFunction
from .model import LinearODE
from .scalars import GaussianRational

_FUNCTIONS = ("exp", "sin", "cos", "ln")
_VARIABLES = ("t", "x")


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range [start, end) into the input text."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start must not exceed end")


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # NUM, NAME, OP, END
    text: str
    start: int
    end: int

    @property
    def span(self):
        return SourceSpan(self.start, self.end)


_OPS = set("+-*/^()='")


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            # scientific part only when 'e' is followed by digits
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            tokens.append(_Token("NUM", text[i:j], i, j))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], i, j))
            i = j
            continue
        if ch == "*" and i + 1 < n and text[i + 1] == "*":
            tokens.append(_Token("OP", "^", i, i + 2))
            i += 2
            continue
        if ch in _OPS:
            tokens.append(_Token("OP", ch, i, i + 1))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", SourceSpan(i, i + 1))
    tokens.append(_Token("END", "", n, n))
    return tokens


# ---------------------------------------------------------------------------
# syntax tree
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Num:
    value: Fraction
    span: SourceSpan


@dataclass(frozen=True)
class _Name:
    ident: str
    span: SourceSpan


@dataclass(frozen=True)
class _Unary:
    op: str
    operand: object
    span: SourceSpan


@dataclass(frozen=True)
class _Bin:
    op: str
    left: object
    right: object
    span: SourceSpan


@dataclass(frozen=True)
class _Pow:
    base: object
    power: object
    span: SourceSpan


@dataclass(frozen=True)
class _Call:
    func: str
    arg: object
    span: SourceSpan


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == text:
            return self.take()
        raise ParseError(f"expected {text!r}", tok.span)

    def at_op(self, *texts) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.text in texts

    def parse_expr(self):
        node = self.parse_term()
        while self.at_op("+", "-"):
            op = self.take()
            rhs = self.parse_term()
            node = _Bin(op.text, node, rhs, SourceSpan(node.span.start, rhs.span.end))
        return node

    def parse_term(self):
        node = self.parse_factor()
        while True:
            if self.at_op("*", "/"):
                op = self.take()
                rhs = self.parse_factor()
                node = _Bin(op.text, node, rhs, SourceSpan(node.span.start, rhs.span.end))
            else:
                break
        return node

    def parse_factor(self):
        if self.at_op("+", "-"):
            op = self.take()
            operand = self.parse_factor()
            return _Unary(op.text, operand, SourceSpan(op.start, operand.span.end))
        return self.parse_power()

    def parse_power(self):
        base = self.parse_primary()
        if self.at_op("^"):
            self.take()
            power = self.parse_exponent()
            return _Pow(base, power, SourceSpan(base.span.start, power.span.end))
        return base

    def parse_exponent(self):
        tok = self.peek()
        if tok.kind == "NUM":
            self.take()
            return _Num(Fraction(tok.text), tok.span)
        if self.at_op("-"):
            minus = self.take()
            num = self.peek()
            if num.kind == "NUM":
                self.take()
                return _Num(-Fraction(num.text), SourceSpan(minus.start, num.end))
            raise ParseError("expected a number after '-' in exponent", num.span)
        if self.at_op("("):
            self.take()
            node = self.parse_expr()
            self.expect(")")
            return node
        raise ParseError("expected an integer exponent", tok.span)

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "NUM":
            self.take()
            node = _Num(Fraction(tok.text), tok.span)
            # juxtaposition: literal immediately followed by a variable power
            nxt = self.peek()
            if nxt.kind == "NAME" and nxt.text in _VARIABLES:
                rhs = self.parse_power()
                return _Bin("*", node, rhs, SourceSpan(node.span.start, rhs.span.end))
            return node
        if tok.kind == "NAME":
            self.take()
            if tok.text == "e":
                caret = self.peek()
                if not (caret.kind == "OP" and caret.text == "^"):
                    raise ParseError("expected '^' after 'e'", caret.span)
                self.take()
                arg = self.parse_e_argument()
                return _Call("exp", arg, SourceSpan(tok.start, arg.span.end))
            nxt = self.peek()
            if nxt.kind == "OP" and nxt.text == "(":
                self.take()
                arg = self.parse_expr()
                closing = self.expect(")")
                return _Call(tok.text, arg, SourceSpan(tok.start, closing.end))
            return _Name(tok.text, tok.span)
        if self.at_op("("):
            self.take()
            node = self.parse_expr()
            self.expect(")")
            return node
        raise ParseError("expected a number, name or '('", tok.span)

    def parse_e_argument(self):
        tok = self.peek()
        if tok.kind == "NAME" and tok.text in _VARIABLES:
            self.take()
            return _Name(tok.text, tok.span)
        if self.at_op("("):
            self.take()
            node = self.parse_expr()
            self.expect(")")
            return node
        raise ParseError("expected a variable or '(' after 'e^'", tok.span)


# ---------------------------------------------------------------------------
# lowering to the algebra
# ---------------------------------------------------------------------------

class _LowerContext:
    def __init__(self):
        self.variables: set[str] = set()


def _int_const(node, ctx) -> int:
    e = _lower(node, ctx)
    if e.is_zero:
        return 0
    if len(e.terms) == 1:
        t = e.terms[0]
        if t.tpow == 0 and t.logpow == 0 and not t.exponent:
            c = t.coeff
            if isinstance(c, GaussianRational) and not c.im and c.re.denominator == 1:
                return int(c.re)
    raise ParseError("exponent must be an integer constant", node.span)


def _single_term(e: Expr):
    if len(e.terms) == 1:
        return e.terms[0]
    return None


def _linear_coefficient(arg_expr: Expr):
    """Return c when arg_expr is exactly c*t, else None (zero counts as c=0)."""
    if arg_expr.is_zero:
        return GaussianRational(0)
    t = _single_term(arg_expr)
    if t is not None and t.tpow == 1 and t.logpow == 0 and not t.exponent:
        return t.coeff
    return None


def _lower(node, ctx: _LowerContext) -> Expr:
    if isinstance(node, _Num):
        return const(node.value)
    if isinstance(node, _Name):
        if node.ident in _VARIABLES:
            ctx.variables.add(node.ident)
            return make_expr(make_term(1, 1))
        if node.ident == "i":
            return const(GaussianRational(0, 1))
        raise UnsupportedFunction(f"unknown name {node.ident!r}", node.span)
    if isinstance(node, _Unary):
        inner = _lower(node.operand, ctx)
        return -inner if node.op == "-" else inner
    if isinstance(node, _Bin):
        left = _lower(node.left, ctx)
        right = _lower(node.right, ctx)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return multiply(left, right)
        if node.op == "/":
            divisor = _single_term(right)
            if divisor is None or divisor.tpow or divisor.logpow or divisor.exponent:
                raise UnsupportedFunction(
                    "division is only supported by a numeric constant", node.right.span
                )
            return scale(GaussianRational(1) / divisor.coeff
                         if isinstance(divisor.coeff, GaussianRational)
                         else 1.0 / divisor.coeff, left)
        raise ParseError(f"unknown operator {node.op!r}", node.span)
    if isinstance(node, _Pow):
        n = _int_const(node.power, ctx)
        base = _lower(node.base, ctx)
        if n < 0:
            t = _single_term(base)
            if t is None or t.logpow:
                raise UnsupportedFunction(
                    "negative powers need a single log-free factor", node.span
                )
            inverse = make_expr(make_term(
                t.coeff ** -1 if isinstance(t.coeff, GaussianRational) else 1.0 / t.coeff,
                -t.tpow, 0, -t.exponent))
            base, n = inverse, -n
        out = const(1)
        for _ in range(n):
            out = multiply(out, base)
        return out
    if isinstance(node, _Call):
        return _lower_call(node, ctx)
    raise ParseError("malformed expression", getattr(node, "span", None))


def _lower_call(node: _Call, ctx: _LowerContext) -> Expr:
    if node.func not in _FUNCTIONS:
        raise UnsupportedFunction(
            f"function {node.func!r} is not supported (use exp, sin, cos, ln)",
            node.span,
        )
    arg = _lower(node.arg, ctx)
    if node.func == "exp":
        c = _linear_coefficient(arg)
        if c is None:
            raise UnsupportedFunction(
                "exp argument must be linear in the variable (c*t)", node.arg.span
            )
        return exponential(c)
    if node.func in ("sin", "cos"):
        b = _linear_coefficient(arg)
        is_real = b is not None and (
            not b.im if isinstance(b, GaussianRational) else b.imag == 0
        )
        if not is_real:
            raise UnsupportedFunction(
                f"{node.func} argument must be b*t with real b", node.arg.span
            )
        i = GaussianRational(0, 1) if isinstance(b, GaussianRational) else 1j
        half = Fraction(1, 2) if isinstance(b, GaussianRational) else 0.5
        plus = make_term(half, 0, 0, i * b)
        minus_rate = -(i * b)
        if node.func == "cos":
            return make_expr(plus, make_term(half, 0, 0, minus_rate))
        return make_expr(
            make_term(-(i * half) if isinstance(b, GaussianRational) else -0.5j,
                      0, 0, i * b),
            make_term((i * half) if isinstance(b, GaussianRational) else 0.5j,
                      0, 0, minus_rate),
        )
    # ln
    t = _single_term(arg)
    if t is None or not (
        t.tpow == 1 and t.logpow == 0 and not t.exponent and t.coeff == 1
    ):
        raise UnsupportedFunction("ln argument must be the bare variable", node.arg.span)
    return make_expr(make_term(1, 0, 1))


def _parse_ast(text: str):
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "END":
        raise ParseError("unexpected trailing input", trailing.span)
    return node


def parse_forcing(text: str) -> Expr:
    """Parse a forcing-function expression into a canonical Expr."""
    e, _ = parse_forcing_with_var(text)
    return e


def parse_forcing_with_var(text: str) -> tuple[Expr, str | None]:
    """Like :func:`parse_forcing` but also report which variable was used."""
    node = _parse_ast(text)
    ctx = _LowerContext()
    e = _lower(node, ctx)
    if len(ctx.variables) > 1:
        raise ParseError("mix of variables 't' and 'x' in one expression", None)
    var = next(iter(ctx.variables)) if ctx.variables else None
    return e, var


# ---------------------------------------------------------------------------
# whole equations
# ---------------------------------------------------------------------------

def parse_ode(text: str) -> LinearODE:
    """Parse "<lhs> = <forcing>" into a LinearODE.

    The left side is a signed sum of terms c*y, c*y', c*y'', ..., c*y^(k);
    the right side follows the forcing grammar.  Coefficients are collected
    by derivative order with missing orders set to zero.
    """
    tokens = _tokenize(text)
    eq_positions = [idx for idx, tok in enumerate(tokens)
                    if tok.kind == "OP" and tok.text == "="]
    if not eq_positions:
        raise ParseError("expected '=' between operator and forcing",
                         SourceSpan(len(text), len(text)))
    if len(eq_positions) > 1:
        raise ParseError("multiple '=' signs", tokens[eq_positions[1]].span)
    split = eq_positions[0]
    lhs = tokens[:split] + [_Token("END", "", tokens[split].start, tokens[split].start)]
    rhs = tokens[split + 1:]

    coeffs = _parse_lhs(lhs)

    rhs_parser = _Parser(rhs)
    node = rhs_parser.parse_expr()
    trailing = rhs_parser.peek()
    if trailing.kind != "END":
        raise ParseError("unexpected trailing input", trailing.span)
    ctx = _LowerContext()
    forcing = _lower(node, ctx)
    if len(ctx.variables) > 1:
        raise ParseError("mix of variables 't' and 'x' in the forcing", None)
    var = next(iter(ctx.variables)) if ctx.variables else "t"

    order = max(coeffs)
    if order < 1:
        raise NotLinearConstantCoefficient(
            "the equation must involve at least y'", None
        )
    vec = [coeffs.get(k, Fraction(0)) for k in range(order + 1)]
    if not vec[-1]:
        raise ParseError(f"leading coefficient of y^({order}) is zero", None)
    return LinearODE(tuple(vec), forcing, var)


def _parse_lhs(tokens: list[_Token]) -> dict[int, Fraction]:
    coeffs: dict[int, Fraction] = {}
    pos = 0

    def peek():
        return tokens[pos]

    sign = 1
    if peek().kind == "OP" and peek().text in "+-":
        sign = -1 if peek().text == "-" else 1
        pos += 1

    while True:
        tok = tokens[pos]
        # optional numeric coefficient, possibly a fraction or decimal
        value = Fraction(1)
        have_coeff = False
        if tok.kind == "NUM":
            value = Fraction(tok.text)
            have_coeff = True
            pos += 1
            if tokens[pos].kind == "OP" and tokens[pos].text == "/":
                if tokens[pos + 1].kind == "NUM":
                    value /= Fraction(tokens[pos + 1].text)
                    pos += 2
                else:
                    raise ParseError("expected a number after '/'",
                                     tokens[pos + 1].span)
            if tokens[pos].kind == "OP" and tokens[pos].text == "*":
                pos += 1
        tok = tokens[pos]
        if tok.kind != "NAME":
            raise ParseError("expected a y term on the left-hand side", tok.span)
        if tok.text in _VARIABLES:
            raise NotLinearConstantCoefficient(
                f"variable coefficient {tok.text!r} on the left-hand side; "
                "only constant coefficients are supported here (the factorable "
                "power form y'' - a^2 x^(2n) y = q has its own varcoef entry point)",
                tok.span,
            )
        if tok.text != "y":
            raise ParseError(f"unexpected name {tok.text!r} on the left-hand side",
                             tok.span)
        pos += 1
        order = 0
        while tokens[pos].kind == "OP" and tokens[pos].text == "'":
            order += 1
            pos += 1
        if order == 0 and tokens[pos].kind == "OP" and tokens[pos].text == "^":
            caret_span = tokens[pos].span
            pos += 1
            if not (tokens[pos].kind == "OP" and tokens[pos].text == "("):
                raise NotLinearConstantCoefficient(
                    "powers of y are not linear; write y^(k) for the k-th derivative",
                    caret_span,
                )
            pos += 1
            if tokens[pos].kind != "NUM":
                raise ParseError("expected a derivative order", tokens[pos].span)
            order_frac = Fraction(tokens[pos].text)
            if order_frac.denominator != 1 or order_frac < 0:
                raise ParseError("derivative order must be a nonnegative integer",
                                 tokens[pos].span)
            order = int(order_frac)
            pos += 1
            if not (tokens[pos].kind == "OP" and tokens[pos].text == ")"):
                raise ParseError("expected ')'", tokens[pos].span)
            pos += 1
        coeffs[order] = coeffs.get(order, Fraction(0)) + sign * value

        tok = tokens[pos]
        if tok.kind == "END":
            break
        if tok.kind == "OP" and tok.text in "+-":
            sign = -1 if tok.text == "-" else 1
            pos += 1
            continue
        raise ParseError("expected '+', '-' or '=' after a y term", tok.span)
    return coeffs


# ---------------------------------------------------------------------------
# numeric lowering (lenient, for the variable-coefficient forcing)
# ---------------------------------------------------------------------------

def parse_numeric_function(text: str):
    """Compile an expression into a float callable of one variable.

    Accepts the full forcing grammar plus arbitrary arguments to exp, sin,
    cos and ln (e.g. exp(x^2/2)), general division, and fractional powers.
    Used by the variable-coefficient path, where the forcing only ever needs
    to be evaluated numerically.
    """
    import math as _math

    node = _parse_ast(text)
    names: set[str] = set()

    def build(nd):
        if isinstance(nd, _Num):
            v = float(nd.value)
            return lambda x: v
        if isinstance(nd, _Name):
            if nd.ident in _VARIABLES:
                names.add(nd.ident)
                return lambda x: x
            raise UnsupportedFunction(f"unknown name {nd.ident!r}", nd.span)
        if isinstance(nd, _Unary):
            inner = build(nd.operand)
            if nd.op == "-":
                return lambda x: -inner(x)
            return inner
        if isinstance(nd, _Bin):
            lf, rf = build(nd.left), build(nd.right)
            op = nd.op
            if op == "+":
                return lambda x: lf(x) + rf(x)
            if op == "-":
                return lambda x: lf(x) - rf(x)
            if op == "*":
                return lambda x: lf(x) * rf(x)
            if op == "/":
                return lambda x: lf(x) / rf(x)
            raise ParseError(f"unknown operator {op!r}", nd.span)
        if isinstance(nd, _Pow):
            bf, pf = build(nd.base), build(nd.power)
            return lambda x: bf(x) ** pf(x)
        if isinstance(nd, _Call):
            if nd.func not in _FUNCTIONS:
                raise UnsupportedFunction(
                    f"function {nd.func!r} is not supported", nd.span
                )
            af = build(nd.arg)
            fn = {"exp": _math.exp, "sin": _math.sin, "cos": _math.cos,
                  "ln": _math.log}[nd.func]
            return lambda x: fn(af(x))
        raise ParseError("malformed expression", getattr(nd, "span", None))

    fn = build(node)
    var = next(iter(names)) if names else "x"
    return fn, var


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _frac_str(f: Fraction) -> str:
    return str(f)


def _float_str(v: float) -> str:
    return repr(v)


def _scalar_plain(s) -> str:
    """Parseable rendering of a scalar; complex values get parentheses."""
    if isinstance(s, (int, Fraction)):
        s = GaussianRational(s)
    if isinstance(s, GaussianRational):
        if not s.im:
            return _frac_str(s.re)
        if not s.re:
            if s.im == 1:
                return "i"
            if s.im == -1:
                return "-i"
            return f"{_frac_str(s.im)}*i"
        op = "+" if s.im > 0 else "-"
        imag = abs(s.im)
        imag_str = "i" if imag == 1 else f"{_frac_str(imag)}*i"
        return f"({_frac_str(s.re)}{op}{imag_str})"
    c = complex(s)
    if c.imag == 0:
        return _float_str(c.real)
    if c.real == 0:
        return f"{_float_str(c.imag)}*i"
    op = "+" if c.imag >= 0 else "-"
    return f"({_float_str(c.real)}{op}{_float_str(abs(c.imag))}*i)"


def _scalar_sign_mag(s):
    """Split a scalar into a printable sign and magnitude when it is real."""
    if isinstance(s, GaussianRational):
        if not s.im and s.re < 0:
            return -1, -s
        return 1, s
    c = complex(s)
    if c.imag == 0 and c.real < 0:
        return -1, -c
    return 1, s


def _rate_times_var_plain(rate, var: str) -> str:
    if rate == 1:
        return var
    if rate == -1:
        return f"-{var}"
    return f"{_scalar_plain(rate)}*{var}"


def _real_scalar_plain(v) -> str:
    if isinstance(v, (int, Fraction)):
        return _frac_str(Fraction(v))
    return _float_str(float(v))


def _plain_expr_term(t: Term, var: str):
    sign, coeff = _scalar_sign_mag(t.coeff)
    pieces = []
    if t.tpow == 1:
        pieces.append(var)
    elif t.tpow != 0:
        pieces.append(f"{var}^{t.tpow}" if t.tpow > 0 else f"{var}^({t.tpow})")
    if t.logpow == 1:
        pieces.append(f"ln({var})")
    elif t.logpow > 1:
        pieces.append(f"ln({var})^{t.logpow}")
    if t.exponent:
        pieces.append(f"exp({_rate_times_var_plain(t.exponent, var)})")
    if not pieces:
        return sign, _scalar_plain(coeff)
    if coeff == 1:
        return sign, "*".join(pieces)
    return sign, "*".join([_scalar_plain(coeff)] + pieces)


def _plain_real_term(t: RealTerm, var: str):
    coeff = t.coeff
    sign = 1
    if isinstance(coeff, (int, Fraction)):
        if coeff < 0:
            sign, coeff = -1, -coeff
    elif coeff < 0:
        sign, coeff = -1, -coeff
    pieces = []
    if t.tpow == 1:
        pieces.append(var)
    elif t.tpow != 0:
        pieces.append(f"{var}^{t.tpow}" if t.tpow > 0 else f"{var}^({t.tpow})")
    if t.logpow == 1:
        pieces.append(f"ln({var})")
    elif t.logpow > 1:
        pieces.append(f"ln({var})^{t.logpow}")
    if t.alpha:
        pieces.append(f"exp({_rate_times_var_plain(t.alpha, var)})")
    if t.beta:
        arg = var if t.beta == 1 else f"{_real_scalar_plain(t.beta)}*{var}"
        pieces.append(f"{t.kind}({arg})")
    if not pieces:
        return sign, _real_scalar_plain(coeff)
    if coeff == 1:
        return sign, "*".join(pieces)
    return sign, "*".join([_real_scalar_plain(coeff)] + pieces)


def _join_signed(parts) -> str:
    if not parts:
        return "0"
    out = []
    for idx, (sign, body) in enumerate(parts):
        if idx == 0:
            out.append(f"-{body}" if sign < 0 else body)
        else:
            out.append(f" - {body}" if sign < 0 else f" + {body}")
    return "".join(out)


def _plain(obj, var: str) -> str:
    if isinstance(obj, Expr):
        return _join_signed([_plain_expr_term(t, var) for t in obj.terms])
    if isinstance(obj, RealExpr):
        return _join_signed([_plain_real_term(t, var) for t in obj.terms])
    raise TypeError(f"cannot render {type(obj).__name__}")


# -- latex -------------------------------------------------------------------

def _frac_latex(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"\\frac{{{abs(f.numerator)}}}{{{f.denominator}}}" \
        if f.numerator >= 0 else f"-\\frac{{{abs(f.numerator)}}}{{{f.denominator}}}"


def _real_scalar_latex(v) -> str:
    if isinstance(v, (int, Fraction)):
        return _frac_latex(Fraction(v))
    return _float_str(float(v))


def _scalar_latex(s) -> str:
    if isinstance(s, (int, Fraction)):
        s = GaussianRational(s)
    if isinstance(s, GaussianRational):
        if not s.im:
            return _frac_latex(s.re)
        re_part = "" if not s.re else _frac_latex(s.re)
        if s.im == 1:
            im_part = "i"
        elif s.im == -1:
            im_part = "-i"
        else:
            im_part = f"{_frac_latex(s.im)}i"
        if not re_part:
            return im_part
        joiner = "+" if not im_part.startswith("-") else ""
        return f"({re_part}{joiner}{im_part})"
    c = complex(s)
    if c.imag == 0:
        return _float_str(c.real)
    return f"({_float_str(c.real)}{'+' if c.imag >= 0 else '-'}{_float_str(abs(c.imag))}i)"


def _power_latex(base: str, k: int) -> str:
    if k == 1:
        return base
    ks = str(k)
    return f"{base}^{ks}" if len(ks) == 1 else f"{base}^{{{ks}}}"


def _rate_latex(rate, var: str) -> str:
    if rate == 1:
        return var
    if rate == -1:
        return f"-{var}"
    return f"{_scalar_latex(rate)}{var}"


def _exp_latex(rate, var: str) -> str:
    body = _rate_latex(rate, var)
    return f"e^{var}" if body == var else f"e^{{{body}}}"


def _latex_pieces(coeff_str, tpow, logpow, exp_part, trig_part, var):
    pieces = []
    if tpow == 1:
        pieces.append(var)
    elif tpow != 0:
        pieces.append(_power_latex(var, tpow))
    if logpow == 1:
        pieces.append(f"\\ln({var})")
    elif logpow > 1:
        pieces.append(f"\\ln^{logpow}({var})")
    if exp_part:
        pieces.append(exp_part)
    if trig_part:
        pieces.append(trig_part)
    if not pieces:
        return coeff_str if coeff_str else "1"
    joined = "".join(pieces)
    return joined if not coeff_str else coeff_str + joined


def _latex_expr_term(t: Term, var: str):
    sign, coeff = _scalar_sign_mag(t.coeff)
    exp_part = _exp_latex(t.exponent, var) if t.exponent else ""
    coeff_str = "" if coeff == 1 else _scalar_latex(coeff)
    return sign, _latex_pieces(coeff_str, t.tpow, t.logpow, exp_part, "", var)


def _latex_real_term(t: RealTerm, var: str):
    coeff = t.coeff
    sign = 1
    if coeff < 0:
        sign, coeff = -1, -coeff
    exp_part = _exp_latex(t.alpha, var) if t.alpha else ""
    if t.beta:
        fn = "\\cos" if t.kind == COS else "\\sin"
        trig = f"{fn} {var}" if t.beta == 1 else f"{fn}({_real_scalar_latex(t.beta)}{var})"
    else:
        trig = ""
    coeff_str = "" if coeff == 1 else _real_scalar_latex(coeff)
    return sign, _latex_pieces(coeff_str, t.tpow, t.logpow, exp_part, trig, var)


def _latex(obj, var: str) -> str:
    if isinstance(obj, Expr):
        return _join_signed([_latex_expr_term(t, var) for t in obj.terms])
    if isinstance(obj, RealExpr):
        return _join_signed([_latex_real_term(t, var) for t in obj.terms])
    raise TypeError(f"cannot render {type(obj).__name__}")


# -- json --------------------------------------------------------------------

def _scalar_json_parts(s):
    if isinstance(s, GaussianRational):
        return ([s.re.numerator, s.re.denominator], [s.im.numerator, s.im.denominator])
    c = complex(s)
    return (c.real, c.imag)


def _part_from_json(v):
    if isinstance(v, list):
        return Fraction(v[0], v[1])
    return float(v)


def expr_to_json_terms(e: Expr) -> list:
    out = []
    for t in e.terms:
        cr, ci = _scalar_json_parts(t.coeff)
        er, ei = _scalar_json_parts(t.exponent)
        out.append({
            "coeff_re": cr, "coeff_im": ci,
            "tpow": t.tpow, "logpow": t.logpow,
            "exp_re": er, "exp_im": ei,
        })
    return out


def expr_from_json_terms(terms: list) -> Expr:
    out = []
    for obj in terms:
        cr = _part_from_json(obj["coeff_re"])
        ci = _part_from_json(obj["coeff_im"])
        er = _part_from_json(obj["exp_re"])
        ei = _part_from_json(obj["exp_im"])
        if isinstance(cr, Fraction) and isinstance(er, Fraction):
            coeff = GaussianRational(cr, ci)
            rate = GaussianRational(er, ei)
        else:
            coeff = complex(float(cr), float(ci))
            rate = complex(float(er), float(ei))
        out.append(Term(coeff, int(obj["tpow"]), int(obj["logpow"]), rate))
    return normalize(out)


def _real_part_json(v):
    if isinstance(v, (int, Fraction)):
        f = Fraction(v)
        return [f.numerator, f.denominator]
    return float(v)


def realexpr_to_json_terms(e: RealExpr) -> list:
    return [{
        "coeff": _real_part_json(t.coeff),
        "tpow": t.tpow, "logpow": t.logpow,
        "alpha": _real_part_json(t.alpha),
        "beta": _real_part_json(t.beta),
        "kind": t.kind,
    } for t in e.terms]


def realexpr_from_json_terms(terms: list) -> RealExpr:
    out = []
    for obj in terms:
        out.append(RealTerm(
            _part_from_json(obj["coeff"]),
            int(obj["tpow"]), int(obj["logpow"]),
            _part_from_json(obj["alpha"]),
            _part_from_json(obj["beta"]),
            obj["kind"],
        ))
    return RealExpr(out)


def render(obj, style: str = "plain", var: str = "t") -> str:
    """Deterministic text for an Expr, RealExpr or CascadeTrace.

    ``style`` is one of "plain" (parseable by :func:`parse_forcing`),
    "latex", or "json" (the term-list schema used by the CLI).
    """
    from .cascade import CascadeTrace  # local import to avoid a cycle

    if style not in ("plain", "latex", "json"):
        raise ValueError(f"unknown style {style!r}")
    if isinstance(obj, CascadeTrace):
        return _render_trace(obj, style, var)
    if style == "plain":
        return _plain(obj, var)
    if style == "latex":
        return _latex(obj, var)
    if isinstance(obj, Expr):
        return json.dumps(expr_to_json_terms(obj))
    return json.dumps(realexpr_to_json_terms(obj))


def trace_to_json(trace) -> list:
    return [{
        "root": {"re": float(complex(st.root).real), "im": float(complex(st.root).imag)},
        "input": expr_to_json_terms(st.input),
        "output": expr_to_json_terms(st.output),
    } for st in trace.stages]


def _render_trace(trace, style: str, var: str) -> str:
    if style == "json":
        return json.dumps(trace_to_json(trace))
    lines = []
    for idx, st in enumerate(trace.stages, start=1):
        root = _scalar_plain(st.root) if style == "plain" else _scalar_latex(st.root)
        g = render(st.input, style, var)
        phi = render(st.output, style, var)
        lines.append(f"stage {idx}: solve phi' - ({root})*phi = {g}")
        lines.append(f"         phi = {phi}")
    lines.append(f"y_p = {render(trace.y_p, style, var)}")
    return "\n".join(lines)
