"""Univariate function expressions: parsing, interval evaluation, derivatives.

The expression class is deliberately small — rational constants, the single
variable x, field operations, literal non-negative integer powers, and
sin/cos/exp/log/sqrt/abs — exactly what is needed so that rigorous range
enclosures of f and f' over a subinterval are computable.

Grammar (whitespace insensitive)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | power
    power  := atom ("^" nat)?
    atom   := number | "x" | fn "(" expr ")" | "(" expr ")"
    fn     := "sin"|"cos"|"exp"|"log"|"sqrt"|"abs"
    number := decimal digits with optional fraction part

"^" binds tighter than unary minus, so -x^2 parses as -(x^2).  Numeric
literals are kept as exact rationals; "0.1" means 1/10, not the nearest
binary64.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .numeric import (
    DivisionByZeroInterval,
    DomainError,
    FloatInterval,
    iv_abs,
    iv_cos,
    iv_exp,
    iv_log,
    iv_pow,
    iv_sin,
    iv_sqr,
    iv_sqrt,
)

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "abs")


class ParseError(ValueError):
    """Syntax error, carrying the offset and a description of what was expected."""

    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        shown = found or "end of input"
        super().__init__(f"expected {expected} at offset {position}, found {shown}")


class NotDifferentiable(ValueError):
    """Derivative evaluation was requested for an expression containing abs."""


# =============================================================================
# AST
# =============================================================================

@dataclass(frozen=True)
class Expr:
    def __str__(self) -> str:
        return to_source(self)

    @property
    def differentiable(self) -> bool:
        return not _contains_abs(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class PowInt(Expr):
    base: Expr
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("PowInt exponent must be a non-negative integer")


@dataclass(frozen=True)
class Apply(Expr):
    fn: str
    arg: Expr

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise ValueError(f"unknown function {self.fn!r}")


def _contains_abs(e: Expr) -> bool:
    if isinstance(e, Apply):
        return e.fn == "abs" or _contains_abs(e.arg)
    if isinstance(e, (Const, Var)):
        return False
    if isinstance(e, Neg):
        return _contains_abs(e.arg)
    if isinstance(e, PowInt):
        return _contains_abs(e.base)
    return _contains_abs(e.left) or _contains_abs(e.right)


@dataclass(frozen=True)
class EvalResult:
    """Range enclosure of f, optionally paired with one of f'."""

    value: FloatInterval
    deriv: FloatInterval | None = None


# =============================================================================
# Parser (recursive descent over a token-free scanner)
# =============================================================================

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def error(self, expected: str) -> ParseError:
        return ParseError(self.pos, expected, self.peek())


def parse(text: str) -> Expr:
    """Parse an expression; raises ParseError with offset and expectation."""
    sc = _Scanner(text)
    e = _parse_expr(sc)
    if sc.peek():
        raise sc.error("end of input or operator")
    return e


def _parse_expr(sc: _Scanner) -> Expr:
    e = _parse_term(sc)
    while sc.peek() in ("+", "-"):
        op = sc.advance()
        rhs = _parse_term(sc)
        e = Add(e, rhs) if op == "+" else Sub(e, rhs)
    return e


def _parse_term(sc: _Scanner) -> Expr:
    e = _parse_factor(sc)
    while sc.peek() in ("*", "/"):
        op = sc.advance()
        rhs = _parse_factor(sc)
        e = Mul(e, rhs) if op == "*" else Div(e, rhs)
    return e


def _parse_factor(sc: _Scanner) -> Expr:
    if sc.peek() == "-":
        sc.advance()
        return Neg(_parse_factor(sc))
    return _parse_power(sc)


def _parse_power(sc: _Scanner) -> Expr:
    base = _parse_atom(sc)
    if sc.peek() == "^":
        sc.advance()
        n = _parse_nat(sc)
        return PowInt(base, n)
    return base


def _parse_nat(sc: _Scanner) -> int:
    sc.skip_ws()
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos].isdigit():
        sc.pos += 1
    if sc.pos == start:
        raise sc.error("non-negative integer exponent")
    return int(sc.text[start:sc.pos])


def _parse_atom(sc: _Scanner) -> Expr:
    ch = sc.peek()
    if ch == "(":
        sc.advance()
        e = _parse_expr(sc)
        if sc.peek() != ")":
            raise sc.error("')'")
        sc.advance()
        return e
    if ch.isdigit() or ch == ".":
        return Const(_parse_number(sc))
    if ch.isalpha():
        name = _parse_name(sc)
        if name == "x":
            return Var()
        if name in FUNCTIONS:
            if sc.peek() != "(":
                raise sc.error(f"'(' after {name}")
            sc.advance()
            arg = _parse_expr(sc)
            if sc.peek() != ")":
                raise sc.error("')'")
            sc.advance()
            return Apply(name, arg)
        raise ParseError(sc.pos - len(name), "number, 'x', function, or '('", name)
    raise sc.error("number, 'x', function, or '('")


def _parse_name(sc: _Scanner) -> str:
    sc.skip_ws()
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos].isalpha():
        sc.pos += 1
    return sc.text[start:sc.pos]


def _parse_number(sc: _Scanner) -> Fraction:
    sc.skip_ws()
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos].isdigit():
        sc.pos += 1
    int_digits = sc.text[start:sc.pos]
    frac_digits = ""
    if sc.pos < len(sc.text) and sc.text[sc.pos] == ".":
        sc.pos += 1
        fstart = sc.pos
        while sc.pos < len(sc.text) and sc.text[sc.pos].isdigit():
            sc.pos += 1
        frac_digits = sc.text[fstart:sc.pos]
    if not int_digits and not frac_digits:
        raise sc.error("digits")
    whole = int(int_digits or "0")
    return Fraction(whole) + Fraction(int(frac_digits or "0"), 10 ** len(frac_digits))


# =============================================================================
# Printing
# =============================================================================

def _format_const(q: Fraction) -> str:
    num, den = q.numerator, q.denominator
    if den == 1:
        return str(num) if num >= 0 else f"(0 - {-num})"
    # decimal expansion when the denominator is of the form 2^a * 5^b
    d = den
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        k = max(twos, fives)
        scaled = abs(num) * 10 ** k // den
        digits = str(scaled).rjust(k + 1, "0")
        text = f"{digits[:-k]}.{digits[-k:]}"
        return text if num >= 0 else f"(0 - {text})"
    # not decimal-representable: fall back to an explicit quotient
    inner = f"{abs(num)} / {den}"
    return f"({inner})" if num >= 0 else f"(0 - {inner})"


def to_source(e: Expr) -> str:
    """Render an expression; reparsing yields a structurally identical AST
    whenever the expression originated from parse()."""
    return _print(e, 0)


_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW = 1, 2, 3, 4


def _print(e: Expr, ctx: int) -> str:
    if isinstance(e, Const):
        return _format_const(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Apply):
        return f"{e.fn}({_print(e.arg, 0)})"
    if isinstance(e, PowInt):
        # grammar: the base of "^" must be an atom
        base = _print(e.base, 0)
        if not isinstance(e.base, (Const, Var, Apply)):
            base = f"({base})"
        return f"{base}^{e.n}"
    if isinstance(e, Neg):
        inner = _print(e.arg, _PREC_NEG)
        text = f"-{inner}" if not isinstance(e.arg, (Add, Sub, Mul, Div)) else f"-({_print(e.arg, 0)})"
        return f"({text})" if ctx > _PREC_MUL else text
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        text = f"{_print(e.left, _PREC_ADD)} {op} {_print(e.right, _PREC_ADD + 1)}"
        return f"({text})" if ctx > _PREC_ADD else text
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        text = f"{_print(e.left, _PREC_MUL)} {op} {_print(e.right, _PREC_MUL + 1)}"
        return f"({text})" if ctx > _PREC_MUL else text
    raise TypeError(f"unknown node {e!r}")


# =============================================================================
# Interval evaluation and forward-mode interval differentiation
# =============================================================================

def eval_iv(f: Expr, X: FloatInterval) -> FloatInterval:
    """Natural interval extension: an enclosure of {f(t) : t in X}.

    DomainError raised from a subexpression is annotated with that
    subexpression's source text and the offending interval.
    """
    try:
        return _eval(f, X)
    except (DomainError, DivisionByZeroInterval) as err:
        raise _annotate(err, X) from None


def eval_d1(f: Expr, X: FloatInterval) -> EvalResult:
    """Enclosures of f and f' over X by forward-mode interval differentiation."""
    if not f.differentiable:
        raise NotDifferentiable("expression contains abs")
    try:
        val, der = _eval_d(f, X)
    except (DomainError, DivisionByZeroInterval) as err:
        raise _annotate(err, X) from None
    return EvalResult(val, der)


def _annotate(err: Exception, X: FloatInterval) -> DomainError:
    if isinstance(err, DomainError):
        context = getattr(err, "context", None)
        out = DomainError(err.fn, err.operand, err.detail)
        out.context = context
        return out
    out = DomainError("div", X, str(err))
    out.context = None
    return out


_ZERO = FloatInterval(0.0, 0.0)
_ONE = FloatInterval(1.0, 1.0)


@lru_cache(maxsize=4096)
def _const_interval(q: Fraction) -> FloatInterval:
    return FloatInterval.from_rational(q)


def _eval(e: Expr, X: FloatInterval) -> FloatInterval:
    if isinstance(e, Const):
        return _const_interval(e.value)
    if isinstance(e, Var):
        return X
    if isinstance(e, Neg):
        return -_eval(e.arg, X)
    if isinstance(e, Add):
        return _eval(e.left, X) + _eval(e.right, X)
    if isinstance(e, Sub):
        return _eval(e.left, X) - _eval(e.right, X)
    if isinstance(e, Mul):
        return _eval(e.left, X) * _eval(e.right, X)
    if isinstance(e, Div):
        return _eval(e.left, X) / _eval(e.right, X)
    if isinstance(e, PowInt):
        return iv_pow(_eval(e.base, X), e.n)
    if isinstance(e, Apply):
        try:
            return _APPLY[e.fn](_eval(e.arg, X))
        except DomainError as err:
            err.context = to_source(e)
            raise
    raise TypeError(f"unknown node {e!r}")


_APPLY = {
    "sin": iv_sin,
    "cos": iv_cos,
    "exp": iv_exp,
    "log": iv_log,
    "sqrt": iv_sqrt,
    "abs": iv_abs,
}


def _eval_d(e: Expr, X: FloatInterval) -> tuple[FloatInterval, FloatInterval]:
    if isinstance(e, Const):
        return _const_interval(e.value), _ZERO
    if isinstance(e, Var):
        return X, _ONE
    if isinstance(e, Neg):
        v, d = _eval_d(e.arg, X)
        return -v, -d
    if isinstance(e, Add):
        lv, ld = _eval_d(e.left, X)
        rv, rd = _eval_d(e.right, X)
        return lv + rv, ld + rd
    if isinstance(e, Sub):
        lv, ld = _eval_d(e.left, X)
        rv, rd = _eval_d(e.right, X)
        return lv - rv, ld - rd
    if isinstance(e, Mul):
        lv, ld = _eval_d(e.left, X)
        rv, rd = _eval_d(e.right, X)
        return lv * rv, ld * rv + lv * rd
    if isinstance(e, Div):
        lv, ld = _eval_d(e.left, X)
        rv, rd = _eval_d(e.right, X)
        val = lv / rv
        return val, (ld * rv - lv * rd) / iv_sqr(rv)
    if isinstance(e, PowInt):
        bv, bd = _eval_d(e.base, X)
        val = iv_pow(bv, e.n)
        if e.n == 0:
            return val, _ZERO
        coeff = FloatInterval.from_rational(Fraction(e.n))
        return val, coeff * iv_pow(bv, e.n - 1) * bd
    if isinstance(e, Apply):
        av, ad = _eval_d(e.arg, X)
        try:
            if e.fn == "sin":
                return iv_sin(av), iv_cos(av) * ad
            if e.fn == "cos":
                return iv_cos(av), -iv_sin(av) * ad
            if e.fn == "exp":
                ev = iv_exp(av)
                return ev, ev * ad
            if e.fn == "log":
                return iv_log(av), ad / av
            if e.fn == "sqrt":
                sv = iv_sqrt(av)
                two = FloatInterval(2.0, 2.0)
                return sv, ad / (two * sv)
        except (DomainError, DivisionByZeroInterval) as err:
            if isinstance(err, DomainError):
                err.context = to_source(e)
                raise
            derr = DomainError(e.fn, av, "derivative unbounded (argument range touches the domain boundary)")
            derr.context = to_source(e)
            raise derr from None
        raise NotDifferentiable("expression contains abs")
    raise TypeError(f"unknown node {e!r}")
