"""Outward-rounded binary64 interval arithmetic and exact rational arithmetic.

Every enclosure produced anywhere in this package bottoms out in the
operations of this module.  The contract is containment: an operation on
intervals returns an interval that contains the exact real-arithmetic image
of its operands.  Endpoints are ordinary binary64 floats; outward rounding
is implemented by post-hoc nudging of each endpoint to the adjacent
representable value in the conservative direction, skipped when the
endpoint is provably exact.  This keeps the module independent of any
global rounding-mode state.

Infinite endpoints are rejected rather than propagated: an operation whose
mathematical result has no finite enclosure raises OverflowError, so every
bound stored downstream is a finite number.

Exact rational arithmetic is provided by ``fractions.Fraction`` (aliased
``Rational``), which maintains the lowest-terms/positive-denominator
invariants natively.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

Rational = Fraction

_MAX_FLOAT = sys.float_info.max
_MIN_NORMAL = sys.float_info.min
_INF = math.inf

# pi to 1120 decimal digits, cross-checked against two independent
# high-precision libraries.  Used only for exact location of trig critical
# points; the error (~1e-1120) is negligible against the spacing of
# binary64 values over the whole finite range.
_PI_DIGITS = (
    "3141592653589793238462643383279502884197169399375105820974944592307816406286"
    "2089986280348253421170679821480865132823066470938446095505822317253594081284"
    "8111745028410270193852110555964462294895493038196442881097566593344612847564"
    "8233786783165271201909145648566923460348610454326648213393607260249141273724"
    "5870066063155881748815209209628292540917153643678925903600113305305488204665"
    "2138414695194151160943305727036575959195309218611738193261179310511854807446"
    "2379962749567351885752724891227938183011949129833673362440656643086021394946"
    "3952247371907021798609437027705392171762931767523846748184676694051320005681"
    "2714526356082778577134275778960917363717872146844090122495343014654958537105"
    "0792279689258923542019956112129021960864034418159813629774771309960518707211"
    "3499999983729780499510597317328160963185950244594553469083026425223082533446"
    "8503526193118817101000313783875288658753320838142061717766914730359825349042"
    "8755468731159562863882353787593751957781857780532171226806613001927876611195"
    "9092164201989380952572010654858632788659361533818279682303019520353018529689"
    "9577362259941389124972177528347913151557485724245415069595"
)
_PI_NUM = int(_PI_DIGITS)
_PI_DEN = 10 ** (len(_PI_DIGITS) - 1)
_PI = Fraction(_PI_NUM, _PI_DEN)
# guard (1/den) for critical-point inclusion tests, far above the pi
# approximation error and far below the smallest positive binary64
_GUARD_DEN = 10 ** 400
# cheaper approximation for moderate arguments: with |x| <= 2^48 the index
# error stays far below the wider guard, which still only widens output
_PI_SHORT_NUM = int(_PI_DIGITS[:64])
_PI_SHORT_DEN = 10 ** 63
_SHORT_LIMIT = 2.0 ** 48
_GUARD_SHORT_DEN = 10 ** 24


class DomainError(ValueError):
    """An operand lies outside the mathematical domain of the operation."""

    def __init__(self, fn: str, operand: object, detail: str = ""):
        self.fn = fn
        self.operand = operand
        self.detail = detail
        msg = f"{fn} undefined on {operand}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DivisionByZeroInterval(ZeroDivisionError):
    """The denominator interval contains zero."""


# =============================================================================
# Directed-rounding scalar kernels
# =============================================================================

def _next_up(x: float) -> float:
    return math.nextafter(x, _INF)


def _next_down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _sum_err(a: float, b: float, s: float) -> float:
    # Knuth TwoSum: the rounding error of s = fl(a + b), computed exactly,
    # so true sum = s + error with no further rounding.
    bp = s - a
    ap = s - bp
    return (a - ap) + (b - bp)


def add_down(a: float, b: float) -> float:
    s = a + b
    if math.isinf(s):
        if s > 0:
            return _MAX_FLOAT
        raise OverflowError("sum below the finite binary64 range")
    return s if _sum_err(a, b, s) >= 0.0 else _next_down(s)


def add_up(a: float, b: float) -> float:
    s = a + b
    if math.isinf(s):
        if s < 0:
            return -_MAX_FLOAT
        raise OverflowError("sum above the finite binary64 range")
    return s if _sum_err(a, b, s) <= 0.0 else _next_up(s)


def sub_down(a: float, b: float) -> float:
    return add_down(a, -b)


def sub_up(a: float, b: float) -> float:
    return add_up(a, -b)


def _mul_err_sign(a: float, b: float, p: float) -> int:
    # exact sign of (a*b - p) by integer cross-multiplication
    na, da = a.as_integer_ratio()
    nb, db = b.as_integer_ratio()
    np_, dp = p.as_integer_ratio()
    lhs = na * nb * dp
    rhs = np_ * da * db
    return (lhs > rhs) - (lhs < rhs)


def mul_down(a: float, b: float) -> float:
    p = a * b
    if math.isinf(p):
        if p > 0:
            return _MAX_FLOAT
        raise OverflowError("product below the finite binary64 range")
    return p if _mul_err_sign(a, b, p) >= 0 else _next_down(p)


def mul_up(a: float, b: float) -> float:
    p = a * b
    if math.isinf(p):
        if p < 0:
            return -_MAX_FLOAT
        raise OverflowError("product above the finite binary64 range")
    return p if _mul_err_sign(a, b, p) <= 0 else _next_up(p)


def _div_err_sign(a: float, b: float, q: float) -> int:
    # exact sign of (a/b - q) = sign(a - q*b) * sign(b)
    na, da = a.as_integer_ratio()
    nb, db = b.as_integer_ratio()
    nq, dq = q.as_integer_ratio()
    num = na * dq * db - nq * nb * da
    s = (num > 0) - (num < 0)
    return -s if b < 0 else s


def div_down(a: float, b: float) -> float:
    q = a / b
    if math.isinf(q):
        if q > 0:
            return _MAX_FLOAT
        raise OverflowError("quotient below the finite binary64 range")
    return q if _div_err_sign(a, b, q) >= 0 else _next_down(q)


def div_up(a: float, b: float) -> float:
    q = a / b
    if math.isinf(q):
        if q < 0:
            return -_MAX_FLOAT
        raise OverflowError("quotient above the finite binary64 range")
    return q if _div_err_sign(a, b, q) <= 0 else _next_up(q)


def _sqrt_dir(v: float, up: bool) -> float:
    r = math.sqrt(v)
    nr, dr = r.as_integer_ratio()
    nv, dv = v.as_integer_ratio()
    if nr * nr * dv == nv * dr * dr:
        return r
    # sqrt is correctly rounded, so one step always crosses the true value
    return _next_up(r) if up else max(_next_down(r), 0.0)


# libm transcendentals: glibc documents sub-ulp error for exp/log and
# at most 1 ulp for sin/cos, so 1 resp. 2 nudge steps give containment.
_EXP_LOG_STEPS = 1
_TRIG_STEPS = 2


def _nudge(v: float, steps: int, up: bool) -> float:
    for _ in range(steps):
        v = _next_up(v) if up else _next_down(v)
    return v


def _exp_dir(v: float, up: bool) -> float:
    if v == 0.0:
        return 1.0
    e = math.exp(v)
    if math.isinf(e):
        if up:
            raise OverflowError("exp above the finite binary64 range")
        return _MAX_FLOAT
    e = _nudge(e, _EXP_LOG_STEPS, up)
    return e if up else max(e, 0.0)


def _log_dir(v: float, up: bool) -> float:
    if v == 1.0:
        return 0.0
    return _nudge(math.log(v), _EXP_LOG_STEPS, up)


def _sin_point(v: float, up: bool) -> float:
    if v == 0.0:
        return 0.0
    s = _nudge(math.sin(v), _TRIG_STEPS, up)
    return min(s, 1.0) if up else max(s, -1.0)


def _cos_point(v: float, up: bool) -> float:
    if v == 0.0:
        return 1.0
    c = _nudge(math.cos(v), _TRIG_STEPS, up)
    return min(c, 1.0) if up else max(c, -1.0)


def float_down(q: Fraction) -> float:
    """Largest binary64 value that is <= q."""
    try:
        f = float(q)
    except OverflowError:
        f = _INF if q > 0 else -_INF
    if math.isinf(f):
        if f > 0:
            return _MAX_FLOAT
        raise OverflowError("value below the finite binary64 range")
    return f if Fraction(f) <= q else _next_down(f)


def float_up(q: Fraction) -> float:
    """Smallest binary64 value that is >= q."""
    try:
        f = float(q)
    except OverflowError:
        f = _INF if q > 0 else -_INF
    if math.isinf(f):
        if f < 0:
            return -_MAX_FLOAT
        raise OverflowError("value above the finite binary64 range")
    return f if Fraction(f) >= q else _next_up(f)


# =============================================================================
# FloatInterval
# =============================================================================

@dataclass(frozen=True)
class FloatInterval:
    """Closed interval with finite binary64 endpoints, lo <= hi.

    The enclosure currency of the whole engine: every bound, every
    evaluated range and every certificate field is one of these.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise OverflowError(f"non-finite interval endpoint [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v: float) -> FloatInterval:
        return cls(v, v)

    @classmethod
    def from_rational(cls, q: Fraction) -> FloatInterval:
        """Tightest representable enclosure of an exact rational."""
        return cls(float_down(q), float_up(q))

    @property
    def width(self) -> float:
        return sub_up(self.hi, self.lo)

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def contains_interval(self, other: FloatInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def straddles_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    # --- arithmetic ---------------------------------------------------------

    def __neg__(self) -> FloatInterval:
        return FloatInterval(-self.hi, -self.lo)

    def __add__(self, other: FloatInterval) -> FloatInterval:
        return FloatInterval(add_down(self.lo, other.lo), add_up(self.hi, other.hi))

    def __sub__(self, other: FloatInterval) -> FloatInterval:
        return FloatInterval(sub_down(self.lo, other.hi), sub_up(self.hi, other.lo))

    def __mul__(self, other: FloatInterval) -> FloatInterval:
        corners = ((self.lo, other.lo), (self.lo, other.hi),
                   (self.hi, other.lo), (self.hi, other.hi))
        lo = min(mul_down(a, b) for a, b in corners)
        hi = max(mul_up(a, b) for a, b in corners)
        return FloatInterval(lo, hi)

    def __truediv__(self, other: FloatInterval) -> FloatInterval:
        if other.straddles_zero():
            raise DivisionByZeroInterval(f"denominator {other} contains zero")
        corners = ((self.lo, other.lo), (self.lo, other.hi),
                   (self.hi, other.lo), (self.hi, other.hi))
        lo = min(div_down(a, b) for a, b in corners)
        hi = max(div_up(a, b) for a, b in corners)
        return FloatInterval(lo, hi)


def iv_abs(x: FloatInterval) -> FloatInterval:
    if x.lo >= 0.0:
        return x
    if x.hi <= 0.0:
        return -x
    return FloatInterval(0.0, max(-x.lo, x.hi))


def iv_sqr(x: FloatInterval) -> FloatInterval:
    # even-power range rule, not naive x*x, so sign-straddling inputs hit 0
    if x.lo >= 0.0:
        return FloatInterval(mul_down(x.lo, x.lo), mul_up(x.hi, x.hi))
    if x.hi <= 0.0:
        return FloatInterval(mul_down(x.hi, x.hi), mul_up(x.lo, x.lo))
    return FloatInterval(0.0, max(mul_up(x.lo, x.lo), mul_up(x.hi, x.hi)))


def _pow_mag(m: float, n: int, up: bool) -> float:
    # m >= 0; repeated directed multiply keeps every intermediate a bound
    acc = 1.0
    step = mul_up if up else mul_down
    for _ in range(n):
        acc = step(acc, m)
    return acc


def _pow_point(v: float, n: int, up: bool) -> float:
    if v >= 0.0:
        return _pow_mag(v, n, up)
    m = -v
    if n % 2 == 0:
        return _pow_mag(m, n, up)
    return -_pow_mag(m, n, not up)


def iv_pow(x: FloatInterval, n: int) -> FloatInterval:
    if n < 0:
        raise DomainError("pow_n", x, "negative exponent")
    if n == 0:
        return FloatInterval(1.0, 1.0)
    if n == 1:
        return x
    if n == 2:
        return iv_sqr(x)
    if n % 2 == 1:
        return FloatInterval(_pow_point(x.lo, n, up=False), _pow_point(x.hi, n, up=True))
    if x.lo >= 0.0:
        return FloatInterval(_pow_mag(x.lo, n, up=False), _pow_mag(x.hi, n, up=True))
    if x.hi <= 0.0:
        return FloatInterval(_pow_mag(-x.hi, n, up=False), _pow_mag(-x.lo, n, up=True))
    return FloatInterval(0.0, _pow_mag(max(-x.lo, x.hi), n, up=True))


def iv_sqrt(x: FloatInterval) -> FloatInterval:
    if x.lo < 0.0:
        raise DomainError("sqrt", x)
    return FloatInterval(_sqrt_dir(x.lo, up=False), _sqrt_dir(x.hi, up=True))


def iv_exp(x: FloatInterval) -> FloatInterval:
    return FloatInterval(_exp_dir(x.lo, up=False), _exp_dir(x.hi, up=True))


def iv_log(x: FloatInterval) -> FloatInterval:
    if x.lo <= 0.0:
        raise DomainError("log", x)
    return FloatInterval(_log_dir(x.lo, up=False), _log_dir(x.hi, up=True))


def _crit_indices(lo: float, hi: float, half_offset: int) -> range:
    """Integer k with pi*(k + half_offset/2) possibly inside [lo, hi].

    A binary64 value is rational, so it never equals a critical point; a
    point interval therefore has no interior extrema.  False inclusions
    (from the guard) only widen the trig range, never shrink it.  Pure
    integer arithmetic: k bounds are ceil/floor of
    (x/pi - half_offset/2 -+ guard) over a common denominator.
    """
    if lo == hi:
        return range(0)
    if max(abs(lo), abs(hi)) <= _SHORT_LIMIT:
        pn, pd, g = _PI_SHORT_NUM, _PI_SHORT_DEN, _GUARD_SHORT_DEN
    else:
        pn, pd, g = _PI_NUM, _PI_DEN, _GUARD_DEN
    nl, dl = lo.as_integer_ratio()
    nh, dh = hi.as_integer_ratio()
    # value = n*pd/(d*pn) - half_offset/2 -+ 1/g over denominator 2*g*d*pn
    den_l = 2 * g * dl * pn
    num_l = 2 * g * nl * pd - half_offset * g * dl * pn - 2 * dl * pn
    klo = -((-num_l) // den_l)
    den_h = 2 * g * dh * pn
    num_h = 2 * g * nh * pd - half_offset * g * dh * pn + 2 * dh * pn
    khi = num_h // den_h
    return range(klo, khi + 1)


def iv_sin(x: FloatInterval) -> FloatInterval:
    if x.hi - x.lo >= 6.3:  # over a full period; [-1, 1] is the exact range
        return FloatInterval(-1.0, 1.0)
    lo = min(_sin_point(x.lo, up=False), _sin_point(x.hi, up=False))
    hi = max(_sin_point(x.lo, up=True), _sin_point(x.hi, up=True))
    for k in _crit_indices(x.lo, x.hi, 1):  # pi/2 + k*pi
        if k % 2 == 0:
            hi = 1.0
        else:
            lo = -1.0
    return FloatInterval(lo, hi)


def iv_cos(x: FloatInterval) -> FloatInterval:
    if x.hi - x.lo >= 6.3:  # over a full period; [-1, 1] is the exact range
        return FloatInterval(-1.0, 1.0)
    lo = min(_cos_point(x.lo, up=False), _cos_point(x.hi, up=False))
    hi = max(_cos_point(x.lo, up=True), _cos_point(x.hi, up=True))
    for k in _crit_indices(x.lo, x.hi, 0):  # k*pi
        if k % 2 == 0:
            hi = 1.0
        else:
            lo = -1.0
    return FloatInterval(lo, hi)


# =============================================================================
# Spec-surface dispatchers
# =============================================================================

_ARITH = {
    "add": FloatInterval.__add__,
    "sub": FloatInterval.__sub__,
    "mul": FloatInterval.__mul__,
    "div": FloatInterval.__truediv__,
}


def iv_arith(op: str, x: FloatInterval, y: FloatInterval) -> FloatInterval:
    """Binary interval operation, op in {add, sub, mul, div}."""
    try:
        f = _ARITH[op]
    except KeyError:
        raise ValueError(f"unknown interval operation {op!r}") from None
    return f(x, y)


def iv_unary(fn: str, x: FloatInterval, n: int | None = None) -> FloatInterval:
    """Unary interval operation, fn in {neg, sqr, pow_n, sqrt, exp, log, sin, cos, abs}."""
    if fn == "neg":
        return -x
    if fn == "sqr":
        return iv_sqr(x)
    if fn == "pow_n":
        if n is None:
            raise ValueError("pow_n requires an exponent")
        return iv_pow(x, n)
    if fn == "sqrt":
        return iv_sqrt(x)
    if fn == "exp":
        return iv_exp(x)
    if fn == "log":
        return iv_log(x)
    if fn == "sin":
        return iv_sin(x)
    if fn == "cos":
        return iv_cos(x)
    if fn == "abs":
        return iv_abs(x)
    raise ValueError(f"unknown interval function {fn!r}")


# =============================================================================
# Exact rational surface
# =============================================================================

class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1


def rat_cmp(x: Rational, y: Rational) -> Ordering:
    if x < y:
        return Ordering.LT
    if x > y:
        return Ordering.GT
    return Ordering.EQ


def rat_arith(op: str, x: Rational, y: Rational) -> Rational:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y  # ZeroDivisionError propagates for y == 0
    raise ValueError(f"unknown rational operation {op!r}")


def parse_rational(text: str) -> Rational:
    """Parse "n/d", an integer, or a (possibly scientific) decimal, exactly."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return _parse_decimal(text)


def _parse_decimal(text: str) -> Fraction:
    mant = text
    exp10 = 0
    for marker in ("e", "E"):
        if marker in mant:
            mant, etxt = mant.split(marker, 1)
            exp10 = int(etxt)
            break
    sign = 1
    if mant.startswith(("+", "-")):
        if mant[0] == "-":
            sign = -1
        mant = mant[1:]
    if "." in mant:
        whole, frac = mant.split(".", 1)
    else:
        whole, frac = mant, ""
    if not (whole + frac) or not (whole + frac).isdigit():
        raise ValueError(f"not a decimal number: {text!r}")
    q = Fraction(int(whole + frac or "0"), 10 ** len(frac)) * sign
    return q * Fraction(10) ** exp10


def format_rational(q: Rational) -> str:
    return f"{q.numerator}/{q.denominator}"


# =============================================================================
# Bit-exact serialization
# =============================================================================

def float_to_hex(v: float) -> str:
    return float(v).hex()


def hex_to_float(text: str) -> float:
    return float.fromhex(text)


def interval_to_hex(x: FloatInterval) -> list[str]:
    return [float_to_hex(x.lo), float_to_hex(x.hi)]


def hex_to_interval(pair: list[str]) -> FloatInterval:
    return FloatInterval(hex_to_float(pair[0]), hex_to_float(pair[1]))


# =============================================================================
# Rational intervals (substrate of the topology module)
# =============================================================================

@dataclass(frozen=True)
class RatInterval:
    """Interval with exact rational endpoints and per-endpoint openness.

    Either lo < hi, or lo == hi with both endpoints closed (a singleton).
    """

    lo: Rational
    hi: Rational
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted rational interval {self}")
        if self.lo == self.hi and (self.lo_open or self.hi_open):
            raise ValueError("degenerate rational interval must be closed")

    @classmethod
    def closed(cls, lo: Rational, hi: Rational) -> RatInterval:
        return cls(lo, hi, False, False)

    @classmethod
    def open(cls, lo: Rational, hi: Rational) -> RatInterval:
        return cls(lo, hi, True, True)

    def contains(self, p: Rational) -> bool:
        if p < self.lo or p > self.hi:
            return False
        if p == self.lo and self.lo_open:
            return False
        if p == self.hi and self.hi_open:
            return False
        return True

    def is_open_interval(self) -> bool:
        return self.lo_open and self.hi_open

    def __str__(self) -> str:
        lb = "(" if self.lo_open else "["
        rb = ")" if self.hi_open else "]"
        return f"{lb}{self.lo}, {self.hi}{rb}"
