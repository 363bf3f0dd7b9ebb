"""Per-theorem drivers over the sweep engine.

Each driver instantiates the sweep for one conclusion and, where the raw
sweep outcome is not yet the certificate (the root prover), post-processes
it.  Conclusions over sub-pairs (monotonicity, the mean-value inequality,
flatness) follow from per-piece data by telescoping through shared piece
endpoints; no per-pair sweeps are run.
"""

from __future__ import annotations

from fractions import Fraction

from .certificates import (
    BoundCert,
    FlatCert,
    IntegralCert,
    MaxCert,
    ModulusCert,
    MonotoneCert,
    MviCert,
    NegCert,
    RootBracket,
)
from .expr import Expr, eval_iv, parse
from .numeric import FloatInterval
from .sweep import (
    FailureKind,
    Problem,
    PropertyKind,
    SweepFailure,
    SweepOptions,
    run_sweep,
)


class PreconditionError(ValueError):
    """A theorem's hypothesis could not be certified before sweeping."""


class Inconclusive(RuntimeError):
    """Sign refinement could not certify a bracket down to the tolerance."""


def _as_expr(f: Expr | str) -> tuple[Expr, str]:
    if isinstance(f, str):
        return parse(f), f
    return f, None


def prove_bound(f: Expr | str, a: float, b: float,
                opts: SweepOptions | None = None) -> BoundCert | SweepFailure:
    """Certify a positive global upper bound for f on [a, b]."""
    expr, src = _as_expr(f)
    return run_sweep(Problem(expr, a, b, PropertyKind.BOUNDED, fn_source=src), opts)


def prove_max(f: Expr | str, a: float, b: float, eps: float,
              opts: SweepOptions | None = None) -> MaxCert | SweepFailure:
    """Certify an eps-maximizer: a point c with f(t) <= f(c) + eps everywhere.

    The exact-maximizer statement is not certifiable from finitely many
    enclosures, so the eps-relaxed form is what the engine proves.
    """
    expr, src = _as_expr(f)
    return run_sweep(Problem(expr, a, b, PropertyKind.MAX_APPROX, eps=eps,
                             fn_source=src), opts)


def prove_modulus(f: Expr | str, a: float, b: float, eps: float,
                  opts: SweepOptions | None = None) -> ModulusCert | SweepFailure:
    """Certify a uniform-continuity modulus delta for the given eps."""
    expr, src = _as_expr(f)
    return run_sweep(Problem(expr, a, b, PropertyKind.UNIF_CONT, eps=eps,
                             fn_source=src), opts)


def prove_integral(f: Expr | str, a: float, b: float, eps: float,
                   opts: SweepOptions | None = None) -> IntegralCert | SweepFailure:
    """Enclose the Darboux integral of f over [a, b] with gap below eps.

    The sweep enforces the per-prefix budget (x - a) * eps / (2 (b - a)), so
    a full run ends with a gap of at most eps/2 plus rounding dust.
    """
    expr, src = _as_expr(f)
    return run_sweep(Problem(expr, a, b, PropertyKind.DARBOUX_GAP, eps=eps,
                             fn_source=src), opts)


def prove_monotone(f: Expr | str, a: float, b: float, strict: bool,
                   opts: SweepOptions | None = None) -> MonotoneCert | SweepFailure:
    """Certify (strict) monotonicity via per-piece derivative lower bounds."""
    expr, src = _as_expr(f)
    kind = PropertyKind.STRICT_INC if strict else PropertyKind.INC
    return run_sweep(Problem(expr, a, b, kind, fn_source=src), opts)


def prove_mvi(f: Expr | str, a: float, b: float, M: float,
              opts: SweepOptions | None = None) -> MviCert | SweepFailure:
    """Certify f(x2) - f(x1) <= M (x2 - x1) via per-piece derivative caps."""
    expr, src = _as_expr(f)
    return run_sweep(Problem(expr, a, b, PropertyKind.MVI_BOUND, M=M,
                             fn_source=src), opts)


def prove_flat(f: Expr | str, a: float, b: float, eta: float,
               opts: SweepOptions | None = None) -> FlatCert | SweepFailure:
    """Certify |f(t) - f(a)| <= eta (b - a); exact constancy when eta = 0.

    With eta = 0 only a syntactically zero derivative enclosure certifies,
    so anything short of that stalls rather than rounding its way through.
    """
    expr, src = _as_expr(f)
    return run_sweep(Problem(expr, a, b, PropertyKind.FLAT, eta=eta,
                             fn_source=src), opts)


# =============================================================================
# Root localization
# =============================================================================

_PROBE_LADDER = (8, 7, 9, 6, 10, 5, 11, 4, 12, 3, 13, 2, 14, 1, 15)


def prove_root(f: Expr | str, a: float, b: float, tol: float,
               opts: SweepOptions | None = None) -> RootBracket | NegCert | SweepFailure:
    """Localize a zero of f given a certified-negative left endpoint.

    The negativity sweep either reaches b (then f < 0 on all of [a, b] and a
    NegCert is returned) or stalls where the enclosures can no longer keep f
    below zero; bisection on the stalled region then produces a bracket
    [l, r] of width at most tol with f(l) < 0 < f(r) certified.  A zero that
    is merely touched, never crossed, leaves every probe sign-undecidable
    and raises Inconclusive.
    """
    expr, src = _as_expr(f)
    if not tol > 0:
        raise ValueError("tol must be positive")
    f_a = eval_iv(expr, FloatInterval.point(a))
    if not f_a.hi < 0.0:
        raise PreconditionError(
            f"f(a) is not certified negative: enclosure {f_a} at a = {a!r}")

    problem = Problem(expr, a, b, PropertyKind.SIGN_NEG, fn_source=src)
    res = run_sweep(problem, opts)
    if isinstance(res, NegCert):
        return res
    if res.kind is FailureKind.BUDGET:
        return res

    h_init, h_min, _ = (opts or SweepOptions()).resolve(problem)
    left = res.at
    f_left = eval_iv(expr, FloatInterval.point(left))
    if not f_left.hi < 0.0:
        raise Inconclusive(
            f"sign undecidable at the stalled frontier {left!r}: enclosure {f_left}")

    right, f_right = _find_positive_point(expr, left, b, h_init, h_min)
    if right is None:
        raise Inconclusive(
            f"no certified-positive point found to the right of {left!r}")

    return _bisect_bracket(expr, problem.fn_source, a, b, tol,
                           left, f_left, right, f_right)


def _find_positive_point(expr: Expr, x: float, b: float, h_init: float,
                         h_min: float) -> tuple[float, FloatInterval] | tuple[None, None]:
    h = h_init
    while h >= h_min:
        cand = min(x + h, b)
        if cand <= x:
            break
        v = eval_iv(expr, FloatInterval.point(cand))
        if v.lo > 0.0:
            return cand, v
        h = h / 2
    return None, None


def _bisect_bracket(expr: Expr, src: str, a: float, b: float, tol: float,
                    l: float, f_l: FloatInterval, r: float,
                    f_r: FloatInterval) -> RootBracket:
    tol_q = Fraction(tol)
    while Fraction(r) - Fraction(l) > tol_q:
        moved = False
        span = r - l
        for k in _PROBE_LADDER:
            m = l + span * (k / 16.0)
            if not l < m < r:
                continue
            v = eval_iv(expr, FloatInterval.point(m))
            if v.hi < 0.0:
                l, f_l = m, v
                moved = True
                break
            if v.lo > 0.0:
                r, f_r = m, v
                moved = True
                break
        if not moved:
            raise Inconclusive(
                f"sign undecidable everywhere inside [{l!r}, {r!r}] "
                f"(width {r - l!r} > tol {tol!r})")
    return RootBracket(src, a, b, l, r, f_l.hi, f_r.lo, tol)
