"""Driver-level tests: each prover against an independent oracle."""

import math
import random
from fractions import Fraction

import mpmath
import pytest

from suparg.certificates import (
    IntegralCert,
    MaxCert,
    ModulusCert,
    MonotoneCert,
    NegCert,
    RootBracket,
    check,
)
from suparg.numeric import DomainError, FloatInterval
from suparg.sweep import FailureKind, SweepFailure, SweepOptions
from suparg.theorems import (
    Inconclusive,
    PreconditionError,
    prove_bound,
    prove_flat,
    prove_integral,
    prove_max,
    prove_modulus,
    prove_monotone,
    prove_mvi,
    prove_root,
)
from suparg.expr import eval_d1, parse

mpmath.mp.dps = 50


def bisect_oracle(fn, lo, hi, steps=200):
    """Plain float bisection, independent of the interval machinery."""
    flo = fn(lo)
    assert flo < 0 < fn(hi)
    for _ in range(steps):
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if fn(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


# ---------------------------------------------------------------------------
# bounds and maxima
# ---------------------------------------------------------------------------

def test_bound_sin():
    cert = prove_bound("sin(x)", 0.0, 3.0)
    assert check(cert)
    assert 1.0 <= cert.bound <= 1.0001


def test_bound_constant():
    cert = prove_bound("5", 0.0, 1.0)
    assert check(cert)
    assert cert.bound == 5.0


def test_bound_negative_function_still_positive_M():
    cert = prove_bound("-x - 1", 0.0, 1.0)
    assert check(cert)
    assert cert.bound > 0.0  # forced positive per the theorem's M > 0


def test_bound_domain_error():
    with pytest.raises(DomainError):
        prove_bound("log(x)", -1.0, 1.0)


def test_max_sin():
    cert = prove_max("sin(x)", 0.0, 3.0, 1e-3)
    assert check(cert)
    assert abs(cert.c - math.pi / 2) < 0.1
    assert cert.f_at_c_lo >= 1 - 1e-3


def test_max_constant():
    cert = prove_max("5", 0.0, 1.0, 0.25)
    assert check(cert)
    assert 0.0 <= cert.c <= 1.0


def test_max_at_right_endpoint():
    cert = prove_max("x", 0.0, 1.0, 1e-6)
    assert check(cert)
    assert cert.c >= 1 - 1e-6


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------

def test_root_sqrt2_bracket():
    cert = prove_root("x^2 - 2", 0.0, 2.0, 1e-9)
    assert isinstance(cert, RootBracket)
    assert check(cert)
    assert cert.r - cert.l <= 1e-9
    root = 1.414213562373095
    assert cert.l <= root <= cert.r
    olo, ohi = bisect_oracle(lambda t: t * t - 2, 0.0, 2.0)
    assert cert.l <= ohi and olo <= cert.r  # brackets agree


def test_root_never_crossing_gives_negativity():
    cert = prove_root("x - 3", 0.0, 1.0, 1e-9)
    assert isinstance(cert, NegCert)
    assert check(cert)


def test_root_precondition():
    with pytest.raises(PreconditionError):
        prove_root("x^2", -1.0, 1.0, 1e-9)


def test_root_tangential_touch_inconclusive():
    # crosses zero nowhere but touches at 0: negativity holds neither side
    with pytest.raises(Inconclusive):
        prove_root("-(x^2)", -1.0, 1.0, 1e-9)


def test_root_linear_half():
    cert = prove_root("x - 0.5", 0.0, 1.0, 1e-9)
    assert isinstance(cert, RootBracket)
    assert cert.l <= 0.5 <= cert.r
    assert check(cert)


# ---------------------------------------------------------------------------
# uniform continuity
# ---------------------------------------------------------------------------

def grid_modulus_violations(fn, cert: ModulusCert, n=2000):
    lo, hi = cert.a, cert.b
    grid = [lo + (hi - lo) * k / (n - 1) for k in range(n)]
    vals = [fn(t) for t in grid]
    bad = 0
    for i, s in enumerate(grid):
        j = i + 1
        while j < n and grid[j] - s < cert.delta:
            if not abs(vals[i] - vals[j]) < cert.eps:
                bad += 1
            j += 1
    return bad


def test_modulus_identity():
    cert = prove_modulus("x", 0.0, 1.0, 0.1)
    assert check(cert)
    assert cert.delta > 0
    assert grid_modulus_violations(lambda t: t, cert) == 0


def test_modulus_constant():
    cert = prove_modulus("7", 0.0, 1.0, 1e-6)
    assert check(cert)
    assert cert.delta > 0


def test_modulus_sin():
    cert = prove_modulus("sin(x)", 0.0, 4.0, 0.1)
    assert check(cert)
    assert cert.delta > 1e-4
    assert grid_modulus_violations(math.sin, cert) == 0


# ---------------------------------------------------------------------------
# integrals
# ---------------------------------------------------------------------------

def test_integral_parabola():
    cert = prove_integral("x^2", 0.0, 1.0, 1e-3)
    assert isinstance(cert, IntegralCert)
    assert check(cert)
    assert Fraction(cert.lower_sum) <= Fraction(1, 3) <= Fraction(cert.upper_sum)
    assert cert.upper_sum - cert.lower_sum < 1e-3


def test_integral_constant_exact():
    cert = prove_integral("7", 2.0, 5.0, 1e-6)
    assert check(cert)
    assert cert.lower_sum == 21.0 == cert.upper_sum


def test_integral_sin_against_antiderivative():
    b = 3.14159
    cert = prove_integral("sin(x)", 0.0, b, 1e-3)
    assert check(cert)
    truth = float(1 - mpmath.cos(mpmath.mpf("3.14159")))
    assert cert.lower_sum <= truth <= cert.upper_sum
    assert cert.upper_sum - cert.lower_sum < 1e-3


def test_integral_degenerate_zero():
    cert = prove_integral("x^2", 1.0, 1.0, 1e-6)
    assert check(cert)
    assert cert.lower_sum == 0.0 == cert.upper_sum


# ---------------------------------------------------------------------------
# derivative theorems
# ---------------------------------------------------------------------------

def test_monotone_exp_strict():
    cert = prove_monotone("exp(x)", 0.0, 1.0, True)
    assert isinstance(cert, MonotoneCert) and cert.strict
    assert check(cert)
    assert min(cert.piece_deriv_lo) > 0


def test_monotone_cubic_stalls():
    res = prove_monotone("x^3", -1.0, 1.0, True)
    assert isinstance(res, SweepFailure)
    assert res.kind is FailureKind.STALLED


def test_monotone_weak_refuted():
    res = prove_monotone("-x", 0.0, 1.0, False)
    assert isinstance(res, SweepFailure)
    assert res.kind is FailureKind.HYPOTHESIS_FAIL
    assert res.enclosure == FloatInterval(-1.0, -1.0)


def test_mvi_parabola():
    cert = prove_mvi("x^2", 0.0, 1.0, 2.0)
    assert check(cert)
    # telescoped conclusion on the endpoints: f(1) - f(0) = 1 <= 2
    assert max(cert.piece_deriv_hi) <= 2.0


def test_mvi_parabola_tight_cap_refuted():
    res = prove_mvi("x^2", 0.0, 1.0, 1.9)
    assert isinstance(res, SweepFailure)
    assert res.kind is FailureKind.HYPOTHESIS_FAIL
    fresh = eval_d1(parse("x^2"), res.witness).deriv
    assert fresh.lo > 1.9


def test_mvi_sin_unit_cap():
    cert = prove_mvi("sin(x)", 0.0, 3.0, 1.0)
    assert check(cert)


def test_flat_exact_constant():
    cert = prove_flat("3", 0.0, 1.0, 0.0)
    assert check(cert)
    assert cert.osc_bound == 0.0


def test_flat_zero_literal_propagates():
    cert = prove_flat("sin(x)*0 + 2", 0.0, 1.0, 0.0)
    assert check(cert)
    assert cert.osc_bound == 0.0


def test_flat_tiny_slope_budget():
    cert = prove_flat("x*0.000000001", 0.0, 1.0, 1e-8)
    assert check(cert)
    assert cert.osc_bound <= 1e-8


def test_flat_zero_eta_refutes_certified_nonzero_slope():
    res = prove_flat("x*0.000000001", 0.0, 1.0, 0.0)
    assert isinstance(res, SweepFailure)
    assert res.kind is FailureKind.HYPOTHESIS_FAIL
    assert res.enclosure.lo > 0.0


def test_flat_zero_eta_stalls_when_zero_not_syntactic():
    # identically zero derivative, but the enclosure of 2 sin cos - 2 cos sin
    # has positive width, so with eta = 0 nothing certifies and nothing refutes
    res = prove_flat("sin(x)^2 + cos(x)^2", 0.0, 1.0, 0.0)
    assert isinstance(res, SweepFailure)
    assert res.kind is FailureKind.STALLED


# ---------------------------------------------------------------------------
# cross-cutting: analytic oracle for integrals of standard functions
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("src,anti,a,b", [
    ("x^2", lambda t: t ** 3 / 3, 0.0, 1.0),
    ("x^3 - x", lambda t: t ** 4 / 4 - t ** 2 / 2, -1.0, 1.5),
    ("exp(x)", mpmath.exp, 0.0, 1.0),
    ("sin(x)", lambda t: -mpmath.cos(t), 0.0, 2.0),
    ("cos(x) + 2", lambda t: mpmath.sin(t) + 2 * t, -1.0, 1.0),
])
def test_integral_antiderivative_oracle(src, anti, a, b):
    cert = prove_integral(src, a, b, 1e-3)
    assert isinstance(cert, IntegralCert), cert
    assert check(cert)
    truth = float(anti(mpmath.mpf(b)) - anti(mpmath.mpf(a)))
    assert cert.lower_sum <= truth <= cert.upper_sum


def test_monotone_sampled_pairs():
    rng = random.Random(402)
    cert = prove_monotone("x^3 + x", -1.0, 1.0, True)
    assert check(cert)
    for _ in range(1000):
        x1 = rng.uniform(-1.0, 1.0)
        x2 = rng.uniform(-1.0, 1.0)
        if x1 == x2:
            continue
        x1, x2 = min(x1, x2), max(x1, x2)
        assert x1 ** 3 + x1 < x2 ** 3 + x2
