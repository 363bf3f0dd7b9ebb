"""suparg: certificates for interval theorems of real function theory.

A frontier sweep certifies, for an expression f on [a, b]: global bounds,
eps-extrema, sign/root localization, uniform-continuity moduli, Darboux
integral enclosures, monotonicity, mean-value inequalities and flatness;
exact rational set algebra handles clopen analysis and finite subcovers.
Every success is a finite certificate that an independent checker
re-verifies from scratch.
"""

from .certificates import (
    BoundCert,
    Certificate,
    CheckResult,
    ClopenReport,
    ClopenVerdict,
    Conclusion,
    FlatCert,
    IntegralCert,
    MaxCert,
    ModulusCert,
    MonotoneCert,
    MviCert,
    NegCert,
    Partition,
    RootBracket,
    StructureError,
    SubcoverCert,
    check,
    conclusion_of,
    dumps,
    from_document,
    loads,
    to_document,
)
from .expr import (
    EvalResult,
    Expr,
    NotDifferentiable,
    ParseError,
    eval_d1,
    eval_iv,
    parse,
    to_source,
)
from .numeric import (
    DivisionByZeroInterval,
    DomainError,
    FloatInterval,
    RatInterval,
    Rational,
)
from .sweep import (
    CombinerClass,
    FailureKind,
    LocalWitness,
    Problem,
    PropertyKind,
    SweepFailure,
    SweepOptions,
    SweepState,
    base_case,
    combine,
    combiner_class,
    local_extend,
    run_sweep,
)
from .theorems import (
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
from .topology import (
    Cover,
    RatIntervalSet,
    analyze_clopen,
    extract_subcover,
    parse_interval_file,
    set_ops,
)

__version__ = "0.1.0"
