"""sigmadic: finite-precision difference algebra over unramified p-adic rings.

The package models the valuation ring W(F_{p^k}) of the unramified
degree-k extension of Q_p at absolute precision p^N, together with the
Frobenius lift sigma, leading-term (valuation + angular component)
calculus, separated power series with Weierstrass division and
preparation, and a sigma-Hensel solver for difference-analytic
equations t(x, sigma x, ..., sigma^n x) = 0.

Quick start::

    from sigmadic import make_ring, parse_term, sigma_hensel_solve

    ring = make_ring(p=7, k=1, N=4)
    term = parse_term("x*x - 2", ring)
    report = sigma_hensel_solve(term, ring.element(3), xi=0)
    assert str(report.root) == "2166"
"""

from .errors import (
    AllCoefficientsZero,
    ConfigRejected,
    DivisionByZero,
    InsufficientPrecision,
    MixedField,
    NonUnitInverse,
    NotRegular,
    ParseError,
    PrecisionLoss,
    QuotientSingularity,
    ResidueUnsolvable,
    SigmadicError,
    StalledProgress,
    TruncationUnsound,
    ZeroGradient,
)
from .finite_field import (
    FieldDesc,
    FieldElem,
    FieldEmbedding,
    LinearizedSolution,
    default_modulus,
    extend_field,
    solve_linearized,
)
from .hensel import (
    Add,
    Apply,
    Const,
    HenselConfig,
    Mul,
    Quot,
    Sigma,
    Slot,
    SolveReport,
    StepRecord,
    Sub,
    Term,
    Var,
    check_config,
    embed_term,
    hensel_step,
    prolong_eval,
    prolongation,
    sigma_free,
    sigma_hensel_solve,
    term_gradient,
)
from .leading_terms import (
    LeadingTerm,
    ResidueRingElem,
    angular_component,
    level_for_index,
    partial_add,
)
from .series import SeparatedSeries, weierstrass_divide, weierstrass_prepare
from .term_parser import format_term, parse_term
from .witt import (
    INFINITY,
    RingDesc,
    RingEmbedding,
    WittNum,
    extend_ring,
    make_ring,
    parse_witt,
)

__version__ = "0.1.0"

__all__ = [
    "AllCoefficientsZero",
    "ConfigRejected",
    "DivisionByZero",
    "InsufficientPrecision",
    "MixedField",
    "NonUnitInverse",
    "NotRegular",
    "ParseError",
    "PrecisionLoss",
    "QuotientSingularity",
    "ResidueUnsolvable",
    "SigmadicError",
    "StalledProgress",
    "TruncationUnsound",
    "ZeroGradient",
    "FieldDesc",
    "FieldElem",
    "FieldEmbedding",
    "LinearizedSolution",
    "default_modulus",
    "extend_field",
    "solve_linearized",
    "Add",
    "Apply",
    "Const",
    "HenselConfig",
    "Mul",
    "Quot",
    "Sigma",
    "Slot",
    "SolveReport",
    "StepRecord",
    "Sub",
    "Term",
    "Var",
    "check_config",
    "embed_term",
    "hensel_step",
    "prolong_eval",
    "prolongation",
    "sigma_free",
    "sigma_hensel_solve",
    "term_gradient",
    "LeadingTerm",
    "ResidueRingElem",
    "angular_component",
    "level_for_index",
    "partial_add",
    "SeparatedSeries",
    "weierstrass_divide",
    "weierstrass_prepare",
    "format_term",
    "parse_term",
    "INFINITY",
    "RingDesc",
    "RingEmbedding",
    "WittNum",
    "extend_ring",
    "make_ring",
    "parse_witt",
    "__version__",
]
