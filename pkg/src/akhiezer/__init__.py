"""L1-minimal monic polynomials on E = [-1, alpha] U [beta, 1] from elliptic and theta functions."""

from .elliptic import Modulus, QuarterPeriods, complete_K, inverse_sn, jacobi_sn_cn_dn
from .errors import (
    AkhiezerError,
    BranchMismatchError,
    CertificationError,
    ConditioningError,
    ConsistencyError,
    ConvergenceError,
    DegenerateGeometryError,
    DomainError,
    PartitionError,
    PoleError,
    ZeroCountError,
)
from .frame import (
    BetaLadder,
    Branch,
    CaseSelection,
    EllipticFrame,
    Sheet,
    TwoIntervalSet,
    beta_ladder,
    build_frame,
    classify_case,
    classify_degree,
    classify_even_case,
    inverse_map,
    map_x,
)
from .functional import (
    ClosedFormValue,
    L1Report,
    asymptotic_G,
    bernstein_degenerate_check,
    closed_form_degenerate_value,
    l1_norm,
    sandwich_bounds,
    transfinite_diameter,
)
from .oracle import OracleConfig, OracleResult, certify, oracle_minimize
from .polynomial import MonicPolynomial, extract_zeros
from .solver import solve
from .synthesis import (
    DegenerateFamily,
    EvenSolution,
    ExtremalSolution,
    FactorPair,
    PellResidual,
    moment_residuals,
    synthesize_degenerate,
    synthesize_even,
    synthesize_odd,
)
from .theta import Nome, ThetaValue, theta_H, theta_H1, theta_Theta, theta_Theta1, theta_Theta_logderiv

__version__ = "0.1.0"
