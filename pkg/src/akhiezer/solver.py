"""One entry point: the minimizer for (alpha, beta, n) with its diagnostics."""
from __future__ import annotations

import logging

import numpy as np

from .errors import DomainError, ZeroCountError
from .frame import Branch, TwoIntervalSet, build_frame, classify_degree
from .functional import l1_norm
from .synthesis import (
    PELL_TOL,
    ExtremalSolution,
    expected_left_count,
    moment_residuals,
    pell_residual,
    synthesize_degenerate,
    synthesize_even,
    synthesize_odd,
    zero_split,
)

log = logging.getLogger(__name__)


def check_zero_structure(zeros, set: TwoIntervalSet, left_expected: int, gap_allowed: int = 0):
    left, gap, right = zero_split(zeros, set)
    inside = np.all((zeros >= -1.0) & (zeros <= 1.0))
    if not inside or gap > gap_allowed or left != left_expected:
        raise ZeroCountError(
            f"zero split ({left}, {gap}, {right}) does not match the case prediction "
            f"({left_expected} in [-1, alpha], at most {gap_allowed} in the gap)"
        )


def solve(alpha, beta=None, n: int = 1, tol_pell: float = PELL_TOL) -> ExtremalSolution:
    """Minimize the L1 norm over E of a monic polynomial of degree n."""
    s = alpha if isinstance(alpha, TwoIntervalSet) else TwoIntervalSet(float(alpha), float(beta))
    if int(n) != n or n < 1:
        raise DomainError(f"degree must be a positive integer, got {n!r}")
    n = int(n)
    frame = build_frame(s)
    case = classify_degree(n, frame)
    m = n // 2 if n % 2 == 0 else (n - 1) // 2
    log.info("n=%d alpha=%r beta=%r: p=%d sigma/K=%.3g branch=%s", n, s.alpha, s.beta, case.p,
             case.sigma_over_K, case.branch.value)

    if n % 2 and case.branch is Branch.DEGENERATE:
        fam = synthesize_degenerate(m, frame)
        f = fam.f0
        check_zero_structure(f.zeros, s, n - case.p, gap_allowed=1)
        pell = pell_residual(fam.M, fam.phi, s, "M")
        sol = ExtremalSolution(f, f.zeros, case, l1_norm(f, s).value, pell,
                               moment_residuals(f.zeros, s), family=fam)
        sol.notes.append("degenerate frame: every (x - t) phi(x) with alpha <= t <= beta is minimal")
        return sol

    if n % 2:
        pair = synthesize_odd(m, frame, case, tol_pell=tol_pell)
        f = pair.U * pair.V
        check_zero_structure(f.zeros, s, expected_left_count(n, case))
        sol = ExtremalSolution(f, f.zeros, case, l1_norm(f, s).value, pair.pell,
                               moment_residuals(f.zeros, s), factors=pair)
        if pair.branch is not case.branch:
            sol.notes.append("alternate theta assignment was needed")
        return sol

    ev = synthesize_even(m, frame, case, tol_pell=tol_pell)
    f = ev.f
    if case.branch is not Branch.DEGENERATE:
        check_zero_structure(f.zeros, s, expected_left_count(n, case))
    sol = ExtremalSolution(f, f.zeros, case, l1_norm(f, s).value, ev.pell,
                           moment_residuals(f.zeros, s), even=ev)
    if case.branch is Branch.DEGENERATE:
        sol.notes.append("sigma = 0 for even degree: the better of both formulas was returned")
    return sol
