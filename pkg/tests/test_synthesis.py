import warnings

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from akhiezer import (
    Branch,
    PartitionError,
    TwoIntervalSet,
    beta_ladder,
    build_frame,
    classify_case,
    classify_even_case,
    l1_norm,
    moment_residuals,
    solve,
    synthesize_degenerate,
    synthesize_even,
    synthesize_odd,
)
from akhiezer.errors import ZeroCountError
from akhiezer.synthesis import _odd_attempt, zero_split

from conftest import PAIRS


def _split(z, s):
    left, _, right = zero_split(z, s)
    return left, right


@pytest.mark.parametrize("alpha, beta", PAIRS)
@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_odd_pell_identity(alpha, beta, m):
    fr = build_frame(alpha, beta)
    pair = synthesize_odd(m, fr)
    assert pair.U.degree == m and pair.V.degree == m + 1
    assert pair.pell.excess <= 1e-9
    assert pair.pell.equation == ("5_1" if pair.branch is Branch.ODD_P else "5_2")


@pytest.mark.parametrize("alpha, beta", PAIRS)
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_even_pell_identity(alpha, beta, m):
    fr = build_frame(alpha, beta)
    ev = synthesize_even(m, fr)
    assert ev.f.degree == 2 * m
    assert ev.pell.excess <= 1e-9
    p = classify_even_case(m, fr).p
    assert ev.pell.equation == ("6_1" if p % 2 == 0 else "6_2")


@pytest.mark.parametrize("alpha, beta", PAIRS)
@pytest.mark.parametrize("m", [2, 3, 4])
def test_per_factor_zero_split(alpha, beta, m):
    fr = build_frame(alpha, beta)
    case = classify_case(m, fr)
    pair = synthesize_odd(m, fr, case)
    s = fr.set
    p = case.p
    if p % 2:
        q = (p - 1) // 2
        assert _split(pair.U.zeros, s) == (m - q, q)
        assert _split(pair.V.zeros, s) == (m - q, q + 1)
    else:
        q = p // 2
        assert _split(pair.U.zeros, s) == (m - q, q)
        assert _split(pair.V.zeros, s) == (m - q + 1, q)


@pytest.mark.parametrize("alpha, beta", PAIRS)
def test_interlacing(alpha, beta):
    fr = build_frame(alpha, beta)
    pair = synthesize_odd(4, fr)
    for lo, hi in fr.set.intervals:
        u = pair.U.zeros[(pair.U.zeros >= lo) & (pair.U.zeros <= hi)]
        v = pair.V.zeros[(pair.V.zeros >= lo) & (pair.V.zeros <= hi)]
        for a, b in zip(v[:-1], v[1:]):
            assert np.sum((u > a) & (u < b)) == 1


@pytest.mark.parametrize("alpha, beta", PAIRS)
def test_product_matches_solution(alpha, beta):
    sol = solve(alpha, beta, 7)
    prod = np.polymul(sol.factors.U.coeffs, sol.factors.V.coeffs)
    assert np.max(np.abs(prod - sol.f.coeffs)) < 1e-10


@pytest.mark.parametrize("alpha, beta", PAIRS)
def test_degree_one_against_scalar_search(alpha, beta):
    s = TwoIntervalSet(alpha, beta)
    sol = solve(s, n=1)
    res = minimize_scalar(lambda t: l1_norm(_linear(t), s).value, bracket=(-1, 1), method="golden",
                          options={"xtol": 1e-12})
    assert sol.zeros[0] == pytest.approx(res.x, abs=1e-6)
    assert sol.factors.U.degree == 0


def _linear(t):
    from akhiezer import MonicPolynomial

    return MonicPolynomial.from_roots([t])


@pytest.mark.parametrize("alpha, beta", PAIRS)
@pytest.mark.parametrize("n", [3, 4, 7, 8])
def test_moment_residuals_vanish(alpha, beta, n):
    sol = solve(alpha, beta, n)
    assert sol.max_moment_residual <= 1e-9


def test_moment_residuals_sensitive():
    sol = solve(-0.3, 0.4, 5)
    z = sol.zeros.copy()
    z[2] += 1e-3
    assert np.max(np.abs(moment_residuals(z, TwoIntervalSet(-0.3, 0.4)))) >= 1e-4


def test_moment_residual_symmetric_degree_one():
    res = moment_residuals([0.0], TwoIntervalSet(-0.4, 0.4))
    assert abs(res[0]) < 1e-15


def test_moment_residual_partition_error():
    with pytest.raises(PartitionError):
        moment_residuals([-0.5, 0.0, 0.05, 0.7], TwoIntervalSet(-0.2, 0.3), k=1)


@pytest.mark.parametrize("alpha, beta", PAIRS)
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_rejected_branch_is_not_extremal(alpha, beta, m):
    fr = build_frame(alpha, beta)
    case = classify_case(m, fr)
    other = 2 if case.branch is Branch.ODD_P else 1
    try:
        U, V, pell, _ = _odd_attempt(m, fr, other, True)
    except ZeroCountError:
        return
    f = U * V
    left, gap, _ = zero_split(f.zeros, fr.set)
    valid = pell.ok() and gap == 0 and left == 2 * m + 1 - case.p
    stationary = np.max(np.abs(moment_residuals(f.zeros, fr.set, left))) < 1e-3 if gap <= 1 else False
    assert not (valid and stationary)


def test_degree_two_symmetric_set_gives_even_polynomial():
    sol = solve(-0.45, 0.45, 2)
    assert abs(sol.f.coeffs[1]) < 1e-12
    np.testing.assert_allclose(sol.zeros, -sol.zeros[::-1], atol=1e-12)


@pytest.mark.parametrize("alpha, m", [(-0.3, 2), (0.1, 3), (-0.6, 4)])
def test_degenerate_family_members(alpha, m):
    lad = beta_ladder(alpha, m)
    beta = lad.betas[-1]
    fr = build_frame(alpha, beta)
    fam = synthesize_degenerate(m, fr)
    assert alpha < fam.gamma < beta
    f1, f2 = fam.endpoint_solutions
    # f1, f2, f0 share the degree-2m factor phi
    for f, r in ((fam.f0, fam.gamma), (f1, alpha), (f2, beta)):
        np.testing.assert_allclose(f.coeffs, np.polymul(fam.phi.coeffs, [1.0, -r]), atol=1e-12)
    vals = [l1_norm(f, fr.set).value for f in (fam.f0, f1, f2)]
    assert max(vals) - min(vals) <= 1e-9 * vals[0]
    # M' = (2m+2) f0
    dM = np.polyder(fam.M.coeffs) / (2 * m + 2)
    assert np.max(np.abs(dM - fam.f0.coeffs)) < 1e-7


def test_symmetric_degenerate_gamma_zero():
    # alpha = -beta with rho = K/4 is a rung for m = 1
    lad = beta_ladder(-0.5, 1)
    fr = build_frame(-0.5, 0.5)
    assert classify_case(1, fr).branch is Branch.DEGENERATE
    assert lad.betas[-1] == pytest.approx(0.5, abs=1e-12)
    assert abs(synthesize_degenerate(1, fr).gamma) < 1e-12


def test_even_degenerate_warns_and_keeps_alternate():
    from scipy.optimize import brentq

    # beta with 5 rho = 2K exactly
    alpha, m = -0.2, 2
    g = lambda b: 5 * build_frame(alpha, b).rho / build_frame(alpha, b).K - 2
    beta = brentq(g, 0.0, 0.9, xtol=1e-16, rtol=1e-15)
    fr = build_frame(alpha, beta)
    assert classify_even_case(m, fr).branch is Branch.DEGENERATE
    with pytest.warns(RuntimeWarning):
        ev = synthesize_even(m, fr)
    assert ev.pell.excess <= 1e-9
    assert len(ev.alternates) == 1
    a = l1_norm(ev.f, fr.set).value
    b = l1_norm(ev.alternates[0], fr.set).value
    assert a == pytest.approx(b, rel=1e-9)
