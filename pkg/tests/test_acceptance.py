"""Acceptance criteria 1-9, one PASS/FAIL line each (visible with -s or in the -v log)."""
import math
import time

import numpy as np
import pytest

from akhiezer import (
    Branch,
    Modulus,
    TwoIntervalSet,
    asymptotic_G,
    bernstein_degenerate_check,
    beta_ladder,
    build_frame,
    certify,
    classify_case,
    classify_degree,
    closed_form_degenerate_value,
    inverse_map,
    jacobi_sn_cn_dn,
    l1_norm,
    map_x,
    oracle_minimize,
    sandwich_bounds,
    solve,
    synthesize_degenerate,
    synthesize_even,
    synthesize_odd,
    transfinite_diameter,
)
from akhiezer.elliptic import quarter_periods
from akhiezer.theta import theta

from conftest import PAIRS


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_1_pell_identities(capsys):
    t0 = time.perf_counter()
    worst, branches = 0.0, set()
    for alpha, beta in PAIRS:
        fr = build_frame(alpha, beta)
        for n in (3, 5, 7, 9, 11):
            m = (n - 1) // 2
            case = classify_case(m, fr)
            branches.add(case.branch)
            worst = max(worst, synthesize_odd(m, fr, case).pell.excess)
        for n in (2, 4, 6, 8):
            worst = max(worst, synthesize_even(n // 2, fr).pell.excess)
    elapsed = time.perf_counter() - t0
    both = {Branch.ODD_P, Branch.EVEN_P} <= branches
    report(capsys, 1, worst <= 1e-9 and both and elapsed <= 10,
           f"max scaled excess {worst:.2e}, both branches {both}, {elapsed:.1f}s")


def test_criterion_2_oracle_equivalence(capsys):
    t0 = time.perf_counter()
    gap, roots = 0.0, 0.0
    for alpha, beta in PAIRS:
        s = TwoIntervalSet(alpha, beta)
        for n in range(1, 8):
            rep = certify(solve(s, n=n), s, raise_on_fail=False)
            gap = max(gap, rep.relative_value_gap)
            roots = max(roots, rep.root_distance)
    elapsed = time.perf_counter() - t0
    report(capsys, 2, gap <= 1e-4 and roots <= 1e-3 and elapsed <= 60,
           f"max value gap {gap:.2e}, max root distance {roots:.2e}, {elapsed:.1f}s")


def test_criterion_3_zero_structure(capsys):
    violations, checked = [], 0
    for alpha, beta in PAIRS:
        s = TwoIntervalSet(alpha, beta)
        fr = build_frame(s)
        for n in range(1, 12):
            case = classify_degree(n, fr)
            sol = solve(s, n=n)
            z = sol.zeros
            checked += 1
            r = np.roots(sol.f.coeffs)
            real = np.max(np.abs(r.imag)) < 1e-8
            deriv = np.abs(sol.f.derivative_values(z))
            simple = np.all(deriv > 1e-8 * np.max(np.abs(sol.f.coeffs)))
            gap = np.sum((z > alpha) & (z < beta))
            inside = np.all(s.contains(z)) if case.branch is not Branch.DEGENERATE else gap <= 1
            left = np.sum(z <= alpha)
            if not (real and simple and inside and left == n - case.p):
                violations.append((alpha, beta, n))
    report(capsys, 3, not violations, f"{checked} solutions, violations {violations}")


def test_criterion_4_degenerate_closed_form(capsys):
    worst_l1, worst_b, count = 0.0, 0.0, 0
    for alpha, m in [(-0.3, 1), (-0.3, 3), (0.0, 4), (0.4, 5), (-0.7, 6), (0.2, 8)]:
        lad = beta_ladder(alpha, m)
        for beta in lad.betas:
            fr = build_frame(alpha, beta)
            cf = closed_form_degenerate_value(m, fr, strict=False)
            fam = synthesize_degenerate(m, fr)
            target = 4 * cf.tau ** (2 * m + 2)
            worst_l1 = max(worst_l1, abs(l1_norm(fam.f0, fr.set).value - target) / target)
            worst_b = max(worst_b, abs(cf.Bcoef - cf.Bcoef_theta) / cf.Bcoef)
            count += 1
    report(capsys, 4, worst_l1 <= 1e-8 and worst_b <= 1e-11 and count > 0,
           f"{count} rungs, L1 rel err {worst_l1:.2e}, B forms {worst_b:.2e}")


def test_criterion_5_transfinite_diameter(capsys):
    errs = [abs(transfinite_diameter(build_frame(-a, a)) - math.sqrt(1 - a * a) / 2) for a in (0.2, 0.5, 0.8)]
    report(capsys, 5, max(errs) <= 1e-10, f"max abs error {max(errs):.2e}")


def test_criterion_6_bernstein(capsys):
    worst, count = 0.0, 0
    alpha = -0.2
    for m in range(0, 9):
        lad = beta_ladder(alpha, m)
        beta = lad.betas[-1]
        fr = build_frame(alpha, beta)
        worst = max(worst, bernstein_degenerate_check(synthesize_degenerate(m, fr), fr))
        count += 1
    report(capsys, 6, worst <= 1e-6, f"m = 0..8, max relative discrepancy {worst:.2e}")


def test_criterion_7_korkin_zolotarev_limit(capsys):
    # alpha kept away from the limit polynomial's zeros cos(k pi / (n + 1))
    alpha = 0.137
    s = TwoIntervalSet(alpha, alpha + 1e-4)
    worst = 0.0
    for n in range(1, 7):
        target = 2.0 ** (1 - n)
        a = solve(s, n=n).minimal_value
        o = oracle_minimize(n, s).value
        worst = max(worst, abs(a - target) / target, abs(o - target) / target)
    report(capsys, 7, worst <= 1e-3, f"n = 1..6, max relative deviation from 2^(1-n) {worst:.2e}")


def _record_subsequence(fr, m_max=30):
    best, out = 1.0, []
    for m in range(1, m_max + 1):
        c = classify_case(m, fr)
        d = min(c.sigma_over_K, 1 - c.sigma_over_K)
        if d < best:
            best = d
            out.append(m)
    return out


def test_criterion_8_sandwich_and_asymptotics(capsys):
    inside, decreasing, lines = True, True, []
    for alpha, beta in [(-0.3, 0.4), (0.2, 0.6)]:
        s = TwoIntervalSet(alpha, beta)
        fr = build_frame(s)
        for m in range(4, 9):
            box = sandwich_bounds(m, s)
            exact = solve(s, n=2 * m + 1).minimal_value
            inside &= box.lower * (1 - 1e-9) <= exact <= box.upper * (1 + 1e-9)
        ms = _record_subsequence(fr)
        errs = []
        for m in ms:
            exact = solve(s, n=2 * m + 1).minimal_value
            errs.append(abs(asymptotic_G(m, fr) - exact) / exact)
        decreasing &= len(errs) >= 3 and all(a > b for a, b in zip(errs[:-1], errs[1:]))
        lines.append(f"({alpha},{beta}) m={ms} rel={[f'{e:.3f}' for e in errs]}")
    report(capsys, 8, inside and decreasing, f"sandwich m=4..8 {inside}; asymptotic " + "; ".join(lines))


def test_criterion_9_kernel_properties(capsys):
    rng = np.random.default_rng(9)
    t0 = time.perf_counter()
    k = Modulus.from_k(0.9)
    per = quarter_periods(k)
    u = rng.uniform(-4, 4, 1000) + 1j * rng.uniform(-0.9, 0.9, 1000) * per.Kprime
    sn, cn, dn = jacobi_sn_cn_dn(u, k, per)
    e1 = max(np.max(np.abs(sn**2 + cn**2 - 1)), np.max(np.abs(dn**2 + k.k2 * sn**2 - 1)))

    fr = build_frame(-0.3, 0.4)
    nome = fr.nome
    v = rng.uniform(-2, 2, 1000) + 1j * rng.uniform(-0.5, 0.5, 1000) * nome.Kprime
    e2 = 0.0
    for kind, sign in (("H", -1), ("H1", 1), ("Theta", -1), ("Theta1", 1)):
        lhs = theta(kind, v + 2j * nome.Kprime, nome)
        rhs = sign / nome.q * np.exp(-1j * math.pi * v / nome.K) * theta(kind, v, nome)
        e2 = max(e2, np.max(np.abs(lhs - rhs) / np.maximum(1, np.abs(rhs))))

    t = rng.uniform(0.01, 0.99, 200)
    segs = [t * fr.rho + 0j, fr.rho + t * (fr.K - fr.rho) + 0j, 1j * t * fr.Kprime,
            fr.K + 1j * t * fr.Kprime, t * fr.K + 1j * fr.Kprime]
    e3 = max(np.max(np.abs(inverse_map(map_x(w, fr).real, fr) - w)) for w in segs)
    elapsed = time.perf_counter() - t0
    ok = e1 <= 1e-12 and e2 <= 1e-12 and e3 <= 1e-10 and elapsed <= 5
    report(capsys, 9, ok, f"elliptic {e1:.1e}, theta quasi-period {e2:.1e}, map round trip {e3:.1e}, {elapsed:.2f}s")
