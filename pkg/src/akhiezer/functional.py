"""The L1 functional over E and its closed-form values.

``l1_norm`` integrates |f| exactly: zeros of f split E into pieces of
constant sign and each piece is integrated by a Gauss rule that is exact
for the degree of f.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConsistencyError, DomainError
from .frame import EllipticFrame, TwoIntervalSet, beta_ladder, build_frame, classify_case
from .frame import Branch
from .polynomial import MonicPolynomial, extract_zeros, isolate_zeros, scan_grid
from .theta import theta


@dataclass(frozen=True)
class L1Report:
    value: float
    sign_pattern: tuple
    split_points: tuple
    pieces: tuple


@dataclass(frozen=True)
class ClosedFormValue:
    m: int
    tau: float
    Bcoef: float
    Bcoef_theta: float
    value: float


def _piece_integrals(func, degree, edges):
    """Gauss-Legendre on each piece; exact for polynomials of this degree."""
    nodes, weights = np.polynomial.legendre.leggauss(degree // 2 + 1)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * nodes
    vals = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
    return (half * (vals * weights)).sum(axis=1)


def _l1_core(func, degree, split_points, set: TwoIntervalSet) -> L1Report:
    pieces, signs, total = [], [], 0.0
    for lo, hi in set.intervals:
        inner = sorted(z for z in split_points if lo < z < hi)
        edges = np.array([lo, *inner, hi], dtype=float)
        ints = _piece_integrals(func, degree, edges)
        for a, b, integral in zip(edges[:-1], edges[1:], ints):
            s = 1 if integral > 0 else -1
            pieces.append((float(a), float(b), float(integral)))
            signs.append(s)
            total += abs(float(integral))
    split = tuple(float(z) for z in split_points if set.contains(z) and z not in (-1.0, 1.0))
    return L1Report(total, tuple(signs), split, tuple(pieces))


def l1_norm(f: MonicPolynomial, set: TwoIntervalSet, grid_factor: int = 16) -> L1Report:
    """Exact integral of |f| over E = [-1, alpha] U [beta, 1].

    Zeros of f inside E cut it into pieces of constant sign; each piece is
    integrated by a Gauss-Legendre rule of n//2 + 1 nodes, which is exact
    for degree n.  Unlike a global antiderivative this does not lose digits
    when |f| is much larger in the gap than on E.
    """
    if f.degree == 0:
        return _l1_core(f, 0, (), set)
    if f.zeros is not None:
        zeros = f.zeros
    else:
        zeros = extract_zeros(f, set, grid_factor=grid_factor, check_simple=False)
    return _l1_core(f, f.degree, zeros, set)


def l1_of_function(func, degree: int, set: TwoIntervalSet, grid_factor: int = 16) -> float:
    """L1 integral of an arbitrary (not necessarily monic) polynomial given as a callable."""
    count = max(grid_factor * max(degree, 1), 16)
    grid = np.unique(np.concatenate([scan_grid(count, lo, hi) for lo, hi in set.intervals]))
    zeros = isolate_zeros(func, grid)
    return _l1_core(func, degree, zeros, set).value


def theta_capacity_ratio(frame: EllipticFrame, at: float | None = None) -> float:
    """Theta(0) Theta1(0) / (Theta(r) Theta1(r)) with r = rho unless given."""
    r = frame.rho if at is None else at
    n = frame.nome
    num = theta("Theta", 0.0, n) * theta("Theta1", 0.0, n)
    den = theta("Theta", r, n) * theta("Theta1", r, n)
    return float((num / den).real)


def transfinite_diameter(frame: EllipticFrame) -> float:
    """tau = 1/2 [Theta(0) Theta1(0) / (Theta(rho) Theta1(rho))]^2."""
    return 0.5 * theta_capacity_ratio(frame) ** 2


def closed_form_degenerate_value(m: int, frame: EllipticFrame, strict: bool = True) -> ClosedFormValue:
    """B and the minimal value 4 B (2m+2) on a degenerate frame.

    B is computed both as tau^{2m+2}/(2m+2) and from the theta quotient
    raised to 4m+4; the two must agree to 1e-11 relative.
    """
    if strict:
        case = classify_case(m, frame)
        if case.branch is not Branch.DEGENERATE:
            raise DomainError(f"frame is not degenerate for n={2 * m + 1} (sigma/K={case.sigma_over_K:.3g})")
    N = 2 * m + 2
    ratio = theta_capacity_ratio(frame)
    tau = 0.5 * ratio**2
    b_tau = tau**N / N
    b_theta = ratio ** (4 * m + 4) / (N * 4 ** (m + 1))
    if abs(b_tau - b_theta) > 1e-11 * abs(b_tau):
        raise ConsistencyError(f"B forms disagree: {b_tau!r} vs {b_theta!r}")
    return ClosedFormValue(m, tau, b_tau, b_theta, 4.0 * b_tau * N)


def _weighted_sup(func, set: TwoIntervalSet, n_points: int):
    best = (-1.0, None)
    for lo, hi in set.intervals:
        grid = scan_grid(n_points // 2, lo, hi)
        vals = func(grid)
        order = np.argsort(vals)[::-1][:8]
        for i in order:
            a = grid[max(i - 1, 0)]
            b = grid[min(i + 1, grid.size - 1)]
            res = minimize_scalar(lambda t: -float(func(np.asarray(t))), bounds=(a, b), method="bounded",
                                  options={"xatol": 1e-14})
            cand = max(float(vals[i]), -float(res.fun))
            if cand > best[0]:
                best = (cand, float(res.x))
    return best


def bernstein_weighted_sup(family, frame: EllipticFrame, n_points: int = 4096) -> float:
    """max over E of |f0(x)| sqrt((1-x^2)(alpha-x)(beta-x)) / |x - gamma|."""
    a, b, g = frame.alpha, frame.beta, family.gamma
    f0 = family.f0

    def weighted(x):
        x = np.asarray(x, dtype=float)
        w = np.sqrt(np.clip((1.0 - x * x) * (a - x) * (b - x), 0.0, None))
        return np.abs(f0(x)) * w / np.abs(x - g)

    return _weighted_sup(weighted, frame.set, n_points)[0]


def bernstein_degenerate_check(family, frame: EllipticFrame, n_points: int = 4096) -> float:
    """Relative gap between the weighted sup norm of f0 and 2 B (2m+2).

    The grid maximum (Chebyshev-spaced, ``n_points`` over E) is polished
    by a bounded scalar search around the best grid candidates.
    """
    target = 2.0 * family.Bcoef * (2 * family.m + 2)
    sup = bernstein_weighted_sup(family, frame, n_points)
    return abs(sup - target) / target


def asymptotic_G(m: int, frame: EllipticFrame) -> float:
    """2^{-2m} [Theta(0) Theta1(0) / (Theta(rho) Theta1(rho))]^{4(m+1)}."""
    ratio = theta_capacity_ratio(frame)
    return math.exp(4 * (m + 1) * math.log(ratio) - 2 * m * math.log(2.0))


def single_interval_value(n: int, half_length: float) -> float:
    """Minimal L1 norm of a monic degree-n polynomial on an interval of half-length h: 2^{1-n} h^{n+1}."""
    return 2.0 ** (1 - n) * half_length ** (n + 1)


@dataclass(frozen=True)
class Sandwich:
    m: int
    beta: float
    lower_rung: tuple
    upper_rung: tuple
    lower: float
    upper: float


def _rung_value(m, alpha, index, beta, modulus):
    n = 2 * m + 1
    if index == 0:
        # beta_0 = 1: only [-1, alpha] remains
        return single_interval_value(n, 0.5 * (1.0 + alpha))
    if beta >= 1.0:
        return single_interval_value(n, 0.5 * (1.0 + alpha))
    if beta <= alpha:
        return single_interval_value(n, 1.0)
    fr = build_frame(alpha, beta)
    N = 2 * m + 2
    # theta quotient at the rung modulus with rho = index K / (2m+2)
    r = index * fr.K / N
    ratio = theta_capacity_ratio(fr, at=r)
    return math.exp(4 * (m + 1) * math.log(ratio) - 2 * m * math.log(2.0))


def sandwich_bounds(m: int, set: TwoIntervalSet) -> Sandwich:
    """Exact values at the ladder rungs bracketing beta.

    G(beta_p) <= G(beta) <= G(beta_{p+1}) for beta_{p+1} <= beta <= beta_p,
    each rung value being 2^{-2m} times the theta quotient power at that
    rung's modulus.  The ends of the ladder use the single-interval limits.
    """
    ladder = beta_ladder(set.alpha, m)
    (lo_idx, lo_beta), (up_idx, up_beta) = ladder.bracket(set.beta)
    moduli = dict(zip(ladder.indices, ladder.moduli))
    upper = _rung_value(m, set.alpha, lo_idx, lo_beta, moduli.get(lo_idx))
    lower = _rung_value(m, set.alpha, up_idx, up_beta, moduli.get(up_idx))
    return Sandwich(m, set.beta, (lo_idx, lo_beta), (up_idx, up_beta), lower, upper)
