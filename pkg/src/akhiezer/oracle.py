"""Brute-force L1 minimizer used to certify the closed-form solutions.

The integral over E is replaced by composite trapezoid sums, and |t| by
sqrt(t^2 + eps^2) with eps decreasing geometrically; each smoothed problem
is strictly convex and is solved by damped Newton.  The free coefficients
are those of f = x^n + sum_{i<n} c_i T_i(x), which keeps the Hessian well
scaled on [-1, 1].
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import CertificationError, ConvergenceError, DomainError
from .frame import TwoIntervalSet
from .functional import l1_norm
from .polynomial import MonicPolynomial

log = logging.getLogger(__name__)

MAX_DEGREE = 12


@dataclass(frozen=True)
class OracleConfig:
    grid_size: int = 4001
    refine_rounds: int = 2
    tolerance: float = 1e-10
    eps_start: float = 1e-2
    eps_end: float = 1e-10
    eps_steps: int = 9
    max_newton: int = 80
    cluster_points: int = 64

    def __post_init__(self):
        if self.grid_size < 101 or self.grid_size % 2 == 0:
            raise DomainError("grid_size must be odd and at least 101")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.refine_rounds < 0:
            raise DomainError("refine_rounds must be >= 0")


@dataclass(frozen=True)
class OracleResult:
    coeffs: MonicPolynomial
    value: float
    certified_gap: float
    discrete_value: float
    round_values: tuple = ()
    newton_iterations: int = 0

    @property
    def round_change(self) -> float:
        if len(self.round_values) < 2:
            return 0.0
        return abs(self.round_values[-1] - self.round_values[-2])


def trapezoid_nodes(set: TwoIntervalSet, M: int, extra=()):
    """Nodes and trapezoid weights on each interval, with optional extra nodes merged in."""
    xs, ws = [], []
    extra = np.asarray(extra, dtype=float)
    for lo, hi in set.intervals:
        x = np.linspace(lo, hi, M)
        inside = extra[(extra > lo) & (extra < hi)]
        if inside.size:
            x = np.unique(np.concatenate([x, inside]))
        w = np.empty_like(x)
        d = np.diff(x)
        w[0] = 0.5 * d[0]
        w[-1] = 0.5 * d[-1]
        w[1:-1] = 0.5 * (d[:-1] + d[1:])
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def _design(x, n):
    """Columns T_0..T_{n-1} at x, and the fixed x^n part."""
    A = C.chebvander(x, n - 1) if n > 0 else np.zeros((x.size, 0))
    return A, x**n


def discrete_objective(c, x, w, n):
    A, base = _design(x, n)
    return float(np.sum(w * np.abs(base + A @ c)))


def _smoothed(c, A, base, w, eps):
    r = base + A @ c
    s = np.sqrt(r * r + eps * eps)
    val = float(np.sum(w * s))
    grad = A.T @ (w * r / s)
    hw = w * eps * eps / (s * s * s)
    hess = (A * hw[:, None]).T @ A
    return val, grad, hess


def _newton(c, A, base, w, eps, cfg):
    val, g, H = _smoothed(c, A, base, w, eps)
    last_decrease = np.inf
    its = 0
    for its in range(1, cfg.max_newton + 1):
        scale = max(float(np.max(np.abs(np.diag(H)))), 1e-300)
        try:
            step = np.linalg.solve(H + 1e-14 * scale * np.eye(H.shape[0]), g)
        except np.linalg.LinAlgError:
            step = g / scale
        decrement = float(g @ step)
        t = 1.0
        while True:
            trial = c - t * step
            tv = float(np.sum(w * np.sqrt((base + A @ trial) ** 2 + eps * eps)))
            if tv <= val - 0.25 * t * decrement or t < 1e-12:
                break
            t *= 0.5
        if tv > val:
            # line search stalled: report the model's predicted decrease, not zero
            last_decrease = 0.5 * max(decrement, 0.0)
            break
        last_decrease = val - tv
        c = trial
        val, g, H = _smoothed(c, A, base, w, eps)
        if decrement < 1e-28 or last_decrease <= 1e-18 * max(val, 1e-300):
            break
    return c, val, last_decrease, its


def _to_monic(c, n):
    """x^n + sum c_i T_i in descending power coefficients."""
    power = C.cheb2poly(c) if n > 0 else np.zeros(0)
    full = np.zeros(n + 1)
    full[: power.size] += power
    full[n] = 1.0
    return MonicPolynomial(full[::-1].copy())


def _real_zeros(f: MonicPolynomial):
    r = np.roots(f.coeffs)
    return np.sort(r.real[np.abs(r.imag) <= 1e-7 * np.maximum(1.0, np.abs(r))])


def _cluster(zeros, set, cfg):
    h = max(set.alpha + 1.0, 1.0 - set.beta) / (cfg.grid_size - 1)
    pts = [z + h * np.linspace(-4, 4, cfg.cluster_points) for z in zeros]
    return np.concatenate(pts) if pts else np.zeros(0)


def oracle_minimize(n: int, set: TwoIntervalSet, cfg: OracleConfig | None = None) -> OracleResult:
    """Minimize the discretized L1 objective over monic polynomials of degree n."""
    cfg = cfg or OracleConfig()
    if not 1 <= n <= MAX_DEGREE:
        raise DomainError(f"oracle is limited to 1 <= n <= {MAX_DEGREE}")
    # start from the monic Chebyshev polynomial 2^{1-n} T_n: drop the lower terms of x^n
    c = -C.poly2cheb(np.eye(n + 1)[n])[:n]
    eps_list = np.geomspace(cfg.eps_start, cfg.eps_end, cfg.eps_steps)
    extra = np.zeros(0)
    values, total_its = [], 0
    gap = np.inf
    for rnd in range(cfg.refine_rounds + 1):
        x, w = trapezoid_nodes(set, cfg.grid_size, extra)
        A, base = _design(x, n)
        for eps in eps_list:
            c, val, gap, its = _newton(c, A, base, w, eps, cfg)
            total_its += its
        f = _to_monic(c, n)
        values.append(l1_norm(f, set).value)
        log.debug("oracle round %d: nodes=%d value=%.17g gap=%.3g", rnd, x.size, values[-1], gap)
        zeros = _real_zeros(f)
        extra = _cluster(zeros[set.contains(zeros, 1e-3)], set, cfg)
    if gap > cfg.tolerance:
        raise ConvergenceError(f"oracle objective still decreasing by {gap:.3g} after the last round")
    return OracleResult(f, values[-1], gap, discrete_objective(c, x, w, n), tuple(values), total_its)


# ---------------------------------------------------------------- certify


@dataclass
class CertificationReport:
    n: int
    value_analytic: float
    value_oracle: float
    relative_value_gap: float
    coefficient_distance: float
    root_distance: float
    degenerate: bool
    gap_root: float | None = None
    gap_root_ok: bool = True
    passed: bool = True
    tol_value: float = 1e-4
    tol_roots: float = 1e-3
    oracle: OracleResult | None = field(default=None, repr=False)

    def to_dict(self):
        return {
            "n": self.n,
            "value_analytic": self.value_analytic,
            "value_oracle": self.value_oracle,
            "relative_value_gap": self.relative_value_gap,
            "coefficient_distance": self.coefficient_distance,
            "root_distance": self.root_distance,
            "degenerate": self.degenerate,
            "gap_root": self.gap_root,
            "gap_root_ok": self.gap_root_ok,
            "passed": self.passed,
        }


def _gap_distance(z, set):
    return np.maximum(np.maximum(set.alpha - z, z - set.beta), 0.0)


def _drop_gap_root(zeros, set):
    i = int(np.argmin(_gap_distance(zeros, set)))
    return np.delete(zeros, i), float(zeros[i])


def certify(solution, set: TwoIntervalSet, cfg: OracleConfig | None = None,
            tol_value: float = 1e-4, tol_roots: float = 1e-3, raise_on_fail: bool = True) -> CertificationReport:
    """Compare an analytic solution with the oracle minimizer.

    For degenerate frames the minimizer is not unique: the value is
    compared with the family value, the oracle's gap zero must lie in
    [alpha, beta] and only the remaining zeros are paired.
    """
    n = solution.f.degree
    if n > MAX_DEGREE:
        raise DomainError(f"certification is limited to degree <= {MAX_DEGREE}")
    res = oracle_minimize(n, set, cfg)
    oz = _real_zeros(res.coeffs)
    az = np.asarray(solution.zeros, dtype=float)
    degenerate = solution.family is not None or (solution.even is not None and solution.even.alternates)
    gap_root, gap_ok = None, True
    if degenerate:
        ref = solution.family.f0.coeffs if solution.family is not None else solution.f.coeffs
        az, _ = _drop_gap_root(az, set)
        if oz.size == n:
            oz, gap_root = _drop_gap_root(oz, set)
            gap_ok = bool(_gap_distance(np.array([gap_root]), set)[0] <= tol_roots)
        coeff_dist = float("nan") if ref is None else float(np.max(np.abs(res.coeffs.coeffs - ref)))
    else:
        coeff_dist = float(np.max(np.abs(res.coeffs.coeffs - solution.f.coeffs)))
    root_dist = float(np.max(np.abs(oz - az))) if oz.size == az.size else float("inf")
    if not az.size and not oz.size:
        root_dist = 0.0
    rel = abs(solution.minimal_value - res.value) / res.value
    passed = rel <= tol_value and root_dist <= tol_roots and gap_ok
    rep = CertificationReport(n, solution.minimal_value, res.value, rel, coeff_dist, root_dist, bool(degenerate),
                              gap_root, gap_ok, passed, tol_value, tol_roots, res)
    if not passed and raise_on_fail:
        payload = {
            "analytic": solution.f.to_list(),
            "oracle": res.coeffs.to_list(),
            **rep.to_dict(),
        }
        raise CertificationError(
            f"certification failed: value gap {rel:.3g}, root distance {root_dist:.3g}, gap root ok={gap_ok}",
            payload,
        )
    return rep
