"""Elliptic parameterization of E = [-1, alpha] U [beta, 1].

The modulus, the pole parameter rho, the conformal map x(u) of the
two-sheeted surface onto the period rectangle, the case classification
(2m+2) rho = p K + sigma, and the ladder of beta values where sigma = 0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .elliptic import (
    EDGE,
    Modulus,
    QuarterPeriods,
    inverse_sn,
    jacobi_sn_cn_dn,
    quarter_periods,
)
from .errors import ConvergenceError, DegenerateGeometryError, DomainError, PoleError
from .theta import Nome, nome_from_modulus

DEGENERACY_TOL = 1e-9
POLE_RADIUS = 1e-10


@dataclass(frozen=True)
class TwoIntervalSet:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (math.isfinite(a) and math.isfinite(b) and -1.0 < a < b < 1.0):
            raise DomainError(f"need -1 < alpha < beta < 1, got alpha={a!r}, beta={b!r}")

    @property
    def measure(self) -> float:
        return (self.alpha + 1.0) + (1.0 - self.beta)

    @property
    def intervals(self):
        return ((-1.0, self.alpha), (self.beta, 1.0))

    def contains(self, x, tol: float = 0.0):
        x = np.asarray(x, dtype=float)
        return ((x >= -1.0 - tol) & (x <= self.alpha + tol)) | (
            (x >= self.beta - tol) & (x <= 1.0 + tol)
        )


@dataclass(frozen=True)
class EllipticFrame:
    set: TwoIntervalSet
    k: Modulus
    periods: QuarterPeriods
    nome: Nome
    rho: float
    # exact values from alpha, beta: sn^2 rho = (1-alpha)/2, cn^2 rho = (1+alpha)/2,
    # dn^2 rho = (1+alpha)/(1+beta)
    sn_rho: float
    cn_rho: float
    dn_rho: float

    @property
    def alpha(self):
        return self.set.alpha

    @property
    def beta(self):
        return self.set.beta

    @property
    def K(self):
        return self.periods.K

    @property
    def Kprime(self):
        return self.periods.Kprime

    def sncndn(self, u):
        return jacobi_sn_cn_dn(u, self.k, self.periods)


def build_frame(set_or_alpha, beta: float | None = None) -> EllipticFrame:
    """Modulus, quarter periods, nome and rho for the set E.

    ``k^2 = 2(beta-alpha)/((1-alpha)(1+beta))`` and rho in (0, K) solves
    ``alpha = 1 - 2 sn^2 rho``.
    """
    s = set_or_alpha if beta is None else TwoIntervalSet(set_or_alpha, beta)
    a, b = s.alpha, s.beta
    den = (1.0 - a) * (1.0 + b)
    k2 = 2.0 * (b - a) / den
    kp2 = (1.0 + a) * (1.0 - b) / den
    try:
        k = Modulus.from_k2(k2, kp2)
    except DomainError as exc:
        raise DegenerateGeometryError(
            f"alpha={a!r}, beta={b!r} give k^2={k2!r} outside the admissible band"
        ) from exc
    periods = quarter_periods(k)
    nome = nome_from_modulus(k, periods)
    sn_rho = math.sqrt((1.0 - a) / 2.0)
    rho = inverse_sn(sn_rho, k, periods)
    return EllipticFrame(
        set=s,
        k=k,
        periods=periods,
        nome=nome,
        rho=rho,
        sn_rho=sn_rho,
        cn_rho=math.sqrt((1.0 + a) / 2.0),
        dn_rho=math.sqrt((1.0 + a) / (1.0 + b)),
    )


def _check_pole(u, frame):
    u = np.asarray(u, dtype=complex)
    K2, Kp2 = 2.0 * frame.K, 2.0 * frame.Kprime
    for r in (frame.rho, -frame.rho):
        w = u - r
        w = w - K2 * np.round(w.real / K2) - 1j * Kp2 * np.round(w.imag / Kp2)
        if np.any(np.abs(w) < POLE_RADIUS):
            raise PoleError("u within 1e-10 of a pole +-rho of x(u)")


def map_x(u, frame: EllipticFrame):
    """x(u) = (sn^2 u cn^2 rho + cn^2 u sn^2 rho) / (sn^2 u - sn^2 rho)."""
    scalar = np.ndim(u) == 0
    real_input = not np.iscomplexobj(u)
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    _check_pole(u, frame)
    s2r = frame.sn_rho**2
    c2r = frame.cn_rho**2
    Kp = frame.Kprime
    yr = u.imag - 2.0 * Kp * np.round(u.imag / (2.0 * Kp))
    near = np.abs(np.abs(yr) - Kp) < 0.5 * Kp
    x = np.empty_like(u)
    if np.any(~near):
        s, _, _ = jacobi_sn_cn_dn(u[~near], frame.k, frame.periods)
        s2 = s * s
        x[~near] = (s2 * c2r + (1.0 - s2) * s2r) / (s2 - s2r)
    if np.any(near):
        # 1/sn(u) = k sn(u - iK') keeps the evaluation finite near u = iK'
        t, _, _ = jacobi_sn_cn_dn(u[near] - 1j * Kp, frame.k, frame.periods)
        w = frame.k.k2 * t * t
        x[near] = (c2r + (w - 1.0) * s2r) / (1.0 - s2r * w)
    if real_input:
        x = x.real
    return x[0] if scalar else x


def map_factors(u, frame: EllipticFrame):
    """Closed forms of (x+1, x-alpha, x-beta, x-1) as functions of u."""
    s, c, d = jacobi_sn_cn_dn(np.asarray(u, dtype=complex), frame.k, frame.periods)
    a, b = frame.alpha, frame.beta
    s2r = frame.sn_rho**2
    den = s * s - s2r
    kp2 = frame.k.kprime**2
    return (
        2.0 * s * s * frame.cn_rho**2 / den,
        (1.0 - a * a) / (2.0 * den),
        (1.0 - b * b) * d * d * frame.dn_rho**2 / (2.0 * kp2 * den),
        2.0 * s2r * c * c / den,
    )


class Sheet(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


def inverse_map(x, frame: EllipticFrame, sheet: Sheet = Sheet.UPPER):
    """Preimage u of real x in the closed fundamental rectangle.

    x <= -1 -> u in [0, rho);  x >= 1 -> u in (rho, K];
    x in [-1, alpha] -> u = i t;  x in [beta, 1] -> u = K + i t;
    x in (alpha, beta) -> u = s + i K' (top side), t in [0, K'].
    The lower sheet returns -u.  Solved in closed form through
    sn^2 u = sn^2 rho (x + 1) / (x - alpha) and inverse_sn.
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~np.isfinite(x)):
        raise DomainError("inverse_map needs finite x")
    a, b = frame.alpha, frame.beta
    k = frame.k
    kc = k.complement()
    per_c = QuarterPeriods(frame.Kprime, frame.K)
    s2r = frame.sn_rho**2
    u = np.empty(x.shape, dtype=complex)

    left_out = x <= -1.0
    right_out = x >= 1.0
    left_in = (x > -1.0) & (x <= a)
    right_in = (x >= b) & (x < 1.0)
    gap = (x > a) & (x < b)

    with np.errstate(divide="ignore", invalid="ignore"):
        t = s2r * (x + 1.0) / (x - a)

    if np.any(left_out | right_out):
        m = left_out | right_out
        s = np.sqrt(np.clip(t[m], 0.0, 1.0))
        u[m] = inverse_sn(s, k, frame.periods)
    if np.any(left_in):
        # sn(i w, k) = i sc(w, k')  =>  sn^2(w, k') = -t / (1 - t)
        tt = t[left_in]
        with np.errstate(invalid="ignore"):
            s2 = np.where(np.isfinite(tt), -tt / (1.0 - tt), 1.0)
        u[left_in] = 1j * inverse_sn(np.sqrt(np.clip(s2, 0.0, 1.0)), kc, per_c)
    if np.any(right_in):
        # sn(K + i w, k) = 1 / dn(w, k')  =>  sn^2(w, k') = (1 - 1/t) / k'^2
        tt = t[right_in]
        s2 = (1.0 - 1.0 / tt) / kc.k2
        u[right_in] = frame.K + 1j * inverse_sn(np.sqrt(np.clip(s2, 0.0, 1.0)), kc, per_c)
    if np.any(gap):
        # sn(s + i K') = 1 / (k sn s)  =>  sn^2 s = 1 / (k^2 t)
        s2 = 1.0 / (k.k2 * t[gap])
        u[gap] = inverse_sn(np.sqrt(np.clip(s2, 0.0, 1.0)), k, frame.periods) + 1j * frame.Kprime

    u = np.where(np.abs(u.imag) == 0.0, u.real + 0j, u)
    back = map_x(u, frame)
    err = np.abs(back - x) / np.maximum(1.0, np.abs(x))
    if np.any(err > 1e-11):
        raise ConvergenceError(f"inverse_map residual {float(np.max(err)):.3g} exceeds 1e-11")
    if sheet is Sheet.LOWER:
        u = -u
    return u[0] if scalar else u


class Branch(enum.Enum):
    """Which theta formula family applies.

    ODD_P uses Theta (formulas 12_1 for odd n, the second formula for even n);
    EVEN_P uses Theta1 (12_2, resp. the first even-n formula).
    """

    ODD_P = "12_1"
    EVEN_P = "12_2"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class CaseSelection:
    m: int
    p: int
    sigma: float
    branch: Branch
    multiple: int
    K: float

    @property
    def sigma_over_K(self) -> float:
        return self.sigma / self.K


def _classify(multiple, m, frame):
    K = frame.K
    t = multiple * frame.rho / K
    p = int(math.floor(t))
    sigma = (t - p) * K
    if sigma < DEGENERACY_TOL * K:
        return CaseSelection(m, p, 0.0, Branch.DEGENERATE, multiple, K)
    if K - sigma < DEGENERACY_TOL * K:
        return CaseSelection(m, p + 1, 0.0, Branch.DEGENERATE, multiple, K)
    branch = Branch.ODD_P if p % 2 else Branch.EVEN_P
    return CaseSelection(m, p, sigma, branch, multiple, K)


def classify_case(m: int, frame: EllipticFrame) -> CaseSelection:
    """Case of (2m+2) rho = p K + sigma for odd degree n = 2m+1."""
    if m < 0:
        raise DomainError("m must be >= 0")
    return _classify(2 * m + 2, m, frame)


def classify_even_case(m: int, frame: EllipticFrame) -> CaseSelection:
    """Case of (2m+1) rho = p K + sigma for even degree n = 2m."""
    if m < 1:
        raise DomainError("even degree needs m >= 1")
    return _classify(2 * m + 1, m, frame)


def classify_degree(n: int, frame: EllipticFrame) -> CaseSelection:
    if n < 1:
        raise DomainError("degree must be >= 1")
    if n % 2:
        return classify_case((n - 1) // 2, frame)
    return classify_even_case(n // 2, frame)


def beta_from_modulus(alpha: float, k2: float) -> float:
    """Invert k^2 = 2(beta-alpha)/((1-alpha)(1+beta)) for beta."""
    return (2.0 * alpha + k2 * (1.0 - alpha)) / (2.0 - k2 * (1.0 - alpha))


@dataclass(frozen=True)
class BetaLadder:
    """Rungs beta_1 > beta_2 > ... > beta_q where (2m+2) rho = p K exactly.

    ``indices[i]`` is the rung index p of ``betas[i]`` and ``moduli[i]`` its
    modulus k_p.  Rungs whose modulus falls within 1e-12 of 1, or whose
    beta is too close to 1 for sigma = 0 to be resolved in double
    precision, are listed in ``skipped``.
    """

    alpha: float
    m: int
    indices: tuple
    betas: tuple
    moduli: tuple
    skipped: tuple = ()

    @property
    def q(self) -> int:
        return len(self.indices) + len(self.skipped)

    def band_index(self, beta: float) -> int:
        """p such that beta_{p+1} < beta < beta_p (beta_0 = 1, beta_{q+1} = alpha)."""
        p = len(self.skipped)
        for idx, b in zip(self.indices, self.betas):
            if beta < b:
                p = idx
        return p

    @staticmethod
    def band_branch(p: int) -> Branch:
        return Branch.ODD_P if p % 2 else Branch.EVEN_P

    def bracket(self, beta: float):
        """Rungs (lower, upper) around beta as (index, beta) pairs.

        The lower end of the last band is (q+1, alpha); the upper end of
        the first band is (0, 1.0).
        """
        p = self.band_index(beta)
        lookup = dict(zip(self.indices, self.betas))
        upper = (p, lookup.get(p, 1.0))
        lower = (p + 1, lookup.get(p + 1, self.alpha))
        return lower, upper


def _rung_residual(k, alpha, p, m):
    mod = Modulus.from_k(k)
    per = quarter_periods(mod)
    s, _, _ = jacobi_sn_cn_dn(p * per.K / (2 * m + 2), mod, per)
    return 1.0 - 2.0 * s * s - alpha


def _rung_offset(beta, alpha, p, m):
    fr = build_frame(alpha, beta)
    return (2 * m + 2) * fr.rho / fr.K - p


def _refine_rung(alpha, beta, p, m):
    """Polish beta_p in beta itself; None if the rung is not representable.

    Near beta = 1 the spacing of doubles limits how well sigma = 0 can be
    hit; rungs that still miss the degeneracy threshold are dropped.
    """
    if not alpha < beta < 1.0:
        return None
    try:
        off = _rung_offset(beta, alpha, p, m)
        if abs(off) >= DEGENERACY_TOL:
            h = 1e-9 * (1.0 - beta) + 1e-15
            lo, hi = max(beta - h, 0.5 * (alpha + beta)), min(beta + h, 0.5 * (beta + 1.0))
            if _rung_offset(lo, alpha, p, m) * _rung_offset(hi, alpha, p, m) < 0.0:
                beta = brentq(_rung_offset, lo, hi, args=(alpha, p, m), xtol=1e-17, rtol=1e-15)
                off = _rung_offset(beta, alpha, p, m)
    except DomainError:
        return None
    return beta if abs(off) < DEGENERACY_TOL else None


def beta_ladder(alpha: float, m: int) -> BetaLadder:
    """Solve alpha = 1 - 2 sn^2(p K(k) / (2m+2), k) for k, p = 1, 2, ...

    A root exists exactly when cos(p pi / (2m+2)) > alpha, which is the
    bound on the number of rungs.  Each k_p is converted to beta_p by
    inverting the modulus formula.
    """
    if not -1.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (-1, 1)")
    if m < 0:
        raise DomainError("m must be >= 0")
    lo, hi = EDGE, 1.0 - EDGE
    indices, betas, moduli, skipped = [], [], [], []
    for p in range(1, 2 * m + 2):
        if math.cos(p * math.pi / (2 * m + 2)) <= alpha:
            break
        if _rung_residual(lo, alpha, p, m) <= 0.0:
            break
        if _rung_residual(hi, alpha, p, m) >= 0.0:
            skipped.append(p)
            continue
        k = brentq(_rung_residual, lo, hi, args=(alpha, p, m), xtol=1e-16, rtol=1e-15, maxiter=200)
        beta = beta_from_modulus(alpha, k * k)
        beta = _refine_rung(alpha, beta, p, m)
        if beta is None:
            skipped.append(p)
            continue
        indices.append(p)
        betas.append(beta)
        moduli.append(k)
    return BetaLadder(alpha, m, tuple(indices), tuple(betas), tuple(moduli), tuple(skipped))
