"""Extremal polynomials from theta-function quotients.

Every closed form here is an elliptic function of u that is a polynomial
in x = x(u).  Two evaluations of it are used:

* at real u, where x is real with |x| > 1 and the expression is manifestly
  real; a least-squares Chebyshev fit on such samples gives the
  coefficients and a held-out conditioning check;
* on the boundary segments u = i t and u = K + i t, which map onto E; the
  expression is again real there, so the zeros are located by sign
  changes and refined by Brent's method directly on the theta formula.

The returned polynomials are rebuilt from those zeros (product form),
which stays accurate at degrees where the extrapolated fit does not.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.optimize import brentq

from .errors import (
    BranchMismatchError,
    ConditioningError,
    DomainError,
    PartitionError,
    ZeroCountError,
)
from .frame import (
    Branch,
    CaseSelection,
    EllipticFrame,
    TwoIntervalSet,
    classify_case,
    classify_even_case,
    inverse_map,
    map_x,
)
from .polynomial import MonicPolynomial, extract_zeros, scan_grid
from .theta import theta

log = logging.getLogger(__name__)

FIT_DOMAIN = (-3.0, 3.0)
FIT_TOL = 1e-9
PELL_TOL = 1e-9
SCAN_FACTOR = 16

__all__ = [
    "FactorPair",
    "PellResidual",
    "ExtremalSolution",
    "EvenSolution",
    "DegenerateFamily",
    "synthesize_odd",
    "synthesize_even",
    "synthesize_degenerate",
    "extract_zeros",
    "moment_residuals",
    "pell_residual",
    "zero_split",
]


# ---------------------------------------------------------------- theta forms


@dataclass(frozen=True)
class ThetaForm:
    """R(u)^power (T(u + shift)/T(u))^tpow and its mirror with -power, -shift.

    R(u) = H(rho - u) / H(rho + u).  ``kind`` names T (Theta or Theta1).
    """

    frame: EllipticFrame
    power: int
    shift: float
    kind: str = "Theta"
    tpow: int = 1

    def pair(self, u):
        fr = self.frame
        u = np.asarray(u, dtype=complex)
        n = fr.nome
        log_r = np.log(theta("H", fr.rho - u, n)) - np.log(theta("H", fr.rho + u, n))
        a = self.power * log_r
        b = -a
        if self.tpow:
            t0 = np.log(theta(self.kind, u, n))
            a = a + self.tpow * (np.log(theta(self.kind, u + self.shift, n)) - t0)
            b = b + self.tpow * (np.log(theta(self.kind, u - self.shift, n)) - t0)
        return np.exp(a), np.exp(b)


def _s1(u, frame: EllipticFrame):
    """sqrt((x+1)(x-beta)(x-1)/(x-alpha)) up to a constant, as an analytic function of u.

    Negative for x < -1 and positive for x > 1 on real u.
    """
    s, c, d = frame.sncndn(np.asarray(u, dtype=complex))
    const = 2.0 * frame.sn_rho * frame.cn_rho / frame.dn_rho
    return const * s * c * d / (s * s - frame.sn_rho**2)


def _s2(u, frame: EllipticFrame):
    """sqrt((x+1)(x-alpha)(x-1)/(x-beta)) up to a constant."""
    x = map_x(np.asarray(u, dtype=complex), frame)
    return _s1(u, frame) * (x - frame.alpha) / (x - frame.beta)


def _divisor(which):
    return _s1 if which == 1 else _s2


class _Expr:
    """A real-on-the-boundary closed form, callable in u and in x on E."""

    def __init__(self, frame: EllipticFrame, fn, degree: int, label: str):
        self.frame = frame
        self.fn = fn
        self.degree = degree
        self.label = label

    def at_u(self, u):
        return self.fn(np.asarray(u, dtype=complex))

    def on_set(self, x):
        """Values at real x in E (the imaginary part vanishes up to rounding)."""
        x = np.asarray(x, dtype=float)
        u = inverse_map(np.atleast_1d(x), self.frame)
        v = self.at_u(u)
        out = v.real
        return out[0] if np.ndim(x) == 0 else out

    def outside(self, x):
        x = np.asarray(x, dtype=float)
        u = inverse_map(x, self.frame).real
        return self.at_u(u + 0j).real


def _odd_exprs(m, frame, which):
    N = 2 * m + 2
    form = ThetaForm(frame, m + 1, N * frame.rho, "Theta" if which == 1 else "Theta1", 1)
    div = _divisor(which)

    def V(u):
        a, b = form.pair(u)
        return a + b

    def U(u):
        a, b = form.pair(u)
        return (b - a) / div(u, frame)

    return _Expr(frame, U, m, "U"), _Expr(frame, V, m + 1, "V")


def _even_expr(m, frame, which):
    N = 2 * m + 1
    # first formula (Theta1, divisor S2) for p even, second (Theta, S1) for p odd
    form = ThetaForm(frame, N, N * frame.rho, "Theta" if which == 1 else "Theta1", 2)
    div = _divisor(which)

    def f(u):
        a, b = form.pair(u)
        return (a - b) / div(u, frame)

    return _Expr(frame, f, 2 * m, "f")


def _degenerate_exprs(m, frame):
    N = 2 * m + 2
    form = ThetaForm(frame, N, 0.0, tpow=0)

    def phi(u):
        a, b = form.pair(u)
        x = map_x(u, frame)
        return (a - b) / (_s1(u, frame) * (x - frame.alpha))

    def M(u):
        a, b = form.pair(u)
        return a + b

    return _Expr(frame, phi, 2 * m, "phi"), _Expr(frame, M, N, "M")


# ------------------------------------------------------------ fitting & zeros


@dataclass(frozen=True)
class FitReport:
    coeffs: np.ndarray
    heldout_residual: float


def _fit_nodes(count):
    t = np.cos(np.pi * (np.arange(count) + 0.5) / count)
    right = 2.0 + t  # (1, 3)
    return np.concatenate([-right[::-1], right])


def fit_monic(expr: _Expr, tol: float = FIT_TOL) -> FitReport:
    """Least-squares Chebyshev fit of ``expr`` sampled at |x| in (1, 3).

    Uses deg+1 nodes per side (2x oversampling) and checks the fit at the
    midpoints between nodes.  Raises :class:`ConditioningError` when the
    held-out residual, relative to the sample scale, exceeds ``tol``.
    """
    deg = expr.degree
    if deg == 0:
        return FitReport(np.ones(1), 0.0)
    count = deg + 1
    xs = _fit_nodes(count)
    vals = expr.outside(xs)
    lo, hi = FIT_DOMAIN
    w = (2.0 * xs - (lo + hi)) / (hi - lo)
    cheb = C.chebfit(w, vals, deg)
    mids = 0.5 * (xs[1:] + xs[:-1])
    mids = mids[np.abs(mids) > 1.0]
    check = expr.outside(mids)
    wm = (2.0 * mids - (lo + hi)) / (hi - lo)
    scale = max(float(np.max(np.abs(vals))), float(np.max(np.abs(check))), 1e-300)
    resid = float(np.max(np.abs(C.chebval(wm, cheb) - check))) / scale
    if resid > tol:
        raise ConditioningError(f"{expr.label}: held-out fit residual {resid:.3g} exceeds {tol:.3g}")
    power = np.polynomial.Chebyshev(cheb, domain=[lo, hi]).convert(kind=np.polynomial.Polynomial)
    desc = power.coef[::-1]
    desc = desc / desc[0]
    return FitReport(desc, resid)


def _interior_grid(lo, hi, count):
    """Chebyshev points strictly inside (lo, hi), plus geometric points towards both ends.

    The ends themselves are not usable (a pole of the parameterization or a
    zero of the divisor), so zeros very close to them are caught by the
    geometric refinement.
    """
    g = scan_grid(count + 2, lo, hi)[1:-1]
    d = (hi - lo) * np.logspace(-9, -3, 13)
    g = np.unique(np.concatenate([g, lo + d, hi - d]))
    # on very short intervals the smallest offsets round onto the ends
    return g[(g > lo) & (g < hi)]


def zeros_on_set(expr: _Expr, set: TwoIntervalSet, factor: int = SCAN_FACTOR, pinned=()):
    """Zeros of the closed form inside E by sign changes and Brent refinement.

    ``pinned`` lists zeros known to sit at a gap endpoint, where the
    boundary parameterization has a pole and cannot be scanned.
    """
    roots = list(pinned)
    count = max(factor * max(expr.degree, 1), 32)
    for lo, hi in set.intervals:
        g = _interior_grid(lo, hi, count)
        v = expr.on_set(g)
        # an exact 0 from the theta form only occurs where the parameterization
        # breaks down next to an endpoint; true zeros are bracketed by neighbours
        keep = np.isfinite(v) & (v != 0.0)
        g, v = g[keep], v[keep]
        for i in range(g.size - 1):
            if v[i] * v[i + 1] < 0.0:
                roots.append(brentq(lambda t: float(expr.on_set(t)), g[i], g[i + 1], xtol=1e-15, rtol=1e-15))
    roots = np.sort(np.array(roots, dtype=float))
    if roots.size != expr.degree:
        raise ZeroCountError(f"{expr.label}: found {roots.size} zeros on E, expected {expr.degree}")
    return roots


def _build(expr: _Expr, set: TwoIntervalSet, check_fit: bool = True, pinned=()):
    fit = fit_monic(expr) if check_fit else None
    if expr.degree == 0:
        return MonicPolynomial.one(), fit
    z = zeros_on_set(expr, set, pinned=pinned)
    return MonicPolynomial.from_roots(z), fit


def zero_split(zeros, set: TwoIntervalSet):
    """Counts of zeros in [-1, alpha], in the gap, and in [beta, 1]."""
    z = np.asarray(zeros, dtype=float)
    return (int(np.sum(z <= set.alpha)), int(np.sum((z > set.alpha) & (z < set.beta))), int(np.sum(z >= set.beta)))


# ----------------------------------------------------------------- residuals


@dataclass(frozen=True)
class PellResidual:
    """LHS of a Pell-type identity reduced to A x + B.

    ``excess`` is the largest degree >= 2 coefficient divided by the largest
    coefficient of either product on the left.
    """

    equation: str
    A: float
    B: float
    excess: float

    def ok(self, tol: float = PELL_TOL) -> bool:
        return self.excess <= tol


def _linear_factors(equation, set):
    a, b = set.alpha, set.beta
    table = {
        "5_1": ((-1.0, b, 1.0), (a,)),
        "5_2": ((-1.0, a, 1.0), (b,)),
        "6_1": ((-1.0, b), (a, 1.0)),
        "6_2": ((-1.0, a), (b, 1.0)),
        # degenerate frame: M^2 - (x+1)(x-alpha)(x-beta)(x-1) phi^2 = const
        "M": ((), (-1.0, a, b, 1.0)),
    }
    return table[equation]


def pell_residual(first: MonicPolynomial, second: MonicPolynomial, set: TwoIntervalSet, equation: str) -> PellResidual:
    """Reduce w1 first^2 - w2 second^2 to A x + B (w1, w2 products of linear factors)."""
    r1, r2 = _linear_factors(equation, set)
    t1 = np.polymul(np.poly(r1), np.polymul(first.coeffs, first.coeffs))
    t2 = np.polymul(np.poly(r2), np.polymul(second.coeffs, second.coeffs))
    lhs = np.polysub(t1, t2)
    scale = max(float(np.max(np.abs(t1))), float(np.max(np.abs(t2))))
    head = lhs[:-2]
    excess = float(np.max(np.abs(head))) / scale if head.size else 0.0
    return PellResidual(equation, float(lhs[-2]), float(lhs[-1]), excess)


def moment_residuals(zeros, set: TwoIntervalSet, k: int | None = None) -> np.ndarray:
    """Stationarity residuals sum_pieces sign * int x^i dx, i = 0..n-1.

    ``k`` is the gap index: xi_1..xi_k <= alpha and beta <= xi_{k+2}, with
    at most xi_{k+1} in the open gap.  Raises :class:`PartitionError` if
    the zeros do not split that way.
    """
    z = np.sort(np.asarray(zeros, dtype=float))
    n = z.size
    left, gap, right = zero_split(z, set)
    if k is None:
        k = left
    if left != k or gap > 1:
        raise PartitionError(f"zeros do not split at gap index {k}: {left} left, {gap} in gap, {right} right")
    edges, signs = [], []
    for lo, hi in set.intervals:
        inner = z[(z > lo) & (z < hi)]
        pts = np.concatenate([[lo], inner, [hi]])
        for a, b in zip(pts[:-1], pts[1:]):
            mid = 0.5 * (a + b)
            edges.append((a, b))
            signs.append(-1.0 if np.sum(z > mid) % 2 else 1.0)
    res = np.zeros(n)
    for i in range(n):
        total = 0.0
        for (a, b), s in zip(edges, signs):
            total += s * (b ** (i + 1) - a ** (i + 1)) / (i + 1)
        res[i] = total
    return res


# ------------------------------------------------------------------ results


@dataclass(frozen=True)
class FactorPair:
    U: MonicPolynomial
    V: MonicPolynomial
    branch: Branch
    pell: PellResidual
    fits: tuple = ()


@dataclass(frozen=True)
class EvenSolution:
    f: MonicPolynomial
    P: MonicPolynomial
    Q: MonicPolynomial
    pell: PellResidual
    case: CaseSelection
    alternates: tuple = ()


@dataclass(frozen=True)
class DegenerateFamily:
    m: int
    gamma: float
    tau: float
    Bcoef: float
    f0: MonicPolynomial
    endpoint_solutions: tuple
    phi: MonicPolynomial
    M: MonicPolynomial


@dataclass
class ExtremalSolution:
    f: MonicPolynomial
    zeros: np.ndarray
    case: CaseSelection
    minimal_value: float
    pell: PellResidual | None
    moments: np.ndarray
    factors: FactorPair | None = None
    family: DegenerateFamily | None = None
    even: EvenSolution | None = None
    notes: list = field(default_factory=list)

    @property
    def degree(self) -> int:
        return self.f.degree

    @property
    def max_moment_residual(self) -> float:
        return float(np.max(np.abs(self.moments))) if self.moments.size else 0.0


# ---------------------------------------------------------------- synthesis


def _odd_attempt(m, frame, which, check_fit):
    U_expr, V_expr = _odd_exprs(m, frame, which)
    U, fu = _build(U_expr, frame.set, check_fit)
    V, fv = _build(V_expr, frame.set, check_fit)
    eq = "5_1" if which == 1 else "5_2"
    return U, V, pell_residual(U, V, frame.set, eq), (fu, fv)


def synthesize_odd(m: int, frame: EllipticFrame, case: CaseSelection | None = None,
                   tol_pell: float = PELL_TOL, check_fit: bool = True) -> FactorPair:
    """Factors U (degree m) and V (degree m+1) of the odd-degree minimizer n = 2m+1.

    p odd uses Theta and the identity (x+1)(x-beta)(x-1)U^2 - (x-alpha)V^2 = Ax+B;
    p even uses Theta1 and (x+1)(x-alpha)(x-1)U^2 - (x-beta)V^2 = Ax+B.  If the
    selected assignment fails the identity the other one is tried once.
    """
    if case is None:
        case = classify_case(m, frame)
    if case.branch is Branch.DEGENERATE:
        raise DomainError("degenerate frame: use synthesize_degenerate")
    order = (1, 2) if case.branch is Branch.ODD_P else (2, 1)
    failures = []
    for which in order:
        try:
            U, V, pell, fits = _odd_attempt(m, frame, which, check_fit)
        except ZeroCountError as exc:
            failures.append(str(exc))
            continue
        if pell.ok(tol_pell):
            if which != order[0]:
                log.warning("odd synthesis used the alternate theta assignment")
            branch = Branch.ODD_P if which == 1 else Branch.EVEN_P
            return FactorPair(U, V, branch, pell, fits)
        failures.append(f"Pell {pell.equation} excess {pell.excess:.3g}")
    raise BranchMismatchError("no theta assignment gave a Pell-exact pair: " + "; ".join(failures))


def expected_left_count(n: int, case: CaseSelection) -> int:
    """Number of zeros in [-1, alpha]; the rest lie in [beta, 1]."""
    return n - case.p


def _even_attempt(m, frame, which, check_fit, degenerate=False):
    expr = _even_expr(m, frame, which)
    # at sigma = 0 the Theta formula vanishes at alpha and the Theta1 one at beta
    pinned = ((frame.alpha if which == 1 else frame.beta),) if degenerate else ()
    f, fit = _build(expr, frame.set, check_fit, pinned)
    z = f.zeros
    P = MonicPolynomial.from_roots(z[1::2])
    Q = MonicPolynomial.from_roots(z[0::2])
    if degenerate:
        # which identity holds depends on how sigma = 0 was reached; report the better one
        pells = [pell_residual(P, Q, frame.set, eq) for eq in ("6_1", "6_2")]
        return f, P, Q, min(pells, key=lambda r: r.excess)
    eq = "6_2" if which == 1 else "6_1"
    return f, P, Q, pell_residual(P, Q, frame.set, eq)


def synthesize_even(m: int, frame: EllipticFrame, case: CaseSelection | None = None,
                    tol_pell: float = PELL_TOL, check_fit: bool = True) -> EvenSolution:
    """Minimizer of even degree n = 2m from the squared-theta formulas.

    (2m+1) rho = p K + sigma: p even uses Theta1 with the identity
    (x+1)(x-beta)P^2 - (x-alpha)(x-1)Q^2 = Ax+B, p odd uses Theta with
    (x+1)(x-alpha)P^2 - (x-beta)(x-1)Q^2 = Ax+B.  P carries the even-indexed
    zeros and Q the odd-indexed ones.  At sigma = 0 both formulas are
    built (each then has one zero pinned at a gap endpoint, alpha for the
    Theta formula and beta for the Theta1 one), the smaller L1 value is
    returned with the other kept in ``alternates``, and a RuntimeWarning
    is issued.
    """
    from .functional import l1_norm

    if case is None:
        case = classify_even_case(m, frame)
    if case.branch is Branch.DEGENERATE:
        warnings.warn(
            f"sigma = 0 for (2m+1) rho at n={2 * m}; returning the better of both formulas",
            RuntimeWarning,
            stacklevel=2,
        )
        built = []
        for which in (1, 2):
            try:
                built.append(_even_attempt(m, frame, which, check_fit, degenerate=True))
            except (ZeroCountError, ConditioningError) as exc:
                log.info("even degenerate formula %d rejected: %s", which, exc)
        if not built:
            raise BranchMismatchError("neither even-degree formula produced a valid polynomial")
        built.sort(key=lambda item: l1_norm(item[0], frame.set).value)
        f, P, Q, pell = built[0]
        return EvenSolution(f, P, Q, pell, case, tuple(b[0] for b in built[1:]))

    order = (1, 2) if case.branch is Branch.ODD_P else (2, 1)
    failures = []
    for which in order:
        try:
            f, P, Q, pell = _even_attempt(m, frame, which, check_fit)
        except ZeroCountError as exc:
            failures.append(str(exc))
            continue
        if pell.ok(tol_pell):
            return EvenSolution(f, P, Q, pell, case)
        failures.append(f"Pell {pell.equation} excess {pell.excess:.3g}")
    raise BranchMismatchError("no even-degree formula gave a Pell-exact pair: " + "; ".join(failures))


def degenerate_gamma(frame: EllipticFrame) -> float:
    """gamma = alpha + (2 sn rho cn rho / dn rho) Theta'(rho)/Theta(rho)."""
    from .theta import theta_Theta_logderiv

    c = 2.0 * frame.sn_rho * frame.cn_rho / frame.dn_rho
    return frame.alpha + c * theta_Theta_logderiv(frame.rho, frame.nome)


def synthesize_degenerate(m: int, frame: EllipticFrame, check_fit: bool = True) -> DegenerateFamily:
    """The one-parameter family (x - theta) phi(x), alpha <= theta <= beta, at sigma = 0.

    f0 = (x - gamma) phi is the canonical member, f1 and f2 pin the gap zero
    at alpha and beta.  M is the monic Chebyshev-type polynomial of degree
    2m+2 whose derivative is (2m+2) f0.
    """
    from .functional import closed_form_degenerate_value

    phi_expr, M_expr = _degenerate_exprs(m, frame)
    phi, _ = _build(phi_expr, frame.set, check_fit)
    Mz = zeros_on_set(M_expr, frame.set)
    if check_fit:
        fit_monic(M_expr)
    M = MonicPolynomial.from_roots(Mz)
    gamma = degenerate_gamma(frame)
    if not frame.alpha < gamma < frame.beta:
        raise DomainError(f"gamma={gamma!r} outside the gap")
    linear = lambda r: MonicPolynomial.from_roots([r])
    f0 = phi * linear(gamma)
    f1 = phi * linear(frame.alpha)
    f2 = phi * linear(frame.beta)
    cf = closed_form_degenerate_value(m, frame, strict=False)
    return DegenerateFamily(m, gamma, cf.tau, cf.Bcoef, f0, (f1, f2), phi, M)
