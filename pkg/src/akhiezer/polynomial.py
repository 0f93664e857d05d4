"""Monic polynomials and real-root isolation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.optimize import brentq

from .errors import DomainError, ZeroCountError

ROOT_XTOL = 1e-15
SCAN_MARGIN = 1e-9


@dataclass(frozen=True, eq=False)
class MonicPolynomial:
    """x^n + p_1 x^{n-1} + ... + p_n, coefficients in descending powers.

    When ``zeros`` is given (all n real zeros) evaluation uses the product
    form, which stays accurate on [-1, 1] at degrees where Horner's rule on
    the coefficients loses digits to cancellation.
    """

    coeffs: np.ndarray
    zeros: np.ndarray | None = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coefficient vector must be one-dimensional and non-empty")
        if c[0] != 1.0:
            raise DomainError(f"leading coefficient must be exactly 1, got {c[0]!r}")
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)
        if self.zeros is not None:
            z = np.sort(np.asarray(self.zeros, dtype=float))
            if z.size != c.size - 1:
                raise DomainError("zeros must list every root")
            object.__setattr__(self, "zeros", z)

    @classmethod
    def from_coeffs(cls, coeffs) -> "MonicPolynomial":
        """Normalize by the leading coefficient (idempotent on monic input)."""
        c = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
        if c.size == 0:
            raise DomainError("zero polynomial cannot be normalized")
        if c[0] == 1.0:
            return cls(c.copy())
        return cls(c / c[0])

    @classmethod
    def from_roots(cls, zeros) -> "MonicPolynomial":
        z = np.sort(np.asarray(zeros, dtype=float))
        c = np.poly(z) if z.size else np.ones(1)
        c[0] = 1.0
        return cls(c, z)

    @classmethod
    def one(cls) -> "MonicPolynomial":
        return cls(np.ones(1), np.zeros(0))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def normalized(self) -> "MonicPolynomial":
        return MonicPolynomial.from_coeffs(self.coeffs)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.zeros is not None:
            return np.prod(x[..., None] - self.zeros, axis=-1)
        return np.polyval(self.coeffs, x)

    def __mul__(self, other: "MonicPolynomial") -> "MonicPolynomial":
        c = np.polymul(self.coeffs, other.coeffs)
        c[0] = 1.0
        if self.zeros is not None and other.zeros is not None:
            return MonicPolynomial(c, np.concatenate([self.zeros, other.zeros]))
        return MonicPolynomial(c)

    def derivative_values(self, x):
        x = np.asarray(x, dtype=float)
        if self.zeros is not None and self.degree > 0:
            d = x[..., None] - self.zeros
            total = np.zeros(x.shape)
            for i in range(self.degree):
                total = total + np.prod(np.delete(d, i, axis=-1), axis=-1)
            return total
        return np.polyval(np.polyder(self.coeffs), x)

    def chebyshev(self) -> Chebyshev:
        """The same polynomial as a Chebyshev series on [-1, 1] (exact interpolation)."""
        n = self.degree
        if n == 0:
            return Chebyshev([1.0])
        return Chebyshev.interpolate(self, n)

    def to_list(self):
        return [float(c) for c in self.coeffs]


def scan_grid(n_points: int, lo: float, hi: float, extra=()) -> np.ndarray:
    """Chebyshev-Lobatto points on [lo, hi] (dense near the ends) plus ``extra``."""
    t = np.cos(np.pi * np.arange(n_points)[::-1] / (n_points - 1))
    grid = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t
    return np.unique(np.concatenate([grid, np.asarray(extra, dtype=float)]))


def isolate_zeros(func, grid, xtol: float = ROOT_XTOL) -> np.ndarray:
    """Real zeros of ``func`` bracketed by sign changes on ``grid``, refined by Brent."""
    values = np.asarray(func(grid), dtype=float)
    roots = []
    for i in range(grid.size):
        if values[i] == 0.0:
            roots.append(grid[i])
            continue
        if i + 1 < grid.size and values[i + 1] != 0.0 and values[i] * values[i + 1] < 0.0:
            r = brentq(lambda t: float(func(np.asarray(t))), grid[i], grid[i + 1], xtol=xtol, rtol=1e-15)
            roots.append(r)
    return np.array(roots, dtype=float)


def extract_zeros(f: MonicPolynomial, set=None, grid_factor: int = 16, check_simple: bool = True):
    """All real zeros of f, located by sign changes on a 16n-point grid.

    The grid spans [-1 - d, 1 + d] with d = 1e-9 (so zeros at +-1 are
    caught) and includes alpha and beta when a set is given.  Raises
    :class:`ZeroCountError` if fewer than ``degree`` sign changes are found
    or, with ``check_simple``, if |f'| at a zero is below 1e-8 of the scale.
    """
    n = f.degree
    if n < 1:
        raise DomainError("extract_zeros needs a nonconstant polynomial")
    count = max(grid_factor * n, 16)
    extra = []
    if set is not None:
        # each interval of E gets its own grid so short intervals are resolved
        extra = [set.alpha, set.beta]
        for lo, hi in set.intervals:
            extra.extend(scan_grid(count, lo, hi))
    grid = scan_grid(count, -1.0 - SCAN_MARGIN, 1.0 + SCAN_MARGIN, extra)
    roots = isolate_zeros(f, grid)
    if roots.size < n:
        raise ZeroCountError(f"found {roots.size} real zeros of a degree-{n} polynomial in [-1, 1]")
    if check_simple:
        scale = max(float(np.max(np.abs(f(grid)))), 1e-300)
        slope = np.abs(f.derivative_values(roots))
        if np.any(slope <= 1e-8 * scale):
            raise ZeroCountError("multiple zero detected (derivative vanishes at a root)")
    return np.sort(roots)
