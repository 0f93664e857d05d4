"""Complete elliptic integrals and Jacobi elliptic functions.

K is computed with the arithmetic-geometric mean; sn, cn, dn with the
descending Landen (AGM) scheme for real arguments and the imaginary
addition theorem for complex ones.  Everything accepts numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

EDGE = 1e-12
TOL = 1e-15
AGM_CAP = 40
LANDEN_CAP = 32
POLE_RADIUS = 1e-10


@dataclass(frozen=True)
class Modulus:
    """Elliptic modulus ``k`` with its square and complement cached.

    Use :meth:`from_k` or :meth:`from_k2`; they reject moduli within
    ``EDGE`` of 0 or 1.  :meth:`complement` is allowed to produce a value
    equal to 1 in floating point because only its ``kprime`` is ever used
    for K.
    """

    k: float
    k2: float
    kprime: float

    def __post_init__(self):
        if not (0.0 < self.k <= 1.0 and 0.0 < self.kprime <= 1.0):
            raise DomainError(f"invalid modulus k={self.k!r}, k'={self.kprime!r}")

    @classmethod
    def from_k(cls, k: float) -> "Modulus":
        k = float(k)
        _check_band(k)
        return cls(k, k * k, math.sqrt((1.0 - k) * (1.0 + k)))

    @classmethod
    def from_k2(cls, k2: float, kprime2: float | None = None) -> "Modulus":
        """Build from ``k**2``; pass ``kprime2`` when it is known without cancellation."""
        k2 = float(k2)
        if not 0.0 < k2 < 1.0:
            raise DomainError(f"k^2 must lie in (0, 1), got {k2!r}")
        if kprime2 is None:
            kprime2 = 1.0 - k2
        k = math.sqrt(k2)
        _check_band(k)
        return cls(k, k2, math.sqrt(kprime2))

    def complement(self) -> "Modulus":
        return Modulus(self.kprime, self.kprime * self.kprime, self.k)


def _check_band(k):
    if not (EDGE <= k <= 1.0 - EDGE):
        raise DomainError(f"modulus k={k!r} outside ({EDGE}, 1-{EDGE})")


@dataclass(frozen=True)
class QuarterPeriods:
    K: float
    Kprime: float


def agm(a: float, b: float) -> float:
    for _ in range(AGM_CAP):
        if abs(a - b) <= TOL * a:
            return a
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    raise ConvergenceError(f"AGM did not converge in {AGM_CAP} steps")


def complete_K(k: Modulus) -> float:
    """Complete elliptic integral of the first kind, K(k) = pi / (2 AGM(1, k'))."""
    if not isinstance(k, Modulus):
        k = Modulus.from_k(k)
    return math.pi / (2.0 * agm(1.0, k.kprime))


def quarter_periods(k: Modulus) -> QuarterPeriods:
    return QuarterPeriods(complete_K(k), complete_K(k.complement()))


def _landen_chain(k: Modulus):
    a = [1.0]
    c = [k.k]
    b = k.kprime
    for _ in range(LANDEN_CAP):
        if c[-1] <= TOL * a[-1]:
            return a, c
        an = 0.5 * (a[-1] + b)
        c.append(0.5 * (a[-1] - b))
        b = math.sqrt(a[-1] * b)
        a.append(an)
    raise ConvergenceError(f"Landen descent exceeded {LANDEN_CAP} levels")


def _sncndn_real(x, k: Modulus, K: float):
    x = np.asarray(x, dtype=float)
    x = x - 4.0 * K * np.round(x / (4.0 * K))
    a, c = _landen_chain(k)
    n = len(a) - 1
    if n == 0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    phi = (2.0**n) * a[n] * x
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[j] / a[j] * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    # k'^2 + k^2 cn^2 has no cancellation, unlike 1 - k^2 sn^2
    dn = np.sqrt(k.kprime * k.kprime + k.k2 * cn * cn)
    return sn, cn, dn


def jacobi_sn_cn_dn(u, k: Modulus, periods: QuarterPeriods | None = None):
    """Return ``(sn u, cn u, dn u)`` for real or complex ``u``.

    Complex arguments use the addition theorem with the complementary
    modulus for the imaginary part.  Raises :class:`PoleError` when ``u``
    is within 1e-10 of a pole ``2jK + (2l+1)iK'``.
    """
    if not isinstance(k, Modulus):
        k = Modulus.from_k(k)
    if periods is None:
        periods = quarter_periods(k)
    K, Kp = periods.K, periods.Kprime
    scalar = np.ndim(u) == 0
    if not np.iscomplexobj(u):
        sn, cn, dn = _sncndn_real(u, k, K)
        if scalar:
            return float(sn), float(cn), float(dn)
        return sn, cn, dn

    u = np.asarray(u, dtype=complex)
    x = u.real
    y = u.imag
    shift = np.round(y / (2.0 * Kp))
    y = y - 2.0 * Kp * shift
    flip = np.where(shift % 2 == 0, 1.0, -1.0)

    xr = x - 2.0 * K * np.round(x / (2.0 * K))
    dist = np.hypot(xr, Kp - np.abs(y))
    if np.any(dist < POLE_RADIUS):
        raise PoleError("argument within 1e-10 of a pole of sn/cn/dn")

    s, c, d = _sncndn_real(x, k, K)
    s1, c1, d1 = _sncndn_real(y, k.complement(), Kp)
    den = c1 * c1 + k.k2 * s * s * s1 * s1
    sn = (s * d1 + 1j * c * d * s1 * c1) / den
    cn = flip * (c * c1 - 1j * s * d * s1 * d1) / den
    dn = flip * (d * c1 * d1 - 1j * k.k2 * s * c * s1) / den
    if scalar:
        return complex(sn), complex(cn), complex(dn)
    return sn, cn, dn


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F by the duplication theorem."""
    x = np.asarray(x, dtype=float).copy()
    y = np.asarray(y, dtype=float).copy()
    z = np.asarray(z, dtype=float).copy()
    for _ in range(60):
        mu = (x + y + z) / 3.0
        dx, dy, dz = 1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu
        if max(np.max(np.abs(dx)), np.max(np.abs(dy)), np.max(np.abs(dz))) < 8e-4:
            e2 = dx * dy - dz * dz
            e3 = dx * dy * dz
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / np.sqrt(mu)
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
    raise ConvergenceError("Carlson R_F duplication did not converge")


def inverse_sn(s, k: Modulus, periods: QuarterPeriods | None = None):
    """Return ``u`` in [0, K] with ``sn(u, k) = s`` for ``s`` in [0, 1].

    Incomplete integral F(arcsin s, k) through Carlson's R_F, polished by
    Newton steps on sn away from u = K where the map is flat.
    """
    if not isinstance(k, Modulus):
        k = Modulus.from_k(k)
    if periods is None:
        periods = quarter_periods(k)
    scalar = np.ndim(s) == 0
    s = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(s)) or np.any(s < 0.0) or np.any(s > 1.0):
        raise DomainError("inverse_sn requires 0 <= s <= 1")
    one_minus = (1.0 - s) * (1.0 + s)
    u = s * carlson_rf(one_minus, 1.0 - k.k2 * s * s, np.ones_like(s))
    u = np.where(s == 1.0, periods.K, u)
    for _ in range(2):
        sn, cn, dn = _sncndn_real(u, k, periods.K)
        slope = cn * dn
        ok = slope > 1e-4
        step = np.where(ok, (sn - s) / np.where(ok, slope, 1.0), 0.0)
        u = np.clip(u - step, 0.0, periods.K)
    if scalar:
        return float(u)
    return u
