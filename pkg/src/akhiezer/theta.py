"""Jacobi theta functions H, H1, Theta, Theta1 by q-series.

Classical Jacobi notation in the argument u, with v = pi u / (2K)::

    H(u)      = theta_1(v, q)      (odd)
    H1(u)     = theta_2(v, q)      (even)
    Theta(u)  = theta_4(v, q)      (even)
    Theta1(u) = theta_3(v, q)      (even)

so that sn u = H(u) / (sqrt(k) Theta(u)).  Only ratios and logarithmic
derivatives matter to callers; the absolute normalization is that of the
standard q-series.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import Modulus, QuarterPeriods, quarter_periods
from .errors import ConvergenceError, DomainError

MAX_TERMS = 200
REL_STOP = 1e-17

# name -> (index of classical theta_j, sign picked up per real half period pi in v,
#          sign picked up per quasi-period pi*tau in v)
_KINDS = {
    "H": (1, -1.0, -1.0),
    "H1": (2, -1.0, 1.0),
    "Theta": (4, 1.0, -1.0),
    "Theta1": (3, 1.0, 1.0),
}


@dataclass(frozen=True)
class Nome:
    """Nome q = exp(-pi K'/K) together with the quarter periods it came from."""

    q: float
    K: float
    Kprime: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"nome must lie in (0, 1), got {self.q!r}")


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    truncation_bound: float


def nome_from_modulus(k: Modulus, periods: QuarterPeriods | None = None) -> Nome:
    if periods is None:
        periods = quarter_periods(k)
    return Nome(math.exp(-math.pi * periods.Kprime / periods.K), periods.K, periods.Kprime)


def _series(index, v, q):
    """Sum theta_index(v, q) for |Im v| already reduced; returns (value, tail bound)."""
    v = np.asarray(v, dtype=complex)
    y = np.abs(v.imag)
    if index in (3, 4):
        total = np.ones_like(v)
        sign = -1.0 if index == 4 else 1.0
        start = 1
    else:
        total = np.zeros_like(v)
        sign = -1.0 if index == 1 else 1.0
        start = 0
    running = np.maximum(np.abs(total), 1e-300)
    for n in range(start, MAX_TERMS):
        if index in (3, 4):
            expo = n * n
            term = 2.0 * sign**n * q**expo * np.cos(2 * n * v)
            nxt = 2.0 * q ** ((n + 1) ** 2) * np.cosh(2 * (n + 1) * y)
        else:
            expo = (n + 0.5) ** 2
            trig = np.sin if index == 1 else np.cos
            term = 2.0 * sign**n * q**expo * trig((2 * n + 1) * v)
            nxt = 2.0 * q ** ((n + 1.5) ** 2) * np.cosh((2 * n + 3) * y)
        total = total + term
        running = np.maximum(running, np.abs(total))
        bound = 2.0 * q**expo * np.cosh((2 * n + 1 if index in (1, 2) else 2 * n) * y)
        if np.all(bound < REL_STOP * running):
            ratio = q ** (2 * n + 3) * np.exp(2 * y)
            tail = np.where(ratio < 1, nxt / np.maximum(1 - ratio, 1e-300), np.inf)
            return total, tail
    raise ConvergenceError(f"theta series did not converge within {MAX_TERMS} terms")


def theta(kind: str, u, nome: Nome, with_bound: bool = False):
    """Evaluate one of H, H1, Theta, Theta1 at (array) u.

    The argument is first reduced: the real part modulo 2K (using the
    half-period sign), the imaginary part into [-K', K'] with the
    quasi-periodicity factor of u -> u + 2iK'.
    """
    index, real_sign, quasi_sign = _KINDS[kind]
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=complex)
    scale = math.pi / (2.0 * nome.K)
    v = u * scale

    # real half-period: v -> v - j*pi
    j = np.round(v.real / math.pi)
    v = v - j * math.pi
    factor = np.where(j % 2 == 0, 1.0, real_sign).astype(complex)

    # quasi-period: v0 = v - l*pi*tau with pi*tau = i*pi*K'/K
    pitau_im = math.pi * nome.Kprime / nome.K
    ell = np.round(v.imag / pitau_im)
    if np.any(ell != 0):
        v0 = v - 1j * ell * pitau_im
        # theta(v0 + l pi tau) = s^l q^{-l^2} exp(-2 i l v0) theta(v0)
        log_q = math.log(nome.q)
        factor = factor * np.where(ell % 2 == 0, 1.0, quasi_sign) * np.exp(
            -ell * ell * log_q - 2j * ell * v0
        )
        v = v0

    value, tail = _series(index, v, nome.q)
    value = factor * value
    tail = np.abs(factor) * tail
    if scalar:
        value, tail = complex(value), float(tail)
    if with_bound:
        return value, tail
    return value


def _wrap(kind):
    def fn(u, nome: Nome) -> ThetaValue:
        value, tail = theta(kind, complex(u), nome, with_bound=True)
        return ThetaValue(value, tail)

    fn.__name__ = f"theta_{kind}"
    fn.__doc__ = f"{kind}(u) by q-series, returned with an a posteriori tail bound."
    return fn


theta_H = _wrap("H")
theta_H1 = _wrap("H1")
theta_Theta = _wrap("Theta")
theta_Theta1 = _wrap("Theta1")


def theta_Theta_logderiv(u, nome: Nome):
    """Theta'(u) / Theta(u) for real u, from the term-wise differentiated series."""
    u = np.asarray(u, dtype=float)
    scale = math.pi / (2.0 * nome.K)
    v = u * scale
    q = nome.q
    num = np.zeros_like(v)
    den = np.ones_like(v)
    for n in range(1, MAX_TERMS):
        w = 2.0 * (-1.0) ** n * q ** (n * n)
        num = num - 2 * n * w * np.sin(2 * n * v)
        den = den + w * np.cos(2 * n * v)
        if abs(w) * 2 * n < REL_STOP:
            break
    else:
        raise ConvergenceError("theta derivative series did not converge")
    out = scale * num / den
    return float(out) if out.ndim == 0 else out
