import math

import numpy as np
import pytest

from akhiezer import Modulus, jacobi_sn_cn_dn, theta_H, theta_Theta, theta_Theta_logderiv
from akhiezer.theta import nome_from_modulus, theta

# mpmath jtheta(j, pi u / 2K, q) at k^2 = 1/2, ordered H, H1, Theta1, Theta
GOLDEN = [
    (0.3, (0.228102560680273, 0.88381256633517433, 1.0755035358072381, 0.92450380452842495)),
    (1.1, (0.73145417931223426, 0.54213351424534413, 0.97502561654545038, 1.024962762523414)),
]
KINDS = ("H", "H1", "Theta1", "Theta")


@pytest.fixture(scope="module")
def nome():
    return nome_from_modulus(Modulus.from_k2(0.5))


def test_nome_golden(nome):
    assert nome.q == pytest.approx(0.04321391826377225, rel=1e-14)


@pytest.mark.parametrize("u, expected", GOLDEN)
def test_theta_golden(nome, u, expected):
    got = [theta(kind, u, nome).real for kind in KINDS]
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-14)


def test_parity(nome, rng):
    u = rng.uniform(-3, 3, 1000) + 1j * rng.uniform(-1, 1, 1000)
    assert np.max(np.abs(theta("H", -u, nome) + theta("H", u, nome))) < 1e-13
    for kind in ("H1", "Theta", "Theta1"):
        assert np.max(np.abs(theta(kind, -u, nome) - theta(kind, u, nome))) < 1e-13


def test_real_period(nome, rng):
    u = rng.uniform(-3, 3, 1000)
    K = nome.K
    assert np.max(np.abs(theta("H", u + 2 * K, nome) + theta("H", u, nome))) < 1e-13
    assert np.max(np.abs(theta("H1", u + 2 * K, nome) + theta("H1", u, nome))) < 1e-13
    assert np.max(np.abs(theta("Theta", u + 2 * K, nome) - theta("Theta", u, nome))) < 1e-13
    assert np.max(np.abs(theta("Theta1", u + 2 * K, nome) - theta("Theta1", u, nome))) < 1e-13


@pytest.mark.parametrize("kind, sign", [("H", -1), ("H1", 1), ("Theta", -1), ("Theta1", 1)])
def test_quasi_period(nome, rng, kind, sign):
    # f(u + 2iK') = sign q^{-1} exp(-i pi u / K) f(u)
    u = rng.uniform(-2, 2, 1000) + 1j * rng.uniform(-0.5, 0.5, 1000) * nome.Kprime
    lhs = theta(kind, u + 2j * nome.Kprime, nome)
    rhs = sign / nome.q * np.exp(-1j * math.pi * u / nome.K) * theta(kind, u, nome)
    assert np.max(np.abs(lhs - rhs) / np.maximum(1, np.abs(rhs))) < 1e-12


def test_sn_as_theta_ratio(rng):
    k = Modulus.from_k(0.8)
    nome = nome_from_modulus(k)
    u = rng.uniform(-2, 2, 1000) + 1j * rng.uniform(-0.6, 0.6, 1000)
    sn, _, _ = jacobi_sn_cn_dn(u, k)
    ratio = theta("H", u, nome) / (math.sqrt(k.k) * theta("Theta", u, nome))
    assert np.max(np.abs(ratio - sn)) < 1e-12


def test_logderiv_matches_difference(nome, rng):
    u = rng.uniform(-2, 2, 50)
    h = 1e-5
    fd = (np.log(theta("Theta", u + h, nome).real) - np.log(theta("Theta", u - h, nome).real)) / (2 * h)
    assert np.max(np.abs(theta_Theta_logderiv(u, nome) - fd)) < 1e-8


def test_conjugate_phase_on_top_side(nome, rng):
    # Theta(iK' + s) / Theta(iK' - s) has unit modulus for real s
    s = rng.uniform(-2, 2, 200)
    r = theta("Theta", 1j * nome.Kprime + s, nome) / theta("Theta", 1j * nome.Kprime - s, nome)
    assert np.max(np.abs(np.abs(r) - 1)) < 1e-12


def test_wrappers_report_tail(nome):
    v = theta_H(0.4, nome)
    assert v.truncation_bound < 1e-15
    assert theta_Theta(0.0, nome).value.real > 0
