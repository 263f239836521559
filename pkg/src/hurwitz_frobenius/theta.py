"""
Jacobi theta_1, Weierstrass p and the theta-normalized Dedekind eta on the
lattice generated by ``1`` and ``sigma``.

theta_1(u|sigma) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi u),
q = exp(i pi sigma).

The Weierstrass function of the lattice is

    p(z) = -(d/dz)^2 log theta_1(z) + C,   C = theta_1'''(0) / (3 theta_1'(0)),

so that its Laurent expansion at 0 has no constant term.
"""

from __future__ import annotations

import cmath
import math
from functools import cached_property

import numpy as np

from .errors import DomainError
from .series import TruncatedSeries

# Terms are dropped once |q^{(n+1/2)^2}| times the growth of sin/derivative
# factors falls below this bound.
TAIL_BOUND = 1e-18
MIN_IM_SIGMA = 0.05
POLE_TOL = 1e-10


class ThetaCache:
    """Precomputed data for one modulus ``sigma`` (immutable once built)."""

    def __init__(self, sigma):
        sigma = complex(sigma)
        if sigma.imag < MIN_IM_SIGMA:
            raise DomainError(f"Im sigma must be >= {MIN_IM_SIGMA}, got {sigma.imag}")
        self.sigma = sigma
        self.q = cmath.exp(1j * math.pi * sigma)

    def n_terms(self, im_u=0.0, deriv=0):
        """Number of q-series terms for |Im u| <= im_u and the given derivative order."""
        t = self.sigma.imag
        n = 0
        while True:
            a = n + 0.5
            log_term = (-math.pi * t * a * a + 2 * math.pi * a * abs(im_u)
                        + deriv * math.log((2 * n + 1) * math.pi))
            if n > 2 and log_term < math.log(TAIL_BOUND):
                return n + 1
            n += 1
            if n > 10000:
                raise DomainError("theta series does not converge at this argument")

    def _terms(self, n):
        k = np.arange(n)
        a = k + 0.5
        weights = 2.0 * (-1.0) ** k * np.exp(1j * math.pi * self.sigma * a * a)
        freqs = (2 * k + 1) * math.pi
        return weights, freqs

    def theta_derivs_at_zero(self, max_order):
        """[theta_1^{(j)}(0) for j = 0..max_order]."""
        n = self.n_terms(0.0, max_order)
        w, f = self._terms(n)
        out = np.zeros(max_order + 1, dtype=complex)
        for j in range(1, max_order + 1, 2):
            out[j] = np.sum(w * f ** j * (-1) ** ((j - 1) // 2))
        return out

    @cached_property
    def log_theta_over_u(self):
        """Even power series of log(theta_1(u) / (theta_1'(0) u)) at u = 0."""
        d = self.theta_derivs_at_zero(13)
        c = [d[j + 1] / math.factorial(j + 1) / d[1] for j in range(13)]
        return TruncatedSeries(c, 0).log()

    @cached_property
    def theta_prime_zero(self):
        return complex(self.theta_derivs_at_zero(1)[1])

    @cached_property
    def wp_constant(self):
        """C with p(z) = -(log theta_1)''(z) + C."""
        return 2.0 * self.log_theta_over_u.coefficient(2)

    @cached_property
    def invariants(self):
        """(g2, g3) read off the Laurent expansion of p at 0."""
        lt = self.log_theta_over_u
        g2 = -240.0 * lt.coefficient(4)
        g3 = -840.0 * lt.coefficient(6)
        return complex(g2), complex(g3)

    def reduce(self, z):
        """Translate ``z`` by a lattice vector into the cell centred at 0."""
        z = np.asarray(z, dtype=complex)
        s = self.sigma
        b = np.round(z.imag / s.imag)
        z = z - b * s
        a = np.round(z.real)
        return z - a


def theta1(u, cache, deriv=0):
    """theta_1(u | sigma) or its ``deriv``-th u-derivative (vectorized in u)."""
    u = np.asarray(u, dtype=complex)
    im = float(np.max(np.abs(u.imag))) if u.size else 0.0
    n = cache.n_terms(im, deriv)
    w, f = cache._terms(n)
    phase = deriv * math.pi / 2
    arg = np.multiply.outer(u, f) + phase
    return np.sum(w * f ** deriv * np.sin(arg), axis=-1)


def theta1_taylor(u, cache, order):
    """Taylor coefficients theta_1^{(j)}(u)/j!, j < order, along the last axis."""
    u = np.asarray(u, dtype=complex)
    im = float(np.max(np.abs(u.imag))) if u.size else 0.0
    n = cache.n_terms(im, order)
    w, f = cache._terms(n)
    base = np.multiply.outer(u, f)
    out = []
    for j in range(order):
        out.append(np.sum(w * f ** j * np.sin(base + j * math.pi / 2), axis=-1) / math.factorial(j))
    return np.stack(out, axis=-1)


def dedekind_eta_theta(sigma):
    """Principal cube root of theta_1'(0|sigma).

    This equals (2 pi)^{1/3} times the usual Dedekind eta up to a cube root
    of unity.
    """
    cache = sigma if isinstance(sigma, ThetaCache) else ThetaCache(sigma)
    return cmath.exp(cmath.log(cache.theta_prime_zero) / 3)


def log_eta_theta(sigma):
    """log of :func:`dedekind_eta_theta`: one third of the principal log of theta_1'(0)."""
    cache = sigma if isinstance(sigma, ThetaCache) else ThetaCache(sigma)
    return cmath.log(cache.theta_prime_zero) / 3


def _wp_pair(z, cache):
    """p and p' at points already reduced to the central cell."""
    t = theta1_taylor(z, cache, 4)
    th = t[..., 0]
    d1 = t[..., 1]
    d2 = 2.0 * t[..., 2]
    d3 = 6.0 * t[..., 3]
    r1 = d1 / th
    r2 = d2 / th
    r3 = d3 / th
    # (log th)'' = r2 - r1^2 ; (log th)''' = r3 - 3 r2 r1 + 2 r1^3
    wp0 = -(r2 - r1 * r1) + cache.wp_constant
    wp1 = -(r3 - 3 * r2 * r1 + 2 * r1 ** 3)
    return wp0, wp1


def wp_taylor(z, cache, order):
    """Taylor coefficients of p at ``z`` (last axis), from p(z), p'(z) and
    the differential equation p'' = 6 p^2 - g2/2."""
    z = cache.reduce(z)
    if np.any(np.abs(z) < POLE_TOL):
        raise DomainError("p has a pole at lattice points")
    p0, p1 = _wp_pair(z, cache)
    g2 = cache.invariants[0]
    c = [p0, p1]
    for k in range(0, order - 2):
        conv = sum(c[i] * c[k - i] for i in range(k + 1))
        rhs = 6.0 * conv - (0.5 * g2 if k == 0 else 0.0)
        c.append(rhs / ((k + 1) * (k + 2)))
    return np.stack(np.broadcast_arrays(*c[:order]), axis=-1)


def wp(z, cache, deriv=0):
    """p^{(deriv)}(z) on the lattice (1, sigma)."""
    c = wp_taylor(z, cache, deriv + 1)
    return c[..., deriv] * math.factorial(deriv)


def wp_derivs(z, cache, max_deriv):
    """[p^{(j)}(z) for j = 0..max_deriv] along the last axis."""
    c = wp_taylor(z, cache, max_deriv + 1)
    fact = np.array([math.factorial(j) for j in range(max_deriv + 1)], dtype=float)
    return c * fact


def wp_laurent(cache, order):
    """Laurent series of p at 0, tracked through ``x**(order-1)``."""
    g2, g3 = cache.invariants
    # p = z^-2 + sum_{k>=1} a_k z^{2k}
    kmax = max((order - 1) // 2, 0)
    a = {1: g2 / 20.0, 2: g3 / 28.0}
    for k in range(3, kmax + 1):
        a[k] = 3.0 / ((2 * k + 3) * (k - 2)) * sum(a[m] * a[k - 1 - m] for m in range(1, k - 1))
    coeffs = np.zeros(order + 2, dtype=complex)
    coeffs[0] = 1.0
    for k in range(1, kmax + 1):
        coeffs[2 * k + 2] = a[k]
    return TruncatedSeries(coeffs, -2)


def wp_sigma_derivs(z, cache, max_deriv):
    """d/dsigma of p^{(j)}(z|sigma) at fixed z, j = 0..max_deriv.

    Uses the heat equation d_sigma theta_1 = theta_1'' / (4 pi i) on the
    Taylor expansion of theta_1 at ``z``, so the result is exact up to
    series truncation.
    """
    z = cache.reduce(z)
    z = np.atleast_1d(z)
    order = max_deriv + 6
    out = []
    # d_sigma C: C = th'''(0) / (3 th'(0)).
    d0 = cache.theta_derivs_at_zero(5)
    dC = (d0[5] * d0[1] - d0[3] * d0[3]) / (3.0 * d0[1] ** 2) / (4j * math.pi)
    for zz in z:
        t = theta1_taylor(zz, cache, order)
        th = TruncatedSeries(t, 0)
        th_sigma = th.derivative().derivative() * (1.0 / (4j * math.pi))
        ratio = th_sigma / th
        dwp = -ratio.derivative().derivative()
        vals = [dwp.coefficient(j) * math.factorial(j) for j in range(max_deriv + 1)]
        vals[0] += dC
        out.append(vals)
    return np.array(out)
