"""
Genus-one coverings in the Hurwitz space H^_{1,N}(N).

lambda(z) = c_0 + sum_{j=2}^{N} c_j p^{(j-2)}(z | sigma)

on the torus C / (Z + sigma Z). The only pole is z = 0 (the point
infinity_1), of order N. ``dz`` is the normalized holomorphic differential.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateError, DomainError, NonSimpleStratumError, SearchFailure
from .genus0 import CONDITION_CAP, build_branch, check_separation, order_branches
from .series import DEFAULT_ORDER, TruncatedSeries, revert, schwarzian
from .theta import ThetaCache, wp_derivs, wp_laurent, wp_sigma_derivs, wp_taylor

GRID = 60
NEWTON_ITERS = 60
DEDUPE_TOL = 1e-8
GAUSS_NODES = 96


@dataclass(frozen=True, eq=False)
class CoveringG1:
    """A point of H^_{1,N}(N): modulus sigma and coefficients c_0, c_2..c_N."""

    sigma: complex
    c0: complex
    c: tuple
    order: int = DEFAULT_ORDER

    genus = 1

    def __post_init__(self):
        object.__setattr__(self, "sigma", complex(self.sigma))
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "c", tuple(complex(x) for x in self.c))
        if self.sigma.imag <= 0:
            raise DomainError("Im sigma must be positive")
        if len(self.c) < 1:
            raise DomainError("need at least c_2")
        if abs(self.c[-1]) <= 1e-12:
            raise DomainError("c_N must be nonzero")

    @property
    def N(self):
        return len(self.c) + 1

    @property
    def M(self):
        return self.N + 1

    @property
    def pole_profile(self):
        return (self.N,)

    @property
    def params(self):
        return (self.sigma, self.c0) + self.c

    def with_params(self, params):
        p = tuple(params)
        return CoveringG1(p[0], p[1], p[2:], self.order)

    def param_names(self):
        return ["sigma", "c0"] + [f"c{j}" for j in range(2, self.N + 1)]

    @cached_property
    def cache(self):
        return ThetaCache(self.sigma)

    # -- evaluation ---------------------------------------------------------

    def derivs(self, z, max_deriv):
        """[lambda^{(d)}(z) for d = 0..max_deriv] along the last axis."""
        w = wp_derivs(z, self.cache, max_deriv + self.N - 2)
        out = []
        for d in range(max_deriv + 1):
            acc = self.c0 if d == 0 else 0.0
            for j, cj in enumerate(self.c, start=2):
                acc = acc + cj * w[..., j - 2 + d]
            out.append(acc)
        return np.stack(out, axis=-1)

    def __call__(self, z):
        return self.derivs(z, 0)[..., 0]

    def lattice_distance(self, a, b):
        return float(np.abs(self.cache.reduce(np.asarray(a) - np.asarray(b))))

    def local_series(self, z0, order=None):
        """lambda(z0 + t) as a power series in t."""
        n = (order or self.order) + 2
        p = wp_taylor(z0, self.cache, n + self.N - 2)
        coeffs = np.zeros(n, dtype=complex)
        coeffs[0] = self.c0
        for j, cj in enumerate(self.c, start=2):
            d = j - 2
            for i in range(n):
                coeffs[i] += cj * math.factorial(i + d) / math.factorial(i) * p[i + d]
        return TruncatedSeries(coeffs, 0)

    def laurent_at_pole(self, order=None):
        """Laurent series of lambda at z = 0, tracked through z^{order-1}."""
        n = (order or self.order) + self.N
        w = wp_laurent(self.cache, n + self.N)
        acc = TruncatedSeries.constant(self.c0, n)
        for j, cj in enumerate(self.c, start=2):
            d = w
            for _ in range(j - 2):
                d = d.derivative()
            acc = acc + d * cj
        return acc.truncate(order or self.order)

    # -- critical points ------------------------------------------------------

    def _newton(self, z, iters):
        for _ in range(iters):
            d = self.derivs(z, 2)
            with np.errstate(all="ignore"):
                step = d[..., 1] / d[..., 2]
            step = np.where(np.isfinite(step), step, 0)
            # Damp steps longer than a third of the shorter period.
            cap = 0.3 * min(1.0, abs(self.sigma))
            big = np.abs(step) > cap
            step = np.where(big, step / np.abs(np.where(big, step, 1)) * cap, step)
            z = self.cache.reduce(z - step)
            z = np.where(np.abs(z) < 1e-8, z + 0.1 + 0.1j, z)
        return z

    def _search(self):
        g = (np.arange(GRID) + 0.5) / GRID
        a, b = np.meshgrid(g, g)
        z = self.cache.reduce((a + b * self.sigma).ravel())
        z = self._newton(z, NEWTON_ITERS)
        d = self.derivs(z, 2)
        with np.errstate(all="ignore"):
            step = np.abs(d[..., 1] / d[..., 2])
        ok = (step < 1e-10) & (np.abs(z) > 1e-6)
        found = []
        for zz in z[ok]:
            if all(self.lattice_distance(zz, f) > DEDUPE_TOL for f in found):
                found.append(complex(zz))
        if len(found) != self.M:
            raise SearchFailure(f"found {len(found)} critical points, expected {self.M}")
        return np.array(found)

    def branch_data(self, reference=None):
        """N + 1 simple critical points in the central cell with frames.

        Without ``reference`` a grid of Newton starts covers the fundamental
        domain; with it, Newton starts from the reference points and the
        ordering and square-root signs follow the reference.
        """
        if reference is None and "_branches" in self.__dict__:
            return self.__dict__["_branches"]
        if reference is None:
            z = self._search()
            ref_alpha = [None] * len(z)
        else:
            z = self._newton(np.array([b.z for b in reference]), 8)
            ref_alpha = [b.alpha for b in reference]
        zs = list(z)
        for i in range(len(zs)):
            for j in range(i):
                if self.lattice_distance(zs[i], zs[j]) < DEDUPE_TOL:
                    raise NonSimpleStratumError("critical points merged")
        out = [build_branch(complex(zz), self.local_series(zz), a) for zz, a in zip(zs, ref_alpha)]
        check_separation(out)
        if reference is None:
            out = order_branches(out)
            self.__dict__["_branches"] = out
        return out

    # -- infinity -------------------------------------------------------------

    @cached_property
    def pole_frame(self):
        """z(zeta_1) with zeta_1 = lambda^{-1/N}, principal N-th root."""
        ser = self.laurent_at_pole()
        A = ser.coefficient(-self.N)
        root = cmath.exp(cmath.log(A) / self.N)
        return revert(ser.power(-1, self.N, root=root))

    def infinity_factors(self):
        """[(k_1 + 1, h_1)] with h_1 = dz/dzeta_1 at infinity_1."""
        return [(self.N + 1, self.pole_frame.coefficient(1))]

    # -- kernel -----------------------------------------------------------------

    def kernel(self, u):
        """-(d/du)^2 log theta_1(u) = p(u) - C, the a-normalized Bergmann kernel."""
        return wp_derivs(u, self.cache, 0)[..., 0] - self.cache.wp_constant

    @property
    def projective_connection_z(self):
        """S_B in the flat coordinate z: -2 theta_1'''(0) / theta_1'(0)."""
        return -6.0 * self.cache.wp_constant

    def bergmann_value(self, branches, m, n):
        if m == n:
            raise DomainError("diagonal is singular; use proj_connection")
        bm, bn = branches[m], branches[n]
        return complex(self.kernel(bm.z - bn.z)) * bm.alpha * bn.alpha

    def bergmann_matrix(self, branches):
        M = len(branches)
        out = np.zeros((M, M), dtype=complex)
        for m in range(M):
            for n in range(m + 1, M):
                out[m, n] = out[n, m] = self.bergmann_value(branches, m, n)
        return out

    def proj_connection(self, branches, m):
        b = branches[m]
        return self.projective_connection_z * b.alpha ** 2 + schwarzian(b.frame)

    # -- periods and parameters ------------------------------------------------

    def a_cycle_integral(self, f=None, z0=None, nodes=GAUSS_NODES):
        """Integral of f(z) dz over z0 -> z0 + 1 (default f = lambda)."""
        if z0 is None:
            z0 = 0.5j * self.sigma.imag
        if abs(((z0.imag / self.sigma.imag) + 0.5) % 1.0 - 0.5) * self.sigma.imag < 1e-6:
            raise DomainError("integration path passes within 1e-6 of a pole")
        x, w = np.polynomial.legendre.leggauss(nodes)
        z = z0 + 0.5 * (x + 1.0)
        vals = self(z) if f is None else f(z)
        return complex(0.5 * np.sum(w * vals))

    def param_jacobian(self, branches=None):
        """d lambda_m / d(sigma, c_0, c_2..c_N) at fixed z_m."""
        branches = branches if branches is not None else self.branch_data()
        z = np.array([b.z for b in branches])
        w = wp_derivs(z, self.cache, self.N - 2)
        ws = wp_sigma_derivs(z, self.cache, self.N - 2)
        dsig = sum(cj * ws[:, j - 2] for j, cj in enumerate(self.c, start=2))
        cols = [dsig, np.ones(len(z), dtype=complex)]
        cols += [w[:, j - 2] for j in range(2, self.N + 1)]
        J = np.column_stack(cols)
        if np.linalg.cond(J) > CONDITION_CAP:
            raise DegenerateError("parameter Jacobian is near singular")
        return J

    def translate(self, eps):
        return CoveringG1(self.sigma, self.c0 + eps, self.c, self.order)

    def dilate(self, factor):
        return CoveringG1(self.sigma, self.c0 * factor, tuple(x * factor for x in self.c), self.order)
