"""
Genus-zero coverings: rational maps ``lambda(z)`` of the Riemann sphere.

Three parametrizations are supported:

* ``polynomial``: lambda = z^N + a_2 z^{N-2} + ... + a_N  (pole profile (N,))
* ``laurent``:    lambda = z^k + b_1 z^{k-1} + ... + b_N z^{-(N-k)}, b_N != 0
                  (pole profile (k, N-k), second pole at z = 0)
* ``rational``:   lambda = P(z) / prod_{s>=2} (z - p_s)^{k_s} with P monic of
                  degree N and no z^{N-1} term (pole profile (k_1, ..., k_l))

Internally every kind is stored as a monic numerator P and a list of finite
poles, so the critical point, frame and kernel code is shared.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegenerateError, DomainError, NonSimpleStratumError
from .series import DEFAULT_ORDER, TruncatedSeries, revert, schwarzian

KINDS = ("polynomial", "laurent", "rational")
ROOT_SEPARATION = 1e-9
VALUE_SEPARATION = 1e-8
RESIDUAL_TOL = 1e-10
CONDITION_CAP = 1e10


@dataclass(frozen=True, eq=False)
class BranchData:
    """A simple critical point z_m with its critical value and local frame.

    ``frame`` is the series z(x_m) with x_m = (lambda - lambda_m)^{1/2}.
    """

    z: complex
    lam: complex
    frame: TruncatedSeries
    second_deriv: complex
    local: TruncatedSeries = field(repr=False)

    @property
    def alpha(self):
        """dz/dx_m at x_m = 0."""
        return self.frame.coefficient(1)


def build_branch(z_m, local, ref_alpha=None):
    """Frame at a simple critical point from the Taylor series of lambda there.

    ``local`` is lambda(z_m + t) as a power series in t. The sign of
    dz/dx_m is the principal sqrt(2/lambda''), or the one closest to
    ``ref_alpha`` when given.
    """
    lam = local.coefficient(0)
    d = TruncatedSeries(local.coeffs[2:], 2)
    c2 = d.coefficient(2)
    if abs(c2) < 1e-13:
        raise NonSimpleStratumError(f"degenerate critical point at z = {z_m}")
    alpha = cmath.sqrt(1.0 / c2)
    if ref_alpha is not None and abs(alpha + ref_alpha) < abs(alpha - ref_alpha):
        alpha = -alpha
    x_of_t = d.power(1, 2, root=1.0 / alpha)
    frame = revert(x_of_t) + complex(z_m)
    return BranchData(complex(z_m), complex(lam), frame, 2.0 * c2, local)


def order_branches(branches, reference=None, distance=None):
    """Sort by (Re, Im) of the critical value, or match a reference list."""
    if reference is None:
        return sorted(branches, key=lambda b: (round(b.lam.real, 12), b.lam.imag))
    dist = distance or (lambda a, b: abs(a - b))
    cost = np.array([[dist(r.z, b.z) for b in branches] for r in reference])
    rows, cols = linear_sum_assignment(cost)
    return [branches[c] for c in cols[np.argsort(rows)]]


def check_separation(branches):
    lams = np.array([b.lam for b in branches])
    if len(lams) < 2:
        return
    scale = np.max(np.abs(lams))
    diff = np.abs(lams[:, None] - lams[None, :])
    np.fill_diagonal(diff, np.inf)
    if np.min(diff) <= VALUE_SEPARATION * scale:
        raise NonSimpleStratumError("critical values collide")


def _shift_poly(coeffs_high, z0, order):
    """Taylor coefficients (low first) of the polynomial at z0 + t."""
    out = []
    c = np.asarray(coeffs_high, dtype=complex)
    fact = 1.0
    for j in range(order):
        if len(c) == 0:
            out.append(0j)
        else:
            out.append(np.polyval(c, z0) / fact)
            c = np.polyder(c) if len(c) > 1 else np.array([], dtype=complex)
        fact *= j + 1
    return out


@dataclass(frozen=True, eq=False)
class CoveringG0:
    """A point of the genus-zero Hurwitz space H_{0,N}(k_1, ..., k_l)."""

    kind: str
    N: int
    params: tuple
    k: int | None = None
    pole_profile: tuple = ()
    order: int = DEFAULT_ORDER

    genus = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown kind {self.kind!r}")
        params = tuple(complex(p) for p in self.params)
        object.__setattr__(self, "params", params)
        N = self.N
        if self.kind == "polynomial":
            if N < 2 or len(params) != N - 1:
                raise DomainError("polynomial kind needs N >= 2 and params a_2..a_N")
            object.__setattr__(self, "pole_profile", (N,))
        elif self.kind == "laurent":
            if self.k is None or not 1 <= self.k <= N - 1 or len(params) != N:
                raise DomainError("laurent kind needs 1 <= k <= N-1 and params b_1..b_N")
            if abs(params[-1]) <= 1e-12:
                raise DomainError("b_N must be nonzero")
            object.__setattr__(self, "pole_profile", (self.k, N - self.k))
        else:
            prof = tuple(int(x) for x in self.pole_profile)
            if len(prof) < 1 or sum(prof) != N or min(prof) < 1:
                raise DomainError("pole profile must be positive and sum to N")
            object.__setattr__(self, "pole_profile", prof)
            if len(params) != len(prof) - 1 + N - 1:
                raise DomainError("rational kind needs params p_2..p_l, n_2..n_N")
            poles = params[: len(prof) - 1]
            if len(set(poles)) != len(poles):
                raise DomainError("finite poles must be distinct")
            for p in poles:
                if abs(np.polyval(self.numerator, p)) < 1e-12:
                    raise DomainError("numerator vanishes at a pole")

    # -- constructors -----------------------------------------------------

    @classmethod
    def polynomial(cls, a, **kw):
        """lambda = z^N + a[0] z^{N-2} + ... + a[-1]."""
        return cls("polynomial", len(a) + 1, tuple(a), **kw)

    @classmethod
    def laurent(cls, k, b, **kw):
        return cls("laurent", len(b), tuple(b), k=k, **kw)

    @classmethod
    def rational(cls, pole_profile, poles, numerator, **kw):
        prof = tuple(pole_profile)
        return cls("rational", sum(prof), tuple(poles) + tuple(numerator), pole_profile=prof, **kw)

    def with_params(self, params):
        return CoveringG0(self.kind, self.N, tuple(params), self.k, self.pole_profile, self.order)

    def param_names(self):
        N = self.N
        if self.kind == "polynomial":
            return [f"a{j}" for j in range(2, N + 1)]
        if self.kind == "laurent":
            return [f"b{j}" for j in range(1, N + 1)]
        return [f"p{s}" for s in range(2, len(self.pole_profile) + 1)] + [
            f"n{j}" for j in range(2, N + 1)]

    # -- internal representation -----------------------------------------

    @cached_property
    def numerator(self):
        """Coefficients of the monic numerator P, highest degree first."""
        if self.kind == "polynomial":
            return np.array([1.0, 0.0, *self.params], dtype=complex)
        if self.kind == "laurent":
            return np.array([1.0, *self.params], dtype=complex)
        nfin = len(self.pole_profile) - 1
        return np.array([1.0, 0.0, *self.params[nfin:]], dtype=complex)

    @cached_property
    def poles(self):
        """Finite poles as [(position, order)], i.e. the points infinity_s, s >= 2."""
        if self.kind == "polynomial":
            return []
        if self.kind == "laurent":
            return [(0j, self.N - self.k)]
        return list(zip(self.params[: len(self.pole_profile) - 1], self.pole_profile[1:]))

    @property
    def k1(self):
        return self.pole_profile[0]

    @property
    def M(self):
        return len(self.pole_profile) + self.N - 2

    def _denominator(self):
        q = np.array([1.0], dtype=complex)
        for p, k in self.poles:
            for _ in range(k):
                q = np.polymul(q, [1.0, -p])
        return q

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polyval(self.numerator, z) / np.polyval(self._denominator(), z)

    def critical_polynomial(self):
        """Polynomial whose roots are exactly the finite critical points."""
        P = self.numerator
        lin = np.array([1.0], dtype=complex)
        for p, _ in self.poles:
            lin = np.polymul(lin, [1.0, -p])
        acc = np.polymul(np.polyder(P), lin)
        for i, (p, k) in enumerate(self.poles):
            others = np.array([1.0], dtype=complex)
            for j, (r, _) in enumerate(self.poles):
                if j != i:
                    others = np.polymul(others, [1.0, -r])
            acc = np.polysub(acc, k * np.polymul(P, others))
        return np.trim_zeros(acc, "f")

    def local_series(self, z0, order=None):
        """lambda(z0 + t) as a power series in t (z0 not a pole)."""
        n = (order or self.order) + 2
        num = TruncatedSeries(_shift_poly(self.numerator, z0, n), 0)
        den = TruncatedSeries.constant(1.0, n)
        for p, k in self.poles:
            den = den * TruncatedSeries.from_poly([z0 - p, 1.0], n) ** k
        return num / den

    def pole_series(self, s, order=None):
        """lambda(p_s + t) as a Laurent series, s = 2..l."""
        if not 2 <= s <= len(self.pole_profile):
            raise DomainError(f"sheet index s={s} outside 2..{len(self.pole_profile)}")
        n = (order or self.order) + 2
        p, k = self.poles[s - 2]
        num = TruncatedSeries(_shift_poly(self.numerator, p, n), 0)
        den = TruncatedSeries.constant(1.0, n)
        for j, (r, kr) in enumerate(self.poles):
            if j != s - 2:
                den = den * TruncatedSeries.from_poly([p - r, 1.0], n) ** kr
        return (num / den).shift(-k)

    # -- critical data ----------------------------------------------------

    def branch_data(self, reference=None):
        """Simple critical points with frames; see module docstring.

        With ``reference`` (branch data of a nearby covering) the ordering
        and square-root signs follow the reference instead of the default
        convention, which keeps finite differences continuous.
        """
        if reference is None and "_branches" in self.__dict__:
            return self.__dict__["_branches"]
        R = self.critical_polynomial()
        roots = np.roots(R)
        dR = np.polyder(R)
        for _ in range(2):
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.polyval(R, roots) / np.polyval(dR, roots)
            roots = roots - np.where(np.isfinite(step), step, 0)
        if len(roots) != self.M:
            raise NonSimpleStratumError(f"expected {self.M} critical points, found {len(roots)}")
        scale = max(1.0, float(np.max(np.abs(roots)))) if len(roots) else 1.0
        if len(roots) > 1:
            sep = np.abs(roots[:, None] - roots[None, :])
            np.fill_diagonal(sep, np.inf)
            if np.min(sep) <= ROOT_SEPARATION * scale:
                raise NonSimpleStratumError("critical point of multiplicity > 1")
        size = np.polyval(np.abs(R), np.abs(roots))
        if np.any(np.abs(np.polyval(R, roots)) > RESIDUAL_TOL * size):
            raise NonSimpleStratumError("critical point did not converge")
        ref_alpha = [None] * len(roots)
        if reference is not None:
            order = order_branches(
                [BranchData(r, 0j, None, 0j, None) for r in roots], reference)
            roots = np.array([b.z for b in order])
            ref_alpha = [b.alpha for b in reference]
        out = [build_branch(r, self.local_series(r), a) for r, a in zip(roots, ref_alpha)]
        check_separation(out)
        if reference is None:
            out = order_branches(out)
            self.__dict__["_branches"] = out
        return out

    def infinity_frame(self, s, order=None):
        """z(zeta_s) near infinity_s with zeta_s = lambda^{-1/k_s}, s >= 2.

        The k_s-th root is principal, so dz/dzeta_s at 0 is the principal
        k_s-th root of the leading Laurent coefficient of lambda there.
        """
        ser = self.pole_series(s, order)
        p, k = self.poles[s - 2]
        A = ser.coefficient(-k)
        root = cmath.exp(cmath.log(A) / k)
        zeta = ser.power(-1, k, root=root)
        return revert(zeta) + p

    def infinity_factors(self):
        """[(k_s + 1, dz/dzeta_s at 0) for s = 2..l]."""
        out = []
        for s in range(2, len(self.pole_profile) + 1):
            k = self.pole_profile[s - 1]
            out.append((k + 1, self.infinity_frame(s).coefficient(1)))
        return out

    # -- kernel quantities ------------------------------------------------

    def bergmann_value(self, branches, m, n):
        """b_mn(P_m, P_n) = alpha_m alpha_n / (z_m - z_n)^2."""
        if m == n:
            raise DomainError("diagonal is singular; use proj_connection")
        bm, bn = branches[m], branches[n]
        return bm.alpha * bn.alpha / (bm.z - bn.z) ** 2

    def bergmann_matrix(self, branches):
        z = np.array([b.z for b in branches])
        a = np.array([b.alpha for b in branches])
        dz = z[:, None] - z[None, :]
        np.fill_diagonal(dz, 1.0)
        out = np.outer(a, a) / dz ** 2
        np.fill_diagonal(out, 0.0)
        return out

    def proj_connection(self, branches, m):
        """S_B(x_m) at x_m = 0; S_B vanishes in the global chart z."""
        return schwarzian(branches[m].frame)

    def param_jacobian(self, branches=None):
        """d lambda_m / d params at fixed z_m (lambda'(z_m) = 0)."""
        branches = branches if branches is not None else self.branch_data()
        z = np.array([b.z for b in branches])
        lam = np.array([b.lam for b in branches])
        Q = np.polyval(self._denominator(), z)
        cols = []
        if self.kind == "rational":
            for p, k in self.poles:
                cols.append(k * lam / (z - p))
            first = 2
        else:
            first = 2 if self.kind == "polynomial" else 1
        for j in range(first, self.N + 1):
            cols.append(z ** (self.N - j) / Q)
        J = np.column_stack(cols)
        if np.linalg.cond(J) > CONDITION_CAP:
            raise DegenerateError("parameter Jacobian is near singular")
        return J

    # -- symmetries of the base --------------------------------------------

    def translate(self, eps):
        """The covering lambda + eps, renormalized."""
        P = self.numerator + np.concatenate([
            np.zeros(len(self.numerator) - len(self._denominator())), eps * self._denominator()])
        return self._from_numerator(P, [p for p, _ in self.poles])

    def dilate(self, factor):
        """The covering factor * lambda, rescaling z to keep the numerator monic."""
        k1 = self.k1
        r = cmath.exp(cmath.log(factor) / k1)
        P = self.numerator * np.array([r ** j for j in range(self.N + 1)])
        return self._from_numerator(P, [p * r for p, _ in self.poles])

    def _from_numerator(self, P, poles):
        if self.kind == "polynomial":
            c = P[1] / self.N
            P = _taylor_shift_high(P, -c)
            return self.with_params(P[2:])
        if self.kind == "laurent":
            return self.with_params(P[1:])
        c = P[1] / self.N
        P = _taylor_shift_high(P, -c)
        return self.with_params(tuple(p + c for p in poles) + tuple(P[2:]))


def _taylor_shift_high(P, c):
    """Coefficients (highest first) of P(w + c)."""
    low = _shift_poly(P, c, len(P))
    return np.array(low[::-1], dtype=complex)
