"""
Frobenius-manifold quantities at a point of a Hurwitz space.

Everything is assembled from the branch data of a covering: the metric
coefficients eta_mm, rotation coefficients gamma_mn = b_mn / 2, the
Hamiltonians H_m, the projective-connection quantities B_m = -S_B(x_m)/12,
closed-form logarithms of the Bergmann and isomonodromic tau-functions, the
Jacobian J and the G-function.

Logarithms of products are always sums of principal logarithms of the
individual factors. tau_B is only defined up to a 12th root of unity and G
up to an additive constant; only derivatives and differences of these
logarithms are meaningful.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError, IncompatibleDifferentialError
from .series import TruncatedSeries, residue
from .theta import log_eta_theta

PHI_TAGS = ("dz", "dz_over_z", "omega")
METRIC_FLOOR = 1e-12


def default_phi(cover):
    if cover.genus == 1:
        return "omega"
    return {"polynomial": "dz", "laurent": "dz_over_z"}.get(cover.kind, "dz")


def check_phi(cover, phi):
    if phi not in PHI_TAGS:
        raise IncompatibleDifferentialError(f"unknown primary differential {phi!r}")
    ok = {
        "omega": cover.genus == 1,
        "dz": cover.genus == 0 and cover.kind in ("polynomial", "rational"),
        "dz_over_z": cover.genus == 0 and cover.kind == "laurent",
    }[phi]
    if not ok:
        kind = "genus 1" if cover.genus == 1 else cover.kind
        raise IncompatibleDifferentialError(f"{phi} is not a primary differential for {kind} coverings")


@dataclass(frozen=True, eq=False)
class FrobeniusData:
    """Snapshot of the Frobenius structure at one covering."""

    lambdas: np.ndarray
    eta_diag: np.ndarray
    gamma: np.ndarray
    V: np.ndarray
    H: np.ndarray
    Bq: np.ndarray
    log_tau_B: complex
    log_tau_I: complex
    log_J: complex
    G: complex
    G_closed: complex
    h_factors: list
    f_factors: np.ndarray
    phi: str


# -- individual quantities ----------------------------------------------------

def metric_coeffs(cover, phi=None, branches=None):
    """eta_mm = Res_{P_m} phi^2 / d lambda, from the frame series.

    In the local parameter x_m, d lambda = 2 x_m dx_m, so the residue is that
    of (phi/dx_m)^2 / (2 x_m).
    """
    phi = phi or default_phi(cover)
    check_phi(cover, phi)
    branches = branches if branches is not None else cover.branch_data()
    out = []
    for b in branches:
        dz = b.frame.derivative()
        density = dz / b.frame if phi == "dz_over_z" else dz
        integrand = (density * density).shift(-1) * 0.5
        out.append(residue(integrand))
    eta = np.array(out)
    if np.any(np.abs(eta) < METRIC_FLOOR):
        raise DegenerateError("metric coefficient vanishes")
    return eta


def rotation_coeffs(cover, branches=None):
    """gamma_mn = b_mn(P_m, P_n) / 2 (zero on the diagonal, which is undefined)."""
    branches = branches if branches is not None else cover.branch_data()
    return 0.5 * cover.bergmann_matrix(branches)


def commutator_v(gamma, lambdas):
    """V = [Gamma, U]: V_mn = gamma_mn (lambda_n - lambda_m)."""
    lam = np.asarray(lambdas)
    return gamma * (lam[None, :] - lam[:, None])


def hamiltonians(gamma, lambdas):
    """H_m = 1/2 sum_{n != m} V_nm^2 / (lambda_m - lambda_n)."""
    lam = np.asarray(lambdas)
    V = commutator_v(gamma, lam)
    diff = lam[:, None] - lam[None, :]
    np.fill_diagonal(diff, 1.0)
    terms = V.T ** 2 / diff
    np.fill_diagonal(terms, 0.0)
    return 0.5 * terms.sum(axis=1)


def bergmann_quantities(cover, branches=None):
    """B_m = -S_B(x_m)|_{x_m=0} / 12."""
    branches = branches if branches is not None else cover.branch_data()
    return np.array([-cover.proj_connection(branches, m) / 12.0 for m in range(len(branches))])


def tau_b_factors(cover, branches=None):
    """(weight, value) pairs with log tau_B = sum weight * Log(value).

    Genus 0: value dz/dzeta_s with weight (k_s+1)/12 for s >= 2, dz/dx_m
    with weight -1/12. Genus 1 adds theta_1'(0) with weight 2/3 (twice the
    log of the cube-root eta) and uses h_1 for s = 1.
    """
    branches = branches if branches is not None else cover.branch_data()
    out = [(w / 12.0, h) for w, h in cover.infinity_factors()]
    out += [(-1.0 / 12.0, b.alpha) for b in branches]
    if cover.genus == 1:
        out.insert(0, (2.0 / 3.0, cover.cache.theta_prime_zero))
    return out


def log_tau_bergmann(cover, branches=None):
    factors = tau_b_factors(cover, branches)
    for _, v in factors:
        if abs(v) == 0:
            raise DegenerateError("zero factor in the Bergmann tau-function")
    return sum(w * cmath.log(v) for w, v in factors)


def g_function(cover, phi=None, branches=None):
    """(G assembled from tau_I and J, G from the closed formula)."""
    phi = phi or default_phi(cover)
    branches = branches if branches is not None else cover.branch_data()
    eta = metric_coeffs(cover, phi, branches)
    log_tau_b = log_tau_bergmann(cover, branches)
    log_j = 0.5 * sum(cmath.log(e) for e in eta)
    assembled = -0.5 * log_tau_b - log_j / 24.0
    closed = (sum(cmath.log(b.alpha) for b in branches)
              - sum(w * cmath.log(h) for w, h in cover.infinity_factors())
              - 0.5 * sum(cmath.log(e) for e in eta)) / 24.0
    if cover.genus == 1:
        closed -= log_eta_theta(cover.cache)
    return assembled, closed


def frobenius_data(cover, phi=None, branches=None):
    phi = phi or default_phi(cover)
    check_phi(cover, phi)
    branches = branches if branches is not None else cover.branch_data()
    lam = np.array([b.lam for b in branches])
    eta = metric_coeffs(cover, phi, branches)
    gamma = rotation_coeffs(cover, branches)
    V = commutator_v(gamma, lam)
    H = hamiltonians(gamma, lam)
    Bq = bergmann_quantities(cover, branches)
    log_tau_b = log_tau_bergmann(cover, branches)
    log_j = 0.5 * sum(cmath.log(e) for e in eta)
    G, G_closed = g_function(cover, phi, branches)
    return FrobeniusData(
        lambdas=lam,
        eta_diag=eta,
        gamma=gamma,
        V=V,
        H=H,
        Bq=Bq,
        log_tau_B=log_tau_b,
        log_tau_I=-0.5 * log_tau_b,
        log_J=log_j,
        G=G,
        G_closed=G_closed,
        h_factors=[h for _, h in cover.infinity_factors()],
        f_factors=np.array([b.alpha for b in branches]),
        phi=phi,
    )


# -- flat coordinates -----------------------------------------------------------

def _laurent_flat(cover, narrow=False):
    """Flat coordinates of M_{0;k,N-k}: [t_1, ..., t_N].

    t_mu (1 <= mu <= k-1) from the residue at infinity, t_{N-mu}
    (1 <= mu <= N-k) from the residue at 0, t_N from
    b_N = (-1)^N exp((N-k) t_N). With ``narrow`` the first family stops at
    mu < k-1 and the result has N-1 entries.
    """
    N, k = cover.N, cover.k
    b = cover.params
    order = N + 4
    t = {}
    # At z = infinity, w = 1/z: lambda = w^{-k} (1 + b_1 w + ... + b_N w^N).
    at_inf = TruncatedSeries.from_poly([1.0, *b], order + k, lowest=-k)
    top = k - 2 if narrow else k - 1
    for mu in range(1, top + 1):
        s = at_inf.power(mu, k, root=1.0)
        # Res_{z=inf} F dz/z = -[w^0] F(1/w)
        t[mu] = (-1) ** (mu + 1) * k / mu * (-s.coefficient(0))
    tN = cmath.log((-1) ** N * b[-1]) / (N - k)
    # At z = 0: (-1)^N lambda = (-1)^N (b_N + b_{N-1} z + ... + z^N) / z^{N-k}.
    num = [(-1) ** N * c for c in reversed([1.0, *b])]
    at_zero = TruncatedSeries.from_poly(num, order, lowest=0).shift(-(N - k))
    root = cmath.exp(tN)
    for mu in range(1, N - k + 1):
        s = at_zero.power(mu, N - k, root=root)
        t[N - mu] = (-1) ** mu * (N - k) / mu * s.coefficient(0)
    t[N] = tN
    return np.array([t[i] for i in sorted(t)])


def _genus1_flat(cover):
    """[t_0, ..., t_N]: sigma, the a-period of lambda dz, and residues at z = 0."""
    N = cover.N
    ser = cover.laurent_at_pole(order=2 * N + 6)
    A = ser.coefficient(-N)
    root = cmath.exp(cmath.log(A) / N)
    z = TruncatedSeries.variable(3 * N + 8)
    dlam = ser.derivative()
    t = [cover.sigma, cover.a_cycle_integral()]
    for mu in range(2, N + 1):
        s = ser.power(-(mu - 1), N, root=root)
        t.append(residue(z * s * dlam))
    return np.array(t)


def flat_coordinates(cover, narrow=False):
    if cover.genus == 1:
        return _genus1_flat(cover)
    if cover.kind == "laurent":
        return _laurent_flat(cover, narrow)
    raise DomainError("flat chart not implemented for this covering kind")


def flat_jacobian(cover, step=1e-6, narrow=False):
    """d t / d params by centered differences (t is holomorphic in params)."""
    p0 = np.array(cover.params, dtype=complex)
    cols = []
    for j in range(len(p0)):
        h = step * max(1.0, abs(p0[j]))
        dp = np.zeros_like(p0)
        dp[j] = h
        tp = flat_coordinates(cover.with_params(p0 + dp), narrow)
        tm = flat_coordinates(cover.with_params(p0 - dp), narrow)
        cols.append((tp - tm) / (2 * h))
    return np.column_stack(cols)


def jacobian_consistency(cover, phi=None, step=1e-6):
    """Compare |det(d lambda / d t)| with |prod eta_mm|^{1/2}.

    ``relative_modulus_error`` measures the stated identity. ``modulus_product``
    is |det(d lambda / d t)| |prod eta_mm|^{1/2}, which equals |det eta_ab|^{1/2}
    for the flat Gram matrix and is therefore constant on the manifold; it is
    the quantity that detects flatness independently of normalization. For
    laurent coverings the size of the narrow flat-coordinate range is
    reported alongside.
    """
    phi = phi or default_phi(cover)
    if cover.genus == 0 and cover.kind != "laurent":
        raise DomainError("flat chart not implemented for this covering kind")
    branches = cover.branch_data()
    eta = metric_coeffs(cover, phi, branches)
    root = np.prod(np.sqrt(eta))
    dlam = cover.param_jacobian(branches)
    dt = flat_jacobian(cover, step)
    if np.linalg.cond(dt) > 1e12:
        raise DegenerateError("flat coordinates are singular in the parameters")
    det = np.linalg.det(dlam) / np.linalg.det(dt)
    out = {
        "det_dlambda_dt": complex(det),
        "sqrt_prod_eta": complex(root),
        "residual": float(min(abs(det - root), abs(det + root))),
        "relative_modulus_error": float(abs(abs(det) - abs(root)) / abs(root)),
        "modulus_product": float(abs(det) * abs(root)),
    }
    if cover.genus == 0:
        narrow = flat_coordinates(cover, narrow=True)
        out["narrow_range_count"] = len(narrow)
        out["dimension"] = cover.M
    return out
