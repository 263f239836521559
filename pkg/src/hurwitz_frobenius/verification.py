"""
Finite-difference oracles for the identities satisfied by the Frobenius
structure on a Hurwitz space.

Derivatives in the canonical coordinates lambda_m are realized through the
inverse parameter Jacobian: the parameters are moved by
``+- h * (d params / d lambda) e_m`` and the function is re-evaluated. The
centered difference of any smooth f then approximates df/dlambda_m to
O(h^2), because the second-order drift of the other lambda_n cancels
between the two sides.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import frobenius as fb
from .descriptor import to_descriptor
from .errors import DegenerateError, NonSimpleStratumError, SearchFailure
from .genus0 import CoveringG0
from .genus1 import CoveringG1
from .theta import log_eta_theta

log = logging.getLogger(__name__)

GENUS0_TOL = 1e-5
GENUS1_TOL = 1e-4
REL_FLOOR = 1e-10
OFFDIAGONAL_NOTE = "d_n B_m = -b_mn^2/4 is checked for m != n only"


@dataclass
class FDConfig:
    step: float = 1e-5
    scheme: str = "centered"
    jacobian_condition_cap: float = 1e10

    def __post_init__(self):
        if not 1e-8 <= self.step <= 1e-2:
            raise ValueError("FD step must lie in [1e-8, 1e-2]")
        if self.scheme != "centered":
            raise ValueError("only the centered scheme is implemented")


@dataclass
class CheckRecord:
    name: str
    covering: dict
    residual: float
    tol: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(self.residual < self.tol)


@dataclass
class VerificationReport:
    seed: int
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def extend(self, records):
        self.checks.extend(records)

    def to_dict(self):
        return {
            "seed": self.seed,
            "checks": [
                {"name": c.name, "covering": c.covering, "residual": c.residual,
                 "tol": c.tol, "pass": c.passed}
                for c in self.checks
            ],
            "notes": list(self.notes),
            "pass": self.passed,
        }


def default_tol(cover):
    return GENUS1_TOL if cover.genus == 1 else GENUS0_TOL


def rel_residual(approx, exact, scale=None):
    """max |approx - exact| / max(max |exact| (or scale), REL_FLOOR)."""
    approx = np.asarray(approx)
    exact = np.asarray(exact)
    if approx.size == 0:
        return 0.0
    s = np.max(np.abs(exact)) if scale is None else scale
    return float(np.max(np.abs(approx - exact)) / max(s, REL_FLOOR))


# -- lambda derivatives ----------------------------------------------------------

def lambda_directions(cover, branches, cfg):
    """Columns d params / d lambda_m."""
    J = cover.param_jacobian(branches)
    if np.linalg.cond(J) > cfg.jacobian_condition_cap:
        raise DegenerateError("parameter Jacobian exceeds the condition cap")
    return np.linalg.inv(J)


def _step(branches, cfg):
    scale = max(1.0, max(abs(b.lam) for b in branches))
    return cfg.step * scale


def _evaluate_shifted(cover, branches, direction, h, f):
    p = np.array(cover.params, dtype=complex)
    out = []
    for sgn in (1, -1):
        c = cover.with_params(p + sgn * h * direction)
        out.append(f(c, c.branch_data(reference=branches)))
    return out


def _pair(cover, branches, direction, h, f):
    try:
        return _evaluate_shifted(cover, branches, direction, h, f), h
    except (NonSimpleStratumError, SearchFailure):
        h = h / 2
        log.info("stratum exit during FD; retrying with step %g", h)
        return _evaluate_shifted(cover, branches, direction, h, f), h


def lambda_gradient(f, cover, cfg=None, branches=None):
    """Array g with g[m] = d f / d lambda_m; f(cover, branches) -> array."""
    cfg = cfg or FDConfig()
    branches = branches if branches is not None else cover.branch_data()
    D = lambda_directions(cover, branches, cfg)
    h0 = _step(branches, cfg)
    out = []
    for m in range(len(branches)):
        (fp, fm), h = _pair(cover, branches, D[:, m], h0, f)
        out.append((np.asarray(fp) - np.asarray(fm)) / (2 * h))
    return np.array(out)


def d_dlambda(f, cover, m, cfg=None, branches=None):
    """d f / d lambda_m by centered differences, other lambda_n fixed."""
    cfg = cfg or FDConfig()
    branches = branches if branches is not None else cover.branch_data()
    D = lambda_directions(cover, branches, cfg)
    (fp, fm), h = _pair(cover, branches, D[:, m], _step(branches, cfg), f)
    return (np.asarray(fp) - np.asarray(fm)) / (2 * h)


def log_lambda_gradient(factors, cover, cfg=None, branches=None):
    """Gradient of sum_i w_i Log v_i where factors(cover, branches) -> [(w, v)].

    Differences are taken as Log(v_plus / v_minus), so the principal-branch
    cut of each factor never enters.
    """
    cfg = cfg or FDConfig()
    branches = branches if branches is not None else cover.branch_data()
    D = lambda_directions(cover, branches, cfg)
    h0 = _step(branches, cfg)
    out = []
    for m in range(len(branches)):
        (fp, fm), h = _pair(cover, branches, D[:, m], h0, factors)
        acc = sum(w * cmath.log(vp / vm) for (w, vp), (_, vm) in zip(fp, fm))
        out.append(acc / (2 * h))
    return np.array(out)


def _alphas(cover, branches):
    return np.array([b.alpha for b in branches])


def _bmatrix(cover, branches):
    return cover.bergmann_matrix(branches)


def _bq(cover, branches):
    return fb.bergmann_quantities(cover, branches)


def _lambdas(cover, branches):
    return np.array([b.lam for b in branches])


# -- checks ------------------------------------------------------------------------

def check_tau_definitions(cover, cfg=None, tol=None):
    """d log tau_B / d lambda_m = B_m and d log tau_I / d lambda_m = H_m."""
    cfg = cfg or FDConfig()
    tol = tol or default_tol(cover)
    br = cover.branch_data()
    desc = to_descriptor(cover)
    fd = fb.frobenius_data(cover, branches=br)
    dtb = log_lambda_gradient(fb.tau_b_factors, cover, cfg, br)
    dti = -0.5 * dtb
    return [
        CheckRecord("tauB_derivative", desc, rel_residual(dtb, fd.Bq), tol),
        CheckRecord("tauI_derivative", desc, rel_residual(dti, fd.H), tol),
    ]


def check_rauch(cover, cfg=None, tol=None):
    """d alpha_m / d lambda_n = b_mn alpha_n / 2 and the kernel Rauch formula."""
    cfg = cfg or FDConfig()
    tol = tol or default_tol(cover)
    br = cover.branch_data()
    desc = to_descriptor(cover)
    M = len(br)
    alpha = _alphas(cover, br)
    b = cover.bergmann_matrix(br)
    da = lambda_gradient(_alphas, cover, cfg, br)   # da[n][m] = d alpha_m / d lambda_n
    lhs, rhs = [], []
    for m in range(M):
        for n in range(M):
            if m != n:
                lhs.append(da[n][m])
                rhs.append(0.5 * b[m, n] * alpha[n])
    out = [CheckRecord("rauch_frame", desc, rel_residual(lhs, rhs), tol)]
    if M >= 3:
        db = lambda_gradient(_bmatrix, cover, cfg, br)  # db[m][n, k]
        lhs, rhs = [], []
        for m in range(M):
            for n in range(M):
                for k in range(M):
                    if len({m, n, k}) == 3:
                        lhs.append(db[m][n, k])
                        rhs.append(0.5 * b[n, m] * b[m, k])
        out.append(CheckRecord("rauch_kernel", desc, rel_residual(lhs, rhs), tol))
    return out


def _psi(cover, branches, phi):
    """phi/dx_m at P_m divided by sqrt(2): the square root of eta_mm with the frame's sign."""
    a = _alphas(cover, branches)
    if phi == "dz_over_z":
        a = a / np.array([b.z for b in branches])
    return a / math.sqrt(2.0)


def check_darboux_egoroff(cover, cfg=None, tol=None):
    """d_k gamma_mn = gamma_mk gamma_kn, e(gamma) = 0, E(gamma) = -gamma,
    and gamma_mn = d_n sqrt(eta_mm) / sqrt(eta_nn) for every compatible phi."""
    cfg = cfg or FDConfig()
    br = cover.branch_data()
    tol = tol or (1e-4 if cover.genus == 0 else 1e-3)
    desc = to_descriptor(cover)
    M = len(br)
    lam = _lambdas(cover, br)
    g = fb.rotation_coeffs(cover, br)
    dg = 0.5 * lambda_gradient(_bmatrix, cover, cfg, br)   # dg[k][m, n]
    out = []
    if M >= 3:
        lhs, rhs = [], []
        for k in range(M):
            for m in range(M):
                for n in range(M):
                    if len({k, m, n}) == 3:
                        lhs.append(dg[k][m, n])
                        rhs.append(g[m, k] * g[k, n])
        out.append(CheckRecord("gamma_triple", desc, rel_residual(lhs, rhs), tol))
    off = ~np.eye(M, dtype=bool)
    e_sum = dg.sum(axis=0)[off]
    scale = np.max(np.abs(dg[:, off]))
    out.append(CheckRecord("gamma_unity", desc, rel_residual(e_sum, 0 * e_sum, scale), tol))
    E_sum = np.tensordot(lam, dg, axes=1)[off]
    out.append(CheckRecord("gamma_euler", desc, rel_residual(E_sum, -g[off]), tol))
    phis = ["dz", "dz_over_z"] if getattr(cover, "kind", None) == "laurent" else [fb.default_phi(cover)]
    for phi in phis:
        psi = _psi(cover, br, phi)
        dpsi = lambda_gradient(lambda c, b, phi=phi: _psi(c, b, phi), cover, cfg, br)
        lhs = [dpsi[n][m] / psi[n] for m in range(M) for n in range(M) if m != n]
        rhs = [g[m, n] for m in range(M) for n in range(M) if m != n]
        out.append(CheckRecord(f"gamma_definition_{phi}", desc, rel_residual(lhs, rhs), tol))
    return out


def _match(base, new, value_map):
    """Reorder ``new`` branches so their critical values follow value_map(base)."""
    target = [value_map(b.lam) for b in base]
    order = []
    for t in target:
        order.append(min(range(len(new)), key=lambda i: abs(new[i].lam - t)))
    return [new[i] for i in order]


def check_symmetries(cover, eps=1e-3, delta=1e-3, tol=1e-10):
    """Translation and dilation of the base act on gamma and B_m as stated.

    gamma and B_m are unchanged under lambda -> lambda + eps; under
    lambda -> (1 + delta) lambda, gamma^2 and B_m scale by (1+delta)^-2 and
    (1+delta)^-1. Squares are compared because the frame sign is free.
    """
    br = cover.branch_data()
    desc = to_descriptor(cover)
    g = fb.rotation_coeffs(cover, br)
    B = fb.bergmann_quantities(cover, br)
    out = []
    tr = cover.translate(eps)
    tbr = _match(br, tr.branch_data(), lambda v: v + eps)
    out.append(CheckRecord("translation_gamma", desc,
                           rel_residual(fb.rotation_coeffs(tr, tbr) ** 2, g ** 2), tol))
    out.append(CheckRecord("translation_B", desc,
                           rel_residual(fb.bergmann_quantities(tr, tbr), B), tol))
    f = 1.0 + delta
    dl = cover.dilate(f)
    dbr = _match(br, dl.branch_data(), lambda v: f * v)
    out.append(CheckRecord("dilation_gamma", desc,
                           rel_residual(fb.rotation_coeffs(dl, dbr) ** 2, g ** 2 / f ** 2), tol))
    out.append(CheckRecord("dilation_B", desc,
                           rel_residual(fb.bergmann_quantities(dl, dbr), B / f), tol))
    return out


def check_bergmann_derivatives(cover, cfg=None, tol=None):
    """d_n B_m = -b_mn^2 / 4 (m != n), e(B_m) = 0, E(B_m) = -B_m."""
    cfg = cfg or FDConfig()
    tol = tol or default_tol(cover)
    br = cover.branch_data()
    desc = to_descriptor(cover)
    M = len(br)
    lam = _lambdas(cover, br)
    b = cover.bergmann_matrix(br)
    B = fb.bergmann_quantities(cover, br)
    dB = lambda_gradient(_bq, cover, cfg, br)   # dB[n][m] = d B_m / d lambda_n
    lhs = [dB[n][m] for m in range(M) for n in range(M) if m != n]
    rhs = [-0.25 * b[m, n] ** 2 for m in range(M) for n in range(M) if m != n]
    scale = np.max(np.abs(dB))
    e_sum = dB.sum(axis=0)
    E_sum = lam @ dB
    return [
        CheckRecord("bergmann_offdiagonal", desc, rel_residual(lhs, rhs), tol),
        CheckRecord("bergmann_unity", desc, rel_residual(e_sum, 0 * e_sum, scale), tol),
        CheckRecord("bergmann_euler", desc, rel_residual(E_sum, -B, max(scale * np.max(np.abs(lam)), np.max(np.abs(B)))), tol),
    ]


# -- random coverings -----------------------------------------------------------------

def annulus(rng, size=None, lo=0.5, hi=1.5):
    r = rng.uniform(lo, hi, size)
    a = rng.uniform(0, 2 * math.pi, size)
    return r * np.exp(1j * a)


def _margin_ok(cover, min_gap=0.05, cond_cap=1e7):
    br = cover.branch_data()
    lam = np.array([b.lam for b in br])
    if len(lam) > 1:
        d = np.abs(lam[:, None] - lam[None, :])
        np.fill_diagonal(d, np.inf)
        if np.min(d) < min_gap:
            return False
    return np.linalg.cond(cover.param_jacobian(br)) < cond_cap


def random_covering(family, rng, retries=50):
    """Sample a covering from ('polynomial', N), ('laurent', k, N) or ('genus1', N)."""
    kind = family[0]
    for _ in range(retries):
        try:
            if kind == "polynomial":
                N = family[1]
                c = CoveringG0.polynomial(annulus(rng, N - 1))
            elif kind == "laurent":
                k, N = family[1], family[2]
                c = CoveringG0.laurent(k, annulus(rng, N))
            elif kind == "genus1":
                N = family[1]
                sigma = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.8, 1.4))
                c = CoveringG1(sigma, annulus(rng), annulus(rng, N - 1))
            else:
                raise ValueError(f"unknown family {family!r}")
            if _margin_ok(c):
                return c
        except (NonSimpleStratumError, SearchFailure, DegenerateError):
            continue
    raise RuntimeError(f"could not sample a simple covering from {family}")


# -- G-function closed forms -------------------------------------------------------------

def branch_period(family):
    """Spacing 2 pi / D of the imaginary ambiguity of the G combinations.

    Every term is a rational multiple of a principal logarithm; D is a common
    denominator of those multiples (times 48 for the 1/48 of log J).
    """
    N = family[-1]
    lcm = 1
    for j in range(1, N + 2):
        lcm = lcm * j // math.gcd(lcm, j)
    D = 48 * 2 * lcm * (3 if family[0] == "genus1" else 1)
    return 2 * math.pi / D


def g_combination(family, cover):
    G, _ = fb.g_function(cover)
    if family[0] == "polynomial":
        return G
    t = fb.flat_coordinates(cover)
    if family[0] == "laurent":
        return G + t[-1] / 24.0
    N = cover.N
    return G + log_eta_theta(cover.cache) + (N + 1) / 24.0 * t[-1]


def g_combination_log_h(family, cover):
    """Genus-1 combination with t_N replaced by Log h_1.

    G depends on h_1 only through -((N+1)/24) Log h_1, while the residue
    formula makes t_N linear in h_1, so this is the form that is constant.
    """
    G, _ = fb.g_function(cover)
    h1 = cover.infinity_factors()[0][1]
    return G + log_eta_theta(cover.cache) + (cover.N + 1) / 24.0 * cmath.log(h1)


def spread_modulo(values, period):
    """Max pairwise distance, imaginary parts compared modulo ``period``."""
    v = np.asarray(values)
    worst = 0.0
    for i in range(len(v)):
        for j in range(i):
            d = v[i] - v[j]
            im = (d.imag + period / 2) % period - period / 2
            worst = max(worst, abs(complex(d.real, im)))
    return worst


def check_g_closed_forms(family, samples, rng, tol=None, combination=g_combination):
    """Constancy of G (M_{0;N}), G + t_N/24 (M_{0;k,N-k}) and
    G + log eta(t_0) + (N+1) t_N / 24 (M^_{1,N}) across random points."""
    tol = tol or (1e-5 if family[0] == "genus1" else 1e-7)
    vals = []
    for _ in range(samples):
        for _attempt in range(4):
            c = random_covering(family, rng)
            try:
                vals.append(combination(family, c))
                break
            except (NonSimpleStratumError, SearchFailure, DegenerateError):
                continue
        else:
            raise RuntimeError("stratum exit after 3 retries")
    name = "g_closed_form_" + "_".join(str(x) for x in family)
    if combination is not g_combination:
        name += "_" + combination.__name__.removeprefix("g_combination").strip("_")
    desc = {"family": list(family), "samples": samples}
    return [CheckRecord(name, desc, spread_modulo(vals, branch_period(family)), tol)]


# -- suites ---------------------------------------------------------------------------

GENUS0_FAMILIES = [("polynomial", 3), ("polynomial", 4), ("laurent", 1, 3), ("laurent", 2, 4)]
GENUS1_FAMILIES = [("genus1", 2), ("genus1", 3)]


def _cover_checks(cover, cfg, tol_scale):
    out = []
    out += check_tau_definitions(cover, cfg)
    out += check_rauch(cover, cfg)
    out += check_darboux_egoroff(cover, cfg)
    out += check_bergmann_derivatives(cover, cfg)
    out += check_symmetries(cover)
    for rec in out:
        rec.tol *= tol_scale
        rec.passed = bool(rec.residual < rec.tol)
    return out


def run_suite(suite="all", seed=0, cfg=None, tol_scale=1.0, g_samples=None):
    """Run the verification suite; returns a :class:`VerificationReport`."""
    if suite not in ("genus0", "genus1", "all"):
        raise ValueError(f"unknown suite {suite!r}")
    cfg = cfg or FDConfig()
    rng = np.random.default_rng(seed)
    report = VerificationReport(seed=seed, notes=[OFFDIAGONAL_NOTE])
    families = []
    if suite in ("genus0", "all"):
        families += GENUS0_FAMILIES
    if suite in ("genus1", "all"):
        families += GENUS1_FAMILIES
    for fam in families:
        cover = random_covering(fam, rng)
        report.extend(_cover_checks(cover, cfg, tol_scale))
    g_fams = []
    if suite in ("genus0", "all"):
        g_fams += [(("polynomial", 3), 20), (("laurent", 1, 2), 20)]
    if suite in ("genus1", "all"):
        g_fams += [(("genus1", 2), 10)]
    runs = [(fam, n, g_combination) for fam, n in g_fams]
    runs += [(fam, n, g_combination_log_h) for fam, n in g_fams if fam[0] == "genus1"]
    for fam, n, comb in runs:
        recs = check_g_closed_forms(fam, g_samples or n, rng, combination=comb)
        for rec in recs:
            rec.tol *= tol_scale
            rec.passed = bool(rec.residual < rec.tol)
        report.extend(recs)
    return report
