"""Seeded check batteries behind ``ellbeta suite`` and the acceptance tests.

Every battery returns a list of :class:`Case` records.  Random draws come from
a generator seeded by (seed, group name), so a fixed seed reproduces every
case exactly; only wall times vary between runs.
"""

import cmath
import concurrent.futures
import dataclasses
import math
import time
import zlib

import numpy as np

from .gammas import (
    b22,
    double_sine,
    double_sine_limit_check,
    elliptic_gamma,
    modified_gamma,
    modified_gamma_product,
    sine_pair,
)
from .identities import ellipticity, rho
from .identities.params import sample_omegas, sample_unit_circle_beta
from .identities.driver import IdentityId, sample, verify
from .qseries import DEFAULT_POLICY, eta_product, theta, theta1

__all__ = ["Case", "SUITES", "GROUPS", "identity_cases", "run_group", "run_suite", "summarize"]


@dataclasses.dataclass
class Case:
    group: str
    name: str
    error: float
    tolerance: float
    wall_time: float = 0.0
    detail: str = None

    @property
    def passed(self):
        return bool(self.error <= self.tolerance)

    def to_dict(self):
        err = float(self.error)
        return {"group": self.group, "name": self.name,
                "error": err if math.isfinite(err) else None,
                "tolerance": self.tolerance, "passed": self.passed,
                "wall_time": self.wall_time, "detail": self.detail}


def _rng(seed, group):
    return np.random.default_rng([int(seed), zlib.crc32(group.encode())])


def _rel(a, b):
    a, b = complex(a), complex(b)
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _cplx(rng, re, im):
    return complex(rng.uniform(-re, re), rng.uniform(-im, im))


def _polar(rng, rmin, rmax):
    return rng.uniform(rmin, rmax) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))


def _worst(group, name, errors, tol, t0, draws):
    errs = list(errors)
    return Case(group, name, max(errs) if errs else 0.0, tol, time.perf_counter() - t0,
                f"{len(errs)} checks over {draws} draws")


# ---------------------------------------------------------------------------
# function-level batteries
# ---------------------------------------------------------------------------

def _strict_omegas(rng, qmax=0.7):
    while True:
        om = sample_omegas(rng, "strictly-elliptic")
        if abs(om.q) <= qmax:
            return om


def _u_in_cell(rng, om, scale=0.45):
    return rng.uniform(-scale, scale) * om.omega2 + rng.uniform(-scale, scale) * om.omega3 \
        + rng.uniform(-0.3, 0.3) * om.omega1


def battery_continuation(seed, draws=50, policy=DEFAULT_POLICY):
    """G via its defining product against the Γ(·; r̃, p̃) continuation."""
    rng = _rng(seed, "continuation")
    t0 = time.perf_counter()
    errs = []
    for _ in range(draws):
        om = _strict_omegas(rng)
        u = _u_in_cell(rng, om)
        errs.append(_rel(modified_gamma_product(u, om, policy), modified_gamma(u, om, policy)))
    return [_worst("continuation", "G product vs continuation", errs, 1e-9, t0, draws)]


def _theta_checks(rng, draws, policy):
    out = {"theta quasiperiodicity": [], "theta inversion": []}
    for _ in range(draws):
        z = _polar(rng, 0.1, 3.0)
        p = _polar(rng, 0.0, 0.6)
        th = theta(z, p, policy)
        out["theta quasiperiodicity"].append(_rel(theta(p * z, p, policy), -th / z))
        out["theta inversion"].append(_rel(theta(1 / z, p, policy), -th / z))
    return out


def _tau(rng, lo, hi, re=0.5):
    return complex(rng.uniform(-re, re), rng.uniform(lo, hi))


def _theta1_checks(rng, draws, policy):
    out = {"theta1 shift by 1": [], "theta1 shift by tau": [], "theta1 tau+1": [],
           "theta1 -1/tau": [], "dedekind eta": [], "theta modular formula": []}
    for _ in range(draws):
        tau = _tau(rng, 0.4, 1.5)
        u = _cplx(rng, 0.5, 0.3)
        t1 = theta1(u, tau, policy)
        out["theta1 shift by 1"].append(_rel(theta1(u + 1, tau, policy), -t1))
        out["theta1 shift by tau"].append(
            _rel(theta1(u + tau, tau, policy), -cmath.exp(-1j * math.pi * (tau + 2 * u)) * t1))
        out["theta1 tau+1"].append(_rel(theta1(u, tau + 1, policy), cmath.exp(1j * math.pi / 4) * t1))
        lhs = theta1(u / tau, -1 / tau, policy)
        rhs = -1j * cmath.sqrt(-1j * tau) * cmath.exp(1j * math.pi * u * u / tau) * t1
        out["theta1 -1/tau"].append(_rel(lhs, rhs))

        tau = _tau(rng, 0.5, 1.2)
        out["dedekind eta"].append(
            _rel(eta_product(-1 / tau, policy), cmath.sqrt(-1j * tau) * eta_product(tau, policy)))
        u = _polar(rng, 0.0, 1.0)
        e = lambda x: cmath.exp(2j * math.pi * x)  # noqa: E731
        lhs = theta(e(u / tau), e(-1 / tau), policy)
        ph = u * u / tau + tau / 6 + 1 / (6 * tau) + u / tau - u
        rhs = -1j * cmath.exp(1j * math.pi * ph) * theta(e(u), e(tau), policy)
        out["theta modular formula"].append(_rel(lhs, rhs))
    return out


def _gamma_checks(rng, draws, policy):
    out = {"Gamma difference in q": [], "Gamma difference in p": [], "Gamma reflection": []}
    for _ in range(draws):
        q, p = _polar(rng, 0.05, 0.6), _polar(rng, 0.05, 0.6)
        z = _polar(rng, 0.3, 1.5)
        g = elliptic_gamma(z, q, p, policy)
        out["Gamma difference in q"].append(_rel(elliptic_gamma(q * z, q, p, policy), theta(z, p, policy) * g))
        out["Gamma difference in p"].append(_rel(elliptic_gamma(p * z, q, p, policy), theta(z, q, policy) * g))
        lhs = g * elliptic_gamma(1 / z, q, p, policy) * theta(z, p, policy) * theta(1 / z, q, policy)
        out["Gamma reflection"].append(abs(lhs - 1))
    return out


def _modified_checks(rng, draws, policy):
    out = {}
    e = lambda x: cmath.exp(2j * math.pi * x)  # noqa: E731
    for regime in ("strictly-elliptic", "unit-circle"):
        keys = [f"G shift omega{k} ({regime})" for k in (1, 2, 3)] + [f"G reflection ({regime})"]
        for k in keys:
            out[k] = []
        for _ in range(draws):
            om = sample_omegas(rng, regime)
            w1, w2, w3 = om.omegas
            u = _u_in_cell(rng, om, 0.4)
            G = modified_gamma(u, om, policy)
            out[keys[0]].append(_rel(modified_gamma(u + w1, om, policy), theta(e(u / w2), om.p, policy) * G))
            out[keys[1]].append(_rel(modified_gamma(u + w2, om, policy), theta(e(u / w1), om.r, policy) * G))
            out[keys[2]].append(
                _rel(modified_gamma(u + w3, om, policy), cmath.exp(-1j * math.pi * b22(u, om)) * G))
            lhs = G * modified_gamma(-u, om, policy) * theta(e(-u / w1), om.r, policy) \
                * theta(e(-u / w2), om.p, policy) * cmath.exp(-1j * math.pi * b22(u, om))
            out[keys[3]].append(abs(lhs - 1))
    return out


def _sine_pairs(rng):
    """One pair in the product regime and one with a real ratio."""
    prod = sine_pair(complex(rng.uniform(0.7, 1.3), rng.uniform(0.2, 0.6)), 1.0)
    while True:
        x = rng.uniform(0.6, 1.7)
        if abs(x - round(x * 12) / 12) > 1e-3:
            return prod, sine_pair(x, 1.0)


def _sine_checks(rng, draws, policy):
    out = {}
    e = lambda x: cmath.exp(2j * math.pi * x)  # noqa: E731
    for label in ("product", "real ratio"):
        for k in ("S shift omega1", "S shift omega2", "S swap symmetry"):
            out[f"{k} ({label})"] = []
    for _ in range(draws):
        for label, pair in zip(("product", "real ratio"), _sine_pairs(rng)):
            w1, w2 = pair.omega1, pair.omega2
            u = rng.uniform(0.1, 0.9) * (w1 + w2) * 0.5 + 1j * w2 * rng.uniform(-0.6, 0.6)
            s = double_sine(u, pair, policy)
            out[f"S shift omega1 ({label})"].append(
                _rel(double_sine(u + w1, pair, policy) * (1 - e(u / w2)), s))
            out[f"S shift omega2 ({label})"].append(
                _rel(double_sine(u + w2, pair, policy) * (1 - e(u / w1)), s))
            out[f"S swap symmetry ({label})"].append(_rel(double_sine(u, pair.swapped(), policy), s))
    return out


def battery_transformations(seed, draws=50, policy=DEFAULT_POLICY):
    rng = _rng(seed, "transformations")
    cases = []
    for fn in (_theta_checks, _theta1_checks, _gamma_checks, _modified_checks, _sine_checks):
        t0 = time.perf_counter()
        for name, errs in fn(rng, draws, policy).items():
            cases.append(_worst("transformations", name, errs, 1e-10, t0, draws))
    return cases


def battery_limits(seed, draws=10, policy=DEFAULT_POLICY):
    """Double-sine degeneration of G at t_scale = 40 and the asymptotics of S."""
    rng = _rng(seed, "limits")
    t0 = time.perf_counter()
    lim, asym_up, asym_down = [], [], []
    for _ in range(draws):
        pair = sine_pair(complex(rng.uniform(0.8, 1.2), rng.uniform(0.2, 0.5)), 1.0)
        u = _cplx(rng, 0.5, 0.3)
        lim.append(double_sine_limit_check(u, pair, 40.0, policy))
        for pr in _sine_pairs(rng):
            c = 10j * (pr.omega1 + pr.omega2)
            asym_up.append(abs(double_sine(c, pr, policy) - 1))
            asym_down.append(abs(cmath.exp(1j * math.pi * b22(-c, pr)) * double_sine(-c, pr, policy) - 1))
    return [
        _worst("limits", "G -> 1/S at t_scale=40", lim, 1e-6, t0, draws),
        _worst("limits", "S(u) -> 1 at u=10i(w1+w2)", asym_up, 1e-8, t0, draws),
        _worst("limits", "exp(pi i B22) S(u) -> 1 at u=-10i(w1+w2)", asym_down, 1e-8, t0, draws),
    ]


def battery_ellipticity(seed, draws=20, policy=DEFAULT_POLICY):
    rng = _rng(seed, "ellipticity")
    t0 = time.perf_counter()
    gamma_res, mod_res, agree, control = [], [], [], []
    for _ in range(draws):
        params = sample_unit_circle_beta(rng, "strictly-elliptic")
        om = params.omegas
        u = rng.uniform(-0.5, 0.5) * om.omega2 + rng.uniform(-0.5, 0.5) * om.omega3
        gamma_res.append(ellipticity.ellipticity_residual(u, params, policy, "gamma"))
        mod_res.append(ellipticity.ellipticity_residual(u, params, policy, "modified"))
        agree.append(_rel(ellipticity.integrand_ratio(u, params, policy, "modified"),
                          ellipticity.integrand_ratio(u, params, policy, "theta")))
        control.append(ellipticity.ellipticity_residual(u, params, policy, "modified", ("omega1",)))
    cases = [
        _worst("ellipticity", "Gamma-built R periodic in w2, w3", gamma_res, 1e-10, t0, draws),
        _worst("ellipticity", "G-built R periodic in w2, w3", mod_res, 1e-10, t0, draws),
        _worst("ellipticity", "G-built R equals theta closed form", agree, 1e-10, t0, draws),
    ]
    # negative control: R is not w1-periodic; pass means every draw shows it
    low = min(control)
    cases.append(Case("ellipticity", "negative control: R not w1-periodic", 0.0 if low > 1e-3 else 1.0,
                      0.5, time.perf_counter() - t0, f"min residual {low:.3g}"))
    return cases


# ---------------------------------------------------------------------------
# ρ sums
# ---------------------------------------------------------------------------

def _generic_z(rng, N):
    """z with every denominator of the sign-flip sum bounded away from zero.

    Near-singular z make single terms ~1e4 times the sum, which puts the
    cancellation error above 1e-11; a 0.5 floor keeps it near 1e-13.
    """
    while True:
        z = [_polar(rng, 0.8, 1.25) for _ in range(N)]
        ok = all(abs(1 - x * x) > 0.5 for x in z)
        for j in range(N):
            for k in range(j + 1, N):
                for a in (z[j], 1 / z[j]):
                    ok = ok and all(abs(1 - a * b) > 0.5 for b in (z[k], 1 / z[k]))
        if ok:
            return z


def battery_rho(seed, draws=20, policy=DEFAULT_POLICY):
    rng = _rng(seed, "rho")
    cases = []
    for N in range(1, 5):
        t0 = time.perf_counter()
        closed, closed_t, zind = [], [], []
        for _ in range(draws):
            t = _polar(rng, 0.2, 0.8)
            t_n = [_polar(rng, 0.3, 0.9) for _ in range(5)]
            q = _polar(rng, 0.2, 0.8)
            zs = [_generic_z(rng, N) for _ in range(5)]
            r = [rho.rho_brute(z, t, t_n[:3], N) for z in zs]
            rt = [rho.rho_tilde_brute(z, t, t_n, q=q, N=N) for z in zs]
            rc = rho.rho_closed(t, t_n[:3], N)
            rtc = rho.rho_tilde_closed(t, t_n, q=q, N=N)
            closed += [abs(x - rc) / max(abs(rc), 1.0) for x in r]
            closed_t += [abs(x - rtc) / max(abs(rtc), 1.0) for x in rt]
            zind += [max(abs(a - b) for a, b in zip(r, r[1:])) / max(abs(rc), 1.0),
                     max(abs(a - b) for a, b in zip(rt, rt[1:])) / max(abs(rtc), 1.0)]
        cases.append(_worst("rho", f"rho closed form N={N}", closed, 1e-11, t0, draws))
        cases.append(_worst("rho", f"rho-tilde closed form N={N}", closed_t, 1e-11, t0, draws))
        cases.append(_worst("rho", f"z-independence N={N}", zind, 1e-11, t0, draws))
    return cases


# ---------------------------------------------------------------------------
# identity batteries
# ---------------------------------------------------------------------------

def _verify_case(args):
    ident, params, label = args
    rep = verify(ident, params)
    detail = rep.error if rep.error else f"evaluations={rep.evaluations}"
    return Case(label, f"{ident.value}", rep.rel_error, rep.tolerance, rep.wall_time, detail)


# (group label, identity, draws, sampler regime)
_ID_1D = [
    ("elliptic-beta", IdentityId.ELLIPTIC_BETA, 20, None),
    ("unit-circle-beta |q|=1", IdentityId.UNIT_CIRCLE_BETA, 20, "unit-circle"),
    ("unit-circle-beta |q|<1", IdentityId.UNIT_CIRCLE_BETA, 20, "strictly-elliptic"),
    ("hyperbolic NR N=1", IdentityId.HYP_NR_N1, 20, None),
    ("hyperbolic AW N=1", IdentityId.HYP_AW_N1, 20, None),
]
_ID_2D = [
    ("multiple elliptic N=2", IdentityId.MULTI_ELLIPTIC_N2, 5, None),
    ("multiple modified N=2", IdentityId.MULTI_MODIFIED_N2, 5, "unit-circle"),
    ("hyperbolic NR N=2", IdentityId.HYP_NR_N2, 5, None),
    ("hyperbolic AW N=2", IdentityId.HYP_AW_N2, 5, None),
]


def _identity_jobs(table, seed, draws):
    jobs = []
    for label, ident, n, regime in table:
        rng = _rng(seed, label)
        for _ in range(draws or n):
            jobs.append((ident, sample(ident, rng, regime or "unit-circle"), label))
    return jobs


def _run_jobs(jobs, workers):
    if workers and workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_verify_case, jobs))
    return [_verify_case(j) for j in jobs]


def identity_cases(labels, seed, draws=None, workers=1):
    """Run only the identity batteries named in ``labels``."""
    table = [row for row in _ID_1D + _ID_2D if row[0] in labels]
    unknown = set(labels) - {row[0] for row in table}
    if unknown:
        raise KeyError(", ".join(sorted(unknown)))
    return _run_jobs(_identity_jobs(table, seed, draws), workers)


def battery_identities_1d(seed, draws=None, workers=1):
    return _run_jobs(_identity_jobs(_ID_1D, seed, draws), workers)


def battery_identities_2d(seed, draws=None, workers=1):
    return _run_jobs(_identity_jobs(_ID_2D, seed, draws), workers)


# group name -> (callable(seed, draws, workers), default draws)
GROUPS = {
    "continuation": lambda s, d, w: battery_continuation(s, d or 50),
    "transformations": lambda s, d, w: battery_transformations(s, d or 50),
    "limits": lambda s, d, w: battery_limits(s, d or 10),
    "ellipticity": lambda s, d, w: battery_ellipticity(s, d or 20),
    "rho": lambda s, d, w: battery_rho(s, d or 20),
    "identities-1d": lambda s, d, w: battery_identities_1d(s, d, w),
    "identities-2d": lambda s, d, w: battery_identities_2d(s, d, w),
}

SUITES = {
    "functions": ["continuation", "transformations", "limits", "ellipticity"],
    "identities-1d": ["identities-1d"],
    "identities-2d": ["identities-2d"],
    "rho": ["rho"],
    "all": ["continuation", "transformations", "limits", "ellipticity", "rho", "identities-1d",
            "identities-2d"],
}


def run_group(name, seed=0, draws=None, workers=1):
    return GROUPS[name](seed, draws, workers)


def run_suite(name, seed=0, draws=None, workers=1):
    if name not in SUITES:
        raise KeyError(name)
    cases = []
    for g in SUITES[name]:
        cases += run_group(g, seed, draws, workers)
    return cases


def summarize(cases):
    """Pass counts and worst error per (group, name), in first-seen order."""
    groups = {}
    for c in cases:
        entry = groups.setdefault(f"{c.group}: {c.name}", {"cases": 0, "passed": 0, "max_error": 0.0,
                                                       "tolerance": c.tolerance})
        entry["cases"] += 1
        entry["passed"] += int(c.passed)
        err = float(c.error)
        entry["max_error"] = err if not math.isfinite(err) else max(entry["max_error"], err)
    for v in groups.values():
        if not math.isfinite(v["max_error"]):
            v["max_error"] = None
    return groups
