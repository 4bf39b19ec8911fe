"""Command-line interface: ``ellbeta {eval,verify,suite,sample}``.

Complex numbers are written ``a+bi`` without spaces (``j`` also accepted);
quasiperiods are a comma-separated list, e.g. ``--omega 1,1.41421356,0+1i``.
Exit codes: 0 pass, 1 numerical failure, 2 invalid input.
"""

import argparse
import json
import re
import sys
import time
import warnings

import numpy as np

from . import __version__
from ._serial import cjson, parse_complex, parse_complex_list
from .errors import CommensurateWarning, DomainError, EllbetaError
from .gammas import b22, derive_bases, double_sine, elliptic_gamma, modified_gamma, p_cubic, sine_pair
from .identities import kappa_constant
from .identities import driver as V
from .qseries import DEFAULT_POLICY, theta, theta1, value_flags

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

FUNCTIONS = ("theta", "theta1", "egamma", "megamma", "dsine", "b22", "pcubic", "kappa")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns the exit code."""

    def error(self, message):
        raise UsageError(message)


def _dump(doc):
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)


def _emit(doc, args):
    text = _dump(doc)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if not getattr(args, "out", None) or getattr(args, "json", False):
        print(text)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise DomainError("missing required parameter(s): " + ", ".join("--" + m.replace("_", "-")
                                                                        for m in missing))


def _omegas(text, n):
    vals = parse_complex_list(text)
    if len(vals) != n:
        raise DomainError(f"--omega: expected {n} comma-separated values, got {len(vals)}")
    return vals


def _quasi(text):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CommensurateWarning)
        om = derive_bases(*_omegas(text, 3))
    return om, ["commensurate"] if caught else []


def _policy(args, field):
    if getattr(args, "policy_tol", None) is None:
        return DEFAULT_POLICY
    tol = float(args.policy_tol)
    if not tol > 0:
        raise DomainError("--policy-tol must be > 0")
    return DEFAULT_POLICY.replace(**{field: tol})


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def cmd_eval(args):
    pol = _policy(args, "product_tol")
    c = lambda name: parse_complex(getattr(args, name))  # noqa: E731
    fn = args.function
    flags = []
    if fn == "theta":
        _need(args, "z", "p")
        value = theta(c("z"), c("p"), pol)
    elif fn == "theta1":
        _need(args, "u", "tau")
        value = theta1(c("u"), c("tau"), pol)
    elif fn == "egamma":
        _need(args, "z", "q", "p")
        value = elliptic_gamma(c("z"), c("q"), c("p"), pol)
    elif fn == "megamma":
        _need(args, "u", "omega")
        om, flags = _quasi(args.omega)
        value = modified_gamma(c("u"), om, pol)
    elif fn == "dsine":
        _need(args, "u", "omega")
        value = double_sine(c("u"), sine_pair(*_omegas(args.omega, 2)), pol, args.form or "auto")
    elif fn == "b22":
        _need(args, "u", "omega")
        w = parse_complex_list(args.omega)
        if len(w) not in (2, 3):
            raise DomainError("--omega: expected 2 or 3 values")
        value = b22(c("u"), w[:2])
    elif fn == "pcubic":
        _need(args, "u", "omega")
        value = p_cubic(c("u"), _omegas(args.omega, 3))
    else:  # kappa
        _need(args, "omega")
        om, flags = _quasi(args.omega)
        value = kappa_constant(om, pol, args.form or "auto")
    value = complex(value)
    if not np.isfinite(value):
        raise EllbetaError("value is not finite")
    doc = cjson(value)
    doc["flags"] = sorted(set(flags + value_flags(value, pol)))
    doc["function"] = fn
    _emit(doc, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _param_overrides(args, ident):
    """Build a params dict from the identity defaults plus any CLI bindings."""
    base = V.default_params(ident).to_dict()
    if args.params:
        text = args.params
        if not text.lstrip().startswith("{"):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        base.update(json.loads(text))
    cls = type(V.default_params(ident)).__name__
    single_t = cls == "EllipticBetaParams"
    single_g = cls == "UnitCircleBetaParams"
    if args.t is not None:
        base["t"] = parse_complex_list(args.t) if single_t else parse_complex(args.t)
    if args.t_n is not None:
        base["t_n"] = parse_complex_list(args.t_n)
    if args.g is not None:
        base["g"] = parse_complex_list(args.g) if single_g else parse_complex(args.g)
    if args.g_n is not None:
        base["g_n"] = parse_complex_list(args.g_n)
    for k in ("q", "p"):
        if getattr(args, k) is not None:
            base[k] = parse_complex(getattr(args, k))
    if args.omega is not None:
        key = "pair" if cls == "HyperbolicParams" else "omegas"
        base[key] = parse_complex_list(args.omega)
    return base


def cmd_verify(args):
    ident = V.IdentityId(args.identity)
    data = _param_overrides(args, ident)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CommensurateWarning)
        params = V.params_from_dict(ident, data)
    policy = None
    if args.policy_tol is not None:
        tol = V.tolerance_for(ident, params)
        policy = V._policy_for(ident, tol).replace(quad_rel_tol=float(args.policy_tol))
    rep = V.verify(ident, params, policy, args.tolerance)
    doc = rep.to_dict()
    doc["config"] = {"command": "verify", "identity": ident.value, "policy_tol": args.policy_tol,
                     "tolerance": args.tolerance}
    _emit(doc, args)
    if rep.passed:
        return EXIT_OK
    if rep.domain_error:
        print(f"error: {rep.error}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_FAIL


# ---------------------------------------------------------------------------
# suite / sample
# ---------------------------------------------------------------------------

def cmd_suite(args):
    from . import suites

    t0 = time.perf_counter()
    cases = suites.run_suite(args.name, args.seed, args.draws, args.workers)
    wall = time.perf_counter() - t0
    summary = suites.summarize(cases)
    passed = sum(c.passed for c in cases)
    doc = {
        "schema": V.SCHEMA,
        "suite": args.name,
        "seed": args.seed,
        "cases": [c.to_dict() for c in cases],
        "summary": summary,
        "passed": passed,
        "total": len(cases),
        "all_passed": passed == len(cases),
        "wall_time": wall,
        "config": {"command": "suite", "name": args.name, "seed": args.seed, "draws": args.draws,
                   "workers": args.workers},
    }
    _emit(doc, args)
    return EXIT_OK if passed == len(cases) else EXIT_FAIL


def cmd_sample(args):
    ident = V.IdentityId(args.identity)
    rng = np.random.default_rng(args.seed)
    regime = args.regime or "unit-circle"
    draws = [V.sample(ident, rng, regime).to_dict() for _ in range(args.count)]
    doc = {"schema": V.SCHEMA, "identity_id": ident.value, "seed": args.seed, "params": draws}
    _emit(doc, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="JSON file with default values for any flag")
    p.add_argument("--out", help="write the JSON document to this file")
    p.add_argument("--json", action="store_true", help="also print JSON to stdout when --out is set")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    p.add_argument("--policy-tol", default=None,
                   help="eval: product truncation tolerance; verify: quadrature relative tolerance")


def build_parser():
    ap = _Parser(prog="ellbeta", description="Elliptic gamma functions and beta integral checks.")
    ap.add_argument("--version", action="version", version=f"ellbeta {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    pe = sub.add_parser("eval", help="evaluate a function")
    pe.add_argument("function", choices=FUNCTIONS)
    for name in ("z", "p", "q", "u", "tau"):
        pe.add_argument(f"--{name}")
    pe.add_argument("--omega", help="comma-separated quasiperiods")
    pe.add_argument("--form", help="dsine: auto|product|inverse|integral; kappa: auto|direct|proof|mid")
    _common(pe)

    pv = sub.add_parser("verify", help="verify one identity")
    pv.add_argument("identity", choices=[i.value for i in V.IdentityId])
    pv.add_argument("--params", help="JSON object or path to a JSON file (e.g. from `sample`)")
    pv.add_argument("--t", help="elliptic-beta: five values; multi-elliptic: the coupling t")
    pv.add_argument("--t-n", dest="t_n", help="multi-elliptic: five values")
    pv.add_argument("--g", help="unit-circle-beta: five values; others: the coupling g")
    pv.add_argument("--g-n", dest="g_n", help="five (or four for AW) values")
    pv.add_argument("--q")
    pv.add_argument("--p")
    pv.add_argument("--omega", help="three quasiperiods, or two for hyperbolic identities")
    pv.add_argument("--tolerance", type=float, default=None, help="override the tolerance schedule")
    _common(pv)

    ps = sub.add_parser("suite", help="run a seeded acceptance battery")
    ps.add_argument("name", choices=["functions", "identities-1d", "identities-2d", "rho", "all"])
    ps.add_argument("--draws", type=int, default=None, help="override draws per check")
    ps.add_argument("--workers", type=int, default=None, help="parallel processes for identity cases")
    _common(ps)

    pa = sub.add_parser("sample", help="draw admissible parameters")
    pa.add_argument("identity", choices=[i.value for i in V.IdentityId])
    pa.add_argument("--count", type=int, default=None)
    pa.add_argument("--regime", choices=["unit-circle", "strictly-elliptic"], default=None)
    _common(pa)
    return ap


_DEFAULTS = {"seed": 0, "workers": 1, "count": 1}


def _apply_config(args):
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise DomainError("--config must hold a JSON object")
        for k, v in cfg.items():
            k = k.replace("-", "_")
            if getattr(args, k, None) is None:
                setattr(args, k, v if not isinstance(v, list) else ",".join(map(str, v)))
    for k, v in _DEFAULTS.items():
        if hasattr(args, k) and getattr(args, k) is None:
            setattr(args, k, v)
    return args


_NEG_VALUE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv):
    """Rewrite ``--opt -0.3,...`` as ``--opt=-0.3,...``; argparse reads a leading dash as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEG_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


_COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "suite": cmd_suite, "sample": cmd_sample}


def main(argv=None):
    parser = build_parser()
    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        args = _apply_config(parser.parse_args(_attach_negative_values(argv)))
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EllbetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
