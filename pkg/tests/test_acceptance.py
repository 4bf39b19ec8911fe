"""Acceptance criteria 1-9, each at its stated tolerance and runtime budget.

Run with pytest (one verdict line per criterion is printed in the summary) or
directly: ``python3 tests/test_acceptance.py [--seed N] [--workers W]``.
"""

import argparse
import os
import sys
import time

import pytest

from ellbeta import suites

SEED = int(os.environ.get("ELLBETA_ACCEPTANCE_SEED", "7"))
WORKERS = int(os.environ.get("ELLBETA_ACCEPTANCE_WORKERS", "1"))


def _groups(*names):
    return lambda seed, workers: [c for n in names for c in suites.run_group(n, seed)]


def _ids(*labels):
    return lambda seed, workers: suites.identity_cases(list(labels), seed, workers=workers)


# number -> (title, [(part name, runner, budget seconds)])
CRITERIA = {
    1: ("G product vs continuation, 50 strict draws at 1e-9",
        [("continuation", _groups("continuation"), 10)]),
    2: ("transformation suite, 50 draws each at 1e-10",
        [("transformations", _groups("transformations"), 30)]),
    3: ("elliptic beta integral, 20 draws at 1e-8",
        [("elliptic-beta", _ids("elliptic-beta"), 120)]),
    4: ("unit-circle beta integral, 20 draws |q|=1 at 1e-6 and 20 strict at 1e-8",
        [("unit-circle", _ids("unit-circle-beta |q|=1", "unit-circle-beta |q|<1"), 120)]),
    5: ("multiple integrals N=2, 5 draws each at 1e-4 / 1e-3",
        [("elliptic N=2", _ids("multiple elliptic N=2"), 600),
         ("modified N=2", _ids("multiple modified N=2"), 600)]),
    6: ("hyperbolic NR and AW, N=1 20 draws at 1e-6, N=2 5 draws at 1e-3",
        [("hyperbolic", _ids("hyperbolic NR N=1", "hyperbolic AW N=1",
                             "hyperbolic NR N=2", "hyperbolic AW N=2"), 600)]),
    7: ("ellipticity residual < 1e-10 for Gamma- and G-built ratio, negative control",
        [("ellipticity", _groups("ellipticity"), 60)]),
    8: ("rho sums N=1..4, 20 draws, closed form and z-independence at 1e-11",
        [("rho", _groups("rho"), 5)]),
    9: ("double-sine limit at t_scale=40 < 1e-6, S asymptotics < 1e-8",
        [("limits", _groups("limits"), 60)]),
}


def evaluate(number, seed=SEED, workers=WORKERS):
    """Run one criterion; returns (passed, verdict line, failing case names)."""
    title, parts = CRITERIA[number]
    ok, notes, bad = True, [], []
    worst = 0.0
    for part, runner, budget in parts:
        t0 = time.perf_counter()
        cases = runner(seed, workers)
        wall = time.perf_counter() - t0
        failed = [c for c in cases if not c.passed]
        bad += [f"{c.group}: {c.name} error={c.error:.3g} tol={c.tolerance:g} {c.detail or ''}" for c in failed]
        slow = wall > budget
        ok = ok and not failed and not slow
        ratios = [c.error / c.tolerance for c in cases if c.tolerance > 0]
        worst = max([worst] + ratios)
        notes.append(f"{part}: {len(cases) - len(failed)}/{len(cases)} in {wall:.1f}s"
                     f"{' OVER' if slow else ''} (budget {budget}s)")
    verdict = "PASS" if ok else "FAIL"
    line = (f"criterion {number} [{verdict}] {title}; worst error/tolerance {worst:.2g}; "
            + "; ".join(notes))
    return ok, line, bad


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, acceptance_lines):
    ok, line, bad = evaluate(number)
    acceptance_lines[number] = line
    print(line)
    assert ok, "\n".join([line] + bad)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=SEED)
    ap.add_argument("--workers", type=int, default=WORKERS)
    ap.add_argument("criteria", nargs="*", type=int, default=sorted(CRITERIA))
    args = ap.parse_args(argv)
    all_ok = True
    for n in args.criteria:
        ok, line, bad = evaluate(n, args.seed, args.workers)
        print(line, flush=True)
        for b in bad:
            print("    " + b)
        all_ok = all_ok and ok
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
