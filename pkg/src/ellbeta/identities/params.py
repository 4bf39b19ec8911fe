"""Parameter sets for each integral identity, with validators and samplers.

Every parameter class exposes ``margins()``: the constraint values of its
identity, normalised so that a constraint holds iff its margin is positive and
a margin of 1 is roughly the full width of the admissible range.  Samplers
draw inside the region with every margin at least ``SLACK``.
"""

import dataclasses
import math

import numpy as np

from .._serial import cjson, parse_complex
from ..errors import DomainError
from ..gammas import QuasiPeriods, Regime, SinePair, derive_bases, sine_pair

__all__ = [
    "SLACK",
    "EllipticBetaParams",
    "UnitCircleBetaParams",
    "MultiEllipticParams",
    "MultiModifiedParams",
    "HyperbolicParams",
    "sample_elliptic_beta",
    "sample_unit_circle_beta",
    "sample_multi_elliptic",
    "sample_multi_modified",
    "sample_hyperbolic",
    "sample_omegas",
]

SLACK = 0.1
_MAX_TRIES = 10_000


def _tuple(xs, n=None, name="parameters"):
    out = tuple(complex(x) for x in xs)
    if n is not None and len(out) != n:
        raise DomainError(f"{name}: expected {n} values, got {len(out)}")
    return out


def _check(margins):
    bad = [k for k, v in margins.items() if not v > 0]
    if bad:
        raise DomainError("constraint violated: " + ", ".join(bad))


def _omegas_json(om):
    return [cjson(w) for w in om.omegas]


def _omegas_from(data):
    import warnings

    w = [parse_complex(x) for x in data]
    if len(w) != 3:
        raise DomainError("omegas: expected 3 values")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return derive_bases(*w)


def _pair_from(data):
    w = [parse_complex(x) for x in data]
    if len(w) != 2:
        raise DomainError("pair: expected 2 values")
    return sine_pair(*w)


# ---------------------------------------------------------------------------
# elliptic (multiplicative) parameters
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class EllipticBetaParams:
    t: tuple
    q: complex
    p: complex

    def __post_init__(self):
        object.__setattr__(self, "t", _tuple(self.t, 5, "t"))
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "p", complex(self.p))

    @property
    def A(self):
        return complex(np.prod(self.t))

    def margins(self):
        m = {f"|t{n}|<1": 1 - abs(x) for n, x in enumerate(self.t)}
        m["|q|<1"] = 1 - abs(self.q)
        m["|p|<1"] = 1 - abs(self.p)
        m["|pq|<|A|"] = 1 - abs(self.p * self.q) / abs(self.A) if self.A != 0 else -1.0
        return m

    def validate(self):
        _check(self.margins())
        return self

    def to_dict(self):
        return {"t": [cjson(x) for x in self.t], "q": cjson(self.q), "p": cjson(self.p)}

    @classmethod
    def from_dict(cls, d):
        return cls([parse_complex(x) for x in d["t"]], parse_complex(d["q"]), parse_complex(d["p"]))


@dataclasses.dataclass(frozen=True)
class MultiEllipticParams:
    t: complex
    t_n: tuple
    q: complex
    p: complex
    N: int = 1

    def __post_init__(self):
        object.__setattr__(self, "t", complex(self.t))
        object.__setattr__(self, "t_n", _tuple(self.t_n, 5, "t_n"))
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "p", complex(self.p))
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer")
        object.__setattr__(self, "N", int(self.N))

    @property
    def B(self):
        return complex(self.t ** (2 * self.N - 2) * np.prod(self.t_n))

    def margins(self):
        m = {"|t|<1": 1 - abs(self.t)}
        m.update({f"|t{n}|<1": 1 - abs(x) for n, x in enumerate(self.t_n)})
        m["|q|<1"] = 1 - abs(self.q)
        m["|p|<1"] = 1 - abs(self.p)
        m["|pq|<|B|"] = 1 - abs(self.p * self.q) / abs(self.B) if self.B != 0 else -1.0
        return m

    def validate(self):
        _check(self.margins())
        return self

    def to_dict(self):
        return {"t": cjson(self.t), "t_n": [cjson(x) for x in self.t_n],
                "q": cjson(self.q), "p": cjson(self.p), "N": self.N}

    @classmethod
    def from_dict(cls, d):
        return cls(parse_complex(d["t"]), [parse_complex(x) for x in d["t_n"]],
                   parse_complex(d["q"]), parse_complex(d["p"]), int(d.get("N", 1)))


# ---------------------------------------------------------------------------
# modified (additive, three quasiperiods) parameters
# ---------------------------------------------------------------------------

def _width3(om):
    """-Im((ω₁+ω₂)/ω₃): the admissible range of -Im(·/ω₃) for the balancing sum."""
    return -((om.omega1 + om.omega2) / om.omega3).imag


@dataclasses.dataclass(frozen=True)
class UnitCircleBetaParams:
    g: tuple
    omegas: QuasiPeriods

    def __post_init__(self):
        object.__setattr__(self, "g", _tuple(self.g, 5, "g"))
        if not isinstance(self.omegas, QuasiPeriods):
            object.__setattr__(self, "omegas", derive_bases(*self.omegas))

    @property
    def A(self):
        return sum(self.g)

    def margins(self):
        w3 = self.omegas.omega3
        W = _width3(self.omegas)
        m = {f"Im(g{n}/omega3)<0": -(x / w3).imag / W for n, x in enumerate(self.g)}
        m["Im((A-omega1-omega2)/omega3)>0"] = (
            (self.A - self.omegas.omega1 - self.omegas.omega2) / w3
        ).imag / W
        return m

    def validate(self):
        _check(self.margins())
        return self

    def to_dict(self):
        return {"g": [cjson(x) for x in self.g], "omegas": _omegas_json(self.omegas)}

    @classmethod
    def from_dict(cls, d):
        return cls([parse_complex(x) for x in d["g"]], _omegas_from(d["omegas"]))


@dataclasses.dataclass(frozen=True)
class MultiModifiedParams:
    g: complex
    g_n: tuple
    omegas: QuasiPeriods
    N: int = 1

    def __post_init__(self):
        object.__setattr__(self, "g", complex(self.g))
        object.__setattr__(self, "g_n", _tuple(self.g_n, 5, "g_n"))
        if not isinstance(self.omegas, QuasiPeriods):
            object.__setattr__(self, "omegas", derive_bases(*self.omegas))
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer")
        object.__setattr__(self, "N", int(self.N))

    @property
    def B(self):
        return (2 * self.N - 2) * self.g + sum(self.g_n)

    def margins(self):
        w3 = self.omegas.omega3
        W = _width3(self.omegas)
        m = {"Im(g/omega3)<0": -(self.g / w3).imag / W}
        m.update({f"Im(g{n}/omega3)<0": -(x / w3).imag / W for n, x in enumerate(self.g_n)})
        m["Im((B-omega1-omega2)/omega3)>0"] = (
            (self.B - self.omegas.omega1 - self.omegas.omega2) / w3
        ).imag / W
        return m

    def validate(self):
        _check(self.margins())
        return self

    def to_dict(self):
        return {"g": cjson(self.g), "g_n": [cjson(x) for x in self.g_n],
                "omegas": _omegas_json(self.omegas), "N": self.N}

    @classmethod
    def from_dict(cls, d):
        return cls(parse_complex(d["g"]), [parse_complex(x) for x in d["g_n"]],
                   _omegas_from(d["omegas"]), int(d.get("N", 1)))


# ---------------------------------------------------------------------------
# hyperbolic parameters
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class HyperbolicParams:
    """Parameters of the hyperbolic integrals.

    ``kind`` is ``"nr"`` (five g_n) or ``"aw"`` (four g_n).
    """

    g: complex
    g_n: tuple
    pair: SinePair
    N: int = 1
    kind: str = "nr"

    def __post_init__(self):
        if self.kind not in ("nr", "aw"):
            raise DomainError("kind must be 'nr' or 'aw'")
        object.__setattr__(self, "g", complex(self.g))
        object.__setattr__(self, "g_n", _tuple(self.g_n, 5 if self.kind == "nr" else 4, "g_n"))
        if not isinstance(self.pair, SinePair):
            object.__setattr__(self, "pair", sine_pair(*self.pair))
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer")
        object.__setattr__(self, "N", int(self.N))

    @property
    def B(self):
        return (2 * self.N - 2) * self.g + sum(self.g_n)

    def margins(self):
        w1, w2 = self.pair.omega1, self.pair.omega2
        tau = w1 / w2
        m = {}
        if tau.imag < 0 or not tau.real > 0:
            m["Im(omega1/omega2)>=0, Re(omega1/omega2)>0"] = -1.0
        W2 = ((w1 + w2) / w2).real
        W1 = ((w1 + w2) / w1).real
        m["Re(g/omega1)>0"] = (self.g / w1).real / W1
        m["Re(g/omega2)>0"] = (self.g / w2).real / W2
        m.update({f"Re(g{n}/omega2)>0": (x / w2).real / W2 for n, x in enumerate(self.g_n)})
        if self.kind == "nr":
            m["Re((B-omega1)/omega2)<1"] = (W2 - (self.B / w2).real) / W2
        else:
            m["Re((B-omega2)/omega1)<1"] = (W1 - (self.B / w1).real) / W1
        return m

    def decay_rate(self):
        """Exponential decay rate in x of the integrand along u = iω₂x, per variable."""
        w1, w2 = self.pair.omega1, self.pair.omega2
        if self.kind == "nr":
            return 2 * math.pi * (1 + w2 / w1).real
        return 2 * math.pi * ((w1 + w2 - self.B) / w1).real

    def validate(self):
        _check(self.margins())
        return self

    def to_dict(self):
        return {"g": cjson(self.g), "g_n": [cjson(x) for x in self.g_n],
                "pair": [cjson(self.pair.omega1), cjson(self.pair.omega2)],
                "N": self.N, "kind": self.kind}

    @classmethod
    def from_dict(cls, d):
        return cls(parse_complex(d["g"]), [parse_complex(x) for x in d["g_n"]],
                   _pair_from(d["pair"]), int(d.get("N", 1)), d.get("kind", "nr"))


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def _polar(rng, rmin, rmax, phase_spread=math.pi):
    r = rng.uniform(rmin, rmax)
    return r * complex(math.cos(a := rng.uniform(-phase_spread, phase_spread)), math.sin(a))


def _rejection(draw, rng):
    for _ in range(_MAX_TRIES):
        params = draw(rng)
        if min(params.margins().values()) >= SLACK:
            return params
    raise RuntimeError("sampler failed to find admissible parameters")  # pragma: no cover


def sample_elliptic_beta(rng, p_zero=False):
    """|q|,|p| in [0.05, 0.5], |t_n| in [0.35, 0.85] with |pq| <= 0.9|A|."""
    def draw(rng):
        t = [_polar(rng, 0.35, 0.85) for _ in range(5)]
        q = _polar(rng, 0.05, 0.5)
        p = 0.0 if p_zero else _polar(rng, 0.05, 0.5)
        return EllipticBetaParams(t, q, p)
    return _rejection(draw, rng)


def sample_multi_elliptic(rng, N=2):
    def draw(rng):
        t = _polar(rng, 0.2, 0.6)
        t_n = [_polar(rng, 0.45, 0.85) for _ in range(5)]
        q = _polar(rng, 0.03, 0.3)
        p = _polar(rng, 0.03, 0.3)
        return MultiEllipticParams(t, t_n, q, p, N)
    return _rejection(draw, rng)


def sample_omegas(rng, regime="unit-circle"):
    """Quasiperiods in the requested regime, normalised near ω₂ ~ 1, ω₃ ~ i."""
    import warnings

    regime = Regime(regime) if not isinstance(regime, Regime) else regime
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for _ in range(_MAX_TRIES):
            try:
                if regime is Regime.UNIT_CIRCLE:
                    w1 = 1.0
                    w2 = rng.uniform(1.15, 1.85)
                    w3 = rng.uniform(0.9, 1.5) * complex(rng.uniform(-0.3, 0.3), 1.0)
                else:
                    w2 = 1.0
                    w1 = complex(rng.uniform(0.8, 1.2), rng.uniform(0.15, 0.5))
                    w3 = rng.uniform(1.5, 2.5) * complex(rng.uniform(-0.2, 0.2), 1.0)
                return derive_bases(w1, w2, w3)
            except Warning:
                continue
    raise RuntimeError("could not sample incommensurate quasiperiods")  # pragma: no cover


def _fractions(rng, weights, total_hi=0.9):
    """Fractions f_i >= SLACK with sum w_i f_i <= total_hi, Dirichlet spread."""
    weights = np.asarray(weights, dtype=float)
    base = SLACK * weights.sum()
    total = rng.uniform(base + 0.25 * (total_hi - base), total_hi)
    d = rng.dirichlet(np.ones(weights.size))
    return SLACK + (total - base) * d / weights


def _modified_g(rng, om, N, count=5):
    """g and g_n with -Im(x/ω₃) fractions of the admissible width."""
    W = _width3(om)
    weights = [2 * N - 2] * (N > 1) + [1] * count
    f = _fractions(rng, weights)
    w3 = om.omega3
    along = rng.uniform(-0.1, 0.1, size=f.size)
    vals = [w3 * complex(a, -fi * W) for a, fi in zip(along, f)]
    if N > 1:
        return vals[0], vals[1:]
    g = w3 * complex(rng.uniform(-0.1, 0.1), -rng.uniform(SLACK, 0.3) * W)
    return g, vals


def sample_unit_circle_beta(rng, regime="unit-circle"):
    def draw(rng):
        om = sample_omegas(rng, regime)
        _, g = _modified_g(rng, om, 1)
        return UnitCircleBetaParams(g, om)
    return _rejection(draw, rng)


def sample_multi_modified(rng, N=2, regime="unit-circle"):
    def draw(rng):
        om = sample_omegas(rng, regime)
        g, g_n = _modified_g(rng, om, N)
        return MultiModifiedParams(g, g_n, om, N)
    return _rejection(draw, rng)


def sample_hyperbolic(rng, N=1, kind="nr", pair=None):
    """Hyperbolic parameters with Im(ω₁/ω₂) > 0 unless ``pair`` is given."""
    count = 5 if kind == "nr" else 4

    def draw(rng):
        pr = pair
        if pr is None:
            pr = sine_pair(complex(rng.uniform(0.8, 1.2), rng.uniform(0.2, 0.5)), 1.0)
        elif not isinstance(pr, SinePair):
            pr = sine_pair(*pr)
        w1, w2 = pr.omega1, pr.omega2
        # fractions of Re(·/ω_b) where ω_b carries the balancing constraint
        wb = w2 if kind == "nr" else w1
        W = ((w1 + w2) / wb).real
        weights = [2 * N - 2] * (N > 1) + [1] * count
        f = _fractions(rng, weights)
        side = rng.uniform(-0.15, 0.15, size=f.size)
        vals = [wb * complex(fi * W, s) for fi, s in zip(f, side)]
        if N > 1:
            g, g_n = vals[0], vals[1:]
        else:
            g, g_n = wb * complex(rng.uniform(SLACK, 0.3) * W, 0.0), vals
        return HyperbolicParams(g, g_n, pr, N, kind)
    return _rejection(draw, rng)
