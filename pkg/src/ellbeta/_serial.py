"""Complex-number parsing and JSON-friendly encoding."""

import math
import re

import numpy as np

from .errors import DomainError

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?:(?P<re>{_NUM})(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij]"
    rf"|(?P<only_re>{_NUM})|(?P<only_im>[+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij])$"
)


def parse_complex(text):
    """Parse ``"a+bi"``, ``"a"``, ``"bi"`` (``j`` accepted for ``i``)."""
    if isinstance(text, (int, float, complex, np.number)):
        return complex(text)
    if isinstance(text, dict):
        return complex(float(text.get("re", 0.0)), float(text.get("im", 0.0)))
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return complex(float(text[0]), float(text[1]))
    s = str(text).strip().replace(" ", "")
    m = _COMPLEX_RE.match(s)
    if not m:
        raise DomainError(f"cannot parse complex number {text!r}")

    def num(x):
        if x in ("", "+"):
            return 1.0
        if x == "-":
            return -1.0
        return float(x)

    if m.group("only_re") is not None:
        return complex(float(m.group("only_re")), 0.0)
    if m.group("only_im") is not None:
        return complex(0.0, num(m.group("only_im")))
    return complex(float(m.group("re")), num(m.group("im")))


def parse_complex_list(text, n=None):
    if isinstance(text, str):
        items = [x for x in text.split(",") if x.strip()]
    else:
        items = list(text)
    vals = [parse_complex(x) for x in items]
    if n is not None and len(vals) != n:
        raise DomainError(f"expected {n} comma-separated values, got {len(vals)}")
    return vals


def _clean(x):
    x = float(x)
    if x == 0.0:
        return 0.0  # drop negative zero for stable output
    return x


def cjson(z):
    z = complex(z)
    return {"re": _clean(z.real), "im": _clean(z.imag)}


def format_complex(z):
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 or math.isnan(z.imag) else '-'}{abs(z.imag)!r}i"
