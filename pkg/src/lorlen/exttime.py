"""Extended time values: nonnegative reals with a first-class +infinity.

Time separations live in [0, +inf].  Plain floats carry the values
(``math.inf`` is the infinite one); the helpers below implement saturating
arithmetic where ``inf - inf`` is a hard error instead of NaN.
"""

from __future__ import annotations

import math

INF = math.inf

#: Alias used in signatures: a float in [0, +inf].
ExtTime = float


def is_valid(value: float) -> bool:
    """True for a nonnegative real or +inf (rejects NaN and negatives)."""
    return (not math.isnan(value)) and value >= 0.0


def ext_add(a: float, b: float) -> float:
    """Saturating addition on [0, inf]: inf absorbs."""
    if not (is_valid(a) and is_valid(b)):
        raise ValueError(f"extended time values must be in [0, inf]: {a!r}, {b!r}")
    return a + b


def ext_sub(a: float, b: float) -> float:
    """Difference a - b, defined only when it stays in [0, inf].

    ``inf - inf`` has no consistent value and raises.
    """
    if not (is_valid(a) and is_valid(b)):
        raise ValueError(f"extended time values must be in [0, inf]: {a!r}, {b!r}")
    if math.isinf(a) and math.isinf(b):
        raise ValueError("inf - inf is undefined for extended time values")
    if math.isinf(b):
        raise ValueError(f"{a!r} - inf leaves [0, inf]")
    out = a - b
    if out < 0.0:
        raise ValueError(f"{a!r} - {b!r} is negative")
    return out


def close(a: float, b: float, tol: float) -> bool:
    """Relative comparison with an absolute floor: |a-b| <= tol*max(1, |b|).

    Infinite values compare equal only to each other.
    """
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(b))
