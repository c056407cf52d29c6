"""Extended nonnegative reals [0, inf] as plain IEEE floats.

Distances in this package live in [0, inf].  IEEE ``inf`` is a faithful
carrier for the infinite value: it is totally ordered against every finite
float, absorbing under addition, and it is never produced here by overflow
(all finite magnitudes stay far below the float range).  Saturating
arithmetic is therefore ordinary float arithmetic, and numpy arrays with
``np.inf`` entries carry whole distance fields.

JSON documents encode infinity as ``null``.
"""

import math

INF = math.inf


def is_finite(x) -> bool:
    return x != INF


def ext_add(*xs) -> float:
    """Saturating sum: any infinite term makes the result infinite."""
    total = 0.0
    for x in xs:
        if x < 0 or x != x:
            raise ValueError(f"extended reals are nonnegative, got {x!r}")
        total += x
    return total


def to_json(x):
    """Encode an extended real for JSON (inf becomes null)."""
    return None if x == INF else float(x)


def from_json(v) -> float:
    """Decode a JSON number-or-null into an extended real."""
    if v is None:
        return INF
    x = float(v)
    if x < 0 or x != x:
        raise ValueError(f"extended reals are nonnegative, got {v!r}")
    return x
