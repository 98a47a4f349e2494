"""Exact scalars and q-combinatorial primitives.

Every parameter of the model (q, lambda, mu, a, b) is either an exact
:class:`fractions.Fraction` or a binary ``float``.  Plain ``int`` is accepted
anywhere and adopts the mode of whatever it is combined with.  Combining a
Fraction with a float is refused with :class:`ModeError` instead of being
silently coerced, so an exact computation can never quietly degrade.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, float, int]

EXACT = "exact"
FLOAT = "float"

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class ModeError(TypeError):
    """Raised when exact and float scalars meet in one computation."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (optional sign) into a reduced Fraction.

    >>> parse_rational("-6/14")
    Fraction(-3, 7)
    >>> parse_rational("5")
    Fraction(5, 1)
    """
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(x: Scalar) -> str:
    """Inverse of :func:`parse_rational` for exact values."""
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def mode_of(*values: Scalar) -> str:
    """Return the arithmetic mode shared by ``values``.

    Ints are neutral.  Raises :class:`ModeError` on a Fraction/float mix.
    """
    has_float = has_exact = False
    for v in values:
        if isinstance(v, float):
            has_float = True
        elif isinstance(v, Rational):
            if not isinstance(v, int):
                has_exact = True
        else:
            raise TypeError(f"unsupported scalar type {type(v).__name__}")
    if has_float and has_exact:
        raise ModeError("cannot mix exact (Fraction) and float scalars")
    return FLOAT if has_float else EXACT


def exact(x: Scalar) -> Fraction:
    if isinstance(x, float):
        raise ModeError("expected an exact scalar, got float")
    return Fraction(x)


def one_like(*values: Scalar) -> Scalar:
    return 1.0 if mode_of(*values) == FLOAT else Fraction(1)


def zero_like(*values: Scalar) -> Scalar:
    return 0.0 if mode_of(*values) == FLOAT else Fraction(0)


@dataclass(frozen=True)
class ModelParams:
    """Species count and q in the regime ``0 < q < 1``."""

    n: int
    q: Scalar

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one species")
        mode_of(self.q)
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")


def qpoch(z: Scalar, m: int, q: Scalar) -> Scalar:
    """``(z; q)_m``, the finite product of ``1 - z q^j`` for ``j < m``."""
    if m < 0:
        raise ValueError("qpoch needs m >= 0")
    result = one_like(z, q)
    for j in range(m):
        result *= 1 - z * q**j
    return result


def qfact(m: int, q: Scalar) -> Scalar:
    """``(q; q)_m``."""
    return qpoch(q, m, q)


def qbinom(m: int, k: int, q: Scalar) -> Scalar:
    """Gaussian binomial, zero when ``k`` is outside ``[0, m]``.

    Built from the Pascal recurrence so it never divides; it stays a
    polynomial in q and is safe at q = 0.
    """
    if k < 0 or k > m or m < 0:
        return zero_like(q)
    k = min(k, m - k)
    # row[j] holds binom(i, j)_q for the current i
    row = [one_like(q)] + [zero_like(q)] * k
    for i in range(1, m + 1):
        for j in range(min(i, k), 0, -1):
            row[j] = row[j - 1] + q**j * row[j]
    return row[k]


def phi_exp(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Sum of ``alpha_i * beta_j`` over ``i < j``."""
    if len(alpha) != len(beta):
        raise ValueError(f"length mismatch: {len(alpha)} vs {len(beta)}")
    total = 0
    prefix = 0
    for a, b in zip(alpha, beta):
        total += prefix * b
        prefix += a
    return total


def g_weight(alpha: Sequence[int], mu: Scalar, q: Scalar) -> Scalar:
    """Single-site weight ``mu^{-|alpha|} (mu)_{|alpha|} / prod_i (q)_{alpha_i}``."""
    if mu == 0:
        raise ZeroDivisionError("g_weight is singular at mu = 0")
    size = sum(alpha)
    den = one_like(mu, q)
    for a in alpha:
        den *= qfact(a, q)
    return qpoch(mu, size, q) / (mu**size * den)


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """Componentwise ``a <= b``."""
    return all(x <= y for x, y in zip(a, b))


def rational_points(count: int, dims: int, seed: int = 0) -> list[tuple[Fraction, ...]]:
    """Deterministic pseudo-random rationals in (0, 1) for identity checks."""
    import random

    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        pts.append(tuple(Fraction(rng.randint(1, 96), 97 + rng.randint(0, 40)) for _ in range(dims)))
    return pts


def as_tuple(values: Iterable[int]) -> tuple[int, ...]:
    return tuple(int(v) for v in values)
