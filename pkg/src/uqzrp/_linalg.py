"""Exact linear algebra over Q.

The kernel routine is fraction-free Gaussian elimination (Bareiss): rows are
scaled to integers once, after which every intermediate entry is a minor of
the input and all divisions are exact.  For the larger sectors the same
kernel is available through FLINT, which runs the computation in C.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

try:  # optional accelerator
    import flint
except ImportError:  # pragma: no cover
    flint = None

BAREISS_MAX_DIM = 60


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            if x:
                den = lcm(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def echelon_bareiss(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns the integer rows and pivot columns."""
    a = _integer_rows(rows)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        prow = a[r]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _nullspace_from_echelon(ech: list[list[int]], pivots: list[int], ncols: int) -> list[list[Fraction]]:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            row, pc = ech[k], pivots[k]
            s = sum((row[j] * x[j] for j in range(pc + 1, ncols) if row[j] and x[j]), Fraction(0))
            x[pc] = -s / row[pc]
        basis.append(x)
    return basis


def nullspace_bareiss(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    ncols = len(rows[0]) if rows else 0
    ech, piv = echelon_bareiss(rows)
    return _nullspace_from_echelon(ech, piv, ncols)


def nullspace_flint(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Same contract as :func:`nullspace_bareiss`, via FLINT's fraction-free kernel."""
    ints = _integer_rows(rows)
    ncols = len(rows[0]) if rows else 0
    mat = flint.fmpz_mat(ints)
    ech, _den, rank = mat.rref()
    ech_rows = [[int(ech[i, j]) for j in range(ncols)] for i in range(rank)]
    pivots = [next(j for j in range(ncols) if row[j] != 0) for row in ech_rows]
    return _nullspace_from_echelon(ech_rows, pivots, ncols)


def nullspace(rows: Sequence[Sequence], method: str = "auto") -> list[list[Fraction]]:
    """Basis of the right null space ``{x : A x = 0}`` over Q."""
    if method == "auto":
        method = "bareiss" if flint is None or len(rows) <= BAREISS_MAX_DIM else "flint"
    if method == "bareiss":
        return nullspace_bareiss(rows)
    if method == "flint":
        if flint is None:
            raise RuntimeError("python-flint is not installed")
        return nullspace_flint(rows)
    raise ValueError(f"unknown method {method!r}")


def solve(a_rows: Sequence[Sequence], b_rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact ``X`` with ``A X = B`` for square nonsingular ``A``."""
    n = len(a_rows)
    k = len(b_rows[0]) if b_rows else 0
    aug = [list(a_rows[i]) + list(b_rows[i]) for i in range(n)]
    ech, piv = echelon_bareiss([[Fraction(x) for x in row] for row in aug])
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    x = [[Fraction(0)] * k for _ in range(n)]
    for col in range(k):
        for i in range(n - 1, -1, -1):
            row = ech[i]
            s = sum((row[j] * x[j][col] for j in range(i + 1, n)), Fraction(0))
            x[i][col] = (row[n + col] - s) / row[i]
    return x


def lagrange_weights(xs: Sequence[Fraction], x0: Fraction) -> tuple[list[Fraction], list[Fraction]]:
    """Weights ``w, dw`` with ``p(x0) = sum w_k p(x_k)`` and ``p'(x0) = sum dw_k p(x_k)``.

    Exact for every polynomial of degree below ``len(xs)``.
    """
    n = len(xs)
    w, dw = [], []
    for k in range(n):
        den = Fraction(1)
        for j in range(n):
            if j != k:
                den *= xs[k] - xs[j]
        others = [xs[j] for j in range(n) if j != k]
        val = Fraction(1)
        for t in others:
            val *= x0 - t
        dval = Fraction(0)
        for skip in range(len(others)):
            term = Fraction(1)
            for j, t in enumerate(others):
                if j != skip:
                    term *= x0 - t
            dval += term
        w.append(val / den)
        dw.append(dval / den)
    return w, dw
