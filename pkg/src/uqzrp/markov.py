"""Markov transfer matrices, continuous-time generators and steady states.

All operators are restricted to one sector and stored sparsely by column,
``cols[j][i]`` being the amplitude for the move from configuration ``j`` to
configuration ``i`` (columns are "from", rows are "to").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import _linalg
from ._checks import Check, all_ok
from .qseries import EXACT, FLOAT, Scalar, mode_of, one_like, phi_exp, qbinom, qpoch, zero_like
from .statespace import Config, Occupancy, Sector, below, reverse_sites
from .stochastic_r import _phi_cached

TRANSFER = "transfer"
HAMILTONIAN = "hamiltonian"


class NotIrreducible(ArithmeticError):
    """The null space of ``T - 1`` (or ``H``) is not one-dimensional."""


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass
class SectorOperator:
    sector: Sector
    cols: list[dict[int, Scalar]]
    kind: str

    @property
    def dim(self) -> int:
        return self.sector.dim

    @property
    def entries(self) -> dict[tuple[int, int], Scalar]:
        return {(i, j): v for j, col in enumerate(self.cols) for i, v in col.items()}

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, 0)

    def coefficient(self, target: Config, source: Config) -> Scalar:
        idx = self.sector.index
        return self[idx[target], idx[source]]

    def column(self, source: Config) -> dict[Config, Scalar]:
        """Image of a basis configuration, keyed by configuration."""
        cfg = self.sector.configs
        return {cfg[i]: v for i, v in self.cols[self.sector.index[source]].items()}

    def column_sums(self) -> list[Scalar]:
        return [sum(col.values(), 0) for col in self.cols]

    def to_dense(self) -> list[list[Scalar]]:
        zero = 0
        mat = [[zero] * self.dim for _ in range(self.dim)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                mat[i][j] = v
        return mat

    def apply(self, vec: Sequence[Scalar]) -> list[Scalar]:
        out = [0] * self.dim
        for j, col in enumerate(self.cols):
            x = vec[j]
            if x:
                for i, v in col.items():
                    out[i] += v * x
        return out

    def __matmul__(self, other: "SectorOperator") -> "SectorOperator":
        cols = []
        for col in other.cols:
            acc: dict[int, Scalar] = {}
            for k, v in col.items():
                for i, w in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + w * v
            cols.append({i: v for i, v in acc.items() if v != 0})
        return SectorOperator(self.sector, cols, self.kind)

    def _combine(self, other, sign):
        cols = []
        for a, b in zip(self.cols, other.cols):
            acc = dict(a)
            for i, v in b.items():
                acc[i] = acc.get(i, 0) + sign * v
            cols.append({i: v for i, v in acc.items() if v != 0})
        return SectorOperator(self.sector, cols, self.kind)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c: Scalar) -> "SectorOperator":
        return SectorOperator(self.sector, [{i: c * v for i, v in col.items() if c * v != 0} for col in self.cols], self.kind)

    def permuted(self, perm: Sequence[int]) -> "SectorOperator":
        """``P A P^{-1}`` for the basis permutation ``i -> perm[i]``."""
        cols = [dict() for _ in self.cols]
        for j, col in enumerate(self.cols):
            cols[perm[j]] = {perm[i]: v for i, v in col.items()}
        return SectorOperator(self.sector, cols, self.kind)

    def equals(self, other: "SectorOperator", name: str = "operator_equality", tol: float = 0.0) -> Check:
        for j, (a, b) in enumerate(zip(self.cols, other.cols)):
            for i in set(a) | set(b):
                x, y = a.get(i, 0), b.get(i, 0)
                bad = (x != y) if tol == 0 else abs(x - y) > tol
                if bad:
                    cfg = self.sector.configs
                    return Check(name, False, {"row": cfg[i], "column": cfg[j], "lhs": x, "rhs": y})
        return Check(name, True, None, {"dim": self.dim})

    def to_float(self) -> "SectorOperator":
        return SectorOperator(self.sector, [{i: float(v) for i, v in col.items()} for col in self.cols], self.kind)


def identity(sector: Sector, kind: str = TRANSFER, one: Scalar = Fraction(1)) -> SectorOperator:
    return SectorOperator(sector, [{j: one} for j in range(sector.dim)], kind)


# -- discrete time -----------------------------------------------------------------


def transfer_column(beta: Config, lam, mus, q) -> dict[Config, Scalar]:
    """``T(lam | mus) |beta>`` as a map from target configuration to amplitude.

    The auxiliary lane carries ``gamma_i`` from site ``i`` to ``i + 1``; the
    periodic trace closes it with ``gamma_L = gamma_0 <= beta_L``.
    """
    L = len(beta)
    one = one_like(lam, q, *mus)
    out: dict[Config, Scalar] = {}
    for gamma0 in below(beta[-1]):
        stack = [(0, gamma0, one, ())]
        while stack:
            i, carry, weight, alphas = stack.pop()
            b = beta[i]
            for g in (gamma0,) if i == L - 1 else below(b):
                w = _phi_cached(g, b, lam, mus[i], q)
                if w == 0:
                    continue
                a = _sub(_add(carry, b), g)
                if i == L - 1:
                    key = alphas + (a,)
                    out[key] = out.get(key, 0) + weight * w
                else:
                    stack.append((i + 1, g, weight * w, alphas + (a,)))
    return {k: v for k, v in out.items() if v != 0}


def transfer_matrix(sector: Sector, lam: Scalar, mus: Sequence[Scalar], q: Scalar) -> SectorOperator:
    """Markov transfer matrix ``T(lam | mu_1..mu_L)`` restricted to ``sector``."""
    mus = tuple(mus)
    if len(mus) != sector.L:
        raise ValueError(f"need {sector.L} inhomogeneities, got {len(mus)}")
    mode_of(lam, q, *mus)
    idx = sector.index
    cols = []
    for beta in sector.configs:
        col = transfer_column(beta, lam, mus, q)
        cols.append({idx[c]: v for c, v in col.items()})
    return SectorOperator(sector, cols, TRANSFER)


def verify_commuting_family(sector: Sector, lam1, lam2, mus, q) -> Check:
    t1 = transfer_matrix(sector, lam1, mus, q)
    t2 = transfer_matrix(sector, lam2, mus, q)
    return (t1 @ t2).equals(t2 @ t1, "commuting_family")


# -- continuous time -----------------------------------------------------------------


def rate_right(gamma: Sequence[int], alpha: Sequence[int], mu: Scalar, q: Scalar) -> Scalar:
    """Rate at which ``gamma`` particles leave a site holding ``alpha`` to the right."""
    g = sum(gamma)
    if g < 1:
        raise ValueError("a hop moves at least one particle")
    if any(x > y for x, y in zip(gamma, alpha)):
        return zero_like(mu, q)
    a = sum(alpha)
    den = qpoch(mu * q ** (a - g), g, q)
    if den == 0:
        raise ZeroDivisionError("rate pole: (mu q^{|alpha|-|gamma|})_{|gamma|} = 0")
    val = q ** phi_exp(_sub(alpha, gamma), gamma) * mu ** (g - 1) * qpoch(q, g - 1, q) / den
    for ai, gi in zip(alpha, gamma):
        val *= qbinom(ai, gi, q)
    return val


def rate_left(gamma: Sequence[int], beta: Sequence[int], mu: Scalar, q: Scalar) -> Scalar:
    """Rate at which ``gamma`` particles leave a site holding ``beta`` to the left."""
    g = sum(gamma)
    if g < 1:
        raise ValueError("a hop moves at least one particle")
    if any(x > y for x, y in zip(gamma, beta)):
        return zero_like(mu, q)
    b = sum(beta)
    den = qpoch(mu * q ** (b - g), g, q)
    if den == 0:
        raise ZeroDivisionError("rate pole: (mu q^{|beta|-|gamma|})_{|gamma|} = 0")
    val = q ** phi_exp(gamma, _sub(beta, gamma)) * qpoch(q, g - 1, q) / den
    for bi, gi in zip(beta, gamma):
        val *= qbinom(bi, gi, q)
    return val


@dataclass
class RateTable:
    """Hop events available from each occupancy, with rates ``a * right`` and ``b * left``.

    ``epsilon = -1`` flips the sign of every rate, which is the convention of
    the second physical regime (only meaningful for q, mu > 1).
    """

    a: Scalar
    b: Scalar
    mu: Scalar
    q: Scalar
    epsilon: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    def events(self, alpha: Occupancy) -> list[tuple[Occupancy, int, Scalar]]:
        """``(gamma, direction, rate)`` with direction ``+1`` (right) or ``-1`` (left)."""
        alpha = tuple(alpha)
        hit = self._cache.get(alpha)
        if hit is not None:
            return hit
        out = []
        for gamma in below(alpha):
            if sum(gamma) == 0:
                continue
            if self.a != 0:
                r = self.epsilon * self.a * rate_right(gamma, alpha, self.mu, self.q)
                if r != 0:
                    out.append((gamma, +1, r))
            if self.b != 0:
                r = self.epsilon * self.b * rate_left(gamma, alpha, self.mu, self.q)
                if r != 0:
                    out.append((gamma, -1, r))
        self._cache[alpha] = out
        return out

    def exit_rate(self, alpha: Occupancy) -> Scalar:
        return sum((r for _, _, r in self.events(alpha)), zero_like(self.mu, self.q))


def hop(config: Config, site: int, gamma: Occupancy, direction: int) -> Config:
    L = len(config)
    dest = (site + direction) % L
    new = list(config)
    new[site] = _sub(new[site], gamma)
    new[dest] = _add(new[dest], gamma)
    return tuple(new)


def generator_from_rates(sector: Sector, rates: RateTable) -> SectorOperator:
    """Sum-to-zero generator whose off-diagonal part is given by ``rates``."""
    idx = sector.index
    zero = zero_like(rates.mu, rates.q, rates.a, rates.b)
    cols = []
    for j, cfg in enumerate(sector.configs):
        col: dict[int, Scalar] = {}
        out_total = zero
        for site, occ in enumerate(cfg):
            for gamma, direction, r in rates.events(occ):
                target = hop(cfg, site, gamma, direction)
                if target == cfg:
                    continue  # L = 1: the hop is invisible
                i = idx[target]
                col[i] = col.get(i, zero) + r
                out_total += r
        if out_total != 0:
            col[j] = -out_total
        cols.append({i: v for i, v in col.items() if v != 0})
    return SectorOperator(sector, cols, HAMILTONIAN)


def hamiltonian(sector: Sector, a: Scalar, b: Scalar, mu: Scalar, q: Scalar, epsilon: int = 1) -> SectorOperator:
    """``a H1 + b H2``: right hops weighted by ``a``, left hops by ``b``.

    Diagonal entries are fixed by the sum-to-zero property.
    """
    mode_of(a, b, mu, q)
    return generator_from_rates(sector, RateTable(a, b, mu, q, epsilon))


def h_right(sector, mu, q, epsilon=1):
    return hamiltonian(sector, one_like(mu, q), zero_like(mu, q), mu, q, epsilon)


def h_left(sector, mu, q, epsilon=1):
    return hamiltonian(sector, zero_like(mu, q), one_like(mu, q), mu, q, epsilon)


def diagonal_closed_forms(size: int, mu, q) -> tuple[Scalar, Scalar]:
    """Total exit rates (right, left) of a site with ``size`` particles."""
    right = sum((q**i / (1 - mu * q**i) for i in range(size)), zero_like(mu, q))
    left = sum((1 / (1 - mu * q**i) for i in range(size)), zero_like(mu, q))
    return right, left


def verify_diagonal_closed_form(alpha: Sequence[int], mu, q) -> Check:
    alpha = tuple(alpha)
    nonzero = [g for g in below(alpha) if sum(g) > 0]
    right = sum((rate_right(g, alpha, mu, q) for g in nonzero), zero_like(mu, q))
    left = sum((rate_left(g, alpha, mu, q) for g in nonzero), zero_like(mu, q))
    cf_right, cf_left = diagonal_closed_forms(sum(alpha), mu, q)
    ok = right == cf_right and left == cf_left
    return Check(
        "diagonal_closed_form",
        ok,
        None if ok else {"alpha": alpha, "right": (right, cf_right), "left": (left, cf_left)},
    )


def check_markov_properties(op: SectorOperator) -> Check:
    """Column sums (1 for T, 0 for H) and the sign conditions."""
    target = 1 if op.kind == TRANSFER else 0
    for j, s in enumerate(op.column_sums()):
        if s != target:
            return Check("markov_properties", False, {"column": op.sector.configs[j], "sum": s})
    for j, col in enumerate(op.cols):
        for i, v in col.items():
            if v < 0 and (op.kind == TRANSFER or i != j):
                return Check("markov_properties", False, {"row": op.sector.configs[i], "column": op.sector.configs[j], "value": v})
    return Check("markov_properties", True, None, {"kind": op.kind, "dim": op.dim})


def _log_derivative(sector: Sector, lam0: Fraction, mu: Fraction, q: Fraction) -> SectorOperator:
    """Exact ``T(lam0)^{-1} dT/dlam (lam0)`` for homogeneous ``mu``.

    Every entry of ``lam^{|m|} T(lam)`` is a polynomial in ``lam`` of degree at
    most ``|m|``; it is sampled at ``|m| L + 2`` points, differentiated through
    Lagrange weights and checked against one more sample.
    """
    L = sector.L
    size = sum(sector.m)
    npts = size * L + 2
    xs = [Fraction(k + 2, 1) for k in range(npts)]
    mus = (mu,) * L
    samples = [transfer_matrix(sector, x, mus, q).scale(x**size) for x in xs]
    w, dw = _linalg.lagrange_weights(xs, lam0)
    p0 = _weighted(sector, samples, w)
    dp0 = _weighted(sector, samples, dw)
    # degree-bound audit at a fresh point
    probe = Fraction(1, 3) + lam0
    wp, _ = _linalg.lagrange_weights(xs, probe)
    if not _weighted(sector, samples, wp).equals(transfer_matrix(sector, probe, mus, q).scale(probe**size)):
        raise ArithmeticError("interpolation degree bound violated")
    # T = lam^{-|m|} P  =>  T' = lam^{-|m|} P' - |m| lam^{-|m|-1} P
    t0 = p0.scale(lam0 ** (-size))
    dt0 = dp0.scale(lam0 ** (-size)) - p0.scale(size * lam0 ** (-size - 1))
    direct = transfer_matrix(sector, lam0, mus, q)
    if not t0.equals(direct):
        raise ArithmeticError("interpolated T disagrees with direct evaluation")
    sol = _linalg.solve(t0.to_dense(), dt0.to_dense())
    cols = [{i: sol[i][j] for i in range(sector.dim) if sol[i][j] != 0} for j in range(sector.dim)]
    return SectorOperator(sector, cols, HAMILTONIAN)


def _weighted(sector, mats, weights) -> SectorOperator:
    cols = []
    for j in range(sector.dim):
        acc: dict[int, Fraction] = {}
        for m, w in zip(mats, weights):
            for i, v in m.cols[j].items():
                acc[i] = acc.get(i, 0) + w * v
        cols.append({i: v for i, v in acc.items() if v != 0})
    return SectorOperator(sector, cols, TRANSFER)


def baxter_hamiltonians(sector: Sector, mu: Fraction, q: Fraction) -> tuple[SectorOperator, SectorOperator]:
    """Generators extracted from ``T(lam | mu..mu)`` at ``lam = 1`` and ``lam = mu``."""
    d1 = _log_derivative(sector, Fraction(1), mu, q).scale(-1 / mu)
    d2 = _log_derivative(sector, mu, mu, q).scale(mu)
    return d1, d2


def verify_baxter(sector: Sector, mu, q, a=1, b=1) -> Check:
    if mode_of(mu, q) != EXACT:
        raise TypeError("verify_baxter runs in exact mode only")
    mu, q = Fraction(mu), Fraction(q)
    d1, d2 = baxter_hamiltonians(sector, mu, q)
    h1, h2 = h_right(sector, mu, q), h_left(sector, mu, q)
    checks = [
        d1.equals(h1, "baxter_lambda_1"),
        d2.equals(h2, "baxter_lambda_mu"),
        (d1.scale(Fraction(a)) + d2.scale(Fraction(b))).equals(hamiltonian(sector, Fraction(a), Fraction(b), mu, q), "baxter_mixture"),
    ]
    return all_ok("baxter", checks)


def parity_permutation(sector: Sector) -> list[int]:
    idx = sector.index
    return [idx[reverse_sites(c)] for c in sector.configs]


def verify_duality(sector: Sector, a, b, mu, q) -> Check:
    """``H(a, b, -1, 1/q, 1/mu) = P H(mu b, mu a, +1, q, mu) P^{-1}`` with P the site reversal."""
    lhs = hamiltonian(sector, a, b, 1 / mu, 1 / q, epsilon=-1)
    rhs = hamiltonian(sector, mu * b, mu * a, mu, q, epsilon=1).permuted(parity_permutation(sector))
    return lhs.equals(rhs, "duality")


# -- steady states -----------------------------------------------------------------------


UNIT_SUM = "unit_sum"
MPA_GAUGE = "mpa_gauge"


@dataclass
class SteadyState:
    sector: Sector
    probs: list[Scalar]
    normalization: str = UNIT_SUM

    def __getitem__(self, config: Config) -> Scalar:
        return self.probs[self.sector.index[tuple(config)]]

    def as_dict(self) -> dict[Config, Scalar]:
        return dict(zip(self.sector.configs, self.probs))

    def normalized(self) -> "SteadyState":
        total = sum(self.probs)
        return SteadyState(self.sector, [p / total for p in self.probs], UNIT_SUM)


def steady_state(op: SectorOperator, method: str = "auto") -> SteadyState:
    """Unique stationary vector of ``op``, normalised to unit sum.

    Transfer matrices are solved as ``(T - 1) x = 0``, generators as
    ``H x = 0``.  Raises :class:`NotIrreducible` unless the null space is
    one-dimensional.
    """
    sector = op.sector
    if sector.dim == 1:
        return SteadyState(sector, [one_like(*op.cols[0].values()) if op.cols[0] else Fraction(1)])
    values = [v for col in op.cols for v in col.values()]
    if values and mode_of(*values) == FLOAT:
        return _steady_state_float(op)
    a = op - identity(sector) if op.kind == TRANSFER else op
    dense = a.to_dense()
    basis = _linalg.nullspace(dense, method)
    if len(basis) != 1:
        raise NotIrreducible(f"null space has dimension {len(basis)}")
    vec = basis[0]
    total = sum(vec)
    return SteadyState(sector, [v / total for v in vec], UNIT_SUM)


def _steady_state_float(op: SectorOperator) -> SteadyState:
    import numpy as np

    a = np.array(op.to_dense(), dtype=float)
    if op.kind == TRANSFER:
        a = a - np.eye(op.dim)
    _, s, vt = np.linalg.svd(a)
    if s[-2] < 1e-12 * max(1.0, s[0]):
        raise NotIrreducible("numerically degenerate null space")
    v = vt[-1]
    v = v / v.sum()
    return SteadyState(op.sector, [float(x) for x in v], UNIT_SUM)


def verify_weight_conservation(sector: Sector, lam, mus, q, samples: int = 5) -> Check:
    """Images of sampled configurations never leave the sector."""
    step = max(1, sector.dim // samples)
    for beta in sector.configs[::step]:
        for target in transfer_column(beta, lam, tuple(mus), q):
            if tuple(map(sum, zip(*target))) != sector.m:
                return Check("weight_conservation", False, {"source": beta, "target": target})
    return Check("weight_conservation", True)
