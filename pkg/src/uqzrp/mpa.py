"""Matrix-product steady states for two species.

A configuration's weight is the trace of a product of site operators
``c(b+) k^{s_2} b-^{s_1}``, where ``c(b+)`` is a power series in ``b+``.
Each ``b-`` has to be compensated by a ``b+`` for the trace to be nonzero,
so only the finitely many ways of drawing ``m_1`` bosons from the
site series contribute.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._checks import Check
from .markov import UNIT_SUM, SteadyState, hamiltonian, steady_state, transfer_matrix
from .qboson import DivergentTrace, NOElement, fock_represent, no_trace
from .qseries import Scalar, format_rational, g_weight, mode_of, one_like, qfact, qpoch, zero_like
from .statespace import Config, Sector, compositions, config_weight, enumerate_sector, format_config

INHOMOGENEOUS = "inhomogeneous"
HOMOGENEOUS = "homogeneous"
TAZRP = "tazrp"
FORMULAS = (INHOMOGENEOUS, HOMOGENEOUS, TAZRP)

MPA_GAUGE = "mpa_gauge"


class ProportionalityError(ArithmeticError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class MpaQuery:
    """One configuration and the parameters of the formula evaluating it.

    ``mus`` holds one value per site (inhomogeneous) or a single value
    (homogeneous); the ``tazrp`` formula has ``q = mu = 0`` built in and
    ignores ``mus``.
    """

    config: Config
    mus: Scalar | tuple[Scalar, ...]
    q: Scalar
    formula: str = INHOMOGENEOUS

    def __post_init__(self):
        config = tuple(tuple(s) for s in self.config)
        object.__setattr__(self, "config", config)
        if any(len(s) != 2 for s in config):
            raise ValueError("matrix product weights are implemented for two species")
        if self.formula not in FORMULAS:
            raise ValueError(f"unknown formula {self.formula!r}")
        if self.formula == INHOMOGENEOUS:
            mus = tuple(self.mus)
            if len(mus) != len(config):
                raise ValueError("need one mu per site")
            object.__setattr__(self, "mus", mus)
            mode_of(self.q, *mus)
        elif self.formula == HOMOGENEOUS:
            mode_of(self.q, self.mus)
        elif self.q != 0:
            raise ValueError("the tazrp formula is the q = mu = 0 point")
        if config_weight(config)[1] < 1:
            raise DivergentTrace("species-2 total must be at least 1 for a convergent trace")

    @property
    def L(self) -> int:
        return len(self.config)

    def site_mus(self) -> tuple:
        if self.formula == INHOMOGENEOUS:
            return self.mus
        if self.formula == HOMOGENEOUS:
            return (self.mus,) * self.L
        return (zero_like(self.q),) * self.L

    def series(self, site: int, J: int) -> list[Scalar]:
        """First ``J + 1`` coefficients of the ``b+`` series at ``site``."""
        q = self.q
        if self.formula == INHOMOGENEOUS:
            mu = self.mus[site]
            return [qpoch(mu, j, q) / (mu**j * qfact(j, q)) for j in range(J + 1)]
        if self.formula == HOMOGENEOUS:
            return [qpoch(self.mus, j, q) / qfact(j, q) for j in range(J + 1)]
        return [one_like(q)] * (J + 1)

    def prefactor(self) -> Scalar:
        q = self.q
        out = one_like(q)
        for site, sigma in enumerate(self.config):
            if self.formula == INHOMOGENEOUS:
                out *= g_weight(sigma, self.mus[site], q)
            elif self.formula == HOMOGENEOUS:
                out *= qpoch(self.mus, sum(sigma), q) / (qfact(sigma[0], q) * qfact(sigma[1], q))
        return out


def _trace_sum(config: Config, series: Sequence[Sequence[Scalar]], q: Scalar, first_power: int = 0) -> Scalar:
    """``Tr(prod_i (sum_j c_i[j] b+^j) k^{s_i2} b-^{s_i1})`` summed over ``sum_i j_i = m_1``.

    Prefix products are grouped by the number of ``b+`` drawn so far, so
    the composition sum costs one multiplication per (site, prefix total, j).
    """
    m1 = sum(s[0] for s in config)
    prefixes = {0: NOElement.scalar(one_like(q), q)}
    for sigma, coeffs in zip(config, series):
        nxt: dict[int, NOElement] = {}
        for used, elem in prefixes.items():
            for j in range(first_power, m1 - used + 1):
                c = coeffs[j]
                if c == 0:
                    continue
                term = elem * NOElement.monomial(j, sigma[1], sigma[0], q, c)
                nxt[used + j] = nxt[used + j] + term if used + j in nxt else term
        prefixes = nxt
    if m1 not in prefixes:
        return zero_like(q)
    return no_trace(prefixes[m1])


def mpa_probability(query: MpaQuery) -> Scalar:
    """Unnormalised matrix-product weight of ``query.config``."""
    m1 = config_weight(query.config)[0]
    series = [query.series(i, m1) for i in range(query.L)]
    return query.prefactor() * _trace_sum(query.config, series, query.q)


def tazrp_trace(config: Config, first_power: int = 0, q: Scalar = 0) -> Scalar:
    """Weight at ``q = mu = 0`` with site series ``sum_{j >= first_power} b+^j``.

    ``first_power=0`` is the ``q = mu = 0`` value of the homogeneous
    formula; ``first_power=1`` drops the constant term of every site series.
    """
    q = Fraction(q)
    m1 = config_weight(config)[0]
    series = [[one_like(q)] * (m1 + 1) for _ in config]
    return _trace_sum(tuple(map(tuple, config)), series, q, first_power)


def fock_trace_probability(query: MpaQuery, D: int = 40) -> float:
    """Float secondary oracle: the same weight from truncated Fock matrices.

    The truncated trace misses terms of order ``q^D``.
    """
    qf = float(query.q)
    prod = None
    for site, sigma in enumerate(query.config):
        coeffs = [float(c) for c in query.series(site, D - 1)]
        elem = NOElement.from_bplus_series(coeffs, qf) * NOElement.monomial(0, sigma[1], sigma[0], qf)
        mat = np.array(fock_represent(elem, D).mat, dtype=float)
        prod = mat if prod is None else prod @ mat
    return float(query.prefactor()) * float(np.trace(prod))


def condensed_closed_form(i: int, m: Sequence[int], mus: Sequence[Scalar], q: Scalar) -> Scalar:
    """Weight of the configuration with every particle at site ``i``."""
    m1, m2 = m
    mu = mus[i]
    size = m1 + m2
    head = qpoch(mu, size, q) / (mu**size * qfact(size, q) * (1 - q**m2))
    total = zero_like(q, *mus)
    for rs in compositions(m1, len(mus)):
        term = one_like(q)
        for r, mu_j in zip(rs, mus):
            term *= qpoch(mu_j, r, q) / (mu_j**r * qfact(r, q))
        total += term
    return head * total


@dataclass
class Report:
    sector: Sector
    normalization: str
    entries: list[tuple[Config, Scalar]]
    ratio_to_direct: Scalar
    check: Check

    def to_json(self) -> dict:
        return {
            "sector": {"n": self.sector.n, "L": self.sector.L, "m": list(self.sector.m), "dim": self.sector.dim},
            "normalization": self.normalization,
            "entries": [{"config": format_config(c), "value": format_rational(v)} for c, v in self.entries],
            "ratio_to_direct": format_rational(self.ratio_to_direct),
            "check": self.check.to_json(),
        }


def mpa_vector(sector: Sector, mus, q, formula: str = INHOMOGENEOUS) -> list[Scalar]:
    return [mpa_probability(MpaQuery(c, mus, q, formula)) for c in sector.configs]


def crosscheck_steady(sector: Sector, mus, q, formula: str = INHOMOGENEOUS, lam: Scalar | None = None, direct: SteadyState | None = None) -> Report:
    """Compare matrix-product weights with the null vector of the dynamics.

    The direct steady state comes from ``T(lam)`` (inhomogeneous) or the
    generator with ``a = b = 1`` (homogeneous).  ``ratio_to_direct`` is the
    single scalar ``mpa / direct`` (direct vector at unit sum); any
    disagreement raises :class:`ProportionalityError`.
    """
    if direct is None:
        if formula == INHOMOGENEOUS:
            if lam is None:
                lam = (1 + max(mus)) / 2
            direct = steady_state(transfer_matrix(sector, lam, tuple(mus), q))
        elif formula == HOMOGENEOUS:
            one = one_like(q, mus)
            direct = steady_state(hamiltonian(sector, one, one, mus, q))
        else:
            raise ValueError("crosscheck_steady needs an inhomogeneous or homogeneous formula")
    values = mpa_vector(sector, mus, q, formula)
    ratio = None
    for config, v, p in zip(sector.configs, values, direct.probs):
        if p == 0:
            if v != 0:
                raise ProportionalityError("direct weight vanishes", {"config": config, "mpa": v})
            continue
        r = v / p
        if ratio is None:
            ratio = r
        elif r != ratio:
            raise ProportionalityError(
                "matrix-product weights are not proportional to the steady state",
                {"config": format_config(config), "ratio": r, "expected": ratio},
            )
    check = Check("mpa_proportional", True, None, {"dim": sector.dim})
    return Report(sector, MPA_GAUGE, list(zip(sector.configs, values)), ratio, check)


def _separated(m, l, L, j):
    config = [(0, 0)] * L
    config[0] = (m[0] - l[0], m[1] - l[1])
    config[j - 1] = tuple(l)
    return tuple(config)


def f_weight(s: int, mu, q) -> Scalar:
    return qpoch(mu, s, q) / qfact(s, q)


def conjecture_ldma(m: Sequence[int], L: int, j: int, r: int, mu, q) -> tuple[Scalar, Scalar, bool]:
    """Separation ratio for ``r`` particles moved from site 1 to site ``j``.

    Returns ``(lhs, rhs, equal)`` with the homogeneous matrix-product sum
    on the left and ``f_{|m|-r} f_r / f_{|m|}`` on the right.
    """
    m = tuple(m)
    if not 2 <= j <= L:
        raise ValueError("site j must lie in [2, L]")
    size = sum(m)
    if not 0 <= r <= size:
        raise ValueError("need 0 <= r <= |m|")
    base = mpa_probability(MpaQuery(_separated(m, (0, 0), L, j), mu, q, HOMOGENEOUS))
    total = zero_like(mu, q)
    for l1 in range(0, min(r, m[0]) + 1):
        l2 = r - l1
        if l2 > m[1]:
            continue
        config = _separated(m, (l1, l2), L, j)
        total += mpa_probability(MpaQuery(config, mu, q, HOMOGENEOUS))
    lhs = total / base
    rhs = f_weight(size - r, mu, q) * f_weight(r, mu, q) / f_weight(size, mu, q)
    return lhs, rhs, lhs == rhs


def unit_sum(values: Sequence[Scalar]) -> list[Scalar]:
    total = sum(values)
    return [v / total for v in values]


def steady_from_mpa(sector: Sector, mus, q, formula: str = INHOMOGENEOUS) -> SteadyState:
    """Matrix-product weights of a whole sector at unit sum."""
    return SteadyState(sector, unit_sum(mpa_vector(sector, mus, q, formula)), UNIT_SUM)


def sector_for(L: int, m: Sequence[int], cap: int | None = None) -> Sector:
    return enumerate_sector(2, L, m) if cap is None else enumerate_sector(2, L, m, cap)
