"""Built-in parameter grids for the identity checks.

Each suite returns a list of :class:`Check` results, one per
(identity, argument, parameter point).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from . import markov, qboson, stochastic_r
from ._checks import Check
from .qseries import rational_points
from .statespace import enumerate_sector, occupancies_of_size


def _weights(n: int, max_size: int):
    for s in range(max_size + 1):
        yield from occupancies_of_size(n, s)


def regime_points(count: int, seed: int = 0) -> list[tuple[Fraction, Fraction, Fraction]]:
    """``(lam, mu, q)`` with ``0 < mu < lam < 1`` and ``0 < q < 1``."""
    out = []
    for a, b, q in rational_points(count, 3, seed):
        lam, mu = max(a, b), min(a, b)
        if lam == mu:
            mu = lam / 2
        out.append((lam, mu, q))
    return out


def spectral_triples(count: int, seed: int = 1):
    return rational_points(count, 4, seed)


def suite_ybe(n_max=3, w_max=4, points=3, weights=None) -> list[Check]:
    out = []
    pts = spectral_triples(points)
    for n in range(1, n_max + 1):
        ws = [tuple(weights)] if weights is not None and len(weights) == n else ([] if weights is not None else list(_weights(n, w_max)))
        for w in ws:
            for nu1, nu2, nu3, q in pts:
                c = stochastic_r.verify_yang_baxter(w, nu1, nu2, nu3, q)
                c.detail.update(n=n, point=(nu1, nu2, nu3, q))
                out.append(c)
    return out


def suite_inversion(n_max=3, w_max=4, points=3) -> list[Check]:
    out = []
    for n in range(1, n_max + 1):
        for w in _weights(n, w_max):
            for lam, mu, q in regime_points(points):
                out.append(stochastic_r.verify_inversion(w, lam, mu, q))
    return out


def suite_stochastic(n_max=3, w_max=4, points=3) -> list[Check]:
    """Sum-to-unity, the sum rule, support and nonnegativity."""
    out = []
    for n in range(1, n_max + 1):
        for w in _weights(n, w_max):
            for lam, mu, q in regime_points(points):
                out.append(stochastic_r.verify_column_sums(w, lam, mu, q))
                out.append(stochastic_r.verify_sum_rule(w, lam, mu, q))
                out.append(stochastic_r.verify_support(w, lam, mu, q))
                out.append(stochastic_r.verify_nonnegative(w, lam, mu, q))
    return out


def suite_gauge(n_max=3, w_max=4, points=3) -> list[Check]:
    """Gauge identities over every element of each conserved-weight block.

    The factorisation identity relates blocks of weights ``alpha + gamma``
    and ``alpha``, so it gets its own loop with ``alpha = delta + beta``.
    """
    out = []
    for n in range(1, n_max + 1):
        for lam, mu, q in regime_points(points):
            for w in _weights(n, w_max):
                pairs = stochastic_r.pairs_of_weight(w)
                for (a, b), (g, d) in product(pairs, pairs):
                    out.append(stochastic_r.check_transpose_gauge(a, b, g, d, lam, mu, q))
                for a, b in pairs:
                    for g in _weights(n, w_max - sum(w) if sum(w) <= w_max else 0):
                        out.append(stochastic_r.check_g_factorization(w, b, g, a, lam, mu, q))
            for size in range(w_max + 1):
                for alpha in _weights(n, size):
                    for beta in _weights(n, w_max - sum(alpha)):
                        for gamma in stochastic_r.below(alpha):
                            out.append(stochastic_r.check_exchange(alpha, beta, gamma, lam, mu, q))
                    for gamma in stochastic_r.below(alpha):
                        out.append(stochastic_r.check_reversal(gamma, alpha, lam, mu, q))
    return out


def _sectors(L_max, m_max, n=2):
    for L in range(1, L_max + 1):
        for size in range(m_max + 1):
            for m in occupancies_of_size(n, size):
                yield enumerate_sector(n, L, m)


def suite_commute(L_max=3, m_max=4, points=2) -> list[Check]:
    """``[T(lam1), T(lam2)] = 0`` and ``[H1, H2] = 0``."""
    out = []
    for sector in _sectors(L_max, m_max):
        for lam, mu, q in regime_points(points):
            h1, h2 = markov.h_right(sector, mu, q), markov.h_left(sector, mu, q)
            c = (h1 @ h2).equals(h2 @ h1, "h1_h2_commute")
            c.detail.update(L=sector.L, m=sector.m)
            out.append(c)
            if sector.dim <= 60:
                mus = tuple(mu * Fraction(k + 1, sector.L + 1) for k in range(sector.L))
                out.append(markov.verify_commuting_family(sector, lam, (lam + 1) / 2, mus, q))
    return out


def suite_baxter(m_max=3, points=2) -> list[Check]:
    out = []
    for size in range(1, m_max + 1):
        for m in occupancies_of_size(2, size):
            sector = enumerate_sector(2, 2, m)
            for _, mu, q in regime_points(points):
                c = markov.verify_baxter(sector, mu, q)
                c.detail.update(m=m)
                out.append(c)
    return out


def suite_duality(L_max=3, points=2) -> list[Check]:
    out = []
    for L in range(1, L_max + 1):
        sector = enumerate_sector(2, L, (1, 1))
        for _, mu, q in regime_points(points):
            c = markov.verify_duality(sector, Fraction(1), Fraction(2, 3), mu, q)
            c.detail.update(L=L)
            out.append(c)
    return out


def _occ2(max_size):
    return list(qboson.occupancies2(max_size))


def suite_zf(max_size=3, points=3, D=12) -> list[Check]:
    out = []
    for lam, mu, q in regime_points(points):
        cache = qboson._FockCache(q, D)
        for a, b in product(_occ2(max_size), repeat=2):
            c = qboson.verify_zf_relation(a, b, lam, mu, q, D, cache)
            c.detail.update(alpha=a, beta=b)
            out.append(c)
    return out


def suite_aux(max_size=3, points=3, D=12) -> list[Check]:
    out = []
    for lam, mu, q in regime_points(points):
        out.append(qboson.verify_x0_inverse(lam, q, D))
        for b, g in product(_occ2(max_size), repeat=2):
            c = qboson.verify_aux_condition(b, g, lam, mu, q, D)
            c.detail.update(beta=b, gamma=g)
            out.append(c)
    return out


def suite_lemmas(max_index=3, points=3, D=12) -> list[Check]:
    out = []
    for lam, mu, q in regime_points(points):
        for a1, a2 in product(range(max_index + 1), repeat=2):
            out.append(qboson.verify_proof_identities(a1, a2, lam, mu, q, D))
        out.append(qboson.verify_product_commutation(lam / 3, mu, q, D))
        for a, b in product(_occ2(2), repeat=2):
            out.append(qboson.verify_trivial_rep(a, b, q))
    return out


SUITES = {
    "ybe": suite_ybe,
    "inversion": suite_inversion,
    "stochastic": suite_stochastic,
    "gauge": suite_gauge,
    "commute": suite_commute,
    "baxter": suite_baxter,
    "duality": suite_duality,
    "zf": suite_zf,
    "aux": suite_aux,
    "lemmas": suite_lemmas,
}
