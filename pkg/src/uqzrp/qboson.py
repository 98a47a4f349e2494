"""q-boson algebra: normal ordering, exact traces and truncated Fock matrices.

Generators ``b+``, ``b-``, ``k`` obey::

    k b+ = q b+ k,   k b- = q^{-1} b- k,   b+ b- = 1 - k,   b- b+ = 1 - q k

Elements are stored in the normal order ``b+^a k^s b-^c``.  On the Fock
space ``b+|m> = |m+1>``, ``b-|m> = (1 - q^m)|m-1>``, ``k|m> = q^m |m>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._checks import Check, all_ok
from .qseries import Scalar, g_weight, mode_of, one_like, phi_exp, qbinom, qfact, qpoch, zero_like
from .statespace import below
from .stochastic_r import phi_weight

Monomial = tuple[int, int, int]


class DivergentTrace(ArithmeticError):
    pass


@lru_cache(maxsize=None, typed=True)
def _lower_raise(c: int, d: int, q) -> tuple[tuple[Monomial, Scalar], ...]:
    """Normal-ordered form of ``b-^c b+^d``.

    Uses ``b- b+^d = b+^{d-1} (1 - q^d k)`` and ``b+^a k^s b-^c k = q^c b+^a k^{s+1} b-^c``.
    """
    if c == 0 or d == 0:
        return (((d, 0, c), one_like(q)),)
    out: dict[Monomial, Scalar] = {}
    qd = q**d
    for (a, s, cc), v in _lower_raise(c - 1, d - 1, q):
        out[(a, s, cc)] = out.get((a, s, cc), 0) + v
        key = (a, s + 1, cc)
        out[key] = out.get(key, 0) - v * qd * q**cc
    return tuple((k, v) for k, v in out.items() if v != 0)


@lru_cache(maxsize=None, typed=True)
def _reduce(a: int, s: int, c: int, q, full: bool) -> tuple[tuple[Monomial, Scalar], ...]:
    """Rewrite ``b+^a k^s b-^c`` via ``b+ k^s b- = q^{-s}(k^s - k^{s+1})``.

    With ``full=False`` only the ``s = 0`` case (``b+ b- = 1 - k``) is used,
    which stays valid at ``q = 0``; with ``full=True`` the result has
    ``min(a, c) = 0`` in every term.
    """
    if min(a, c) == 0 or (s and not full):
        return (((a, s, c), one_like(q)),)
    f = q ** (-s) if s else one_like(q)
    out: dict[Monomial, Scalar] = {}
    for sign, ss in ((1, s), (-1, s + 1)):
        for m, v in _reduce(a - 1, ss, c - 1, q, full):
            out[m] = out.get(m, 0) + sign * f * v
    return tuple((m, v) for m, v in out.items() if v != 0)


@lru_cache(maxsize=1 << 16, typed=True)
def _monomial_product(x: Monomial, y: Monomial, q) -> tuple[tuple[Monomial, Scalar], ...]:
    a, s, c = x
    d, t, e = y
    out: dict[Monomial, Scalar] = {}
    for (a2, s2, c2), v in _lower_raise(c, d, q):
        # b+^a k^s (b+^a2 k^s2 b-^c2) k^t b-^e
        w = v * q ** (s * a2 + c2 * t)
        for m, u in _reduce(a + a2, s + s2 + t, c2 + e, q, False):
            out[m] = out.get(m, 0) + w * u
    return tuple(out.items())


class NOElement:
    """Finite linear combination of normal-ordered monomials."""

    __slots__ = ("terms", "q")

    def __init__(self, terms: dict[Monomial, Scalar], q: Scalar):
        self.q = q
        out: dict[Monomial, Scalar] = {}
        for (a, s, c), v in terms.items():
            for m, u in _reduce(a, s, c, q, False):
                out[m] = out.get(m, 0) + v * u
        self.terms = {k: v for k, v in out.items() if v != 0}

    @classmethod
    def monomial(cls, a: int, s: int, c: int, q: Scalar, coeff: Scalar = 1) -> "NOElement":
        if min(a, s, c) < 0:
            raise ValueError("exponents must be nonnegative")
        return cls({(a, s, c): coeff}, q)

    @classmethod
    def scalar(cls, value: Scalar, q: Scalar) -> "NOElement":
        return cls({(0, 0, 0): value}, q)

    @classmethod
    def from_bplus_series(cls, coeffs: Sequence[Scalar], q: Scalar) -> "NOElement":
        """``sum_j coeffs[j] b+^j``."""
        return cls({(j, 0, 0): c for j, c in enumerate(coeffs)}, q)

    def _same_q(self, other):
        if self.q != other.q or type(self.q) is not type(other.q):
            raise ValueError("elements built with different q")

    def _coerce(self, other):
        if isinstance(other, NOElement):
            self._same_q(other)
            return other
        return NOElement.scalar(other, self.q)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return NOElement(out, self.q)

    __radd__ = __add__

    def __neg__(self):
        return NOElement({k: -v for k, v in self.terms.items()}, self.q)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, NOElement):
            return NOElement({k: v * other for k, v in self.terms.items()}, self.q)
        return no_multiply(self, other)

    def __rmul__(self, other):
        return NOElement({k: other * v for k, v in self.terms.items()}, self.q)

    def __pow__(self, n: int):
        out = NOElement.scalar(one_like(self.q), self.q)
        for _ in range(n):
            out = out * self
        return out

    def reduced(self) -> "NOElement":
        """Unique form with no term containing both ``b+`` and ``b-`` (needs ``q != 0``)."""
        if self.q == 0:
            raise ZeroDivisionError("full reduction needs q != 0")
        out: dict[Monomial, Scalar] = {}
        for (a, s, c), v in self.terms.items():
            for m, u in _reduce(a, s, c, self.q, True):
                out[m] = out.get(m, 0) + v * u
        res = NOElement.__new__(NOElement)
        res.q, res.terms = self.q, {k: v for k, v in out.items() if v != 0}
        return res

    def __eq__(self, other):
        if not isinstance(other, NOElement):
            other = NOElement.scalar(other, self.q)
        diff = self - other
        if self.q == 0:
            # at q = 0 the algebra degenerates and the stored form is not unique
            return not diff.terms
        return not diff.reduced().terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, s, c), v in sorted(self.terms.items()):
            mono = " ".join(p for p in (f"b+^{a}" if a else "", f"k^{s}" if s else "", f"b-^{c}" if c else "") if p)
            parts.append(f"({v})" + (f" {mono}" if mono else ""))
        return " + ".join(parts)

    @property
    def lowering_degree(self) -> int:
        return max((c for _, _, c in self.terms), default=0)

    @property
    def raising_degree(self) -> int:
        return max((a for a, _, _ in self.terms), default=0)


def bplus(q) -> NOElement:
    return NOElement.monomial(1, 0, 0, q)


def bminus(q) -> NOElement:
    return NOElement.monomial(0, 0, 1, q)


def kop(q) -> NOElement:
    return NOElement.monomial(0, 1, 0, q)


def no_multiply(x: NOElement, y: NOElement) -> NOElement:
    """Exact normal-ordered product ``x y``."""
    x._same_q(y)
    q = x.q
    out: dict[Monomial, Scalar] = {}
    for mx, vx in x.terms.items():
        for my, vy in y.terms.items():
            for m, v in _monomial_product(mx, my, q):
                out[m] = out.get(m, 0) + vx * vy * v
    return NOElement(out, q)


def no_qpoch(x: NOElement, n: int) -> NOElement:
    """``(x; q)_n = (1 - x)(1 - q x)...(1 - q^{n-1} x)``."""
    one = NOElement.scalar(one_like(x.q), x.q)
    out = one
    for i in range(n):
        out = out * (one - x * x.q**i)
    return out


@lru_cache(maxsize=None, typed=True)
def monomial_trace(a: int, s: int, q) -> Scalar:
    """Trace of ``b+^a k^s b-^a``.

    ``sum_{n>=0} q^{s n} (q^{n+1}; q)_a``, summed in closed form as
    ``sum_j (-1)^j q^{j(j+1)/2} binom(a, j)_q / (1 - q^{s+j})``.
    Divergent for ``s = 0``.
    """
    if s == 0:
        raise DivergentTrace(f"Tr(b+^{a} b-^{a}) diverges")
    total = zero_like(q)
    for j in range(a + 1):
        total += (-1) ** j * q ** (j * (j + 1) // 2) * qbinom(a, j, q) / (1 - q ** (s + j))
    return total


def no_trace(x: NOElement, q: Scalar | None = None) -> Scalar:
    """Exact Fock-space trace.

    For ``q != 0`` the element is reduced to a polynomial in ``k`` plus terms
    with unequal ``b+``/``b-`` powers (traceless), and ``Tr(k^r) = 1/(1 - q^r)``.
    At ``q = 0`` each diagonal monomial is summed by :func:`monomial_trace`.
    """
    if q is not None and q != x.q:
        raise ValueError("q does not match the element")
    q = x.q
    if x.terms.get((0, 0, 0), 0) != 0:
        raise DivergentTrace("element has a nonzero constant term")
    total = zero_like(q)
    if q != 0:
        for (a, s, c), v in x.reduced().terms.items():
            if a == c == 0:
                if s == 0:
                    raise DivergentTrace("element reduces to a nonzero constant term")
                total += v / (1 - q**s)
        return total
    for (a, s, c), v in x.terms.items():
        if a == c:
            total += v * monomial_trace(a, s, q)
    return total


# -- Fock space ----------------------------------------------------------------------------


@dataclass
class FockMatrix:
    """Truncation of an operator to ``|0>..|D-1>`` (column action).

    ``mat[m, m']`` is the coefficient of ``|m>`` in ``X|m'>``.  Only the rows
    ``m < window`` are guaranteed to agree with the untruncated operator;
    ``lowering`` is the number of ``b-`` factors, which shrinks the window of
    any product this matrix is the left factor of.
    """

    mat: np.ndarray
    window: int
    lowering: int
    q: Scalar

    @property
    def D(self) -> int:
        return self.mat.shape[0]

    def __matmul__(self, other: "FockMatrix") -> "FockMatrix":
        return FockMatrix(
            self.mat.dot(other.mat),
            min(self.window, other.window - self.lowering),
            self.lowering + other.lowering,
            self.q,
        )

    def __add__(self, other: "FockMatrix") -> "FockMatrix":
        return FockMatrix(self.mat + other.mat, min(self.window, other.window), max(self.lowering, other.lowering), self.q)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "FockMatrix":
        return FockMatrix(self.mat * c, self.window, self.lowering, self.q)

    def pairing(self, m: int, mp: int) -> Scalar:
        """``<m|X|m'>`` under the pairing ``<m|m'> = delta (q)_m``."""
        self._check_row(m)
        return self.mat[m, mp] * qfact(m, self.q)

    def _check_row(self, m):
        if m >= self.window:
            raise IndexError(f"row {m} is outside the exact window ({self.window})")

    def truncated_trace(self) -> Scalar:
        return sum(self.mat[m, m] for m in range(self.D))

    def compare(self, other: "FockMatrix", name: str = "fock_equality", tol: float = 0.0) -> Check:
        window = min(self.window, other.window)
        if window <= 0:
            raise ValueError(f"{name}: empty exactness window; increase D")
        for m in range(window):
            for mp in range(self.D):
                x, y = self.mat[m, mp], other.mat[m, mp]
                if (x != y) if tol == 0 else abs(x - y) > tol:
                    return Check(name, False, {"row": m, "column": mp, "lhs": x, "rhs": y}, {"window": window})
        return Check(name, True, None, {"window": window, "D": self.D})


def _zero_matrix(D, q):
    mat = np.empty((D, D), dtype=object)
    mat.fill(zero_like(q))
    return mat


def fock_represent(x, D: int) -> FockMatrix:
    """Truncated matrix of an :class:`NOElement` or :class:`SiteOperator`."""
    if isinstance(x, SiteOperator):
        return x.fock(D)
    if D < 1:
        raise ValueError("cutoff must be positive")
    q = x.q
    mat = _zero_matrix(D, q)
    for (a, s, c), v in x.terms.items():
        for m in range(c, D):
            target = m - c + a
            if target >= D:
                continue
            amp = v * q ** (s * (m - c))
            for i in range(c):
                amp *= 1 - q ** (m - i)
            mat[target, m] += amp
    return FockMatrix(mat, D, x.lowering_degree, q)


# -- site operators ---------------------------------------------------------------------------


def vertex_coefficients(mu: Scalar, q: Scalar, J: int) -> list[Scalar]:
    """Series coefficients ``mu^{-j} (mu)_j / (q)_j`` of ``(b+)_inf / (b+/mu)_inf``."""
    return [qpoch(mu, j, q) / (mu**j * qfact(j, q)) for j in range(J + 1)]


def ratio_coefficients(w: Scalar, z: Scalar, q: Scalar, J: int) -> list[Scalar]:
    """Coefficients of ``(z w b+)_inf / (z b+)_inf = sum_j (w)_j/(q)_j z^j b+^j``."""
    return [qpoch(w, j, q) * z**j / qfact(j, q) for j in range(J + 1)]


@dataclass(frozen=True)
class SiteOperator:
    """``Z_alpha(mu) = (b+)_inf / (b+/mu)_inf  k^{alpha_2} b-^{alpha_1}`` for two species.

    With ``weighted=True`` it stands for ``X_alpha(mu) = g_alpha(mu) Z_alpha(mu)``.
    """

    alpha: tuple[int, int]
    mu: Scalar
    q: Scalar
    weighted: bool = False

    def __post_init__(self):
        if len(self.alpha) != 2:
            raise ValueError("site operators are realised for two species only")
        mode_of(self.mu, self.q)

    @property
    def prefactor(self) -> Scalar:
        return g_weight(self.alpha, self.mu, self.q) if self.weighted else one_like(self.mu, self.q)

    def tail(self) -> NOElement:
        return NOElement.monomial(0, self.alpha[1], self.alpha[0], self.q)

    def truncated(self, J: int) -> NOElement:
        """Series cut after ``b+^J``, times the tail and prefactor."""
        series = NOElement.from_bplus_series(vertex_coefficients(self.mu, self.q, J), self.q)
        return (series * self.tail()) * self.prefactor

    def fock(self, D: int) -> FockMatrix:
        fm = fock_represent(self.truncated(D - 1), D)
        fm.lowering = self.alpha[0]
        return fm


def x_op(alpha, mu, q) -> SiteOperator:
    return SiteOperator(tuple(alpha), mu, q, weighted=True)


def z_op(alpha, mu, q) -> SiteOperator:
    return SiteOperator(tuple(alpha), mu, q, weighted=False)


def x0_inverse(lam: Scalar, q: Scalar, D: int) -> FockMatrix:
    """``X_0(lam)^{-1} = (b+/lam)_inf / (b+)_inf`` truncated; unit lower triangular."""
    series = NOElement.from_bplus_series(ratio_coefficients(1 / lam, one_like(lam, q), q, D - 1), q)
    return fock_represent(series, D)


# -- identity checks ------------------------------------------------------------------------


class _FockCache:
    def __init__(self, q, D):
        self.q, self.D = q, D
        self._x = {}
        self._prod = {}

    def x(self, alpha, mu):
        key = (tuple(alpha), mu)
        if key not in self._x:
            self._x[key] = x_op(alpha, mu, self.q).fock(self.D)
        return self._x[key]

    def xx(self, a, mu_a, b, mu_b):
        key = (tuple(a), mu_a, tuple(b), mu_b)
        if key not in self._prod:
            self._prod[key] = self.x(a, mu_a) @ self.x(b, mu_b)
        return self._prod[key]


def verify_zf_relation(alpha, beta, lam, mu, q, D: int = 12, cache: _FockCache | None = None) -> Check:
    """``X_alpha(mu) X_beta(lam) = sum S(lam,mu)^{beta,alpha}_{gamma,delta} X_gamma(lam) X_delta(mu)``.

    Compared on the exact window of the ``D``-truncated Fock matrices.
    """
    alpha, beta = tuple(alpha), tuple(beta)
    cache = cache or _FockCache(q, D)
    lhs = cache.xx(alpha, mu, beta, lam)
    total = tuple(x + y for x, y in zip(alpha, beta))
    rhs = None
    for delta in below(total):
        if any(b > d for b, d in zip(beta, delta)):
            continue
        gamma = tuple(t - d for t, d in zip(total, delta))
        coeff = phi_weight(beta, delta, lam, mu, q)
        if coeff == 0:
            continue
        term = cache.xx(gamma, lam, delta, mu).scale(coeff)
        rhs = term if rhs is None else rhs + term
    return lhs.compare(rhs, "zf_relation")


def verify_aux_condition(beta, gamma, lam, mu, q, D: int = 12) -> Check:
    """``X_beta(mu) X_0(lam)^{-1} X_gamma(lam) = q^{phi(beta,gamma)} g_beta(mu) g_gamma(lam)/g_{beta+gamma}(mu) X_{beta+gamma}(mu)``."""
    beta, gamma = tuple(beta), tuple(gamma)
    bg = tuple(x + y for x, y in zip(beta, gamma))
    lhs = x_op(beta, mu, q).fock(D) @ (x0_inverse(lam, q, D) @ x_op(gamma, lam, q).fock(D))
    factor = q ** phi_exp(beta, gamma) * g_weight(beta, mu, q) * g_weight(gamma, lam, q) / g_weight(bg, mu, q)
    rhs = x_op(bg, mu, q).fock(D).scale(factor)
    return lhs.compare(rhs, "aux_condition")


def verify_x0_inverse(lam, q, D: int = 12) -> Check:
    prod = x0_inverse(lam, q, D) @ x_op((0, 0), lam, q).fock(D)
    ident = FockMatrix(np.identity(D, dtype=object) * one_like(lam, q), D, 0, q)
    return prod.compare(ident, "x0_inverse")


def k_alpha(alpha, q) -> NOElement:
    return NOElement.monomial(0, alpha[1], alpha[0], q)


def verify_trivial_rep(alpha, beta, q) -> Check:
    """``K_alpha K_beta = q^{phi(alpha,beta)} K_{alpha+beta}`` with ``K = k^{a2} b-^{a1}``."""
    lhs = k_alpha(alpha, q) * k_alpha(beta, q)
    ab = tuple(x + y for x, y in zip(alpha, beta))
    rhs = k_alpha(ab, q) * q ** phi_exp(alpha, beta)
    ok = lhs == rhs
    return Check("trivial_rep", ok, None if ok else {"alpha": tuple(alpha), "beta": tuple(beta), "lhs": repr(lhs), "rhs": repr(rhs)})


def _sign(n):
    return -1 if n % 2 else 1


def lemma_polynomial(alpha2: int, lam, mu, q) -> tuple[NOElement, NOElement]:
    """Both sides of the ``alpha_1 = 0`` case: a polynomial identity in ``b+``."""
    bp = bplus(q)
    nu = mu / lam
    lhs = no_qpoch(bp * (1 / lam), alpha2)
    rhs = NOElement({}, q)
    for g2 in range(alpha2 + 1):
        c = nu**g2 * qpoch(lam, g2, q) * qpoch(nu, alpha2 - g2, q) / qpoch(mu, alpha2, q) * qbinom(alpha2, g2, q)
        rhs = rhs + no_qpoch(bp * (1 / mu), g2) * no_qpoch(bp * q**g2, alpha2 - g2) * c
    return lhs, rhs


def lemma_lowering(m: int, mu, q) -> tuple[NOElement, NOElement]:
    """Both sides of ``(b+)_m b-^m = (-1)^m q^{m(m-1)/2} sum_s mu^{m-s} binom(m,s) (mu)_s (q^{1-m} Y / mu)_{m-s}``, ``Y = b- + k``."""
    bp, bm, k = bplus(q), bminus(q), kop(q)
    lhs = no_qpoch(bp, m) * bm**m
    y = bm + k
    rhs = NOElement({}, q)
    for s in range(m + 1):
        c = mu ** (m - s) * qbinom(m, s, q) * qpoch(mu, s, q)
        rhs = rhs + no_qpoch(y * (q ** (1 - m) / mu), m - s) * c
    rhs = rhs * (_sign(m) * q ** (m * (m - 1) // 2))
    return lhs, rhs


def exchange_polynomial(alpha1: int, alpha2: int, lam, mu, q) -> tuple[NOElement, NOElement]:
    """Both sides of the reduced ZF relation once the infinite products are removed."""
    bp, bm, k = bplus(q), bminus(q), kop(q)
    nu = mu / lam
    w = bm * q ** (-alpha2) + k * (1 / lam)
    a_tot = alpha1 + alpha2
    lhs = no_qpoch(bp * (1 / lam), alpha2) * no_qpoch(w * q ** (1 - alpha1), alpha1)
    lhs = lhs * (_sign(alpha1) * q ** (alpha1 * (alpha1 - 1) // 2))
    rhs = NOElement({}, q)
    for g1 in range(alpha1 + 1):
        for g2 in range(alpha2 + 1):
            g = g1 + g2
            x = bm * q ** (-g2) + k * (1 / mu)
            c = (
                _sign(g1)
                * q ** ((g1 - alpha1) * alpha2 + g1 * (g1 - 1) // 2)
                * nu**g
                * qpoch(lam, g, q)
                * qpoch(nu, a_tot - g, q)
                / qpoch(mu, a_tot, q)
                * qbinom(alpha1, g1, q)
                * qbinom(alpha2, g2, q)
            )
            term = no_qpoch(bp * (1 / mu), g2) * no_qpoch(bp * q**g, a_tot - g) * no_qpoch(x * q ** (1 - g1), g1) * bm ** (alpha1 - g1)
            rhs = rhs + term * c
    return lhs, rhs


def _pair_check(name, lhs: NOElement, rhs: NOElement, D: int, **detail) -> list[Check]:
    ok = lhs == rhs
    exact = Check(name, ok, None if ok else {"lhs": repr(lhs), "rhs": repr(rhs)}, dict(detail))
    fock = fock_represent(lhs, D).compare(fock_represent(rhs, D), name + "_fock")
    return [exact, fock]


def verify_proof_identities(alpha1: int, alpha2: int, lam, mu, q, D: int = 12) -> Check:
    """The polynomial lemma at ``alpha2``, the lowering lemma at ``m = alpha1``
    and the reduced ZF relation at ``(alpha1, alpha2)``.

    Each is checked as an exact equality of normal-ordered elements and again
    on truncated Fock matrices.
    """
    checks = []
    checks += _pair_check("polynomial_lemma", *lemma_polynomial(alpha2, lam, mu, q), D, alpha2=alpha2)
    checks += _pair_check("lowering_lemma", *lemma_lowering(alpha1, mu, q), D, m=alpha1)
    checks += _pair_check("reduced_zf", *exchange_polynomial(alpha1, alpha2, lam, mu, q), D, alpha=(alpha1, alpha2))
    return all_ok("proof_identities", checks)


def verify_product_commutation(eta, zeta, q, D: int = 12) -> Check:
    """``k R(eta, zeta) = R(q eta, q zeta) k`` and ``[b-, R(eta, zeta)] = (zeta - eta) R(q eta, zeta) k``.

    ``R(eta, zeta) = (eta b+)_inf / (zeta b+)_inf``, expanded to order ``D - 1``.
    """

    def ratio(e, z):
        # (z (e/z) b+)_inf / (z b+)_inf
        return fock_represent(NOElement.from_bplus_series(ratio_coefficients(e / z, z, q, D - 1), q), D)

    k = fock_represent(kop(q), D)
    bm = fock_represent(bminus(q), D)
    c1 = (k @ ratio(eta, zeta)).compare(ratio(q * eta, q * zeta) @ k, "k_commutation")
    comm = (bm @ ratio(eta, zeta)) - (ratio(eta, zeta) @ bm)
    c2 = comm.compare((ratio(q * eta, zeta) @ k).scale(zeta - eta), "bminus_commutation")
    return all_ok("product_commutation", [c1, c2])


def truncated_trace(x: NOElement, D: int) -> Scalar:
    """``sum_{m<D} <m|x|m> / (q)_m``: the Fock trace cut at level D."""
    return fock_represent(x, D).truncated_trace()


def occupancies2(max_size: int) -> Iterable[tuple[int, int]]:
    for s in range(max_size + 1):
        for a1 in range(s, -1, -1):
            yield (a1, s - a1)
