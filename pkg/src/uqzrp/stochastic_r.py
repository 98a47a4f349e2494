"""The stochastic R matrix on W (x) W and the identities it satisfies.

``S(lam, mu)`` maps ``|alpha> (x) |beta>`` to a sum over ``|gamma> (x) |delta>``
with ``gamma + delta = alpha + beta``.  The coefficient only depends on
``gamma`` and ``beta`` through :func:`phi_weight`.  The operator is infinite
dimensional but splits into finite blocks labelled by the conserved weight
``alpha + beta``; only the blocks a computation touches are ever built.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from ._checks import Check, all_ok, compare_sparse
from .qseries import Scalar, g_weight, leq, one_like, phi_exp, qbinom, qpoch, zero_like
from .statespace import Occupancy, below, compositions

DEFAULT_BLOCK_CAP = 10**6


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def phi_weight(gamma: Sequence[int], beta: Sequence[int], lam: Scalar, mu: Scalar, q: Scalar) -> Scalar:
    """Probability that ``gamma`` out of ``beta`` particles are carried across.

    Zero unless ``gamma <= beta``.  For fixed ``beta`` the values sum to one.
    """
    if len(gamma) != len(beta):
        raise ValueError("gamma and beta must have the same length")
    if not leq(gamma, beta):
        return zero_like(lam, mu, q)
    if lam == 0 or mu == 0:
        raise ZeroDivisionError("phi_weight needs lambda != 0 and mu != 0")
    g, b = sum(gamma), sum(beta)
    den = qpoch(mu, b, q)
    if den == 0:
        raise ZeroDivisionError("(mu)_{|beta|} vanishes")
    nu = mu / lam
    val = q ** phi_exp(_sub(beta, gamma), gamma) * nu**g * qpoch(lam, g, q) * qpoch(nu, b - g, q) / den
    for bi, gi in zip(beta, gamma):
        val *= qbinom(bi, gi, q)
    return val


def r_element(gamma, delta, alpha, beta, lam: Scalar, mu: Scalar, q: Scalar) -> Scalar:
    """Matrix element ``S(lam, mu)^{gamma, delta}_{alpha, beta}``."""
    if _add(gamma, delta) != _add(alpha, beta):
        return zero_like(lam, mu, q)
    return phi_weight(gamma, beta, lam, mu, q)


@lru_cache(maxsize=65536, typed=True)
def _phi_cached(gamma, beta, lam, mu, q):
    return phi_weight(gamma, beta, lam, mu, q)


def pairs_of_weight(weight: Occupancy) -> list[tuple[Occupancy, Occupancy]]:
    """Basis ``(alpha, beta)`` of the block with ``alpha + beta = weight``."""
    return [(a, _sub(weight, a)) for a in below(weight)]


@dataclass(frozen=True)
class RBlock:
    """One conserved-weight block of S, stored sparsely.

    ``entries[(gamma, delta), (alpha, beta)]`` is the matrix element; the
    column index is the input pair.
    """

    lam: Scalar
    mu: Scalar
    q: Scalar
    weight: Occupancy
    basis: tuple
    entries: dict

    @property
    def n(self) -> int:
        return len(self.weight)

    def column_sums(self) -> dict:
        sums = {col: zero_like(self.lam, self.mu, self.q) for col in self.basis}
        for (_, col), v in self.entries.items():
            sums[col] += v
        return sums

    def to_dense(self):
        idx = {p: i for i, p in enumerate(self.basis)}
        mat = [[zero_like(self.lam, self.mu, self.q)] * len(self.basis) for _ in self.basis]
        for (row, col), v in self.entries.items():
            mat[idx[row]][idx[col]] = v
        return mat


@lru_cache(maxsize=4096, typed=True)
def build_r_block(weight: Occupancy, lam: Scalar, mu: Scalar, q: Scalar, cap: int = DEFAULT_BLOCK_CAP) -> RBlock:
    weight = tuple(weight)
    basis = tuple(pairs_of_weight(weight))
    if len(basis) > cap:
        raise MemoryError(f"block dimension {len(basis)} exceeds cap {cap}")
    entries = {}
    for alpha, beta in basis:
        for gamma in below(beta):
            v = _phi_cached(gamma, beta, lam, mu, q)
            if v != 0:
                entries[(gamma, _sub(weight, gamma)), (alpha, beta)] = v
    return RBlock(lam, mu, q, weight, basis, entries)


# -- operators on tensor powers of W, as column-action maps ------------------------

SparseVec = dict


def _apply(op: Callable[[tuple], SparseVec], vec: SparseVec) -> SparseVec:
    out: SparseVec = {}
    for basis, c in vec.items():
        for b2, v in op(basis).items():
            out[b2] = out.get(b2, 0) + c * v
    return {k: v for k, v in out.items() if v != 0}


def _compose(*ops):
    """``_compose(A, B, C)`` acts as the operator product ``A B C``."""

    def composed(basis):
        vec = {basis: 1}
        for op in reversed(ops):
            vec = _apply(op, vec)
        return vec

    return composed


def s_acting(i: int, j: int, lam, mu, q, transpose: bool = False):
    """``S_{i,j}(lam, mu)`` (or its transpose) on a tuple of site states."""

    def op(state):
        alpha, beta = state[i], state[j]
        tot = _add(alpha, beta)
        out = {}
        if not transpose:
            for gamma in below(beta):
                v = _phi_cached(gamma, beta, lam, mu, q)
                if v != 0:
                    new = list(state)
                    new[i], new[j] = gamma, _sub(tot, gamma)
                    out[tuple(new)] = v
        else:
            # S^T: coefficient S^{alpha,beta}_{gamma,delta} = Phi(alpha | delta)
            for gamma in below(tot):
                delta = _sub(tot, gamma)
                if leq(alpha, delta):
                    v = _phi_cached(alpha, delta, lam, mu, q)
                    if v != 0:
                        new = list(state)
                        new[i], new[j] = gamma, delta
                        out[tuple(new)] = v
        return out

    return op


def s_checked(lam, mu, q):
    """Checked R matrix on ``W (x) W``: output legs swapped."""

    def op(state):
        alpha, beta = state
        tot = _add(alpha, beta)
        out = {}
        for gamma in below(beta):
            v = _phi_cached(gamma, beta, lam, mu, q)
            if v != 0:
                out[(_sub(tot, gamma), gamma)] = v
        return out

    return op


def tensor_basis(weight: Occupancy, factors: int) -> list[tuple]:
    """All ``factors``-tuples of occupancies summing to ``weight``."""
    per_species = [list(compositions(w, factors)) for w in weight]
    out = []
    from itertools import product

    for choice in product(*per_species):
        out.append(tuple(tuple(choice[a][f] for a in range(len(weight))) for f in range(factors)))
    return out


def _operator_equal(name, lhs, rhs, basis, **detail) -> Check:
    for col in basis:
        c = compare_sparse(name, lhs(col), rhs(col))
        if not c:
            c.witness = {"column": col, "row": c.witness["entry"], "lhs": c.witness["lhs"], "rhs": c.witness["rhs"]}
            c.detail = detail
            return c
    return Check(name, True, None, {"dim": len(basis), **detail})


def verify_yang_baxter(weight: Sequence[int], nu1, nu2, nu3, q) -> Check:
    """Both the Yang-Baxter equation for S and for its transpose, on one weight space of W^{(x)3}."""
    weight = tuple(weight)
    basis = tensor_basis(weight, 3)
    checks = []
    for tr in (False, True):
        s12 = s_acting(0, 1, nu1, nu2, q, tr)
        s13 = s_acting(0, 2, nu1, nu3, q, tr)
        s23 = s_acting(1, 2, nu2, nu3, q, tr)
        name = "yang_baxter_transposed" if tr else "yang_baxter"
        checks.append(_operator_equal(name, _compose(s12, s13, s23), _compose(s23, s13, s12), basis, weight=weight))
    return all_ok("yang_baxter", checks)


def verify_inversion(weight: Sequence[int], lam, mu, q) -> Check:
    """``Scheck(lam, mu) Scheck(mu, lam) = id`` on one weight space of W (x) W."""
    weight = tuple(weight)
    basis = tensor_basis(weight, 2)
    prod_op = _compose(s_checked(lam, mu, q), s_checked(mu, lam, q))
    return _operator_equal("inversion", prod_op, lambda b: {b: 1}, basis, weight=weight)


def verify_column_sums(weight: Sequence[int], lam, mu, q) -> Check:
    block = build_r_block(tuple(weight), lam, mu, q)
    sums = block.column_sums()
    one = one_like(lam, mu, q)
    return compare_sparse("sum_to_unity", sums, {k: one for k in sums}, weight=tuple(weight))


def verify_sum_rule(beta: Sequence[int], lam, mu, q) -> Check:
    total = sum(phi_weight(g, beta, lam, mu, q) for g in below(beta))
    ok = total == 1
    return Check("sum_rule", ok, None if ok else {"beta": tuple(beta), "sum": total})


def verify_support(weight: Sequence[int], lam, mu, q) -> Check:
    """Nonzero entries only where ``gamma <= beta`` and ``alpha <= delta``."""
    block = build_r_block(tuple(weight), lam, mu, q)
    for ((g, d), (a, b)), v in block.entries.items():
        if v != 0 and not (leq(g, b) and leq(a, d)):
            return Check("support", False, {"entry": (g, d, a, b), "value": v})
    return Check("support", True)


def verify_nonnegative(weight: Sequence[int], lam, mu, q) -> Check:
    block = build_r_block(tuple(weight), lam, mu, q)
    for key, v in block.entries.items():
        if v < 0:
            return Check("nonnegative", False, {"entry": key, "value": v})
    return Check("nonnegative", True)


def _gtilde(alpha, mu, q):
    return g_weight(alpha, mu, q) * q ** (-phi_exp(alpha, alpha))


def _rev(a):
    return tuple(reversed(a))


def check_transpose_gauge(alpha, beta, gamma, delta, lam, mu, q) -> Check:
    """S^{gamma,delta}_{alpha,beta} against the reversed, transposed element."""
    lhs = r_element(gamma, delta, alpha, beta, lam, mu, q)
    rhs = (
        r_element(_rev(alpha), _rev(beta), _rev(gamma), _rev(delta), lam, mu, q)
        * _gtilde(gamma, lam, q)
        * _gtilde(delta, mu, q)
        / (_gtilde(alpha, lam, q) * _gtilde(beta, mu, q))
        * q ** (phi_exp(beta, alpha) - phi_exp(gamma, delta))
    )
    return Check("transpose_gauge", lhs == rhs, None if lhs == rhs else {"args": (alpha, beta, gamma, delta), "lhs": lhs, "rhs": rhs})


def check_g_factorization(alpha, beta, gamma, delta, lam, mu, q) -> Check:
    """Absorbing ``gamma`` into the bottom leg of an element with empty right leg."""
    bg = _add(beta, gamma)
    lhs = (
        q ** phi_exp(beta, gamma)
        * g_weight(beta, mu, q)
        * g_weight(gamma, lam, q)
        / g_weight(bg, mu, q)
        * r_element((0,) * len(alpha), alpha, delta, beta, lam, mu, q)
    )
    rhs = r_element(gamma, alpha, delta, bg, lam, mu, q)
    return Check("g_factorization", lhs == rhs, None if lhs == rhs else {"args": (alpha, beta, gamma, delta), "lhs": lhs, "rhs": rhs})


def check_exchange(alpha, beta, gamma, lam, mu, q) -> Check:
    """The Phi identity that turns the ZF relation for X into the one for Z.

    Requires ``gamma <= alpha``; both sides vanish otherwise.
    """
    if not leq(gamma, alpha):
        raise ValueError("exchange identity is stated for gamma <= alpha")
    d = _sub(_add(alpha, beta), gamma)
    lhs = (
        g_weight(gamma, lam, q)
        * g_weight(d, mu, q)
        / (g_weight(alpha, mu, q) * g_weight(beta, lam, q))
        * phi_weight(beta, d, lam, mu, q)
    )
    rhs = q ** phi_exp(_sub(alpha, gamma), _sub(beta, gamma)) * phi_weight(gamma, alpha, lam, mu, q)
    return Check("exchange", lhs == rhs, None if lhs == rhs else {"args": (alpha, beta, gamma), "lhs": lhs, "rhs": rhs})


def check_reversal(gamma, alpha, lam, mu, q) -> Check:
    """``Phi(gamma|alpha) = q^{phi(alpha,gamma) - phi(gamma,alpha)} Phi(gamma'|alpha')``."""
    lhs = phi_weight(gamma, alpha, lam, mu, q)
    rhs = q ** (phi_exp(alpha, gamma) - phi_exp(gamma, alpha)) * phi_weight(_rev(gamma), _rev(alpha), lam, mu, q)
    return Check("reversal", lhs == rhs, None if lhs == rhs else {"args": (gamma, alpha), "lhs": lhs, "rhs": rhs})


def verify_gauge_identities(alpha, beta, gamma, delta, lam, mu, q) -> Check:
    """All four gauge-type identities at one argument tuple.

    Identities whose preconditions do not hold at these arguments (the
    exchange identity needs ``gamma <= alpha``) are skipped and listed in
    ``detail['skipped']``.
    """
    alpha, beta, gamma, delta = map(tuple, (alpha, beta, gamma, delta))
    if len({len(alpha), len(beta), len(gamma), len(delta)}) != 1:
        raise ValueError("occupancies must share one length n")
    checks, skipped = [], []
    for fn, args in (
        (check_transpose_gauge, (alpha, beta, gamma, delta)),
        (check_g_factorization, (alpha, beta, gamma, delta)),
        (check_reversal, (gamma, alpha)),
    ):
        try:
            checks.append(fn(*args, lam, mu, q))
        except ZeroDivisionError as exc:
            checks.append(Check(fn.__name__, False, {"singular": str(exc)}))
    if leq(gamma, alpha):
        try:
            checks.append(check_exchange(alpha, beta, gamma, lam, mu, q))
        except ZeroDivisionError as exc:
            checks.append(Check("exchange", False, {"singular": str(exc)}))
    else:
        skipped.append("exchange")
    result = all_ok("gauge_identities", checks)
    result.detail["skipped"] = skipped
    return result


def occupancies_up_to(n: int, max_size: int) -> Iterable[Occupancy]:
    for s in range(max_size + 1):
        yield from compositions(s, n)
