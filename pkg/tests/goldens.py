"""Published example values, transcribed as plain functions of the parameters."""

from __future__ import annotations

from uqzrp.statespace import parse_config, rotate


def cfg(text: str):
    return parse_config(text, 2)


def with_cyclic(base: dict, mus: tuple) -> dict:
    """Expand ``{config: f(mus)}`` by the cyclic images.

    Sites and inhomogeneities move together: the weight of
    ``|s_{1+i}..s_{L+i}>`` is ``f(mu_{1-i}, .., mu_{L-i})``, which is the
    rotation invariance ``P(s_L, s_1, ..; mu_L, mu_1, ..) = P(s; mu)``
    read backwards.
    """
    L = len(mus)
    out = {}
    for config, f in base.items():
        for i in range(L):
            shifted = rotate(config, i)
            value = f(rotate(mus, -i))
            if shifted in out and out[shifted] != value:
                raise AssertionError("inconsistent cyclic expansion")
            out[shifted] = value
    return out


def with_cyclic_homogeneous(base: dict, L: int) -> dict:
    out = {}
    for config, value in base.items():
        for i in range(L):
            out[rotate(config, i)] = value
    return out


def szk(mu1, mu2, q) -> dict:
    """L = 2, m = (1, 1), inhomogeneous."""
    base = {
        cfg("∅,12"): lambda m: m[0] ** 2 * (1 - m[1]) * (1 - q * m[1]) * (m[0] + m[1] - 2 * m[1] * m[0]),
        cfg("1,2"): lambda m: m[0] * m[1] * (1 - m[0]) * (1 - m[1]) * (m[0] + q * m[1] - m[0] * m[1] - q * m[0] * m[1]),
    }
    return with_cyclic(base, (mu1, mu2))


def kan3(mu1, mu2, mu3, q) -> dict:
    """L = 3, m = (1, 1), inhomogeneous."""

    def e00(m):
        m1, m2, m3 = m
        return m1**2 * m2**2 * (1 - m3) * (1 - q * m3) * (m1 * m2 + m1 * m3 + m2 * m3 - 3 * m1 * m3 * m2)

    def e21(m):
        m1, m2, m3 = m
        return m1**2 * m2 * m3 * (1 - m2) * (1 - m3) * (q * m1 * m2 + m1 * m3 + m2 * m3 - 2 * m1 * m2 * m3 - q * m1 * m2 * m3)

    def e12(m):
        m1, m2, m3 = m
        return m1**2 * m2 * m3 * (1 - m2) * (1 - m3) * (m1 * m2 + q * m1 * m3 + q * m2 * m3 - m1 * m2 * m3 - 2 * q * m1 * m2 * m3)

    base = {cfg("∅,∅,12"): e00, cfg("∅,2,1"): e21, cfg("∅,1,2"): e12}
    return with_cyclic(base, (mu1, mu2, mu3))


def lin2(mu, q) -> dict:
    """L = 2, m = (2, 1), homogeneous."""
    base = {
        cfg("∅,112"): (1 - q**2 * mu) * (3 + q - mu - 3 * q * mu),
        cfg("2,11"): (1 - mu) * (1 + q + 2 * q**2 - 2 * q * mu - q**2 * mu - q**3 * mu),
        cfg("1,12"): (1 + q) * (1 - mu) * (2 + q + q**2 - mu - q * mu - 2 * q**2 * mu),
    }
    return with_cyclic_homogeneous(base, 2)


def lin3(mu, q) -> dict:
    """L = 3, m = (2, 1), homogeneous."""
    base = {
        cfg("∅,∅,112"): 3 * (1 - q * mu) * (1 - q**2 * mu) * (2 + q - (1 + 2 * q) * mu),
        cfg("∅,2,11"): (1 - mu) * (1 - q * mu) * (3 + 3 * q + 3 * q**2 - (1 + 5 * q + 2 * q**2 + q**3) * mu),
        cfg("∅,1,12"): (1 + q) * (1 - mu) * (1 - q * mu) * (3 + 3 * q + 3 * q**2 - (2 + 2 * q + 5 * q**2) * mu),
        cfg("∅,12,1"): (1 + q) * (1 - mu) * (1 - q * mu) * (5 + 2 * q + 2 * q**2 - (3 + 3 * q + 3 * q**2) * mu),
        cfg("∅,11,2"): (1 - mu) * (1 - q * mu) * (1 + 2 * q + 5 * q**2 + q**3 - (3 * q + 3 * q**2 + 3 * q**3) * mu),
        cfg("1,1,2"): (1 + q) * (1 + q + q**2) * (1 - mu) ** 2 * (2 + q - (1 + 2 * q) * mu),
    }
    return with_cyclic_homogeneous(base, 3)


def nmi(lam, mu1, mu2, q) -> dict:
    """Column ``T(lam | mu1, mu2) |1,12>`` in the sector L = 2, m = (2, 1)."""
    den = (mu1 - 1) * (mu2 - 1) * lam**3 * (q * mu2 - 1)
    return {
        cfg("2,11"): -q * mu1 * mu2 * (lam - 1) ** 2 * (lam - mu2) / den,
        cfg("∅,112"): mu1 * (lam - 1) * (lam - mu2) * (lam - q * mu2) / den,
        cfg("11,2"): mu2 * (lam - 1) * (lam - mu1) * (lam - mu2) / den,
        cfg("112,∅"): -(mu2**2) * (lam - 1) * (q * lam - 1) * (lam - mu1) / den,
        cfg("12,1"): mu2
        * (lam - 1)
        * (q * mu1 * mu2 * lam**2 - q * mu1 * lam - q * mu2 * lam - q * mu1 * mu2 * lam + q * mu1 * mu2 + q * lam**2 - mu1 * mu2 * lam + mu1 * mu2)
        / den,
        cfg("1,12"): -(lam - mu2)
        * (-q * mu2 * lam + q * mu1 * mu2 + mu1 * mu2 * lam**2 - mu1 * lam - 2 * mu1 * mu2 * lam + mu1 * mu2 + lam**2)
        / den,
    }


def h1_column(mu, q) -> dict:
    """``H1 |1,12>`` for L = 2."""
    return {
        cfg("1,12"): -(2 + q - 3 * q * mu) / ((1 - mu) * (1 - q * mu)),
        cfg("12,1"): q / (1 - q * mu),
        cfg("11,2"): 1 / (1 - q * mu),
        cfg("112,∅"): (1 - q) * mu / ((1 - mu) * (1 - q * mu)),
        cfg("∅,112"): 1 / (1 - mu),
    }


def h2_column(mu, q) -> dict:
    """``H2 |1,12>`` for L = 2."""
    return {
        cfg("1,12"): -(3 - mu - 2 * q * mu) / ((1 - mu) * (1 - q * mu)),
        cfg("12,1"): 1 / (1 - q * mu),
        cfg("11,2"): q / (1 - q * mu),
        cfg("112,∅"): (1 - q) / ((1 - mu) * (1 - q * mu)),
        cfg("∅,112"): 1 / (1 - mu),
    }


def proportional(vec: dict, ref: dict):
    """Common ratio ``vec / ref`` if one exists (keys must agree), else None."""
    if set(k for k, v in vec.items() if v != 0) != set(k for k, v in ref.items() if v != 0):
        return None
    ratio = None
    for k, r in ref.items():
        if r == 0:
            continue
        x = vec[k] / r
        if ratio is None:
            ratio = x
        elif x != ratio:
            return None
    return ratio
