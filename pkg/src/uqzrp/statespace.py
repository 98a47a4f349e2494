"""Configurations of n species on an L-site ring, grouped into sectors."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from math import comb, prod
from typing import Iterator, Sequence

Occupancy = tuple[int, ...]
Config = tuple[Occupancy, ...]

DEFAULT_DIM_CAP = 10**7


class SectorTooLarge(MemoryError):
    pass


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` ordered parts, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def below(beta: Sequence[int]) -> Iterator[Occupancy]:
    """All occupancies ``gamma <= beta`` componentwise."""
    return product(*(range(b + 1) for b in beta))


def occupancies_of_size(n: int, size: int) -> Iterator[Occupancy]:
    return compositions(size, n)


def sector_dim(n: int, L: int, m: Sequence[int]) -> int:
    return prod(comb(ma + L - 1, L - 1) for ma in m)


@dataclass(frozen=True)
class Sector:
    """All configurations whose site occupancies add up to ``m``.

    ``configs[i]`` and ``index[config]`` are inverse to each other.
    """

    n: int
    L: int
    m: Occupancy
    configs: tuple[Config, ...] = field(repr=False)
    index: dict = field(repr=False, compare=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.configs)

    def __len__(self) -> int:
        return len(self.configs)

    def __iter__(self):
        return iter(self.configs)


def enumerate_sector(n: int, L: int, m: Sequence[int], cap: int = DEFAULT_DIM_CAP) -> Sector:
    m = tuple(int(x) for x in m)
    if L < 1:
        raise ValueError("need L >= 1")
    if len(m) != n:
        raise ValueError(f"m has {len(m)} components, expected n={n}")
    if any(x < 0 for x in m):
        raise ValueError("species totals must be nonnegative")
    dim = sector_dim(n, L, m)
    if dim > cap:
        raise SectorTooLarge(f"sector dimension {dim} exceeds cap {cap}")
    # per species: how its m_a particles spread over the L sites
    spreads = [list(compositions(ma, L)) for ma in m]
    configs = []
    for choice in product(*spreads):
        configs.append(tuple(tuple(choice[a][i] for a in range(n)) for i in range(L)))
    configs.sort()
    configs = tuple(configs)
    return Sector(n, L, m, configs, {c: i for i, c in enumerate(configs)})


def rotate(config: Sequence, shift: int) -> tuple:
    """Cyclic shift: ``rotate((A, B, C), 1) == (B, C, A)``."""
    config = tuple(config)
    if not config:
        return config
    shift %= len(config)
    return config[shift:] + config[:shift]


def reverse_sites(config: Sequence) -> tuple:
    return tuple(reversed(tuple(config)))


def is_basic(m: Sequence[int]) -> bool:
    return all(x >= 1 for x in m)


def config_weight(config: Config) -> Occupancy:
    return tuple(map(sum, zip(*config)))


def format_site(occ: Occupancy) -> str:
    """Multiset notation: (2,1) -> '112', (0,0) -> '∅'."""
    s = "".join(str(a + 1) * k for a, k in enumerate(occ))
    return s or "∅"


def format_config(config: Config) -> str:
    return "|" + ",".join(format_site(o) for o in config) + "⟩"


def parse_site(text: str, n: int) -> Occupancy:
    """Inverse of :func:`format_site` for n <= 9."""
    counts = [0] * n
    for ch in text.strip():
        if ch in "∅0":
            continue
        counts[int(ch) - 1] += 1
    return tuple(counts)


def parse_config(text: str, n: int) -> Config:
    """Parse ``'|1,12⟩'`` or ``'1,12'`` into occupancy arrays."""
    body = text.strip().lstrip("|").rstrip("⟩>").strip()
    return tuple(parse_site(s, n) for s in body.split(","))


def config_to_json(config: Config) -> str:
    return json.dumps([list(o) for o in config], separators=(",", ":"))


def config_from_json(text: str) -> Config:
    return tuple(tuple(int(x) for x in site) for site in json.loads(text))
