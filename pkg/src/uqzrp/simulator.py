"""Monte Carlo sampling of the discrete-time chain and the continuous-time process.

Rates and transition probabilities are computed exactly once per
configuration and converted to floats, so the hot loops only do table
lookups.  Randomness comes from numpy's PCG64; independent replicas use
``SeedSequence.spawn`` streams.
"""

from __future__ import annotations

import bisect
import csv
import json
from dataclasses import dataclass, field, replace
from itertools import accumulate
from typing import Sequence

import numpy as np

from ._checks import Check
from .markov import RateTable, SectorOperator, hamiltonian, hop
from .statespace import Config, Sector, config_weight, enumerate_sector, format_config

RNG_NAME = "numpy.random.PCG64"


class AbsorbingState(RuntimeError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def replica_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent streams for parallel replicas."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(count)]


@dataclass(frozen=True)
class SimState:
    config: Config
    time: float = 0.0
    steps: int = 0
    seed: int | None = None


@dataclass
class EmpiricalDist:
    """Time-weighted (continuous) or visit-count (discrete) occupation of a sector."""

    sector: Sector
    weights: np.ndarray
    total: float
    meta: dict = field(default_factory=dict)

    def probabilities(self) -> np.ndarray:
        if self.total <= 0:
            raise ValueError("no samples recorded")
        return self.weights / self.total

    def tv_distance(self, exact: Sequence[float]) -> float:
        return 0.5 * float(np.abs(self.probabilities() - np.asarray(exact, dtype=float)).sum())


@dataclass
class _Moves:
    targets: list[int]
    cumulative: list[float]

    @property
    def total(self) -> float:
        return self.cumulative[-1] if self.cumulative else 0.0


class EventTable:
    """Per-configuration event lists of the process ``a H1 + b H2`` in one sector."""

    def __init__(self, sector: Sector, rates: RateTable):
        self.sector = sector
        self.rates = rates
        self._moves: dict[int, _Moves] = {}
        self._events: dict[int, list] = {}

    def events(self, idx: int) -> list[tuple[int, tuple, int, float]]:
        """``(site, gamma, direction, rate)`` for every visible move out of ``idx``."""
        if idx not in self._events:
            config = self.sector.configs[idx]
            L = len(config)
            out = []
            for site, alpha in enumerate(config):
                for gamma, direction, rate in self.rates.events(alpha):
                    if L == 1:
                        continue
                    out.append((site, gamma, direction, float(rate)))
            self._events[idx] = out
        return self._events[idx]

    def moves(self, idx: int) -> _Moves:
        if idx not in self._moves:
            config = self.sector.configs[idx]
            index = self.sector.index
            targets, rates = [], []
            for site, gamma, direction, rate in self.events(idx):
                targets.append(index[hop(config, site, gamma, direction)])
                rates.append(rate)
            self._moves[idx] = _Moves(targets, list(accumulate(rates)))
        return self._moves[idx]

    def generator(self) -> np.ndarray:
        """Dense float generator implied by the event lists (columns = source)."""
        dim = self.sector.dim
        h = np.zeros((dim, dim))
        for j in range(dim):
            mv = self.moves(j)
            prev = 0.0
            for t, c in zip(mv.targets, mv.cumulative):
                h[t, j] += c - prev
                prev = c
            h[j, j] -= mv.total
        return h


class TransitionTable:
    """Float columns of a transfer matrix, validated to sum to one."""

    def __init__(self, T: SectorOperator, tol: float = 1e-12):
        self.sector = T.sector
        self.columns = []
        for j, col in enumerate(T.cols):
            items = sorted(col.items())
            targets = [i for i, _ in items]
            probs = [float(v) for _, v in items]
            s = sum(probs)
            if abs(s - 1.0) > tol or any(p < 0 for p in probs):
                raise ValueError(f"column {j} is not a probability vector (sum {s})")
            self.columns.append(_Moves(targets, list(accumulate(probs))))


def gillespie_step(state: SimState, table: EventTable, rng: np.random.Generator) -> SimState:
    """One continuous-time jump: exponential holding time, then an event chosen by rate."""
    idx = table.sector.index[state.config]
    mv = table.moves(idx)
    total = mv.total
    if total <= 0:
        raise AbsorbingState(f"no moves out of {format_config(state.config)}")
    dt = rng.standard_exponential() / total
    k = bisect.bisect_right(mv.cumulative, rng.random() * total)
    k = min(k, len(mv.targets) - 1)
    return SimState(table.sector.configs[mv.targets[k]], state.time + dt, state.steps + 1, state.seed)


def discrete_step(state: SimState, table: TransitionTable, rng: np.random.Generator) -> SimState:
    idx = table.sector.index[state.config]
    mv = table.columns[idx]
    k = min(bisect.bisect_right(mv.cumulative, rng.random() * mv.total), len(mv.targets) - 1)
    return SimState(table.sector.configs[mv.targets[k]], state.time + 1, state.steps + 1, state.seed)


_BATCH = 1 << 16


def run_continuous(initial: SimState, table: EventTable, events: int, burn_in: int | None = None, seed: int = 0, record=None) -> EmpiricalDist:
    """Time-weighted occupation over ``events`` jumps, discarding the first ``burn_in``.

    ``record``, if given, is a list receiving ``(event, time, config index)``
    after every jump.
    """
    sector = table.sector
    if burn_in is None:
        burn_in = events // 10
    if events <= burn_in:
        raise ValueError("horizon must exceed burn-in")
    weights = np.zeros(sector.dim)
    if sector.dim == 1:
        weights[0] = 1.0
        return EmpiricalDist(sector, weights, 1.0, {"events": 0})
    rng = make_rng(seed)
    moves = [table.moves(j) for j in range(sector.dim)]
    for j, mv in enumerate(moves):
        if mv.total <= 0:
            raise AbsorbingState(f"no moves out of {format_config(sector.configs[j])}")
    i = sector.index[tuple(initial.config)]
    t = initial.time
    done = 0
    while done < events:
        n = min(_BATCH, events - done)
        exps = rng.standard_exponential(n)
        us = rng.random(n)
        for e, u in zip(exps.tolist(), us.tolist()):
            mv = moves[i]
            total = mv.cumulative[-1]
            dt = e / total
            if done >= burn_in:
                weights[i] += dt
            t += dt
            k = bisect.bisect_right(mv.cumulative, u * total)
            i = mv.targets[k if k < len(mv.targets) else -1]
            done += 1
            if record is not None:
                record.append((done, t, i))
    return EmpiricalDist(sector, weights, float(weights.sum()), {"events": events, "burn_in": burn_in, "seed": seed, "rng": RNG_NAME})


def run_discrete(initial: SimState, table: TransitionTable, steps: int, burn_in: int | None = None, seed: int = 0, transitions: np.ndarray | None = None) -> EmpiricalDist:
    """Visit counts after burn-in; optionally accumulates ``transitions[to, from]``."""
    sector = table.sector
    if burn_in is None:
        burn_in = steps // 10
    if steps <= burn_in:
        raise ValueError("horizon must exceed burn-in")
    rng = make_rng(seed)
    cols = table.columns
    weights = np.zeros(sector.dim)
    i = sector.index[tuple(initial.config)]
    done = 0
    while done < steps:
        n = min(_BATCH, steps - done)
        for u in rng.random(n).tolist():
            mv = cols[i]
            k = bisect.bisect_right(mv.cumulative, u * mv.cumulative[-1])
            j = mv.targets[k if k < len(mv.targets) else -1]
            if transitions is not None:
                transitions[j, i] += 1
            i = j
            done += 1
            if done > burn_in:
                weights[i] += 1
    return EmpiricalDist(sector, weights, float(weights.sum()), {"steps": steps, "burn_in": burn_in, "seed": seed, "rng": RNG_NAME})


def estimate_stationary(initial: SimState, horizon: int, burn_in: int | None = None, *, rates: RateTable | None = None, transfer: SectorOperator | None = None, seed: int = 0) -> EmpiricalDist:
    """Empirical stationary law from one long run of either dynamics."""
    m = config_weight(initial.config)
    sector = enumerate_sector(len(m), len(initial.config), m)
    if (rates is None) == (transfer is None):
        raise ValueError("give exactly one of rates or transfer")
    if rates is not None:
        return run_continuous(initial, EventTable(sector, rates), horizon, burn_in, seed)
    return run_discrete(initial, TransitionTable(transfer), horizon, burn_in, seed)


def replicas(initial: SimState, table: EventTable, events: int, count: int, seed: int = 0) -> EmpiricalDist:
    """Pool ``count`` independent runs; the sum of weights is order independent."""
    seeds = [int(s.generate_state(1, dtype=np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(count)]
    runs = [run_continuous(initial, table, events, seed=s) for s in seeds]
    weights = sum(r.weights for r in runs)
    return EmpiricalDist(table.sector, weights, float(weights.sum()), {"replicas": count, "seed": seed, "rng": RNG_NAME})


def transition_band_check(T: SectorOperator, steps: int, seed: int = 0, sigmas: float = 3.0, start: Config | None = None) -> Check:
    """Observed one-step frequencies against the columns of ``T``.

    Every entry with a visited source column must lie within ``sigmas``
    binomial standard deviations of its exact probability.
    """
    table = TransitionTable(T)
    sector = T.sector
    counts = np.zeros((sector.dim, sector.dim))
    initial = SimState(start or sector.configs[0])
    run_discrete(initial, table, steps, burn_in=0, seed=seed, transitions=counts)
    visits = counts.sum(axis=0)
    worst = 0.0
    for j in range(sector.dim):
        n = visits[j]
        if n == 0:
            continue
        for i in range(sector.dim):
            p = float(T[i, j])
            f = counts[i, j] / n
            sd = np.sqrt(p * (1 - p) / n)
            if sd == 0:
                if f != p:
                    return Check("transition_bands", False, {"from": format_config(sector.configs[j]), "to": format_config(sector.configs[i]), "p": p, "freq": f})
                continue
            z = abs(f - p) / sd
            worst = max(worst, z)
            if z > sigmas:
                return Check("transition_bands", False, {"from": format_config(sector.configs[j]), "to": format_config(sector.configs[i]), "p": p, "freq": f, "z": z})
    return Check("transition_bands", True, None, {"steps": steps, "max_z": float(worst), "seed": seed})


def audit_rates(sector: Sector, rates: RateTable, tol: float = 1e-12) -> Check:
    """The simulator's event lists reproduce the exact generator entry by entry."""
    sim = EventTable(sector, rates).generator()
    exact = hamiltonian(sector, rates.a, rates.b, rates.mu, rates.q, rates.epsilon)
    ref = np.array(exact.to_dense(), dtype=float)
    diff = np.abs(sim - ref)
    if diff.max(initial=0.0) > tol:
        i, j = np.unravel_index(int(diff.argmax()), diff.shape)
        return Check("rate_audit", False, {"to": format_config(sector.configs[i]), "from": format_config(sector.configs[j]), "simulator": sim[i, j], "exact": ref[i, j]})
    return Check("rate_audit", True, None, {"dim": sector.dim})


def write_trajectory_csv(path, sector: Sector, record) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["event", "time", "config"])
        for event, t, i in record:
            w.writerow([event, repr(t), json.dumps([list(s) for s in sector.configs[i]])])


def advance(state: SimState, table: EventTable, events: int, rng: np.random.Generator) -> SimState:
    for _ in range(events):
        state = gillespie_step(state, table, rng)
    return state


def with_seed(state: SimState, seed: int) -> SimState:
    return replace(state, seed=seed)
