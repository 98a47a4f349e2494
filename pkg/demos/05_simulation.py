"""Gillespie and discrete-time sampling against the exact stationary law."""

# %%
from fractions import Fraction as F

from uqzrp import RateTable, enumerate_sector, hamiltonian, steady_state, transfer_matrix
from uqzrp.simulator import SimState, audit_rates, estimate_stationary, transition_band_check

q, mu = F(3, 10), F(1, 5)
sector = enumerate_sector(2, 3, (1, 1))
rates = RateTable(F(1), F(1), mu, q)

# %% The simulator's event lists reproduce the exact generator.
print(audit_rates(sector, rates))

# %% One long continuous-time run.
exact = [float(p) for p in steady_state(hamiltonian(sector, F(1), F(1), mu, q)).probs]
dist = estimate_stationary(SimState(sector.configs[0]), 10**6, rates=rates, seed=0)
print(f"total variation after 1e6 events: {dist.tv_distance(exact):.4f}")

# %% Discrete time: one-step frequencies sit inside 3-sigma bands around T.
T = transfer_matrix(sector, F(1, 2), (mu,) * 3, q)
print(transition_band_check(T, 10**5, seed=0))
