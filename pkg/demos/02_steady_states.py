"""Transfer matrix, generators and the exact steady state of a small ring."""

# %%
from fractions import Fraction as F

from uqzrp import enumerate_sector, format_config, h_left, h_right, hamiltonian, steady_state, transfer_matrix

q, mus = F(1, 3), (F(1, 4), F(1, 5), F(1, 7))
sector = enumerate_sector(2, 3, (1, 1))
print(f"{sector.dim} configurations on L=3 with one particle of each species")

# %% Discrete time: the columns of T are distributions.
T = transfer_matrix(sector, F(1, 2), mus, q)
print("column sums:", set(T.column_sums()))

# %% The stationary law does not depend on lambda.
a = steady_state(T)
b = steady_state(transfer_matrix(sector, F(3, 4), mus, q))
print("same steady state for two lambdas:", a.probs == b.probs)
for c, p in a.as_dict().items():
    print(f"  {format_config(c):>12}  {p}")

# %% Continuous time: right and left hops commute, and share the homogeneous steady state.
mu = F(1, 5)
h1, h2 = h_right(sector, mu, q), h_left(sector, mu, q)
print("[H1, H2] = 0:", bool((h1 @ h2).equals(h2 @ h1)))
st = steady_state(hamiltonian(sector, F(1), F(2), mu, q))
print("null vector of H1 too:", all(v == 0 for v in h1.apply(st.probs)))
