"""Matrix product weights versus the null vector of the transfer matrix."""

# %%
from fractions import Fraction as F

from uqzrp import enumerate_sector, format_config
from uqzrp.mpa import HOMOGENEOUS, MpaQuery, conjecture_ldma, crosscheck_steady, mpa_probability

q, mus = F(1, 3), (F(1, 4), F(1, 5))

# %% A single weight: a finite sum of exact q-boson traces.
print("P(∅,12) =", mpa_probability(MpaQuery(((0, 0), (1, 1)), mus, q)))

# %% The whole sector is exactly proportional to the direct steady state.
report = crosscheck_steady(enumerate_sector(2, 2, (1, 1)), mus, q)
print("ratio to the unit-sum steady state:", report.ratio_to_direct)
for c, v in report.entries:
    print(f"  {format_config(c):>8}  {v}")

# %% Larger rings work the same way, homogeneous or not.
report = crosscheck_steady(enumerate_sector(2, 4, (2, 2)), F(1, 5), q, HOMOGENEOUS)
print("L=4, m=(2,2):", report.check.ok, f"({report.sector.dim} configurations)")

# %% Separation ratios: proven for r = 1, experimental beyond.
for r in range(5):
    lhs, rhs, eq = conjecture_ldma((2, 2), 4, 3, r, F(1, 5), q)
    print(f"r={r}: {lhs} vs {rhs} -> {eq}")
