"""Local stochastic R matrix: a column is a probability distribution.

Run with ``python demos/01_stochastic_r.py``.
"""

# %%
from fractions import Fraction as F

from uqzrp import r_element
from uqzrp.stochastic_r import build_r_block, verify_inversion, verify_yang_baxter

lam, mu, q = F(1, 2), F(1, 5), F(1, 3)

# %% The block of weight (1, 1): every column sums to one exactly.
block = build_r_block((1, 1), lam, mu, q)
print("column sums:", block.column_sums())

# %% A single element, printed exactly.
print("S^{(1,0),(0,1)}_{(0,1),(1,0)} =", r_element((1, 0), (0, 1), (0, 1), (1, 0), lam, mu, q))

# %% The Yang-Baxter equation (and its transpose) on one weight space of three copies.
print(verify_yang_baxter((1, 1), F(1, 2), F(1, 3), F(1, 7), q))
print(verify_inversion((2, 1), lam, mu, q))
