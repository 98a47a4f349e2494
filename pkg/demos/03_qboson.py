"""q-boson algebra in normal order, exact traces and the Fock cross-check."""

# %%
from fractions import Fraction as F

from uqzrp import bminus, bplus, kop, no_trace
from uqzrp.qboson import fock_represent, truncated_trace

q = F(1, 3)
bp, bm, k = bplus(q), bminus(q), kop(q)

# %% The defining relations hold as identities between normal-ordered elements.
print("b- b+ =", bm * bp)
print("b+ b- =", bp * bm)
print("k b+ - q b+ k == 0:", k * bp == bp * k * q)

# %% Exact traces reduce to sums of Tr(k^r) = 1/(1 - q^r).
x = k**2 * bm * bp
print("Tr(k^2 b- b+) =", no_trace(x))

# %% The same trace from a 30-level truncated Fock space, in floats.
qf = 1 / 3
xf = kop(qf) ** 2 * bminus(qf) * bplus(qf)
print("truncated:", truncated_trace(xf, 30), " exact:", float(no_trace(x)))

# %% Matrices act on columns: b+|m> = |m+1>.
print(fock_represent(bp, 4).mat.astype(float))
