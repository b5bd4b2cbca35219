"""
Dyadic blocks and Besov norms of a single mode
==============================================

A pure mode sin(nx) touches at most two dyadic blocks, so its Besov norm
grows like n^s with a constant that stays inside a fixed bracket.
"""

import math

import numpy as np

from fwbesov import BesovIndex, GridSpec, TrigTerm, besov_norm, from_terms
from fwbesov.besov import block_norms
from fwbesov.approx import bound_constants

grid = GridSpec(4096)
idx = BesovIndex(3.0, 2.0, 2.0)

# which blocks does each mode light up?
for n in (16, 24, 100, 512):
    f = from_terms([TrigTerm(1.0, n)], grid)
    active = np.nonzero(block_norms(f))[0] - 1
    print(f"sin({n}x): active blocks q = {active.tolist()}")

# normalized norms against the bracket
upper, lower = bound_constants(3.0, 3.0, 2.0)
print(f"\nbracket ({lower:.5f}, {upper:.4f})")
# powers of two sit at the same place in their octave and give identical values
for n in (16, 24, 48, 100, 300, 512):
    v = besov_norm(from_terms([TrigTerm(1.0, n)], grid), idx) / (math.sqrt(math.pi) * n**3)
    print(f"n={n:4d}  ||sin nx|| / (sqrt(pi) n^3) = {v:.5f}")
