"""
Entanglement of formation by optimization
=========================================

The entanglement of formation is a minimum over pure-state decompositions.
Decompositions are parameterized by isometries, and a conjugate-gradient
search over the unitary group looks for the minimum from several starts.
For antisymmetric states the minimum is log2(d - 1) for every state, and
it is additive over tensor products.
"""

# %%
import math

import numpy as np

from antisym_ef.eof import (
    EofOptions,
    average_output_entropy,
    decomposition_from_isometry,
    ef_estimate,
)
from antisym_ef.numerics import Plain, SpaceShape, pure_state, random_isometry, random_state, tensor

rng = np.random.default_rng(2)

# %%
# A sanity check first: a Bell state of two qubits carries one ebit.
bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
print("Bell state:", ef_estimate(pure_state(bell, SpaceShape.plain(2, 2))).value)

# %%
# For a single antisymmetric factor every decomposition gives the same
# average entropy, so the landscape is flat.
rho = random_state(SpaceShape.antisym(4), rng)
samples = []
for m in (4, 6, 16):
    e = decomposition_from_isometry(rho, random_isometry(m, 4, rng))
    samples.append(average_output_entropy(e))
print("average entropies of random decompositions:", np.round(samples, 12))

# %%
# Two copies: the search finds 2 * log2(d - 1), matching the additivity of
# E_f on these states. The cut puts the first copy of each factor on
# Alice's side.
rho3 = random_state(SpaceShape.antisym(3), rng)
pair = tensor(rho3, random_state(SpaceShape.antisym(3), rng))
res = ef_estimate(pair, opts=EofOptions(restarts=4), seed=0)
print(f"E_f(rho1 x rho2) = {res.value:.10f} (lower bound {res.lower_bound})")
print("restart values:", np.round(res.restart_values, 10))
print("ensemble size used:", res.ensemble_size, "members kept:", len(res.best_ensemble))

# %%
# The same machinery handles ordinary bipartite states. A product state has
# no entanglement.
q = tensor(random_state(SpaceShape.of(Plain(2)), rng), random_state(SpaceShape.of(Plain(2)), rng))
print("product of qubits:", round(ef_estimate(q, opts=EofOptions(restarts=3)).value, 10))
