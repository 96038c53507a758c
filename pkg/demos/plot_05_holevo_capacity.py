"""
Holevo capacity and its additivity
==================================

The capacity of the partial-trace channel is log2(d / (d - 1)). It follows
from the constant E_f, and it can also be found by directly maximizing the
Holevo quantity over input ensembles. For two channels in parallel the
capacities add, so Lambda_3 (x) Lambda_4 transmits exactly one bit.
"""

# %%
import math

import numpy as np

from antisym_ef.capacity import (
    basis_ensemble,
    capacity_closed_form,
    capacity_ensemble_opt,
    capacity_via_ef,
    holevo_quantity,
    product_ensemble,
    verify_superadditivity_chain,
)
from antisym_ef.numerics import SpaceShape, random_state

print("closed form, d=3:", capacity_closed_form([3]), " log2(3/2) =", math.log2(1.5))
print("from E_f        :", capacity_via_ef([3]).value)
print("direct search   :", capacity_ensemble_opt([3], restarts=2).value)

# %%
# The uniform ensemble over the basis already achieves the capacity, and its
# product achieves the sum for two channels.
both = product_ensemble(basis_ensemble(3), basis_ensemble(4))
print("product ensemble on Lambda_3 x Lambda_4:", holevo_quantity(both))
print("closed form for the pair              :", capacity_closed_form([3, 4]))

# %%
# An unrestricted search over entangled input ensembles does not beat it.
res = capacity_ensemble_opt([3, 4], restarts=1)
print(f"search over entangled inputs: {res.value:.9f}")
print(f"average input is {res.distance_to_maximally_mixed():.1e} from maximally mixed")

# %%
# The entropy inequalities behind additivity, on random joint states.
rng = np.random.default_rng(5)
for _ in range(3):
    chain = verify_superadditivity_chain(random_state(SpaceShape.antisym(3, 4), rng))
    print(
        f"S(joint) - S(1) - S(2) = {chain.subadditivity_residual:+.4f}, "
        f"S(joint) - E_f bound - C = {chain.capacity_residual:+.4f}"
    )
