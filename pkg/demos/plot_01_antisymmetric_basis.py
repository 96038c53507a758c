"""
The antisymmetric basis
=======================

Each basis vector of the d-dimensional antisymmetric space lives in
``d - 1`` copies of C^d and is built from the Levi-Civita symbol. This
script builds the basis for d = 4, checks that it is orthonormal and shows
how a unitary on C^d acts on it.
"""

# %%
# Build the basis. Vector ``i`` is the normalized sum over all orderings
# of the d - 1 labels different from ``i``, signed by the Levi-Civita symbol.
import numpy as np

from antisym_ef.antisym import CompactState, build_basis, embed_full, levi_civita, su_action
from antisym_ef.numerics import random_density_matrix, random_unitary

basis = build_basis(4)
print("full dimension:", basis.full_dim)
print("Gram matrix is the identity:", np.allclose(basis.gram(), np.eye(4)))
print("sign of (1, 2, 3, 4):", levi_civita([1, 2, 3, 4]), " of (2, 1, 3, 4):", levi_civita([2, 1, 3, 4]))

# %%
# The nonzero amplitudes of the first basis vector: every permutation of
# (2, 3, 4) appears once with weight 1/sqrt(6).
v0 = basis.vectors[0]
for flat in np.flatnonzero(np.abs(v0) > 1e-12):
    labels = np.unravel_index(flat, (4, 4, 4))
    print([int(x) + 1 for x in labels], f"{v0[flat].real:+.4f}")

# %%
# A unitary U applied to every copy keeps the antisymmetric space invariant
# and acts on compact coordinates as the complex conjugate of U.
rng = np.random.default_rng(0)
u = random_unitary(4, rng)
s = CompactState(random_density_matrix(4, rng))
big_u = np.kron(np.kron(u, u), u)
direct = big_u @ embed_full(s).matrix @ big_u.conj().T
via_compact = embed_full(su_action(u, s)).matrix
print("tensor power matches compact action:", np.allclose(direct, via_compact))
