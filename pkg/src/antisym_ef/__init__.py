"""Antisymmetric states, the partial-trace channel and their entanglement.

The submodules are layered: :mod:`~antisym_ef.numerics` (states and dense
linear algebra), :mod:`~antisym_ef.antisym` (the compact basis),
:mod:`~antisym_ef.channel` (the channel and its norm identities),
:mod:`~antisym_ef.eof` (entanglement of formation and cost),
:mod:`~antisym_ef.capacity` (Holevo capacity) and :mod:`~antisym_ef.cli`.
"""

from .antisym import CompactState, build_basis, embed_full, levi_civita, project_compact, su_action
from .capacity import (
    CapacityResult,
    capacity_closed_form,
    capacity_ensemble_opt,
    capacity_via_ef,
    holevo_quantity,
    verify_superadditivity_chain,
)
from .channel import (
    ChannelSpec,
    apply_channel,
    apply_lambda_compact,
    lambda_oracle_full,
    purity_identity_sides,
    purity_bound_margin,
    output_entropy,
)
from .eof import (
    Cut,
    Ensemble,
    EofOptions,
    EofResult,
    average_output_entropy,
    decomposition_from_isometry,
    ef_estimate,
    ef_lower_bound,
    entanglement_cost_report,
    verify_entropy_bound,
)
from .numerics import (
    Antisym,
    DensityMatrix,
    Plain,
    SpaceShape,
    partial_trace,
    random_state,
    tensor,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "Antisym",
    "CapacityResult",
    "ChannelSpec",
    "CompactState",
    "Cut",
    "DensityMatrix",
    "Ensemble",
    "EofOptions",
    "EofResult",
    "Plain",
    "SpaceShape",
    "apply_channel",
    "apply_lambda_compact",
    "average_output_entropy",
    "build_basis",
    "capacity_closed_form",
    "capacity_ensemble_opt",
    "capacity_via_ef",
    "decomposition_from_isometry",
    "ef_estimate",
    "ef_lower_bound",
    "embed_full",
    "entanglement_cost_report",
    "holevo_quantity",
    "lambda_oracle_full",
    "purity_identity_sides",
    "purity_bound_margin",
    "levi_civita",
    "output_entropy",
    "partial_trace",
    "project_compact",
    "random_state",
    "su_action",
    "tensor",
    "verify_entropy_bound",
    "verify_superadditivity_chain",
    "von_neumann_entropy",
]
