"""Structured pair families with closed-form spectral analyzers."""

from .family1 import (
    Family1Spec,
    family1_blocks,
    family1_blocks_eigs,
    family1_eigs_closed_form,
    family1_matrices,
    random_family1_spec,
)
from .family2 import (
    Family2Spec,
    cyclic_shift,
    family2_lambda1_bound,
    family2_matrices,
    family2_rank1_eigs,
    random_derangement,
    random_family2_spec,
    random_rank1_instance,
    rank1_pair,
)
from .normal import (
    NormalSpec,
    d3_saturating_spec,
    d4_saturating_spec,
    normal_objective,
    normal_pair,
    pp_ab_maximizer,
    pp_ab_maximum,
    pp_ab_value,
    random_normal_spec,
)
from .scalar import (
    GridMaximum,
    basic_inequality_gap,
    case5_envelope,
    case5_grid_max,
    family1_case5_bound,
    family2_d5_objective,
    maximize_d5_objective,
    scalar_inequality_check,
)


def spec_from_dict(obj):
    """Rebuild a family spec from its tagged JSON form."""
    family = obj.get("family")
    if family == "normal":
        return NormalSpec.from_dict(obj)
    if family == "family1":
        return Family1Spec.from_dict(obj)
    if family == "family2":
        return Family2Spec.from_dict(obj)
    raise ValueError(f"unknown family tag {family!r}")
