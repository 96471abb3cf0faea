"""Deciding injectivity, building extensions, envelopes and decompositions."""
from .ainf import (
    essential_check,
    extension_test,
    nonextendable_pair,
    ray_envelope,
    ray_injectivity_test,
    split_injective,
)
from .baer import baer_oracle
from .decompose import decompose_injective_tree, rebuild
from .extend import extend_morphism
from .local import local_injectivity_test

__all__ = [
    "baer_oracle",
    "decompose_injective_tree",
    "essential_check",
    "extend_morphism",
    "extension_test",
    "local_injectivity_test",
    "nonextendable_pair",
    "ray_envelope",
    "ray_injectivity_test",
    "rebuild",
    "split_injective",
]
