"""Coefficient rings, finite modules and the linear algebra over them."""
from .base import BaseRing
from .hom import (
    HomSpace,
    ModuleClass,
    character_pairing,
    dual_map,
    evaluation_map,
    extend_along,
    hom_module,
    injective_hull,
    module_classify,
    pontryagin_dual,
    projective_cover,
    split_epi_witness,
    split_mono_witness,
)
from .module import (
    FinModule,
    ModuleMap,
    cokernel,
    direct_sum,
    image,
    kernel,
    linear_solve,
    quotient,
    submodule,
)
from .smith import local_smith, smith_normal_form

__all__ = [
    "BaseRing",
    "FinModule",
    "HomSpace",
    "ModuleClass",
    "ModuleMap",
    "character_pairing",
    "cokernel",
    "direct_sum",
    "dual_map",
    "evaluation_map",
    "extend_along",
    "hom_module",
    "image",
    "injective_hull",
    "kernel",
    "linear_solve",
    "local_smith",
    "module_classify",
    "pontryagin_dual",
    "projective_cover",
    "quotient",
    "smith_normal_form",
    "split_epi_witness",
    "split_mono_witness",
    "submodule",
]
