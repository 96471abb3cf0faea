"""Representations: finite quivers, the ray, barren forests and the line."""
from .chain import ChainMorphism, ChainRep, TailSpec, chain, colim_along_ray, constant_chain, torsion_subrep
from .finite import (
    HomReps,
    RepMorphism,
    Representation,
    make_representation,
    rep_cokernel,
    rep_direct_sum,
    rep_kernel,
    sink_map,
    source_map,
    zero_representation,
)
from .forest import ForestMorphism, ForestRep, LineRep
from .serialize import morphism_from_json, morphism_to_json, rep_from_json, rep_to_json

__all__ = [
    "ChainMorphism",
    "ChainRep",
    "ForestMorphism",
    "ForestRep",
    "HomReps",
    "LineRep",
    "RepMorphism",
    "Representation",
    "TailSpec",
    "chain",
    "colim_along_ray",
    "constant_chain",
    "make_representation",
    "morphism_from_json",
    "morphism_to_json",
    "rep_cokernel",
    "rep_direct_sum",
    "rep_from_json",
    "rep_kernel",
    "rep_to_json",
    "sink_map",
    "source_map",
    "torsion_subrep",
    "zero_representation",
]
