"""Positivity of D-type maps built from pairs of permutations."""
__version__ = "0.1.0"

from .cyclic import CyclicPairSpec, cyclic_has_property_c, enumerate_cyclic
from .dmap import apply_map, build_k_power_d, build_pair_d, build_weighted_d, f_vector
from .numcheck import (
    SearchConfig,
    lemma31_functional,
    maximize_functional,
    psd_sample_verify,
    psi,
)
from .permutations import Permutation, compose, minimal_invariant_subsets, power
from .property_c import PermPair, has_property_c, has_property_c_bruteforce

__all__ = [
    "CyclicPairSpec",
    "PermPair",
    "Permutation",
    "SearchConfig",
    "apply_map",
    "build_k_power_d",
    "build_pair_d",
    "build_weighted_d",
    "compose",
    "cyclic_has_property_c",
    "enumerate_cyclic",
    "f_vector",
    "has_property_c",
    "has_property_c_bruteforce",
    "lemma31_functional",
    "maximize_functional",
    "minimal_invariant_subsets",
    "power",
    "psd_sample_verify",
    "psi",
]
