"""Weil-Petersson potentials on spaces of central charges, with Bergman comparisons."""

from .cohring import CohClass, GradedRingSpec, exp_class, integrate, load_ring, multiply, mukai_dual
from .charclass import ChernData, twisted_mukai_vector
from .errors import ConfigError, DomainError, RingMismatchError
from .scenario import ScenarioConfig, load_scenario
from .stability import MukaiBasis, StabilityModel, bilinear_b, mukai_pairing, stab_plus, wp_potential

__version__ = "0.1.0"

__all__ = [
    "ChernData", "CohClass", "ConfigError", "DomainError", "GradedRingSpec", "MukaiBasis",
    "RingMismatchError", "ScenarioConfig", "StabilityModel", "bilinear_b", "exp_class",
    "integrate", "load_ring", "load_scenario", "mukai_dual", "mukai_pairing", "multiply",
    "stab_plus", "twisted_mukai_vector", "wp_potential",
]
