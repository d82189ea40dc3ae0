"""Unextendible entangled bases with fixed Schmidt number.

Construct bipartite bases from zero-pattern decompositions, lift them to more
parties, and verify them with complement-rank certificates or seeded searches.
"""

from .constructors import EXAMPLES, BasisCandidate, construct_bipartite_uebk, suebk_tripartite
from .lifting import lift_chain, lift_uebk, lift_upb
from .states import MultiState, SchmidtForm, schmidt_form
from .verifier import VerificationReport, verify

__version__ = "0.1.0"

__all__ = [
    "EXAMPLES",
    "BasisCandidate",
    "MultiState",
    "SchmidtForm",
    "VerificationReport",
    "construct_bipartite_uebk",
    "lift_chain",
    "lift_uebk",
    "lift_upb",
    "schmidt_form",
    "suebk_tripartite",
    "verify",
]
