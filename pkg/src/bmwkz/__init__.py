"""BMW-type algebras of dihedral and finite Coxeter type from KZ monodromy.

The pipeline: dihedral reflection geometry, the infinitesimal Lawrence–Krammer
representation and its flat connection, numerical monodromy, sandwich scalars
Phi, and finitely presented algebras built from them.
"""

from .coxeter import CoxeterMatrix, DihedralModel, alternating_word, enumerate_group
from .engine import (
    Presentation,
    PresentedAlgebra,
    hecke_quotient,
    normal_form,
    regular_representation,
    structure_constants,
    trace_form_rank,
    verify_representation,
)
from .lkrep import ParameterSet, build_connection, sample_generic_parameters
from .monodromy import MonodromyResult, monodromy_generators
from .phi import PhiOracle, phi
from .presentations import (
    bmw3_comparison,
    build_brauer,
    build_dihedral_bmw,
    build_general_bmw,
    degeneration_check,
    simply_laced_check,
)

__all__ = [
    "CoxeterMatrix",
    "DihedralModel",
    "MonodromyResult",
    "ParameterSet",
    "PhiOracle",
    "Presentation",
    "PresentedAlgebra",
    "alternating_word",
    "bmw3_comparison",
    "build_brauer",
    "build_connection",
    "build_dihedral_bmw",
    "build_general_bmw",
    "degeneration_check",
    "enumerate_group",
    "hecke_quotient",
    "monodromy_generators",
    "normal_form",
    "phi",
    "regular_representation",
    "sample_generic_parameters",
    "simply_laced_check",
    "structure_constants",
    "trace_form_rank",
    "verify_representation",
]

__version__ = "0.1.0"
