"""Exact invariants of coordinate subspace arrangement complements and the
Milnor fibres that realize them."""

from .combinatorics import (
    InputError,
    IntersectionPoset,
    Monomial,
    MonomialIdeal,
    SimplicialComplex,
    alexander_dual,
    complement_complex,
    intersection_poset,
    minimal_generators,
    order_complex,
    stanley_reisner_complex,
    union_ideal,
)
from .complement import (
    ComplementReport,
    Connectivity,
    circle_factor_test,
    complement_report,
    goresky_macpherson_betti,
    hochster_homology,
    simply_connected_codim_check,
)
from .dga import KoszulModel, MasseyResult, build_model, formality_probe, massey_triple
from .homology import ChainComplex, GradedAbelianGroup, homology, simplicial_chain_complex
from .linalg import IntMatrix, SmithForm, smith_normal_form
from .milnor import milnor_polynomial, milnor_report, quasi_homogeneous_weights
from .moment_angle import build_cellular_complex, oracle_homology

__version__ = "0.1.0"
