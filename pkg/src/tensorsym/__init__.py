"""tensorsym: exact symmetry algebras of multilinear tensors.

Computes derivation algebras, nuclei, and centroids of tensors over GF(p) or
the rationals, assembles them into sign-twisted chain complexes, verifies
exactness by rank arithmetic, and fingerprints the resulting algebras to
distinguish inequivalent tensors.
"""

from .scalar import FieldSpec, arith, gf, make_field, rationals
from .tensor import (
    Frame,
    Tensor,
    TensorSet,
    builtin,
    evaluate,
    flatten,
    format_tensor,
    is_fully_nondegenerate,
    kron,
    load_tensor,
    parse_tensor,
    save_tensor,
    transform,
)
from .opset import (
    LinearLaw,
    OperatorSubspace,
    TransverseOperator,
    centroid,
    derivations,
    is_autotopism,
    local_derivations,
    nucleus,
    restrict,
    solve_laws,
)
from .orientation import DiamondReport, SignFunction, build_sigma, diamond, tau, verify_sigma
from .chain import ChainReport, build_chain, dimension_diagram, unit_check
from .algstruct import (
    AlgebraFingerprint,
    AlgebraPresentation,
    compare,
    fingerprint,
    radical_dim,
    structure_constants,
)

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "arith",
    "gf",
    "make_field",
    "rationals",
    "Frame",
    "Tensor",
    "TensorSet",
    "builtin",
    "evaluate",
    "flatten",
    "format_tensor",
    "is_fully_nondegenerate",
    "kron",
    "load_tensor",
    "parse_tensor",
    "save_tensor",
    "transform",
    "LinearLaw",
    "OperatorSubspace",
    "TransverseOperator",
    "centroid",
    "derivations",
    "is_autotopism",
    "local_derivations",
    "nucleus",
    "restrict",
    "solve_laws",
    "DiamondReport",
    "SignFunction",
    "build_sigma",
    "diamond",
    "tau",
    "verify_sigma",
    "ChainReport",
    "build_chain",
    "dimension_diagram",
    "unit_check",
    "AlgebraFingerprint",
    "AlgebraPresentation",
    "compare",
    "fingerprint",
    "radical_dim",
    "structure_constants",
    "__version__",
]
