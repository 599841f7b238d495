"""Numerical toolkit for operators on finite-dimensional Krein spaces.

Spaces carry an indefinite inner product given by a plus/minus signature;
the package classifies operators against that product, builds the isometric
dilation of a noncontraction on the countable sum space, builds the
binoncontractive block extension of an isometry, and finds invariant maximal
positive subspaces through an angular-operator fixed-point solver backed by
a brute-force eigenvector oracle.
"""

from .core import (
    Classification,
    KreinOperator,
    Signature,
    classify,
    codomain_defect,
    domain_defect,
    fundamental_symmetry,
    indefinite_product,
    j_adjoint,
)
from .dilation import (
    BlockVector,
    DilationOperator,
    apply_dilation,
    defect_root,
    dilate,
    dilation_hat_product,
    embed,
    hat_signature,
    project,
    pushdown_subspace,
    truncate_dilation,
)
from .extension import (
    ExtensionCheck,
    ExtensionResult,
    PolarDecomposition,
    SumSplit,
    build_extension,
    defect_isometry,
    polar,
    positive_part_root,
    pullback_subspace,
    verify_extension,
)
from .riccati import (
    RiccatiBlocks,
    SolveOptions,
    block_decompose,
    eigen_oracle,
    find_invariant_maximal_positive,
    riccati_map,
    subspace_distance,
)
from .subspace import (
    AngularOperator,
    SubspaceBasis,
    angular_to_basis,
    basis_to_angular,
    is_invariant,
    is_maximal_positive,
    is_positive,
)

__all__ = [
    "AngularOperator",
    "BlockVector",
    "Classification",
    "DilationOperator",
    "ExtensionCheck",
    "ExtensionResult",
    "KreinOperator",
    "PolarDecomposition",
    "RiccatiBlocks",
    "Signature",
    "SolveOptions",
    "SubspaceBasis",
    "SumSplit",
    "angular_to_basis",
    "apply_dilation",
    "basis_to_angular",
    "block_decompose",
    "build_extension",
    "classify",
    "codomain_defect",
    "defect_isometry",
    "defect_root",
    "dilate",
    "dilation_hat_product",
    "domain_defect",
    "eigen_oracle",
    "embed",
    "find_invariant_maximal_positive",
    "fundamental_symmetry",
    "hat_signature",
    "indefinite_product",
    "is_invariant",
    "is_maximal_positive",
    "is_positive",
    "j_adjoint",
    "polar",
    "positive_part_root",
    "project",
    "pullback_subspace",
    "pushdown_subspace",
    "riccati_map",
    "subspace_distance",
    "truncate_dilation",
    "verify_extension",
]

__version__ = "0.1.0"
