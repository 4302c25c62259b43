"""Minimal-ideal analysis and faithful irreducible module construction for
finite-dimensional (restricted) Lie algebras over finite fields."""

from .errors import (
    CapExceededError,
    MeataxeInconclusiveError,
    ModlieError,
    NonScalarActionError,
    ValidationError,
    VerificationError,
)
from .field import GF, FFElement, FiniteField, embed_element, embedding
from .poly import Poly, factor_poly, is_irreducible, min_poly_over_subfield
from .linalg import Matrix, Subspace
from .liealg import (
    DiagonalSpec,
    IsoClass,
    LieAlgebra,
    abelian_socle,
    derivations,
    enumerate_diagonals,
    ideal_module,
    iso_classes,
    minimal_ideals,
)
from .rep import (
    Character,
    Cluster,
    Representation,
    adjoint_representation,
    character_of_irreducible,
    cluster_of_module,
    hom_space,
    irreducibles_isomorphic,
    modules_isomorphic,
)
from .restricted import (
    PMap,
    RestrictedLieAlgebra,
    jacobson_terms,
    normalize_pmap_on_asoc,
    p_envelope,
    pmap_validate,
)
from .redenv import (
    ReducedEnvAlgebra,
    build_reduced_env,
    irreducible_with_cluster,
    m_x_poly,
)
from .pipeline import (
    Caps,
    CriterionReport,
    FaithfulCertificate,
    aclosed_criterion,
    build_V0,
    faithful_cover,
    faithful_irreducible,
    socle_character,
    split_extension,
    tensor_absorb,
    verify_module,
)

__version__ = "0.1.0"
