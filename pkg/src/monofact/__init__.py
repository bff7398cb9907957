"""Factorization invariants of submonoids of N^d, computed exactly."""
from .constructions import (
    FullSystemBuild,
    Profile,
    Realization,
    build_full_system,
    enumerate_pfin,
    is_primary_family,
    lift_rank,
    noniso_witness,
    realize_length_set,
    slope_family,
)
from .elasticity import (
    ElasticityResult,
    RatioWitness,
    ResourceError,
    UnsupportedConfiguration,
    classify_rank2,
    elasticity_fg,
    polyhedral_certificate,
    unbounded_certificate,
    verify_certificate,
)
from .factorization import (
    check_eventual_affine,
    elasticity_of_element,
    factorizations,
    generalized_elasticity_scan,
    generalized_length_set,
    length_set,
    system_sample,
)
from .geometry import ContractError, Ordering, cramer_decompose, det2, hilbert_basis_2d, projection_weight, slope_cmp
from .monoid import AtomSequence, MonoidSpec, atoms_of, family_members_up_to, is_member, truncate, validate_family_atoms

__version__ = "0.1.0"
