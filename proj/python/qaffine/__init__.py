"""Affine maps of density matrices, constructive separable decompositions
and classical mimicry of Bell-test statistics."""

from ._qaffine import (
    ContractError,
    DegenerateDataError,
    DeviceSaturatedError,
    DimensionError,
    Error,
    InvalidStateError,
    affine_apply,
    angular_curve,
    bell_singlet,
    chsh_qdice,
    chsh_qdice_sampled,
    chsh_singlet,
    correlation,
    equivalent_affine,
    maximally_mixed,
    minimal_mixing_parameter,
    misclassify,
    pauli_decompose,
    projective_probabilities,
    pseudo_pure_split,
    qdice_decomposition,
    qdice_sigma,
    separate,
    transform_probabilities,
)

__all__ = [name for name in dir() if not name.startswith("_")]
