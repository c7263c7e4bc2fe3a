"""Granular micromechanics identification of first- and second-gradient
elastic stiffness tensors from grain-pair stiffness distributions."""

from .distributions import (AdmissibilityWarning, BUILTIN_DISTRIBUTIONS,
                            StiffnessDistribution, builtin_distribution)
from .energy import EnergyInput, energy_continuum, energy_micro
from .identification import (C_PARAMS_3D, IdentifiedTensors,
                             IsotropicMaterial, LegacyComparison,
                             MINDLIN_FACTORS, NotIsotropicError, SYM_C, SYM_D,
                             SYM_M, c_group_values, c_groups, c_tensor,
                             compare_legacy, d_from_iso_params,
                             d_group_rows, d_group_values, d_groups,
                             d_tensor, engineering_from_k, identify,
                             iso_c_params, iso_params_from_d,
                             isotropic_closed_forms, isotropic_material,
                             k_from_engineering, lame_from_k, m_tensor,
                             mindlin_from_c, tensors_from_energy)
from .kinematics import (KinematicState, PairDisplacement, PlacementField,
                         h_from_strain_gradient, h_tensor_direct,
                         h_tensor_from_strain, kinematic_state,
                         objective_relative_displacement,
                         project_displacement, random_placement,
                         relative_displacement,
                         squared_projections_closed_form,
                         squared_projections_from_strain)
from .quadrature import (OrientationDomain, QuadratureRule, build_rule,
                         integrate, monomial_moment)
from .tensors import (SymmetryReport, SymmetrySpec, check_symmetry,
                      component_name, max_abs_diff, parse_component,
                      symmetrize_nested, symmetrize_single, validate_tensor)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityWarning",
    "BUILTIN_DISTRIBUTIONS",
    "C_PARAMS_3D",
    "EnergyInput",
    "IdentifiedTensors",
    "IsotropicMaterial",
    "KinematicState",
    "LegacyComparison",
    "MINDLIN_FACTORS",
    "NotIsotropicError",
    "OrientationDomain",
    "PairDisplacement",
    "PlacementField",
    "QuadratureRule",
    "StiffnessDistribution",
    "SYM_C",
    "SYM_D",
    "SYM_M",
    "SymmetryReport",
    "SymmetrySpec",
    "build_rule",
    "builtin_distribution",
    "c_group_values",
    "c_groups",
    "c_tensor",
    "check_symmetry",
    "compare_legacy",
    "component_name",
    "d_from_iso_params",
    "d_group_rows",
    "d_group_values",
    "d_groups",
    "d_tensor",
    "energy_continuum",
    "energy_micro",
    "engineering_from_k",
    "h_from_strain_gradient",
    "h_tensor_direct",
    "h_tensor_from_strain",
    "identify",
    "integrate",
    "iso_c_params",
    "iso_params_from_d",
    "isotropic_closed_forms",
    "isotropic_material",
    "k_from_engineering",
    "kinematic_state",
    "lame_from_k",
    "m_tensor",
    "max_abs_diff",
    "mindlin_from_c",
    "monomial_moment",
    "objective_relative_displacement",
    "parse_component",
    "project_displacement",
    "random_placement",
    "relative_displacement",
    "squared_projections_closed_form",
    "squared_projections_from_strain",
    "symmetrize_nested",
    "symmetrize_single",
    "tensors_from_energy",
    "validate_tensor",
    "__version__",
]
