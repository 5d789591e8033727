"""mildrep: attractive-repulsive power-law interaction energies.

Pair potentials and their thresholds for the mildly repulsive regime:
exact kernel evaluation, discrete-measure energies and gradients, the
three simplex-minimization threshold curves, and a particle gradient flow
that recovers the classified minimizers empirically.
"""

from .energy import (CornerCaseConstants, EnergyBreakdown, corner_case_constants,
                     energy, energy_breakdown, gradient, quartic_quadratic_form,
                     simplex_energy, verify_min42)
from .errors import ConvergenceError, DomainError, InvariantViolation
from .flow import (FlowConfig, FlowResult, ProbeOutcome, descend, multistart,
                   simplex_optimality_probe)
from .measures import (DiscreteMeasure, Label, RadialMeasure, center, classify,
                       convex_combination, cross_polytope, distance_pushforward,
                       second_moment, sphere_quadrature, unit_simplex)
from .potentials import (Kernel, LogLimit, PowerLaw, PureAttractive, Rescaled,
                         default_support_radius, eval_radial,
                         eval_radial_derivative, rescaled_beta_derivative,
                         zero_radius)
from .thresholds import (AlphaPlus, ThresholdReport, alpha_plus, alpha_star,
                         argmax_unimodal, beta_star, el_margin, el_potential,
                         four_star, peak_beta, phase_sweep, probe_gap,
                         probe_gap_limit, underline_alpha)

__version__ = "0.1.0"

__all__ = [
    "AlphaPlus", "ConvergenceError", "CornerCaseConstants", "DiscreteMeasure",
    "DomainError", "EnergyBreakdown", "FlowConfig", "FlowResult",
    "InvariantViolation", "Kernel", "Label", "LogLimit", "PowerLaw",
    "ProbeOutcome", "PureAttractive", "RadialMeasure", "Rescaled",
    "ThresholdReport", "alpha_plus", "alpha_star", "argmax_unimodal",
    "beta_star", "center", "classify", "convex_combination",
    "corner_case_constants", "cross_polytope", "default_support_radius",
    "descend", "distance_pushforward", "el_margin", "el_potential", "energy",
    "energy_breakdown", "eval_radial", "eval_radial_derivative", "four_star",
    "gradient", "multistart", "peak_beta", "phase_sweep", "probe_gap",
    "probe_gap_limit", "quartic_quadratic_form", "rescaled_beta_derivative",
    "second_moment", "simplex_energy", "simplex_optimality_probe",
    "sphere_quadrature", "underline_alpha", "unit_simplex", "verify_min42",
    "zero_radius",
]
