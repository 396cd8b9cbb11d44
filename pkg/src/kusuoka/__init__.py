"""Kusuoka measure on the Sierpinski gasket and bounds on its local spectral dimension."""

__version__ = "0.1.0"

from .gasket import (
    DepthError,
    Word,
    cell_mass,
    cell_ratio,
    enumerate_masses,
    graph_energy,
    harmonic_matrix,
    orthonormal_pair,
    parse_word,
)
from .disk import DomainError, angle, b_of_c, phi, radius
from .dynamics import apply_P, entropy_g, iterate_Png, psi
from .estimates import (
    BoundsRow,
    RhoEstimate,
    bound_scan,
    closed_form_n0,
    dg_dtheta,
    dsloc_from_rho,
    reference_dimensions,
    rho_cesaro,
    rho_direct,
)

__all__ = [
    "BoundsRow",
    "DepthError",
    "DomainError",
    "RhoEstimate",
    "Word",
    "angle",
    "apply_P",
    "b_of_c",
    "bound_scan",
    "cell_mass",
    "cell_ratio",
    "closed_form_n0",
    "dg_dtheta",
    "dsloc_from_rho",
    "entropy_g",
    "enumerate_masses",
    "graph_energy",
    "harmonic_matrix",
    "iterate_Png",
    "orthonormal_pair",
    "parse_word",
    "phi",
    "psi",
    "radius",
    "reference_dimensions",
    "rho_cesaro",
    "rho_direct",
]
