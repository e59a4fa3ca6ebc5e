"""Structure-preserving discontinuous Galerkin discretization of 1D port-Hamiltonian systems."""
from .assembly import (BoundaryConditions, BoundaryKind, GlobalPHModel, assemble_global,
                       boundary_flux_rule, structure_report)
from .basis import eval_basis, eval_basis_deriv, gauss_rule, reference_basis
from .element import element_hamiltonian, element_input_vector, element_matrices
from .flux import FluxParams, flux_preset, interface_flux
from .mesh import Mesh1D, build_uniform_mesh, element_interval
from .simulate import (InputSignal, coenergy_transform, hamiltonian, implicit_midpoint_step,
                       simulate)
from .spectrum import eigenvalues, spectrum_summary, system_operator

__all__ = [
    "BoundaryConditions", "BoundaryKind", "GlobalPHModel", "assemble_global",
    "boundary_flux_rule", "structure_report", "eval_basis", "eval_basis_deriv", "gauss_rule",
    "reference_basis", "element_hamiltonian", "element_input_vector", "element_matrices",
    "FluxParams", "flux_preset", "interface_flux", "Mesh1D", "build_uniform_mesh",
    "element_interval", "InputSignal", "coenergy_transform", "hamiltonian",
    "implicit_midpoint_step", "simulate", "eigenvalues", "spectrum_summary", "system_operator",
]
