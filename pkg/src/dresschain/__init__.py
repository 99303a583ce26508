"""Darboux-transformation calculus and dressing-chain numerics."""

from .diffpoly import DiffPoly, Jet, evaluate, total_derivative
from .bell import BellTable, bell_generalized_explicit, bell_generalized_recurrence, bell_standard
from .darboux import (
    OperatorCoeffs,
    a0_from_invariant,
    chain_residual_n2,
    chain_residual_n3,
    covariance_residual_n2,
    dt_coefficients,
    dt_eigenfunction,
    miura_r,
    miura_r_derivative,
    potential_from_sigma,
)
from .chain import (
    ChainState,
    TChainField,
    Trajectory,
    build_periodic_field,
    casimir_c,
    cfl_dt,
    chain_rhs,
    find_period,
    fixed_point_state,
    g2_branches,
    g_rhs,
    g_vars,
    integrate_chain,
    integrate_reduced,
    integrate_tchain,
    invariant_A,
    reduced_rhs,
    tchain_rhs,
)
from .symmetry import (
    ad_H,
    ad_H_scalar,
    characters,
    cyclic_shift,
    from_irreducible,
    hamiltonian,
    poisson_bracket,
    poisson_matrix,
    projector,
    ss_rhs,
    to_irreducible,
)
from .zs import (
    EtaJet,
    closure_rhs,
    eta3,
    eta_from_xi,
    etas_residual,
    integrate_closure,
    lie_B_matrix,
    ns_dt,
    ns_potential_from_eta,
    operator_dt,
    solve_u_from_sigma,
)
from .lattice_zs import (
    LatticeFrame,
    lattice_dt,
    lattice_potential_U,
    miura_residual,
    s_chain_residuals,
    sigma_plus,
    spectral_residual,
)

__version__ = "0.1.0"
