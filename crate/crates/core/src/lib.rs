//! Fractal product codes and their generalized Ising duals.
//!
//! Binary linear algebra, Sierpinski carpet graphs, chain complexes and their
//! homological products, CSS codes, generalized Ising models with
//! Merlini–Gruber duality, and Monte Carlo samplers.

pub mod carpet;
pub mod complex;
pub mod css;
pub mod error;
pub mod gf2;
pub mod ising;
pub mod lattice;
pub mod mc;
pub mod product;

pub use carpet::{
    barrier_closed_form, build_carpet_cells, build_perforated_lattice, closed_form_counts,
    energy_barrier_cut, hausdorff_dimension, min_vertical_cut, CarpetCounts, CarpetGraph,
    CarpetSpec, CutResult, DualGraph, GraphJson, PerforatedLattice, PerforatedLatticeSpec,
};
pub use complex::{dualize, toric_complex, ChainComplex};
pub use css::{
    classify_global, code_from_complex, export_hamiltonian, greedy_reduce, logical_basis,
    num_logical_qubits, CodeFile, CssCode, HamiltonianTerm, LogicalBasis, Pauli,
};
pub use error::{Error, Result};
pub use gf2::{in_span, BasisSet, BinaryMatrix, BitVec, Echelon};
pub use ising::{
    brute_force_log_z, brute_force_z, carpet_slice_extract, constraint_group,
    duality_identity_check, duality_identity_check_with, fpc_z_constraints, gks_check,
    merlini_gruber_dual, product_swap, sector_model, sectors_are_isomorphic, slice_matches_graph,
    symmetry_group, ConstraintGroup, DualSystem, DualityCheck, Interaction, IsingModel, ModelFile,
    Sector, SymmetryGroup,
};
pub use lattice::LatticeGraph;
pub use mc::{
    binder_crossing, metropolis_sweep, read_csv, run_schedule, wolff_update, write_csv, Algorithm,
    Crossing, ObservableRecord, Sampler, Schedule, ScheduleResult, SpinConfig,
};
pub use product::{
    fpc_closed_form, kunneth_check, middle_code, product, Fpc, KunnethCheck, ProductComplex,
    Summand,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
