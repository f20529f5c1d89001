//! Propagators, two-point functions from the mode expansions, LSZ reduction
//! and finite-dimensional checks of projected unitarity.

mod lsz;
mod propagator;
mod toy;
mod wick;

pub use propagator::{
    inner_projector, inner_projector_upper, printed_structure, propagator_eval, InnerStructure, Kernel, Numerator,
    PropagatorSpec, PropagatorValue, TwoPointStructure, DEFAULT_I_EPSILON,
};
pub use wick::{check_two_point, wick_two_point, TwoPointCheck, WickConfig};
pub use lsz::{is_exactly_one, lsz_reduce, Amplitude, Direction, GreenFunction, LSZRecipe, Leg, Pairing, VertexRule};
pub use toy::{
    random_unitary, toy_unitarity_check, vacuum_and_one_particle_checks, BasisState, ToySMatrix, UnitarityReport,
    VacuumReport,
};
