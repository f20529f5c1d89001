//! Exact second quantization of free fields with inner momentum labels.
//!
//! Scalar, Dirac and massive vector fields carry an on-shell momentum `k` and
//! an inner four-momentum `K`. The crate provides their ladder algebra in
//! exact canonical form, Fock states with an indefinite metric, the
//! gravitational-limit projection `K → k`, propagators, LSZ reduction and a
//! finite-dimensional unitarity check. See the guide in `book/` for a tour.
//!
//! ```
//! use innerfield::cli::parse_expression;
//! use innerfield::opalg::commutator;
//!
//! let c = commutator(&parse_expression("a(k;K)").unwrap(), &parse_expression("a'(h;H)").unwrap());
//! assert!(c.is_c_number());
//! ```

pub mod error;
pub mod exact;
pub mod kinematics;
pub mod opalg;
pub mod fock;
pub mod gravlimit;
pub mod smatrix;
pub mod cli;

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    pub mod algebra {}
    #[doc = include_str!("../../../book/src/fock.md")]
    pub mod fock {}
    #[doc = include_str!("../../../book/src/kinematics.md")]
    pub mod kinematics {}
    #[doc = include_str!("../../../book/src/gravitational-limit.md")]
    pub mod gravitational_limit {}
    #[doc = include_str!("../../../book/src/propagators.md")]
    pub mod propagators {}
    #[doc = include_str!("../../../book/src/lsz.md")]
    pub mod lsz {}
    #[doc = include_str!("../../../book/src/unitarity.md")]
    pub mod unitarity {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
