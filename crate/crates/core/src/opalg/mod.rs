//! Exact noncommutative algebra of ladder operators.
//!
//! An [`OperatorExpr`] is a sum of monomials `c · atoms · o₁ o₂ … oₙ` where `c`
//! is a complex rational, `atoms` a product of symbolic factors ([`Atom`]) and
//! the `oᵢ` are [`LadderOperator`]s. Everything is kept in a canonical form, so
//! identities are checked with `==`.
//!
//! ```
//! use innerfield::opalg::{commutator, LadderOperator, OperatorExpr};
//!
//! let a = OperatorExpr::op(LadderOperator::scalar("k", "K").unwrap());
//! let ad = OperatorExpr::op(LadderOperator::scalar("h", "H").unwrap().dag());
//! let c = commutator(&a, &ad);
//! assert_eq!(
//!     c.to_string(),
//!     "2 * omega(h) * Lambda^-4 * twopi^7 * delta4(H,K) * delta3(h,k)"
//! );
//! ```

mod coeff;
mod expr;
mod labels;
mod mode;
mod resolve;

pub use coeff::{canonicalize, Atom, Atoms, NumericEnv, OmegaMass};
pub use expr::{
    anticommutator, commutator, contact_term, multiply, normal_order, reduce_to_normal_form, vev, OperatorExpr, Term,
};
pub use labels::{Disc, Discrete, Field, InnerLabel, LadderOperator, MomentumLabel, Vec3, Vec4};
pub use mode::{Attachment, FieldKind, ModeExpansion, ModePart};
pub use resolve::{bind, delta_resolve, Bindings};
