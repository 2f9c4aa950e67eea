//! Set-valued and indeterminate precalculus and calculus.
//!
//! * [`realset`]: canonical subsets of the reals, their arithmetic, the
//!   norm `mu` and the partial metric `eta`.
//! * [`neutronum`]: numbers `a + b*I` with `I^2 = I`.
//! * [`funcmodel`]: expressions, function descriptors and evaluation.
//! * [`textparse`]: the definition language and value rendering.
//! * [`limits`], [`contin`], [`calc`]: the analysis engines.

pub mod calc;
pub mod contin;
pub mod error;
pub mod funcmodel;
pub mod limits;
pub mod neutronum;
pub mod realset;
pub mod textparse;

pub use error::{Error, Result};
pub use funcmodel::{Branch, Domain, Expr, FuncSpec, NeutroValue};
pub use neutronum::NeutroNumber;
pub use realset::{Interval, MembershipTriple, RealSet};
