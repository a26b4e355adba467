//! Exact verification toolkit for the circlet inequalities, a class of
//! circulant facet-defining inequalities for the symmetric TSP polytope.
//!
//! Everything is computed in exact rational arithmetic: validity via
//! exhaustive enumeration and a Held-Karp dynamic program, facet rank via
//! fraction-free elimination, contraction cost accounting, subtour-LP
//! feasibility via rational minimum cuts, and strength comparisons against
//! the crown inequality. The `circlet` binary fronts every operation.

pub mod base;
pub mod caps;
pub mod cli;
pub mod contraction;
pub mod error;
pub mod facet;
pub mod ineq;
pub mod io;
pub mod oracle;
pub mod subtour;

pub use base::{Edge, FractionalPoint, Instance, LengthProfile, Tour};
pub use caps::Caps;
pub use error::{Error, Result};

/// All weights, costs, and certificates are exact rationals.
pub type Rational = num::BigRational;
