//! Exact symbolic engine for filter-relative hyperreal arithmetic.
//!
//! The engine works with three layers of data, all exact:
//!
//! * [`index_set`] — eventually periodic subsets of the naturals, a Boolean
//!   algebra with decidable finiteness;
//! * [`seq`] — hyperreal presentations: total maps from the naturals into the
//!   rationals, given piecewise by rational-function expressions;
//! * [`filter`] — viewpoints: filters on the naturals finitely generated over
//!   the cofinite (Fréchet) filter.
//!
//! On top of those sit a first-order formula language with two independent
//! evaluators of the forcing relation ([`forcing`]), infinitesimal calculus
//! with standard parts and continuity certificates ([`calculus`]), internal
//! predicates with a constructive countable-saturation witness ([`internal`]),
//! ultrafilter-style oracles on the residue-class algebra ([`ultra`]), and a
//! scriptable session layer ([`session`]) driving everything from text.
//!
//! Every operation is pure and every value immutable, so the whole API is
//! safe to share across threads.

pub mod calculus;
pub mod error;
pub mod filter;
pub mod forcing;
pub mod formula;
pub mod index_set;
pub mod internal;
pub mod interval;
pub mod parser;
pub mod ratfunc;
pub mod rational;
pub mod sample;
pub mod seq;
pub mod session;
pub mod ultra;

pub use error::{EngineError, Result};
pub use filter::Filter;
pub use index_set::{IndexSet, SetClass};
pub use rational::Q;
pub use seq::{Limit, RelOp, Seq};
