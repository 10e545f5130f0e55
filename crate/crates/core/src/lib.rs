//! Two-player barter bargaining solver.
//!
//! Two players own items they value differently; any pair of item
//! subsets can cross between them, and an exchange happens voluntarily
//! only if it strictly raises both players' summed utility. This crate
//! enumerates the full exchange space exactly, extracts the efficient
//! periphery, and selects outcomes by the Nash product rule alongside
//! several rival algorithms, keeping all arithmetic in exact rationals
//! so ties and argmax sets are decided without rounding.
//!
//! The `invariance` module verifies mechanically that positive rescaling
//! of a utility function never changes any trade decision while
//! translation does; `notrade` detects ownership/valuation patterns that
//! rule trade out entirely; `lab` generates seeded instances and runs
//! comparative experiments.

pub mod enumeration;
pub mod invariance;
pub mod json;
pub mod lab;
pub mod model;
pub mod notrade;
pub mod rational;
pub mod solvers;
pub mod svg;
pub mod testdata;

pub use model::{Exchange, Instance, Item, OutcomePoint, PlayerId};
pub use rational::Rat;
