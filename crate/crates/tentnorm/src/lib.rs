//! Norm calculus on coefficient sequences indexed by the dyadic tree over
//! `[0, 1)`.
//!
//! The crate is organised around a two-exponent family of norms on finitely
//! supported sequences: an inner `ℓ^p` aggregation across disjoint intervals
//! and an outer `ℓ^q` aggregation along nested chains, with `∞` meaning a
//! supremum in either slot.  Around that core sit:
//!
//! * [`dyadic`] — interval indices, sequences, antichains, and exhaustive
//!   antichain enumeration (the oracle substrate);
//! * [`xpq`] — the norm engine with optimizer witnesses, cone norms, Hölder
//!   pairings, and exact dual extremizers;
//! * [`haar`] — step functions, the Haar transform, oscillation norms, square
//!   functions, and Haar multiplier operators;
//! * [`atoms`] / [`orlicz`] — chain-atom synthesis and greedy decomposition,
//!   Luxemburg norms, and exponential-integrability checks;
//! * [`geometry`] — finite families of norm balls: overlap counts, colorings,
//!   independent-set norms, Vitali selection, weak-type bounds, nets;
//! * [`io`] / [`report`] / [`corpus`] — JSON wire formats, the experiment
//!   driver behind the CLI, and deterministic random corpora.
//!
//! Everything is deterministic: randomized drivers take explicit seeds, maps
//! iterate in key order, and reports serialize stably.

pub mod atoms;
pub mod corpus;
pub mod dyadic;
pub mod error;
pub mod exponent;
pub mod geometry;
pub mod haar;
pub mod io;
pub mod orlicz;
pub mod report;
pub mod tol;
pub mod xpq;

pub use atoms::{ChainAtom, DyadicPoint};
pub use dyadic::{Antichain, DyadicIndex, DyadicSequence};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use haar::{HaarExpansion, StepFunction};
pub use xpq::NormReport;
