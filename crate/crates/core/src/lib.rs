//! Exact finite-level certificates for dominating ergodic averages of
//! discrete amenable group actions by Cesàro means of a Markov operator.
//!
//! The crate is organized bottom-up:
//!
//! * [`group`]: element algebra for `Z^d`, the Heisenberg group and the
//!   lamplighter group, with canonical encodings and word balls;
//! * [`set`]: finite subsets, set products, dynamical interiors, Følner
//!   ratios, temperedness and subsequence extraction;
//! * [`measure`]: exact finitely supported measures and their convolutions;
//! * [`omega`]: the enveloping sets `E_n`, the measure `ω`, growth schedules
//!   and lamplighter Følner sets;
//! * [`dominance`]: the measure comparison certificate and the inequalities
//!   of its proof;
//! * [`action`]: finite measure-preserving actions, ergodic averages and the
//!   Markov operator;
//! * [`cli`]: configuration and the subcommands of the `ergodom` binary.

pub mod action;
pub mod cli;
pub mod dominance;
pub mod error;
pub mod group;
pub mod measure;
pub mod omega;
pub mod rational;
pub mod schedule;
pub mod set;

pub use error::{Error, Result};
pub use group::{GroupDescriptor, GroupElement, GroupKind};
pub use measure::FinSupMeasure;
pub use schedule::Schedule;
pub use set::FiniteSubset;
