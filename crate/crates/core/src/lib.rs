//! Open book foliations on surfaces.
//!
//! Pages are combinatorial surfaces with labeled binding components and braid
//! punctures. A foliated surface is stored as a region decomposition with signed
//! elliptic and hyperbolic points and a circular order of saddle events. The
//! crate checks the foliation axioms, applies the b-arc foliation change, exchange
//! and bypass moves as guarded rewrites, models open book stabilization, and runs
//! the split and composite closed braid reductions with replayable traces.

pub mod cli;
pub mod error;
pub mod foliation;
pub mod moves;
pub mod movie;
pub mod page;
pub mod rational;
pub mod reduce;
pub mod sign;
pub mod stabilize;

pub use error::{Failure, ObfError, Result};
pub use rational::Rational;
pub use sign::Sign;
