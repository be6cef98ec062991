//! Monte Carlo machinery for persistence probabilities of time-reversible
//! discrete-time processes: random walks in random scenery and partial sums
//! of long-range-dependent stationary Gaussian sequences.
//!
//! The crate estimates the decay exponent of p(T) = P[max_{1<=k<=T} Z_k <= a]
//! on dyadic horizon grids, together with the exponential functional
//! Φ(T) = E[(Σ_{l<=T} e^{Z_l})^{-1}], scaled running suprema, and the tails
//! of the argmax location and positive-occupation count. Everything is
//! reproducible from a master seed: replica streams and scenery sites are
//! keyed, so results do not depend on worker count or query order.

pub mod error;
pub mod rng;
pub mod walks;

pub use error::{Error, Result};
