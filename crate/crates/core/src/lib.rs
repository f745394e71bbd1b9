//! Unipotent periods of the thrice-punctured projective line.
//!
//! * [`words`]: words in `ω₀ = dx/x`, `ω₁ = dx/(1-x)`, shuffles and the bar
//!   differential.
//! * [`paths`]: iterated integrals and truncated signatures along paths in
//!   `ℂ ∖ {0, 1}`, regularized at the tangential base point `(0, 1)`.
//! * [`malcev`]: exact truncated tensor series, `exp`/`log`, BCH and Hall
//!   bases for the free nilpotent quotients.
//! * [`hodge`]: Hodge filtrations on the rank-3 lattice, the nilpotent-orbit
//!   criterion, relative monodromy filtrations and the boundary chart.
//! * [`albanese`]: the level-2 period map, its monodromy and its extension
//!   to the boundary.
//! * [`cli`] and [`selftest`]: the command-line surface and acceptance suite.

pub mod albanese;
pub mod cli;
pub mod hodge;
pub mod json;
pub mod linalg;
pub mod malcev;
pub mod paths;
pub mod selftest;
pub mod words;
