//! Diagonal asymptotics of quasi-rational functions `F = P^(-beta)` at a
//! quadratic cone point, with an exact series engine for validation.
//!
//! The pipeline is:
//!
//! 1. [`polycore`]: parse and manipulate the exact polynomial `P`;
//! 2. [`geometry`]: locate the cone point, rule out smooth minimal critical
//!    points and certify minimality;
//! 3. [`asympt`]: build the log-space quadratic form, its dual and the
//!    leading-term estimate, and issue the ultimate-positivity verdict;
//! 4. [`series`]: expand `P^(-beta)` exactly to check the estimate.

pub mod polycore;
pub mod series;
pub mod geometry;
pub mod asympt;
pub mod analysis;
