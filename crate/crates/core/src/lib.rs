//! Leading asymptotics of diagonal coefficients `f_{a_1 n, ..., a_d n}` of a
//! rational generating function `F = I/J`, together with an exact
//! coefficient oracle to check every prediction against.
//!
//! The pipeline is: parse `I` and `J` ([`poly`]), solve the critical-point
//! system for the direction ([`critical`]), classify the contributing points,
//! evaluate the smooth-point leading term ([`asymptotics`]), then compare
//! with exact coefficients ([`series`]). [`report`] drives the whole thing
//! from a config file.

pub mod asymptotics;
pub mod critical;
pub mod hypothesis;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod series;

pub use asymptotics::{assemble_asymptotics, evaluate_leading_term, AsymptoticResult, CertaintyPolicy, HessianData};
pub use critical::{ContribResult, CriticalPoint, Direction, Tolerances};
pub use hypothesis::Hypothesis;
pub use poly::{parse_polynomial, ComplexPoint, Polynomial, UnivariatePolynomial};
pub use series::{compute_coefficient_table, diagonal_sequence, ratio_table, CoefficientTable};

