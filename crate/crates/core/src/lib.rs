//! Zero statistics of shifted products `L(s + i lambda/2) L(s - i lambda/2)`
//! of GL(2) L-functions: Hecke coefficients, prime-power sums, zero sums,
//! pair correlation and the closed forms they are compared against.

pub mod asymptotics;
pub mod config;
pub mod correlation;
pub mod dirichlet;
pub mod error;
pub mod figures;
pub mod newform;
pub mod output;
pub mod primes;
pub mod quadrature;
pub mod sato_tate;
pub mod scalar;
pub mod summation;
pub mod synthetic;
pub mod zeros;

pub use error::{Error, Result};

pub type ShiftParams = asymptotics::ShiftParams<f64>;
pub type PairCorrConstants = asymptotics::PairCorrConstants<f64>;
pub type Phi2Integral = asymptotics::Phi2Integral<f64>;
pub type ShiftParams32 = asymptotics::ShiftParams<f32>;
pub type PairCorrConstants32 = asymptotics::PairCorrConstants<f32>;
