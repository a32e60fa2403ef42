//! Exact, asymptotic and Monte Carlo treatment of the (multiplicity, size)
//! pair of a part drawn from a uniformly random integer partition.
//!
//! Three ways of drawing the part are supported, see [`sampler::Procedure`]:
//!
//! 1. uniformly among all parts counted with multiplicity,
//! 2. uniformly among the distinct part sizes,
//! 3. with probability proportional to `j * alpha_j` (the area of the block
//!    of the Ferrers diagram the part belongs to).
//!
//! The crate is organised bottom-up:
//!
//! - [`counting`]: exact `p(n)` and the multiplicity probabilities derived from it
//! - [`series`]: truncated power series with big-integer coefficients
//! - [`expectations`]: exact finite-`n` expectations of the part statistics
//! - [`sampler`]: uniform partitions (exact unranking and the geometric
//!   conditioning device) and the three part-draw procedures
//! - [`oracle`]: brute-force enumeration and exact joint distributions
//! - [`limitlaws`]: the limiting joint and marginal laws
//! - [`asymptotics`]: saddle-point quantities and asymptotic formulas for `p(n)`
//! - [`harness`]: Monte Carlo experiments, KS distances and serialization

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod counting;
pub mod error;
pub mod expectations;
pub mod harness;
pub mod limitlaws;
pub mod oracle;
pub mod quadrature;
pub mod sampler;
pub mod series;

pub use counting::CountTable;
pub use error::{Error, Result};
pub use sampler::{PartDraw, Partition, Procedure, RngStream};

/// `pi / sqrt(6)`, the scale of typical part sizes: they are of order `sqrt(n) / C`.
pub const C: f64 = 1.282_549_830_161_864;

pub type Rational = num_rational::BigRational;
