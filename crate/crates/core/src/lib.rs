//! Analysis, simulation and optimization of a cognitive radio network whose
//! secondary transmitters harvest RF energy from primary transmitters.

// Negated float comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod markov;
pub mod optimizer;
pub mod params;
pub mod scenarios;
pub mod sim;

pub use error::{Error, Result};
pub use params::{ChargingGeometry, NetworkParams};
