//! Slotted Monte Carlo simulation of the cognitive network on a torus.

pub mod config;
pub mod dynamics;
pub mod estimate;
pub mod exec;
pub mod pattern;
pub mod stats;

pub use config::{HarvestRule, InterferenceMode, Link, PtActivity, SimConfig};
pub use dynamics::{Mode, ModeCounts, NetworkState};
pub use estimate::{approx_active_density, estimate_outage, estimate_p_t, interference_samples};
pub use exec::{map_indexed, replication_rng, Execution};
pub use pattern::{sample_hppp, thin, Point, PointPattern, TorusGrid};
pub use stats::{empirical_cdf, ks_distance, SimEstimate};
