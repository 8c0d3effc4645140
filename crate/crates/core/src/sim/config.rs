use serde::{Deserialize, Serialize};

use super::exec::Execution;
use crate::error::{Error, Result};
use crate::params::{ChargingGeometry, NetworkParams};

/// How an ST inside a harvesting zone collects energy in a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarvestRule {
    /// Power from the nearest active PT only.
    #[default]
    NearestPt,
    /// Sum over every active PT whose harvesting zone contains the ST.
    SumInZone,
}

/// How the active PT pattern is produced each slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PtActivity {
    /// Independent thinning of a deployment drawn once per replication.
    #[default]
    Thinning,
    /// A fresh HPPP of the active density every slot.
    Fresh,
}

/// Source of the active ST pattern for interference and outage runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterferenceMode {
    /// Transmitting STs taken from the battery dynamics.
    #[default]
    Exact,
    /// A fresh HPPP of density p_t * lambda_s each slot.
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Link {
    Primary,
    Secondary,
    Wit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Torus side; `None` uses max(20 r_g, 100).
    pub window_side: Option<f64>,
    /// Slots collected per replication, after warm-up.
    pub n_slots: usize,
    pub n_replications: usize,
    pub master_seed: u64,
    pub harvest_rule: HarvestRule,
    pub pt_activity: PtActivity,
    /// Slots discarded before collecting; `None` uses max(10 M, 100).
    pub warmup: Option<usize>,
    pub execution: Execution,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            window_side: None,
            n_slots: 1000,
            n_replications: 16,
            master_seed: 0,
            harvest_rule: HarvestRule::default(),
            pt_activity: PtActivity::default(),
            warmup: None,
            execution: Execution::default(),
        }
    }
}

impl SimConfig {
    pub fn side(&self, params: &NetworkParams) -> f64 {
        self.window_side.unwrap_or((20.0 * params.r_g).max(100.0))
    }

    pub fn warmup_slots(&self, params: &NetworkParams) -> Result<usize> {
        if let Some(w) = self.warmup {
            return Ok(w);
        }
        let m = ChargingGeometry::new(params)?.m_slots;
        Ok((10 * m.min(1 << 40) as usize).max(100))
    }

    /// Checks the config against `params` and returns the window side.
    pub fn validate(&self, params: &NetworkParams) -> Result<f64> {
        let side = self.side(params);
        let reach = params.r_g.max(params.r_h);
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidSimConfig(format!("window side {side} must be positive")));
        }
        if side < 4.0 * reach {
            return Err(Error::InvalidSimConfig(format!(
                "window side {side} must be at least 4 * max(r_g, r_h) = {}",
                4.0 * reach
            )));
        }
        if self.n_slots == 0 {
            return Err(Error::InvalidSimConfig("n_slots must be at least 1".into()));
        }
        if self.n_replications == 0 {
            return Err(Error::InvalidSimConfig("n_replications must be at least 1".into()));
        }
        Ok(side)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    #[test]
    fn default_window() {
        let cfg = SimConfig::default();
        assert_eq!(cfg.side(&scenarios::fig9(5.0)), 100.0);
        assert_eq!(cfg.side(&scenarios::fig7(8.0, 0.05)), 160.0);
    }

    #[test]
    fn small_window_rejected() {
        let cfg = SimConfig { window_side: Some(11.0), ..Default::default() };
        assert!(matches!(cfg.validate(&scenarios::fig9(5.0)), Err(Error::InvalidSimConfig(_))));
        let cfg = SimConfig { window_side: Some(12.0), ..Default::default() };
        assert_eq!(cfg.validate(&scenarios::fig9(5.0)), Ok(12.0));
    }

    #[test]
    fn zero_slots_rejected() {
        let cfg = SimConfig { n_slots: 0, ..Default::default() };
        assert!(cfg.validate(&scenarios::fig9(5.0)).is_err());
    }

    #[test]
    fn warmup_scales_with_slots_to_fill() {
        let cfg = SimConfig::default();
        assert_eq!(cfg.warmup_slots(&scenarios::fig5(0.1)).unwrap(), 100);
        // edge harvest 0.2 / 1.5^4, so P_s = 1 needs 26 slots
        assert_eq!(cfg.warmup_slots(&scenarios::fig5(1.0)).unwrap(), 260);
        let fixed = SimConfig { warmup: Some(7), ..cfg };
        assert_eq!(fixed.warmup_slots(&scenarios::fig5(0.1)).unwrap(), 7);
    }
}
