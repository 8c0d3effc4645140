//! Slot-by-slot battery dynamics of the secondary network.

use rand::Rng;

use super::config::{HarvestRule, PtActivity, SimConfig};
use super::pattern::{sample_hppp, thin, Point, PointPattern, TorusGrid};
use crate::error::Result;
use crate::params::NetworkParams;

/// Relative slack when testing whether a battery is full, so that M equal
/// harvests summing to the capacity count as full despite rounding.
const FULL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Battery not full; collects energy if inside a harvesting zone.
    Harvesting,
    /// Battery full and outside all guard zones.
    Transmitting,
    /// Battery full but inside a guard zone.
    Idle,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModeCounts {
    pub harvesting: usize,
    pub transmitting: usize,
    pub idle: usize,
}

impl ModeCounts {
    pub fn total(&self) -> usize {
        self.harvesting + self.transmitting + self.idle
    }
}

#[derive(Debug, Clone)]
pub struct NetworkState {
    pub params: NetworkParams,
    pub harvest_rule: HarvestRule,
    pub pt_activity: PtActivity,
    /// PT deployment thinned each slot under [`PtActivity::Thinning`].
    pub deployment: PointPattern,
    /// PTs active in every slot in addition to the random ones.
    pub fixed_pts: Vec<Point>,
    pub sts: PointPattern,
    pub battery: Vec<f64>,
    pub modes: Vec<Mode>,
}

impl NetworkState {
    /// Draws deployments for one replication. Every battery starts empty.
    pub fn new<R: Rng + ?Sized>(params: &NetworkParams, cfg: &SimConfig, rng: &mut R) -> Result<Self> {
        let side = cfg.validate(params)?;
        let deployment = match cfg.pt_activity {
            PtActivity::Thinning => sample_hppp(params.lambda_p_total, side, rng),
            PtActivity::Fresh => PointPattern::empty(side),
        };
        let sts = sample_hppp(params.lambda_s, side, rng);
        Ok(Self::with_patterns(params, cfg, deployment, sts))
    }

    pub fn with_patterns(
        params: &NetworkParams,
        cfg: &SimConfig,
        deployment: PointPattern,
        sts: PointPattern,
    ) -> Self {
        let n = sts.len();
        Self {
            params: *params,
            harvest_rule: cfg.harvest_rule,
            pt_activity: cfg.pt_activity,
            deployment,
            fixed_pts: Vec::new(),
            sts,
            battery: vec![0.0; n],
            modes: vec![Mode::Harvesting; n],
        }
    }

    pub fn side(&self) -> f64 {
        self.sts.side
    }

    pub fn is_full(&self, i: usize) -> bool {
        self.battery[i] >= self.params.power_s * (1.0 - FULL_TOLERANCE)
    }

    pub fn draw_active_pts<R: Rng + ?Sized>(&self, rng: &mut R) -> PointPattern {
        let mut active = match self.pt_activity {
            PtActivity::Thinning => thin(&self.deployment, self.params.access_prob, rng),
            PtActivity::Fresh => sample_hppp(self.params.lambda_p(), self.side(), rng),
        };
        active.points.extend_from_slice(&self.fixed_pts);
        active
    }

    /// Advances every ST one slot against a given active PT pattern.
    pub fn advance(&mut self, active: &PointPattern) -> ModeCounts {
        let p = self.params;
        let grid = TorusGrid::new(active, p.r_g.max(p.r_h));
        let mut counts = ModeCounts::default();
        for i in 0..self.sts.len() {
            let pos = self.sts.points[i];
            if self.is_full(i) {
                let guarded = p.r_g > 0.0 && grid.nearest_within(pos, p.r_g).is_some();
                if guarded {
                    self.modes[i] = Mode::Idle;
                    counts.idle += 1;
                } else {
                    self.modes[i] = Mode::Transmitting;
                    self.battery[i] = 0.0;
                    counts.transmitting += 1;
                }
                continue;
            }
            let gain = match self.harvest_rule {
                HarvestRule::NearestPt => grid.nearest_within(pos, p.r_h).map_or(0.0, |d| p.harvested_power(d)),
                HarvestRule::SumInZone => {
                    let mut sum = 0.0;
                    grid.for_each_within(pos, p.r_h, |_, d2| sum += p.harvested_power(d2.sqrt()));
                    sum
                }
            };
            self.battery[i] = (self.battery[i] + gain).min(p.power_s);
            self.modes[i] = Mode::Harvesting;
            counts.harvesting += 1;
        }
        counts
    }

    /// Draws this slot's PT activity, advances the STs and returns the
    /// active PT pattern used.
    pub fn step_slot<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (PointPattern, ModeCounts) {
        let active = self.draw_active_pts(rng);
        let counts = self.advance(&active);
        (active, counts)
    }

    pub fn transmitters(&self) -> impl Iterator<Item = Point> + '_ {
        self.modes
            .iter()
            .zip(&self.sts.points)
            .filter(|(m, _)| **m == Mode::Transmitting)
            .map(|(_, &p)| p)
    }
}
