//! Network parameters and the charging geometry derived from them.
//!
//! All quantities are linear-scale in abstract consistent units. The slot
//! duration is taken as 1, so a per-slot harvested power and the energy it
//! deposits in the battery are the same number.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and protocol constants of the coexisting primary and secondary
/// networks. In the wireless-powered setting (`r_g = 0`) the PT fields
/// describe the chargers and the ST fields the information transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkParams {
    /// PT deployment density.
    pub lambda_p_total: f64,
    /// Per-slot PT access probability.
    pub access_prob: f64,
    /// ST deployment density.
    pub lambda_s: f64,
    pub power_p: f64,
    pub power_s: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Harvesting efficiency.
    pub eta: f64,
    /// Guard-zone radius; zero in the wireless-powered setting.
    pub r_g: f64,
    /// Harvesting-zone radius.
    pub r_h: f64,
    pub d_p: f64,
    pub d_s: f64,
    /// Noise power.
    pub noise: f64,
    pub theta_p: f64,
    pub theta_s: f64,
    pub eps_p: f64,
    pub eps_s: f64,
}

/// Field names accepted in a JSON parameter document, in declaration order.
pub const FIELD_NAMES: [&str; 16] = [
    "lambda_p_total",
    "access_prob",
    "lambda_s",
    "power_p",
    "power_s",
    "alpha",
    "eta",
    "r_g",
    "r_h",
    "d_p",
    "d_s",
    "noise",
    "theta_p",
    "theta_s",
    "eps_p",
    "eps_s",
];

impl NetworkParams {
    /// Density of active PTs in a slot (independent thinning of the deployment).
    pub fn lambda_p(&self) -> f64 {
        self.access_prob * self.lambda_p_total
    }

    pub fn is_wit(&self) -> bool {
        self.r_g == 0.0
    }

    /// Power harvested in one slot at distance `r` from a PT.
    pub fn harvested_power(&self, r: f64) -> f64 {
        self.eta * self.power_p * r.powf(-self.alpha)
    }

    /// Smallest power harvested anywhere inside a harvesting zone.
    pub fn min_harvest(&self) -> f64 {
        self.harvested_power(self.r_h)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let params: NetworkParams =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        params.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params serialize")
    }

    /// Returns a copy with a single named field replaced.
    pub fn with_field(&self, name: &str, value: f64) -> Result<Self> {
        let mut doc = serde_json::to_value(self).expect("params serialize");
        let obj = doc.as_object_mut().expect("params are an object");
        if !obj.contains_key(name) {
            return Err(Error::Config(format!("unknown parameter `{name}`")));
        }
        obj.insert(name.to_string(), serde_json::json!(value));
        serde_json::from_value(doc).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn field(&self, name: &str) -> Option<f64> {
        serde_json::to_value(self).ok()?.get(name)?.as_f64()
    }

    /// Checks every invariant and returns the parameters unchanged if all hold.
    pub fn validate(self) -> Result<Self> {
        let mut errs = Vec::new();
        let doc = serde_json::to_value(self).expect("params serialize");
        for name in FIELD_NAMES {
            let v = doc[name].as_f64().unwrap_or(f64::NAN);
            if !v.is_finite() {
                errs.push(format!("{name} must be finite"));
            } else if v < 0.0 {
                errs.push(format!("{name} must be non-negative"));
            }
        }
        if !(self.alpha > 2.0) {
            errs.push("alpha must exceed 2".into());
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            errs.push("eta must lie in (0, 1)".into());
        }
        if self.access_prob > 1.0 {
            errs.push("access_prob must lie in [0, 1]".into());
        }
        if !(self.power_p > 0.0) {
            errs.push("PT power must be positive".into());
        }
        if !(self.r_h > 0.0) {
            errs.push("r_h must be positive".into());
        }
        if self.r_g > 0.0 {
            if !(self.r_h < self.r_g) {
                errs.push("r_h must be smaller than r_g".into());
            }
            if !(self.d_p < self.r_g) {
                errs.push("d_p must be smaller than r_g".into());
            }
        }
        for (name, v) in [("theta_p", self.theta_p), ("theta_s", self.theta_s)] {
            if !(v > 0.0) {
                errs.push(format!("{name} must be positive"));
            }
        }
        for (name, v) in [("eps_p", self.eps_p), ("eps_s", self.eps_s)] {
            if !(v > 0.0 && v < 1.0) {
                errs.push(format!("{name} must lie in (0, 1)"));
            }
        }
        if errs.is_empty() {
            Ok(self)
        } else {
            errs.dedup();
            Err(Error::InvalidParams(errs))
        }
    }

    /// Soft checks of the modelling regime (the "much less than" conditions).
    /// A warning is raised when the small side exceeds `ratio` times the
    /// large side.
    pub fn regime_warnings(&self, ratio: f64) -> Vec<RegimeWarning> {
        let mut out = Vec::new();
        let mut check = |kind: RegimeKind, small: f64, large: f64| {
            if small > ratio * large {
                out.push(RegimeWarning { kind, small, large });
            }
        };
        if self.r_g > 0.0 {
            check(RegimeKind::LinkVsGuard, self.d_p, self.r_g);
        }
        check(RegimeKind::PtVsStDensity, self.lambda_p_total, self.lambda_s);
        check(RegimeKind::StVsPtPower, self.power_s, self.power_p);
        let load = std::f64::consts::PI * self.r_h * self.r_h * self.lambda_p();
        check(RegimeKind::HarvestZoneLoad, load, 1.0);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeKind {
    /// d_p against r_g.
    LinkVsGuard,
    /// Deployed PT density against ST density.
    PtVsStDensity,
    /// P_s against P_p.
    StVsPtPower,
    /// Mean number of active PTs in a harvesting zone against 1.
    HarvestZoneLoad,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeWarning {
    pub kind: RegimeKind,
    pub small: f64,
    pub large: f64,
}

impl std::fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let what = match self.kind {
            RegimeKind::LinkVsGuard => "d_p is not small against r_g",
            RegimeKind::PtVsStDensity => "PT density is not small against ST density",
            RegimeKind::StVsPtPower => "P_s is not small against P_p",
            RegimeKind::HarvestZoneLoad => "harvesting zones are likely to overlap",
        };
        write!(f, "{what} ({} vs {})", self.small, self.large)
    }
}

pub const DEFAULT_WARN_RATIO: f64 = 0.2;

/// Slot count needed to fill an empty battery at the harvesting-zone edge,
/// and the radii splitting the zone into charging regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargingGeometry {
    pub m_slots: u64,
    /// Radius inside which one slot fills the battery (M >= 2).
    pub h1: Option<f64>,
    /// Radius inside which one slot gives at least half a battery (M >= 3).
    pub h2: Option<f64>,
}

impl ChargingGeometry {
    pub fn new(params: &NetworkParams) -> Result<Self> {
        if !(params.power_s > 0.0) {
            return Err(Error::ZeroStPower);
        }
        let unit = params.min_harvest();
        let m_slots = slots_to_fill(params.power_s, unit);
        let h1 = (m_slots >= 2).then(|| {
            (params.power_s / (params.eta * params.power_p)).powf(-1.0 / params.alpha)
        });
        let h2 = (m_slots >= 3).then(|| {
            (params.power_s / (2.0 * params.eta * params.power_p)).powf(-1.0 / params.alpha)
        });
        if let Some(h1) = h1 {
            assert!(h1 < params.r_h, "h1 = {h1} outside harvesting zone");
        }
        if let (Some(h1), Some(h2)) = (h1, h2) {
            assert!(h1 < h2 && h2 < params.r_h, "radii out of order: {h1} {h2}");
        }
        Ok(Self { m_slots, h1, h2 })
    }
}

pub fn charging_geometry(params: &NetworkParams) -> Result<ChargingGeometry> {
    ChargingGeometry::new(params)
}

/// Smallest integer m with `capacity <= m * unit`.
fn slots_to_fill(capacity: f64, unit: f64) -> u64 {
    let ratio = capacity / unit;
    if !ratio.is_finite() || ratio >= u64::MAX as f64 {
        return u64::MAX;
    }
    let mut m = (ratio.ceil() as u64).max(1);
    // The division can round across an integer; settle on the product test.
    while m > 1 && capacity <= (m - 1) as f64 * unit {
        m -= 1;
    }
    while capacity > m as f64 * unit {
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig9() -> NetworkParams {
        crate::scenarios::fig9(5.0)
    }

    fn fig5(power_s: f64) -> NetworkParams {
        crate::scenarios::fig5(power_s)
    }

    fn messages(err: Error) -> Vec<String> {
        match err {
            Error::InvalidParams(m) => m,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fig9_caption_is_valid() {
        assert!(fig9().validate().is_ok());
    }

    #[test]
    fn alpha_two_rejected() {
        let m = messages(NetworkParams { alpha: 2.0, ..fig9() }.validate().unwrap_err());
        assert_eq!(m, vec!["alpha must exceed 2".to_string()]);
    }

    #[test]
    fn harvest_radius_beyond_guard_rejected() {
        let m = messages(NetworkParams { r_g: 2.0, r_h: 3.0, ..fig9() }.validate().unwrap_err());
        assert!(m.iter().any(|s| s.contains("r_h must be smaller than r_g")));
    }

    #[test]
    fn every_violation_reported() {
        let p = NetworkParams { alpha: 1.5, eta: 1.5, eps_s: 0.0, d_p: 5.0, ..fig9() };
        assert_eq!(messages(p.validate().unwrap_err()).len(), 4);
    }

    #[test]
    fn wit_setting_allows_zero_guard() {
        let p = NetworkParams { r_g: 0.0, d_p: 3.0, ..fig9() };
        assert!(p.validate().is_ok());
    }

    #[test]
    fn unknown_json_key_rejected() {
        let mut doc = serde_json::to_value(fig9()).unwrap();
        doc["lamda_s"] = serde_json::json!(0.1);
        let err = NetworkParams::from_json(&doc.to_string()).unwrap_err();
        assert!(matches!(err, Error::Config(ref s) if s.contains("lamda_s")), "{err:?}");
    }

    #[test]
    fn json_round_trip() {
        let p = fig9();
        assert_eq!(NetworkParams::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn with_field_rejects_unknown_name() {
        assert!(fig9().with_field("bogus", 1.0).is_err());
        assert_eq!(fig9().with_field("power_s", 0.2).unwrap().power_s, 0.2);
    }

    // Brute-force ceiling: first m with P_s <= m * unit.
    fn brute_m(p: &NetworkParams) -> u64 {
        let unit = p.eta * p.power_p * p.r_h.powf(-p.alpha);
        (1..).find(|&m| p.power_s <= m as f64 * unit).unwrap()
    }

    #[test]
    fn double_slot_example() {
        let p = fig5(0.05);
        let g = charging_geometry(&p).unwrap();
        assert_eq!(g.m_slots, 2);
        assert_eq!(g.m_slots, brute_m(&p));
        approx::assert_relative_eq!(g.h1.unwrap(), 2f64.sqrt(), max_relative = 1e-12);
        assert!(g.h2.is_none());
    }

    #[test]
    fn triple_slot_example() {
        let p = fig5(0.1);
        let g = charging_geometry(&p).unwrap();
        assert_eq!(g.m_slots, 3);
        assert_eq!(g.m_slots, brute_m(&p));
        approx::assert_relative_eq!(g.h1.unwrap(), 1.189207115002721, max_relative = 1e-12);
        approx::assert_relative_eq!(g.h2.unwrap(), 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn threshold_power_is_single_slot() {
        let base = fig5(1.0);
        let p = NetworkParams { power_s: base.min_harvest(), ..base };
        let g = charging_geometry(&p).unwrap();
        assert_eq!(g.m_slots, 1);
        assert_eq!(g.h1, None);
        let p2 = NetworkParams { power_s: 2.0 * base.min_harvest(), ..base };
        assert_eq!(charging_geometry(&p2).unwrap().m_slots, 2);
    }

    #[test]
    fn zero_st_power_rejected() {
        assert_eq!(charging_geometry(&fig5(0.0)).unwrap_err(), Error::ZeroStPower);
    }

    #[test]
    fn regime_warnings_flag_fig9_power_ratio() {
        let w = fig9().regime_warnings(DEFAULT_WARN_RATIO);
        assert!(w.iter().all(|w| w.kind != RegimeKind::StVsPtPower));
        let loud = NetworkParams { power_s: 0.5, ..fig9() }.regime_warnings(DEFAULT_WARN_RATIO);
        assert!(loud.iter().any(|w| w.kind == RegimeKind::StVsPtPower));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn slot_count_matches_brute_force(ps in 1e-4f64..2.0, pp in 0.5f64..5.0, eta in 0.01f64..0.9, rh in 0.5f64..2.0) {
                let p = NetworkParams { power_s: ps, power_p: pp, eta, r_h: rh, r_g: 3.0, ..fig9() };
                let g = charging_geometry(&p).unwrap();
                prop_assert_eq!(g.m_slots, brute_m(&p));
                if let (Some(h1), Some(h2)) = (g.h1, g.h2) {
                    prop_assert!((h2 / h1 - 2f64.powf(1.0 / p.alpha)).abs() < 1e-12);
                }
            }

            #[test]
            fn slot_count_monotone(ps in 1e-4f64..1.0, factor in 1.0f64..3.0) {
                let p = NetworkParams { power_s: ps, power_p: 2.0, r_h: 1.5, r_g: 4.0, ..fig9() };
                let m = charging_geometry(&p).unwrap().m_slots;
                let more_ps = NetworkParams { power_s: ps * factor, ..p };
                let more_pp = NetworkParams { power_p: p.power_p * factor, ..p };
                let more_eta = NetworkParams { eta: (p.eta * factor).min(0.99), ..p };
                prop_assert!(charging_geometry(&more_ps).unwrap().m_slots >= m);
                prop_assert!(charging_geometry(&more_pp).unwrap().m_slots <= m);
                prop_assert!(charging_geometry(&more_eta).unwrap().m_slots <= m);
            }
        }
    }
}
