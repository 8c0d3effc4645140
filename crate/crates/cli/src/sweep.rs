//! `--sweep name=start:stop:n[:log]` specifications.

use std::str::FromStr;

use rfh_core::params::{NetworkParams, FIELD_NAMES};
use rfh_core::scenarios::{linspace, logspace};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        match self.scale {
            Scale::Linear => linspace(self.start, self.stop, self.n_points),
            Scale::Log => logspace(self.start, self.stop, self.n_points),
        }
    }
}

impl FromStr for SweepSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| CliError::Usage(format!("bad sweep `{s}`: {why}"));
        let (name, range) = s.split_once('=').ok_or_else(|| bad("expected name=start:stop:n[:log]"))?;
        let name = name.trim();
        if !FIELD_NAMES.contains(&name) {
            return Err(bad(&format!("unknown parameter `{name}`")));
        }
        let parts: Vec<&str> = range.split(':').collect();
        let scale = match parts.as_slice() {
            [_, _, _] => Scale::Linear,
            [_, _, _, "log"] => Scale::Log,
            [_, _, _, "lin" | "linear"] => Scale::Linear,
            _ => return Err(bad("expected start:stop:n with optional :log")),
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("`{t}` is not a number")));
        let (start, stop) = (num(parts[0])?, num(parts[1])?);
        let n_points: usize = parts[2].trim().parse().map_err(|_| bad("point count must be an integer"))?;
        if n_points < 2 {
            return Err(bad("need at least 2 points"));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(bad("need finite start < stop"));
        }
        if scale == Scale::Log && start <= 0.0 {
            return Err(bad("log scale needs start > 0"));
        }
        Ok(Self { name: name.to_string(), start, stop, n_points, scale })
    }
}

/// One sweep point: the overridden values and the resulting parameters.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub values: Vec<f64>,
    pub params: NetworkParams,
}

/// Cartesian product of the sweeps over `base`, first sweep outermost. No
/// sweeps gives the base point alone. Points are not validated here.
pub fn expand(base: &NetworkParams, sweeps: &[SweepSpec]) -> Result<Vec<SweepPoint>> {
    let mut points = vec![SweepPoint { values: Vec::new(), params: *base }];
    for spec in sweeps {
        let mut next = Vec::with_capacity(points.len() * spec.n_points);
        for p in &points {
            for v in spec.values() {
                let mut values = p.values.clone();
                values.push(v);
                next.push(SweepPoint { values, params: p.params.with_field(&spec.name, v)? });
            }
        }
        points = next;
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rfh_core::scenarios;

    #[test]
    fn parse_linear_and_log() {
        let s: SweepSpec = "power_s=0.005:0.2:20".parse().unwrap();
        assert_eq!((s.n_points, s.scale), (20, Scale::Linear));
        let s: SweepSpec = "theta_p=1:1000:13:log".parse().unwrap();
        assert_eq!(s.scale, Scale::Log);
        assert_eq!(s.values()[12], 1000.0);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["bogus=0:1:3", "r_g=1:0:3", "r_g=0:1:1", "r_g=0:1:3:log", "r_g=0:1", "r_g", "r_g=a:1:3"] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn cartesian_order() {
        let a: SweepSpec = "r_g=2:3:2".parse().unwrap();
        let b: SweepSpec = "power_s=0.1:0.3:3".parse().unwrap();
        let pts = expand(&scenarios::fig9(5.0), &[a, b]).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1].values, vec![2.0, 0.2]);
        assert_eq!(pts[3].params.r_g, 3.0);
        assert_eq!(expand(&scenarios::fig9(5.0), &[]).unwrap().len(), 1);
    }
}
