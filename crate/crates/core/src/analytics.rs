//! Closed-form zone, transmission, outage and throughput formulas.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::markov::{build_chain, ChainKind};
use crate::params::{ChargingGeometry, NetworkParams};

/// Shot-noise constant `pi * (2/a) * Gamma(2/a) * Gamma(1 - 2/a)` for
/// Rayleigh fading and path-loss exponent `a`.
pub fn phi(alpha: f64) -> Result<f64> {
    if !(alpha > 2.0) || !alpha.is_finite() {
        return Err(Error::AlphaDomain(alpha));
    }
    let delta = 2.0 / alpha;
    Ok(PI * delta * gamma(delta) * gamma(1.0 - delta))
}

/// Probability that no active PT lies within `r_g` (void probability).
pub fn p_guard(lambda_p: f64, r_g: f64) -> f64 {
    (-PI * r_g * r_g * lambda_p).exp()
}

/// Probability that at least one active PT lies within `r_h`.
pub fn p_harvest(lambda_p: f64, r_h: f64) -> f64 {
    -(-PI * r_h * r_h * lambda_p).exp_m1()
}

/// Probabilities of the guard-zone complement and of each charging region.
/// Regions not used by the charging regime are exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ZoneProbabilities {
    pub p_g: f64,
    pub p_h: f64,
    /// Single-slot region (nearest PT within h1).
    pub p_1: f64,
    /// Annulus h1..r_h, double-slot charging only.
    pub p_2: f64,
    /// Annulus h1..h2, multi-slot charging only.
    pub p2_prime: f64,
    /// Annulus h2..r_h, multi-slot charging only.
    pub p_3: f64,
}

pub fn zone_probabilities(params: &NetworkParams, geometry: &ChargingGeometry) -> ZoneProbabilities {
    let lp = params.lambda_p();
    let void = |r: f64| (-PI * r * r * lp).exp();
    let mut z = ZoneProbabilities {
        p_g: p_guard(lp, params.r_g),
        p_h: p_harvest(lp, params.r_h),
        ..Default::default()
    };
    match (geometry.h1, geometry.h2) {
        (Some(h1), None) => {
            z.p_1 = p_harvest(lp, h1);
            z.p_2 = void(h1) - void(params.r_h);
        }
        (Some(h1), Some(h2)) => {
            z.p_1 = p_harvest(lp, h1);
            z.p2_prime = void(h1) - void(h2);
            z.p_3 = void(h2) - void(params.r_h);
        }
        _ => {}
    }
    z
}

/// Exact value for single- and double-slot charging; an interval otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TxProbability {
    Exact(f64),
    Bounds { lower: f64, upper: f64 },
}

impl TxProbability {
    pub fn lower(&self) -> f64 {
        match *self {
            Self::Exact(v) => v,
            Self::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Self::Exact(v) => v,
            Self::Bounds { upper, .. } => upper,
        }
    }

    pub fn exact(&self) -> Option<f64> {
        match *self {
            Self::Exact(v) => Some(v),
            Self::Bounds { .. } => None,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower() + self.upper())
    }
}

/// Steady-state transmission probability of a typical ST, solved from the
/// battery chain matching the charging regime.
pub fn transmission_probability(params: &NetworkParams) -> Result<TxProbability> {
    let geometry = ChargingGeometry::new(params)?;
    let z = zone_probabilities(params, &geometry);
    Ok(match geometry.m_slots {
        1 => TxProbability::Exact(build_chain(ChainKind::SingleSlot, &z)?.p_transmit),
        2 => TxProbability::Exact(build_chain(ChainKind::DoubleSlot, &z)?.p_transmit),
        _ => TxProbability::Bounds {
            lower: build_chain(ChainKind::MultiLower, &z)?.p_transmit,
            upper: build_chain(ChainKind::MultiUpper, &z)?.p_transmit,
        },
    })
}

/// Transmission probability in the wireless-powered setting, where there
/// are no guard zones and a full transmitter always sends.
pub fn wit_transmission_probability(params: &NetworkParams) -> Result<TxProbability> {
    if !params.is_wit() {
        return Err(Error::NotWitSetting(params.r_g));
    }
    transmission_probability(params)
}

/// Closed forms of the full-battery steady state times `p_g`. They are the
/// independent route used to check the generic chain solver.
pub mod closed_form {
    use super::ZoneProbabilities;

    fn ratio(num: f64, den: f64) -> f64 {
        if num == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn single_slot(z: &ZoneProbabilities) -> f64 {
        ratio(z.p_h, z.p_h + z.p_g) * z.p_g
    }

    pub fn double_slot(z: &ZoneProbabilities) -> f64 {
        ratio(z.p_h, z.p_h + z.p_g * (1.0 + z.p_2 / z.p_h)) * z.p_g
    }

    pub fn multi_upper(z: &ZoneProbabilities) -> f64 {
        ratio(z.p_h, z.p_h + z.p_g * (1.0 + (z.p2_prime + z.p_3) / z.p_h)) * z.p_g
    }

    pub fn multi_lower(z: &ZoneProbabilities) -> f64 {
        let q = z.p_1 + z.p2_prime;
        ratio(q, q + z.p_g * (1.0 + z.p2_prime / q)) * z.p_g
    }
}

/// `tau` is the exponent argument; `raw` is the formula value before
/// clamping to [0, 1], which only the conditional secondary form needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageResult {
    pub tau: f64,
    pub probability: f64,
    pub raw: f64,
    pub clamped: bool,
}

impl OutageResult {
    fn from_tau(tau: f64) -> Self {
        let p = -(-tau).exp_m1();
        Self { tau, probability: p, raw: p, clamped: false }
    }
}

fn link_factor(theta: f64, d: f64, alpha: f64, phi: f64) -> f64 {
    theta.powf(2.0 / alpha) * d * d * phi
}

/// Exponent of the primary receiver's success probability given the
/// active ST density `active_st`.
pub fn tau_primary(params: &NetworkParams, active_st: f64) -> Result<f64> {
    let a = params.alpha;
    let k = link_factor(params.theta_p, params.d_p, a, phi(a)?);
    let st_term = if active_st == 0.0 {
        0.0
    } else {
        active_st * (params.power_s / params.power_p).powf(2.0 / a)
    };
    Ok((params.lambda_p() + st_term) * k
        + params.theta_p * params.d_p.powf(a) * params.noise / params.power_p)
}

pub fn outage_primary(params: &NetworkParams, active_st: f64) -> Result<OutageResult> {
    tau_primary(params, active_st).map(OutageResult::from_tau)
}

/// Exponent of the secondary receiver's unconditional success probability.
pub fn tau_secondary(params: &NetworkParams, active_st: f64) -> Result<f64> {
    if !(params.power_s > 0.0) {
        return Err(Error::ZeroStPower);
    }
    let a = params.alpha;
    let k = link_factor(params.theta_s, params.d_s, a, phi(a)?);
    let pt_term = if params.lambda_p() == 0.0 {
        0.0
    } else {
        params.lambda_p() * (params.power_s / params.power_p).powf(-2.0 / a)
    };
    Ok((pt_term + active_st) * k + params.theta_s * params.d_s.powf(a) * params.noise / params.power_s)
}

/// Secondary outage conditioned on the serving ST being outside every guard
/// zone, assuming any PT inside that guard zone forces an outage. The
/// approximation leaves [0, 1] outside its regime; the result is then
/// clamped and flagged.
pub fn outage_secondary(params: &NetworkParams, active_st: f64) -> Result<OutageResult> {
    let p_g = p_guard(params.lambda_p(), params.r_g);
    if p_g == 0.0 {
        return Err(Error::GuardZonesCoverPlane);
    }
    let tau = tau_secondary(params, active_st)?;
    let uncond = -(-tau).exp_m1();
    let raw = (uncond - (1.0 - p_g)) / p_g;
    let probability = raw.clamp(0.0, 1.0);
    Ok(OutageResult { tau, probability, raw, clamped: probability != raw })
}

/// Outage of a wireless-powered information link: interference from active
/// transmitters only.
pub fn tau_wit(params: &NetworkParams, active_st: f64) -> Result<f64> {
    if !(params.power_s > 0.0) {
        return Err(Error::ZeroStPower);
    }
    let a = params.alpha;
    let k = link_factor(params.theta_s, params.d_s, a, phi(a)?);
    Ok(k * active_st + params.theta_s * params.d_s.powf(a) * params.noise / params.power_s)
}

pub fn wit_outage(params: &NetworkParams, active_st: f64) -> Result<OutageResult> {
    tau_wit(params, active_st).map(OutageResult::from_tau)
}

/// Spatial throughput in bps/Hz per unit area.
pub fn spatial_throughput(p_t: f64, lambda_s: f64, theta_s: f64) -> f64 {
    p_t * lambda_s * (1.0 + theta_s).log2()
}
