//! Secondary throughput maximization under primary and secondary outage
//! constraints.

use crate::analytics::{
    p_guard, phi, tau_primary, tau_secondary, tau_wit, transmission_probability, wit_transmission_probability,
    TxProbability,
};
use crate::error::{Error, Result};
use crate::params::NetworkParams;

pub const BISECTION_MAX_ITER: usize = 200;
pub const BISECTION_REL_TOL: f64 = 1e-12;
/// Lower end of the default bracket as a fraction of P_p.
pub const BRACKET_LO: f64 = 1e-9;

/// Relative tolerance for reporting a constraint as binding.
const BINDING_TOL: f64 = 1e-9;

/// Optimal ST density. When the transmission probability is only bounded,
/// the density is bounded too; `recommended` is the smaller end, which is
/// safe under the larger transmission probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaS {
    Exact(f64),
    Interval { lower: f64, upper: f64, recommended: f64 },
}

impl LambdaS {
    fn from_p_t(active_density: f64, p_t: TxProbability) -> Self {
        let div = |p: f64| if p > 0.0 { active_density / p } else { f64::INFINITY };
        match p_t {
            TxProbability::Exact(p) => Self::Exact(div(p)),
            TxProbability::Bounds { lower, upper } => {
                Self::Interval { lower: div(upper), upper: div(lower), recommended: div(upper) }
            }
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Self::Exact(v) => v,
            Self::Interval { recommended, .. } => recommended,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Binding {
    pub primary: bool,
    pub secondary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult {
    pub p_s_star: f64,
    pub lambda_s_star: LambdaS,
    /// p_t(P_s*) * lambda_s*.
    pub active_density: f64,
    pub throughput: f64,
    /// Primary constraint on the success exponent; absent without a primary network.
    pub mu_p: Option<f64>,
    pub mu_s: f64,
    pub tau_p: Option<f64>,
    pub tau_s: f64,
    pub binding: Binding,
    /// Every pair with the same active density is also optimal.
    pub family: bool,
}

/// -ln(1 - eps_p).
pub fn mu_p(params: &NetworkParams) -> f64 {
    -(-params.eps_p).ln_1p()
}

/// -ln((1 - eps_s) p_g).
pub fn mu_s(params: &NetworkParams) -> f64 {
    -((1.0 - params.eps_s) * p_guard(params.lambda_p(), params.r_g)).ln()
}

/// -ln(1 - eps_s), the secondary constraint without guard zones.
pub fn mu_s_wit(params: &NetworkParams) -> f64 {
    -(-params.eps_s).ln_1p()
}

fn link_factor(theta: f64, d: f64, alpha: f64, phi: f64) -> f64 {
    theta.powf(2.0 / alpha) * d * d * phi
}

/// Largest active ST density allowed by the primary outage constraint at
/// ST power `power_s`.
pub fn f1(params: &NetworkParams, power_s: f64) -> Result<f64> {
    let p = params;
    let k = link_factor(p.theta_p, p.d_p, p.alpha, phi(p.alpha)?);
    let noise = p.theta_p * p.d_p.powf(p.alpha) * p.noise / p.power_p;
    Ok(((mu_p(p) - noise) / k - p.lambda_p()) * (power_s / p.power_p).powf(-2.0 / p.alpha))
}

/// Largest active ST density allowed by the secondary outage constraint at
/// ST power `power_s`.
pub fn f2(params: &NetworkParams, power_s: f64) -> Result<f64> {
    let p = params;
    let k = link_factor(p.theta_s, p.d_s, p.alpha, phi(p.alpha)?);
    let noise = p.theta_s * p.d_s.powf(p.alpha) * p.noise / power_s;
    Ok((mu_s(p) - noise) / k - p.lambda_p() * (power_s / p.power_p).powf(-2.0 / p.alpha))
}

fn is_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= BINDING_TOL * a.abs().max(b.abs())
}

fn finish(params: &NetworkParams, p_s_star: f64, active_density: f64) -> Result<OptimizationResult> {
    let at = NetworkParams { power_s: p_s_star, ..*params };
    let p_t = transmission_probability(&at)?;
    let (mp, ms) = (mu_p(params), mu_s(params));
    let tau_p = tau_primary(&at, active_density)?;
    let tau_s = tau_secondary(&at, active_density)?;
    Ok(OptimizationResult {
        p_s_star,
        lambda_s_star: LambdaS::from_p_t(active_density, p_t),
        active_density,
        throughput: active_density * (1.0 + params.theta_s).log2(),
        mu_p: Some(mp),
        mu_s: ms,
        tau_p: Some(tau_p),
        tau_s,
        binding: Binding { primary: is_close(tau_p, mp), secondary: is_close(tau_s, ms) },
        family: false,
    })
}

/// Closed-form optimum of the cognitive network without noise.
pub fn solve_p1_closed_form(params: &NetworkParams) -> Result<OptimizationResult> {
    let p = params.validate()?;
    if p.noise != 0.0 {
        return Err(Error::NoiseNotZero(p.noise));
    }
    let a = p.alpha;
    let ph = phi(a)?;
    let (mp, ms) = (mu_p(&p), mu_s(&p));
    let floor = ph * p.theta_p.powf(2.0 / a) * p.d_p * p.d_p * p.lambda_p();
    if !(mp > floor) {
        return Err(Error::Infeasible);
    }
    let p_s_star = p.theta_s / p.theta_p * (p.d_s / p.d_p).powf(a) * (ms / mp).powf(-a / 2.0) * p.power_p;
    let active = ms * (mp - floor) / (p.theta_s.powf(2.0 / a) * p.d_s * p.d_s * mp * ph);
    finish(&p, p_s_star, active)
}

/// Optimum by bisection on f1 - f2 over [1e-9 P_p, P_p]; handles noise.
pub fn solve_p1_numeric(params: &NetworkParams) -> Result<OptimizationResult> {
    solve_p1_bracketed(params, BRACKET_LO * params.power_p, params.power_p)
}

pub fn solve_p1_bracketed(params: &NetworkParams, lo: f64, hi: f64) -> Result<OptimizationResult> {
    let p = params.validate()?;
    if f1(&p, p.power_p)? <= 0.0 {
        return Err(Error::Infeasible);
    }
    let g = |s: f64| -> Result<f64> { Ok(f1(&p, s)? - f2(&p, s)?) };
    let (mut a, mut b) = (lo, hi);
    let (g_lo, g_hi) = (g(a)?, g(b)?);
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::NoBracket { lo, hi, g_lo, g_hi });
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (a + b);
        if g(mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= BISECTION_REL_TOL * b {
            break;
        }
    }
    let s = 0.5 * (a + b);
    let active = f1(&p, s)?.min(f2(&p, s)?);
    finish(&p, s, active)
}

/// Optimum of the wireless-powered sensor network without noise. Only the
/// active density is determined; the returned power is the largest one
/// that still charges in a single slot.
pub fn solve_p2(params: &NetworkParams) -> Result<OptimizationResult> {
    let p = params.validate()?;
    if !p.is_wit() {
        return Err(Error::NotWitSetting(p.r_g));
    }
    if p.noise != 0.0 {
        return Err(Error::NoiseNotZero(p.noise));
    }
    let ms = mu_s_wit(&p);
    let active = ms / link_factor(p.theta_s, p.d_s, p.alpha, phi(p.alpha)?);
    let p_s_star = p.min_harvest();
    let at = NetworkParams { power_s: p_s_star, ..p };
    let p_t = wit_transmission_probability(&at)?;
    let tau_s = tau_wit(&at, active)?;
    Ok(OptimizationResult {
        p_s_star,
        lambda_s_star: LambdaS::from_p_t(active, p_t),
        active_density: active,
        throughput: active * (1.0 + p.theta_s).log2(),
        mu_p: None,
        mu_s: ms,
        tau_p: None,
        tau_s,
        binding: Binding { primary: false, secondary: is_close(tau_s, ms) },
        family: true,
    })
}
