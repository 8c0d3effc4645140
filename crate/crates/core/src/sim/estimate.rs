//! Monte Carlo estimators built on the slot dynamics.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use super::config::{InterferenceMode, Link, SimConfig};
use super::dynamics::NetworkState;
use super::exec::{map_indexed, replication_rng};
use super::pattern::{sample_hppp, Point, PointPattern};
use super::stats::SimEstimate;
use crate::analytics::{transmission_probability, wit_transmission_probability};
use crate::error::{Error, Result};
use crate::params::NetworkParams;

/// Rejection attempts allowed for a single conditioned slot.
pub const MAX_ATTEMPTS_PER_SLOT: u64 = 100_000;
/// Acceptance rate below which conditioning is reported as too rare.
pub const MIN_ACCEPTANCE: f64 = 1e-4;

/// Active ST density p_t * lambda_s used by the approximate interference
/// model. Interval p_t (M > 2) contributes its midpoint.
pub fn approx_active_density(params: &NetworkParams) -> Result<f64> {
    let p_t = if params.is_wit() {
        wit_transmission_probability(params)?
    } else {
        transmission_probability(params)?
    };
    Ok(p_t.midpoint() * params.lambda_s)
}

/// Fraction of ST-slots spent transmitting after warm-up.
pub fn estimate_p_t(params: &NetworkParams, cfg: &SimConfig) -> Result<SimEstimate> {
    let params = params.validate()?;
    cfg.validate(&params)?;
    let warmup = cfg.warmup_slots(&params)?;
    let counts = map_indexed(cfg.execution, cfg.n_replications, |rep| -> Result<(u64, u64)> {
        let mut rng = replication_rng(cfg.master_seed, rep as u64);
        let mut state = NetworkState::new(&params, cfg, &mut rng)?;
        for _ in 0..warmup {
            state.step_slot(&mut rng);
        }
        let (mut tx, mut total) = (0u64, 0u64);
        for _ in 0..cfg.n_slots {
            let (_, c) = state.step_slot(&mut rng);
            tx += c.transmitting as u64;
            total += c.total() as u64;
        }
        Ok((tx, total))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    SimEstimate::from_counts(&counts).ok_or(Error::NoSamples)
}

/// Faded received power summed over `points` at `rx`.
fn shot_noise<R: Rng + ?Sized>(
    pattern: &PointPattern,
    points: impl IntoIterator<Item = Point>,
    rx: Point,
    power: f64,
    alpha: f64,
    rng: &mut R,
) -> f64 {
    let half = -alpha / 2.0;
    points
        .into_iter()
        .map(|y| {
            let g: f64 = Exp1.sample(rng);
            g * power * pattern.dist2(rx, y).powf(half)
        })
        .sum()
}

/// A receiver placed uniformly in the window. The deployment is static
/// within a replication, so a receiver fixed at the origin would see the
/// same neighbourhood every slot; on the torus a uniform receiver has the
/// law of the typical one.
fn random_receiver<R: Rng + ?Sized>(side: f64, rng: &mut R) -> Point {
    let h = side / 2.0;
    Point::new(rng.random_range(-h..h), rng.random_range(-h..h))
}

/// `p` moved by `dx` along the x axis, wrapped into the window.
fn shifted(p: Point, dx: f64, side: f64) -> Point {
    let h = side / 2.0;
    Point::new((p.x + dx + h).rem_euclid(side) - h, p.y)
}

/// Per-slot aggregate ST interference at a typical receiver, replications
/// concatenated in index order. Approximate mode redraws the whole pattern
/// each slot and measures at the origin.
pub fn interference_samples(
    params: &NetworkParams,
    cfg: &SimConfig,
    mode: InterferenceMode,
) -> Result<Vec<f64>> {
    let params = params.validate()?;
    let side = cfg.validate(&params)?;
    let warmup = cfg.warmup_slots(&params)?;
    let active_density = match mode {
        InterferenceMode::Approx => approx_active_density(&params)?,
        InterferenceMode::Exact => 0.0,
    };
    let (ps, alpha) = (params.power_s, params.alpha);
    let runs = map_indexed(cfg.execution, cfg.n_replications, |rep| -> Result<Vec<f64>> {
        let mut rng = replication_rng(cfg.master_seed, rep as u64);
        let mut out = Vec::with_capacity(cfg.n_slots);
        match mode {
            InterferenceMode::Exact => {
                let mut state = NetworkState::new(&params, cfg, &mut rng)?;
                for _ in 0..warmup {
                    state.step_slot(&mut rng);
                }
                for _ in 0..cfg.n_slots {
                    state.step_slot(&mut rng);
                    let rx = random_receiver(side, &mut rng);
                    let tx: Vec<Point> = state.transmitters().collect();
                    out.push(shot_noise(&state.sts, tx, rx, ps, alpha, &mut rng));
                }
            }
            InterferenceMode::Approx => {
                for _ in 0..cfg.n_slots {
                    let sts = sample_hppp(active_density, side, &mut rng);
                    out.push(shot_noise(&sts, sts.points.iter().copied(), Point::ORIGIN, ps, alpha, &mut rng));
                }
            }
        }
        Ok(out)
    });
    let mut samples = Vec::with_capacity(cfg.n_slots * cfg.n_replications);
    for run in runs {
        samples.extend(run?);
    }
    Ok(samples)
}

/// Draws PT patterns until none lies within `r_g` of `tx`, abandoning an
/// attempt at its first offending point. Returns the
/// accepted pattern and the number of attempts.
fn conditioned_pts<R: Rng + ?Sized>(
    params: &NetworkParams,
    side: f64,
    tx: Point,
    rng: &mut R,
) -> Result<(PointPattern, u64)> {
    let r2 = params.r_g * params.r_g;
    let mean = params.lambda_p() * side * side;
    let count = if mean > 0.0 { Some(Poisson::new(mean).expect("finite positive mean")) } else { None };
    let h = side / 2.0;
    'attempt: for attempt in 1..=MAX_ATTEMPTS_PER_SLOT {
        let n = count.as_ref().map_or(0, |c| c.sample(rng) as usize);
        let mut pts = PointPattern { side, points: Vec::with_capacity(n) };
        for _ in 0..n {
            let x = Point::new(rng.random_range(-h..h), rng.random_range(-h..h));
            if pts.dist2(tx, x) <= r2 {
                continue 'attempt;
            }
            pts.points.push(x);
        }
        return Ok((pts, attempt));
    }
    Err(Error::ConditioningTooRare(1.0 / MAX_ATTEMPTS_PER_SLOT as f64))
}

struct LinkSetup {
    params: NetworkParams,
    link: Link,
    theta: f64,
    /// Unfaded received power of the serving link.
    signal: f64,
}

fn link_outage<R: Rng + ?Sized>(
    s: &LinkSetup,
    pts: &PointPattern,
    sts: &PointPattern,
    tx: impl IntoIterator<Item = Point>,
    rx: Point,
    rng: &mut R,
) -> bool {
    let p = &s.params;
    let pt_interf = if s.link == Link::Wit {
        0.0
    } else {
        shot_noise(pts, pts.points.iter().copied(), rx, p.power_p, p.alpha, rng)
    };
    let st_interf = shot_noise(sts, tx, rx, p.power_s, p.alpha, rng);
    let g: f64 = Exp1.sample(rng);
    g * s.signal < s.theta * (pt_interf + st_interf + p.noise)
}

/// Slot outage counts of one replication: (outages, accepted slots, attempts).
type OutageCounts = (u64, u64, u64);

/// Fraction of slots in which a typical receiver misses its
/// SINR target.
///
/// The serving transmitter sits at distance d along the x axis from the
/// receiver. Approximate mode puts the receiver at the origin; exact mode
/// places it uniformly each slot (see [`random_receiver`]). On the
/// secondary link only slots with no active PT within r_g of the serving
/// ST are kept (rejection). WIT links see ST interference only.
pub fn estimate_outage(
    params: &NetworkParams,
    cfg: &SimConfig,
    link: Link,
    mode: InterferenceMode,
) -> Result<SimEstimate> {
    let params = params.validate()?;
    let side = cfg.validate(&params)?;
    if link == Link::Wit && !params.is_wit() {
        return Err(Error::NotWitSetting(params.r_g));
    }
    let warmup = cfg.warmup_slots(&params)?;
    let active_density = match mode {
        InterferenceMode::Approx => approx_active_density(&params)?,
        InterferenceMode::Exact => 0.0,
    };
    let p = params;
    let (d, theta, tx_power) = match link {
        Link::Primary => (p.d_p, p.theta_p, p.power_p),
        Link::Secondary | Link::Wit => (p.d_s, p.theta_s, p.power_s),
    };
    if !(tx_power > 0.0) {
        return Err(Error::ZeroStPower);
    }
    let serving = Point::new(d, 0.0);
    let link_setup = LinkSetup { params: p, link, theta, signal: tx_power * d.powf(-p.alpha) };
    let runs = map_indexed(cfg.execution, cfg.n_replications, |rep| -> Result<OutageCounts> {
        let mut rng = replication_rng(cfg.master_seed, rep as u64);
        let (mut outages, mut kept, mut attempts) = (0u64, 0u64, 0u64);
        match mode {
            InterferenceMode::Approx => {
                for _ in 0..cfg.n_slots {
                    let pts = match link {
                        Link::Secondary => {
                            let (pts, n) = conditioned_pts(&p, side, serving, &mut rng)?;
                            attempts += n;
                            pts
                        }
                        Link::Primary => {
                            attempts += 1;
                            sample_hppp(p.lambda_p(), side, &mut rng)
                        }
                        Link::Wit => {
                            attempts += 1;
                            PointPattern::empty(side)
                        }
                    };
                    let sts = sample_hppp(active_density, side, &mut rng);
                    let tx = sts.points.iter().copied();
                    kept += 1;
                    outages += u64::from(link_outage(&link_setup, &pts, &sts, tx, Point::ORIGIN, &mut rng));
                }
            }
            InterferenceMode::Exact => {
                let mut state = NetworkState::new(&p, cfg, &mut rng)?;
                if link == Link::Primary {
                    state.fixed_pts.push(serving);
                }
                for _ in 0..warmup {
                    state.step_slot(&mut rng);
                }
                let r2 = p.r_g * p.r_g;
                let mut streak = 0u64;
                while kept < cfg.n_slots as u64 {
                    let rx = random_receiver(side, &mut rng);
                    let tx_pos = shifted(rx, d, side);
                    if link == Link::Primary {
                        state.fixed_pts[0] = tx_pos;
                    }
                    let (mut active, _) = state.step_slot(&mut rng);
                    attempts += 1;
                    if link == Link::Secondary
                        && active.points.iter().any(|&x| active.dist2(tx_pos, x) <= r2)
                    {
                        streak += 1;
                        if streak >= MAX_ATTEMPTS_PER_SLOT {
                            return Err(Error::ConditioningTooRare(kept as f64 / attempts as f64));
                        }
                        continue;
                    }
                    streak = 0;
                    if link == Link::Primary {
                        active.points.pop();
                    }
                    kept += 1;
                    let tx = state.transmitters();
                    outages += u64::from(link_outage(&link_setup, &active, &state.sts, tx, rx, &mut rng));
                }
            }
        }
        Ok((outages, kept, attempts))
    });
    let mut counts = Vec::with_capacity(runs.len());
    let (mut kept, mut attempts) = (0u64, 0u64);
    for run in runs {
        let (o, k, a) = run?;
        counts.push((o, k));
        kept += k;
        attempts += a;
    }
    if attempts > 0 && (kept as f64 / attempts as f64) < MIN_ACCEPTANCE {
        return Err(Error::ConditioningTooRare(kept as f64 / attempts as f64));
    }
    SimEstimate::from_counts(&counts).ok_or(Error::NoSamples)
}
