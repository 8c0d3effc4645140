//! Parameter sets of the reference figures.
//!
//! Figure numbers follow the CLI's `figure` command. Values not fixed by a
//! figure's own caption (ST density for the p_t runs, the ST power in the
//! interference and optimizer figures) are chosen here and documented on
//! each constructor. All sets use path-loss exponent 4 and efficiency 0.1.

use crate::params::NetworkParams;

fn base() -> NetworkParams {
    NetworkParams {
        lambda_p_total: 0.01,
        access_prob: 1.0,
        lambda_s: 0.1,
        power_p: 1.0,
        power_s: 0.1,
        alpha: 4.0,
        eta: 0.1,
        r_g: 3.0,
        r_h: 1.0,
        d_p: 0.5,
        d_s: 0.5,
        noise: 0.0,
        theta_p: 5.0,
        theta_s: 5.0,
        eps_p: 0.2,
        eps_s: 0.3,
    }
}

/// p_t against P_s: lambda_p = 0.01, r_g = 4, r_h = 1.5, P_p = 2.
/// The ST density only sets the simulated sample count.
pub fn fig5(power_s: f64) -> NetworkParams {
    NetworkParams { r_g: 4.0, r_h: 1.5, power_p: 2.0, power_s, lambda_s: 0.05, ..base() }
}

/// P_s values for the p_t-against-P_s sweep: 20 points covering M = 1 to 6.
pub fn fig5_grid() -> Vec<f64> {
    linspace(0.005, 0.2, 20)
}

/// p_t against lambda_p: r_g = 3, r_h = 1, P_p = 1.
/// `power_s` 0.05 gives single-slot charging, 0.15 double-slot.
pub fn fig6(lambda_p: f64, power_s: f64) -> NetworkParams {
    NetworkParams { lambda_p_total: lambda_p, power_s, lambda_s: 0.05, ..base() }
}

pub fn fig6_grid() -> Vec<f64> {
    linspace(0.002, 0.2, 25)
}

/// p_t against r_g: lambda_p = 0.01, r_h = 1, P_p = 1.
pub fn fig7(r_g: f64, power_s: f64) -> NetworkParams {
    NetworkParams { r_g, power_s, lambda_s: 0.05, ..base() }
}

pub fn fig7_grid() -> Vec<f64> {
    linspace(1.5, 8.0, 14)
}

/// ST powers used for the single- and double-slot curves of figures 6, 7, 13.
pub const SINGLE_SLOT_POWER: f64 = 0.05;
pub const DOUBLE_SLOT_POWER: f64 = 0.15;

/// Interference CDF: r_g = 3, r_h = 1, lambda_s = 0.2, lambda_p = 0.01,
/// P_p = 2. P_s = 0.1 (single-slot charging) is our choice.
pub fn fig8() -> NetworkParams {
    NetworkParams { lambda_s: 0.2, power_p: 2.0, power_s: 0.1, ..base() }
}

/// Outage against SINR target (both networks share `theta`):
/// d_p = d_s = 0.5, r_g = 3, r_h = 1, lambda_p = 0.01, lambda_s = 0.1,
/// P_p = 1, P_s = 0.1.
pub fn fig9(theta: f64) -> NetworkParams {
    NetworkParams { theta_p: theta, theta_s: theta, ..base() }
}

/// SINR targets 1 to 1000 (0 to 30 dB), log-spaced.
pub fn fig9_grid() -> Vec<f64> {
    logspace(1.0, 1000.0, 13)
}

/// Outage against P_s: d = 0.5, r_g = 4, r_h = 1, lambda_s = 0.2,
/// lambda_p = 0.01, theta = 5, P_p = 2.
pub fn fig10(power_s: f64) -> NetworkParams {
    NetworkParams { r_g: 4.0, lambda_s: 0.2, power_p: 2.0, power_s, ..base() }
}

/// P_s over the single- and double-slot range (edge harvest is 0.2).
pub fn fig10_grid() -> Vec<f64> {
    linspace(0.02, 0.4, 20)
}

/// Throughput optimization: d = 0.5, r_h = 1, r_g = 3, P_p = 2,
/// eps_s = 0.3, theta = 5. P_s is an output; the stored value is a
/// placeholder.
pub fn fig11(lambda_p: f64, eps_p: f64) -> NetworkParams {
    NetworkParams { lambda_p_total: lambda_p, eps_p, power_p: 2.0, ..base() }
}

/// Primary outage constraints of the optimization figures.
pub const FIG11_EPS_P: [f64; 3] = [0.1, 0.2, 0.3];

/// PT densities for the optimization figures, 30 points.
pub fn fig11_grid() -> Vec<f64> {
    linspace(0.015, 0.075, 30)
}

/// Wireless-powered sensor network (no guard zones): r_h = 1, P_p = 1.
pub fn fig13(lambda_p: f64, power_s: f64) -> NetworkParams {
    NetworkParams { lambda_p_total: lambda_p, power_s, r_g: 0.0, ..base() }
}

pub fn fig13_grid() -> Vec<f64> {
    linspace(0.002, 0.2, 25)
}

pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let step = (stop - start) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
        .collect()
}

pub fn logspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    assert!(start > 0.0);
    linspace(start.ln(), stop.ln(), n)
        .into_iter()
        .enumerate()
        .map(|(i, x)| match i {
            0 => start,
            i if i == n - 1 => stop,
            _ => x.exp(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_scenarios_validate() {
        let sets = [
            fig5(0.1),
            fig6(0.05, SINGLE_SLOT_POWER),
            fig7(8.0, DOUBLE_SLOT_POWER),
            fig8(),
            fig9(1000.0),
            fig10(0.4),
            fig11(0.075, 0.1),
            fig13(0.2, DOUBLE_SLOT_POWER),
        ];
        for p in sets {
            p.validate().unwrap();
        }
    }

    #[test]
    fn grids_hit_endpoints() {
        let g = logspace(1.0, 1000.0, 4);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[3], 1000.0);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
