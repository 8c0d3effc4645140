use approx::assert_relative_eq;
use rand::Rng;
use rfh_core::analytics::{p_guard, phi, transmission_probability};
use rfh_core::params::NetworkParams;
use rfh_core::scenarios;
use rfh_core::sim::*;
use rfh_core::Error;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

fn fresh(n_slots: usize, n_replications: usize, seed: u64) -> SimConfig {
    SimConfig { n_slots, n_replications, master_seed: seed, pt_activity: PtActivity::Fresh, ..Default::default() }
}

#[test]
fn hppp_counts_are_poisson() {
    let mut rng = replication_rng(101, 0);
    let draws: Vec<usize> = (0..10_000).map(|_| sample_hppp(0.01, 100.0, &mut rng).len()).collect();
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<usize>() as f64 / n;
    let var = draws.iter().map(|&k| (k as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - 100.0).abs() < 3.0 * (100.0 / n).sqrt(), "mean {mean}");
    assert!((var / 100.0 - 1.0).abs() < 0.05, "variance {var}");

    // chi-square goodness of fit on bins of width 5 over [70, 130), tails pooled
    let pois = Poisson::new(100.0).unwrap();
    let edges: Vec<u64> = (70..=130).step_by(5).collect();
    let mut observed = vec![0.0; edges.len() + 1];
    let mut expected = vec![0.0; edges.len() + 1];
    for &k in &draws {
        let bin = edges.iter().position(|&e| (k as u64) < e).unwrap_or(edges.len());
        observed[bin] += 1.0;
    }
    for k in 0..400u64 {
        let bin = edges.iter().position(|&e| k < e).unwrap_or(edges.len());
        expected[bin] += n * pois.pmf(k);
    }
    let stat: f64 = observed.iter().zip(&expected).map(|(o, e)| (o - e).powi(2) / e).sum();
    let critical = ChiSquared::new((observed.len() - 1) as f64).unwrap().inverse_cdf(0.999);
    assert!(stat < critical, "chi2 {stat} >= {critical}");
}

#[test]
fn disk_emptiness_matches_void_probability() {
    let mut rng = replication_rng(202, 0);
    let n = 20_000;
    let empty = (0..n)
        .filter(|_| {
            let pat = sample_hppp(0.01, 60.0, &mut rng);
            pat.points.iter().all(|&x| pat.dist2(Point::ORIGIN, x) > 9.0)
        })
        .count();
    let est = SimEstimate::from_counts(&[(empty as u64, n)]).unwrap();
    assert!(est.covers(p_guard(0.01, 3.0), 0.0), "{est:?}");
}

#[test]
fn guard_estimate_stable_in_window_size() {
    let count = |side: f64, seed: u64| {
        let mut rng = replication_rng(seed, 0);
        let n = 10_000u64;
        let hits = (0..n)
            .filter(|_| {
                let pat = sample_hppp(0.01, side, &mut rng);
                let q = Point::new(rng.random_range(-side / 2.0..side / 2.0), 0.0);
                pat.points.iter().all(|&x| pat.dist2(q, x) > 9.0)
            })
            .count() as u64;
        SimEstimate::from_counts(&[(hits, n)]).unwrap()
    };
    let (a, b) = (count(60.0, 1), count(120.0, 2));
    assert!((a.mean - b.mean).abs() < a.half_width.max(b.half_width));
}

#[test]
fn no_pts_never_transmit() {
    let params = NetworkParams { lambda_p_total: 0.0, ..scenarios::fig5(0.1) };
    let est = estimate_p_t(&params, &fresh(50, 2, 3)).unwrap();
    assert_eq!(est.mean, 0.0);
    assert_eq!(est.half_width, 0.0);
}

#[test]
fn single_slot_transmit_frequency() {
    // edge harvest 0.2 / 1.5^4 = 0.0395
    let params = scenarios::fig5(0.03);
    let want = transmission_probability(&params).unwrap().exact().unwrap();
    let est = estimate_p_t(&params, &fresh(1000, 16, 4)).unwrap();
    assert!(est.n_samples >= 100_000);
    assert!(est.covers(want, 0.0), "{est:?} vs {want}");
}

#[test]
fn double_slot_transmit_frequency() {
    let params = scenarios::fig5(0.06);
    let want = transmission_probability(&params).unwrap().exact().unwrap();
    let est = estimate_p_t(&params, &fresh(1000, 16, 5)).unwrap();
    assert!(est.covers(want, 0.0), "{est:?} vs {want}");
}

#[test]
fn replication_schedule_does_not_change_results() {
    let params = scenarios::fig5(0.1);
    let seq = SimConfig { execution: Execution::Sequential, ..fresh(100, 6, 9) };
    let par = SimConfig { execution: Execution::Parallel, ..seq };
    assert_eq!(estimate_p_t(&params, &seq).unwrap(), estimate_p_t(&params, &par).unwrap());
    let a = interference_samples(&params, &seq, InterferenceMode::Exact).unwrap();
    let b = interference_samples(&params, &par, InterferenceMode::Exact).unwrap();
    assert_eq!(a, b);
}

#[test]
fn different_seeds_differ() {
    let params = scenarios::fig5(0.1);
    let a = interference_samples(&params, &fresh(50, 2, 1), InterferenceMode::Approx).unwrap();
    let b = interference_samples(&params, &fresh(50, 2, 2), InterferenceMode::Approx).unwrap();
    assert_ne!(a, b);
}

#[test]
fn no_active_sts_means_no_interference() {
    let params = NetworkParams { lambda_s: 0.0, ..scenarios::fig8() };
    for mode in [InterferenceMode::Exact, InterferenceMode::Approx] {
        let s = interference_samples(&params, &fresh(20, 2, 1), mode).unwrap();
        assert_eq!(s.len(), 40);
        assert!(s.iter().all(|&x| x == 0.0));
    }
}

#[test]
fn approx_interference_laplace_transform() {
    let params = scenarios::fig8();
    let samples = interference_samples(&params, &fresh(5000, 4, 6), InterferenceMode::Approx).unwrap();
    let density = approx_active_density(&params).unwrap();
    let delta = 2.0 / params.alpha;
    for s in [1.0, 10.0, 100.0] {
        let vals: Vec<f64> = samples.iter().map(|&i| (-s * i).exp()).collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let want = (-density * phi(params.alpha).unwrap() * (s * params.power_s).powf(delta)).exp();
        assert!((mean - want).abs() <= 3.0 * sd / n.sqrt() + 1e-4, "s={s}: {mean} vs {want}");
    }
}

#[test]
fn noiseless_isolated_link_never_fails() {
    let params = NetworkParams { lambda_p_total: 0.0, lambda_s: 0.0, ..scenarios::fig9(5.0) };
    for link in [Link::Primary, Link::Secondary] {
        for mode in [InterferenceMode::Exact, InterferenceMode::Approx] {
            let est = estimate_outage(&params, &fresh(100, 2, 7), link, mode).unwrap();
            assert_eq!(est.mean, 0.0);
        }
    }
}

#[test]
fn wit_link_requires_wit_setting() {
    let err = estimate_outage(&scenarios::fig9(5.0), &fresh(10, 1, 1), Link::Wit, InterferenceMode::Approx);
    assert_eq!(err, Err(Error::NotWitSetting(3.0)));
}

#[test]
fn rare_conditioning_reported() {
    let params = NetworkParams { lambda_p_total: 1.0, ..scenarios::fig9(5.0) };
    let cfg = SimConfig { window_side: Some(12.0), ..fresh(1, 1, 1) };
    let r = estimate_outage(&params, &cfg, Link::Secondary, InterferenceMode::Approx);
    assert!(matches!(r, Err(Error::ConditioningTooRare(_))), "{r:?}");
}

#[test]
fn primary_outage_matches_analysis_in_approx_mode() {
    let params = scenarios::fig9(5.0);
    let density = approx_active_density(&params).unwrap();
    let want = rfh_core::analytics::outage_primary(&params, density).unwrap().probability;
    let est = estimate_outage(&params, &fresh(5000, 8, 8), Link::Primary, InterferenceMode::Approx).unwrap();
    assert!(est.covers(want, 0.0), "{est:?} vs {want}");
}

#[test]
fn secondary_conditioning_raises_success() {
    // conditioning on an empty guard disk removes the strongest PT interferers
    let params = scenarios::fig9(5.0);
    let density = approx_active_density(&params).unwrap();
    let tau = rfh_core::analytics::tau_secondary(&params, density).unwrap();
    let est = estimate_outage(&params, &fresh(4000, 4, 9), Link::Secondary, InterferenceMode::Approx).unwrap();
    assert!(est.mean < 1.0 - (-tau).exp());
    assert_relative_eq!(p_guard(params.lambda_p(), params.r_g), 0.7537132119564671, max_relative = 1e-12);
}
