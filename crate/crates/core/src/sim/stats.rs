//! Estimate summaries and distribution comparisons.

/// Monte Carlo estimate with a normal-approximation 99.7% (3 sigma)
/// confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean: f64,
    pub half_width: f64,
    pub n_samples: u64,
    pub n_replications: usize,
}

impl SimEstimate {
    /// Pools `(hits, trials)` counts from independent replications.
    ///
    /// The standard error is the between-replication ratio estimator, which
    /// absorbs correlation between samples of one replication. A single
    /// replication falls back to the binomial error.
    pub fn from_counts(counts: &[(u64, u64)]) -> Option<Self> {
        let hits: u64 = counts.iter().map(|c| c.0).sum();
        let trials: u64 = counts.iter().map(|c| c.1).sum();
        if trials == 0 {
            return None;
        }
        let mean = hits as f64 / trials as f64;
        let r = counts.len();
        let se = if r >= 2 {
            let ss: f64 = counts
                .iter()
                .map(|&(h, n)| {
                    let e = h as f64 - mean * n as f64;
                    e * e
                })
                .sum();
            (ss * r as f64 / (r as f64 - 1.0)).sqrt() / trials as f64
        } else {
            (mean * (1.0 - mean) / trials as f64).sqrt()
        };
        Some(Self { mean, half_width: 3.0 * se, n_samples: trials, n_replications: r })
    }

    pub fn sigma(&self) -> f64 {
        self.half_width / 3.0
    }

    /// True when `value` lies within the half-width plus `slack`.
    pub fn covers(&self, value: f64, slack: f64) -> bool {
        (self.mean - value).abs() <= self.half_width + slack
    }
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Sorted sample values paired with their empirical CDF levels.
pub fn empirical_cdf(samples: &[f64]) -> Vec<(f64, f64)> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.into_iter().enumerate().map(|(i, x)| (x, (i + 1) as f64 / n)).collect()
}
