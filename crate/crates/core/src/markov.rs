//! Battery-level Markov chains and their stationary distributions.
//!
//! State 0 is an empty battery and the last state a full one. Two-state
//! chains model single-slot charging. Three-state chains add a middle
//! state for a battery holding at least half its capacity. They model
//! double-slot charging exactly and bound the multi-slot case from above
//! and below.

use crate::analytics::ZoneProbabilities;
use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;
const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    SingleSlot,
    DoubleSlot,
    /// Edge annulus credited with half a battery per slot.
    MultiUpper,
    /// Edge annulus credited with nothing.
    MultiLower,
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadMatrixShape);
        }
        Ok(Self { n, data: rows.iter().flat_map(|r| r.iter().copied()).collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Matrix { n, data }
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|j| (0..self.n).map(|i| v[i] * self.get(i, j)).sum()).collect()
    }

    pub fn check_stochastic(&self) -> Result<()> {
        for i in 0..self.n {
            let row = self.row(i);
            let sum: f64 = row.iter().sum();
            let in_range = row.iter().all(|&p| (-ROW_SUM_TOL..=1.0 + ROW_SUM_TOL).contains(&p));
            if !in_range || (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::NonStochastic { row: i, sum });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub distribution: Vec<f64>,
    /// The balance equations were singular. `distribution` is then the
    /// long-run law of a battery that starts empty.
    pub reducible: bool,
}

/// Solves `pi P = pi`, `sum(pi) = 1` by Gaussian elimination, with the last
/// balance equation replaced by the normalization.
pub fn steady_state(transition: &Matrix) -> Result<SteadyState> {
    transition.check_stochastic()?;
    let n = transition.dim();
    // A x = b with A = (P^T - I), last row all ones.
    let mut a = vec![vec![0.0; n + 1]; n];
    for (i, row) in a.iter_mut().enumerate().take(n - 1) {
        for (j, cell) in row.iter_mut().enumerate().take(n) {
            *cell = transition.get(j, i) - if i == j { 1.0 } else { 0.0 };
        }
    }
    for cell in a[n - 1].iter_mut() {
        *cell = 1.0;
    }
    match solve_augmented(a) {
        Some(mut pi) => {
            for p in pi.iter_mut() {
                *p = p.clamp(0.0, 1.0);
            }
            let total: f64 = pi.iter().sum();
            pi.iter_mut().for_each(|p| *p /= total);
            Ok(SteadyState { distribution: pi, reducible: false })
        }
        None => Ok(SteadyState { distribution: limit_from_empty(transition), reducible: true }),
    }
}

fn solve_augmented(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(col, pivot);
        let (top, below) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in below.iter_mut() {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][n] - s) / a[r][r];
    }
    Some(x)
}

/// e_0 P^(2^64), by repeated squaring.
fn limit_from_empty(p: &Matrix) -> Vec<f64> {
    let mut m = p.clone();
    for _ in 0..64 {
        m = m.mul(&m);
    }
    m.row(0).to_vec()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryChain {
    pub kind: ChainKind,
    pub transition: Matrix,
    pub steady_state: Vec<f64>,
    pub reducible: bool,
    /// Probability the battery is full at the start of a slot.
    pub p_full: f64,
    /// `p_full * p_g`.
    pub p_transmit: f64,
}

/// Assembles the transition matrix for `kind` and solves its steady state.
pub fn build_chain(kind: ChainKind, z: &ZoneProbabilities) -> Result<BatteryChain> {
    let ZoneProbabilities { p_g, p_h, p_1, p_2, p2_prime, p_3 } = *z;
    let transition = match kind {
        ChainKind::SingleSlot => Matrix::from_rows(&[&[1.0 - p_h, p_h], &[p_g, 1.0 - p_g]])?,
        ChainKind::DoubleSlot => {
            if p_h > 0.0 && p_1 + p_2 == 0.0 {
                return Err(Error::MissingRegions(kind));
            }
            three_state(p_h, p_2, p_1, p_g)?
        }
        ChainKind::MultiUpper | ChainKind::MultiLower => {
            if p_h > 0.0 && p_1 + p2_prime + p_3 == 0.0 {
                return Err(Error::MissingRegions(kind));
            }
            if kind == ChainKind::MultiUpper {
                three_state(p_h, p2_prime + p_3, p_1, p_g)?
            } else {
                three_state(p_1 + p2_prime, p2_prime, p_1, p_g)?
            }
        }
    };
    let ss = steady_state(&transition)?;
    let p_full = *ss.distribution.last().expect("non-empty");
    Ok(BatteryChain {
        kind,
        transition,
        steady_state: ss.distribution,
        reducible: ss.reducible,
        p_full,
        p_transmit: p_full * p_g,
    })
}

/// Empty -> half with `to_half`, empty -> full with `to_full`, half -> full
/// with `charge`, full -> empty with `p_g`.
fn three_state(charge: f64, to_half: f64, to_full: f64, p_g: f64) -> Result<Matrix> {
    Matrix::from_rows(&[
        &[1.0 - to_half - to_full, to_half, to_full],
        &[0.0, 1.0 - charge, charge],
        &[p_g, 0.0, 1.0 - p_g],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn zones(p_g: f64, p_h: f64) -> ZoneProbabilities {
        ZoneProbabilities { p_g, p_h, p_1: 0.0, p_2: 0.0, p2_prime: 0.0, p_3: 0.0 }
    }

    #[test]
    fn symmetric_two_state() {
        let c = build_chain(ChainKind::SingleSlot, &zones(0.5, 0.5)).unwrap();
        assert_relative_eq!(c.steady_state[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(c.steady_state[1], 0.5, epsilon = 1e-15);
        assert_relative_eq!(c.p_transmit, 0.25, epsilon = 1e-15);
        assert!(!c.reducible);
    }

    #[test]
    fn identity_is_flagged_reducible() {
        let ss = steady_state(&Matrix::identity(2)).unwrap();
        assert!(ss.reducible);
        assert_eq!(ss.distribution, vec![1.0, 0.0]);
    }

    #[test]
    fn two_state_hand_solve() {
        // pi0 * p_h = pi1 * p_g with p_h = 0.3, p_g = 0.6.
        let p = Matrix::from_rows(&[&[0.7, 0.3], &[0.6, 0.4]]).unwrap();
        let ss = steady_state(&p).unwrap();
        assert_relative_eq!(ss.distribution[0], 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(ss.distribution[1], 1.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn double_slot_full_state_closed_form() {
        let (p_h, p_2, p_g) = (0.0309, 0.0155, 0.754);
        let z = ZoneProbabilities { p_g, p_h, p_1: p_h - p_2, p_2, p2_prime: 0.0, p_3: 0.0 };
        let c = build_chain(ChainKind::DoubleSlot, &z).unwrap();
        let expect = p_h / (p_h + p_g * (1.0 + p_2 / p_h));
        assert_relative_eq!(c.p_full, expect, max_relative = 1e-12);
        assert_eq!(c.transition.dim(), 3);
    }

    #[test]
    fn no_pts_means_never_charged() {
        // absorbing empty state: unique stationary law, so no fallback needed
        let c = build_chain(ChainKind::SingleSlot, &zones(1.0, 0.0)).unwrap();
        assert!(!c.reducible);
        assert_eq!(c.steady_state, vec![1.0, 0.0]);
        assert_eq!(c.p_transmit, 0.0);
        let c3 = build_chain(ChainKind::MultiLower, &zones(1.0, 0.0)).unwrap();
        assert_eq!(c3.p_transmit, 0.0);
    }

    #[test]
    fn guard_zones_everywhere_mean_never_transmit() {
        let c = build_chain(ChainKind::SingleSlot, &zones(0.0, 0.4)).unwrap();
        assert_relative_eq!(c.p_full, 1.0, epsilon = 1e-12);
        assert_eq!(c.p_transmit, 0.0);
    }

    #[test]
    fn inconsistent_zones_rejected() {
        let z = ZoneProbabilities { p_g: 0.5, p_h: 0.3, p_1: 0.5, p_2: 0.6, p2_prime: 0.0, p_3: 0.0 };
        assert!(matches!(build_chain(ChainKind::DoubleSlot, &z), Err(Error::NonStochastic { .. })));
        let missing = zones(0.5, 0.3);
        assert_eq!(
            build_chain(ChainKind::DoubleSlot, &missing).unwrap_err(),
            Error::MissingRegions(ChainKind::DoubleSlot)
        );
    }

    #[test]
    fn upper_with_empty_edge_matches_double_slot() {
        let (p_h, p_1, p_g) = (0.05, 0.05, 0.7);
        let z_upper = ZoneProbabilities { p_g, p_h, p_1, p_2: 0.0, p2_prime: 0.0, p_3: 0.0 };
        let z_double = ZoneProbabilities { p_g, p_h, p_1, p_2: 0.0, p2_prime: 0.0, p_3: 0.0 };
        let u = build_chain(ChainKind::MultiUpper, &z_upper).unwrap();
        let d = build_chain(ChainKind::DoubleSlot, &z_double).unwrap();
        assert_eq!(u.steady_state, d.steady_state);
        let single = p_h * p_g / (p_h + p_g);
        assert_relative_eq!(u.p_transmit, single, max_relative = 1e-13);
    }

    #[test]
    fn stationarity_residual() {
        let z = ZoneProbabilities { p_g: 0.6, p_h: 0.2, p_1: 0.05, p_2: 0.0, p2_prime: 0.07, p_3: 0.08 };
        for kind in [ChainKind::MultiUpper, ChainKind::MultiLower] {
            let c = build_chain(kind, &z).unwrap();
            let next = c.transition.left_mul(&c.steady_state);
            for (a, b) in next.iter().zip(&c.steady_state) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn lower_never_exceeds_upper(p_g in 0.01f64..1.0, p_1 in 0.0f64..0.3, p2p in 0.0f64..0.3, p_3 in 0.0f64..0.3) {
                let p_h = p_1 + p2p + p_3;
                prop_assume!(p_h > 1e-6 && p_h <= 1.0);
                let z = ZoneProbabilities { p_g, p_h, p_1, p_2: 0.0, p2_prime: p2p, p_3 };
                let up = build_chain(ChainKind::MultiUpper, &z).unwrap();
                let lo = build_chain(ChainKind::MultiLower, &z).unwrap();
                prop_assert!(lo.p_transmit <= up.p_transmit * (1.0 + 1e-12));
                prop_assert!(up.p_transmit <= p_g);
                for c in [&up, &lo] {
                    let s: f64 = c.steady_state.iter().sum();
                    prop_assert!((s - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
