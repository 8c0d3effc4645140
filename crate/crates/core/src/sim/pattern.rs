//! Point patterns on a square torus centered at the origin.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Finite point set inside the window `[-side/2, side/2)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    pub side: f64,
    pub points: Vec<Point>,
}

impl PointPattern {
    pub fn empty(side: f64) -> Self {
        Self { side, points: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        let h = self.side / 2.0;
        (-h..h).contains(&p.x) && (-h..h).contains(&p.y)
    }

    /// Squared torus distance between two points of the window.
    pub fn dist2(&self, a: Point, b: Point) -> f64 {
        let dx = wrap(a.x - b.x, self.side);
        let dy = wrap(a.y - b.y, self.side);
        dx * dx + dy * dy
    }
}

fn wrap(d: f64, side: f64) -> f64 {
    d - side * (d / side).round()
}

/// Homogeneous Poisson pattern: Poisson count with mean `density * side^2`,
/// positions uniform in the window.
pub fn sample_hppp<R: Rng + ?Sized>(density: f64, side: f64, rng: &mut R) -> PointPattern {
    let mean = density * side * side;
    if !(mean > 0.0) {
        return PointPattern::empty(side);
    }
    let n = Poisson::new(mean).expect("finite positive mean").sample(rng) as usize;
    let h = side / 2.0;
    let points = (0..n)
        .map(|_| Point::new(rng.random_range(-h..h), rng.random_range(-h..h)))
        .collect();
    PointPattern { side, points }
}

/// Independent thinning: keeps each point with probability `keep`.
pub fn thin<R: Rng + ?Sized>(pattern: &PointPattern, keep: f64, rng: &mut R) -> PointPattern {
    let points = if keep >= 1.0 {
        pattern.points.clone()
    } else {
        pattern.points.iter().copied().filter(|_| rng.random::<f64>() < keep).collect()
    };
    PointPattern { side: pattern.side, points }
}

/// Uniform-cell index over a pattern for fixed-radius queries on the torus.
/// Query radii must not exceed the cell width.
pub struct TorusGrid<'a> {
    pattern: &'a PointPattern,
    n: usize,
    cell: f64,
    start: Vec<u32>,
    order: Vec<u32>,
}

impl<'a> TorusGrid<'a> {
    pub fn new(pattern: &'a PointPattern, reach: f64) -> Self {
        let side = pattern.side;
        let n = if reach > 0.0 { ((side / reach).floor() as usize).clamp(1, 4096) } else { 1 };
        let cell = side / n as f64;
        let mut grid = Self { pattern, n, cell, start: vec![0; n * n + 1], order: Vec::new() };
        let ids: Vec<usize> = pattern.points.iter().map(|&p| grid.cell_of(p)).collect();
        for &c in &ids {
            grid.start[c + 1] += 1;
        }
        for c in 0..n * n {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        grid.order = vec![0; ids.len()];
        for (i, &c) in ids.iter().enumerate() {
            grid.order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    fn axis(&self, v: f64) -> usize {
        let k = ((v + self.pattern.side / 2.0) / self.cell).floor();
        (k.max(0.0) as usize).min(self.n - 1)
    }

    fn cell_of(&self, p: Point) -> usize {
        self.axis(p.y) * self.n + self.axis(p.x)
    }

    /// Calls `f(index, squared distance)` for every point within `r` of `p`.
    pub fn for_each_within(&self, p: Point, r: f64, mut f: impl FnMut(usize, f64)) {
        debug_assert!(r <= self.cell * (1.0 + 1e-12) || self.n < 3);
        let r2 = r * r;
        let mut visit = |c: usize| {
            for &i in &self.order[self.start[c] as usize..self.start[c + 1] as usize] {
                let d2 = self.pattern.dist2(p, self.pattern.points[i as usize]);
                if d2 <= r2 {
                    f(i as usize, d2);
                }
            }
        };
        if self.n < 3 {
            (0..self.n * self.n).for_each(&mut visit);
            return;
        }
        let (cx, cy) = (self.axis(p.x), self.axis(p.y));
        for dy in [self.n - 1, 0, 1] {
            let row = (cy + dy) % self.n;
            for dx in [self.n - 1, 0, 1] {
                visit(row * self.n + (cx + dx) % self.n);
            }
        }
    }

    /// Distance to the nearest point within `r`, if any.
    pub fn nearest_within(&self, p: Point, r: f64) -> Option<f64> {
        let mut best = f64::INFINITY;
        self.for_each_within(p, r, |_, d2| best = best.min(d2));
        best.is_finite().then(|| best.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_density_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_hppp(0.0, 50.0, &mut rng).is_empty());
    }

    #[test]
    fn points_stay_in_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pat = sample_hppp(0.5, 10.0, &mut rng);
        assert!(pat.points.iter().all(|&p| pat.contains(p)));
    }

    #[test]
    fn torus_distance_wraps() {
        let pat = PointPattern::empty(10.0);
        let d2 = pat.dist2(Point::new(-4.9, 0.0), Point::new(4.9, 0.0));
        assert!((d2 - 0.04).abs() < 1e-12);
    }

    #[test]
    fn grid_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pat = sample_hppp(0.2, 40.0, &mut rng);
        let grid = TorusGrid::new(&pat, 3.0);
        for _ in 0..500 {
            let q = Point::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0));
            let mut got = Vec::new();
            grid.for_each_within(q, 3.0, |i, _| got.push(i));
            got.sort_unstable();
            let want: Vec<usize> = (0..pat.len()).filter(|&i| pat.dist2(q, pat.points[i]) <= 9.0).collect();
            assert_eq!(got, want);
            let nearest = want.iter().map(|&i| pat.dist2(q, pat.points[i]).sqrt()).fold(f64::INFINITY, f64::min);
            assert_eq!(grid.nearest_within(q, 3.0), nearest.is_finite().then_some(nearest));
        }
    }

    #[test]
    fn small_grids_fall_back_to_scan() {
        let pat = PointPattern { side: 4.0, points: vec![Point::new(1.9, 1.9), Point::new(-1.9, -1.9)] };
        let grid = TorusGrid::new(&pat, 3.0);
        let d = grid.nearest_within(Point::ORIGIN, 3.0).unwrap();
        assert!((d - (2.0f64 * 1.9 * 1.9).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn thinning_keeps_expected_fraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pat = sample_hppp(1.0, 100.0, &mut rng);
        let kept = thin(&pat, 0.25, &mut rng).len() as f64 / pat.len() as f64;
        assert!((kept - 0.25).abs() < 0.02);
        assert_eq!(thin(&pat, 1.0, &mut rng), pat);
    }
}
