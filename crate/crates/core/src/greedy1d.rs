//! Quadratic greedy quantization sequences of one-dimensional laws.
//!
//! A sequence is grown one point at a time. Each new point is the one that
//! most reduces the quadratic distortion with all previous points frozen.
//! Because the points are frozen, inserting a point in the gap between two
//! consecutive sorted points only changes that gap: its local inter-point
//! inertia splits in two, and the Voronoi weights of the new cell and its two
//! neighbours change. Everything else is carried over, including the best
//! candidate of every untouched gap.

use serde::{Deserialize, Serialize};

use crate::distributions::{Distribution1D, Interval};
use crate::quadrature::{integrate, Tolerance};

const SEED_COUNT: usize = 64;
const FIXED_POINT_MAX_ITER: usize = 200;
const FIXED_POINT_TOL: f64 = 1e-12;
const TIE_REL: f64 = 1e-13;

/// Record of one insertion, enough to replay the cubature update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InsertionStep {
    /// Sorted position of the new point after insertion.
    pub i0: usize,
    /// Insertion-order index of the sorted left neighbour.
    pub left_idx: Option<usize>,
    /// Insertion-order index of the sorted right neighbour.
    pub right_idx: Option<usize>,
    /// Mass the new cell takes from the left neighbour's old cell.
    pub p_minus: f64,
    /// Mass the new cell takes from the right neighbour's old cell.
    pub p_plus: f64,
    /// Decrease of the squared quadratic error.
    pub gain: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    x: f64,
    gain: f64,
}

/// A quadratic greedy quantization sequence with its incremental ledgers.
#[derive(Debug, Clone)]
pub struct GreedySequence {
    dist: Distribution1D,
    points: Vec<f64>,
    sorted: Vec<f64>,
    order: Vec<usize>,
    inertias: Vec<f64>,
    weights: Vec<f64>,
    steps: Vec<InsertionStep>,
    error_sq_trace: Vec<f64>,
    candidates: Vec<Candidate>,
}

fn midpoint(left: f64, right: f64) -> f64 {
    match (left.is_finite(), right.is_finite()) {
        (true, true) => 0.5 * (left + right),
        (false, _) => left,
        (_, false) => right,
    }
}

/// Local inter-point inertia of the gap `[left, right]`: the half closer to
/// `left` is quantized by `left`, the other half by `right`. Infinite ends
/// carry no point.
pub fn gap_inertia(dist: &Distribution1D, left: f64, right: f64) -> f64 {
    match (left.is_finite(), right.is_finite()) {
        (true, true) => {
            let mid = 0.5 * (left + right);
            dist.sq_deviation(Interval { lo: left, hi: mid }, left)
                + dist.sq_deviation(Interval { lo: mid, hi: right }, right)
        }
        (false, true) => dist.sq_deviation(
            Interval {
                lo: f64::NEG_INFINITY,
                hi: right,
            },
            right,
        ),
        (true, false) => dist.sq_deviation(
            Interval {
                lo: left,
                hi: f64::INFINITY,
            },
            left,
        ),
        (false, false) => f64::INFINITY,
    }
}

fn insertion_gain(dist: &Distribution1D, left: f64, right: f64, x: f64) -> f64 {
    gap_inertia(dist, left, right) - gap_inertia(dist, left, x) - gap_inertia(dist, x, right)
}

/// Best point to insert in the gap `(left, right)` with both neighbours
/// frozen, and the resulting decrease of the squared error.
///
/// The clipped gap is scanned at the midpoints of 64 equal subdivisions and
/// the best seed is refined by the one-point Lloyd map `x ← E[X | cell(x)]`.
pub fn local_candidate(dist: &Distribution1D, left: f64, right: f64) -> (f64, f64) {
    let range = dist.search_range();
    let lo = left.max(range.lo);
    let hi = right.min(range.hi);
    if !(lo < hi)
        || dist.mass(Interval {
            lo: left,
            hi: right,
        }) <= 0.0
    {
        return (midpoint(lo, hi), 0.0);
    }

    let width = (hi - lo) / SEED_COUNT as f64;
    let mut best = Candidate {
        x: lo + 0.5 * width,
        gain: f64::NEG_INFINITY,
    };
    for k in 0..SEED_COUNT {
        let x = lo + (k as f64 + 0.5) * width;
        let gain = insertion_gain(dist, left, right, x);
        if gain > best.gain {
            best = Candidate { x, gain };
        }
    }

    let mut x = best.x;
    for _ in 0..FIXED_POINT_MAX_ITER {
        let cell = Interval {
            lo: midpoint(left, x),
            hi: midpoint(x, right),
        };
        let Some(next) = dist.conditional_mean(cell) else {
            break;
        };
        let step = (next - x).abs();
        x = next;
        if step < FIXED_POINT_TOL * (1.0 + x.abs()) {
            break;
        }
    }
    let x = x.clamp(lo, hi);
    if x > left && x < right {
        let gain = insertion_gain(dist, left, right, x);
        if gain >= best.gain {
            return (x, gain.max(0.0));
        }
    }
    (best.x, best.gain.max(0.0))
}

impl GreedySequence {
    /// The one-point sequence: the mean of the law.
    pub fn new(dist: Distribution1D) -> Self {
        let a1 = dist.mean();
        let inertias = vec![
            gap_inertia(&dist, f64::NEG_INFINITY, a1),
            gap_inertia(&dist, a1, f64::INFINITY),
        ];
        let candidates = vec![
            Self::candidate(&dist, f64::NEG_INFINITY, a1),
            Self::candidate(&dist, a1, f64::INFINITY),
        ];
        let err = inertias.iter().sum();
        GreedySequence {
            dist,
            points: vec![a1],
            sorted: vec![a1],
            order: vec![0],
            inertias,
            weights: vec![1.0],
            steps: Vec::new(),
            error_sq_trace: vec![err],
            candidates,
        }
    }

    /// Builds the first `n` points (`n ≥ 1`).
    pub fn build(dist: Distribution1D, n: usize) -> Self {
        let mut seq = Self::new(dist);
        seq.extend_to(n);
        seq
    }

    pub fn extend_to(&mut self, n: usize) {
        while self.len() < n {
            self.insert_next();
        }
    }

    fn candidate(dist: &Distribution1D, left: f64, right: f64) -> Candidate {
        let (x, gain) = local_candidate(dist, left, right);
        Candidate { x, gain }
    }

    fn best_gap(&self) -> usize {
        let mut best = 0;
        let mut best_gain = self.candidates[0].gain;
        for (j, c) in self.candidates.iter().enumerate().skip(1) {
            if c.gain > best_gain + TIE_REL * best_gain.abs().max(c.gain.abs()) {
                best = j;
                best_gain = c.gain;
            }
        }
        best
    }

    /// Squared error the next insertion would reach, without inserting.
    pub fn peek_next_error_sq(&self) -> f64 {
        self.error_sq() - self.candidates[self.best_gap()].gain
    }

    fn neighbour(&self, j: isize) -> f64 {
        if j < 0 {
            f64::NEG_INFINITY
        } else if j as usize >= self.sorted.len() {
            f64::INFINITY
        } else {
            self.sorted[j as usize]
        }
    }

    fn cell(&self, i: usize) -> Interval {
        let i = i as isize;
        Interval {
            lo: midpoint(self.neighbour(i - 1), self.neighbour(i)),
            hi: midpoint(self.neighbour(i), self.neighbour(i + 1)),
        }
    }

    /// Adds the next greedy point and updates the ledgers in place.
    pub fn insert_next(&mut self) -> InsertionStep {
        let gap = self.best_gap();
        self.insert_at(gap, self.candidates[gap].x)
    }

    fn insert_at(&mut self, gap: usize, x: f64) -> InsertionStep {
        let left = self.neighbour(gap as isize - 1);
        let right = self.neighbour(gap as isize);

        let new_idx = self.points.len();
        let left_idx = (gap > 0).then(|| self.order[gap - 1]);
        let right_idx = (gap < self.sorted.len()).then(|| self.order[gap]);

        self.points.push(x);
        self.sorted.insert(gap, x);
        self.order.insert(gap, new_idx);

        let old = self.inertias[gap];
        let li = gap_inertia(&self.dist, left, x);
        let ri = gap_inertia(&self.dist, x, right);
        self.inertias[gap] = li;
        self.inertias.insert(gap + 1, ri);
        let gain = old - li - ri;

        self.candidates[gap] = Self::candidate(&self.dist, left, x);
        self.candidates
            .insert(gap + 1, Self::candidate(&self.dist, x, right));

        let i0 = gap;
        self.weights.insert(i0, 0.0);
        let lo = i0.saturating_sub(1);
        let hi = (i0 + 1).min(self.sorted.len() - 1);
        for i in lo..=hi {
            self.weights[i] = self.dist.mass(self.cell(i));
        }

        let mil = midpoint(left, right);
        let p_minus = if left.is_finite() {
            self.dist.mass(Interval {
                lo: midpoint(left, x),
                hi: mil,
            })
        } else {
            0.0
        };
        let p_plus = if right.is_finite() {
            self.dist.mass(Interval {
                lo: mil,
                hi: midpoint(x, right),
            })
        } else {
            0.0
        };

        let step = InsertionStep {
            i0,
            left_idx,
            right_idx,
            p_minus,
            p_plus,
            gain,
        };
        self.steps.push(step);
        let prev = *self.error_sq_trace.last().expect("non-empty trace");
        self.error_sq_trace.push(prev - gain);
        step
    }

    pub fn dist(&self) -> &Distribution1D {
        &self.dist
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in insertion order.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Points in increasing order.
    pub fn sorted_points(&self) -> &[f64] {
        &self.sorted
    }

    /// Insertion-order index of each sorted point.
    pub fn sorted_index(&self) -> &[usize] {
        &self.order
    }

    /// Local inter-point inertias, one per gap (`n + 1` entries, the two
    /// unbounded end gaps included).
    pub fn inertias(&self) -> &[f64] {
        &self.inertias
    }

    /// Voronoi cell weights over the sorted points.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn steps(&self) -> &[InsertionStep] {
        &self.steps
    }

    /// Squared quadratic error after each prefix, `k = 1..=n`.
    pub fn error_sq_trace(&self) -> &[f64] {
        &self.error_sq_trace
    }

    /// Current squared quadratic error.
    pub fn error_sq(&self) -> f64 {
        *self.error_sq_trace.last().expect("non-empty trace")
    }

    /// Voronoi cell of the `i`-th sorted point.
    pub fn cell_of(&self, i: usize) -> Interval {
        self.cell(i)
    }

    /// Recomputes every inertia and weight from scratch.
    pub fn recompute_full(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.sorted.len() as isize;
        let inertias = (0..=n)
            .map(|j| gap_inertia(&self.dist, self.neighbour(j - 1), self.neighbour(j)))
            .collect();
        let weights = (0..self.sorted.len())
            .map(|i| self.dist.mass(self.cell(i)))
            .collect();
        (inertias, weights)
    }

    /// `e_r` of the current grid. `r = 2` reads the inertia ledger, other
    /// orders integrate each half-cell numerically.
    pub fn error_lr(&self, r: f64) -> f64 {
        if r == 2.0 {
            self.error_sq().max(0.0).sqrt()
        } else {
            lr_error_of_grid(&self.dist, &self.sorted, r)
        }
    }

    /// Sorted points of the first `k` inserted points.
    pub fn prefix_sorted(&self, k: usize) -> Vec<f64> {
        let mut v = self.points[..k].to_vec();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Rebuilds a sequence from stored points in insertion order, recomputing
    /// every ledger. The points are taken as given, not re-optimised. Returns
    /// `None` on an empty or repeated point.
    pub fn from_points(dist: Distribution1D, points: &[f64]) -> Option<Self> {
        let (&first, rest) = points.split_first()?;
        if !first.is_finite() {
            return None;
        }
        let mut seq = Self::new(dist);
        seq.points[0] = first;
        seq.sorted[0] = first;
        seq.inertias = vec![
            gap_inertia(&dist, f64::NEG_INFINITY, first),
            gap_inertia(&dist, first, f64::INFINITY),
        ];
        seq.candidates = vec![
            Self::candidate(&dist, f64::NEG_INFINITY, first),
            Self::candidate(&dist, first, f64::INFINITY),
        ];
        seq.error_sq_trace = vec![seq.inertias.iter().sum()];
        for &x in rest {
            let gap = seq.sorted.partition_point(|&s| s < x);
            if !x.is_finite() || seq.sorted.get(gap) == Some(&x) {
                return None;
            }
            seq.insert_at(gap, x);
        }
        Some(seq)
    }
}

/// Voronoi weights `F(a_{i+1/2}) − F(a_{i−1/2})` of a sorted grid.
pub fn voronoi_weights(dist: &Distribution1D, sorted: &[f64]) -> Vec<f64> {
    let n = sorted.len();
    (0..n)
        .map(|i| {
            let lo = if i == 0 {
                f64::NEG_INFINITY
            } else {
                0.5 * (sorted[i - 1] + sorted[i])
            };
            let hi = if i + 1 == n {
                f64::INFINITY
            } else {
                0.5 * (sorted[i] + sorted[i + 1])
            };
            dist.mass(Interval { lo, hi })
        })
        .collect()
}

/// `e_r(grid, P)` for a sorted grid, integrating `|ξ - a|^r dP` numerically
/// over each half-cell.
pub fn lr_error_of_grid(dist: &Distribution1D, sorted: &[f64], r: f64) -> f64 {
    lr_distortion_of_grid(dist, sorted, r).powf(1.0 / r)
}

/// `e_r(grid, P)^r`.
pub fn lr_distortion_of_grid(dist: &Distribution1D, sorted: &[f64], r: f64) -> f64 {
    let support = dist.support();
    let tol = Tolerance {
        abs: 1e-18,
        rel: 1e-11,
    };
    let n = sorted.len();
    let mut total = 0.0;
    for (i, &a) in sorted.iter().enumerate() {
        let lo = if i == 0 {
            f64::NEG_INFINITY
        } else {
            0.5 * (sorted[i - 1] + a)
        };
        let hi = if i + 1 == n {
            f64::INFINITY
        } else {
            0.5 * (a + sorted[i + 1])
        };
        let f = |x: f64| (x - a).abs().powf(r) * dist.pdf(x);
        for (u, v) in [
            (lo.max(support.lo), a.max(support.lo)),
            (a.min(support.hi), hi.min(support.hi)),
        ] {
            if u < v {
                total += integrate(f, u, v, tol);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    fn laws() -> [Distribution1D; 4] {
        [
            Distribution1D::std_normal(),
            Distribution1D::std_uniform(),
            Distribution1D::std_exponential(),
            Distribution1D::std_laplace(),
        ]
    }

    // Direct quadrature of E[min_i (X - a_i)^2] on a fixed fine panel grid,
    // independent of the cell bookkeeping.
    fn brute_distortion(dist: &Distribution1D, pts: &[f64]) -> f64 {
        let r = dist.support();
        let (lo, hi) = (r.lo.max(-40.0), r.hi.min(40.0));
        let panels = 4000;
        let h = (hi - lo) / panels as f64;
        let tol = Tolerance {
            abs: 1e-16,
            rel: 1e-12,
        };
        let f = |x: f64| {
            let d = pts
                .iter()
                .map(|p| (x - p) * (x - p))
                .fold(f64::INFINITY, f64::min);
            d * dist.pdf(x)
        };
        (0..panels)
            .map(|k| integrate(f, lo + k as f64 * h, lo + (k + 1) as f64 * h, tol))
            .sum()
    }

    #[test]
    fn init_examples() {
        let s = GreedySequence::new(Distribution1D::std_normal());
        assert_eq!(s.points(), &[0.0]);
        assert!((s.error_sq() - 1.0).abs() < 1e-14);
        let s = GreedySequence::new(Distribution1D::std_uniform());
        assert_eq!(s.points(), &[0.5]);
        assert!((s.error_sq() - 1.0 / 12.0).abs() < 1e-15);
        let s = GreedySequence::new(Distribution1D::std_exponential());
        assert_eq!(s.points(), &[1.0]);
        assert!((s.error_sq() - 1.0).abs() < 1e-14);
        assert_eq!(s.weights(), &[1.0]);
    }

    #[test]
    fn uniform_candidate_left_of_centre() {
        let u = Distribution1D::std_uniform();
        let (x, gain) = local_candidate(&u, f64::NEG_INFINITY, 0.5);
        // Oracle: 1/6 from a 1e-6 grid search refined by the fixed point;
        // the gain 1/27 is 1/12 minus the brute-force distortion of {1/6, 1/2}.
        assert!((x - 1.0 / 6.0).abs() < 1e-10, "x = {x}");
        assert!((gain - 1.0 / 27.0).abs() < 1e-12, "gain = {gain}");
        let direct = 1.0 / 12.0 - brute_distortion(&u, &[1.0 / 6.0, 0.5]);
        assert!((gain - direct).abs() < 1e-10);

        let (xr, gr) = local_candidate(&u, 0.5, f64::INFINITY);
        assert!((xr - 5.0 / 6.0).abs() < 1e-10);
        assert!((gr - gain).abs() < 1e-14);
    }

    #[test]
    fn normal_candidate_inside_open_gap() {
        let (x, gain) = local_candidate(&Distribution1D::std_normal(), 0.0, f64::INFINITY);
        assert!(x > 0.0 && gain > 0.0);
    }

    #[test]
    fn candidate_is_a_lloyd_fixed_point() {
        for d in laws() {
            let seq = GreedySequence::build(d, 40);
            let s = seq.sorted_points();
            for j in 0..=s.len() {
                let left = if j == 0 { f64::NEG_INFINITY } else { s[j - 1] };
                let right = if j == s.len() { f64::INFINITY } else { s[j] };
                let (x, gain) = local_candidate(&d, left, right);
                if gain == 0.0 {
                    continue;
                }
                let cm = d
                    .conditional_mean(Interval {
                        lo: midpoint(left, x),
                        hi: midpoint(x, right),
                    })
                    .unwrap();
                assert!((cm - x).abs() < 1e-10, "{d} gap {j}");
            }
        }
    }

    #[test]
    fn gain_matches_direct_distortion() {
        for d in laws() {
            let seq = GreedySequence::build(d, 6);
            for k in 1..6 {
                let before = brute_distortion(&d, &seq.prefix_sorted(k));
                let after = brute_distortion(&d, &seq.prefix_sorted(k + 1));
                assert!(
                    (before - after - seq.steps()[k - 1].gain).abs() < 1e-9,
                    "{d} k={k}"
                );
                assert!((after - seq.error_sq_trace()[k]).abs() < 1e-9, "{d} k={k}");
            }
        }
    }

    #[test]
    fn normal_second_and_third_points() {
        // Oracle: scipy quadrature of E[X² ∧ (X - a)²], 1e-3 then 1e-6 grid
        // search and Brent refinement.
        const C: f64 = 1.224_006_362_694_349;
        const GAIN: f64 = 0.404_912_980_376_049;
        let d = Distribution1D::std_normal();
        let seq = GreedySequence::build(d, 3);
        let a2 = seq.points()[1];
        assert!((a2.abs() - C).abs() < 1e-9, "a2 = {a2}");
        assert!((seq.steps()[0].gain - GAIN).abs() < 1e-11);
        let a3 = seq.points()[2];
        assert!((a3 + a2).abs() < 1e-10);
        let a = a2.abs();
        let cm = d
            .conditional_mean(Interval {
                lo: 0.5 * a,
                hi: f64::INFINITY,
            })
            .unwrap();
        assert!((cm - a).abs() < 1e-10);
    }

    #[test]
    fn uniform_second_point() {
        let seq = GreedySequence::build(Distribution1D::std_uniform(), 2);
        let a2 = seq.points()[1];
        assert!((a2 - 1.0 / 6.0).abs() < 1e-10 || (a2 - 5.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn build_examples() {
        assert_eq!(
            GreedySequence::build(Distribution1D::std_uniform(), 1).points(),
            &[0.5]
        );
        let e = GreedySequence::build(Distribution1D::std_exponential(), 50);
        assert!(e.error_lr(2.0) < e.error_sq_trace()[48].sqrt());
    }

    #[test]
    fn incremental_ledgers_equal_full_recomputation() {
        for d in laws() {
            let mut seq = GreedySequence::new(d);
            for _ in 0..300 {
                seq.insert_next();
                let (inertias, weights) = seq.recompute_full();
                assert_eq!(inertias.len(), seq.inertias().len());
                for (a, b) in inertias.iter().zip(seq.inertias()) {
                    assert!((a - b).abs() <= 1e-12);
                }
                for (a, b) in weights.iter().zip(seq.weights()) {
                    assert!((a - b).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn ledger_invariants() {
        for d in laws() {
            let seq = GreedySequence::build(d, 2000);
            let wsum: f64 = seq.weights().iter().sum();
            assert!((wsum - 1.0).abs() < 1e-12, "{d}");
            let isum: f64 = seq.inertias().iter().sum();
            assert!((isum - seq.error_sq()).abs() < 1e-10, "{d}");
            for w in seq.error_sq_trace().windows(2) {
                assert!(w[1] < w[0], "{d}");
            }
            for (k, st) in seq.steps().iter().enumerate() {
                let drop = seq.error_sq_trace()[k] - seq.error_sq_trace()[k + 1];
                assert!((drop - st.gain).abs() < 1e-12);
                assert!(st.p_minus >= 0.0 && st.p_plus >= 0.0 && st.p_minus + st.p_plus <= 1.0);
            }
            let range = d.search_range();
            let s = seq.sorted_points();
            assert!(s[0] >= range.lo && s[s.len() - 1] <= range.hi, "{d}");
            assert!(
                s.windows(2).all(|w| w[0] < w[1]),
                "{d}: points not distinct"
            );
        }
    }

    #[test]
    fn symmetric_laws_give_symmetric_odd_grids() {
        for d in [Distribution1D::std_normal(), Distribution1D::std_laplace()] {
            let mut seq = GreedySequence::new(d);
            for n in 2..=301 {
                seq.insert_next();
                if n % 2 == 1 {
                    let s = seq.sorted_points();
                    for i in 0..n {
                        assert!((s[i] + s[n - 1 - i]).abs() < 1e-8, "{d} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn error_lr_examples() {
        let n1 = GreedySequence::new(Distribution1D::std_normal());
        assert!((n1.error_lr(2.0) - 1.0).abs() < 1e-14);
        let u1 = GreedySequence::new(Distribution1D::std_uniform());
        assert!((u1.error_lr(1.0) - 0.25).abs() < 1e-12);
        let n255 = GreedySequence::build(Distribution1D::std_normal(), 255);
        let quad = lr_error_of_grid(n255.dist(), n255.sorted_points(), 2.0);
        let ledger: f64 = n255.inertias().iter().sum::<f64>().sqrt();
        assert!((quad - ledger).abs() < 1e-8);
        assert!((n255.error_lr(2.0) - ledger).abs() < 1e-8);
    }

    #[test]
    fn recompute_examples() {
        let s = GreedySequence::new(Distribution1D::std_uniform());
        assert_eq!(s.recompute_full().1, vec![1.0]);
        let s = GreedySequence::build(Distribution1D::std_normal(), 3);
        let (_, w) = s.recompute_full();
        assert!((w[0] - w[2]).abs() < 1e-12);
    }

    #[test]
    fn voronoi_weights_match_ledger() {
        let seq = GreedySequence::build(Distribution1D::std_laplace(), 77);
        assert_eq!(
            voronoi_weights(seq.dist(), seq.sorted_points()),
            seq.weights()
        );
    }

    #[test]
    fn from_points_reproduces_ledgers() {
        let d = Distribution1D::std_exponential();
        let seq = GreedySequence::build(d, 60);
        let copy = GreedySequence::from_points(d, seq.points()).unwrap();
        assert_eq!(copy.sorted_points(), seq.sorted_points());
        assert_eq!(copy.weights(), seq.weights());
        for (a, b) in copy.error_sq_trace().iter().zip(seq.error_sq_trace()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(copy.steps(), seq.steps());
    }
}
