//! Exact star discrepancy of point sets in `[0,1]^d`, `d ≤ 3`.
//!
//! The closed formulas of Doerr enumerate the critical boxes after sorting by
//! the first coordinate. The brute-force oracle scans every corner built from
//! the point coordinates and 1, counting points both strictly and non-strictly
//! inside.

use rayon::prelude::*;

use crate::distributions::Distribution1D;
use crate::error::{domain, Error, Result};
use crate::greedy1d::{lr_error_of_grid, GreedySequence};

/// Largest point set the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX: usize = 12;

/// A non-empty point set in `[0,1]^d`, `d ∈ {1, 2, 3}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    d: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(d: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return domain(format!("dimension must be 1, 2 or 3, got {d}"));
        }
        if points.is_empty() {
            return domain("point set is empty");
        }
        for p in &points {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: p.len(),
                });
            }
            if p.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                return domain(format!("coordinate outside [0,1] in {p:?}"));
            }
        }
        Ok(PointSet { d, points })
    }

    pub fn from_1d(xs: &[f64]) -> Result<Self> {
        Self::new(1, xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    fn sorted_by_first(&self) -> Vec<&[f64]> {
        let mut v: Vec<&[f64]> = self.points.iter().map(Vec::as_slice).collect();
        v.sort_by(|a, b| a[0].total_cmp(&b[0]));
        v
    }
}

/// Exact discrepancy by the formula of the set's dimension.
pub fn star_disc(ps: &PointSet) -> f64 {
    match ps.d {
        1 => star_disc_1d(ps),
        2 => star_disc_2d(ps),
        _ => star_disc_3d(ps),
    }
}

/// `max_i max{i/n − ξ_i, ξ_i − (i−1)/n}` over the sorted points.
pub fn star_disc_1d(ps: &PointSet) -> f64 {
    let mut xs: Vec<f64> = ps.points.iter().map(|p| p[0]).collect();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max)
}

fn with_ends(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.insert(0, 0.0);
    v.push(1.0);
    v
}

/// Two-dimensional formula. Strips `i = 0…n` along the first axis with
/// `x¹_0 = 0` and `x¹_{n+1} = 1`.
pub fn star_disc_2d(ps: &PointSet) -> f64 {
    let pts = ps.sorted_by_first();
    let n = pts.len();
    let nf = n as f64;
    let x1 = |i: usize| {
        if i == 0 {
            0.0
        } else if i > n {
            1.0
        } else {
            pts[i - 1][0]
        }
    };
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let xi = with_ends(pts[..i].iter().map(|p| p[1]).collect());
            let (lo, hi) = (x1(i), x1(i + 1));
            (0..=i)
                .map(|k| {
                    let kn = k as f64 / nf;
                    (kn - lo * xi[k]).max(hi * xi[k + 1] - kn)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Three-dimensional formula. For strip `i` and level `k`, `η` runs over the
/// third coordinates of the `k` points with the smallest second coordinate
/// among the first `i`.
pub fn star_disc_3d(ps: &PointSet) -> f64 {
    let pts = ps.sorted_by_first();
    let n = pts.len();
    let nf = n as f64;
    let x1 = |i: usize| {
        if i == 0 {
            0.0
        } else if i > n {
            1.0
        } else {
            pts[i - 1][0]
        }
    };
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut by_second: Vec<&[f64]> = pts[..i].to_vec();
            by_second.sort_by(|a, b| a[1].total_cmp(&b[1]));
            let mut xi = vec![0.0];
            xi.extend(by_second.iter().map(|p| p[1]));
            xi.push(1.0);
            let (lo, hi) = (x1(i), x1(i + 1));
            let mut eta = vec![0.0, 1.0];
            let mut best: f64 = 0.0;
            for k in 0..=i {
                if k > 0 {
                    let z = by_second[k - 1][2];
                    let pos = eta[1..].partition_point(|&e| e <= z) + 1;
                    eta.insert(pos.min(eta.len() - 1), z);
                }
                for l in 0..=k {
                    let ln = l as f64 / nf;
                    best = best
                        .max(ln - lo * xi[k] * eta[l])
                        .max(hi * xi[k + 1] * eta[l + 1] - ln);
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// Oracle: every corner built from point coordinates and 1 on each axis,
/// with strict and non-strict counts. Rejects sets above
/// [`BRUTE_FORCE_MAX`] points.
pub fn star_disc_bruteforce(ps: &PointSet) -> Result<f64> {
    let n = ps.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX,
        });
    }
    let axes: Vec<Vec<f64>> = (0..ps.d)
        .map(|j| {
            let mut v: Vec<f64> = ps.points.iter().map(|p| p[j]).collect();
            v.push(1.0);
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect();
    let nf = n as f64;
    let mut best: f64 = 0.0;
    let mut idx = vec![0usize; ps.d];
    loop {
        let u: Vec<f64> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
        let vol: f64 = u.iter().product();
        let open = ps
            .points
            .iter()
            .filter(|p| p.iter().zip(&u).all(|(x, c)| x < c))
            .count();
        let closed = ps
            .points
            .iter()
            .filter(|p| p.iter().zip(&u).all(|(x, c)| x <= c))
            .count();
        best = best
            .max(vol - open as f64 / nf)
            .max(closed as f64 / nf - vol);

        let mut k = ps.d;
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `(e_1, D_n^*)` of a `U(0,1)` greedy sequence; the pair satisfies
/// `e_1 ≤ D_n^*` by the Koksma-Hlawka inequality.
pub fn quantization_error_vs_disc(seq: &GreedySequence) -> Result<(f64, f64)> {
    if *seq.dist() != Distribution1D::std_uniform() {
        return domain(format!("expected a U(0,1) sequence, got {}", seq.dist()));
    }
    let e1 = lr_error_of_grid(seq.dist(), seq.sorted_points(), 1.0);
    let d = star_disc_1d(&PointSet::from_1d(seq.sorted_points())?);
    Ok((e1, d))
}
