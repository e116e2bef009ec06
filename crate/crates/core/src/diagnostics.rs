//! Numerical checks on greedy sequences: rate profiles, distortion mismatch,
//! limit weights of the empirical measure, sub-optimal levels against a
//! batch optimal quantizer, stationarity and ρ-quasi-stationarity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::{Distribution1D, Interval};
use crate::error::{domain, Result};
use crate::greedy1d::{lr_distortion_of_grid, lr_error_of_grid, GreedySequence};
use crate::quadrature::{golden_min, integrate, Tolerance};

/// One level of a rate profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    /// `e_r` of the first `n` points.
    pub error: f64,
    /// `n · e_r` (d = 1).
    pub scaled: f64,
    /// Pierce-type upper bound `κ σ_{r+1} (n−1)^{-1}`, when reported.
    pub bound: Option<f64>,
}

/// `e_r` along the prefixes of a greedy sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateProfile {
    pub r: f64,
    pub rows: Vec<RateRow>,
}

impl RateProfile {
    /// `max / min` of `n · e_r` over `lo ≤ n ≤ hi`.
    pub fn spread(&self, lo: usize, hi: usize) -> f64 {
        let vals = self
            .rows
            .iter()
            .filter(|row| row.n >= lo && row.n <= hi)
            .map(|row| row.scaled);
        let (min, max) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        max / min
    }

    pub fn row(&self, n: usize) -> Option<&RateRow> {
        self.rows.iter().find(|row| row.n == n)
    }
}

/// `σ_r(P) = min_a ‖X − a‖_r`.
pub fn sigma_r(dist: &Distribution1D, r: f64) -> f64 {
    let range = dist.search_range();
    let err = |a: f64| lr_distortion_of_grid(dist, &[a], r);
    let a = golden_min(
        err,
        range.lo.max(dist.quantile(0.01).unwrap_or(range.lo)),
        range.hi.min(dist.quantile(0.99).unwrap_or(range.hi)),
        1e-10,
    );
    err(a).powf(1.0 / r)
}

/// Upper bound on the greedy Pierce constant for `d = 1`, `δ = 1`,
/// minimising over `ε ∈ (0, 1/3)` on a grid of step `10⁻³`.
pub fn pierce_constant(r: f64) -> f64 {
    let delta = 1.0;
    let v1 = 2.0;
    let shape = ((delta / r).powf(r / (r + delta)) + (r / delta).powf(delta / (r + delta)))
        .powf(1.0 + delta / r);
    // ∫_ℝ (|x| ∨ 1)^{-1-δ/r} dx
    let tail = 2.0 + 2.0 * r / delta;
    let phi = |u: f64| (3f64.powf(-r) - u.powf(r)) * u;
    let min = (1..333)
        .map(|k| k as f64 * 1e-3)
        .map(|e| (1.0 + e) / phi(e))
        .fold(f64::INFINITY, f64::min);
    r / v1 * shape * tail * min
}

/// Rate profile of `e_r` for `n = 2…N`, with the Pierce-type bound column.
/// `r = 2` reads the construction ledger; other orders integrate per cell.
pub fn rate_profile(dist: Distribution1D, r: f64, n_max: usize) -> Result<RateProfile> {
    if n_max < 2 {
        return domain("a rate profile needs N ≥ 2");
    }
    if !(r > 0.0) {
        return domain(format!("r must be positive, got {r}"));
    }
    let seq = GreedySequence::build(dist, n_max);
    let kappa_sigma = pierce_constant(r) * sigma_r(&dist, r + 1.0);
    let errors = profile_errors(&seq, r, r == 2.0);
    Ok(RateProfile {
        r,
        rows: errors
            .into_iter()
            .map(|(n, e)| RateRow {
                n,
                error: e,
                scaled: n as f64 * e,
                bound: Some(kappa_sigma / (n - 1) as f64),
            })
            .collect(),
    })
}

fn profile_errors(seq: &GreedySequence, r: f64, use_ledger: bool) -> Vec<(usize, f64)> {
    use rayon::prelude::*;
    (2..=seq.len())
        .into_par_iter()
        .map(|n| {
            let e = if use_ledger {
                seq.error_sq_trace()[n - 1].max(0.0).sqrt()
            } else {
                lr_error_of_grid(seq.dist(), &seq.prefix_sorted(n), r)
            };
            (n, e)
        })
        .collect()
}

/// Profile of `e_s` for a quadratic greedy sequence, `s ∈ [2, 3)`. `s = 2`
/// is accepted as the degenerate case and integrates numerically like the
/// others, which makes it an independent check of the ledger.
pub fn mismatch_profile(dist: Distribution1D, s: f64, n_max: usize) -> Result<RateProfile> {
    if !(2.0..3.0).contains(&s) {
        return domain(format!("s must lie in [2, 3) for d = 1 and r = 2, got {s}"));
    }
    if n_max < 2 {
        return domain("a rate profile needs N ≥ 2");
    }
    let seq = GreedySequence::build(dist, n_max);
    Ok(RateProfile {
        r: s,
        rows: profile_errors(&seq, s, false)
            .into_iter()
            .map(|(n, e)| RateRow {
                n,
                error: e,
                scaled: n as f64 * e,
                bound: None,
            })
            .collect(),
    })
}

/// Limit weights `f^{p/(1+p)}(a_i) · ∫ f^{1/(1+p)} / n` at the sorted points,
/// not renormalised.
pub fn limit_weights(seq: &GreedySequence, p: f64) -> Vec<f64> {
    let dist = seq.dist();
    let s = dist.support();
    let expo = 1.0 / (1.0 + p);
    let c = integrate(
        |x| dist.pdf(x).powf(expo),
        s.lo,
        s.hi,
        Tolerance {
            abs: 1e-12,
            rel: 1e-10,
        },
    );
    let n = seq.len() as f64;
    seq.sorted_points()
        .iter()
        .map(|&a| dist.pdf(a).powf(p * expo) * c / n)
        .collect()
}

/// `Σ_i |p_i − P_l(W_i)|` with the quadratic limit weights.
pub fn limit_weights_l1(seq: &GreedySequence) -> f64 {
    seq.weights()
        .iter()
        .zip(limit_weights(seq, 2.0))
        .map(|(w, l)| (w - l).abs())
        .sum()
}

/// Single local maximum, ties allowed up to `1e-12 · max`.
pub fn is_unimodal(w: &[f64]) -> bool {
    let tol = 1e-12 * w.iter().cloned().fold(0.0, f64::max);
    let mut falling = false;
    for pair in w.windows(2) {
        let d = pair[1] - pair[0];
        if d < -tol {
            falling = true;
        } else if d > tol && falling {
            return false;
        }
    }
    true
}

/// Squared quadratic distortion of a sorted grid, in closed form.
pub fn distortion_sq(dist: &Distribution1D, sorted: &[f64]) -> f64 {
    cells(sorted)
        .zip(sorted)
        .map(|(c, &a)| dist.sq_deviation(c, a))
        .sum()
}

fn cells(sorted: &[f64]) -> impl Iterator<Item = Interval> + '_ {
    let n = sorted.len();
    (0..n).map(move |i| Interval {
        lo: if i == 0 {
            f64::NEG_INFINITY
        } else {
            0.5 * (sorted[i - 1] + sorted[i])
        },
        hi: if i + 1 == n {
            f64::INFINITY
        } else {
            0.5 * (sorted[i] + sorted[i + 1])
        },
    })
}

fn lloyd_step(dist: &Distribution1D, a: &[f64]) -> Vec<f64> {
    cells(a)
        .zip(a)
        .map(|(c, &x)| dist.conditional_mean(c).unwrap_or(x))
        .collect()
}

/// Newton step on the stationarity system `a_i m0_i − m1_i = 0`, whose
/// Jacobian is tridiagonal.
fn newton_step(dist: &Distribution1D, a: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut g = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for (i, c) in cells(a).enumerate() {
        let m = dist.partial_moments(c);
        g[i] = a[i] * m.m0 - m.m1;
        diag[i] = m.m0;
    }
    for i in 0..n.saturating_sub(1) {
        let b = 0.5 * (a[i] + a[i + 1]);
        let t = -0.25 * (a[i + 1] - a[i]) * dist.pdf(b);
        diag[i] += t;
        diag[i + 1] += t;
        off[i] = t;
    }
    // Thomas algorithm for the symmetric tridiagonal system J δ = g.
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    if denom == 0.0 {
        return None;
    }
    c[0] = if n > 1 { off[0] / denom } else { 0.0 };
    d[0] = g[0] / denom;
    for i in 1..n {
        denom = diag[i] - off[i - 1] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return None;
        }
        c[i] = if i + 1 < n { off[i] / denom } else { 0.0 };
        d[i] = (g[i] - off[i - 1] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Some(d)
}

/// Locally optimal quadratic quantizer reached from `start` by Lloyd
/// iterations polished with damped Newton steps.
pub fn lloyd_optimize(dist: &Distribution1D, start: &[f64]) -> Vec<f64> {
    let mut a = start.to_vec();
    a.sort_by(f64::total_cmp);
    let mut err = distortion_sq(dist, &a);
    for _ in 0..20 {
        a = lloyd_step(dist, &a);
    }
    err = err.min(distortion_sq(dist, &a));
    for _ in 0..500 {
        let moved = match newton_step(dist, &a) {
            Some(delta) => {
                let mut t = 1.0;
                let mut accepted = None;
                while t > 1e-6 {
                    let cand: Vec<f64> = a.iter().zip(&delta).map(|(x, d)| x - t * d).collect();
                    if cand.windows(2).all(|w| w[0] < w[1]) {
                        let e = distortion_sq(dist, &cand);
                        if e <= err {
                            accepted = Some((cand, e));
                            break;
                        }
                    }
                    t *= 0.5;
                }
                accepted
            }
            None => None,
        };
        let (next, e) = moved.unwrap_or_else(|| {
            let l = lloyd_step(dist, &a);
            let e = distortion_sq(dist, &l);
            (l, e)
        });
        let step = a
            .iter()
            .zip(&next)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        a = next;
        err = e;
        if step < 1e-12 {
            break;
        }
    }
    a
}

/// Optimal `n`-quantizer oracle: [`lloyd_optimize`] from the warm start,
/// plus five random restarts for `n ≤ 63`; the smallest distortion wins.
pub fn optimal_quantizer(dist: &Distribution1D, warm_start: &[f64], seed: u64) -> Vec<f64> {
    let mut best = lloyd_optimize(dist, warm_start);
    let n = warm_start.len();
    if n <= 63 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let mut start: Vec<f64> = (0..n)
                .map(|_| {
                    dist.quantile(rng.random_range(0.01..0.99))
                        .expect("p in (0,1)")
                })
                .collect();
            start.sort_by(f64::total_cmp);
            start.dedup();
            while start.len() < n {
                let last = *start.last().expect("non-empty");
                start.push(last + 1e-3);
            }
            let cand = lloyd_optimize(dist, &start);
            if distortion_sq(dist, &cand) < distortion_sq(dist, &best) {
                best = cand;
            }
        }
    }
    best
}

/// Checkpoints of the two sub-optimal `U(0,1)` recursions up to `n_max`.
pub fn uniform_checkpoints(seed: usize, n_max: usize) -> Vec<usize> {
    let mut out = vec![seed];
    let mut alpha = seed;
    for k in 1.. {
        alpha = match k % 3 {
            1 => 2 * alpha + 1,
            2 => 2 * (alpha - 2) + 1,
            _ => 2 * (alpha + 2) + 1,
        };
        if alpha > n_max {
            break;
        }
        out.push(alpha);
    }
    out
}

/// Outcome of [`suboptimal_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuboptimalReport {
    /// `(n, sorted weights unimodal)` at each checkpoint.
    pub unimodal_at: Vec<(usize, bool)>,
    /// `(n, e_2(greedy) / e_2(optimal))` at each checkpoint.
    pub optimal_gap: Vec<(usize, f64)>,
}

/// Unimodality of the weights and distance to optimality at the given
/// prefix sizes of a sequence.
pub fn suboptimal_check(seq: &GreedySequence, checkpoints: &[usize]) -> Result<SuboptimalReport> {
    use rayon::prelude::*;
    if let Some(&n) = checkpoints.iter().find(|&&n| n == 0 || n > seq.len()) {
        return domain(format!("checkpoint {n} outside 1..={}", seq.len()));
    }
    let dist = *seq.dist();
    let rows: Vec<((usize, bool), (usize, f64))> = checkpoints
        .par_iter()
        .map(|&n| {
            let prefix =
                GreedySequence::from_points(dist, &seq.points()[..n]).expect("distinct points");
            let greedy = distortion_sq(&dist, prefix.sorted_points());
            let opt = optimal_quantizer(&dist, prefix.sorted_points(), n as u64);
            let best = distortion_sq(&dist, &opt);
            (
                (n, is_unimodal(prefix.weights())),
                (n, (greedy / best).sqrt()),
            )
        })
        .collect();
    let (unimodal_at, optimal_gap) = rows.into_iter().unzip();
    Ok(SuboptimalReport {
        unimodal_at,
        optimal_gap,
    })
}

fn displacements(seq: &GreedySequence) -> Vec<f64> {
    let s = seq.sorted_points();
    cells(s)
        .zip(s)
        .map(|(c, &a)| {
            seq.dist()
                .conditional_mean(c)
                .map_or(0.0, |m| (a - m).abs())
        })
        .collect()
}

/// `Σ_i |a_i − E[X | X ∈ W_i]|`.
pub fn stationarity_gap(seq: &GreedySequence) -> f64 {
    displacements(seq).iter().sum()
}

/// `‖X̂ − E[X | X̂]‖_r / e_{1+ρ}^{1+ρ}`, the numerator under the quantizer's
/// own weights.
pub fn quasi_stationarity_ratio(seq: &GreedySequence, r: f64, rho: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return domain(format!("rho must lie in [0, 1], got {rho}"));
    }
    if !(r > 0.0) {
        return domain(format!("r must be positive, got {r}"));
    }
    let num: f64 = displacements(seq)
        .iter()
        .zip(seq.weights())
        .map(|(d, p)| p * d.powf(r))
        .sum();
    let den = lr_distortion_of_grid(seq.dist(), seq.sorted_points(), 1.0 + rho);
    Ok(num.powf(1.0 / r) / den)
}
