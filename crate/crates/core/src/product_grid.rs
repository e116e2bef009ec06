//! Greedy product quantization of product laws and Box-Müller Gaussian grids.
//!
//! A product grid is the tensor product of one greedy sequence per
//! coordinate. Each marginal may be stretched by a constant factor, so that
//! `U(0, 2π)` and `Exp(1/2)` reuse the `U(0,1)` and `Exp(1)` sequences. For
//! the quadratic error and the Euclidean norm the squared error of the
//! product grid is the sum of the marginal squared errors.

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution1D;
use crate::error::{domain, Error, Result};
use crate::greedy1d::{GreedySequence, InsertionStep};

const TIE_REL: f64 = 1e-13;

/// A function on `ℝ^d` that knows its dimension.
pub trait Integrand {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
}

/// Attaches a dimension to a closure.
#[derive(Debug, Clone, Copy)]
pub struct WithDim<F>(pub usize, pub F);

impl<F: Fn(&[f64]) -> f64> Integrand for WithDim<F> {
    fn dim(&self) -> usize {
        self.0
    }

    fn eval(&self, x: &[f64]) -> f64 {
        (self.1)(x)
    }
}

/// Tensor product of scaled greedy sequences.
#[derive(Debug, Clone)]
pub struct ProductGrid {
    marginals: Vec<GreedySequence>,
    scales: Vec<f64>,
    history: Vec<usize>,
}

impl ProductGrid {
    /// One-point grid per marginal, unit scales.
    pub fn new(laws: &[Distribution1D]) -> Result<Self> {
        Self::with_scales(laws, &vec![1.0; laws.len()])
    }

    /// Marginal `k` is `scales[k] · X_k` with `X_k` distributed as `laws[k]`.
    pub fn with_scales(laws: &[Distribution1D], scales: &[f64]) -> Result<Self> {
        if laws.is_empty() {
            return domain("a product grid needs at least one marginal");
        }
        if laws.len() != scales.len() {
            return Err(Error::DimensionMismatch {
                expected: laws.len(),
                got: scales.len(),
            });
        }
        if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return domain("scales must be positive and finite");
        }
        Ok(ProductGrid {
            marginals: laws.iter().map(|&d| GreedySequence::new(d)).collect(),
            scales: scales.to_vec(),
            history: Vec::new(),
        })
    }

    /// Wraps already built sequences. The history is left empty.
    pub fn from_sequences(marginals: Vec<GreedySequence>, scales: Vec<f64>) -> Result<Self> {
        if marginals.is_empty() || marginals.len() != scales.len() {
            return Err(Error::DimensionMismatch {
                expected: marginals.len(),
                got: scales.len(),
            });
        }
        Ok(ProductGrid {
            marginals,
            scales,
            history: Vec::new(),
        })
    }

    /// Attaches a refinement history; each marginal must have been grown
    /// exactly as often as the history says.
    pub fn with_history(mut self, history: Vec<usize>) -> Result<Self> {
        let mut counts = vec![1usize; self.dim()];
        for &k in &history {
            *counts.get_mut(k).ok_or(Error::DimensionMismatch {
                expected: self.dim(),
                got: k + 1,
            })? += 1;
        }
        if counts != self.sizes() {
            return domain("history does not match the marginal sizes");
        }
        self.history = history;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.marginals.len()
    }

    pub fn marginals(&self) -> &[GreedySequence] {
        &self.marginals
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Refined dimension of each grow, in order.
    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.marginals.iter().map(GreedySequence::len).collect()
    }

    pub fn len(&self) -> usize {
        self.marginals.iter().map(GreedySequence::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Squared quadratic error of marginal `k`, scale included.
    pub fn marginal_error_sq(&self, k: usize) -> f64 {
        self.scales[k] * self.scales[k] * self.marginals[k].error_sq()
    }

    /// `Σ_k e_2(marginal_k)²`.
    pub fn product_error_sq(&self) -> f64 {
        (0..self.dim()).map(|k| self.marginal_error_sq(k)).sum()
    }

    /// Product error if marginal `k` received its next point.
    pub fn lookahead_error_sq(&self, k: usize) -> f64 {
        let s2 = self.scales[k] * self.scales[k];
        self.product_error_sq() - self.marginal_error_sq(k)
            + s2 * self.marginals[k].peek_next_error_sq()
    }

    fn identical_marginals(&self) -> bool {
        let d0 = self.marginals[0].dist();
        self.marginals
            .iter()
            .zip(&self.scales)
            .all(|(m, &s)| m.dist() == d0 && s == self.scales[0])
    }

    /// Dimension the next grow refines.
    ///
    /// Identical marginals are refined in turn, the least refined first.
    /// Otherwise the dimension whose next point gives the smallest product
    /// error wins, ties going to the smallest index.
    pub fn choose_refinement(&self) -> usize {
        if self.identical_marginals() {
            let sizes = self.sizes();
            let min = *sizes.iter().min().expect("non-empty");
            return sizes.iter().position(|&s| s == min).expect("non-empty");
        }
        let mut best = 0;
        let mut best_e = self.lookahead_error_sq(0);
        for k in 1..self.dim() {
            let e = self.lookahead_error_sq(k);
            if e < best_e - TIE_REL * best_e.abs().max(e.abs()) {
                best = k;
                best_e = e;
            }
        }
        best
    }

    /// Adds one point to the chosen marginal and returns the refined
    /// dimension with its insertion record.
    pub fn grow(&mut self) -> (usize, InsertionStep) {
        let k = self.choose_refinement();
        (k, self.grow_dim(k))
    }

    /// Adds one point to marginal `k`, bypassing the refinement rule.
    pub fn grow_dim(&mut self, k: usize) -> InsertionStep {
        let step = self.marginals[k].insert_next();
        self.history.push(k);
        step
    }

    /// Grows until the grid holds at least `n` points.
    pub fn grow_to(&mut self, n: usize) {
        while self.len() < n {
            self.grow();
        }
    }

    /// Sorted, scaled points of marginal `k`.
    pub fn marginal_points(&self, k: usize) -> Vec<f64> {
        self.marginals[k]
            .sorted_points()
            .iter()
            .map(|&a| self.scales[k] * a)
            .collect()
    }

    /// Product weights, row-major over the sorted marginals (the last index
    /// varies fastest).
    pub fn product_weights(&self) -> Vec<f64> {
        let mut out = vec![1.0];
        for m in &self.marginals {
            out = out
                .iter()
                .flat_map(|&w| m.weights().iter().map(move |&p| w * p))
                .collect();
        }
        out
    }

    /// Tensor points in the same order as [`product_weights`](Self::product_weights).
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for k in 0..self.dim() {
            let pts = self.marginal_points(k);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    pts.iter().map(move |&a| {
                        let mut p = prefix.clone();
                        p.push(a);
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn check_dim(&self, f: &impl Integrand) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: f.dim(),
            });
        }
        Ok(())
    }

    /// Full product cubature `Σ_j p_j f(a_j)`.
    pub fn integrate_full(&self, f: &impl Integrand) -> Result<f64> {
        self.check_dim(f)?;
        let pts: Vec<Vec<f64>> = (0..self.dim()).map(|k| self.marginal_points(k)).collect();
        let mut x = vec![0.0; self.dim()];
        let mut total = 0.0;
        for_each_index(&self.sizes(), |idx| {
            let mut w = 1.0;
            for (k, &j) in idx.iter().enumerate() {
                x[k] = pts[k][j];
                w *= self.marginals[k].weights()[j];
            }
            total += w * f.eval(&x);
        });
        Ok(total)
    }

    /// Grid image in `ℝ^d` with product weights.
    pub fn to_gaussian(&self) -> GaussianGrid {
        GaussianGrid {
            dim: self.dim(),
            points: self.points(),
            weights: self.product_weights(),
            provenance: GridProvenance::Product,
        }
    }
}

/// Calls `visit` on every multi-index below `sizes`, last index fastest.
fn for_each_index(sizes: &[usize], mut visit: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        visit(&idx);
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Running value of the recursive product cubature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductCubatureState {
    /// Grid size the value refers to.
    pub n: usize,
    pub value: f64,
}

impl ProductCubatureState {
    /// Full cubature on the current grid, usually the one-point grid.
    pub fn start(grid: &ProductGrid, f: &impl Integrand) -> Result<Self> {
        Ok(ProductCubatureState {
            n: grid.len(),
            value: grid.integrate_full(f)?,
        })
    }

    /// Replays a grow of dimension `dim` recorded as `step`, `grid` being the
    /// grid right after that grow. The other marginals did not move, so their
    /// points and weights are those of the previous level. Costs
    /// `3 · Π_{k≠dim} n_k` evaluations of `f`, fewer at the ends.
    pub fn advance(
        &mut self,
        grid: &ProductGrid,
        dim: usize,
        step: &InsertionStep,
        f: &impl Integrand,
    ) -> Result<()> {
        grid.check_dim(f)?;
        if dim >= grid.dim() {
            return domain(format!(
                "dimension {dim} out of range for a {}-d grid",
                grid.dim()
            ));
        }
        let m = &grid.marginals[dim];
        let s = grid.scales[dim];
        let new_pt = s * m.points()[m.len() - 1];
        let left = step.left_idx.map(|l| (s * m.points()[l], step.p_minus));
        let right = step.right_idx.map(|r| (s * m.points()[r], step.p_plus));

        let others: Vec<usize> = (0..grid.dim()).filter(|&k| k != dim).collect();
        let pts: Vec<Vec<f64>> = others.iter().map(|&k| grid.marginal_points(k)).collect();
        let sizes: Vec<usize> = others.iter().map(|&k| grid.marginals[k].len()).collect();
        let mut x = vec![0.0; grid.dim()];
        let mut delta = 0.0;
        for_each_index(&sizes, |idx| {
            let mut w = 1.0;
            for (o, (&k, &j)) in others.iter().zip(idx).enumerate() {
                x[k] = pts[o][j];
                w *= grid.marginals[k].weights()[j];
            }
            x[dim] = new_pt;
            let at_new = f.eval(&x);
            let mut term = 0.0;
            for &(a, p) in left.iter().chain(right.iter()) {
                x[dim] = a;
                term += p * (f.eval(&x) - at_new);
            }
            delta += w * term;
        });
        self.value -= delta;
        self.n = grid.len();
        Ok(())
    }
}

/// Origin of a Gaussian grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridProvenance {
    Product,
    BoxMuller,
}

/// Weighted point set in `ℝ^d` meant to integrate against `N(0, I_d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianGrid {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub provenance: GridProvenance,
}

impl GaussianGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Σ_j p_j f(z_j)`.
    pub fn integrate(&self, f: &impl Integrand) -> Result<f64> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: f.dim(),
            });
        }
        Ok(self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(z, &w)| w * f.eval(z))
            .sum())
    }
}

/// Box-Müller image of the product of exponential and uniform sequences.
///
/// With `E ~ Exp(1)` and `U ~ U(0,1)`, `(√(2E) cos 2πU, √(2E) sin 2πU)` is a
/// standard Gaussian pair. For `d = 2` the pre-image is `ε ⊗ u`; for `d = 3`
/// it is `ε ⊗ u ⊗ ε' ⊗ u'` and only the cosine of the second pair is kept.
/// Weights are the product weights of the pre-image cells.
pub fn box_muller_grid(
    exp_seqs: &[GreedySequence],
    unif_seqs: &[GreedySequence],
    d: usize,
) -> Result<GaussianGrid> {
    let pairs = match d {
        2 => 1,
        3 => 2,
        _ => return domain(format!("Box-Müller grids exist for d = 2 or 3, got {d}")),
    };
    if exp_seqs.len() != pairs || unif_seqs.len() != pairs {
        return domain(format!(
            "d = {d} needs {pairs} exponential and {pairs} uniform sequences, got {} and {}",
            exp_seqs.len(),
            unif_seqs.len()
        ));
    }
    for s in exp_seqs {
        if *s.dist() != Distribution1D::std_exponential() {
            return domain(format!("expected Exp(1) sequences, got {}", s.dist()));
        }
    }
    for s in unif_seqs {
        if *s.dist() != Distribution1D::std_uniform() {
            return domain(format!("expected U(0,1) sequences, got {}", s.dist()));
        }
    }

    let pair = |e: &GreedySequence, u: &GreedySequence| {
        let mut out = Vec::with_capacity(e.len() * u.len());
        for (&ei, &pe) in e.sorted_points().iter().zip(e.weights()) {
            let r = (2.0 * ei).sqrt();
            for (&uj, &pu) in u.sorted_points().iter().zip(u.weights()) {
                let (s, c) = (2.0 * std::f64::consts::PI * uj).sin_cos();
                out.push((r * c, r * s, pe * pu));
            }
        }
        out
    };

    let first = pair(&exp_seqs[0], &unif_seqs[0]);
    let (points, weights) = if d == 2 {
        first.iter().map(|&(z1, z2, w)| (vec![z1, z2], w)).unzip()
    } else {
        let second = pair(&exp_seqs[1], &unif_seqs[1]);
        first
            .iter()
            .flat_map(|&(z1, z2, w)| {
                second
                    .iter()
                    .map(move |&(z3, _, w2)| (vec![z1, z2, z3], w * w2))
            })
            .unzip()
    };
    Ok(GaussianGrid {
        dim: d,
        points,
        weights,
        provenance: GridProvenance::BoxMuller,
    })
}

/// Pre-image grid for Box-Müller: `(2E, 2πU)` pairs, grown by error
/// minimisation with the squared-error factors 4 and 4π².
pub fn box_muller_preimage(d: usize) -> Result<ProductGrid> {
    let pair = [
        Distribution1D::std_exponential(),
        Distribution1D::std_uniform(),
    ];
    let scales = [2.0, 2.0 * std::f64::consts::PI];
    match d {
        2 => ProductGrid::with_scales(&pair, &scales),
        3 => ProductGrid::with_scales(&[pair, pair].concat(), &[scales, scales].concat()),
        _ => domain(format!("Box-Müller grids exist for d = 2 or 3, got {d}")),
    }
}

/// Box-Müller grid of a grown pre-image from [`box_muller_preimage`].
pub fn box_muller_from_preimage(pre: &ProductGrid) -> Result<GaussianGrid> {
    let d = match pre.dim() {
        2 => 2,
        4 => 3,
        k => {
            return domain(format!(
                "a Box-Müller pre-image has 2 or 4 marginals, got {k}"
            ))
        }
    };
    let m = pre.marginals();
    let exps: Vec<GreedySequence> = m.iter().step_by(2).cloned().collect();
    let unifs: Vec<GreedySequence> = m.iter().skip(1).step_by(2).cloned().collect();
    box_muller_grid(&exps, &unifs, d)
}
