//! Black-Scholes benchmarks for quantization cubature: a European call on
//! one asset and a call on a basket of three correlated assets, with a
//! control-variate Monte Carlo reference.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distributions::{normal_cdf, normal_quantile, Distribution1D};
use crate::error::{domain, Error, Result};
use crate::greedy1d::{voronoi_weights, GreedySequence};
use crate::product_grid::{GaussianGrid, Integrand, ProductCubatureState, ProductGrid, WithDim};

/// Single-asset Black-Scholes parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsParams {
    pub spot: f64,
    pub strike: f64,
    pub rate: f64,
    pub vol: f64,
    pub maturity: f64,
}

impl BsParams {
    pub fn new(spot: f64, strike: f64, rate: f64, vol: f64, maturity: f64) -> Result<Self> {
        for (name, v) in [
            ("spot", spot),
            ("strike", strike),
            ("vol", vol),
            ("maturity", maturity),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be positive, got {v}"));
            }
        }
        if !rate.is_finite() {
            return domain("rate must be finite");
        }
        Ok(BsParams {
            spot,
            strike,
            rate,
            vol,
            maturity,
        })
    }

    /// `x_0 = 10, K = 9, r = 0.06, σ = 0.1, T = 1`.
    pub fn reference_call() -> Self {
        BsParams {
            spot: 10.0,
            strike: 9.0,
            rate: 0.06,
            vol: 0.1,
            maturity: 1.0,
        }
    }

    /// Terminal price for a standard normal draw `z`.
    pub fn terminal(&self, z: f64) -> f64 {
        let t = self.maturity;
        self.spot * ((self.rate - 0.5 * self.vol * self.vol) * t + self.vol * t.sqrt() * z).exp()
    }

    /// Discounted call payoff as a function of `z`.
    pub fn discounted_payoff(&self, z: f64) -> f64 {
        (-self.rate * self.maturity).exp() * (self.terminal(z) - self.strike).max(0.0)
    }
}

/// Closed-form discounted Black-Scholes call price.
pub fn bs_call_closed_form(spot: f64, strike: f64, rate: f64, vol: f64, maturity: f64) -> f64 {
    let sd = vol * maturity.sqrt();
    let d1 = ((spot / strike).ln() + (rate + 0.5 * vol * vol) * maturity) / sd;
    let d2 = d1 - sd;
    spot * normal_cdf(d1) - strike * (-rate * maturity).exp() * normal_cdf(d2)
}

/// `Σ w_i e^{−rT} (X_T(z_i) − K)_+` over `Z`-space abscissae.
pub fn price_call_1d(points: &[f64], weights: &[f64], params: &BsParams) -> Result<f64> {
    if points.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: weights.len(),
        });
    }
    Ok(points
        .iter()
        .zip(weights)
        .map(|(&z, &w)| w * params.discounted_payoff(z))
        .sum())
}

/// Radical-inverse sequence `ξ_1, …, ξ_n` in base `base`.
pub fn vdc_points(n: usize, base: u32) -> Result<Vec<f64>> {
    if base < 2 {
        return domain(format!("base must be at least 2, got {base}"));
    }
    let b = base as u64;
    Ok((1..=n as u64)
        .map(|mut k| {
            let (mut x, mut scale) = (0.0, 1.0 / b as f64);
            while k > 0 {
                x += (k % b) as f64 * scale;
                k /= b;
                scale /= b as f64;
            }
            x
        })
        .collect())
}

/// Quadrature rule for the one-dimensional call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallRule {
    /// Greedy `N(0,1)` sequence with its Voronoi weights.
    Greedy,
    /// Greedy `U(0,1)` sequence mapped by the normal quantile, with the
    /// `U(0,1)` Voronoi weights.
    GreedyUniform,
    /// Van der Corput points mapped by the normal quantile, with Voronoi
    /// weights of the mapped points under `N(0,1)`.
    VdcWeighted,
    /// Van der Corput points mapped by the normal quantile, weights `1/n`.
    VdcUniform,
}

/// Sorted abscissae in `Z`-space and weights of a rule with `n` points.
pub fn call_rule(rule: CallRule, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return domain("a rule needs at least one point");
    }
    let normal = Distribution1D::std_normal();
    Ok(match rule {
        CallRule::Greedy => {
            let seq = GreedySequence::build(normal, n);
            (seq.sorted_points().to_vec(), seq.weights().to_vec())
        }
        CallRule::GreedyUniform => {
            let seq = GreedySequence::build(Distribution1D::std_uniform(), n);
            let z = seq
                .sorted_points()
                .iter()
                .map(|&u| normal_quantile(u))
                .collect::<Result<_>>()?;
            (z, seq.weights().to_vec())
        }
        CallRule::VdcWeighted | CallRule::VdcUniform => {
            let mut z = vdc_points(n, 2)?
                .into_iter()
                .map(normal_quantile)
                .collect::<Result<Vec<_>>>()?;
            z.sort_by(f64::total_cmp);
            let w = if rule == CallRule::VdcWeighted {
                voronoi_weights(&normal, &z)
            } else {
                vec![1.0 / n as f64; n]
            };
            (z, w)
        }
    })
}

/// Three-asset correlated Black-Scholes basket.
#[derive(Debug, Clone, PartialEq)]
pub struct BasketParams {
    pub spots: Vec<f64>,
    pub strike: f64,
    pub rate: f64,
    pub vols: Vec<f64>,
    pub maturity: f64,
    pub weights: Vec<f64>,
    pub corr: Vec<Vec<f64>>,
    chol: Vec<Vec<f64>>,
}

impl BasketParams {
    pub fn new(
        spots: Vec<f64>,
        strike: f64,
        rate: f64,
        vols: Vec<f64>,
        maturity: f64,
        weights: Vec<f64>,
        corr: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let d = spots.len();
        for len in [vols.len(), weights.len(), corr.len()] {
            if len != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: len,
                });
            }
        }
        if spots
            .iter()
            .chain(&vols)
            .chain(&weights)
            .any(|&v| !(v.is_finite() && v > 0.0))
        {
            return domain("spots, vols and weights must be positive");
        }
        if (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return domain("basket weights must sum to 1");
        }
        if !(strike >= 0.0 && maturity > 0.0 && rate.is_finite()) {
            return domain("strike must be non-negative and maturity positive");
        }
        for (i, row) in corr.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            if row[i] != 1.0 || (0..d).any(|j| row[j] != corr[j][i] || row[j].abs() > 1.0) {
                return domain("correlation must be symmetric with unit diagonal");
            }
        }
        let chol = cholesky(&corr)?;
        Ok(BasketParams {
            spots,
            strike,
            rate,
            vols,
            maturity,
            weights,
            corr,
            chol,
        })
    }

    /// `X_0 = 100, K = 100, r = 0.1, σ_i = 0.3, T = 1, w_i = 1/3`,
    /// `ρ_12 = ρ_13 = 0.5`, `ρ_23 = 0`.
    pub fn reference_basket() -> Self {
        let corr = vec![
            vec![1.0, 0.5, 0.5],
            vec![0.5, 1.0, 0.0],
            vec![0.5, 0.0, 1.0],
        ];
        Self::new(
            vec![100.0; 3],
            100.0,
            0.1,
            vec![0.3; 3],
            1.0,
            vec![1.0 / 3.0; 3],
            corr,
        )
        .expect("valid reference parameters")
    }

    pub fn with_strike(&self, strike: f64) -> Result<Self> {
        let p = self.clone();
        Self::new(
            p.spots, strike, p.rate, p.vols, p.maturity, p.weights, p.corr,
        )
    }

    pub fn dim(&self) -> usize {
        self.spots.len()
    }

    /// Lower Cholesky factor of the correlation matrix.
    pub fn cholesky(&self) -> &[Vec<f64>] {
        &self.chol
    }

    /// Terminal prices from iid standard normals, `σ_ij = σ_i L_ij`.
    fn terminals(&self, z: &[f64], out: &mut [f64]) {
        let t = self.maturity;
        for (i, x) in out.iter_mut().enumerate() {
            let w: f64 = self.chol[i][..=i].iter().zip(z).map(|(l, z)| l * z).sum();
            let s = self.vols[i];
            *x = self.spots[i] * ((self.rate - 0.5 * s * s) * t + s * t.sqrt() * w).exp();
        }
    }

    /// Discounted basket payoff and geometric control payoff.
    fn payoffs(&self, z: &[f64]) -> (f64, f64) {
        let mut x = [0.0; 8];
        let x = &mut x[..self.dim()];
        self.terminals(z, x);
        let arith: f64 = self.weights.iter().zip(x.iter()).map(|(w, x)| w * x).sum();
        let geo: f64 = self
            .weights
            .iter()
            .zip(x.iter())
            .map(|(w, x)| w * x.ln())
            .sum::<f64>()
            .exp();
        let df = (-self.rate * self.maturity).exp();
        (
            df * (arith - self.strike).max(0.0),
            df * (geo - self.strike).max(0.0),
        )
    }

    /// Discounted basket payoff as an integrand on `ℝ^d`.
    pub fn discounted_payoff(&self) -> impl Integrand + '_ {
        WithDim(self.dim(), move |z: &[f64]| self.payoffs(z).0)
    }

    /// `e^{−rT} E[(Π X_i^{w_i} − K)_+]`, which is a Black-Scholes call.
    pub fn control_variate_price(&self) -> f64 {
        let d = self.dim();
        let t = self.maturity;
        let mut v2 = 0.0;
        for i in 0..d {
            for j in 0..d {
                v2 += self.weights[i]
                    * self.weights[j]
                    * self.vols[i]
                    * self.vols[j]
                    * self.corr[i][j];
            }
        }
        let wsig2: f64 = self
            .weights
            .iter()
            .zip(&self.vols)
            .map(|(w, s)| w * s * s)
            .sum();
        let log_spot: f64 = self
            .weights
            .iter()
            .zip(&self.spots)
            .map(|(w, x)| w * x.ln())
            .sum();
        let spot = (log_spot - 0.5 * t * (wsig2 - v2)).exp();
        if self.strike == 0.0 {
            return spot;
        }
        bs_call_closed_form(spot, self.strike, self.rate, v2.sqrt(), t)
    }

    /// `Σ w_i X_{i,0}`, the price at zero strike.
    pub fn forward_value(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.spots)
            .map(|(w, x)| w * x)
            .sum()
    }
}

fn cholesky(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d < 0.0 {
                    return domain("correlation matrix is not positive semidefinite");
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = if l[j][j] > 0.0 {
                    (a[i][j] - s) / l[j][j]
                } else {
                    0.0
                };
            }
        }
    }
    Ok(l)
}

/// `Σ_j p_j e^{−rT} h_T(X(z_j))` over a Gaussian grid.
pub fn price_basket_quant(grid: &GaussianGrid, params: &BasketParams) -> Result<f64> {
    grid.integrate(&params.discounted_payoff())
}

/// Basket price at one product-grid level, full sum and recursive update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductLevel {
    pub n: usize,
    pub full: f64,
    pub recursive: f64,
}

/// Grows a product grid of `N(0,1)` marginals to at least `n_max` points,
/// pricing the basket at every level both ways. `on_level` sees each level
/// together with the grid.
pub fn price_basket_product_levels(
    params: &BasketParams,
    n_max: usize,
    mut on_level: impl FnMut(&ProductLevel, &ProductGrid),
) -> Result<Vec<ProductLevel>> {
    let f = params.discounted_payoff();
    let mut grid = ProductGrid::new(&vec![Distribution1D::std_normal(); params.dim()])?;
    let mut state = ProductCubatureState::start(&grid, &f)?;
    let mut levels = vec![ProductLevel {
        n: 1,
        full: state.value,
        recursive: state.value,
    }];
    on_level(&levels[0], &grid);
    while grid.len() < n_max {
        let (k, step) = grid.grow();
        state.advance(&grid, k, &step, &f)?;
        let level = ProductLevel {
            n: grid.len(),
            full: grid.integrate_full(&f)?,
            recursive: state.value,
        };
        on_level(&level, &grid);
        levels.push(level);
    }
    Ok(levels)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub price: f64,
    pub stderr: f64,
    pub samples: usize,
}

const MC_BATCH: usize = 1 << 16;

/// Uniform in the open interval (0,1) from 53 random bits.
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Plain Monte Carlo of the basket, with or without the geometric control
/// variate. Batch `b` of `2^16` samples draws from ChaCha8 seeded with
/// `seed` on stream `b`; batches are summed in index order, so the result
/// is reproducible for a given seed.
pub fn price_basket_mc(
    params: &BasketParams,
    m: usize,
    seed: u64,
    control: bool,
) -> Result<McEstimate> {
    if m == 0 {
        return domain("Monte Carlo needs at least one sample");
    }
    let d = params.dim();
    let batches = m.div_ceil(MC_BATCH);
    let sums: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = MC_BATCH.min(m - b * MC_BATCH);
            let mut z = vec![0.0; d];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for zi in z.iter_mut() {
                    *zi = normal_quantile(open_uniform(&mut rng)).expect("p in (0,1)");
                }
                let (h, k) = params.payoffs(&z);
                let y = if control { h - k } else { h };
                s += y;
                s2 += y * y;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums
        .iter()
        .fold((0.0, 0.0), |(a, b), (s, s2)| (a + s, b + s2));
    let mf = m as f64;
    let mean = s / mf;
    let var = if m > 1 {
        ((s2 - mf * mean * mean) / (mf - 1.0)).max(0.0)
    } else {
        0.0
    };
    let offset = if control {
        params.control_variate_price()
    } else {
        0.0
    };
    Ok(McEstimate {
        price: mean + offset,
        stderr: (var / mf).sqrt(),
        samples: m,
    })
}

/// Control-variate Monte Carlo reference price `(price, stderr)`.
pub fn price_basket_mc_cv(params: &BasketParams, m: usize, seed: u64) -> Result<(f64, f64)> {
    let est = price_basket_mc(params, m, seed, true)?;
    Ok((est.price, est.stderr))
}
