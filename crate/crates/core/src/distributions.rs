//! Closed-form kernels for the one-dimensional laws: density, distribution
//! function, quantile and truncated moments over intervals.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// Tail probability cut used to bound the search region of unbounded laws.
pub const SEARCH_TAIL: f64 = 1e-9;

/// A one-dimensional probability law with closed-form moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Distribution1D {
    Normal { mean: f64, stdev: f64 },
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    Laplace { location: f64, scale: f64 },
}

/// A closed interval of the real line; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return domain(format!("invalid interval [{lo}, {hi}]"));
        }
        Ok(Interval { lo, hi })
    }

    pub fn real_line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }
}

/// Truncated moments `∫ (ξ - c)^k dP(ξ)` for `k = 0, 1, 2` over an interval.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
}

impl std::ops::Add for Moments {
    type Output = Moments;
    fn add(self, o: Moments) -> Moments {
        Moments {
            m0: self.m0 + o.m0,
            m1: self.m1 + o.m1,
            m2: self.m2 + o.m2,
        }
    }
}

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_381_868;

fn std_normal_pdf(z: f64) -> f64 {
    if z.is_infinite() {
        return 0.0;
    }
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Φ(z).
fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// 1 - Φ(z) without cancellation in the upper tail.
fn std_normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

/// Wichura's AS241 rational approximation of Φ⁻¹, accurate to about 1e-16.
fn ppnd16(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = (((((((2.509_080_928_730_122_672_7e3 * r + 3.343_057_558_358_812_810_5e4)
            * r
            + 6.726_577_092_700_870_085_3e4)
            * r
            + 4.592_195_393_154_987_145_7e4)
            * r
            + 1.373_169_376_550_946_112_5e4)
            * r
            + 1.971_590_950_306_551_442_7e3)
            * r
            + 1.331_416_678_917_843_774_5e2)
            * r
            + 3.387_132_872_796_366_608_0)
            * q;
        let den = ((((((5.226_495_278_852_854_561_0e3 * r + 2.872_908_573_572_194_267_4e4) * r
            + 3.930_789_580_009_271_061_0e4)
            * r
            + 2.121_379_430_158_659_586_7e4)
            * r
            + 5.394_196_021_424_751_107_7e3)
            * r
            + 6.871_870_074_920_579_083_0e2)
            * r
            + 4.231_333_070_160_091_125_2e1)
            * r
            + 1.0;
        return num / den;
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414_076_4e-4 * r + 2.272_384_498_926_918_458_33e-2)
            * r
            + 2.417_807_251_774_506_117_7e-1)
            * r
            + 1.270_458_252_452_368_382_58)
            * r
            + 3.647_848_324_763_204_605_04)
            * r
            + 5.769_497_221_460_691_405_5)
            * r
            + 4.630_337_846_156_545_295_9)
            * r
            + 1.423_437_110_749_683_577_34;
        let den = ((((((1.050_750_071_644_416_843_24e-9 * r + 5.475_938_084_995_344_946e-4)
            * r
            + 1.519_866_656_361_645_719_66e-2)
            * r
            + 1.481_039_764_274_800_745_9e-1)
            * r
            + 6.897_673_349_851_000_045_5e-1)
            * r
            + 1.676_384_830_183_803_849_4)
            * r
            + 2.053_191_626_637_758_821_87)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_132_65e-7 * r + 2.711_555_568_743_487_578_15e-5)
            * r
            + 1.242_660_947_388_078_438_6e-3)
            * r
            + 2.653_218_952_657_612_309_3e-2)
            * r
            + 2.965_605_718_285_048_912_3e-1)
            * r
            + 1.784_826_539_917_291_335_8)
            * r
            + 5.463_784_911_164_114_369_9)
            * r
            + 6.657_904_643_501_103_777_2;
        let den = ((((((2.044_263_103_389_939_785_64e-15 * r + 1.421_511_758_316_445_888_7e-7)
            * r
            + 1.846_318_317_510_054_681_8e-5)
            * r
            + 7.868_691_311_456_132_591e-4)
            * r
            + 1.487_536_129_085_061_485_25e-2)
            * r
            + 1.369_298_809_227_358_053_1e-1)
            * r
            + 5.998_322_065_558_879_376_9e-1)
            * r
            + 1.0;
        num / den
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

fn std_normal_quantile(p: f64) -> f64 {
    let mut z = ppnd16(p);
    // One Newton step on the better-conditioned tail.
    let dens = std_normal_pdf(z);
    if dens > 0.0 {
        if p < 0.5 {
            z -= (std_normal_cdf(z) - p) / dens;
        } else {
            z += (std_normal_sf(z) - (1.0 - p)) / dens;
        }
    }
    z
}

/// Standard normal mass of `[a, b]`, choosing the tail that avoids cancellation.
fn std_normal_mass(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        std_normal_sf(a) - std_normal_sf(b)
    } else if b <= 0.0 {
        std_normal_cdf(b) - std_normal_cdf(a)
    } else {
        1.0 - std_normal_cdf(a) - std_normal_sf(b)
    }
}

/// `P_k(x) = 1 - e^{-x} Σ_{j≤k} x^j / j!`, the regularized lower incomplete
/// gamma function of integer order `k + 1`.
fn reg_lower_gamma(k: u32, x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x <= 0.0 {
        return 0.0;
    }
    if k == 0 {
        return -(-x).exp_m1();
    }
    if x < 1.0 {
        let mut term = 1.0;
        for j in 1..=k {
            term *= x / j as f64;
        }
        let mut sum = 0.0;
        let mut j = k + 1;
        loop {
            term *= x / j as f64;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            j += 1;
        }
        sum * (-x).exp()
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..=k {
            term *= x / j as f64;
            sum += term;
        }
        1.0 - (-x).exp() * sum
    }
}

/// Moments of Exp(rate) restricted to `[a, b]` (`0 ≤ a ≤ b ≤ ∞`) about `c`.
fn exp_moments_about(rate: f64, a: f64, b: f64, c: f64) -> Moments {
    if b <= a {
        return Moments::default();
    }
    let x = if b.is_infinite() {
        f64::INFINITY
    } else {
        rate * (b - a)
    };
    let scale = (-rate * a).exp();
    let p0 = reg_lower_gamma(0, x);
    let j1 = reg_lower_gamma(1, x) / rate;
    let j2 = 2.0 * reg_lower_gamma(2, x) / (rate * rate);
    let t0 = a - c;
    Moments {
        m0: scale * p0,
        m1: scale * (t0 * p0 + j1),
        m2: scale * (t0 * t0 * p0 + 2.0 * t0 * j1 + j2),
    }
}

impl Distribution1D {
    pub fn normal(mean: f64, stdev: f64) -> Result<Self> {
        Self::Normal { mean, stdev }.validated()
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::Uniform { lo, hi }.validated()
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::Exponential { rate }.validated()
    }

    pub fn laplace(location: f64, scale: f64) -> Result<Self> {
        Self::Laplace { location, scale }.validated()
    }

    pub fn std_normal() -> Self {
        Self::Normal {
            mean: 0.0,
            stdev: 1.0,
        }
    }

    pub fn std_uniform() -> Self {
        Self::Uniform { lo: 0.0, hi: 1.0 }
    }

    pub fn std_exponential() -> Self {
        Self::Exponential { rate: 1.0 }
    }

    pub fn std_laplace() -> Self {
        Self::Laplace {
            location: 0.0,
            scale: 1.0,
        }
    }

    fn validated(self) -> Result<Self> {
        let ok = match self {
            Self::Normal { mean, stdev } => mean.is_finite() && stdev.is_finite() && stdev > 0.0,
            Self::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && hi > lo,
            Self::Exponential { rate } => rate.is_finite() && rate > 0.0,
            Self::Laplace { location, scale } => {
                location.is_finite() && scale.is_finite() && scale > 0.0
            }
        };
        if ok {
            Ok(self)
        } else {
            domain(format!("invalid parameters for {self}"))
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Normal { mean, stdev } => std_normal_pdf((x - mean) / stdev) / stdev,
            Self::Uniform { lo, hi } => {
                if (lo..=hi).contains(&x) {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Self::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Self::Laplace { location, scale } => {
                0.5 / scale * (-(x - location).abs() / scale).exp()
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Normal { mean, stdev } => std_normal_cdf((x - mean) / stdev),
            Self::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::Laplace { location, scale } => {
                let y = (x - location) / scale;
                if y < 0.0 {
                    0.5 * y.exp()
                } else {
                    1.0 - 0.5 * (-y).exp()
                }
            }
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("quantile level {p} outside (0, 1)"));
        }
        Ok(match *self {
            Self::Normal { mean, stdev } => mean + stdev * std_normal_quantile(p),
            Self::Uniform { lo, hi } => lo + p * (hi - lo),
            Self::Exponential { rate } => -(-p).ln_1p() / rate,
            Self::Laplace { location, scale } => {
                if p < 0.5 {
                    location + scale * (2.0 * p).ln()
                } else {
                    location - scale * (2.0 * (1.0 - p)).ln()
                }
            }
        })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Normal { mean, .. } => mean,
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Exponential { rate } => 1.0 / rate,
            Self::Laplace { location, .. } => location,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Self::Normal { stdev, .. } => stdev * stdev,
            Self::Uniform { lo, hi } => (hi - lo) * (hi - lo) / 12.0,
            Self::Exponential { rate } => 1.0 / (rate * rate),
            Self::Laplace { scale, .. } => 2.0 * scale * scale,
        }
    }

    /// The L^r-median: the mean for `r = 2`, the median for `r = 1`.
    pub fn lr_median(&self, r: u32) -> Result<f64> {
        match r {
            2 => Ok(self.mean()),
            1 => self.quantile(0.5),
            _ => domain(format!(
                "L^r-median only available for r in {{1, 2}}, got {r}"
            )),
        }
    }

    /// Closed convex hull of the support.
    pub fn support(&self) -> Interval {
        match *self {
            Self::Uniform { lo, hi } => Interval { lo, hi },
            Self::Exponential { .. } => Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            _ => Interval::real_line(),
        }
    }

    /// Bounded region searched when placing new points:
    /// `[quantile(1e-9), quantile(1 - 1e-9)]` for unbounded laws.
    pub fn search_range(&self) -> Interval {
        match *self {
            Self::Uniform { lo, hi } => Interval { lo, hi },
            _ => Interval {
                lo: self.quantile(SEARCH_TAIL).expect("valid level"),
                hi: self.quantile(1.0 - SEARCH_TAIL).expect("valid level"),
            },
        }
    }

    /// Raw truncated moments `(∫ 1, ∫ ξ, ∫ ξ²)` over `iv`.
    pub fn partial_moments(&self, iv: Interval) -> Moments {
        self.moments_about(iv, 0.0)
    }

    /// Probability mass of `iv`.
    pub fn mass(&self, iv: Interval) -> f64 {
        self.moments_about(iv, 0.0).m0
    }

    /// Truncated moments of `ξ - c` over `iv`. Working about `c` keeps the
    /// second moment accurate on short intervals far from the origin.
    pub fn moments_about(&self, iv: Interval, c: f64) -> Moments {
        let (a, b) = (iv.lo, iv.hi);
        if !(a < b) {
            return Moments::default();
        }
        match *self {
            Self::Normal { mean, stdev } => {
                let alpha = (a - mean) / stdev;
                let beta = (b - mean) / stdev;
                let zc = (c - mean) / stdev;
                let m0 = std_normal_mass(alpha, beta);
                let (pa, pb) = (std_normal_pdf(alpha), std_normal_pdf(beta));
                let apa = if alpha.is_infinite() { 0.0 } else { alpha * pa };
                let bpb = if beta.is_infinite() { 0.0 } else { beta * pb };
                let m1z = pa - pb;
                let m2z = m0 + apa - bpb;
                Moments {
                    m0,
                    m1: stdev * (m1z - zc * m0),
                    m2: stdev * stdev * (m2z - 2.0 * zc * m1z + zc * zc * m0),
                }
            }
            Self::Uniform { lo, hi } => {
                let (a, b) = (a.max(lo), b.min(hi));
                if !(a < b) {
                    return Moments::default();
                }
                let w = (b - a) / (hi - lo);
                let (ta, tb) = (a - c, b - c);
                Moments {
                    m0: w,
                    m1: w * 0.5 * (ta + tb),
                    m2: w * (ta * ta + ta * tb + tb * tb) / 3.0,
                }
            }
            Self::Exponential { rate } => exp_moments_about(rate, a.max(0.0), b, c),
            Self::Laplace { location, scale } => {
                let alpha = (a - location) / scale;
                let beta = (b - location) / scale;
                let cy = (c - location) / scale;
                let mut m = Moments::default();
                if beta > 0.0 {
                    let pos = exp_moments_about(1.0, alpha.max(0.0), beta, cy);
                    m = m + Moments {
                        m0: 0.5 * pos.m0,
                        m1: 0.5 * pos.m1,
                        m2: 0.5 * pos.m2,
                    };
                }
                if alpha < 0.0 {
                    let neg = exp_moments_about(1.0, (-beta).max(0.0), -alpha, -cy);
                    m = m + Moments {
                        m0: 0.5 * neg.m0,
                        m1: -0.5 * neg.m1,
                        m2: 0.5 * neg.m2,
                    };
                }
                Moments {
                    m0: m.m0,
                    m1: scale * m.m1,
                    m2: scale * scale * m.m2,
                }
            }
        }
    }

    /// `∫_iv (ξ - c)² dP(ξ)`.
    pub fn sq_deviation(&self, iv: Interval, c: f64) -> f64 {
        self.moments_about(iv, c).m2
    }

    /// `E[X | X ∈ iv]`, or `None` for a null interval.
    pub fn conditional_mean(&self, iv: Interval) -> Option<f64> {
        let centre = if iv.lo.is_finite() && iv.hi.is_finite() {
            0.5 * (iv.lo + iv.hi)
        } else if iv.lo.is_finite() {
            iv.lo
        } else if iv.hi.is_finite() {
            iv.hi
        } else {
            0.0
        };
        let m = self.moments_about(iv, centre);
        if m.m0 > 0.0 {
            Some(centre + m.m1 / m.m0)
        } else {
            None
        }
    }

    /// `E[f(X)]` by adaptive quadrature, split at the median and at 0 so
    /// that kinks there are panel ends.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        let sup = self.support();
        let mut cuts = vec![sup.lo, sup.hi];
        for c in [0.0, self.quantile(0.5).unwrap_or(0.0)] {
            if c > sup.lo && c < sup.hi {
                cuts.push(c);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let tol = Tolerance {
            abs: 1e-15,
            rel: 1e-12,
        };
        cuts.windows(2)
            .map(|w| integrate(|x| f(x) * self.pdf(x), w[0], w[1], tol))
            .sum()
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Self::Normal { .. } => "normal",
            Self::Uniform { .. } => "uniform",
            Self::Exponential { .. } => "exp",
            Self::Laplace { .. } => "laplace",
        }
    }
}

impl fmt::Display for Distribution1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.kind_name();
        match *self {
            Self::Normal { mean, stdev } => write!(f, "{name}:{mean:?},{stdev:?}"),
            Self::Uniform { lo, hi } => write!(f, "{name}:{lo:?},{hi:?}"),
            Self::Exponential { rate } => write!(f, "{name}:{rate:?}"),
            Self::Laplace { location, scale } => write!(f, "{name}:{location:?},{scale:?}"),
        }
    }
}

impl FromStr for Distribution1D {
    type Err = Error;

    /// Parses `normal:mu,sigma`, `uniform:lo,hi`, `exp:lambda` or
    /// `laplace:mu,b`. A bare name selects the standard parameters.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s, None),
        };
        let params: Vec<f64> = match args {
            Some(a) => a
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("`{t}` in `{s}`: {e}")))
                })
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let arity = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "`{name}` expects {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let dist = match (name.to_ascii_lowercase().as_str(), params.is_empty()) {
            ("normal" | "gauss" | "gaussian", true) => Self::std_normal(),
            ("uniform", true) => Self::std_uniform(),
            ("exp" | "exponential", true) => Self::std_exponential(),
            ("laplace", true) => Self::std_laplace(),
            ("normal" | "gauss" | "gaussian", false) => {
                arity(2)?;
                Self::normal(params[0], params[1])?
            }
            ("uniform", false) => {
                arity(2)?;
                Self::uniform(params[0], params[1])?
            }
            ("exp" | "exponential", false) => {
                arity(1)?;
                Self::exponential(params[0])?
            }
            ("laplace", false) => {
                arity(2)?;
                Self::laplace(params[0], params[1])?
            }
            _ => return Err(Error::Parse(format!("unknown distribution `{s}`"))),
        };
        Ok(dist)
    }
}

impl TryFrom<String> for Distribution1D {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Distribution1D> for String {
    fn from(d: Distribution1D) -> String {
        d.to_string()
    }
}

/// Black-Scholes style helpers need Φ directly.
pub fn normal_cdf(z: f64) -> f64 {
    std_normal_cdf(z)
}

pub fn normal_quantile(p: f64) -> Result<f64> {
    Distribution1D::std_normal().quantile(p)
}
