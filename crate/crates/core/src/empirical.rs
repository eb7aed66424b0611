//! Sample data model, empirical distribution function and order-statistic
//! helpers shared by the estimators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated sample of non-negative observations, kept sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Validates and sorts `raw`. Input order never affects downstream results.
    pub fn new(raw: &[f64]) -> Result<Self> {
        if let Some(index) = raw.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if let Some(index) = raw.iter().position(|&x| x < 0.0) {
            return Err(Error::NegativeValue {
                index,
                value: raw[index],
            });
        }
        if raw.len() < 2 {
            return Err(Error::TooFew {
                needed: 2,
                got: raw.len(),
            });
        }
        let mut values = raw.to_vec();
        values.sort_by(f64::total_cmp);
        // -0.0 sorts before 0.0 under total_cmp; normalise so ties stay ties.
        for v in &mut values {
            if *v == 0.0 {
                *v = 0.0;
            }
        }
        Ok(Sample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    /// Observations strictly above `t` (a suffix of the sorted values).
    pub fn above(&self, t: f64) -> &[f64] {
        let start = self.values.partition_point(|&x| x <= t);
        &self.values[start..]
    }

    /// Observations at or below `t` (a prefix of the sorted values).
    pub fn at_or_below(&self, t: f64) -> &[f64] {
        let end = self.values.partition_point(|&x| x <= t);
        &self.values[..end]
    }

    /// Lower median, `x_(ceil(n/2))`.
    pub fn lower_median(&self) -> f64 {
        self.values[(self.values.len() - 1) / 2]
    }

    /// Stable 64-bit FNV-1a digest of the sorted values, used to label reports.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in &self.values {
            for b in v.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}

/// Builds a [`Sample`] from raw observations.
pub fn make_sample(raw: &[f64]) -> Result<Sample> {
    Sample::new(raw)
}

/// Plotting-position rule mapping rank `i` of `n` to an ECDF level in (0, 1].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EcdfConvention {
    /// `(i - 0.5) / n`
    #[default]
    Hazen,
    /// `i / n`
    Naive,
    /// `i / (n + 1)`
    MeanRank,
}

impl EcdfConvention {
    /// Plotting position of the 1-based rank `i` in a sample of size `n`.
    pub fn position(self, i: usize, n: usize) -> f64 {
        let (i, n) = (i as f64, n as f64);
        match self {
            EcdfConvention::Hazen => (i - 0.5) / n,
            EcdfConvention::Naive => i / n,
            EcdfConvention::MeanRank => i / (n + 1.0),
        }
    }

    /// Complement `1 - u_i`, formed without cancellation.
    pub fn complement(self, i: usize, n: usize) -> f64 {
        let (i, n) = (i as f64, n as f64);
        match self {
            EcdfConvention::Hazen => (n - i + 0.5) / n,
            EcdfConvention::Naive => (n - i) / n,
            EcdfConvention::MeanRank => (n + 1.0 - i) / (n + 1.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EcdfConvention::Hazen => "hazen",
            EcdfConvention::Naive => "naive",
            EcdfConvention::MeanRank => "mean-rank",
        }
    }
}

impl fmt::Display for EcdfConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EcdfConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hazen" => Ok(EcdfConvention::Hazen),
            "naive" => Ok(EcdfConvention::Naive),
            "mean-rank" | "meanrank" | "weibull" => Ok(EcdfConvention::MeanRank),
            other => Err(Error::bad(format!("unknown ECDF convention '{other}'"))),
        }
    }
}

/// All plotting positions `u_1 < ... < u_n` for a sample of size `n`.
/// Tied observations get distinct consecutive positions.
pub fn plotting_positions(n: usize, conv: EcdfConvention) -> Vec<f64> {
    (1..=n).map(|i| conv.position(i, n)).collect()
}

/// Right-continuous step estimate of `F(x)`: the plotting position of the
/// largest order statistic `<= x`, or 0 below the sample.
pub fn ecdf_at(sample: &Sample, conv: EcdfConvention, x: f64) -> f64 {
    let k = sample.values.partition_point(|&v| v <= x);
    if k == 0 {
        0.0
    } else {
        conv.position(k, sample.len())
    }
}

/// A truncation threshold `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TruncationPoint(f64);

impl TruncationPoint {
    pub fn new(t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::bad(format!(
                "truncation point must be finite and non-negative, got {t}"
            )));
        }
        Ok(TruncationPoint(t))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Empirical mean residual life `m(t) = mean(x_i - t | x_i > t)`.
pub fn conditional_mean_above(sample: &Sample, t: f64) -> Result<f64> {
    let tail = sample.above(t);
    if tail.is_empty() {
        return Err(Error::EmptyTail { t });
    }
    Ok(tail.iter().map(|x| x - t).sum::<f64>() / tail.len() as f64)
}

/// Empirical mean past life `r(t) = mean(t - x_i | x_i <= t)`.
pub fn conditional_mean_below(sample: &Sample, t: f64) -> Result<f64> {
    let head = sample.at_or_below(t);
    if head.is_empty() {
        return Err(Error::EmptyTail { t });
    }
    Ok(head.iter().map(|x| t - x).sum::<f64>() / head.len() as f64)
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// U-statistic mean of `min(y_i, y_j)` over unordered pairs of a sorted slice.
pub(crate) fn pairwise_min_mean(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    let pairs = (m * (m - 1)) as f64 / 2.0;
    let s: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, y)| y * (m - 1 - i) as f64)
        .sum();
    s / pairs
}

/// U-statistic mean of `max(y_i, y_j)` over unordered pairs of a sorted slice.
pub(crate) fn pairwise_max_mean(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    let pairs = (m * (m - 1)) as f64 / 2.0;
    let s: f64 = sorted.iter().enumerate().map(|(i, y)| y * i as f64).sum();
    s / pairs
}

/// Weights `C(n-i, k-1) / C(n, k)`, i = 1..n, of the unbiased estimator of
/// `E min(X_1..X_k)`; mirrored they give the weights for the maximum.
pub(crate) fn min_of_k_weights(n: usize, k: usize) -> Vec<f64> {
    debug_assert!(k >= 1 && n >= k);
    (1..=n)
        .map(|i| {
            if n - i < k - 1 {
                return 0.0;
            }
            // C(n-i, k-1)/C(n,k) = (k/n) * prod_{j=1}^{k-1} (n-i-j+1)/(n-j)
            let mut w = k as f64 / n as f64;
            for j in 1..k {
                w *= (n - i + 1 - j) as f64 / (n - j) as f64;
            }
            w
        })
        .collect()
}

/// Integral over `[0, inf)` of `x^power * g(F_n(x))` for the step ECDF
/// `F_n(x) = #{x_i <= x} / n`. `g(1)` must be 0 so the integral is finite.
pub fn ecdf_integral(sample: &Sample, power: u32, g: impl Fn(f64) -> f64) -> f64 {
    let n = sample.len();
    let xs = sample.values();
    let antiderivative = |x: f64| x.powi(power as i32 + 1) / f64::from(power + 1);
    let mut total = 0.0;
    let mut left = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        if x > left {
            total += g(i as f64 / n as f64) * (antiderivative(x) - antiderivative(left));
            left = x;
        }
    }
    total
}
