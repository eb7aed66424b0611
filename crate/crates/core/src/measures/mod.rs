//! Sample estimators for every entropy, extropy and Gini-type measure.
//!
//! Population counterparts live in [`crate::models`]; both are driven by the
//! same [`MeasureSpec`].
//!
//! Naming follows the defining integrals:
//!
//! | measure | definition | PWM form |
//! |---------|------------|----------|
//! | `crj`   | `-½∫F̄²`        | `-M_{1,0,1}` |
//! | `cj`    | `-½∫(1-F²)`    | `-M_{1,1,0}` |
//! | `ce`    | `-½E min(X₁,X₂)` | `-M_{1,0,1}` |
//! | `crjw`  | `-½∫x(1-F²)`   | `-½M_{2,1,0}` |
//! | `wce`   | `-½∫xF̄²`       | `-½M_{2,0,1}` |

mod spec;

use std::fmt;

use crate::empirical::{
    self, conditional_mean_above, conditional_mean_below, min_of_k_weights, pairwise_max_mean,
    pairwise_min_mean, EcdfConvention, Sample,
};
use crate::error::{Error, Result};
use crate::pwm::{pwm_estimate, pwm_unbiased_alpha, pwm_unbiased_beta, PwmIndex, PwmRoute};

pub use spec::{MeasureParams, MeasureSpec, Phi, Weight, MEASURE_NAMES};

/// How a sample estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorRoute {
    /// Exact U-statistic over pairs.
    UStatistic,
    /// Unbiased order-statistic weights over k-subsets.
    OrderStatistic,
    /// Unbiased PWM estimators `b_r` / `a_s`.
    UnbiasedPwm,
    /// Plotting-position plug-in; biased in small samples.
    PluginPwm,
    /// Literal plug-in of the ECDF into a double sum.
    EcdfPlugin,
    /// Empirical conditional mean.
    ConditionalMean,
    /// Derived from other estimates through an exact identity.
    Identity,
}

impl EstimatorRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorRoute::UStatistic => "u-statistic",
            EstimatorRoute::OrderStatistic => "order-statistic",
            EstimatorRoute::UnbiasedPwm => "unbiased-pwm",
            EstimatorRoute::PluginPwm => "plugin-pwm",
            EstimatorRoute::EcdfPlugin => "ecdf-plugin",
            EstimatorRoute::ConditionalMean => "conditional-mean",
            EstimatorRoute::Identity => "identity",
        }
    }
}

impl fmt::Display for EstimatorRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<PwmRoute> for EstimatorRoute {
    fn from(r: PwmRoute) -> Self {
        match r {
            PwmRoute::Unbiased => EstimatorRoute::UnbiasedPwm,
            PwmRoute::Plugin => EstimatorRoute::PluginPwm,
        }
    }
}

fn combine(a: PwmRoute, b: PwmRoute) -> PwmRoute {
    if a == PwmRoute::Unbiased && b == PwmRoute::Unbiased {
        PwmRoute::Unbiased
    } else {
        PwmRoute::Plugin
    }
}

/// A sample estimate together with the route that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub route: EstimatorRoute,
}

impl Estimate {
    fn new(value: f64, route: impl Into<EstimatorRoute>) -> Self {
        Estimate {
            value,
            route: route.into(),
        }
    }
}

/// Evaluates `spec` on `sample`.
pub fn estimate(sample: &Sample, spec: &MeasureSpec, conv: EcdfConvention) -> Result<Estimate> {
    spec.validate()?;
    use MeasureSpec as M;
    Ok(match *spec {
        M::Gmd => Estimate::new(gmd(sample)?, EstimatorRoute::UStatistic),
        M::GmdLeft { t } => Estimate::new(gmd_left(sample, t)?, EstimatorRoute::UStatistic),
        M::GmdRight { t } => Estimate::new(gmd_right(sample, t)?, EstimatorRoute::UStatistic),
        M::SGini { v } => {
            let (val, r) = s_gini_with_route(sample, conv, v)?;
            Estimate::new(val, r)
        }
        M::Crj => Estimate::new(crj(sample)?, EstimatorRoute::UnbiasedPwm),
        M::Cj => Estimate::new(cj(sample)?, EstimatorRoute::Identity),
        M::Ce => Estimate::new(ce(sample)?, EstimatorRoute::UnbiasedPwm),
        M::Crjw => Estimate::new(crjw(sample, conv), EstimatorRoute::PluginPwm),
        M::Wce => Estimate::new(wce(sample, conv), EstimatorRoute::PluginPwm),
        M::JDyn { t } => Estimate::new(j_dyn(sample, t)?, EstimatorRoute::UStatistic),
        M::HDyn { t } => Estimate::new(h_dyn(sample, t)?, EstimatorRoute::UStatistic),
        M::MeanResidual { t } => Estimate::new(
            conditional_mean_above(sample, t)?,
            EstimatorRoute::ConditionalMean,
        ),
        M::MeanPast { t } => Estimate::new(
            conditional_mean_below(sample, t)?,
            EstimatorRoute::ConditionalMean,
        ),
        M::Crt { .. } | M::Ct { .. } | M::Wcrt { .. } | M::Wct { .. } => {
            let (val, r) = tsallis(sample, conv, spec)?;
            Estimate::new(val, r)
        }
        M::Sr { .. } | M::Sp { .. } | M::Srw { .. } | M::Spw { .. } => {
            let (val, r) = stm_family(sample, conv, spec)?;
            Estimate::new(val, r)
        }
        M::Ge { w, phi } => Estimate::new(
            generalized_residual_entropy(sample, conv, w, phi),
            EstimatorRoute::EcdfPlugin,
        ),
        M::Gce { w, phi } => Estimate::new(
            generalized_cumulative_entropy(sample, conv, w, phi),
            EstimatorRoute::EcdfPlugin,
        ),
        M::RiskPremium { k } => {
            Estimate::new(risk_premium(sample, k)?, EstimatorRoute::OrderStatistic)
        }
        M::GainPremium { k } => {
            Estimate::new(gain_premium(sample, k)?, EstimatorRoute::OrderStatistic)
        }
        M::Pwm(idx) => {
            let (val, r) = pwm_estimate(sample, conv, idx);
            Estimate::new(val, r)
        }
    })
}

/// Gini mean difference: the U-statistic `(2/(n(n-1))) Σ_{i<j} |x_i - x_j|`,
/// evaluated through the spacings `Σ k (n - k) (x_(k+1) - x_(k))`, which has
/// no cancellation and is exactly zero on a constant sample.
pub fn gmd(sample: &Sample) -> Result<f64> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    let s: f64 = sample
        .values()
        .windows(2)
        .enumerate()
        .map(|(k, w)| ((k + 1) as f64 * (n - k - 1) as f64) * (w[1] - w[0]))
        .sum();
    Ok(2.0 * s / (n as f64 * (n as f64 - 1.0)))
}

/// `2 b_1 - 2 a_1`.
pub fn gmd_via_pwm(sample: &Sample) -> Result<f64> {
    Ok(2.0 * pwm_unbiased_beta(sample, 1)? - 2.0 * pwm_unbiased_alpha(sample, 1)?)
}

fn tail_of_two(tail: &[f64], t: f64) -> Result<()> {
    match tail.len() {
        0 => Err(Error::EmptyTail { t }),
        1 => Err(Error::FewerThanTwo { t, got: 1 }),
        _ => Ok(()),
    }
}

/// Left-truncated GMD: `E(X | X > t) - E(min(X₁,X₂) | min > t)` over the
/// observations above `t`.
pub fn gmd_left(sample: &Sample, t: f64) -> Result<f64> {
    let tail = sample.above(t);
    tail_of_two(tail, t)?;
    Ok(empirical::mean(tail) - pairwise_min_mean(tail))
}

/// Right-truncated GMD: `E(max(X₁,X₂) | max <= t) - E(X | X <= t)`.
pub fn gmd_right(sample: &Sample, t: f64) -> Result<f64> {
    let head = sample.at_or_below(t);
    tail_of_two(head, t)?;
    Ok(pairwise_max_mean(head) - empirical::mean(head))
}

/// Dynamic survival extropy `-½ E(min(X₁,X₂) - t | min > t)`.
pub fn j_dyn(sample: &Sample, t: f64) -> Result<f64> {
    let tail = sample.above(t);
    if tail.len() < 2 {
        return Err(Error::FewerThanTwo { t, got: tail.len() });
    }
    Ok(-0.5 * (pairwise_min_mean(tail) - t))
}

/// Dynamic cumulative extropy `-½ E(t - max(X₁,X₂) | max <= t)`.
pub fn h_dyn(sample: &Sample, t: f64) -> Result<f64> {
    let head = sample.at_or_below(t);
    if head.len() < 2 {
        return Err(Error::FewerThanTwo { t, got: head.len() });
    }
    Ok(-0.5 * (t - pairwise_max_mean(head)))
}

/// Absolute S-Gini `(1/v) mean - M̂_{1,0,v-1}`.
pub fn s_gini(sample: &Sample, conv: EcdfConvention, v: f64) -> Result<f64> {
    s_gini_with_route(sample, conv, v).map(|(x, _)| x)
}

fn s_gini_with_route(sample: &Sample, conv: EcdfConvention, v: f64) -> Result<(f64, PwmRoute)> {
    MeasureSpec::SGini { v }.validate()?;
    let (m, route) = pwm_estimate(sample, conv, PwmIndex::new(1, 0.0, v - 1.0)?);
    if route == PwmRoute::Unbiased {
        return Ok((sample.mean() / v - m, route));
    }
    // plug-in: -Cov(X, F̂̄^{v-1}) with the empirical mean of the weights in
    // place of 1/v, so a constant sample gives exactly zero
    let n = sample.len();
    let wbar = (0..n)
        .map(|i| conv.complement(i + 1, n).powf(v - 1.0))
        .sum::<f64>()
        / n as f64;
    Ok((sample.mean() * wbar - m, route))
}

/// Cumulative residual extropy `-½ E min(X₁,X₂) = -a_1`.
pub fn crj(sample: &Sample) -> Result<f64> {
    Ok(-pwm_unbiased_alpha(sample, 1)?)
}

/// Cumulative extropy, defined through `2 CRJ - 2 CJ = GMD`.
pub fn cj(sample: &Sample) -> Result<f64> {
    Ok(crj(sample)? - 0.5 * gmd(sample)?)
}

/// `-½ E min(X₁,X₂) = -a_1`.
pub fn ce(sample: &Sample) -> Result<f64> {
    Ok(-pwm_unbiased_alpha(sample, 1)?)
}

/// Weighted cumulative extropy `-½ M̂_{2,1,0}` (plug-in).
pub fn crjw(sample: &Sample, conv: EcdfConvention) -> f64 {
    -0.5 * crate::pwm::pwm_plugin(
        sample,
        conv,
        PwmIndex {
            p: 2,
            r: 1.0,
            s: 0.0,
        },
    )
}

/// Weighted cumulative residual extropy `-½ M̂_{2,0,1}` (plug-in).
pub fn wce(sample: &Sample, conv: EcdfConvention) -> f64 {
    -0.5 * crate::pwm::pwm_plugin(
        sample,
        conv,
        PwmIndex {
            p: 2,
            r: 0.0,
            s: 1.0,
        },
    )
}

fn m_hat(sample: &Sample, conv: EcdfConvention, p: u32, r: f64, s: f64) -> Result<(f64, PwmRoute)> {
    Ok(pwm_estimate(sample, conv, PwmIndex::new(p, r, s)?))
}

/// Tsallis-type cumulative entropies of order α: `crt`, `ct`, `wcrt`, `wct`.
pub fn tsallis(
    sample: &Sample,
    conv: EcdfConvention,
    spec: &MeasureSpec,
) -> Result<(f64, PwmRoute)> {
    spec.validate()?;
    let (alpha, p, residual) = match *spec {
        MeasureSpec::Crt { alpha } => (alpha, 1, true),
        MeasureSpec::Ct { alpha } => (alpha, 1, false),
        MeasureSpec::Wcrt { alpha } => (alpha, 2, true),
        MeasureSpec::Wct { alpha } => (alpha, 2, false),
        _ => return Err(Error::bad(format!("{spec} is not a Tsallis-type measure"))),
    };
    let (base, r0) = m_hat(sample, conv, p, 0.0, 0.0)?;
    let (power, r1) = if residual {
        m_hat(sample, conv, p, 0.0, alpha - 1.0)?
    } else {
        m_hat(sample, conv, p, alpha - 1.0, 0.0)?
    };
    let scale = if p == 2 { 0.5 } else { 1.0 } / (alpha - 1.0);
    // ∫ x^{p-1} F̄^α dx = (α/p) M_{p,0,α-1};  ∫ x^{p-1}(1 - F^α) dx = (α/p) M_{p,α-1,0}
    let value = if residual {
        scale * (base - alpha * power)
    } else {
        scale * (alpha * power - base)
    };
    Ok((value, combine(r0, r1)))
}

pub fn crt(sample: &Sample, conv: EcdfConvention, alpha: f64) -> Result<f64> {
    tsallis(sample, conv, &MeasureSpec::Crt { alpha }).map(|x| x.0)
}

pub fn ct(sample: &Sample, conv: EcdfConvention, alpha: f64) -> Result<f64> {
    tsallis(sample, conv, &MeasureSpec::Ct { alpha }).map(|x| x.0)
}

pub fn wcrt(sample: &Sample, conv: EcdfConvention, alpha: f64) -> Result<f64> {
    tsallis(sample, conv, &MeasureSpec::Wcrt { alpha }).map(|x| x.0)
}

pub fn wct(sample: &Sample, conv: EcdfConvention, alpha: f64) -> Result<f64> {
    tsallis(sample, conv, &MeasureSpec::Wct { alpha }).map(|x| x.0)
}

/// Cumulative STM entropies `sr`, `sp`, `srw`, `spw`:
///
/// * `SR  = (α M_{1,0,α-1} - β M_{1,0,β-1}) / (β - α)`
/// * `SP  = (β M_{1,β-1,0} - α M_{1,α-1,0}) / (β - α)`
/// * `SRW = (α M_{2,0,α-1} - β M_{2,0,β-1}) / (2(β - α))`
/// * `SPW = (β M_{2,β-1,0} - α M_{2,α-1,0}) / (2(β - α))`
pub fn stm_family(
    sample: &Sample,
    conv: EcdfConvention,
    spec: &MeasureSpec,
) -> Result<(f64, PwmRoute)> {
    spec.validate()?;
    let (alpha, beta, p, residual) = match *spec {
        MeasureSpec::Sr { alpha, beta } => (alpha, beta, 1, true),
        MeasureSpec::Sp { alpha, beta } => (alpha, beta, 1, false),
        MeasureSpec::Srw { alpha, beta } => (alpha, beta, 2, true),
        MeasureSpec::Spw { alpha, beta } => (alpha, beta, 2, false),
        _ => return Err(Error::bad(format!("{spec} is not an STM-type measure"))),
    };
    let term = |e: f64| {
        if residual {
            m_hat(sample, conv, p, 0.0, e - 1.0)
        } else {
            m_hat(sample, conv, p, e - 1.0, 0.0)
        }
    };
    let (ma, ra) = term(alpha)?;
    let (mb, rb) = term(beta)?;
    let denom = if p == 2 { 2.0 } else { 1.0 } * (beta - alpha);
    let value = if residual {
        (alpha * ma - beta * mb) / denom
    } else {
        (beta * mb - alpha * ma) / denom
    };
    Ok((value, combine(ra, rb)))
}

/// ECDF plug-in of the generalized cumulative residual entropy
/// `∫ w(u) E[φ(X) - φ(u) | X > u] dF(u)`:
/// `(1/n) Σ_i w(F̂(x_i)) · mean_{x_j > x_i} (φ(x_j) - φ(x_i))`,
/// with empty upper tails contributing 0.
pub fn generalized_residual_entropy(
    sample: &Sample,
    conv: EcdfConvention,
    w: Weight,
    phi: Phi,
) -> f64 {
    let xs = sample.values();
    let n = xs.len();
    let phis: Vec<f64> = xs.iter().map(|&x| phi.eval(x)).collect();
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + phis[i];
    }
    let mut total = 0.0;
    let mut i = 0;
    while i < n {
        // block of ties [i, j)
        let mut j = i + 1;
        while j < n && xs[j] == xs[i] {
            j += 1;
        }
        let above = n - j;
        if above > 0 {
            let weight = w.eval(conv.position(j, n), conv.complement(j, n));
            let cond = suffix[j] / above as f64 - phis[i];
            total += (j - i) as f64 * weight * cond;
        }
        i = j;
    }
    total / n as f64
}

/// ECDF plug-in of the generalized cumulative entropy
/// `∫ w(u) E[φ(u) - φ(X) | X <= u] dF(u)`:
/// `(1/n) Σ_i w(F̂(x_i)) · mean_{x_j <= x_i} (φ(x_i) - φ(x_j))`.
pub fn generalized_cumulative_entropy(
    sample: &Sample,
    conv: EcdfConvention,
    w: Weight,
    phi: Phi,
) -> f64 {
    let xs = sample.values();
    let n = xs.len();
    let phis: Vec<f64> = xs.iter().map(|&x| phi.eval(x)).collect();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + phis[i];
    }
    let mut total = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && xs[j] == xs[i] {
            j += 1;
        }
        let weight = w.eval(conv.position(j, n), conv.complement(j, n));
        let cond = phis[i] - prefix[j] / j as f64;
        total += (j - i) as f64 * weight * cond;
        i = j;
    }
    total / n as f64
}

fn check_k(sample: &Sample, k: u32) -> Result<usize> {
    if k < 2 {
        return Err(Error::bad(format!("k must be at least 2, got {k}")));
    }
    let k = k as usize;
    if sample.len() < k {
        return Err(Error::TooFew {
            needed: k,
            got: sample.len(),
        });
    }
    Ok(k)
}

/// Unbiased estimate of `E min(X_1, …, X_k)`.
pub fn expected_min_of(sample: &Sample, k: u32) -> Result<f64> {
    let k = check_k(sample, k)?;
    let w = min_of_k_weights(sample.len(), k);
    Ok(w.iter().zip(sample.values()).map(|(w, x)| w * x).sum())
}

/// Unbiased estimate of `E max(X_1, …, X_k)`.
pub fn expected_max_of(sample: &Sample, k: u32) -> Result<f64> {
    let k = check_k(sample, k)?;
    let w = min_of_k_weights(sample.len(), k);
    Ok(w.iter()
        .rev()
        .zip(sample.values())
        .map(|(w, x)| w * x)
        .sum())
}

/// Risk premium of order k: `E(X) - E min(X_1..X_k)`.
pub fn risk_premium(sample: &Sample, k: u32) -> Result<f64> {
    Ok(sample.mean() - expected_min_of(sample, k)?)
}

/// Gain premium of order k: `E max(X_1..X_k) - E(X)`.
pub fn gain_premium(sample: &Sample, k: u32) -> Result<f64> {
    Ok(expected_max_of(sample, k)? - sample.mean())
}
