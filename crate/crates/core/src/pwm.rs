//! Probability weighted moments `M_{p,r,s} = E[X^p F(X)^r (1 - F(X))^s]`.
//!
//! Three routes are provided: the population value by quadrature in the
//! probability domain, a plug-in estimator using plotting positions, and the
//! classical unbiased order-statistic estimators `b_r = M̂_{1,r,0}` and
//! `a_s = M̂_{1,0,s}`.

use std::fmt;

use crate::empirical::{EcdfConvention, Sample};
use crate::error::{Error, Result};
use crate::models::{integrate_u, ParametricModel, QuadratureConfig};

/// Index `(p, r, s)` of `M_{p,r,s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PwmIndex {
    pub p: u32,
    pub r: f64,
    pub s: f64,
}

impl PwmIndex {
    pub fn new(p: u32, r: f64, s: f64) -> Result<Self> {
        if !(r.is_finite() && s.is_finite()) {
            return Err(Error::bad("PWM exponents r and s must be finite"));
        }
        // exponents in (-1, 0) still give a finite expectation whenever the
        // moment exists; the Tsallis family with α < 1 needs them
        if r <= -1.0 || s <= -1.0 {
            return Err(Error::bad(format!(
                "PWM exponents must exceed -1, got r = {r}, s = {s}"
            )));
        }
        Ok(PwmIndex { p, r, s })
    }
}

impl fmt::Display for PwmIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M[{},{},{}]", self.p, self.r, self.s)
    }
}

/// `∫_0^1 Q(u)^p u^r (1-u)^s du`.
pub fn pwm_population(
    model: &ParametricModel,
    idx: PwmIndex,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if let Some(a) = model.tail_index() {
        // Q(u)^p (1-u)^s ~ (1-u)^{s - p/a} near u = 1
        if idx.s - f64::from(idx.p) / a <= -1.0 {
            return Err(Error::unsupported(format!("{idx} is infinite for {model}")));
        }
    }
    let p = idx.p as i32;
    let out = integrate_u(
        |u, ub| {
            let w = pow0(u, idx.r) * pow0(ub, idx.s);
            if w == 0.0 {
                0.0
            } else {
                model.quantile_pair(u, ub).powi(p) * w
            }
        },
        cfg,
    )?;
    Ok(out.value)
}

/// `x^e` with `0^0 = 1`.
fn pow0(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// Plug-in estimate `(1/n) Σ x_(i)^p u_i^r (1 - u_i)^s` with plotting
/// positions `u_i`.
pub fn pwm_plugin(sample: &Sample, conv: EcdfConvention, idx: PwmIndex) -> f64 {
    let n = sample.len();
    let p = idx.p as i32;
    sample
        .values()
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let i = k + 1;
            x.powi(p) * pow0(conv.position(i, n), idx.r) * pow0(conv.complement(i, n), idx.s)
        })
        .sum::<f64>()
        / n as f64
}

/// Unbiased estimator `b_r` of `M_{1,r,0}`:
/// `(1/n) Σ_{i>r} x_(i) · [(i-1)…(i-r)] / [(n-1)…(n-r)]`.
pub fn pwm_unbiased_beta(sample: &Sample, r: usize) -> Result<f64> {
    let n = sample.len();
    if n <= r {
        return Err(Error::TooFew {
            needed: r + 1,
            got: n,
        });
    }
    let xs = sample.values();
    let mut total = 0.0;
    for i in (r + 1)..=n {
        // product of r ratios; never forms the factorials themselves
        let mut w = 1.0;
        for j in 1..=r {
            w *= (i - j) as f64 / (n - j) as f64;
        }
        total += xs[i - 1] * w;
    }
    Ok(total / n as f64)
}

/// Unbiased estimator `a_s` of `M_{1,0,s}`:
/// `(1/n) Σ_{i<=n-s} x_(i) · [(n-i)…(n-i-s+1)] / [(n-1)…(n-s)]`.
pub fn pwm_unbiased_alpha(sample: &Sample, s: usize) -> Result<f64> {
    let n = sample.len();
    if n <= s {
        return Err(Error::TooFew {
            needed: s + 1,
            got: n,
        });
    }
    let xs = sample.values();
    let mut total = 0.0;
    for i in 1..=(n - s) {
        let mut w = 1.0;
        for j in 1..=s {
            w *= (n - i + 1 - j) as f64 / (n - j) as f64;
        }
        total += xs[i - 1] * w;
    }
    Ok(total / n as f64)
}

/// How a sample PWM was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwmRoute {
    Unbiased,
    Plugin,
}

/// Best available sample estimate of `M_{p,r,s}`: the unbiased `b_r`/`a_s`
/// when `p = 1` and one exponent is a non-negative integer with the other
/// zero (and the sample is large enough), otherwise the plug-in.
pub fn pwm_estimate(sample: &Sample, conv: EcdfConvention, idx: PwmIndex) -> (f64, PwmRoute) {
    if idx.p == 1 {
        let n = sample.len();
        if idx.s == 0.0 {
            if let Some(r) = as_count(idx.r) {
                if r < n {
                    if let Ok(v) = pwm_unbiased_beta(sample, r) {
                        return (v, PwmRoute::Unbiased);
                    }
                }
            }
        }
        if idx.r == 0.0 {
            if let Some(s) = as_count(idx.s) {
                if s < n {
                    if let Ok(v) = pwm_unbiased_alpha(sample, s) {
                        return (v, PwmRoute::Unbiased);
                    }
                }
            }
        }
    }
    (pwm_plugin(sample, conv, idx), PwmRoute::Plugin)
}

pub(crate) fn as_count(x: f64) -> Option<usize> {
    if x >= 0.0 && x.fract() == 0.0 && x < 1e9 {
        Some(x as usize)
    } else {
        None
    }
}
