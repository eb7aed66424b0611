//! Parametric distribution oracles and the quadrature engine used to compute
//! population values of every measure.

mod population;
pub mod quadrature;

use std::fmt;

use crate::error::{Error, Result};

pub use population::{
    gce_population, ge_population, measure_definition, measure_population, PopulationRoute,
};
pub use quadrature::{integrate_u, integrate_x, Integral, QuadratureConfig};

/// Supported distribution families. All have support inside `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Uniform on `[a, b]`.
    Uniform { a: f64, b: f64 },
    /// Exponential with the given mean.
    Exponential { mean: f64 },
    /// `F(x) = 1 - exp(-(x/scale)^shape)`.
    Weibull { shape: f64, scale: f64 },
    /// Classical (type I) Pareto: `F(x) = 1 - (scale/x)^shape` on `[scale, inf)`.
    Pareto { shape: f64, scale: f64 },
}

/// A validated parametric model exposing `F`, `1 - F`, density and quantile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricModel {
    family: Family,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::bad(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl ParametricModel {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b > a) {
            return Err(Error::bad(format!(
                "uniform needs 0 <= a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(ParametricModel {
            family: Family::Uniform { a, b },
        })
    }

    pub fn exponential(mean: f64) -> Result<Self> {
        positive("exponential mean", mean)?;
        Ok(ParametricModel {
            family: Family::Exponential { mean },
        })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        positive("weibull shape", shape)?;
        positive("weibull scale", scale)?;
        Ok(ParametricModel {
            family: Family::Weibull { shape, scale },
        })
    }

    /// Shape must exceed 2 so that the second moment exists.
    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 2.0) {
            return Err(Error::bad(format!(
                "pareto shape must exceed 2, got {shape}"
            )));
        }
        positive("pareto scale", scale)?;
        Ok(ParametricModel {
            family: Family::Pareto { shape, scale },
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.family {
            Family::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Family::Exponential { mean } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x / mean).exp_m1()
                }
            }
            Family::Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / scale).powf(shape)).exp_m1()
                }
            }
            Family::Pareto { shape, scale } => {
                if x <= scale {
                    0.0
                } else {
                    -(-shape * ((x - scale) / scale).ln_1p()).exp_m1()
                }
            }
        }
    }

    /// Survival function `1 - F(x)`, evaluated directly in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        match self.family {
            Family::Uniform { a, b } => ((b - x) / (b - a)).clamp(0.0, 1.0),
            Family::Exponential { mean } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x / mean).exp()
                }
            }
            Family::Weibull { shape, scale } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-(x / scale).powf(shape)).exp()
                }
            }
            Family::Pareto { shape, scale } => {
                if x <= scale {
                    1.0
                } else {
                    (scale / x).powf(shape)
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self.family {
            Family::Uniform { a, b } => {
                if x < a || x > b {
                    0.0
                } else {
                    1.0 / (b - a)
                }
            }
            Family::Exponential { mean } => {
                if x < 0.0 {
                    0.0
                } else {
                    (-x / mean).exp() / mean
                }
            }
            Family::Weibull { shape, scale } => {
                if x <= 0.0 {
                    if x == 0.0 && shape == 1.0 {
                        1.0 / scale
                    } else if x == 0.0 && shape < 1.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                } else {
                    let z = x / scale;
                    shape / scale * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
                }
            }
            Family::Pareto { shape, scale } => {
                if x < scale {
                    0.0
                } else {
                    shape / scale * (scale / x).powf(shape + 1.0)
                }
            }
        }
    }

    /// Quantile `Q(u)` for `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        self.quantile_pair(u, 1.0 - u)
    }

    /// Quantile from a probability and its complement; whichever of the two
    /// is smaller is used, so both tails keep full relative precision.
    pub fn quantile_pair(&self, u: f64, ubar: f64) -> f64 {
        match self.family {
            Family::Uniform { a, b } => {
                if u <= 0.5 {
                    a + (b - a) * u
                } else {
                    b - (b - a) * ubar
                }
            }
            Family::Exponential { mean } => mean * neg_log_survival(u, ubar),
            Family::Weibull { shape, scale } => scale * neg_log_survival(u, ubar).powf(1.0 / shape),
            Family::Pareto { shape, scale } => {
                if u <= 0.5 {
                    // (1-u)^{-1/a} = exp(-ln1p(-u)/a)
                    scale * (-(-u).ln_1p() / shape).exp()
                } else {
                    scale * ubar.powf(-1.0 / shape)
                }
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self.family {
            Family::Uniform { a, b } => 0.5 * (a + b),
            Family::Exponential { mean } => mean,
            Family::Weibull { shape, scale } => scale * libm::tgamma(1.0 + 1.0 / shape),
            Family::Pareto { shape, scale } => shape * scale / (shape - 1.0),
        }
    }

    /// Support `[lo, hi]`; `hi` may be infinite.
    pub fn support(&self) -> (f64, f64) {
        match self.family {
            Family::Uniform { a, b } => (a, b),
            Family::Exponential { .. } | Family::Weibull { .. } => (0.0, f64::INFINITY),
            Family::Pareto { scale, .. } => (scale, f64::INFINITY),
        }
    }

    /// Characteristic length of the distribution.
    pub fn scale(&self) -> f64 {
        match self.family {
            Family::Uniform { a, b } => b - a,
            Family::Exponential { mean } => mean,
            Family::Weibull { scale, .. } | Family::Pareto { scale, .. } => scale,
        }
    }

    /// Polynomial tail index: `F̄(x) ~ x^{-a}`. `None` for lighter tails.
    pub fn tail_index(&self) -> Option<f64> {
        match self.family {
            Family::Pareto { shape, .. } => Some(shape),
            _ => None,
        }
    }

    /// The distribution of `c·X`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        positive("scale factor", c)?;
        Ok(ParametricModel {
            family: match self.family {
                Family::Uniform { a, b } => Family::Uniform { a: a * c, b: b * c },
                Family::Exponential { mean } => Family::Exponential { mean: mean * c },
                Family::Weibull { shape, scale } => Family::Weibull {
                    shape,
                    scale: scale * c,
                },
                Family::Pareto { shape, scale } => Family::Pareto {
                    shape,
                    scale: scale * c,
                },
            },
        })
    }
}

impl fmt::Display for ParametricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Uniform { a, b } => write!(f, "uniform(a={a},b={b})"),
            Family::Exponential { mean } => write!(f, "exponential(mean={mean})"),
            Family::Weibull { shape, scale } => write!(f, "weibull(shape={shape},scale={scale})"),
            Family::Pareto { shape, scale } => write!(f, "pareto(shape={shape},scale={scale})"),
        }
    }
}

/// `-ln(1 - u)` using whichever of `u`, `1 - u` is accurate.
fn neg_log_survival(u: f64, ubar: f64) -> f64 {
    if u <= 0.5 {
        -(-u).ln_1p()
    } else {
        -ubar.ln()
    }
}
