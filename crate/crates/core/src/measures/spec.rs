use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pwm::PwmIndex;

/// Weight function `w(·)` of the generalized (cumulative) residual entropy,
/// expressed through the distribution function at the conditioning point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Const(f64),
    /// `F(u)^j`
    Cdf(f64),
    /// `(1 - F(u))^j`
    Survival(f64),
}

impl Weight {
    /// Evaluates the weight at a point with `F = f`, `1 - F = fbar`.
    pub fn eval(self, f: f64, fbar: f64) -> f64 {
        match self {
            Weight::Const(c) => c,
            Weight::Cdf(j) => pow0(f, j),
            Weight::Survival(j) => pow0(fbar, j),
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            Weight::Const(c) if !c.is_finite() => Err(Error::bad("weight constant must be finite")),
            Weight::Cdf(j) | Weight::Survival(j) if !(j.is_finite() && j >= 0.0) => {
                Err(Error::bad("weight exponent must be non-negative"))
            }
            _ => Ok(()),
        }
    }
}

fn pow0(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Const(c) => write!(f, "const:{c}"),
            Weight::Cdf(j) => write!(f, "F:{j}"),
            Weight::Survival(j) => write!(f, "Fbar:{j}"),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// `const:c`, `F:j` or `Fbar:j`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, val) = s.split_once(':').ok_or_else(|| {
            Error::bad(format!(
                "weight '{s}' must look like F:j, Fbar:j or const:c"
            ))
        })?;
        let v: f64 = val
            .trim()
            .parse()
            .map_err(|_| Error::bad(format!("bad number in weight '{s}'")))?;
        let w = match kind.trim() {
            "const" | "c" => Weight::Const(v),
            "F" | "cdf" => Weight::Cdf(v),
            "Fbar" | "sf" | "survival" => Weight::Survival(v),
            other => return Err(Error::bad(format!("unknown weight kind '{other}'"))),
        };
        w.validate()?;
        Ok(w)
    }
}

/// `φ(x) = coef · x^power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi {
    pub coef: f64,
    pub power: f64,
}

impl Phi {
    pub fn linear(coef: f64) -> Self {
        Phi { coef, power: 1.0 }
    }

    pub fn eval(self, x: f64) -> f64 {
        if self.power == 1.0 {
            self.coef * x
        } else {
            self.coef * x.powf(self.power)
        }
    }

    fn validate(self) -> Result<()> {
        if !self.coef.is_finite() || !(self.power.is_finite() && self.power > 0.0) {
            return Err(Error::bad(
                "phi needs a finite coefficient and a positive power",
            ));
        }
        Ok(())
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x^{}", self.coef, self.power)
    }
}

impl FromStr for Phi {
    type Err = Error;

    /// `c*x^v`, `c*x`, `x^v` or `x`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::bad(format!("phi '{s}' must look like c*x^v"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (coef, rest) = match t.split_once('*') {
            Some((c, r)) => (c.parse::<f64>().map_err(|_| bad())?, r.to_string()),
            None => (1.0, t.clone()),
        };
        let power = match rest.strip_prefix('x').ok_or_else(bad)? {
            "" => 1.0,
            p => p
                .strip_prefix('^')
                .ok_or_else(bad)?
                .parse::<f64>()
                .map_err(|_| bad())?,
        };
        let phi = Phi { coef, power };
        phi.validate()?;
        Ok(phi)
    }
}

/// Which measure to compute, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureSpec {
    Gmd,
    GmdLeft { t: f64 },
    GmdRight { t: f64 },
    SGini { v: f64 },
    Crj,
    Crjw,
    Cj,
    Ce,
    Wce,
    JDyn { t: f64 },
    HDyn { t: f64 },
    MeanResidual { t: f64 },
    MeanPast { t: f64 },
    Crt { alpha: f64 },
    Wcrt { alpha: f64 },
    Ct { alpha: f64 },
    Wct { alpha: f64 },
    Sr { alpha: f64, beta: f64 },
    Sp { alpha: f64, beta: f64 },
    Srw { alpha: f64, beta: f64 },
    Spw { alpha: f64, beta: f64 },
    Ge { w: Weight, phi: Phi },
    Gce { w: Weight, phi: Phi },
    RiskPremium { k: u32 },
    GainPremium { k: u32 },
    Pwm(PwmIndex),
}

/// Named numeric inputs from which a [`MeasureSpec`] is assembled.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeasureParams {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub v: Option<f64>,
    pub k: Option<u32>,
    pub t: Option<f64>,
    pub p: Option<u32>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub weight: Option<Weight>,
    pub phi: Option<Phi>,
}

pub const MEASURE_NAMES: &[&str] = &[
    "gmd",
    "gmd_left",
    "gmd_right",
    "s_gini",
    "crj",
    "crjw",
    "cj",
    "ce",
    "wce",
    "j_dyn",
    "h_dyn",
    "mrl",
    "mpl",
    "crt",
    "wcrt",
    "ct",
    "wct",
    "sr",
    "sp",
    "srw",
    "spw",
    "ge",
    "gce",
    "risk_premium",
    "gain_premium",
    "pwm",
];

impl MeasureSpec {
    /// Builds and validates a spec from a measure name and parameters.
    pub fn from_name(name: &str, p: &MeasureParams) -> Result<Self> {
        fn need<T: Copy>(v: Option<T>, measure: &str, flag: &str) -> Result<T> {
            v.ok_or_else(|| Error::bad(format!("{measure} needs --{flag}")))
        }
        let name = name.trim();
        let spec = match name {
            "gmd" => MeasureSpec::Gmd,
            "gmd_left" => MeasureSpec::GmdLeft {
                t: need(p.t, name, "t")?,
            },
            "gmd_right" => MeasureSpec::GmdRight {
                t: need(p.t, name, "t")?,
            },
            "s_gini" => MeasureSpec::SGini {
                v: need(p.v, name, "v")?,
            },
            "crj" => MeasureSpec::Crj,
            "crjw" => MeasureSpec::Crjw,
            "cj" => MeasureSpec::Cj,
            "ce" => MeasureSpec::Ce,
            "wce" => MeasureSpec::Wce,
            "j_dyn" => MeasureSpec::JDyn {
                t: need(p.t, name, "t")?,
            },
            "h_dyn" => MeasureSpec::HDyn {
                t: need(p.t, name, "t")?,
            },
            "mrl" => MeasureSpec::MeanResidual {
                t: need(p.t, name, "t")?,
            },
            "mpl" => MeasureSpec::MeanPast {
                t: need(p.t, name, "t")?,
            },
            "crt" => MeasureSpec::Crt {
                alpha: need(p.alpha, name, "alpha")?,
            },
            "wcrt" => MeasureSpec::Wcrt {
                alpha: need(p.alpha, name, "alpha")?,
            },
            "ct" => MeasureSpec::Ct {
                alpha: need(p.alpha, name, "alpha")?,
            },
            "wct" => MeasureSpec::Wct {
                alpha: need(p.alpha, name, "alpha")?,
            },
            "sr" | "sp" | "srw" | "spw" => {
                let alpha = need(p.alpha, name, "alpha")?;
                let beta = need(p.beta, name, "beta")?;
                match name {
                    "sr" => MeasureSpec::Sr { alpha, beta },
                    "sp" => MeasureSpec::Sp { alpha, beta },
                    "srw" => MeasureSpec::Srw { alpha, beta },
                    _ => MeasureSpec::Spw { alpha, beta },
                }
            }
            "ge" => MeasureSpec::Ge {
                w: p.weight.unwrap_or(Weight::Survival(1.0)),
                phi: p.phi.unwrap_or(Phi::linear(2.0)),
            },
            "gce" => MeasureSpec::Gce {
                w: p.weight.unwrap_or(Weight::Cdf(1.0)),
                phi: p.phi.unwrap_or(Phi::linear(2.0)),
            },
            "risk_premium" => MeasureSpec::RiskPremium {
                k: need(p.k, name, "k")?,
            },
            "gain_premium" => MeasureSpec::GainPremium {
                k: need(p.k, name, "k")?,
            },
            "pwm" => MeasureSpec::Pwm(PwmIndex::new(
                need(p.p, name, "p")?,
                need(p.r, name, "r")?,
                need(p.s, name, "s")?,
            )?),
            other => return Err(Error::bad(format!("unknown measure '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the parameter domain of the measure.
    pub fn validate(&self) -> Result<()> {
        let t_ok = |t: f64| -> Result<()> {
            if t.is_finite() && t >= 0.0 {
                Ok(())
            } else {
                Err(Error::bad(format!(
                    "t must be finite and non-negative, got {t}"
                )))
            }
        };
        let alpha_ok = |a: f64| -> Result<()> {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::bad(format!("alpha must be positive, got {a}")));
            }
            if a == 1.0 {
                return Err(Error::bad("alpha must differ from 1"));
            }
            Ok(())
        };
        match *self {
            MeasureSpec::GmdLeft { t }
            | MeasureSpec::GmdRight { t }
            | MeasureSpec::JDyn { t }
            | MeasureSpec::HDyn { t }
            | MeasureSpec::MeanResidual { t }
            | MeasureSpec::MeanPast { t } => t_ok(t),
            MeasureSpec::SGini { v } => {
                if !(v.is_finite() && v > 0.0) {
                    Err(Error::bad(format!("v must be positive, got {v}")))
                } else if v == 1.0 {
                    Err(Error::bad("v must differ from 1"))
                } else {
                    Ok(())
                }
            }
            MeasureSpec::Crt { alpha }
            | MeasureSpec::Wcrt { alpha }
            | MeasureSpec::Ct { alpha }
            | MeasureSpec::Wct { alpha } => alpha_ok(alpha),
            MeasureSpec::Sr { alpha, beta }
            | MeasureSpec::Sp { alpha, beta }
            | MeasureSpec::Srw { alpha, beta }
            | MeasureSpec::Spw { alpha, beta } => {
                if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
                    Err(Error::bad("alpha and beta must be positive"))
                } else if alpha == beta {
                    Err(Error::bad("alpha and beta must differ"))
                } else {
                    Ok(())
                }
            }
            MeasureSpec::Ge { w, phi } | MeasureSpec::Gce { w, phi } => {
                w.validate()?;
                phi.validate()
            }
            MeasureSpec::RiskPremium { k } | MeasureSpec::GainPremium { k } => {
                if k < 2 {
                    Err(Error::bad(format!("k must be at least 2, got {k}")))
                } else {
                    Ok(())
                }
            }
            MeasureSpec::Pwm(idx) => PwmIndex::new(idx.p, idx.r, idx.s).map(|_| ()),
            MeasureSpec::Gmd
            | MeasureSpec::Crj
            | MeasureSpec::Crjw
            | MeasureSpec::Cj
            | MeasureSpec::Ce
            | MeasureSpec::Wce => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MeasureSpec::Gmd => "gmd",
            MeasureSpec::GmdLeft { .. } => "gmd_left",
            MeasureSpec::GmdRight { .. } => "gmd_right",
            MeasureSpec::SGini { .. } => "s_gini",
            MeasureSpec::Crj => "crj",
            MeasureSpec::Crjw => "crjw",
            MeasureSpec::Cj => "cj",
            MeasureSpec::Ce => "ce",
            MeasureSpec::Wce => "wce",
            MeasureSpec::JDyn { .. } => "j_dyn",
            MeasureSpec::HDyn { .. } => "h_dyn",
            MeasureSpec::MeanResidual { .. } => "mrl",
            MeasureSpec::MeanPast { .. } => "mpl",
            MeasureSpec::Crt { .. } => "crt",
            MeasureSpec::Wcrt { .. } => "wcrt",
            MeasureSpec::Ct { .. } => "ct",
            MeasureSpec::Wct { .. } => "wct",
            MeasureSpec::Sr { .. } => "sr",
            MeasureSpec::Sp { .. } => "sp",
            MeasureSpec::Srw { .. } => "srw",
            MeasureSpec::Spw { .. } => "spw",
            MeasureSpec::Ge { .. } => "ge",
            MeasureSpec::Gce { .. } => "gce",
            MeasureSpec::RiskPremium { .. } => "risk_premium",
            MeasureSpec::GainPremium { .. } => "gain_premium",
            MeasureSpec::Pwm(_) => "pwm",
        }
    }

    /// Parameters as `(name, value)` pairs in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        let f = |v: f64| format!("{v}");
        match *self {
            MeasureSpec::GmdLeft { t }
            | MeasureSpec::GmdRight { t }
            | MeasureSpec::JDyn { t }
            | MeasureSpec::HDyn { t }
            | MeasureSpec::MeanResidual { t }
            | MeasureSpec::MeanPast { t } => vec![("t", f(t))],
            MeasureSpec::SGini { v } => vec![("v", f(v))],
            MeasureSpec::Crt { alpha }
            | MeasureSpec::Wcrt { alpha }
            | MeasureSpec::Ct { alpha }
            | MeasureSpec::Wct { alpha } => vec![("alpha", f(alpha))],
            MeasureSpec::Sr { alpha, beta }
            | MeasureSpec::Sp { alpha, beta }
            | MeasureSpec::Srw { alpha, beta }
            | MeasureSpec::Spw { alpha, beta } => vec![("alpha", f(alpha)), ("beta", f(beta))],
            MeasureSpec::Ge { w, phi } | MeasureSpec::Gce { w, phi } => {
                vec![("w", w.to_string()), ("phi", phi.to_string())]
            }
            MeasureSpec::RiskPremium { k } | MeasureSpec::GainPremium { k } => {
                vec![("k", k.to_string())]
            }
            MeasureSpec::Pwm(idx) => {
                vec![("p", idx.p.to_string()), ("r", f(idx.r)), ("s", f(idx.s))]
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let ps = self.params();
        if !ps.is_empty() {
            let inner: Vec<String> = ps.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", inner.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_selectors() {
        assert_eq!("Fbar:1".parse::<Weight>().unwrap(), Weight::Survival(1.0));
        assert_eq!("F:2".parse::<Weight>().unwrap(), Weight::Cdf(2.0));
        assert_eq!("const:-0.5".parse::<Weight>().unwrap(), Weight::Const(-0.5));
        assert!("G:1".parse::<Weight>().is_err());
        assert!("F:-1".parse::<Weight>().is_err());
        assert_eq!(
            "2*x^3".parse::<Phi>().unwrap(),
            Phi {
                coef: 2.0,
                power: 3.0
            }
        );
        assert_eq!("x".parse::<Phi>().unwrap(), Phi::linear(1.0));
        assert_eq!("3 * x".parse::<Phi>().unwrap(), Phi::linear(3.0));
        assert!("2*y".parse::<Phi>().is_err());
        assert!("x^0".parse::<Phi>().is_err());
    }

    #[test]
    fn parameter_guards() {
        let mut p = MeasureParams {
            alpha: Some(1.0),
            ..Default::default()
        };
        let e = MeasureSpec::from_name("crt", &p).unwrap_err();
        assert_eq!(e.to_string(), "alpha must differ from 1");
        p.alpha = Some(2.0);
        assert_eq!(
            MeasureSpec::from_name("crt", &p).unwrap(),
            MeasureSpec::Crt { alpha: 2.0 }
        );
        p.beta = Some(2.0);
        assert!(MeasureSpec::from_name("sr", &p).is_err());
        assert!(MeasureSpec::from_name(
            "s_gini",
            &MeasureParams {
                v: Some(1.0),
                ..Default::default()
            }
        )
        .is_err());
        assert!(MeasureSpec::from_name("gmd_left", &MeasureParams::default()).is_err());
        assert!(MeasureSpec::from_name(
            "risk_premium",
            &MeasureParams {
                k: Some(1),
                ..Default::default()
            }
        )
        .is_err());
        assert!(MeasureSpec::from_name("nope", &MeasureParams::default()).is_err());
    }

    #[test]
    fn every_name_is_constructible() {
        let p = MeasureParams {
            alpha: Some(2.0),
            beta: Some(3.0),
            v: Some(2.0),
            k: Some(2),
            t: Some(0.5),
            p: Some(1),
            r: Some(1.0),
            s: Some(0.0),
            ..Default::default()
        };
        for name in MEASURE_NAMES {
            let spec = MeasureSpec::from_name(name, &p).unwrap();
            assert_eq!(spec.name(), *name);
        }
    }

    #[test]
    fn display_includes_parameters() {
        let s = MeasureSpec::Sr {
            alpha: 1.0,
            beta: 2.5,
        };
        assert_eq!(s.to_string(), "sr(alpha=1,beta=2.5)");
        assert_eq!(MeasureSpec::Gmd.to_string(), "gmd");
    }
}
