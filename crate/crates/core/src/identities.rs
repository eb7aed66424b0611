//! Registry of the equalities between the measures, each checked by
//! evaluating its two sides through independent code paths.
//!
//! At population level one side is a probability-domain (PWM or quantile)
//! integral and the other an x-domain definition or a nested expectation.
//! At sample level the exact identities compare order-statistic estimators
//! with each other and must agree to rounding; the asymptotic ones compare an
//! ECDF plug-in with an unbiased estimator and are only checked on samples
//! large enough for the plug-in bias to be small.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::empirical::{self, ecdf_integral, EcdfConvention, Sample};
use crate::error::{Error, Result};
use crate::measures::{self, MeasureSpec, Phi, Weight};
use crate::models::{
    gce_population, ge_population, integrate_u, measure_definition, measure_population,
    ParametricModel, QuadratureConfig,
};
use crate::pwm::{pwm_population, PwmIndex};

/// Where an identity can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Population,
    Sample,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Population => "population",
            Level::Sample => "sample",
        })
    }
}

/// Mathematical status of an identity on samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    /// Holds exactly for every sample.
    ExactSample,
    /// Holds for the estimators only in the large-sample limit.
    Asymptotic,
    /// Checked on parametric models only.
    PopulationOnly,
}

/// Static description of one identity.
#[derive(Debug, Clone, Copy)]
pub struct Identity {
    pub id: &'static str,
    pub description: &'static str,
    pub exactness: Exactness,
}

pub const IDENTITIES: [Identity; 14] = [
    Identity {
        id: "I1",
        description: "GMD = 2 M110 - 2 M101",
        exactness: Exactness::ExactSample,
    },
    Identity {
        id: "I2",
        description: "GE(w = 1-F, phi = 2x) = 4 Cov(X, F(X))",
        exactness: Exactness::Asymptotic,
    },
    Identity {
        id: "I3",
        description: "E|X1 - X2| = 2 CRT_2",
        exactness: Exactness::ExactSample,
    },
    Identity {
        id: "I4",
        description: "2 CRJ - 2 CJ = GMD",
        exactness: Exactness::ExactSample,
    },
    Identity {
        id: "I5",
        description: "GMD_L(t) = m(t) + 2 J_t",
        exactness: Exactness::ExactSample,
    },
    Identity {
        id: "I6",
        description: "GMD_R(t) = 2 H_t + r(t)",
        exactness: Exactness::ExactSample,
    },
    Identity {
        id: "I7",
        description: "GE(w = (1-F)^(k-1), phi = k x^v) = k/(k-1) E(X^v - min_k^v)",
        exactness: Exactness::Asymptotic,
    },
    Identity {
        id: "I8",
        description: "GCE(w = F^k, phi = (k+1) x) = (k+1)/k E(max_(k+1) - X)",
        exactness: Exactness::Asymptotic,
    },
    Identity {
        id: "I9",
        description: "extropy family (crj, cj, crjw, ce, wce): definition = PWM form",
        exactness: Exactness::Asymptotic,
    },
    Identity {
        id: "I10",
        description: "Tsallis family (crt, ct, wcrt, wct): definition = PWM form",
        exactness: Exactness::Asymptotic,
    },
    Identity {
        id: "I11",
        description: "STM family (sr, sp, srw, spw): definition = PWM form",
        exactness: Exactness::Asymptotic,
    },
    Identity {
        id: "I12",
        description: "S-Gini: -Cov(X, (1-F)^(v-1)) = M100/v - M_{1,0,v-1}",
        exactness: Exactness::Asymptotic,
    },
    Identity {
        id: "I13",
        description: "GE/GCE of min/max of two = weighted averages of GMD_L - m and r - GMD_R",
        exactness: Exactness::PopulationOnly,
    },
    Identity {
        id: "I14",
        description: "E(max_k - min_k) = k Cov(X, F^(k-1)) - k Cov(X, (1-F)^(k-1))",
        exactness: Exactness::Asymptotic,
    },
];

pub fn find(id: &str) -> Option<&'static Identity> {
    IDENTITIES.iter().find(|i| i.id.eq_ignore_ascii_case(id))
}

/// What an identity is evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Model(&'a ParametricModel),
    Sample(&'a Sample),
}

impl Source<'_> {
    pub fn level(&self) -> Level {
        match self {
            Source::Model(_) => Level::Population,
            Source::Sample(_) => Level::Sample,
        }
    }

    /// Model descriptor or sample digest.
    pub fn describe(&self) -> String {
        match self {
            Source::Model(m) => m.to_string(),
            Source::Sample(s) => format!("sample(n={},digest={:016x})", s.len(), s.digest()),
        }
    }
}

/// Tolerances for [`verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub quadrature: QuadratureConfig,
    /// Population tolerance (absolute and relative).
    pub population_tol: f64,
    /// Tolerance for identities that hold exactly on every sample.
    pub exact_tol: f64,
    /// Relative tolerance for asymptotic sample identities.
    pub asymptotic_tol: f64,
    /// Asymptotic identities are not checked on smaller samples.
    pub min_asymptotic_n: usize,
    pub conv: EcdfConvention,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            quadrature: QuadratureConfig::default(),
            population_tol: 1e-8,
            exact_tol: 1e-12,
            asymptotic_tol: 0.05,
            min_asymptotic_n: 100,
            conv: EcdfConvention::Hazen,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Not checked at this level (or not on this sample); carries a note.
    Skipped,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skipped => "skipped",
        })
    }
}

/// One checked equality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
struct Tol {
    abs: f64,
    rel: f64,
}

impl Component {
    fn new(label: impl Into<String>, lhs: f64, rhs: f64, tol: Tol) -> Self {
        let abs_residual = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_residual = if scale > 0.0 {
            abs_residual / scale
        } else {
            0.0
        };
        let tolerance = tol.abs.max(tol.rel * scale);
        Component {
            label: label.into(),
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            tolerance,
            pass: abs_residual <= tolerance,
        }
    }
}

/// Result of checking one identity on one source. The headline numbers are
/// those of the worst component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub id: &'static str,
    pub description: &'static str,
    pub level: Level,
    pub source: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub outcome: Outcome,
    pub lhs_route: &'static str,
    pub rhs_route: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub components: Vec<Component>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    fn skipped(identity: &Identity, source: &Source, note: String) -> Self {
        IdentityReport {
            id: identity.id,
            description: identity.description,
            level: source.level(),
            source: source.describe(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            abs_residual: f64::NAN,
            rel_residual: f64::NAN,
            tolerance: f64::NAN,
            outcome: Outcome::Skipped,
            lhs_route: "",
            rhs_route: "",
            note: Some(note),
            components: Vec::new(),
        }
    }
}

/// Evaluated sides of an identity before summarising.
struct Sides {
    components: Vec<Component>,
    lhs_route: &'static str,
    rhs_route: &'static str,
    note: Option<String>,
}

/// Checks one identity. Errors from either side propagate.
pub fn verify(identity: &Identity, source: Source, cfg: &VerifyConfig) -> Result<IdentityReport> {
    let sides = match source {
        Source::Model(m) => population_sides(identity, m, cfg)?,
        Source::Sample(s) => {
            if identity.exactness == Exactness::PopulationOnly {
                return Err(Error::NotApplicable(format!(
                    "{} is checked at population level only",
                    identity.id
                )));
            }
            if identity.exactness == Exactness::Asymptotic && s.len() < cfg.min_asymptotic_n {
                return Err(Error::NotApplicable(format!(
                    "{} holds asymptotically; needs n >= {}, got {}",
                    identity.id,
                    cfg.min_asymptotic_n,
                    s.len()
                )));
            }
            sample_sides(identity, s, cfg)?
        }
    };
    let worst = sides
        .components
        .iter()
        .max_by(|a, b| {
            let ka = (!a.pass, a.abs_residual / a.tolerance.max(f64::MIN_POSITIVE));
            let kb = (!b.pass, b.abs_residual / b.tolerance.max(f64::MIN_POSITIVE));
            ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
        })
        .cloned()
        .ok_or_else(|| {
            Error::NotApplicable(format!("{} has no applicable component", identity.id))
        })?;
    let all = sides.components.iter().all(|c| c.pass);
    Ok(IdentityReport {
        id: identity.id,
        description: identity.description,
        level: source.level(),
        source: source.describe(),
        lhs: worst.lhs,
        rhs: worst.rhs,
        abs_residual: worst.abs_residual,
        rel_residual: worst.rel_residual,
        tolerance: worst.tolerance,
        outcome: if all { Outcome::Pass } else { Outcome::Fail },
        lhs_route: sides.lhs_route,
        rhs_route: sides.rhs_route,
        note: sides.note,
        components: sides.components,
    })
}

/// Runs every identity in registry order. Identities that cannot be checked
/// on this source are reported as skipped; evaluation errors are reported as
/// failures with the error in the note.
pub fn verify_all(source: Source, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    IDENTITIES
        .par_iter()
        .map(|identity| match verify(identity, source, cfg) {
            Ok(r) => r,
            Err(Error::NotApplicable(msg)) => IdentityReport::skipped(identity, &source, msg),
            Err(e) => {
                let mut r = IdentityReport::skipped(identity, &source, e.to_string());
                r.outcome = Outcome::Fail;
                r
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// population level

fn pop_tol(cfg: &VerifyConfig) -> Tol {
    Tol {
        abs: cfg.population_tol,
        rel: cfg.population_tol,
    }
}

fn population_sides(id: &Identity, model: &ParametricModel, cfg: &VerifyConfig) -> Result<Sides> {
    let q = &cfg.quadrature;
    let tol = pop_tol(cfg);
    let def = |spec: MeasureSpec| measure_definition(model, &spec, q);
    let pop = |spec: MeasureSpec| measure_population(model, &spec, q);
    let pwm = |p: u32, r: f64, s: f64| pwm_population(model, PwmIndex::new(p, r, s)?, q);
    let mut out = Vec::new();
    let (lr, rr, note): (&'static str, &'static str, Option<String>) = match id.id {
        "I1" => {
            let lhs = def(MeasureSpec::Gmd)?;
            let rhs = 2.0 * pwm(1, 1.0, 0.0)? - 2.0 * pwm(1, 0.0, 1.0)?;
            out.push(Component::new("gmd", lhs, rhs, tol));
            ("x-domain 2∫F(1-F)", "pwm-quadrature", None)
        }
        "I2" => {
            let lhs = ge_population(model, Weight::Survival(1.0), Phi::linear(2.0), q)?;
            let mean = def(MeasureSpec::Pwm(PwmIndex::new(1, 0.0, 0.0)?))?;
            let cross = def(MeasureSpec::Pwm(PwmIndex::new(1, 1.0, 0.0)?))?;
            out.push(Component::new("ge", lhs, 4.0 * (cross - 0.5 * mean), tol));
            ("nested-quadrature", "x-domain density moments", None)
        }
        "I3" => {
            let lhs = pair_abs_difference(model, q)?;
            let rhs = 2.0 * def(MeasureSpec::Crt { alpha: 2.0 })?;
            out.push(Component::new("gmd", lhs, rhs, tol));
            ("double quantile integral", "x-domain definition", None)
        }
        "I4" => {
            let lhs = 2.0 * def(MeasureSpec::Crj)? - 2.0 * def(MeasureSpec::Cj)?;
            let rhs = pop(MeasureSpec::Gmd)?;
            out.push(Component::new("gmd", lhs, rhs, tol));
            ("x-domain definition", "pwm-quadrature", None)
        }
        "I5" => {
            for u in [0.25, 0.5, 0.75] {
                let t = model.quantile(u);
                let lhs = def(MeasureSpec::GmdLeft { t })?;
                let rhs =
                    pop(MeasureSpec::MeanResidual { t })? + 2.0 * pop(MeasureSpec::JDyn { t })?;
                out.push(Component::new(format!("t=Q({u})"), lhs, rhs, tol));
            }
            ("x-domain definition", "conditional-quadrature", None)
        }
        "I6" => {
            for u in [0.25, 0.5, 0.75] {
                let t = model.quantile(u);
                let lhs = def(MeasureSpec::GmdRight { t })?;
                let rhs = 2.0 * pop(MeasureSpec::HDyn { t })? + pop(MeasureSpec::MeanPast { t })?;
                out.push(Component::new(format!("t=Q({u})"), lhs, rhs, tol));
            }
            ("x-domain definition", "conditional-quadrature", None)
        }
        "I7" => {
            for (k, v) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2)] {
                let kf = f64::from(k);
                let lhs = ge_population(
                    model,
                    Weight::Survival(kf - 1.0),
                    Phi {
                        coef: kf,
                        power: f64::from(v),
                    },
                    q,
                )?;
                let rhs = kf / (kf - 1.0) * (pwm(v, 0.0, 0.0)? - kf * pwm(v, 0.0, kf - 1.0)?);
                out.push(Component::new(format!("k={k},v={v}"), lhs, rhs, tol));
            }
            ("nested-quadrature", "pwm-quadrature", None)
        }
        "I8" => {
            for k in [1u32, 2] {
                let kf = f64::from(k);
                let lhs = gce_population(model, Weight::Cdf(kf), Phi::linear(kf + 1.0), q)?;
                let rhs = (kf + 1.0) / kf * ((kf + 1.0) * pwm(1, kf, 0.0)? - pwm(1, 0.0, 0.0)?);
                out.push(Component::new(format!("k={k}"), lhs, rhs, tol));
            }
            ("nested-quadrature", "pwm-quadrature", None)
        }
        "I9" | "I10" | "I11" | "I12" => {
            for spec in family_specs(id.id) {
                out.push(Component::new(
                    spec.to_string(),
                    def(spec)?,
                    pop(spec)?,
                    tol,
                ));
            }
            ("x-domain definition", "pwm-quadrature", None)
        }
        "I13" => {
            let (l4, r4) = series_system(model, q)?;
            out.push(Component::new("min-of-two", l4, r4, tol));
            let (l5, r5) = parallel_system(model, q)?;
            out.push(Component::new("max-of-two", l5, r5, tol));
            (
                "nested conditional quantile",
                "nested x-domain definitions",
                None,
            )
        }
        "I14" => {
            for k in [2u32, 3] {
                let kf = f64::from(k);
                let lhs = range_of_k(model, kf, q)?;
                let rhs = kf * (pwm(1, kf - 1.0, 0.0)? - pwm(1, 0.0, kf - 1.0)?);
                out.push(Component::new(format!("k={k}"), lhs, rhs, tol));
            }
            ("x-domain ∫(1 - F^k - (1-F)^k)", "pwm-quadrature", None)
        }
        other => return Err(Error::bad(format!("unknown identity {other}"))),
    };
    Ok(Sides {
        components: out,
        lhs_route: lr,
        rhs_route: rr,
        note,
    })
}

fn family_specs(id: &str) -> Vec<MeasureSpec> {
    match id {
        "I9" => vec![
            MeasureSpec::Crj,
            MeasureSpec::Cj,
            MeasureSpec::Crjw,
            MeasureSpec::Ce,
            MeasureSpec::Wce,
        ],
        "I10" => [2.0, 2.5, 3.0]
            .into_iter()
            .flat_map(|alpha| {
                [
                    MeasureSpec::Crt { alpha },
                    MeasureSpec::Ct { alpha },
                    MeasureSpec::Wcrt { alpha },
                    MeasureSpec::Wct { alpha },
                ]
            })
            .collect(),
        "I11" => [(1.0, 2.0), (2.0, 3.5)]
            .into_iter()
            .flat_map(|(alpha, beta)| {
                [
                    MeasureSpec::Sr { alpha, beta },
                    MeasureSpec::Sp { alpha, beta },
                    MeasureSpec::Srw { alpha, beta },
                    MeasureSpec::Spw { alpha, beta },
                ]
            })
            .collect(),
        "I12" => [0.5, 2.0, 3.0]
            .into_iter()
            .map(|v| MeasureSpec::SGini { v })
            .collect(),
        _ => Vec::new(),
    }
}

/// Outer quantile integral with a fallible inner computation.
fn outer<F>(q: &QuadratureConfig, inner: F) -> Result<f64>
where
    F: Fn(f64, f64, &QuadratureConfig) -> Result<f64>,
{
    let icfg = QuadratureConfig {
        abs_tol: (q.abs_tol * 0.1).max(1e-14),
        rel_tol: (q.rel_tol * 0.1).max(1e-14),
        ..*q
    };
    let failure = std::cell::RefCell::new(None);
    let out = integrate_u(
        |u, ub| match inner(u, ub, &icfg) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        q,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(out?.value)
}

/// `∫∫ |Q(u) - Q(v)| du dv`, the inner integral split at the kink `u = v`.
fn pair_abs_difference(model: &ParametricModel, q: &QuadratureConfig) -> Result<f64> {
    outer(q, |v, vb, icfg| {
        let here = model.quantile_pair(v, vb);
        let below = integrate_u(|t, tb| here - model.quantile_pair(v * t, vb + v * tb), icfg)?;
        let above = integrate_u(
            |t, tb| model.quantile_pair(v + vb * t, vb * tb) - here,
            icfg,
        )?;
        Ok(v * below.value + vb * above.value)
    })
}

/// Generalized residual entropy of `Z = min(X₁, X₂)` with `w = -½`,
/// `φ(z) = z`, against `∫ (GMD_L(u) - m(u)) F̄(u) dF(u)`.
fn series_system(model: &ParametricModel, q: &QuadratureConfig) -> Result<(f64, f64)> {
    // E[Z - u | Z > u] = 2 ∫_0^1 (Q(q + q̄τ) - Q(q)) (1 - τ) dτ
    let lhs = outer(q, |u, ub, icfg| {
        let here = model.quantile_pair(u, ub);
        let c = integrate_u(
            |t, tb| (model.quantile_pair(u + ub * t, ub * tb) - here) * tb,
            icfg,
        )?;
        Ok(-2.0 * c.value * ub)
    })?;
    let rhs = outer(q, |u, ub, icfg| {
        let t = model.quantile_pair(u, ub);
        // the weight F̄ vanishes where t rounds onto the upper support end
        if model.sf(t) == 0.0 {
            return Ok(0.0);
        }
        let gl = measure_definition(model, &MeasureSpec::GmdLeft { t }, icfg)?;
        let m = measure_definition(model, &MeasureSpec::MeanResidual { t }, icfg)?;
        Ok((gl - m) * ub)
    })?;
    Ok((lhs, rhs))
}

/// Generalized cumulative entropy of `Z = max(X₁, X₂)` with `w = ½`,
/// `φ(z) = z`, against `∫ (r(u) - GMD_R(u)) F(u) dF(u)`.
fn parallel_system(model: &ParametricModel, q: &QuadratureConfig) -> Result<(f64, f64)> {
    // E[u - Z | Z <= u] = 2 ∫_0^1 (Q(q) - Q(qτ)) τ dτ
    let lhs = outer(q, |u, ub, icfg| {
        let here = model.quantile_pair(u, ub);
        let c = integrate_u(
            |t, tb| (here - model.quantile_pair(u * t, ub + u * tb)) * t,
            icfg,
        )?;
        Ok(2.0 * c.value * u)
    })?;
    let rhs = outer(q, |u, ub, icfg| {
        let t = model.quantile_pair(u, ub);
        if model.cdf(t) == 0.0 {
            return Ok(0.0);
        }
        let gr = measure_definition(model, &MeasureSpec::GmdRight { t }, icfg)?;
        let r = measure_definition(model, &MeasureSpec::MeanPast { t }, icfg)?;
        Ok((r - gr) * u)
    })?;
    Ok((lhs, rhs))
}

/// `E(max_k - min_k) = ∫ (1 - F^k - F̄^k) dx`.
fn range_of_k(model: &ParametricModel, k: f64, q: &QuadratureConfig) -> Result<f64> {
    let (lo, hi) = model.support();
    let h = |x: f64| {
        let (f, s) = (model.cdf(x), model.sf(x));
        // 1 - F^k = -expm1(k ln F), with ln F = ln1p(-F̄) in the upper tail
        let one_minus = if f == 0.0 {
            1.0
        } else if f > 0.5 {
            -(k * (-s).ln_1p()).exp_m1()
        } else {
            -(k * f.ln()).exp_m1()
        };
        one_minus - s.powf(k)
    };
    // the integrand vanishes on [0, lo]
    Ok(crate::models::integrate_x(h, lo, hi, model.scale(), q)?.value)
}

// ---------------------------------------------------------------------------
// sample level

fn sample_sides(id: &Identity, s: &Sample, cfg: &VerifyConfig) -> Result<Sides> {
    let exact = Tol {
        abs: cfg.exact_tol,
        rel: cfg.exact_tol,
    };
    let asym = Tol {
        abs: cfg.exact_tol,
        rel: cfg.asymptotic_tol,
    };
    let conv = cfg.conv;
    let mut out = Vec::new();
    let mut note = None;
    let (lr, rr): (&'static str, &'static str) = match id.id {
        "I1" => {
            out.push(Component::new(
                "gmd",
                measures::gmd(s)?,
                measures::gmd_via_pwm(s)?,
                exact,
            ));
            ("sorted u-statistic", "unbiased b1, a1")
        }
        "I2" => {
            let lhs = measures::generalized_residual_entropy(
                s,
                conv,
                Weight::Survival(1.0),
                Phi::linear(2.0),
            );
            let rhs = 4.0 * plug_in_cov(s, conv, |u, _| u);
            out.push(Component::new("ge", lhs, rhs, asym));
            ("ecdf double sum", "plug-in covariance")
        }
        "I3" => {
            let lhs = pairwise_abs_difference(s.values());
            let rhs = 2.0 * measures::crt(s, conv, 2.0)?;
            out.push(Component::new("gmd", lhs, rhs, exact));
            ("pair enumeration", "unbiased crt_2")
        }
        "I4" => {
            let lhs = 2.0 * measures::crj(s)? - 2.0 * measures::cj(s)?;
            out.push(Component::new("gmd", lhs, measures::gmd(s)?, exact));
            note = Some("cj is estimated through this identity; exact by construction".into());
            ("crj, cj estimators", "sorted u-statistic")
        }
        "I5" => {
            for t in [s.lower_median(), 0.0] {
                if s.above(t).len() < 2 {
                    continue;
                }
                let lhs = measures::gmd_left(s, t)?;
                let rhs = empirical::conditional_mean_above(s, t)? + 2.0 * measures::j_dyn(s, t)?;
                out.push(Component::new(format!("t={t}"), lhs, rhs, exact));
            }
            ("truncated u-statistic", "m(t) + 2 J_t estimators")
        }
        "I6" => {
            for t in [s.lower_median(), s.max()] {
                if s.at_or_below(t).len() < 2 {
                    continue;
                }
                let lhs = measures::gmd_right(s, t)?;
                let rhs = 2.0 * measures::h_dyn(s, t)? + empirical::conditional_mean_below(s, t)?;
                out.push(Component::new(format!("t={t}"), lhs, rhs, exact));
            }
            ("truncated u-statistic", "2 H_t + r(t) estimators")
        }
        "I7" => {
            for (k, v) in [(2u32, 1i32), (2, 2), (3, 1), (3, 2)] {
                let kf = f64::from(k);
                let lhs = measures::generalized_residual_entropy(
                    s,
                    conv,
                    Weight::Survival(kf - 1.0),
                    Phi {
                        coef: kf,
                        power: f64::from(v),
                    },
                );
                let powered =
                    Sample::new(&s.values().iter().map(|x| x.powi(v)).collect::<Vec<_>>())?;
                let rhs = kf / (kf - 1.0) * measures::risk_premium(&powered, k)?;
                out.push(Component::new(format!("k={k},v={v}"), lhs, rhs, asym));
            }
            ("ecdf double sum", "order-statistic premium")
        }
        "I8" => {
            for k in [1u32, 2] {
                let kf = f64::from(k);
                let lhs = measures::generalized_cumulative_entropy(
                    s,
                    conv,
                    Weight::Cdf(kf),
                    Phi::linear(kf + 1.0),
                );
                let rhs = (kf + 1.0) / kf * measures::gain_premium(s, k + 1)?;
                out.push(Component::new(format!("k={k}"), lhs, rhs, asym));
            }
            ("ecdf double sum", "order-statistic premium")
        }
        "I9" | "I10" | "I11" | "I12" => {
            let mut specs = family_specs(id.id);
            if id.id == "I12" {
                // for v < 1 the plug-in weight (1-F̂)^(v-1) puts O(√n) mass on
                // the sample maximum and converges too slowly to check
                specs.retain(|s| matches!(s, MeasureSpec::SGini { v } if *v > 1.0));
                note = Some("sample check uses v > 1 only".into());
            }
            for spec in specs {
                let lhs = ecdf_definition(s, &spec)?;
                let rhs = measures::estimate(s, &spec, conv)?.value;
                out.push(Component::new(spec.to_string(), lhs, rhs, asym));
            }
            ("step-ECDF integral", "PWM estimators")
        }
        "I14" => {
            for k in [2u32, 3] {
                let kf = f64::from(k);
                let lhs = measures::expected_max_of(s, k)? - measures::expected_min_of(s, k)?;
                let rhs = kf
                    * (plug_in_cov(s, conv, |u, _| u.powf(kf - 1.0))
                        - plug_in_cov(s, conv, |_, ub| ub.powf(kf - 1.0)));
                out.push(Component::new(format!("k={k}"), lhs, rhs, asym));
            }
            ("order-statistic estimators", "plug-in covariances")
        }
        other => return Err(Error::bad(format!("unknown identity {other}"))),
    };
    if out.is_empty() {
        return Err(Error::NotApplicable(format!(
            "{}: no truncation point leaves two observations on the required side",
            id.id
        )));
    }
    Ok(Sides {
        components: out,
        lhs_route: lr,
        rhs_route: rr,
        note,
    })
}

/// `Cov(X, g(F̂))` with plotting positions.
fn plug_in_cov(s: &Sample, conv: EcdfConvention, g: impl Fn(f64, f64) -> f64) -> f64 {
    let n = s.len();
    let w: Vec<f64> = (1..=n)
        .map(|i| g(conv.position(i, n), conv.complement(i, n)))
        .collect();
    let wbar = w.iter().sum::<f64>() / n as f64;
    s.values()
        .iter()
        .zip(&w)
        .map(|(x, w)| (x - s.mean()) * (w - wbar))
        .sum::<f64>()
        / n as f64
}

/// `(2/(n(n-1))) Σ_{i<j} |x_i - x_j|` by direct enumeration.
fn pairwise_abs_difference(xs: &[f64]) -> f64 {
    let n = xs.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += (xs[i] - xs[j]).abs();
        }
    }
    2.0 * total / (n as f64 * (n as f64 - 1.0))
}

/// The defining integral of `spec` with the step ECDF in place of `F`.
fn ecdf_definition(s: &Sample, spec: &MeasureSpec) -> Result<f64> {
    use MeasureSpec as M;
    let diff = |a: f64, b: f64, p: f64| if p == 0.0 { 0.0 } else { p.powf(a) - p.powf(b) };
    Ok(match *spec {
        M::Crj | M::Ce => -0.5 * ecdf_integral(s, 0, |u| (1.0 - u).powi(2)),
        M::Cj => -0.5 * ecdf_integral(s, 0, |u| 1.0 - u * u),
        M::Crjw => -0.5 * ecdf_integral(s, 1, |u| 1.0 - u * u),
        M::Wce => -0.5 * ecdf_integral(s, 1, |u| (1.0 - u).powi(2)),
        M::Crt { alpha } => ecdf_integral(s, 0, |u| diff(1.0, alpha, 1.0 - u)) / (alpha - 1.0),
        M::Ct { alpha } => ecdf_integral(s, 0, |u| diff(1.0, alpha, u)) / (alpha - 1.0),
        M::Wcrt { alpha } => ecdf_integral(s, 1, |u| diff(1.0, alpha, 1.0 - u)) / (alpha - 1.0),
        M::Wct { alpha } => ecdf_integral(s, 1, |u| diff(1.0, alpha, u)) / (alpha - 1.0),
        M::Sr { alpha, beta } => {
            ecdf_integral(s, 0, |u| diff(alpha, beta, 1.0 - u)) / (beta - alpha)
        }
        M::Sp { alpha, beta } => ecdf_integral(s, 0, |u| diff(alpha, beta, u)) / (beta - alpha),
        M::Srw { alpha, beta } => {
            ecdf_integral(s, 1, |u| diff(alpha, beta, 1.0 - u)) / (beta - alpha)
        }
        M::Spw { alpha, beta } => ecdf_integral(s, 1, |u| diff(alpha, beta, u)) / (beta - alpha),
        // S_v = (1/v) ∫ (F̄ - F̄^v) dx
        M::SGini { v } => ecdf_integral(s, 0, |u| diff(1.0, v, 1.0 - u)) / v,
        _ => return Err(Error::bad(format!("no ECDF definition for {spec}"))),
    })
}
