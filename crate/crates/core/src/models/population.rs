//! Population values of every measure.
//!
//! Two independent routes are provided:
//!
//! * [`measure_population`] uses the quantile (probability-domain) forms:
//!   PWM representations wherever they exist, conditional quantile integrals
//!   for the dynamic measures, and nested quantile integrals for the
//!   generalized entropies.
//! * [`measure_definition`] integrates each measure's defining expression
//!   in `x` using `F`, `F̄` and the density.
//!
//! The identity checks compare one route against the other.

use std::cell::RefCell;
use std::fmt;

use super::quadrature::{integrate_u, integrate_x, QuadratureConfig};
use super::ParametricModel;
use crate::error::{Error, Result};
use crate::measures::{MeasureSpec, Phi, Weight};
use crate::pwm::{pwm_population, PwmIndex};

/// Which population route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopulationRoute {
    /// `∫_0^1 Q(u)^p u^r (1-u)^s du` combinations.
    PwmRepresentation,
    /// Integral over the conditional quantile function beyond/below `t`.
    ConditionalQuantile,
    /// Literal x-domain definition.
    Definition,
    /// Nested quantile integrals.
    Nested,
}

impl PopulationRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            PopulationRoute::PwmRepresentation => "pwm-quadrature",
            PopulationRoute::ConditionalQuantile => "conditional-quadrature",
            PopulationRoute::Definition => "definition-quadrature",
            PopulationRoute::Nested => "nested-quadrature",
        }
    }

    /// Route used by [`measure_population`] for `spec`.
    pub fn of(spec: &MeasureSpec) -> Self {
        use MeasureSpec as M;
        match spec {
            M::GmdLeft { .. } | M::GmdRight { .. } => PopulationRoute::Definition,
            M::JDyn { .. } | M::HDyn { .. } | M::MeanResidual { .. } | M::MeanPast { .. } => {
                PopulationRoute::ConditionalQuantile
            }
            M::Ge { .. } | M::Gce { .. } => PopulationRoute::Nested,
            _ => PopulationRoute::PwmRepresentation,
        }
    }
}

impl fmt::Display for PopulationRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn m(model: &ParametricModel, cfg: &QuadratureConfig, p: u32, r: f64, s: f64) -> Result<f64> {
    pwm_population(model, PwmIndex::new(p, r, s)?, cfg)
}

/// Population value of `spec` through the probability-domain route.
pub fn measure_population(
    model: &ParametricModel,
    spec: &MeasureSpec,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    spec.validate()?;
    cfg.validate()?;
    let pw = |p, r, s| m(model, cfg, p, r, s);
    use MeasureSpec as M;
    match *spec {
        M::Gmd => Ok(2.0 * pw(1, 1.0, 0.0)? - 2.0 * pw(1, 0.0, 1.0)?),
        M::GmdLeft { .. } | M::GmdRight { .. } => measure_definition(model, spec, cfg),
        M::SGini { v } => Ok(pw(1, 0.0, 0.0)? / v - pw(1, 0.0, v - 1.0)?),
        M::Crj | M::Ce => Ok(-pw(1, 0.0, 1.0)?),
        M::Cj => Ok(-pw(1, 1.0, 0.0)?),
        M::Crjw => Ok(-0.5 * pw(2, 1.0, 0.0)?),
        M::Wce => Ok(-0.5 * pw(2, 0.0, 1.0)?),
        M::JDyn { t } => {
            let (q, qb) = split_at(model, t)?;
            if qb == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            // J_t = -∫_0^1 (Q(q + q̄τ) - t)(1 - τ) dτ
            let v = integrate_u(
                |tau, taub| (model.quantile_pair(q + qb * tau, qb * taub) - t) * taub,
                cfg,
            )?;
            Ok(-v.value)
        }
        M::HDyn { t } => {
            let (q, qb) = split_at(model, t)?;
            if q == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            // H_t = -∫_0^1 (t - Q(qτ)) τ dτ
            let v = integrate_u(
                |tau, taub| (t - model.quantile_pair(q * tau, qb + q * taub)) * tau,
                cfg,
            )?;
            Ok(-v.value)
        }
        M::MeanResidual { t } => {
            let (q, qb) = split_at(model, t)?;
            if qb == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            let v = integrate_u(
                |tau, taub| model.quantile_pair(q + qb * tau, qb * taub) - t,
                cfg,
            )?;
            Ok(v.value)
        }
        M::MeanPast { t } => {
            let (q, qb) = split_at(model, t)?;
            if q == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            let v = integrate_u(
                |tau, taub| t - model.quantile_pair(q * tau, qb + q * taub),
                cfg,
            )?;
            Ok(v.value)
        }
        M::Crt { alpha } => {
            Ok((pw(1, 0.0, 0.0)? - alpha * pw(1, 0.0, alpha - 1.0)?) / (alpha - 1.0))
        }
        M::Ct { alpha } => {
            Ok((alpha * pw(1, alpha - 1.0, 0.0)? - pw(1, 0.0, 0.0)?) / (alpha - 1.0))
        }
        M::Wcrt { alpha } => {
            Ok((pw(2, 0.0, 0.0)? - alpha * pw(2, 0.0, alpha - 1.0)?) / (2.0 * (alpha - 1.0)))
        }
        M::Wct { alpha } => {
            Ok((alpha * pw(2, alpha - 1.0, 0.0)? - pw(2, 0.0, 0.0)?) / (2.0 * (alpha - 1.0)))
        }
        M::Sr { alpha, beta } => Ok((alpha * pw(1, 0.0, alpha - 1.0)?
            - beta * pw(1, 0.0, beta - 1.0)?)
            / (beta - alpha)),
        M::Sp { alpha, beta } => Ok((beta * pw(1, beta - 1.0, 0.0)?
            - alpha * pw(1, alpha - 1.0, 0.0)?)
            / (beta - alpha)),
        M::Srw { alpha, beta } => Ok((alpha * pw(2, 0.0, alpha - 1.0)?
            - beta * pw(2, 0.0, beta - 1.0)?)
            / (2.0 * (beta - alpha))),
        M::Spw { alpha, beta } => Ok((beta * pw(2, beta - 1.0, 0.0)?
            - alpha * pw(2, alpha - 1.0, 0.0)?)
            / (2.0 * (beta - alpha))),
        M::Ge { w, phi } => ge_population(model, w, phi, cfg),
        M::Gce { w, phi } => gce_population(model, w, phi, cfg),
        M::RiskPremium { k } => {
            let k = f64::from(k);
            Ok(pw(1, 0.0, 0.0)? - k * pw(1, 0.0, k - 1.0)?)
        }
        M::GainPremium { k } => {
            let k = f64::from(k);
            Ok(k * pw(1, k - 1.0, 0.0)? - pw(1, 0.0, 0.0)?)
        }
        M::Pwm(idx) => pwm_population(model, idx, cfg),
    }
}

/// `(F(t), F̄(t))` for a valid truncation point.
fn split_at(model: &ParametricModel, t: f64) -> Result<(f64, f64)> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::bad(format!(
            "t must be finite and non-negative, got {t}"
        )));
    }
    Ok((model.cdf(t), model.sf(t)))
}

/// Runs an outer integral whose integrand itself needs a fallible inner
/// computation; the first inner error is reported instead of a generic
/// convergence failure.
fn nested<F>(cfg: &QuadratureConfig, inner: F) -> Result<f64>
where
    F: Fn(f64, f64, &QuadratureConfig) -> Result<f64>,
{
    let inner_cfg = QuadratureConfig {
        abs_tol: (cfg.abs_tol * 0.1).max(1e-14),
        rel_tol: (cfg.rel_tol * 0.1).max(1e-14),
        ..*cfg
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let out = integrate_u(
        |u, ub| match inner(u, ub, &inner_cfg) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        cfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(out?.value)
}

/// `∫ w(F(u)) E[φ(X) - φ(u) | X > u] dF(u)`, evaluated as
/// `∫_0^1 w(q) (∫_0^1 φ(Q(q + q̄τ)) dτ - φ(Q(q))) dq`.
pub fn ge_population(
    model: &ParametricModel,
    w: Weight,
    phi: Phi,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    nested(cfg, |q, qb, icfg| {
        let weight = w.eval(q, qb);
        if weight == 0.0 {
            return Ok(0.0);
        }
        let here = phi.eval(model.quantile_pair(q, qb));
        let cond = integrate_u(
            |tau, taub| phi.eval(model.quantile_pair(q + qb * tau, qb * taub)) - here,
            icfg,
        )?;
        Ok(weight * cond.value)
    })
}

/// `∫ w(F(u)) E[φ(u) - φ(X) | X <= u] dF(u)`, evaluated as
/// `∫_0^1 w(q) (φ(Q(q)) - ∫_0^1 φ(Q(qτ)) dτ) dq`.
pub fn gce_population(
    model: &ParametricModel,
    w: Weight,
    phi: Phi,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    nested(cfg, |q, qb, icfg| {
        let weight = w.eval(q, qb);
        if weight == 0.0 {
            return Ok(0.0);
        }
        let here = phi.eval(model.quantile_pair(q, qb));
        let cond = integrate_u(
            |tau, taub| here - phi.eval(model.quantile_pair(q * tau, qb + q * taub)),
            icfg,
        )?;
        Ok(weight * cond.value)
    })
}

/// `1 - p^e` given `p` and `1 - p`, without cancellation.
fn one_minus_pow(p: f64, pbar: f64, e: f64) -> f64 {
    if p == 0.0 {
        return if e > 0.0 { 1.0 } else { f64::NEG_INFINITY };
    }
    let ln_p = if p > 0.5 { (-pbar).ln_1p() } else { p.ln() };
    -(e * ln_p).exp_m1()
}

/// `p - p^α = p (1 - p^{α-1})`, zero at `p = 0`.
fn p_minus_pow(p: f64, pbar: f64, alpha: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * one_minus_pow(p, pbar, alpha - 1.0)
    }
}

fn pow0(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// x-domain integration over `[a, b]`, broken at the support ends. Every
/// integrand handed in here vanishes beyond the upper support end.
fn x_integral<H: Fn(f64) -> f64>(
    model: &ParametricModel,
    h: H,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (lo, hi) = model.support();
    let b = b.min(hi);
    let mut total = 0.0;
    if a < lo {
        total += integrate_x(&h, a, lo.min(b), model.scale(), cfg)?.value;
    }
    let start = a.max(lo);
    if b > start {
        total += integrate_x(&h, start, b, model.scale(), cfg)?.value;
    }
    Ok(total)
}

/// Population value of `spec` by integrating its defining expression in `x`.
///
/// The generalized entropies have no separate x-domain form here and are
/// evaluated with the nested quantile route.
pub fn measure_definition(
    model: &ParametricModel,
    spec: &MeasureSpec,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    spec.validate()?;
    cfg.validate()?;
    let inf = f64::INFINITY;
    let xi = |h: &dyn Fn(f64) -> f64, a: f64, b: f64| x_integral(model, h, a, b, cfg);
    let cdf = |x: f64| model.cdf(x);
    let sf = |x: f64| model.sf(x);
    let pdf = |x: f64| model.pdf(x);
    use MeasureSpec as M;
    match *spec {
        M::Gmd => Ok(2.0 * xi(&|x| cdf(x) * sf(x), 0.0, inf)?),
        M::GmdLeft { t } => {
            let st = sf(t);
            if st == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            let v = xi(&|x| (st - 2.0 * sf(x)) * x * pdf(x), t, inf)?;
            Ok(v / (st * st))
        }
        M::GmdRight { t } => {
            let ft = cdf(t);
            if ft == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            let v = xi(&|x| (2.0 * cdf(x) - ft) * x * pdf(x), 0.0, t)?;
            Ok(v / (ft * ft))
        }
        M::SGini { v } => {
            let mu = xi(&sf, 0.0, inf)?;
            let cross = xi(
                &|x| {
                    let f = pdf(x);
                    if f == 0.0 {
                        0.0
                    } else {
                        x * pow0(sf(x), v - 1.0) * f
                    }
                },
                0.0,
                inf,
            )?;
            Ok(mu / v - cross)
        }
        M::Crj | M::Ce => Ok(-0.5 * xi(&|x| sf(x).powi(2), 0.0, inf)?),
        M::Cj => Ok(-0.5 * xi(&|x| sf(x) * (1.0 + cdf(x)), 0.0, inf)?),
        M::Crjw => Ok(-0.5 * xi(&|x| x * sf(x) * (1.0 + cdf(x)), 0.0, inf)?),
        M::Wce => Ok(-0.5 * xi(&|x| x * sf(x).powi(2), 0.0, inf)?),
        M::JDyn { t } => {
            let st = sf(t);
            if st == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            Ok(-0.5 * xi(&|x| sf(x).powi(2), t, inf)? / (st * st))
        }
        M::HDyn { t } => {
            let ft = cdf(t);
            if ft == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            Ok(-0.5 * xi(&|x| cdf(x).powi(2), 0.0, t)? / (ft * ft))
        }
        M::MeanResidual { t } => {
            let st = sf(t);
            if st == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            Ok(xi(&sf, t, inf)? / st)
        }
        M::MeanPast { t } => {
            let ft = cdf(t);
            if ft == 0.0 {
                return Err(Error::EmptyTail { t });
            }
            Ok(xi(&cdf, 0.0, t)? / ft)
        }
        M::Crt { alpha } => {
            let h = |x: f64| p_minus_pow(sf(x), cdf(x), alpha);
            Ok(xi(&h, 0.0, inf)? / (alpha - 1.0))
        }
        M::Ct { alpha } => {
            let h = |x: f64| p_minus_pow(cdf(x), sf(x), alpha);
            Ok(xi(&h, 0.0, inf)? / (alpha - 1.0))
        }
        M::Wcrt { alpha } => {
            let h = |x: f64| x * p_minus_pow(sf(x), cdf(x), alpha);
            Ok(xi(&h, 0.0, inf)? / (alpha - 1.0))
        }
        M::Wct { alpha } => {
            let h = |x: f64| x * p_minus_pow(cdf(x), sf(x), alpha);
            Ok(xi(&h, 0.0, inf)? / (alpha - 1.0))
        }
        // F̄^α - F̄^β = F̄^α (1 - F̄^{β-α})
        M::Sr { alpha, beta } => {
            let h = |x: f64| stm_term(sf(x), cdf(x), alpha, beta);
            Ok(xi(&h, 0.0, inf)? / (beta - alpha))
        }
        M::Sp { alpha, beta } => {
            let h = |x: f64| stm_term(cdf(x), sf(x), alpha, beta);
            Ok(xi(&h, 0.0, inf)? / (beta - alpha))
        }
        M::Srw { alpha, beta } => {
            let h = |x: f64| x * stm_term(sf(x), cdf(x), alpha, beta);
            Ok(xi(&h, 0.0, inf)? / (beta - alpha))
        }
        M::Spw { alpha, beta } => {
            let h = |x: f64| x * stm_term(cdf(x), sf(x), alpha, beta);
            Ok(xi(&h, 0.0, inf)? / (beta - alpha))
        }
        M::Ge { w, phi } => ge_population(model, w, phi, cfg),
        M::Gce { w, phi } => gce_population(model, w, phi, cfg),
        M::RiskPremium { k } => {
            let k = f64::from(k);
            xi(&|x| p_minus_pow(sf(x), cdf(x), k), 0.0, inf)
        }
        M::GainPremium { k } => {
            let k = f64::from(k);
            xi(&|x| p_minus_pow(cdf(x), sf(x), k), 0.0, inf)
        }
        M::Pwm(idx) => {
            if let Some(a) = model.tail_index() {
                if idx.s - f64::from(idx.p) / a <= -1.0 {
                    return Err(Error::unsupported(format!("{idx} is infinite for {model}")));
                }
            }
            let h = |x: f64| {
                let f = pdf(x);
                if f == 0.0 {
                    0.0
                } else {
                    x.powi(idx.p as i32) * pow0(cdf(x), idx.r) * pow0(sf(x), idx.s) * f
                }
            };
            xi(&h, 0.0, inf)
        }
    }
}

/// `p^α - p^β` from `p` and `1 - p`.
fn stm_term(p: f64, pbar: f64, alpha: f64, beta: f64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    p.powf(alpha) * one_minus_pow(p, pbar, beta - alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn unif() -> ParametricModel {
        ParametricModel::uniform(0.0, 1.0).unwrap()
    }

    fn exp1() -> ParametricModel {
        ParametricModel::exponential(1.0).unwrap()
    }

    fn both(model: &ParametricModel, spec: MeasureSpec) -> (f64, f64) {
        (
            measure_population(model, &spec, &cfg()).unwrap(),
            measure_definition(model, &spec, &cfg()).unwrap(),
        )
    }

    fn assert_close(got: f64, want: f64, what: &str) {
        assert!((got - want).abs() < 1e-9, "{what}: got {got}, want {want}");
    }

    #[test]
    fn closed_forms_on_exponential() {
        let e = exp1();
        for (spec, want) in [
            (MeasureSpec::Gmd, 1.0),
            (MeasureSpec::Crj, -0.25),
            (MeasureSpec::Cj, -0.75),
            (MeasureSpec::Crt { alpha: 2.0 }, 0.5),
            (MeasureSpec::SGini { v: 2.0 }, 0.25),
            (MeasureSpec::JDyn { t: 2.0 }, -0.25),
            (MeasureSpec::MeanResidual { t: 0.7 }, 1.0),
            (
                MeasureSpec::Sr {
                    alpha: 1.0,
                    beta: 2.0,
                },
                0.5,
            ),
            (MeasureSpec::RiskPremium { k: 3 }, 1.0 - 1.0 / 3.0),
            (MeasureSpec::GainPremium { k: 2 }, 0.5),
            // E X² = 2, E[X²F̄] = ∫x²e^{-2x} = 1/4
            (MeasureSpec::Wce, -0.125),
            (MeasureSpec::Crjw, -0.5 * (2.0 - 0.25) + 0.0),
        ] {
            let (p, d) = both(&e, spec);
            assert_close(p, want, &format!("population {spec}"));
            assert_close(d, want, &format!("definition {spec}"));
        }
    }

    #[test]
    fn closed_forms_on_uniform() {
        let u = unif();
        for (spec, want) in [
            (MeasureSpec::Gmd, 1.0 / 3.0),
            (MeasureSpec::Crj, -1.0 / 6.0),
            (MeasureSpec::Cj, -1.0 / 3.0),
            (MeasureSpec::Ct { alpha: 2.0 }, 1.0 / 6.0),
            (MeasureSpec::HDyn { t: 0.25 }, -0.25 / 6.0),
            (MeasureSpec::HDyn { t: 0.9 }, -0.9 / 6.0),
            (MeasureSpec::MeanPast { t: 0.5 }, 0.25),
            (MeasureSpec::GmdRight { t: 0.5 }, 0.5 / 6.0),
            (MeasureSpec::GmdLeft { t: 0.4 }, 0.6 / 6.0),
            (
                MeasureSpec::Pwm(PwmIndex {
                    p: 1,
                    r: 1.0,
                    s: 0.0,
                }),
                1.0 / 3.0,
            ),
            (
                MeasureSpec::Pwm(PwmIndex {
                    p: 1,
                    r: 0.0,
                    s: 1.0,
                }),
                1.0 / 6.0,
            ),
            (
                MeasureSpec::Pwm(PwmIndex {
                    p: 0,
                    r: 0.0,
                    s: 0.0,
                }),
                1.0,
            ),
        ] {
            let (p, d) = both(&u, spec);
            assert_close(p, want, &format!("population {spec}"));
            assert_close(d, want, &format!("definition {spec}"));
        }
    }

    #[test]
    fn routes_agree_across_families() {
        let models = [
            unif(),
            exp1(),
            ParametricModel::weibull(0.5, 1.0).unwrap(),
            ParametricModel::weibull(2.0, 1.0).unwrap(),
            ParametricModel::pareto(3.0, 1.0).unwrap(),
        ];
        let specs = [
            MeasureSpec::Gmd,
            MeasureSpec::SGini { v: 0.5 },
            MeasureSpec::SGini { v: 3.0 },
            MeasureSpec::Crjw,
            MeasureSpec::Wce,
            MeasureSpec::Crt { alpha: 2.5 },
            MeasureSpec::Crt { alpha: 0.8 },
            MeasureSpec::Ct { alpha: 3.0 },
            MeasureSpec::Wcrt { alpha: 2.0 },
            MeasureSpec::Wct { alpha: 2.5 },
            MeasureSpec::Sp {
                alpha: 2.0,
                beta: 3.5,
            },
            MeasureSpec::Srw {
                alpha: 1.0,
                beta: 2.0,
            },
            MeasureSpec::Spw {
                alpha: 2.0,
                beta: 3.5,
            },
            MeasureSpec::RiskPremium { k: 3 },
            MeasureSpec::GainPremium { k: 3 },
        ];
        for model in &models {
            for spec in specs {
                let (p, d) = both(model, spec);
                assert!(
                    (p - d).abs() < 1e-8 * p.abs().max(1.0),
                    "{model} {spec}: {p} vs {d}"
                );
            }
            let t = model.quantile(0.6);
            for spec in [
                MeasureSpec::JDyn { t },
                MeasureSpec::HDyn { t },
                MeasureSpec::MeanResidual { t },
                MeasureSpec::MeanPast { t },
            ] {
                let (p, d) = both(model, spec);
                assert!(
                    (p - d).abs() < 1e-8 * p.abs().max(1.0),
                    "{model} {spec}: {p} vs {d}"
                );
            }
        }
    }

    #[test]
    fn generalized_entropy_reduces_to_gmd() {
        for model in [unif(), exp1(), ParametricModel::pareto(3.0, 1.0).unwrap()] {
            let g = measure_population(&model, &MeasureSpec::Gmd, &cfg()).unwrap();
            let ge =
                ge_population(&model, Weight::Survival(1.0), Phi::linear(2.0), &cfg()).unwrap();
            let gce = gce_population(&model, Weight::Cdf(1.0), Phi::linear(2.0), &cfg()).unwrap();
            assert!((ge - g).abs() < 1e-8, "{model}: {ge} vs {g}");
            assert!((gce - g).abs() < 1e-8, "{model}: {gce} vs {g}");
        }
    }

    #[test]
    fn errors_are_reported() {
        let u = unif();
        assert!(matches!(
            measure_population(&u, &MeasureSpec::JDyn { t: 1.0 }, &cfg()),
            Err(Error::EmptyTail { .. })
        ));
        assert!(matches!(
            measure_definition(&u, &MeasureSpec::HDyn { t: 0.0 }, &cfg()),
            Err(Error::EmptyTail { .. })
        ));
        let p = ParametricModel::pareto(3.0, 1.0).unwrap();
        let idx = PwmIndex {
            p: 4,
            r: 0.0,
            s: 0.0,
        };
        assert!(matches!(
            measure_population(&p, &MeasureSpec::Pwm(idx), &cfg()),
            Err(Error::UnsupportedSpec(_))
        ));
        assert!(measure_population(&u, &MeasureSpec::Crt { alpha: 1.0 }, &cfg()).is_err());
    }

    #[test]
    fn scale_equivariance() {
        for model in [unif(), exp1(), ParametricModel::weibull(2.0, 1.0).unwrap()] {
            let c = 2.5;
            let scaled = model.scaled(c).unwrap();
            let g = measure_population(&model, &MeasureSpec::Gmd, &cfg()).unwrap();
            let gs = measure_population(&scaled, &MeasureSpec::Gmd, &cfg()).unwrap();
            assert!((gs - c * g).abs() < 1e-9);
            let idx = PwmIndex {
                p: 2,
                r: 1.0,
                s: 0.5,
            };
            let w = pwm_population(&model, idx, &cfg()).unwrap();
            let ws = pwm_population(&scaled, idx, &cfg()).unwrap();
            assert!((ws - c * c * w).abs() < 1e-9 * ws.abs().max(1.0));
        }
    }
}
