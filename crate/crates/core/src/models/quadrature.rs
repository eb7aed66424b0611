//! Adaptive Gauss–Kronrod (G10/K21) quadrature with endpoint-singularity
//! handling.
//!
//! Every integral in the crate is reduced to `∫_0^H g(z) dz` where `g` may be
//! unbounded (integrably) at `z = 0`. The substitution `z = H e^{-y}` turns
//! algebraic and logarithmic endpoint singularities into exponentially
//! decaying integrands on `[0, Y]`, `Y = ln(1/ε)`. The sliver `[0, εH]` is
//! continued numerically down to `ε⁴H`; what remains is closed with a
//! power-law tail estimate `g(z₁) z₁ / (1 + γ)`, where `γ` is read off
//! `g(z₁)` and `g(z₁/2)`. A non-integrable endpoint (`γ <= -1`) is reported
//! as a convergence failure.

use crate::error::{Error, Result};

/// Tolerances and budgets for [`integrate_u`] and [`integrate_x`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Endpoint clip ε; the piece within ε of a singular endpoint is replaced
    /// by an analytic power-law tail estimate.
    pub u_clip: f64,
    /// Maximum number of subintervals per adaptive run.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            u_clip: 1e-12,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.u_clip > 0.0 && self.u_clip < 1e-6) {
            return Err(Error::bad("u_clip must lie in (0, 1e-6)"));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::bad("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::bad("max_subdivisions must be positive"));
        }
        Ok(())
    }

    /// Same config with both tolerances set to `tol`.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }
}

/// Result of a quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Estimated absolute error of the adaptive part.
    pub error: f64,
    /// Magnitude of the analytic endpoint-tail corrections that were added.
    pub tail: f64,
}

impl Integral {
    fn zero() -> Self {
        Integral {
            value: 0.0,
            error: 0.0,
            tail: 0.0,
        }
    }

    fn add(self, other: Integral) -> Integral {
        Integral {
            value: self.value + other.value,
            error: self.error + other.error,
            tail: self.tail + other.tail,
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_808_341,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod abscissae.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// One 21-point Kronrod panel with embedded 10-point Gauss error estimate.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let h = half.abs();
    let value = res_k * half;
    if !value.is_finite() {
        return (value, f64::INFINITY);
    }
    (value, rescale_error(err, res_abs * h, res_asc * h))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Globally adaptive bisection on `[a, b]`.
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64)> {
    let (v, e) = gk21(f, a, b);
    let mut panels = vec![Panel {
        a,
        b,
        value: v,
        error: e,
    }];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if !total.is_finite() || err.is_nan() {
            return Err(Error::NoConvergence(
                "integrand produced a non-finite value".into(),
            ));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok((total, err));
        }
        if panels.len() >= max_subdivisions {
            return Err(Error::NoConvergence(format!(
                "subdivision budget of {max_subdivisions} exhausted (estimate {total:e}, error {err:e})"
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::NoConvergence("interval too narrow to bisect".into()));
        }
        let (v1, e1) = gk21(f, p.a, mid);
        let (v2, e2) = gk21(f, mid, p.b);
        panels.push(Panel {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
        });
        panels.push(Panel {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
}

const TAIL_DEPTH: f64 = 4.0;

/// `∫_0^h g(z) dz` for `g` possibly singular (but integrable) at `z = 0`.
///
/// `floor` is the smallest `z` at which `g` can still be resolved (non-zero
/// when `z` is an offset from a non-zero endpoint); below it only the
/// power-law model is used.
fn integrate_from_singular<G: Fn(f64) -> f64>(
    g: &G,
    h: f64,
    clip: f64,
    floor: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Integral> {
    if h <= 0.0 {
        return Ok(Integral::zero());
    }
    let y_deep = (TAIL_DEPTH * (1.0 / clip).ln())
        .min((h / floor).ln())
        .max(0.0);
    let y_max = (1.0 / clip).ln().min(y_deep);
    let mapped = |y: f64| {
        let z = h * (-y).exp();
        let v = g(z);
        if v == 0.0 {
            0.0
        } else {
            v * z
        }
    };
    let (value, error) = adaptive(&mapped, 0.0, y_max, abs_tol, rel_tol, max_subdivisions)?;
    // The sliver below εh is continued numerically down to ε⁴h, so slowly
    // varying factors such as ln(1/z) are resolved; only the remainder below
    // that relies on the power-law model.
    let (cont, cont_err) = if y_deep > y_max {
        // tolerance relative to the whole integral, not to the sliver
        let tol = (0.5 * abs_tol).max(rel_tol * value.abs());
        adaptive(&mapped, y_max, y_deep, tol, rel_tol, max_subdivisions)?
    } else {
        (0.0, 0.0)
    };
    let z1 = h * (-y_deep).exp();
    let negligible = 1e-3 * abs_tol.max(rel_tol * (value + cont).abs());
    let rest = power_law_tail(g(z1), g(0.5 * z1), z1, negligible)?;
    Ok(Integral {
        value: value + cont + rest,
        error: error + cont_err,
        tail: cont.abs() + rest.abs(),
    })
}

/// `∫_0^z1 g` assuming `g(z) ≈ C z^γ` below `z1`.
///
/// When `|g(z1) z1|` is below `negligible` the remainder cannot matter and the
/// exponent is not trusted: such values are often pure rounding noise from
/// cancellation near the endpoint.
fn power_law_tail(g1: f64, g2: f64, z1: f64, negligible: f64) -> Result<f64> {
    if g1 == 0.0 && g2 == 0.0 {
        return Ok(0.0);
    }
    if !g1.is_finite() || !g2.is_finite() {
        return Err(Error::NoConvergence(
            "integrand is not finite near the endpoint".into(),
        ));
    }
    if (g1 * z1).abs() <= negligible && (g2 * z1).abs() <= negligible {
        return Ok(0.0);
    }
    if g1.signum() == g2.signum() && g1 != 0.0 && g2 != 0.0 {
        let gamma = (g1 / g2).log2();
        if gamma <= -1.0 + 1e-9 {
            return Err(Error::NoConvergence(format!(
                "integrand grows like z^{gamma:.3} at the endpoint and is not integrable"
            )));
        }
        return Ok(g1 * z1 / (1.0 + gamma));
    }
    Ok(g1 * z1)
}

/// `∫_0^1 f(u, 1-u) du`.
///
/// The integrand receives both `u` and its complement `1 - u`, each computed
/// without cancellation, so quantiles can be evaluated accurately in both
/// tails.
pub fn integrate_u<F: Fn(f64, f64) -> f64>(f: F, cfg: &QuadratureConfig) -> Result<Integral> {
    let abs = 0.5 * cfg.abs_tol;
    let lower = integrate_from_singular(
        &|u: f64| f(u, 1.0 - u),
        0.5,
        2.0 * cfg.u_clip,
        0.0,
        abs,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    let upper = integrate_from_singular(
        &|w: f64| f(1.0 - w, w),
        0.5,
        2.0 * cfg.u_clip,
        0.0,
        abs,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    Ok(lower.add(upper))
}

/// `∫_a^b h(x) dx` over a finite or semi-infinite (`b = +inf`) interval.
/// `scale` is a characteristic length of the integrand used to split a
/// semi-infinite range; any positive value is valid.
pub fn integrate_x<H: Fn(f64) -> f64>(
    h: H,
    a: f64,
    b: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    if b.is_nan() || a.is_nan() || !a.is_finite() {
        return Err(Error::bad(
            "integration limits must be numbers with a finite lower limit",
        ));
    }
    if b <= a {
        return Ok(Integral::zero());
    }
    if b.is_finite() {
        return finite(&h, a, b, cfg, cfg.abs_tol);
    }
    let scale = if scale > 0.0 && scale.is_finite() {
        scale
    } else {
        1.0
    };
    let abs = 0.5 * cfg.abs_tol;
    let head = finite(&h, a, a + scale, cfg, abs)?;
    let tail = integrate_from_singular(
        &|s: f64| {
            let x = a + scale / s;
            let v = h(x);
            if v == 0.0 {
                0.0
            } else {
                v * scale / (s * s)
            }
        },
        1.0,
        cfg.u_clip,
        0.0,
        abs,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    Ok(head.add(tail))
}

/// Smallest offset from `x` that is still resolved to about four digits.
fn resolution(x: f64) -> f64 {
    1e4 * f64::EPSILON * x.abs()
}

fn finite<H: Fn(f64) -> f64>(
    h: &H,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    abs_tol: f64,
) -> Result<Integral> {
    let half = 0.5 * (b - a);
    let left = integrate_from_singular(
        &|z: f64| h(a + z),
        half,
        cfg.u_clip,
        resolution(a),
        0.5 * abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    let right = integrate_from_singular(
        &|z: f64| h(b - z),
        half,
        cfg.u_clip,
        resolution(b),
        0.5 * abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    Ok(left.add(right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn panel_is_exact_for_polynomials() {
        // K21 integrates degree <= 31 exactly; G10 degree <= 19.
        for deg in 0..=19 {
            let f = |x: f64| x.powi(deg);
            let (v, _) = gk21(&f, 0.0, 1.0);
            assert!((v - 1.0 / f64::from(deg + 1)).abs() < 1e-14, "deg {deg}");
        }
        let (v, e) = gk21(&|x: f64| x.powi(30), -1.0, 1.0);
        assert!((v - 2.0 / 31.0).abs() < 1e-14);
        assert!(e > 0.0);
    }

    #[test]
    fn constants_and_polynomials_on_unit_interval() {
        let one = integrate_u(|_, _| 1.0, &cfg()).unwrap();
        assert!((one.value - 1.0).abs() < 2e-12);
        let lin = integrate_u(|u, _| u, &cfg()).unwrap();
        assert!((lin.value - 0.5).abs() < 1e-12);
        let cub = integrate_u(|u, ub| u * u * ub, &cfg()).unwrap();
        assert!((cub.value - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_quantile_integrates_to_mean() {
        let r = integrate_u(
            |u, ub| if u < 0.5 { -(-u).ln_1p() } else { -ub.ln() },
            &cfg(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn algebraic_endpoint_singularity() {
        // ∫ (1-u)^{-2/3} du = 3; most of the clipped mass is recovered by the
        // tail estimate.
        let r = integrate_u(|_, ub| ub.powf(-2.0 / 3.0), &cfg()).unwrap();
        assert!((r.value - 3.0).abs() < 1e-9, "{}", r.value);
        assert!(r.tail > 1e-5);
        // ∫ u^{-1/2} du = 2
        let r = integrate_u(|u, _| u.powf(-0.5), &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn divergent_integrand_is_reported() {
        let r = integrate_u(|_, ub| 1.0 / ub, &cfg());
        assert!(matches!(r, Err(Error::NoConvergence(_))));
    }

    #[test]
    fn tiny_budget_fails() {
        let mut c = cfg();
        c.max_subdivisions = 1;
        let r = integrate_u(|u, _| (40.0 * u).sin(), &c);
        assert!(matches!(r, Err(Error::NoConvergence(_))));
    }

    #[test]
    fn semi_infinite_ranges() {
        let r = integrate_x(|x: f64| (-x).exp(), 0.0, f64::INFINITY, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        // heavy tail x^{-3/2} on [1, inf) = 2
        let r = integrate_x(|x: f64| x.powf(-1.5), 1.0, f64::INFINITY, 1.0, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
        // mismatched scale still fine
        let r = integrate_x(
            |x: f64| (-(x - 50.0)).exp(),
            50.0,
            f64::INFINITY,
            1e3,
            &cfg(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn finite_range_with_sqrt_singularity() {
        let r = integrate_x(|x: f64| x.powf(-0.5), 0.0, 4.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 4.0).abs() < 1e-9);
        let r = integrate_x(|x: f64| x * x, 1.0, 2.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        let mut c = cfg();
        c.u_clip = 1e-3;
        assert!(c.validate().is_err());
        c = cfg();
        c.abs_tol = 0.0;
        assert!(c.validate().is_err());
    }
}
