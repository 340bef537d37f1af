//! Tempered relaxation `phi(t) = Gamma(rho; lambda t) / Gamma(rho)`, the
//! convolution-type derivative it solves, and its spectral distribution.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::quad::{self, QuadError};
use crate::specfun::{self, SpecfunError};
use crate::verify::VerificationReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelaxationError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("kernel is not integrable at 0 (estimated singularity order {order:.3} >= 1)")]
    KernelSingularity { order: f64 },
    #[error("Laplace integral did not converge: {0}")]
    TailDivergence(String),
    #[error("rho = 1: the spectral measure is a unit point mass at z = {at}")]
    PointMass { at: f64 },
    #[error(transparent)]
    Special(#[from] SpecfunError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// `(lambda, rho)` with `lambda > 0`, `0 < rho <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationParams {
    lambda: f64,
    rho: f64,
}

impl RelaxationParams {
    pub fn new(lambda: f64, rho: f64) -> Result<Self, RelaxationError> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(RelaxationError::InvalidParams(format!("lambda = {lambda} must be > 0")));
        }
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(RelaxationError::InvalidParams(format!("rho = {rho} must satisfy 0 < rho <= 1")));
        }
        Ok(Self { lambda, rho })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

fn check_time(t: f64) -> Result<(), RelaxationError> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(RelaxationError::InvalidParams(format!("t = {t} must be a finite nonnegative time")))
    }
}

/// `phi(t) = Gamma(rho; lambda t) / Gamma(rho)`.
pub fn phi(p: RelaxationParams, t: f64) -> Result<f64, RelaxationError> {
    check_time(t)?;
    Ok(specfun::gamma_q(p.rho, p.lambda * t)?)
}

/// `1 - e^{-lambda t} (lambda t)^rho E_{1, rho+1}(lambda t)`.
pub fn phi_ml_form(p: RelaxationParams, t: f64) -> Result<f64, RelaxationError> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let x = p.lambda * t;
    let e = specfun::mittag_leffler(1.0, p.rho + 1.0, x)?;
    Ok(1.0 - (-x + p.rho * x.ln()).exp() * e)
}

/// `1 - (lambda t)^rho / Gamma(rho + 1)`.
pub fn small_t_asymptote(p: RelaxationParams, t: f64) -> Result<f64, RelaxationError> {
    check_time(t)?;
    Ok(1.0 - (p.lambda * t).powf(p.rho) * specfun::rgamma(p.rho + 1.0)?)
}

/// `e^{-lambda t} (lambda t)^{rho - 1} / Gamma(rho)`.
pub fn large_t_asymptote(p: RelaxationParams, t: f64) -> Result<f64, RelaxationError> {
    check_time(t)?;
    let x = p.lambda * t;
    Ok((-x + (p.rho - 1.0) * x.ln()).exp() * specfun::rgamma(p.rho)?)
}

/// `phi'(t) = -lambda^rho t^{rho-1} e^{-lambda t} / Gamma(rho)`.
pub fn phi_derivative(p: RelaxationParams, t: f64) -> Result<f64, RelaxationError> {
    if !(t > 0.0) {
        return Err(RelaxationError::InvalidParams(format!("t = {t} must be positive")));
    }
    let l = p.rho * p.lambda.ln() + (p.rho - 1.0) * t.ln() - p.lambda * t - specfun::ln_gamma(p.rho)?;
    Ok(-l.exp())
}

// ---------------------------------------------------------------------------
// Functions the derivative acts on

/// A function with an available first derivative on `t > 0`.
pub trait Differentiable: Sync {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
}

/// Pair of closures `(u, u')`.
pub struct FnPair<F, G> {
    pub value: F,
    pub derivative: G,
}

impl<F, G> Differentiable for FnPair<F, G>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }
    fn derivative(&self, t: f64) -> f64 {
        (self.derivative)(t)
    }
}

/// The tempered relaxation function itself.
#[derive(Debug, Clone, Copy)]
pub struct Relaxation(pub RelaxationParams);

impl Differentiable for Relaxation {
    fn value(&self, t: f64) -> f64 {
        phi(self.0, t).unwrap_or(f64::NAN)
    }
    fn derivative(&self, t: f64) -> f64 {
        phi_derivative(self.0, t).unwrap_or(f64::NAN)
    }
}

/// `e^{-rate t}`.
#[derive(Debug, Clone, Copy)]
pub struct ExpDecay(pub f64);

impl Differentiable for ExpDecay {
    fn value(&self, t: f64) -> f64 {
        (-self.0 * t).exp()
    }
    fn derivative(&self, t: f64) -> f64 {
        -self.0 * (-self.0 * t).exp()
    }
}

/// `t^k`, `k >= 1`.
#[derive(Debug, Clone, Copy)]
pub struct Monomial(pub i32);

impl Differentiable for Monomial {
    fn value(&self, t: f64) -> f64 {
        t.powi(self.0)
    }
    fn derivative(&self, t: f64) -> f64 {
        self.0 as f64 * t.powi(self.0 - 1)
    }
}

/// Fractional relaxation `E_alpha(-rate t^alpha)`.
#[derive(Debug, Clone, Copy)]
pub struct MittagLefflerDecay {
    pub alpha: f64,
    pub rate: f64,
}

impl Differentiable for MittagLefflerDecay {
    fn value(&self, t: f64) -> f64 {
        specfun::mittag_leffler(self.alpha, 1.0, -self.rate * t.powf(self.alpha)).unwrap_or(f64::NAN)
    }
    fn derivative(&self, t: f64) -> f64 {
        let z = -self.rate * t.powf(self.alpha);
        -self.rate * t.powf(self.alpha - 1.0) * specfun::mittag_leffler(self.alpha, self.alpha, z).unwrap_or(f64::NAN)
    }
}

// ---------------------------------------------------------------------------
// Bernstein functions and the convolution-type derivative

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Bernstein function `g(theta) = a + b theta + theta int_0^inf e^{-theta s} nu(s) ds`
/// given by its drifts, Lévy tail `nu` and symbol `g`.
#[derive(Clone)]
pub struct BernsteinDescriptor {
    pub drift_a: f64,
    pub drift_b: f64,
    levy_tail: Option<Scalar>,
    symbol: Scalar,
    label: String,
}

impl fmt::Debug for BernsteinDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BernsteinDescriptor")
            .field("label", &self.label)
            .field("drift_a", &self.drift_a)
            .field("drift_b", &self.drift_b)
            .finish()
    }
}

impl BernsteinDescriptor {
    pub fn new(
        label: impl Into<String>,
        drift_a: f64,
        drift_b: f64,
        levy_tail: Option<Scalar>,
        symbol: Scalar,
    ) -> Result<Self, RelaxationError> {
        if !(drift_a >= 0.0 && drift_b >= 0.0) {
            return Err(RelaxationError::InvalidParams("drifts must be nonnegative".into()));
        }
        Ok(Self { drift_a, drift_b, levy_tail, symbol, label: label.into() })
    }

    /// `g(theta) = theta`: the ordinary first derivative.
    pub fn identity() -> Self {
        Self { drift_a: 0.0, drift_b: 1.0, levy_tail: None, symbol: Arc::new(|th| th), label: "identity".into() }
    }

    /// `g(theta) = theta^alpha`, tail `s^{-alpha} / Gamma(1 - alpha)`.
    pub fn caputo(alpha: f64) -> Result<Self, RelaxationError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(RelaxationError::InvalidParams(format!("alpha = {alpha} must be in (0, 1)")));
        }
        let c = specfun::rgamma(1.0 - alpha)?;
        Ok(Self {
            drift_a: 0.0,
            drift_b: 0.0,
            levy_tail: Some(Arc::new(move |s: f64| c * s.powf(-alpha))),
            symbol: Arc::new(move |th: f64| th.powf(alpha)),
            label: format!("caputo(alpha={alpha})"),
        })
    }

    /// `g(theta) = (lambda + theta)^rho - lambda^rho`, tail
    /// `rho lambda^rho Gamma(-rho; lambda s) / Gamma(1 - rho)`.
    pub fn tempered(p: RelaxationParams) -> Result<Self, RelaxationError> {
        let (lambda, rho) = (p.lambda, p.rho);
        if rho == 1.0 {
            return Ok(Self::identity());
        }
        let c = rho * lambda.powf(rho) * specfun::rgamma(1.0 - rho)?;
        Ok(Self {
            drift_a: 0.0,
            drift_b: 0.0,
            levy_tail: Some(Arc::new(move |s: f64| c * specfun::gamma_upper(-rho, lambda * s).unwrap_or(f64::NAN))),
            symbol: Arc::new(move |th: f64| (lambda + th).powf(rho) - lambda.powf(rho)),
            label: format!("tempered(lambda={lambda}, rho={rho})"),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn symbol(&self, theta: f64) -> f64 {
        (self.symbol)(theta)
    }

    pub fn levy_tail(&self, s: f64) -> f64 {
        self.levy_tail.as_ref().map_or(0.0, |nu| nu(s))
    }

    /// Power-law order `p` of `nu(s) ~ s^{-p}` as `s -> 0`, estimated from
    /// two points deep in the singular regime.
    pub fn singularity_order(&self) -> Result<f64, RelaxationError> {
        let Some(nu) = &self.levy_tail else { return Ok(0.0) };
        let (s1, s2) = (1e-14, 1e-12);
        let (v1, v2) = (nu(s1), nu(s2));
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(RelaxationError::KernelSingularity { order: f64::INFINITY });
        }
        if v1 <= 0.0 || v2 <= 0.0 {
            return Ok(0.0);
        }
        Ok((v1 / v2).ln() / (s2 / s1).ln())
    }

    /// Largest `|g(theta) - a - b theta - theta int e^{-theta s} nu(s) ds|`
    /// over the given `theta` values.
    pub fn symbol_residual(&self, thetas: &[f64]) -> Result<f64, RelaxationError> {
        let mut worst = 0.0f64;
        for &th in thetas {
            let integral = match &self.levy_tail {
                Some(nu) => quad::exp_sinh(|s, d| (-th * s).exp() * nu(d), 0.0, 1e-12, 1e-15)?,
                None => 0.0,
            };
            let rhs = self.drift_a + self.drift_b * th + th * integral;
            worst = worst.max((self.symbol(th) - rhs).abs());
        }
        Ok(worst)
    }

    /// Whether `nu` is nonincreasing on a log grid over `[1e-8, 1e3]`.
    pub fn tail_is_monotone(&self) -> bool {
        let Some(nu) = &self.levy_tail else { return true };
        let mut prev = f64::INFINITY;
        for i in 0..=110 {
            let s = 10f64.powf(-8.0 + 0.1 * i as f64);
            let v = nu(s);
            if !(v <= prev * (1.0 + 1e-12)) {
                return false;
            }
            prev = v;
        }
        true
    }
}

/// `D^g u(t) = b u'(t) + int_0^t u'(t - s) (nu(s) + a) ds`.
///
/// The convolution is integrated with tanh-sinh over `[0, t]`; the rule
/// delivers both `s` and `t - s` to full relative precision, so the
/// integrable singularities of `nu` at `s = 0` and of `u'` at `t - s = 0`
/// are resolved without splitting.
pub fn conv_derivative<U: Differentiable + ?Sized>(
    g: &BernsteinDescriptor,
    u: &U,
    t: f64,
) -> Result<f64, RelaxationError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(RelaxationError::InvalidParams(format!("t = {t} must be positive")));
    }
    let mut value = g.drift_b * u.derivative(t);
    if let Some(nu) = &g.levy_tail {
        let order = g.singularity_order()?;
        if order >= 1.0 - 1e-6 {
            return Err(RelaxationError::KernelSingularity { order });
        }
        let a = g.drift_a;
        value += quad::tanh_sinh(|_, s, tau| u.derivative(tau) * (nu(s) + a), 0.0, t, 1e-12, 1e-15)?;
    } else if g.drift_a != 0.0 {
        value += g.drift_a * (u.value(t) - u.value(0.0));
    }
    Ok(value)
}

/// Tempered derivative with kernel `rho lambda^rho Gamma(-rho; lambda s) / Gamma(1-rho)`;
/// the ordinary derivative at `rho = 1`.
pub fn tempered_derivative<U: Differentiable + ?Sized>(
    p: RelaxationParams,
    u: &U,
    t: f64,
) -> Result<f64, RelaxationError> {
    conv_derivative(&BernsteinDescriptor::tempered(p)?, u, t)
}

/// Both sides of the Laplace identity
/// `int_0^inf e^{-theta t} D^g u(t) dt = g(theta) u~(theta) - g(theta) u(0) / theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceComparison {
    pub numeric: f64,
    pub formula: f64,
}

/// Numeric Laplace transform of `D^g u` compared with the symbol formula.
pub fn laplace_of_conv_derivative<U: Differentiable + ?Sized>(
    g: &BernsteinDescriptor,
    u: &U,
    theta: f64,
) -> Result<LaplaceComparison, RelaxationError> {
    if !(theta > 0.0) {
        return Err(RelaxationError::InvalidParams(format!("theta = {theta} must be positive")));
    }
    let div = |e: QuadError| RelaxationError::TailDivergence(e.to_string());
    let numeric = quad::exp_sinh(
        |t, _| {
            let w = (-theta * t).exp();
            // below 1e-100 the integrable t^{-rho} head contributes < 1e-50
            if w == 0.0 || t < 1e-100 {
                0.0
            } else {
                w * conv_derivative(g, u, t).unwrap_or(f64::NAN)
            }
        },
        0.0,
        1e-10,
        1e-14,
    )
    .map_err(div)?;
    let u_tilde = quad::exp_sinh(|t, _| (-theta * t).exp() * u.value(t), 0.0, 1e-13, 1e-16).map_err(div)?;
    let gt = g.symbol(theta);
    Ok(LaplaceComparison { numeric, formula: gt * u_tilde - gt * u.value(0.0) / theta })
}

/// `int_0^inf e^{-theta t} phi(t) dt` by quadrature.
pub fn laplace_of_phi(p: RelaxationParams, theta: f64) -> Result<f64, RelaxationError> {
    quad::exp_sinh(|t, _| (-theta * t).exp() * phi(p, t).unwrap_or(f64::NAN), 0.0, 1e-13, 1e-16)
        .map_err(|e| RelaxationError::TailDivergence(e.to_string()))
}

/// `((lambda + theta)^rho - lambda^rho) / (theta (lambda + theta)^rho)`.
pub fn laplace_of_phi_formula(p: RelaxationParams, theta: f64) -> f64 {
    let r = (p.lambda / (p.lambda + theta)).powf(p.rho);
    (1.0 - r) / theta
}

// ---------------------------------------------------------------------------
// Spectral distribution

/// Normalized spectral density
/// `K(z) = lambda^rho (z - lambda)^{-rho} / (Gamma(rho) Gamma(1 - rho) z)` on `z > lambda`.
///
/// At `rho = 1` the spectral measure is a point mass at `lambda`, reported
/// as [`RelaxationError::PointMass`].
pub fn spectral_density(p: RelaxationParams, z: f64) -> Result<f64, RelaxationError> {
    if p.rho == 1.0 {
        return Err(RelaxationError::PointMass { at: p.lambda });
    }
    if !z.is_finite() {
        return Err(RelaxationError::InvalidParams(format!("z = {z}")));
    }
    if z <= p.lambda {
        return Ok(0.0);
    }
    let b = PI / specfun::sin_pi(p.rho);
    Ok((p.rho * p.lambda.ln() - p.rho * (z - p.lambda).ln() - z.ln()).exp() / b)
}

/// `G^{1,0}_{1,1}[x | a; b] = x^b (1 - x)^{a-b-1} / Gamma(a - b)` for `0 < x < 1`, else 0.
pub fn meijer_g_1011(x: f64, a: f64, b: f64) -> Result<f64, RelaxationError> {
    if !(x > 0.0 && x < 1.0) {
        return Ok(0.0);
    }
    Ok(x.powf(b) * (1.0 - x).powf(a - b - 1.0) * specfun::rgamma(a - b)?)
}

/// The spectral density in its literal Meijer-G presentation
/// `lambda 1{z > lambda} G^{1,0}_{1,1}[lambda/z | 2; 1 + rho] / Gamma(rho)`.
/// It equals `lambda^2` times [`spectral_density`]; kept for reporting.
pub fn spectral_density_literal(p: RelaxationParams, z: f64) -> Result<f64, RelaxationError> {
    if z <= p.lambda {
        return Ok(0.0);
    }
    Ok(p.lambda * meijer_g_1011(p.lambda / z, 2.0, 1.0 + p.rho)? * specfun::rgamma(p.rho)?)
}

/// `int_lambda^inf K(z) dz` with `z = lambda / b`:
/// `int_0^1 b^{rho-1} (1-b)^{-rho} db / (Gamma(rho) Gamma(1-rho))`.
pub fn spectral_mass(p: RelaxationParams, literal: bool) -> Result<f64, RelaxationError> {
    if p.rho == 1.0 {
        return Ok(1.0);
    }
    let scale = if literal { p.lambda * p.lambda } else { 1.0 };
    let b = PI / specfun::sin_pi(p.rho);
    let v = quad::tanh_sinh(|_, l, r| l.powf(p.rho - 1.0) * r.powf(-p.rho), 0.0, 1.0, 1e-14, 0.0)?;
    Ok(scale * v / b)
}

/// `int_0^inf e^{-tz} K(z) dz`, which must reproduce `phi(t)`.
pub fn spectral_reconstruct(p: RelaxationParams, t: f64) -> Result<f64, RelaxationError> {
    check_time(t)?;
    if p.rho == 1.0 {
        return Ok((-p.lambda * t).exp());
    }
    let b = PI / specfun::sin_pi(p.rho);
    let lt = p.lambda * t;
    let v = quad::tanh_sinh(
        |_, l, r| {
            let e = (-lt / l).exp();
            if e == 0.0 {
                0.0
            } else {
                e * l.powf(p.rho - 1.0) * r.powf(-p.rho)
            }
        },
        0.0,
        1.0,
        1e-14,
        1e-300,
    )?;
    Ok(v / b)
}

// ---------------------------------------------------------------------------
// Complete monotonicity

/// `d^k phi / dt^k` for `k >= 1` from the Leibniz expansion of
/// `-lambda^rho / Gamma(rho) * d^{k-1}[e^{-lambda t} t^{rho-1}]`.
pub fn phi_nth_derivative(p: RelaxationParams, k: u32, t: f64) -> Result<f64, RelaxationError> {
    if k == 0 {
        return phi(p, t);
    }
    if !(t > 0.0) {
        return Err(RelaxationError::InvalidParams(format!("t = {t} must be positive")));
    }
    let m = k - 1;
    let pre = -(p.rho * p.lambda.ln() - p.lambda * t).exp() * specfun::rgamma(p.rho)?;
    let mut sum = 0.0;
    let mut binom = 1.0;
    let mut falling = 1.0; // (rho-1)(rho-2)...(rho-j)
    for j in 0..=m {
        if j > 0 {
            binom = binom * (m - j + 1) as f64 / j as f64;
            falling *= p.rho - j as f64;
        }
        sum += binom * (-p.lambda).powi((m - j) as i32) * falling * t.powf(p.rho - 1.0 - j as f64);
    }
    Ok(pre * sum)
}

/// Checks `(-1)^k phi^{(k)}(t) >= 0` for `k = 0..=order` on the grid.
pub fn complete_monotonicity_check(
    p: RelaxationParams,
    order: u32,
    grid: &[f64],
) -> Result<VerificationReport, RelaxationError> {
    if order > 6 {
        return Err(RelaxationError::InvalidParams(format!("order = {order} exceeds 6")));
    }
    if grid.iter().any(|&t| !(t > 0.0)) {
        return Err(RelaxationError::InvalidParams("grid points must be positive".into()));
    }
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for &t in grid {
        for k in 0..=order {
            let d = phi_nth_derivative(p, k, t)?;
            let signed = if k % 2 == 0 { d } else { -d };
            worst = worst.min(signed);
            if signed < 0.0 {
                violations += 1;
            }
        }
    }
    let mut inputs = BTreeMap::new();
    inputs.insert("lambda".into(), p.lambda);
    inputs.insert("rho".into(), p.rho);
    inputs.insert("order".into(), order as f64);
    inputs.insert("grid_points".into(), grid.len() as f64);
    Ok(VerificationReport::compare(
        "relaxation.complete_monotonicity",
        inputs,
        vec![violations as f64],
        vec![0.0],
        0.0,
        format!("sign violations of (-1)^k phi^(k); smallest signed derivative {worst:e}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ERFC1: f64 = 0.157_299_207_050_285_13;

    fn params(l: f64, r: f64) -> RelaxationParams {
        RelaxationParams::new(l, r).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert!((phi(params(2.0, 1.0), 1.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        assert!((phi(params(1.0, 0.5), 1.0).unwrap() - ERFC1).abs() < 1e-14);
        assert_eq!(phi(params(1.0, 0.5), 0.0).unwrap(), 1.0);
        let p = params(1.0, 0.5);
        let ratio = phi(p, 30.0).unwrap() / large_t_asymptote(p, 30.0).unwrap();
        assert!((ratio - 1.0).abs() < 0.02);
        assert!(RelaxationParams::new(1.0, 1.5).is_err());
        assert!(RelaxationParams::new(0.0, 0.5).is_err());
    }

    #[test]
    fn ml_form_agrees() {
        assert!((phi_ml_form(params(1.0, 1.0), 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-14);
        assert!((phi_ml_form(params(1.0, 0.5), 1.0).unwrap() - ERFC1).abs() < 1e-12);
        let p = params(3.0, 0.9);
        assert!((phi_ml_form(p, 2.0).unwrap() - phi(p, 2.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn identity_and_caputo_derivatives() {
        let d = conv_derivative(&BernsteinDescriptor::identity(), &ExpDecay(1.0), 0.7).unwrap();
        assert!((d + (-0.7f64).exp()).abs() < 1e-15);
        let alpha = 0.4;
        let g = BernsteinDescriptor::caputo(alpha).unwrap();
        let t = 1.3f64;
        let d = conv_derivative(&g, &Monomial(1), t).unwrap();
        let expected = t.powf(1.0 - alpha) / specfun::gamma(2.0 - alpha).unwrap();
        assert!((d - expected).abs() < 1e-10, "{d} vs {expected}");
        let g = BernsteinDescriptor::caputo(0.6).unwrap();
        let u = MittagLefflerDecay { alpha: 0.6, rate: 1.0 };
        let d = conv_derivative(&g, &u, 1.0).unwrap();
        let expected = -specfun::mittag_leffler(0.6, 1.0, -1.0).unwrap();
        assert!((d - expected).abs() < 1e-9, "{d} vs {expected}");
    }

    #[test]
    fn kernel_singularity_is_detected() {
        let g = BernsteinDescriptor::new("bad", 0.0, 0.0, Some(Arc::new(|s: f64| 1.0 / s)), Arc::new(|t: f64| t)).unwrap();
        assert!(matches!(
            conv_derivative(&g, &ExpDecay(1.0), 1.0),
            Err(RelaxationError::KernelSingularity { .. })
        ));
    }

    #[test]
    fn tempered_relaxation_equation() {
        for &(l, r, t) in &[(1.0, 0.5, 1.0), (2.0, 0.8, 0.5)] {
            let p = params(l, r);
            let d = tempered_derivative(p, &Relaxation(p), t).unwrap();
            let rhs = -l.powf(r) * phi(p, t).unwrap();
            assert!((d - rhs).abs() < 1e-9, "{d} vs {rhs}");
        }
        let p = params(1.5, 1.0);
        let d = tempered_derivative(p, &ExpDecay(1.5), 0.4).unwrap();
        assert!((d + 1.5 * (-0.6f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn tempered_symbol_is_consistent() {
        let g = BernsteinDescriptor::tempered(params(1.3, 0.6)).unwrap();
        assert!(g.symbol_residual(&[0.5, 1.0, 2.0]).unwrap() < 1e-9);
        assert!(g.tail_is_monotone());
        assert!((g.singularity_order().unwrap() - 0.6).abs() < 1e-3);
    }

    #[test]
    fn spectral_examples() {
        let p = params(1.0, 0.5);
        assert!((spectral_density(p, 2.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(spectral_density(p, 0.7).unwrap(), 0.0);
        assert!((spectral_reconstruct(p, 1.0).unwrap() - ERFC1).abs() < 1e-12);
        assert!((spectral_reconstruct(p, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let q = params(3.0, 0.7);
        assert!((spectral_mass(q, false).unwrap() - 1.0).abs() < 1e-12);
        assert!((spectral_mass(q, true).unwrap() - 9.0).abs() < 1e-10);
        let z = 4.2;
        let ratio = spectral_density_literal(q, z).unwrap() / spectral_density(q, z).unwrap();
        assert!((ratio - 9.0).abs() < 1e-12);
        assert!(matches!(spectral_density(params(1.0, 1.0), 2.0), Err(RelaxationError::PointMass { .. })));
    }

    #[test]
    fn nth_derivative_matches_finite_differences() {
        let p = params(1.7, 0.45);
        let t = 0.8;
        let h = 1e-4;
        for k in 1..=3u32 {
            let fd = (phi_nth_derivative(p, k - 1, t + h).unwrap() - phi_nth_derivative(p, k - 1, t - h).unwrap())
                / (2.0 * h);
            let exact = phi_nth_derivative(p, k, t).unwrap();
            assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0), "k = {k}");
        }
    }

    #[test]
    fn cm_report() {
        let r = complete_monotonicity_check(params(1.0, 0.5), 4, &[0.1, 1.0, 10.0]).unwrap();
        assert!(r.passed());
        let r = complete_monotonicity_check(params(2.0, 1.0), 6, &[0.3, 3.0]).unwrap();
        assert!(r.passed());
    }
}
