//! The generalized stable law `X_{alpha,rho}` with Laplace transform
//! `Gamma(rho; c t eta^alpha) / Gamma(rho)`: transforms, density, tails,
//! moments, codifference, the Lévy-measure ingredient and the `rho = 2`
//! Fourier-side identity.
//!
//! Time enters only through `tau = c t`; the fixed-time law is the `t = 1`
//! slice.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{self, ContourError, ContourSpec, MellinIntegrand};
use crate::quad::{self, QuadError};
use crate::specfun::{self, SpecfunError};
use crate::verify::{inputs, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProcessError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("density evaluation failed: {0}")]
    EvalFailure(String),
    #[error(transparent)]
    Special(#[from] SpecfunError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

fn invalid(msg: String) -> ProcessError {
    ProcessError::InvalidParams(msg)
}

/// `(alpha, rho, c)` with `0 < alpha < 1`, `0 < rho <= 1/alpha`, `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessParams {
    alpha: f64,
    rho: f64,
    c: f64,
}

impl ProcessParams {
    pub fn new(alpha: f64, rho: f64, c: f64) -> Result<Self, ProcessError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid(format!("alpha = {alpha} must satisfy 0 < alpha < 1")));
        }
        Self::checked(alpha, rho, c)
    }

    /// `alpha = 1`, where the law is the spectral distribution of the
    /// tempered relaxation. Kept for cross-checks.
    pub fn boundary(rho: f64, c: f64) -> Result<Self, ProcessError> {
        if rho >= 1.0 {
            return Err(invalid(format!("rho = {rho}: alpha = 1 requires rho < 1")));
        }
        Self::checked(1.0, rho, c)
    }

    fn checked(alpha: f64, rho: f64, c: f64) -> Result<Self, ProcessError> {
        if !(rho > 0.0 && rho <= 1.0 / alpha * (1.0 + 1e-15)) {
            return Err(invalid(format!("rho = {rho} must satisfy 0 < rho <= 1/alpha = {}", 1.0 / alpha)));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(invalid(format!("c = {c} must be > 0")));
        }
        Ok(Self { alpha, rho, c })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Scale `sigma = c^{1/alpha}`.
    pub fn sigma(&self) -> f64 {
        self.c.powf(1.0 / self.alpha)
    }

    pub fn require_rho_at_most_one(&self) -> Result<(), ProcessError> {
        if self.rho > 1.0 {
            return Err(invalid(format!("rho = {} must be <= 1 for joint laws", self.rho)));
        }
        Ok(())
    }

    fn tau(&self, t: f64) -> Result<f64, ProcessError> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(invalid(format!("t = {t} must be positive")));
        }
        Ok(self.c * t)
    }
}

/// Times `0 < t_1 < ... < t_n` and Laplace arguments `eta_k >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointLTSpec {
    times: Vec<f64>,
    etas: Vec<f64>,
}

impl JointLTSpec {
    pub fn new(times: Vec<f64>, etas: Vec<f64>) -> Result<Self, ProcessError> {
        if times.is_empty() || times.len() != etas.len() {
            return Err(invalid("times and etas must be nonempty and of equal length".into()));
        }
        if !(times[0] > 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("times must be positive and strictly increasing".into()));
        }
        if etas.iter().any(|&e| !(e >= 0.0) || !e.is_finite()) {
            return Err(invalid("etas must be finite and nonnegative".into()));
        }
        Ok(Self { times, etas })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    /// `sum_k Xi_{k,n} (t_k - t_{k-1})` with `Xi_{k,n} = (eta_k + ... + eta_n)^alpha`.
    pub fn exponent(&self, alpha: f64) -> f64 {
        let mut acc = 0.0;
        let mut suffix = 0.0;
        for k in (0..self.times.len()).rev() {
            suffix += self.etas[k];
            let prev = if k == 0 { 0.0 } else { self.times[k - 1] };
            acc += suffix.powf(alpha) * (self.times[k] - prev);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Laplace transforms

/// `E exp(-eta X(t)) = Gamma(rho; c t eta^alpha) / Gamma(rho)`.
pub fn laplace_1d(p: ProcessParams, eta: f64, t: f64) -> Result<f64, ProcessError> {
    let tau = p.tau(t)?;
    if !(eta >= 0.0) {
        return Err(invalid(format!("eta = {eta} must be nonnegative")));
    }
    Ok(specfun::gamma_q(p.rho, tau * eta.powf(p.alpha))?)
}

/// `E exp(-sum_k eta_k X(t_k)) = Gamma(rho; c sum_k Xi_{k,n}(t_k - t_{k-1})) / Gamma(rho)`.
pub fn laplace_nd(p: ProcessParams, spec: &JointLTSpec) -> Result<f64, ProcessError> {
    p.require_rho_at_most_one()?;
    Ok(specfun::gamma_q(p.rho, p.c * spec.exponent(p.alpha))?)
}

// ---------------------------------------------------------------------------
// Density

/// Which representation produced a density value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    ResidueSeries,
    Contour,
    /// Both methods ran in the overlap band and agreed.
    Overlap,
    ClosedForm,
}

impl DensityMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DensityMethod::ResidueSeries => "residue_series",
            DensityMethod::Contour => "contour",
            DensityMethod::Overlap => "overlap",
            DensityMethod::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEval {
    pub value: f64,
    pub method: DensityMethod,
}

const SWITCH_LOW: f64 = 0.45;
const SWITCH_HIGH: f64 = 0.55;
const OVERLAP_TOL: f64 = 1e-8;
const RESIDUE_MAX_TERMS: usize = 4000;

/// Kernel value `G(z) = (1/2 pi i) int Gamma(s + rho) z^{-s} / Gamma(alpha s + 1) ds`
/// by the residue series.
pub fn kernel_residue(alpha: f64, rho: f64, z: f64) -> Result<f64, ProcessError> {
    let f = MellinIntegrand::stable_kernel(alpha, rho, z)?;
    Ok(contour::residue_series_eval(&f, RESIDUE_MAX_TERMS)?)
}

/// Kernel value `G(z)` along a vertical contour.
pub fn kernel_contour(alpha: f64, rho: f64, z: f64) -> Result<f64, ProcessError> {
    let f = MellinIntegrand::stable_kernel(alpha, rho, z)?;
    let spec = ContourSpec::auto(&f)?;
    Ok(contour::mellin_barnes_eval(&f, &spec)?)
}

/// Density `h(x, t) = alpha G(c t x^{-alpha}) / (x Gamma(rho))`.
pub fn density(p: ProcessParams, x: f64, t: f64) -> Result<f64, ProcessError> {
    density_detailed(p, x, t).map(|d| d.value)
}

/// As [`density`], reporting which representation was used.
pub fn density_detailed(p: ProcessParams, x: f64, t: f64) -> Result<DensityEval, ProcessError> {
    let tau = p.tau(t)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(format!("x = {x} must be positive")));
    }
    let (alpha, rho) = (p.alpha, p.rho);
    if alpha == 1.0 {
        // Supported on x > tau: tau^rho / (Gamma(rho) Gamma(1-rho) x (x - tau)^rho).
        if x <= tau {
            return Ok(DensityEval { value: 0.0, method: DensityMethod::ClosedForm });
        }
        let v = (rho * tau.ln() - x.ln() - rho * (x - tau).ln()).exp() * specfun::sin_pi(rho) / PI;
        return Ok(DensityEval { value: v, method: DensityMethod::ClosedForm });
    }
    let z = tau * x.powf(-alpha);
    let pre = alpha / x * specfun::rgamma(rho)?;
    let (g, method) = if z < SWITCH_LOW {
        (kernel_residue(alpha, rho, z)?, DensityMethod::ResidueSeries)
    } else if z > SWITCH_HIGH {
        (kernel_contour(alpha, rho, z)?, DensityMethod::Contour)
    } else {
        let a = kernel_residue(alpha, rho, z);
        let b = kernel_contour(alpha, rho, z);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let (ha, hb) = (pre * a, pre * b);
                if (ha - hb).abs() > OVERLAP_TOL * ha.abs().max(1.0) {
                    return Err(ProcessError::EvalFailure(format!(
                        "residue series {ha:e} and contour {hb:e} disagree at x = {x}"
                    )));
                }
                (b, DensityMethod::Overlap)
            }
            (Ok(a), Err(_)) => (a, DensityMethod::ResidueSeries),
            (Err(_), Ok(b)) => (b, DensityMethod::Contour),
            (Err(e1), Err(e2)) => {
                return Err(ProcessError::EvalFailure(format!("residue series: {e1}; contour: {e2}")))
            }
        }
    };
    let value = pre * g;
    if value < -1e-12 {
        return Err(ProcessError::EvalFailure(format!("negative density {value:e} at x = {x}")));
    }
    Ok(DensityEval { value: value.max(0.0), method })
}

/// Density over a grid of `x` values (parallel when enabled).
pub fn density_batch(p: ProcessParams, xs: &[f64], t: f64) -> Vec<Result<DensityEval, ProcessError>> {
    crate::par::map(xs, |&x| density_detailed(p, x, t))
}

fn require_rho2(p: ProcessParams) -> Result<(), ProcessError> {
    if p.rho != 2.0 {
        return Err(invalid(format!("rho = {} must equal 2", p.rho)));
    }
    Ok(())
}

/// `rho = 2` density via the Wright function:
/// `(alpha tau^2 / x^{2 alpha + 1}) W_{-alpha, 1 - 2 alpha}(-tau / x^alpha)`.
pub fn density_rho2_wright(p: ProcessParams, x: f64, t: f64) -> Result<f64, ProcessError> {
    require_rho2(p)?;
    let tau = p.tau(t)?;
    if !(x > 0.0) {
        return Err(invalid(format!("x = {x} must be positive")));
    }
    let a = p.alpha;
    let w = specfun::wright(-a, 1.0 - 2.0 * a, -tau * x.powf(-a))?;
    Ok(a * tau * tau * x.powf(-2.0 * a - 1.0) * w)
}

/// `rho = 2`, `alpha = 1/2` closed form `tau^3 e^{-tau^2/(4x)} / (4 x sqrt(pi x^3))`.
pub fn density_rho2_half(tau: f64, x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    tau.powi(3) * (-tau * tau / (4.0 * x)).exp() / (4.0 * x * (PI * x.powi(3)).sqrt())
}

/// Density of the one-sided stable law with Laplace transform `exp(-tau eta^alpha)`.
pub fn stable_density_scaled(alpha: f64, tau: f64, x: f64) -> Result<f64, ProcessError> {
    let s = tau.powf(1.0 / alpha);
    Ok(specfun::stable_density(alpha, x / s)? / s)
}

/// `rho = 2` density as `p(x) + tau D^alpha p(x)`, with `p` the stable density
/// of scale `tau` and `D^alpha` the Riemann–Liouville derivative, taken as the
/// derivative of the order `1 - alpha` fractional integral.
pub fn density_rho2_rl(p: ProcessParams, x: f64, t: f64) -> Result<f64, ProcessError> {
    require_rho2(p)?;
    let tau = p.tau(t)?;
    if !(x > 0.0) {
        return Err(invalid(format!("x = {x} must be positive")));
    }
    let a = p.alpha;
    let base = stable_density_scaled(a, tau, x)?;
    Ok(base + tau * rl_derivative(a, tau, x)?)
}

/// `d/dx (1/Gamma(1-alpha)) int_0^x (x - y)^{-alpha} p(y) dy` by a five-point stencil.
fn rl_derivative(alpha: f64, tau: f64, x: f64) -> Result<f64, ProcessError> {
    let c = specfun::rgamma(1.0 - alpha)?;
    let integral = |xx: f64| -> Result<f64, ProcessError> {
        let v = quad::tanh_sinh(
            |y, _, r| r.powf(-alpha) * stable_density_scaled(alpha, tau, y).unwrap_or(f64::NAN),
            0.0,
            xx,
            1e-13,
            1e-300,
        )?;
        Ok(c * v)
    };
    let h = 1e-2 * x;
    let f = |k: f64| integral(x + k * h);
    Ok((f(-2.0)? - 8.0 * f(-1.0)? + 8.0 * f(1.0)? - f(2.0)?) / (12.0 * h))
}

// ---------------------------------------------------------------------------
// Distribution function and tails

/// `sum_k (-1)^k z^{rho+k} w_k / (k! Gamma(1 - alpha(rho+k)))` with weight
/// `w_k = weight(rho + k)`; `1/Gamma(1-y)` is written as `Gamma(y) sin(pi y)/pi`
/// so that large `k` cannot overflow.
fn tail_series(alpha: f64, rho: f64, z: f64, weight: impl Fn(f64) -> f64) -> Result<f64, ProcessError> {
    let lz = z.ln();
    let mut sum = 0.0;
    let mut quiet = 0;
    for k in 0..RESIDUE_MAX_TERMS {
        let kf = k as f64;
        let m = rho + kf;
        let y = alpha * m;
        let s = specfun::sin_pi(y);
        let term = if s == 0.0 {
            0.0
        } else {
            let l = m * lz - specfun::ln_gamma(kf + 1.0)? + specfun::ln_gamma(y)? - PI.ln();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * s * l.exp() * weight(m)
        };
        sum += term;
        if !sum.is_finite() {
            return Err(ProcessError::EvalFailure(format!("tail series overflow at z = {z}")));
        }
        if term.abs() <= 1e-17 * sum.abs() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(ProcessError::EvalFailure(format!("tail series did not converge at z = {z}")))
}

/// `P(X(t) > x)`.
///
/// For `z = c t x^{-alpha} < 0.5` the tail is summed directly from the
/// residues; otherwise `P(X <= x)` is evaluated as the contour integral of
/// `Gamma(s + rho) z^{-s} / (s Gamma(alpha s + 1))`.
pub fn cdf_tail(p: ProcessParams, x: f64, t: f64) -> Result<f64, ProcessError> {
    let tau = p.tau(t)?;
    if !(x > 0.0) {
        return Err(invalid(format!("x = {x} must be positive")));
    }
    let (alpha, rho) = (p.alpha, p.rho);
    if alpha == 1.0 {
        // P(X > x) = int_0^{tau/x} b^{rho-1} (1-b)^{-rho} db / B(rho, 1-rho).
        if x <= tau {
            return Ok(1.0);
        }
        let v = quad::tanh_sinh(
            |b, l, r| l.powf(rho - 1.0) * if b > 0.5 { r } else { 1.0 - b }.powf(-rho),
            0.0,
            tau / x,
            1e-13,
            0.0,
        )?;
        return Ok(v * specfun::sin_pi(rho) / PI);
    }
    let z = tau * x.powf(-alpha);
    let g_rho = specfun::rgamma(rho)?;
    if z < 0.5 {
        let v = tail_series(alpha, rho, z, |m| 1.0 / m)?;
        return Ok((v * g_rho).clamp(0.0, 1.0));
    }
    Ok(1.0 - cdf(p, x, t)?)
}

/// `P(X(t) <= x)`; accurate in relative terms for small `x`, where
/// [`cdf_tail`] would lose it to cancellation.
pub fn cdf(p: ProcessParams, x: f64, t: f64) -> Result<f64, ProcessError> {
    let tau = p.tau(t)?;
    if !(x > 0.0) {
        return Err(invalid(format!("x = {x} must be positive")));
    }
    let z = tau * x.powf(-p.alpha);
    if p.alpha == 1.0 || z < 0.5 {
        return Ok(1.0 - cdf_tail(p, x, t)?);
    }
    let f = MellinIntegrand::new(
        vec![contour::GammaFactor::new(p.rho, 1.0)],
        vec![contour::GammaFactor::new(1.0, p.alpha)],
        true,
        z,
    )?;
    let spec = ContourSpec::auto(&f)?;
    Ok((contour::mellin_barnes_eval(&f, &spec)? * specfun::rgamma(p.rho)?).clamp(0.0, 1.0))
}

/// `lim x^{alpha rho} P(X > x) = (c t)^rho / (Gamma(rho + 1) Gamma(1 - alpha rho))`.
pub fn tail_constant(p: ProcessParams, t: f64) -> Result<f64, ProcessError> {
    let tau = p.tau(t)?;
    Ok(tau.powf(p.rho) * specfun::rgamma(p.rho + 1.0)? * specfun::rgamma(1.0 - p.alpha * p.rho)?)
}

// ---------------------------------------------------------------------------
// Integrals against the density

/// Split point between the quadrature head and the series tail, in `z`.
const HEAD_Z: f64 = 0.3;

/// `int_{x*}^inf h(x) dx`-type head integral over `z >= HEAD_Z` of
/// `h(x) x w(x) / alpha` in `ln z`, where `x = (tau/z)^{1/alpha}`.
fn head_integral(
    p: ProcessParams,
    t: f64,
    weight: impl Fn(f64) -> f64,
) -> Result<f64, ProcessError> {
    let tau = p.tau(t)?;
    let a = p.alpha;
    let x_of = |v: f64| (tau / v.exp()).powf(1.0 / a);
    let integrand = |v: f64| {
        let x = x_of(v);
        density(p, x, t).map(|h| h * x * weight(x) / a).unwrap_or(f64::NAN)
    };
    // Upper end: walk out in ln z until the integrand is negligible.
    let v0 = HEAD_Z.ln();
    let mut peak = integrand(v0).abs();
    let mut v1 = v0;
    loop {
        v1 += 0.5;
        let f = integrand(v1);
        if !f.is_finite() {
            return Err(ProcessError::EvalFailure(format!("density failed at z = {:e}", v1.exp())));
        }
        peak = peak.max(f.abs());
        if f.abs() < 1e-18 * peak || v1 > 60.0 {
            break;
        }
    }
    let r = quad::gauss_kronrod(integrand, v0, v1, 1e-12, 1e-16 * peak, 2000)?;
    Ok(r.value)
}

/// `int_0^inf x^delta h(x, t) dx` (`delta = 0` gives the total mass), with
/// the region `z < HEAD_Z` integrated term by term from the residue series.
pub fn weighted_mass(p: ProcessParams, t: f64, delta: f64) -> Result<f64, ProcessError> {
    if p.alpha == 1.0 {
        return Err(invalid("alpha = 1 is not supported here".into()));
    }
    if !(delta >= 0.0 && delta < p.alpha * p.rho) {
        return Err(invalid(format!("delta = {delta} must lie in [0, alpha rho)")));
    }
    let tau = p.tau(t)?;
    let head = head_integral(p, t, |x| x.powf(delta))?;
    let a = p.alpha;
    let x_star = (tau / HEAD_Z).powf(1.0 / a);
    // int_{x*}^inf x^delta alpha tau^m x^{-alpha m - 1} dx = alpha tau^m x*^{delta - alpha m} / (alpha m - delta)
    let tail = tail_series(a, p.rho, HEAD_Z, |m| a * x_star.powf(delta) / (a * m - delta))?;
    Ok(head + tail * specfun::rgamma(p.rho)?)
}

/// `int_0^inf e^{-eta x} h(x, t) dx` by quadrature.
pub fn laplace_by_quadrature(p: ProcessParams, eta: f64, t: f64) -> Result<f64, ProcessError> {
    if p.alpha == 1.0 {
        return Err(invalid("alpha = 1 is not supported here".into()));
    }
    let tau = p.tau(t)?;
    let head = head_integral(p, t, |x| (-eta * x).exp())?;
    let x_star = (tau / HEAD_Z).powf(1.0 / p.alpha);
    let tail = quad::exp_sinh(
        |x, _| {
            let w = (-eta * x).exp();
            if w == 0.0 {
                0.0
            } else {
                w * density(p, x, t).unwrap_or(f64::NAN)
            }
        },
        x_star,
        1e-12,
        1e-300,
    )?;
    Ok(head + tail)
}

// ---------------------------------------------------------------------------
// Moments

/// `E X^delta = c^{delta/alpha} Gamma(rho - delta/alpha) / (Gamma(rho) Gamma(1 - delta))`
/// for `0 < delta < alpha rho`, plus the removable case `delta = alpha rho = 1`,
/// where both gammas have poles and the Laurent limit gives `alpha c^{1/alpha} / Gamma(rho)`.
pub fn moment(p: ProcessParams, delta: f64) -> Result<f64, ProcessError> {
    let (a, r) = (p.alpha, p.rho);
    let boundary = delta == 1.0 && (a * r - 1.0).abs() < 1e-12;
    if !(delta > 0.0 && (delta < a * r || boundary)) {
        return Err(invalid(format!("E X^delta is finite only for 0 < delta < alpha rho = {}", a * r)));
    }
    let scale = p.c.powf(delta / a) * specfun::rgamma(r)?;
    let arg = r - delta / a;
    let ratio = if boundary || pole_pair(arg, 1.0 - delta) {
        // Gamma(-m + e/alpha) / Gamma(-n + e) -> alpha (-1)^{m-n} n! / m! as e -> 0.
        let m = (-arg).round();
        let n = (delta - 1.0).round();
        let sign = if ((m - n) as i64) % 2 == 0 { 1.0 } else { -1.0 };
        a * sign * specfun::gamma(n + 1.0)? / specfun::gamma(m + 1.0)?
    } else {
        specfun::gamma(arg)? * specfun::rgamma(1.0 - delta)?
    };
    Ok(scale * ratio)
}

fn pole_pair(a: f64, b: f64) -> bool {
    let is_pole = |x: f64| x <= 1e-12 && (x - x.round()).abs() < 1e-12;
    is_pole(a) && is_pole(b)
}

// ---------------------------------------------------------------------------
// Codifference

fn check_codiff_args(p: ProcessParams, eta1: f64, eta2: f64, s: f64, t: f64) -> Result<(), ProcessError> {
    p.require_rho_at_most_one()?;
    if !(eta1 > 0.0 && eta2 > 0.0) {
        return Err(invalid("eta1 and eta2 must be positive".into()));
    }
    if !(s > 0.0 && t > s) {
        return Err(invalid(format!("need 0 < s < t, got s = {s}, t = {t}")));
    }
    Ok(())
}

/// `ln E e^{-eta1 X(t) - eta2 X(s)} - ln E e^{-eta1 X(t)} - ln E e^{-eta2 X(s)}`,
/// with the joint term from the two-time Laplace transform.
pub fn codifference(p: ProcessParams, eta1: f64, eta2: f64, s: f64, t: f64) -> Result<f64, ProcessError> {
    check_codiff_args(p, eta1, eta2, s, t)?;
    let (a, r, c) = (p.alpha, p.rho, p.c);
    let joint = c * ((eta1 + eta2).powf(a) * s + eta1.powf(a) * (t - s));
    Ok(specfun::ln_gamma_q(r, joint)? - specfun::ln_gamma_q(r, c * eta1.powf(a) * t)?
        - specfun::ln_gamma_q(r, c * eta2.powf(a) * s)?)
}

/// Stable-subordinator codifference `c s (eta1^alpha + eta2^alpha - (eta1 + eta2)^alpha)`.
pub fn codifference_stable(p: ProcessParams, eta1: f64, eta2: f64, s: f64) -> f64 {
    let a = p.alpha;
    p.c * s * (eta1.powf(a) + eta2.powf(a) - (eta1 + eta2).powf(a))
}

/// The product-form expression
/// `ln[Gamma(rho;(eta1+eta2)^a s) Gamma(rho; eta2^a (t-s)) / (Gamma(rho; eta1^a s) Gamma(rho; eta2^a s))]`,
/// which does not agree with [`codifference`]; kept for reporting.
pub fn codifference_product_form(p: ProcessParams, eta1: f64, eta2: f64, s: f64, t: f64) -> Result<f64, ProcessError> {
    check_codiff_args(p, eta1, eta2, s, t)?;
    let (a, r, c) = (p.alpha, p.rho, p.c);
    let lg = |x: f64| specfun::ln_gamma_upper(r, c * x);
    Ok(lg((eta1 + eta2).powf(a) * s)? + lg(eta2.powf(a) * (t - s))? - lg(eta1.powf(a) * s)? - lg(eta2.powf(a) * s)?)
}

/// The linear large-`t` asymptote `(eta1^alpha - eta2^alpha) t`; kept for reporting.
pub fn codifference_linear_asymptote(p: ProcessParams, eta1: f64, eta2: f64, t: f64) -> f64 {
    p.c * (eta1.powf(p.alpha) - eta2.powf(p.alpha)) * t
}

// ---------------------------------------------------------------------------
// Complete monotonicity of the Laplace transforms

fn forward_difference(f: impl Fn(f64) -> f64, x: f64, h: f64, k: u32) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k - j + 1) as f64 / j as f64;
        }
        let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += sign * binom * f(x + j as f64 * h);
    }
    sum
}

/// Sign pattern `(-1)^{k1+k2} Delta^{k1}_{eta1} Delta^{k2}_{eta2} Phi >= -tol`
/// of the two-time Laplace transform `Phi(eta1, eta2; t1, t2)`, over all
/// orders up to `orders`, at each grid point with forward step `step`.
pub fn cm_check_2d(
    p: ProcessParams,
    times: (f64, f64),
    orders: (u32, u32),
    grid: &[(f64, f64)],
    step: f64,
) -> Result<VerificationReport, ProcessError> {
    p.require_rho_at_most_one()?;
    if orders.0 > 3 || orders.1 > 3 {
        return Err(invalid("orders must be at most 3".into()));
    }
    if grid.iter().any(|&(a, b)| !(a > 0.0 && b > 0.0)) || !(step > 0.0) {
        return Err(invalid("grid points and step must be positive".into()));
    }
    const TOL: f64 = 1e-9;
    let phi = |e1: f64, e2: f64| -> f64 {
        JointLTSpec::new(vec![times.0, times.1], vec![e1, e2])
            .and_then(|s| laplace_nd(p, &s))
            .unwrap_or(f64::NAN)
    };
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for &(e1, e2) in grid {
        for k1 in 0..=orders.0 {
            for k2 in 0..=orders.1 {
                let inner = |a: f64| forward_difference(|b| phi(a, b), e2, step, k2);
                let d = forward_difference(inner, e1, step, k1);
                let signed = if (k1 + k2) % 2 == 0 { d } else { -d };
                worst = worst.min(signed);
                if !(signed >= -TOL) {
                    violations += 1;
                }
            }
        }
    }
    Ok(VerificationReport::compare(
        "process.cm_2d",
        inputs([
            ("alpha", p.alpha),
            ("rho", p.rho),
            ("c", p.c),
            ("t1", times.0),
            ("t2", times.1),
            ("k1", orders.0 as f64),
            ("k2", orders.1 as f64),
            ("step", step),
        ]),
        vec![violations as f64],
        vec![0.0],
        0.0,
        format!("sign violations below -{TOL:e}; smallest signed difference {worst:e}"),
    ))
}

/// One-dimensional sign pattern of `eta -> Gamma(rho; t eta^alpha)/Gamma(rho)`
/// up to `order`. Parameters are not restricted to `rho <= 1/alpha`, so the
/// probe can be run on both sides of `alpha rho = 1`.
pub fn cm_probe_1d(
    alpha: f64,
    rho: f64,
    t: f64,
    order: u32,
    etas: &[f64],
    step: f64,
) -> Result<VerificationReport, ProcessError> {
    if !(alpha > 0.0 && alpha <= 1.0 && rho > 0.0 && t > 0.0 && step > 0.0) {
        return Err(invalid("need alpha in (0,1], rho > 0, t > 0, step > 0".into()));
    }
    const TOL: f64 = 1e-12;
    let f = |e: f64| specfun::gamma_q(rho, t * e.powf(alpha)).unwrap_or(f64::NAN);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for &e in etas {
        for k in 0..=order {
            let d = forward_difference(f, e, step, k);
            let signed = if k % 2 == 0 { d } else { -d };
            worst = worst.min(signed);
            if !(signed >= -TOL) {
                violations += 1;
            }
        }
    }
    Ok(VerificationReport::compare(
        "process.cm_1d",
        inputs([("alpha", alpha), ("rho", rho), ("t", t), ("order", order as f64), ("step", step)]),
        vec![violations as f64],
        vec![0.0],
        0.0,
        format!("sign violations below -{TOL:e}; smallest signed difference {worst:e}"),
    ))
}

// ---------------------------------------------------------------------------
// Lévy measure ingredient

fn check_levy_args(alpha: f64, rho: f64) -> Result<(), ProcessError> {
    if !(alpha > 0.0 && alpha < 1.0 && rho > 0.0 && rho < 1.0) {
        return Err(invalid(format!("need 0 < alpha < 1 and 0 < rho < 1, got ({alpha}, {rho})")));
    }
    Ok(())
}

/// Density `rho w^{-1/alpha - rho - 1} p_alpha(z w^{-1/alpha}) / Gamma(1 - rho)` of `M_z(dw)`.
pub fn levy_measure_mz(alpha: f64, rho: f64, w: f64, z: f64) -> Result<f64, ProcessError> {
    check_levy_args(alpha, rho)?;
    if !(w > 0.0 && z > 0.0) {
        return Err(invalid("w and z must be positive".into()));
    }
    let lw = w.ln();
    let ly = z.ln() - lw / alpha;
    // Beyond y = 1e100 the leading tail term alpha y^{-alpha-1} / Gamma(1-alpha)
    // is exact to double precision.
    let lp = if ly > 230.0 {
        alpha.ln() - specfun::ln_gamma(1.0 - alpha)? - (alpha + 1.0) * ly
    } else {
        let p = specfun::stable_density(alpha, ly.exp())?;
        if p == 0.0 {
            return Ok(0.0);
        }
        p.ln()
    };
    Ok(rho * specfun::rgamma(1.0 - rho)? * ((-1.0 / alpha - rho - 1.0) * lw + lp).exp())
}

/// `int (w ^ 1) M_z(dw)` at two quadrature tolerances; the check passes when
/// both are finite and agree within `1e-6` relative.
pub fn mz_integrability(alpha: f64, rho: f64, z: f64) -> Result<VerificationReport, ProcessError> {
    check_levy_args(alpha, rho)?;
    let integral = |tol: f64| -> Result<f64, ProcessError> {
        let m = |w: f64| levy_measure_mz(alpha, rho, w, z).unwrap_or(f64::NAN);
        let near = quad::tanh_sinh(|w, _, _| w * m(w), 0.0, 1.0, tol, 0.0)?;
        let far = quad::exp_sinh(|w, _| m(w), 1.0, tol, 0.0)?;
        Ok(near + far)
    };
    let coarse = integral(1e-6)?;
    let fine = integral(1e-11)?;
    let rel = (coarse - fine).abs() / fine.abs().max(f64::MIN_POSITIVE);
    Ok(VerificationReport::compare(
        "process.levy_measure.integrability",
        inputs([("alpha", alpha), ("rho", rho), ("z", z)]),
        vec![rel],
        vec![0.0],
        1e-6,
        format!("refinement change of int (w^1) M_z(dw) = {fine:.12e}"),
    ))
}

/// Least-squares log-log slope of `w M_z(w)` (the integrand near `w = 0`)
/// over a log grid on `[w_lo, w_hi]`.
pub fn mz_small_w_slope(alpha: f64, rho: f64, z: f64, w_lo: f64, w_hi: f64) -> Result<f64, ProcessError> {
    check_levy_args(alpha, rho)?;
    let n = 21;
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let lw = w_lo.ln() + (w_hi.ln() - w_lo.ln()) * i as f64 / (n - 1) as f64;
        let w = lw.exp();
        pts.push((lw, (w * levy_measure_mz(alpha, rho, w, z)?).ln()));
    }
    Ok(fit_slope(&pts))
}

pub(crate) fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

// ---------------------------------------------------------------------------
// rho = 2 Fourier side

/// `psi(xi) = xi^alpha e^{-i pi alpha / 2}` for `xi > 0`.
pub fn stable_symbol(alpha: f64, xi: f64) -> Complex64 {
    Complex64::from_polar(xi.powf(alpha), -PI * alpha / 2.0)
}

/// Checks that `u(xi, t) = e^{-psi t}(1 + t psi)` satisfies
/// `d/dt u = -psi u + psi u / (1 + t psi)` with analytic derivatives, and that
/// the power series of `-ln(1 + t psi)` matches the principal logarithm
/// where `|xi| < 1/t`. Points outside that guard are skipped.
pub fn rho2_fourier_check(alpha: f64, xi_grid: &[f64], t_grid: &[f64]) -> Result<VerificationReport, ProcessError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha = {alpha} must be in (0, 1)")));
    }
    if xi_grid.iter().chain(t_grid).any(|&v| !(v >= 0.0)) {
        return Err(invalid("grids must be nonnegative".into()));
    }
    let mut worst_ode = 0.0f64;
    let mut worst_log = 0.0f64;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for &t in t_grid {
        for &xi in xi_grid {
            if t > 0.0 && xi * t >= 1.0 {
                skipped += 1;
                continue;
            }
            used += 1;
            let psi = stable_symbol(alpha, xi);
            let e = (-psi * t).exp();
            let u = e * (1.0 + t * psi);
            let du = -psi * psi * t * e;
            let rhs = -psi * u + psi * u / (1.0 + t * psi);
            let scale = 1.0f64.max(du.norm()).max((psi * u).norm());
            worst_ode = worst_ode.max((du - rhs).norm() / scale);
            // -ln(1 + w) = sum_{k>=1} (-w)^k / k for |w| < 1
            let w = t * psi;
            if w.norm() < 0.9 {
                let mut series = Complex64::new(0.0, 0.0);
                let mut pw = Complex64::new(1.0, 0.0);
                for k in 1..2000 {
                    pw *= -w;
                    let term = pw / k as f64;
                    series += term;
                    if term.norm() < 1e-18 {
                        break;
                    }
                }
                worst_log = worst_log.max((series + (1.0 + w).ln()).norm());
            }
        }
    }
    Ok(VerificationReport::compare(
        "process.rho2_fourier",
        inputs([
            ("alpha", alpha),
            ("points_used", used as f64),
            ("points_skipped", skipped as f64),
        ]),
        vec![worst_ode, worst_log],
        vec![0.0, 0.0],
        1e-10,
        "max residual of the evolution equation; max mismatch of the log-symbol series".to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ERFC1: f64 = 0.157_299_207_050_285_13;

    fn pp(a: f64, r: f64, c: f64) -> ProcessParams {
        ProcessParams::new(a, r, c).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ProcessParams::new(1.0, 0.5, 1.0).is_err());
        assert!(ProcessParams::new(0.5, 2.5, 1.0).is_err());
        assert!(ProcessParams::new(0.5, 2.0, 1.0).is_ok());
        assert!(ProcessParams::new(0.5, 0.5, 0.0).is_err());
        assert!(pp(0.5, 2.0, 1.0).require_rho_at_most_one().is_err());
        assert!(JointLTSpec::new(vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn laplace_examples() {
        assert!((laplace_1d(pp(0.5, 0.5, 1.0), 1.0, 1.0).unwrap() - ERFC1).abs() < 1e-14);
        let u = 0.7f64 * 2.0f64.powf(0.3);
        let v = laplace_1d(pp(0.3, 2.0, 0.7), 2.0, 1.0).unwrap();
        assert!((v - (-u).exp() * (1.0 + u)).abs() < 1e-13);
        let s = JointLTSpec::new(vec![1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(laplace_nd(pp(0.5, 0.5, 1.0), &s).unwrap(), 1.0);
        let s = JointLTSpec::new(vec![1.0, 2.0], vec![1.0, 1.0]).unwrap();
        let p1 = pp(0.6, 1.0, 1.0);
        let prod = (-(2.0f64.powf(0.6)) * 1.0).exp() * (-1.0f64).exp();
        assert!((laplace_nd(p1, &s).unwrap() - prod).abs() < 1e-14);
    }

    #[test]
    fn density_stable_reduction() {
        let h = density(pp(0.5, 1.0, 1.0), 1.0, 1.0).unwrap();
        assert!((h - 0.219_695_644_733_861_4).abs() < 1e-10, "{h}");
        let h = density(pp(0.5, 2.0, 1.0), 1.0, 1.0).unwrap();
        assert!((h - density_rho2_half(1.0, 1.0)).abs() < 1e-10, "{h}");
    }

    #[test]
    fn density_boundary_alpha_one() {
        let p = ProcessParams::boundary(0.5, 1.0).unwrap();
        assert!((density(p, 2.0, 1.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-14);
        assert_eq!(density(p, 0.5, 1.0).unwrap(), 0.0);
        // residue series in its convergence region
        let z = 0.25;
        let g = kernel_residue(1.0, 0.5, z).unwrap();
        let x = 4.0;
        assert!((g / x / specfun::gamma(0.5).unwrap() - density(p, x, 1.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn methods_agree_in_overlap() {
        for &(a, r) in &[(0.3, 0.4), (0.5, 0.7), (0.8, 1.0)] {
            for &z in &[0.3, 0.5, 1.0, 2.0] {
                let s = kernel_residue(a, r, z).unwrap();
                let c = kernel_contour(a, r, z).unwrap();
                assert!((s - c).abs() < 1e-9 * s.abs().max(1.0), "{a} {r} {z}: {s} {c}");
            }
        }
    }

    #[test]
    fn rho2_forms() {
        let p = pp(0.5, 2.0, 1.0);
        assert!((density_rho2_wright(p, 1.0, 1.0).unwrap() - 0.109_847_822_366_930_7).abs() < 1e-10);
        let q = pp(0.4, 2.0, 1.0);
        let a = density_rho2_wright(q, 2.0, 1.0).unwrap();
        let b = density(q, 2.0, 1.0).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} {b}");
        let rl = density_rho2_rl(p, 1.0, 1.0).unwrap();
        assert!((rl - 0.109_847_822_366_930_7).abs() < 1e-5, "{rl}");
    }

    #[test]
    fn tails() {
        // rho = 2, alpha = 1/2: P(X > x) = P(3/2, 1/(4x))
        let p = pp(0.5, 2.0, 1.0);
        for &x in &[0.05, 0.3, 1.0, 10.0] {
            let exact = 1.0 - specfun::gamma_q(1.5, 1.0 / (4.0 * x)).unwrap();
            let v = cdf_tail(p, x, 1.0).unwrap();
            assert!((v - exact).abs() < 1e-11, "{x}: {v} {exact}");
        }
        // rho = 1, alpha = 1/2: P(X > x) = erf(1/(2 sqrt x))
        let p = pp(0.5, 1.0, 1.0);
        let x = 0.25;
        let exact = 1.0 - specfun::gamma_q(0.5, 1.0).unwrap();
        assert!((cdf_tail(p, x, 1.0).unwrap() - exact).abs() < 1e-12);
        let b = ProcessParams::boundary(0.5, 1.0).unwrap();
        // arcsine tail: P(X > 2) = 1/2
        assert!((cdf_tail(b, 2.0, 1.0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn moments() {
        assert!((moment(pp(0.5, 2.0, 1.0), 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((moment(pp(0.5, 2.0, 3.0), 1.0).unwrap() - 4.5).abs() < 1e-13);
        let v = moment(pp(0.5, 1.0, 1.0), 0.25).unwrap();
        assert!((v - 1.446_409_084_632_08).abs() < 1e-12, "{v}");
        assert!((moment(pp(0.5, 1.0, 1.0), 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert!(moment(pp(0.5, 1.0, 1.0), 0.5).is_err());
    }

    #[test]
    fn codifference_forms() {
        let p = pp(0.6, 1.0, 1.0);
        let cd = codifference(p, 0.7, 1.3, 0.5, 2.0).unwrap();
        assert!((cd - codifference_stable(p, 0.7, 1.3, 0.5)).abs() < 1e-12);
        let p = pp(0.6, 0.5, 1.0);
        assert!(codifference(p, 1.0, 1e-30, 0.5, 1.0).unwrap().abs() < 1e-9);
        assert!(codifference(p, 1.0, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn cm_patterns() {
        let grid: Vec<(f64, f64)> = [0.2, 0.7, 1.5].iter().flat_map(|&a| [0.2, 0.7, 1.5].map(|b| (a, b))).collect();
        assert!(cm_check_2d(pp(0.5, 1.0, 1.0), (1.0, 2.0), (2, 2), &grid, 0.05).unwrap().passed());
        assert!(cm_check_2d(pp(0.6, 0.7, 1.0), (1.0, 2.0), (2, 2), &grid, 0.05).unwrap().passed());
        let etas = [0.01, 0.02, 0.05];
        assert!(!cm_probe_1d(0.9, 1.2, 1.0, 2, &etas, 0.005).unwrap().passed());
        assert!(cm_probe_1d(0.5, 1.2, 1.0, 3, &etas, 0.005).unwrap().passed());
    }

    #[test]
    fn levy_measure_example() {
        let m = levy_measure_mz(0.5, 0.5, 1.0, 1.0).unwrap();
        assert!((m - 0.5 * 0.219_695_644_733_861_4 / PI.sqrt()).abs() < 1e-10);
        assert!(mz_integrability(0.5, 0.5, 2.0).unwrap().passed());
    }

    #[test]
    fn fourier_residual() {
        let xi: Vec<f64> = (1..=10).map(|i| 0.2 * i as f64).collect();
        let t: Vec<f64> = (0..10).map(|i| 0.1 * i as f64).collect();
        let r = rho2_fourier_check(0.5, &xi, &t).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
