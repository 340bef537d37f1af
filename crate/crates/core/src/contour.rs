//! Vertical-contour evaluation of Mellin–Barnes integrals
//! `(1/2 pi i) int_{gamma - i inf}^{gamma + i inf} f(s) ds` for gamma-ratio
//! integrands
//!
//! ```text
//! f(s) = prod_j Gamma(a_j + A_j s) / prod_l Gamma(b_l + B_l s) * z^{-s} [* 1/s]
//! ```
//!
//! and the equivalent sum over the left poles of a single numerator gamma.
//! These are the low-order Fox H-functions behind the relaxation spectrum and
//! the generalized stable densities.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::quad::{self, QuadError};
use crate::specfun::{self, ln_gamma_complex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("invalid integrand: {0}")]
    InvalidIntegrand(String),
    #[error("integrand does not decay along the contour: {0}")]
    DecayError(String),
    #[error("gamma argument {arg} lies within 1e-8 of a pole on the contour")]
    PoleOnContour { arg: f64 },
    #[error("abscissa {abscissa} does not separate left poles (< {left}) from right poles (> {right})")]
    InvalidAbscissa { abscissa: f64, left: f64, right: f64 },
    #[error("residue series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
    #[error("residue series requires simple poles; pole at s = {at} is not simple")]
    CoincidentPoles { at: f64 },
    #[error("conjugate symmetry violated (relative residual {residual:e})")]
    Asymmetry { residual: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
}

/// `Gamma(shift + slope * s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    pub shift: f64,
    pub slope: f64,
}

impl GammaFactor {
    pub const fn new(shift: f64, slope: f64) -> Self {
        Self { shift, slope }
    }

    fn arg(&self, s: Complex64) -> Complex64 {
        self.shift + self.slope * s
    }

    fn arg_re(&self, s: f64) -> f64 {
        self.shift + self.slope * s
    }

    /// Rightmost pole for positive slopes, leftmost for negative ones.
    fn first_pole(&self) -> f64 {
        -self.shift / self.slope
    }
}

/// Restricted Fox-H integrand: numerator and denominator gamma factors,
/// an optional `1/s`, and the argument `z` entering as `z^{-s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinIntegrand {
    pub upper_gammas: Vec<GammaFactor>,
    pub lower_gammas: Vec<GammaFactor>,
    pub extra_pole_at_zero: bool,
    pub argument: f64,
}

impl MellinIntegrand {
    pub fn new(
        upper_gammas: Vec<GammaFactor>,
        lower_gammas: Vec<GammaFactor>,
        extra_pole_at_zero: bool,
        argument: f64,
    ) -> Result<Self, ContourError> {
        if !(argument > 0.0) || !argument.is_finite() {
            return Err(ContourError::InvalidIntegrand(format!("argument z = {argument} must be positive")));
        }
        for g in upper_gammas.iter().chain(&lower_gammas) {
            if g.slope == 0.0 || !g.slope.is_finite() || !g.shift.is_finite() {
                return Err(ContourError::InvalidIntegrand(format!("bad gamma factor {g:?}")));
            }
        }
        Ok(Self { upper_gammas, lower_gammas, extra_pole_at_zero, argument })
    }

    /// `Gamma(s) z^{-s}`, whose inverse Mellin transform is `e^{-z}`.
    pub fn exponential(z: f64) -> Result<Self, ContourError> {
        Self::new(vec![GammaFactor::new(0.0, 1.0)], vec![], false, z)
    }

    /// `Gamma(s + rho) x^{-s} / s`; with an abscissa in `(0, inf)` the
    /// integral equals `Gamma(rho; x)/Gamma(rho) * Gamma(rho)`, i.e.
    /// `Gamma(rho) Q(rho, x)`.
    pub fn incomplete_gamma(rho: f64, x: f64) -> Result<Self, ContourError> {
        Self::new(vec![GammaFactor::new(rho, 1.0)], vec![], true, x)
    }

    /// `Gamma(s + rho) z^{-s} / Gamma(alpha s + 1)`, the kernel of the
    /// generalized stable density.
    pub fn stable_kernel(alpha: f64, rho: f64, z: f64) -> Result<Self, ContourError> {
        Self::new(vec![GammaFactor::new(rho, 1.0)], vec![GammaFactor::new(1.0, alpha)], false, z)
    }

    /// Exponential decay rate along the contour: `|f| ~ exp(-pi Delta |u| / 2)`.
    pub fn decay_rate(&self) -> f64 {
        self.upper_gammas.iter().map(|g| g.slope.abs()).sum::<f64>()
            - self.lower_gammas.iter().map(|g| g.slope.abs()).sum::<f64>()
    }

    /// Interval `(left, right)` of admissible abscissae.
    pub fn strip(&self) -> (f64, f64) {
        let mut left = f64::NEG_INFINITY;
        let mut right = f64::INFINITY;
        for g in &self.upper_gammas {
            if g.slope > 0.0 {
                left = left.max(g.first_pole());
            } else {
                right = right.min(g.first_pole());
            }
        }
        if self.extra_pole_at_zero {
            left = left.max(0.0);
        }
        (left, right)
    }

    /// `ln f(s)`; `None` where a denominator gamma sits on a pole (f = 0).
    pub fn ln_eval(&self, s: Complex64) -> Option<Complex64> {
        let mut acc = -s * self.argument.ln();
        for g in &self.upper_gammas {
            acc += ln_gamma_complex(g.arg(s));
        }
        for g in &self.lower_gammas {
            let a = g.arg(s);
            if a.im == 0.0 && a.re <= 0.0 && a.re.fract() == 0.0 {
                return None;
            }
            acc -= ln_gamma_complex(a);
        }
        if self.extra_pole_at_zero {
            acc -= s.ln();
        }
        Some(acc)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.ln_eval(s).map_or(Complex64::new(0.0, 0.0), |l| l.exp())
    }

    /// `ln |f(sigma)|` on the real axis.
    fn ln_abs_real(&self, sigma: f64) -> f64 {
        let mut acc = -sigma * self.argument.ln();
        for g in &self.upper_gammas {
            match specfun::ln_gamma_signed(g.arg_re(sigma)) {
                Some((l, _)) => acc += l,
                None => return f64::INFINITY,
            }
        }
        for g in &self.lower_gammas {
            match specfun::ln_gamma_signed(g.arg_re(sigma)) {
                Some((l, _)) => acc -= l,
                None => return f64::INFINITY,
            }
        }
        if self.extra_pole_at_zero {
            acc -= sigma.abs().ln();
        }
        acc
    }
}

/// Vertical contour `Re s = abscissa`, truncated adaptively at
/// `|Im s| <= max_half_extent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub max_half_extent: f64,
    pub tolerance: f64,
}

impl ContourSpec {
    pub const DEFAULT_MAX_HALF_EXTENT: f64 = 1e4;
    pub const DEFAULT_TOLERANCE: f64 = 1e-13;

    pub fn new(abscissa: f64) -> Self {
        Self {
            abscissa,
            max_half_extent: Self::DEFAULT_MAX_HALF_EXTENT,
            tolerance: Self::DEFAULT_TOLERANCE,
        }
    }

    /// Abscissa at the minimum of `|f|` on the real axis inside the strip,
    /// which is where the integrand is least oscillatory relative to its size.
    pub fn auto(integrand: &MellinIntegrand) -> Result<Self, ContourError> {
        let (left, right) = integrand.strip();
        if !(left < right) {
            return Err(ContourError::InvalidAbscissa { abscissa: f64::NAN, left, right });
        }
        let g = |x: f64| integrand.ln_abs_real(x);
        // Open ends of the strip: widen until ln|f| turns upward (the saddle
        // moves out like z^{1/Delta} for small decay rates).
        let widen = |anchor: f64, dir: f64| {
            let mut w = 8.0;
            while w < 1e4 && g(anchor + dir * 2.0 * w) < g(anchor + dir * w) {
                w *= 2.0;
            }
            anchor + dir * 2.0 * w
        };
        let (lo, hi) = match (left.is_finite(), right.is_finite()) {
            (true, true) => {
                let m = (0.25 * (right - left)).min(0.25);
                (left + m, right - m)
            }
            (true, false) => (left + 0.25, widen(left + 0.25, 1.0)),
            (false, true) => (widen(right - 0.25, -1.0), right - 0.25),
            (false, false) => (widen(0.0, -1.0), widen(0.0, 1.0)),
        };
        let (mut a, mut b) = (lo, hi);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut gc, mut gd) = (g(c), g(d));
        for _ in 0..100 {
            if gc < gd {
                b = d;
                d = c;
                gd = gc;
                c = b - r * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + r * (b - a);
                gd = g(d);
            }
            if b - a < 1e-6 {
                break;
            }
        }
        let mut sigma = 0.5 * (a + b);
        // Keep clear of gamma poles that the strip does not exclude
        // (denominator factors and the far side of the strip).
        for _ in 0..20 {
            if !near_any_pole(integrand, sigma, 1e-3) {
                break;
            }
            sigma += 0.0137;
        }
        Ok(Self::new(sigma))
    }

    pub fn with_abscissa(mut self, abscissa: f64) -> Self {
        self.abscissa = abscissa;
        self
    }
}

fn near_any_pole(integrand: &MellinIntegrand, sigma: f64, tol: f64) -> bool {
    integrand.upper_gammas.iter().chain(&integrand.lower_gammas).any(|g| {
        let a = g.arg_re(sigma);
        a <= tol && (a - a.round()).abs() < tol
    })
}

/// Diagnostics of a contour evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOutcome {
    pub value: f64,
    /// Largest `|f|` seen on the contour.
    pub peak: f64,
    /// Truncation point actually used.
    pub half_extent: f64,
}

fn validate(integrand: &MellinIntegrand, spec: &ContourSpec) -> Result<(), ContourError> {
    let (left, right) = integrand.strip();
    let gamma = spec.abscissa;
    if !(gamma > left && gamma < right) || !gamma.is_finite() {
        return Err(ContourError::InvalidAbscissa { abscissa: gamma, left, right });
    }
    for g in &integrand.upper_gammas {
        let a = g.arg_re(gamma);
        if a <= 1e-8 && (a - a.round()).abs() < 1e-8 {
            return Err(ContourError::PoleOnContour { arg: a });
        }
    }
    if integrand.extra_pole_at_zero && gamma.abs() < 1e-8 {
        return Err(ContourError::PoleOnContour { arg: gamma });
    }
    let delta = integrand.decay_rate();
    if delta <= 0.0 {
        return Err(ContourError::DecayError(format!(
            "decay rate {delta} <= 0: the integrand decays at most algebraically"
        )));
    }
    Ok(())
}

/// `(1/2 pi i) int f(s) ds` along `Re s = spec.abscissa`.
pub fn mellin_barnes_eval(integrand: &MellinIntegrand, spec: &ContourSpec) -> Result<f64, ContourError> {
    mellin_barnes_detailed(integrand, spec).map(|o| o.value)
}

/// As [`mellin_barnes_eval`], returning diagnostics.
///
/// Conjugate symmetry `f(conj s) = conj f(s)` reduces the integral to
/// `(1/pi) int_0^U Re f(gamma + iu) du`. The half-line is covered by panels
/// `[0, 8], [8, 16], [16, 32], ...`; integration stops once a panel adds less
/// than `1e-14` of the running total and the integrand has fallen below
/// `1e-14` of its peak.
pub fn mellin_barnes_detailed(
    integrand: &MellinIntegrand,
    spec: &ContourSpec,
) -> Result<ContourOutcome, ContourError> {
    validate(integrand, spec)?;
    let gamma = spec.abscissa;
    // |f| <= e^{-760} along the whole line: the value underflows.
    if integrand.ln_abs_real(gamma) < -760.0 {
        return Ok(ContourOutcome { value: 0.0, peak: 0.0, half_extent: 0.0 });
    }
    let f = |u: f64| integrand.eval(Complex64::new(gamma, u));

    // The imaginary part of the full-line integral must vanish.
    let mut peak = f(0.0).norm();
    for &u in &[0.37, 1.9, 6.1] {
        let up = f(u);
        let down = f(-u);
        peak = peak.max(up.norm());
        let residual = (up - down.conj()).norm() / peak.max(f64::MIN_POSITIVE);
        if residual > 1e-10 {
            return Err(ContourError::Asymmetry { residual });
        }
    }

    let re = |u: f64| f(u).re;
    let mut total = 0.0f64;
    let mut a = 0.0;
    let mut b = 8.0;
    loop {
        let tol = (spec.tolerance * peak.max(total.abs()) * 0.1).max(1e-280);
        let r = match quad::gauss_kronrod(re, a, b, spec.tolerance, tol, 4000) {
            Ok(r) => r,
            // Deep in the tails the integrand is exp of a log-gamma sum of
            // size ~1e3, so its own relative noise is ~1e-13; accept an
            // error estimate stalled within a factor 100 of the target.
            Err(QuadError::NoConvergence { estimate, error, .. })
                if error <= 100.0 * tol.max(spec.tolerance * estimate.abs()) =>
            {
                quad::GkResult { value: estimate, error, fmax: 0.0 }
            }
            Err(e) => return Err(e.into()),
        };
        total += r.value;
        peak = peak.max(r.fmax);
        let tail = f(b).norm();
        let settled = r.value.abs() <= 1e-14 * total.abs() || r.value.abs() <= 1e-16 * peak;
        if settled && tail <= 1e-14 * peak {
            break;
        }
        if b >= spec.max_half_extent {
            return Err(ContourError::DecayError(format!(
                "|f| = {tail:e} at u = {b} is still above 1e-14 of the peak {peak:e}"
            )));
        }
        a = b;
        b = (2.0 * b).min(spec.max_half_extent);
    }
    Ok(ContourOutcome { value: total / PI, peak, half_extent: b })
}

/// Diagnostics of a residue-series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueOutcome {
    pub value: f64,
    /// `sum |term|`; `abs_sum / |value|` bounds the cancellation loss.
    pub abs_sum: f64,
    pub terms: usize,
}

/// Sum of the residues at the left poles `s_k = -(k + shift)/slope` of the
/// single positive-slope numerator gamma (plus the pole of `1/s` at zero).
pub fn residue_series_eval(integrand: &MellinIntegrand, max_terms: usize) -> Result<f64, ContourError> {
    residue_series_detailed(integrand, max_terms).map(|o| o.value)
}

/// As [`residue_series_eval`], returning diagnostics.
pub fn residue_series_detailed(
    integrand: &MellinIntegrand,
    max_terms: usize,
) -> Result<ResidueOutcome, ContourError> {
    let mut family = integrand.upper_gammas.iter().enumerate().filter(|(_, g)| g.slope > 0.0);
    let (fi, fam) = match (family.next(), family.next()) {
        (Some(f), None) => f,
        _ => {
            return Err(ContourError::InvalidIntegrand(
                "residue series needs exactly one numerator gamma with positive slope".into(),
            ))
        }
    };
    let lz = integrand.argument.ln();
    let others: Vec<&GammaFactor> =
        integrand.upper_gammas.iter().enumerate().filter(|(i, _)| *i != fi).map(|(_, g)| g).collect();

    let mut sum = 0.0;
    let mut abs_sum = 0.0;

    if integrand.extra_pole_at_zero {
        if fam.shift <= 0.0 && fam.shift.fract() == 0.0 {
            return Err(ContourError::CoincidentPoles { at: 0.0 });
        }
        // Residue of f at s = 0: all gammas at s = 0.
        let mut l = 0.0;
        let mut sign = 1.0;
        for g in &integrand.upper_gammas {
            let (lg, sg) = specfun::ln_gamma_signed(g.shift).ok_or(ContourError::CoincidentPoles { at: 0.0 })?;
            l += lg;
            sign *= sg;
        }
        let mut zero = false;
        for g in &integrand.lower_gammas {
            match specfun::ln_gamma_signed(g.shift) {
                Some((lg, sg)) => {
                    l -= lg;
                    sign *= sg;
                }
                None => zero = true,
            }
        }
        if !zero {
            let v = sign * l.exp();
            sum += v;
            abs_sum += v.abs();
        }
    }

    let mut quiet = 0;
    for k in 0..max_terms {
        let s = -(k as f64 + fam.shift) / fam.slope;
        // Residue of Gamma(shift + slope s) at s_k.
        let mut l = -specfun::ln_gamma(k as f64 + 1.0).unwrap_or(0.0) - fam.slope.ln();
        let mut sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for g in &others {
            let (lg, sg) = specfun::ln_gamma_signed(g.arg_re(s)).ok_or(ContourError::CoincidentPoles { at: s })?;
            l += lg;
            sign *= sg;
        }
        let mut zero = false;
        for g in &integrand.lower_gammas {
            match specfun::ln_gamma_signed(g.arg_re(s)) {
                Some((lg, sg)) => {
                    l -= lg;
                    sign *= sg;
                }
                None => zero = true,
            }
        }
        if integrand.extra_pole_at_zero {
            l -= s.abs().ln();
            sign *= s.signum();
        }
        l -= s * lz;
        if zero {
            continue;
        }
        let term = sign * l.exp();
        if !term.is_finite() {
            return Err(ContourError::NonConvergence { terms: k });
        }
        sum += term;
        abs_sum += term.abs();
        if sum != 0.0 && term.abs() < 1e-15 * sum.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(ResidueOutcome { value: sum, abs_sum, terms: k + 1 });
            }
        } else {
            quiet = 0;
        }
    }
    Err(ContourError::NonConvergence { terms: max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_pair() {
        let f = MellinIntegrand::exponential(1.0).unwrap();
        let v = mellin_barnes_eval(&f, &ContourSpec::new(1.0)).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-13, "{v}");
        let r = residue_series_eval(&f, 200).unwrap();
        assert!((r - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn incomplete_gamma_pattern() {
        let f = MellinIntegrand::incomplete_gamma(0.5, 1.0).unwrap();
        let spec = ContourSpec::auto(&f).unwrap();
        let v = mellin_barnes_eval(&f, &spec).unwrap() / specfun::gamma(0.5).unwrap();
        assert!((v - 0.157_299_207_050_285_13).abs() < 1e-12, "{v}");
    }

    #[test]
    fn algebraic_decay_is_rejected() {
        // alpha = 1: Gamma(s + rho)/Gamma(s + 1) decays only like |u|^{rho - 1}.
        let f = MellinIntegrand::stable_kernel(1.0, 0.3, 0.5).unwrap();
        let err = mellin_barnes_eval(&f, &ContourSpec::new(0.5)).unwrap_err();
        assert!(matches!(err, ContourError::DecayError(_)));
    }

    #[test]
    fn pole_checks() {
        let f = MellinIntegrand::incomplete_gamma(0.5, 1.0).unwrap();
        assert!(matches!(
            mellin_barnes_eval(&f, &ContourSpec::new(-0.2)),
            Err(ContourError::InvalidAbscissa { .. })
        ));
        let g = MellinIntegrand::new(vec![GammaFactor::new(0.0, 1.0), GammaFactor::new(2.0, -1.0)], vec![], false, 1.0)
            .unwrap();
        assert!(matches!(
            mellin_barnes_eval(&g, &ContourSpec::new(2.0)),
            Err(ContourError::InvalidAbscissa { .. })
        ));
        assert!(matches!(
            residue_series_eval(&MellinIntegrand::incomplete_gamma(-1.0, 1.0).unwrap(), 10),
            Err(ContourError::CoincidentPoles { .. })
        ));
    }

    #[test]
    fn residue_series_reports_nonconvergence() {
        // Gamma(s)Gamma(1-s) z^{-s}: left residues (-z)^k diverge for z > 1.
        let f = MellinIntegrand::new(vec![GammaFactor::new(0.0, 1.0), GammaFactor::new(1.0, -1.0)], vec![], false, 2.0)
            .unwrap();
        assert!(matches!(residue_series_eval(&f, 50), Err(ContourError::NonConvergence { .. })));
    }
}
