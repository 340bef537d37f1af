//! Monte-Carlo generation of `X_{alpha,rho}` and of its paths.
//!
//! For `rho <= 1` the law is a mixture: `X(t) = (c t V)^{1/alpha} S` with
//! `S` one-sided standard stable (Laplace transform `exp(-eta^alpha)`) and
//! `V = 1/B`, `B ~ Beta(rho, 1 - rho)`. Indeed `E exp(-u V)` is the tempered
//! relaxation `Gamma(rho; u)/Gamma(rho)` written through its spectral
//! density, so the Laplace transform of `X(t)` is `Gamma(rho; c t eta^alpha)/Gamma(rho)`.
//! Paths reuse a single `V` and add independent stable increments.
//!
//! `rho = 2` has no such mixture and is drawn by inverting a tabulated CDF.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::process::{self, ProcessError, ProcessParams};
use crate::specfun;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("inverse-CDF table construction failed: {0}")]
    TableBuild(String),
    #[error(transparent)]
    Process(#[from] ProcessError),
}

fn invalid(msg: impl Into<String>) -> SamplingError {
    SamplingError::InvalidParams(msg.into())
}

/// Reproducible random stream: ChaCha20 keyed by `seed`, on stream `stream_id`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard exponential.
    pub fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }
}

/// A batch of draws of `X(t)` with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub params: ProcessParams,
    pub t: f64,
    pub seed: u64,
    /// Draws per stream; chunk `j` uses stream `j`.
    pub chunk_size: usize,
    pub values: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Building blocks

const U_CLAMP: f64 = 1e-12;

/// `ln S` for the standard one-sided stable law, Kanter's representation
/// `S = (A(pi U) / E)^{(1-alpha)/alpha}`.
fn ln_stable(alpha: f64, rng: &mut RngStream) -> f64 {
    let u = rng.uniform().clamp(U_CLAMP, 1.0 - U_CLAMP);
    let e = rng.exponential();
    let phi = PI * u;
    let la = specfun::ln_kanter(alpha, phi, PI * (1.0 - u));
    (1.0 - alpha) / alpha * (la - e.ln())
}

/// Standard one-sided stable variate, Laplace transform `exp(-eta^alpha)`.
pub fn sample_stable(alpha: f64, rng: &mut RngStream) -> Result<f64, SamplingError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha = {alpha} must be in (0, 1)")));
    }
    Ok(ln_stable(alpha, rng).exp())
}

/// `Beta(a, 1 - a)`, `0 < a < 1`, by Jöhnk's algorithm in log form.
pub fn sample_beta_complementary(a: f64, rng: &mut RngStream) -> Result<f64, SamplingError> {
    if !(a > 0.0 && a < 1.0) {
        return Err(invalid(format!("a = {a} must be in (0, 1)")));
    }
    let b = 1.0 - a;
    loop {
        let lx = rng.uniform().ln() / a;
        let ly = rng.uniform().ln() / b;
        let m = lx.max(ly);
        let (ex, ey) = ((lx - m).exp(), (ly - m).exp());
        let s = ex + ey;
        if m + s.ln() <= 0.0 {
            return Ok(ex / s);
        }
    }
}

/// Mixing variable `V = 1/B`, `B ~ Beta(rho, 1 - rho)`; `V = 1` at `rho = 1`.
pub fn sample_mixing(rho: f64, rng: &mut RngStream) -> Result<f64, SamplingError> {
    if rho == 1.0 {
        return Ok(1.0);
    }
    Ok(1.0 / sample_beta_complementary(rho, rng)?)
}

fn require_mixture(p: ProcessParams) -> Result<(), SamplingError> {
    if p.rho() > 1.0 {
        return Err(invalid(format!(
            "rho = {} > 1: the mixture representation needs rho <= 1 (use the rho = 2 sampler)",
            p.rho()
        )));
    }
    if p.alpha() >= 1.0 {
        return Err(invalid("alpha must be < 1"));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<(), SamplingError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid(format!("t = {t} must be positive")));
    }
    Ok(())
}

/// One draw of `X(t)` for `rho <= 1`.
pub fn sample_one(p: ProcessParams, t: f64, rng: &mut RngStream) -> Result<f64, SamplingError> {
    require_mixture(p)?;
    check_time(t)?;
    let v = sample_mixing(p.rho(), rng)?;
    let a = p.alpha();
    Ok(((p.c() * t * v).ln() / a + ln_stable(a, rng)).exp())
}

/// `X(t_1), ..., X(t_n)` along one path, `rho <= 1`.
pub fn sample_path(p: ProcessParams, times: &[f64], rng: &mut RngStream) -> Result<Vec<f64>, SamplingError> {
    require_mixture(p)?;
    if times.is_empty() || !(times[0] > 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("times must be positive and strictly increasing"));
    }
    let a = p.alpha();
    let v = sample_mixing(p.rho(), rng)?;
    let mut x = 0.0;
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        x += ((p.c() * (t - prev) * v).ln() / a + ln_stable(a, rng)).exp();
        prev = t;
        out.push(x);
    }
    Ok(out)
}

/// Default number of draws per stream in batch generation.
pub const CHUNK_SIZE: usize = 1 << 16;

fn chunked<T: Send>(
    n: usize,
    seed: u64,
    chunk: usize,
    draw: impl Fn(&mut RngStream) -> Result<T, SamplingError> + Sync + Send,
) -> Result<Vec<T>, SamplingError> {
    let chunks: Vec<(u64, usize)> =
        (0..n.div_ceil(chunk)).map(|j| (j as u64, chunk.min(n - j * chunk))).collect();
    let parts = crate::par::map(&chunks, |&(id, len)| {
        let mut rng = RngStream::new(seed, id);
        (0..len).map(|_| draw(&mut rng)).collect::<Result<Vec<T>, _>>()
    });
    let mut out = Vec::with_capacity(n);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// `n` draws of `X(t)`; chunk `j` of [`CHUNK_SIZE`] draws uses stream `j`,
/// so the result does not depend on the thread count. Uses the mixture for
/// `rho <= 1` and the tabulated inverse CDF for `rho = 2`.
pub fn sample_batch(p: ProcessParams, t: f64, n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    check_time(t)?;
    let values = if p.rho() == 2.0 {
        let table = Rho2Sampler::new(p, t)?;
        chunked(n, seed, CHUNK_SIZE, |rng| Ok(table.sample(rng)))?
    } else {
        require_mixture(p)?;
        chunked(n, seed, CHUNK_SIZE, |rng| sample_one(p, t, rng))?
    };
    Ok(SampleBatch { params: p, t, seed, chunk_size: CHUNK_SIZE, values })
}

/// `n` paths observed at `times`, chunked over streams as in [`sample_batch`].
pub fn sample_paths(p: ProcessParams, times: &[f64], n: usize, seed: u64) -> Result<Vec<Vec<f64>>, SamplingError> {
    chunked(n, seed, CHUNK_SIZE, |rng| sample_path(p, times, rng))
}

// ---------------------------------------------------------------------------
// rho = 2 by inverse transform

/// Tabulated `F(x) = P(X(t) <= x)` on a log grid with a monotone cubic
/// (Fritsch–Carlson) interpolant in `ln x`, and a power-law tail beyond the
/// grid fitted to the last table interval.
#[derive(Debug, Clone)]
pub struct Rho2Sampler {
    ln_x: Vec<f64>,
    cdf: Vec<f64>,
    slope: Vec<f64>,
    /// Tail exponent `kappa` in `P(X > x) ~ P(X > x_max) (x / x_max)^{-kappa}`.
    tail_index: f64,
}

const TABLE_POINTS: usize = 600;

impl Rho2Sampler {
    pub fn new(p: ProcessParams, t: f64) -> Result<Self, SamplingError> {
        if p.rho() != 2.0 || p.alpha() > 0.5 {
            return Err(invalid(format!(
                "needs rho = 2 and alpha <= 1/2, got rho = {}, alpha = {}",
                p.rho(),
                p.alpha()
            )));
        }
        check_time(t)?;
        let build = |e: ProcessError| SamplingError::TableBuild(e.to_string());
        let scale = (p.c() * t).powf(1.0 / p.alpha());
        let mut lo = scale;
        while process::cdf(p, lo, t).map_err(build)? > 1e-16 {
            lo *= 0.5;
        }
        let mut hi = scale;
        while process::cdf_tail(p, hi, t).map_err(build)? > 1e-10 {
            hi *= 2.0;
        }
        let (l0, l1) = (lo.ln(), hi.ln());
        let ln_x: Vec<f64> = (0..TABLE_POINTS).map(|i| l0 + (l1 - l0) * i as f64 / (TABLE_POINTS - 1) as f64).collect();
        let cdf = crate::par::map(&ln_x, |&l| process::cdf(p, l.exp(), t))
            .into_iter()
            .collect::<Result<Vec<f64>, _>>()
            .map_err(build)?;
        if cdf.windows(2).any(|w| w[1] < w[0]) {
            return Err(SamplingError::TableBuild("tabulated CDF is not monotone".into()));
        }
        let slope = fritsch_carlson(&ln_x, &cdf);
        let n = ln_x.len();
        let (t1, t2) = (1.0 - cdf[n - 2], 1.0 - cdf[n - 1]);
        let tail_index = (t1 / t2).ln() / (ln_x[n - 1] - ln_x[n - 2]);
        if !(tail_index > 0.0) {
            return Err(SamplingError::TableBuild(format!("bad tail index {tail_index}")));
        }
        Ok(Self { ln_x, cdf, slope, tail_index })
    }

    /// Interpolated `F` at `ln x` inside the table.
    fn eval(&self, i: usize, lx: f64) -> f64 {
        let (x0, x1) = (self.ln_x[i], self.ln_x[i + 1]);
        let h = x1 - x0;
        let s = (lx - x0) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s).powi(2),
            s * (1.0 - s).powi(2),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        h00 * self.cdf[i] + h10 * h * self.slope[i] + h01 * self.cdf[i + 1] + h11 * h * self.slope[i + 1]
    }

    /// `x` with `F(x) = u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let n = self.ln_x.len();
        if u <= self.cdf[0] {
            return self.ln_x[0].exp();
        }
        if u >= self.cdf[n - 1] {
            let t_max = 1.0 - self.cdf[n - 1];
            return (self.ln_x[n - 1] + ((t_max / (1.0 - u)).ln() / self.tail_index)).exp();
        }
        let i = self.cdf.partition_point(|&f| f <= u) - 1;
        let (mut a, mut b) = (self.ln_x[i], self.ln_x[i + 1]);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if self.eval(i, m) < u {
                a = m;
            } else {
                b = m;
            }
        }
        (0.5 * (a + b)).exp()
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.quantile(rng.uniform())
    }
}

fn fritsch_carlson(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        m[i] = if d[i - 1] * d[i] <= 0.0 { 0.0 } else { 0.5 * (d[i - 1] + d[i]) };
    }
    for i in 0..n - 1 {
        if d[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let (a, b) = (m[i] / d[i], m[i + 1] / d[i]);
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            m[i] = tau * a * d[i];
            m[i + 1] = tau * b * d[i];
        }
    }
    m
}

/// One draw of `X(t)` at `rho = 2`. Builds the table each call; reuse a
/// [`Rho2Sampler`] for many draws.
pub fn sample_rho2(p: ProcessParams, t: f64, rng: &mut RngStream) -> Result<f64, SamplingError> {
    Ok(Rho2Sampler::new(p, t)?.sample(rng))
}

// ---------------------------------------------------------------------------
// Estimators

/// Mean and standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

pub fn mean_and_se(values: impl Iterator<Item = f64>) -> Estimate {
    let mut n = 0.0;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for v in values {
        n += 1.0;
        let d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    let var = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
    Estimate { mean, std_error: (var / n).sqrt() }
}

/// Empirical `E exp(-eta X)`.
pub fn empirical_laplace(values: &[f64], eta: f64) -> Estimate {
    mean_and_se(values.iter().map(|&x| (-eta * x).exp()))
}

/// Empirical `E exp(-eta1 X(t1) - eta2 X(t2))` over two-point paths.
pub fn empirical_joint_laplace(paths: &[Vec<f64>], eta1: f64, eta2: f64) -> Estimate {
    mean_and_se(paths.iter().map(|p| (-eta1 * p[0] - eta2 * p[1]).exp()))
}

/// Empirical `E X^delta`.
pub fn empirical_moment(values: &[f64], delta: f64) -> Estimate {
    mean_and_se(values.iter().map(|&x| x.powf(delta)))
}

/// One-sample Kolmogorov–Smirnov distance against `cdf`.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs())
    })
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Critical two-sample KS distance at significance `level`
/// (asymptotic `c(level) sqrt((n + m)/(n m))`).
pub fn ks_two_sample_critical(n: usize, m: usize, level: f64) -> f64 {
    let c = (-0.5 * (level / 2.0).ln()).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Hill estimator of the tail index from the top `k` order statistics.
pub fn hill_estimator(values: &[f64], k: usize) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    let k = k.clamp(1, v.len() - 1);
    let lk = v[k].ln();
    let mean: f64 = v[..k].iter().map(|x| x.ln() - lk).sum::<f64>() / k as f64;
    1.0 / mean
}

/// Sample median.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
