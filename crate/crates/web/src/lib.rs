//! Browser bindings for the interactive demo page in `www/`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use tempstable::process::{self, ProcessParams};
use tempstable::relaxation::{self as rx, RelaxationParams};
use tempstable::sampling;
use wasm_bindgen::prelude::*;

fn js<E: std::fmt::Display>(e: E) -> JsError {
    JsError::new(&e.to_string())
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(JsError::new("need 0 < lo < hi and at least two points"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect())
}

fn law(alpha: f64, rho: f64, c: f64) -> Result<ProcessParams, JsError> {
    ProcessParams::new(alpha, rho, c).map_err(js)
}

/// `phi(t)` at `n` equally spaced times on `[0, t_max]`.
#[wasm_bindgen]
pub fn relaxation_curve(lambda: f64, rho: f64, t_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let p = RelaxationParams::new(lambda, rho).map_err(js)?;
    if !(t_max > 0.0) || n < 2 {
        return Err(JsError::new("need t_max > 0 and at least two points"));
    }
    (0..n).map(|i| rx::phi(p, t_max * i as f64 / (n - 1) as f64).map_err(js)).collect()
}

/// Density `h(x, t)` on `n` log-spaced points of `[x_min, x_max]`.
#[wasm_bindgen]
pub fn density_curve(
    alpha: f64,
    rho: f64,
    c: f64,
    t: f64,
    x_min: f64,
    x_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    let p = law(alpha, rho, c)?;
    log_grid(x_min, x_max, n)?.into_iter().map(|x| process::density(p, x, t).map_err(js)).collect()
}

/// Histogram of `draws` samples of `X(t)` as a density estimate over `bins`
/// log-spaced cells of `[x_min, x_max]`; mass outside the range is dropped.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn sample_histogram(
    alpha: f64,
    rho: f64,
    c: f64,
    t: f64,
    draws: usize,
    seed: u32,
    x_min: f64,
    x_max: f64,
    bins: usize,
) -> Result<Vec<f64>, JsError> {
    let p = law(alpha, rho, c)?;
    let edges = log_grid(x_min, x_max, bins + 1)?;
    let batch = sampling::sample_batch(p, t, draws, u64::from(seed)).map_err(js)?;
    let (la, lb) = (x_min.ln(), x_max.ln());
    let mut counts = vec![0.0; bins];
    for &x in &batch.values {
        let u = (x.ln() - la) / (lb - la);
        if (0.0..1.0).contains(&u) {
            counts[(u * bins as f64) as usize] += 1.0;
        }
    }
    let n = draws as f64;
    Ok(counts.iter().zip(edges.windows(2)).map(|(k, w)| k / (n * (w[1] - w[0]))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_tracks_density() {
        let h = sample_histogram(0.5, 1.0, 1.0, 1.0, 200_000, 7, 0.05, 20.0, 12).unwrap();
        let edges = log_grid(0.05, 20.0, 13).unwrap();
        let mids: Vec<f64> = edges.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
        let d = density_curve(0.5, 1.0, 1.0, 1.0, mids[0], mids[11], 12).unwrap();
        for (a, b) in h.iter().zip(&d) {
            assert!((a - b).abs() < 0.15 * b + 2e-3, "{a} vs {b}");
        }
    }

    #[test]
    fn relaxation_curve_starts_at_one() {
        let v = relaxation_curve(1.0, 0.5, 5.0, 51).unwrap();
        assert_eq!(v.len(), 51);
        assert_eq!(v[0], 1.0);
        assert!((v[10] - 0.1572992070502851).abs() < 1e-14);
    }
}
