//! Every numeric tolerance used by the verification suites.
//!
//! Bump [`TABLE_VERSION`] whenever a value changes.

pub const TABLE_VERSION: u32 = 1;

pub const ODE_RESIDUAL: f64 = 1e-5;
pub const ML_FORM: f64 = 1e-10;
pub const CAPUTO_MONOMIAL: f64 = 1e-7;
pub const CAPUTO_ML: f64 = 1e-7;
pub const LAPLACE_CONV: f64 = 1e-6;
pub const LAPLACE_PHI: f64 = 1e-8;
pub const SMALL_T_RATIO: f64 = 1e-2;
pub const SPECTRAL_RECONSTRUCT: f64 = 1e-8;
pub const SPECTRAL_MASS: f64 = 1e-8;
pub const SPECTRAL_EXAMPLE: f64 = 1e-14;
pub const DENSITY_MASS: f64 = 1e-8;
pub const DENSITY_LAPLACE: f64 = 1e-7;
pub const METHOD_AGREEMENT: f64 = 1e-8;
pub const STABLE_REDUCTION: f64 = 1e-8;
pub const LEVY_CLOSED_FORM: f64 = 1e-10;
pub const SELF_SIMILARITY: f64 = 1e-9;
pub const MOMENT_REL: f64 = 1e-5;
pub const MOMENT_ANCHOR: f64 = 1e-14;
pub const TAIL_CONSTANT_REL: f64 = 0.05;
pub const TAIL_CLOSED_FORM: f64 = 1e-10;
pub const CODIFF_STABLE: f64 = 1e-12;
pub const CODIFF_LIMIT: f64 = 1e-2;
pub const POISSON_IDENTITY: f64 = 1e-12;
pub const RHO2_WRIGHT: f64 = 1e-9;
pub const RHO2_RL: f64 = 1e-5;
pub const RHO2_SLOPE: f64 = 0.05;
pub const FOURIER_RESIDUAL: f64 = 1e-10;
pub const LEVY_EXAMPLE: f64 = 1e-9;
pub const LEVY_SLOPE: f64 = 0.1;
pub const MC_STANDARD_ERRORS: f64 = 4.0;
pub const KS_RHO2: f64 = 0.002;
pub const KS_SIGNIFICANCE: f64 = 1e-3;
pub const MEDIAN_REL: f64 = 0.01;
pub const HILL_ABS: f64 = 0.1;
