//! The smoothed character sums
//! `S_j(X, Y) = sum_n sum_m (m/n)_j Phi(N(n)/Y) W(N(m)/X)`
//! over primary `n` and `m` coprime to the ramified prime (`Z[i]` for
//! `j = 2, 4`, `Z[w]` for `j = 3`), with `Phi = W`, their predicted main
//! terms, and the identities used to check them.

mod direct;
mod factorization;
mod poisson;
mod zeta;

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use crate::gauss_sums::GaussSumError;
use crate::lattice::{enumerate, Filter};
use crate::rings::{euler_phi, EisInt, GaussInt, QuadInt, Ring, RingError};
use crate::symbols::SymbolError;
use crate::weights::{make_weight, TransformEvaluator, WeightError, DEFAULT_QUAD_TOL};

pub use direct::{direct_sum, direct_sum_naive, DirectSum};
pub use factorization::{factorization_check, squarefree_kernel, FactorizationCheck};
pub use poisson::{poisson_check, poisson_check_with, PoissonCheck};
pub use zeta::{
    zeta2, zeta2_euler_product, zeta2_ideal_sum, zeta2_value, ZetaConstant, ZetaDisagreement,
    ZetaMethod, DEFAULT_IDEAL_BOUND, DEFAULT_PRIME_BOUND,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SumError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dual sum truncation cannot certify tail {tol:e}: bound {bound:e} at t = {t}")]
    Truncation { tol: f64, bound: f64, t: f64 },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    GaussSum(#[from] GaussSumError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Zeta(#[from] ZetaDisagreement),
}

/// Truncation policy for dual (Poisson) sums.
///
/// Beyond the cutoff `T` the transform is assumed to decay like `t^-p`,
/// with the constant fitted on `[T/2, T]`; `T` grows until the implied
/// tail is below `tail_tol * max(1, |lhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Truncation {
    pub decay_exponent: u32,
    pub tail_tol: f64,
    pub max_t: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            decay_exponent: 6,
            tail_tol: DEFAULT_QUAD_TOL,
            max_t: 4000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SumConfig {
    pub j: u8,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub truncation: Truncation,
    pub quad_tol: f64,
    pub threads: usize,
}

/// `max(2, sqrt(X/Y))`; the weight needs `U >= 2`.
pub fn default_sharpness(x: f64, y: f64) -> f64 {
    (x / y).sqrt().max(2.0)
}

pub const THREADS_ENV: &str = "HECKE_THREADS";

impl SumConfig {
    pub fn new(j: u8, x: f64, y: f64) -> Result<Self, SumError> {
        let cfg = SumConfig {
            j,
            x,
            y,
            u: default_sharpness(x, y),
            truncation: Truncation::default(),
            quad_tol: DEFAULT_QUAD_TOL,
            threads: crate::par::available_threads(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_sharpness(mut self, u: f64) -> Self {
        self.u = u;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    /// Applies `HECKE_THREADS` if it is set to a positive integer.
    pub fn with_env_threads(mut self) -> Result<Self, SumError> {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            self.threads = v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&t| t > 0)
                .ok_or_else(|| SumError::Config(format!("{THREADS_ENV}={v:?} is not a positive integer")))?;
        }
        Ok(self)
    }

    pub fn ring(&self) -> Ring {
        if self.j == 3 {
            Ring::Eisenstein
        } else {
            Ring::Gauss
        }
    }

    pub fn validate(&self) -> Result<(), SumError> {
        let bad = |m: String| Err(SumError::Config(m));
        if !(2..=4).contains(&self.j) {
            return bad(format!("j must be 2, 3 or 4, got {}", self.j));
        }
        if !(self.x.is_finite() && self.x > 0.0 && self.y.is_finite() && self.y > 0.0) {
            return bad(format!("X and Y must be positive, got X={} Y={}", self.x, self.y));
        }
        if self.x > 1e9 || self.y > 1e9 {
            return bad("X and Y above 1e9 are out of range".into());
        }
        if !(self.u.is_finite() && self.u >= 2.0) {
            return bad(format!("U must be at least 2, got {}", self.u));
        }
        if !(self.quad_tol > 0.0) {
            return bad(format!("quad_tol must be positive, got {}", self.quad_tol));
        }
        if self.threads == 0 {
            return bad("threads must be positive".into());
        }
        Ok(())
    }

    pub fn evaluator(&self) -> Result<TransformEvaluator, SumError> {
        Ok(TransformEvaluator::new(make_weight(self.u)?, self.quad_tol)?)
    }
}

/// The predicted main term: `pi^2 X Y^(1/j) / (12 zeta_Q(i)(2))` for
/// `j = 2, 4` and `pi^2 X Y^(1/3) / (9 zeta_Q(w)(2))` for `j = 3`.
///
/// Both are the limit of [`m0_term`] as `U` grows: the prefactor
/// `c X Wt(0)`, times the density of `phi(m)/N(m)` over primary `m`, times
/// `Y^(1/j)`.
pub fn main_term(cfg: &SumConfig) -> Result<f64, SumError> {
    cfg.validate()?;
    let z = zeta2_value(cfg.ring());
    let yj = cfg.y.powf(1.0 / cfg.j as f64);
    Ok(PI * PI * cfg.x * yj / (main_term_denominator(cfg.j) * z))
}

pub fn main_term_denominator(j: u8) -> f64 {
    if j == 3 {
        9.0
    } else {
        12.0
    }
}

fn phi_weighted_powers<R: QuadInt>(j: u8, y: f64, phi: &impl Fn(f64) -> f64) -> f64 {
    let top = y.ceil() as i64;
    enumerate::<R>(top, Filter::JthPowerPrimary(j))
        .map(|n| {
            let norm = n.norm() as f64;
            euler_phi(n).expect("primary") as f64 / norm * phi(norm / y)
        })
        .sum()
}

/// The diagonal term: the `k = 0` dual contribution of every `n` whose
/// character is principal (`n` a `j`-th power),
/// `c X Wt(0) sum_n phi(n)/N(n) Phi(N(n)/Y)` with `c Wt(0)` equal to
/// `Wi(0)/2` on `Z[i]` and `2 Ww(0)/3` on `Z[w]`.
pub fn m0_term(cfg: &SumConfig) -> Result<f64, SumError> {
    cfg.validate()?;
    let ev = cfg.evaluator()?;
    let w = *ev.weight();
    let phi = |t: f64| w.eval(t);
    Ok(match cfg.ring() {
        Ring::Gauss => cfg.x * ev.transform_i(0.0)? / 2.0 * phi_weighted_powers::<GaussInt>(cfg.j, cfg.y, &phi),
        Ring::Eisenstein => {
            2.0 * cfg.x * ev.transform_omega(0.0)? / 3.0 * phi_weighted_powers::<EisInt>(cfg.j, cfg.y, &phi)
        }
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SumReport {
    pub j: u8,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "S_re")]
    pub s_re: f64,
    #[serde(rename = "S_im")]
    pub s_im: f64,
    pub main_term: f64,
    pub m0_term: f64,
    pub ratio: f64,
    pub imag_fraction: f64,
    pub n_count: u64,
    pub m_count: u64,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub error_budget: f64,
}

impl SumReport {
    pub fn direct(&self) -> Complex64 {
        Complex64::new(self.s_re, self.s_im)
    }

    /// Equality of everything but the timing.
    pub fn same_values(&self, other: &SumReport) -> bool {
        let strip = |r: &SumReport| SumReport {
            elapsed_ms: 0,
            ..r.clone()
        };
        let (a, b) = (strip(self), strip(other));
        a.s_re.to_bits() == b.s_re.to_bits() && a.s_im.to_bits() == b.s_im.to_bits() && a == b
    }
}

/// Direct sum, main term and diagonal term in one report.
pub fn compare(cfg: &SumConfig) -> Result<SumReport, SumError> {
    let start = Instant::now();
    let d = direct_sum(cfg)?;
    let main = main_term(cfg)?;
    let m0 = m0_term(cfg)?;
    let norm = d.value.norm();
    Ok(SumReport {
        j: cfg.j,
        x: cfg.x,
        y: cfg.y,
        u: cfg.u,
        s_re: d.value.re,
        s_im: d.value.im,
        main_term: main,
        m0_term: m0,
        ratio: d.value.re / main,
        imag_fraction: if norm > 0.0 { d.value.im.abs() / norm } else { 0.0 },
        n_count: d.n_count,
        m_count: d.m_count,
        elapsed_ms: start.elapsed().as_millis() as u64,
        error_budget: d.error_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_term_scaling() {
        let a = main_term(&SumConfig::new(2, 100.0, 10.0).unwrap()).unwrap();
        let b = main_term(&SumConfig::new(2, 200.0, 10.0).unwrap()).unwrap();
        let c = main_term(&SumConfig::new(2, 100.0, 40.0).unwrap()).unwrap();
        assert!((b / a - 2.0).abs() < 1e-12);
        assert!((c / a - 2.0).abs() < 1e-12);
        let unit = main_term(&SumConfig::new(2, 1.0, 1.0).unwrap()).unwrap();
        assert!((unit - 0.545_87).abs() < 1e-4, "{unit}");
    }

    #[test]
    fn config_validation() {
        assert!(SumConfig::new(5, 10.0, 1.0).is_err());
        assert!(SumConfig::new(2, -1.0, 1.0).is_err());
        assert!(SumConfig::new(2, 10.0, 1.0).unwrap().with_sharpness(1.5).validate().is_err());
        assert_eq!(SumConfig::new(2, 1000.0, 252.0).unwrap().u, 2.0);
        assert_eq!(SumConfig::new(3, 10.0, 1.0).unwrap().ring(), Ring::Eisenstein);
    }

    #[test]
    fn single_modulus_diagonal() {
        // only n = 1 below Y, so M0 = X Wi(0)/2 Phi(1/Y)
        let cfg = SumConfig::new(2, 50.0, 3.9).unwrap().with_sharpness(2.0);
        let ev = cfg.evaluator().unwrap();
        let want = 50.0 * ev.transform_i(0.0).unwrap() / 2.0 * ev.weight().eval(1.0 / 3.9);
        assert!((m0_term(&cfg).unwrap() - want).abs() < 1e-12);
    }
}
