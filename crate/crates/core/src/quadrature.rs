//! Adaptive Gauss-Legendre quadrature on intervals.

use std::sync::OnceLock;

/// Number of Gauss-Legendre nodes per panel.
pub const NODES: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("quadrature on [{a}, {b}] did not reach tolerance {tol:e} (estimate {estimate:e})")]
pub struct QuadratureError {
    pub a: f64,
    pub b: f64,
    pub tol: f64,
    pub estimate: f64,
}

/// Nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES))
}

/// One fixed-order panel.
pub fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        acc += wi * f(mid + half * xi);
    }
    acc * half
}

const MAX_DEPTH: u32 = 60;

fn adapt<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<(f64, f64), QuadratureError> {
    let m = (a + b) / 2.0;
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let est = (left + right - whole).abs();
    if est <= tol || (b - a) <= f64::EPSILON * (a.abs() + b.abs()) * 64.0 {
        return Ok((left + right, est));
    }
    if depth >= MAX_DEPTH {
        return Err(QuadratureError {
            a,
            b,
            tol,
            estimate: est,
        });
    }
    let (l, el) = adapt(f, a, m, left, tol / 2.0, depth + 1)?;
    let (r, er) = adapt(f, m, b, right, tol / 2.0, depth + 1)?;
    Ok((l + r, el + er))
}

/// `int_a^b f` to absolute tolerance `tol` by panel bisection.
///
/// Returns the value and the accumulated error estimate.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), QuadratureError> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let whole = panel(&mut f, a, b);
    adapt(&mut f, a, b, whole, tol, 0)
}

/// As [`integrate`] over the consecutive pieces of `breaks`, splitting the
/// tolerance evenly.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    tol: f64,
) -> Result<(f64, f64), QuadratureError> {
    let pieces = breaks.len().saturating_sub(1).max(1) as f64;
    let (mut v, mut e) = (0.0, 0.0);
    for w in breaks.windows(2) {
        let (pv, pe) = integrate(&mut f, w[0], w[1], tol / pieces)?;
        v += pv;
        e += pe;
    }
    Ok((v, e))
}
