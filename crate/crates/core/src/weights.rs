//! The smooth cutoff `W` with sharpness `U` and its Fourier-type transforms
//! `Wi(t) = int int cos(2 pi t y) W(x^2 + y^2) dx dy` and
//! `Ww(t) = (2/sqrt 3) Wi(2t/sqrt 3)`.
//!
//! `W(t) = s(U t) s(U (1 - t))` with the mollified step
//! `s(x) = f(x) / (f(x) + f(1 - x))`, `f(x) = exp(-1/x)` for `x > 0`.
//! `W` is supported in `(0, 1)` and equals 1 on `[1/U, 1 - 1/U]`.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, RwLock};

use crate::numeric::NeumaierSum;
use crate::quadrature::{integrate_pieces, QuadratureError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("sharpness U must be a finite number >= 2, got {0}")]
    BadSharpness(f64),
    #[error("transform argument must be finite and nonnegative, got {0}")]
    BadArgument(f64),
    #[error("quadrature tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[inline]
fn bump_edge(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `x <= 0`, 1 for `x >= 1`.
#[inline]
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let (a, b) = (bump_edge(x), bump_edge(1.0 - x));
        a / (a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothWeight {
    u: f64,
}

pub fn make_weight(u: f64) -> Result<SmoothWeight, WeightError> {
    if !u.is_finite() || u < 2.0 {
        return Err(WeightError::BadSharpness(u));
    }
    Ok(SmoothWeight { u })
}

impl SmoothWeight {
    pub fn sharpness(&self) -> f64 {
        self.u
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= 1.0 {
            return 0.0;
        }
        smooth_step(self.u * t) * smooth_step(self.u * (1.0 - t))
    }

    /// `int W(x^2 + y^2) dx` over the real line.
    pub fn slice_integral(&self, y: f64, tol: f64) -> Result<f64, QuadratureError> {
        let y2 = y * y;
        if y2 >= 1.0 {
            return Ok(0.0);
        }
        let mut breaks = vec![0.0];
        for r2 in [1.0 / self.u, 1.0 - 1.0 / self.u] {
            if r2 > y2 {
                breaks.push((r2 - y2).sqrt());
            }
        }
        breaks.push((1.0 - y2).sqrt());
        let (v, _) = integrate_pieces(|x| self.eval(x * x + y2), &breaks, tol / 2.0)?;
        Ok(2.0 * v)
    }
}

/// Trapezoid samples `d * h(k d)` of the slice profile, `d = 1/m`.
#[derive(Debug)]
struct Spectral {
    /// Largest argument served with the certified accuracy.
    t_cap: f64,
    step: f64,
    samples: Vec<f64>,
}

const RESYNC: usize = 16;

impl Spectral {
    /// `sum_k w_k h(k d) cos(2 pi t k d)` with the even extension folded in.
    fn eval(&self, t: f64, stride: usize) -> f64 {
        let d = self.step * stride as f64;
        let theta = TAU * t * d;
        let rot = (theta.cos(), theta.sin());
        let mut acc = NeumaierSum::new();
        let (mut c, mut s) = (1.0, 0.0);
        for (j, &h) in self.samples.iter().step_by(stride).enumerate() {
            // the rotation drifts by about one ulp per step
            if j % RESYNC == 0 {
                let phi = theta * j as f64;
                (c, s) = (phi.cos(), phi.sin());
            }
            acc.add(if j == 0 { h } else { 2.0 * h * c });
            (c, s) = (c * rot.0 - s * rot.1, c * rot.1 + s * rot.0);
        }
        let acc = acc.value();
        acc * d
    }
}

/// Evaluates `Wi` and `Ww`, memoizing computed values.
///
/// The production path is the trapezoid rule on the even, compactly
/// supported slice profile `h(y) = int W(x^2 + y^2) dx`, whose error is the
/// aliased tail `Wi(m - t)`; the grid is refined until the half-grid
/// difference is below the tolerance. [`TransformEvaluator::transform_i_reference`]
/// is the tensor Gauss-Legendre rule it is validated against.
#[derive(Debug)]
pub struct TransformEvaluator {
    weight: SmoothWeight,
    quad_tol: f64,
    cache: Mutex<HashMap<u64, f64>>,
    spectral: RwLock<Option<Arc<Spectral>>>,
}

impl Clone for TransformEvaluator {
    fn clone(&self) -> Self {
        TransformEvaluator {
            weight: self.weight,
            quad_tol: self.quad_tol,
            cache: Mutex::new(self.cache.lock().expect("cache lock").clone()),
            spectral: RwLock::new(self.spectral.read().expect("spectral lock").clone()),
        }
    }
}

pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

impl TransformEvaluator {
    pub fn new(weight: SmoothWeight, quad_tol: f64) -> Result<Self, WeightError> {
        if !(quad_tol > 0.0) {
            return Err(WeightError::BadTolerance(quad_tol));
        }
        Ok(TransformEvaluator {
            weight,
            quad_tol,
            cache: Mutex::new(HashMap::new()),
            spectral: RwLock::new(None),
        })
    }

    pub fn weight(&self) -> &SmoothWeight {
        &self.weight
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    fn build_spectral(&self, t_cap: f64) -> Result<Spectral, WeightError> {
        let u = self.weight.sharpness();
        let mut m = (t_cap + 150.0 * u).ceil().max(64.0) as usize;
        let node_tol = self.quad_tol * 1e-4;
        loop {
            let step = 1.0 / m as f64;
            let samples = (0..m)
                .map(|k| self.weight.slice_integral(k as f64 * step, node_tol))
                .collect::<Result<Vec<_>, _>>()?;
            let sp = Spectral {
                t_cap,
                step,
                samples,
            };
            // The half grid aliases Wi(m/2 - t), far larger than the full
            // grid's Wi(m - t); their difference bounds the latter.
            let probes = [0.0, t_cap / 3.0, 2.0 * t_cap / 3.0, t_cap];
            let worst = probes
                .iter()
                .map(|&t| (sp.eval(t, 1) - sp.eval(t, 2)).abs())
                .fold(0.0, f64::max);
            if worst < self.quad_tol * 1e-2 || m > 1 << 22 {
                return Ok(sp);
            }
            m *= 2;
        }
    }

    fn spectral_for(&self, t: f64) -> Result<Arc<Spectral>, WeightError> {
        if let Some(sp) = self.spectral.read().expect("spectral lock").as_ref() {
            if sp.t_cap >= t {
                return Ok(Arc::clone(sp));
            }
        }
        let mut slot = self.spectral.write().expect("spectral lock");
        if let Some(sp) = slot.as_ref() {
            if sp.t_cap >= t {
                return Ok(Arc::clone(sp));
            }
        }
        let cap = slot.as_ref().map_or(t.max(64.0), |sp| (2.0 * sp.t_cap).max(t));
        let sp = Arc::new(self.build_spectral(cap)?);
        *slot = Some(Arc::clone(&sp));
        Ok(sp)
    }

    /// Builds the trapezoid grid for arguments up to `t_max` in one go.
    pub fn prepare(&self, t_max: f64) -> Result<(), WeightError> {
        self.spectral_for(t_max).map(|_| ())
    }

    /// `Wi(t)` with absolute error at most `quad_tol`.
    pub fn transform_i(&self, t: f64) -> Result<f64, WeightError> {
        if !t.is_finite() || t < 0.0 {
            return Err(WeightError::BadArgument(t));
        }
        let key = t.to_bits();
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let v = self.spectral_for(t)?.eval(t, 1);
        self.cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    /// `Ww(t) = (2/sqrt 3) int int W(x^2 + y^2) cos(4 pi t y / sqrt 3)`.
    pub fn transform_omega(&self, t: f64) -> Result<f64, WeightError> {
        if !t.is_finite() || t < 0.0 {
            return Err(WeightError::BadArgument(t));
        }
        let s3 = 3f64.sqrt();
        Ok(2.0 / s3 * self.transform_i(2.0 * t / s3)?)
    }

    /// Uncached, without the trapezoid table; for many arguments at once.
    pub fn transform_i_uncached(&self, t: f64) -> Result<f64, WeightError> {
        if !t.is_finite() || t < 0.0 {
            return Err(WeightError::BadArgument(t));
        }
        Ok(self.spectral_for(t)?.eval(t, 1))
    }

    /// `Wi(t)` by tensor Gauss-Legendre: adaptive in `y` over panels of
    /// width at most `1/(4t)`, each slice integrated adaptively in `x`.
    pub fn transform_i_reference(&self, t: f64) -> Result<f64, WeightError> {
        if !t.is_finite() || t < 0.0 {
            return Err(WeightError::BadArgument(t));
        }
        let u = self.weight.sharpness();
        let mut breaks = vec![0.0, (1.0 / u).sqrt(), (1.0 - 1.0 / u).sqrt(), 1.0];
        if t > 0.0 {
            let pieces = (4.0 * t).ceil() as usize;
            breaks.extend((1..pieces).map(|k| k as f64 / pieces as f64));
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let inner_tol = self.quad_tol * 1e-3;
        let mut err = None;
        let (v, _) = integrate_pieces(
            |y| match self.weight.slice_integral(y, inner_tol) {
                Ok(h) => (TAU * t * y).cos() * h,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            &breaks,
            self.quad_tol / 4.0,
        )?;
        if let Some(e) = err {
            return Err(e.into());
        }
        Ok(2.0 * v)
    }
}

/// `Wi` sampled every `1/32` and read back by 16-point Lagrange
/// interpolation. `Wi` is band-limited to `[-1, 1]`, so its derivatives are
/// bounded by `(2 pi)^n Wi(0)` and the interpolation error stays below
/// `1e-15 Wi(0)`.
#[derive(Debug, Clone)]
pub struct TransformTable {
    /// Values at `k/32` for `k = -ORDER .. len - ORDER`, using evenness.
    values: Vec<f64>,
    t_max: f64,
}

const TABLE_DENSITY: f64 = 32.0;
const TABLE_ORDER: usize = 16;

/// Barycentric weights of equispaced nodes: `(-1)^k C(n-1, k)`.
fn equispaced_weights() -> [f64; TABLE_ORDER] {
    let mut w = [0.0; TABLE_ORDER];
    let mut c = 1.0;
    for (k, slot) in w.iter_mut().enumerate() {
        *slot = if k % 2 == 0 { c } else { -c };
        c = c * (TABLE_ORDER - 1 - k) as f64 / (k + 1) as f64;
    }
    w
}

impl TransformTable {
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// `Wi(t)` for `0 <= t <= t_max`.
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!((0.0..=self.t_max).contains(&t));
        let x = t * TABLE_DENSITY;
        let half = TABLE_ORDER / 2;
        let first = x.floor() as isize - half as isize + 1;
        // offset into `values`, which starts at -ORDER
        let base = (first + TABLE_ORDER as isize) as usize;
        let w = equispaced_weights();
        let (mut num, mut den) = (0.0, 0.0);
        for (k, wk) in w.iter().enumerate() {
            let d = x - (first + k as isize) as f64;
            if d == 0.0 {
                return self.values[base + k];
            }
            let c = wk / d;
            num += c * self.values[base + k];
            den += c;
        }
        num / den
    }
}

impl TransformEvaluator {
    /// Tabulates `Wi` on `[0, t_max]` for fast repeated evaluation.
    pub fn table(&self, t_max: f64) -> Result<TransformTable, WeightError> {
        if !t_max.is_finite() || t_max < 0.0 {
            return Err(WeightError::BadArgument(t_max));
        }
        let last = (t_max * TABLE_DENSITY).ceil() as usize + TABLE_ORDER;
        let sp = self.spectral_for(last as f64 / TABLE_DENSITY)?;
        let mut values = Vec::with_capacity(last + TABLE_ORDER + 1);
        for k in -(TABLE_ORDER as isize)..=last as isize {
            values.push(sp.eval(k.unsigned_abs() as f64 / TABLE_DENSITY, 1));
        }
        Ok(TransformTable { values, t_max })
    }
}

/// `Wi(0) = pi (1 - 1/U)` exactly: the profile `W(r^2)` integrates to `pi`
/// times the mean of `W`, and `s(x) + s(1 - x) = 1` makes that mean `1 - 1/U`.
pub fn transform_i_at_zero(u: f64) -> f64 {
    PI * (1.0 - 1.0 / u)
}
