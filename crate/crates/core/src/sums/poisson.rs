use num_complex::Complex64;

use super::{SumError, Truncation};
use crate::gauss_sums::CharacterTable;
use crate::lattice::{enumerate, Filter};
use crate::numeric::ComplexSum;
use crate::rings::{QuadInt, Ring};
use crate::symbols::{symbol_fast, PowerResidue};
use crate::weights::{make_weight, TransformEvaluator};

/// Both sides of the twisted Poisson identity for one modulus.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PoissonCheck {
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub delta: f64,
    /// Dual frequencies summed.
    pub k_count: u64,
    pub t_cut: f64,
    pub tail_bound: f64,
}

impl PoissonCheck {
    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs_re, self.lhs_im)
    }
    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs_re, self.rhs_im)
    }
}

/// Ring-specific shape of the dual side. With `D = 2` on `Z[i]` and
/// `D = 3` on `Z[w]`:
/// `sum_m (m/n) W(N(m)/X) = X/(D N(n)) (lambda/n) sum_k c(N(k)) g(k, n) Wt(sqrt(N(k) X/(D N(n))))`
/// where `lambda` is the ramified prime, `c(N) = (-1)^N` on `Z[i]` and
/// `c(N) = w^N + conj(w)^N` on `Z[w]`.
struct DualShape {
    d: f64,
    /// `(area of {N <= 1}, cell circumradius)` of the `k` lattice.
    area: f64,
    rho: f64,
    max_coeff: f64,
}

impl DualShape {
    fn of(ring: Ring) -> Self {
        match ring {
            Ring::Gauss => DualShape {
                d: 2.0,
                area: std::f64::consts::PI,
                rho: 0.5f64.sqrt(),
                max_coeff: 1.0,
            },
            Ring::Eisenstein => DualShape {
                d: 3.0,
                area: 2.0 * std::f64::consts::PI / 3f64.sqrt(),
                rho: 1.0 / 3f64.sqrt(),
                max_coeff: 2.0,
            },
        }
    }

    fn coeff(ring: Ring, norm: i64) -> f64 {
        match ring {
            Ring::Gauss => {
                if norm % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Ring::Eisenstein => {
                if norm % 3 == 0 {
                    2.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Windows whose fitted maximum falls below this are rounding noise.
const RESOLVED: f64 = 1e-13;

/// Calls `f` on one associate of each nonzero `k` with `N(k) <= k_cut`:
/// `a > 0, b >= 0` on `Z[i]`, `a > b >= 0` on `Z[w]`.
fn for_each_in_sector<R: QuadInt>(k_cut: i64, mut f: impl FnMut(R)) {
    let isqrt = |v: i64| -> i64 {
        let mut r = (v as f64).sqrt() as i64;
        while r * r > v {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= v {
            r += 1;
        }
        r
    };
    match R::RING {
        Ring::Gauss => {
            for a in 1..=isqrt(k_cut) {
                for b in 0..=isqrt(k_cut - a * a) {
                    f(R::new(a, b));
                }
            }
        }
        Ring::Eisenstein => {
            // a^2 - ab + b^2 <= K  <=>  (2a - b)^2 <= 4K - 3b^2
            let mut b = 0;
            while b * b + b + 1 <= k_cut {
                let top = (b + isqrt(4 * k_cut - 3 * b * b)) / 2;
                for a in b + 1..=top {
                    f(R::new(a, b));
                }
                b += 1;
            }
        }
    }
}

fn transform(ring: Ring, ev: &TransformEvaluator, t: f64) -> Result<f64, SumError> {
    Ok(match ring {
        Ring::Gauss => ev.transform_i_uncached(t)?,
        Ring::Eisenstein => {
            let s3 = 3f64.sqrt();
            2.0 / s3 * ev.transform_i_uncached(2.0 * t / s3)?
        }
    })
}

/// Computes both sides of the Poisson identity for `(./n)_j`, the dual
/// sum cut at `N(k) <= T^2 D N(n)/X` with `T` grown until the tail
/// estimate falls below `trunc.tail_tol * max(1, |lhs|)`.
pub fn poisson_check<R: PowerResidue>(
    order: u8,
    n: R,
    x: f64,
    u: f64,
    quad_tol: f64,
    trunc: &Truncation,
) -> Result<PoissonCheck, SumError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(SumError::Config(format!("X must be positive, got {x}")));
    }
    if trunc.decay_exponent < 3 {
        return Err(SumError::Config("decay exponent must be at least 3".into()));
    }
    let ev = TransformEvaluator::new(make_weight(u)?, quad_tol)?;
    poisson_check_with(&ev, order, n, x, trunc)
}

/// [`poisson_check`] reusing the transform tables of `ev` across moduli.
pub fn poisson_check_with<R: PowerResidue>(
    ev: &TransformEvaluator,
    order: u8,
    n: R,
    x: f64,
    trunc: &Truncation,
) -> Result<PoissonCheck, SumError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(SumError::Config(format!("X must be positive, got {x}")));
    }
    if trunc.decay_exponent < 3 {
        return Err(SumError::Config("decay exponent must be at least 3".into()));
    }
    let ring = R::RING;
    let shape = DualShape::of(ring);
    let w = *ev.weight();
    let u = w.sharpness();
    let table = CharacterTable::new(order, n)?;
    let norm_n = n.norm() as f64;

    let mut lhs = ComplexSum::new();
    for m in enumerate::<R>(x.ceil() as i64, Filter::CoprimeToRamified) {
        let wm = w.eval(m.norm() as f64 / x);
        if wm > 0.0 {
            lhs.add(table.symbol(&m).to_complex() * wm);
        }
    }
    let lhs = lhs.value();

    let gauss = table.all_gauss_sums();
    let sys = *table.residues();
    // g(k, n) summed over the associates of k; the k-sum then runs over one
    // sector of the unit group
    let folded: Vec<Complex64> = sys
        .representatives()
        .map(|r| R::units().iter().map(|&v| gauss[sys.index_of(&(v * r))]).sum())
        .collect();
    let units = R::units().len() as f64;
    let gmax = folded.iter().map(|g| g.norm()).fold(gauss[0].norm() * units, f64::max) / units;
    let alpha = x / (shape.d * norm_n);
    let prefactor = alpha * symbol_fast(order, R::ramified(), n)?.to_complex();
    let p = trunc.decay_exponent as f64;
    let target = trunc.tail_tol * lhs.norm().max(1.0);

    // Grow T until the t^-p tail is below target, with the constant
    // C = max t^p |Wt(t)| fitted on [T/2, T]. Once the transform sinks
    // into rounding noise the last resolved C is kept.
    let mut t_cut = 4.0 * u;
    let mut c_fit = 0.0;
    let mut resolved = true;
    let mut best = (f64::INFINITY, t_cut);
    let tail_bound = loop {
        if t_cut > trunc.max_t {
            return Err(SumError::Truncation {
                tol: target,
                bound: best.0,
                t: best.1,
            });
        }
        if resolved {
            ev.prepare(t_cut * 1.2)?;
            let samples = 256;
            let mut fit: f64 = 0.0;
            for i in 0..=samples {
                let t = t_cut * (0.5 + 0.5 * i as f64 / samples as f64);
                fit = fit.max(transform(ring, ev, t)?.abs() * (t / t_cut).powf(p));
            }
            resolved = fit >= RESOLVED;
            if resolved {
                c_fit = fit * t_cut.powf(p);
            }
        }
        let fit = c_fit / t_cut.powf(p);
        let k_cut = t_cut * t_cut / alpha;
        let lattice = shape.area * (1.0 + shape.rho / k_cut.sqrt()).powi(2);
        let bound = prefactor.norm() * shape.max_coeff * gmax * fit * t_cut * t_cut * lattice
            * (p / 2.0)
            / ((p / 2.0 - 1.0) * alpha);
        if bound < target {
            break bound;
        }
        if bound < best.0 {
            best = (bound, t_cut);
        }
        t_cut *= 1.2;
    };

    let k_cut = (t_cut * t_cut / alpha).floor() as i64;
    let (scale, amp) = match ring {
        Ring::Gauss => (1.0, 1.0),
        Ring::Eisenstein => (2.0 / 3f64.sqrt(), 2.0 / 3f64.sqrt()),
    };
    let tab = ev.table(scale * (k_cut as f64 * alpha).sqrt())?;
    let dual = |norm: i64| amp * DualShape::coeff(ring, norm) * tab.eval(scale * (norm as f64 * alpha).sqrt());
    let mut rhs = ComplexSum::new();
    rhs.add(gauss[0] * dual(0));
    let mut k_count = 1u64;
    for_each_in_sector::<R>(k_cut, |k| {
        let g = folded[sys.index_of(&k)];
        if g != Complex64::new(0.0, 0.0) {
            rhs.add(g * dual(k.norm()));
        }
        k_count += R::units().len() as u64;
    });
    let rhs = prefactor * rhs.value();
    Ok(PoissonCheck {
        lhs_re: lhs.re,
        lhs_im: lhs.im,
        rhs_re: rhs.re,
        rhs_im: rhs.im,
        delta: (lhs - rhs).norm(),
        k_count,
        t_cut,
        tail_bound,
    })
}
