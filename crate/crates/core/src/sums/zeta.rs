//! `zeta_K(2)` for `K = Q(i), Q(w)`, by ideal enumeration and by the Euler
//! product over the primes of the ring.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::lattice::{enumerate, Filter};
use crate::numeric::NeumaierSum;
use crate::rings::{rational::is_prime, EisInt, GaussInt, QuadInt, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaMethod {
    IdealSum,
    EulerProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ZetaConstant {
    pub field: Ring,
    pub value: f64,
    pub method: ZetaMethod,
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("zeta_K(2) methods disagree for {field:?}: {a} vs {b} (bounds {bound_a:e}, {bound_b:e})")]
pub struct ZetaDisagreement {
    pub field: Ring,
    pub a: f64,
    pub b: f64,
    pub bound_a: f64,
    pub bound_b: f64,
}

pub const DEFAULT_IDEAL_BOUND: i64 = 1_000_000;
pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

/// Area of `{N(z) <= 1}` per unit covolume, and the circumradius of a
/// lattice cell; `|#{N(z) <= u} - A u| <= A (2 rho sqrt(u) + rho^2)`.
fn lattice_geometry(field: Ring) -> (f64, f64) {
    match field {
        Ring::Gauss => (PI, 0.5f64.sqrt()),
        Ring::Eisenstein => (2.0 * PI / 3f64.sqrt(), 1.0 / 3f64.sqrt()),
    }
}

/// `sum_{a != 0} N(a)^-2` over ideals of norm at most `t`, one generator
/// per ideal, plus the tail `2A/t - C(t)/t^2` from partial summation.
pub fn zeta2_ideal_sum(field: Ring, t: i64) -> ZetaConstant {
    fn go<R: QuadInt>(t: i64) -> (NeumaierSum, u64) {
        let mut s = NeumaierSum::new();
        let mut count = 0u64;
        for z in enumerate::<R>(t, Filter::All) {
            let n = z.norm();
            if n == 0 {
                continue;
            }
            count += 1;
            let f = n as f64;
            s.add(1.0 / (f * f));
        }
        (s, count)
    }
    let ((s, count), units) = match field {
        Ring::Gauss => (go::<GaussInt>(t), GaussInt::units().len()),
        Ring::Eisenstein => (go::<EisInt>(t), EisInt::units().len()),
    };
    let (area, rho) = lattice_geometry(field);
    let tf = t as f64;
    let tail = 2.0 * area / tf - count as f64 / (tf * tf);
    let tail_err = 2.0 * area * (4.0 * rho / 3.0 * tf.powf(-1.5) + rho * rho / (2.0 * tf * tf));
    let units = units as f64;
    ZetaConstant {
        field,
        value: (s.value() + tail) / units,
        method: ZetaMethod::IdealSum,
        error_bound: (tail_err + s.error_bound()) / units + 1e-15,
    }
}

fn primes_up_to(p: u64) -> Vec<u64> {
    let n = p as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    if n >= 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Norms of the prime ideals above `p`, read off the factorization of `p`.
#[cfg(test)]
fn prime_ideal_norms<R: QuadInt>(p: u64) -> Vec<i64> {
    let f = crate::rings::factor(R::from_int(p as i64)).expect("nonzero");
    let mut norms: Vec<i64> = f.factors.iter().map(|(q, _)| q.norm()).collect();
    if f.ramified_exponent > 0 {
        norms.push(R::RAMIFIED_NORM);
    }
    norms
}

/// Norms of the prime ideals above `p` by the splitting law: ramified,
/// inert (one ideal of norm `p^2`) or split (two of norm `p`).
fn splitting_norms<R: QuadInt>(p: u64) -> Vec<i64> {
    let p = p as i64;
    if p == R::RAMIFIED_NORM {
        vec![p]
    } else if R::is_inert(p as u64) {
        vec![p * p]
    } else {
        vec![p, p]
    }
}

/// `prod (1 - N(p)^-2)^-1` over prime ideals above rational primes `<= p_max`.
///
/// The omitted factors multiply the value by at most `exp(2.02/P)`; the
/// midpoint of that range is reported.
pub fn zeta2_euler_product(field: Ring, p_max: u64) -> ZetaConstant {
    let mut log = NeumaierSum::new();
    for p in primes_up_to(p_max) {
        debug_assert!(is_prime(p));
        let norms = match field {
            Ring::Gauss => splitting_norms::<GaussInt>(p),
            Ring::Eisenstein => splitting_norms::<EisInt>(p),
        };
        for q in norms {
            let q = q as f64;
            log.add(-(-1.0 / (q * q)).ln_1p());
        }
    }
    let slack = 2.02 / p_max as f64;
    let value = log.value().exp();
    ZetaConstant {
        field,
        value: value * (1.0 + slack / 2.0),
        method: ZetaMethod::EulerProduct,
        error_bound: value * slack / 2.0 + 1e-14,
    }
}

/// `zeta_K(2)` by ideal enumeration, cross-checked against the Euler
/// product at the default bounds.
pub fn zeta2(field: Ring) -> Result<ZetaConstant, ZetaDisagreement> {
    let a = zeta2_ideal_sum(field, DEFAULT_IDEAL_BOUND);
    let b = zeta2_euler_product(field, DEFAULT_PRIME_BOUND);
    if (a.value - b.value).abs() > a.error_bound + b.error_bound {
        return Err(ZetaDisagreement {
            field,
            a: a.value,
            b: b.value,
            bound_a: a.error_bound,
            bound_b: b.error_bound,
        });
    }
    Ok(a)
}

/// Memoized [`zeta2`] value; panics if the two methods disagree.
pub fn zeta2_value(field: Ring) -> f64 {
    static GAUSS: OnceLock<f64> = OnceLock::new();
    static EIS: OnceLock<f64> = OnceLock::new();
    let cell = match field {
        Ring::Gauss => &GAUSS,
        Ring::Eisenstein => &EIS,
    };
    *cell.get_or_init(|| zeta2(field).expect("zeta_K(2) methods agree").value)
}
