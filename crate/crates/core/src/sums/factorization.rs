use num_complex::Complex64;

use super::SumError;
use crate::gauss_sums::{gauss_sum_explicit_q2, gauss_sum_q2_prime_power};
use crate::lattice::{enumerate, Filter};
use crate::numeric::ComplexSum;
use crate::rings::{factor, GaussInt, QuadInt};
use crate::symbols::symbol_fast;

/// Truncations of both sides of
/// `sum_n ((1+i)/n)_2 g_2(k, n) N(n)^(-1-s) = L(1/2+s, chi_k1) prod_{p | k} G_p(s) prod_{p not | k} (1 - N(p)^(-1-2s))`,
/// `n, p` primary, `chi_k1(c) = (k1/c)_2` for the square-free kernel `k1`
/// of `i(1+i)k`, and
/// `G_p(s) = (1 - chi_k1(p) N(p)^(-1/2-s)) sum_r g_2((1+i)k, p^r) N(p)^(-r(1+s))`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FactorizationCheck {
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub delta: f64,
}

impl FactorizationCheck {
    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs_re, self.lhs_im)
    }
    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs_re, self.rhs_im)
    }
}

/// `(k1, k2)` with `z = k1 k2^2`, `k1` square-free (unit included), `k2`
/// a product of primary primes and powers of the ramified prime.
pub fn squarefree_kernel(z: GaussInt) -> Result<(GaussInt, GaussInt), SumError> {
    let f = factor(z)?;
    let lambda = GaussInt::ramified();
    let mut k1 = f.unit * lambda.pow(f.ramified_exponent % 2);
    let mut k2 = lambda.pow(f.ramified_exponent / 2);
    for (p, e) in &f.factors {
        k1 = k1 * p.pow(e % 2);
        k2 = k2 * p.pow(e / 2);
    }
    debug_assert_eq!(k1 * k2 * k2, z);
    Ok((k1, k2))
}

/// `N^(-s)` for real `N > 0`.
fn norm_pow(norm: f64, s: Complex64) -> Complex64 {
    (-s * norm.ln()).exp()
}

pub fn factorization_check(k: GaussInt, s: Complex64, t: i64) -> Result<FactorizationCheck, SumError> {
    if k.is_zero() {
        return Err(SumError::Config("k must be nonzero".into()));
    }
    if s.re < 1.0 {
        return Err(SumError::Config(format!(
            "Re(s) = {} is outside the region of absolute convergence used here",
            s.re
        )));
    }
    let ramified = GaussInt::ramified();
    let one = Complex64::new(1.0, 0.0);
    let s1 = s + one;
    let s_half = s + 0.5;

    let mut lhs = ComplexSum::new();
    for n in enumerate::<GaussInt>(t, Filter::Primary) {
        let sign = if symbol_fast(2, ramified, n)?.exponent() == Some(0) { 1.0 } else { -1.0 };
        let g = gauss_sum_explicit_q2(k, n)?.value.re;
        if g != 0.0 {
            lhs.add(norm_pow(n.norm() as f64, s1) * (sign * g));
        }
    }

    let kk = ramified * k;
    let (k1, _) = squarefree_kernel(GaussInt::I * kk)?;
    let chi = |c: GaussInt| -> Result<f64, SumError> {
        Ok(match symbol_fast(2, k1, c)?.exponent() {
            None => 0.0,
            Some(0) => 1.0,
            Some(_) => -1.0,
        })
    };

    let mut l_series = ComplexSum::new();
    for c in enumerate::<GaussInt>(t, Filter::Primary) {
        let x = chi(c)?;
        if x != 0.0 {
            l_series.add(norm_pow(c.norm() as f64, s_half) * x);
        }
    }

    let divisors: Vec<(GaussInt, u32)> = factor(k)?.factors;
    let mut rhs = l_series.value();
    for (p, h) in &divisors {
        let q = p.norm() as f64;
        let mut local = ComplexSum::new();
        // g_2(kk, p^r) vanishes once r > h + 1
        for r in 0..=(h + 1) {
            let g = if r == 0 { 1.0 } else { gauss_sum_q2_prime_power(kk, *p, r)? };
            local.add(norm_pow(q, s1 * r as f64) * g);
        }
        rhs *= (one - norm_pow(q, s_half) * chi(*p)?) * local.value();
    }
    let s2 = 2.0 * s + one;
    for p in enumerate::<GaussInt>(t, Filter::PrimaryPrime) {
        if divisors.iter().any(|(d, _)| *d == p) {
            continue;
        }
        rhs *= one - norm_pow(p.norm() as f64, s2);
    }

    let lhs = lhs.value();
    Ok(FactorizationCheck {
        lhs_re: lhs.re,
        lhs_im: lhs.im,
        rhs_re: rhs.re,
        rhs_im: rhs.im,
        delta: (lhs - rhs).norm(),
    })
}
