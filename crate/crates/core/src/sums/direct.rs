use num_complex::Complex64;

use super::{SumConfig, SumError};
use crate::gauss_sums::CharacterTable;
use crate::lattice::{enumerate, Filter};
use crate::numeric::{ComplexSum, NeumaierSum};
use crate::rings::{EisInt, GaussInt, QuadInt, Ring};
use crate::symbols::{root_of_unity, symbol_by_factoring, PowerResidue};
use crate::weights::SmoothWeight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectSum {
    pub value: Complex64,
    pub error_budget: f64,
    /// Moduli `n` with `Phi(N(n)/Y) > 0`.
    pub n_count: u64,
    /// Numerators `m` with `W(N(m)/X) > 0`.
    pub m_count: u64,
}

/// Elements passing `filter` with `w(N(z)/scale) > 0`, paired with that weight.
fn weighted<R: QuadInt>(scale: f64, filter: Filter, w: &SmoothWeight) -> Vec<(R, f64)> {
    let top = scale.ceil() as i64;
    enumerate::<R>(top, filter)
        .filter_map(|z| {
            let v = w.eval(z.norm() as f64 / scale);
            (v > 0.0).then_some((z, v))
        })
        .collect()
}

const ZERO_CLASS: u8 = u8::MAX;

/// `Phi(N(n)/Y) sum_m (m/n)_j W(N(m)/X)` for one modulus, with weights
/// bucketed by the symbol exponent.
fn inner<R: PowerResidue>(j: u8, n: R, phi: f64, ms: &[(R, f64)]) -> Result<(Complex64, f64), SumError> {
    let mut buckets = vec![NeumaierSum::new(); j as usize];
    if n == R::one() {
        for (_, w) in ms {
            buckets[0].add(*w);
        }
    } else {
        let table = CharacterTable::new(j, n)?;
        let sys = *table.residues();
        let chi: Vec<u8> = table
            .exponents()
            .iter()
            .map(|e| e.unwrap_or(ZERO_CLASS))
            .collect();
        for (m, w) in ms {
            let e = chi[sys.index_of(m)];
            if e != ZERO_CLASS {
                buckets[e as usize].add(*w);
            }
        }
    }
    let mut acc = ComplexSum::new();
    let mut err = 0.0;
    for (e, b) in buckets.iter().enumerate() {
        acc.add(root_of_unity(j, e as u8) * b.value());
        err += b.error_bound() + f64::EPSILON * b.value().abs();
    }
    Ok((acc.value() * phi, (err + acc.error_bound()) * phi))
}

fn direct_generic<R: PowerResidue>(cfg: &SumConfig, w: &SmoothWeight) -> Result<DirectSum, SumError> {
    let ns: Vec<(R, f64)> = weighted(cfg.y, Filter::Primary, w);
    let ms: Vec<(R, f64)> = weighted(cfg.x, Filter::CoprimeToRamified, w);
    let partials = crate::par::map_indexed(ns.len(), cfg.threads, |i| {
        let (n, phi) = ns[i];
        inner(cfg.j, n, phi, &ms)
    });
    let mut total = ComplexSum::new();
    let mut budget = 0.0;
    for p in partials {
        let (v, e) = p?;
        total.add(v);
        budget += e;
    }
    Ok(DirectSum {
        value: total.value(),
        error_budget: budget + total.error_bound(),
        n_count: ns.len() as u64,
        m_count: ms.len() as u64,
    })
}

/// `S_j(X, Y)` summed over `n` in lattice order; the per-`n` partials are
/// reduced in that order whatever the thread count.
pub fn direct_sum(cfg: &SumConfig) -> Result<DirectSum, SumError> {
    cfg.validate()?;
    let w = crate::weights::make_weight(cfg.u)?;
    match cfg.ring() {
        Ring::Gauss => direct_generic::<GaussInt>(cfg, &w),
        Ring::Eisenstein => direct_generic::<EisInt>(cfg, &w),
    }
}

/// The same double sum by a plain loop, each symbol from the prime
/// factorization of `n`. Quadratic in the counts; small scales only.
pub fn direct_sum_naive(cfg: &SumConfig) -> Result<Complex64, SumError> {
    fn go<R: PowerResidue>(cfg: &SumConfig, w: &SmoothWeight) -> Result<Complex64, SumError> {
        let mut acc = ComplexSum::new();
        for (n, phi) in weighted::<R>(cfg.y, Filter::Primary, w) {
            for (m, wm) in weighted::<R>(cfg.x, Filter::CoprimeToRamified, w) {
                acc.add(symbol_by_factoring(cfg.j, m, n)?.to_complex() * (phi * wm));
            }
        }
        Ok(acc.value())
    }
    cfg.validate()?;
    let w = crate::weights::make_weight(cfg.u)?;
    match cfg.ring() {
        Ring::Gauss => go::<GaussInt>(cfg, &w),
        Ring::Eisenstein => go::<EisInt>(cfg, &w),
    }
}
