//! Additive characters, residue systems and Gauss sums
//! `g_j(r, n) = sum_{x mod n} (x/n)_j e(r x / n)`.
//!
//! The additive character is `e(z) = exp(2 pi i Im z)` on `Q(i)` and
//! `e(u + v w) = exp(2 pi i v)` on `Q(w)`. For `z = w/n` both reduce to the
//! second coordinate of `w * conj(n)` over `N(n)`, an exact rational.

use num_complex::Complex64;

use crate::numeric::ComplexSum;
use crate::rings::{factor, rational::ext_gcd, GaussInt, QuadInt, RingError};
use crate::symbols::{symbol_fast, PowerResidue, SymbolError, SymbolValue};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaussSumError {
    #[error("modulus is zero")]
    ZeroModulus,
    #[error("modulus {0} is not primary")]
    NotPrimary(String),
    #[error("{0} is not coprime to the modulus")]
    NotCoprime(String),
    #[error("residue system mod {modulus} is inconsistent: {detail}")]
    Inconsistent { modulus: String, detail: String },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `exp(2 pi i num/den)` as an exact reduced fraction, `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnityExponent {
    pub numerator: i64,
    pub denominator: i64,
}

impl RootOfUnityExponent {
    pub fn new(numerator: i128, denominator: i128) -> Self {
        assert!(denominator > 0);
        let g = gcd_i128(numerator, denominator);
        let (mut num, den) = (numerator / g, denominator / g);
        if i64::try_from(num).is_err() {
            num = num.rem_euclid(den);
        }
        RootOfUnityExponent {
            numerator: num as i64,
            denominator: den as i64,
        }
    }

    /// Numerator reduced into `[0, den)`.
    pub fn reduced(&self) -> i64 {
        self.numerator.rem_euclid(self.denominator)
    }

    pub fn is_trivial(&self) -> bool {
        self.reduced() == 0
    }

    pub fn value(&self) -> Complex64 {
        let t = std::f64::consts::TAU * self.reduced() as f64 / self.denominator as f64;
        Complex64::new(t.cos(), t.sin())
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Exponent of `e(w/n)` in either ring.
pub fn additive_char<R: QuadInt>(w: R, n: R) -> Result<RootOfUnityExponent, GaussSumError> {
    let den = n.norm_wide();
    if den == 0 {
        return Err(GaussSumError::ZeroModulus);
    }
    Ok(RootOfUnityExponent::new(w.mul_wide(&n.conj()).1, den))
}

/// `e_i(w/n) = exp(2 pi i Im(w/n))`.
pub fn additive_char_i(w: GaussInt, n: GaussInt) -> Result<RootOfUnityExponent, GaussSumError> {
    additive_char(w, n)
}

/// `e_w(w/n)`, the `w`-coordinate of `w/n` as the phase.
pub fn additive_char_omega(
    w: crate::rings::EisInt,
    n: crate::rings::EisInt,
) -> Result<RootOfUnityExponent, GaussSumError> {
    additive_char(w, n)
}

/// A complete residue system modulo `n`, from the Hermite normal form of
/// the coordinate lattice `n Z[g] = <(e, 0), (c, g)>`, `e * g = N(n)`.
///
/// Representatives are `x + y*g` with `0 <= x < e`, `0 <= y < g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueSystem<R> {
    modulus: R,
    e: i64,
    c: i64,
    g: i64,
}

impl<R: QuadInt> ResidueSystem<R> {
    pub fn new(n: R) -> Result<Self, GaussSumError> {
        if n.is_zero() {
            return Err(GaussSumError::ZeroModulus);
        }
        let norm = n.checked_norm().ok_or(RingError::Overflow)?;
        let v2 = n * R::new(0, 1);
        let (x1, y1, x2, y2) = (n.a(), n.b(), v2.a(), v2.b());
        let (g, s, t) = ext_gcd(y1, y2);
        let (e, c) = if g == 0 {
            (norm, 0)
        } else {
            let e = ((y2 / g) as i128 * x1 as i128 - (y1 / g) as i128 * x2 as i128).abs();
            let c = (s as i128 * x1 as i128 + t as i128 * x2 as i128).rem_euclid(e.max(1));
            (e as i64, c as i64)
        };
        let g = g.max(1);
        if e.checked_mul(g) != Some(norm) {
            return Err(GaussSumError::Inconsistent {
                modulus: n.to_string(),
                detail: format!("index {e}*{g} differs from the norm {norm}"),
            });
        }
        Ok(ResidueSystem { modulus: n, e, c, g })
    }

    pub fn modulus(&self) -> R {
        self.modulus
    }

    pub fn len(&self) -> usize {
        (self.e * self.g) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of the class of `z` among [`ResidueSystem::representatives`].
    #[inline]
    pub fn index_of(&self, z: &R) -> usize {
        let (x, y) = (z.a(), z.b());
        let q = y.div_euclid(self.g);
        let y0 = y - q * self.g;
        let x0 = (x as i128 - q as i128 * self.c as i128).rem_euclid(self.e as i128) as i64;
        (y0 * self.e + x0) as usize
    }

    pub fn element(&self, index: usize) -> R {
        let i = index as i64;
        R::new(i % self.e, i / self.e)
    }

    pub fn representatives(&self) -> impl Iterator<Item = R> + '_ {
        (0..self.len()).map(move |i| self.element(i))
    }
}

/// A floating complex value with an absolute rounding-error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussSumValue {
    pub value: Complex64,
    pub error_bound: f64,
}

/// `exp(2 pi i k / n)` for `0 <= k < n`, from one cos/sin per entry.
pub(crate) fn roots_table(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            Complex64::new(t.cos(), t.sin())
        })
        .collect()
}

/// The multiplicative character `x -> (x/n)_j` tabulated on a residue
/// system, with all Gauss sums `g_j(k, n)` on demand.
#[derive(Debug, Clone)]
pub struct CharacterTable<R> {
    order: u8,
    residues: ResidueSystem<R>,
    chi: Vec<Option<u8>>,
}

impl<R: PowerResidue> CharacterTable<R> {
    pub fn new(order: u8, n: R) -> Result<Self, GaussSumError> {
        R::check_order(order)?;
        if !n.is_primary() {
            return Err(GaussSumError::NotPrimary(n.to_string()));
        }
        let residues = ResidueSystem::new(n)?;
        let chi = residues
            .representatives()
            .map(|x| symbol_fast(order, x, n).map(|s| s.exponent()))
            .collect::<Result<_, _>>()?;
        Ok(CharacterTable {
            order,
            residues,
            chi,
        })
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn residues(&self) -> &ResidueSystem<R> {
        &self.residues
    }

    /// Exponent of `(x/n)_j` per representative index, `None` for zero.
    pub fn exponents(&self) -> &[Option<u8>] {
        &self.chi
    }

    #[inline]
    pub fn symbol(&self, x: &R) -> SymbolValue {
        match self.chi[self.residues.index_of(x)] {
            Some(e) => SymbolValue::root(self.order, e as i64),
            None => SymbolValue::zero(self.order),
        }
    }

    /// `g_j(k, n)` by direct summation over the residue system.
    pub fn gauss_sum(&self, k: R) -> GaussSumValue {
        let n = self.residues.modulus();
        let norm = self.residues.len();
        let roots = roots_table(norm);
        let unity: Vec<Complex64> = (0..self.order)
            .map(|e| crate::symbols::root_of_unity(self.order, e))
            .collect();
        let kc = k * n.conj();
        let kc = R::new(kc.a().rem_euclid(norm as i64), kc.b().rem_euclid(norm as i64));
        let mut acc = ComplexSum::new();
        for (idx, e) in self.chi.iter().enumerate() {
            let Some(e) = e else { continue };
            let x = self.residues.element(idx);
            let phase = x.mul_wide(&kc).1.rem_euclid(norm as i128) as usize;
            acc.add(unity[*e as usize] * roots[phase]);
        }
        GaussSumValue {
            value: acc.value(),
            error_bound: acc.error_bound() + 4.0 * f64::EPSILON * norm as f64,
        }
    }

    /// `g_j(k, n)` for every class `k mod n`, indexed like the residues.
    pub fn all_gauss_sums(&self) -> Vec<Complex64> {
        self.residues
            .representatives()
            .map(|k| self.gauss_sum(k).value)
            .collect()
    }
}

/// Whether `(./n)_j` is the principal character, i.e. every prime of `n`
/// occurs to a multiple of `j`.
pub fn is_principal<R: QuadInt>(order: u8, n: R) -> Result<bool, GaussSumError> {
    let f = factor(n)?;
    Ok(f.factors.iter().all(|(_, e)| e % order as u32 == 0))
}

/// `g_j(r, n)` by brute force. The `r = 0` case is checked against its
/// closed value `phi(n)` (principal character) or `0`.
pub fn gauss_sum<R: PowerResidue>(order: u8, r: R, n: R) -> Result<GaussSumValue, GaussSumError> {
    let table = CharacterTable::new(order, n)?;
    let g = table.gauss_sum(r);
    if r.is_zero() {
        let expected = if is_principal(order, n)? {
            crate::rings::euler_phi(n)? as f64
        } else {
            0.0
        };
        if (g.value - Complex64::new(expected, 0.0)).norm() > 1e-6 * (1.0 + expected) {
            return Err(GaussSumError::Inconsistent {
                modulus: n.to_string(),
                detail: format!("g(0, n) = {} but expected {expected}", g.value),
            });
        }
    }
    Ok(g)
}

/// `v_pi(k)`, capped at `cap`; `None` stands for `k = 0` (infinite).
fn valuation(k: GaussInt, pi: GaussInt, cap: u32) -> Option<(u32, GaussInt)> {
    if k.is_zero() {
        return None;
    }
    let (mut h, mut rest) = (0, k);
    while h < cap {
        match rest.exact_div(&pi) {
            Some(q) => {
                rest = q;
                h += 1;
            }
            None => break,
        }
    }
    Some((h, rest))
}

/// `g_2(k, pi^l)` from the closed form for a primary prime `pi`, `h = v_pi(k)`:
/// `phi(pi^l)` if `l <= h` is even, `0` if `l <= h` is odd,
/// `-N^(l-1)` if `l = h+1` is even, `(i k pi^-h / pi)_2 N^(l-1/2)` if `l = h+1`
/// is odd, and `0` for `l >= h+2`.
pub fn gauss_sum_q2_prime_power(k: GaussInt, pi: GaussInt, l: u32) -> Result<f64, GaussSumError> {
    let q = pi.norm() as f64;
    match valuation(k, pi, l) {
        None => Ok(if l % 2 == 0 { q.powi(l as i32 - 1) * (q - 1.0) } else { 0.0 }),
        Some((h, _)) if l <= h => Ok(if l % 2 == 0 { q.powi(l as i32 - 1) * (q - 1.0) } else { 0.0 }),
        Some((h, rest)) if l == h + 1 => {
            if l % 2 == 0 {
                Ok(-q.powi(l as i32 - 1))
            } else {
                let s = symbol_fast(2, GaussInt::I * rest, pi)?;
                let sign = if s.exponent() == Some(0) { 1.0 } else { -1.0 };
                Ok(sign * q.powi(l as i32 - 1) * q.sqrt())
            }
        }
        Some(_) => Ok(0.0),
    }
}

/// `g_2(k, n)` from the prime-power table and multiplicativity over the
/// primary factorization of `n`.
pub fn gauss_sum_explicit_q2(k: GaussInt, n: GaussInt) -> Result<GaussSumValue, GaussSumError> {
    if !n.is_primary() {
        return Err(GaussSumError::NotPrimary(n.to_string()));
    }
    let f = factor(n)?;
    let mut v = 1.0;
    for (pi, l) in &f.factors {
        v *= gauss_sum_q2_prime_power(k, *pi, *l)?;
        if v == 0.0 {
            break;
        }
    }
    Ok(GaussSumValue {
        value: Complex64::new(v, 0.0),
        error_bound: 4.0 * f64::EPSILON * (f.factors.len() as f64 + 1.0) * v.abs(),
    })
}

/// `conj((s/n)_j) * g`, the value of `g_j(r s, n)` given `g = g_j(r, n)`.
pub fn twist<R: PowerResidue>(
    order: u8,
    s: R,
    g: Complex64,
    n: R,
) -> Result<Complex64, GaussSumError> {
    let chi = symbol_fast(order, s, n)?;
    if chi.is_zero() {
        return Err(GaussSumError::NotCoprime(s.to_string()));
    }
    Ok(chi.conj().to_complex() * g)
}
