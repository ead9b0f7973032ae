//! Ring-generic algorithms: gcd, primary normalization, factorization, phi, mu.

use super::{rational, QuadInt, RingError};

macro_rules! impl_checked_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                QuadInt::checked_add(&self, &o).expect("ring addition overflow")
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                QuadInt::checked_sub(&self, &o).expect("ring subtraction overflow")
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                QuadInt::checked_mul(&self, &o).expect("ring multiplication overflow")
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                <$t>::new(
                    self.a.checked_neg().expect("ring negation overflow"),
                    self.b.checked_neg().expect("ring negation overflow"),
                )
            }
        }
    };
}
pub(crate) use impl_checked_ops;

/// Plain Euclidean algorithm, no normalization.
pub(crate) fn euclid<R: QuadInt>(mut x: R, mut y: R) -> R {
    while !y.is_zero() {
        let r = x.rem(&y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    x
}

/// Writes `z = ramified^e * rest` with `rest` coprime to the ramified prime.
pub fn split_ramified<R: QuadInt>(z: R) -> (u32, R) {
    assert!(!z.is_zero());
    let lambda = R::ramified();
    let mut e = 0;
    let mut rest = z;
    while !rest.is_coprime_to_ramified() {
        rest = rest.exact_div(&lambda).expect("ramified prime divides");
        e += 1;
    }
    (e, rest)
}

/// Returns `(unit, primary)` with `unit * primary = z`.
pub fn to_primary<R: QuadInt>(z: R) -> Result<(R, R), RingError> {
    if z.is_zero() || !z.is_coprime_to_ramified() {
        return Err(RingError::NotCoprimeToRamified(z.to_string()));
    }
    for u in R::units() {
        let p = z * *u;
        if p.is_primary() {
            return Ok((u.conj(), p));
        }
    }
    unreachable!("every admissible element has a primary associate")
}

/// Canonical associate: `ramified^e * primary`. Zero maps to zero.
pub fn normalize<R: QuadInt>(z: R) -> R {
    if z.is_zero() {
        return z;
    }
    let (e, rest) = split_ramified(z);
    let (_, p) = to_primary(rest).expect("rest is coprime to the ramified prime");
    R::ramified().pow(e) * p
}

/// Greatest common divisor in canonical form (primary when coprime to the
/// ramified prime). `gcd(x, 0) = normalize(x)`.
pub fn gcd<R: QuadInt>(x: R, y: R) -> Result<R, RingError> {
    if x.is_zero() && y.is_zero() {
        return Err(RingError::GcdOfZeros);
    }
    Ok(normalize(euclid(x, y)))
}

/// Whether `z` is a prime element of the ring.
pub fn is_prime_element<R: QuadInt>(z: R) -> bool {
    let Some(n) = z.checked_norm() else {
        return false;
    };
    if n <= 1 {
        return false;
    }
    let n = n as u64;
    if rational::is_prime(n) {
        return true;
    }
    let p = (n as f64).sqrt().round() as u64;
    p * p == n && rational::is_prime(p) && R::is_inert(p) && R::from_int(p as i64).divides(&z)
}

/// `unit * ramified^ramified_exponent * prod(prime^multiplicity)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryFactorization<R: QuadInt> {
    pub unit: R,
    pub ramified_exponent: u32,
    /// Primary primes sorted by `(norm, a, b)`.
    pub factors: Vec<(R, u32)>,
}

impl<R: QuadInt> PrimaryFactorization<R> {
    pub fn recombine(&self) -> R {
        self.factors
            .iter()
            .fold(self.unit * R::ramified().pow(self.ramified_exponent), |acc, (p, e)| {
                acc * p.pow(*e)
            })
    }

    /// All `(norm of prime, multiplicity)` pairs, the ramified prime included.
    fn prime_powers(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        let ram = (self.ramified_exponent > 0).then_some((R::RAMIFIED_NORM, self.ramified_exponent));
        ram.into_iter()
            .chain(self.factors.iter().map(|(p, e)| (p.norm(), *e)))
    }

    pub fn is_squarefree(&self) -> bool {
        self.prime_powers().all(|(_, e)| e <= 1)
    }
}

/// Factors `n != 0` into unit, ramified power and primary primes.
pub fn factor<R: QuadInt>(n: R) -> Result<PrimaryFactorization<R>, RingError> {
    if n.is_zero() {
        return Err(RingError::Zero);
    }
    n.checked_norm().ok_or(RingError::Overflow)?;
    let (ramified_exponent, mut rest) = split_ramified(n);
    let mut factors = Vec::new();
    for (p, k) in rational::factor(rest.norm() as u64) {
        let candidates: Vec<R> = if R::is_inert(p) {
            vec![to_primary(R::from_int(p as i64))?.1]
        } else {
            let pi = to_primary(R::split_prime_above(p))?.1;
            vec![pi, to_primary(pi.conj())?.1]
        };
        let mut remaining = k;
        for pi in candidates {
            let mut e = 0;
            while remaining > 0 {
                match rest.exact_div(&pi) {
                    Some(q) => {
                        rest = q;
                        e += 1;
                        remaining -= if R::is_inert(p) { 2 } else { 1 };
                    }
                    None => break,
                }
            }
            if e > 0 {
                factors.push((pi, e));
            }
        }
        debug_assert_eq!(remaining, 0);
    }
    debug_assert!(rest.is_unit());
    factors.sort_by_key(|(p, _)| (p.norm(), p.a(), p.b()));
    Ok(PrimaryFactorization {
        unit: rest,
        ramified_exponent,
        factors,
    })
}

/// Moebius function of the ideal `(n)`.
pub fn mobius<R: QuadInt>(n: R) -> Result<i64, RingError> {
    let f = factor(n)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.prime_powers().count() % 2 == 0 { 1 } else { -1 })
}

/// Order of the unit group of `R/(n)`.
pub fn euler_phi<R: QuadInt>(n: R) -> Result<i64, RingError> {
    let f = factor(n)?;
    Ok(f.prime_powers()
        .map(|(q, e)| q.pow(e - 1) * (q - 1))
        .product())
}
