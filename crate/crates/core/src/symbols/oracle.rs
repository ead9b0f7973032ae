use super::{PowerResidue, SymbolError, SymbolValue};
use crate::rings::{factor, is_prime_element};

/// `(a/p)_j` from the congruence `(a/p)_j = a^((N(p)-1)/j) mod p`.
///
/// `p` must be a prime coprime to the ramified prime; any associate is
/// accepted since the symbol only depends on the ideal.
pub fn symbol_bruteforce<R: PowerResidue>(
    order: u8,
    a: R,
    p: R,
) -> Result<SymbolValue, SymbolError> {
    R::check_order(order)?;
    if !is_prime_element(p) || !p.is_coprime_to_ramified() {
        return Err(SymbolError::NotPrime(p.to_string()));
    }
    let base = a.rem(&p)?;
    if base.is_zero() {
        return Ok(SymbolValue::zero(order));
    }
    let mut exp = (p.norm() - 1) / order as i64;
    let mut acc = R::one();
    let mut sq = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc * sq).rem(&p)?;
        }
        sq = (sq * sq).rem(&p)?;
        exp >>= 1;
    }
    let zeta = R::zeta(order);
    let mut root = R::one();
    for e in 0..order {
        if p.divides(&(acc - root)) {
            return Ok(SymbolValue::root(order, e as i64));
        }
        root = root * zeta;
    }
    unreachable!("a^((N(p)-1)/j) is a j-th root of unity modulo a prime")
}

/// Multiplicative extension of [`symbol_bruteforce`] over the prime
/// factorization of the primary modulus `n`.
pub fn symbol_by_factoring<R: PowerResidue>(
    order: u8,
    a: R,
    n: R,
) -> Result<SymbolValue, SymbolError> {
    R::check_order(order)?;
    if !n.is_primary() {
        return Err(SymbolError::NotPrimary(n.to_string()));
    }
    let f = factor(n)?;
    let mut acc = SymbolValue::one(order);
    for (p, e) in f.factors {
        acc = acc * symbol_bruteforce(order, a, p)?.pow(e);
    }
    Ok(acc)
}
