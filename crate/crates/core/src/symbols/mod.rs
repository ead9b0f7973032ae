//! Quadratic and quartic residue symbols on `Z[i]`, the cubic residue
//! symbol on `Z[w]`.
//!
//! Each symbol has two routes: [`symbol_bruteforce`] evaluates the defining
//! power congruence at a prime and [`symbol_by_factoring`] extends it
//! multiplicatively; [`symbol_fast`] never factors and instead reduces the
//! pair with the supplementary laws and reciprocity, Euclid style.

mod oracle;
mod reciprocity;

use num_complex::Complex64;

use crate::rings::{EisInt, GaussInt, RingError};

pub use oracle::{symbol_bruteforce, symbol_by_factoring};
pub use reciprocity::{symbol_fast, unit_and_ramified_supplement, ReciprocityLaw};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("order {order} symbols are not defined on {ring}")]
    UnsupportedOrder { order: u8, ring: &'static str },
    #[error("modulus {0} is not primary")]
    NotPrimary(String),
    #[error("modulus {0} is not a prime coprime to the ramified prime")]
    NotPrime(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A `j`-th root of unity `zeta_j^e` stored as its exponent, or zero.
///
/// `zeta_2 = -1`, `zeta_3 = w`, `zeta_4 = i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymbolValue {
    order: u8,
    exponent: Option<u8>,
}

impl SymbolValue {
    pub fn root(order: u8, exponent: i64) -> Self {
        SymbolValue {
            order,
            exponent: Some(exponent.rem_euclid(order as i64) as u8),
        }
    }

    pub fn one(order: u8) -> Self {
        Self::root(order, 0)
    }

    pub fn zero(order: u8) -> Self {
        SymbolValue {
            order,
            exponent: None,
        }
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    /// `None` for the zero value.
    pub fn exponent(&self) -> Option<u8> {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }

    pub fn conj(&self) -> Self {
        match self.exponent {
            Some(e) => Self::root(self.order, -(e as i64)),
            None => *self,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        match self.exponent {
            Some(e) => Self::root(self.order, e as i64 * k as i64),
            None if k == 0 => Self::one(self.order),
            None => *self,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self.exponent {
            None => Complex64::new(0.0, 0.0),
            Some(e) => root_of_unity(self.order, e),
        }
    }
}

impl std::ops::Mul for SymbolValue {
    type Output = SymbolValue;

    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        assert_eq!(self.order, rhs.order, "multiplying symbols of different order");
        match (self.exponent, rhs.exponent) {
            (Some(a), Some(b)) => SymbolValue::root(self.order, a as i64 + b as i64),
            _ => SymbolValue::zero(self.order),
        }
    }
}

/// `exp(2 pi i e / j)`, exact for the orders used here.
pub fn root_of_unity(order: u8, e: u8) -> Complex64 {
    let half_sqrt3 = 3f64.sqrt() / 2.0;
    match (order, e % order) {
        (_, 0) => Complex64::new(1.0, 0.0),
        (2, 1) => Complex64::new(-1.0, 0.0),
        (4, 1) => Complex64::new(0.0, 1.0),
        (4, 2) => Complex64::new(-1.0, 0.0),
        (4, 3) => Complex64::new(0.0, -1.0),
        (3, 1) => Complex64::new(-0.5, half_sqrt3),
        (3, 2) => Complex64::new(-0.5, -half_sqrt3),
        (j, e) => Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / j as f64),
    }
}

/// Rings carrying power-residue symbols, with the orders they support.
pub trait PowerResidue: ReciprocityLaw {
    const ORDERS: &'static [u8];

    /// The ring element representing `zeta_j`.
    fn zeta(order: u8) -> Self;

    fn check_order(order: u8) -> Result<(), SymbolError> {
        if Self::ORDERS.contains(&order) {
            Ok(())
        } else {
            Err(SymbolError::UnsupportedOrder {
                order,
                ring: Self::RING.name(),
            })
        }
    }
}

impl PowerResidue for GaussInt {
    const ORDERS: &'static [u8] = &[2, 4];

    fn zeta(order: u8) -> Self {
        match order {
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::I,
        }
    }
}

impl PowerResidue for EisInt {
    const ORDERS: &'static [u8] = &[3];

    fn zeta(_order: u8) -> Self {
        EisInt::OMEGA
    }
}

/// The residue symbol `(a/n)_j` for primary `n` (or `n = 1`).
///
/// Computed by [`symbol_fast`]; agrees with [`symbol_by_factoring`].
pub fn symbol<R: PowerResidue>(order: u8, a: R, n: R) -> Result<SymbolValue, SymbolError> {
    symbol_fast(order, a, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_arithmetic() {
        let i = SymbolValue::root(4, 1);
        assert_eq!(i * i, SymbolValue::root(4, 2));
        assert_eq!(i.pow(4), SymbolValue::one(4));
        assert_eq!(i.conj(), SymbolValue::root(4, 3));
        assert_eq!(i * SymbolValue::zero(4), SymbolValue::zero(4));
        assert!((i.to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let w = SymbolValue::root(3, 1);
        assert!((w.to_complex().powu(3) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(SymbolValue::root(2, -3), SymbolValue::root(2, 1));
    }
}
