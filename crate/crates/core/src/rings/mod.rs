//! Exact arithmetic in the Euclidean rings `Z[i]` and `Z[w]`.
//!
//! Both rings are represented by pairs of `i64` coordinates. Every
//! arithmetic operator checks for overflow and panics rather than wrap;
//! the `checked_*` methods expose the same operations as `Option`s.

mod eisenstein;
mod gauss;
mod ops;
pub mod rational;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

pub use eisenstein::EisInt;
pub use gauss::GaussInt;
pub use ops::{
    euler_phi, factor, gcd, is_prime_element, mobius, normalize, split_ramified, to_primary,
    PrimaryFactorization,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("{0} is not coprime to the ramified prime")]
    NotCoprimeToRamified(String),
    #[error("{0} is not primary")]
    NotPrimary(String),
    #[error("zero has no factorization")]
    Zero,
    #[error("integer overflow in ring arithmetic")]
    Overflow,
    #[error("cannot parse ring element {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },
}

/// Which of the two rings an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Gauss,
    Eisenstein,
}

impl Ring {
    pub fn name(self) -> &'static str {
        match self {
            Ring::Gauss => "gauss",
            Ring::Eisenstein => "eisenstein",
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gauss" | "i" | "gaussian" => Ok(Ring::Gauss),
            "eisenstein" | "omega" | "w" => Ok(Ring::Eisenstein),
            _ => Err(format!("unknown ring {s:?} (expected gauss or eisenstein)")),
        }
    }
}

/// Common interface of `Z[i]` and `Z[w]`.
///
/// An element is `a + b*g` where `g` is `i` or `w` respectively.
pub trait QuadInt:
    Copy
    + Eq
    + Hash
    + Ord
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const RING: Ring;
    /// Rational prime below the ramified prime (2 or 3).
    const RAMIFIED_NORM: i64;
    /// Suffix of the second coordinate in the canonical text form.
    const SUFFIX: char;

    fn new(a: i64, b: i64) -> Self;
    fn a(&self) -> i64;
    fn b(&self) -> i64;

    fn zero() -> Self {
        Self::new(0, 0)
    }
    fn one() -> Self {
        Self::new(1, 0)
    }
    fn from_int(n: i64) -> Self {
        Self::new(n, 0)
    }
    fn is_zero(&self) -> bool {
        self.a() == 0 && self.b() == 0
    }

    /// All units of the ring.
    fn units() -> &'static [Self];
    /// `1+i` or `1-w`.
    fn ramified() -> Self;
    fn conj(&self) -> Self;
    /// Norm evaluated in 128 bits.
    fn norm_wide(&self) -> i128;
    /// Coordinates of `self * other` in 128 bits.
    fn mul_wide(&self, other: &Self) -> (i128, i128);
    /// Primary congruence test (`= 1 mod (1+i)^3`, resp. `= 1 mod 3`).
    fn is_primary(&self) -> bool;
    /// Whether a rational prime `p` (not ramified) stays prime in the ring.
    fn is_inert(p: u64) -> bool;
    /// A ring element of norm `p` for a split rational prime `p`.
    fn split_prime_above(p: u64) -> Self;

    fn checked_norm(&self) -> Option<i64> {
        i64::try_from(self.norm_wide()).ok()
    }

    /// Panics on overflow; see [`QuadInt::checked_norm`].
    fn norm(&self) -> i64 {
        self.checked_norm().expect("norm overflows i64")
    }

    fn checked_mul(&self, other: &Self) -> Option<Self> {
        let (a, b) = self.mul_wide(other);
        Some(Self::new(i64::try_from(a).ok()?, i64::try_from(b).ok()?))
    }

    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(Self::new(
            self.a().checked_add(other.a())?,
            self.b().checked_add(other.b())?,
        ))
    }

    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(Self::new(
            self.a().checked_sub(other.a())?,
            self.b().checked_sub(other.b())?,
        ))
    }

    fn is_unit(&self) -> bool {
        self.norm_wide() == 1
    }

    fn is_coprime_to_ramified(&self) -> bool {
        self.norm_wide() % Self::RAMIFIED_NORM as i128 != 0
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = *self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// Euclidean division `x = q*y + r` with `N(r) < N(y)`.
    ///
    /// Each coordinate of `x/y` is rounded to the nearest integer, with
    /// half-values rounded toward negative infinity.
    fn divmod(&self, y: &Self) -> Result<(Self, Self), RingError> {
        let n = y.norm_wide();
        if n == 0 {
            return Err(RingError::DivisionByZero);
        }
        let (pa, pb) = self.mul_wide(&y.conj());
        let q = Self::new(
            i64::try_from(round_half_down(pa, n)).map_err(|_| RingError::Overflow)?,
            i64::try_from(round_half_down(pb, n)).map_err(|_| RingError::Overflow)?,
        );
        let qy = q.checked_mul(y).ok_or(RingError::Overflow)?;
        let r = self.checked_sub(&qy).ok_or(RingError::Overflow)?;
        Ok((q, r))
    }

    fn rem(&self, y: &Self) -> Result<Self, RingError> {
        self.divmod(y).map(|(_, r)| r)
    }

    fn divides(&self, x: &Self) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        matches!(x.rem(self), Ok(r) if r.is_zero())
    }

    /// Exact quotient `self / y`, or `None` if `y` does not divide `self`.
    fn exact_div(&self, y: &Self) -> Option<Self> {
        match self.divmod(y) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    fn parse(s: &str) -> Result<Self, RingError> {
        parse_element(s)
    }
}

/// Nearest integer to `p/n` (`n > 0`) with ties toward negative infinity.
fn round_half_down(p: i128, n: i128) -> i128 {
    // ceil((2p - n) / 2n)
    let num = 2 * p - n;
    let den = 2 * n;
    -((-num).div_euclid(den))
}

/// Canonical text form with explicit signs: `"-1+2i"`, `"1+3w"`, `"7+0i"`.
pub(crate) fn format_element(a: i64, b: i64, suffix: char) -> String {
    if b < 0 {
        format!("{a}-{}{suffix}", b.unsigned_abs())
    } else {
        format!("{a}+{b}{suffix}")
    }
}

fn parse_element<R: QuadInt>(input: &str) -> Result<R, RingError> {
    let err = |reason| RingError::Parse {
        input: input.to_string(),
        reason,
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty input"));
    }
    let suffixes: &[char] = match R::RING {
        Ring::Gauss => &['i'],
        Ring::Eisenstein => &['w', 'ω'],
    };
    let parse_int = |t: &str| -> Result<i64, RingError> {
        let t = t.strip_prefix('+').unwrap_or(t);
        if t.is_empty() || !t.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) {
            return Err(err("malformed integer coefficient"));
        }
        t.parse::<i64>().map_err(|_| err("coefficient out of range"))
    };
    let Some(body) = suffixes.iter().find_map(|&c| s.strip_suffix(c)) else {
        return Ok(R::new(parse_int(s)?, 0));
    };
    // Split at the last sign that is not the leading character.
    let split = body
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let a = if re.is_empty() { 0 } else { parse_int(re)? };
    let b = match im {
        "" | "+" => 1,
        "-" => -1,
        t => parse_int(t)?,
    };
    Ok(R::new(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rounding_rule() {
        assert_eq!(round_half_down(5, 10), 0);
        assert_eq!(round_half_down(6, 10), 1);
        assert_eq!(round_half_down(-5, 10), -1);
        assert_eq!(round_half_down(-6, 10), -1);
        assert_eq!(round_half_down(14, 5), 3);
        assert_eq!(round_half_down(-7, 5), -1);
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(GaussInt::parse("i").unwrap(), GaussInt::new(0, 1));
        assert_eq!(GaussInt::parse("-i").unwrap(), GaussInt::new(0, -1));
        assert_eq!(GaussInt::parse("-1+2i").unwrap(), GaussInt::new(-1, 2));
        assert_eq!(GaussInt::parse("7").unwrap(), GaussInt::new(7, 0));
        assert_eq!(GaussInt::parse("3-i").unwrap(), GaussInt::new(3, -1));
        assert_eq!(EisInt::parse("1+3w").unwrap(), EisInt::new(1, 3));
        assert_eq!(EisInt::parse("w").unwrap(), EisInt::new(0, 1));
        assert_eq!(EisInt::parse("-2-3w").unwrap(), EisInt::new(-2, -3));
        assert!(GaussInt::parse("1+2w").is_err());
        assert!(GaussInt::parse("").is_err());
        assert!(GaussInt::parse("1++2i").is_err());
        assert!(EisInt::parse("x").is_err());
    }

    proptest! {
        #[test]
        fn canonical_text_round_trips(a in -10_000i64..10_000, b in -10_000i64..10_000) {
            let g = GaussInt::new(a, b);
            prop_assert_eq!(GaussInt::parse(&g.to_string()).unwrap(), g);
            let e = EisInt::new(a, b);
            prop_assert_eq!(EisInt::parse(&e.to_string()).unwrap(), e);
        }
    }
}
