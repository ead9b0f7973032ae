use std::fmt;

use super::{format_element, rational, QuadInt, Ring};

/// An element `a + b*w` of the Eisenstein integers, `w = exp(2*pi*i/3)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EisInt {
    pub a: i64,
    pub b: i64,
}

impl EisInt {
    pub const OMEGA: EisInt = EisInt { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        EisInt { a, b }
    }

    /// Complex embedding.
    pub fn to_complex(&self) -> (f64, f64) {
        let (a, b) = (self.a as f64, self.b as f64);
        (a - 0.5 * b, b * 3f64.sqrt() / 2.0)
    }
}

// 1, w, w^2, -1, -w, -w^2
static UNITS: [EisInt; 6] = [
    EisInt::new(1, 0),
    EisInt::new(0, 1),
    EisInt::new(-1, -1),
    EisInt::new(-1, 0),
    EisInt::new(0, -1),
    EisInt::new(1, 1),
];

impl QuadInt for EisInt {
    const RING: Ring = Ring::Eisenstein;
    const RAMIFIED_NORM: i64 = 3;
    const SUFFIX: char = 'w';

    fn new(a: i64, b: i64) -> Self {
        EisInt { a, b }
    }
    fn a(&self) -> i64 {
        self.a
    }
    fn b(&self) -> i64 {
        self.b
    }

    /// `units()[k]` is `w^k` for `k < 3` and `-w^(k-3)` otherwise.
    fn units() -> &'static [Self] {
        &UNITS
    }

    fn ramified() -> Self {
        EisInt::new(1, -1)
    }

    /// `conj(a + b*w) = (a - b) - b*w`.
    fn conj(&self) -> Self {
        EisInt::new(self.a - self.b, -self.b)
    }

    fn norm_wide(&self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        a * a - a * b + b * b
    }

    fn mul_wide(&self, o: &Self) -> (i128, i128) {
        let (a, b, c, d) = (self.a as i128, self.b as i128, o.a as i128, o.b as i128);
        (a * c - b * d, a * d + b * c - b * d)
    }

    fn is_primary(&self) -> bool {
        self.a.rem_euclid(3) == 1 && self.b.rem_euclid(3) == 0
    }

    fn is_inert(p: u64) -> bool {
        p % 3 == 2
    }

    fn split_prime_above(p: u64) -> Self {
        let t = rational::cube_root_of_unity(p);
        let pi = super::ops::euclid(EisInt::new(p as i64, 0), EisInt::new(-(t as i64), 1));
        debug_assert_eq!(pi.norm_wide(), p as i128);
        pi
    }
}

impl fmt::Display for EisInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_element(self.a, self.b, 'w'))
    }
}

impl fmt::Debug for EisInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

super::ops::impl_checked_ops!(EisInt);
