use std::fmt;

use super::{format_element, rational, QuadInt, Ring};

/// An element `a + b*i` of the Gaussian integers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussInt {
    pub a: i64,
    pub b: i64,
}

impl GaussInt {
    pub const I: GaussInt = GaussInt { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        GaussInt { a, b }
    }
}

static UNITS: [GaussInt; 4] = [
    GaussInt::new(1, 0),
    GaussInt::new(0, 1),
    GaussInt::new(-1, 0),
    GaussInt::new(0, -1),
];

impl QuadInt for GaussInt {
    const RING: Ring = Ring::Gauss;
    const RAMIFIED_NORM: i64 = 2;
    const SUFFIX: char = 'i';

    fn new(a: i64, b: i64) -> Self {
        GaussInt { a, b }
    }
    fn a(&self) -> i64 {
        self.a
    }
    fn b(&self) -> i64 {
        self.b
    }

    /// Ordered as successive powers of `i`.
    fn units() -> &'static [Self] {
        &UNITS
    }

    fn ramified() -> Self {
        GaussInt::new(1, 1)
    }

    fn conj(&self) -> Self {
        GaussInt::new(self.a, -self.b)
    }

    fn norm_wide(&self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        a * a + b * b
    }

    fn mul_wide(&self, o: &Self) -> (i128, i128) {
        let (a, b, c, d) = (self.a as i128, self.b as i128, o.a as i128, o.b as i128);
        (a * c - b * d, a * d + b * c)
    }

    fn is_primary(&self) -> bool {
        let a = self.a.rem_euclid(4);
        let b = self.b.rem_euclid(4);
        (a == 1 && b == 0) || (a == 3 && b == 2)
    }

    fn is_inert(p: u64) -> bool {
        p % 4 == 3
    }

    fn split_prime_above(p: u64) -> Self {
        let t = rational::sqrt_minus_one(p);
        let pi = super::ops::euclid(GaussInt::new(p as i64, 0), GaussInt::new(t as i64, 1));
        debug_assert_eq!(pi.norm_wide(), p as i128);
        pi
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_element(self.a, self.b, 'i'))
    }
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

super::ops::impl_checked_ops!(GaussInt);
