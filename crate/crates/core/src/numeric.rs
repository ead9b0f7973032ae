//! Compensated accumulation.

use num_complex::Complex64;

/// Neumaier summation: error independent of the number of terms to first
/// order. `abs_sum` records `sum |x|` for error budgets.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
        // the two adds above counted other's value, not its magnitudes
        self.abs_sum += other.abs_sum - other.sum.abs() - other.comp.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// Bound on the rounding error of [`NeumaierSum::value`].
    pub fn error_bound(&self) -> f64 {
        2.0 * f64::EPSILON * self.value().abs() + 4.0 * f64::EPSILON * f64::EPSILON * self.abs_sum
            + f64::EPSILON * self.comp.abs()
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Complex Neumaier sum, componentwise.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    pub re: NeumaierSum,
    pub im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn error_bound(&self) -> f64 {
        self.re.error_bound() + self.im.error_bound()
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = ComplexSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}
