use super::dd::DoubleDouble;

/// Neumaier (improved Kahan–Babuška) running sum.
///
/// Also keeps `Σ|x|`, which is what rounding estimates are scaled by.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    abs_sum: f64,
    count: u64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
        self.count += 1;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Bound on the summation error alone: `2ε|S| + n ε² Σ|x|`.
    pub fn rounding_bound(&self) -> f64 {
        let eps = f64::EPSILON / 2.0;
        2.0 * eps * self.value().abs() + self.count as f64 * eps * eps * self.abs_sum
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Plain left-to-right f64 sum with the textbook worst-case bound.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaiveSum {
    sum: f64,
    abs_sum: f64,
    count: u64,
}

impl NaiveSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        self.sum += x;
        self.abs_sum += x.abs();
        self.count += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// `(n - 1) ε Σ|x|`.
    pub fn rounding_bound(&self) -> f64 {
        (self.count.saturating_sub(1)) as f64 * (f64::EPSILON / 2.0) * self.abs_sum
    }
}

/// Double-double running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExtendedSum {
    sum: DoubleDouble,
    abs_sum: f64,
    count: u64,
}

impl ExtendedSum {
    #[inline]
    pub fn add(&mut self, x: DoubleDouble) {
        self.sum += x;
        self.abs_sum += x.to_f64().abs();
        self.count += 1;
    }

    pub fn value(&self) -> DoubleDouble {
        self.sum
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// `n u² Σ|x|` with the double-double unit roundoff `u = 2^-104`.
    pub fn rounding_bound(&self) -> f64 {
        let u = 2f64.powi(-104);
        (self.count as f64 + 2.0) * u * self.abs_sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let terms = [1e16, 1.0, -1e16, 1.0];
        let naive: f64 = terms.iter().sum();
        let acc: CompensatedSum = terms.iter().copied().collect();
        assert_eq!(naive, 1.0);
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn compensated_sum_of_tenths() {
        let acc: CompensatedSum = std::iter::repeat_n(0.1, 1_000_000).collect();
        assert!((acc.value() - 100_000.0).abs() < 1e-9);
        assert!(acc.rounding_bound() < 1e-9);
    }

    #[test]
    fn naive_bound_covers_error() {
        let mut acc = NaiveSum::default();
        for _ in 0..1_000_000 {
            acc.add(0.1);
        }
        assert!((acc.value() - 100_000.0).abs() <= acc.rounding_bound());
    }
}
