//! Compensated (Kahan-Babuska-Neumaier) accumulation.
//!
//! Every sliding window and prefix sum in the estimators goes through
//! [`CompensatedSum`], so long rolling add/subtract sequences do not drift.

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn sub(&mut self, v: f64) {
        self.add(-v);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<CompensatedSum>().value()
}

/// Rolling sums `out[i] = values[i] + ... + values[i + width - 1]` for every
/// full window, computed with one add and one subtract per step.
pub fn rolling(values: &[f64], width: usize) -> Vec<f64> {
    if width == 0 || width > values.len() {
        return Vec::new();
    }
    let count = values.len() - width + 1;
    let mut out = Vec::with_capacity(count);
    let mut acc: CompensatedSum = values[..width].iter().copied().collect();
    out.push(acc.value());
    for i in 1..count {
        acc.add(values[i + width - 1]);
        acc.sub(values[i - 1]);
        out.push(acc.value());
    }
    out
}

/// Inclusive prefix sums with a leading zero: `out[m] = values[0] + ... + values[m - 1]`.
pub fn prefix(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len() + 1);
    let mut acc = CompensatedSum::new();
    out.push(0.0);
    for &v in values {
        acc.add(v);
        out.push(acc.value());
    }
    out
}
