//! Sliding-window spot variance and spot quarticity.
//!
//! For a window of `k` increments starting after observation `i`,
//!
//! ```text
//! s2[i] = (n / k)       * sum_{j=1..k} (Delta_{i+j} X)^2
//! s4[i] = (n^2 / (3 k)) * sum_{j=1..k} (Delta_{i+j} X)^4
//! ```
//!
//! for `i = 0..=n-k`. Both series are produced by one rolling pass each.

use serde::{Deserialize, Serialize};

use crate::coefficients::QUARTICITY_SCALE;
use crate::error::{Error, Result};
use crate::sim::SampledPath;
use crate::sum;

/// Rule for the window length `k_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    /// `k_n = floor(c * sqrt(n))`.
    Sqrt { c: f64 },
    /// A fixed `k_n`, independent of `n`.
    Fixed { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub window: Window,
    /// Evaluation horizon in (0, 1].
    pub t: f64,
    /// Floor below which variance denominators count as zero.
    pub eps_var: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            window: Window::Sqrt { c: 1.0 },
            t: 1.0,
            eps_var: 1e-12,
        }
    }
}

impl EstimatorConfig {
    pub fn with_c(c: f64) -> Self {
        Self {
            window: Window::Sqrt { c },
            ..Self::default()
        }
    }

    pub fn with_k(k: usize) -> Self {
        Self {
            window: Window::Fixed { k },
            ..Self::default()
        }
    }

    pub fn horizon(self, t: f64) -> Self {
        Self { t, ..self }
    }

    /// Window length for `n` intervals, validated so that `2 <= k` and `4k <= n`.
    pub fn k_n(&self, n: usize) -> Result<usize> {
        let k = match self.window {
            Window::Sqrt { c } => {
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::domain(format!("window constant c = {c} must be positive")));
                }
                // sqrt is exact for perfect squares; the nudge keeps c * sqrt(n)
                // from landing just below an integer for c != 1.
                (c * (n as f64).sqrt() + 1e-9).floor() as usize
            }
            Window::Fixed { k } => k,
        };
        if k < 2 || 4 * k > n {
            return Err(Error::domain(format!(
                "window k_n = {k} infeasible for n = {n} (need 2 <= k_n <= n/4)"
            )));
        }
        Ok(k)
    }

    /// Effective constant `k_n / sqrt(n)`.
    pub fn effective_c(&self, n: usize) -> Result<f64> {
        Ok(self.k_n(n)? as f64 / (n as f64).sqrt())
    }

    /// `floor(n t)`, with a tiny tolerance against representation error in `t`.
    pub fn last_index(&self, n: usize) -> Result<usize> {
        if !(self.t > 0.0 && self.t <= 1.0) {
            return Err(Error::domain(format!("horizon t = {} outside (0, 1]", self.t)));
        }
        Ok(((n as f64) * self.t + 1e-9).floor().min(n as f64) as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpotSeries {
    pub n: usize,
    pub k_n: usize,
    pub s2: Vec<f64>,
    pub s4: Vec<f64>,
}

impl SpotSeries {
    pub fn compute(path: &SampledPath, cfg: &EstimatorConfig) -> Result<Self> {
        let n = path.n;
        let k = cfg.k_n(n)?;
        Self::with_window(&path.x, k)
    }

    /// Spot series of raw observations `x` (length `n + 1`) for a given window.
    pub fn with_window(x: &[f64], k: usize) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::domain("need at least two observations"));
        }
        let n = x.len() - 1;
        if k == 0 || k > n {
            return Err(Error::domain(format!("window k_n = {k} exceeds n = {n}")));
        }
        let sq: Vec<f64> = x.windows(2).map(|w| (w[1] - w[0]).powi(2)).collect();
        let quart: Vec<f64> = sq.iter().map(|d2| d2 * d2).collect();
        let nf = n as f64;
        let kf = k as f64;
        let scale2 = nf / kf;
        let scale4 = QUARTICITY_SCALE.value() * nf * nf / kf;
        let s2 = sum::rolling(&sq, k).into_iter().map(|s| scale2 * s.max(0.0)).collect();
        let s4 = sum::rolling(&quart, k)
            .into_iter()
            .map(|s| scale4 * s.max(0.0))
            .collect();
        Ok(Self { n, k_n: k, s2, s4 })
    }

    pub fn len(&self) -> usize {
        self.s2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s2.is_empty()
    }
}

/// Spot variance series `s2[i]`, `i = 0..=n-k`.
pub fn spot_vol2(path: &SampledPath, cfg: &EstimatorConfig) -> Result<Vec<f64>> {
    Ok(SpotSeries::compute(path, cfg)?.s2)
}

/// Spot quarticity series `s4[i]`, `i = 0..=n-k`.
pub fn spot_quarticity(path: &SampledPath, cfg: &EstimatorConfig) -> Result<Vec<f64>> {
    Ok(SpotSeries::compute(path, cfg)?.s4)
}

/// Rolling sums of `|Delta X|^8` over windows of `k` increments, `i = 0..=n-k`.
pub fn eighth_power_sums(x: &[f64], k: usize) -> Vec<f64> {
    let p8: Vec<f64> = x
        .windows(2)
        .map(|w| {
            let d2 = (w[1] - w[0]).powi(2);
            let d4 = d2 * d2;
            d4 * d4
        })
        .collect();
    sum::rolling(&p8, k).into_iter().map(|s| s.max(0.0)).collect()
}
