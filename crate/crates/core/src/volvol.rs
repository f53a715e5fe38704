//! Integrated volatility of volatility.
//!
//! Local estimates of `tau^2` are built from squared increments of the spot
//! variance over a lag of one window, minus a bias term driven by the spot
//! quarticity:
//!
//! ```text
//! tau2[i] = 3n/(2k) (s2[i+k] - s2[i])^2 - 6 n/k^2 s4[i],   i = 0..=n-2k
//! V_t     = (1/n) sum_{i=0}^{floor(nt)-2k} tau2[i]
//! ```
//!
//! `sqrt(n/k) (V_t - int tau^2)` is asymptotically mixed normal with
//! conditional variance `int alpha^2`, which is estimated from the three
//! statistics G1, G2, G3 (see [`g_stats`], [`c_hat`]). The same statistics
//! also give [`t_hat`], an estimator of `int tau^4`.

use serde::{Deserialize, Serialize};

use crate::coefficients::{C_G1, C_G2, C_G3, TAU_BIAS, TAU_SCALE, T_G1, T_G2, T_G3};
use crate::error::{Error, Result};
use crate::normal;
use crate::sim::SampledPath;
use crate::spot::{EstimatorConfig, SpotSeries};
use crate::sum::{self, CompensatedSum};

/// Fails unless `floor(nt) >= 2k + 1`.
pub fn check_horizon(n: usize, k: usize, last: usize, t: f64) -> Result<()> {
    if last < 2 * k + 1 {
        return Err(Error::HorizonTooSmall {
            t,
            n,
            k_n: k,
            t_min: (2 * k + 1) as f64 / n as f64,
        });
    }
    Ok(())
}

/// Local estimate `tau2[i]`; may be negative when the bias correction dominates.
pub fn tau2_local(spot: &SpotSeries, i: usize) -> Result<f64> {
    let (n, k) = (spot.n, spot.k_n);
    if i + 2 * k > n {
        return Err(Error::domain(format!(
            "index {i} out of range 0..={}",
            n.saturating_sub(2 * k)
        )));
    }
    Ok(tau2_unchecked(spot, i))
}

#[inline]
fn tau2_unchecked(spot: &SpotSeries, i: usize) -> f64 {
    let (nf, kf) = (spot.n as f64, spot.k_n as f64);
    let d = spot.s2[i + spot.k_n] - spot.s2[i];
    TAU_SCALE.value() * nf / kf * d * d - TAU_BIAS.value() * nf / (kf * kf) * spot.s4[i]
}

/// All local estimates `tau2[i]`, `i = 0..=n-2k`.
pub fn tau2_series(spot: &SpotSeries) -> Vec<f64> {
    let count = (spot.n + 1).saturating_sub(2 * spot.k_n);
    (0..count).map(|i| tau2_unchecked(spot, i)).collect()
}

/// Global estimate of `int_0^t tau^2 ds`.
pub fn v_hat(spot: &SpotSeries, cfg: &EstimatorConfig) -> Result<f64> {
    let last = cfg.last_index(spot.n)?;
    check_horizon(spot.n, spot.k_n, last, cfg.t)?;
    let acc: CompensatedSum = (0..=last - 2 * spot.k_n).map(|i| tau2_unchecked(spot, i)).collect();
    Ok(acc.value() / spot.n as f64)
}

/// The same sum without the quarticity correction, `(1/n) sum 3n/(2k) (Delta s2)^2`.
/// It is biased upwards by roughly `6 n/k^2 int sigma^4`.
pub fn uncorrected_v_hat(spot: &SpotSeries, cfg: &EstimatorConfig) -> Result<f64> {
    let last = cfg.last_index(spot.n)?;
    check_horizon(spot.n, spot.k_n, last, cfg.t)?;
    let (nf, kf, k) = (spot.n as f64, spot.k_n as f64, spot.k_n);
    let acc: CompensatedSum = (0..=last - 2 * k)
        .map(|i| {
            let d = spot.s2[i + k] - spot.s2[i];
            TAU_SCALE.value() * nf / kf * d * d
        })
        .collect();
    Ok(acc.value() / nf)
}

/// `V_{m/n}` for every grid point `m = 0..=n`; zero while `m < 2k`.
pub fn v_hat_path(tau2: &[f64], n: usize, k: usize) -> Vec<f64> {
    let pre = sum::prefix(tau2);
    let nf = n as f64;
    (0..=n)
        .map(|m| {
            if m < 2 * k {
                0.0
            } else {
                pre[(m - 2 * k + 1).min(tau2.len())] / nf
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GStats {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

/// ```text
/// G1 = (1/n) sum_{i=1}^{floor(nt)-k}  s4[i]^2
/// G2 = (1/n) sum_{i=1}^{floor(nt)-2k} tau2[i] s4[i]
/// G3 = (1/n) sum_{i=1}^{floor(nt)-2k} n^2/k^2 (s2[i+k] - s2[i])^4
/// ```
pub fn g_stats(spot: &SpotSeries, cfg: &EstimatorConfig) -> Result<GStats> {
    let last = cfg.last_index(spot.n)?;
    check_horizon(spot.n, spot.k_n, last, cfg.t)?;
    let (n, k) = (spot.n, spot.k_n);
    let (nf, kf) = (n as f64, k as f64);
    let g1: CompensatedSum = (1..=last - k).map(|i| spot.s4[i] * spot.s4[i]).collect();
    let mut g2 = CompensatedSum::new();
    let mut g3 = CompensatedSum::new();
    let scale3 = nf * nf / (kf * kf);
    for i in 1..=last - 2 * k {
        g2.add(tau2_unchecked(spot, i) * spot.s4[i]);
        let d2 = (spot.s2[i + k] - spot.s2[i]).powi(2);
        g3.add(scale3 * d2 * d2);
    }
    Ok(GStats {
        g1: g1.value() / nf,
        g2: g2.value() / nf,
        g3: g3.value() / nf,
    })
}

/// Estimate of `int_0^t alpha^2 ds`; can be negative in finite samples.
pub fn c_hat(g: &GStats, n: usize, k: usize) -> f64 {
    let r = n as f64 / (k as f64).powi(2);
    C_G3.value() * g.g3 - r * C_G2.value() * g.g2 - r * r * C_G1.value() * g.g1
}

/// Estimate of `int_0^t tau^4 ds`.
pub fn t_hat(g: &GStats, n: usize, k: usize) -> f64 {
    let r = n as f64 / (k as f64).powi(2);
    T_G3.value() * g.g3 - r * T_G2.value() * g.g2 - r * r * T_G1.value() * g.g1
}

/// `sqrt(n/k) (v_hat - truth) / sqrt(c_hat)`.
pub fn feasible_stat(v_hat: f64, c_hat: f64, truth: f64, n: usize, k: usize) -> Result<f64> {
    if !(c_hat > 0.0) {
        return Err(Error::NonPositiveVariance(c_hat));
    }
    Ok((n as f64 / k as f64).sqrt() * (v_hat - truth) / c_hat.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolvolReport {
    pub n: usize,
    pub k_n: usize,
    pub t: f64,
    pub v_hat: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub c_hat: f64,
    pub t_hat: f64,
    /// Latent `int_0^t tau^2` when the path was simulated.
    pub truth: Option<f64>,
    /// Feasible statistic against `truth`; absent without truth or when `c_hat <= 0`.
    pub z: Option<f64>,
    pub level: f64,
    /// Two-sided interval at `level`; absent when `c_hat <= 0`.
    pub ci: Option<Interval>,
}

/// Runs every estimator on one path at horizon `cfg.t`.
pub fn estimate(path: &SampledPath, cfg: &EstimatorConfig, level: f64) -> Result<VolvolReport> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("confidence level {level} outside (0, 1)")));
    }
    let spot = SpotSeries::compute(path, cfg)?;
    let (n, k) = (spot.n, spot.k_n);
    let v = v_hat(&spot, cfg)?;
    let g = g_stats(&spot, cfg)?;
    let c = c_hat(&g, n, k);
    let truth = path.latent.as_ref().map(|lat| {
        let len = lat.tau2.len();
        let count = ((len as f64) * cfg.t).round() as usize;
        if count >= len {
            lat.iv_tau2
        } else {
            sum::sum(&lat.tau2[..count]) / len as f64
        }
    });
    let z = truth.and_then(|tr| feasible_stat(v, c, tr, n, k).ok());
    let ci = (c > 0.0).then(|| {
        let half = normal::quantile(0.5 + level / 2.0) * (k as f64 / n as f64).sqrt() * c.sqrt();
        Interval {
            lo: v - half,
            hi: v + half,
        }
    });
    Ok(VolvolReport {
        n,
        k_n: k,
        t: cfg.t,
        v_hat: v,
        g1: g.g1,
        g2: g.g2,
        g3: g.g3,
        c_hat: c,
        t_hat: t_hat(&g, n, k),
        truth,
        z,
        level,
        ci,
    })
}
