//! Goodness-of-fit test for a parametric vol-of-vol shape.
//!
//! Under `H0: tau^2_s = theta * f(s, X_s, sigma^2_s)` the residual process
//!
//! ```text
//! N_t = V_t - B_t D^{-1} C,   B_t = int_0^t f,  D = int_0^1 f^2,  C = int_0^1 tau^2 f
//! ```
//!
//! vanishes identically. Its plug-in estimate is studentized pointwise and
//! summarized by a Kolmogorov-Smirnov type supremum `Y_n`, whose null
//! distribution is calibrated with a parametric Heston bootstrap.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::{ALPHA_EIGHTH, C_G2, C_G3};
use crate::error::{Error, Result};
use crate::rng;
use crate::sim::{simulate_observed, ModelKind, ModelSpec, SampledPath, SimGrid};
use crate::spot::{eighth_power_sums, EstimatorConfig, SpotSeries};
use crate::sum::{self, CompensatedSum};
use crate::volvol::{check_horizon, tau2_series, v_hat_path};

/// Hypothesized shape `f(s, x, v)` of `tau^2` up to a scalar.
#[derive(Clone)]
pub struct Tau2Fn {
    label: String,
    heston: bool,
    f: Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>,
}

impl Tau2Fn {
    /// `f = v`.
    pub fn heston() -> Self {
        Self {
            label: "heston".into(),
            heston: true,
            f: Arc::new(|_, _, v| v),
        }
    }

    /// `f = v^(2 gamma)`.
    pub fn cev(gamma: f64) -> Self {
        Self {
            label: format!("cev:{gamma}"),
            heston: false,
            f: Arc::new(move |_, _, v| v.powf(2.0 * gamma)),
        }
    }

    /// `f = 1`.
    pub fn constant() -> Self {
        Self {
            label: "constant".into(),
            heston: false,
            f: Arc::new(|_, _, _| 1.0),
        }
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            heston: false,
            f: Arc::new(f),
        }
    }

    /// Scales the shape by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let inner = Arc::clone(&self.f);
        Self {
            label: format!("{}*{lambda}", self.label),
            heston: false,
            f: Arc::new(move |s, x, v| lambda * inner(s, x, v)),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_heston(&self) -> bool {
        self.heston
    }

    #[inline]
    pub fn eval(&self, s: f64, x: f64, v: f64) -> f64 {
        (self.f)(s, x, v)
    }
}

impl fmt::Debug for Tau2Fn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tau2Fn").field("label", &self.label).finish()
    }
}

impl std::str::FromStr for Tau2Fn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heston" => Ok(Tau2Fn::heston()),
            "constant" => Ok(Tau2Fn::constant()),
            _ => match s.strip_prefix("cev:").and_then(|g| g.parse::<f64>().ok()) {
                Some(g) if g >= 0.0 => Ok(Tau2Fn::cev(g)),
                _ => Err(Error::domain(format!(
                    "unknown shape '{s}' (heston | cev:<gamma> | constant)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofConfig {
    pub estimator: EstimatorConfig,
    /// Grid points with `i/n < t_min` are left out of the supremum; 0 keeps all.
    pub t_min: f64,
}

impl Default for GofConfig {
    fn default() -> Self {
        Self {
            estimator: EstimatorConfig::default(),
            t_min: 0.1,
        }
    }
}

/// Plug-in design quantities of the projection onto `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    /// `f(i/n, X_{i/n}, s2[i])`, `i = 0..=n-k`.
    pub f_values: Vec<f64>,
    /// `B_{m/n}` for `m = 0..=n` (zero while `m < k`).
    pub b_path: Vec<f64>,
    pub d_hat: f64,
    pub c_hat_f: f64,
}

impl Design {
    pub fn theta_hat(&self) -> f64 {
        self.c_hat_f / self.d_hat
    }
}

/// ```text
/// B_t = (1/n) sum_{i=0}^{floor(nt)-k} f_i
/// D   = (1/n) sum_{i=0}^{n-k}         f_i^2
/// C   = (1/n) sum_{i=0}^{n-2k}        tau2[i] f_i
/// ```
pub fn bdc_hats(path: &SampledPath, spot: &SpotSeries, tau2: &[f64], f: &Tau2Fn, eps: f64) -> Result<Design> {
    let (n, k) = (spot.n, spot.k_n);
    let nf = n as f64;
    let f_values: Vec<f64> = spot
        .s2
        .iter()
        .enumerate()
        .map(|(i, &v)| f.eval(i as f64 / nf, path.x[i], v))
        .collect();
    if let Some((i, v)) = f_values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::DegenerateDesign(format!(
            "shape {} is {v} at i = {i}",
            f.label()
        )));
    }
    let min_f = f_values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_f > eps) {
        return Err(Error::DegenerateDesign(format!(
            "shape {} is not bounded away from zero (min {min_f})",
            f.label()
        )));
    }
    let pre = sum::prefix(&f_values);
    let b_path = (0..=n).map(|m| if m < k { 0.0 } else { pre[m - k + 1] / nf }).collect();
    let d_hat = f_values.iter().map(|v| v * v).collect::<CompensatedSum>().value() / nf;
    if !(d_hat > eps) {
        return Err(Error::DegenerateDesign(format!("D_hat = {d_hat}")));
    }
    let c_hat_f = tau2
        .iter()
        .zip(&f_values)
        .map(|(t, v)| t * v)
        .collect::<CompensatedSum>()
        .value()
        / nf;
    Ok(Design {
        f_values,
        b_path,
        d_hat,
        c_hat_f,
    })
}

/// `N_t = V_t - B_t C / D` pointwise.
pub fn n_hat_path(v_path: &[f64], b_path: &[f64], d_hat: f64, c_hat_f: f64) -> Vec<f64> {
    let theta = c_hat_f / d_hat;
    v_path.iter().zip(b_path).map(|(v, b)| v - b * theta).collect()
}

/// Local estimates of `alpha^2`, `i = 0..=n-2k`:
///
/// ```text
/// 453/280 n^2/k^2 (s2[i+k]-s2[i])^4 - 486/35 n/k^2 tau2[i] s4[i] - 346/1225 n^6/k^5 sum_j |Delta_{i+j} X|^8
/// ```
pub fn alpha2_series(spot: &SpotSeries, tau2: &[f64], p8: &[f64]) -> Vec<f64> {
    tau2.iter()
        .zip(p8)
        .enumerate()
        .map(|(i, (&t2, &e))| alpha2_at(spot, i, t2, e))
        .collect()
}

/// Single local `alpha^2` estimate at index `i`.
pub fn alpha2_local(path: &SampledPath, spot: &SpotSeries, i: usize) -> Result<f64> {
    let (n, k) = (spot.n, spot.k_n);
    if i + 2 * k > n {
        return Err(Error::domain(format!(
            "index {i} out of range 0..={}",
            n.saturating_sub(2 * k)
        )));
    }
    let tau = crate::volvol::tau2_local(spot, i)?;
    let p8 = eighth_power_sums(&path.x[i..=i + k], k);
    Ok(alpha2_at(spot, i, tau, p8[0]))
}

fn alpha2_at(spot: &SpotSeries, i: usize, tau: f64, p8: f64) -> f64 {
    let (nf, kf, k) = (spot.n as f64, spot.k_n as f64, spot.k_n);
    let d2 = (spot.s2[i + k] - spot.s2[i]).powi(2);
    C_G3.value() * nf * nf / (kf * kf) * d2 * d2
        - C_G2.value() * nf / (kf * kf) * tau * spot.s4[i]
        - ALPHA_EIGHTH.value() * nf.powi(6) / kf.powi(5) * p8
}

/// Studentization `s_t^2` for `t = m/n`, `m = 0..=n`, from sums over
/// `i = 1..=m-2k` (zero while `m <= 2k`):
///
/// ```text
/// (1/n) sum a_i - 2 B_t/D (1/n) sum a_i f_i + B_t^2/D^2 (1/n) sum a_i f_i^2
/// ```
pub fn s2_hat_path(alpha2: &[f64], f_values: &[f64], b_path: &[f64], d_hat: f64, n: usize, k: usize) -> Vec<f64> {
    let nf = n as f64;
    let count = alpha2.len();
    let a0 = sum::prefix(&alpha2[1..]);
    let a1_terms: Vec<f64> = (1..count).map(|i| alpha2[i] * f_values[i]).collect();
    let a2_terms: Vec<f64> = (1..count).map(|i| alpha2[i] * f_values[i] * f_values[i]).collect();
    let a1 = sum::prefix(&a1_terms);
    let a2 = sum::prefix(&a2_terms);
    (0..=n)
        .map(|m| {
            if m <= 2 * k {
                return 0.0;
            }
            let j = (m - 2 * k).min(count - 1);
            let r = b_path[m] / d_hat;
            (a0[j] - 2.0 * r * a1[j] + r * r * a2[j]) / nf
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub y_n: f64,
    /// Grid points entering the supremum.
    pub admissible: usize,
    /// Points at or after `t_min` dropped because `s^2 <= eps`.
    pub floored: usize,
}

/// `sup |sqrt(n/k) N_{i/n} / s_{i/n}|` over `i <= n - 2k` with `i/n >= t_min`
/// and `s^2_{i/n} > eps`.
pub fn ks_statistic(n_path: &[f64], s2_path: &[f64], n: usize, k: usize, t_min: f64, eps: f64) -> Result<KsOutcome> {
    let scale = (n as f64 / k as f64).sqrt();
    let mut out = KsOutcome {
        y_n: 0.0,
        admissible: 0,
        floored: 0,
    };
    for i in 0..=n.saturating_sub(2 * k) {
        if (i as f64) < t_min * n as f64 {
            continue;
        }
        let s2 = s2_path[i];
        if !(s2 > eps) {
            out.floored += 1;
            continue;
        }
        out.admissible += 1;
        out.y_n = out.y_n.max((scale * n_path[i] / s2.sqrt()).abs());
    }
    if out.admissible == 0 {
        return Err(Error::DegenerateStudentization);
    }
    Ok(out)
}

/// Everything computed from one path for the test statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct GofStatistic {
    pub n: usize,
    pub k_n: usize,
    pub design: Design,
    pub v_path: Vec<f64>,
    pub n_path: Vec<f64>,
    pub s2_path: Vec<f64>,
    pub ks: KsOutcome,
}

pub fn gof_statistic(path: &SampledPath, f: &Tau2Fn, cfg: &GofConfig) -> Result<GofStatistic> {
    let est = &cfg.estimator;
    let spot = SpotSeries::compute(path, est)?;
    let (n, k) = (spot.n, spot.k_n);
    check_horizon(n, k, n, 1.0)?;
    let tau2 = tau2_series(&spot);
    let design = bdc_hats(path, &spot, &tau2, f, est.eps_var)?;
    let v_path = v_hat_path(&tau2, n, k);
    let n_path = n_hat_path(&v_path, &design.b_path, design.d_hat, design.c_hat_f);
    let p8 = eighth_power_sums(&path.x, k);
    let alpha2 = alpha2_series(&spot, &tau2, &p8);
    let s2_path = s2_hat_path(&alpha2, &design.f_values, &design.b_path, design.d_hat, n, k);
    let ks = ks_statistic(&n_path, &s2_path, n, k, cfg.t_min, est.eps_var)?;
    Ok(GofStatistic {
        n,
        k_n: k,
        design,
        v_path,
        n_path,
        s2_path,
        ks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub b: usize,
    pub seed: u64,
    /// Euler substeps for the bootstrap paths.
    pub substeps: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            b: 200,
            seed: 0,
            substeps: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub shape: String,
    /// Plug-in recipe applied to a non-Heston shape.
    pub experimental: bool,
    pub n: usize,
    pub k_n: usize,
    pub t_min: f64,
    pub theta_hat: f64,
    pub d_hat: f64,
    pub c_hat_f: f64,
    /// Realized variance used as the bootstrap long-run level.
    pub alpha_hat: f64,
    pub kappa_hat: f64,
    pub xi_hat: f64,
    pub y_n: f64,
    pub floored_points: usize,
    pub n_path: Vec<f64>,
    pub s2_path: Vec<f64>,
    pub boot: Vec<f64>,
    /// Bootstrap replications dropped for degenerate statistics.
    pub discarded: usize,
    pub p_value: Option<f64>,
}

impl GofReport {
    pub fn rejects(&self, level: f64) -> Option<bool> {
        self.p_value.map(|p| p <= level)
    }
}

/// Heston model used to regenerate data under the null:
/// `alpha = alpha_hat`, `xi = sqrt(theta)`, `kappa = 5 theta / alpha_hat`,
/// no drift, independent drivers, `X0 = 0`, `v0 = alpha_hat`.
pub fn bootstrap_model(alpha_hat: f64, theta_hat: f64) -> Result<ModelSpec> {
    if !(theta_hat > 0.0) {
        return Err(Error::BootstrapDegenerate(theta_hat));
    }
    if !(alpha_hat > 0.0) {
        return Err(Error::domain(format!("realized variance {alpha_hat} must be positive")));
    }
    Ok(ModelSpec {
        kind: ModelKind::Heston,
        beta: 0.0,
        convexity: false,
        kappa: 5.0 * theta_hat / alpha_hat,
        alpha: alpha_hat,
        xi: theta_hat.sqrt(),
        rho: 0.0,
        x0: 0.0,
        v0: alpha_hat,
    })
}

/// Bootstrap test of `H0: tau^2 = theta f`. Replications run in parallel on
/// streams keyed by `(boot.seed, b)`, so the report does not depend on the
/// thread count.
pub fn bootstrap_test(path: &SampledPath, f: &Tau2Fn, boot: &BootstrapConfig, cfg: &GofConfig) -> Result<GofReport> {
    if boot.b == 0 {
        return Err(Error::domain("bootstrap size B must be at least 1"));
    }
    let stat = gof_statistic(path, f, cfg)?;
    let alpha_hat = path.realized_variance();
    let theta = stat.design.theta_hat();
    let model = bootstrap_model(alpha_hat, theta)?;
    let grid = SimGrid {
        n: path.n,
        substeps: boot.substeps,
        c: 1.0,
    };

    let draws: Vec<Option<f64>> = (0..boot.b as u64)
        .into_par_iter()
        .map(|b| -> Result<Option<f64>> {
            let mut rng = rng::stream(boot.seed, &[b]);
            let star = simulate_observed(&model, &grid, &mut rng)?;
            match gof_statistic(&star, f, cfg) {
                Ok(s) => Ok(Some(s.ks.y_n)),
                Err(e) if e.is_degenerate() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let discarded = draws.iter().filter(|d| d.is_none()).count();
    let boot_vals: Vec<f64> = draws.into_iter().flatten().collect();
    let y = stat.ks.y_n;
    let p_value = (!boot_vals.is_empty()).then(|| {
        let exceed = boot_vals.iter().filter(|&&v| v >= y).count();
        (1 + exceed) as f64 / (boot_vals.len() + 1) as f64
    });

    Ok(GofReport {
        shape: f.label().to_string(),
        experimental: !f.is_heston(),
        n: stat.n,
        k_n: stat.k_n,
        t_min: cfg.t_min,
        theta_hat: theta,
        d_hat: stat.design.d_hat,
        c_hat_f: stat.design.c_hat_f,
        alpha_hat,
        kappa_hat: model.kappa,
        xi_hat: model.xi,
        y_n: y,
        floored_points: stat.ks.floored,
        n_path: stat.n_path,
        s2_path: stat.s2_path,
        boot: boot_vals,
        discarded,
        p_value,
    })
}
