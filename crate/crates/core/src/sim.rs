//! Stochastic-volatility simulators.
//!
//! The log price and its variance follow
//!
//! ```text
//! dX = (beta - v/2) dt + sqrt(v) dW
//! dv = kappa (alpha - v) dt + xi v^gamma dV,     Corr(W, V) = rho
//! ```
//!
//! with `gamma = 1/2` for Heston and `gamma = 0` for the Vasicek-type model.
//! Paths are generated by Euler-Maruyama on a fine grid with `substeps`
//! steps per observation interval, using full truncation: the positive part
//! `v+ = max(v, 0)` enters both drift and diffusion, and `v+` is what gets
//! recorded as the spot variance.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};

/// Diffusion family of the variance process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelKind {
    Heston,
    Cev { gamma: f64 },
    Vasicek,
}

impl ModelKind {
    pub fn gamma(&self) -> f64 {
        match *self {
            ModelKind::Heston => 0.5,
            ModelKind::Cev { gamma } => gamma,
            ModelKind::Vasicek => 0.0,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ModelKind::Heston => "heston".into(),
            ModelKind::Cev { gamma } => format!("cev:{gamma}"),
            ModelKind::Vasicek => "vasicek".into(),
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heston" => Ok(ModelKind::Heston),
            "vasicek" => Ok(ModelKind::Vasicek),
            _ => {
                let gamma = s
                    .strip_prefix("cev:")
                    .and_then(|g| g.parse::<f64>().ok())
                    .ok_or_else(|| Error::domain(format!("unknown model '{s}'")))?;
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(Error::domain(format!("CEV exponent must be >= 0, got {gamma}")));
                }
                Ok(ModelKind::Cev { gamma })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// Price drift level.
    pub beta: f64,
    /// Subtract `v/2` from the price drift (log-price convexity term).
    pub convexity: bool,
    pub kappa: f64,
    /// Long-run variance level.
    pub alpha: f64,
    pub xi: f64,
    pub rho: f64,
    pub x0: f64,
    pub v0: f64,
}

impl ModelSpec {
    /// Heston parameters of the reference simulation study:
    /// beta = 0.3, kappa = 5, alpha = 0.2, xi = 0.5, X0 = 0, v0 = alpha.
    pub fn heston_reference() -> Self {
        Self {
            kind: ModelKind::Heston,
            beta: 0.3,
            convexity: true,
            kappa: 5.0,
            alpha: 0.2,
            xi: 0.5,
            rho: 0.0,
            x0: 0.0,
            v0: 0.2,
        }
    }

    /// CEV alternatives with the reference drift: `gamma = 0` uses unit
    /// diffusion, `gamma = 1` uses `sqrt(kappa) v dV`.
    pub fn cev_alternative(gamma: f64) -> Self {
        let base = Self::heston_reference();
        let (kind, xi) = if gamma == 0.0 {
            (ModelKind::Vasicek, 1.0)
        } else {
            (ModelKind::Cev { gamma }, base.kappa.sqrt())
        };
        Self { kind, xi, ..base }
    }

    /// Constant variance `v0` (no vol-of-vol, no mean reversion, no drift).
    pub fn brownian(v0: f64) -> Self {
        Self {
            kind: ModelKind::Heston,
            beta: 0.0,
            convexity: false,
            kappa: 0.0,
            alpha: v0,
            xi: 0.0,
            rho: 0.0,
            x0: 0.0,
            v0,
        }
    }

    pub fn with_rho(self, rho: f64) -> Self {
        Self { rho, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.beta, self.kappa, self.alpha, self.xi, self.rho, self.x0, self.v0]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("model parameters must be finite"));
        }
        if !(-1.0..=1.0).contains(&self.rho) {
            return Err(Error::domain(format!("rho = {} outside [-1, 1]", self.rho)));
        }
        if self.v0 <= 0.0 {
            return Err(Error::domain(format!("v0 = {} must be positive", self.v0)));
        }
        if self.alpha <= 0.0 {
            return Err(Error::domain(format!("alpha = {} must be positive", self.alpha)));
        }
        if self.kappa < 0.0 || self.xi < 0.0 {
            return Err(Error::domain("kappa and xi must be non-negative"));
        }
        if self.kind.gamma() < 0.0 {
            return Err(Error::domain("CEV exponent must be non-negative"));
        }
        Ok(())
    }

    /// Spot vol-of-vol `tau^2` implied by the model at variance `v`.
    #[inline]
    pub fn tau2(&self, v: f64) -> f64 {
        let g = self.kind.gamma();
        if g == 0.0 {
            self.xi * self.xi
        } else {
            self.xi * self.xi * v.max(0.0).powf(2.0 * g)
        }
    }
}

/// Feller condition `2 kappa alpha >= xi^2`; only defined for Heston.
pub fn check_feller(spec: &ModelSpec) -> Result<bool> {
    match spec.kind {
        ModelKind::Heston => Ok(2.0 * spec.kappa * spec.alpha >= spec.xi * spec.xi),
        other => Err(Error::domain(format!(
            "Feller condition is defined for Heston only, got {}",
            other.label()
        ))),
    }
}

/// Observation grid and the window constant used for the latent `alpha^2` truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimGrid {
    pub n: usize,
    pub substeps: usize,
    pub c: f64,
}

impl SimGrid {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            substeps: 10,
            c: 1.0,
        }
    }

    pub fn with_substeps(self, substeps: usize) -> Self {
        Self { substeps, ..self }
    }

    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::domain(format!("n = {} must be at least 4", self.n)));
        }
        if self.substeps == 0 {
            return Err(Error::domain("substeps must be at least 1"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::domain(format!("c = {} must be positive", self.c)));
        }
        Ok(())
    }
}

/// Ground truth recorded alongside a simulated path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentTruth {
    /// `v+` at the left end of every fine step (length `n * substeps`).
    pub sigma2: Vec<f64>,
    /// Model `tau^2` at the left end of every fine step.
    pub tau2: Vec<f64>,
    pub iv_tau2: f64,
    pub iv_tau4: f64,
    pub iv_alpha2: f64,
    /// Constant `c` used for `iv_alpha2`.
    pub c: f64,
    pub substeps: usize,
    pub seed: u64,
    /// Positive-part variance at t = 1.
    pub terminal_sigma2: f64,
    /// Fraction of fine steps where the Euler proposal for `v` was negative.
    pub truncation_rate: f64,
}

impl LatentTruth {
    /// Left-point Riemann sum of `48/c^4 v^4 + 12/c^2 v^2 tau^2 + 151/70 tau^4`.
    pub fn alpha2_integral(&self, c: f64) -> f64 {
        let (a, b, d) = crate::coefficients::alpha2_weights(c);
        let dt = 1.0 / self.sigma2.len() as f64;
        self.sigma2
            .iter()
            .zip(&self.tau2)
            .map(|(&v, &t2)| {
                let v2 = v * v;
                (a * v2 * v2 + b * v2 * t2 + d * t2 * t2) * dt
            })
            .collect::<crate::sum::CompensatedSum>()
            .value()
    }

    /// Left-point Riemann sum of `g(v, tau^2)` over [0, 1].
    pub fn integral(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let dt = 1.0 / self.sigma2.len() as f64;
        self.sigma2
            .iter()
            .zip(&self.tau2)
            .map(|(&v, &t2)| g(v, t2) * dt)
            .collect::<crate::sum::CompensatedSum>()
            .value()
    }

    /// Spot variance at observation index `i`, i.e. at time `i/n`.
    pub fn sigma2_at_obs(&self, i: usize) -> f64 {
        self.sigma2
            .get(i * self.substeps)
            .copied()
            .unwrap_or(self.terminal_sigma2)
    }
}

/// An equidistant record of `n + 1` log prices on [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledPath {
    pub n: usize,
    pub x: Vec<f64>,
    pub latent: Option<LatentTruth>,
}

impl SampledPath {
    pub fn from_observations(x: Vec<f64>) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::domain("a path needs at least two observations"));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite observation at index {i}")));
        }
        Ok(Self {
            n: x.len() - 1,
            x,
            latent: None,
        })
    }

    /// Realized variance `sum (Delta X)^2` over the whole record.
    pub fn realized_variance(&self) -> f64 {
        self.x
            .windows(2)
            .map(|w| (w[1] - w[0]).powi(2))
            .collect::<crate::sum::CompensatedSum>()
            .value()
    }
}

/// Draws `(dW, dV)` pairs with variance `dt` and correlation `rho`, built as
/// `dV = rho dW + sqrt(1 - rho^2) dW_perp`.
#[derive(Debug, Clone, Copy)]
pub struct CorrelatedNormals {
    rho: f64,
    rho_perp: f64,
    scale: f64,
}

impl CorrelatedNormals {
    pub fn new(rho: f64, dt: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(Error::domain(format!("rho = {rho} outside [-1, 1]")));
        }
        Ok(Self {
            rho,
            rho_perp: (1.0 - rho * rho).sqrt(),
            scale: dt.sqrt(),
        })
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let dw = self.scale * z1;
        let dv = self.scale * (self.rho * z1 + self.rho_perp * z2);
        (dw, dv)
    }
}

/// `m` correlated increment pairs of variance `dt` from the stream seeded by `seed`.
pub fn correlated_increments(rho: f64, m: usize, dt: f64, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let gen = CorrelatedNormals::new(rho, dt)?;
    let mut rng = rng::seeded(seed);
    let (dw, dv) = (0..m).map(|_| gen.sample(&mut rng)).unzip();
    Ok((dw, dv))
}

/// Core Euler loop. `on_step(v_plus)` sees the positive-part variance at the
/// left end of every fine step. Returns observed prices, the truncation count
/// and the terminal positive-part variance.
fn euler<R: Rng + ?Sized>(
    spec: &ModelSpec,
    grid: &SimGrid,
    rng: &mut R,
    mut on_step: impl FnMut(f64),
) -> Result<(Vec<f64>, usize, f64)> {
    spec.validate()?;
    grid.validate()?;
    let steps = grid.n * grid.substeps;
    let dt = 1.0 / steps as f64;
    let normals = CorrelatedNormals::new(spec.rho, dt)?;
    let gamma = spec.kind.gamma();
    let half = if spec.convexity { 0.5 } else { 0.0 };

    let mut x = Vec::with_capacity(grid.n + 1);
    let mut xt = spec.x0;
    let mut v = spec.v0;
    let mut truncated = 0usize;
    x.push(xt);
    for _ in 0..grid.n {
        for _ in 0..grid.substeps {
            let vp = v.max(0.0);
            on_step(vp);
            let (dw, dv) = normals.sample(rng);
            let vol_of_var = if gamma == 0.5 {
                vp.sqrt()
            } else if gamma == 0.0 {
                1.0
            } else if gamma == 1.0 {
                vp
            } else {
                vp.powf(gamma)
            };
            xt += (spec.beta - half * vp) * dt + vp.sqrt() * dw;
            v += spec.kappa * (spec.alpha - vp) * dt + spec.xi * vol_of_var * dv;
            if v < 0.0 {
                truncated += 1;
            }
        }
        x.push(xt);
    }
    Ok((x, truncated, v.max(0.0)))
}

/// Simulates a path with full latent truth from an explicit generator.
pub fn simulate_with<R: Rng + ?Sized>(spec: &ModelSpec, grid: &SimGrid, seed: u64, rng: &mut R) -> Result<SampledPath> {
    let steps = grid.n.saturating_mul(grid.substeps);
    let mut sigma2 = Vec::with_capacity(steps);
    let (x, truncated, terminal) = euler(spec, grid, rng, |vp| sigma2.push(vp))?;
    let tau2: Vec<f64> = sigma2.iter().map(|&v| spec.tau2(v)).collect();
    let mut latent = LatentTruth {
        sigma2,
        tau2,
        iv_tau2: 0.0,
        iv_tau4: 0.0,
        iv_alpha2: 0.0,
        c: grid.c,
        substeps: grid.substeps,
        seed,
        terminal_sigma2: terminal,
        truncation_rate: truncated as f64 / steps as f64,
    };
    latent.iv_tau2 = latent.integral(|_, t2| t2);
    latent.iv_tau4 = latent.integral(|_, t2| t2 * t2);
    latent.iv_alpha2 = latent.alpha2_integral(grid.c);
    Ok(SampledPath {
        n: grid.n,
        x,
        latent: Some(latent),
    })
}

/// Simulates a path with latent truth, seeded directly by `seed`.
pub fn simulate(spec: &ModelSpec, grid: &SimGrid, seed: u64) -> Result<SampledPath> {
    simulate_with(spec, grid, seed, &mut rng::seeded(seed))
}

/// Observed prices only; the fast path used by bootstrap replications.
pub fn simulate_observed(spec: &ModelSpec, grid: &SimGrid, rng: &mut StreamRng) -> Result<SampledPath> {
    let (x, _, _) = euler(spec, grid, rng, |_| {})?;
    Ok(SampledPath {
        n: grid.n,
        x,
        latent: None,
    })
}
