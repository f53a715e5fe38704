//! Monte Carlo harness for the simulation tables.
//!
//! Replication `r` at sample size `n` always draws from the stream keyed by
//! `(master_seed, n, r)`. Replications run on the rayon pool and their
//! outcomes are collected in index order before aggregation, so every table
//! is bit-identical for any thread count or schedule.

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gof::{bootstrap_test, BootstrapConfig, GofConfig, Tau2Fn};
use crate::normal;
use crate::reference::{self, CltRow, RejectionRow, CLT_PROBS, TEST_LEVELS};
use crate::rng;
use crate::sim::{simulate_observed, simulate_with, ModelSpec, SimGrid};
use crate::spot::{eighth_power_sums, EstimatorConfig, SpotSeries};
use crate::volvol::{self, c_hat, g_stats, t_hat, tau2_series, uncorrected_v_hat, v_hat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Table {
    T1Infeasible,
    T2InfeasibleRho,
    T3Feasible,
    T4FeasibleRho,
    T5Level,
    T6Power,
}

impl Table {
    pub fn is_clt(self) -> bool {
        !matches!(self, Table::T5Level | Table::T6Power)
    }

    pub fn is_feasible(self) -> bool {
        matches!(self, Table::T3Feasible | Table::T4FeasibleRho)
    }

    pub fn id(self) -> &'static str {
        match self {
            Table::T1Infeasible => "t1",
            Table::T2InfeasibleRho => "t2",
            Table::T3Feasible => "t3",
            Table::T4FeasibleRho => "t4",
            Table::T5Level => "t5",
            Table::T6Power => "t6",
        }
    }
}

impl FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" | "1" => Ok(Table::T1Infeasible),
            "t2" | "2" => Ok(Table::T2InfeasibleRho),
            "t3" | "3" => Ok(Table::T3Feasible),
            "t4" | "4" => Ok(Table::T4FeasibleRho),
            "t5" | "5" => Ok(Table::T5Level),
            "t6" | "6" => Ok(Table::T6Power),
            _ => Err(Error::domain(format!("unknown table '{s}' (t1..t6)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub table: Table,
    pub n_list: Vec<usize>,
    pub reps: usize,
    /// Bootstrap size for the test tables.
    pub b: usize,
    pub model: ModelSpec,
    pub master_seed: u64,
    /// Tail probabilities (CLT tables) or nominal levels (test tables).
    pub probs: Vec<f64>,
    pub substeps: usize,
    pub gof: GofConfig,
}

impl ExperimentSpec {
    /// Desk-scale defaults: n in {2500, 10000}; 1000 replications for the
    /// CLT tables, 200 runs with B = 200 for the test tables.
    pub fn desk(table: Table) -> Self {
        let model = match table {
            Table::T1Infeasible | Table::T3Feasible | Table::T5Level => ModelSpec::heston_reference(),
            Table::T2InfeasibleRho | Table::T4FeasibleRho => ModelSpec::heston_reference().with_rho(-0.2),
            Table::T6Power => ModelSpec::cev_alternative(1.0),
        };
        Self {
            table,
            n_list: vec![2500, 10_000],
            reps: if table.is_clt() { 1000 } else { 200 },
            b: 200,
            model,
            master_seed: 20_240_601,
            probs: if table.is_clt() {
                CLT_PROBS.to_vec()
            } else {
                TEST_LEVELS.to_vec()
            },
            substeps: 10,
            gof: GofConfig::default(),
        }
    }

    /// Settings of the published tables: all five sample sizes, 10,000
    /// replications (CLT) or 500 runs with B = 200 (tests).
    pub fn full_scale(table: Table) -> Self {
        Self {
            n_list: reference::N_LIST.to_vec(),
            reps: if table.is_clt() {
                reference::CLT_REPS
            } else {
                reference::TEST_RUNS
            },
            ..Self::desk(table)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.reps == 0 {
            return Err(Error::domain("reps must be at least 1"));
        }
        if self.n_list.is_empty() {
            return Err(Error::domain("n_list is empty"));
        }
        for &n in &self.n_list {
            if n < 16 {
                return Err(Error::domain(format!("n = {n} below 16")));
            }
            self.gof.estimator.k_n(n)?;
        }
        if !self.table.is_clt() && self.b == 0 {
            return Err(Error::domain("bootstrap size must be at least 1"));
        }
        if self.probs.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
            return Err(Error::domain("probabilities must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Per-replication estimates for one simulated path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltReplication {
    pub n: usize,
    pub k_n: usize,
    pub v_hat: f64,
    pub uncorrected_v_hat: f64,
    pub c_hat: f64,
    pub t_hat: f64,
    /// `(1/n) sum_{i=1}^{n-2k}` of the local `alpha^2` estimates.
    pub alpha2_mean: f64,
    pub iv_tau2: f64,
    pub iv_tau4: f64,
    pub iv_alpha2: f64,
}

impl CltReplication {
    /// Standardized by the latent conditional variance.
    pub fn infeasible(&self) -> f64 {
        (self.n as f64 / self.k_n as f64).sqrt() * (self.v_hat - self.iv_tau2) / self.iv_alpha2.sqrt()
    }

    /// Standardized by the estimated conditional variance.
    pub fn feasible(&self) -> Result<f64> {
        volvol::feasible_stat(self.v_hat, self.c_hat, self.iv_tau2, self.n, self.k_n)
    }
}

/// Simulates replication `rep` at size `n` and evaluates all estimators at t = 1.
pub fn clt_replication(
    model: &ModelSpec,
    n: usize,
    substeps: usize,
    cfg: &EstimatorConfig,
    master_seed: u64,
    rep: usize,
) -> Result<CltReplication> {
    let cfg = cfg.horizon(1.0);
    let grid = SimGrid {
        n,
        substeps,
        c: cfg.effective_c(n)?,
    };
    let key = [n as u64, rep as u64];
    let mut stream = rng::stream(master_seed, &key);
    let path = simulate_with(model, &grid, rng::stream_id(&key), &mut stream)?;
    let latent = path.latent.as_ref().expect("simulated paths carry latent truth");
    let spot = SpotSeries::compute(&path, &cfg)?;
    let (n, k) = (spot.n, spot.k_n);
    let g = g_stats(&spot, &cfg)?;
    let tau2 = tau2_series(&spot);
    let p8 = eighth_power_sums(&path.x, k);
    let alpha2 = crate::gof::alpha2_series(&spot, &tau2, &p8);
    let alpha2_mean = crate::sum::sum(&alpha2[1..]) / n as f64;
    Ok(CltReplication {
        n,
        k_n: k,
        v_hat: v_hat(&spot, &cfg)?,
        uncorrected_v_hat: uncorrected_v_hat(&spot, &cfg)?,
        c_hat: c_hat(&g, n, k),
        t_hat: t_hat(&g, n, k),
        alpha2_mean,
        iv_tau2: latent.iv_tau2,
        iv_tau4: latent.iv_tau4,
        iv_alpha2: latent.iv_alpha2,
    })
}

/// Runs `reps` replications of `f` on the current rayon pool, in index order.
pub fn replicate<T, F>(reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..reps).into_par_iter().map(f).collect()
}

/// Outcome of one bootstrap test run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TestOutcome {
    PValue(f64),
    /// The statistic or the bootstrap could not be formed.
    Aborted,
}

pub fn test_replication(spec: &ExperimentSpec, n: usize, rep: usize) -> Result<TestOutcome> {
    let grid = SimGrid {
        n,
        substeps: spec.substeps,
        c: 1.0,
    };
    let mut stream = rng::stream(spec.master_seed, &[n as u64, rep as u64]);
    let path = simulate_observed(&spec.model, &grid, &mut stream)?;
    let boot = BootstrapConfig {
        b: spec.b,
        seed: rng::child_seed(spec.master_seed, &[n as u64, rep as u64, 1]),
        substeps: spec.substeps,
    };
    match bootstrap_test(&path, &Tau2Fn::heston(), &boot, &spec.gof) {
        Ok(report) => Ok(report.p_value.map_or(TestOutcome::Aborted, TestOutcome::PValue)),
        Err(e) if e.is_degenerate() => Ok(TestOutcome::Aborted),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub k_n: usize,
    pub reps: usize,
    /// Mean and variance of the statistic (CLT tables only).
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub mean_se: Option<f64>,
    pub variance_se: Option<f64>,
    pub probs: Vec<f64>,
    /// Tail coverage (CLT tables) or rejection rate (test tables) per entry of `probs`.
    pub rates: Vec<f64>,
    /// Replications where the statistic could not be formed.
    pub discarded: usize,
    pub wall_time_secs: f64,
}

impl TableRow {
    /// Replications entering `rates`.
    pub fn effective_reps(&self) -> usize {
        self.reps - self.discarded
    }

    pub fn without_timing(&self) -> Self {
        Self {
            wall_time_secs: 0.0,
            ..self.clone()
        }
    }
}

/// Mean, unbiased variance and their standard errors (plain for the mean,
/// jackknife for the variance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
}

pub fn moments(xs: &[f64]) -> Moments {
    let count = xs.len();
    let m = count as f64;
    let mean = crate::sum::sum(xs) / m;
    if count < 3 {
        return Moments {
            count,
            mean,
            variance: f64::NAN,
            mean_se: f64::NAN,
            variance_se: f64::NAN,
        };
    }
    let centered: Vec<f64> = xs.iter().map(|x| x - mean).collect();
    let s1 = crate::sum::sum(&centered);
    let s2 = centered
        .iter()
        .map(|d| d * d)
        .collect::<crate::sum::CompensatedSum>()
        .value();
    let variance = (s2 - s1 * s1 / m) / (m - 1.0);
    let loo: Vec<f64> = centered
        .iter()
        .map(|&d| {
            let a = s1 - d;
            let b = s2 - d * d;
            (b - a * a / (m - 1.0)) / (m - 2.0)
        })
        .collect();
    let loo_mean = crate::sum::sum(&loo) / m;
    let jk = loo.iter().map(|v| (v - loo_mean).powi(2)).sum::<f64>() * (m - 1.0) / m;
    Moments {
        count,
        mean,
        variance,
        mean_se: (variance / m).sqrt(),
        variance_se: jk.sqrt(),
    }
}

fn clt_row(n: usize, k: usize, stats: &[Option<f64>], probs: &[f64], secs: f64) -> TableRow {
    let kept: Vec<f64> = stats.iter().flatten().copied().collect();
    let mo = moments(&kept);
    let denom = kept.len().max(1) as f64;
    let rates = probs
        .iter()
        .map(|&p| {
            let q = normal::quantile(p);
            kept.iter().filter(|&&z| z < q).count() as f64 / denom
        })
        .collect();
    TableRow {
        n,
        k_n: k,
        reps: stats.len(),
        mean: Some(mo.mean),
        variance: Some(mo.variance),
        mean_se: Some(mo.mean_se),
        variance_se: Some(mo.variance_se),
        probs: probs.to_vec(),
        rates,
        discarded: stats.len() - kept.len(),
        wall_time_secs: secs,
    }
}

fn test_row(n: usize, k: usize, outcomes: &[TestOutcome], probs: &[f64], count_aborted: bool, secs: f64) -> TableRow {
    let aborted = outcomes.iter().filter(|o| matches!(o, TestOutcome::Aborted)).count();
    let denom = if count_aborted {
        outcomes.len()
    } else {
        outcomes.len() - aborted
    }
    .max(1) as f64;
    let rates = probs
        .iter()
        .map(|&level| {
            let rejected = outcomes
                .iter()
                .filter(|o| match o {
                    TestOutcome::PValue(p) => *p <= level,
                    TestOutcome::Aborted => count_aborted,
                })
                .count();
            rejected as f64 / denom
        })
        .collect();
    TableRow {
        n,
        k_n: k,
        reps: outcomes.len(),
        mean: None,
        variance: None,
        mean_se: None,
        variance_se: None,
        probs: probs.to_vec(),
        rates,
        discarded: aborted,
        wall_time_secs: secs,
    }
}

/// Per-replication raw results of one table row.
#[derive(Debug, Clone, PartialEq)]
pub enum RowSamples {
    Clt(Vec<Option<f64>>),
    Test(Vec<TestOutcome>),
}

/// Computes the raw per-replication statistics for size `n`.
pub fn row_samples(spec: &ExperimentSpec, n: usize) -> Result<RowSamples> {
    let est = spec.gof.estimator;
    if spec.table.is_clt() {
        let feasible = spec.table.is_feasible();
        let stats = replicate(spec.reps, |rep| {
            let r = clt_replication(&spec.model, n, spec.substeps, &est, spec.master_seed, rep)?;
            Ok(if feasible {
                r.feasible().ok()
            } else {
                Some(r.infeasible())
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(RowSamples::Clt(stats))
    } else {
        let outcomes = replicate(spec.reps, |rep| test_replication(spec, n, rep))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(RowSamples::Test(outcomes))
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<TableRow>> {
    spec.validate()?;
    spec.n_list
        .iter()
        .map(|&n| {
            let started = Instant::now();
            let k = spec.gof.estimator.k_n(n)?;
            let samples = row_samples(spec, n)?;
            Ok(summarize(spec, n, k, &samples, started.elapsed().as_secs_f64()))
        })
        .collect()
}

/// Aggregates raw samples into a table row. Aborted test runs count as
/// rejections in the power table and are left out of the level table.
pub fn summarize(spec: &ExperimentSpec, n: usize, k: usize, samples: &RowSamples, secs: f64) -> TableRow {
    match samples {
        RowSamples::Clt(stats) => clt_row(n, k, stats, &spec.probs, secs),
        RowSamples::Test(outcomes) => test_row(n, k, outcomes, &spec.probs, spec.table == Table::T6Power, secs),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    pub column: String,
    pub observed: f64,
    pub reference: f64,
    pub se: f64,
    pub z_score: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub k_sigma: f64,
    pub cells: Vec<Cell>,
    pub all_pass: bool,
}

/// Published row(s) a table is compared against.
#[derive(Debug, Clone, Copy)]
pub enum Reference<'a> {
    Clt { rows: &'a [CltRow], reps: usize },
    Rejection { rows: &'a [RejectionRow], runs: usize },
}

impl Reference<'static> {
    /// Published reference for an experiment; the power table is picked by
    /// the CEV exponent of the simulated model.
    pub fn for_spec(spec: &ExperimentSpec) -> Result<Self> {
        let clt = |rows: &'static [CltRow]| Reference::Clt {
            rows,
            reps: reference::CLT_REPS,
        };
        let rej = |rows: &'static [RejectionRow]| Reference::Rejection {
            rows,
            runs: reference::TEST_RUNS,
        };
        Ok(match spec.table {
            Table::T1Infeasible => clt(&reference::TABLE1),
            Table::T2InfeasibleRho => clt(&reference::TABLE2),
            Table::T3Feasible => clt(&reference::TABLE3),
            Table::T4FeasibleRho => clt(&reference::TABLE4),
            Table::T5Level => rej(&reference::TABLE5),
            Table::T6Power => match spec.model.kind.gamma() {
                0.0 => rej(&reference::TABLE6_GAMMA0),
                1.0 => rej(&reference::TABLE6_GAMMA1),
                g => return Err(Error::domain(format!("no published power table for gamma = {g}"))),
            },
        })
    }
}

fn binomial_se(p: f64, m: usize) -> f64 {
    (p * (1.0 - p) / m.max(1) as f64).sqrt()
}

fn cell(n: usize, column: String, observed: f64, reference: f64, se: f64, k_sigma: f64) -> Cell {
    let diff = observed - reference;
    let z_score = if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Cell {
        n,
        column,
        observed,
        reference,
        se,
        z_score,
        pass: z_score.abs() <= k_sigma,
    }
}

/// Cell-by-cell comparison with Monte-Carlo-aware tolerances: a cell passes
/// when it lies within `k_sigma` combined standard errors of the reference
/// (binomial for rates, plain/jackknife for mean/variance, each combined in
/// quadrature with the reference's own sampling error).
pub fn compare_to_reference(rows: &[TableRow], reference: Reference<'_>, k_sigma: f64) -> Result<Comparison> {
    let mut cells = Vec::new();
    for row in rows {
        let m = row.effective_reps();
        match reference {
            Reference::Clt { rows: refs, reps } => {
                let r = reference::clt_row(refs, row.n)
                    .ok_or_else(|| Error::domain(format!("no reference row for n = {}", row.n)))?;
                let (mean, var) = row
                    .mean
                    .zip(row.variance)
                    .ok_or_else(|| Error::domain("CLT comparison needs mean and variance"))?;
                let ref_mean_se = (r.variance / reps as f64).sqrt();
                let ref_var_se = r.variance * (2.0 / (reps as f64 - 1.0)).sqrt();
                let se = row.mean_se.unwrap_or(0.0).hypot(ref_mean_se);
                cells.push(cell(row.n, "mean".into(), mean, r.mean, se, k_sigma));
                let se = row.variance_se.unwrap_or(0.0).hypot(ref_var_se);
                cells.push(cell(row.n, "variance".into(), var, r.variance, se, k_sigma));
                push_rates(&mut cells, row, &CLT_PROBS, &r.coverage, m, reps, k_sigma)?;
            }
            Reference::Rejection { rows: refs, runs } => {
                let r = reference::rejection_row(refs, row.n)
                    .ok_or_else(|| Error::domain(format!("no reference row for n = {}", row.n)))?;
                push_rates(&mut cells, row, &TEST_LEVELS, &r.rates, m, runs, k_sigma)?;
            }
        }
    }
    let all_pass = cells.iter().all(|c| c.pass);
    Ok(Comparison {
        k_sigma,
        cells,
        all_pass,
    })
}

fn push_rates(
    cells: &mut Vec<Cell>,
    row: &TableRow,
    ref_probs: &[f64],
    ref_rates: &[f64],
    m: usize,
    ref_m: usize,
    k_sigma: f64,
) -> Result<()> {
    if row.probs.len() != row.rates.len() {
        return Err(Error::domain("row probabilities and rates differ in length"));
    }
    for (&p, &obs) in row.probs.iter().zip(&row.rates) {
        let idx = ref_probs
            .iter()
            .position(|&q| (q - p).abs() < 1e-12)
            .ok_or_else(|| Error::domain(format!("probability {p} has no reference column")))?;
        let r = ref_rates[idx];
        let se = binomial_se(r, m).hypot(binomial_se(r, ref_m));
        cells.push(cell(row.n, format!("{p}"), obs, r, se, k_sigma));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_from(r: &CltRow, reps: usize) -> TableRow {
        TableRow {
            n: r.n,
            k_n: 100,
            reps,
            mean: Some(r.mean),
            variance: Some(r.variance),
            mean_se: Some(0.03),
            variance_se: Some(0.05),
            probs: CLT_PROBS.to_vec(),
            rates: r.coverage.to_vec(),
            discarded: 0,
            wall_time_secs: 0.0,
        }
    }

    #[test]
    fn identical_rows_pass() {
        let rows: Vec<_> = reference::TABLE1.iter().map(|r| row_from(r, 1000)).collect();
        let cmp = compare_to_reference(
            &rows,
            Reference::Clt {
                rows: &reference::TABLE1,
                reps: 10_000,
            },
            3.0,
        )
        .unwrap();
        assert!(cmp.all_pass);
        assert_eq!(cmp.cells.len(), 5 * 8);
    }

    #[test]
    fn coverage_off_by_four_se_fails() {
        let r = reference::TABLE1[1];
        let mut row = row_from(&r, 1000);
        let p = r.coverage[0];
        let se = binomial_se(p, 1000).hypot(binomial_se(p, 10_000));
        row.rates[0] = p + 4.0 * se;
        let cmp = compare_to_reference(
            &[row],
            Reference::Clt {
                rows: &reference::TABLE1,
                reps: 10_000,
            },
            3.0,
        )
        .unwrap();
        assert!(!cmp.all_pass);
        let bad: Vec<_> = cmp.cells.iter().filter(|c| !c.pass).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].column, "0.025");
        assert!((bad[0].z_score - 4.0).abs() < 1e-9);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let mut row = row_from(&reference::TABLE1[0], 100);
        row.n = 1234;
        assert!(compare_to_reference(
            &[row.clone()],
            Reference::Clt {
                rows: &reference::TABLE1,
                reps: 10_000
            },
            3.0
        )
        .is_err());
        row.n = 2500;
        row.rates.pop();
        assert!(compare_to_reference(
            &[row],
            Reference::Clt {
                rows: &reference::TABLE1,
                reps: 10_000
            },
            3.0
        )
        .is_err());
    }

    #[test]
    fn moments_match_direct_formulas() {
        let xs: Vec<f64> = (0..50).map(|i| ((i * 7919) % 97) as f64 / 10.0).collect();
        let mo = moments(&xs);
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
        assert!((mo.mean - mean).abs() < 1e-12);
        assert!((mo.variance - var).abs() < 1e-12);
        // brute-force jackknife
        let loo: Vec<f64> = (0..xs.len())
            .map(|j| {
                let rest: Vec<f64> = xs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, v)| *v)
                    .collect();
                let mm = rest.iter().sum::<f64>() / (m - 1.0);
                rest.iter().map(|x| (x - mm).powi(2)).sum::<f64>() / (m - 2.0)
            })
            .collect();
        let lm = loo.iter().sum::<f64>() / m;
        let jk = (loo.iter().map(|v| (v - lm).powi(2)).sum::<f64>() * (m - 1.0) / m).sqrt();
        assert!((mo.variance_se - jk).abs() < 1e-10);
    }

    #[test]
    fn single_replication_smoke_run() {
        let spec = ExperimentSpec {
            reps: 1,
            n_list: vec![400],
            ..ExperimentSpec::desk(Table::T1Infeasible)
        };
        let rows = run_experiment(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].k_n, 20);
        assert!(rows[0].rates.iter().all(|&r| r == 0.0 || r == 1.0));
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = ExperimentSpec::desk(Table::T3Feasible);
        spec.reps = 0;
        assert!(run_experiment(&spec).is_err());
        let spec = ExperimentSpec {
            n_list: vec![9],
            ..ExperimentSpec::desk(Table::T3Feasible)
        };
        assert!(run_experiment(&spec).is_err());
        assert!("t9".parse::<Table>().is_err());
        assert_eq!("T4".parse::<Table>().unwrap(), Table::T4FeasibleRho);
    }

    #[test]
    fn aborted_runs_count_as_rejections_only_for_power() {
        let outcomes = [
            TestOutcome::PValue(0.01),
            TestOutcome::Aborted,
            TestOutcome::PValue(0.5),
            TestOutcome::PValue(0.2),
        ];
        let level = test_row(100, 5, &outcomes, &[0.05], false, 0.0);
        assert!((level.rates[0] - 1.0 / 3.0).abs() < 1e-15);
        let power = test_row(100, 5, &outcomes, &[0.05], true, 0.0);
        assert_eq!(power.rates[0], 0.5);
        assert_eq!(power.discarded, 1);
    }
}
