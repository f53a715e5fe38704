//! `volvol` command-line entry point.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use volvol::error::{Error, Result};
use volvol::gof::{bootstrap_test, BootstrapConfig, GofConfig, Tau2Fn};
use volvol::io::{emit_report, ingest_csv, write_path_csv, write_spot_csv, Emit, Format, PathSidecar, TableReport};
use volvol::mc::{compare_to_reference, run_experiment, ExperimentSpec, Reference, Table};
use volvol::rng::child_seed;
use volvol::sim::{simulate, ModelKind, ModelSpec, SampledPath, SimGrid};
use volvol::spot::{EstimatorConfig, SpotSeries};
use volvol::{coefficients, volvol::estimate};

const EXIT_VALIDATION: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

fn long_version() -> &'static str {
    let text = format!("{}\n{}", env!("CARGO_PKG_VERSION"), coefficients::describe());
    Box::leak(text.into_boxed_str())
}

#[derive(Parser, Debug)]
#[command(name = "volvol", version, long_version = long_version(), about = "Integrated vol-of-vol estimation and goodness-of-fit testing")]
struct Cli {
    /// Worker threads for parallel work (0 = all cores).
    #[arg(long, global = true, env = "VOLVOL_THREADS", default_value_t = 0)]
    threads: usize,

    /// Suppress human-readable summaries on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate a price path and write it as CSV with a JSON sidecar.
    Simulate(SimulateArgs),
    /// Dump the sliding-window spot variance and quarticity.
    Spot(SpotArgs),
    /// Estimate the integrated vol-of-vol with a feasible confidence interval.
    Estimate(EstimateArgs),
    /// Bootstrap goodness-of-fit test for a parametric vol-of-vol shape.
    Test(TestArgs),
    /// Monte Carlo reproduction of a simulation table.
    Mc(McArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Correlation between price and variance shocks.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho: f64,
    /// Override the vol-of-vol scale.
    #[arg(long)]
    xi: Option<f64>,
    /// Euler substeps per observation interval.
    #[arg(long, default_value_t = 10)]
    substeps: usize,
}

impl ModelArgs {
    fn spec(&self, model: &str) -> Result<ModelSpec> {
        let kind: ModelKind = model.parse()?;
        let mut spec = match kind {
            ModelKind::Heston => ModelSpec::heston_reference(),
            other => ModelSpec::cev_alternative(other.gamma()),
        }
        .with_rho(self.rho);
        if let Some(xi) = self.xi {
            spec.xi = xi;
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args, Debug, Clone)]
struct WindowArgs {
    /// Window constant: k_n = floor(c sqrt(n)).
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Fixed window length; overrides --c.
    #[arg(long)]
    k: Option<usize>,
}

impl WindowArgs {
    fn config(&self) -> EstimatorConfig {
        match self.k {
            Some(k) => EstimatorConfig::with_k(k),
            None => EstimatorConfig::with_c(self.c),
        }
    }
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false, id = "source")]
struct SourceArgs {
    /// Price CSV (`time,x`, `x`, or with a header naming these columns).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Simulate the input path instead: heston | vasicek | cev:<gamma>.
    #[arg(long)]
    simulate: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct SimSourceArgs {
    /// Observations for --simulate.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// heston | vasicek | cev:<gamma>.
    #[arg(long, default_value = "heston")]
    model: String,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: ModelArgs,
    /// Window constant recorded for the latent alpha^2 integral.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Output CSV (stdout when omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// JSON sidecar path; defaults to the CSV path with a `.json` extension.
    #[arg(long)]
    sidecar: Option<PathBuf>,
    /// Leave out the latent sigma^2 column.
    #[arg(long)]
    no_sigma2: bool,
}

#[derive(Args, Debug)]
struct SpotArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    sim: SimSourceArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    sim: SimSourceArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    window: WindowArgs,
    /// Horizon in rescaled time, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Confidence level of the interval.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    sim: SimSourceArgs,
    /// Hypothesized shape: heston | cev:<gamma> | constant.
    #[arg(long, default_value = "heston")]
    model: String,
    /// Bootstrap replications.
    #[arg(long = "B", default_value_t = 200)]
    b: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nominal level of the test.
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// Left edge of the supremum range.
    #[arg(long, default_value_t = 0.1)]
    t_min: f64,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct McArgs {
    /// t1 .. t6.
    #[arg(long)]
    table: String,
    #[arg(long)]
    reps: Option<usize>,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    /// CEV exponent of the alternative in t6 (0 or 1).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "B")]
    b: Option<usize>,
    /// Published sizes and replication counts.
    #[arg(long)]
    full_scale: bool,
    /// Tolerance of the reference comparison in combined standard errors.
    #[arg(long, default_value_t = 3.0)]
    k_sigma: f64,
    /// Table-layout CSV (stdout when omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// JSON comparison report.
    #[arg(long)]
    compare: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_degenerate() {
                EXIT_DEGENERATE
            } else {
                EXIT_VALIDATION
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Error::Domain(e.to_string()))?;
    }
    let quiet = cli.quiet;
    match cli.command {
        Command::Simulate(a) => cmd_simulate(a, quiet),
        Command::Spot(a) => cmd_spot(a),
        Command::Estimate(a) => cmd_estimate(a, quiet),
        Command::Test(a) => cmd_test(a, quiet),
        Command::Mc(a) => cmd_mc(a, quiet),
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_bytes(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let mut w = sink(out)?;
    w.write_all(bytes)?;
    w.flush()?;
    Ok(())
}

fn load_path(source: &SourceArgs, sim: &SimSourceArgs, seed: u64, c: f64, quiet: bool) -> Result<SampledPath> {
    match (&source.input, &source.simulate) {
        (Some(p), None) => {
            let ing = ingest_csv(p)?;
            if let (Some((a, b)), false) = (ing.window, quiet) {
                eprintln!("observation window [{a}, {b}] rescaled to [0, 1]; integrals are per rescaled unit");
            }
            Ok(ing.path)
        }
        (None, Some(model)) => {
            let spec = sim.model.spec(model)?;
            let grid = SimGrid::new(sim.n).with_substeps(sim.model.substeps).with_c(c);
            simulate(&spec, &grid, seed)
        }
        _ => Err(Error::Domain(
            "exactly one of --input and --simulate is required".into(),
        )),
    }
}

fn cmd_simulate(a: SimulateArgs, quiet: bool) -> Result<()> {
    let spec = a.params.spec(&a.model)?;
    let grid = SimGrid::new(a.n).with_substeps(a.params.substeps).with_c(a.c);
    let path = simulate(&spec, &grid, a.seed)?;
    let mut w = sink(a.out.as_deref())?;
    write_path_csv(&mut w, &path, !a.no_sigma2)?;
    w.flush()?;
    let sidecar_path = a
        .sidecar
        .clone()
        .or_else(|| a.out.as_ref().map(|p| p.with_extension("json")));
    if let (Some(sp), Some(meta)) = (sidecar_path, PathSidecar::new(&path, &spec)) {
        let mut bytes = serde_json::to_vec_pretty(&meta)?;
        bytes.push(b'\n');
        std::fs::write(sp, bytes)?;
        if !quiet && meta.feller == Some(false) {
            eprintln!("note: Feller condition fails; variance is truncated at zero");
        }
    }
    Ok(())
}

fn cmd_spot(a: SpotArgs) -> Result<()> {
    let cfg = a.window.config();
    let path = load_path(&a.source, &a.sim, a.seed, a.window.c, true)?;
    let spot = SpotSeries::compute(&path, &cfg)?;
    let mut w = sink(a.out.as_deref())?;
    write_spot_csv(&mut w, &spot)?;
    w.flush()?;
    Ok(())
}

fn cmd_estimate(a: EstimateArgs, quiet: bool) -> Result<()> {
    let format: Format = a.format.parse()?;
    if !(a.level > 0.0 && a.level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {}", a.level)));
    }
    let cfg = a.window.config().horizon(a.t);
    let path = load_path(&a.source, &a.sim, a.seed, a.window.c, quiet)?;
    let report = estimate(&path, &cfg, a.level)?;
    write_bytes(a.out.as_deref(), &emit_report(&report, format)?)?;
    if !quiet && format != Format::Text {
        eprint!("{}", String::from_utf8_lossy(&emit_report(&report, Format::Text)?));
    }
    Ok(())
}

fn cmd_test(a: TestArgs, quiet: bool) -> Result<()> {
    let format: Format = a.format.parse()?;
    if !(a.level > 0.0 && a.level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {}", a.level)));
    }
    let shape: Tau2Fn = a.model.parse()?;
    let path = load_path(&a.source, &a.sim, a.seed, a.window.c, quiet)?;
    let cfg = GofConfig {
        estimator: a.window.config(),
        t_min: a.t_min,
    };
    let boot = BootstrapConfig {
        b: a.b,
        seed: child_seed(a.seed, &[1]),
        substeps: a.sim.model.substeps,
    };
    let report = bootstrap_test(&path, &shape, &boot, &cfg)?;
    write_bytes(a.out.as_deref(), &emit_report(&report, format)?)?;
    let verdict = match report.rejects(a.level) {
        Some(true) => format!("REJECT {} at level {}", report.shape, a.level),
        Some(false) => format!("do not reject {} at level {}", report.shape, a.level),
        None => "no valid bootstrap draws; no verdict".to_string(),
    };
    if !quiet {
        let p = report.p_value.map_or_else(|| "NA".to_string(), |p| format!("{p:.4}"));
        eprintln!("Y_n = {:.6}, p-value = {p}: {verdict}", report.y_n);
    }
    if report.p_value.is_none() {
        return Err(Error::DegenerateStudentization);
    }
    Ok(())
}

fn cmd_mc(a: McArgs, quiet: bool) -> Result<()> {
    let table: Table = a.table.parse()?;
    let mut spec = if a.full_scale {
        ExperimentSpec::full_scale(table)
    } else {
        ExperimentSpec::desk(table)
    };
    if let Some(r) = a.reps {
        spec.reps = r;
    }
    if let Some(n) = a.n {
        spec.n_list = n;
    }
    if let Some(rho) = a.rho {
        spec.model = spec.model.with_rho(rho);
    }
    if let Some(g) = a.gamma {
        if table != Table::T6Power {
            return Err(Error::Domain("--gamma applies to t6 only".into()));
        }
        spec.model = ModelSpec::cev_alternative(g).with_rho(spec.model.rho);
    }
    if let Some(s) = a.seed {
        spec.master_seed = s;
    }
    if let Some(b) = a.b {
        spec.b = b;
    }
    let rows = run_experiment(&spec)?;
    let report = TableReport {
        table: table.id().to_string(),
        rows,
    };
    write_bytes(a.out.as_deref(), &emit_report(&report, Format::Csv)?)?;
    if !quiet {
        eprint!("{}", report.text());
    }
    if let Some(p) = a.compare {
        let cmp = compare_to_reference(&report.rows, Reference::for_spec(&spec)?, a.k_sigma)?;
        let doc = serde_json::json!({ "spec": spec, "rows": report.rows, "comparison": cmp });
        let mut bytes = serde_json::to_vec_pretty(&doc)?;
        bytes.push(b'\n');
        std::fs::write(p, bytes)?;
        if !quiet {
            eprintln!(
                "{} of {} cells within {} se",
                cmp.cells.iter().filter(|c| c.pass).count(),
                cmp.cells.len(),
                cmp.k_sigma
            );
        }
    }
    Ok(())
}
