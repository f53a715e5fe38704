//! CSV ingestion and report rendering.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gof::GofReport;
use crate::mc::TableRow;
use crate::sim::{check_feller, ModelSpec, SampledPath};
use crate::spot::SpotSeries;
use crate::volvol::VolvolReport;

/// Relative tolerance on the spacing of observation times.
pub const EQUIDISTANCE_TOL: f64 = 1e-9;
pub const MIN_ROWS: usize = 5;

/// A price record read from CSV, rescaled to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub path: SampledPath,
    /// Original observation window when a time column was present.
    pub window: Option<(f64, f64)>,
}

pub fn ingest_csv(path: impl AsRef<Path>) -> Result<Ingested> {
    let file = std::fs::File::open(path)?;
    ingest_reader(file)
}

/// Reads `time,x` or `x` columns, with or without a header line. With a
/// header, the columns named `x` and `time` (or `t`) are used and others are
/// ignored. Row numbers in errors count data rows from 1.
pub fn ingest_reader(reader: impl Read) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut records = rdr.records().peekable();

    let first = match records.peek() {
        Some(Ok(r)) => r.clone(),
        Some(Err(_)) => return Err(records.next().unwrap().unwrap_err().into()),
        None => {
            return Err(Error::Ingest {
                row: 0,
                msg: "empty file".into(),
            })
        }
    };
    let is_header = first.iter().any(|f| f.parse::<f64>().is_err());
    let (time_col, x_col) = if is_header {
        records.next();
        let find = |names: &[&str]| {
            first
                .iter()
                .position(|h| names.iter().any(|n| h.eq_ignore_ascii_case(n)))
        };
        let x = find(&["x", "price", "logprice", "log_price"]).ok_or_else(|| Error::Ingest {
            row: 0,
            msg: "header has no 'x' column".into(),
        })?;
        (find(&["time", "t"]), x)
    } else {
        match first.len() {
            1 => (None, 0),
            2 => (Some(0), 1),
            w => {
                return Err(Error::Ingest {
                    row: 1,
                    msg: format!("expected 1 or 2 columns, found {w}"),
                })
            }
        }
    };

    let mut times = Vec::new();
    let mut xs = Vec::new();
    for (idx, rec) in records.enumerate() {
        let row = idx + 1;
        let rec = rec?;
        let field = |col: usize| -> Result<f64> {
            let raw = rec.get(col).ok_or_else(|| Error::Ingest {
                row,
                msg: format!("missing column {}", col + 1),
            })?;
            let v: f64 = raw.parse().map_err(|_| Error::Ingest {
                row,
                msg: format!("cannot parse '{raw}' as a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Ingest {
                    row,
                    msg: format!("non-finite value '{raw}'"),
                });
            }
            Ok(v)
        };
        if let Some(tc) = time_col {
            times.push(field(tc)?);
        }
        xs.push(field(x_col)?);
    }
    if xs.len() < MIN_ROWS {
        return Err(Error::Ingest {
            row: xs.len(),
            msg: format!("need at least {MIN_ROWS} observations, found {}", xs.len()),
        });
    }

    let window = if time_col.is_some() {
        let step = times[1] - times[0];
        if !(step > 0.0) {
            return Err(Error::Ingest {
                row: 2,
                msg: "times must be strictly increasing".into(),
            });
        }
        for i in 1..times.len() {
            let d = times[i] - times[i - 1];
            if (d - step).abs() > EQUIDISTANCE_TOL * step {
                return Err(Error::Ingest {
                    row: i + 1,
                    msg: format!("non-equidistant time step {d} (expected {step})"),
                });
            }
        }
        Some((times[0], times[times.len() - 1]))
    } else {
        None
    };
    Ok(Ingested {
        path: SampledPath::from_observations(xs)?,
        window,
    })
}

/// Writes `index,time,x[,sigma2]` on the rescaled grid `i/n`.
pub fn write_path_csv(w: impl Write, path: &SampledPath, with_sigma2: bool) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let latent = path.latent.as_ref().filter(|_| with_sigma2);
    if latent.is_some() {
        wtr.write_record(["index", "time", "x", "sigma2"])?;
    } else {
        wtr.write_record(["index", "time", "x"])?;
    }
    let nf = path.n as f64;
    for (i, x) in path.x.iter().enumerate() {
        let mut rec = vec![i.to_string(), (i as f64 / nf).to_string(), x.to_string()];
        if let Some(lat) = latent {
            rec.push(lat.sigma2_at_obs(i).to_string());
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Metadata and latent integrals written next to a simulated CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSidecar {
    pub n: usize,
    pub substeps: usize,
    pub seed: u64,
    pub c: f64,
    pub model: ModelSpec,
    pub feller: Option<bool>,
    pub iv_tau2: f64,
    pub iv_tau4: f64,
    pub iv_alpha2: f64,
    pub truncation_rate: f64,
}

impl PathSidecar {
    pub fn new(path: &SampledPath, model: &ModelSpec) -> Option<Self> {
        path.latent.as_ref().map(|lat| Self {
            n: path.n,
            substeps: lat.substeps,
            seed: lat.seed,
            c: lat.c,
            model: *model,
            feller: check_feller(model).ok(),
            iv_tau2: lat.iv_tau2,
            iv_tau4: lat.iv_tau4,
            iv_alpha2: lat.iv_alpha2,
            truncation_rate: lat.truncation_rate,
        })
    }
}

/// Writes `t,s2,s4` for every window start.
pub fn write_spot_csv(w: impl Write, spot: &SpotSeries) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["t", "s2", "s4"])?;
    let nf = spot.n as f64;
    for (i, (a, b)) in spot.s2.iter().zip(&spot.s4).enumerate() {
        wtr.write_record([(i as f64 / nf).to_string(), a.to_string(), b.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::domain(format!("unknown format '{s}' (json | csv | text)"))),
        }
    }
}

/// Anything the CLI can render.
pub trait Emit: Serialize {
    fn csv(&self) -> Result<Vec<u8>>;
    fn text(&self) -> String;
}

pub fn emit_report<R: Emit + ?Sized>(report: &R, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => report.csv(),
        Format::Text => Ok(report.text().into_bytes()),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x}"))
}

impl Emit for VolvolReport {
    fn csv(&self) -> Result<Vec<u8>> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["field", "value"])?;
        let (lo, hi) = self.ci.map_or((None, None), |c| (Some(c.lo), Some(c.hi)));
        let rows: [(&str, String); 15] = [
            ("n", self.n.to_string()),
            ("k_n", self.k_n.to_string()),
            ("t", self.t.to_string()),
            ("v_hat", self.v_hat.to_string()),
            ("g1", self.g1.to_string()),
            ("g2", self.g2.to_string()),
            ("g3", self.g3.to_string()),
            ("c_hat", self.c_hat.to_string()),
            ("t_hat", self.t_hat.to_string()),
            ("truth", fmt_opt(self.truth)),
            ("z", fmt_opt(self.z)),
            ("level", self.level.to_string()),
            ("ci_lo", fmt_opt(lo)),
            ("ci_hi", fmt_opt(hi)),
            (
                "se",
                fmt_opt((self.c_hat > 0.0).then(|| (self.k_n as f64 / self.n as f64 * self.c_hat).sqrt())),
            ),
        ];
        for (k, v) in rows {
            wtr.write_record([k, v.as_str()])?;
        }
        wtr.into_inner().map_err(|e| Error::Io(e.into_error()))
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, k_n = {}, t = {}", self.n, self.k_n, self.t);
        let rows = [
            ("V_hat (int tau^2)", self.v_hat),
            ("G1", self.g1),
            ("G2", self.g2),
            ("G3", self.g3),
            ("C_hat (int alpha^2)", self.c_hat),
            ("T_hat (int tau^4)", self.t_hat),
        ];
        for (label, v) in rows {
            let _ = writeln!(s, "  {label:<22}{v:>16.8e}");
        }
        match self.ci {
            Some(ci) => {
                let _ = writeln!(s, "{:.0}% CI: [{:.8e}, {:.8e}]", self.level * 100.0, ci.lo, ci.hi);
            }
            None => {
                let _ = writeln!(s, "no confidence interval: C_hat is not positive");
            }
        }
        if let (Some(t), Some(z)) = (self.truth, self.z) {
            let _ = writeln!(s, "latent truth {t:.8e}, standardized error {z:.4}");
        }
        s
    }
}

impl Emit for GofReport {
    fn csv(&self) -> Result<Vec<u8>> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["t", "n_hat", "s2_hat"])?;
        let nf = self.n as f64;
        for (i, (a, b)) in self.n_path.iter().zip(&self.s2_path).enumerate() {
            wtr.write_record([(i as f64 / nf).to_string(), a.to_string(), b.to_string()])?;
        }
        wtr.into_inner().map_err(|e| Error::Io(e.into_error()))
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "shape {}{}",
            self.shape,
            if self.experimental { " (experimental)" } else { "" }
        );
        let _ = writeln!(s, "n = {}, k_n = {}, t_min = {}", self.n, self.k_n, self.t_min);
        let _ = writeln!(
            s,
            "theta_hat = {:.6e}, D_hat = {:.6e}, C_hat = {:.6e}",
            self.theta_hat, self.d_hat, self.c_hat_f
        );
        let _ = writeln!(
            s,
            "bootstrap model: alpha = {:.6e}, kappa = {:.6e}, xi = {:.6e}",
            self.alpha_hat, self.kappa_hat, self.xi_hat
        );
        let _ = writeln!(s, "Y_n = {:.6}", self.y_n);
        let _ = writeln!(
            s,
            "bootstrap draws = {} (discarded {})",
            self.boot.len(),
            self.discarded
        );
        let _ = writeln!(s, "p-value = {}", fmt_opt(self.p_value));
        s
    }
}

/// Rows of one simulation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: String,
    pub rows: Vec<TableRow>,
}

impl Emit for TableReport {
    fn csv(&self) -> Result<Vec<u8>> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let probs = self.rows.first().map(|r| r.probs.clone()).unwrap_or_default();
        let clt = self.rows.first().is_some_and(|r| r.mean.is_some());
        let mut header = vec!["n".to_string()];
        if clt {
            header.extend(["mean".into(), "variance".into()]);
        }
        header.extend(probs.iter().map(|p| format!("{p}")));
        header.extend(["discarded".into(), "reps".into(), "wall_time_secs".into()]);
        wtr.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.n.to_string()];
            if clt {
                rec.push(fmt_opt(r.mean));
                rec.push(fmt_opt(r.variance));
            }
            rec.extend(r.rates.iter().map(|v| v.to_string()));
            rec.extend([
                r.discarded.to_string(),
                r.reps.to_string(),
                format!("{:.3}", r.wall_time_secs),
            ]);
            wtr.write_record(&rec)?;
        }
        wtr.into_inner().map_err(|e| Error::Io(e.into_error()))
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "table {}", self.table);
        for r in &self.rows {
            let _ = write!(s, "n = {:>6}", r.n);
            if let (Some(m), Some(v)) = (r.mean, r.variance) {
                let _ = write!(s, "  mean {m:>7.3}  var {v:>6.3}");
            }
            for (p, v) in r.probs.iter().zip(&r.rates) {
                let _ = write!(s, "  {p}:{v:.4}");
            }
            let _ = writeln!(s, "  discarded {}/{}", r.discarded, r.reps);
        }
        s
    }
}
