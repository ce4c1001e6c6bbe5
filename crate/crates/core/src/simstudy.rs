//! Monte Carlo study of the frequentist behaviour of posterior summaries.
//!
//! Replication `k` draws its data from stream `[k, 0]` of the base seed and
//! runs the chain for prior `j` on stream `[k, j+1]`, so results do not depend
//! on how replications are scheduled across threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{credible_interval, map_estimate, savage_dickey_bf};
use crate::mcmc::{run_chain, ChainConfig, Parameter, PosteriorSpec};
use crate::priors::{LambdaPrior, PriorSpec};
use crate::rng::{stream_seed, CounterRng};
use crate::skew_symmetric::{SkewFamily, SkewSymmetricModel};
use crate::stats;

pub const REPORT_SCHEMA: &str = "btv-study/1";

fn default_retained() -> usize {
    1000
}
fn default_burn_in() -> usize {
    2000
}
fn default_thin() -> usize {
    5
}
fn default_level() -> f64 {
    0.95
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub family: SkewFamily,
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
    /// Sample size of each replicated data set.
    pub n: usize,
    pub replications: usize,
    pub priors: Vec<PriorSpec>,
    #[serde(default = "default_retained")]
    pub retained: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default = "default_thin")]
    pub thin: usize,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default)]
    pub base_seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl StudyConfig {
    pub fn new(
        family: SkewFamily,
        truth: (f64, f64, f64),
        n: usize,
        replications: usize,
        priors: Vec<PriorSpec>,
    ) -> Self {
        Self {
            family,
            mu: truth.0,
            sigma: truth.1,
            lambda: truth.2,
            n,
            replications,
            priors,
            retained: default_retained(),
            burn_in: default_burn_in(),
            thin: default_thin(),
            level: default_level(),
            base_seed: 0,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        SkewSymmetricModel::new(self.family, self.mu, self.sigma, self.lambda)
            .map_err(|e| Error::Domain(format!("`family`, `mu`, `sigma`, `lambda`: {e}")))?;
        let fail = |msg: String| Err(Error::Domain(msg));
        if self.replications < 1 {
            return fail("`replications` must be at least 1".into());
        }
        if self.n < 2 {
            return fail(format!("`n` must be at least 2, got {}", self.n));
        }
        if self.retained < 100 {
            return fail(format!("`retained` must be at least 100, got {}", self.retained));
        }
        if self.thin < 1 {
            return fail("`thin` must be at least 1".into());
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return fail(format!("`level` must lie in (0, 1), got {}", self.level));
        }
        if self.threads == Some(0) {
            return fail("`threads` must be positive".into());
        }
        if self.priors.is_empty() {
            return fail("`priors` must list at least one prior".into());
        }
        for p in &self.priors {
            p.build(self.family).map_err(|e| Error::Domain(format!("`priors` entry `{p}`: {e}")))?;
        }
        Ok(())
    }

    fn truth(&self, p: Parameter) -> f64 {
        match p {
            Parameter::Mu => self.mu,
            Parameter::Sigma => self.sigma,
            Parameter::Lambda => self.lambda,
        }
    }
}

/// One row of the table: a prior and a parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub prior: PriorSpec,
    pub parameter: Parameter,
    /// 5%, 50% and 95% quantiles of the MAP estimates.
    pub map_q: [f64; 3],
    /// 5%, 50% and 95% quantiles of the posterior medians.
    pub median_q: [f64; 3],
    pub coverage: f64,
    /// Median Savage–Dickey BF₀₁ across replications; on λ rows only.
    pub bf: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub schema: String,
    pub config: StudyConfig,
    pub succeeded: usize,
    pub failed: usize,
    pub rows: Vec<StudyRow>,
}

/// What one replication contributes for one prior.
#[derive(Debug, Clone, Copy)]
struct PriorOutcome {
    map: [f64; 3],
    median: [f64; 3],
    covered: [bool; 3],
    bf: Option<f64>,
}

fn replicate(config: &StudyConfig, priors: &[LambdaPrior], k: usize) -> Result<Vec<PriorOutcome>> {
    let model = SkewSymmetricModel::new(config.family, config.mu, config.sigma, config.lambda)?;
    let mut rng = CounterRng::for_stream(config.base_seed, &[k as u64, 0]);
    let data = model.sample_with(config.n, &mut rng);
    priors
        .iter()
        .enumerate()
        .map(|(j, prior)| {
            let spec = PosteriorSpec::new(config.family, data.clone(), *prior)?;
            let seed = stream_seed(config.base_seed, &[k as u64, j as u64 + 1]);
            let chain = run_chain(&spec, &ChainConfig::new(config.retained, config.burn_in, config.thin, seed))?;
            let map = map_estimate(&chain)?;
            let map = [map.0, map.1, map.2];
            let mut median = [0.0; 3];
            let mut covered = [false; 3];
            for (i, p) in Parameter::ALL.into_iter().enumerate() {
                median[i] = stats::median(chain.parameter(p))?;
                let (lo, hi) = credible_interval(&chain, p, config.level)?;
                let t = config.truth(p);
                covered[i] = lo <= t && t <= hi;
            }
            Ok(PriorOutcome { map, median, covered, bf: savage_dickey_bf(&chain, prior).ok() })
        })
        .collect()
}

/// Runs every replication and aggregates in replication order.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    let priors: Vec<LambdaPrior> = config.priors.iter().map(|p| p.build(config.family)).collect::<Result<_>>()?;
    let work = || -> Vec<Result<Vec<PriorOutcome>>> {
        (0..config.replications).into_par_iter().map(|k| replicate(config, &priors, k)).collect()
    };
    let outcomes = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    let ok: Vec<Vec<PriorOutcome>> = outcomes.into_iter().filter_map(|r| r.ok()).collect();
    let failed = config.replications - ok.len();

    let mut rows = Vec::with_capacity(priors.len() * 3);
    for (j, spec) in config.priors.iter().enumerate() {
        let bfs: Vec<f64> = ok.iter().filter_map(|o| o[j].bf).collect();
        for (i, p) in Parameter::ALL.into_iter().enumerate() {
            let maps: Vec<f64> = ok.iter().map(|o| o[j].map[i]).collect();
            let medians: Vec<f64> = ok.iter().map(|o| o[j].median[i]).collect();
            let hits = ok.iter().filter(|o| o[j].covered[i]).count();
            rows.push(StudyRow {
                prior: *spec,
                parameter: p,
                map_q: quantile_triple(&maps),
                median_q: quantile_triple(&medians),
                coverage: if ok.is_empty() { f64::NAN } else { hits as f64 / ok.len() as f64 },
                bf: if p == Parameter::Lambda { stats::median(&bfs).ok() } else { None },
            });
        }
    }
    Ok(StudyReport { schema: REPORT_SCHEMA.to_string(), config: config.clone(), succeeded: ok.len(), failed, rows })
}

fn quantile_triple(values: &[f64]) -> [f64; 3] {
    if values.is_empty() {
        return [f64::NAN; 3];
    }
    let s = stats::sorted(values);
    [0.05, 0.5, 0.95].map(|p| stats::quantile_sorted(&s, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Format(format!("unknown table format `{other}` (expected csv or json)"))),
        }
    }
}

pub const CSV_COLUMNS: [&str; 10] =
    ["prior", "parameter", "map_q05", "map_q50", "map_q95", "median_q05", "median_q50", "median_q95", "coverage", "bf"];

fn round3(x: f64) -> f64 {
    if x.is_finite() {
        (x * 1000.0).round() / 1000.0
    } else {
        x
    }
}

fn rounded(row: &StudyRow) -> StudyRow {
    StudyRow {
        prior: row.prior,
        parameter: row.parameter,
        map_q: row.map_q.map(round3),
        median_q: row.median_q.map(round3),
        coverage: round3(row.coverage),
        bf: row.bf.map(round3),
    }
}

/// The table with numbers rounded to three decimals. CSV carries the rows
/// only; JSON also carries the schema tag, the configuration and the
/// replication counts.
pub fn emit_table(report: &StudyReport, format: TableFormat) -> Result<String> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Format(e.to_string());
            w.write_record(CSV_COLUMNS).map_err(io)?;
            for row in &report.rows {
                let r = rounded(row);
                let mut rec = vec![r.prior.to_string(), r.parameter.name().to_string()];
                rec.extend(r.map_q.iter().chain(&r.median_q).chain([&r.coverage]).map(|v| format!("{v:.3}")));
                rec.push(r.bf.map(|v| format!("{v:.3}")).unwrap_or_default());
                w.write_record(&rec).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
        }
        TableFormat::Json => {
            let r = StudyReport { rows: report.rows.iter().map(rounded).collect(), ..report.clone() };
            let mut s = serde_json::to_string_pretty(&r).map_err(|e| Error::Format(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Reads back the rows written by [`emit_table`].
pub fn parse_table(text: &str, format: TableFormat) -> Result<Vec<StudyRow>> {
    match format {
        TableFormat::Json => {
            let report: StudyReport = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
            if report.schema != REPORT_SCHEMA {
                return Err(Error::Format(format!("unsupported schema `{}`", report.schema)));
            }
            Ok(report.rows)
        }
        TableFormat::Csv => {
            let mut reader = csv::Reader::from_reader(text.as_bytes());
            let header = reader.headers().map_err(|e| Error::Format(e.to_string()))?;
            if header.iter().ne(CSV_COLUMNS) {
                return Err(Error::Format(format!("unexpected header {header:?}")));
            }
            let mut rows = Vec::new();
            for (line, rec) in reader.records().enumerate() {
                let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
                let bad = |what: &str| Error::Format(format!("row {}: bad {what}", line + 2));
                let num = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(CSV_COLUMNS[i]));
                let parameter =
                    Parameter::ALL.into_iter().find(|p| p.name() == &rec[1]).ok_or_else(|| bad("parameter"))?;
                rows.push(StudyRow {
                    prior: rec[0].parse()?,
                    parameter,
                    map_q: [num(2)?, num(3)?, num(4)?],
                    median_q: [num(5)?, num(6)?, num(7)?],
                    coverage: num(8)?,
                    bf: if rec[9].is_empty() { None } else { Some(num(9)?) },
                });
            }
            Ok(rows)
        }
    }
}
