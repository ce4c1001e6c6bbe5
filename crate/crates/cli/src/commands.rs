use std::io::Write;
use std::time::Instant;

use btv_core::base_dists::special::beta_inc_inv;
use btv_core::inference::{bootstrap_ci, BootstrapIntervals};
use btv_core::{
    elicit_beta, emit_table, mle_fit, run_chain, run_study, summarize, ChainConfig, FitReport, MleFit,
    PerturbationMeasure, PosteriorSpec, PriorSpec, SkewFamily, SkewSymmetricModel, StudyConfig, TableFormat,
};
use serde::Serialize;

use crate::dataset::read_dataset;
use crate::error::{CliError, CliResult};
use crate::manifest::{manifest_path_for, RunManifest};
use crate::{ElicitArgs, FitArgs, OutputArgs, PriorDensityArgs, SampleArgs, ShapesArgs, StudyArgs};

pub const FIT_SCHEMA: &str = "btv-fit/1";
pub const ELICIT_SCHEMA: &str = "btv-elicit/1";

/// Writes `bytes` to the chosen output and the manifest next to it.
fn emit(out: &OutputArgs, bytes: &[u8], mut manifest: RunManifest) -> CliResult<()> {
    match &out.output {
        Some(path) => {
            std::fs::write(path, bytes)?;
            manifest.add_output(path, bytes);
        }
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    let manifest_path = out.manifest.clone().or_else(|| out.output.as_deref().map(manifest_path_for));
    if let Some(path) = manifest_path {
        manifest.write(&path)?;
    }
    Ok(())
}

fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text.into_bytes())
}

/// `points` evenly spaced values from `from` to `to`, both included.
fn uniform_grid(from: f64, to: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::input(format!("range [{from}, {to}] must be finite")));
    }
    match points {
        0 => Err(CliError::input("need at least one grid point")),
        1 if from == to => Ok(vec![from]),
        1 => Err(CliError::input(format!("a one-point grid needs from = to, got [{from}, {to}]"))),
        _ if from >= to => Err(CliError::input(format!("range [{from}, {to}] is empty"))),
        _ => {
            let last = (points - 1) as f64;
            Ok((0..points).map(|i| if i == points - 1 { to } else { from + (to - from) * i as f64 / last }).collect())
        }
    }
}

#[derive(Serialize)]
struct ChainSettings {
    retained: usize,
    burn_in: usize,
    thin: usize,
    seed: u64,
}

#[derive(Serialize)]
struct FitOutput {
    schema: &'static str,
    family: SkewFamily,
    prior: PriorSpec,
    n: usize,
    chain: ChainSettings,
    posterior: FitReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    mle: Option<MleFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bootstrap: Option<BootstrapIntervals>,
}

pub fn fit(args: &FitArgs) -> CliResult<()> {
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(CliError::input(format!("level must lie in (0, 1), got {}", args.level)));
    }
    let (data, raw) = read_dataset(&args.data)?;
    let prior = args.prior.build(args.family)?;
    let spec = PosteriorSpec::new(args.family, data.clone(), prior)?;
    spec.check_propriety()?;
    let config = ChainConfig::new(args.retained, args.burn_in, args.thin, args.seed);
    let chain = run_chain(&spec, &config)?;
    let posterior = summarize(&chain, &prior, args.level)?;
    let mle = if args.mle || args.bootstrap.is_some() { Some(mle_fit(args.family, &data)?) } else { None };
    let bootstrap = match args.bootstrap {
        Some(b) => Some(bootstrap_ci(args.family, &data, b, args.level, args.seed)?),
        None => None,
    };
    let output = FitOutput {
        schema: FIT_SCHEMA,
        family: args.family,
        prior: args.prior,
        n: data.len(),
        chain: ChainSettings { retained: args.retained, burn_in: args.burn_in, thin: args.thin, seed: args.seed },
        posterior,
        mle,
        bootstrap,
    };
    let manifest = RunManifest::new("fit", args, Some(args.seed))?.with_input(&args.data, &raw);
    emit(&args.out, &json_bytes(&output)?, manifest)
}

pub fn prior_density(args: &PriorDensityArgs) -> CliResult<()> {
    let grid = uniform_grid(args.from, args.to, args.points)?;
    let prior = args.prior.build(args.family)?;
    let mut text = String::from("lambda,density\n");
    for l in grid {
        text.push_str(&format!("{l},{}\n", prior.density(l)?));
    }
    emit(&args.out, text.as_bytes(), RunManifest::new("prior-density", args, None)?)
}

#[derive(Serialize)]
struct QuantilePair {
    p: f64,
    q: f64,
}

#[derive(Serialize)]
struct ElicitOutput {
    schema: &'static str,
    alpha: f64,
    beta: f64,
    targets: [QuantilePair; 2],
    achieved: [QuantilePair; 2],
}

pub fn elicit(args: &ElicitArgs) -> CliResult<()> {
    let (alpha, beta) = elicit_beta(args.p_lo, args.q_lo, args.p_hi, args.q_hi)?;
    let at = |p: f64| QuantilePair { p, q: beta_inc_inv(alpha, beta, p) - 0.5 };
    let output = ElicitOutput {
        schema: ELICIT_SCHEMA,
        alpha,
        beta,
        targets: [QuantilePair { p: args.p_lo, q: args.q_lo }, QuantilePair { p: args.p_hi, q: args.q_hi }],
        achieved: [at(args.p_lo), at(args.p_hi)],
    };
    emit(&args.out, &json_bytes(&output)?, RunManifest::new("elicit", args, None)?)
}

pub fn sample(args: &SampleArgs) -> CliResult<()> {
    let model = SkewSymmetricModel::new(args.family, args.mu, args.sigma, args.lambda)?;
    let mut text = String::from("x\n");
    for x in model.sample(args.n, args.seed)? {
        text.push_str(&format!("{x}\n"));
    }
    emit(&args.out, text.as_bytes(), RunManifest::new("sample", args, Some(args.seed))?)
}

pub fn shapes(args: &ShapesArgs) -> CliResult<()> {
    let grid = uniform_grid(args.from, args.to, args.points)?;
    if args.masses.is_empty() {
        return Err(CliError::input("need at least one mass"));
    }
    let measure = PerturbationMeasure::new(args.family)?;
    let mut text = String::from("mass,lambda,x,density\n");
    for &mass in &args.masses {
        if mass.is_nan() || mass.abs() >= 100.0 {
            return Err(CliError::input(format!("mass percentage must lie in (-100, 100), got {mass}")));
        }
        // a share of the maximal relocation 1/2
        let lambda = measure.m_tv_inverse(mass / 200.0)?;
        let model = SkewSymmetricModel::standard(args.family, lambda)?;
        for &x in &grid {
            text.push_str(&format!("{mass},{lambda},{x},{}\n", model.pdf(x)?));
        }
    }
    emit(&args.out, text.as_bytes(), RunManifest::new("shapes", args, None)?)
}

pub const STUDY_CSV: &str = "study.csv";
pub const STUDY_JSON: &str = "study.json";
pub const STUDY_MANIFEST: &str = "study.manifest.json";

pub fn load_study_config(text: &str) -> CliResult<StudyConfig> {
    toml::from_str(text).map_err(|e| CliError::input(format!("study configuration: {e}")))
}

pub fn study(args: &StudyArgs) -> CliResult<()> {
    let raw = std::fs::read(&args.config).map_err(|e| CliError::input(format!("{}: {e}", args.config.display())))?;
    let text = std::str::from_utf8(&raw)
        .map_err(|_| CliError::input(format!("{}: not valid UTF-8", args.config.display())))?;
    let mut config = load_study_config(text)?;
    if args.threads.is_some() {
        config.threads = args.threads;
    }
    config.validate()?;
    std::fs::create_dir_all(&args.output_dir)?;

    let start = Instant::now();
    let mut report = run_study(&config)?;
    // results do not depend on the thread count, so it stays out of the tables
    report.config.threads = None;
    eprintln!(
        "btv: {} replications ({} failed) in {:.1} s",
        report.succeeded + report.failed,
        report.failed,
        start.elapsed().as_secs_f64()
    );

    #[derive(Serialize)]
    struct Resolved<'a> {
        #[serde(flatten)]
        args: &'a StudyArgs,
        study: &'a StudyConfig,
    }
    let mut manifest = RunManifest::new("study", &Resolved { args, study: &config }, Some(config.base_seed))?
        .with_input(&args.config, &raw);
    for (name, format) in [(STUDY_CSV, TableFormat::Csv), (STUDY_JSON, TableFormat::Json)] {
        let path = args.output_dir.join(name);
        let bytes = emit_table(&report, format)?.into_bytes();
        std::fs::write(&path, &bytes)?;
        manifest.add_output(&path, &bytes);
    }
    manifest.write(&args.output_dir.join(STUDY_MANIFEST))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_include_both_endpoints() {
        let g = uniform_grid(-30.0, 30.0, 60_001).unwrap();
        assert_eq!((g[0], g[30_000], g[60_000]), (-30.0, 0.0, 30.0));
        assert_eq!(uniform_grid(2.0, 2.0, 1).unwrap(), vec![2.0]);
        assert!(uniform_grid(1.0, 0.0, 5).is_err());
        assert!(uniform_grid(0.0, 1.0, 0).is_err());
        assert!(uniform_grid(0.0, f64::INFINITY, 3).is_err());
    }

    #[test]
    fn study_config_names_offending_keys() {
        let ok = "family = \"skew-normal\"\nmu = 0\nsigma = 1\nlambda = 0\nn = 50\nreplications = 2\npriors = [\"btv:0.5,0.5\"]\n";
        let c = load_study_config(ok).unwrap();
        assert_eq!((c.mu, c.sigma), (0.0, 1.0));
        assert_eq!(c.retained, 1000);
        let e = load_study_config(&format!("{ok}colour = 3\n")).unwrap_err();
        assert!(e.message.contains("colour"), "{}", e.message);
        let e = load_study_config(&ok.replace("btv:0.5,0.5", "laplace-tv")).unwrap_err();
        assert!(e.message.contains("laplace-tv"), "{}", e.message);
        let e = load_study_config(&ok.replace("n = 50\n", "")).unwrap_err();
        assert!(e.message.contains("`n`"), "{}", e.message);
    }
}
