//! Batch driver behind the `rwrs` binary.
//!
//! Every command computes all of its reports in memory and only then writes
//! them, so a failing run leaves no partial output. Each CSV starts with a
//! comment line carrying the config hash, seed, version and command.

use crate::config::ExperimentConfig;
use crate::dynsys::fourier_covariance;
use crate::error::{Error, Result};
use crate::limitlaw::sample_delta_batch;
use crate::plot::{histogram, line_plot};
use crate::replicate::Parallelism;
use crate::seed::{tags, Seed};
use crate::simulate::simulate_functional;
use crate::stats::autocov::{autocovariance, AutocovOptions, AutocovSeries};
use crate::stats::charcov::{char_cov_profile, decreases_to_zero};
use crate::stats::decay::{covariance_decay, DecayFit, DecayReport};
use crate::stats::ecf::ecf;
use crate::stats::ks::ks_two_sample;
use crate::stats::moments::{fourth_moment_check, MomentOptions};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Environment variable overriding `output.dir`.
pub const OUT_DIR_ENV: &str = "RWRS_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "rwrs", version, about = "Random walks in stationary random sceneries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides `run.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory; overrides the config and the environment.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (never changes results).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Normalized functional samples `z = Z_n / n^{3/4}`.
    Simulate,
    /// Samples of the limit `sigma * Delta_1` and of `V`.
    Limit,
    /// Autocovariances and the long-run variance.
    Sigma,
    /// KS and ECF distance between a functional file and a limit file.
    Compare,
    /// Fourth moments, block characteristic covariances and correlation decay.
    Check,
    /// Correlation decay under the torus map.
    Decay,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Limit => "limit",
            Command::Sigma => "sigma",
            Command::Compare => "compare",
            Command::Check => "check",
            Command::Decay => "decay",
        }
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 2,
        Error::Io(_) => 1,
        Error::BudgetExceeded(_) => 4,
        _ => 3,
    }
}

/// A named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

struct Ctx<'a> {
    config: &'a ExperimentConfig,
    command: Command,
    par: Parallelism,
    svg: bool,
    files: Vec<OutputFile>,
}

impl Ctx<'_> {
    fn seed(&self, tag: u64) -> Seed {
        Seed(self.config.run.seed).child(tag)
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        let mut bytes = format!(
            "# config_hash={} seed={} version={} command={}\n",
            self.config.hash(),
            self.config.run.seed,
            env!("CARGO_PKG_VERSION"),
            self.command.name()
        )
        .into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut bytes);
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        self.files.push(OutputFile { name: name.into(), bytes });
        Ok(())
    }

    fn svg(&mut self, name: &str, content: impl FnOnce() -> String) {
        if self.svg {
            self.files.push(OutputFile { name: name.into(), bytes: content().into_bytes() });
        }
    }
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

fn summary_rows(items: &[(&str, f64, f64)]) -> Vec<Vec<String>> {
    items.iter().map(|(q, e, se)| vec![s(q), s(e), s(se)]).collect()
}

/// Runs one command and returns its files without touching the disk.
pub fn run_command(command: Command, config: &ExperimentConfig, svg: bool) -> Result<Vec<OutputFile>> {
    config.validate_analysis()?;
    let model = Arc::new(config.scenery_model()?);
    let mut ctx = Ctx { config, command, par: Parallelism(config.run.threads), svg, files: Vec::new() };
    match command {
        Command::Simulate => simulate(&mut ctx, &model)?,
        Command::Limit => limit(&mut ctx)?,
        Command::Sigma => {
            let series = sigma_series(&ctx, &model)?;
            write_sigma(&mut ctx, &series)?;
        }
        Command::Compare => compare(&mut ctx, &model)?,
        Command::Check => check(&mut ctx, &model)?,
        Command::Decay => {
            let report = decay_report(&ctx)?;
            write_decay(&mut ctx, &report)?;
        }
    }
    Ok(ctx.files)
}

fn simulate(ctx: &mut Ctx, model: &Arc<crate::scenery::SceneryModel>) -> Result<()> {
    let run = &ctx.config.run;
    if run.n == 0 {
        return Err(Error::Config("run.n must be positive".into()));
    }
    let z = simulate_functional::<f64>(model, run.n, run.reps, ctx.seed(tags::SIMULATE), ctx.par)?;
    let rows = z.iter().enumerate().map(|(i, f)| vec![s(i), s(f.n), s(f.sum), s(f.normalized)]).collect();
    ctx.csv("z.csv", &["replicate", "n", "Z", "z"], rows)?;
    let values: Vec<f64> = z.iter().map(|f| f.normalized).collect();
    ctx.svg("z.svg", || histogram("normalized functional", "z", &values, 60));
    Ok(())
}

fn limit(ctx: &mut Ctx) -> Result<()> {
    let a = &ctx.config.analysis;
    let sigma2 = a.sigma2.unwrap_or(1.0);
    let draws = sample_delta_batch(sigma2, a.v_method(), a.delta_route, ctx.config.run.reps, ctx.seed(tags::LIMIT), ctx.par)?;
    let rows = draws.iter().enumerate().map(|(i, d)| vec![s(i), s(d.v), s(d.g), s(d.v.sqrt() * d.g), s(d.delta)]).collect();
    ctx.csv("limit.csv", &["replicate", "v", "g", "delta1", "delta"], rows)?;
    let values: Vec<f64> = draws.iter().map(|d| d.delta).collect();
    ctx.svg("limit.svg", || histogram("limit samples", "delta", &values, 60));
    Ok(())
}

fn sigma_series(ctx: &Ctx, model: &crate::scenery::SceneryModel) -> Result<AutocovSeries<f64>> {
    let a = &ctx.config.analysis;
    autocovariance(model, a.lags, ctx.config.run.reps, ctx.seed(tags::SIGMA), AutocovOptions { half_width: a.half_width, par: ctx.par })
}

fn write_sigma(ctx: &mut Ctx, series: &AutocovSeries<f64>) -> Result<()> {
    let rows = series.lags.iter().map(|&p| vec![s(p), s(series.rho[p]), s(series.se[p])]).collect();
    ctx.csv("autocov.csv", &["lag", "rho", "se"], rows)?;
    let summary =
        summary_rows(&[("sigma2", series.sigma2, series.sigma2_se), ("weighted_sum", series.weighted, series.weighted_se), ("tail", series.tail, f64::NAN)]);
    ctx.csv("sigma.csv", &["quantity", "estimate", "se"], summary)?;
    let pts: Vec<(f64, f64)> = series.lags.iter().map(|&p| (p as f64, series.rho[p])).collect();
    ctx.svg("autocov.svg", || line_plot("autocovariance", "lag", "rho", &[("rho", pts)]));
    Ok(())
}

/// Reads one numeric column, preferring the first name that exists.
pub fn read_column(path: &Path, names: &[&str]) -> Result<(String, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let headers = reader.headers()?.clone();
    let (idx, name) = names
        .iter()
        .find_map(|n| headers.iter().position(|h| h == *n).map(|i| (i, n.to_string())))
        .ok_or_else(|| Error::Config(format!("{} has none of the columns {names:?}", path.display())))?;
    let mut values = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let v: f64 = rec.get(idx).unwrap_or("").parse().map_err(|_| Error::Io(format!("{}: bad number in column {name}", path.display())))?;
        values.push(v);
    }
    Ok((name, values))
}

fn compare(ctx: &mut Ctx, model: &crate::scenery::SceneryModel) -> Result<()> {
    let cfg = ctx.config;
    let (pa, pb) = match (&cfg.compare_a, &cfg.compare_b) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(Error::Config("compare needs compare.a and compare.b".into())),
    };
    let (_, a) = read_column(&pa, &["z", "delta"])?;
    let (col_b, raw_b) = read_column(&pb, &["delta1", "z", "delta"])?;
    let (sigma2, sigma2_se) = match cfg.analysis.sigma2 {
        Some(v) => (v, 0.0),
        None => {
            let series = sigma_series(ctx, model)?;
            (series.sigma2, series.sigma2_se)
        }
    };
    if sigma2 <= 0.0 {
        return Err(Error::DegenerateVariance(format!("estimated sigma^2 = {sigma2}")));
    }
    // unit-variance limit draws are scaled by sigma-hat; other columns are used as is
    let b: Vec<f64> = if col_b == "delta1" { raw_b.iter().map(|d| sigma2.sqrt() * d).collect() } else { raw_b };
    let ks = ks_two_sample(&a, &b)?;
    let t = cfg.analysis.t_values();
    let ea = ecf(&a, &t)?;
    let eb = ecf(&b, &t)?;
    let sup = ea.sup_distance(&eb);
    let summary = summary_rows(&[
        ("ks_d", ks.d, f64::NAN),
        ("ks_threshold", ks.threshold, f64::NAN),
        ("ks_p_value", ks.p_value, f64::NAN),
        ("n_a", ks.n_a as f64, f64::NAN),
        ("n_b", ks.n_b as f64, f64::NAN),
        ("sigma2", sigma2, sigma2_se),
        ("ecf_sup_distance", sup, f64::NAN),
    ]);
    ctx.csv("compare.csv", &["quantity", "estimate", "se"], summary)?;
    let rows = (0..t.len())
        .map(|i| {
            let (va, vb) = (ea.values[i], eb.values[i]);
            vec![s(t[i]), s(va.re), s(va.im), s(vb.re), s(vb.im), s((va - vb).norm()), s((ea.se_norm(i).powi(2) + eb.se_norm(i).powi(2)).sqrt())]
        })
        .collect();
    ctx.csv("ecf.csv", &["t", "re_a", "im_a", "re_b", "im_b", "abs_diff", "se"], rows)?;
    let la: Vec<(f64, f64)> = t.iter().zip(&ea.values).map(|(t, v)| (*t, v.re)).collect();
    let lb: Vec<(f64, f64)> = t.iter().zip(&eb.values).map(|(t, v)| (*t, v.re)).collect();
    ctx.svg("ecf.svg", || line_plot("empirical characteristic functions", "t", "Re phi", &[("a", la), ("b", lb)]));
    Ok(())
}

fn decay_report(ctx: &Ctx) -> Result<DecayReport> {
    let a = &ctx.config.analysis;
    let map = ctx.config.map()?;
    let g = a.decay_g.to_observable(map.dim())?;
    let h = a.decay_h.to_observable(map.dim())?;
    covariance_decay(&map, &g, &h, a.decay_n_max, a.decay_reps, ctx.seed(tags::DECAY), ctx.par)
}

fn write_decay(ctx: &mut Ctx, report: &DecayReport) -> Result<()> {
    let rows = report.rows.iter().map(|r| vec![s(r.n), s(r.cov), s(r.estimate), s(r.se), s(r.exact)]).collect();
    ctx.csv("decay.csv", &["n", "cov", "estimate", "se", "exact"], rows)?;
    let fit = match report.fit {
        DecayFit::Rate { rate, intercept, residual, points } => {
            vec![vec![s("rate"), s(rate), s(residual)], vec![s("intercept"), s(intercept), s(f64::NAN)], vec![s("fit_points"), s(points), s(f64::NAN)]]
        }
        DecayFit::BelowNoiseFloor { points } => vec![vec![s("below_noise_floor"), s(points), s(f64::NAN)]],
    };
    ctx.csv("decay_fit.csv", &["quantity", "estimate", "se"], fit)?;
    let est: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.n as f64, r.estimate)).collect();
    let noise: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.n as f64, 4.0 * r.se)).collect();
    ctx.svg("decay.svg", || line_plot("correlation decay", "n", "|Cov|", &[("estimate", est), ("4 SE", noise)]));
    Ok(())
}

fn check(ctx: &mut Ctx, model: &crate::scenery::SceneryModel) -> Result<()> {
    let a = &ctx.config.analysis;
    let opts = MomentOptions { mode: a.moment_mode, window_len: a.moment_window, par: ctx.par, ..Default::default() };
    let moments = fourth_moment_check::<f64>(model, &a.moment_n_grid, a.moment_reps, ctx.seed(tags::MOMENTS), opts)?;
    let profile = char_cov_profile(model, a.charcov_block, &a.charcov_gaps, a.charcov_reps, ctx.seed(tags::CHARCOV), ctx.par)?;
    let decay = decay_report(ctx)?;

    let rows = (0..moments.n_grid.len()).map(|i| vec![s(moments.n_grid[i]), s(moments.estimates[i]), s(moments.se[i])]).collect();
    ctx.csv("moments.csv", &["N", "estimate", "se"], rows)?;
    let rows = profile.iter().map(|(g, e)| vec![s(g), s(e.cov.re), s(e.cov.im), s(e.modulus), s(e.se)]).collect();
    ctx.csv("charcov.csv", &["gap", "re", "im", "estimate", "se"], rows)?;
    write_decay(ctx, &decay)?;
    let decreasing = if decreases_to_zero(&profile) { 1.0 } else { 0.0 };
    let summary = summary_rows(&[("moment_ratio", moments.ratio(), f64::NAN), ("charcov_decreases_to_zero", decreasing, f64::NAN)]);
    ctx.csv("check.csv", &["quantity", "estimate", "se"], summary)?;
    let pts: Vec<(f64, f64)> = moments.n_grid.iter().zip(&moments.estimates).map(|(n, e)| (*n as f64, *e)).collect();
    ctx.svg("moments.svg", || line_plot("fourth-moment sums", "N", "estimate", &[("estimate", pts)]));
    Ok(())
}

/// Loads the config and applies `--seed`, the environment and `--out`.
pub fn resolve_config(cli: &Cli, env_out: Option<PathBuf>) -> Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            ExperimentConfig::parse(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.run.seed = seed;
    }
    if let Some(dir) = env_out {
        config.output_dir = dir;
    }
    if let Some(dir) = &cli.out {
        config.output_dir = dir.clone();
    }
    if let Some(t) = cli.threads {
        config.run.threads = Some(t);
    }
    Ok(config)
}

pub fn write_outputs(dir: &Path, files: &[OutputFile]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for f in files {
        std::fs::write(dir.join(&f.name), &f.bytes)?;
    }
    Ok(())
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let env_out = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let result = resolve_config(cli, env_out).and_then(|config| {
        let files = run_command(cli.command, &config, cli.svg)?;
        write_outputs(&config.output_dir, &files)?;
        Ok(files)
    });
    match result {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.name);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exact covariance for the decay observables, for reference in reports.
pub fn exact_decay(config: &ExperimentConfig, n: u32) -> Result<f64> {
    let map = config.map()?;
    let g = config.analysis.decay_g.to_observable(map.dim())?;
    let h = config.analysis.decay_h.to_observable(map.dim())?;
    Ok(fourier_covariance(&map, &g, &h, n))
}
