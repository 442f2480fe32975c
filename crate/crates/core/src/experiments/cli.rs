//! `irs-af` command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::params::{SystemParams, CONFIG_KEYS};
use crate::quantizer::QuantizerSpec;
use crate::simulate::McConfig;

use super::validate::validate_point;
use super::{
    bits_range, csv_io, evaluate_points, SweepPoint, SweepRow, DEFAULT_ELEMENTS, DEFAULT_PAIRS,
};

/// Environment variable naming the config file used when `--config` is absent.
pub const CONFIG_ENV: &str = "IRS_AF_CONFIG";

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_VALIDATE_TRIALS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "irs-af",
    version,
    about = "Double-IRS AF relay: SNR loss and achievable rate under phase quantization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat TOML config file (defaults to $IRS_AF_CONFIG, then built-in defaults).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output CSV path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Monte-Carlo trials per point; 0 evaluates closed forms only.
    #[arg(long, global = true)]
    pub trials: Option<usize>,

    /// Comma-separated quantizer bits (`inf` for continuous phases).
    #[arg(long, global = true, value_delimiter = ',')]
    pub k: Option<Vec<QuantizerSpec>>,

    /// Comma-separated IRS-1 element counts.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,

    /// Comma-separated IRS-2 element counts, or `same` to follow `--n`.
    #[arg(long, global = true)]
    pub m: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// SNR loss versus N (M = N), k = 1..4.
    Fig2,
    /// Achievable rate versus N (M = N), k = 1..3.
    Fig3,
    /// Achievable rate versus k = 1..6 for several (N, M) pairs.
    Fig4,
    /// Free-form sweep over --n, --m and --k.
    Sweep,
    /// Compare Monte-Carlo estimates with the closed forms.
    Validate,
}

/// Parsed `--m`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum MSpec {
    Same,
    List(Vec<usize>),
}

fn parse_m(text: &str) -> Result<MSpec> {
    if text.trim().eq_ignore_ascii_case("same") {
        return Ok(MSpec::Same);
    }
    text.split(',')
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| Error::Config {
                key: "--m".into(),
                reason: format!("expected a list of counts or `same`, got `{text}`"),
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(MSpec::List)
}

/// Parameters plus the config file they came from, if any.
fn load_params(cli: &Cli) -> Result<(SystemParams, Option<PathBuf>)> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match path {
        Some(p) => Ok((SystemParams::from_file(&p)?, Some(p))),
        None => Ok((SystemParams::default(), None)),
    }
}

fn pairs_for(ns: &[usize], m: &MSpec) -> Result<Vec<(usize, usize)>> {
    match m {
        MSpec::Same => Ok(ns.iter().map(|&n| (n, n)).collect()),
        MSpec::List(ms) if ms.len() == ns.len() => {
            Ok(ns.iter().copied().zip(ms.iter().copied()).collect())
        }
        MSpec::List(ms) if ms.len() == 1 => Ok(ns.iter().map(|&n| (n, ms[0])).collect()),
        MSpec::List(_) => Err(Error::Config {
            key: "--m".into(),
            reason: "must have one entry, or as many entries as --n".into(),
        }),
    }
}

fn check_counts(pairs: &[(usize, usize)]) -> Result<()> {
    for &(n, m) in pairs {
        if n == 0 {
            return Err(Error::invalid("--n", "element counts must be >= 1"));
        }
        if m == 0 {
            return Err(Error::invalid("--m", "element counts must be >= 1"));
        }
    }
    Ok(())
}

fn check_bits(ks: &[QuantizerSpec]) -> Result<()> {
    for k in ks {
        k.validate("--k")?;
    }
    Ok(())
}

/// Points of a preset or sweep, with the flags that overrode preset defaults.
fn plan(cli: &Cli) -> Result<(Vec<SweepPoint>, Vec<String>)> {
    let mut overrides = Vec::new();
    let m_spec = cli.m.as_deref().map(parse_m).transpose()?;
    if let Some(m) = &cli.m {
        overrides.push(format!("m={m}"));
    }
    let ks = match &cli.k {
        Some(ks) => {
            overrides.push(format!("k={}", join(ks)));
            ks.clone()
        }
        None => match cli.command {
            Command::Fig2 | Command::Sweep | Command::Validate => bits_range(1, 4),
            Command::Fig3 => bits_range(1, 3),
            Command::Fig4 => bits_range(1, 6),
        },
    };
    check_bits(&ks)?;
    let ns = match &cli.n {
        Some(ns) => {
            overrides.push(format!("n={}", join(ns)));
            Some(ns.clone())
        }
        None => None,
    };

    let points = match cli.command {
        Command::Fig4 => {
            let pairs = match ns {
                Some(ns) => pairs_for(&ns, m_spec.as_ref().unwrap_or(&MSpec::Same))?,
                None => match &m_spec {
                    Some(MSpec::List(ms)) => DEFAULT_PAIRS
                        .iter()
                        .zip(ms.iter().cycle())
                        .map(|(&(n, _), &m)| (n, m))
                        .collect(),
                    _ => DEFAULT_PAIRS.to_vec(),
                },
            };
            check_counts(&pairs)?;
            pairs
                .iter()
                .flat_map(|&(n, m)| ks.iter().map(move |&k| SweepPoint { n, m, k1: k, k2: k }))
                .collect()
        }
        _ => {
            let ns = ns.unwrap_or_else(|| match cli.command {
                Command::Validate => vec![256, 1024],
                _ => DEFAULT_ELEMENTS.to_vec(),
            });
            let pairs = pairs_for(&ns, m_spec.as_ref().unwrap_or(&MSpec::Same))?;
            check_counts(&pairs)?;
            ks.iter()
                .flat_map(|&k| {
                    pairs
                        .iter()
                        .map(move |&(n, m)| SweepPoint { n, m, k1: k, k2: k })
                })
                .collect()
        }
    };
    Ok((points, overrides))
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn metadata(
    cli: &Cli,
    params: &SystemParams,
    overrides: &[String],
    mc: Option<&McConfig>,
) -> Vec<String> {
    let mut meta = vec![
        format!(
            "version: {} {}",
            env!("CARGO_PKG_NAME"),
            env!("CARGO_PKG_VERSION")
        ),
        format!("command: {:?}", cli.command).to_lowercase(),
    ];
    let config: Vec<String> = params
        .to_toml_string()
        .lines()
        .map(|l| l.replace(" = ", "="))
        .collect();
    debug_assert_eq!(config.len(), CONFIG_KEYS.len());
    meta.push(format!("config: {}", config.join(" ")));
    if overrides.is_empty() {
        meta.push("overrides: none".into());
    } else {
        meta.push(format!("overrides: {}", overrides.join(" ")));
    }
    if let Some(cfg) = mc {
        meta.push(format!(
            "monte-carlo: trials={} seed={} error_model={:?} beta_model={:?}",
            cfg.trials, cfg.seed, cfg.error_model, cfg.beta_model
        ));
    }
    meta
}

fn emit(cli: &Cli, meta: &[String], rows: &[SweepRow]) -> Result<()> {
    match &cli.out {
        Some(path) => csv_io::write_csv(BufWriter::new(File::create(path)?), meta, rows),
        None => csv_io::write_csv(io::stdout().lock(), meta, rows),
    }
}

/// Run with parsed arguments. `Ok(false)` means a validation check failed.
pub fn execute(cli: &Cli) -> Result<bool> {
    let (params, config_path) = load_params(cli)?;
    let (points, mut overrides) = plan(cli)?;
    if let Some(p) = &config_path {
        overrides.insert(0, format!("config={}", p.display()));
    }
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    if let Some(s) = cli.seed {
        overrides.push(format!("seed={s}"));
    }
    if let Some(t) = cli.trials {
        overrides.push(format!("trials={t}"));
    }

    if cli.command == Command::Validate {
        let trials = cli.trials.unwrap_or(DEFAULT_VALIDATE_TRIALS);
        if trials == 0 {
            return Err(Error::invalid(
                "--trials",
                "validate needs at least one trial",
            ));
        }
        let cfg = McConfig::new(trials, seed);
        let mut all_passed = true;
        let mut rows = Vec::new();
        let stderr = io::stderr();
        let mut log = stderr.lock();
        for pt in &points {
            let (est, checks) = validate_point(&params, *pt, &cfg)?;
            for c in &checks {
                writeln!(log, "{c}")?;
                all_passed &= c.passed;
            }
            writeln!(
                log,
                "INFO N={} M={} k1={} k2={} mean-amplitude loss_db {:.6}",
                pt.n, pt.m, pt.k1, pt.k2, est.mean_amplitude_loss_db
            )?;
            rows.push(evaluate_points(&params, &[*pt], None)?.remove(0));
            let last = rows.last_mut().expect("row just pushed");
            last.mc_loss_db = Some(est.loss_db);
            last.mc_stderr = Some(est.loss_stderr_db);
            last.trials = Some(est.trials);
            last.seed = Some(est.seed);
        }
        writeln!(
            log,
            "{}",
            if all_passed {
                "validate: all checks passed"
            } else {
                "validate: FAILED"
            }
        )?;
        emit(cli, &metadata(cli, &params, &overrides, Some(&cfg)), &rows)?;
        return Ok(all_passed);
    }

    let trials = cli.trials.unwrap_or(0);
    let cfg = (trials > 0).then(|| McConfig::new(trials, seed));
    let rows = evaluate_points(&params, &points, cfg.as_ref())?;
    emit(
        cli,
        &metadata(cli, &params, &overrides, cfg.as_ref()),
        &rows,
    )?;
    Ok(true)
}

/// Entry point for `main`: parse, run, and map the outcome to an exit code
/// (0 success, 1 failed validation, 2 usage or configuration error).
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("irs-af").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli = parse(&[
            "sweep", "--k", "9,inf", "--n", "16,32", "--m", "same", "--trials", "0",
        ]);
        assert_eq!(cli.command, Command::Sweep);
        assert_eq!(
            cli.k,
            Some(vec![QuantizerSpec::Bits(9), QuantizerSpec::Continuous])
        );
        assert_eq!(cli.n, Some(vec![16, 32]));
        let (points, overrides) = plan(&cli).unwrap();
        assert_eq!(points.len(), 4);
        assert!(points.iter().all(|p| p.n == p.m));
        assert!(overrides.iter().any(|o| o == "k=9,inf"));
    }

    #[test]
    fn fig_presets() {
        let (p2, o2) = plan(&parse(&["fig2"])).unwrap();
        assert_eq!(p2.len(), 4 * DEFAULT_ELEMENTS.len());
        assert!(o2.is_empty());
        let (p3, _) = plan(&parse(&["fig3"])).unwrap();
        assert_eq!(p3.len(), 3 * DEFAULT_ELEMENTS.len());
        let (p4, _) = plan(&parse(&["fig4"])).unwrap();
        assert_eq!(p4.len(), 6 * DEFAULT_PAIRS.len());
        assert!(p4.iter().any(|p| (p.n, p.m) == (1024, 128)));
        assert!(p4.iter().any(|p| (p.n, p.m) == (128, 1024)));
    }

    #[test]
    fn explicit_m_list() {
        let (points, _) =
            plan(&parse(&["sweep", "--n", "16,32", "--m", "8,4", "--k", "2"])).unwrap();
        let pairs: Vec<_> = points.iter().map(|p| (p.n, p.m)).collect();
        assert_eq!(pairs, vec![(16, 8), (32, 4)]);
        assert!(plan(&parse(&["sweep", "--n", "16,32,64", "--m", "8,4"])).is_err());
        assert!(plan(&parse(&["sweep", "--m", "lots"])).is_err());
        assert!(plan(&parse(&["sweep", "--n", "0"])).is_err());
    }

    #[test]
    fn bad_k_is_rejected_by_parser() {
        assert!(Cli::try_parse_from(["irs-af", "sweep", "--k", "0"]).is_err());
        assert!(Cli::try_parse_from(["irs-af", "sweep", "--bogus"]).is_err());
    }
}
