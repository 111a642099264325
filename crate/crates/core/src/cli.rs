//! Command-line front end. [`run`] returns the process exit code: 0 on
//! success, 1 for usage errors, 2 for data errors and 3 for internal
//! failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::data::{generate, load_dataset, DataFormat, Dataset, SynthSpec};
use crate::error::{Error, Result};
use crate::eval::{run_experiment, BlockMode, ExperimentConfig};
use crate::forest::{ForestConfig, Mtry};
use crate::num::parse_num;
use crate::profile::{profile, Profile};
use crate::recommend::{builtin_by_name, recommend};
use crate::resample::{apply, ResampleConfig, StrategyId};
use crate::rules::{mine, to_transactions, MiningConfig, RuleModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rebalance", version, about = "Profile, resample, evaluate and recommend strategies for imbalanced binary data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the meta-feature profile of a dataset
    Profile {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one resampling strategy and write the result as CSV
    Resample {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        method: StrategyId,
        #[command(flatten)]
        resample: ResampleArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validate strategies with a random forest and rank them
    Evaluate {
        #[command(flatten)]
        input: Input,
        /// `all` for the eight compared strategies, or a comma-separated list
        #[arg(long, default_value = "all")]
        strategies: String,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 100)]
        trees: usize,
        /// Features tried per split; defaults to floor(sqrt(p))
        #[arg(long)]
        mtry: Option<usize>,
        /// Pick mtry from 1..=min(7, p) by out-of-bag accuracy
        #[arg(long)]
        tune_mtry: bool,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = Blocks::MetricRepetition)]
        blocks: Blocks,
        #[arg(long, default_value_t = 0.05)]
        cd_alpha: f64,
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        resample: ResampleArgs,
        /// Report destination; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-fold CSV destination; defaults to the report path with a
        /// `.folds.csv` suffix
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Mine a rule model from labelled profiles
    Mine {
        /// CSV with n_instances, n_attributes, imbalance_ratio,
        /// borderline_pct, overlap_pct and best_strategy columns
        profiles: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        min_conf: f64,
        #[arg(long, default_value_t = 0.05)]
        min_supp: f64,
        #[arg(long, default_value = "mined")]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recommend a strategy for a dataset or a saved profile
    Recommend {
        #[command(flatten)]
        input: Input,
        /// builtin-iba, builtin-overall or a rule model file
        #[arg(long, default_value = "builtin-overall")]
        model: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic imbalanced dataset
    Generate {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        ir: f64,
        #[arg(long, default_value_t = 5)]
        features: usize,
        #[arg(long)]
        informative: Option<usize>,
        #[arg(long, default_value_t = 2.0)]
        sep: f64,
        #[arg(long, default_value_t = 0.0)]
        flip: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Input {
    file: PathBuf,
    /// Label column of a CSV file; the last column when absent
    #[arg(long)]
    label_col: Option<String>,
    #[arg(long)]
    minority: Option<String>,
    #[arg(long)]
    format: Option<DataFormat>,
}

impl Input {
    fn load(&self) -> Result<Dataset> {
        load_dataset(
            &self.file,
            self.format,
            self.label_col.as_deref(),
            self.minority.as_deref(),
        )
    }
}

#[derive(Args, Debug)]
struct ResampleArgs {
    #[arg(long, default_value_t = 500)]
    perc_over: u32,
    #[arg(long, default_value_t = 0.5)]
    minority_share: f64,
    #[arg(long, default_value_t = 6)]
    k_smote: usize,
    #[arg(long, default_value_t = 1)]
    k_cnn: usize,
    #[arg(long, default_value_t = 3)]
    k_enn: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ResampleArgs {
    fn config(&self) -> ResampleConfig {
        ResampleConfig {
            perc_over: self.perc_over,
            minority_share: self.minority_share,
            k_smote: self.k_smote,
            k_cnn: self.k_cnn,
            k_enn: self.k_enn,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Blocks {
    MetricRepetition,
    Metric,
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn parse_strategies(spec: &str) -> Result<Vec<StrategyId>> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(StrategyId::EVALUATED.to_vec());
    }
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse().map_err(Error::InvalidConfig))
        .collect()
}

fn folds_csv_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map_or_else(|| "report".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.folds.csv"))
}

fn read_profiles(path: &Path) -> Result<Vec<(Profile, StrategyId)>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MissingLabelColumn(name.to_string()))
    };
    let cols = [
        col("n_instances")?,
        col("n_attributes")?,
        col("imbalance_ratio")?,
        col("borderline_pct")?,
        col("overlap_pct")?,
    ];
    let best = col("best_strategy")?;
    let mut out = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut v = [0.0; 5];
        for (slot, &c) in v.iter_mut().zip(&cols) {
            let cell = rec.get(c).unwrap_or("");
            *slot = parse_num(cell).ok_or_else(|| Error::NonNumeric {
                row: r + 1,
                column: headers[c].to_string(),
                value: cell.to_string(),
            })?;
        }
        let cell = rec.get(best).unwrap_or("");
        let strategy: StrategyId = cell
            .parse()
            .map_err(|e: String| Error::Document(format!("row {}: {e}", r + 1)))?;
        let p = Profile {
            n_instances: v[0] as usize,
            n_attributes: v[1] as usize,
            imbalance_ratio: v[2],
            borderline_pct: v[3],
            overlap_pct: v[4],
            minority_label: String::new(),
        };
        out.push((p, strategy));
    }
    Ok(out)
}

/// A profile document when the file holds one, otherwise the profile of
/// the dataset it contains.
fn profile_of(input: &Input) -> Result<Profile> {
    if let Ok(text) = fs::read_to_string(&input.file) {
        if text.trim_start().starts_with('{') {
            return Profile::from_json(&text);
        }
    }
    profile(&input.load()?)
}

fn load_model(spec: &str) -> Result<RuleModel> {
    if let Some(m) = builtin_by_name(spec) {
        return Ok(m);
    }
    let text = fs::read_to_string(spec).map_err(|e| Error::io(spec, e))?;
    RuleModel::from_json(&text)
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Profile { input, out } => {
            let p = profile(&input.load()?)?;
            emit(&with_newline(p.to_json()), out.as_deref(), stdout)
        }
        Command::Resample {
            input,
            method,
            resample,
            out,
        } => {
            let d = input.load()?;
            let r = apply(method, &d, &resample.config())?;
            if let Some(w) = &r.warning {
                let _ = writeln!(stderr, "warning: {w}");
            }
            r.dataset.save_csv(&out)
        }
        Command::Evaluate {
            input,
            strategies,
            folds,
            repeats,
            trees,
            mtry,
            tune_mtry,
            max_depth,
            blocks,
            cd_alpha,
            threads,
            resample,
            out,
            csv_out,
        } => {
            let strategies = parse_strategies(&strategies)?;
            let d = input.load()?;
            let fcfg = ForestConfig {
                n_trees: trees,
                mtry: mtry.map_or(Mtry::Auto, Mtry::Fixed),
                max_depth,
                mtry_grid: tune_mtry.then(|| ForestConfig::default_grid(d.p())),
                ..ForestConfig::default()
            };
            let exp = ExperimentConfig {
                k_folds: folds,
                repetitions: repeats,
                seed: resample.seed,
                blocks: match blocks {
                    Blocks::MetricRepetition => BlockMode::MetricRepetition,
                    Blocks::Metric => BlockMode::Metric,
                },
                cd_alpha,
                ..ExperimentConfig::default()
            };
            let rcfg = resample.config();
            let work = || run_experiment(&d, &strategies, &rcfg, &fcfg, &exp);
            let report = match threads {
                Some(0) => return Err(Error::InvalidConfig("--threads must be positive".into())),
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::InvalidConfig(e.to_string()))?
                    .install(work)?,
                None => work()?,
            };
            emit(&with_newline(report.to_json()), out.as_deref(), stdout)?;
            let csv_path = csv_out.or_else(|| out.as_deref().map(folds_csv_path));
            if let Some(path) = csv_path {
                let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                report.write_csv(std::io::BufWriter::new(file))?;
            }
            Ok(())
        }
        Command::Mine {
            profiles,
            min_conf,
            min_supp,
            name,
            out,
        } => {
            let labelled = read_profiles(&profiles)?;
            let base = to_transactions(&labelled)?;
            let rules = mine(
                &base,
                &MiningConfig {
                    min_support: min_supp,
                    min_confidence: min_conf,
                },
            )?;
            let provenance = format!(
                "mined from {} profiles in {} (min support {min_supp}, min confidence {min_conf})",
                labelled.len(),
                profiles.display()
            );
            let model = RuleModel::new(name, provenance, rules);
            emit(&with_newline(model.to_json()), out.as_deref(), stdout)
        }
        Command::Recommend { input, model, out } => {
            let model = load_model(&model)?;
            let p = profile_of(&input)?;
            let rec = recommend(&p, &model);
            #[derive(serde::Serialize)]
            struct Doc<'a> {
                schema_version: u32,
                kind: &'static str,
                profile: &'a Profile,
                #[serde(flatten)]
                recommendation: &'a crate::recommend::Recommendation,
            }
            let text = serde_json::to_string_pretty(&Doc {
                schema_version: 1,
                kind: "recommendation",
                profile: &p,
                recommendation: &rec,
            })
            .expect("recommendation serializes");
            emit(&with_newline(text), out.as_deref(), stdout)
        }
        Command::Generate {
            n,
            ir,
            features,
            informative,
            sep,
            flip,
            seed,
            out,
        } => {
            let spec = SynthSpec {
                n,
                p: features,
                informative: informative.unwrap_or(features.min(2)),
                ir_target: ir,
                class_sep: sep,
                noise_flip_fraction: flip,
                seed,
            };
            let d = generate(&spec)?.dataset;
            match out {
                Some(path) => d.save_csv(path),
                None => d.write_csv(stdout),
            }
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
