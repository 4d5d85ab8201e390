use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use eprwmr_core::Setting;

use crate::CliError;

/// Seed used when none is given, so a default run is reproducible.
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_OUT_DIR: &str = "eprwmr-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytics,
    Error,
    Criterion,
    Simulate,
    Reproduce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Case {
    I,
    II,
}

impl Case {
    /// `(G, Δ, δ, Δ_p)` of the worked examples, both at `r = 2`.
    pub fn parameters(self) -> (f64, f64, f64, f64) {
        match self {
            Case::I => (500.0, 750.0, 2.0, 5.0),
            Case::II => (12.0, 18.0, 2.0, 2.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    PDistribution,
    ErrorXi,
    DiagramBins,
    Bounds,
    SupDynamics,
    Epr1,
    Epr2,
}

impl Figure {
    pub const ALL: [Figure; 7] =
        [Figure::PDistribution, Figure::ErrorXi, Figure::DiagramBins, Figure::Bounds, Figure::SupDynamics, Figure::Epr1, Figure::Epr2];

    pub fn id(self) -> &'static str {
        match self {
            Figure::PDistribution => "p-distribution",
            Figure::ErrorXi => "error-xi",
            Figure::DiagramBins => "diagram-bins",
            Figure::Bounds => "bounds",
            Figure::SupDynamics => "sup-dynamics",
            Figure::Epr1 => "epr1",
            Figure::Epr2 => "epr2",
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Figure::ALL.into_iter().find(|f| f.id() == s).ok_or_else(|| {
            let ids: Vec<_> = Figure::ALL.iter().map(|f| f.id()).collect();
            CliError::Usage(format!("unknown figure '{s}'; valid ids: {}", ids.join(", ")))
        })
    }
}

/// Command-line flags. Every value is optional so that flags can be layered
/// over a config file.
#[derive(Debug, Default, Parser)]
#[command(name = "eprwmr", version, about = "EPR / macroscopic-realism analytics and amplification trajectory simulator")]
pub struct Args {
    /// analytics | error | criterion | simulate | reproduce
    #[arg(value_enum)]
    pub mode_arg: Option<Mode>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Flat JSON file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Squeeze parameter(s), comma separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub r: Option<Vec<f64>>,
    /// Amplification rate |g|
    #[arg(long)]
    pub g: Option<f64>,
    /// Total amplification time
    #[arg(long = "T")]
    pub t_total: Option<f64>,
    /// Total gain exponent; sets T = gT/g
    #[arg(long = "gT")]
    pub g_t: Option<f64>,
    /// Integration step (g·dt must stay ≤ 0.1)
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of trajectories
    #[arg(long)]
    pub n: Option<usize>,
    /// Base seed; run k uses its own stream
    #[arg(long)]
    pub seed: Option<u64>,
    /// XX | PP | XP | single_mode
    #[arg(long)]
    pub setting: Option<String>,
    /// Bin overlap δ
    #[arg(long)]
    pub delta: Option<f64>,
    /// Bin width Δ of the amplified outcome
    #[arg(long = "Delta")]
    pub bin_width: Option<f64>,
    /// Region threshold, or first superposition center
    #[arg(long)]
    pub x1: Option<f64>,
    /// Second superposition center (default −x1)
    #[arg(long)]
    pub x2: Option<f64>,
    /// Total gain G
    #[arg(long = "G")]
    pub gain: Option<f64>,
    /// Bin width of the inferred quadrature
    #[arg(long = "Delta-p")]
    pub delta_p: Option<f64>,
    /// Worked parameter set for the criterion
    #[arg(long, value_enum, ignore_case = true)]
    pub case: Option<Case>,
    /// Figure id for reproduce mode
    #[arg(long)]
    pub figure: Option<String>,
    /// Output directory
    #[arg(long, env = "EPRWMR_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Echo the resolved configuration to stdout and into each sidecar
    #[arg(long)]
    pub print_config: bool,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<Mode>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub r: Option<Vec<f64>>,
    pub g: Option<f64>,
    #[serde(rename = "T")]
    pub t_total: Option<f64>,
    #[serde(rename = "gT")]
    pub g_t: Option<f64>,
    pub dt: Option<f64>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub setting: Option<String>,
    pub delta: Option<f64>,
    #[serde(rename = "Delta")]
    pub bin_width: Option<f64>,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    #[serde(rename = "G")]
    pub gain: Option<f64>,
    #[serde(rename = "Delta_p", alias = "Delta-p")]
    pub delta_p: Option<f64>,
    pub case: Option<Case>,
    pub figure: Option<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub print_config: Option<bool>,
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(Option::<OneOrMany>::deserialize(d)?.map(|v| match v {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(xs) => xs,
    }))
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON config {}: {e}", path.display())))
    }
}

/// Fully resolved run configuration. `out` and `threads` are left out of the
/// serialized form so that echoed configs do not depend on where or how wide
/// a run executes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub r: Vec<f64>,
    pub g: f64,
    #[serde(rename = "T")]
    pub t_total: f64,
    /// `None` means the default grid `min(0.01/g, T/200)`.
    pub dt: Option<f64>,
    pub n: usize,
    pub seed: u64,
    pub setting: Setting,
    pub delta: Option<f64>,
    #[serde(rename = "Delta")]
    pub bin_width: Option<f64>,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    #[serde(rename = "G")]
    pub gain: Option<f64>,
    #[serde(rename = "Delta_p")]
    pub delta_p: Option<f64>,
    pub case: Option<Case>,
    pub figure: Option<Figure>,
    /// Whether `T` or `r` came from the user rather than a default.
    #[serde(skip)]
    pub explicit: Explicit,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub print_config: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Explicit {
    pub r: bool,
    pub t_total: bool,
    pub n: bool,
}

impl ExperimentConfig {
    /// Merges flags over the config file over defaults and validates the result.
    pub fn resolve(args: Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        if let (Some(a), Some(b)) = (args.mode_arg, args.mode) {
            if a != b {
                return Err(CliError::Usage(format!("mode given twice: {a:?} and {b:?}")));
            }
        }
        let mode = args
            .mode_arg
            .or(args.mode)
            .or(file.mode)
            .ok_or_else(|| CliError::Usage("no mode given; expected one of analytics, error, criterion, simulate, reproduce".into()))?;

        let figure = match args.figure.or(file.figure) {
            Some(id) => Some(id.parse::<Figure>()?),
            None if mode == Mode::Reproduce => {
                let ids: Vec<_> = Figure::ALL.iter().map(|f| f.id()).collect();
                return Err(CliError::Usage(format!("reproduce needs --figure; valid ids: {}", ids.join(", "))));
            }
            None => None,
        };
        let setting = match args.setting.or(file.setting) {
            Some(s) => s.parse::<Setting>()?,
            None => Setting::XX,
        };

        let r_given = args.r.or(file.r);
        let g = args.g.or(file.g).unwrap_or(1.0);
        if !(g > 0.0) || !g.is_finite() {
            return Err(CliError::Usage(format!("--g must be > 0, got {g}")));
        }
        let t_given = args.t_total.or(file.t_total);
        let gt_given = args.g_t.or(file.g_t);
        let t_total = match (t_given, gt_given) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either T or gT, not both".into())),
            (Some(t), None) => t,
            (None, Some(gt)) => gt / g,
            (None, None) => 2.0 / g,
        };
        let n_given = args.n.or(file.n);

        let cfg = Self {
            mode,
            r: r_given.clone().unwrap_or_else(|| vec![2.0]),
            g,
            t_total,
            dt: args.dt.or(file.dt),
            n: n_given.unwrap_or(40),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            setting,
            delta: args.delta.or(file.delta),
            bin_width: args.bin_width.or(file.bin_width),
            x1: args.x1.or(file.x1),
            x2: args.x2.or(file.x2),
            gain: args.gain.or(file.gain),
            delta_p: args.delta_p.or(file.delta_p),
            case: args.case.or(file.case),
            figure,
            explicit: Explicit { r: r_given.is_some(), t_total: t_given.is_some() || gt_given.is_some(), n: n_given.is_some() },
            out: args.out.or(file.out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
            threads: args.threads.or(file.threads),
            print_config: args.print_config || file.print_config.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.r.is_empty() {
            return Err(CliError::Usage("--r needs at least one value".into()));
        }
        if let Some(bad) = self.r.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
            return Err(CliError::Usage(format!("squeeze parameter must be finite and >= 0, got {bad}")));
        }
        if !(self.t_total > 0.0) || !self.t_total.is_finite() {
            return Err(CliError::Usage(format!("T must be > 0, got {}", self.t_total)));
        }
        if self.n == 0 {
            return Err(CliError::Usage("--n must be >= 1".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        let single_r = matches!(self.mode, Mode::Criterion | Mode::Simulate);
        if single_r && self.r.len() != 1 {
            return Err(CliError::Usage(format!("{:?} mode takes a single --r value, got {}", self.mode, self.r.len())));
        }
        Ok(())
    }

    /// Output directory, created if missing.
    pub fn output_dir(&self) -> Result<&Path, CliError> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| CliError::Usage(format!("output directory {} is not writable: {e}", self.out.display())))?;
        Ok(&self.out)
    }
}
