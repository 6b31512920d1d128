use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use kuznetsov::experiments::XLadder;
use kuznetsov::transforms::{normalize_weight, BumpFunction, BumpProfile};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Environment variable consulted for the worker count when `--threads` is
/// absent.
pub const THREADS_ENV: &str = "KUZNETSOV_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Residue bijection, R-weights, Ramanujan sums, Dirichlet closed forms.
    VerifyArith,
    /// Identity registry and the ζ-product identity.
    VerifySpecial,
    /// Direct vs spectral V*W and the convolution theorem.
    VerifyConvolution,
    /// The limit experiment over an X-ladder.
    RunLimit,
    /// The A₀ asymptotic over an X-ladder.
    RunA0,
    /// Sears–Titchmarsh round trip and the Parseval-type equality.
    Sears,
    /// Principal-value lemma.
    Pv,
    /// Watson's contour formulas.
    Watson,
    /// Every command above, one output file per artifact.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Pass/fail thresholds of the acceptance checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub r_weight: f64,
    pub theorem_holomorphic: f64,
    pub theorem_maass: f64,
    pub theorem_floor: f64,
    pub watson_integer: f64,
    pub watson_imaginary: f64,
    pub sears: f64,
    pub pr5: f64,
    pub a0_exponent: f64,
    pub a0_off_diagonal: f64,
    pub limit_final: f64,
    pub pv: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            r_weight: 1e-12,
            theorem_holomorphic: 1e-3,
            theorem_maass: 1e-2,
            theorem_floor: 1e-8,
            watson_integer: 1e-6,
            watson_imaginary: 1e-4,
            sears: 1e-3,
            pr5: 1e-3,
            a0_exponent: -0.5,
            a0_off_diagonal: 1e-3,
            limit_final: 0.05,
            pv: 0.05,
        }
    }
}

impl Tolerances {
    fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "r-weight" => &mut self.r_weight,
            "theorem-holomorphic" => &mut self.theorem_holomorphic,
            "theorem-maass" => &mut self.theorem_maass,
            "theorem-floor" => &mut self.theorem_floor,
            "watson-integer" => &mut self.watson_integer,
            "watson-imaginary" => &mut self.watson_imaginary,
            "sears" => &mut self.sears,
            "pr5" => &mut self.pr5,
            "a0-exponent" => &mut self.a0_exponent,
            "a0-off-diagonal" => &mut self.a0_off_diagonal,
            "limit-final" => &mut self.limit_final,
            "pv" => &mut self.pv,
            _ => {
                return Err(CliError::invalid(
                    "tol",
                    format!("unknown tolerance `{name}`"),
                ))
            }
        };
        *slot = value;
        Ok(())
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `(l, l′)` pairs for the ladder experiments.
    pub pairs: Vec<(u64, u64)>,
    pub v: BumpFunction,
    pub w: BumpFunction,
    /// Normalised to unit mass.
    pub g: BumpFunction,
    pub ladder: XLadder,
    pub a0_ladder: XLadder,
    pub kernel_k: Vec<u32>,
    pub kernel_t: Vec<f64>,
    pub pv_k: Vec<f64>,
    pub tolerances: Tolerances,
    pub threads: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub timing: bool,
}

impl RunConfig {
    pub fn l(&self) -> u64 {
        self.pairs[0].0
    }

    pub fn lp(&self) -> u64 {
        self.pairs[0].1
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kuznetsov",
    version,
    about = "Numerical checks of Kloosterman-sum and Bessel-transform identities",
    after_help = "Values come from flags, then KUZNETSOV_THREADS (threads only), \
                  then the --config file (key = value, # comments), then defaults."
)]
struct Args {
    command: Command,
    /// key = value file; keys are the long flag names, tolerances `tol.NAME`.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    lp: Option<String>,
    /// Comma-separated X-ladder.
    #[arg(long, value_name = "X1,X2,...")]
    x: Option<String>,
    /// X-ladder of the A₀ experiment under `all`.
    #[arg(long = "a0-x", value_name = "X1,X2,...")]
    a0_x: Option<String>,
    /// Support of V.
    #[arg(long, value_name = "A,B")]
    v: Option<String>,
    /// Support of W.
    #[arg(long, value_name = "A,B")]
    w: Option<String>,
    /// Support of the weight g (normalised to unit mass).
    #[arg(long, value_name = "A,B")]
    g: Option<String>,
    /// Use log-smooth bumps of this sharpness instead of the classic profile.
    #[arg(long)]
    sharpness: Option<String>,
    /// Even weights for the convolution theorem.
    #[arg(long = "kernel-k", value_name = "K1,K2,...")]
    kernel_k: Option<String>,
    /// Maass parameters for the convolution theorem.
    #[arg(long = "kernel-t", value_name = "T1,T2,...")]
    kernel_t: Option<String>,
    /// Frequencies for the principal-value lemma.
    #[arg(long = "pv-k", value_name = "K1,K2,...", allow_hyphen_values = true)]
    pv_k: Option<String>,
    /// Override one acceptance tolerance.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[arg(long)]
    threads: Option<String>,
    /// Output directory; stdout when absent.
    #[arg(long, value_name = "DIR")]
    output: Option<String>,
    #[arg(long)]
    format: Option<String>,
    /// Record wall-clock seconds and the worker count in the output.
    #[arg(long)]
    timing: bool,
}

const KEYS: [&str; 16] = [
    "l",
    "lp",
    "x",
    "a0-x",
    "v",
    "w",
    "g",
    "sharpness",
    "kernel-k",
    "kernel-t",
    "pv-k",
    "threads",
    "output",
    "format",
    "timing",
    "tol",
];

/// Flag values, environment and config file, in that order of precedence.
struct Layers {
    flags: BTreeMap<&'static str, String>,
    env_threads: Option<String>,
    file: BTreeMap<String, String>,
}

impl Layers {
    fn raw(&self, key: &str) -> Option<&str> {
        if let Some(v) = self.flags.get(key) {
            return Some(v);
        }
        if key == "threads" {
            if let Some(v) = &self.env_threads {
                return Some(v);
            }
        }
        self.file.get(key).map(String::as_str)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.raw(key)
            .map(|s| s.trim().parse::<T>().map_err(|e| CliError::invalid(key, e)))
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: Display,
    {
        self.raw(key).map(|s| parse_list(key, s)).transpose()
    }
}

fn parse_list<T: FromStr>(key: &str, s: &str) -> Result<Vec<T>>
where
    T::Err: Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<T>()
                .map_err(|e| CliError::invalid(key, format!("`{p}`: {e}")))
        })
        .collect()
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected key = value",
                path.display(),
                i + 1
            ))
        })?;
        let key = key.trim();
        let base = key.split('.').next().unwrap_or(key);
        if !KEYS.contains(&base) || (base == "tol") != key.starts_with("tol.") {
            return Err(CliError::invalid(
                key,
                format!("unknown key in {}", path.display()),
            ));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn support(
    layers: &Layers,
    key: &str,
    default: (f64, f64),
    profile: BumpProfile,
) -> Result<BumpFunction> {
    let (a, b) = match layers.list::<f64>(key)? {
        None => default,
        Some(ab) if ab.len() == 2 => (ab[0], ab[1]),
        Some(_) => return Err(CliError::invalid(key, "expected two values A,B")),
    };
    if a.is_nan() || a <= 0.0 {
        return Err(CliError::invalid(key, "support must lie in (0, ∞)"));
    }
    BumpFunction::with_profile(a, b, profile, 1.0).map_err(|e| CliError::invalid(key, e))
}

fn ladder(key: &str, values: Vec<f64>) -> Result<XLadder> {
    XLadder::new(values).map_err(|e| CliError::invalid(key, e))
}

/// Parses `argv` (program name first) using the process environment.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    parse_args_with_env(argv, std::env::var(THREADS_ENV).ok())
}

/// [`parse_args`] with an explicit value for [`THREADS_ENV`].
pub fn parse_args_with_env<I, T>(argv: I, env_threads: Option<String>) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Info(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };
    let flags: BTreeMap<&'static str, String> = [
        ("l", &args.l),
        ("lp", &args.lp),
        ("x", &args.x),
        ("a0-x", &args.a0_x),
        ("v", &args.v),
        ("w", &args.w),
        ("g", &args.g),
        ("sharpness", &args.sharpness),
        ("kernel-k", &args.kernel_k),
        ("kernel-t", &args.kernel_t),
        ("pv-k", &args.pv_k),
        ("threads", &args.threads),
        ("output", &args.output),
        ("format", &args.format),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
    .chain(args.timing.then(|| ("timing", "true".to_string())))
    .collect();
    let layers = Layers {
        flags,
        env_threads,
        file,
    };

    let l = layers.parse::<u64>("l")?;
    let lp = layers.parse::<u64>("lp")?;
    for (key, value) in [("l", l), ("lp", lp)] {
        if value == Some(0) {
            return Err(CliError::invalid(key, "must be a positive integer"));
        }
    }
    let pairs = match (l, lp, args.command) {
        (None, None, Command::All) => vec![(1, 1), (1, 2)],
        _ => vec![(l.unwrap_or(1), lp.unwrap_or(1))],
    };

    let profile = match layers.parse::<f64>("sharpness")? {
        None => BumpProfile::Classic,
        Some(s) if s > 0.0 && s.is_finite() => BumpProfile::LogSmooth { sharpness: s },
        Some(_) => return Err(CliError::invalid("sharpness", "must be positive")),
    };
    let v = support(&layers, "v", (1.0, 6.0), profile)?;
    let w = support(&layers, "w", (2.0, 8.0), profile)?;
    let g = normalize_weight(&support(&layers, "g", (1.0, 2.0), profile)?)
        .map_err(|e| CliError::invalid("g", e))?;

    let x = layers.list::<f64>("x")?;
    let a0_x = layers.list::<f64>("a0-x")?;
    let a0_values = match (a0_x, args.command) {
        (Some(xs), _) => xs,
        (None, Command::RunA0) => x.clone().unwrap_or_else(|| vec![100.0, 1000.0, 10_000.0]),
        (None, _) => vec![100.0, 1000.0, 10_000.0],
    };
    let ladder_values = x.unwrap_or_else(|| XLadder::standard().values().to_vec());

    let kernel_k = layers
        .list::<u32>("kernel-k")?
        .unwrap_or_else(|| vec![2, 4, 6, 8]);
    if let Some(k) = kernel_k.iter().find(|&&k| k == 0 || k % 2 != 0) {
        return Err(CliError::invalid(
            "kernel-k",
            format!("{k} is not a positive even weight"),
        ));
    }
    let kernel_t = layers
        .list::<f64>("kernel-t")?
        .unwrap_or_else(|| vec![0.3, 1.0, 2.5]);
    if kernel_t.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(CliError::invalid("kernel-t", "values must be positive"));
    }
    let pv_k = layers
        .list::<f64>("pv-k")?
        .unwrap_or_else(|| vec![1.0, 2.0, 4.0, 8.0, 14.0, 20.0, -14.0]);
    if pv_k.iter().any(|k| !k.is_finite()) {
        return Err(CliError::invalid("pv-k", "values must be finite"));
    }

    let mut tolerances = Tolerances::default();
    let file_tols = layers
        .file
        .iter()
        .filter_map(|(k, v)| k.strip_prefix("tol.").map(|n| (n.to_string(), v.clone())));
    let flag_tols = args
        .tol
        .iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(n, v)| (n.trim().to_string(), v.to_string()))
                .ok_or_else(|| CliError::invalid("tol", format!("expected NAME=VALUE, got `{kv}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    for (name, value) in file_tols.chain(flag_tols) {
        let parsed: f64 = value
            .trim()
            .parse()
            .map_err(|e| CliError::invalid(&format!("tol.{name}"), e))?;
        tolerances.set(&name, parsed)?;
    }

    let threads = match layers.parse::<usize>("threads")? {
        Some(0) => return Err(CliError::invalid("threads", "must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let format = match layers.raw("format") {
        None => Format::Csv,
        Some(s) => Format::from_str(s.trim(), true).map_err(|e| CliError::invalid("format", e))?,
    };
    let timing = layers.parse::<bool>("timing")?.unwrap_or(false);

    Ok(RunConfig {
        command: args.command,
        pairs,
        v,
        w,
        g,
        ladder: ladder("x", ladder_values)?,
        a0_ladder: ladder("a0-x", a0_values)?,
        kernel_k,
        kernel_t,
        pv_k,
        tolerances,
        threads,
        output: layers.raw("output").map(|s| PathBuf::from(s.trim())),
        format,
        timing,
    })
}
