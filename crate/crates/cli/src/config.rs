//! Run configuration: command-line flags layered over an optional TOML file.
//!
//! Every flag has a config key of the same name with `-` replaced by `_`.
//! Scalars and arrays are both accepted for list-valued keys:
//!
//! ```toml
//! d = [1, 2]
//! alpha = 1.5
//! kappa = ["1/2", "3/2"]
//! radius_grid = "0.1:100:30:log"
//! tol = 1e-8
//! ```

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use stablekernel::bounds::log_grid;
use stablekernel::KappaOrder;

use crate::CliError;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file mirroring the flags; flags win on conflict.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Dimension(s), comma separated.
    #[arg(long, value_delimiter = ',', global = true)]
    pub d: Vec<u32>,
    /// Stability index(es) in (0, 2).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true)]
    pub alpha: Vec<f64>,
    /// Diffusivity(ies) c > 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true)]
    pub c: Vec<f64>,
    /// Order(s) as exact rationals "num/den".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true)]
    pub kappa: Vec<String>,
    /// Time(s) t > 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true)]
    pub t: Vec<f64>,
    /// Radius values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true, conflicts_with = "radius_grid")]
    pub radius: Vec<f64>,
    /// Radius grid "start:stop:points:log" (or ":lin").
    #[arg(long, global = true)]
    pub radius_grid: Option<String>,
    /// Threshold epsilon(s) in (0, 1).
    #[arg(long, value_delimiter = ',', global = true)]
    pub eps: Vec<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Bg,
    Sup,
    Classical,
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Laplacian,
    Gradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    Radius,
    Tol,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum KappaValue {
    Int(i64),
    Text(String),
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    d: Option<OneOrMany<u32>>,
    alpha: Option<OneOrMany<f64>>,
    c: Option<OneOrMany<f64>>,
    kappa: Option<OneOrMany<KappaValue>>,
    t: Option<OneOrMany<f64>>,
    radius: Option<OneOrMany<f64>>,
    radius_grid: Option<String>,
    x: Option<Vec<Vec<f64>>>,
    eps: Option<OneOrMany<f64>>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    check: Option<Check>,
    op: Option<Op>,
    budget: Option<f64>,
    study: Option<Study>,
    tols: Option<OneOrMany<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub d: Vec<u32>,
    pub alpha: Vec<f64>,
    pub c: Vec<f64>,
    pub kappa: Vec<KappaOrder>,
    /// Explicit times, if any were given.
    pub t: Option<Vec<f64>>,
    /// Explicit radii, if any were given.
    pub radius: Option<Vec<f64>>,
    pub x: Vec<Vec<f64>>,
    pub eps: Vec<f64>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub check: Check,
    pub op: Op,
    pub budget: f64,
    pub study: Study,
    pub tols: Option<Vec<f64>>,
}

/// Subcommand-specific flags, already parsed by clap.
#[derive(Debug, Clone, Default)]
pub struct Extra {
    pub x: Vec<String>,
    pub check: Option<Check>,
    pub op: Option<Op>,
    pub budget: Option<f64>,
    pub study: Option<Study>,
    pub tols: Vec<f64>,
}

pub const DEFAULT_TOL: f64 = 1e-7;

fn pick<T>(flag: Vec<T>, file: Option<OneOrMany<T>>, default: Vec<T>) -> Vec<T> {
    if !flag.is_empty() {
        flag
    } else {
        file.map(OneOrMany::into_vec).unwrap_or(default)
    }
}

pub fn parse_kappa(s: &str) -> Result<KappaOrder, CliError> {
    s.parse::<KappaOrder>().map_err(CliError::from)
}

/// `"start:stop:points:log"` or `"start:stop:points:lin"`; the spacing
/// defaults to `log`.
pub fn parse_radius_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::usage(format!("invalid radius grid {spec:?}: {why}"));
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad("expected start:stop:points:log"));
    }
    let start: f64 = parts[0].parse().map_err(|_| bad("start is not a number"))?;
    let stop: f64 = parts[1].parse().map_err(|_| bad("stop is not a number"))?;
    let points: usize = parts[2].parse().map_err(|_| bad("points is not a positive integer"))?;
    if points == 0 {
        return Err(bad("points must be >= 1"));
    }
    if !(start.is_finite() && stop.is_finite()) || start > stop || start < 0.0 {
        return Err(bad("need 0 <= start <= stop"));
    }
    match parts.get(3).copied().unwrap_or("log") {
        "log" => {
            if start <= 0.0 {
                return Err(bad("a log grid needs start > 0"));
            }
            Ok(if points == 1 { vec![start] } else { log_grid(start, stop, points) })
        }
        "lin" => Ok(if points == 1 {
            vec![start]
        } else {
            (0..points).map(|i| start + (stop - start) * i as f64 / (points - 1) as f64).collect()
        }),
        other => Err(bad(&format!("unknown spacing {other:?}, expected log or lin"))),
    }
}

fn parse_point(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::usage(format!("invalid point {s:?}"))))
        .collect()
}

impl RunConfig {
    pub fn resolve(common: CommonArgs, extra: Extra) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let kappa_text: Vec<String> = if !common.kappa.is_empty() {
            common.kappa
        } else {
            match file.kappa {
                Some(k) => k
                    .into_vec()
                    .into_iter()
                    .map(|v| match v {
                        KappaValue::Int(n) => n.to_string(),
                        KappaValue::Text(s) => s,
                    })
                    .collect(),
                None => vec!["0/1".into()],
            }
        };
        let kappa = kappa_text.iter().map(|s| parse_kappa(s)).collect::<Result<Vec<_>, _>>()?;

        let radius = if !common.radius.is_empty() {
            Some(common.radius)
        } else if let Some(g) = &common.radius_grid {
            Some(parse_radius_grid(g)?)
        } else if let Some(r) = file.radius {
            Some(r.into_vec())
        } else if let Some(g) = &file.radius_grid {
            Some(parse_radius_grid(g)?)
        } else {
            None
        };

        let x = if !extra.x.is_empty() {
            extra.x.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?
        } else {
            file.x.unwrap_or_default()
        };

        let tols = if !extra.tols.is_empty() { Some(extra.tols) } else { file.tols.map(OneOrMany::into_vec) };

        let cfg = RunConfig {
            d: pick(common.d, file.d, vec![1]),
            alpha: pick(common.alpha, file.alpha, vec![1.0]),
            c: pick(common.c, file.c, vec![1.0]),
            kappa,
            t: if !common.t.is_empty() { Some(common.t) } else { file.t.map(OneOrMany::into_vec) },
            radius,
            x,
            eps: pick(common.eps, file.eps, vec![0.1]),
            tol: common.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            out: common.out.or(file.out),
            check: extra.check.or(file.check).unwrap_or(Check::Bg),
            op: extra.op.or(file.op).unwrap_or(Op::Laplacian),
            budget: extra.budget.or(file.budget).unwrap_or(stablekernel::bounds::RADIUS_BUDGET),
            study: extra.study.or(file.study).unwrap_or(Study::Radius),
            tols,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let empty = |name: &str| CliError::usage(format!("{name} list is empty"));
        if self.d.is_empty() {
            return Err(empty("d"));
        }
        if self.alpha.is_empty() {
            return Err(empty("alpha"));
        }
        if self.c.is_empty() {
            return Err(empty("c"));
        }
        if self.kappa.is_empty() {
            return Err(empty("kappa"));
        }
        if matches!(&self.t, Some(t) if t.is_empty()) {
            return Err(empty("t"));
        }
        if self.eps.is_empty() {
            return Err(empty("eps"));
        }
        if matches!(&self.radius, Some(r) if r.is_empty()) {
            return Err(empty("radius"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::domain(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        Ok(())
    }

    /// The single `(d, α, c, κ)` of subcommands that take one parameter set.
    pub fn times_or(&self, default: Vec<f64>) -> Vec<f64> {
        self.t.clone().unwrap_or(default)
    }

    pub fn single(&self) -> Result<(u32, f64, f64, KappaOrder), CliError> {
        if self.d.len() > 1 || self.alpha.len() > 1 || self.c.len() > 1 || self.kappa.len() > 1 {
            return Err(CliError::usage("this subcommand takes a single d, alpha, c and kappa"));
        }
        Ok((self.d[0], self.alpha[0], self.c[0], self.kappa[0]))
    }
}
