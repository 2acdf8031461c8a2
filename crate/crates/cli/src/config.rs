//! Run configuration: command-line flags layered over an optional TOML file.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use critbind_core::potentials::{load_tabulated, make_catalog_potential, PotentialKind, RadialPotential};
use critbind_core::radial::{RadialGrid, DEFAULT_NODES, DEFAULT_RMAX};
use critbind_core::twod::DEFAULT_GUARD;

use crate::CliError;

pub const MAX_COUNT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Layout of the TOML file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub two_center: TwoCenterSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub kind: Option<String>,
    /// Two-column `r v` text file, relative to the config file.
    pub table: Option<PathBuf>,
    pub a: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub eps: Option<f64>,
    pub grid_nodes: Option<usize>,
    pub rmax: Option<f64>,
    pub guard: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub lambda: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub count: Option<usize>,
    pub spacing: Option<Spacing>,
    pub window: Option<[f64; 2]>,
    pub points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCenterSection {
    pub kappa0: Option<f64>,
    pub lambda: Option<f64>,
    pub separations: Option<Vec<f64>>,
    pub composed: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let (Some(t), Some(dir)) = (&cfg.potential.table, path.parent()) {
            if t.is_relative() {
                cfg.potential.table = Some(dir.join(t));
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Kind(PotentialKind),
    Table(PathBuf),
}

impl PotentialSpec {
    /// A kind name, or failing that an existing file.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.parse::<PotentialKind>() {
            Ok(PotentialKind::Tabulated) => Err(CliError::Config("give the table file path instead of `tabulated`".into())),
            Ok(k) => Ok(Self::Kind(k)),
            Err(_) if Path::new(s).is_file() => Ok(Self::Table(PathBuf::from(s))),
            Err(e) => Err(CliError::Config(e.to_string())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Kind(k) => k.to_string(),
            Self::Table(p) => format!("table:{}", p.display()),
        }
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    /// Range `a`; every input and output length is in units of it.
    pub a: f64,
    pub eps: f64,
    pub lambda: Option<f64>,
    pub lambda_range: Option<(f64, f64)>,
    pub count: usize,
    pub spacing: Spacing,
    pub grid_nodes: usize,
    /// Outer grid radius in units of the range scale of the profile.
    pub rmax: f64,
    pub guard: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub kappa0: Option<f64>,
    pub separations: Vec<f64>,
    pub composed: bool,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Flag values; `None` falls through to the file, then to defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub potential: Option<String>,
    pub a: Option<f64>,
    pub eps: Option<f64>,
    pub lambda: Option<f64>,
    pub lambda_range: Option<(f64, f64)>,
    pub count: Option<usize>,
    pub spacing: Option<Spacing>,
    pub grid_nodes: Option<usize>,
    pub rmax: Option<f64>,
    pub guard: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub points: Option<usize>,
    pub kappa0: Option<f64>,
    pub separations: Option<Vec<f64>>,
    pub composed: bool,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {x}")))
    }
}

impl RunConfig {
    pub fn resolve(flags: Overrides, file: Option<FileConfig>) -> Result<Self, CliError> {
        let file = file.unwrap_or_default();
        let potential = match (&flags.potential, &file.potential.kind, &file.potential.table) {
            (Some(s), _, _) => PotentialSpec::parse(s)?,
            (None, Some(_), Some(_)) => {
                return Err(CliError::Config("[potential] takes either kind or table, not both".into()))
            }
            (None, Some(k), None) => PotentialSpec::parse(k)?,
            (None, None, Some(t)) => PotentialSpec::Table(t.clone()),
            (None, None, None) => PotentialSpec::Kind(PotentialKind::Exponential),
        };
        let a = positive("a", flags.a.or(file.potential.a).unwrap_or(1.0))?;
        let eps = flags.eps.or(file.solver.eps).unwrap_or(1.0);
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(CliError::Config(format!("eps must be finite and non-negative, got {eps}")));
        }
        let lambda = flags.lambda.or(file.sweep.lambda).or(file.two_center.lambda);
        if let Some(l) = lambda {
            positive("lambda", l)?;
        }
        let lambda_range = match (flags.lambda_range, file.sweep.lambda_min, file.sweep.lambda_max) {
            (Some(r), _, _) => Some(r),
            (None, Some(lo), Some(hi)) => Some((lo, hi)),
            (None, None, None) => None,
            _ => return Err(CliError::Config("[sweep] needs both lambda_min and lambda_max".into())),
        };
        if let Some((lo, hi)) = lambda_range {
            positive("lambda range start", lo)?;
            if !(hi > lo && hi.is_finite()) {
                return Err(CliError::Config(format!("lambda range must increase, got {lo} .. {hi}")));
            }
        }
        let count = flags.count.or(file.sweep.count).unwrap_or(50);
        if count == 0 || count > MAX_COUNT {
            return Err(CliError::Config(format!("count must lie in 1..={MAX_COUNT}, got {count}")));
        }
        let window = flags.window.or(file.sweep.window.map(|w| (w[0], w[1]))).unwrap_or((1e-4, 1e-2));
        let separations = flags.separations.or(file.two_center.separations).unwrap_or_default();
        for &r in &separations {
            positive("separation", r)?;
        }
        let kappa0 = flags.kappa0.or(file.two_center.kappa0);
        if let Some(k) = kappa0 {
            positive("kappa0", k)?;
        }
        Ok(Self {
            potential,
            a,
            eps,
            lambda,
            lambda_range,
            count,
            spacing: flags.spacing.or(file.sweep.spacing).unwrap_or(Spacing::Linear),
            grid_nodes: flags.grid_nodes.or(file.solver.grid_nodes).unwrap_or(DEFAULT_NODES),
            rmax: positive("rmax", flags.rmax.or(file.solver.rmax).unwrap_or(DEFAULT_RMAX))?,
            guard: positive("guard", flags.guard.or(file.solver.guard).unwrap_or(DEFAULT_GUARD))?,
            window,
            points: flags.points.or(file.sweep.points).unwrap_or(12),
            kappa0,
            separations,
            composed: flags.composed || file.two_center.composed.unwrap_or(false),
            format: flags.format.or(file.output.format),
            out: flags.out.or(file.output.out),
        })
    }

    /// The profile stretched to range `a`.
    pub fn build_potential(&self) -> Result<RadialPotential, CliError> {
        Ok(match &self.potential {
            PotentialSpec::Kind(k) => make_catalog_potential(*k, self.a)?,
            PotentialSpec::Table(path) => load_table(path)?.scaled(self.a)?,
        })
    }

    pub fn build_grid(&self, p: &RadialPotential) -> Result<RadialGrid, CliError> {
        Ok(RadialGrid::new(p, self.grid_nodes, self.rmax * p.range_a())?)
    }

    /// Couplings in units of `a⁻²`.
    pub fn lambdas(&self) -> Result<Vec<f64>, CliError> {
        match (self.lambda_range, self.lambda) {
            (Some((lo, hi)), _) => {
                let n = self.count;
                if n == 1 {
                    return Ok(vec![lo]);
                }
                Ok((0..n)
                    .map(|k| {
                        let t = k as f64 / (n - 1) as f64;
                        match self.spacing {
                            Spacing::Linear => lo + (hi - lo) * t,
                            Spacing::Log => lo * (hi / lo).powf(t),
                        }
                    })
                    .collect())
            }
            (None, Some(l)) => Ok(vec![l]),
            (None, None) => Err(CliError::Config("no coupling given (use --lambda or --lambda-range)".into())),
        }
    }
}

/// Reads `r v` pairs separated by whitespace or commas; `#` starts a comment.
pub fn load_table(path: &Path) -> Result<RadialPotential, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::Config(format!("{}:{}: `{s}` is not a number", path.display(), n + 1)))
        };
        if fields.len() != 2 {
            return Err(CliError::Config(format!("{}:{}: expected two columns", path.display(), n + 1)));
        }
        points.push((parse(fields[0])?, parse(fields[1])?));
    }
    Ok(load_tabulated(&points)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file: FileConfig = toml::from_str(
            "[potential]\nkind = \"gaussian\"\na = 2.0\n[solver]\neps = 0.5\n[sweep]\nlambda_min = 1.0\nlambda_max = 2.0\ncount = 3\n",
        )
        .unwrap();
        let flags = Overrides {
            eps: Some(1.5),
            ..Overrides::default()
        };
        let c = RunConfig::resolve(flags, Some(file)).unwrap();
        assert_eq!(c.potential, PotentialSpec::Kind(PotentialKind::Gaussian));
        assert_eq!((c.a, c.eps), (2.0, 1.5));
        assert_eq!(c.lambdas().unwrap(), vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn rejects_bad_settings() {
        let bad = |o: Overrides| RunConfig::resolve(o, None).is_err();
        assert!(bad(Overrides { potential: Some("coulomb".into()), ..Default::default() }));
        assert!(bad(Overrides { lambda_range: Some((2.0, 1.0)), ..Default::default() }));
        assert!(bad(Overrides { count: Some(200_000), ..Default::default() }));
        assert!(bad(Overrides { eps: Some(-1.0), ..Default::default() }));
        assert!(toml::from_str::<FileConfig>("[solver]\nepsilon = 1.0\n").is_err());
    }

    #[test]
    fn log_spacing() {
        let o = Overrides {
            lambda_range: Some((1.0, 100.0)),
            count: Some(3),
            spacing: Some(Spacing::Log),
            ..Default::default()
        };
        let l = RunConfig::resolve(o, None).unwrap().lambdas().unwrap();
        assert!((l[1] - 10.0).abs() < 1e-12);
    }
}
