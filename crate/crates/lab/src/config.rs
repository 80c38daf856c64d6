//! Flags, the optional TOML file that mirrors them, and the merged run
//! configuration. Flags win over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer};

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "emden", version, about = "Polytropes, homology invariants and central-field orbits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub params: Params,
    /// TOML file with keys named like the flags (`rho_c`, `mu_e`, ...).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Surface and core constants for a list of indices.
    Table2 {
        /// 6 significant digits instead of the table's own precision.
        #[arg(long)]
        sig6: bool,
    },
    /// Emden profile with invariants and fractional radius, mass and density.
    Profile,
    /// The regular branch of the (u, w) plane.
    Invariants,
    /// Structure rebuilt from the (u, w) curve alone.
    Reconstruct,
    /// Closed-form approximants against the integrated profile.
    Approx {
        /// picard, pade3, poly10 or taylorK (K even).
        #[arg(long, value_delimiter = ',')]
        kind: Vec<String>,
    },
    /// Scaling charge and its balance law.
    Noether,
    /// Chandrasekhar mass of the n = 3 white dwarf.
    Wd,
    /// Eddington standard model on the main sequence.
    Zams {
        /// CSV with columns M (solar masses) and mu.
        #[arg(long, value_name = "FILE")]
        batch: Option<PathBuf>,
    },
    /// Orbit in V = -sgn(n) k r^-n, or a period-amplitude sweep.
    Orbit {
        #[arg(long)]
        sweep: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Table2 { .. } => "table2",
            Command::Profile => "profile",
            Command::Invariants => "invariants",
            Command::Reconstruct => "reconstruct",
            Command::Approx { .. } => "approx",
            Command::Noether => "noether",
            Command::Wd => "wd",
            Command::Zams { .. } => "zams",
            Command::Orbit { .. } => "orbit",
        }
    }
}

/// Settings shared by the flags and the config file.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Polytropic index list; the potential exponent for `orbit`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub n: Option<Vec<f64>>,
    /// Relative integration tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Polytropic constant (CGS), or the potential strength for `orbit`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Central density, g/cm^3.
    #[arg(long = "rho-c", global = true)]
    #[serde(alias = "rho-c")]
    pub rho_c: Option<f64>,
    /// Stellar mass list in solar masses.
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub mass: Option<Vec<f64>>,
    /// Mean molecular weight.
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    /// Mean molecular weight per electron.
    #[arg(long = "mu-e", global = true)]
    #[serde(alias = "mu-e")]
    pub mu_e: Option<f64>,
    /// Photospheric opacity, cm^2/g.
    #[arg(long = "kappa-p", global = true)]
    #[serde(alias = "kappa-p")]
    pub kappa_p: Option<f64>,
    /// Upper end of the comparison range for `approx`.
    #[arg(long = "xi-max", global = true)]
    #[serde(alias = "xi-max")]
    pub xi_max: Option<f64>,
    /// Grid size for `approx`.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Starting radius for `orbit`.
    #[arg(long, global = true)]
    pub r0: Option<f64>,
    /// Starting radial velocity.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub vr: Option<f64>,
    /// Starting tangential velocity.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub vt: Option<f64>,
    #[arg(long = "t-end", global = true)]
    #[serde(alias = "t-end")]
    pub t_end: Option<f64>,
    /// Apocenter radii for the sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub amplitudes: Option<Vec<f64>>,
    /// Tangential speed at apocenter over the circular speed.
    #[arg(long, global = true)]
    pub shape: Option<f64>,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(Some(match OneOrMany::deserialize(d)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    }))
}

macro_rules! overlay {
    ($flags:expr, $file:expr, $($field:ident),*) => {
        Params { $($field: $flags.$field.or($file.$field)),* }
    };
}

impl Params {
    /// Flags first, file second.
    pub fn over(self, file: Params) -> Params {
        overlay!(
            self, file, n, tol, format, out, k, rho_c, mass, mu, mu_e, kappa_p, xi_max, samples, r0, vr, vt,
            t_end, amplitudes, shape
        )
    }

    pub fn load(path: &Path) -> LabResult<Params> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|source| LabError::Config { path: path.into(), source })
    }

    /// Reject values no command accepts before any solver runs.
    pub fn validate(&self) -> LabResult<()> {
        let positive = [
            ("tol", self.tol),
            ("rho_c", self.rho_c),
            ("mu", self.mu),
            ("mu_e", self.mu_e),
            ("kappa_p", self.kappa_p),
            ("xi_max", self.xi_max),
            ("r0", self.r0),
            ("t_end", self.t_end),
            ("shape", self.shape),
        ];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(LabError::Usage(format!("{name} must be positive and finite, got {v}")));
                }
            }
        }
        for (name, list) in [("mass", &self.mass), ("amplitudes", &self.amplitudes)] {
            if let Some(v) = list.iter().flatten().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(LabError::Usage(format!("{name} entries must be positive, got {v}")));
            }
        }
        if let Some(v) = self.n.iter().flatten().find(|v| !v.is_finite()) {
            return Err(LabError::Usage(format!("n must be finite, got {v}")));
        }
        for (name, v) in [("k", self.k), ("vr", self.vr), ("vt", self.vt)] {
            if let Some(v) = v.filter(|v| !v.is_finite()) {
                return Err(LabError::Usage(format!("{name} must be finite, got {v}")));
            }
        }
        if self.samples.is_some_and(|s| s < 2) {
            return Err(LabError::Usage("samples must be at least 2".into()));
        }
        Ok(())
    }
}

/// Everything a command needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> LabResult<RunConfig> {
        let file = match &cli.config {
            Some(path) => Params::load(path)?,
            None => Params::default(),
        };
        let params = cli.params.over(file);
        params.validate()?;
        Ok(RunConfig { command: cli.command, params })
    }

    pub fn format(&self) -> Format {
        self.params.format.unwrap_or(match &self.command {
            Command::Wd | Command::Zams { .. } | Command::Orbit { sweep: true } => Format::Json,
            _ => Format::Csv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file: Params = toml::from_str("n = 3\nmu = 0.5\nmass = [1, 2]\nrho-c = 10.0").unwrap();
        let cli = Cli::try_parse_from(["emden", "zams", "--mu", "0.7"]).unwrap();
        let p = cli.params.over(file);
        assert_eq!(p.mu, Some(0.7));
        assert_eq!(p.n, Some(vec![3.0]));
        assert_eq!(p.mass, Some(vec![1.0, 2.0]));
        assert_eq!(p.rho_c, Some(10.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Params>("nn = 3").is_err());
    }

    #[test]
    fn negative_exponents_parse() {
        let cli = Cli::try_parse_from(["emden", "orbit", "--n", "-2,-1", "--vr", "-0.1"]).unwrap();
        assert_eq!(cli.params.n, Some(vec![-2.0, -1.0]));
        assert_eq!(cli.params.vr, Some(-0.1));
    }

    #[test]
    fn default_formats() {
        let cfg = |args: &[&str]| RunConfig::from_cli(Cli::try_parse_from(args).unwrap()).unwrap().format();
        assert_eq!(cfg(&["emden", "wd"]), Format::Json);
        assert_eq!(cfg(&["emden", "orbit"]), Format::Csv);
        assert_eq!(cfg(&["emden", "orbit", "--sweep"]), Format::Json);
        assert_eq!(cfg(&["emden", "wd", "--format", "csv"]), Format::Csv);
    }

    #[test]
    fn bad_values_are_usage_errors() {
        let cli = Cli::try_parse_from(["emden", "wd", "--mu-e", "0"]).unwrap();
        assert_eq!(RunConfig::from_cli(cli).unwrap_err().exit_code(), 2);
    }
}
