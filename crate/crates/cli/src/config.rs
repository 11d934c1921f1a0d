//! Run configuration: TOML file values overridden by command-line flags,
//! resolved into validated domain objects.

use std::path::{Path, PathBuf};

use nclab_core::quadrature::{QuadratureSpec, Regulator};
use nclab_core::spacetime::{Mass, ThetaMatrix};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Antisymmetry slack accepted for an explicit twist matrix before it is
/// exactly antisymmetrized.
const THETA_TOL: f64 = 1e-14;

/// Default seed for randomized checks; override with `--seed` or the
/// `seed` config key.
pub const DEFAULT_SEED: u64 = 42;

/// Raw config file contents.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mass: Option<f64>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub theta: Option<ThetaConfig>,
    pub quadrature: Option<QuadratureConfig>,
}

/// Twist matrix: either the two block parameters of the standard
/// antisymmetric form, or an explicit 4x4 matrix (row-major, must be
/// antisymmetric to 1e-14).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaConfig {
    pub standard: Option<[f64; 2]>,
    pub explicit: Option<[[f64; 4]; 4]>,
}

/// Quadrature overrides applied on top of the per-dimension defaults.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_evals: Option<u64>,
    pub cutoff: Option<f64>,
    pub regulator: Option<String>,
}

/// Flag values that override file values (a subset of the file schema).
#[derive(Debug, Default)]
pub struct Overrides {
    pub mass: Option<f64>,
    pub theta: Option<[f64; 2]>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub rel_tol: Option<f64>,
    pub max_evals: Option<u64>,
}

/// Fully resolved settings shared by every command.
#[derive(Debug, Clone)]
pub struct Settings {
    pub mass: Mass,
    pub theta: ThetaMatrix,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_evals: Option<u64>,
    pub cutoff: Option<f64>,
    pub regulator: Regulator,
}

/// Echo of the resolved settings embedded in every report.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub mass: f64,
    pub theta: [[f64; 4]; 4],
    pub seed: u64,
    pub regulator: &'static str,
    #[serde(rename = "relTol", skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(rename = "absTol", skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(rename = "maxEvals", skip_serializing_if = "Option::is_none")]
    pub max_evals: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
}

impl Settings {
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", p.display()))
                })?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Config(format!("bad config {}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };

        let mass_value = overrides.mass.or(file.mass).unwrap_or(1.0);
        let mass = Mass::new(mass_value)
            .map_err(|_| CliError::Config(format!("mass must be finite and > 0, got {mass_value}")))?;

        let theta = if let Some([l1, l2]) = overrides.theta {
            ThetaMatrix::standard(l1, l2)
                .map_err(|_| CliError::Config(format!("bad theta parameters {l1},{l2}")))?
        } else {
            build_theta(file.theta.as_ref())?
        };

        let quad = file.quadrature.unwrap_or_default();
        let regulator = match quad.regulator.as_deref() {
            None | Some("gaussian") => Regulator::Gaussian,
            Some("sharp") => Regulator::Sharp,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "regulator must be \"gaussian\" or \"sharp\", got \"{other}\""
                )))
            }
        };
        let rel_tol = overrides.rel_tol.or(quad.rel_tol);
        if let Some(r) = rel_tol {
            if !(r.is_finite() && r > 0.0) {
                return Err(CliError::Config(format!("rel_tol must be > 0, got {r}")));
            }
        }
        let max_evals = overrides.max_evals.or(quad.max_evals);
        if max_evals == Some(0) {
            return Err(CliError::Config("max_evals must be positive".into()));
        }

        Ok(Settings {
            mass,
            theta,
            seed: overrides.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out_dir: overrides
                .out
                .clone()
                .or(file.output_dir)
                .unwrap_or_else(|| PathBuf::from("out")),
            rel_tol,
            abs_tol: quad.abs_tol,
            max_evals,
            cutoff: quad.cutoff,
            regulator,
        })
    }

    /// Per-dimension quadrature defaults with the configured overrides
    /// applied.
    pub fn spec_for_dim(&self, dim: usize) -> QuadratureSpec {
        let mut spec = QuadratureSpec::default_for_dim(dim);
        if let Some(r) = self.rel_tol {
            spec.rel_tol = r;
        }
        if let Some(a) = self.abs_tol {
            spec.abs_tol = a;
        }
        if let Some(n) = self.max_evals {
            spec.max_evals = n;
        }
        if let Some(c) = self.cutoff {
            spec.cutoff = c;
        }
        spec.regulator = self.regulator;
        spec
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            mass: self.mass.value(),
            theta: self.theta.entries(),
            seed: self.seed,
            regulator: match self.regulator {
                Regulator::Gaussian => "gaussian",
                Regulator::Sharp => "sharp",
            },
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_evals: self.max_evals,
            cutoff: self.cutoff,
        }
    }
}

fn build_theta(cfg: Option<&ThetaConfig>) -> Result<ThetaMatrix, CliError> {
    match cfg {
        None => ThetaMatrix::standard(1.0, 1.0)
            .map_err(|_| CliError::Config("default theta failed".into())),
        Some(t) => match (&t.standard, &t.explicit) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "theta: give either `standard` or `explicit`, not both".into(),
            )),
            (Some([l1, l2]), None) => ThetaMatrix::standard(*l1, *l2)
                .map_err(|_| CliError::Config(format!("bad theta parameters {l1},{l2}"))),
            (None, Some(entries)) => ThetaMatrix::antisymmetrize(*entries, THETA_TOL)
                .map_err(|_| {
                    CliError::Config(
                        "explicit theta must be antisymmetric to 1e-14 with finite entries".into(),
                    )
                }),
            (None, None) => Err(CliError::Config(
                "theta section needs `standard = [l1, l2]` or `explicit = [[...]]`".into(),
            )),
        },
    }
}

/// Parses `"a:b:n"` into `n` linearly spaced values from `a` to `b`.
pub fn parse_linear_grid(text: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let (a, b, n) = parse_grid_parts(text, name)?;
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|i| a + step * i as f64).collect())
}

/// Parses `"a:b:n"` into `n` log-spaced values from `a` to `b` (both
/// positive).
pub fn parse_log_grid(text: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let (a, b, n) = parse_grid_parts(text, name)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(CliError::Config(format!(
            "{name}: log grid endpoints must be positive, got {a}:{b}"
        )));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let ratio = b / a;
    Ok((0..n)
        .map(|i| a * ratio.powf(i as f64 / (n - 1) as f64))
        .collect())
}

fn parse_grid_parts(text: &str, name: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Config(format!("{name}: expected \"a:b:n\", got \"{text}\""));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite()) || n == 0 {
        return Err(bad());
    }
    Ok((a, b, n))
}

/// Parses a comma-separated list of floats.
pub fn parse_f64_list(text: &str, name: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("{name}: bad number \"{s}\"")))
        })
        .collect()
}

/// Parses `"l1,l2"` twist parameters.
pub fn parse_theta_pair(text: &str) -> Result<[f64; 2], CliError> {
    let v = parse_f64_list(text, "--theta")?;
    if v.len() != 2 {
        return Err(CliError::Config(format!(
            "--theta: expected \"l1,l2\", got \"{text}\""
        )));
    }
    Ok([v[0], v[1]])
}

/// Parses semicolon-separated 4-component points, e.g. `"0,0,0,0;1,0,0,0.5"`.
pub fn parse_points4(text: &str, name: &str) -> Result<Vec<[f64; 4]>, CliError> {
    text.split(';')
        .map(|chunk| {
            let v = parse_f64_list(chunk, name)?;
            v.try_into()
                .map_err(|_| CliError::Config(format!("{name}: each point needs 4 components")))
        })
        .collect()
}
