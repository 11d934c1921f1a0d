//! `verify-identity3`: the damped half-line weight `e^{-omega x4}/(2 omega)`
//! against its frequency-line integral `(1/2pi) int e^{i k4 x4}/(k4^2+omega^2)`,
//! swept over a mass / momentum / Euclidean-time grid.

use nclab_core::kernels::{damped_weight, damped_weight_via_frequency_integral, omega};
use nclab_core::spacetime::{Mass, SpatialVector};
use serde_json::json;

use crate::config::{parse_linear_grid, Settings};
use crate::plot::{line_plot, Series};
use crate::report::{fmt_f64, Csv, Output};
use crate::CliError;

pub const TOLERANCE: f64 = 1e-8;

#[derive(clap::Args, Debug, Default)]
pub struct IdentityArgs {
    /// Linear mass grid "a:b:n" (default 0.5:2:5)
    #[arg(long, value_name = "A:B:N")]
    pub m_grid: Option<String>,
    /// Linear |k| grid "a:b:n" (default 0:3:5)
    #[arg(long, value_name = "A:B:N")]
    pub k_grid: Option<String>,
    /// Linear x4 grid "a:b:n", all values > 0 (default 0.1:3:5)
    #[arg(long, value_name = "A:B:N")]
    pub x4_grid: Option<String>,
}

pub fn run(settings: &Settings, args: &IdentityArgs) -> Result<Output, CliError> {
    let m_grid = parse_linear_grid(args.m_grid.as_deref().unwrap_or("0.5:2:5"), "--m-grid")?;
    let k_grid = parse_linear_grid(args.k_grid.as_deref().unwrap_or("0:3:5"), "--k-grid")?;
    let x4_grid = parse_linear_grid(args.x4_grid.as_deref().unwrap_or("0.1:3:5"), "--x4-grid")?;
    if m_grid.iter().any(|&m| m <= 0.0) {
        return Err(CliError::Config("--m-grid: masses must be positive".into()));
    }
    if k_grid.iter().any(|&k| k < 0.0) {
        return Err(CliError::Config("--k-grid: |k| must be nonnegative".into()));
    }
    if x4_grid.iter().any(|&x| x <= 0.0) {
        return Err(CliError::Config(
            "--x4-grid: the identity holds for x4 > 0 only".into(),
        ));
    }

    let mut spec = settings.spec_for_dim(1);
    if settings.rel_tol.is_none() {
        // leave two digits of headroom under the asserted tolerance
        spec.rel_tol = 1e-10;
    }

    let mut rows = Vec::new();
    let mut max_rel = 0.0f64;
    let mut worst = (0.0, 0.0, 0.0);
    let mut all_converged = true;
    let mut evals = 0u64;
    // per (m, x4): worst relative error over the |k| grid, for the plot
    let mut plot_series: Vec<Series> = Vec::new();

    for &m_val in &m_grid {
        let m = Mass::new(m_val).map_err(|_| CliError::Config("bad mass".into()))?;
        let mut points = Vec::new();
        for &x4 in &x4_grid {
            let mut worst_over_k = 0.0f64;
            for &knorm in &k_grid {
                let k = SpatialVector::new([knorm, 0.0, 0.0])
                    .map_err(|_| CliError::Config("bad |k|".into()))?;
                let om = omega(&k, m);
                let direct = damped_weight(om, x4).map_err(crate::core_error)?;
                let via = damped_weight_via_frequency_integral(om, x4, &spec)
                    .map_err(crate::core_error)?;
                let rel = (via.value.re - direct).abs() / direct;
                evals += via.evals;
                all_converged &= via.converged;
                worst_over_k = worst_over_k.max(rel);
                if rel > max_rel {
                    max_rel = rel;
                    worst = (m_val, knorm, x4);
                }
                rows.push(vec![
                    fmt_f64(m_val),
                    fmt_f64(knorm),
                    fmt_f64(x4),
                    fmt_f64(direct),
                    fmt_f64(via.value.re),
                    fmt_f64(rel),
                    via.evals.to_string(),
                    via.converged.to_string(),
                ]);
            }
            points.push((x4, worst_over_k));
        }
        plot_series.push(Series {
            label: format!("m={m_val}"),
            points,
        });
    }

    let pass = max_rel <= TOLERANCE && all_converged;
    let results = json!({
        "tolerance": TOLERANCE,
        "gridSizes": [m_grid.len(), k_grid.len(), x4_grid.len()],
        "points": rows.len(),
        "maxRelErr": max_rel,
        "worst": {"m": worst.0, "kNorm": worst.1, "x4": worst.2},
        "allConverged": all_converged,
        "evals": evals,
    });
    let csv = Csv {
        comment: "half-line weight identity: e^{-omega x4}/(2 omega) vs (1/2pi) int e^{i k4 x4}/(k4^2+omega^2) dk4\n\
                  units: natural (mass sets the scale), x4 in inverse-mass units\n\
                  columns: mass, |k|, x4, closed form, line integral (re), relative error, evaluations, converged"
            .into(),
        header: vec![
            "m",
            "k_norm",
            "x4",
            "direct",
            "via_integral_re",
            "rel_err",
            "evals",
            "converged",
        ],
        rows,
    };
    let plots = line_plot(
        "half-line identity: worst relative error over |k|",
        "x4",
        "relative error",
        false,
        true,
        &plot_series,
    )
    .map(|svg| ("relerr".to_string(), svg))
    .into_iter()
    .collect();

    Ok(Output {
        command: "verify-identity3",
        pass,
        results,
        csv: Some(csv),
        plots,
        summary: vec![format!(
            "max relative error {max_rel:.3e} at m={}, |k|={}, x4={} over {} points (tolerance {TOLERANCE:.0e})",
            worst.0,
            worst.1,
            worst.2,
            m_grid.len() * k_grid.len() * x4_grid.len(),
        )],
    })
}
