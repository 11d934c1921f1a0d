//! `tadpole-scan`: one-loop self-energy integrals over a grid of external
//! momenta and momentum cutoffs, with least-squares growth diagnostics
//! (slope against `ln L` and against `L^2`, and the momentum exponent of
//! the value at fixed cutoff).
//!
//! Cells are distributed over a local thread pool sized by the
//! `NCLAB_THREADS` environment variable (unset or `0` = one thread per
//! core). Each cell is internally sequential, so the emitted numbers are
//! identical for every thread count.

use nclab_core::kernels::TwistKind;
use nclab_core::loops::{scan_result_from_rows, scan_row, GraphKind, ScanGrid, SlopeFit};
use nclab_core::quadrature::Regulator;
use nclab_core::spacetime::FourVector;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{parse_f64_list, parse_log_grid, Settings};
use crate::plot::{line_plot, Series};
use crate::report::{fmt_f64, Csv, Output};
use crate::CliError;

#[derive(clap::ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GraphArg {
    /// Single regulated propagator (quadratic growth untwisted)
    #[default]
    OnePropagator,
    /// Two-propagator convolution (logarithmic growth untwisted)
    Bubble,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TwistArg {
    /// No oscillating phase
    None,
    /// Phase from the full Euclidean four-momenta
    #[default]
    OffShell,
    /// Phase from the mass-shell lifts of the spatial momenta
    OnShell,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegulatorArg {
    Gaussian,
    Sharp,
}

#[derive(clap::Args, Debug, Default)]
pub struct ScanArgs {
    /// Loop graph to scan
    #[arg(long, value_enum)]
    pub graph: Option<GraphArg>,
    /// Twist applied to the loop integrand
    #[arg(long, value_enum)]
    pub twist: Option<TwistArg>,
    /// External momentum magnitudes along the first spatial axis
    /// (default "0.25,0.5,1,2")
    #[arg(long, value_name = "K1,K2,...")]
    pub k_norms: Option<String>,
    /// Log-spaced cutoff grid "a:b:n" (default "10:80:4" for the single
    /// propagator, "3:12:3" for the bubble)
    #[arg(long, value_name = "A:B:N")]
    pub cutoffs: Option<String>,
    /// Override the configured high-momentum regulator for this scan
    #[arg(long, value_enum)]
    pub regulator: Option<RegulatorArg>,
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var("NCLAB_THREADS") {
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            CliError::Config(format!("NCLAB_THREADS must be a nonnegative integer, got \"{s}\""))
        }),
        Err(_) => Ok(0),
    }
}

fn fit_json(f: &SlopeFit) -> serde_json::Value {
    json!({
        "slope": f.slope,
        "intercept": f.intercept,
        "stderr": f.stderr,
        "points": f.points,
    })
}

pub fn run(settings: &Settings, args: &ScanArgs) -> Result<Output, CliError> {
    let graph = args.graph.unwrap_or_default();
    let twist = args.twist.unwrap_or_default();
    let k_norms = parse_f64_list(args.k_norms.as_deref().unwrap_or("0.25,0.5,1,2"), "--k-norms")?;
    let default_cutoffs = match graph {
        GraphArg::OnePropagator => "10:80:4",
        GraphArg::Bubble => "3:12:3",
    };
    let cutoffs = parse_log_grid(args.cutoffs.as_deref().unwrap_or(default_cutoffs), "--cutoffs")?;

    let external_momenta: Vec<FourVector> = k_norms
        .iter()
        .map(|&k| {
            FourVector::euclidean([k, 0.0, 0.0], 0.0)
                .map_err(|_| CliError::Config(format!("--k-norms: bad magnitude {k}")))
        })
        .collect::<Result<_, _>>()?;

    let dim = match (graph, twist) {
        (GraphArg::OnePropagator, TwistArg::None | TwistArg::OffShell) => 1,
        _ => 3,
    };
    let mut settings = settings.clone();
    if let Some(r) = args.regulator {
        settings.regulator = match r {
            RegulatorArg::Gaussian => Regulator::Gaussian,
            RegulatorArg::Sharp => Regulator::Sharp,
        };
    }
    let spec = settings.spec_for_dim(dim);

    let grid = ScanGrid {
        external_momenta,
        cutoffs,
        twist: match twist {
            TwistArg::None => TwistKind::None,
            TwistArg::OffShell => TwistKind::OffShell,
            TwistArg::OnShell => TwistKind::OnShell,
        },
        theta: settings.theta,
        m: settings.mass,
        graph: match graph {
            GraphArg::OnePropagator => GraphKind::OnePropagator,
            GraphArg::Bubble => GraphKind::Bubble,
        },
        spec,
    };
    grid.validate().map_err(|_| {
        CliError::Config(
            "scan grid invalid: cutoffs must be strictly ascending and above the mass, \
             momenta Euclidean"
                .into(),
        )
    })?;

    let nk = grid.external_momenta.len();
    let nc = grid.cutoffs.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| CliError::Compute(format!("thread pool: {e}")))?;
    let rows = pool
        .install(|| {
            (0..nk * nc)
                .into_par_iter()
                .map(|i| scan_row(&grid, i / nc, i % nc))
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(crate::core_error)?;
    let scan = scan_result_from_rows(&grid, rows).map_err(crate::core_error)?;

    let mut csv_rows = Vec::new();
    let mut all_converged = true;
    let mut evals = 0u64;
    for row in &scan.rows {
        all_converged &= row.converged;
        evals += row.evals;
        csv_rows.push(vec![
            row.k_index.to_string(),
            row.cutoff_index.to_string(),
            fmt_f64(row.momentum[1]),
            fmt_f64(row.momentum[2]),
            fmt_f64(row.momentum[3]),
            fmt_f64(row.momentum[0]),
            fmt_f64(row.cutoff),
            fmt_f64(row.value.re),
            fmt_f64(row.value.im),
            fmt_f64(row.value.norm_sqr().sqrt()),
            fmt_f64(row.error_estimate),
            row.evals.to_string(),
            row.converged.to_string(),
            row.divergent.to_string(),
        ]);
    }

    let mut plot_series = Vec::new();
    for (ki, &knorm) in k_norms.iter().enumerate() {
        let points: Vec<(f64, f64)> = scan
            .rows
            .iter()
            .filter(|r| r.k_index == ki && r.value.norm_sqr().sqrt() > 0.0)
            .map(|r| (r.cutoff, r.value.norm_sqr().sqrt()))
            .collect();
        plot_series.push(Series {
            label: format!("|k|={knorm}"),
            points,
        });
    }

    let pass = all_converged;
    let results = json!({
        "graph": format!("{graph:?}"),
        "twist": format!("{twist:?}"),
        "kNorms": k_norms,
        "cutoffs": grid.cutoffs,
        "rows": scan.rows.len(),
        "allConverged": all_converged,
        "evals": evals,
        "cutoffLogSlopes": scan.cutoff_log_slopes.iter().map(fit_json).collect::<Vec<_>>(),
        "cutoffQuadraticSlopes": scan.cutoff_quadratic_slopes.iter().map(fit_json).collect::<Vec<_>>(),
        "momentumExponents": scan.momentum_exponents.iter().map(fit_json).collect::<Vec<_>>(),
    });
    let csv = Csv {
        comment: "one-loop cutoff scan; value is the regulated loop integral at the twisted\n\
                  external momentum, momentum components are Euclidean (k1,k2,k3,k4)\n\
                  columns: momentum index, cutoff index, k1, k2, k3, k4, cutoff, value (re, im, abs),\n\
                  error estimate, evaluations, converged, phase identically one"
            .into(),
        header: vec![
            "k_index",
            "cutoff_index",
            "k1",
            "k2",
            "k3",
            "k4",
            "cutoff",
            "value_re",
            "value_im",
            "value_abs",
            "error_estimate",
            "evals",
            "converged",
            "divergent",
        ],
        rows: csv_rows,
    };
    let plots = line_plot(
        "loop value magnitude against cutoff",
        "cutoff",
        "|value|",
        true,
        true,
        &plot_series,
    )
    .map(|svg| ("growth".to_string(), svg))
    .into_iter()
    .collect();

    let mut summary = vec![format!(
        "{}x{} grid ({:?}, {:?}): all cells converged = {all_converged}",
        nk, nc, graph, twist
    )];
    for (ki, &knorm) in k_norms.iter().enumerate() {
        let lg = &scan.cutoff_log_slopes[ki];
        let quad = &scan.cutoff_quadratic_slopes[ki];
        summary.push(format!(
            "|k|={knorm}: d|value|/d lnL = {:.4e} (stderr {:.1e}), d|value|/dL^2 = {:.4e} (stderr {:.1e})",
            lg.slope, lg.stderr, quad.slope, quad.stderr
        ));
    }

    Ok(Output {
        command: "tadpole-scan",
        pass,
        results,
        csv: Some(csv),
        plots,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    fn settings() -> Settings {
        Settings::resolve(None, &Overrides::default()).unwrap()
    }

    #[test]
    fn small_offshell_scan_converges_and_reports_fits() {
        let args = ScanArgs {
            k_norms: Some("0.5,1".into()),
            cutoffs: Some("10:20:2".into()),
            ..ScanArgs::default()
        };
        let out = run(&settings(), &args).unwrap();
        assert!(out.pass, "results: {}", out.results);
        assert_eq!(out.results["rows"].as_u64().unwrap(), 4);
        assert_eq!(
            out.results["cutoffLogSlopes"].as_array().unwrap().len(),
            2
        );
        let csv = out.csv.unwrap();
        assert_eq!(csv.rows.len(), 4);
    }

    #[test]
    fn descending_cutoffs_are_a_config_error() {
        let args = ScanArgs {
            cutoffs: Some("20:10:2".into()),
            ..ScanArgs::default()
        };
        assert!(matches!(run(&settings(), &args), Err(CliError::Config(_))));
    }
}
