//! `schwinger-eval`, `star-eval`: direct evaluation commands for the
//! position-space Euclidean kernel and the packet star product.

use nclab_core::kernels::schwinger_position;
use nclab_core::schwartz::GaussianPacket;
use nclab_core::spacetime::FourVector;
use nclab_core::twist::moyal_star_packet;
use serde_json::json;

use crate::config::{parse_log_grid, parse_points4, Settings};
use crate::plot::{line_plot, Series};
use crate::report::{fmt_f64, Csv, Output};
use crate::CliError;

#[derive(clap::Args, Debug, Default)]
pub struct SchwingerArgs {
    /// Log-spaced grid of Euclidean radii "a:b:n" (default 0.2:5:13)
    #[arg(long, value_name = "A:B:N")]
    pub r_grid: Option<String>,
}

#[derive(clap::Args, Debug, Default)]
pub struct StarArgs {
    /// Evaluation points "x0,x1,x2,x3;..." (default "0,0,0,0;0.5,0.5,0.5,0.5")
    #[arg(long, value_name = "PTS")]
    pub points: Option<String>,
}

pub fn run_schwinger(settings: &Settings, args: &SchwingerArgs) -> Result<Output, CliError> {
    let r_grid = parse_log_grid(args.r_grid.as_deref().unwrap_or("0.2:5:13"), "--r-grid")?;
    let spec = settings.spec_for_dim(1);

    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut all_converged = true;
    let mut evals = 0u64;
    for &r in &r_grid {
        let x = FourVector::euclidean([0.0, 0.0, 0.0], r)
            .map_err(|_| CliError::Config(format!("--r-grid: bad radius {r}")))?;
        let v = schwinger_position(&x, settings.mass, &spec).map_err(crate::core_error)?;
        all_converged &= v.converged;
        evals += v.evals;
        points.push((r, v.value.re));
        rows.push(vec![
            fmt_f64(r),
            fmt_f64(v.value.re),
            fmt_f64(v.error_estimate),
            v.evals.to_string(),
            v.converged.to_string(),
        ]);
    }

    let pass = all_converged;
    let results = json!({
        "mass": settings.mass.value(),
        "rGrid": r_grid,
        "allConverged": all_converged,
        "evals": evals,
    });
    let csv = Csv {
        comment: "Euclidean position-space kernel at separation r (fourth-axis direction);\n\
                  real, positive, and monotonically decreasing in r\n\
                  columns: r, value, error estimate, evaluations, converged"
            .into(),
        header: vec!["r", "value", "error_estimate", "evals", "converged"],
        rows,
    };
    let plots = line_plot(
        "Euclidean kernel against separation",
        "r",
        "value",
        true,
        true,
        &[Series {
            label: format!("m={}", settings.mass.value()),
            points,
        }],
    )
    .map(|svg| ("kernel".to_string(), svg))
    .into_iter()
    .collect();

    Ok(Output {
        command: "schwinger-eval",
        pass,
        results,
        csv: Some(csv),
        plots,
        summary: vec![format!(
            "{} radii in [{}, {}]: all converged = {all_converged}",
            r_grid.len(),
            r_grid[0],
            r_grid[r_grid.len() - 1]
        )],
    })
}

/// The two fixed packets multiplied by `star-eval`: `f` centered at the
/// origin with unit widths, `g` displaced with anisotropic widths, both
/// carrying nonzero momenta so the product has a genuine imaginary part.
fn star_operands() -> Result<(GaussianPacket, GaussianPacket), CliError> {
    let f = GaussianPacket::new(
        [0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 1.0, 1.0],
        [0.3, -0.2, 0.1, 0.4],
    )
    .map_err(|_| CliError::Config("packet f failed".into()))?;
    let g = GaussianPacket::new(
        [0.2, -0.1, 0.3, 0.0],
        [1.1, 0.9, 1.0, 1.2],
        [-0.5, 0.3, -0.1, 0.2],
    )
    .map_err(|_| CliError::Config("packet g failed".into()))?;
    Ok((f, g))
}

pub fn run_star(settings: &Settings, args: &StarArgs) -> Result<Output, CliError> {
    let points = parse_points4(
        args.points.as_deref().unwrap_or("0,0,0,0;0.5,0.5,0.5,0.5"),
        "--points",
    )?;
    let spec = settings.spec_for_dim(2);
    let (f, g) = star_operands()?;
    let star = moyal_star_packet(&f, &g, &settings.theta, &spec).map_err(|_| {
        CliError::Config(
            "star-eval needs a block-form theta (entries only in the (0,1) and (2,3) planes)"
                .into(),
        )
    })?;

    let mut rows = Vec::new();
    let mut all_converged = true;
    let mut evals = 0u64;
    for x in &points {
        let v = star.eval(x).map_err(crate::core_error)?;
        let plain = f.eval(x) * g.eval(x);
        all_converged &= v.converged;
        evals += v.evals;
        rows.push(vec![
            fmt_f64(x[0]),
            fmt_f64(x[1]),
            fmt_f64(x[2]),
            fmt_f64(x[3]),
            fmt_f64(v.value.re),
            fmt_f64(v.value.im),
            fmt_f64(v.error_estimate),
            fmt_f64(plain.re),
            fmt_f64(plain.im),
            v.evals.to_string(),
            v.converged.to_string(),
        ]);
    }

    let pass = all_converged;
    let results = json!({
        "points": points.len(),
        "theta": settings.theta.entries(),
        "allConverged": all_converged,
        "evals": evals,
    });
    let csv = Csv {
        comment: "star product (f*g)(x) of two fixed Gaussian packets under the configured twist;\n\
                  the pointwise product (fg)(x) is listed for comparison (the two agree as theta -> 0)\n\
                  columns: x (4 components), star (re, im), error estimate, pointwise product (re, im), evaluations, converged"
            .into(),
        header: vec![
            "x0",
            "x1",
            "x2",
            "x3",
            "star_re",
            "star_im",
            "error_estimate",
            "plain_re",
            "plain_im",
            "evals",
            "converged",
        ],
        rows,
    };

    Ok(Output {
        command: "star-eval",
        pass,
        results,
        csv: Some(csv),
        plots: Vec::new(),
        summary: vec![format!(
            "{} points: all converged = {all_converged}",
            points.len()
        )],
    })
}
