//! Cutoff-regularized one-loop integrals and cutoff scans.
//!
//! Three variants of the one-loop tadpole are exposed: the plain
//! (untwisted) one, the off-shell twisted one whose phase `e^{i p.a}`
//! carries the full loop four-momentum, and the on-shell twisted one whose
//! phase sees only the mass-shell lift of the loop's spatial momentum.
//! The off-shell phase damps the ultraviolet region and trades the
//! quadratic divergence for a `1/|a|^2` blow-up at small `a` (the
//! mixing of ultraviolet and infrared scales); whether the on-shell phase
//! does the same is left to the scan data, which fits growth slopes
//! without asserting a verdict.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::kernels::TwistKind;
use crate::quadrature::{
    cis, integrate_1d, integrate_nd, Domain, QuadratureSpec, Regulator,
};
use crate::spacetime::{mass_shell_lift, FourVector, Mass, Signature, ThetaMatrix};
use crate::Error;

const PI: f64 = core::f64::consts::PI;

/// Value of one regulated loop integral.
#[derive(Debug, Clone, Copy)]
pub struct LoopValue {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Total integrand evaluations, including any nested line integrals.
    pub evals: u64,
    pub converged: bool,
    /// True when the twist phase is identically one over the loop, so the
    /// integral keeps its untwisted (cutoff-growing) ultraviolet behavior
    /// and has no finite limit as the cutoff is removed.
    pub divergent: bool,
}

/// Pairwise-antisymmetrized contraction `sum_{mu<nu} theta_{mu nu}
/// (p_mu q_nu - p_nu q_mu)` on raw component arrays: the same expression
/// as the four-vector phase, kept allocation-free for integrand loops.
fn phase_between(p: &[f64; 4], q: &[f64; 4], theta: &ThetaMatrix) -> f64 {
    let mut total = 0.0;
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let t = theta.entry(mu, nu);
            if t != 0.0 {
                total += t * (p[mu] * q[nu] - p[nu] * q[mu]);
            }
        }
    }
    total
}

fn check_loop_inputs(k: &FourVector, m: Mass, spec: &QuadratureSpec) -> Result<(), Error> {
    if k.signature() != Signature::Euclidean {
        return Err(crate::spacetime::SpacetimeError::SignatureMismatch.into());
    }
    if !(spec.cutoff.is_finite() && spec.cutoff > m.value()) {
        return Err(Error::InvalidParameter);
    }
    Ok(())
}

/// Radius of the integration ball for a smoothly regulated integral: the
/// Gaussian factor `e^{-25}` at five cutoff lengths is far below every
/// supported tolerance.
const GAUSSIAN_SUPPORT_RADII: f64 = 5.0;

fn regulated_ball(spec: &QuadratureSpec) -> (f64, bool) {
    match spec.regulator {
        Regulator::Sharp => (spec.cutoff, false),
        Regulator::Gaussian => (GAUSSIAN_SUPPORT_RADII * spec.cutoff, true),
    }
}

/// Regulated tadpole with one propagator and an off-shell oscillation:
///
/// `int d^4p  e^{i p.a} / (p^2 + m^2)`  over `|p| <= cutoff` (sharp) or
/// with weight `e^{-|p|^2/cutoff^2}` (gaussian).
///
/// Averaging the phase over the 3-sphere collapses this to a radial
/// integral against `J_1(|p||a|) / (|p||a|)`, evaluated here in 1-D. For
/// `a != 0` the value converges as the cutoff grows (to
/// `4 pi^2 m K_1(m|a|) / |a|`); at `a = 0` the phase is identically one
/// and the quadratic growth is flagged through
/// [`LoopValue::divergent`].
pub fn tadpole_one_propagator(
    a: &FourVector,
    m: Mass,
    spec: &QuadratureSpec,
) -> Result<LoopValue, Error> {
    check_loop_inputs(a, m, spec)?;
    let s = a.canonical_norm();
    let msq = m.value() * m.value();
    let lambda = spec.cutoff;
    let (upper, weighted) = match spec.regulator {
        Regulator::Sharp => (lambda, false),
        Regulator::Gaussian => (f64::INFINITY, true),
    };
    let r = if s == 0.0 {
        // angular average of 1: 2 pi^2 int p^3 / (p^2 + m^2)
        integrate_1d(
            |p| {
                let damp = if weighted {
                    libm::exp(-(p * p) / (lambda * lambda))
                } else {
                    1.0
                };
                Complex64::new(2.0 * PI * PI * p * p * p / (p * p + msq) * damp, 0.0)
            },
            0.0,
            upper,
            spec,
        )?
    } else {
        // angular average of e^{i p.a}: pi J_1(p s) / (p s) over the
        // 3-sphere, leaving (4 pi^2 / s) int p^2 J_1(p s) / (p^2 + m^2)
        integrate_1d(
            |p| {
                let damp = if weighted {
                    libm::exp(-(p * p) / (lambda * lambda))
                } else {
                    1.0
                };
                let radial = 4.0 * PI * PI / s * p * p * libm::j1(p * s) / (p * p + msq);
                Complex64::new(radial * damp, 0.0)
            },
            0.0,
            upper,
            spec,
        )?
    };
    Ok(LoopValue {
        value: r.value,
        error_estimate: r.error_estimate,
        evals: r.evals,
        converged: r.converged,
        divergent: s == 0.0,
    })
}

/// On-shell twisted tadpole with one propagator: the phase carries the
/// lift `p~ = (omega(p), p)` of the loop's spatial momentum, so the
/// fourth loop component integrates to `pi / omega(p)` analytically:
///
/// `pi int d^3p  e^{-i p~ theta k~} / omega(p)`  over the regulated ball.
pub fn tadpole_onshell_one_propagator(
    k: &FourVector,
    theta: &ThetaMatrix,
    m: Mass,
    spec: &QuadratureSpec,
) -> Result<LoopValue, Error> {
    check_loop_inputs(k, m, spec)?;
    let msq = m.value() * m.value();
    let lift = mass_shell_lift(k.spatial(), m).as_four_vector(Signature::Minkowski);
    let kc = lift.components();
    let twisted = theta.apply(&lift).components();
    let divergent = twisted.iter().all(|&c| c == 0.0);
    let (radius, weighted) = regulated_ball(spec);
    let lambda = spec.cutoff;
    let r = integrate_nd(
        |p: &[f64]| {
            let psq = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            let om = libm::sqrt(psq + msq);
            let damp = if weighted {
                libm::exp(-psq / (lambda * lambda))
            } else {
                1.0
            };
            let phi = phase_between(&[om, p[0], p[1], p[2]], &kc, theta);
            cis(-phi) * (PI * damp / om)
        },
        3,
        &Domain::Ball { radius },
        spec,
    )?;
    Ok(LoopValue {
        value: r.value,
        error_estimate: r.error_estimate,
        evals: r.evals,
        converged: r.converged,
        divergent,
    })
}

/// Analytic integral of the two-propagator chain over the fourth loop
/// component:
///
/// `int dp4 1 / ((p4^2 + A^2) ((k4 - p4)^2 + B^2))
///    = pi (A + B) / (A B ((A + B)^2 + k4^2))`
///
/// with `A = omega(p)` and `B = omega(k - p)`. This reduction is what the
/// fourth-component independence of the on-shell twist buys: the twisted
/// convolution needs only a 3-D quadrature on top of it.
pub fn bubble_p4_reduced(kvec: &crate::spacetime::SpatialVector, k4: f64, pvec: &crate::spacetime::SpatialVector, m: Mass) -> f64 {
    let (kc, pc) = (kvec.components(), pvec.components());
    let msq = m.value() * m.value();
    let a = libm::sqrt(pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2] + msq);
    let d = [kc[0] - pc[0], kc[1] - pc[1], kc[2] - pc[2]];
    let b = libm::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + msq);
    let sum = a + b;
    PI * sum / (a * b * (sum * sum + k4 * k4))
}

/// On-shell twisted two-propagator convolution:
///
/// `int d^4p S(k - p) S(p) e^{-i p~ theta (k-p)~}`
///
/// with both lifts built from spatial momenta. The phase has no fourth
/// component, so the `p4` line is [`bubble_p4_reduced`] and the quadrature
/// is 3-D over the regulated spatial ball. Beware the cost scaling for
/// nonzero `theta`: the lifted phase grows like `theta |p|^2`, so the
/// oscillation count grows quadratically with the cutoff; exploration
/// grids should keep `theta Lambda^2` within a few hundred.
pub fn tadpole_onshell_convolution(
    k: &FourVector,
    theta: &ThetaMatrix,
    m: Mass,
    spec: &QuadratureSpec,
) -> Result<LoopValue, Error> {
    check_loop_inputs(k, m, spec)?;
    let msq = m.value() * m.value();
    let ks = k.spatial();
    let kc = ks.components();
    let k4 = k.c0();
    let divergent = theta.entries().iter().flatten().all(|&c| c == 0.0);
    let (radius, weighted) = regulated_ball(spec);
    let lambda = spec.cutoff;
    let r = integrate_nd(
        |p: &[f64]| {
            let psq = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            let om_p = libm::sqrt(psq + msq);
            let d = [kc[0] - p[0], kc[1] - p[1], kc[2] - p[2]];
            let dsq = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            let om_d = libm::sqrt(dsq + msq);
            let sum = om_p + om_d;
            let chain = PI * sum / (om_p * om_d * (sum * sum + k4 * k4));
            let damp = if weighted {
                libm::exp(-psq / (lambda * lambda))
            } else {
                1.0
            };
            let phi = phase_between(
                &[om_p, p[0], p[1], p[2]],
                &[om_d, d[0], d[1], d[2]],
                theta,
            );
            cis(-phi) * (chain * damp)
        },
        3,
        &Domain::Ball { radius },
        spec,
    )?;
    Ok(LoopValue {
        value: r.value,
        error_estimate: r.error_estimate,
        evals: r.evals,
        converged: r.converged,
        divergent,
    })
}

/// Off-shell twisted two-propagator convolution:
///
/// `int d^4p S(k - p) S(p) e^{-i p theta k}`
///
/// over full Euclidean four-momenta (the second propagator's momentum
/// `k - p` twists to the same phase by antisymmetry). The phase is linear
/// in `p4`, so the `p4` line is integrated numerically against its
/// oscillation inside a 3-D quadrature over the regulated spatial ball;
/// the spatial regulator treatment matches
/// [`tadpole_onshell_convolution`], so the two agree at `theta = 0` up to
/// quadrature error.
pub fn tadpole_offshell_convolution(
    k: &FourVector,
    theta: &ThetaMatrix,
    m: Mass,
    spec: &QuadratureSpec,
) -> Result<LoopValue, Error> {
    check_loop_inputs(k, m, spec)?;
    let msq = m.value() * m.value();
    let kc4 = k.components();
    let ks = kc4[1..4].try_into().unwrap_or([0.0; 3]);
    let k4 = kc4[0];
    let divergent = {
        let a = theta.apply(k);
        a.canonical_norm() == 0.0
    };
    // p theta k = c p4 + const(p_spatial), exactly, by bilinearity
    let c = phase_between(&[1.0, 0.0, 0.0, 0.0], &kc4, theta);
    let (radius, weighted) = regulated_ball(spec);
    let lambda = spec.cutoff;
    let inner_spec = QuadratureSpec {
        rel_tol: (0.3 * spec.rel_tol).max(1e-12),
        abs_tol: 0.0,
        max_evals: 400_000,
        ..QuadratureSpec::default_for_dim(1)
    };
    let inner_evals = core::cell::Cell::new(0u64);
    let r = integrate_nd(
        |p: &[f64]| {
            let psq = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            let a2 = psq + msq;
            let d = [ks[0] - p[0], ks[1] - p[1], ks[2] - p[2]];
            let b2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + msq;
            let line = integrate_1d(
                |p4: f64| {
                    let q4 = k4 - p4;
                    cis(-c * p4) / ((p4 * p4 + a2) * (q4 * q4 + b2))
                },
                f64::NEG_INFINITY,
                f64::INFINITY,
                &inner_spec,
            );
            let line = match line {
                Ok(v) => {
                    inner_evals.set(inner_evals.get() + v.evals);
                    v.value
                }
                Err(_) => Complex64::new(f64::NAN, 0.0),
            };
            let damp = if weighted {
                libm::exp(-psq / (lambda * lambda))
            } else {
                1.0
            };
            let rest = phase_between(&[0.0, p[0], p[1], p[2]], &kc4, theta);
            cis(-rest) * line * damp
        },
        3,
        &Domain::Ball { radius },
        spec,
    )?;
    Ok(LoopValue {
        value: r.value,
        error_estimate: r.error_estimate,
        evals: r.evals + inner_evals.get(),
        converged: r.converged,
        divergent,
    })
}

/// Which one-loop graph a scan evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Single propagator with the twist oscillation: quadratically
    /// divergent untwisted.
    OnePropagator,
    /// Two-propagator convolution: logarithmically divergent untwisted.
    Bubble,
}

/// Grid of external momenta and cutoffs for a mixing scan.
#[derive(Debug, Clone)]
pub struct ScanGrid {
    /// External Euclidean momenta (rows of the scan).
    pub external_momenta: Vec<FourVector>,
    /// Strictly ascending cutoffs, all above the mass.
    pub cutoffs: Vec<f64>,
    pub twist: TwistKind,
    pub theta: ThetaMatrix,
    pub m: Mass,
    pub graph: GraphKind,
    /// Per-cell quadrature budget; the cell's cutoff overrides
    /// `spec.cutoff`.
    pub spec: QuadratureSpec,
}

impl ScanGrid {
    pub fn validate(&self) -> Result<(), Error> {
        if self.external_momenta.is_empty() || self.cutoffs.is_empty() {
            return Err(Error::InvalidParameter);
        }
        if self
            .external_momenta
            .iter()
            .any(|k| k.signature() != Signature::Euclidean)
        {
            return Err(crate::spacetime::SpacetimeError::SignatureMismatch.into());
        }
        let mut prev = self.m.value();
        for &c in &self.cutoffs {
            if !(c.is_finite() && c > prev) {
                return Err(Error::InvalidParameter);
            }
            prev = c;
        }
        Ok(())
    }
}

/// One scan cell.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub k_index: usize,
    pub cutoff_index: usize,
    /// Components of the external momentum, `[k4, k1, k2, k3]`.
    pub momentum: [f64; 4],
    pub cutoff: f64,
    pub value: Complex64,
    pub error_estimate: f64,
    pub evals: u64,
    pub converged: bool,
    pub divergent: bool,
}

/// Least-squares line fit with the slope's standard error.
#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for a two-point fit, NaN when
    /// there are fewer than two usable points.
    pub stderr: f64,
    pub points: usize,
}

fn fit_line(xs: &[f64], ys: &[f64]) -> SlopeFit {
    let n = xs.len();
    if n < 2 {
        return SlopeFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            stderr: f64::NAN,
            points: n,
        };
    }
    let nf = n as f64;
    let xbar = xs.iter().sum::<f64>() / nf;
    let ybar = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let stderr = if n == 2 {
        0.0
    } else {
        let mut ss = 0.0;
        for (x, y) in xs.iter().zip(ys) {
            let r = y - (intercept + slope * x);
            ss += r * r;
        }
        libm::sqrt(ss / ((nf - 2.0) * sxx))
    };
    SlopeFit {
        slope,
        intercept,
        stderr,
        points: n,
    }
}

/// Scan output: the full cell table plus growth diagnostics — per-momentum
/// slopes of `|value|` against `ln cutoff` and against `cutoff^2` over the
/// top half of the cutoff grid, and per-cutoff exponents of `ln |value|`
/// against `ln |k|` over the nonzero momenta.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    pub cutoff_log_slopes: Vec<SlopeFit>,
    pub cutoff_quadratic_slopes: Vec<SlopeFit>,
    pub momentum_exponents: Vec<SlopeFit>,
}

/// Evaluates a single scan cell; exposed so front ends can distribute
/// cells across workers (each cell is internally sequential, so the values
/// are identical however the cells are scheduled).
pub fn scan_cell(grid: &ScanGrid, k_index: usize, cutoff_index: usize) -> Result<LoopValue, Error> {
    grid.validate()?;
    let k = grid
        .external_momenta
        .get(k_index)
        .ok_or(Error::InvalidParameter)?;
    let lambda = *grid.cutoffs.get(cutoff_index).ok_or(Error::InvalidParameter)?;
    let spec = grid.spec.with_cutoff(lambda);
    match (grid.graph, grid.twist) {
        (GraphKind::OnePropagator, TwistKind::None) => {
            tadpole_one_propagator(&FourVector::zero(Signature::Euclidean), grid.m, &spec)
        }
        (GraphKind::OnePropagator, TwistKind::OffShell) => {
            tadpole_one_propagator(&grid.theta.apply(k), grid.m, &spec)
        }
        (GraphKind::OnePropagator, TwistKind::OnShell) => {
            tadpole_onshell_one_propagator(k, &grid.theta, grid.m, &spec)
        }
        (GraphKind::Bubble, TwistKind::None) => {
            tadpole_onshell_convolution(k, &ThetaMatrix::zero(), grid.m, &spec)
        }
        (GraphKind::Bubble, TwistKind::OffShell) => {
            tadpole_offshell_convolution(k, &grid.theta, grid.m, &spec)
        }
        (GraphKind::Bubble, TwistKind::OnShell) => {
            tadpole_onshell_convolution(k, &grid.theta, grid.m, &spec)
        }
    }
}

/// Evaluates one cell into its row, mapping hard quadrature failures to a
/// NaN row with `converged = false` so a scan can continue past them.
pub fn scan_row(grid: &ScanGrid, k_index: usize, cutoff_index: usize) -> Result<ScanRow, Error> {
    let k = grid
        .external_momenta
        .get(k_index)
        .ok_or(Error::InvalidParameter)?;
    let row = match scan_cell(grid, k_index, cutoff_index) {
        Ok(v) => ScanRow {
            k_index,
            cutoff_index,
            momentum: k.components(),
            cutoff: grid.cutoffs[cutoff_index],
            value: v.value,
            error_estimate: v.error_estimate,
            evals: v.evals,
            converged: v.converged,
            divergent: v.divergent,
        },
        Err(Error::Quadrature(_)) => ScanRow {
            k_index,
            cutoff_index,
            momentum: k.components(),
            cutoff: grid.cutoffs[cutoff_index],
            value: Complex64::new(f64::NAN, f64::NAN),
            error_estimate: f64::NAN,
            evals: 0,
            converged: false,
            divergent: false,
        },
        Err(e) => return Err(e),
    };
    Ok(row)
}

/// Fits the growth diagnostics over an externally computed row table; the
/// rows must cover the full grid in grid order (momentum-major). Front
/// ends that distribute [`scan_row`] calls across workers reassemble
/// through this, which keeps the result identical to [`uvir_scan`].
pub fn scan_result_from_rows(grid: &ScanGrid, rows: Vec<ScanRow>) -> Result<ScanResult, Error> {
    grid.validate()?;
    let nc = grid.cutoffs.len();
    if rows.len() != grid.external_momenta.len() * nc {
        return Err(Error::InvalidParameter);
    }
    for (i, row) in rows.iter().enumerate() {
        if row.k_index != i / nc || row.cutoff_index != i % nc {
            return Err(Error::InvalidParameter);
        }
    }
    Ok(assemble_scan_result(grid, rows))
}

/// Runs the full grid sequentially and fits the growth diagnostics. Cells
/// whose quadrature reports a hard failure are recorded as NaN rows with
/// `converged = false`; the scan continues.
pub fn uvir_scan(grid: &ScanGrid) -> Result<ScanResult, Error> {
    grid.validate()?;
    let nk = grid.external_momenta.len();
    let nc = grid.cutoffs.len();
    let mut rows = Vec::with_capacity(nk * nc);
    for ki in 0..nk {
        for ci in 0..nc {
            rows.push(scan_row(grid, ki, ci)?);
        }
    }
    Ok(assemble_scan_result(grid, rows))
}

fn assemble_scan_result(grid: &ScanGrid, rows: Vec<ScanRow>) -> ScanResult {
    let nk = grid.external_momenta.len();
    let nc = grid.cutoffs.len();
    let magnitude = |row: &ScanRow| crate::quadrature::cabs(row.value);

    // growth fits over the top half of the cutoff grid (all of it when the
    // grid is short)
    let start = if nc >= 4 { nc / 2 } else { 0 };
    let mut cutoff_log_slopes = Vec::with_capacity(nk);
    let mut cutoff_quadratic_slopes = Vec::with_capacity(nk);
    for ki in 0..nk {
        let mut ln_xs = Vec::new();
        let mut sq_xs = Vec::new();
        let mut ys = Vec::new();
        for ci in start..nc {
            let row = &rows[ki * nc + ci];
            let y = magnitude(row);
            if y.is_finite() {
                ln_xs.push(libm::log(row.cutoff));
                sq_xs.push(row.cutoff * row.cutoff);
                ys.push(y);
            }
        }
        cutoff_log_slopes.push(fit_line(&ln_xs, &ys));
        cutoff_quadratic_slopes.push(fit_line(&sq_xs, &ys));
    }

    let mut momentum_exponents = Vec::with_capacity(nc);
    for ci in 0..nc {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for ki in 0..nk {
            let row = &rows[ki * nc + ci];
            let knorm = libm::sqrt(
                row.momentum.iter().map(|c| c * c).sum::<f64>(),
            );
            let y = magnitude(row);
            if knorm > 0.0 && y > 0.0 && y.is_finite() {
                xs.push(libm::log(knorm));
                ys.push(libm::log(y));
            }
        }
        momentum_exponents.push(fit_line(&xs, &ys));
    }

    ScanResult {
        rows,
        cutoff_log_slopes,
        cutoff_quadratic_slopes,
        momentum_exponents,
    }
}
