//! Oscillatory integrals over a half-line by cycle summation.
//!
//! `integrate_fourier` computes `int_a^inf f(x) e^{i omega x} dx` for a
//! smooth, eventually decaying amplitude `f`. The half-line is partitioned
//! into half-periods of the oscillation; each piece is integrated adaptively
//! and the sequence of partial sums — which behaves like an alternating
//! series — is accelerated with the epsilon algorithm. This reaches
//! tolerances that the compactifying map of [`super::integrate_1d`] cannot,
//! because the mapped integrand there oscillates without decay near the edge
//! of the unit interval.

use num_complex::Complex64;

use super::qags::{qags, EpsTable};
use super::{cabs, cis, IntegralResult, QuadratureError, QuadratureSpec};

const MAX_SEGMENTS: usize = 2_000;

/// Integrates `f(x) * exp(i omega x)` over `[a, inf)`.
///
/// `omega` must be nonzero and finite; the amplitude `f` should be smooth on
/// `[a, inf)` and tend to zero (polynomial decay is enough). The returned
/// error estimate combines the per-segment quadrature errors with the
/// series-acceleration error.
pub fn integrate_fourier<F>(
    mut f: F,
    omega: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(f64) -> Complex64,
{
    spec.validate()?;
    if !omega.is_finite() || omega == 0.0 {
        return Err(QuadratureError::InvalidSpec);
    }
    if !a.is_finite() {
        return Err(QuadratureError::InvalidBounds);
    }

    let half_period = core::f64::consts::PI / omega.abs();
    // per-segment tolerances tighter than the overall target so that the
    // accumulated quadrature error does not mask the acceleration error
    let seg_spec = QuadratureSpec {
        rel_tol: (spec.rel_tol * 1e-2).max(1e-13),
        abs_tol: spec.abs_tol * 1e-2,
        ..*spec
    };

    let mut g = |x: f64| f(x) * cis(omega * x);

    let mut evals: u64 = 0;
    let mut quad_err = 0.0;
    let mut partial = Complex64::new(0.0, 0.0);
    let mut eps: Option<EpsTable> = None;

    let mut best_value = Complex64::new(0.0, 0.0);
    let mut best_err = f64::MAX;

    for n in 0..MAX_SEGMENTS {
        let lo = a + n as f64 * half_period;
        let hi = lo + half_period;
        let seg = qags(&mut g, lo, hi, &seg_spec)?;
        evals += seg.evals;
        quad_err += seg.error_estimate;
        partial += seg.value;

        let (value, acc_err) = match eps.as_mut() {
            None => {
                eps = Some(EpsTable::new(partial));
                // no acceleration history yet: the plain partial sum with
                // the next-term magnitude as a crude truncation bound
                (partial, cabs(seg.value))
            }
            Some(table) => {
                table.push(partial);
                table.extrapolate()
            }
        };
        let total_err = acc_err + quad_err;
        if total_err < best_err {
            best_err = total_err;
            best_value = value;
        }

        let tol = f64::max(spec.abs_tol, spec.rel_tol * cabs(best_value));
        if n >= 3 && best_err <= tol {
            break;
        }
        if evals >= spec.max_evals {
            break;
        }
    }

    Ok(IntegralResult::finalize(best_value, best_err, evals, spec))
}
