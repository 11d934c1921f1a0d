//! Integration domains for the multidimensional engine.
//!
//! Everything reduces to a rectangular box for the cubature rule:
//! * a box integrates directly;
//! * a ball centred at the origin maps through hyperspherical coordinates,
//!   whose Jacobian `r^{d-1} sin^{d-2}(phi_1) ... sin(phi_{d-2})` also tames
//!   integrands with an `r^{-2}`-type singularity at the origin;
//! * all of R^d maps each axis through `x = t / (1 - t^2)` on `(-1, 1)`,
//!   which requires the integrand to decay faster than any power (for
//!   example Gaussian-damped); slowly decaying integrands should instead be
//!   cut off and integrated over a finite domain.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::cubature::cubature;
use super::{IntegralResult, QuadratureError, QuadratureSpec};

/// Region of integration for [`super::integrate_nd`].
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Axis-aligned box with the given lower/upper corners.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Solid ball of the given radius centred at the origin.
    Ball { radius: f64 },
    /// All of R^d through a compactifying change of variables; the
    /// integrand must decay super-polynomially.
    AllSpace,
}

pub(crate) fn integrate_over_domain<F>(
    mut f: F,
    dim: usize,
    domain: &Domain,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(&[f64]) -> Complex64,
{
    if !(2..=6).contains(&dim) {
        return Err(QuadratureError::InvalidDimension);
    }
    match domain {
        Domain::Box { lo, hi } => {
            if lo.len() != dim || hi.len() != dim {
                return Err(QuadratureError::InvalidDomain);
            }
            for i in 0..dim {
                if !lo[i].is_finite() || !hi[i].is_finite() || lo[i] >= hi[i] {
                    return Err(QuadratureError::InvalidDomain);
                }
            }
            cubature(&mut f, lo, hi, spec)
        }
        Domain::Ball { radius } => {
            let r = *radius;
            if !r.is_finite() || r <= 0.0 {
                return Err(QuadratureError::InvalidDomain);
            }
            // coordinates: (r, phi_1, .., phi_{d-2}, phi_{d-1}) with the
            // last angle running over a full turn
            let lo = vec![0.0; dim];
            let mut hi = vec![r; 1];
            hi.extend(core::iter::repeat(core::f64::consts::PI).take(dim - 2));
            hi.push(2.0 * core::f64::consts::PI);
            let mut x = vec![0.0; dim];
            let mut g = move |u: &[f64]| -> Complex64 {
                let jac = ball_map(u, &mut x);
                f(&x) * jac
            };
            cubature(&mut g, &lo, &hi, spec)
        }
        Domain::AllSpace => {
            let lo = vec![-1.0; dim];
            let hi = vec![1.0; dim];
            let mut x = vec![0.0; dim];
            let mut g = move |t: &[f64]| -> Complex64 {
                let mut jac = 1.0;
                for i in 0..t.len() {
                    let ti = t[i];
                    let den = 1.0 - ti * ti;
                    if den <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    x[i] = ti / den;
                    jac *= (1.0 + ti * ti) / (den * den);
                }
                let v = f(&x) * jac;
                if v.re.is_nan() || v.im.is_nan() {
                    // decaying integrands underflow near the edges; an
                    // overflow * 0 pattern shows up as NaN and means the
                    // integrand failed to decay
                    return Complex64::new(f64::NAN, f64::NAN);
                }
                v
            };
            cubature(&mut g, &lo, &hi, spec)
        }
    }
}

/// Hyperspherical map: fills `x` from `u = (r, phi_1, ..., phi_{d-1})` and
/// returns the Jacobian.
///
/// `x_1 = r cos(phi_1)`, `x_2 = r sin(phi_1) cos(phi_2)`, ...,
/// `x_d = r sin(phi_1) ... sin(phi_{d-2}) sin(phi_{d-1})`; the Jacobian is
/// `r^{d-1} sin^{d-2}(phi_1) sin^{d-3}(phi_2) ... sin(phi_{d-2})`.
fn ball_map(u: &[f64], x: &mut [f64]) -> f64 {
    let dim = u.len();
    let r = u[0];
    let mut jac = 1.0;
    for _ in 0..dim - 1 {
        jac *= r;
    }
    let mut sin_prod = 1.0;
    for i in 0..dim - 1 {
        let phi = u[1 + i];
        let (s, c) = (libm::sin(phi), libm::cos(phi));
        x[i] = r * sin_prod * c;
        if i < dim - 2 {
            let mut pw = 1.0;
            for _ in 0..dim - 2 - i {
                pw *= s;
            }
            jac *= pw;
        }
        sin_prod *= s;
    }
    x[dim - 1] = r * sin_prod;
    jac
}
