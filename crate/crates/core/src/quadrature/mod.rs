//! Deterministic adaptive quadrature over finite, semi-infinite, and infinite
//! domains, for complex-valued integrands.
//!
//! - 1D: adaptive 15-point Gauss–Kronrod with largest-error-first bisection
//!   and Wynn-epsilon series extrapolation, so slowly converging tails
//!   (mapped infinite domains, endpoint singularities, undamped oscillation)
//!   still reach tight tolerances.
//! - 2..=6 dimensions: adaptive Genz–Malik degree-7/5 embedded cubature on
//!   hyperrectangles, splitting the coordinate with the largest fourth
//!   divided difference.
//!
//! Everything is sequential and uses ordered data structures with explicit
//! tie-breaking, so results are bit-identical from run to run and independent
//! of any caller-side thread count. Final sums are recomputed in cell-creation
//! order rather than accumulation order.

use core::fmt;

use num_complex::Complex64;

mod cubature;
mod domain;
mod fourier;
mod qags;
mod qk;

pub use domain::Domain;
pub use fourier::integrate_fourier;

/// UV regulator applied by [`regulate`] and the loop integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regulator {
    /// Sharp momentum-space ball: multiply by the indicator of `|x| <= cutoff`.
    Sharp,
    /// Smooth suppression `exp(-|x|^2 / cutoff^2)`.
    Gaussian,
}

/// Tolerances and budgets for one integration call.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    /// Relative tolerance target.
    pub rel_tol: f64,
    /// Absolute tolerance target; convergence means
    /// `error <= max(abs_tol, rel_tol * |value|)`.
    pub abs_tol: f64,
    /// Hard cap on integrand evaluations.
    pub max_evals: u64,
    /// Cutoff scale for regulated/truncated integrals.
    pub cutoff: f64,
    /// Regulator shape used by cutoff-regulated integrals.
    pub regulator: Regulator,
    /// Cap on interval/cell subdivisions.
    pub subdivision_limit: usize,
}

impl QuadratureSpec {
    /// Defaults tuned per dimension: relative tolerance 1e-8 in 1D, 1e-5 in
    /// 2..=3 dimensions, 1e-3 in 4 and above.
    pub fn default_for_dim(dim: usize) -> Self {
        let rel_tol = match dim {
            0 | 1 => 1e-8,
            2 | 3 => 1e-5,
            _ => 1e-3,
        };
        QuadratureSpec {
            rel_tol,
            abs_tol: 0.0,
            max_evals: match dim {
                0 | 1 => 2_000_000,
                2 | 3 => 20_000_000,
                _ => 50_000_000,
            },
            cutoff: 10.0,
            regulator: Regulator::Gaussian,
            subdivision_limit: match dim {
                0 | 1 => 20_000,
                _ => 500_000,
            },
        }
    }

    /// Copy with a different relative tolerance.
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Copy with a different absolute tolerance.
    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Copy with a different cutoff.
    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = cutoff;
        self
    }

    /// Copy with a different evaluation budget.
    pub fn with_max_evals(mut self, max_evals: u64) -> Self {
        self.max_evals = max_evals;
        self
    }

    fn validate(&self) -> Result<(), QuadratureError> {
        let ok = self.rel_tol.is_finite()
            && self.rel_tol >= 0.0
            && self.abs_tol.is_finite()
            && self.abs_tol >= 0.0
            && (self.rel_tol > 0.0 || self.abs_tol > 0.0)
            && self.cutoff > 0.0
            && self.max_evals > 0
            && self.subdivision_limit > 0;
        if ok {
            Ok(())
        } else {
            Err(QuadratureError::InvalidSpec)
        }
    }
}

/// Outcome of one integration call.
#[derive(Clone, Copy, Debug)]
pub struct IntegralResult {
    /// Best estimate of the integral.
    pub value: Complex64,
    /// Estimated absolute error. When `converged` is true this is
    /// `<= max(abs_tol, rel_tol * |value|)`.
    pub error_estimate: f64,
    /// Number of integrand evaluations consumed.
    pub evals: u64,
    /// Whether the tolerance target was met before exhausting budgets.
    pub converged: bool,
}

impl IntegralResult {
    pub(crate) fn finalize(value: Complex64, error_estimate: f64, evals: u64, spec: &QuadratureSpec) -> Self {
        let target = f64::max(spec.abs_tol, spec.rel_tol * crate::quadrature::cabs(value));
        IntegralResult {
            value,
            error_estimate,
            evals,
            converged: error_estimate <= target,
        }
    }
}

/// Integration failures that cannot be reported as a best-effort estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureError {
    /// The integrand produced NaN or an infinity.
    NonFiniteIntegrand,
    /// Integration bounds are invalid (NaN, or upper <= lower).
    InvalidBounds,
    /// Tolerances/budgets are invalid (negative, or both tolerances zero).
    InvalidSpec,
    /// Dimension outside the supported range 2..=6, or inconsistent with the
    /// domain description.
    InvalidDimension,
    /// Domain description is invalid (non-finite or empty extents).
    InvalidDomain,
}

impl fmt::Display for QuadratureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            QuadratureError::NonFiniteIntegrand => "integrand returned NaN or infinity",
            QuadratureError::InvalidBounds => "invalid integration bounds",
            QuadratureError::InvalidSpec => "invalid tolerance or budget specification",
            QuadratureError::InvalidDimension => "dimension must be 2..=6 and match the domain",
            QuadratureError::InvalidDomain => "invalid integration domain",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for QuadratureError {}

#[inline]
pub(crate) fn cabs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// `exp(i phi)` without relying on std float methods.
#[inline]
pub fn cis(phi: f64) -> Complex64 {
    Complex64::new(libm::cos(phi), libm::sin(phi))
}

/// Complex exponential.
#[inline]
pub fn cexp(z: Complex64) -> Complex64 {
    let r = libm::exp(z.re);
    Complex64::new(r * libm::cos(z.im), r * libm::sin(z.im))
}

/// Integrate `f` over `(a, b)`; either bound may be infinite. Infinite
/// domains are mapped onto (0, 1] with the algebraic substitution
/// `x = (1 - t)/t`, and the adaptive engine extrapolates the subdivision
/// sequence, so rational tails and mapped oscillations converge.
pub fn integrate_1d<F>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(f64) -> Complex64,
{
    spec.validate()?;
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(QuadratureError::InvalidBounds);
    }
    let inf_a = a == f64::NEG_INFINITY;
    let inf_b = b == f64::INFINITY;
    match (inf_a, inf_b) {
        (false, false) => qags::qags(&mut f, a, b, spec),
        (false, true) => {
            let mut g = |t: f64| {
                let x = a + (1.0 - t) / t;
                f(x) / (t * t)
            };
            qags::qags(&mut g, 0.0, 1.0, spec)
        }
        (true, false) => {
            let mut g = |t: f64| {
                let x = b - (1.0 - t) / t;
                f(x) / (t * t)
            };
            qags::qags(&mut g, 0.0, 1.0, spec)
        }
        (true, true) => {
            let mut g = |t: f64| {
                let x = (1.0 - t) / t;
                (f(x) + f(-x)) / (t * t)
            };
            qags::qags(&mut g, 0.0, 1.0, spec)
        }
    }
}

/// Integrate `f` over a `dim`-dimensional domain (`dim` in 2..=6).
///
/// The integrand receives points as a `&[f64]` of length `dim` in storage
/// index order (component 0 first). Balls are integrated in hyperspherical
/// coordinates (the Jacobian absorbs origin singularities up to `r^{1-dim}`);
/// `Domain::AllSpace` uses a per-axis algebraic map and requires
/// super-polynomial decay of the integrand.
pub fn integrate_nd<F>(
    f: F,
    dim: usize,
    domain: &Domain,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(&[f64]) -> Complex64,
{
    spec.validate()?;
    domain::integrate_over_domain(f, dim, domain, spec)
}

/// Wrap an integrand with a UV regulator: sharp indicator `|x| <= cutoff` or
/// Gaussian suppression `exp(-|x|^2/cutoff^2)` (canonical norm of the point).
pub fn regulate<F>(mut f: F, regulator: Regulator, cutoff: f64) -> impl FnMut(&[f64]) -> Complex64
where
    F: FnMut(&[f64]) -> Complex64,
{
    move |x: &[f64]| {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        match regulator {
            Regulator::Sharp => {
                if r2 <= cutoff * cutoff {
                    f(x)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Regulator::Gaussian => f(x) * libm::exp(-r2 / (cutoff * cutoff)),
        }
    }
}

/// Scalar (1D) version of [`regulate`].
pub fn regulate_1d<F>(mut f: F, regulator: Regulator, cutoff: f64) -> impl FnMut(f64) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    move |x: f64| match regulator {
        Regulator::Sharp => {
            if x * x <= cutoff * cutoff {
                f(x)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        Regulator::Gaussian => f(x) * libm::exp(-(x * x) / (cutoff * cutoff)),
    }
}
