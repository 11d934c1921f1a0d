//! Numerical core for free massive scalar two-point functions on commutative
//! and twisted (noncommutative) spacetime.
//!
//! The crate is organized around a small set of verifiable numerical claims:
//!
//! - [`spacetime`]: four-vectors with explicit signature tags, mass-shell
//!   lifts, antisymmetric twist matrices, and open cones.
//! - [`quadrature`]: deterministic adaptive integration (Gauss–Kronrod in 1D
//!   with series extrapolation, Genz–Malik cubature in 2..=6 dimensions),
//!   with cutoff/regulator support for divergence scans.
//! - [`kernels`]: momentum-space propagator kernels, the damped analytic
//!   continuation of the two-point function, and position-space evaluation.
//! - [`schwartz`]: Gaussian wave packets with closed-form Fourier algebra,
//!   used to probe boundary values, the Klein-Gordon equation, and the
//!   Green's-function property against numerically integrated kernels.
//! - [`twist`]: star products of plane waves and packets (off-shell and
//!   on-shell twisting), Wick pairings, and associativity/reflection defects.
//! - [`loops`]: one-loop tadpole integrals with sharp or Gaussian cutoffs and
//!   grid scans separating planar-type divergences from nonplanar behavior.
//!
//! The crate is `no_std` (alloc only); all floating-point transcendentals go
//! through [`libm`] so results are bit-reproducible across platforms and
//! thread counts.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod kernels;
pub mod loops;
pub mod quadrature;
pub mod schwartz;
pub mod spacetime;
pub mod twist;

pub use num_complex::Complex64;

/// Crate-wide error type: every fallible physics-level routine reports
/// either a geometry/parameter problem or an integration failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Vector/matrix construction or signature misuse.
    Spacetime(spacetime::SpacetimeError),
    /// The integration engine rejected its inputs or the integrand.
    Quadrature(quadrature::QuadratureError),
    /// A scalar parameter (damping, regulator, tolerance knob) is out of
    /// its documented range.
    InvalidParameter,
}

impl From<spacetime::SpacetimeError> for Error {
    fn from(e: spacetime::SpacetimeError) -> Self {
        Error::Spacetime(e)
    }
}

impl From<quadrature::QuadratureError> for Error {
    fn from(e: quadrature::QuadratureError) -> Self {
        Error::Quadrature(e)
    }
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::Spacetime(e) => write!(f, "{e}"),
            Error::Quadrature(e) => write!(f, "{e}"),
            Error::InvalidParameter => write!(f, "parameter out of range"),
        }
    }
}

impl core::error::Error for Error {}
