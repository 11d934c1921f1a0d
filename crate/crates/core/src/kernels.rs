//! Two-point kernels of a free massive scalar field.
//!
//! Momentum space: the Euclidean kernel `1/(k^2 + m^2)`, the Minkowski
//! kernel `1/(k0^2 - |k|^2 - m^2 + i eps)`, and the rotation identity that
//! connects them at imaginary frequency. Position space: the damped
//! continuation of the on-shell momentum integral (complex time with a
//! positive Euclidean part) and the rotation-invariant Euclidean kernel.
//! Pairs of momenta can additionally carry a twist phase, either from the
//! full off-shell momenta or from their mass-shell lifts; the latter breaks
//! momentum-reflection symmetry and is the quantity probed by the
//! reflection checks in [`crate::twist`].

use num_complex::Complex64;

use crate::quadrature::{
    cexp, cis, integrate_1d, integrate_fourier, integrate_nd, Domain, IntegralResult,
    QuadratureSpec,
};
use crate::spacetime::{
    mass_shell_lift, FourVector, Mass, Signature, SpacetimeError, SpatialVector, ThetaMatrix,
};
use crate::Error;

/// How a pair of momenta is twisted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistKind {
    /// No twist: the untwisted product of kernels.
    None,
    /// Phase built from the full four-momenta. Even under joint momentum
    /// reflection, so reflection defects vanish identically.
    OffShell,
    /// Phase built from the mass-shell lifts `(omega(k), k)` of the spatial
    /// parts. The positive frequency does not flip under reflection, which
    /// makes the pair kernel reflection-asymmetric.
    OnShell,
}

/// Relativistic frequency `omega(k) = sqrt(|k|^2 + m^2)`.
pub fn omega(k: &SpatialVector, m: Mass) -> f64 {
    libm::sqrt(k.norm_sq() + m.value() * m.value())
}

/// Phase-space weight `1/(2 omega(k))` of the on-shell momentum measure.
pub fn two_point_ft_weight(k: &SpatialVector, m: Mass) -> f64 {
    1.0 / (2.0 * omega(k, m))
}

/// Euclidean momentum kernel `1/(k^2 + m^2)` with `k^2 = k4^2 + |k|^2`.
pub fn schwinger_ft(k: &FourVector, m: Mass) -> Result<f64, SpacetimeError> {
    if k.signature() != Signature::Euclidean {
        return Err(SpacetimeError::SignatureMismatch);
    }
    Ok(1.0 / (k.squared() + m.value() * m.value()))
}

/// Minkowski momentum kernel `1/(k0^2 - |k|^2 - m^2 + i eps)`.
///
/// `eps >= 0`; strictly positive values displace the mass-shell poles into
/// the complex plane (the imaginary part of the result is negative above
/// threshold and tends to zero with `eps`).
pub fn feynman_ft(k: &FourVector, m: Mass, eps: f64) -> Result<Complex64, Error> {
    if k.signature() != Signature::Minkowski {
        return Err(SpacetimeError::SignatureMismatch.into());
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::InvalidParameter);
    }
    let denom = Complex64::new(k.squared() - m.value() * m.value(), eps);
    Ok(denom.inv())
}

/// The Minkowski kernel evaluated at imaginary frequency `k0 = i k4`,
/// as a function of the Euclidean momentum `(k, k4)`.
///
/// Evaluating `1/(k0^2 - |k|^2 - m^2)` at `k0 = i k4` through complex
/// arithmetic gives exactly `-1/(k4^2 + |k|^2 + m^2)`: the negative of
/// [`schwinger_ft`], with an exactly zero imaginary part. The identity is
/// exact in floating point, not merely up to rounding, because every
/// intermediate of the two computations is the negation of its counterpart.
pub fn wick_rotation_w(k: &FourVector, m: Mass) -> Result<Complex64, SpacetimeError> {
    if k.signature() != Signature::Euclidean {
        return Err(SpacetimeError::SignatureMismatch);
    }
    let k0 = Complex64::new(0.0, k.c0());
    let k0sq = k0 * k0; // lands exactly on the real axis: (-k4^2, 0)
    let denom = k0sq.re - k.spatial().norm_sq() - m.value() * m.value();
    // reciprocal taken on the real axis (a full complex reciprocal would
    // round through |denom|^2 and lose the exact sign-flip property)
    Ok(Complex64::new(1.0 / denom, k0sq.im))
}

/// Exponentially damped frequency weight `e^{-omega x4} / (2 omega)`.
pub fn damped_weight(omega: f64, x4: f64) -> Result<f64, Error> {
    if !(omega.is_finite() && omega > 0.0 && x4.is_finite() && x4 >= 0.0) {
        return Err(Error::InvalidParameter);
    }
    Ok(libm::exp(-omega * x4) / (2.0 * omega))
}

/// The same damped weight obtained from the frequency-line integral
/// `(1/2pi) int e^{i k4 x4} / (k4^2 + omega^2) dk4`.
///
/// This is the single-frequency version of rotating the on-shell momentum
/// integral to Euclidean time: closing the contour around the pole at
/// `k4 = i omega` reproduces [`damped_weight`]. The oscillatory line
/// integral is evaluated by cycle summation, so tolerances down to ~1e-11
/// are attainable for `x4 > 0`.
pub fn damped_weight_via_frequency_integral(
    omega: f64,
    x4: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, Error> {
    if !(omega.is_finite() && omega > 0.0 && x4.is_finite() && x4 >= 0.0) {
        return Err(Error::InvalidParameter);
    }
    let lorentzian = |k4: f64| Complex64::new(1.0 / (k4 * k4 + omega * omega), 0.0);
    let r = if x4 == 0.0 {
        // no oscillation: the plain decaying integral over the full line
        let mut out = integrate_1d(&lorentzian, f64::NEG_INFINITY, f64::INFINITY, spec)?;
        out.value *= 0.5;
        out.error_estimate *= 0.5;
        out
    } else {
        // even integrand: (1/2pi) * 2 Re int_0^inf e^{i k4 x4} L(k4) dk4
        let mut out = integrate_fourier(lorentzian, x4, 0.0, spec)?;
        out.value = Complex64::new(out.value.re, 0.0);
        out
    };
    let scale = 1.0 / core::f64::consts::PI;
    Ok(IntegralResult {
        value: r.value * scale,
        error_estimate: r.error_estimate * scale,
        evals: r.evals,
        converged: r.converged,
    })
}

/// Damped continuation of the on-shell momentum integral at complex time
/// `x0 - i x4` with `x4 > 0`:
///
/// `(2pi)^{-3} int d^3k e^{i k.x} e^{-omega(k) (x4 + i x0)} / (2 omega(k))`.
///
/// The Euclidean damping `e^{-omega x4}` makes the momentum integral
/// absolutely convergent for every real `x0`; the limit `x4 -> 0` is the
/// distributional boundary value probed (after smearing) in
/// [`crate::schwartz`]. `x` carries the Minkowski time `x0` and the spatial
/// position.
pub fn continuation_kernel(
    x: &FourVector,
    x4: f64,
    m: Mass,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, Error> {
    if x.signature() != Signature::Minkowski {
        return Err(SpacetimeError::SignatureMismatch.into());
    }
    if !(x4.is_finite() && x4 > 0.0) {
        return Err(Error::InvalidParameter);
    }
    let x0 = x.c0();
    let xs = x.spatial().components();
    // e^{-k x4} truncation: radius where the damped tail is negligible
    let radius = (45.0 / x4).max(8.0 * m.value()).min(5.0e3);
    let mut integrand = |k: &[f64]| -> Complex64 {
        let ksq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let om = libm::sqrt(ksq + m.value() * m.value());
        let phase = k[0] * xs[0] + k[1] * xs[1] + k[2] * xs[2];
        cis(phase) * cexp(Complex64::new(-om * x4, -om * x0)) / (2.0 * om)
    };
    let mut r = integrate_nd(&mut integrand, 3, &Domain::Ball { radius }, spec)?;
    let pi = core::f64::consts::PI;
    let norm = 1.0 / (8.0 * pi * pi * pi);
    r.value *= norm;
    r.error_estimate *= norm;
    Ok(r)
}

/// Euclidean position-space kernel, evaluated through the damped radial
/// momentum integral.
///
/// The kernel depends only on the Euclidean distance `r = |x|`, so the
/// point is first rotated to the orientation `(0, 0, 0, r)`, where the
/// momentum integral collapses to
/// `(1/2pi^2) int_0^inf k^2 e^{-omega(k) r} / (2 omega(k)) dk`,
/// a smooth exponentially damped one-dimensional integral.
pub fn schwinger_position(
    x: &FourVector,
    m: Mass,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, Error> {
    if x.signature() != Signature::Euclidean {
        return Err(SpacetimeError::SignatureMismatch.into());
    }
    let r = x.canonical_norm();
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter);
    }
    let msq = m.value() * m.value();
    let mut out = integrate_1d(
        |k| {
            let om = libm::sqrt(k * k + msq);
            Complex64::new(k * k * libm::exp(-om * r) / (2.0 * om), 0.0)
        },
        0.0,
        f64::INFINITY,
        spec,
    )?;
    let norm = 1.0 / (2.0 * core::f64::consts::PI * core::f64::consts::PI);
    out.value *= norm;
    out.error_estimate *= norm;
    Ok(out)
}

fn pair_phase(
    k: &FourVector,
    p: &FourVector,
    m: Mass,
    theta: &ThetaMatrix,
    twist: TwistKind,
) -> Result<Complex64, SpacetimeError> {
    match twist {
        TwistKind::None => Ok(Complex64::new(1.0, 0.0)),
        TwistKind::OffShell => {
            let phi = crate::spacetime::twist_phase(k, p, theta, 1.0)?;
            Ok(cis(phi))
        }
        TwistKind::OnShell => {
            let kl = mass_shell_lift(k.spatial(), m).as_four_vector(Signature::Minkowski);
            let pl = mass_shell_lift(p.spatial(), m).as_four_vector(Signature::Minkowski);
            let phi = crate::spacetime::twist_phase(&kl, &pl, theta, 1.0)?;
            Ok(cis(phi))
        }
    }
}

/// Twisted product of two Euclidean kernels:
/// `S(k) S(p) e^{i Phi(k, p)}` with the phase selected by `twist`.
pub fn schwinger2_theta_ft(
    k: &FourVector,
    p: &FourVector,
    m: Mass,
    theta: &ThetaMatrix,
    twist: TwistKind,
) -> Result<Complex64, SpacetimeError> {
    let base = schwinger_ft(k, m)? * schwinger_ft(p, m)?;
    Ok(pair_phase(k, p, m, theta, twist)? * base)
}

/// Twisted product of two rotated Minkowski kernels (see
/// [`wick_rotation_w`]), with the same phase conventions as
/// [`schwinger2_theta_ft`].
pub fn w2_theta(
    k: &FourVector,
    p: &FourVector,
    m: Mass,
    theta: &ThetaMatrix,
    twist: TwistKind,
) -> Result<Complex64, SpacetimeError> {
    let base = wick_rotation_w(k, m)? * wick_rotation_w(p, m)?;
    Ok(pair_phase(k, p, m, theta, twist)? * base)
}

/// Ratio of the rotated Minkowski pair kernel to the Euclidean pair
/// kernel. The two sign flips of the rotation cancel, so the ratio is
/// exactly `1 + 0i` for every momentum pair, mass, and twist.
pub fn schwinger2_w2_ratio(
    k: &FourVector,
    p: &FourVector,
    m: Mass,
    theta: &ThetaMatrix,
    twist: TwistKind,
) -> Result<Complex64, SpacetimeError> {
    let s2 = schwinger2_theta_ft(k, p, m, theta, twist)?;
    let w2 = w2_theta(k, p, m, theta, twist)?;
    Ok(w2 / s2)
}
