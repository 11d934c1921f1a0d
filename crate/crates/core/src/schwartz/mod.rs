//! Gaussian test functions and the numerical checks built on them.
//!
//! [`GaussianPacket`] is a product of per-axis Gaussians with optional
//! plane-wave phases. Its Fourier transform, the transforms of its second
//! derivatives, and the action of `laplacian - m^2` are all available in
//! closed form, which makes the packets ideal probes: every check in this
//! module compares a numerically integrated kernel pairing against an
//! independently computed closed-form (or independently assembled) value.
//!
//! The checks cover: smearing the on-shell momentum measure with a packet,
//! the damped approach to the distributional boundary value (with
//! polynomial extrapolation in the damping parameter), annihilation of the
//! smeared measure by the wave operator plus mass term, and the
//! Green's-function property of the Euclidean position kernel.

mod checks;
mod packet;

pub use checks::{
    boundary_limit_probe, greens_check, kg_annihilation_check, smear_two_point, BoundaryProbe,
    GreensCheck, KgCheck,
};
pub use packet::GaussianPacket;
