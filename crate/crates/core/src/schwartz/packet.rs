//! Gaussian wave packets with closed-form Fourier algebra.

use num_complex::Complex64;

use crate::quadrature::cis;
use crate::spacetime::Mass;
use crate::Error;

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Product of four axis factors
/// `exp(-(x_mu - c_mu)^2 / (2 sigma_mu^2) + i q_mu x_mu)`.
///
/// Axis 0 plays the role of the time (or fourth Euclidean) coordinate in
/// the checks; the packet itself is just a Schwartz function on R^4.
///
/// All Fourier conventions are per-axis with a `+i nu x` kernel:
/// `F_mu(nu) = int G_mu(x) e^{i nu x} dx
///           = sigma sqrt(2 pi) e^{i (nu + q) c} e^{-sigma^2 (nu + q)^2 / 2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    centers: [f64; 4],
    widths: [f64; 4],
    momenta: [f64; 4],
}

impl GaussianPacket {
    /// A packet with the given per-axis centers, widths (all positive) and
    /// plane-wave momenta.
    pub fn new(centers: [f64; 4], widths: [f64; 4], momenta: [f64; 4]) -> Result<Self, Error> {
        for mu in 0..4 {
            if !centers[mu].is_finite() || !momenta[mu].is_finite() {
                return Err(Error::InvalidParameter);
            }
            if !(widths[mu].is_finite() && widths[mu] > 0.0) {
                return Err(Error::InvalidParameter);
            }
        }
        Ok(GaussianPacket {
            centers,
            widths,
            momenta,
        })
    }

    /// Centered unit-width packet with a plane-wave phase, a convenient
    /// default probe.
    pub fn standard(momenta: [f64; 4]) -> Result<Self, Error> {
        GaussianPacket::new([0.0; 4], [1.0; 4], momenta)
    }

    pub fn centers(&self) -> [f64; 4] {
        self.centers
    }

    pub fn widths(&self) -> [f64; 4] {
        self.widths
    }

    pub fn momenta(&self) -> [f64; 4] {
        self.momenta
    }

    /// Complex conjugate: flips the plane-wave momenta.
    pub fn conjugated(&self) -> GaussianPacket {
        let mut momenta = self.momenta;
        for q in &mut momenta {
            *q = -*q;
        }
        GaussianPacket {
            centers: self.centers,
            widths: self.widths,
            momenta,
        }
    }

    /// Point reflection `g(x) -> g(-x)`: flips centers and momenta.
    pub fn reflected(&self) -> GaussianPacket {
        let mut centers = self.centers;
        let mut momenta = self.momenta;
        for mu in 0..4 {
            centers[mu] = -centers[mu];
            momenta[mu] = -momenta[mu];
        }
        GaussianPacket {
            centers,
            widths: self.widths,
            momenta,
        }
    }

    /// Pointwise value `g(x)`.
    pub fn eval(&self, x: &[f64; 4]) -> Complex64 {
        let mut quad = 0.0;
        let mut phase = 0.0;
        for (mu, &xi) in x.iter().enumerate() {
            let d = xi - self.centers[mu];
            quad += d * d / (2.0 * self.widths[mu] * self.widths[mu]);
            phase += self.momenta[mu] * xi;
        }
        cis(phase) * libm::exp(-quad)
    }

    /// Single-axis factor of [`GaussianPacket::eval`].
    pub fn axis_eval(&self, axis: usize, x: f64) -> Complex64 {
        let d = x - self.centers[axis];
        let s = self.widths[axis];
        cis(self.momenta[axis] * x) * libm::exp(-0.5 * d * d / (s * s))
    }

    /// Closed-form axis transform `int G_mu(x) e^{i nu x} dx`.
    pub fn axis_ft(&self, axis: usize, nu: f64) -> Complex64 {
        let (c, s, q) = (self.centers[axis], self.widths[axis], self.momenta[axis]);
        let b = nu + q;
        cis(b * c) * (s * SQRT_TWO_PI * libm::exp(-0.5 * s * s * b * b))
    }

    /// Transform of the axis second derivative, assembled from the
    /// polynomial moments of the Gaussian rather than from the identity
    /// `FT(G'') = -nu^2 FT(G)`:
    ///
    /// `G'' = G [ (x-c)^2/sigma^4 - 2 i q (x-c)/sigma^2 - q^2 - 1/sigma^2 ]`
    ///
    /// and the centered moments under the transform are `M0 = 1`,
    /// `M1 = i sigma^2 b`, `M2 = sigma^2 (1 - sigma^2 b^2)` with
    /// `b = nu + q`. The two computations agree analytically; keeping the
    /// moment path separate gives the annihilation checks an independent
    /// floating-point route.
    pub fn axis_ft_d2(&self, axis: usize, nu: f64) -> Complex64 {
        let (s, q) = (self.widths[axis], self.momenta[axis]);
        let s2 = s * s;
        let b = nu + q;
        let m1 = Complex64::new(0.0, s2 * b);
        let m2 = Complex64::new(s2 * (1.0 - s2 * b * b), 0.0);
        let poly = m2 / (s2 * s2) - Complex64::new(0.0, 2.0 * q / s2) * m1
            - Complex64::new(q * q + 1.0 / s2, 0.0);
        self.axis_ft(axis, nu) * poly
    }

    /// Full four-dimensional transform `int g(x) e^{i nu . x} d^4x` with the
    /// canonical (all-plus) pairing.
    pub fn ft(&self, nu: &[f64; 4]) -> Complex64 {
        self.axis_ft(0, nu[0]) * self.axis_ft(1, nu[1]) * self.axis_ft(2, nu[2])
            * self.axis_ft(3, nu[3])
    }

    /// Minkowski-convention transform
    /// `W(k0, k) = int e^{-i k0 x0 + i k . x} g(x) d^4x`,
    /// i.e. the canonical transform at `(-k0, k1, k2, k3)`.
    pub fn minkowski_ft(&self, k0: f64, k: &[f64; 3]) -> Complex64 {
        self.ft(&[-k0, k[0], k[1], k[2]])
    }

    /// Closed-form `((laplacian - m^2) g)(x)` with the four-dimensional
    /// canonical Laplacian.
    pub fn laplace_minus_msq(&self, x: &[f64; 4], m: Mass) -> Complex64 {
        let mut poly = Complex64::new(-m.value() * m.value(), 0.0);
        for (mu, &xi) in x.iter().enumerate() {
            let s2 = self.widths[mu] * self.widths[mu];
            let d = xi - self.centers[mu];
            let q = self.momenta[mu];
            poly += Complex64::new(
                d * d / (s2 * s2) - q * q - 1.0 / s2,
                -2.0 * q * d / s2,
            );
        }
        self.eval(x) * poly
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{cabs, integrate_1d, QuadratureSpec};

    #[test]
    fn eval_is_product_of_axis_factors() {
        let g = GaussianPacket::new(
            [0.3, -0.2, 0.5, 0.0],
            [1.0, 0.7, 1.3, 0.9],
            [0.8, -0.4, 0.0, 1.1],
        )
        .unwrap();
        let x = [0.4, -1.2, 0.9, 0.25];
        let product = (0..4)
            .map(|mu| g.axis_eval(mu, x[mu]))
            .fold(Complex64::new(1.0, 0.0), |acc, f| acc * f);
        let direct = g.eval(&x);
        assert!(cabs(product - direct) < 1e-15 * cabs(direct));
    }

    fn packet() -> GaussianPacket {
        GaussianPacket::new(
            [0.3, -0.2, 0.5, 0.0],
            [1.0, 0.7, 1.3, 0.9],
            [0.8, -0.4, 0.0, 1.1],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_widths() {
        assert!(GaussianPacket::new([0.0; 4], [1.0, 0.0, 1.0, 1.0], [0.0; 4]).is_err());
        assert!(GaussianPacket::new([0.0; 4], [1.0, -1.0, 1.0, 1.0], [0.0; 4]).is_err());
        assert!(GaussianPacket::new([f64::NAN; 4], [1.0; 4], [0.0; 4]).is_err());
    }

    #[test]
    fn axis_ft_matches_quadrature() {
        let g = packet();
        let spec = QuadratureSpec::default_for_dim(1).with_rel_tol(1e-12);
        for (axis, nu) in [(0usize, 0.7), (1, -1.3), (2, 0.0), (3, 2.1)] {
            let direct = integrate_1d(
                |x| {
                    let c = g.centers()[axis];
                    let s = g.widths()[axis];
                    let q = g.momenta()[axis];
                    let d = x - c;
                    cis(q * x + nu * x) * libm::exp(-d * d / (2.0 * s * s))
                },
                f64::NEG_INFINITY,
                f64::INFINITY,
                &spec,
            )
            .unwrap();
            assert!(direct.converged);
            let closed = g.axis_ft(axis, nu);
            assert!(
                cabs(direct.value - closed) < 1e-11 * cabs(closed).max(1.0),
                "axis {axis}, nu {nu}: {direct:?} vs {closed}",
            );
        }
    }

    #[test]
    fn second_derivative_transform_reduces_to_multiplier() {
        // the moment-algebra path must agree with -nu^2 FT(G) to rounding
        let g = packet();
        for (axis, nu) in [(0usize, 1.2), (1, -0.4), (2, 2.5), (3, 0.0)] {
            let lhs = g.axis_ft_d2(axis, nu);
            let rhs = g.axis_ft(axis, nu) * (-nu * nu);
            let scale = cabs(g.axis_ft(axis, nu)) * (1.0 + nu * nu);
            assert!(
                cabs(lhs - rhs) < 1e-13 * scale.max(1e-300),
                "axis {axis} nu {nu}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn second_derivative_transform_matches_quadrature() {
        let g = packet();
        let spec = QuadratureSpec::default_for_dim(1).with_rel_tol(1e-11);
        let (axis, nu) = (1usize, 0.9);
        let c = g.centers()[axis];
        let s = g.widths()[axis];
        let q = g.momenta()[axis];
        let direct = integrate_1d(
            |x| {
                let d = x - c;
                let gauss = libm::exp(-d * d / (2.0 * s * s)) * cis(q * x);
                let poly = Complex64::new(
                    d * d / (s * s * s * s) - q * q - 1.0 / (s * s),
                    -2.0 * q * d / (s * s),
                );
                gauss * poly * cis(nu * x)
            },
            f64::NEG_INFINITY,
            f64::INFINITY,
            &spec,
        )
        .unwrap();
        assert!(direct.converged);
        let closed = g.axis_ft_d2(axis, nu);
        assert!(cabs(direct.value - closed) < 1e-10 * cabs(closed).max(1.0));
    }

    #[test]
    fn conjugation_conjugates_values_at_reflected_phase() {
        let g = packet();
        let x = [0.4, -1.0, 0.2, 0.8];
        let lhs = g.conjugated().eval(&x);
        let rhs = g.eval(&x).conj();
        assert!(cabs(lhs - rhs) < 1e-16);
    }

    #[test]
    fn reflection_reflects_values() {
        let g = packet();
        let x = [0.4, -1.0, 0.2, 0.8];
        let mx = [-0.4, 1.0, -0.2, -0.8];
        assert!(cabs(g.reflected().eval(&x) - g.eval(&mx)) < 1e-16);
    }

    #[test]
    fn minkowski_ft_is_canonical_at_negated_frequency() {
        let g = packet();
        let w = g.minkowski_ft(1.3, &[0.2, -0.5, 0.9]);
        let f = g.ft(&[-1.3, 0.2, -0.5, 0.9]);
        assert_eq!(w, f);
    }

    #[test]
    fn laplace_operator_matches_finite_differences() {
        let g = packet();
        let m = Mass::new(0.8).unwrap();
        let x = [0.25, -0.4, 0.6, 0.1];
        let h = 1e-5;
        let mut fd = Complex64::new(0.0, 0.0);
        for mu in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[mu] += h;
            xm[mu] -= h;
            fd += (g.eval(&xp) + g.eval(&xm) - 2.0 * g.eval(&x)) / (h * h);
        }
        fd -= g.eval(&x) * (m.value() * m.value());
        let closed = g.laplace_minus_msq(&x, m);
        assert!(
            cabs(fd - closed) < 1e-5 * cabs(closed).max(1.0),
            "{fd} vs {closed}"
        );
    }

    #[test]
    fn ft_at_zero_is_total_integral() {
        // int g = prod_mu sigma_mu sqrt(2pi) e^{i q c} e^{-sigma^2 q^2/2}
        let g = packet();
        let direct = g.ft(&[0.0; 4]);
        let mut expect = Complex64::new(1.0, 0.0);
        for mu in 0..4 {
            let (c, s, q) = (g.centers()[mu], g.widths()[mu], g.momenta()[mu]);
            expect *= cis(q * c) * (s * SQRT_TWO_PI * libm::exp(-0.5 * s * s * q * q));
        }
        assert!(cabs(direct - expect) < 1e-15 * cabs(expect));
    }
}
