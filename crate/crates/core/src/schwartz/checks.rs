//! Numerical checks pairing the free-field kernels with Gaussian packets.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::packet::GaussianPacket;
use crate::kernels::schwinger_position;
use crate::quadrature::{
    cabs, integrate_1d, integrate_nd, Domain, IntegralResult, QuadratureSpec,
};
use crate::spacetime::{FourVector, Mass, Signature};
use crate::Error;

const TWO_PI_CUBED: f64 = 248.050_213_442_398_56; // (2 pi)^3

/// Half-width of the spatial momentum box, in units of the inverse packet
/// width per axis. Outside the box the transform factors are below
/// `e^{-112}`, far under every tolerance used here.
const BOX_WIDTHS: f64 = 15.0;

fn spatial_momentum_box(g: &GaussianPacket) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![0.0; 3];
    let mut hi = vec![0.0; 3];
    for i in 0..3 {
        let center = -g.momenta()[1 + i];
        let half = BOX_WIDTHS / g.widths()[1 + i];
        lo[i] = center - half;
        hi[i] = center + half;
    }
    (lo, hi)
}

/// Pairing of the on-shell momentum measure with a packet:
///
/// `(2pi)^{-3} int d^3k W(omega(k), k) / (2 omega(k))`
///
/// where `W` is the packet's Minkowski-convention transform. This is the
/// smeared two-point value that the boundary probe must reproduce in the
/// limit of vanishing damping.
pub fn smear_two_point(
    g: &GaussianPacket,
    m: Mass,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, Error> {
    let (lo, hi) = spatial_momentum_box(g);
    let mut r = integrate_nd(
        |k: &[f64]| {
            let ks = [k[0], k[1], k[2]];
            let om = libm::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + m.value() * m.value());
            g.minkowski_ft(om, &ks) / (2.0 * om)
        },
        3,
        &Domain::Box { lo, hi },
        spec,
    )?;
    r.value /= TWO_PI_CUBED;
    r.error_estimate /= TWO_PI_CUBED;
    Ok(r)
}

/// Result of [`boundary_limit_probe`]: damped values, their polynomial
/// extrapolation to zero damping, and the observed convergence order.
#[derive(Debug, Clone)]
pub struct BoundaryProbe {
    /// Damping parameters, strongest first (`t0, t0/2, t0/4, ...`).
    pub nodes: Vec<f64>,
    /// Damped pairings at each node.
    pub values: Vec<Complex64>,
    /// Polynomial (Neville) extrapolation of the values to `t = 0`.
    pub extrapolated: Complex64,
    /// Extrapolation-difference error plus propagated quadrature error.
    pub error_estimate: f64,
    /// Least-squares slope of `ln|F(t) - F(0)|` against `ln t`; close to 1
    /// for these kernels, whose damped pairing is analytic in `t`.
    pub observed_order: f64,
    /// Total integrand evaluations across all nodes.
    pub evals: u64,
    /// Whether every node integral met its tolerance.
    pub converged: bool,
}

/// Pairing of the damped momentum measure with a packet, extrapolated to
/// zero damping.
///
/// The damping factor is `e^{-t (omega(k) eta0 - k . eta_s)}` for a
/// direction `eta = (eta0, eta_s)` with `eta0 > |eta_s|`, which is strictly
/// positive on the mass shell; `t -> 0+` recovers [`smear_two_point`]. The
/// probe evaluates the pairing at `levels` geometrically spaced damping
/// parameters and extrapolates polynomially to zero.
pub fn boundary_limit_probe(
    g: &GaussianPacket,
    eta: &FourVector,
    m: Mass,
    t0: f64,
    levels: usize,
    spec: &QuadratureSpec,
) -> Result<BoundaryProbe, Error> {
    if eta.signature() != Signature::Minkowski {
        return Err(crate::spacetime::SpacetimeError::SignatureMismatch.into());
    }
    let eta0 = eta.c0();
    let etas = eta.spatial();
    if !(eta0 > 0.0 && eta0 > etas.norm()) {
        return Err(Error::InvalidParameter);
    }
    if !(t0.is_finite() && t0 > 0.0) || !(2..=8).contains(&levels) {
        return Err(Error::InvalidParameter);
    }

    let (lo, hi) = spatial_momentum_box(g);
    let es = etas.components();
    let mut nodes = Vec::with_capacity(levels);
    let mut values = Vec::with_capacity(levels);
    let mut evals = 0u64;
    let mut converged = true;
    let mut max_quad_err = 0.0f64;
    let mut t = t0;
    for _ in 0..levels {
        let r = integrate_nd(
            |k: &[f64]| {
                let ks = [k[0], k[1], k[2]];
                let om =
                    libm::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + m.value() * m.value());
                let damp = libm::exp(-t * (om * eta0 - (k[0] * es[0] + k[1] * es[1] + k[2] * es[2])));
                g.minkowski_ft(om, &ks) * damp / (2.0 * om)
            },
            3,
            &Domain::Box {
                lo: lo.clone(),
                hi: hi.clone(),
            },
            spec,
        )?;
        nodes.push(t);
        values.push(r.value / TWO_PI_CUBED);
        evals += r.evals;
        converged &= r.converged;
        max_quad_err = max_quad_err.max(r.error_estimate / TWO_PI_CUBED);
        t *= 0.5;
    }

    let (extrapolated, neville_err) = neville_to_zero(&nodes, &values);
    let observed_order = fit_order(&nodes, &values, extrapolated);
    Ok(BoundaryProbe {
        nodes,
        values,
        extrapolated,
        // geometric nodes keep the extrapolation weights bounded by ~4
        error_estimate: neville_err + 4.0 * max_quad_err,
        observed_order,
        evals,
        converged,
    })
}

/// Neville polynomial extrapolation of `(nodes, values)` to zero; returns
/// the highest-order estimate and the difference from the previous one.
fn neville_to_zero(nodes: &[f64], values: &[Complex64]) -> (Complex64, f64) {
    let n = nodes.len();
    let mut tab: Vec<Complex64> = values.to_vec();
    let mut prev = tab[0];
    let mut err = f64::MAX;
    for j in 1..n {
        for i in 0..(n - j) {
            tab[i] = (tab[i] * nodes[i + j] - tab[i + 1] * nodes[i]) / (nodes[i + j] - nodes[i]);
        }
        err = cabs(tab[0] - prev);
        prev = tab[0];
    }
    (tab[0], err)
}

/// Least-squares slope of `ln |F(t) - limit|` against `ln t`, skipping
/// nodes whose difference has fallen to rounding level.
fn fit_order(nodes: &[f64], values: &[Complex64], limit: Complex64) -> f64 {
    let floor = 1e3 * f64::EPSILON * cabs(limit);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, v) in nodes.iter().zip(values) {
        let d = cabs(*v - limit);
        if d > floor {
            xs.push(libm::log(*t));
            ys.push(libm::log(d));
        }
    }
    if xs.len() < 2 {
        return f64::NAN;
    }
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    num / den
}

/// Result of [`kg_annihilation_check`].
#[derive(Debug, Clone, Copy)]
pub struct KgCheck {
    /// Modulus of the pairing of the on-shell measure with
    /// `(d_t^2 - laplacian_3 + m^2) g`; analytically zero.
    pub defect: f64,
    /// Pairing of the termwise moduli: the natural magnitude against which
    /// the defect is measured.
    pub scale: f64,
    /// `defect / scale`.
    pub ratio: f64,
    /// Total integrand evaluations of both integrals.
    pub evals: u64,
    /// Whether both integrals met their tolerances.
    pub converged: bool,
}

/// Verifies that the on-shell momentum measure annihilates the wave
/// operator plus mass term.
///
/// The transform of `(d_t^2 - laplacian_3 + m^2) g` is assembled termwise
/// through the moment path of [`GaussianPacket::axis_ft_d2`], so the
/// on-shell cancellation `(|k|^2 + m^2 - omega^2) = 0` happens numerically
/// rather than symbolically; the residual pairing is pure rounding noise
/// and is reported relative to the pairing of the termwise moduli.
pub fn kg_annihilation_check(
    g: &GaussianPacket,
    m: Mass,
    spec: &QuadratureSpec,
) -> Result<KgCheck, Error> {
    let (lo, hi) = spatial_momentum_box(g);
    let msq = m.value() * m.value();

    // per-point termwise transforms of (d_t^2 - laplacian_3 + m^2) g on the
    // mass shell: time second derivative enters at frequency -omega
    let terms = |k: &[f64]| -> (Complex64, f64) {
        let om = libm::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + msq);
        let f0 = g.axis_ft(0, -om);
        let f = [g.axis_ft(1, k[0]), g.axis_ft(2, k[1]), g.axis_ft(3, k[2])];
        let d20 = g.axis_ft_d2(0, -om);
        let d2 = [
            g.axis_ft_d2(1, k[0]),
            g.axis_ft_d2(2, k[1]),
            g.axis_ft_d2(3, k[2]),
        ];
        let w = f0 * f[0] * f[1] * f[2];
        let time_term = d20 * f[0] * f[1] * f[2];
        let space_terms = [
            f0 * d2[0] * f[1] * f[2],
            f0 * f[0] * d2[1] * f[2],
            f0 * f[0] * f[1] * d2[2],
        ];
        let op = time_term - space_terms[0] - space_terms[1] - space_terms[2] + w * msq;
        let magnitude = cabs(time_term)
            + cabs(space_terms[0])
            + cabs(space_terms[1])
            + cabs(space_terms[2])
            + cabs(w) * msq;
        let weight = 1.0 / (2.0 * om);
        (op * weight, magnitude * weight)
    };

    let dom = Domain::Box {
        lo: lo.clone(),
        hi: hi.clone(),
    };
    let scale_int = integrate_nd(
        |k: &[f64]| Complex64::new(terms(k).1, 0.0),
        3,
        &dom,
        spec,
    )?;
    let scale = scale_int.value.re / TWO_PI_CUBED;

    // the defect integrand is rounding noise, so only an absolute target
    // tied to the scale is meaningful
    let defect_spec = QuadratureSpec {
        rel_tol: 0.0,
        abs_tol: 1e-12 * scale * TWO_PI_CUBED,
        ..*spec
    };
    let defect_int = integrate_nd(|k: &[f64]| terms(k).0, 3, &dom, &defect_spec)?;
    let defect = cabs(defect_int.value) / TWO_PI_CUBED;

    Ok(KgCheck {
        defect,
        scale,
        ratio: defect / scale,
        evals: scale_int.evals + defect_int.evals,
        converged: scale_int.converged && defect_int.converged,
    })
}

/// Result of [`greens_check`].
#[derive(Debug, Clone, Copy)]
pub struct GreensCheck {
    /// `-g(0)`, the closed-form target of both routes.
    pub target: Complex64,
    /// Momentum route: `-(2pi)^{-4}` times the product of per-axis inverse
    /// transforms at the origin. The kernel factor `(k^2 + m^2)` cancels
    /// against the momentum kernel analytically, leaving pure Fourier
    /// inversion.
    pub momentum_value: Complex64,
    /// `|momentum_value - target|`.
    pub momentum_defect: f64,
    /// Position route: `int S(x) ((laplacian - m^2) g)(x) d^4x` over a ball
    /// containing the packet, with the position kernel tabulated radially.
    pub position_value: Complex64,
    /// `|position_value - target|`.
    pub position_defect: f64,
    /// Total integrand evaluations (momentum axes + table + ball).
    pub evals: u64,
    /// Whether every integral met its tolerance.
    pub converged: bool,
}

/// Verifies the Green's-function property of the Euclidean position kernel
/// through two routes with very different failure modes: exact momentum
/// cancellation (Fourier inversion) and a literal position-space pairing
/// with the numerically tabulated kernel.
pub fn greens_check(
    g: &GaussianPacket,
    m: Mass,
    spec_axis: &QuadratureSpec,
    spec_ball: &QuadratureSpec,
) -> Result<GreensCheck, Error> {
    let target = -g.eval(&[0.0; 4]);
    let mut evals = 0u64;
    let mut converged = true;

    // momentum route: g(0) = prod_mu (1/2pi) int F_mu(nu) d nu
    let mut product = Complex64::new(1.0, 0.0);
    for axis in 0..4 {
        let r = integrate_1d(
            |nu| g.axis_ft(axis, nu),
            f64::NEG_INFINITY,
            f64::INFINITY,
            spec_axis,
        )?;
        evals += r.evals;
        converged &= r.converged;
        product *= r.value / (2.0 * core::f64::consts::PI);
    }
    let momentum_value = -product;

    // position route over a ball that contains the packet support
    let mut center_norm_sq = 0.0;
    let mut max_width = 0.0f64;
    for mu in 0..4 {
        center_norm_sq += g.centers()[mu] * g.centers()[mu];
        max_width = max_width.max(g.widths()[mu]);
    }
    let radius = libm::sqrt(center_norm_sq) + 10.0 * max_width;
    let table = RadialKernelTable::build(m, radius, spec_axis)?;
    evals += table.build_evals;
    converged &= table.converged;

    let ball = integrate_nd(
        |x: &[f64]| {
            let r = libm::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
            let s = table.eval(r);
            let xp = [x[0], x[1], x[2], x[3]];
            g.laplace_minus_msq(&xp, m) * s
        },
        4,
        &Domain::Ball { radius },
        spec_ball,
    )?;
    evals += ball.evals;
    converged &= ball.converged;

    Ok(GreensCheck {
        target,
        momentum_value,
        momentum_defect: cabs(momentum_value - target),
        position_value: ball.value,
        position_defect: cabs(ball.value - target),
        evals,
        converged,
    })
}

/// Radial table of the Euclidean position kernel: stores
/// `ln(r^2 s(r))` on a log-spaced grid, which is smooth both at the
/// `1/r^2` short-distance singularity and under the `e^{-m r}` decay.
struct RadialKernelTable {
    ln_r_min: f64,
    step: f64,
    ln_u: Vec<f64>,
    r_min: f64,
    build_evals: u64,
    converged: bool,
}

const TABLE_POINTS: usize = 600;

impl RadialKernelTable {
    fn build(m: Mass, r_max: f64, spec: &QuadratureSpec) -> Result<Self, Error> {
        let r_min = r_max * 1e-7;
        let ln_r_min = libm::log(r_min);
        let step = (libm::log(r_max) - ln_r_min) / (TABLE_POINTS - 1) as f64;
        let mut ln_u = Vec::with_capacity(TABLE_POINTS);
        let mut build_evals = 0;
        let mut converged = true;
        for i in 0..TABLE_POINTS {
            let r = libm::exp(ln_r_min + i as f64 * step);
            let x = FourVector::euclidean([0.0, 0.0, 0.0], r)?;
            let s = schwinger_position(&x, m, spec)?;
            build_evals += s.evals;
            converged &= s.converged;
            ln_u.push(libm::log(s.value.re * r * r));
        }
        Ok(RadialKernelTable {
            ln_r_min,
            step,
            ln_u,
            r_min,
            build_evals,
            converged,
        })
    }

    /// Cubic (4-point Lagrange) interpolation in `ln r`; below the first
    /// node the kernel follows its `1/r^2` short-distance form.
    fn eval(&self, r: f64) -> f64 {
        if r <= self.r_min {
            return libm::exp(self.ln_u[0]) / (r * r);
        }
        let t = (libm::log(r) - self.ln_r_min) / self.step;
        let n = self.ln_u.len();
        // window [j-1, j, j+1, j+2] around the cell containing t
        let j = (t as usize).min(n - 3).max(1);
        let u = t - j as f64;
        let (a, b, c, d) = (
            self.ln_u[j - 1],
            self.ln_u[j],
            self.ln_u[j + 1],
            self.ln_u[j + 2],
        );
        let w_m1 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        let w_0 = (u * u - 1.0) * (u - 2.0) / 2.0;
        let w_p1 = -u * (u + 1.0) * (u - 2.0) / 2.0;
        let w_p2 = u * (u * u - 1.0) / 6.0;
        let ln_u = a * w_m1 + b * w_0 + c * w_p1 + d * w_p2;
        libm::exp(ln_u) / (r * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m1() -> Mass {
        Mass::new(1.0).unwrap()
    }

    fn spec3(rel: f64) -> QuadratureSpec {
        QuadratureSpec::default_for_dim(3).with_rel_tol(rel)
    }

    /// Self-contained adaptive Simpson (as in the kernel tests) so the
    /// smear check has an oracle that never touches the crate engine.
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        fn rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let mid = 0.5 * (a + b);
            let (l, r) = (rule(f, a, mid), rule(f, mid, b));
            if depth == 0 || (l + r - whole).abs() <= 15.0 * tol {
                l + r + (l + r - whole) / 15.0
            } else {
                rec(f, a, mid, l, 0.5 * tol, depth - 1) + rec(f, mid, b, r, 0.5 * tol, depth - 1)
            }
        }
        rec(f, a, b, rule(f, a, b), tol, depth)
    }

    #[test]
    fn smear_matches_radial_oracle_for_isotropic_packet() {
        // centered isotropic packet without phase: the pairing collapses to
        // a radial integral evaluated here with a self-contained rule
        let sigma = 0.9;
        let g = GaussianPacket::new([0.0; 4], [sigma; 4], [0.0; 4]).unwrap();
        let r = smear_two_point(&g, m1(), &spec3(1e-8)).unwrap();
        assert!(r.converged);
        assert!(r.value.im.abs() < 1e-12 * r.value.re.abs());

        let w4 = {
            // prod of four axis factors at (omega, |k| direction): the
            // spatial part depends only on |k|
            let pref = sigma * libm::sqrt(2.0 * core::f64::consts::PI);
            move |om: f64, ksq: f64| {
                pref.powi(4)
                    * libm::exp(-0.5 * sigma * sigma * (om * om + ksq))
            }
        };
        let radial = |k: f64| {
            let om = libm::sqrt(k * k + 1.0);
            k * k * w4(om, k * k) / (2.0 * om)
        };
        let truth =
            simpson(&radial, 0.0, 14.0 / sigma, 1e-14, 40) * 4.0 * core::f64::consts::PI
                / TWO_PI_CUBED;
        assert!(
            (r.value.re - truth).abs() < 1e-7 * truth,
            "{} vs {truth}",
            r.value.re
        );
    }

    #[test]
    fn boundary_probe_extrapolates_to_smear() {
        let g = GaussianPacket::new(
            [0.2, 0.0, -0.3, 0.1],
            [1.0, 1.1, 0.9, 1.0],
            [1.4, 0.5, -0.2, 0.3],
        )
        .unwrap();
        let eta = FourVector::minkowski(1.0, [0.2, -0.1, 0.05]).unwrap();
        let spec = spec3(1e-9);
        let smear = smear_two_point(&g, m1(), &spec).unwrap();
        let probe = boundary_limit_probe(&g, &eta, m1(), 8e-3, 4, &spec).unwrap();
        assert!(
            probe.converged && smear.converged,
            "smear conv {} err {} evals {} | probe conv {} err {} evals {} | value {}",
            smear.converged,
            smear.error_estimate,
            smear.evals,
            probe.converged,
            probe.error_estimate,
            probe.evals,
            smear.value
        );
        assert!(
            cabs(probe.extrapolated - smear.value) < 1e-7 * cabs(smear.value),
            "{} vs {}",
            probe.extrapolated,
            smear.value
        );
        assert!(
            (probe.observed_order - 1.0).abs() < 0.35,
            "order {}",
            probe.observed_order
        );
        assert_eq!(probe.nodes.len(), 4);
        assert!(probe.nodes[3] == 1e-3);
    }

    #[test]
    fn boundary_probe_is_invariant_under_exact_rescaling() {
        // t and eta enter only through their product; rescaling by a power
        // of two commutes with rounding, so the damped values agree bitwise
        let g = GaussianPacket::standard([1.0, 0.4, 0.0, -0.2]).unwrap();
        let spec = spec3(1e-7);
        let eta1 = FourVector::minkowski(1.0, [0.25, 0.0, -0.125]).unwrap();
        let eta2 = FourVector::minkowski(2.0, [0.5, 0.0, -0.25]).unwrap();
        let p1 = boundary_limit_probe(&g, &eta1, m1(), 8e-3, 3, &spec).unwrap();
        let p2 = boundary_limit_probe(&g, &eta2, m1(), 4e-3, 3, &spec).unwrap();
        for (a, b) in p1.values.iter().zip(&p2.values) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn boundary_probe_rejects_bad_directions() {
        let g = GaussianPacket::standard([0.0; 4]).unwrap();
        let spec = spec3(1e-6);
        // spacelike direction
        let eta = FourVector::minkowski(0.5, [1.0, 0.0, 0.0]).unwrap();
        assert!(boundary_limit_probe(&g, &eta, m1(), 1e-2, 4, &spec).is_err());
        // Euclidean vector
        let eta = FourVector::euclidean([0.0; 3], 1.0).unwrap();
        assert!(boundary_limit_probe(&g, &eta, m1(), 1e-2, 4, &spec).is_err());
        // bad damping / level counts
        let eta = FourVector::minkowski(1.0, [0.0; 3]).unwrap();
        assert!(boundary_limit_probe(&g, &eta, m1(), 0.0, 4, &spec).is_err());
        assert!(boundary_limit_probe(&g, &eta, m1(), 1e-2, 1, &spec).is_err());
        assert!(boundary_limit_probe(&g, &eta, m1(), 1e-2, 9, &spec).is_err());
    }

    #[test]
    fn wave_operator_annihilates_on_shell_measure() {
        let g = GaussianPacket::new(
            [0.1, 0.3, 0.0, -0.2],
            [1.0, 0.8, 1.2, 1.0],
            [1.2, -0.4, 0.6, 0.0],
        )
        .unwrap();
        let check = kg_annihilation_check(&g, m1(), &spec3(1e-7)).unwrap();
        assert!(check.converged);
        assert!(check.scale > 0.0);
        assert!(
            check.ratio < 1e-10,
            "defect {} scale {} ratio {}",
            check.defect,
            check.scale,
            check.ratio
        );
    }

    #[test]
    fn greens_property_both_routes() {
        let g = GaussianPacket::new(
            [0.2, -0.1, 0.3, 0.0],
            [1.0, 0.9, 1.1, 1.0],
            [0.4, 0.2, -0.3, 0.1],
        )
        .unwrap();
        let spec1 = QuadratureSpec::default_for_dim(1).with_rel_tol(1e-13);
        let spec4 = QuadratureSpec::default_for_dim(4).with_rel_tol(1e-4);
        let check = greens_check(&g, m1(), &spec1, &spec4).unwrap();
        let g0 = cabs(check.target);
        assert!(
            check.momentum_defect < 1e-12 * g0,
            "momentum defect {} vs g(0) {}",
            check.momentum_defect,
            g0
        );
        assert!(
            check.position_defect < 1e-3 * g0,
            "position defect {} vs g(0) {}",
            check.position_defect,
            g0
        );
    }

    #[test]
    fn radial_table_matches_direct_kernel() {
        let spec = QuadratureSpec::default_for_dim(1);
        let table = RadialKernelTable::build(m1(), 12.0, &spec).unwrap();
        for r in [1e-4, 0.03, 0.4, 1.7, 6.0, 11.0] {
            let x = FourVector::euclidean([0.0, 0.0, 0.0], r).unwrap();
            let direct = schwinger_position(&x, m1(), &spec).unwrap().value.re;
            let interp = table.eval(r);
            assert!(
                (interp - direct).abs() < 1e-6 * direct,
                "r={r}: {interp} vs {direct}"
            );
        }
    }

    #[test]
    fn neville_recovers_polynomial_limits() {
        // F(t) = 3 - 2t + t^2 - 5 t^3 at geometric nodes
        let nodes = [0.8, 0.4, 0.2, 0.1];
        let f = |t: f64| {
            Complex64::new(3.0 - 2.0 * t + t * t - 5.0 * t * t * t, 0.5 * t)
        };
        let values: Vec<Complex64> = nodes.iter().map(|&t| f(t)).collect();
        let (v, err) = neville_to_zero(&nodes, &values);
        assert!(cabs(v - Complex64::new(3.0, 0.0)) < 1e-12);
        // the quoted error is the cubic-vs-quadratic diagonal difference:
        // |c3| * t0 t1 t2 = 5 * 0.064
        assert!((err - 0.32).abs() < 1e-12, "err {err}");
    }

    #[test]
    fn order_fit_recovers_known_slope() {
        let nodes = [0.8, 0.4, 0.2, 0.1];
        let limit = Complex64::new(2.0, 0.0);
        let values: Vec<Complex64> = nodes
            .iter()
            .map(|&t| limit + Complex64::new(0.3 * t * t, 0.0))
            .collect();
        let slope = fit_order(&nodes, &values, limit);
        assert!((slope - 2.0).abs() < 1e-10);
    }

    #[test]
    fn smear_is_invariant_under_spatial_parity() {
        // flipping the spatial centers and momenta (time axis untouched)
        // substitutes k -> -k in the pairing, which the measure absorbs
        let g = GaussianPacket::new(
            [0.3, 0.5, -0.2, 0.1],
            [1.0, 0.8, 1.2, 0.9],
            [0.9, 0.7, -0.2, 0.4],
        )
        .unwrap();
        let h = GaussianPacket::new(
            [0.3, -0.5, 0.2, -0.1],
            [1.0, 0.8, 1.2, 0.9],
            [0.9, -0.7, 0.2, -0.4],
        )
        .unwrap();
        let s = smear_two_point(&g, m1(), &spec3(1e-8)).unwrap();
        let sp = smear_two_point(&h, m1(), &spec3(1e-8)).unwrap();
        assert!(s.converged && sp.converged);
        assert!(
            cabs(sp.value - s.value) < 1e-7 * cabs(s.value),
            "{} vs {}",
            sp.value,
            s.value
        );
    }
}
