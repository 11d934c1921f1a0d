//! Twisted (star) products.
//!
//! Plane waves are the carriers: the off-shell product multiplies
//! coefficients by a bilinear phase and adds labels, while the on-shell
//! product lifts spatial labels to the mass shell before contracting with
//! `theta` and re-lifts composite labels. The re-lift is what breaks
//! associativity: `omega(a+b) != omega(a) + omega(b)`, so the two
//! association orders accumulate different phases. The defect is evaluated
//! in a reduced form built from the lift-deficiency vectors, which is free
//! of large-term cancellation and vanishes identically (exactly, in
//! floating point) when the lift is the identity.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::kernels::{schwinger2_theta_ft, two_point_ft_weight, TwistKind};
use crate::quadrature::{cabs, cis, integrate_nd, Domain, IntegralResult, QuadratureSpec};
use crate::schwartz::GaussianPacket;
use crate::spacetime::{
    mass_shell_lift, twist_phase, FourVector, Mass, Signature, SpacetimeError, SpatialVector,
    ThetaMatrix,
};
use crate::Error;

/// A plane wave `coefficient * e^{i k.x}` labeled by its four-momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveLabel {
    pub momentum: FourVector,
    pub coefficient: Complex64,
}

impl PlaneWaveLabel {
    pub fn new(momentum: FourVector, coefficient: Complex64) -> Result<Self, Error> {
        if !coefficient.re.is_finite() || !coefficient.im.is_finite() {
            return Err(Error::InvalidParameter);
        }
        Ok(PlaneWaveLabel {
            momentum,
            coefficient,
        })
    }

    /// Unit-coefficient plane wave.
    pub fn unit(momentum: FourVector) -> Self {
        PlaneWaveLabel {
            momentum,
            coefficient: Complex64::new(1.0, 0.0),
        }
    }
}

fn from_components(c: [f64; 4], signature: Signature) -> Result<FourVector, Error> {
    let v = match signature {
        Signature::Minkowski => FourVector::minkowski(c[0], [c[1], c[2], c[3]])?,
        Signature::Euclidean => FourVector::euclidean([c[1], c[2], c[3]], c[0])?,
    };
    Ok(v)
}

fn add4(a: &FourVector, b: &FourVector) -> Result<FourVector, Error> {
    if a.signature() != b.signature() {
        return Err(SpacetimeError::SignatureMismatch.into());
    }
    let (ca, cb) = (a.components(), b.components());
    from_components(
        [ca[0] + cb[0], ca[1] + cb[1], ca[2] + cb[2], ca[3] + cb[3]],
        a.signature(),
    )
}

fn sub4(a: &FourVector, b: &FourVector) -> Result<FourVector, Error> {
    let (ca, cb) = (a.components(), b.components());
    from_components(
        [ca[0] - cb[0], ca[1] - cb[1], ca[2] - cb[2], ca[3] - cb[3]],
        a.signature(),
    )
}

/// Off-shell star product of plane waves: label `k + p`, coefficient
/// multiplied by `e^{-(i/2) p theta k}`. Pure phase arithmetic.
pub fn moyal_star_planewave(
    k: &PlaneWaveLabel,
    p: &PlaneWaveLabel,
    theta: &ThetaMatrix,
) -> Result<PlaneWaveLabel, Error> {
    let phi = twist_phase(&p.momentum, &k.momentum, theta, -0.5)?;
    Ok(PlaneWaveLabel {
        momentum: add4(&k.momentum, &p.momentum)?,
        coefficient: k.coefficient * p.coefficient * cis(phi),
    })
}

/// Associativity defect of the off-shell plane-wave product,
/// `|phase((a*b)*c) - phase(a*(b*c))|`, evaluated through the
/// label-deficiency vectors `d = a + b - (a+b)` and `e = b + c - (b+c)`.
/// For off-shell labels the deficiencies are differences of identical
/// floating-point sums, hence exactly zero, and so is the defect: the
/// bilinearity of the phase is structural, not approximate.
pub fn moyal_associativity_defect(
    a: &FourVector,
    b: &FourVector,
    c: &FourVector,
    theta: &ThetaMatrix,
    scale: f64,
) -> Result<f64, Error> {
    let ab = add4(a, b)?;
    let bc = add4(b, c)?;
    let d = sub4(&add4(a, b)?, &ab)?;
    let e = sub4(&add4(b, c)?, &bc)?;
    // phase((x*y)) = -scale * (y theta x); the two association orders
    // differ by e theta a - c theta d
    let t1 = twist_phase(&e, a, theta, 1.0)?;
    let t2 = twist_phase(c, &d, theta, 1.0)?;
    Ok(libm::fabs(scale * (t1 - t2)))
}

/// On-shell star product at plane-wave level: spatial labels are lifted to
/// the mass shell, contracted with `theta`, and the composite label is the
/// plain spatial sum (to be re-lifted by the next product). Returns the
/// composite label and the accumulated phase `-scale * (a~ theta b~)`.
pub fn onshell_star_planewave(
    a: &SpatialVector,
    b: &SpatialVector,
    m: Mass,
    theta: &ThetaMatrix,
    scale: f64,
) -> Result<(SpatialVector, f64), Error> {
    let la = mass_shell_lift(*a, m).as_four_vector(Signature::Minkowski);
    let lb = mass_shell_lift(*b, m).as_four_vector(Signature::Minkowski);
    let phase = twist_phase(&la, &lb, theta, -scale)?;
    let (ca, cb) = (a.components(), b.components());
    let label = SpatialVector::new([ca[0] + cb[0], ca[1] + cb[1], ca[2] + cb[2]])?;
    Ok((label, phase))
}

fn lift4(k: &SpatialVector, m: Mass) -> FourVector {
    mass_shell_lift(*k, m).as_four_vector(Signature::Minkowski)
}

fn add_spatial(a: &SpatialVector, b: &SpatialVector) -> Result<SpatialVector, Error> {
    let (ca, cb) = (a.components(), b.components());
    Ok(SpatialVector::new([
        ca[0] + cb[0],
        ca[1] + cb[1],
        ca[2] + cb[2],
    ])?)
}

/// Associativity defect of the on-shell product,
/// `|phase((a*b)*c) - phase(a*(b*c))|` with composite labels re-lifted.
///
/// Reduced form: with `d = a~ + b~ - (a+b)~` and `e = b~ + c~ - (b+c)~`
/// (purely timelike: the spatial parts cancel exactly), the defect equals
/// `scale * |a~ theta e - d theta c~|`. This evaluates the phase mismatch
/// without subtracting large near-equal phases.
pub fn associativity_defect(
    a: &SpatialVector,
    b: &SpatialVector,
    c: &SpatialVector,
    m: Mass,
    theta: &ThetaMatrix,
    scale: f64,
) -> Result<f64, Error> {
    let la = lift4(a, m);
    let lb = lift4(b, m);
    let lc = lift4(c, m);
    let lab = lift4(&add_spatial(a, b)?, m);
    let lbc = lift4(&add_spatial(b, c)?, m);
    let d = sub4(&add4(&la, &lb)?, &lab)?;
    let e = sub4(&add4(&lb, &lc)?, &lbc)?;
    let t1 = twist_phase(&la, &e, theta, 1.0)?;
    let t2 = twist_phase(&d, &lc, theta, 1.0)?;
    Ok(libm::fabs(scale * (t1 - t2)))
}

/// Evaluator for the star product of two Gaussian packets under a
/// block-form `theta` (entries only in the (0,1) and (2,3) planes).
///
/// The product reduces to
/// `(f*g)(x) = (2pi)^{-4} int d^4k g^(k) e^{i k x} f(x - theta^T k / 2)`,
/// which factorizes over the two `theta` blocks into independent 2-D
/// integrals: `(f*g)(x) = B_0(x_0, x_1) * B_1(x_2, x_3)`.
#[derive(Debug, Clone)]
pub struct MoyalStarEvaluator {
    f: GaussianPacket,
    g: GaussianPacket,
    lambda: [f64; 2],
    spec: QuadratureSpec,
}

const TWO_PI: f64 = core::f64::consts::TAU;
/// Half-width of the transform-side momentum boxes in units of the inverse
/// packet width; beyond it the transform factor is below `e^{-72}` while
/// every other factor is bounded by one.
const STAR_BOX_WIDTHS: f64 = 12.0;

impl MoyalStarEvaluator {
    /// One block factor `B_block(u, v)`: a 2-D quadrature over the block's
    /// momentum pair.
    pub fn block_value(&self, block: usize, u: f64, v: f64) -> Result<IntegralResult, Error> {
        if block > 1 {
            return Err(Error::InvalidParameter);
        }
        let (au, av) = (2 * block, 2 * block + 1);
        let lam = self.lambda[block];
        let (mut lo, mut hi) = (vec![0.0; 2], vec![0.0; 2]);
        for (slot, axis) in [au, av].into_iter().enumerate() {
            let center = self.g.momenta()[axis];
            let half = STAR_BOX_WIDTHS / self.g.widths()[axis];
            lo[slot] = center - half;
            hi[slot] = center + half;
        }
        let mut r = integrate_nd(
            |k: &[f64]| {
                let gh = self.g.axis_ft(au, -k[0]) * self.g.axis_ft(av, -k[1]);
                let fu = self.f.axis_eval(au, u + 0.5 * lam * k[1]);
                let fv = self.f.axis_eval(av, v - 0.5 * lam * k[0]);
                gh * cis(k[0] * u + k[1] * v) * fu * fv
            },
            2,
            &Domain::Box { lo, hi },
            &self.spec,
        )?;
        let norm = TWO_PI * TWO_PI;
        r.value /= norm;
        r.error_estimate /= norm;
        Ok(r)
    }

    /// `(f*g)(x)` as the product of the two block factors.
    pub fn eval(&self, x: &[f64; 4]) -> Result<IntegralResult, Error> {
        let b0 = self.block_value(0, x[0], x[1])?;
        let b1 = self.block_value(1, x[2], x[3])?;
        Ok(IntegralResult {
            value: b0.value * b1.value,
            error_estimate: cabs(b0.value) * b1.error_estimate
                + cabs(b1.value) * b0.error_estimate
                + b0.error_estimate * b1.error_estimate,
            evals: b0.evals + b1.evals,
            converged: b0.converged && b1.converged,
        })
    }
}

/// Builds the packet star evaluator. Only block-form `theta` matrices are
/// accepted: the (0,1) and (2,3) entries may be nonzero, everything else
/// must vanish, so that the 4-D twist integral factorizes.
pub fn moyal_star_packet(
    f: &GaussianPacket,
    g: &GaussianPacket,
    theta: &ThetaMatrix,
    spec: &QuadratureSpec,
) -> Result<MoyalStarEvaluator, Error> {
    let e = theta.entries();
    for (i, row) in e.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let in_block =
                (i == 0 && j == 1) || (i == 1 && j == 0) || (i == 2 && j == 3) || (i == 3 && j == 2);
            if !in_block && v != 0.0 {
                return Err(Error::InvalidParameter);
            }
        }
    }
    Ok(MoyalStarEvaluator {
        f: *f,
        g: *g,
        lambda: [e[0][1], e[2][3]],
        spec: *spec,
    })
}

/// A perfect matching of the points `1..=2n`, each pair ordered and the
/// pairs listed with increasing first elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WickPairing {
    pub pairs: Vec<(usize, usize)>,
}

/// All perfect matchings of `1..=n2` in lexicographic order; `(n2-1)!!` of
/// them for even `n2`. Odd `n2` yields no matchings (odd moments vanish),
/// returned as an empty list. Sizes above 12 are rejected: `11!! = 10395`
/// matchings is the intended working range.
pub fn wick_pairings(n2: usize) -> Result<Vec<WickPairing>, Error> {
    if n2 > 12 {
        return Err(Error::InvalidParameter);
    }
    if n2 % 2 == 1 {
        return Ok(Vec::new());
    }
    fn recurse(
        n2: usize,
        used: &mut [bool],
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<WickPairing>,
    ) {
        let first = match (1..=n2).find(|&i| !used[i]) {
            Some(i) => i,
            None => {
                out.push(WickPairing {
                    pairs: current.clone(),
                });
                return;
            }
        };
        used[first] = true;
        for j in (first + 1)..=n2 {
            if !used[j] {
                used[j] = true;
                current.push((first, j));
                recurse(n2, used, current, out);
                current.pop();
                used[j] = false;
            }
        }
        used[first] = false;
    }
    let mut out = Vec::new();
    let mut used = vec![false; n2 + 1];
    let mut current = Vec::new();
    recurse(n2, &mut used, &mut current, &mut out);
    Ok(out)
}

/// Antisymmetric integer matrix selecting which contraction momenta twist
/// against which, and with what sign: the total phase over lifted momenta
/// is `sum_{a<b} sigma_{ab} (lift_a theta lift_b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistAssignment {
    n: usize,
    sigma: Vec<i32>,
}

impl TwistAssignment {
    /// Validates antisymmetry (`sigma_{ab} = -sigma_{ba}`, zero diagonal).
    pub fn new(rows: &[Vec<i32>]) -> Result<Self, Error> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter);
        }
        for (a, row) in rows.iter().enumerate() {
            for (b, &s) in row.iter().enumerate() {
                if s != -rows[b][a] {
                    return Err(Error::InvalidParameter);
                }
            }
        }
        let mut sigma = Vec::with_capacity(n * n);
        for row in rows {
            sigma.extend_from_slice(row);
        }
        Ok(TwistAssignment { n, sigma })
    }

    /// The default model: every pair of distinct momenta twists once, with
    /// `sigma_{ab} = +1` for `a < b`.
    pub fn full(n: usize) -> Self {
        let mut sigma = vec![0i32; n * n];
        for a in 0..n {
            for b in 0..n {
                sigma[a * n + b] = match a.cmp(&b) {
                    core::cmp::Ordering::Less => 1,
                    core::cmp::Ordering::Equal => 0,
                    core::cmp::Ordering::Greater => -1,
                };
            }
        }
        TwistAssignment { n, sigma }
    }

    /// No twisting at all: the commutative reference point.
    pub fn untwisted(n: usize) -> Self {
        TwistAssignment {
            n,
            sigma: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `sigma_{ab}` (zero-based indices).
    pub fn sigma(&self, a: usize, b: usize) -> i32 {
        self.sigma[a * self.n + b]
    }

    /// `sum_{a<b} sigma_{ab} (lift_a theta lift_b)`.
    pub fn total_phase(&self, lifts: &[FourVector], theta: &ThetaMatrix) -> Result<f64, Error> {
        if lifts.len() != self.n {
            return Err(Error::InvalidParameter);
        }
        let mut total = 0.0;
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                let s = self.sigma(a, b);
                if s != 0 {
                    total += f64::from(s) * twist_phase(&lifts[a], &lifts[b], theta, 1.0)?;
                }
            }
        }
        Ok(total)
    }
}

/// Momentum-space value of a twisted `2n`-point contraction: the product
/// of on-shell weights `1/(2 omega(k_a))` over the contraction momenta,
/// times `e^{i Phi}` with `Phi` the assignment's total phase over the
/// mass-shell lifts. With one pair and `sigma_{12} = 1` this is the
/// twisted pair kernel's weight-and-phase; with `sigma = 0` it is the
/// untwisted product.
pub fn assemble_npoint_ft(
    pairing: &WickPairing,
    momenta: &[SpatialVector],
    m: Mass,
    assignment: &TwistAssignment,
    theta: &ThetaMatrix,
) -> Result<Complex64, Error> {
    if momenta.len() != pairing.pairs.len() || momenta.len() != assignment.n() {
        return Err(Error::InvalidParameter);
    }
    let mut weight = 1.0;
    let mut lifts = Vec::with_capacity(momenta.len());
    for k in momenta {
        weight *= two_point_ft_weight(k, m);
        lifts.push(lift4(k, m));
    }
    let phi = assignment.total_phase(&lifts, theta)?;
    Ok(cis(phi) * weight)
}

/// `|K(k, p) - K(-k, -p)|` for the twisted pair kernel
/// [`schwinger2_theta_ft`]. The untwisted and off-shell kernels are even
/// under the joint reflection (bilinear phases see `(-k)(-p) = kp`), so
/// the defect is exactly zero; the on-shell lift keeps `omega` positive
/// while the spatial parts flip, so its phase is odd and the defect is
/// generically positive.
pub fn reflection_defect_ft(
    k: &FourVector,
    p: &FourVector,
    m: Mass,
    theta: &ThetaMatrix,
    twist: TwistKind,
) -> Result<f64, Error> {
    let v = schwinger2_theta_ft(k, p, m, theta, twist)?;
    let vr = schwinger2_theta_ft(&k.reflected(), &p.reflected(), m, theta, twist)?;
    Ok(cabs(v - vr))
}
