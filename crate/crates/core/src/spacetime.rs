//! Vectors, mass shells, twist matrices, and cones.
//!
//! Component conventions used throughout the crate:
//!
//! - Index 0 of a [`FourVector`] is the time component in the Minkowski
//!   signature and the fourth (imaginary-time) direction in the Euclidean
//!   signature. Spatial components are indices 1..=3.
//! - The Euclidean pretty-printer emits `(x1, x2, x3, x4)` (fourth component
//!   last); the Minkowski printer emits `(x0; x1, x2, x3)`.
//! - All twist contractions are plain component contractions
//!   `p theta k = sum_{mu,nu} p_mu theta_{mu nu} k_nu` with no metric factors.

use core::fmt;
use core::ops::{Add, Neg, Sub};

/// Metric signature tag carried by every [`FourVector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Signature {
    /// Real-time signature; `dot` is `a0*b0 - a.b`.
    Minkowski,
    /// Imaginary-time signature; `dot` is `a0*b0 + a.b`.
    Euclidean,
}

/// Errors from vector/matrix constructors and signature-checked operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpacetimeError {
    /// A component was NaN or infinite.
    NonFinite,
    /// Two vectors with different signature tags were combined.
    SignatureMismatch,
    /// A matrix failed the antisymmetry requirement.
    NotAntisymmetric,
    /// Mass must be finite and strictly positive.
    InvalidMass,
    /// The (omega, k) pair is not on the mass shell to the required accuracy.
    OffShell,
    /// Cone half-opening angles must lie strictly inside (0, pi/2).
    InvalidAngle,
    /// A cone axis must have nonzero length.
    ZeroAxis,
}

impl fmt::Display for SpacetimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            SpacetimeError::NonFinite => "vector or matrix component is not finite",
            SpacetimeError::SignatureMismatch => "operands carry different signature tags",
            SpacetimeError::NotAntisymmetric => "matrix is not antisymmetric",
            SpacetimeError::InvalidMass => "mass must be finite and > 0",
            SpacetimeError::OffShell => "(omega, k) pair violates omega^2 - |k|^2 = m^2",
            SpacetimeError::InvalidAngle => "cone angle must lie in (0, pi/2)",
            SpacetimeError::ZeroAxis => "cone axis must be nonzero",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for SpacetimeError {}

/// Strictly positive particle mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mass(f64);

impl Mass {
    pub fn new(m: f64) -> Result<Self, SpacetimeError> {
        if m.is_finite() && m > 0.0 {
            Ok(Mass(m))
        } else {
            Err(SpacetimeError::InvalidMass)
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// A spatial 3-vector with finite components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialVector([f64; 3]);

impl SpatialVector {
    pub fn new(components: [f64; 3]) -> Result<Self, SpacetimeError> {
        if components.iter().all(|c| c.is_finite()) {
            Ok(SpatialVector(components))
        } else {
            Err(SpacetimeError::NonFinite)
        }
    }

    pub const ZERO: SpatialVector = SpatialVector([0.0; 3]);

    #[inline]
    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    #[inline]
    pub fn dot(&self, other: &SpatialVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }
}

impl Add for SpatialVector {
    type Output = SpatialVector;
    fn add(self, rhs: SpatialVector) -> SpatialVector {
        SpatialVector([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for SpatialVector {
    type Output = SpatialVector;
    fn sub(self, rhs: SpatialVector) -> SpatialVector {
        SpatialVector([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl Neg for SpatialVector {
    type Output = SpatialVector;
    fn neg(self) -> SpatialVector {
        SpatialVector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Display for SpatialVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// A four-vector tagged with its signature.
///
/// Component 0 is the time axis (Minkowski) or the fourth Euclidean axis.
/// Operations that mix vectors check that the signature tags agree; the
/// arithmetic operators panic on mismatch (a programming error), while [`dot`]
/// and friends report it as an error value.
///
/// [`dot`]: FourVector::dot
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector {
    c0: f64,
    spatial: SpatialVector,
    signature: Signature,
}

impl FourVector {
    pub fn new(
        signature: Signature,
        c0: f64,
        spatial: [f64; 3],
    ) -> Result<Self, SpacetimeError> {
        if !c0.is_finite() {
            return Err(SpacetimeError::NonFinite);
        }
        Ok(FourVector {
            c0,
            spatial: SpatialVector::new(spatial)?,
            signature,
        })
    }

    /// Minkowski vector `(x0; x)`.
    pub fn minkowski(x0: f64, x: [f64; 3]) -> Result<Self, SpacetimeError> {
        Self::new(Signature::Minkowski, x0, x)
    }

    /// Euclidean vector `(x, x4)` (fourth component listed last, stored at
    /// index 0).
    pub fn euclidean(x: [f64; 3], x4: f64) -> Result<Self, SpacetimeError> {
        Self::new(Signature::Euclidean, x4, x)
    }

    pub fn zero(signature: Signature) -> Self {
        FourVector {
            c0: 0.0,
            spatial: SpatialVector::ZERO,
            signature,
        }
    }

    #[inline]
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Component 0 (time, or the fourth Euclidean direction).
    #[inline]
    pub fn c0(&self) -> f64 {
        self.c0
    }

    #[inline]
    pub fn spatial(&self) -> SpatialVector {
        self.spatial
    }

    /// Components in storage order `[c0, x1, x2, x3]`.
    #[inline]
    pub fn components(&self) -> [f64; 4] {
        let s = self.spatial.components();
        [self.c0, s[0], s[1], s[2]]
    }

    fn check_signature(&self, other: &FourVector) -> Result<(), SpacetimeError> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(SpacetimeError::SignatureMismatch)
        }
    }

    /// Signature-aware scalar product.
    pub fn dot(&self, other: &FourVector) -> Result<f64, SpacetimeError> {
        self.check_signature(other)?;
        let s = self.spatial.dot(&other.spatial);
        Ok(match self.signature {
            Signature::Minkowski => self.c0 * other.c0 - s,
            Signature::Euclidean => self.c0 * other.c0 + s,
        })
    }

    /// Signature-aware square `v.v`.
    pub fn squared(&self) -> f64 {
        match self.signature {
            Signature::Minkowski => self.c0 * self.c0 - self.spatial.norm_sq(),
            Signature::Euclidean => self.c0 * self.c0 + self.spatial.norm_sq(),
        }
    }

    /// Plain component contraction `sum_mu a_mu b_mu`, used by cones and
    /// twist phases where no metric is involved.
    pub fn canonical_dot(&self, other: &FourVector) -> Result<f64, SpacetimeError> {
        self.check_signature(other)?;
        Ok(self.c0 * other.c0 + self.spatial.dot(&other.spatial))
    }

    /// Canonical R^4 norm `sqrt(sum_mu a_mu^2)`.
    pub fn canonical_norm(&self) -> f64 {
        libm::sqrt(self.c0 * self.c0 + self.spatial.norm_sq())
    }

    /// Reflect every component: `v -> -v`.
    pub fn reflected(&self) -> FourVector {
        -*self
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        assert_eq!(
            self.signature, rhs.signature,
            "cannot add vectors with different signatures"
        );
        FourVector {
            c0: self.c0 + rhs.c0,
            spatial: self.spatial + rhs.spatial,
            signature: self.signature,
        }
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        assert_eq!(
            self.signature, rhs.signature,
            "cannot subtract vectors with different signatures"
        );
        FourVector {
            c0: self.c0 - rhs.c0,
            spatial: self.spatial - rhs.spatial,
            signature: self.signature,
        }
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector {
            c0: -self.c0,
            spatial: -self.spatial,
            signature: self.signature,
        }
    }
}

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.spatial.components();
        match self.signature {
            Signature::Minkowski => {
                write!(f, "({}; {}, {}, {})", self.c0, s[0], s[1], s[2])
            }
            Signature::Euclidean => {
                write!(f, "({}, {}, {}, {})", s[0], s[1], s[2], self.c0)
            }
        }
    }
}

/// On-shell momentum `(omega_k, k)` with `omega_k = sqrt(|k|^2 + m^2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassShellVector {
    omega: f64,
    k: SpatialVector,
}

/// Relative tolerance for accepting externally supplied (omega, k) pairs.
const SHELL_REL_TOL: f64 = 1e-12;

impl MassShellVector {
    /// Validate an externally supplied pair against the shell condition
    /// `omega^2 - |k|^2 = m^2` (relative tolerance 1e-12, `omega >= m`).
    pub fn try_new(omega: f64, k: SpatialVector, m: Mass) -> Result<Self, SpacetimeError> {
        if !omega.is_finite() {
            return Err(SpacetimeError::NonFinite);
        }
        let m2 = m.value() * m.value();
        let target = k.norm_sq() + m2;
        let defect = libm::fabs(omega * omega - target);
        if omega < m.value() || defect > SHELL_REL_TOL * target {
            return Err(SpacetimeError::OffShell);
        }
        Ok(MassShellVector { omega, k })
    }

    #[inline]
    pub fn omega(&self) -> f64 {
        self.omega
    }

    #[inline]
    pub fn k(&self) -> SpatialVector {
        self.k
    }

    /// View as a four-vector `(omega; k)` with the given signature tag.
    pub fn as_four_vector(&self, signature: Signature) -> FourVector {
        FourVector {
            c0: self.omega,
            spatial: self.k,
            signature,
        }
    }
}

/// Lift a spatial momentum onto the mass shell: `k -> (omega_k, k)`.
pub fn mass_shell_lift(k: SpatialVector, m: Mass) -> MassShellVector {
    let omega = libm::sqrt(k.norm_sq() + m.value() * m.value());
    MassShellVector { omega, k }
}

/// Antisymmetric twist matrix `theta` on R^4 (indices: 0 = time/fourth axis,
/// 1..=3 spatial).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaMatrix {
    entries: [[f64; 4]; 4],
}

impl ThetaMatrix {
    /// The zero matrix (commutative limit).
    pub fn zero() -> Self {
        ThetaMatrix {
            entries: [[0.0; 4]; 4],
        }
    }

    /// Block-diagonal standard form: `theta_{01} = lambda1`,
    /// `theta_{23} = lambda2` (and antisymmetric partners).
    pub fn standard(lambda1: f64, lambda2: f64) -> Result<Self, SpacetimeError> {
        if !lambda1.is_finite() || !lambda2.is_finite() {
            return Err(SpacetimeError::NonFinite);
        }
        let mut entries = [[0.0; 4]; 4];
        entries[0][1] = lambda1;
        entries[1][0] = -lambda1;
        entries[2][3] = lambda2;
        entries[3][2] = -lambda2;
        Ok(ThetaMatrix { entries })
    }

    /// Accept a matrix that is antisymmetric exactly as stored.
    pub fn from_matrix(entries: [[f64; 4]; 4]) -> Result<Self, SpacetimeError> {
        for row in &entries {
            for &e in row {
                if !e.is_finite() {
                    return Err(SpacetimeError::NonFinite);
                }
            }
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e != -entries[j][i] {
                    return Err(SpacetimeError::NotAntisymmetric);
                }
            }
        }
        Ok(ThetaMatrix { entries })
    }

    /// Accept a matrix antisymmetric within `tol` (absolute, relative to the
    /// largest entry), then antisymmetrize exactly: `theta <- (theta - theta^T)/2`.
    pub fn antisymmetrize(
        entries: [[f64; 4]; 4],
        tol: f64,
    ) -> Result<Self, SpacetimeError> {
        let mut scale: f64 = 0.0;
        for row in &entries {
            for &e in row {
                if !e.is_finite() {
                    return Err(SpacetimeError::NonFinite);
                }
                scale = f64::max(scale, libm::fabs(e));
            }
        }
        let bound = tol * f64::max(scale, 1.0);
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if libm::fabs(entries[i][j] + entries[j][i]) > bound {
                    return Err(SpacetimeError::NotAntisymmetric);
                }
                out[i][j] = 0.5 * (entries[i][j] - entries[j][i]);
            }
        }
        Ok(ThetaMatrix { entries: out })
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    #[inline]
    pub fn entries(&self) -> [[f64; 4]; 4] {
        self.entries
    }

    /// Matrix-vector action `(theta v)_mu = sum_nu theta_{mu nu} v_nu`,
    /// preserving the signature tag of `v`.
    pub fn apply(&self, v: &FourVector) -> FourVector {
        let c = v.components();
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.entries[i][0] * c[0]
                + self.entries[i][1] * c[1]
                + self.entries[i][2] * c[2]
                + self.entries[i][3] * c[3];
        }
        FourVector {
            c0: out[0],
            spatial: SpatialVector([out[1], out[2], out[3]]),
            signature: v.signature,
        }
    }

    /// Pfaffian `theta01*theta23 - theta02*theta13 + theta03*theta12`;
    /// nonzero exactly when the matrix has full rank.
    pub fn pfaffian(&self) -> f64 {
        let t = &self.entries;
        t[0][1] * t[2][3] - t[0][2] * t[1][3] + t[0][3] * t[1][2]
    }

    /// Rank of an antisymmetric 4x4 matrix: 0, 2 or 4, up to a small
    /// tolerance relative to the squared entry scale.
    pub fn rank(&self) -> usize {
        let mut scale: f64 = 0.0;
        for row in &self.entries {
            for &e in row {
                scale = f64::max(scale, libm::fabs(e));
            }
        }
        if scale == 0.0 {
            return 0;
        }
        if libm::fabs(self.pfaffian()) > 1e-12 * scale * scale {
            4
        } else {
            2
        }
    }

    /// True when the twist form is degenerate (rank < 4).
    pub fn is_degenerate(&self) -> bool {
        self.rank() < 4
    }
}

impl fmt::Display for ThetaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}, {}, {}, {}]", row[0], row[1], row[2], row[3])?;
        }
        Ok(())
    }
}

/// Twist contraction `scale * sum_{mu nu} p_mu theta_{mu nu} k_nu`.
///
/// Computed in explicitly antisymmetrized form over index pairs, so that
/// `twist_phase(p, k) == -twist_phase(k, p)` and `twist_phase(p, p) == 0`
/// hold exactly in floating point, not merely up to rounding.
pub fn twist_phase(
    p: &FourVector,
    k: &FourVector,
    theta: &ThetaMatrix,
    scale: f64,
) -> Result<f64, SpacetimeError> {
    if p.signature() != k.signature() {
        return Err(SpacetimeError::SignatureMismatch);
    }
    let pc = p.components();
    let kc = k.components();
    let mut total = 0.0;
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let t = theta.entry(mu, nu);
            if t != 0.0 {
                total += t * (pc[mu] * kc[nu] - pc[nu] * kc[mu]);
            }
        }
    }
    Ok(scale * total)
}

/// Open cone `{ y : y.a > |y| cos(angle) }` with the canonical R^4 product
/// and norm. The axis is normalized on construction; membership is strict,
/// so the origin and the cone boundary are excluded.
#[derive(Clone, Copy, Debug)]
pub struct Cone {
    axis: FourVector,
    angle: f64,
}

impl Cone {
    pub fn new(axis: FourVector, angle: f64) -> Result<Self, SpacetimeError> {
        if !(angle.is_finite() && angle > 0.0 && angle < core::f64::consts::FRAC_PI_2) {
            return Err(SpacetimeError::InvalidAngle);
        }
        let n = axis.canonical_norm();
        if n == 0.0 {
            return Err(SpacetimeError::ZeroAxis);
        }
        let c = axis.components();
        let axis = FourVector {
            c0: c[0] / n,
            spatial: SpatialVector([c[1] / n, c[2] / n, c[3] / n]),
            signature: axis.signature(),
        };
        Ok(Cone { axis, angle })
    }

    /// Forward cone: axis along component 0, half-opening pi/4. In the
    /// Minkowski signature this is the open forward light cone
    /// `{ y : y0 > |y_spatial| }`.
    pub fn forward(signature: Signature) -> Self {
        Cone {
            axis: FourVector {
                c0: 1.0,
                spatial: SpatialVector::ZERO,
                signature,
            },
            angle: core::f64::consts::FRAC_PI_4,
        }
    }

    #[inline]
    pub fn axis(&self) -> FourVector {
        self.axis
    }

    #[inline]
    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Strict membership test `y.a > |y| cos(angle)`.
    pub fn contains(&self, y: &FourVector) -> Result<bool, SpacetimeError> {
        let d = y.canonical_dot(&self.axis)?;
        Ok(d > y.canonical_norm() * libm::cos(self.angle))
    }

    /// Dual cone: same axis, half-opening `pi/2 - angle`. A cone with
    /// angle pi/4 is self-dual.
    pub fn dual(&self) -> Cone {
        Cone {
            axis: self.axis,
            angle: core::f64::consts::FRAC_PI_2 - self.angle,
        }
    }
}
