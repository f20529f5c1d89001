//! Numeric four-vectors, polarization frames, gamma matrices and spinors on
//! Minkowski space with metric `diag(1, -1, -1, -1)`.
//!
//! Everything here is `f64`; identities are checked against a tolerance
//! (default [`DEFAULT_TOLERANCE`]). The symbolic layers never call into this
//! module for equality decisions, only for numeric cross-checks.

mod dirac;
mod polarization;

pub use dirac::{dirac_spinor, spin_sum, DiracSpinor, GammaAlgebra, Matrix4c, SpinorKind};
pub use polarization::{
    build_inner_polarizations, build_spacetime_polarizations, InnerPolarizations,
    PolarizationBasis, SpacetimePolarizations,
};

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Diagonal of the metric.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Contravariant components `(x⁰, x¹, x², x³)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self([t, x, y, z])
    }

    pub fn basis(mu: usize) -> Self {
        let mut c = [0.0; 4];
        c[mu] = 1.0;
        Self(c)
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn square(&self) -> f64 {
        minkowski_dot(self, self)
    }

    /// Covariant components `x_μ = η_μν x^ν`.
    pub fn lowered(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| METRIC[i] * self.0[i])
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector([0, 1, 2, 3].map(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector([0, 1, 2, 3].map(|i| self.0[i] - rhs.0[i]))
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, rhs: f64) -> FourVector {
        FourVector(self.0.map(|c| c * rhs))
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        self * -1.0
    }
}

pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

/// `sqrt(|k|² + m²)`. A massless quantum with zero spatial momentum has no
/// direction and is rejected.
pub fn on_shell_energy(spatial: [f64; 3], mass: f64) -> Result<f64> {
    if mass < 0.0 || mass.is_nan() {
        return Err(Error::NegativeMass(mass));
    }
    let p2: f64 = spatial.iter().map(|x| x * x).sum();
    if mass == 0.0 && p2 == 0.0 {
        return Err(Error::MasslessAtRest);
    }
    Ok((p2 + mass * mass).sqrt())
}

/// A momentum on the mass shell `k² = m²` with positive energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassShellMomentum {
    spatial: [f64; 3],
    mass: f64,
    energy: f64,
}

impl MassShellMomentum {
    pub fn new(spatial: [f64; 3], mass: f64) -> Result<Self> {
        let energy = on_shell_energy(spatial, mass)?;
        Ok(Self { spatial, mass, energy })
    }

    pub fn at_rest(mass: f64) -> Result<Self> {
        Self::new([0.0; 3], mass)
    }

    pub fn spatial(&self) -> [f64; 3] {
        self.spatial
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn four_vector(&self) -> FourVector {
        FourVector([self.energy, self.spatial[0], self.spatial[1], self.spatial[2]])
    }
}

/// Which light-cone region a vector falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConeClass {
    TimelikePlus,
    LightlikePlus,
    TimelikeMinus,
    LightlikeMinus,
    Spacelike,
}

impl ConeClass {
    /// From the sign of `K²` and the sign of `K⁰`. The zero vector lies in
    /// both closed cones; it is reported as [`ConeClass::LightlikePlus`].
    pub fn from_signs(square: std::cmp::Ordering, energy: std::cmp::Ordering) -> Self {
        use std::cmp::Ordering::*;
        match (square, energy) {
            (Less, _) => ConeClass::Spacelike,
            (Greater, Less) => ConeClass::TimelikeMinus,
            (Greater, _) => ConeClass::TimelikePlus,
            (Equal, Less) => ConeClass::LightlikeMinus,
            (Equal, _) => ConeClass::LightlikePlus,
        }
    }

    /// Inside `V⁺ ∪ V⁻`, the admissible support for inner momenta.
    pub fn in_support(self) -> bool {
        self != ConeClass::Spacelike
    }

    pub fn name(self) -> &'static str {
        match self {
            ConeClass::TimelikePlus => "timelike_plus",
            ConeClass::LightlikePlus => "lightlike_plus",
            ConeClass::TimelikeMinus => "timelike_minus",
            ConeClass::LightlikeMinus => "lightlike_minus",
            ConeClass::Spacelike => "spacelike",
        }
    }
}

pub fn cone_classify(k: &FourVector) -> ConeClass {
    let s = k.square();
    let sq = s.partial_cmp(&0.0).unwrap_or(std::cmp::Ordering::Less);
    let en = k.0[0].partial_cmp(&0.0).unwrap_or(std::cmp::Ordering::Equal);
    ConeClass::from_signs(sq, en)
}

/// `max |a_ij - b_ij|` over two 4×4 real arrays.
pub(crate) fn max_abs_diff(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}
