use std::fmt;

use num_complex::Complex;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{fmt_scalar, imag_unit, int, Scalar};
use crate::kinematics::{FourVector, GammaAlgebra, Matrix4c, METRIC};
use crate::opalg::FieldKind;

type C64 = Complex<f64>;

pub const DEFAULT_I_EPSILON: f64 = 1e-8;

/// How a two-point function depends on the inner coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InnerStructure {
    /// `δ⁴(X−Y)`: local, no projector.
    Delta4,
    /// `ᵀδ^{αβ}(X−Y) = ∫ d⁴K/(2π)⁴ Λ⁴ e^{−iK(X−Y)} (η^{αβ} − K^αK^β/K²)`.
    Transverse,
}

/// Momentum-space numerator over `k² − m² + iε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Numerator {
    One,
    /// `k̸ + m`.
    SlashPlusMass,
    /// `η_{μν}` in space-time; the inner projector sits in [`InnerStructure::Transverse`].
    Metric,
}

/// `prefactor · Λ^p · (inner structure) · ∫ d⁴k/(2π)⁴ e^{−ik(x−y)} numerator/(k²−m²+iε)`.
///
/// For [`InnerStructure::Transverse`] the `Λ⁴` inside `ᵀδ` is not counted in
/// `lambda_power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoPointStructure {
    pub kind: FieldKind,
    pub prefactor: Scalar,
    pub lambda_power: i32,
    pub inner: InnerStructure,
    pub numerator: Numerator,
}

impl TwoPointStructure {
    /// Field-by-field differences, empty when equal.
    pub fn differences(&self, other: &TwoPointStructure) -> Vec<String> {
        let mut out = Vec::new();
        if self.kind != other.kind {
            out.push(format!("kind: {} vs {}", self.kind.name(), other.kind.name()));
        }
        if self.prefactor != other.prefactor {
            out.push(format!("prefactor: {} vs {}", fmt_scalar(&self.prefactor), fmt_scalar(&other.prefactor)));
        }
        if self.lambda_power != other.lambda_power {
            out.push(format!("Lambda power: {} vs {}", self.lambda_power, other.lambda_power));
        }
        if self.inner != other.inner {
            out.push(format!("inner structure: {:?} vs {:?}", self.inner, other.inner));
        }
        if self.numerator != other.numerator {
            out.push(format!("numerator: {:?} vs {:?}", self.numerator, other.numerator));
        }
        out
    }
}

impl fmt::Display for TwoPointStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = match self.inner {
            InnerStructure::Delta4 => "delta4(X-Y)",
            InnerStructure::Transverse => "Tdelta(X-Y)",
        };
        let (num, mass) = match (self.numerator, self.kind) {
            (Numerator::One, _) => ("1", "m"),
            (Numerator::SlashPlusMass, _) => ("kslash + m", "m"),
            (Numerator::Metric, _) => ("eta_mn", "mu"),
        };
        write!(
            f,
            "{} * Lambda^{} * {} * ({})/(k^2 - {}^2 + i eps)",
            fmt_scalar(&self.prefactor),
            self.lambda_power,
            inner,
            num,
            mass
        )
    }
}

/// A free Feynman propagator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorSpec {
    kind: FieldKind,
    mass: f64,
    i_epsilon: f64,
}

/// A propagator kernel value at fixed momenta.
#[derive(Clone, Debug, PartialEq)]
pub enum PropagatorValue {
    Scalar(C64),
    Dirac(Matrix4c),
    /// `scalar · η_{μν} ⊗ P_α^β` with the mixed inner projector `P`.
    Gauge { scalar: C64, metric: [[f64; 4]; 4], projector: [[f64; 4]; 4] },
}

impl PropagatorValue {
    /// Entry `(μ, ν, α, β)` of the gauge kernel.
    pub fn gauge_entry(&self, mu: usize, nu: usize, alpha: usize, beta: usize) -> Option<C64> {
        match self {
            PropagatorValue::Gauge { scalar, metric, projector } => Some(scalar * metric[mu][nu] * projector[alpha][beta]),
            _ => None,
        }
    }
}

/// Mixed inner projector `P_α^β = δ_α^β − K_α K^β / K²`; `K^α P_α^β = 0`.
pub fn inner_projector(big_k: &FourVector) -> Result<[[f64; 4]; 4]> {
    let k2 = big_k.square();
    if k2 == 0.0 || !k2.is_finite() {
        return Err(Error::Propagator(format!("inner projector needs K^2 != 0, got {k2}")));
    }
    let low = big_k.lowered();
    let mut p = [[0.0; 4]; 4];
    for (a, row) in p.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            *x = if a == b { 1.0 } else { 0.0 } - low[a] * big_k.0[b] / k2;
        }
    }
    Ok(p)
}

/// `η^{αβ} − K^αK^β/K²`, both indices up.
pub fn inner_projector_upper(big_k: &FourVector) -> Result<[[f64; 4]; 4]> {
    let k2 = big_k.square();
    if k2 == 0.0 || !k2.is_finite() {
        return Err(Error::Propagator(format!("inner projector needs K^2 != 0, got {k2}")));
    }
    let mut p = [[0.0; 4]; 4];
    for (a, row) in p.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            let eta = if a == b { METRIC[a] } else { 0.0 };
            *x = eta - big_k.0[a] * big_k.0[b] / k2;
        }
    }
    Ok(p)
}

fn metric() -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = METRIC[i];
    }
    m
}

impl PropagatorSpec {
    pub fn new(kind: FieldKind, mass: f64, i_epsilon: f64) -> Result<Self> {
        if !(i_epsilon.is_finite() && i_epsilon > 0.0) {
            return Err(Error::Propagator(format!("i_epsilon must be positive, got {i_epsilon}")));
        }
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::Propagator(format!("mass must be non-negative, got {mass}")));
        }
        Ok(Self { kind, mass, i_epsilon })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn i_epsilon(&self) -> f64 {
        self.i_epsilon
    }

    /// The structure as stated for each free field.
    pub fn structure(&self) -> TwoPointStructure {
        printed_structure(self.kind)
    }

    /// The momentum-space kernel as an exact pole expression, without the
    /// factor `i` of the prefactor: `1/(k²−m²)`, `(k̸+m)/(k²−m²)`, `−η/(k²−μ²)`.
    pub fn kernel(&self) -> Kernel {
        let s = self.structure();
        Kernel { coefficient: s.prefactor * -imag_unit(), numerator: s.numerator, pole_order: 1 }
    }
}

/// The printed form of each free two-point function.
pub fn printed_structure(kind: FieldKind) -> TwoPointStructure {
    let (prefactor, lambda_power, inner, numerator) = match kind {
        FieldKind::Scalar => (imag_unit(), 4, InnerStructure::Delta4, Numerator::One),
        FieldKind::Dirac => (imag_unit(), 4, InnerStructure::Delta4, Numerator::SlashPlusMass),
        FieldKind::Gauge => (-imag_unit(), 2, InnerStructure::Transverse, Numerator::Metric),
    };
    TwoPointStructure { kind, prefactor, lambda_power, inner, numerator }
}

/// `coefficient · numerator / (k² − m² + iε)^pole_order`, kept exact so that
/// amputation cancels poles by counting rather than by division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub coefficient: Scalar,
    pub numerator: Numerator,
    pub pole_order: i32,
}

impl Kernel {
    /// Multiplies by `k² − m²`.
    pub fn times_inverse_propagator(&self) -> Kernel {
        Kernel { pole_order: self.pole_order - 1, ..self.clone() }
    }

    /// On-shell value of a pole-free kernel with unit numerator.
    pub fn residue(&self) -> Option<Scalar> {
        (self.pole_order == 0).then(|| self.coefficient.clone())
    }

    pub fn is_one(&self) -> bool {
        self.pole_order == 0 && self.numerator == Numerator::One && self.coefficient == int(1)
    }
}

/// Kernel value at fixed momenta: `numerator/(k² − m² + iε)`, times the
/// printed sign for the gauge field.
pub fn propagator_eval(spec: &PropagatorSpec, k: &FourVector, big_k: Option<&FourVector>) -> Result<PropagatorValue> {
    let denom = C64::new(k.square() - spec.mass * spec.mass, spec.i_epsilon);
    let inv = C64::new(1.0, 0.0) / denom;
    Ok(match spec.kind {
        FieldKind::Scalar => PropagatorValue::Scalar(inv),
        FieldKind::Dirac => {
            let g = GammaAlgebra::dirac();
            let num = g.slash(k) + Matrix4c::identity() * C64::new(spec.mass, 0.0);
            PropagatorValue::Dirac(num * inv)
        }
        FieldKind::Gauge => {
            let big_k = big_k.ok_or_else(|| Error::Propagator("gauge propagator needs an inner momentum".into()))?;
            // the sign in front of i in the stated prefactor
            let sign = if spec.structure().prefactor.im.is_positive() { 1.0 } else { -1.0 };
            PropagatorValue::Gauge { scalar: inv * sign, metric: metric(), projector: inner_projector(big_k)? }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_at_rest() {
        let spec = PropagatorSpec::new(FieldKind::Scalar, 1.0, 1e-12).unwrap();
        let PropagatorValue::Scalar(v) = propagator_eval(&spec, &FourVector::new(2.0, 0.0, 0.0, 0.0), None).unwrap() else {
            panic!()
        };
        assert!((v - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn projector_is_spatial_identity_at_rest() {
        let p = inner_projector(&FourVector::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(p, [[0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]);
        assert!(inner_projector(&FourVector::new(1.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn bad_epsilon_rejected() {
        assert!(PropagatorSpec::new(FieldKind::Scalar, 1.0, 0.0).is_err());
    }

    #[test]
    fn amputation_cancels_pole() {
        let spec = PropagatorSpec::new(FieldKind::Scalar, 1.0, 1e-8).unwrap();
        let k = spec.kernel().times_inverse_propagator();
        assert!(k.is_one());
        let g = PropagatorSpec::new(FieldKind::Gauge, 1.0, 1e-8).unwrap().kernel().times_inverse_propagator();
        assert_eq!(g.residue(), Some(int(-1)));
    }
}
