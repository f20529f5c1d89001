use std::fmt;

use crate::exact::{fmt_rational, Rational};
use crate::error::{Error, Result};

pub type Vec3 = [Rational; 3];
pub type Vec4 = [Rational; 4];

/// Spatial momentum label `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MomentumLabel {
    Symbol(String),
    Bound(Vec3),
}

/// Inner momentum label `K`. `OnShell(k)` stands for the four-vector
/// `(ω_k, k)` built from a momentum label, which is what the gravitational
/// limit leaves behind.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InnerLabel {
    Symbol(String),
    Bound(Vec4),
    OnShell(MomentumLabel),
}

/// Spin or polarization label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Disc {
    Symbol(String),
    Value(u8),
}

impl MomentumLabel {
    pub fn sym(s: &str) -> Self {
        MomentumLabel::Symbol(s.to_string())
    }

    pub fn is_bound(&self) -> bool {
        matches!(self, MomentumLabel::Bound(_))
    }

    pub fn symbol(&self) -> Option<&str> {
        match self {
            MomentumLabel::Symbol(s) => Some(s),
            MomentumLabel::Bound(_) => None,
        }
    }
}

impl InnerLabel {
    pub fn sym(s: &str) -> Self {
        InnerLabel::Symbol(s.to_string())
    }

    pub fn is_bound(&self) -> bool {
        match self {
            InnerLabel::Symbol(_) => false,
            InnerLabel::Bound(_) => true,
            InnerLabel::OnShell(k) => k.is_bound(),
        }
    }
}

impl Disc {
    pub fn sym(s: &str) -> Self {
        Disc::Symbol(s.to_string())
    }

    pub fn value(&self) -> Option<u8> {
        match self {
            Disc::Value(v) => Some(*v),
            Disc::Symbol(_) => None,
        }
    }
}

impl From<u8> for Disc {
    fn from(v: u8) -> Self {
        Disc::Value(v)
    }
}

impl From<&str> for Disc {
    fn from(s: &str) -> Self {
        Disc::Symbol(s.to_string())
    }
}

impl From<&str> for MomentumLabel {
    fn from(s: &str) -> Self {
        MomentumLabel::sym(s)
    }
}

impl From<Vec3> for MomentumLabel {
    fn from(v: Vec3) -> Self {
        MomentumLabel::Bound(v)
    }
}

impl From<&str> for InnerLabel {
    fn from(s: &str) -> Self {
        InnerLabel::sym(s)
    }
}

impl From<Vec4> for InnerLabel {
    fn from(v: Vec4) -> Self {
        InnerLabel::Bound(v)
    }
}

pub(crate) fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for MomentumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentumLabel::Symbol(s) => write!(f, "{s}"),
            MomentumLabel::Bound(v) => write!(f, "{}", fmt_vec(v)),
        }
    }
}

impl fmt::Display for InnerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InnerLabel::Symbol(s) => write!(f, "{s}"),
            InnerLabel::Bound(v) => write!(f, "{}", fmt_vec(v)),
            InnerLabel::OnShell(k) => write!(f, "~{k}"),
        }
    }
}

impl fmt::Display for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disc::Symbol(s) => write!(f, "{s}"),
            Disc::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Field species. The declaration order is part of the canonical operator order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Scalar,
    DiracParticle,
    DiracAntiparticle,
    Gauge,
}

impl Field {
    pub fn is_fermionic(self) -> bool {
        matches!(self, Field::DiracParticle | Field::DiracAntiparticle)
    }

    pub fn head(self) -> &'static str {
        match self {
            Field::Scalar => "a",
            Field::DiracParticle => "b",
            Field::DiracAntiparticle => "d",
            Field::Gauge => "A",
        }
    }

    pub fn from_head(h: &str) -> Option<Field> {
        Some(match h {
            "a" => Field::Scalar,
            "b" => Field::DiracParticle,
            "d" => Field::DiracAntiparticle,
            "A" => Field::Gauge,
            _ => return None,
        })
    }
}

/// The discrete labels an operator carries besides its momenta.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Discrete {
    None,
    Spin(Disc),
    /// Space-time polarization `γ ∈ 0..3` and inner polarization `Γ ∈ 1..3`.
    Pol(Disc, Disc),
}

/// A creation or annihilation operator with its labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LadderOperator {
    field: Field,
    dagger: bool,
    momentum: MomentumLabel,
    inner: InnerLabel,
    discrete: Discrete,
}

impl LadderOperator {
    pub fn new(
        field: Field,
        dagger: bool,
        momentum: MomentumLabel,
        inner: InnerLabel,
        discrete: Discrete,
    ) -> Result<Self> {
        let op = LadderOperator { field, dagger, momentum, inner, discrete };
        op.validate()?;
        Ok(op)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match (&self.field, &self.discrete) {
            (Field::Scalar, Discrete::None) => {}
            (Field::DiracParticle | Field::DiracAntiparticle, Discrete::Spin(s)) => {
                if let Some(v) = s.value() {
                    if !(1..=2).contains(&v) {
                        return Err(Error::BadSpin(v));
                    }
                }
            }
            (Field::Gauge, Discrete::Pol(g, big_g)) => {
                if let Some(v) = g.value() {
                    if v > 3 {
                        return Err(Error::BadPolarization(format!("g={v}")));
                    }
                }
                if let Some(v) = big_g.value() {
                    if v == 0 {
                        return Err(Error::InnerPolarizationZero(0));
                    }
                    if v > 3 {
                        return Err(Error::BadPolarization(format!("G={v}")));
                    }
                }
            }
            _ => {
                return Err(Error::BadPolarization(format!(
                    "labels do not match field {}",
                    self.field.head()
                )))
            }
        }
        if let InnerLabel::OnShell(k) = &self.inner {
            if k != &self.momentum {
                return Err(Error::MixedLabels(format!(
                    "on-shell inner label ~{k} on operator with momentum {}",
                    self.momentum
                )));
            }
        }
        if self.momentum.is_bound() != self.inner.is_bound() {
            return Err(Error::MixedLabels(self.to_string()));
        }
        Ok(())
    }

    pub fn scalar(k: impl Into<MomentumLabel>, big_k: impl Into<InnerLabel>) -> Result<Self> {
        Self::new(Field::Scalar, false, k.into(), big_k.into(), Discrete::None)
    }

    pub fn dirac_b(k: impl Into<MomentumLabel>, s: impl Into<Disc>, big_k: impl Into<InnerLabel>) -> Result<Self> {
        Self::new(Field::DiracParticle, false, k.into(), big_k.into(), Discrete::Spin(s.into()))
    }

    pub fn dirac_d(k: impl Into<MomentumLabel>, s: impl Into<Disc>, big_k: impl Into<InnerLabel>) -> Result<Self> {
        Self::new(Field::DiracAntiparticle, false, k.into(), big_k.into(), Discrete::Spin(s.into()))
    }

    pub fn gauge(
        k: impl Into<MomentumLabel>,
        g: impl Into<Disc>,
        big_k: impl Into<InnerLabel>,
        big_g: impl Into<Disc>,
    ) -> Result<Self> {
        Self::new(Field::Gauge, false, k.into(), big_k.into(), Discrete::Pol(g.into(), big_g.into()))
    }

    /// The adjoint operator.
    pub fn dag(&self) -> Self {
        LadderOperator { dagger: !self.dagger, ..self.clone() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_creator(&self) -> bool {
        self.dagger
    }

    pub fn momentum(&self) -> &MomentumLabel {
        &self.momentum
    }

    pub fn inner(&self) -> &InnerLabel {
        &self.inner
    }

    pub fn discrete(&self) -> &Discrete {
        &self.discrete
    }

    pub fn is_fermionic(&self) -> bool {
        self.field.is_fermionic()
    }

    pub fn spin(&self) -> Option<&Disc> {
        match &self.discrete {
            Discrete::Spin(s) => Some(s),
            _ => None,
        }
    }

    pub fn polarizations(&self) -> Option<(&Disc, &Disc)> {
        match &self.discrete {
            Discrete::Pol(g, big_g) => Some((g, big_g)),
            _ => None,
        }
    }

    pub fn is_bound(&self) -> bool {
        self.momentum.is_bound()
    }

    /// Canonical ordering key: creators first, then species, then labels.
    fn key(&self) -> (bool, Field, &MomentumLabel, &InnerLabel, &Discrete) {
        (!self.dagger, self.field, &self.momentum, &self.inner, &self.discrete)
    }

    /// Rebuilds the operator with new labels, re-validating them.
    pub(crate) fn with_labels(&self, momentum: MomentumLabel, inner: InnerLabel, discrete: Discrete) -> Result<Self> {
        Self::new(self.field, self.dagger, momentum, inner, discrete)
    }

    /// Same operator with its inner label replaced by `(ω_k, k)`.
    pub fn on_shell(&self) -> Self {
        LadderOperator { inner: InnerLabel::OnShell(self.momentum.clone()), ..self.clone() }
    }
}

impl PartialOrd for LadderOperator {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LadderOperator {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for LadderOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.head())?;
        if self.dagger {
            write!(f, "'")?;
        }
        let inner = match &self.inner {
            InnerLabel::OnShell(_) => "~".to_string(),
            other => other.to_string(),
        };
        match &self.discrete {
            Discrete::None => write!(f, "({};{})", self.momentum, inner),
            Discrete::Spin(s) => write!(f, "({},s={};{})", self.momentum, s, inner),
            Discrete::Pol(g, big_g) => write!(f, "({},g={};{},G={})", self.momentum, g, inner, big_g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn gauge_inner_polarization_zero_rejected() {
        assert_eq!(LadderOperator::gauge("k", 0, "K", 0), Err(Error::InnerPolarizationZero(0)));
        assert!(LadderOperator::gauge("k", 0, "K", 1).is_ok());
        assert!(LadderOperator::gauge("k", 4, "K", 1).is_err());
    }

    #[test]
    fn mixed_labels_rejected() {
        let bound = [q(1), q(0), q(0)];
        assert!(matches!(LadderOperator::scalar(bound.clone(), "K"), Err(Error::MixedLabels(_))));
        assert!(LadderOperator::scalar(bound.clone(), [q(1), q(0), q(0), q(0)]).is_ok());
        assert_eq!(LadderOperator::dirac_b("k", 3, "K"), Err(Error::BadSpin(3)));
    }

    #[test]
    fn creators_sort_first() {
        let a = LadderOperator::scalar("k", "K").unwrap();
        let b = LadderOperator::dirac_b("a", 1, "A").unwrap().dag();
        assert!(b < a);
        assert!(a.dag() < a);
    }

    #[test]
    fn display() {
        let op = LadderOperator::gauge("k", 1, "K", 2).unwrap().dag();
        assert_eq!(op.to_string(), "A'(k,g=1;K,G=2)");
        assert_eq!(op.on_shell().to_string(), "A'(k,g=1;~,G=2)");
    }
}
