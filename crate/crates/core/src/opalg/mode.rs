use super::coeff::{Atom, Atoms, OmegaMass};
use super::expr::OperatorExpr;
use super::labels::{Disc, InnerLabel, LadderOperator, MomentumLabel};
use crate::error::Result;
use crate::exact::{int, qq, re, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldKind {
    Scalar,
    Dirac,
    Gauge,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Scalar => "scalar",
            FieldKind::Dirac => "dirac",
            FieldKind::Gauge => "gauge",
        }
    }

    pub const ALL: [FieldKind; 3] = [FieldKind::Scalar, FieldKind::Dirac, FieldKind::Gauge];

    /// The field a species of quanta belongs to.
    pub fn of(species: super::labels::Field) -> Self {
        use super::labels::Field;
        match species {
            Field::Scalar => FieldKind::Scalar,
            Field::DiracParticle | Field::DiracAntiparticle => FieldKind::Dirac,
            Field::Gauge => FieldKind::Gauge,
        }
    }
}

/// What multiplies the ladder operator inside the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attachment {
    None,
    /// `u(k,s)` next to `b`.
    U,
    /// `v(k,s)` next to `d†`.
    V,
    /// `ū(k,s)` next to `b†` in `ψ̄`.
    UBar,
    /// `v̄(k,s)` next to `d` in `ψ̄`.
    VBar,
    /// `ε_ρ(k,γ) E^α(K,Γ)`.
    Polarization,
}

/// One piece of a mode expansion integrand: `scalar · atoms · op · attachment · e^{phase·i(kx+KX)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModePart {
    pub scalar: Scalar,
    pub atoms: Atoms,
    pub op: LadderOperator,
    pub attachment: Attachment,
    /// `-1` for `e^{-ikx-iKX}`, `+1` for `e^{+ikx+iKX}`.
    pub phase: i8,
}

impl ModePart {
    pub fn expr(&self) -> OperatorExpr {
        OperatorExpr::monomial(self.scalar.clone(), self.atoms.clone(), vec![self.op.clone()])
    }
}

/// Integrand template of a free field expanded in ladder operators.
///
/// The measures are `d³k/((2π)³ 2ω_k)` for scalar and gauge fields and
/// `d³k/(2π)³ · m/k⁰` for the Dirac field, always times `d⁴K/(2π)⁴` and `Λ⁴`.
/// The measure factors are written as atoms with negative exponents so that
/// they cancel exactly against contact terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeExpansion {
    pub kind: FieldKind,
}

impl ModeExpansion {
    pub fn new(kind: FieldKind) -> Self {
        Self { kind }
    }

    pub fn lambda_power(&self) -> i32 {
        4
    }

    /// Number and atoms of `dμ(k) dμ(K) Λ⁴` with the differentials dropped.
    pub fn measure(&self, k: &MomentumLabel) -> (Scalar, Atoms) {
        let mut atoms = Atoms::from_iter([(Atom::TwoPi, -7), (Atom::Lambda, self.lambda_power())]);
        let s = match self.kind {
            FieldKind::Scalar => {
                atoms.push(Atom::Omega(OmegaMass::Scalar, k.clone()), -1);
                re(qq(1, 2))
            }
            FieldKind::Gauge => {
                atoms.push(Atom::Omega(OmegaMass::Gauge, k.clone()), -1);
                re(qq(1, 2))
            }
            FieldKind::Dirac => {
                atoms.push(Atom::K0OverM(k.clone()), -1);
                int(1)
            }
        };
        (s, atoms)
    }

    /// Integrand of the field itself (`φ`, `ψ` or `A_ρ^α`) at fixed labels.
    /// `discrete` is the spin for Dirac and `(γ, Γ)` for gauge; ignored for scalar.
    pub fn field_parts(
        &self,
        k: &MomentumLabel,
        big_k: &InnerLabel,
        spin: Option<&Disc>,
        pol: Option<(&Disc, &Disc)>,
    ) -> Result<Vec<ModePart>> {
        let (s, atoms) = self.measure(k);
        let part = |op: LadderOperator, attachment, phase| ModePart {
            scalar: s.clone(),
            atoms: atoms.clone(),
            op,
            attachment,
            phase,
        };
        Ok(match self.kind {
            FieldKind::Scalar => {
                let a = LadderOperator::scalar(k.clone(), big_k.clone())?;
                vec![part(a.clone(), Attachment::None, -1), part(a.dag(), Attachment::None, 1)]
            }
            FieldKind::Dirac => {
                let s = spin.cloned().unwrap_or_else(|| Disc::sym("s"));
                let b = LadderOperator::dirac_b(k.clone(), s.clone(), big_k.clone())?;
                let d = LadderOperator::dirac_d(k.clone(), s, big_k.clone())?;
                vec![part(b, Attachment::U, -1), part(d.dag(), Attachment::V, 1)]
            }
            FieldKind::Gauge => {
                let (g, big_g) = pol.map(|(a, b)| (a.clone(), b.clone())).unwrap_or_else(|| (Disc::sym("g"), Disc::sym("G")));
                let a = LadderOperator::gauge(k.clone(), g, big_k.clone(), big_g)?;
                vec![part(a.clone(), Attachment::Polarization, -1), part(a.dag(), Attachment::Polarization, 1)]
            }
        })
    }

    /// Integrand of the conjugate field: `φ` again, `ψ̄`, or `A` again.
    pub fn conjugate_parts(
        &self,
        k: &MomentumLabel,
        big_k: &InnerLabel,
        spin: Option<&Disc>,
        pol: Option<(&Disc, &Disc)>,
    ) -> Result<Vec<ModePart>> {
        let parts = self.field_parts(k, big_k, spin, pol)?;
        if self.kind != FieldKind::Dirac {
            return Ok(parts);
        }
        Ok(parts
            .into_iter()
            .map(|p| ModePart {
                op: p.op.dag(),
                attachment: match p.attachment {
                    Attachment::U => Attachment::UBar,
                    _ => Attachment::VBar,
                },
                phase: -p.phase,
                ..p
            })
            .collect())
    }

    /// Human-readable form of the template.
    pub fn describe(&self) -> &'static str {
        match self.kind {
            FieldKind::Scalar => "phi(x,X) = ∫ d³k/((2π)³ 2ω_k) ∫ d⁴K/(2π)⁴ Λ⁴ { a(k;K) e^{-ikx-iKX} + h.c. }",
            FieldKind::Dirac => {
                "psi(x,X) = ∫ d³k/(2π)³ (m/k⁰) ∫ d⁴K/(2π)⁴ Λ⁴ Σ_s { b(k,s;K) u(k,s) e^{-ikx-iKX} + d†(k,s;K) v(k,s) e^{ikx+iKX} }"
            }
            FieldKind::Gauge => {
                "A_ρ^α(x,X) = ∫ d³k/((2π)³ 2ω_k) ∫ d⁴K/(2π)⁴ Λ⁴ Σ_γ Σ_Γ ε_ρ(k,γ) E^α(K,Γ) { a₊(k,γ;K,Γ) e^{-ikx-iKX} + h.c. }"
            }
        }
    }
}
