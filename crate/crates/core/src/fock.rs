//! Multi-quanta states built on the vacuum.
//!
//! A [`FockState`] is an [`OperatorExpr`] all of whose monomials are strings of
//! creators in canonical order, understood as acting on `|0⟩`. Coefficients may
//! carry atoms (deltas, `ω`, powers of `Λ`), so overlaps stay exact.

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{q, ExactFourVector, Rational, Scalar};
use crate::opalg::{
    multiply, reduce_to_normal_form, vev, Atoms, Discrete, Field, InnerLabel, LadderOperator, MomentumLabel,
    OperatorExpr,
};

/// A basis ket: creators in canonical order applied to the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockKet {
    quanta: Vec<LadderOperator>,
}

/// Field masses used for on-shell energies. Exact, default 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMasses {
    pub scalar: Rational,
    pub dirac: Rational,
    pub gauge: Rational,
}

impl Default for FieldMasses {
    fn default() -> Self {
        Self { scalar: q(1), dirac: q(1), gauge: q(1) }
    }
}

impl FieldMasses {
    pub fn of(&self, f: Field) -> &Rational {
        match f {
            Field::Scalar => &self.scalar,
            Field::DiracParticle | Field::DiracAntiparticle => &self.dirac,
            Field::Gauge => &self.gauge,
        }
    }
}

/// `±1`, the sign of `⟨ψ|ψ⟩` for a basis ket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormSign {
    Positive,
    Negative,
}

impl NormSign {
    pub fn value(self) -> i8 {
        match self {
            NormSign::Positive => 1,
            NormSign::Negative => -1,
        }
    }
}

/// Which conserved momentum acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Momentum {
    /// Inertial energy-momentum `p_μ`; `p₀` is the Hamiltonian.
    Inertial,
    /// Inner momentum `P_α`.
    Inner,
}

fn minkowski_square(v: &[Rational; 4]) -> Rational {
    &v[0] * &v[0] - &v[1] * &v[1] - &v[2] * &v[2] - &v[3] * &v[3]
}

/// Inner labels must lie in the closed forward or backward light cone.
pub fn check_support(op: &LadderOperator) -> Result<()> {
    if let InnerLabel::Bound(v) = op.inner() {
        if minkowski_square(v).is_negative() {
            return Err(Error::SpacelikeInner(op.inner().to_string()));
        }
    }
    Ok(())
}

fn check_ket_ops(ops: &[LadderOperator]) -> Result<()> {
    for o in ops {
        if !o.is_creator() {
            return Err(Error::NotAKet(o.to_string()));
        }
        check_support(o)?;
    }
    Ok(())
}

fn eta_diag(v: u8) -> i64 {
    if v == 0 {
        1
    } else {
        -1
    }
}

fn bound_polarizations(op: &LadderOperator) -> Result<Option<(u8, u8)>> {
    match op.discrete() {
        Discrete::Pol(g, big_g) => match (g.value(), big_g.value()) {
            (Some(a), Some(b)) => Ok(Some((a, b))),
            _ => Err(Error::SymbolicLabel(op.to_string())),
        },
        _ => Ok(None),
    }
}

/// `η^{γγ} η^{ΓΓ}` for a gauge quantum, `+1` for matter.
fn quantum_weight(op: &LadderOperator) -> Result<i64> {
    Ok(match bound_polarizations(op)? {
        Some((g, big_g)) => eta_diag(g) * eta_diag(big_g),
        None => 1,
    })
}

fn bound_spatial(k: &MomentumLabel, op: &LadderOperator) -> Result<[Rational; 3]> {
    match k {
        MomentumLabel::Bound(v) => Ok(v.clone()),
        MomentumLabel::Symbol(_) => Err(Error::SymbolicLabel(op.to_string())),
    }
}

/// Covariant momentum `k_μ` (or `K_α`) carried by one quantum, unweighted.
pub fn quantum_momentum(op: &LadderOperator, which: Momentum, masses: &FieldMasses) -> Result<ExactFourVector> {
    let mass = masses.of(op.field());
    let upper = match which {
        Momentum::Inertial => ExactFourVector::on_shell(&bound_spatial(op.momentum(), op)?, mass),
        Momentum::Inner => match op.inner() {
            InnerLabel::Bound(v) => ExactFourVector::from_rationals(v),
            InnerLabel::OnShell(k) => ExactFourVector::on_shell(&bound_spatial(k, op)?, mass),
            InnerLabel::Symbol(_) => return Err(Error::SymbolicLabel(op.to_string())),
        },
    };
    Ok(upper.lowered())
}

impl FockKet {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn quanta(&self) -> &[LadderOperator] {
        &self.quanta
    }

    pub fn is_vacuum(&self) -> bool {
        self.quanta.is_empty()
    }

    pub fn expr(&self) -> OperatorExpr {
        OperatorExpr::ops(self.quanta.clone())
    }

    /// Eigenvalue of `p_μ` or `P_α`, accumulated one quantum at a time from the
    /// vacuum: each creator shifts it by `η^{γγ}η^{ΓΓ}·k` (gauge) or `k` (matter).
    pub fn eigenvalue(&self, which: Momentum, masses: &FieldMasses) -> Result<ExactFourVector> {
        let mut total = ExactFourVector::zero();
        for op in &self.quanta {
            let w = quantum_weight(op)?;
            let k = quantum_momentum(op, which, masses)?;
            total = &total + &k.scale(&q(w));
        }
        Ok(total)
    }

    pub fn norm_sign(&self) -> Result<NormSign> {
        let mut s = 1;
        for op in &self.quanta {
            s *= quantum_weight(op)?;
        }
        Ok(if s > 0 { NormSign::Positive } else { NormSign::Negative })
    }
}

impl fmt::Display for FockKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |0>", if self.quanta.is_empty() { "1".to_string() } else { self.expr().to_string() })
    }
}

/// A finite linear combination of basis kets with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FockState {
    expr: OperatorExpr,
}

impl FockState {
    pub fn vacuum() -> Self {
        Self { expr: OperatorExpr::one() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `e |0⟩` for an expression made of creators only.
    pub fn from_expr(e: &OperatorExpr) -> Result<Self> {
        for (t, _) in e.terms() {
            check_ket_ops(&t.ops)?;
        }
        Ok(Self { expr: reduce_to_normal_form(e) })
    }

    /// `o₁ o₂ … oₙ |0⟩`.
    pub fn product(ops: Vec<LadderOperator>) -> Result<Self> {
        Self::from_expr(&OperatorExpr::ops(ops))
    }

    pub fn expr(&self) -> &OperatorExpr {
        &self.expr
    }

    pub fn is_zero(&self) -> bool {
        self.expr.is_zero()
    }

    /// Kets with their coefficients.
    pub fn kets(&self) -> Vec<(Scalar, Atoms, FockKet)> {
        self.expr
            .terms()
            .map(|(t, c)| (c.clone(), t.atoms.clone(), FockKet { quanta: t.ops.clone() }))
            .collect()
    }

    pub fn add(&self, other: &FockState) -> FockState {
        FockState { expr: &self.expr + &other.expr }
    }

    pub fn scale(&self, s: &Scalar) -> FockState {
        FockState { expr: self.expr.scale(s) }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr == OperatorExpr::one() {
            write!(f, "|0>")
        } else if self.expr.len() > 1 {
            write!(f, "({}) |0>", self.expr)
        } else {
            write!(f, "{} |0>", self.expr)
        }
    }
}

/// `e |s⟩`: multiply, reduce, and drop every monomial that still ends in an
/// annihilator, since that annihilator meets the vacuum.
pub fn apply(e: &OperatorExpr, s: &FockState) -> FockState {
    let n = reduce_to_normal_form(&multiply(e, &s.expr));
    let mut out = OperatorExpr::zero();
    for (t, c) in n.terms() {
        if t.ops.iter().all(|o| o.is_creator()) {
            out.push(c.clone(), t.atoms.clone(), t.ops.clone());
        }
    }
    FockState { expr: out }
}

/// `⟨bra|ket⟩ = ⟨0| bra† ket |0⟩`.
pub fn inner_product(bra: &FockState, ket: &FockState) -> OperatorExpr {
    vev(&multiply(&bra.expr.adjoint(), &ket.expr))
}

/// Per-ket eigenvalues of `p_μ` or `P_α` (covariant components). Every label
/// must be bound.
pub fn momentum_action(
    which: Momentum,
    s: &FockState,
    masses: &FieldMasses,
) -> Result<Vec<(FockKet, ExactFourVector)>> {
    s.kets().into_iter().map(|(_, _, k)| Ok((k.eigenvalue(which, masses)?, k))).map(|r| r.map(|(v, k)| (k, v))).collect()
}

pub fn norm_sign(ket: &FockKet) -> Result<NormSign> {
    ket.norm_sign()
}

/// Drops every ket holding a gauge quantum with `γ = 0`.
pub fn physical_filter(s: &FockState) -> Result<FockState> {
    let mut out = OperatorExpr::zero();
    for (c, atoms, ket) in s.kets() {
        let mut keep = true;
        for op in ket.quanta() {
            if let Some((g, _)) = bound_polarizations(op)? {
                keep &= g != 0;
            }
        }
        if keep {
            out.push(c, atoms, ket.quanta);
        }
    }
    Ok(FockState { expr: out })
}

/// `[H, p_μ]` and `[H, P_α]` on every ket of `s`, with `H = p⁰`. Both actions
/// are diagonal in the ket basis, so the commutator is the difference of the
/// eigenvalue products taken in both orders. Returns the largest-index
/// component that fails to vanish, if any.
pub fn conservation_check(s: &FockState, masses: &FieldMasses) -> Result<Option<String>> {
    for (_, _, ket) in s.kets() {
        let p = ket.eigenvalue(Momentum::Inertial, masses)?;
        let big_p = ket.eigenvalue(Momentum::Inner, masses)?;
        let h = &p.0[0];
        for mu in 0..4 {
            for v in [&p.0[mu], &big_p.0[mu]] {
                let c = &(h * v) - &(v * h);
                if !c.is_zero() {
                    return Ok(Some(format!("{ket}: component {mu}")));
                }
            }
        }
    }
    Ok(None)
}
