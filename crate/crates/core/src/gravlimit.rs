//! The gravitational limit: inner momenta are identified with on-shell
//! inertial momenta and the inner volume is regularized.
//!
//! Barred operators carry the inner label `~`, i.e. `K = (ω_k, k)` for their
//! own momentum `k`. Their brackets are computed with the ordinary algebra;
//! the `δ³` in the contact term ties the two on-shell inner labels together,
//! so `δ⁴(K−H)` collapses to `δ⁴(0)`, which is then replaced by `Vreg/(2π)⁴`
//! and `Vreg` by `ratio · Λ⁴`.
//!
//! ```
//! use innerfield::gravlimit::{barred_commutator, RegularizationConfig};
//! use innerfield::opalg::LadderOperator;
//!
//! let cfg = RegularizationConfig::default();
//! let a = LadderOperator::scalar("k", "K").unwrap();
//! let ad = LadderOperator::scalar("h", "H").unwrap().dag();
//! let c = barred_commutator(&a, &ad, &cfg).unwrap();
//! assert_eq!(c.to_string(), "2 * omega(h) * twopi^3 * delta3(h,k)");
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, q, re, to_f64, Rational};
use crate::fock::FockState;
use crate::opalg::{
    anticommutator, commutator, Atom, Atoms, InnerLabel, LadderOperator, MomentumLabel, NumericEnv, OperatorExpr,
};

/// `Λ`, `Vreg` and the exact ratio `Vreg/Λ⁴` that the limit substitutes.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularizationConfig {
    lambda: f64,
    v_reg: f64,
    ratio: Rational,
}

impl Default for RegularizationConfig {
    fn default() -> Self {
        Self { lambda: 1.0, v_reg: 1.0, ratio: q(1) }
    }
}

impl RegularizationConfig {
    /// `Vreg = ratio · Λ⁴`.
    pub fn new(lambda: f64, ratio: Rational) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Regularization(format!("lambda must be positive, got {lambda}")));
        }
        if !ratio.is_positive() {
            return Err(Error::Regularization(format!("Vreg/Lambda^4 must be positive, got {}", fmt_rational(&ratio))));
        }
        let v_reg = to_f64(&ratio) * lambda.powi(4);
        Ok(Self { lambda, v_reg, ratio })
    }

    /// Explicit `Λ` and `Vreg`; they must agree with `ratio` to relative `1e-12`.
    pub fn with_volume(lambda: f64, v_reg: f64, ratio: Rational) -> Result<Self> {
        let cfg = Self::new(lambda, ratio)?;
        if !(v_reg.is_finite() && v_reg > 0.0) {
            return Err(Error::Regularization(format!("Vreg must be positive, got {v_reg}")));
        }
        if ((v_reg - cfg.v_reg) / cfg.v_reg).abs() > 1e-12 {
            return Err(Error::Regularization(format!(
                "Vreg/Lambda^4 = {} but the configured ratio is {}",
                v_reg / lambda.powi(4),
                fmt_rational(&cfg.ratio)
            )));
        }
        Ok(Self { v_reg, ..cfg })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn v_reg(&self) -> f64 {
        self.v_reg
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    /// Numeric environment with this `Λ` and `Vreg`.
    pub fn numeric_env(&self) -> NumericEnv {
        NumericEnv { lambda: self.lambda, v_reg: self.v_reg, ..NumericEnv::default() }
    }
}

/// A ladder operator whose inner label is its own on-shell momentum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarredOperator(LadderOperator);

impl BarredOperator {
    pub fn op(&self) -> &LadderOperator {
        &self.0
    }

    pub fn expr(&self) -> OperatorExpr {
        OperatorExpr::op(self.0.clone())
    }

    pub fn dag(&self) -> Self {
        BarredOperator(self.0.dag())
    }
}

impl fmt::Display for BarredOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `K → (ω_k, k)` on one operator.
pub fn bar(op: &LadderOperator) -> BarredOperator {
    BarredOperator(op.on_shell())
}

/// `[x̄, ȳ]` in the limit.
pub fn barred_commutator(x: &LadderOperator, y: &LadderOperator, cfg: &RegularizationConfig) -> Result<OperatorExpr> {
    grav_limit_expr(&commutator(&bar(x).expr(), &bar(y).expr()), cfg)
}

/// `{x̄, ȳ}` in the limit.
pub fn barred_anticommutator(
    x: &LadderOperator,
    y: &LadderOperator,
    cfg: &RegularizationConfig,
) -> Result<OperatorExpr> {
    grav_limit_expr(&anticommutator(&bar(x).expr(), &bar(y).expr()), cfg)
}

fn inner_owners(e: &OperatorExpr) -> Result<BTreeMap<String, MomentumLabel>> {
    let mut owners: BTreeMap<String, MomentumLabel> = BTreeMap::new();
    for (t, _) in e.terms() {
        for op in &t.ops {
            if let InnerLabel::Symbol(s) = op.inner() {
                match owners.get(s) {
                    Some(k) if k != op.momentum() => {
                        return Err(Error::UnresolvedInner(format!("{s} is carried with both {k} and {}", op.momentum())))
                    }
                    _ => {
                        owners.insert(s.clone(), op.momentum().clone());
                    }
                }
            }
        }
    }
    Ok(owners)
}

fn project_atom(a: &Atom, owners: &BTreeMap<String, MomentumLabel>) -> Result<Atom> {
    let map = |l: &InnerLabel| -> Result<InnerLabel> {
        match l {
            InnerLabel::Symbol(s) => owners
                .get(s)
                .map(|k| InnerLabel::OnShell(k.clone()))
                .ok_or_else(|| Error::UnresolvedInner(s.clone())),
            InnerLabel::Bound(_) => Err(Error::UnresolvedInner(l.to_string())),
            InnerLabel::OnShell(_) => Ok(l.clone()),
        }
    };
    Ok(match a {
        Atom::Delta4(x, y) => Atom::delta4(map(x)?, map(y)?),
        other => other.clone(),
    })
}

/// Takes the gravitational limit of an expression.
///
/// Inner labels on operators become `~`. A symbolic inner label inside an
/// atom is mapped to the on-shell momentum of the operator carrying it, so
/// the expression must still contain that operator; use [`bar`] first when
/// working with brackets. Each `δ⁴(0)` becomes `Vreg (2π)⁻⁴` and `Vreg`
/// becomes `ratio · Λ⁴`. An inner delta that does not collapse is an error.
pub fn grav_limit_expr(e: &OperatorExpr, cfg: &RegularizationConfig) -> Result<OperatorExpr> {
    let owners = inner_owners(e)?;
    let mut projected = OperatorExpr::zero();
    for (t, c) in e.terms() {
        let atoms = t.atoms.try_map_atoms(|a| project_atom(a, &owners))?;
        let ops = t.ops.iter().map(|o| o.on_shell()).collect();
        projected.push(c.clone(), atoms, ops);
    }
    let mut out = OperatorExpr::zero();
    for (t, c) in projected.terms() {
        let mut atoms = Atoms::one();
        let mut scalar = c.clone();
        let mut vreg = 0;
        for (a, n) in t.atoms.iter() {
            match a {
                Atom::Delta4(..) => return Err(Error::UnlinkedInnerDelta(a.to_string())),
                Atom::Delta4Zero => {
                    vreg += n;
                    atoms.push(Atom::TwoPi, -4 * n);
                }
                Atom::Vreg => vreg += n,
                other => atoms.push(other.clone(), n),
            }
        }
        if vreg != 0 {
            atoms.push(Atom::Lambda, 4 * vreg);
            let r = if vreg > 0 { cfg.ratio.clone() } else { cfg.ratio.recip() };
            for _ in 0..vreg.abs() {
                scalar *= re(r.clone());
            }
        }
        out.push(scalar, atoms, t.ops.clone());
    }
    Ok(out)
}

/// Sets every quantum's inner label to its on-shell momentum. Idempotent.
pub fn project_state(s: &FockState) -> Result<FockState> {
    let mut e = OperatorExpr::zero();
    for (c, atoms, ket) in s.kets() {
        e.push(c, atoms, ket.quanta().iter().map(|o| o.on_shell()).collect());
    }
    FockState::from_expr(&e)
}

/// Power of `Λ` in every term, if all terms agree.
pub fn lambda_power(e: &OperatorExpr) -> Option<i32> {
    let mut powers = e.terms().map(|(t, _)| t.atoms.exponent(&Atom::Lambda));
    let first = powers.next().unwrap_or(0);
    powers.all(|p| p == first).then_some(first)
}

/// Evaluates the non-distributional part of a c-number: the sum of
/// coefficient times atoms, with every delta atom dropped. Used to compare
/// the weight of a bracket across regularizations.
pub fn weight_without_deltas(e: &OperatorExpr, env: &NumericEnv) -> Result<f64> {
    let mut total = 0.0;
    for (t, c) in e.terms() {
        if !t.ops.is_empty() {
            return Err(Error::UnresolvedInner("expression still contains operators".into()));
        }
        let kept = Atoms::from_iter(
            t.atoms.iter().filter(|(a, _)| !matches!(a, Atom::Delta3(..) | Atom::Delta3Zero | Atom::Kron(..) | Atom::Eta(..) | Atom::EtaInner(..))).map(|(a, n)| (a.clone(), n)),
        );
        if !c.im.is_zero() {
            return Err(Error::Regularization("complex weight".into()));
        }
        total += to_f64(&c.re) * env.atoms(&kept)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, qq};
    use crate::opalg::OmegaMass;

    fn d3() -> (Atom, i32) {
        (Atom::delta3("h".into(), "k".into()), 1)
    }

    #[test]
    fn dirac_bracket() {
        let b = LadderOperator::dirac_b("k", "s", "K").unwrap();
        let bd = LadderOperator::dirac_b("h", "t", "H").unwrap().dag();
        let c = barred_anticommutator(&b, &bd, &RegularizationConfig::default()).unwrap();
        let want = OperatorExpr::atoms(Atoms::from_iter([
            (Atom::K0OverM("h".into()), 1),
            (Atom::kron("s".into(), "t".into()), 1),
            (Atom::TwoPi, 3),
            d3(),
        ]));
        assert_eq!(c, want);
    }

    #[test]
    fn gauge_keeps_lambda_squared() {
        let a = LadderOperator::gauge("k", "g", "K", "G").unwrap();
        let ad = LadderOperator::gauge("h", "f", "H", "F").unwrap().dag();
        let c = barred_commutator(&a, &ad, &RegularizationConfig::default()).unwrap();
        assert_eq!(lambda_power(&c), Some(2));
        let want = OperatorExpr::monomial(
            int(2),
            Atoms::from_iter([
                (Atom::Omega(OmegaMass::Gauge, "h".into()), 1),
                (Atom::eta("f".into(), "g".into()), 1),
                (Atom::eta_inner("F".into(), "G".into()), 1),
                (Atom::Lambda, 2),
                (Atom::TwoPi, 3),
                d3(),
            ]),
            vec![],
        );
        assert_eq!(c, want);
    }

    #[test]
    fn ratio_enters_exactly() {
        let cfg = RegularizationConfig::new(2.0, qq(1, 3)).unwrap();
        let a = LadderOperator::scalar("k", "K").unwrap();
        let ad = LadderOperator::scalar("h", "H").unwrap().dag();
        let c = barred_commutator(&a, &ad, &cfg).unwrap();
        assert_eq!(c.coefficient_of(&Atoms::from_iter([(Atom::Omega(OmegaMass::Scalar, "h".into()), 1), (Atom::TwoPi, 3), d3()])), re(qq(2, 3)));
    }

    #[test]
    fn unlinked_inner_delta_rejected() {
        let e = OperatorExpr::atom(Atom::delta4("K".into(), "H".into()), 1);
        assert!(matches!(grav_limit_expr(&e, &RegularizationConfig::default()), Err(Error::UnresolvedInner(_))));
        let e = OperatorExpr::monomial(
            int(1),
            Atoms::single(Atom::delta4("K".into(), "H".into()), 1),
            vec![LadderOperator::scalar("k", "K").unwrap(), LadderOperator::scalar("h", "H").unwrap()],
        );
        assert!(matches!(grav_limit_expr(&e, &RegularizationConfig::default()), Err(Error::UnlinkedInnerDelta(_))));
    }

    #[test]
    fn config_validation() {
        assert!(RegularizationConfig::new(0.0, q(1)).is_err());
        assert!(RegularizationConfig::new(1.0, q(0)).is_err());
        assert!(RegularizationConfig::with_volume(2.0, 16.0, q(1)).is_ok());
        assert!(RegularizationConfig::with_volume(2.0, 15.0, q(1)).is_err());
    }

    #[test]
    fn projection_idempotent() {
        let s = FockState::product(vec![
            LadderOperator::scalar([q(1), q(0), q(0)], [q(3), q(0), q(1), q(0)]).unwrap().dag(),
        ])
        .unwrap();
        let p = project_state(&s).unwrap();
        assert_ne!(p, s);
        assert_eq!(project_state(&p).unwrap(), p);
        assert_eq!(project_state(&FockState::vacuum()).unwrap(), FockState::vacuum());
    }
}
