use std::collections::{BTreeMap, BTreeSet};

use super::coeff::{Atom, Atoms};
use super::expr::OperatorExpr;
use super::labels::{Disc, Discrete, InnerLabel, LadderOperator, MomentumLabel, Vec3, Vec4};
use crate::error::{Error, Result};

/// Values for label symbols, plus the symbols that are integration variables
/// and may be sifted away by a delta.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub momentum: BTreeMap<String, Vec3>,
    pub inner: BTreeMap<String, Vec4>,
    pub discrete: BTreeMap<String, u8>,
    pub free: BTreeSet<String>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn momentum(mut self, name: &str, v: Vec3) -> Self {
        self.momentum.insert(name.to_string(), v);
        self
    }

    pub fn inner(mut self, name: &str, v: Vec4) -> Self {
        self.inner.insert(name.to_string(), v);
        self
    }

    pub fn discrete(mut self, name: &str, v: u8) -> Self {
        self.discrete.insert(name.to_string(), v);
        self
    }

    pub fn free(mut self, name: &str) -> Self {
        self.free.insert(name.to_string());
        self
    }

    fn check(&self) -> Result<()> {
        for name in &self.free {
            if self.momentum.contains_key(name) || self.inner.contains_key(name) || self.discrete.contains_key(name) {
                return Err(Error::InconsistentBindings(format!("{name} is both bound and integrated")));
            }
        }
        for name in self.momentum.keys() {
            if self.inner.contains_key(name) || self.discrete.contains_key(name) {
                return Err(Error::InconsistentBindings(format!("{name} bound in two label kinds")));
            }
        }
        for name in self.inner.keys() {
            if self.discrete.contains_key(name) {
                return Err(Error::InconsistentBindings(format!("{name} bound in two label kinds")));
            }
        }
        Ok(())
    }
}

/// A substitution of label symbols by labels, applied uniformly to atoms and
/// operators.
#[derive(Clone, Debug, Default)]
pub(crate) struct Subst {
    pub momentum: BTreeMap<String, MomentumLabel>,
    pub inner: BTreeMap<String, InnerLabel>,
    pub discrete: BTreeMap<String, Disc>,
}

impl Subst {
    pub fn from_bindings(b: &Bindings) -> Self {
        Subst {
            momentum: b.momentum.iter().map(|(k, v)| (k.clone(), MomentumLabel::Bound(v.clone()))).collect(),
            inner: b.inner.iter().map(|(k, v)| (k.clone(), InnerLabel::Bound(v.clone()))).collect(),
            discrete: b.discrete.iter().map(|(k, v)| (k.clone(), Disc::Value(*v))).collect(),
        }
    }

    pub fn mom(&self, l: &MomentumLabel) -> MomentumLabel {
        match l {
            MomentumLabel::Symbol(s) => self.momentum.get(s).cloned().unwrap_or_else(|| l.clone()),
            b => b.clone(),
        }
    }

    pub fn inn(&self, l: &InnerLabel) -> InnerLabel {
        match l {
            InnerLabel::Symbol(s) => self.inner.get(s).cloned().unwrap_or_else(|| l.clone()),
            InnerLabel::OnShell(k) => InnerLabel::OnShell(self.mom(k)),
            b => b.clone(),
        }
    }

    pub fn disc(&self, d: &Disc) -> Disc {
        match d {
            Disc::Symbol(s) => self.discrete.get(s).cloned().unwrap_or_else(|| d.clone()),
            v => v.clone(),
        }
    }

    pub fn atom(&self, a: &Atom) -> Atom {
        match a {
            Atom::Omega(m, k) => Atom::Omega(*m, self.mom(k)),
            Atom::K0OverM(k) => Atom::K0OverM(self.mom(k)),
            Atom::Kron(x, y) => Atom::kron(self.disc(x), self.disc(y)),
            Atom::Eta(x, y) => Atom::eta(self.disc(x), self.disc(y)),
            Atom::EtaInner(x, y) => Atom::eta_inner(self.disc(x), self.disc(y)),
            Atom::Delta4(x, y) => Atom::delta4(self.inn(x), self.inn(y)),
            Atom::Delta3(x, y) => Atom::delta3(self.mom(x), self.mom(y)),
            other => other.clone(),
        }
    }

    pub fn op(&self, o: &LadderOperator) -> Result<LadderOperator> {
        let discrete = match o.discrete() {
            Discrete::None => Discrete::None,
            Discrete::Spin(s) => Discrete::Spin(self.disc(s)),
            Discrete::Pol(g, big_g) => Discrete::Pol(self.disc(g), self.disc(big_g)),
        };
        o.with_labels(self.mom(o.momentum()), self.inn(o.inner()), discrete)
    }

    pub fn expr(&self, e: &OperatorExpr) -> Result<OperatorExpr> {
        let mut out = OperatorExpr::zero();
        for (t, c) in e.terms() {
            let ops = t.ops.iter().map(|o| self.op(o)).collect::<Result<Vec<_>>>()?;
            out.push(c.clone(), t.atoms.map_atoms(|a| self.atom(a)), ops);
        }
        Ok(out)
    }
}

fn is_free_symbol<'a>(free: &BTreeSet<String>, name: Option<&'a str>) -> Option<&'a str> {
    name.filter(|n| free.contains(*n))
}

fn inner_symbol(l: &InnerLabel) -> Option<&str> {
    match l {
        InnerLabel::Symbol(s) => Some(s),
        _ => None,
    }
}

fn disc_symbol(d: &Disc) -> Option<&str> {
    match d {
        Disc::Symbol(s) => Some(s),
        _ => None,
    }
}

/// Finds one delta in `atoms` that can integrate out a free symbol and returns
/// the substitution it implies, with the delta removed.
fn sift_once(atoms: &Atoms, free: &BTreeSet<String>) -> Option<(Atoms, Subst, String)> {
    for (atom, e) in atoms.iter() {
        if e != 1 {
            continue;
        }
        let mut s = Subst::default();
        let var = match atom {
            Atom::Delta3(x, y) => {
                if let Some(v) = is_free_symbol(free, y.symbol()) {
                    s.momentum.insert(v.to_string(), x.clone());
                    v
                } else if let Some(v) = is_free_symbol(free, x.symbol()) {
                    s.momentum.insert(v.to_string(), y.clone());
                    v
                } else {
                    continue;
                }
            }
            Atom::Delta4(x, y) => {
                if let Some(v) = is_free_symbol(free, inner_symbol(y)) {
                    s.inner.insert(v.to_string(), x.clone());
                    v
                } else if let Some(v) = is_free_symbol(free, inner_symbol(x)) {
                    s.inner.insert(v.to_string(), y.clone());
                    v
                } else {
                    continue;
                }
            }
            Atom::Kron(x, y) => {
                if let Some(v) = is_free_symbol(free, disc_symbol(y)) {
                    s.discrete.insert(v.to_string(), x.clone());
                    v
                } else if let Some(v) = is_free_symbol(free, disc_symbol(x)) {
                    s.discrete.insert(v.to_string(), y.clone());
                    v
                } else {
                    continue;
                }
            }
            _ => continue,
        };
        let mut rest = atoms.clone();
        rest.remove(atom);
        return Some((rest, s, var.to_string()));
    }
    None
}

/// Substitutes bound symbols, then integrates out free symbols against the
/// deltas that mention them (`∫ dh δ(k−h) f(h) = f(k)`), then canonicalizes:
/// deltas over identical bound labels become `δ(0)` markers and deltas over
/// distinct bound labels vanish.
///
/// The expression may still carry operators; their labels are substituted
/// too and must stay all-symbolic or all-bound.
pub fn delta_resolve(e: &OperatorExpr, bindings: &Bindings) -> Result<OperatorExpr> {
    bindings.check()?;
    for (name, v) in &bindings.discrete {
        if *v > 3 {
            return Err(Error::BadPolarization(format!("{name}={v}")));
        }
    }
    let bound = Subst::from_bindings(bindings).expr(e)?;
    let mut out = OperatorExpr::zero();
    for (t, c) in bound.terms() {
        let mut atoms = t.atoms.clone();
        let mut ops = t.ops.clone();
        let mut free = bindings.free.clone();
        while let Some((rest, s, var)) = sift_once(&atoms, &free) {
            free.remove(&var);
            atoms = rest.map_atoms(|a| s.atom(a));
            ops = ops.iter().map(|o| s.op(o)).collect::<Result<Vec<_>>>()?;
        }
        out.push(c.clone(), atoms, ops);
    }
    Ok(out)
}

/// Substitutes labels everywhere without sifting.
pub fn bind(e: &OperatorExpr, bindings: &Bindings) -> Result<OperatorExpr> {
    bindings.check()?;
    Subst::from_bindings(bindings).expr(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, q};
    use crate::opalg::coeff::OmegaMass;

    fn k(s: &str) -> MomentumLabel {
        MomentumLabel::sym(s)
    }

    #[test]
    fn sifting() {
        let e = OperatorExpr::atoms(Atoms::from_iter([
            (Atom::delta3(k("k"), k("h")), 1),
            (Atom::Omega(OmegaMass::Scalar, k("h")), -1),
        ]));
        let r = delta_resolve(&e, &Bindings::new().free("h")).unwrap();
        assert_eq!(r, OperatorExpr::atom(Atom::Omega(OmegaMass::Scalar, k("k")), -1));
    }

    #[test]
    fn bound_equal_inner_gives_marker() {
        let e = OperatorExpr::atom(Atom::delta4("K".into(), "H".into()), 1);
        let v = [q(1), q(0), q(0), q(0)];
        let r = delta_resolve(&e, &Bindings::new().inner("K", v.clone()).inner("H", v)).unwrap();
        assert_eq!(r, OperatorExpr::atom(Atom::Delta4Zero, 1));
    }

    #[test]
    fn bound_distinct_vanishes() {
        let e = OperatorExpr::atom(Atom::delta3(k("k"), k("h")), 1);
        let b = Bindings::new().momentum("k", [q(1), q(0), q(0)]).momentum("h", [q(2), q(0), q(0)]);
        assert!(delta_resolve(&e, &b).unwrap().is_zero());
    }

    #[test]
    fn inconsistent_bindings_flagged() {
        let e = OperatorExpr::scalar(int(1));
        let b = Bindings::new().momentum("k", [q(1), q(0), q(0)]).free("k");
        assert!(matches!(delta_resolve(&e, &b), Err(Error::InconsistentBindings(_))));
    }

    #[test]
    fn partial_binding_of_operator_is_mixed() {
        let e = OperatorExpr::op(LadderOperator::scalar("k", "K").unwrap());
        let b = Bindings::new().momentum("k", [q(1), q(0), q(0)]);
        assert!(matches!(delta_resolve(&e, &b), Err(Error::MixedLabels(_))));
    }
}
