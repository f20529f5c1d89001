use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::labels::{Disc, InnerLabel, MomentumLabel};
use crate::error::{Error, Result};
use crate::exact::{to_f64, Scalar};

/// Which mass enters `ω_k = sqrt(k² + mass²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OmegaMass {
    /// Scalar mass `m`.
    Scalar,
    /// Gauge mass `μ`.
    Gauge,
}

/// Symbolic factors appearing in coefficients. Exponents live in [`Atoms`].
///
/// Delta atoms are symmetric and kept with their arguments sorted. `Kron`,
/// `Eta` and `EtaInner` are the Kronecker delta and the metric on spin,
/// space-time polarization and inner polarization labels respectively.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Omega(OmegaMass, MomentumLabel),
    /// `k⁰/m` for the Dirac mass.
    K0OverM(MomentumLabel),
    Kron(Disc, Disc),
    Eta(Disc, Disc),
    EtaInner(Disc, Disc),
    Lambda,
    Vreg,
    TwoPi,
    Delta4(InnerLabel, InnerLabel),
    Delta4Zero,
    Delta3(MomentumLabel, MomentumLabel),
    Delta3Zero,
}

impl Atom {
    pub fn delta3(a: MomentumLabel, b: MomentumLabel) -> Atom {
        if a <= b {
            Atom::Delta3(a, b)
        } else {
            Atom::Delta3(b, a)
        }
    }

    pub fn delta4(a: InnerLabel, b: InnerLabel) -> Atom {
        if a <= b {
            Atom::Delta4(a, b)
        } else {
            Atom::Delta4(b, a)
        }
    }

    fn sorted_pair(a: &Disc, b: &Disc) -> (Disc, Disc) {
        if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        }
    }

    pub fn kron(a: Disc, b: Disc) -> Atom {
        let (a, b) = Self::sorted_pair(&a, &b);
        Atom::Kron(a, b)
    }

    pub fn eta(a: Disc, b: Disc) -> Atom {
        let (a, b) = Self::sorted_pair(&a, &b);
        Atom::Eta(a, b)
    }

    pub fn eta_inner(a: Disc, b: Disc) -> Atom {
        let (a, b) = Self::sorted_pair(&a, &b);
        Atom::EtaInner(a, b)
    }

    fn is_distribution(&self) -> bool {
        matches!(
            self,
            Atom::Delta3(..) | Atom::Delta4(..) | Atom::Kron(..) | Atom::Eta(..) | Atom::EtaInner(..)
        )
    }
}

fn metric_entry(a: u8, b: u8) -> i64 {
    match (a == b, a) {
        (false, _) => 0,
        (true, 0) => 1,
        (true, _) => -1,
    }
}

enum Fold {
    Keep(Atom),
    Number(i64),
}

/// Folds one atom on its own: sorts symmetric arguments, collapses deltas
/// over identical labels to the `δ(0)` markers and evaluates bound discrete
/// deltas and metrics.
fn fold_atom(atom: Atom) -> Fold {
    match atom {
        Atom::Delta3(a, b) => {
            if a == b {
                Fold::Keep(Atom::Delta3Zero)
            } else if a.is_bound() && b.is_bound() {
                Fold::Number(0)
            } else {
                Fold::Keep(Atom::delta3(a, b))
            }
        }
        Atom::Delta4(a, b) => {
            if a == b {
                return Fold::Keep(Atom::Delta4Zero);
            }
            let distinct_bound = match (&a, &b) {
                (InnerLabel::Bound(_), InnerLabel::Bound(_)) => true,
                // same field mass on both sides: equal iff the spatial parts agree
                (InnerLabel::OnShell(x), InnerLabel::OnShell(y)) => x.is_bound() && y.is_bound(),
                _ => false,
            };
            if distinct_bound {
                Fold::Number(0)
            } else {
                Fold::Keep(Atom::delta4(a, b))
            }
        }
        Atom::Kron(a, b) => match (a.value(), b.value()) {
            _ if a == b => Fold::Number(1),
            (Some(x), Some(y)) => Fold::Number((x == y) as i64),
            _ => Fold::Keep(Atom::kron(a, b)),
        },
        Atom::Eta(a, b) => match (a.value(), b.value()) {
            (Some(x), Some(y)) => Fold::Number(metric_entry(x, y)),
            _ => Fold::Keep(Atom::eta(a, b)),
        },
        Atom::EtaInner(a, b) => match (a.value(), b.value()) {
            (Some(x), Some(y)) => Fold::Number(metric_entry(x, y)),
            // inner polarizations never take the value 0
            _ if a == b => Fold::Number(-1),
            _ => Fold::Keep(Atom::eta_inner(a, b)),
        },
        other => Fold::Keep(other),
    }
}

/// A product of atoms with integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atoms(BTreeMap<Atom, i32>);

impl Atoms {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn single(atom: Atom, exp: i32) -> Self {
        let mut a = Self::one();
        a.push(atom, exp);
        a
    }

    pub fn from_iter<I: IntoIterator<Item = (Atom, i32)>>(items: I) -> Self {
        let mut a = Self::one();
        for (atom, e) in items {
            a.push(atom, e);
        }
        a
    }

    pub fn push(&mut self, atom: Atom, exp: i32) {
        if exp == 0 {
            return;
        }
        let slot = self.0.entry(atom.clone()).or_insert(0);
        *slot += exp;
        if *slot == 0 {
            self.0.remove(&atom);
        }
    }

    pub fn times(&self, other: &Atoms) -> Atoms {
        let mut out = self.clone();
        for (a, e) in &other.0 {
            out.push(a.clone(), *e);
        }
        out
    }

    pub fn exponent(&self, atom: &Atom) -> i32 {
        self.0.get(atom).copied().unwrap_or(0)
    }

    pub fn remove(&mut self, atom: &Atom) -> i32 {
        self.0.remove(atom).unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, i32)> {
        self.0.iter().map(|(a, e)| (a, *e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies `f` to every atom, re-merging exponents.
    pub fn map_atoms(&self, mut f: impl FnMut(&Atom) -> Atom) -> Atoms {
        Atoms::from_iter(self.0.iter().map(|(a, e)| (f(a), *e)))
    }

    /// Fallible variant of [`Atoms::map_atoms`].
    pub fn try_map_atoms(&self, mut f: impl FnMut(&Atom) -> Result<Atom>) -> Result<Atoms> {
        let mut out = Atoms::one();
        for (a, e) in &self.0 {
            out.push(f(a)?, *e);
        }
        Ok(out)
    }

    pub fn contains_distribution(&self) -> bool {
        self.0.keys().any(|a| a.is_distribution() || matches!(a, Atom::Delta3Zero | Atom::Delta4Zero))
    }
}

struct UnionFind {
    parent: BTreeMap<MomentumLabel, MomentumLabel>,
}

impl UnionFind {
    fn find(&mut self, x: &MomentumLabel) -> MomentumLabel {
        let p = match self.parent.get(x) {
            None => return x.clone(),
            Some(p) if p == x => return x.clone(),
            Some(p) => p.clone(),
        };
        let r = self.find(&p);
        self.parent.insert(x.clone(), r.clone());
        r
    }

    fn union(&mut self, a: &MomentumLabel, b: &MomentumLabel) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        // smallest label represents the class
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(hi, lo.clone());
        self.parent.entry(lo.clone()).or_insert(lo);
    }
}

fn rewrite_momentum(atom: &Atom, uf: &mut UnionFind) -> Atom {
    match atom {
        Atom::Omega(m, k) => Atom::Omega(*m, uf.find(k)),
        Atom::K0OverM(k) => Atom::K0OverM(uf.find(k)),
        Atom::Delta4(a, b) => {
            let f = |l: &InnerLabel, uf: &mut UnionFind| match l {
                InnerLabel::OnShell(k) => InnerLabel::OnShell(uf.find(k)),
                other => other.clone(),
            };
            let a = f(a, uf);
            let b = f(b, uf);
            Atom::Delta4(a, b)
        }
        other => other.clone(),
    }
}

/// Brings a coefficient to canonical form; `None` means it vanishes.
///
/// Besides folding single atoms this uses the momentum deltas present in the
/// product: labels linked by `δ³` are interchangeable in every other atom that
/// depends on them (`ω`, `k⁰/m`, on-shell inner labels), and they are rewritten
/// to the smallest label of their class. A class holding two different bound
/// momenta makes the product vanish.
pub fn canonicalize(scalar: Scalar, atoms: Atoms) -> Option<(Scalar, Atoms)> {
    let mut scalar = scalar;
    let mut atoms = atoms;
    loop {
        if scalar.is_zero() {
            return None;
        }
        let input = atoms.clone();
        let mut out = Atoms::one();
        for (atom, e) in atoms.0 {
            match fold_atom(atom) {
                Fold::Keep(a) => out.push(a, e),
                Fold::Number(0) if e > 0 => return None,
                Fold::Number(0) => panic!("negative power of a vanishing delta"),
                Fold::Number(v) => {
                    if v == -1 && e % 2 != 0 {
                        scalar = -scalar;
                    }
                }
            }
        }
        // δ² = δ, η^odd = η, η^even = δ
        let mut fixed = Atoms::one();
        for (atom, e) in out.0 {
            if e <= 1 {
                fixed.push(atom, e);
                continue;
            }
            match &atom {
                Atom::Kron(..) => fixed.push(atom, 1),
                Atom::Eta(a, b) | Atom::EtaInner(a, b) if e % 2 == 0 => {
                    fixed.push(Atom::kron(a.clone(), b.clone()), 1)
                }
                Atom::Eta(..) | Atom::EtaInner(..) => fixed.push(atom, 1),
                _ => fixed.push(atom, e),
            }
        }
        // δ³ classes
        let mut uf = UnionFind { parent: BTreeMap::new() };
        for (atom, e) in fixed.iter() {
            if let (Atom::Delta3(a, b), true) = (atom, e > 0) {
                uf.union(a, b);
            }
        }
        let labels: BTreeSet<MomentumLabel> = uf.parent.keys().cloned().collect();
        let mut bound_of: BTreeMap<MomentumLabel, MomentumLabel> = BTreeMap::new();
        for l in &labels {
            if l.is_bound() {
                let r = uf.find(l);
                if let Some(prev) = bound_of.get(&r) {
                    if prev != l {
                        return None;
                    }
                }
                bound_of.insert(r, l.clone());
            }
        }
        let rewritten = fixed.map_atoms(|a| rewrite_momentum(a, &mut uf));
        if rewritten == input {
            return Some((scalar, rewritten));
        }
        atoms = rewritten;
    }
}

fn fmt_pair(f: &mut fmt::Formatter<'_>, name: &str, a: &dyn fmt::Display, b: &dyn fmt::Display) -> fmt::Result {
    write!(f, "{name}({a},{b})")
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Omega(OmegaMass::Scalar, k) => write!(f, "omega({k})"),
            Atom::Omega(OmegaMass::Gauge, k) => write!(f, "omegaA({k})"),
            Atom::K0OverM(k) => write!(f, "k0m({k})"),
            Atom::Kron(a, b) => fmt_pair(f, "kron", a, b),
            Atom::Eta(a, b) => fmt_pair(f, "eta", a, b),
            Atom::EtaInner(a, b) => fmt_pair(f, "etaI", a, b),
            Atom::Lambda => write!(f, "Lambda"),
            Atom::Vreg => write!(f, "Vreg"),
            Atom::TwoPi => write!(f, "twopi"),
            Atom::Delta4(a, b) => fmt_pair(f, "delta4", a, b),
            Atom::Delta4Zero => write!(f, "delta4(0)"),
            Atom::Delta3(a, b) => fmt_pair(f, "delta3", a, b),
            Atom::Delta3Zero => write!(f, "delta3(0)"),
        }
    }
}

impl fmt::Display for Atoms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Numeric values for evaluating non-distributional atoms.
#[derive(Clone, Debug)]
pub struct NumericEnv {
    pub momenta: BTreeMap<String, [f64; 3]>,
    pub mass_scalar: f64,
    pub mass_dirac: f64,
    pub mass_gauge: f64,
    pub lambda: f64,
    pub v_reg: f64,
}

impl Default for NumericEnv {
    fn default() -> Self {
        Self {
            momenta: BTreeMap::new(),
            mass_scalar: 1.0,
            mass_dirac: 1.0,
            mass_gauge: 1.0,
            lambda: 1.0,
            v_reg: 1.0,
        }
    }
}

impl NumericEnv {
    fn spatial(&self, k: &MomentumLabel) -> Result<[f64; 3]> {
        match k {
            MomentumLabel::Bound(v) => Ok([to_f64(&v[0]), to_f64(&v[1]), to_f64(&v[2])]),
            MomentumLabel::Symbol(s) => self.momenta.get(s).copied().ok_or_else(|| Error::SymbolicLabel(s.clone())),
        }
    }

    fn energy(&self, k: &MomentumLabel, m: f64) -> Result<f64> {
        let p = self.spatial(k)?;
        Ok((p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt())
    }

    pub fn atom(&self, atom: &Atom) -> Result<f64> {
        Ok(match atom {
            Atom::Omega(OmegaMass::Scalar, k) => self.energy(k, self.mass_scalar)?,
            Atom::Omega(OmegaMass::Gauge, k) => self.energy(k, self.mass_gauge)?,
            Atom::K0OverM(k) => self.energy(k, self.mass_dirac)? / self.mass_dirac,
            Atom::Lambda => self.lambda,
            Atom::Vreg => self.v_reg,
            Atom::TwoPi => 2.0 * std::f64::consts::PI,
            other => return Err(Error::SymbolicLabel(other.to_string())),
        })
    }

    pub fn atoms(&self, atoms: &Atoms) -> Result<f64> {
        let mut v = 1.0;
        for (a, e) in atoms.iter() {
            v *= self.atom(a)?.powi(e);
        }
        Ok(v)
    }
}

pub(crate) fn scalar_is_one(s: &Scalar) -> bool {
    s.re.is_one() && s.im.is_zero()
}
