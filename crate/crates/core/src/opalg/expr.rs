use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::coeff::{canonicalize, scalar_is_one, Atom, Atoms, OmegaMass};
use super::labels::{Discrete, Field, LadderOperator};
use crate::exact::{fmt_scalar, int, re, Rational, Scalar};

/// A product of atoms times an ordered string of ladder operators. The
/// complex-rational factor is stored alongside in [`OperatorExpr`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub atoms: Atoms,
    pub ops: Vec<LadderOperator>,
}

/// A formal sum of monomials with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperatorExpr {
    terms: BTreeMap<Term, Scalar>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(int(1))
    }

    pub fn scalar(s: Scalar) -> Self {
        let mut e = Self::zero();
        e.push(s, Atoms::one(), Vec::new());
        e
    }

    pub fn rational(r: Rational) -> Self {
        Self::scalar(re(r))
    }

    pub fn atom(a: Atom, exp: i32) -> Self {
        Self::atoms(Atoms::single(a, exp))
    }

    pub fn atoms(a: Atoms) -> Self {
        let mut e = Self::zero();
        e.push(int(1), a, Vec::new());
        e
    }

    pub fn op(op: LadderOperator) -> Self {
        Self::monomial(int(1), Atoms::one(), vec![op])
    }

    pub fn ops(ops: Vec<LadderOperator>) -> Self {
        Self::monomial(int(1), Atoms::one(), ops)
    }

    pub fn monomial(s: Scalar, atoms: Atoms, ops: Vec<LadderOperator>) -> Self {
        let mut e = Self::zero();
        e.push(s, atoms, ops);
        e
    }

    /// Adds one monomial, canonicalizing its coefficient and merging it with
    /// an existing monomial of the same shape.
    pub fn push(&mut self, s: Scalar, atoms: Atoms, ops: Vec<LadderOperator>) {
        let Some((s, atoms)) = canonicalize(s, atoms) else { return };
        let key = Term { atoms, ops };
        let slot = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *slot += s;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Scalar)> {
        self.terms.iter()
    }

    /// True when no monomial carries an operator.
    pub fn is_c_number(&self) -> bool {
        self.terms.keys().all(|t| t.ops.is_empty())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.push(c * s, t.atoms.clone(), t.ops.clone());
        }
        out
    }

    pub fn times_atoms(&self, a: &Atoms) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.push(c.clone(), t.atoms.times(a), t.ops.clone());
        }
        out
    }

    /// Rebuilds the expression term by term through `f`, which may split a
    /// monomial into several.
    pub fn flat_map(&self, mut f: impl FnMut(&Scalar, &Term) -> OperatorExpr) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out = &out + &f(c, t);
        }
        out
    }

    /// Hermitian adjoint: reverse the operator string, flip daggers, conjugate
    /// the number. All atoms are real.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let ops: Vec<_> = t.ops.iter().rev().map(|o| o.dag()).collect();
            out.push(c.conj(), t.atoms.clone(), ops);
        }
        out
    }

    /// The coefficient of the pure-number monomial with exactly these atoms.
    pub fn coefficient_of(&self, atoms: &Atoms) -> Scalar {
        self.terms
            .get(&Term { atoms: atoms.clone(), ops: Vec::new() })
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }
}

pub fn multiply(lhs: &OperatorExpr, rhs: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (a, ca) in &lhs.terms {
        for (b, cb) in &rhs.terms {
            let mut ops = a.ops.clone();
            ops.extend(b.ops.iter().cloned());
            out.push(ca * cb, a.atoms.times(&b.atoms), ops);
        }
    }
    out
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.push(c.clone(), t.atoms.clone(), t.ops.clone());
        }
        out
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: OperatorExpr) -> OperatorExpr {
        &self + &rhs
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(&int(-1))
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        -&self
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self + &(-rhs)
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        &self - &rhs
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        multiply(self, rhs)
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        multiply(&self, &rhs)
    }
}

/// The c-number `c` in `x y = ±y x + c` for an annihilator `x` standing left
/// of a creator `y` of the same species.
pub fn contact_term(x: &LadderOperator, y: &LadderOperator) -> (Scalar, Atoms) {
    debug_assert!(!x.is_creator() && y.is_creator() && x.field() == y.field());
    let k = x.momentum().clone();
    let mut atoms = Atoms::from_iter([
        (Atom::TwoPi, 7),
        (Atom::delta4(x.inner().clone(), y.inner().clone()), 1),
        (Atom::delta3(k.clone(), y.momentum().clone()), 1),
    ]);
    let scalar = match (x.field(), x.discrete(), y.discrete()) {
        (Field::Scalar, _, _) => {
            atoms.push(Atom::Omega(OmegaMass::Scalar, k), 1);
            atoms.push(Atom::Lambda, -4);
            int(2)
        }
        (Field::DiracParticle | Field::DiracAntiparticle, Discrete::Spin(s), Discrete::Spin(t)) => {
            atoms.push(Atom::K0OverM(k), 1);
            atoms.push(Atom::kron(s.clone(), t.clone()), 1);
            atoms.push(Atom::Lambda, -4);
            int(1)
        }
        (Field::Gauge, Discrete::Pol(g, big_g), Discrete::Pol(h, big_h)) => {
            atoms.push(Atom::Omega(OmegaMass::Gauge, k), 1);
            atoms.push(Atom::eta(g.clone(), h.clone()), 1);
            atoms.push(Atom::eta_inner(big_g.clone(), big_h.clone()), 1);
            atoms.push(Atom::Lambda, -2);
            int(2)
        }
        _ => unreachable!("operator labels validated at construction"),
    };
    (scalar, atoms)
}

enum Step {
    Ordered,
    Vanishes,
    Swap(usize),
}

fn first_disorder(ops: &[LadderOperator]) -> Step {
    for i in 0..ops.len().saturating_sub(1) {
        match ops[i].cmp(&ops[i + 1]) {
            std::cmp::Ordering::Greater => return Step::Swap(i),
            std::cmp::Ordering::Equal if ops[i].is_fermionic() => return Step::Vanishes,
            _ => {}
        }
    }
    Step::Ordered
}

fn swap_sign(x: &LadderOperator, y: &LadderOperator) -> Scalar {
    if x.is_fermionic() && y.is_fermionic() {
        int(-1)
    } else {
        int(1)
    }
}

fn reorder(e: &OperatorExpr, keep_contacts: bool) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    let mut work: Vec<(Scalar, Atoms, Vec<LadderOperator>)> =
        e.terms.iter().map(|(t, c)| (c.clone(), t.atoms.clone(), t.ops.clone())).collect();
    while let Some((c, atoms, mut ops)) = work.pop() {
        match first_disorder(&ops) {
            Step::Ordered => out.push(c, atoms, ops),
            Step::Vanishes => {}
            Step::Swap(i) => {
                let (x, y) = (ops[i].clone(), ops[i + 1].clone());
                if keep_contacts && !x.is_creator() && y.is_creator() && x.field() == y.field() {
                    let (cs, ca) = contact_term(&x, &y);
                    let mut rest = ops.clone();
                    rest.drain(i..i + 2);
                    work.push((&c * &cs, atoms.times(&ca), rest));
                }
                ops.swap(i, i + 1);
                work.push((c * swap_sign(&x, &y), atoms, ops));
            }
        }
    }
    out
}

/// Moves every creator to the left of every annihilator, emitting the contact
/// term of the governing (anti)commutator at each same-species swap, and sorts
/// the remaining strings canonically. The result equals the input as an
/// operator.
pub fn reduce_to_normal_form(e: &OperatorExpr) -> OperatorExpr {
    reorder(e, true)
}

/// `:e:` — the same reordering with signs but without contact terms.
pub fn normal_order(e: &OperatorExpr) -> OperatorExpr {
    reorder(e, false)
}

pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    reduce_to_normal_form(&(&(a * b) - &(b * a)))
}

pub fn anticommutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    reduce_to_normal_form(&(&(a * b) + &(b * a)))
}

/// Vacuum expectation value: the operator-free part of the normal form.
pub fn vev(e: &OperatorExpr) -> OperatorExpr {
    let n = reduce_to_normal_form(e);
    let mut out = OperatorExpr::zero();
    for (t, c) in &n.terms {
        if t.ops.is_empty() {
            out.push(c.clone(), t.atoms.clone(), Vec::new());
        }
    }
    out
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, c: &Scalar, t: &Term, leading: bool) -> fmt::Result {
    let bare = t.atoms.is_one() && t.ops.is_empty();
    let negative = (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative());
    let mag = if negative { -c.clone() } else { c.clone() };
    match (leading, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let mut parts: Vec<String> = Vec::new();
    if bare || !scalar_is_one(&mag) {
        parts.push(fmt_scalar(&mag));
    }
    if !t.atoms.is_one() {
        parts.push(t.atoms.to_string());
    }
    for o in &t.ops {
        parts.push(o.to_string());
    }
    write!(f, "{}", parts.join(" * "))
}

/// Canonical text form, readable back by the expression grammar.
impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            fmt_monomial(f, c, t, i == 0)?;
        }
        Ok(())
    }
}

impl From<LadderOperator> for OperatorExpr {
    fn from(op: LadderOperator) -> Self {
        OperatorExpr::op(op)
    }
}

impl From<Scalar> for OperatorExpr {
    fn from(s: Scalar) -> Self {
        OperatorExpr::scalar(s)
    }
}
