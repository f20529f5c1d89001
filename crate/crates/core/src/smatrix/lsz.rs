use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use super::propagator::{PropagatorSpec, DEFAULT_I_EPSILON};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, imag_unit, int, scalar_to_c64, to_f64, Rational};
use crate::fock::FieldMasses;
use crate::gravlimit::{bar, grav_limit_expr, RegularizationConfig};
use crate::opalg::{
    anticommutator, commutator, Atoms, Discrete, Field, FieldKind, InnerLabel, LadderOperator, MomentumLabel,
    OperatorExpr, Vec3, Vec4,
};

type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    In,
    Out,
}

/// One external quantum of a Green function.
///
/// Dirac legs need a spin, gauge legs a pair of polarizations. The energy is
/// optional; when present it must satisfy the mass shell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leg {
    pub field: Field,
    pub direction: Direction,
    pub momentum: Vec3,
    pub energy: Option<Rational>,
    pub inner: Option<Vec4>,
    pub spin: Option<u8>,
    pub polarizations: Option<(u8, u8)>,
}

impl Leg {
    pub fn new(field: Field, direction: Direction, momentum: Vec3) -> Self {
        Leg { field, direction, momentum, energy: None, inner: None, spin: None, polarizations: None }
    }

    pub fn with_spin(mut self, s: u8) -> Self {
        self.spin = Some(s);
        self
    }

    pub fn with_polarizations(mut self, g: u8, big_g: u8) -> Self {
        self.polarizations = Some((g, big_g));
        self
    }

    pub fn with_energy(mut self, e: Rational) -> Self {
        self.energy = Some(e);
        self
    }

    pub fn with_inner(mut self, v: Vec4) -> Self {
        self.inner = Some(v);
        self
    }

    fn kind(&self) -> FieldKind {
        FieldKind::of(self.field)
    }

    /// Which field operator stands for this leg inside the time-ordered product.
    fn operator_type(&self) -> char {
        match (self.field, self.direction) {
            (Field::Scalar, _) => 's',
            (Field::Gauge, _) => 'A',
            (Field::DiracParticle, Direction::In) | (Field::DiracAntiparticle, Direction::Out) => 'B',
            (Field::DiracParticle, Direction::Out) | (Field::DiracAntiparticle, Direction::In) => 'P',
        }
    }

    fn is_fermionic(&self) -> bool {
        self.field.is_fermionic()
    }

    /// The creator that makes this quantum from the vacuum.
    fn creator(&self, with_inner: bool) -> Result<LadderOperator> {
        let k = MomentumLabel::Bound(self.momentum.clone());
        let big_k = match (&self.inner, with_inner) {
            (Some(v), true) => InnerLabel::Bound(v.clone()),
            (None, true) => return Err(Error::Lsz("leg needs an inner momentum when the limit is off".into())),
            (_, false) => InnerLabel::OnShell(k.clone()),
        };
        let discrete = match self.field {
            Field::Scalar => Discrete::None,
            Field::DiracParticle | Field::DiracAntiparticle => Discrete::Spin(self.spin.unwrap_or(1).into()),
            Field::Gauge => {
                let (g, big_g) = self.polarizations.unwrap_or((1, 1));
                Discrete::Pol(g.into(), big_g.into())
            }
        };
        Ok(LadderOperator::new(self.field, false, k, big_k, discrete)?.dag())
    }

    fn validate(&self, masses: &FieldMasses) -> Result<()> {
        let m = masses.of(self.field);
        if let Some(e) = &self.energy {
            let p2 = self.momentum.iter().fold(Rational::zero(), |acc, x| acc + x * x);
            if !e.is_positive() || e * e != p2 + m * m {
                return Err(Error::Lsz(format!(
                    "leg {} is off shell: energy {} with mass {}",
                    self,
                    fmt_rational(e),
                    fmt_rational(m)
                )));
            }
        }
        match self.field {
            Field::DiracParticle | Field::DiracAntiparticle => match self.spin {
                Some(1 | 2) => {}
                Some(s) => return Err(Error::BadSpin(s)),
                None => return Err(Error::Lsz(format!("Dirac leg {self} has no spinor attachment"))),
            },
            Field::Gauge => match self.polarizations {
                Some((1..=3, 1..=3)) => {}
                Some((g, big_g)) => {
                    return Err(Error::Lsz(format!("gauge leg needs gamma, Gamma in 1..=3, got ({g},{big_g})")))
                }
                None => return Err(Error::Lsz(format!("gauge leg {self} has no polarization attachment"))),
            },
            Field::Scalar => {}
        }
        if self.spin.is_some() && !matches!(self.field, Field::DiracParticle | Field::DiracAntiparticle) {
            return Err(Error::Lsz(format!("leg {self} cannot carry a spin")));
        }
        if self.polarizations.is_some() && self.field != Field::Gauge {
            return Err(Error::Lsz(format!("leg {self} cannot carry polarizations")));
        }
        Ok(())
    }

    fn on_shell_four_vector(&self, masses: &FieldMasses) -> [f64; 4] {
        let p = self.momentum.clone().map(|x| to_f64(&x));
        let m = to_f64(masses.of(self.field));
        [(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt(), p[0], p[1], p[2]]
    }
}

impl fmt::Display for Leg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::In => "in",
            Direction::Out => "out",
        };
        let k: Vec<String> = self.momentum.iter().map(fmt_rational).collect();
        write!(f, "{dir} {}[{}]", self.field.head(), k.join(","))?;
        if let Some(s) = self.spin {
            write!(f, " s={s}")?;
        }
        if let Some((g, big_g)) = self.polarizations {
            write!(f, " g={g} G={big_g}")?;
        }
        Ok(())
    }
}

/// An interaction point joining every external leg. The factor is supplied
/// by the caller, already contracted with the external wave functions, as a
/// function of the on-shell leg momenta.
#[derive(Clone)]
pub struct VertexRule {
    pub name: String,
    pub arity: usize,
    factor: Arc<dyn Fn(&[[f64; 4]]) -> C64 + Send + Sync>,
}

impl VertexRule {
    pub fn new(name: &str, arity: usize, factor: impl Fn(&[[f64; 4]]) -> C64 + Send + Sync + 'static) -> Self {
        VertexRule { name: name.to_string(), arity, factor: Arc::new(factor) }
    }

    pub fn constant(name: &str, arity: usize, value: C64) -> Self {
        Self::new(name, arity, move |_| value)
    }

    pub fn eval(&self, momenta: &[[f64; 4]]) -> C64 {
        (self.factor)(momenta)
    }
}

impl fmt::Debug for VertexRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexRule({}, arity {})", self.name, self.arity)
    }
}

/// A Wick pairing of the legs: index pairs `(i, j)` with `i < j`, plus the
/// sign of the fermionic reordering it needs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub sign: i8,
}

/// A vacuum expectation value of a time-ordered product, described by its
/// external legs and optional vertices.
#[derive(Clone, Debug, Default)]
pub struct GreenFunction {
    pub legs: Vec<Leg>,
    pub vertices: Vec<VertexRule>,
}

fn can_contract(a: &Leg, b: &Leg) -> bool {
    matches!((a.operator_type(), b.operator_type()), ('s', 's') | ('A', 'A') | ('B', 'P') | ('P', 'B'))
}

fn permutation_sign(seq: &[usize]) -> i8 {
    let mut s = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                s = -s;
            }
        }
    }
    s
}

impl GreenFunction {
    pub fn new(legs: Vec<Leg>) -> Self {
        GreenFunction { legs, vertices: Vec::new() }
    }

    pub fn with_vertex(mut self, v: VertexRule) -> Self {
        self.vertices.push(v);
        self
    }

    /// All perfect matchings into propagator links, in lexicographic order.
    pub fn pairings(&self) -> Vec<Pairing> {
        let mut out = Vec::new();
        let mut used = vec![false; self.legs.len()];
        let mut current = Vec::new();
        self.match_rec(&mut used, &mut current, &mut out);
        out
    }

    fn match_rec(&self, used: &mut [bool], current: &mut Vec<(usize, usize)>, out: &mut Vec<Pairing>) {
        let Some(i) = used.iter().position(|u| !u) else {
            let seq: Vec<usize> = current
                .iter()
                .flat_map(|&(a, b)| [a, b])
                .filter(|&x| self.legs[x].is_fermionic())
                .collect();
            out.push(Pairing { pairs: current.clone(), sign: permutation_sign(&seq) });
            return;
        };
        used[i] = true;
        for j in i + 1..self.legs.len() {
            if !used[j] && can_contract(&self.legs[i], &self.legs[j]) {
                used[j] = true;
                current.push((i, j));
                self.match_rec(used, current, out);
                current.pop();
                used[j] = false;
            }
        }
        used[i] = false;
    }
}

/// Wave-function constants and whether to take the gravitational limit.
#[derive(Clone, Debug, PartialEq)]
pub struct LSZRecipe {
    pub z: f64,
    pub z2: f64,
    pub z3: f64,
    pub grav_limit: bool,
    pub i_epsilon: f64,
}

impl Default for LSZRecipe {
    fn default() -> Self {
        Self { z: 1.0, z2: 1.0, z3: 1.0, grav_limit: true, i_epsilon: DEFAULT_I_EPSILON }
    }
}

impl LSZRecipe {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("z", self.z), ("z2", self.z2), ("z3", self.z3)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Lsz(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        Ok(())
    }

    fn z_for(&self, kind: FieldKind) -> f64 {
        match kind {
            FieldKind::Scalar => self.z,
            FieldKind::Dirac => self.z2,
            FieldKind::Gauge => self.z3,
        }
    }
}

/// A reduced matrix element.
#[derive(Clone, Debug, PartialEq)]
pub struct Amplitude {
    /// Vertex contributions with every external propagator amputated.
    pub connected: C64,
    /// `Σ_pairings sign · Π ⟨out|in⟩` over in–out pairings.
    pub elastic: OperatorExpr,
    /// `elastic` divided by the norms of the in-states.
    pub normalized_elastic: OperatorExpr,
    /// Per-leg amputation factor `(i/√Z) · residue`.
    pub leg_factors: Vec<C64>,
    /// Pairings that contributed to `elastic`.
    pub elastic_pairings: Vec<Pairing>,
}

fn one_particle_overlap(out: &Leg, inn: &Leg, recipe: &LSZRecipe, cfg: &RegularizationConfig) -> Result<OperatorExpr> {
    let x = out.creator(!recipe.grav_limit)?.dag();
    let y = inn.creator(!recipe.grav_limit)?;
    let fermionic = x.is_fermionic();
    let bracket = |a: &OperatorExpr, b: &OperatorExpr| {
        if fermionic {
            anticommutator(a, b)
        } else {
            commutator(a, b)
        }
    };
    if recipe.grav_limit {
        grav_limit_expr(&bracket(&bar(&x).expr(), &bar(&y).expr()), cfg)
    } else {
        Ok(bracket(&OperatorExpr::op(x), &OperatorExpr::op(y)))
    }
}

fn invert_monomial(e: &OperatorExpr) -> Result<OperatorExpr> {
    let mut it = e.terms();
    match (it.next(), it.next()) {
        (Some((t, c)), None) if t.ops.is_empty() => {
            let inv = Atoms::from_iter(t.atoms.iter().map(|(a, n)| (a.clone(), -n)));
            let norm = &c.re * &c.re + &c.im * &c.im;
            let ci = num_complex::Complex::new(&c.re / &norm, -&c.im / &norm);
            Ok(OperatorExpr::monomial(ci, inv, vec![]))
        }
        _ => Err(Error::Lsz(format!("state norm {e} is not a single c-number term"))),
    }
}

/// LSZ reduction of a Green function in momentum space.
///
/// Each external leg is amputated: its propagator pole is cancelled exactly
/// against `k² − m²`, leaving `(i/√Z)` times the residue of the stated kernel,
/// with the overall `(−1)^{m+n}` over Dirac particle legs. The connected part
/// is the sum of vertices joining every leg. The elastic part is the
/// disconnected overlap of the in- and out-states, a signed sum over in–out
/// pairings of one-particle overlaps, taken in the gravitational limit when
/// the recipe asks for it.
pub fn lsz_reduce(
    g: &GreenFunction,
    recipe: &LSZRecipe,
    cfg: &RegularizationConfig,
    masses: &FieldMasses,
) -> Result<Amplitude> {
    recipe.validate()?;
    for leg in &g.legs {
        leg.validate(masses)?;
    }
    for v in &g.vertices {
        if v.arity != g.legs.len() {
            return Err(Error::Lsz(format!("vertex {} has arity {} but there are {} legs", v.name, v.arity, g.legs.len())));
        }
    }

    let mut leg_factors = Vec::new();
    let mut dirac_particles = 0;
    for leg in &g.legs {
        let kind = leg.kind();
        let spec = PropagatorSpec::new(kind, to_f64(masses.of(leg.field)), recipe.i_epsilon)?;
        let amputated = spec.kernel().times_inverse_propagator();
        // the spinor and polarization contractions absorb the numerator
        let residue = amputated
            .residue()
            .ok_or_else(|| Error::Lsz(format!("leg {leg} keeps a propagator pole after amputation")))?;
        // (i/√Z) times the full propagator residue i·coefficient
        let full = imag_unit() * imag_unit() * residue;
        let z = recipe.z_for(kind);
        leg_factors.push(scalar_to_c64(&full) / z.sqrt());
        if leg.field == Field::DiracParticle {
            dirac_particles += 1;
        }
    }
    let sign = if dirac_particles % 2 == 0 { 1.0 } else { -1.0 };
    let momenta: Vec<[f64; 4]> = g.legs.iter().map(|l| l.on_shell_four_vector(masses)).collect();
    let amputation: C64 = leg_factors.iter().product::<C64>() * sign;
    let connected = g.vertices.iter().map(|v| v.eval(&momenta)).sum::<C64>() * amputation;

    let ins: Vec<usize> = (0..g.legs.len()).filter(|&i| g.legs[i].direction == Direction::In).collect();
    let outs: Vec<usize> = (0..g.legs.len()).filter(|&i| g.legs[i].direction == Direction::Out).collect();
    let mut elastic = OperatorExpr::zero();
    let mut elastic_pairings = Vec::new();
    if ins.len() == outs.len() {
        for p in g.pairings() {
            if !p.pairs.iter().all(|&(a, b)| g.legs[a].direction != g.legs[b].direction) {
                continue;
            }
            // out j ↔ in σ(j): sign of σ restricted to fermions, which is the
            // sign of ⟨0| o_m … o_1 i_1 … i_n |0⟩ for that pairing
            let mut sigma = Vec::new();
            for &o in &outs {
                if !g.legs[o].is_fermionic() {
                    continue;
                }
                let (a, b) = *p.pairs.iter().find(|&&(a, b)| a == o || b == o).unwrap();
                let i = if a == o { b } else { a };
                sigma.push(ins.iter().filter(|&&x| g.legs[x].is_fermionic()).position(|&x| x == i).unwrap());
            }
            let s = permutation_sign(&sigma);
            let mut term = OperatorExpr::scalar(int(s as i64));
            for &(a, b) in &p.pairs {
                let (o, i) = if g.legs[a].direction == Direction::Out { (a, b) } else { (b, a) };
                if g.legs[o].field != g.legs[i].field {
                    term = OperatorExpr::zero();
                    break;
                }
                term = term * one_particle_overlap(&g.legs[o], &g.legs[i], recipe, cfg)?;
            }
            if !term.is_zero() {
                elastic_pairings.push(Pairing { pairs: p.pairs.clone(), sign: s });
            }
            elastic = elastic + term;
        }
    }
    let mut norm = OperatorExpr::one();
    for &i in &ins {
        norm = norm * one_particle_overlap(&g.legs[i], &g.legs[i], recipe, cfg)?;
    }
    let normalized_elastic = if elastic.is_zero() { elastic.clone() } else { elastic.clone() * invert_monomial(&norm)? };
    Ok(Amplitude { connected, elastic, normalized_elastic, leg_factors, elastic_pairings })
}

/// Whether an expression is exactly the number one.
pub fn is_exactly_one(e: &OperatorExpr) -> bool {
    *e == OperatorExpr::one() && e.terms().all(|(_, c)| c.re.is_one())
}
