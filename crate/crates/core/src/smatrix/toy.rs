use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// A basis vector of a toy S-matrix: a particle number and discrete
/// momentum/inner-momentum labels. The vacuum is `particles == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState {
    pub particles: u8,
    pub k: u16,
    pub big_k: u16,
}

impl BasisState {
    pub fn vacuum() -> Self {
        BasisState { particles: 0, k: 0, big_k: 0 }
    }

    /// Inside the physical subspace: labels agree (`K = k`).
    pub fn is_physical(&self) -> bool {
        self.k == self.big_k
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.particles == 0 {
            write!(f, "|0>")
        } else {
            write!(f, "|n={} k={} K={}>", self.particles, self.k, self.big_k)
        }
    }
}

/// A finite S-matrix on a labelled basis, with the projector onto the
/// physical (`K = k`) subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct ToySMatrix {
    pub basis: Vec<BasisState>,
    pub s: DMatrix<C64>,
}

/// Haar-random `n × n` unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<C64> {
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) / std::f64::consts::SQRT_2
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn embed_blocks(basis: &[BasisState], blocks: &[(Vec<usize>, DMatrix<C64>)]) -> DMatrix<C64> {
    let n = basis.len();
    let mut s = DMatrix::zeros(n, n);
    for (idx, u) in blocks {
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                s[(i, j)] = u[(a, b)];
            }
        }
    }
    s
}

fn grid(particles: u8, n: u16) -> impl Iterator<Item = BasisState> {
    (0..n).flat_map(move |k| (0..n).map(move |big_k| BasisState { particles, k, big_k }))
}

impl ToySMatrix {
    pub fn new(basis: Vec<BasisState>, s: DMatrix<C64>) -> Result<Self> {
        if s.nrows() != basis.len() || s.ncols() != basis.len() {
            return Err(Error::Toy(format!(
                "matrix is {}x{} but the basis has {} states",
                s.nrows(),
                s.ncols(),
                basis.len()
            )));
        }
        Ok(ToySMatrix { basis, s })
    }

    pub fn identity(basis: Vec<BasisState>) -> Self {
        let n = basis.len();
        ToySMatrix { basis, s: DMatrix::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn projector(&self) -> DMatrix<C64> {
        let d: Vec<C64> = self.basis.iter().map(|b| C64::new(if b.is_physical() { 1.0 } else { 0.0 }, 0.0)).collect();
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
    }

    /// A random S commuting with `P` on an `n × n` grid of two-particle
    /// labels: independent Haar unitaries on the physical and unphysical blocks.
    pub fn random_admissible<R: Rng + ?Sized>(n: u16, rng: &mut R) -> Self {
        let basis: Vec<BasisState> = grid(2, n).collect();
        let s = Self::block_unitary(&basis, &(0..basis.len()).collect::<Vec<_>>(), rng);
        ToySMatrix { basis, s }
    }

    fn block_unitary<R: Rng + ?Sized>(basis: &[BasisState], idx: &[usize], rng: &mut R) -> DMatrix<C64> {
        let (phys, unphys): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| basis[i].is_physical());
        let mut blocks = Vec::new();
        for part in [phys, unphys] {
            if !part.is_empty() {
                let u = random_unitary(part.len(), rng);
                blocks.push((part, u));
            }
        }
        embed_blocks(basis, &blocks)
    }

    /// Vacuum, one-particle states left alone, and a random admissible
    /// two-particle sector.
    pub fn sectored<R: Rng + ?Sized>(n: u16, rng: &mut R) -> Self {
        let mut basis = vec![BasisState::vacuum()];
        basis.extend(grid(1, n));
        basis.extend(grid(2, n));
        let multi: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].particles == 2).collect();
        let mut s = Self::block_unitary(&basis, &multi, rng);
        for i in 0..basis.len() {
            if basis[i].particles < 2 {
                s[(i, i)] = C64::new(1.0, 0.0);
            }
        }
        ToySMatrix { basis, s }
    }

    /// `count` random admissible instances cycling through dimensions 4, 16, 64.
    pub fn random_family(count: usize, seed: u64) -> Vec<ToySMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|i| Self::random_admissible([2, 4, 8][i % 3], &mut rng)).collect()
    }

    /// `S` on two basis states that swaps a physical and an unphysical one:
    /// unitary, but it does not commute with `P`.
    pub fn swap_counterexample() -> Self {
        let basis = vec![BasisState { particles: 1, k: 0, big_k: 0 }, BasisState { particles: 1, k: 0, big_k: 1 }];
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        ToySMatrix { basis, s: DMatrix::from_row_slice(2, 2, &[o, l, l, o]) }
    }
}

/// Outcome of the projected-unitarity check. Preconditions and the
/// conclusion are reported separately.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarityReport {
    pub dim: usize,
    /// `‖S†S − 1‖`.
    pub unitarity_residual: f64,
    /// `max(‖P² − P‖, ‖P† − P‖)`.
    pub projector_residual: f64,
    /// `‖SP − PS‖`.
    pub commutation_residual: f64,
    /// `‖P S† S P − P‖`; `None` when a precondition fails.
    pub conclusion_residual: Option<f64>,
    pub preconditions_hold: bool,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Largest entry modulus, so a tolerance reads per matrix element.
fn norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn toy_unitarity_check(t: &ToySMatrix, tol: f64) -> UnitarityReport {
    let n = t.dim();
    let s = &t.s;
    let p = t.projector();
    let sd = s.adjoint();
    let id = DMatrix::<C64>::identity(n, n);
    let unitarity_residual = norm(&(&sd * s - &id));
    let projector_residual = norm(&(&p * &p - &p)).max(norm(&(p.adjoint() - &p)));
    let commutation_residual = norm(&(s * &p - &p * s));
    let mut failures = Vec::new();
    if unitarity_residual > tol {
        failures.push(format!("precondition: S is not unitary, |S^dag S - 1| = {unitarity_residual:e}"));
    }
    if projector_residual > tol {
        failures.push(format!("precondition: P is not a projector, residual {projector_residual:e}"));
    }
    if commutation_residual > tol {
        failures.push(format!("precondition: S and P do not commute, |SP - PS| = {commutation_residual:e}"));
    }
    let preconditions_hold = failures.is_empty();
    let conclusion_residual = preconditions_hold.then(|| norm(&(&p * &sd * s * &p - &p)));
    if let Some(r) = conclusion_residual {
        if r > tol {
            failures.push(format!("projected S is not unitary: |P S^dag S P - P| = {r:e}"));
        }
    }
    UnitarityReport {
        dim: n,
        unitarity_residual,
        projector_residual,
        commutation_residual,
        conclusion_residual,
        preconditions_hold,
        passed: failures.is_empty(),
        failures,
    }
}

/// Outcome of the vacuum and one-particle invariance checks.
#[derive(Clone, Debug, PartialEq)]
pub struct VacuumReport {
    /// Phase `α` of `⟨0|S|0⟩`; the checks run on `e^{−iα} S`.
    pub vacuum_phase: f64,
    pub violations: Vec<String>,
    pub passed: bool,
}

pub fn vacuum_and_one_particle_checks(t: &ToySMatrix, tol: f64) -> Result<VacuumReport> {
    let v = t
        .basis
        .iter()
        .position(|b| b.particles == 0)
        .ok_or_else(|| Error::Toy("basis has no vacuum vector".into()))?;
    if !t.basis.iter().any(|b| b.particles == 1) {
        return Err(Error::Toy("basis has no one-particle vectors".into()));
    }
    let s00 = t.s[(v, v)];
    let vacuum_phase = if s00.norm() > 0.0 { s00.arg() } else { 0.0 };
    let s = &t.s * C64::from_polar(1.0, -vacuum_phase);
    let mut violations = Vec::new();
    if vacuum_phase.abs() > tol {
        violations.push(format!("vacuum phase {vacuum_phase:e} removed by convention"));
    }
    for (j, b) in t.basis.iter().enumerate() {
        if b.particles > 1 {
            continue;
        }
        for (i, a) in t.basis.iter().enumerate() {
            let want = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            let d = (s[(i, j)] - want).norm();
            if d > tol {
                violations.push(if i == j {
                    format!("{b}: diagonal element differs from 1 by {d:e}")
                } else {
                    format!("{b}: mixes into {a} with amplitude {:e}", s[(i, j)].norm())
                });
            }
        }
    }
    // a phase alone is a convention, not a failure
    let passed = violations.iter().all(|v| v.starts_with("vacuum phase"));
    Ok(VacuumReport { vacuum_phase, violations, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_passes() {
        let t = ToySMatrix::identity(grid(1, 3).collect());
        let r = toy_unitarity_check(&t, 1e-12);
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn random_family_passes() {
        for t in ToySMatrix::random_family(6, 3) {
            let r = toy_unitarity_check(&t, 1e-12);
            assert!(r.passed, "dim {}: {:?}", t.dim(), r.failures);
        }
    }

    #[test]
    fn counterexample_reports_precondition() {
        let r = toy_unitarity_check(&ToySMatrix::swap_counterexample(), 1e-12);
        assert!(!r.preconditions_hold);
        assert!(r.conclusion_residual.is_none());
        assert_eq!(r.unitarity_residual, 0.0);
    }

    #[test]
    fn vacuum_phase_and_mixing() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = ToySMatrix::sectored(2, &mut rng);
        assert!(vacuum_and_one_particle_checks(&t, 1e-12).unwrap().passed);

        // an overall phase, as vacuum bubbles give, is removed by convention
        let mut phased = t.clone();
        phased.s *= C64::from_polar(1.0, 0.3);
        let r = vacuum_and_one_particle_checks(&phased, 1e-12).unwrap();
        assert!((r.vacuum_phase - 0.3).abs() < 1e-15);
        assert_eq!(r.violations.len(), 1);
        assert!(r.passed);

        // rotate a one-particle state into a two-particle state
        let mut mixed = t.clone();
        let (i, j) = (1, 5);
        for (r, c, x) in [(i, i, 0.0), (j, j, 0.0), (i, j, 1.0), (j, i, 1.0)] {
            mixed.s[(r, c)] = C64::new(x, 0.0);
        }
        for c in 0..mixed.dim() {
            if c != i && c != j {
                mixed.s[(j, c)] = C64::new(0.0, 0.0);
                mixed.s[(i, c)] = C64::new(0.0, 0.0);
            }
        }
        assert!(!vacuum_and_one_particle_checks(&mixed, 1e-12).unwrap().passed);
    }
}
