use nalgebra::{Matrix4, RowVector4, Vector4};
use num_complex::Complex;

use super::{FourVector, MassShellMomentum, METRIC};
use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type Matrix4c = Matrix4<C64>;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// The four gamma matrices in the Dirac (standard) representation.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaAlgebra {
    pub gamma: [Matrix4c; 4],
}

impl Default for GammaAlgebra {
    fn default() -> Self {
        Self::dirac()
    }
}

impl GammaAlgebra {
    /// `γ⁰ = diag(1, 1, -1, -1)`, `γⁱ = [[0, σⁱ], [-σⁱ, 0]]`.
    pub fn dirac() -> Self {
        let z = c(0.0);
        let o = c(1.0);
        let i = C64::new(0.0, 1.0);
        let g0 = Matrix4c::from_diagonal(&Vector4::new(o, o, -o, -o));
        // σ blocks written out row by row
        #[rustfmt::skip]
        let g1 = Matrix4c::new(
            z, z, z, o,
            z, z, o, z,
            z, -o, z, z,
            -o, z, z, z,
        );
        #[rustfmt::skip]
        let g2 = Matrix4c::new(
            z, z, z, -i,
            z, z, i, z,
            z, i, z, z,
            -i, z, z, z,
        );
        #[rustfmt::skip]
        let g3 = Matrix4c::new(
            z, z, o, z,
            z, z, z, -o,
            -o, z, z, z,
            z, o, z, z,
        );
        Self { gamma: [g0, g1, g2, g3] }
    }

    /// `k̸ = γ^μ k_μ`.
    pub fn slash(&self, k: &FourVector) -> Matrix4c {
        let kl = k.lowered();
        let mut m = Matrix4c::zeros();
        for mu in 0..4 {
            m += self.gamma[mu] * c(kl[mu]);
        }
        m
    }

    /// Largest entry of `{γ^μ, γ^ν} − 2η^{μν}·1` over all pairs.
    pub fn clifford_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let ac = self.gamma[mu] * self.gamma[nu] + self.gamma[nu] * self.gamma[mu];
                let eta = if mu == nu { 2.0 * METRIC[mu] } else { 0.0 };
                let want = Matrix4c::identity() * c(eta);
                worst = worst.max(max_norm(&(ac - want)));
            }
        }
        worst
    }
}

pub(crate) fn max_norm(m: &Matrix4c) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinorKind {
    U,
    V,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiracSpinor {
    pub components: Vector4<C64>,
    pub kind: SpinorKind,
    pub spin: u8,
    pub momentum: MassShellMomentum,
}

/// Spinors normalized to `ūu = 1`, `v̄v = −1`:
/// `u(k,s) = (k̸+m) e_s / sqrt(2m(E+m))`, `v(k,s) = (−k̸+m) e_{s+2} / sqrt(2m(E+m))`.
pub fn dirac_spinor(k: &MassShellMomentum, s: u8, kind: SpinorKind) -> Result<DiracSpinor> {
    let m = k.mass();
    if m <= 0.0 {
        return Err(Error::NonPositiveMass(m));
    }
    if !(1..=2).contains(&s) {
        return Err(Error::BadSpin(s));
    }
    let g = GammaAlgebra::dirac();
    let ks = g.slash(&k.four_vector());
    let id = Matrix4c::identity();
    let norm = c(1.0 / (2.0 * m * (k.energy() + m)).sqrt());
    let (op, slot) = match kind {
        SpinorKind::U => (ks + id * c(m), s as usize - 1),
        SpinorKind::V => (-ks + id * c(m), s as usize + 1),
    };
    let mut e = Vector4::zeros();
    e[slot] = c(1.0);
    Ok(DiracSpinor { components: op * e * norm, kind, spin: s, momentum: *k })
}

impl DiracSpinor {
    /// `ψ̄ = ψ† γ⁰`.
    pub fn bar(&self) -> RowVector4<C64> {
        let g0 = GammaAlgebra::dirac().gamma[0];
        self.components.adjoint() * g0
    }

    /// `‖(k̸ ∓ m)ψ‖_∞`, upper sign for u.
    pub fn dirac_residual(&self) -> f64 {
        let g = GammaAlgebra::dirac();
        let m = self.momentum.mass();
        let sign = match self.kind {
            SpinorKind::U => -1.0,
            SpinorKind::V => 1.0,
        };
        let op = g.slash(&self.momentum.four_vector()) + Matrix4c::identity() * c(sign * m);
        (op * self.components).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn bar_dot(&self, other: &DiracSpinor) -> C64 {
        (self.bar() * other.components)[0]
    }

    pub fn dagger_dot(&self, other: &DiracSpinor) -> C64 {
        (self.components.adjoint() * other.components)[0]
    }

    pub fn outer_bar(&self) -> Matrix4c {
        self.components * self.bar()
    }
}

/// `Σ_s u ū` (for `U`) or `Σ_s v v̄` (for `V`).
pub fn spin_sum(k: &MassShellMomentum, kind: SpinorKind) -> Result<Matrix4c> {
    let mut m = Matrix4c::zeros();
    for s in 1..=2 {
        m += dirac_spinor(k, s, kind)?.outer_bar();
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_exact() {
        assert_eq!(GammaAlgebra::dirac().clifford_residual(), 0.0);
    }

    #[test]
    fn rest_frame_spinors() {
        let k = MassShellMomentum::at_rest(1.0).unwrap();
        let u = dirac_spinor(&k, 1, SpinorKind::U).unwrap();
        assert_eq!(u.components, Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0)));
        let ss = spin_sum(&k, SpinorKind::U).unwrap();
        let want = Matrix4c::from_diagonal(&Vector4::new(c(1.0), c(1.0), c(0.0), c(0.0)));
        assert!(max_norm(&(ss - want)) < 1e-15);
    }

    #[test]
    fn boosted_normalizations() {
        let k = MassShellMomentum::new([0.3, -1.2, 2.5], 1.7).unwrap();
        for s in 1..=2u8 {
            for t in 1..=2u8 {
                let u1 = dirac_spinor(&k, s, SpinorKind::U).unwrap();
                let u2 = dirac_spinor(&k, t, SpinorKind::U).unwrap();
                let v1 = dirac_spinor(&k, s, SpinorKind::V).unwrap();
                let v2 = dirac_spinor(&k, t, SpinorKind::V).unwrap();
                let d = if s == t { 1.0 } else { 0.0 };
                assert!((u1.bar_dot(&u2) - c(d)).norm() < 1e-12);
                assert!((v1.bar_dot(&v2) + c(d)).norm() < 1e-12);
                assert!((u1.dagger_dot(&u2) - c(d * k.energy() / k.mass())).norm() < 1e-12);
                assert!(u1.dirac_residual() < 1e-12 && v1.dirac_residual() < 1e-12);
            }
        }
        let g = GammaAlgebra::dirac();
        let ks = g.slash(&k.four_vector());
        let id = Matrix4c::identity();
        let m = c(k.mass());
        let two_m = c(2.0 * k.mass());
        let su = spin_sum(&k, SpinorKind::U).unwrap();
        let sv = spin_sum(&k, SpinorKind::V).unwrap();
        assert!(max_norm(&(su - (ks + id * m) / two_m)) < 1e-12);
        assert!(max_norm(&(sv - (ks - id * m) / two_m)) < 1e-12);
    }

    #[test]
    fn massless_rejected() {
        let k = MassShellMomentum::new([1.0, 0.0, 0.0], 0.0).unwrap();
        assert!(dirac_spinor(&k, 1, SpinorKind::U).is_err());
        let k = MassShellMomentum::at_rest(1.0).unwrap();
        assert_eq!(dirac_spinor(&k, 3, SpinorKind::U), Err(Error::BadSpin(3)));
    }
}
