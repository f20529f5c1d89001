use super::{max_abs_diff, FourVector, MassShellMomentum, METRIC};
use crate::error::{Error, Result};

/// Completes a timelike `n` (with `n² > 0`) to a frame of three unit spacelike
/// vectors orthogonal to it, by Minkowski Gram–Schmidt on the spatial axes
/// taken in the order x, y, z.
///
/// For timelike `n` the projections of the three spatial axes onto the
/// orthogonal complement are always linearly independent, so the seed order is
/// the only tie-breaking rule needed. When `n` points along z the first two
/// vectors are exactly the x and y axes.
fn transverse_frame(n: &FourVector) -> [FourVector; 3] {
    let n2 = n.square();
    let mut out = [FourVector::default(); 3];
    for i in 0..3 {
        let e = FourVector::basis(i + 1);
        let mut v = e - *n * (e.dot(n) / n2);
        for prev in out.iter().take(i) {
            // prev² = -1
            v = v + *prev * v.dot(prev);
        }
        // second pass keeps the frame orthogonal to rounding level for large boosts
        v = v - *n * (v.dot(n) / n2);
        for prev in out.iter().take(i) {
            v = v + *prev * v.dot(prev);
        }
        let norm = (-v.square()).sqrt();
        out[i] = v * (1.0 / norm);
    }
    out
}

/// Space-time polarizations `ε(k, γ)`, `γ = 0..3`, for a massive vector quantum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimePolarizations {
    pub momentum: FourVector,
    pub mass: f64,
    pub vectors: [FourVector; 4],
}

/// Inner polarizations `E(K, Γ)`, `Γ = 1..3`, transverse to the inner momentum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerPolarizations {
    pub momentum: FourVector,
    pub vectors: [FourVector; 3],
}

/// Both frames attached to one gauge quantum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationBasis {
    pub spacetime: SpacetimePolarizations,
    pub inner: InnerPolarizations,
}

impl PolarizationBasis {
    pub fn new(k: &MassShellMomentum, mu: f64, inner: &FourVector) -> Result<Self> {
        Ok(Self {
            spacetime: build_spacetime_polarizations(k, mu)?,
            inner: build_inner_polarizations(inner)?,
        })
    }
}

pub fn build_spacetime_polarizations(k: &MassShellMomentum, mu: f64) -> Result<SpacetimePolarizations> {
    if mu <= 0.0 || mu.is_nan() {
        return Err(Error::NonPositiveMass(mu));
    }
    let kv = k.four_vector();
    let k2 = kv.square();
    if ((k2 - mu * mu) / (mu * mu)).abs() > 1e-9 {
        return Err(Error::OffShell { k2, m2: mu * mu });
    }
    let t = transverse_frame(&kv);
    Ok(SpacetimePolarizations {
        momentum: kv,
        mass: mu,
        vectors: [kv * (1.0 / mu), t[0], t[1], t[2]],
    })
}

pub fn build_inner_polarizations(big_k: &FourVector) -> Result<InnerPolarizations> {
    let k2 = big_k.square();
    // lightlike K has a singular completeness projector; zero K has no direction
    if k2 <= 0.0 || k2.is_nan() {
        return Err(Error::InnerNotTimelike(k2));
    }
    Ok(InnerPolarizations {
        momentum: *big_k,
        vectors: transverse_frame(big_k),
    })
}

fn outer_sum<'a>(vs: impl Iterator<Item = (&'a FourVector, f64)>) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (v, w) in vs {
        for r in 0..4 {
            for s in 0..4 {
                m[r][s] += w * v.0[r] * v.0[s];
            }
        }
    }
    m
}

/// `-η^{ρσ} + n^ρ n^σ / n²` in contravariant components.
fn transverse_projector_upper(n: &FourVector) -> [[f64; 4]; 4] {
    let n2 = n.square();
    let mut m = [[0.0; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            let eta = if r == s { METRIC[r] } else { 0.0 };
            m[r][s] = -eta + n.0[r] * n.0[s] / n2;
        }
    }
    m
}

fn gram_residual(vs: &[FourVector], expected_diag: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let want = if i == j { expected_diag[i] } else { 0.0 };
            worst = worst.max((a.dot(b) - want).abs());
        }
    }
    worst
}

impl SpacetimePolarizations {
    /// `Σ_{γ=1..3} ε^ρ ε^σ` against `-η^{ρσ} + k^ρ k^σ/μ²`, worst entry.
    pub fn completeness_residual(&self) -> f64 {
        let sum = outer_sum(self.vectors[1..].iter().map(|v| (v, 1.0)));
        max_abs_diff(&sum, &transverse_projector_upper(&self.momentum))
    }

    /// `ε(γ)·ε(γ') = η^{γγ'}`, worst entry.
    pub fn orthonormality_residual(&self) -> f64 {
        gram_residual(&self.vectors, &METRIC)
    }

    /// `k·ε(γ≠0)`, worst entry.
    pub fn transversality_residual(&self) -> f64 {
        self.vectors[1..]
            .iter()
            .map(|e| self.momentum.dot(e).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ_γ η^{γγ} ε^ρ(γ) ε^σ(γ)`, which the frame relations force to `η^{ρσ}`.
    pub fn metric_weighted_sum(&self) -> [[f64; 4]; 4] {
        outer_sum(self.vectors.iter().zip(METRIC))
    }
}

impl InnerPolarizations {
    /// `Σ_Γ E^α E^β` against `-η^{αβ} + K^α K^β/K²`, worst entry.
    pub fn completeness_residual(&self) -> f64 {
        let sum = outer_sum(self.vectors.iter().map(|v| (v, 1.0)));
        max_abs_diff(&sum, &transverse_projector_upper(&self.momentum))
    }

    pub fn orthonormality_residual(&self) -> f64 {
        gram_residual(&self.vectors, &[-1.0, -1.0, -1.0])
    }

    pub fn transversality_residual(&self) -> f64 {
        self.vectors
            .iter()
            .map(|e| self.momentum.dot(e).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ_Γ η^{ΓΓ} E^α(Γ) E^β(Γ) = -Σ_Γ E^α E^β`.
    pub fn metric_weighted_sum(&self) -> [[f64; 4]; 4] {
        outer_sum(self.vectors.iter().map(|v| (v, -1.0)))
    }
}
