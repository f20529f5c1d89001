use num_complex::Complex;
use num_traits::Zero;

use super::propagator::{inner_projector_upper, printed_structure, InnerStructure, Numerator, TwoPointStructure};
use crate::error::{Error, Result};
use crate::exact::{fmt_scalar, imag_unit, int, q, qq, to_f64, Rational};
use crate::fock::FieldMasses;
use crate::kinematics::{
    build_inner_polarizations, build_spacetime_polarizations, dirac_spinor, FourVector, GammaAlgebra,
    MassShellMomentum, Matrix4c, SpinorKind,
};
use crate::opalg::{
    delta_resolve, vev, Atom, Attachment, Bindings, Disc, FieldKind, ModeExpansion, ModePart, NumericEnv,
};

type C64 = Complex<f64>;

/// Sample point and tolerance for identifying the numerator of a two-point
/// function.
#[derive(Clone, Debug, PartialEq)]
pub struct WickConfig {
    pub masses: FieldMasses,
    /// Spatial momentum `k`.
    pub momentum: [Rational; 3],
    /// Inner momentum `K`, `K² > 0`.
    pub inner: [Rational; 4],
    pub tolerance: f64,
}

impl Default for WickConfig {
    fn default() -> Self {
        Self {
            masses: FieldMasses::default(),
            momentum: [qq(1, 2), qq(-1, 3), qq(1, 4)],
            inner: [q(3), qq(1, 2), q(-1), qq(1, 3)],
            tolerance: 1e-10,
        }
    }
}

/// The two-point structure obtained from the mode expansions next to the
/// stated one.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPointCheck {
    pub wick: TwoPointStructure,
    pub printed: TwoPointStructure,
    pub differences: Vec<String>,
}

impl TwoPointCheck {
    pub fn matches(&self) -> bool {
        self.differences.is_empty()
    }
}

type Labels = (Option<Disc>, Option<(Disc, Disc)>);

fn discrete_choices(kind: FieldKind) -> Vec<Labels> {
    match kind {
        FieldKind::Scalar => vec![(None, None)],
        FieldKind::Dirac => (1..=2).map(|s| (Some(Disc::Value(s)), None)).collect(),
        FieldKind::Gauge => {
            let mut v = Vec::new();
            for g in 0..=3 {
                for big_g in 1..=3 {
                    v.push((None, Some((Disc::Value(g), Disc::Value(big_g)))));
                }
            }
            v
        }
    }
}

struct Sample {
    k: MassShellMomentum,
    big_k: FourVector,
    mass: f64,
}

fn attachment(part: &ModePart, sample: &Sample, labels: &Labels) -> Result<Vec<C64>> {
    let spin = || labels.0.as_ref().and_then(Disc::value).unwrap_or(1);
    Ok(match part.attachment {
        Attachment::None => vec![C64::new(1.0, 0.0)],
        Attachment::U => dirac_spinor(&sample.k, spin(), SpinorKind::U)?.components.iter().copied().collect(),
        Attachment::V => dirac_spinor(&sample.k, spin(), SpinorKind::V)?.components.iter().copied().collect(),
        Attachment::UBar => dirac_spinor(&sample.k, spin(), SpinorKind::U)?.bar().iter().copied().collect(),
        Attachment::VBar => dirac_spinor(&sample.k, spin(), SpinorKind::V)?.bar().iter().copied().collect(),
        Attachment::Polarization => {
            let (g, big_g) = labels.1.as_ref().map(|(a, b)| (a.value().unwrap(), b.value().unwrap())).unwrap();
            let eps = build_spacetime_polarizations(&sample.k, sample.mass)?.vectors[g as usize].lowered();
            let e = build_inner_polarizations(&sample.big_k)?.vectors[big_g as usize - 1];
            let mut out = Vec::with_capacity(16);
            for em in eps {
                for ea in e.0 {
                    out.push(C64::new(em * ea, 0.0));
                }
            }
            out
        }
    })
}

/// Accumulated `2ω Σ_labels (vev coefficient) ⊗ attachments` for one time ordering.
struct Ordered {
    numerator: Vec<C64>,
    lambda: Option<i32>,
    two_pi: Option<i32>,
}

fn mismatch(msg: String) -> Error {
    Error::Propagator(msg)
}

fn pick(parts: &[ModePart], creator: bool) -> &ModePart {
    parts.iter().find(|p| p.op.is_creator() == creator).expect("mode expansion has both parts")
}

fn ordered_sum(kind: FieldKind, sample: &Sample, env: &NumericEnv, field_first: bool) -> Result<Ordered> {
    let m = ModeExpansion::new(kind);
    let mut acc = Ordered { numerator: Vec::new(), lambda: None, two_pi: None };
    let omega = sample.k.energy();
    let sift = Bindings::new().free("h").free("H");
    for fl in discrete_choices(kind) {
        for cl in discrete_choices(kind) {
            let field = m.field_parts(&"k".into(), &"K".into(), fl.0.as_ref(), fl.1.as_ref().map(|(a, b)| (a, b)))?;
            let conj = m.conjugate_parts(&"h".into(), &"H".into(), cl.0.as_ref(), cl.1.as_ref().map(|(a, b)| (a, b)))?;
            // x⁰ > y⁰ pairs the field's annihilator with the conjugate's creator
            let (fp, cp) = if field_first { (pick(&field, false), pick(&conj, true)) } else { (pick(&field, true), pick(&conj, false)) };
            let product = if field_first { fp.expr() * cp.expr() } else { cp.expr() * fp.expr() };
            let resolved = delta_resolve(&vev(&product), &sift)?;
            let fa = attachment(fp, sample, &fl)?;
            let ca = attachment(cp, sample, &cl)?;
            if acc.numerator.is_empty() {
                acc.numerator = vec![C64::zero(); fa.len() * ca.len()];
            }
            for (t, c) in resolved.terms() {
                if !t.ops.is_empty() || !c.im.is_zero() {
                    return Err(mismatch(format!("unexpected term {}", fmt_scalar(c))));
                }
                let mut weight = to_f64(&c.re) * 2.0 * omega;
                let (mut lambda, mut two_pi) = (0, 0);
                for (a, e) in t.atoms.iter() {
                    match a {
                        Atom::Lambda => lambda = e,
                        Atom::TwoPi => two_pi = e,
                        Atom::Omega(..) | Atom::K0OverM(_) => weight *= env.atom(a)?.powi(e),
                        other => return Err(mismatch(format!("unresolved factor {other} in the two-point function"))),
                    }
                }
                for (name, slot, v) in [("Lambda", &mut acc.lambda, lambda), ("twopi", &mut acc.two_pi, two_pi)] {
                    match slot {
                        Some(p) if *p != v => return Err(mismatch(format!("{name} power differs between terms"))),
                        _ => *slot = Some(v),
                    }
                }
                for (i, x) in fa.iter().enumerate() {
                    for (j, y) in ca.iter().enumerate() {
                        acc.numerator[i * ca.len() + j] += x * y * weight;
                    }
                }
            }
        }
    }
    Ok(acc)
}

fn candidate(n: Numerator, p: &FourVector, big_k: &FourVector, mass: f64) -> Result<Vec<C64>> {
    Ok(match n {
        Numerator::One => vec![C64::new(1.0, 0.0)],
        Numerator::SlashPlusMass => {
            let m: Matrix4c = GammaAlgebra::dirac().slash(p) + Matrix4c::identity() * C64::new(mass, 0.0);
            let mut v = Vec::with_capacity(16);
            for a in 0..4 {
                for b in 0..4 {
                    v.push(m[(a, b)]);
                }
            }
            v
        }
        Numerator::Metric => {
            let proj = inner_projector_upper(big_k)?;
            let eta = crate::kinematics::METRIC;
            let mut v = vec![C64::zero(); 256];
            for mu in 0..4 {
                for al in 0..4 {
                    for nu in 0..4 {
                        for be in 0..4 {
                            let g = if mu == nu { eta[mu] } else { 0.0 };
                            v[(mu * 4 + al) * 16 + nu * 4 + be] = C64::new(g * proj[al][be], 0.0);
                        }
                    }
                }
            }
            v
        }
    })
}

fn residual(a: &[C64], b: &[C64], sign: f64) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y * sign).norm()).fold(0.0, f64::max) / scale
}

/// Computes `⟨0|T(field · conjugate)|0⟩` from the mode expansion.
///
/// Both time orderings are reduced with the exact algebra, the integration
/// variables of the conjugate field are sifted away, and the result must be
/// `(2π)⁻⁷ Λ^p ∫ d³k/(2ω) N(k)` for the first ordering and `N(−k)` for the
/// second (with the fermionic sign), where `N` is one of the known numerators.
/// The standard identity then turns the pair into `i N(k)/(k² − m² + iε)`.
pub fn wick_two_point(kind: FieldKind, cfg: &WickConfig) -> Result<TwoPointStructure> {
    let mass_q = match kind {
        FieldKind::Scalar => &cfg.masses.scalar,
        FieldKind::Dirac => &cfg.masses.dirac,
        FieldKind::Gauge => &cfg.masses.gauge,
    };
    let mass = to_f64(mass_q);
    let spatial = cfg.momentum.clone().map(|x| to_f64(&x));
    let big_k = FourVector(cfg.inner.clone().map(|x| to_f64(&x)));
    let sample = Sample { k: MassShellMomentum::new(spatial, mass)?, big_k, mass };
    let mut env = NumericEnv {
        mass_scalar: to_f64(&cfg.masses.scalar),
        mass_dirac: to_f64(&cfg.masses.dirac),
        mass_gauge: to_f64(&cfg.masses.gauge),
        ..NumericEnv::default()
    };
    env.momenta.insert("k".into(), spatial);

    let first = ordered_sum(kind, &sample, &env, true)?;
    let second = ordered_sum(kind, &sample, &env, false)?;
    let fermion_sign = if kind == FieldKind::Dirac { -1.0 } else { 1.0 };
    let n2: Vec<C64> = second.numerator.iter().map(|z| z * fermion_sign).collect();

    if first.two_pi != Some(-7) || second.two_pi != Some(-7) {
        return Err(mismatch(format!("twopi power {:?}, expected -7", first.two_pi)));
    }
    let total_lambda = first.lambda.unwrap_or(0);
    if second.lambda != first.lambda {
        return Err(mismatch("Lambda power differs between time orderings".into()));
    }

    let p = sample.k.four_vector();
    let minus_p = p * -1.0;
    let minus_k = big_k * -1.0;
    for n in [Numerator::One, Numerator::SlashPlusMass, Numerator::Metric] {
        let c1 = candidate(n, &p, &big_k, mass)?;
        if c1.len() != first.numerator.len() {
            continue;
        }
        let c2 = candidate(n, &minus_p, &minus_k, mass)?;
        for sign in [1.0, -1.0] {
            if residual(&first.numerator, &c1, sign) <= cfg.tolerance {
                if residual(&n2, &c2, sign) > cfg.tolerance {
                    return Err(mismatch(format!("{n:?}: second time ordering is not N(-k)")));
                }
                let inner = if n == Numerator::Metric { InnerStructure::Transverse } else { InnerStructure::Delta4 };
                let lambda_power = match inner {
                    InnerStructure::Delta4 => total_lambda,
                    InnerStructure::Transverse => total_lambda - 4,
                };
                let prefactor = if sign > 0.0 { imag_unit() } else { imag_unit() * int(-1) };
                return Ok(TwoPointStructure { kind, prefactor, lambda_power, inner, numerator: n });
            }
        }
    }
    Err(mismatch(format!("{} numerator matches no known form", kind.name())))
}

/// [`wick_two_point`] against the stated structure.
pub fn check_two_point(kind: FieldKind, cfg: &WickConfig) -> Result<TwoPointCheck> {
    let wick = wick_two_point(kind, cfg)?;
    let printed = printed_structure(kind);
    let differences = wick.differences(&printed);
    Ok(TwoPointCheck { wick, printed, differences })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_and_dirac_match() {
        for kind in [FieldKind::Scalar, FieldKind::Dirac] {
            let c = check_two_point(kind, &WickConfig::default()).unwrap();
            assert!(c.matches(), "{kind:?}: {:?}", c.differences);
        }
    }

    #[test]
    fn gauge_structure_from_modes() {
        let w = wick_two_point(FieldKind::Gauge, &WickConfig::default()).unwrap();
        assert_eq!(w.lambda_power, 2);
        assert_eq!(w.inner, InnerStructure::Transverse);
        assert_eq!(w.numerator, Numerator::Metric);
    }
}
