//! The verification suites behind `verify`.
//!
//! Exact suites compare printed canonical forms and ignore the tolerance;
//! numeric suites compare residuals against it.

use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use super::grammar::parse_expression;
use super::report::{Case, Report, Status};
use crate::error::{Error, Result};
use crate::exact::{q, to_f64, ExactFourVector, Rational};
use crate::fock::{conservation_check, inner_product, physical_filter, FockState, Momentum};
use crate::gravlimit::{bar, grav_limit_expr, lambda_power, project_state, RegularizationConfig};
use crate::kinematics::{
    dirac_spinor, spin_sum, FourVector, GammaAlgebra, MassShellMomentum, Matrix4c, PolarizationBasis, SpinorKind,
};
use crate::opalg::{
    anticommutator, commutator, reduce_to_normal_form, Discrete, Field, FieldKind, InnerLabel, LadderOperator,
    MomentumLabel, OperatorExpr,
};
use crate::smatrix::{
    check_two_point, inner_projector, lsz_reduce, propagator_eval, toy_unitarity_check, vacuum_and_one_particle_checks,
    Direction, GreenFunction, Leg, PropagatorSpec, PropagatorValue, ToySMatrix, VertexRule, WickConfig,
};

type C64 = Complex<f64>;

/// Number of random samples in the sampled suites.
pub const SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Ccr,
    Car,
    Gauge,
    Kinematics,
    Fock,
    Gravlimit,
    Propagators,
    Lsz,
    Unitarity,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Ccr,
        Suite::Car,
        Suite::Gauge,
        Suite::Kinematics,
        Suite::Fock,
        Suite::Gravlimit,
        Suite::Propagators,
        Suite::Lsz,
        Suite::Unitarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ccr => "ccr",
            Suite::Car => "car",
            Suite::Gauge => "gauge",
            Suite::Kinematics => "kinematics",
            Suite::Fock => "fock",
            Suite::Gravlimit => "gravlimit",
            Suite::Propagators => "propagators",
            Suite::Lsz => "lsz",
            Suite::Unitarity => "unitarity",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let cases = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(cases_for(s, cfg)?);
            }
            all
        }
        s => cases_for(s, cfg)?,
    };
    Ok(Report::new(suite.name(), cfg.seed, cfg.to_json(), cases))
}

fn cases_for(s: Suite, cfg: &RunConfig) -> Result<Vec<Case>> {
    Ok(match s {
        Suite::Ccr => ccr(),
        Suite::Car => car(),
        Suite::Gauge => gauge(),
        Suite::Kinematics => kinematics(cfg),
        Suite::Fock => fock(cfg),
        Suite::Gravlimit => gravlimit(cfg)?,
        Suite::Propagators => propagators(cfg),
        Suite::Lsz => lsz(cfg)?,
        Suite::Unitarity => unitarity(cfg),
        Suite::All => unreachable!(),
    })
}

fn p(src: &str) -> OperatorExpr {
    parse_expression(src).unwrap_or_else(|e| panic!("built-in expression {src:?}: {e}"))
}

fn bracket_case(name: &str, fermionic: bool, x: &str, y: &str, want: &str) -> Case {
    let (a, b) = (p(x), p(y));
    let got = if fermionic { anticommutator(&a, &b) } else { commutator(&a, &b) };
    let (open, close) = if fermionic { ("{", "}") } else { ("[", "]") };
    Case::exact(name, format!("{open}{x}, {y}{close}"), got, p(want))
}

fn ccr() -> Vec<Case> {
    let rhs = "2 * omega(k) * Lambda^-4 * twopi^7 * delta4(K,H) * delta3(k,h)";
    let mut out = vec![
        bracket_case("ccr.a_adag", false, "a(k;K)", "a'(h;H)", rhs),
        bracket_case("ccr.adag_a", false, "a'(h;H)", "a(k;K)", &format!("-{rhs}")),
        bracket_case("ccr.a_a", false, "a(k;K)", "a(h;H)", "0"),
        bracket_case("ccr.adag_adag", false, "a'(k;K)", "a'(h;H)", "0"),
        bracket_case(
            "ccr.bound_equal",
            false,
            "a([1,0,0];[2,0,0,1])",
            "a'([1,0,0];[2,0,0,1])",
            "2 * omega([1,0,0]) * Lambda^-4 * twopi^7 * delta4(0) * delta3(0)",
        ),
        bracket_case("ccr.bound_distinct", false, "a([1,0,0];[2,0,0,1])", "a'([0,1,0];[2,0,0,1])", "0"),
    ];
    let prod = p("a(k;K) * a'(h;H)");
    out.push(Case::exact(
        "ccr.normal_form",
        "a a' = a' a + [a, a']",
        reduce_to_normal_form(&prod),
        p(&format!("a'(h;H) * a(k;K) + {rhs}")),
    ));
    out
}

fn car() -> Vec<Case> {
    let rhs = "k0m(k) * kron(s,t) * Lambda^-4 * twopi^7 * delta4(K,H) * delta3(k,h)";
    let mut out = vec![
        bracket_case("car.b_bdag", true, "b(k,s=s;K)", "b'(h,s=t;H)", rhs),
        bracket_case("car.d_ddag", true, "d(k,s=s;K)", "d'(h,s=t;H)", rhs),
        bracket_case("car.b_b", true, "b(k,s=s;K)", "b(h,s=t;H)", "0"),
        bracket_case("car.bdag_bdag", true, "b'(k,s=s;K)", "b'(h,s=t;H)", "0"),
        bracket_case("car.d_d", true, "d(k,s=s;K)", "d(h,s=t;H)", "0"),
        bracket_case("car.ddag_ddag", true, "d'(k,s=s;K)", "d'(h,s=t;H)", "0"),
        bracket_case("car.b_ddag", true, "b(k,s=s;K)", "d'(h,s=t;H)", "0"),
        bracket_case("car.b_d", true, "b(k,s=s;K)", "d(h,s=t;H)", "0"),
        bracket_case(
            "car.spin_mismatch",
            true,
            "b([1,0,0],s=1;[2,0,0,0])",
            "b'([1,0,0],s=2;[2,0,0,0])",
            "0",
        ),
    ];
    out.push(Case::exact(
        "car.pauli",
        "b'(k,s=1;K) b'(k,s=1;K) = 0",
        reduce_to_normal_form(&p("b'(k,s=1;K) * b'(k,s=1;K)")),
        "0",
    ));
    out
}

fn gauge() -> Vec<Case> {
    let rhs = "2 * omegaA(k) * eta(f,g) * etaI(F,G) * Lambda^-2 * twopi^7 * delta4(K,H) * delta3(k,h)";
    let mut out = vec![
        bracket_case("gauge.a_adag", false, "A(k,g=f;K,G=F)", "A'(h,g=g;H,G=G)", rhs),
        bracket_case("gauge.a_a", false, "A(k,g=f;K,G=F)", "A(h,g=g;H,G=G)", "0"),
        bracket_case("gauge.adag_adag", false, "A'(k,g=f;K,G=F)", "A'(h,g=g;H,G=G)", "0"),
        bracket_case("gauge.a_matter", false, "A(k,g=f;K,G=F)", "a'(h;H)", "0"),
    ];
    // the metric factors with bound polarizations, against the diagonal of η
    for g in 0..4u8 {
        for big_g in 1..4u8 {
            let x = format!("A([1,0,0],g={g};[2,0,0,0],G={big_g})");
            let sign = if g == 0 { -1 } else { 1 };
            let want = format!("{sign} * 2 * omegaA([1,0,0]) * Lambda^-2 * twopi^7 * delta4(0) * delta3(0)");
            out.push(bracket_case(&format!("gauge.metric_g{g}_G{big_g}"), false, &x, &x.replacen("A(", "A'(", 1), &want));
        }
    }
    out.push(Case::check(
        "gauge.inner_polarization_zero",
        "A'(k,g=0;K,G=0) is rejected",
        parse_expression("A'(k,g=0;K,G=0)").is_err(),
    ));
    out
}

fn random_spatial(rng: &mut ChaCha8Rng, scale: f64) -> [f64; 3] {
    [0; 3].map(|_| rng.random_range(-scale..scale))
}

fn timelike(rng: &mut ChaCha8Rng) -> FourVector {
    let s = random_spatial(rng, 3.0);
    let r = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    let t = r + rng.random_range(0.1..3.0);
    FourVector::new(if rng.random_bool(0.5) { t } else { -t }, s[0], s[1], s[2])
}

fn mat_diff(a: &Matrix4c, b: &Matrix4c) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn kinematics(cfg: &RunConfig) -> Vec<Case> {
    let tol = cfg.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mu = to_f64(&cfg.masses.gauge);
    let m = to_f64(&cfg.masses.dirac);
    let g = GammaAlgebra::dirac();
    let mut worst = [0.0f64; 9];
    let mut errors = Vec::new();
    for i in 0..SAMPLES {
        let step = (|| -> Result<[f64; 9]> {
            let k = MassShellMomentum::new(random_spatial(&mut rng, 3.0), mu)?;
            let big_k = timelike(&mut rng);
            let b = PolarizationBasis::new(&k, mu, &big_k)?;
            let kd = MassShellMomentum::new(random_spatial(&mut rng, 3.0), m)?;
            let slash = g.slash(&kd.four_vector());
            let id = Matrix4c::identity();
            let two_m = C64::new(2.0 * m, 0.0);
            let mut dirac = 0.0f64;
            for s in 1..=2 {
                dirac = dirac.max(dirac_spinor(&kd, s, SpinorKind::U)?.dirac_residual());
                dirac = dirac.max(dirac_spinor(&kd, s, SpinorKind::V)?.dirac_residual());
            }
            let su = mat_diff(&spin_sum(&kd, SpinorKind::U)?, &((slash + id * C64::new(m, 0.0)) / two_m));
            let sv = mat_diff(&spin_sum(&kd, SpinorKind::V)?, &((slash - id * C64::new(m, 0.0)) / two_m));
            Ok([
                b.spacetime.completeness_residual(),
                b.spacetime.orthonormality_residual(),
                b.spacetime.transversality_residual(),
                b.inner.completeness_residual(),
                b.inner.orthonormality_residual(),
                b.inner.transversality_residual(),
                dirac,
                su,
                sv,
            ])
        })();
        match step {
            Ok(r) => {
                for (w, x) in worst.iter_mut().zip(r) {
                    *w = w.max(x);
                }
            }
            Err(e) => errors.push(format!("sample {i}: {e}")),
        }
    }
    let names = [
        ("kinematics.spacetime_completeness", "sum_g eps eps = -eta + k k/mu^2"),
        ("kinematics.spacetime_orthonormality", "eps(g).eps(g') = eta^{gg'}"),
        ("kinematics.spacetime_transversality", "k.eps(g) = 0 for g = 1..3"),
        ("kinematics.inner_completeness", "sum_G E E = -eta + K K/K^2"),
        ("kinematics.inner_orthonormality", "E(G).E(G') = -delta"),
        ("kinematics.inner_transversality", "K.E(G) = 0"),
        ("kinematics.dirac_equation", "(kslash - m) u = 0, (kslash + m) v = 0"),
        ("kinematics.spin_sum_u", "sum_s u ubar = (kslash + m)/2m"),
        ("kinematics.spin_sum_v", "sum_s v vbar = (kslash - m)/2m"),
    ];
    let mut out: Vec<Case> = names
        .iter()
        .zip(worst)
        .map(|((n, d), w)| Case::numeric(*n, format!("{d}, worst of {SAMPLES} samples"), w, tol))
        .collect();
    out.push(Case::numeric("kinematics.clifford", "{g^m, g^n} = 2 eta^{mn}", g.clifford_residual(), tol));
    out.push(Case::check("kinematics.samples", errors.join("; "), errors.is_empty()));
    out
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-6i64..=6).into(), rng.random_range(1i64..=3).into())
}

fn random_quantum(rng: &mut ChaCha8Rng) -> LadderOperator {
    let k: [Rational; 3] = [0; 3].map(|_| random_rational(rng));
    let big_k = if rng.random_bool(0.3) {
        InnerLabel::OnShell(MomentumLabel::Bound(k.clone()))
    } else {
        let s: [Rational; 3] = [0; 3].map(|_| random_rational(rng));
        let t = s.iter().fold(Rational::zero(), |acc, x| acc + x.abs()) + Rational::new(rng.random_range(0i64..4).into(), 2.into());
        InnerLabel::Bound([t, s[0].clone(), s[1].clone(), s[2].clone()])
    };
    let field = [Field::Scalar, Field::DiracParticle, Field::DiracAntiparticle, Field::Gauge][rng.random_range(0..4)];
    let discrete = match field {
        Field::Scalar => Discrete::None,
        Field::Gauge => Discrete::Pol(rng.random_range(0u8..4).into(), rng.random_range(1u8..4).into()),
        _ => Discrete::Spin(rng.random_range(1u8..3).into()),
    };
    LadderOperator::new(field, false, MomentumLabel::Bound(k), big_k, discrete).expect("valid labels").dag()
}

/// Test-side eigenvalue of one quantum: contravariant on-shell `k` or the
/// inner label, lowered, times the metric weight of its polarizations.
fn single_quantum_oracle(op: &LadderOperator, which: Momentum, cfg: &RunConfig) -> ExactFourVector {
    let MomentumLabel::Bound(k) = op.momentum() else { unreachable!() };
    let m = cfg.masses.of(op.field());
    let v = match (which, op.inner()) {
        (Momentum::Inertial, _) | (Momentum::Inner, InnerLabel::OnShell(_)) => ExactFourVector::on_shell(k, m),
        (Momentum::Inner, InnerLabel::Bound(v)) => ExactFourVector::from_rationals(v),
        _ => unreachable!(),
    };
    let w = match op.discrete() {
        Discrete::Pol(g, big_g) => {
            let e = |x: u8| if x == 0 { 1 } else { -1 };
            e(g.value().unwrap()) * e(big_g.value().unwrap())
        }
        _ => 1,
    };
    v.lowered().scale(&q(w))
}

fn fock(cfg: &RunConfig) -> Vec<Case> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);

    // norm signs against the sign of the overlap computed from the algebra
    let mut table = Vec::new();
    for g in 0..4u8 {
        for big_g in 1..4u8 {
            table.push((format!("fock.norm_sign.A_g{g}_G{big_g}"), format!("A'([1,0,0],g={g};[2,0,0,0],G={big_g})")));
        }
    }
    table.push(("fock.norm_sign.a".into(), "a'([1,0,0];[2,0,0,0])".into()));
    table.push(("fock.norm_sign.b".into(), "b'([1,0,0],s=1;[2,0,0,0])".into()));
    table.push(("fock.norm_sign.d".into(), "d'([1,0,0],s=2;[2,0,0,0])".into()));
    table.push(("fock.norm_sign.vacuum".into(), "1".into()));
    for (name, src) in table {
        let case = (|| -> Result<Case> {
            let s = FockState::from_expr(&parse_expression(&src)?)?;
            let (_, _, ket) = s.kets().into_iter().next().expect("one ket");
            let got = ket.norm_sign()?.value();
            let overlap = inner_product(&s, &s);
            let (_, c) = overlap.terms().next().expect("non-zero norm");
            let want = if c.re.is_positive() { 1 } else { -1 };
            Ok(Case::exact(name.as_str(), format!("sign of <psi|psi> for {src} |0>"), got, want))
        })();
        out.push(case.unwrap_or_else(|e| Case::error(name.as_str(), e)));
    }

    let mut mismatches = Vec::new();
    let mut conservation = Vec::new();
    for i in 0..SAMPLES {
        let n = rng.random_range(1..=4);
        let ops: Vec<LadderOperator> = (0..n).map(|_| random_quantum(&mut rng)).collect();
        let Ok(state) = FockState::product(ops.clone()) else { continue };
        for (_, _, ket) in state.kets() {
            for which in [Momentum::Inertial, Momentum::Inner] {
                let want = ket
                    .quanta()
                    .iter()
                    .fold(ExactFourVector::zero(), |acc, op| &acc + &single_quantum_oracle(op, which, cfg));
                match ket.eigenvalue(which, &cfg.masses) {
                    Ok(got) if got == want => {}
                    Ok(got) => mismatches.push(format!("sample {i} {which:?}: {got:?} vs {want:?}")),
                    Err(e) => mismatches.push(format!("sample {i}: {e}")),
                }
            }
        }
        match conservation_check(&state, &cfg.masses) {
            Ok(None) => {}
            Ok(Some(m)) => conservation.push(m),
            Err(e) => conservation.push(e.to_string()),
        }
    }
    out.push(Case::check(
        "fock.eigen_additivity",
        if mismatches.is_empty() {
            format!("p and P eigenvalues add over quanta on {SAMPLES} random kets")
        } else {
            mismatches.join("; ")
        },
        mismatches.is_empty(),
    ));
    out.push(Case::check(
        "fock.conservation",
        if conservation.is_empty() { "[H, p] = [H, P] = 0 on random kets".into() } else { conservation.join("; ") },
        conservation.is_empty(),
    ));

    let filtered = (|| -> Result<Case> {
        let s = FockState::from_expr(&parse_expression(
            "A'([1,0,0],g=0;[2,0,0,0],G=1) + A'([1,0,0],g=1;[2,0,0,0],G=2) + 2 * A'([0,1,0],g=3;[3,0,0,1],G=3)",
        )?)?;
        let f = physical_filter(&s)?;
        let ok = f.kets().len() == 2 && f.kets().iter().all(|(_, _, k)| k.norm_sign().map(|s| s.value()) == Ok(1));
        Ok(Case::check("fock.physical_filter", format!("{s} -> {f}"), ok))
    })();
    out.push(filtered.unwrap_or_else(|e| Case::error("fock.physical_filter", e)));
    out
}

fn gravlimit(cfg: &RunConfig) -> Result<Vec<Case>> {
    let reg = cfg.regularization()?;
    let ratio = cfg.volume_ratio();
    let r = crate::exact::fmt_rational(&ratio);
    let barred = |name: &str, fermionic: bool, x: &str, y: &str, want: String, reg: &RegularizationConfig| -> Case {
        let run = || -> Result<OperatorExpr> {
            let (a, b) = (op_of(x)?, op_of(y)?);
            let e = if fermionic {
                anticommutator(&bar(&a).expr(), &bar(&b).expr())
            } else {
                commutator(&bar(&a).expr(), &bar(&b).expr())
            };
            grav_limit_expr(&e, reg)
        };
        match run() {
            Ok(got) => Case::exact(name, format!("barred bracket of {x}, {y} with Vreg/Lambda^4 = {r}"), got, p(&want)),
            Err(e) => Case::error(name, e),
        }
    };
    let mut out = vec![
        barred(
            "gravlimit.scalar",
            false,
            "a(k;K)",
            "a'(h;H)",
            format!("{r} * 2 * omega(k) * twopi^3 * delta3(k,h)"),
            &reg,
        ),
        barred(
            "gravlimit.dirac_b",
            true,
            "b(k,s=s;K)",
            "b'(h,s=t;H)",
            format!("{r} * k0m(k) * kron(s,t) * twopi^3 * delta3(k,h)"),
            &reg,
        ),
        barred(
            "gravlimit.dirac_d",
            true,
            "d(k,s=s;K)",
            "d'(h,s=t;H)",
            format!("{r} * k0m(k) * kron(s,t) * twopi^3 * delta3(k,h)"),
            &reg,
        ),
        barred(
            "gravlimit.gauge",
            false,
            "A(k,g=f;K,G=F)",
            "A'(h,g=g;H,G=G)",
            format!("{r} * 2 * omegaA(k) * eta(f,g) * etaI(F,G) * Lambda^2 * twopi^3 * delta3(k,h)"),
            &reg,
        ),
    ];
    // matter results do not depend on Λ
    for (name, x, y, fermionic) in [
        ("gravlimit.scalar_lambda_free", "a(k;K)", "a'(h;H)", false),
        ("gravlimit.dirac_lambda_free", "b(k,s=s;K)", "b'(h,s=t;H)", true),
    ] {
        let run = || -> Result<(Vec<String>, Option<i32>)> {
            let (a, b) = (op_of(x)?, op_of(y)?);
            let mut seen = Vec::new();
            let mut power = None;
            for lambda in [0.5, 1.0, 3.0] {
                let reg = RegularizationConfig::new(lambda, ratio.clone())?;
                let e = if fermionic {
                    anticommutator(&bar(&a).expr(), &bar(&b).expr())
                } else {
                    commutator(&bar(&a).expr(), &bar(&b).expr())
                };
                let g = grav_limit_expr(&e, &reg)?;
                power = lambda_power(&g);
                seen.push(g.to_string());
            }
            Ok((seen, power))
        };
        out.push(match run() {
            Ok((seen, power)) => Case::check(
                name,
                format!("same result for Lambda in {{0.5, 1, 3}}, Lambda power {power:?}"),
                seen.windows(2).all(|w| w[0] == w[1]) && matches!(power, None | Some(0)),
            ),
            Err(e) => Case::error(name, e),
        });
    }
    let idem = || -> Result<Case> {
        let s = FockState::from_expr(&p("a'(k;K) * b'(h,s=1;H) + 2 * A'([1,0,0],g=1;[2,0,0,0],G=2)"))?;
        let once = project_state(&s)?;
        let twice = project_state(&once)?;
        Ok(Case::exact("gravlimit.projection_idempotent", format!("projection of {s}"), twice, once))
    };
    out.push(idem().unwrap_or_else(|e| Case::error("gravlimit.projection_idempotent", e)));
    Ok(out)
}

fn op_of(src: &str) -> Result<LadderOperator> {
    let e = parse_expression(src)?;
    let (t, _) = e.terms().next().ok_or_else(|| Error::Config(format!("{src} is zero")))?;
    Ok(t.ops[0].clone())
}

fn propagators(cfg: &RunConfig) -> Vec<Case> {
    let tol = cfg.tolerance;
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xfeed);

    let scalar = || -> Result<f64> {
        let spec = PropagatorSpec::new(FieldKind::Scalar, 1.0, cfg.i_epsilon)?;
        match propagator_eval(&spec, &FourVector::new(2.0, 0.0, 0.0, 0.0), None)? {
            PropagatorValue::Scalar(v) => Ok((v - C64::new(1.0 / 3.0, 0.0)).norm()),
            _ => unreachable!(),
        }
    };
    out.push(match scalar() {
        Ok(r) => Case::numeric("propagators.scalar_at_rest", "m = 1, k = (2,0,0,0): 1/3", r, tol.max(cfg.i_epsilon)),
        Err(e) => Case::error("propagators.scalar_at_rest", e),
    });

    let mut worst = 0.0f64;
    for _ in 0..SAMPLES {
        let k = timelike(&mut rng);
        if let Ok(pr) = inner_projector(&k) {
            for beta in 0..4 {
                let s: f64 = (0..4).map(|a| k.0[a] * pr[a][beta]).sum();
                worst = worst.max(s.abs());
            }
        }
    }
    out.push(Case::numeric("propagators.inner_transversality", format!("K^a P_a^b = 0 over {SAMPLES} random K"), worst, tol));

    let mut dirac = || -> Result<f64> {
        let m = to_f64(&cfg.masses.dirac);
        let mut worst = 0.0f64;
        let g = GammaAlgebra::dirac();
        for _ in 0..SAMPLES {
            let k = MassShellMomentum::new(random_spatial(&mut rng, 3.0), m)?;
            let num = g.slash(&k.four_vector()) + Matrix4c::identity() * C64::new(m, 0.0);
            worst = worst.max(mat_diff(&num, &(spin_sum(&k, SpinorKind::U)? * C64::new(2.0 * m, 0.0))));
        }
        Ok(worst)
    };
    out.push(match dirac() {
        Ok(r) => Case::numeric("propagators.dirac_numerator", "kslash + m = 2m sum_s u ubar on shell", r, tol),
        Err(e) => Case::error("propagators.dirac_numerator", e),
    });

    out.push(Case::check(
        "propagators.pole_cancellation",
        "(k^2 - m^2) times the scalar kernel is exactly 1",
        PropagatorSpec::new(FieldKind::Scalar, 1.0, cfg.i_epsilon)
            .map(|s| s.kernel().times_inverse_propagator().is_one())
            .unwrap_or(false),
    ));

    let wcfg = WickConfig { masses: cfg.masses.clone(), ..WickConfig::default() };
    for kind in [FieldKind::Scalar, FieldKind::Dirac, FieldKind::Gauge] {
        let name = format!("propagators.wick_{}", kind.name());
        out.push(match check_two_point(kind, &wcfg) {
            Ok(c) => {
                let detail = if c.matches() {
                    "vev of the time-ordered product from the mode expansion".to_string()
                } else {
                    format!("mode expansion differs from the stated propagator: {}", c.differences.join("; "))
                };
                Case { detail, ..Case::exact(name, "", &c.wick, &c.printed) }
            }
            Err(e) => Case::error(name, e),
        });
    }
    out
}

fn scalar_leg(d: Direction, k: [i64; 3]) -> Leg {
    Leg::new(Field::Scalar, d, k.map(q))
}

fn lsz(cfg: &RunConfig) -> Result<Vec<Case>> {
    let reg = cfg.regularization()?;
    let recipe = cfg.lsz_recipe();
    let masses = &cfg.masses;
    let mut out = Vec::new();
    let reduce = |g: &GreenFunction| lsz_reduce(g, &recipe, &reg, masses);

    let two_point = [
        ("lsz.free_two_point_scalar", scalar_leg(Direction::In, [1, 2, 0]), scalar_leg(Direction::Out, [1, 2, 0])),
        (
            "lsz.free_two_point_dirac",
            Leg::new(Field::DiracParticle, Direction::In, [1, 0, 0].map(q)).with_spin(2),
            Leg::new(Field::DiracParticle, Direction::Out, [1, 0, 0].map(q)).with_spin(2),
        ),
        (
            "lsz.free_two_point_gauge",
            Leg::new(Field::Gauge, Direction::In, [0, 0, 1].map(q)).with_polarizations(1, 2),
            Leg::new(Field::Gauge, Direction::Out, [0, 0, 1].map(q)).with_polarizations(1, 2),
        ),
    ];
    for (name, a, b) in two_point {
        out.push(match reduce(&GreenFunction::new(vec![a, b])) {
            Ok(amp) => Case::exact(name, "in = out, normalized elastic part", &amp.normalized_elastic, "1"),
            Err(e) => Case::error(name, e),
        });
    }

    // four-point against overlaps of barred two-particle states
    for (name, k1, k2) in [("lsz.free_four_point_distinct", [1, 0, 0], [0, 1, 0]), ("lsz.free_four_point_equal", [1, 0, 0], [1, 0, 0])] {
        let g = GreenFunction::new(vec![
            scalar_leg(Direction::In, k1),
            scalar_leg(Direction::In, k2),
            scalar_leg(Direction::Out, k1),
            scalar_leg(Direction::Out, k2),
        ]);
        let run = || -> Result<Case> {
            let amp = reduce(&g)?;
            let op = |k: [i64; 3]| LadderOperator::scalar(k.map(q), InnerLabel::OnShell(MomentumLabel::Bound(k.map(q))));
            let state = FockState::from_expr(&(bar(&op(k1)?.dag()).expr() * bar(&op(k2)?.dag()).expr()))?;
            let oracle = grav_limit_expr(&inner_product(&state, &state), &reg)?;
            let ok = amp.connected == C64::zero();
            Ok(Case { detail: format!("elastic part by Wick pairing, connected part {}", amp.connected), ..Case::exact(name, "", &amp.elastic, &oracle) }
                .and(ok))
        };
        out.push(run().unwrap_or_else(|e| Case::error(name, e)));
    }

    let zero_vertex = GreenFunction::new(vec![
        scalar_leg(Direction::In, [1, 0, 0]),
        scalar_leg(Direction::In, [0, 1, 0]),
        scalar_leg(Direction::Out, [0, 0, 1]),
        scalar_leg(Direction::Out, [1, 1, 0]),
    ])
    .with_vertex(VertexRule::constant("zero", 4, C64::zero()));
    out.push(match reduce(&zero_vertex) {
        Ok(a) => Case::exact("lsz.zero_vertex", "all vertices vanish", a.connected, C64::zero()),
        Err(e) => Case::error("lsz.zero_vertex", e),
    });
    let off_shell = GreenFunction::new(vec![scalar_leg(Direction::In, [1, 0, 0]).with_energy(q(1))]);
    out.push(Case::check("lsz.off_shell_rejected", "energy 1 for |k| = 1, m = 1", matches!(reduce(&off_shell), Err(Error::Lsz(_)))));
    let bare = GreenFunction::new(vec![Leg::new(Field::DiracParticle, Direction::In, [1, 0, 0].map(q))]);
    out.push(Case::check("lsz.spinor_required", "Dirac leg without spin", matches!(reduce(&bare), Err(Error::Lsz(_)))));
    Ok(out)
}

fn unitarity(cfg: &RunConfig) -> Vec<Case> {
    let tol = cfg.tolerance;
    let mut out = Vec::new();
    let family = ToySMatrix::random_family(SAMPLES, cfg.seed);
    for (i, t) in family.iter().enumerate() {
        let r = toy_unitarity_check(t, tol);
        let residual = r.conclusion_residual.unwrap_or(f64::INFINITY);
        let mut c = Case::numeric(
            format!("unitarity.instance_{i:03}"),
            format!("|P S^dag S P - P|, dim {}", r.dim),
            residual,
            tol,
        );
        if !r.passed {
            c.detail = format!("{} ({})", c.detail, r.failures.join("; "));
            c.status = Status::Fail;
        }
        out.push(c);
    }
    let swap = toy_unitarity_check(&ToySMatrix::swap_counterexample(), tol);
    out.push(Case::check(
        "unitarity.precondition_reported",
        format!("swap of a physical and an unphysical state: {}", swap.failures.join("; ")),
        !swap.preconditions_hold && swap.conclusion_residual.is_none(),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let t = ToySMatrix::sectored(2, &mut rng);
    out.push(match vacuum_and_one_particle_checks(&t, tol) {
        Ok(r) => Case::check("unitarity.vacuum_one_particle", r.violations.join("; "), r.passed),
        Err(e) => Case::error("unitarity.vacuum_one_particle", e),
    });
    let mut phased = t.clone();
    phased.s *= C64::from_polar(1.0, 0.7);
    out.push(match vacuum_and_one_particle_checks(&phased, tol) {
        Ok(r) => Case::check(
            "unitarity.vacuum_phase",
            format!("phase {:.6} reported and removed", r.vacuum_phase),
            r.passed && (r.vacuum_phase - 0.7).abs() <= tol.max(1e-15),
        ),
        Err(e) => Case::error("unitarity.vacuum_phase", e),
    });
    let mut mixed = t.clone();
    let (a, b) = (1, t.basis.iter().position(|s| s.particles == 2).unwrap_or(1));
    mixed.s.swap_rows(a, b);
    out.push(match vacuum_and_one_particle_checks(&mixed, tol) {
        Ok(r) => Case::check("unitarity.one_particle_mixing", format!("{} violations reported", r.violations.len()), !r.passed),
        Err(e) => Case::error("unitarity.one_particle_mixing", e),
    });
    out
}
