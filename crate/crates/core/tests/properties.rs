//! Randomized algebraic properties over small symbol pools, so contractions
//! and cancellations actually occur.

use num_rational::BigRational;
use proptest::prelude::*;

use innerfield::cli::parse_expression;
use innerfield::exact::{q, Scalar};
use innerfield::fock::{physical_filter, FieldMasses, FockState, Momentum};
use innerfield::opalg::{
    commutator, normal_order, reduce_to_normal_form, vev, Disc, Discrete, Field, InnerLabel, LadderOperator,
    MomentumLabel, OperatorExpr,
};

const MOMENTA: [&str; 3] = ["k", "h", "p"];
const INNER: [&str; 2] = ["K", "H"];
const SPINS: [&str; 2] = ["s", "t"];

fn symbolic_op(field: usize, dagger: bool, k: usize, big_k: usize, d: usize) -> LadderOperator {
    let field = [Field::Scalar, Field::DiracParticle, Field::DiracAntiparticle, Field::Gauge][field];
    let discrete = match field {
        Field::Scalar => Discrete::None,
        Field::Gauge => Discrete::Pol(Disc::sym(["g", "f"][d]), Disc::sym(["G", "F"][d])),
        _ => Discrete::Spin(Disc::sym(SPINS[d])),
    };
    let op = LadderOperator::new(field, false, MomentumLabel::sym(MOMENTA[k]), InnerLabel::sym(INNER[big_k]), discrete)
        .unwrap();
    if dagger {
        op.dag()
    } else {
        op
    }
}

fn op_strategy(fields: std::ops::Range<usize>) -> impl Strategy<Value = LadderOperator> {
    (fields, any::<bool>(), 0..3usize, 0..2usize, 0..2usize).prop_map(|(f, dag, k, big_k, d)| symbolic_op(f, dag, k, big_k, d))
}

fn coefficient() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3, -2i64..=2)
        .prop_map(|(n, d, im)| Scalar::new(BigRational::new(n.into(), d.into()), q(im)))
}

fn expr_strategy() -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec((coefficient(), prop::collection::vec(op_strategy(0..4), 0..4)), 1..4).prop_map(|terms| {
        terms.into_iter().fold(OperatorExpr::zero(), |acc, (c, ops)| acc + OperatorExpr::ops(ops).scale(&c))
    })
}

fn creator(field: usize, k: [i64; 3], big_k: [i64; 4], g: u8, big_g: u8, s: u8) -> LadderOperator {
    let k = k.map(q);
    let big_k = big_k.map(q);
    match field {
        0 => LadderOperator::scalar(k, big_k),
        1 => LadderOperator::dirac_b(k, s, big_k),
        2 => LadderOperator::dirac_d(k, s, big_k),
        _ => LadderOperator::gauge(k, g, big_k, big_g),
    }
    .unwrap()
    .dag()
}

fn bound_creator() -> impl Strategy<Value = LadderOperator> {
    (0..4usize, prop::array::uniform3(-2i64..=2), prop::array::uniform3(-2i64..=2), 0u8..4, 1u8..4, 1u8..=2).prop_map(
        |(f, k, ks, g, big_g, s)| {
            let t = ks.iter().map(|x| x.abs()).sum::<i64>() + 1;
            creator(f, k, [t, ks[0], ks[1], ks[2]], g, big_g, s)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_expressions_parse_back(e in expr_strategy()) {
        let printed = e.to_string();
        let back = parse_expression(&printed).unwrap();
        prop_assert_eq!(&back, &e, "{}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_is_idempotent(e in expr_strategy()) {
        let once = reduce_to_normal_form(&e);
        prop_assert_eq!(reduce_to_normal_form(&once), once);
    }

    #[test]
    fn normal_ordered_products_have_no_vev(e in expr_strategy()) {
        let ordered = normal_order(&e);
        let c_part = e.terms().filter(|(t, _)| t.ops.is_empty()).fold(OperatorExpr::zero(), |acc, (t, c)| {
            acc + OperatorExpr::atoms(t.atoms.clone()).scale(c)
        });
        prop_assert_eq!(vev(&ordered), vev(&c_part));
    }

    #[test]
    fn vev_survives_reordering(e in expr_strategy()) {
        prop_assert_eq!(vev(&reduce_to_normal_form(&e)), vev(&e));
    }

    #[test]
    fn jacobi_identity(x in op_strategy(0..1), y in op_strategy(3..4), z in op_strategy(0..1)) {
        let (x, y, z) = (OperatorExpr::op(x), OperatorExpr::op(y), OperatorExpr::op(z));
        let sum = commutator(&x, &commutator(&y, &z))
            + commutator(&y, &commutator(&z, &x))
            + commutator(&z, &commutator(&x, &y));
        prop_assert!(reduce_to_normal_form(&sum).is_zero());
    }

    #[test]
    fn adjoint_is_an_involution(e in expr_strategy()) {
        prop_assert_eq!(e.adjoint().adjoint(), e);
    }

    #[test]
    fn eigenvalues_add_under_creation(ops in prop::collection::vec(bound_creator(), 1..5), extra in bound_creator()) {
        let masses = FieldMasses::default();
        let base = FockState::product(ops.clone()).unwrap();
        let mut more = ops.clone();
        more.insert(0, extra.clone());
        let grown = FockState::product(more).unwrap();
        let one = FockState::product(vec![extra]).unwrap();
        // Pauli exclusion may annihilate the grown state.
        if let (Some((_, _, a)), Some((_, _, b)), Some((_, _, c))) =
            (base.kets().into_iter().next(), grown.kets().into_iter().next(), one.kets().into_iter().next())
        {
            for which in [Momentum::Inertial, Momentum::Inner] {
                let sum = &a.eigenvalue(which, &masses).unwrap() + &c.eigenvalue(which, &masses).unwrap();
                prop_assert_eq!(b.eigenvalue(which, &masses).unwrap(), sum);
            }
        }
    }

    #[test]
    fn physical_filter_keeps_positive_norms(ops in prop::collection::vec(bound_creator(), 0..4)) {
        let s = FockState::product(ops).unwrap();
        let f = physical_filter(&s).unwrap();
        for (_, _, ket) in f.kets() {
            prop_assert_eq!(ket.norm_sign().unwrap().value(), 1);
        }
        let again = physical_filter(&f).unwrap();
        prop_assert_eq!(again.expr(), f.expr());
    }
}
