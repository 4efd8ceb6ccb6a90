use minlen_core::deformation::energy_from_eps;
use minlen_core::expr::{BinOp, Func, NamedConst};
use minlen_core::{to_dimensionless, Builtin, DeformationProfile, Expr, PhysicalParams};
use proptest::prelude::*;

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0f64..1e6).prop_map(Expr::Const),
        Just(Expr::Var),
        Just(Expr::Named(NamedConst::Pi)),
        Just(Expr::Named(NamedConst::E)),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow),
        ];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::Binary(
                op,
                Box::new(a),
                Box::new(b)
            )),
            (prop::sample::select(Func::ALL.to_vec()), inner)
                .prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
        ]
    })
}

proptest! {
    #[test]
    fn printed_expressions_reparse_to_the_same_tree(e in expr_tree()) {
        let printed = e.to_string();
        let back = Expr::parse(&printed).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn alpha_scales_quadratically_in_kappa(
        kappa in -10.0f64..10.0,
        lambda in -10.0f64..10.0,
        c in 0.1f64..10.0,
        beta in 0.01f64..100.0,
    ) {
        let profile = DeformationProfile::builtin(Builtin::Kempf);
        let scale = minlen_core::DeformationScale::Beta(beta);
        let base = PhysicalParams::new(1.3, 0.7, kappa, lambda).unwrap().with_scale(scale);
        let a = to_dimensionless(&base, &profile).unwrap();
        let k = PhysicalParams::new(1.3, 0.7, c * kappa, lambda).unwrap().with_scale(scale);
        let l = PhysicalParams::new(1.3, 0.7, kappa, c * lambda).unwrap().with_scale(scale);
        let ak = to_dimensionless(&k, &profile).unwrap();
        let al = to_dimensionless(&l, &profile).unwrap();
        prop_assert!((ak.alpha() - c * c * a.alpha()).abs() <= 4.0 * f64::EPSILON * ak.alpha());
        prop_assert!((al.gamma() - c * a.gamma()).abs() <= 4.0 * f64::EPSILON * al.gamma().abs());
        prop_assert_eq!(ak.gamma(), a.gamma());
    }

    #[test]
    fn energy_round_trip(eps in 1e-3f64..1e3, b in 1e-3f64..1e3, m in 1e-3f64..1e3) {
        let back = energy_from_eps(eps, b, m) * (-2.0 * m) / (b * b);
        prop_assert!((back - eps * eps).abs() <= 8.0 * f64::EPSILON * eps * eps);
    }
}
