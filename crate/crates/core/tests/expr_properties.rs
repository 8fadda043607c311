use proptest::prelude::*;

use topokin_core::expr::{eval_scalar_jet, parse_expression, BinOp, Constant, Expr, Func};

fn literal() -> impl Strategy<Value = f64> {
    prop_oneof![
        (1u32..10).prop_map(f64::from),
        (1u32..1000).prop_map(|k| f64::from(k) / 100.0),
        Just(1e-7),
        Just(2.5e10),
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        literal().prop_map(Expr::Num),
        Just(Expr::Var),
        Just(Expr::Const(Constant::Pi)),
        Just(Expr::Const(Constant::E)),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div),
                    Just(BinOp::Pow)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (proptest::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, a)| Expr::call(f, a)),
        ]
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        prop_assert!(e.depth() <= 5);
        let printed = e.to_string();
        let back = parse_expression(&printed).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn unbalanced_parentheses_are_rejected(e in arb_expr(), extra_open in any::<bool>(), at in any::<prop::sample::Index>()) {
        let mut s = format!("({e})");
        if extra_open {
            let pos = at.index(s.len() + 1);
            // only insert at a char boundary; the canonical form is ASCII
            s.insert(pos, '(');
        } else {
            let closers: Vec<usize> = s.match_indices(')').map(|(i, _)| i).collect();
            s.remove(closers[at.index(closers.len())]);
        }
        let err = parse_expression(&s).unwrap_err();
        prop_assert!(err.offset <= s.len(), "{} for {}", err, s);
    }

    #[test]
    fn jets_match_finite_differences(e in arb_expr(), t in -2.0f64..2.0) {
        let h = 1e-5;
        let (Ok(lo), Ok(mid), Ok(hi)) = (eval_scalar_jet(&e, t - h), eval_scalar_jet(&e, t), eval_scalar_jet(&e, t + h)) else {
            return Ok(());
        };
        let tame = [lo, mid, hi].iter().all(|j| j.as_array().iter().all(|c| c.abs() < 1e4));
        prop_assume!(tame);
        let fd1 = (hi.c0 - lo.c0) / (2.0 * h);
        let fd2 = (hi.c1 - lo.c1) / (2.0 * h);
        let fd3 = (hi.c2 - lo.c2) / (2.0 * h);
        prop_assert!((fd1 - mid.c1).abs() <= 1e-5 * mid.c1.abs().max(1.0), "{}: {} vs {}", e, mid.c1, fd1);
        prop_assert!((fd2 - mid.c2).abs() <= 1e-5 * mid.c2.abs().max(1.0), "{}: {} vs {}", e, mid.c2, fd2);
        prop_assert!((fd3 - mid.c3).abs() <= 1e-5 * mid.c3.abs().max(1.0), "{}: {} vs {}", e, mid.c3, fd3);
    }

    #[test]
    fn pythagorean_identity(t in -50.0f64..50.0) {
        let e = parse_expression("cos(t)^2 + sin(t)^2").unwrap();
        let j = eval_scalar_jet(&e, t).unwrap();
        prop_assert!((j.c0 - 1.0).abs() <= 1e-12);
        prop_assert!(j.c1.abs() <= 1e-10);
    }
}
