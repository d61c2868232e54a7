use hillproj_cli::expr::{parse_with_params, BinOp, Expr, Func};
use proptest::prelude::*;

const CORPUS: [&str; 50] = [
    "0",
    "1",
    "-1",
    "pi^2",
    "t",
    "2 + 0.5*cos(2*pi*t)",
    "a + q*cos(2*pi*t)",
    "a - q*cos(2*pi*t)",
    "--t",
    "-(-t)",
    "-t^2",
    "(-t)^2",
    "2^3^2",
    "(2^3)^2",
    "2^-t",
    "2^(-t)",
    "1 - 2 - 3",
    "1 - (2 - 3)",
    "1 + (2 + 3)",
    "(1 + 2) + 3",
    "8/4/2",
    "8/(4/2)",
    "2*3*4",
    "2*(3*4)",
    "a*b/c",
    "a/(b*c)",
    "1.5e3*t",
    "2.5E-3 + t",
    ".25",
    "sin(t)",
    "cos(2*pi*t)^2",
    "tan(t/4)",
    "exp(-t)",
    "sinh(t) - cosh(t)",
    "tanh(2*t - 1)",
    "abs(sin(pi*t))",
    "sqrt(1 + t^2)",
    "sqrt(abs(cos(t)))",
    "a + b*cos(2*pi*t) + c*sin(4*pi*t)",
    "(a + b)*(t - c)",
    "-(a + b)",
    "-a*b",
    "-(a*b)",
    "(-a)*b",
    "a^b^c",
    "(a^b)^c",
    "a - -b",
    "a*-b",
    "exp(sin(cos(t)))",
    "((((t))))",
];

#[test]
fn corpus_round_trips() {
    for text in CORPUS {
        let e = parse_with_params(text, &["a", "b", "c", "q"]).unwrap();
        let printed = e.to_string();
        let again = parse_with_params(&printed, &["a", "b", "c", "q"])
            .unwrap_or_else(|err| panic!("{text} -> {printed}: {err}"));
        assert_eq!(e, again, "{text} -> {printed}");
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..1000, 0u32..3).prop_map(|(m, e)| Expr::Number(m as f64 / 10f64.powi(e as i32))),
        Just(Expr::Pi),
        Just(Expr::Var),
        Just(Expr::Param("a".into())),
    ]
}

fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 40, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow)
        ];
        let func = prop_oneof![Just(Func::Sin), Just(Func::Exp), Just(Func::Sqrt), Just(Func::Tanh)];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, l, r)| Expr::Binary(o, Box::new(l), Box::new(r))),
            (func, inner).prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
        ]
    })
}

proptest! {
    #[test]
    fn printed_trees_reparse(e in tree()) {
        let printed = e.to_string();
        let again = parse_with_params(&printed, &["a"]).unwrap();
        prop_assert_eq!(e, again, "{}", printed);
    }
}
