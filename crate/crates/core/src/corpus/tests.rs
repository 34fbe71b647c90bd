use super::*;
use crate::parser::parse_term_in;
use crate::rewriter::{convertible, normalize};
use crate::typechecker::{check_signature, Signature};
use crate::DEFAULT_FUEL;

fn sig(cfg: &TheoryConfig) -> Signature {
    let mut ds = build(cfg).unwrap();
    if cfg.cubical {
        ds.extend(build_examples());
    }
    check_signature(&ds, DEFAULT_FUEL).unwrap_or_else(|e| panic!("{cfg:?}: {e}"))
}

fn t(s: &str, free: &[&str]) -> Term {
    parse_term_in(s, free).unwrap()
}

#[test]
fn all_off_has_no_repletion() {
    let s = sig(&TheoryConfig::default());
    assert!(!s.contains("repletion"));
    assert!(!s.contains("T1"));
}

#[test]
fn repletion_computes() {
    let cfg = TheoryConfig {
        t3_repletion: true,
        ..TheoryConfig::default()
    };
    let s = sig(&cfg);
    let vars = ["A", "B", "e"];
    let lhs = t("c l0 (repletion l0 A B e)", &vars);
    let rules = s.rules();
    assert!(normalize(rules, &lhs, 1000)
        .unwrap()
        .alpha_eq(&Term::var("A")));
}

#[test]
fn t2_commutes_coercion_with_formers() {
    let on = TheoryConfig {
        t2_primitive_iso_as_rewrite: true,
        ..TheoryConfig::default()
    };
    let vars = ["A", "B"];
    let pairs = [
        ("c l0 (Sig l0 A B)", "xSig l0 (c l0 A) (clift l0 A B)"),
        ("c l0 (Pi l0 A B)", "xPi l0 (c l0 A) (clift l0 A B)"),
        ("c l0 (True l0)", "xTrue l0"),
    ];
    let with = sig(&on.with_cubical());
    let without = sig(&TheoryConfig::default().with_cubical());
    for (a, b) in pairs {
        let (a, b) = (t(a, &vars), t(b, &vars));
        assert!(convertible(with.rules(), &a, &b, 1000).unwrap());
        assert!(!convertible(without.rules(), &a, &b, 1000).unwrap());
    }
}

#[test]
fn sweep_checks() {
    let sweep = TheoryConfig::sweep();
    assert_eq!(sweep.len(), 48);
    for cfg in sweep {
        sig(&cfg);
    }
}

#[test]
fn cubical_needs_flag() {
    assert_eq!(
        build_cubical(&TheoryConfig::default()),
        Err(ConfigError::CubicalDisabled)
    );
}

#[test]
fn cubical_computes() {
    let s = sig(&TheoryConfig::default().with_cubical());
    let rules = s.rules();
    let cases = [
        (
            "app A u v (lam A f) e",
            "f e",
            &["A", "u", "v", "f", "e"][..],
        ),
        ("eq1 (Imax i j)", "Fmax (eq1 i) (eq1 j)", &["i", "j"][..]),
        ("isoDown l0 A (isoUp l0 A a)", "a", &["A", "a"][..]),
        ("isoUp l0 A (isoDown l0 A a)", "a", &["A", "a"][..]),
    ];
    for (a, b, vars) in cases {
        let n = normalize(rules, &t(a, vars), 1000).unwrap();
        assert!(n.alpha_eq(&t(b, vars)), "{a} gave {n}");
    }
    let fdiscr = s.type_of("Fdiscr").unwrap();
    assert!(fdiscr.alpha_eq(&t(
        "i : ceps I -> ceps (cEq F (Fmin (eq0 i) (eq1 i)) 0f)",
        &[]
    )));
    assert!(!rules.has_rules("faceType"));
}

#[test]
fn first_attempt_contents() {
    let ds = first_attempt_facetype();
    assert_eq!(ds.len(), 6);
    let rs = RuleSet::from_declarations(&ds).unwrap();
    assert!(rs.iter().all(|r| r.head.as_ref() == "faceType"));
    let fmax = t("faceType (Fmax a b)", &["a", "b"]);
    assert!(rs.iter().any(|r| r.lhs_term().alpha_eq(&fmax)));
    for cp in critical_pairs(&rs.to_vec()) {
        assert_eq!(joinable(&rs, &cp, 1000).unwrap(), Verdict::Holds);
    }
}

#[test]
fn filling_checks() {
    let s = sig(&TheoryConfig::default().with_cubical());
    let f = filling_example(&Level::named("l0"));
    s.check(&f.ctx, &f.term, &f.ty, DEFAULT_FUEL).unwrap();
    let (t1, _) = f.at(&Term::cst("1"));
    assert!(convertible(s.rules(), &t1, &f.composition(), DEFAULT_FUEL).unwrap());
}

#[test]
fn encodes_sigma_and_pair() {
    let l = Level::named("l");
    let sg = Ast::Sig(
        Layer::Internal,
        name("x"),
        alloc::boxed::Box::new(Ast::var("A")),
        alloc::boxed::Box::new(Ast::var("B")),
    );
    let e = encode(&sg, &l).unwrap();
    assert!(e.same_annotated(&t("Sig l A (x : eps l A => B)", &["A", "B"])));
    assert_eq!(encode(&Ast::var("x"), &l).unwrap(), Term::var("x"));
    let bad = Ast::Coerce(alloc::boxed::Box::new(Ast::Nat(Layer::External)));
    assert!(encode(&bad, &l).is_err());
}

#[test]
fn encodes_contexts() {
    assert!(encode_context(&[]).unwrap().is_empty());
    let l = Level::named("l");
    let ctx = encode_context(&entries([(
        "x",
        Ast::Nat(Layer::Internal),
        l.clone(),
        Layer::Internal,
    )]))
    .unwrap();
    assert_eq!(ctx.lookup("x").unwrap(), &t("eps l (Nat l)", &[]));
    let bad = entries([("x", Ast::Nat(Layer::Internal), l, Layer::External)]);
    assert!(encode_context(&bad).is_err());
}

use crate::term::name;
