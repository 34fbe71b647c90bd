use super::*;
use crate::parser::{parse_file, parse_file_located, parse_term, parse_term_in};
use crate::DEFAULT_FUEL;

const CORE: &str = include_str!("../../../../theories/00-2ltt-core.dk");

fn core_sig() -> Signature {
    check_signature(&parse_file(CORE).unwrap(), DEFAULT_FUEL).unwrap()
}

fn term(s: &str) -> Term {
    parse_term(s).unwrap()
}

#[test]
fn core_theory_checks() {
    let s = core_sig();
    assert!(s.contains("Nat"));
    assert!(s.rules().has_rules("eps"));
}

#[test]
fn infers_former_types() {
    let s = core_sig();
    let ctx = TypingContext::new().with("l", term("Lev"));
    let nat = parse_term_in("Nat l", &["l"]).unwrap();
    assert_eq!(
        s.infer(&ctx, &nat, DEFAULT_FUEL).unwrap(),
        parse_term_in("T l", &["l"]).unwrap()
    );
    let t = parse_term_in("t l", &["l"]).unwrap();
    assert_eq!(
        s.infer(&ctx, &t, DEFAULT_FUEL).unwrap(),
        parse_term_in("T (lsuc l)", &["l"]).unwrap()
    );
}

#[test]
fn pair_checks_against_unfolded_sigma() {
    let s = core_sig();
    let ctx = TypingContext::new()
        .with("l", term("Lev"))
        .with("A", parse_term_in("T l", &["l"]).unwrap())
        .with("B", parse_term_in("eps l A -> T l", &["l", "A"]).unwrap())
        .with("a", parse_term_in("eps l A", &["l", "A"]).unwrap())
        .with("b", parse_term_in("eps l (B a)", &["l", "B", "a"]).unwrap());
    let vars = ["l", "A", "B", "a", "b"];
    let p = parse_term_in("pair l A B a b", &vars).unwrap();
    let ty = parse_term_in("eps l (Sig l A B)", &vars).unwrap();
    s.check(&ctx, &p, &ty, DEFAULT_FUEL).unwrap();
    let bad = parse_term_in("eps l A", &vars).unwrap();
    let e = s.check(&ctx, &p, &bad, DEFAULT_FUEL).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Mismatch);
}

#[test]
fn lambda_checks_and_infers() {
    let s = core_sig();
    let ctx = TypingContext::new().with("l", term("Lev"));
    let id = parse_term_in("x : eps l (Nat l) => x", &["l"]).unwrap();
    let ty = s.infer(&ctx, &id, DEFAULT_FUEL).unwrap();
    assert_eq!(
        ty,
        parse_term_in("eps l (Nat l) -> eps l (Nat l)", &["l"]).unwrap()
    );
    let bare = parse_term("x => x").unwrap();
    s.check(&ctx, &bare, &ty, DEFAULT_FUEL).unwrap();
    assert_eq!(
        s.infer(&ctx, &bare, DEFAULT_FUEL).unwrap_err().kind,
        ErrorKind::CannotInfer
    );
}

#[test]
fn error_kinds() {
    let s = core_sig();
    let ctx = TypingContext::new();
    let e = s.infer(&ctx, &term("nope"), DEFAULT_FUEL).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Unbound);
    let e = s.infer(&ctx, &term("Lev Lev"), DEFAULT_FUEL).unwrap_err();
    assert_eq!(e.kind, ErrorKind::NotAFunction);
    let e = s.infer(&ctx, &term("lsuc Lev"), DEFAULT_FUEL).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Mismatch);
    assert_eq!(e.expected, Some(term("Lev")));
    assert_eq!(e.actual, Some(Term::typ()));
    let e = s.infer(&ctx, &Term::kind(), DEFAULT_FUEL).unwrap_err();
    assert_eq!(e.kind, ErrorKind::SortError);
    let e = s
        .infer(&ctx, &term("x : Lev => Type"), DEFAULT_FUEL)
        .unwrap_err();
    assert_eq!(e.kind, ErrorKind::SortError);
}

#[test]
fn declarations_extend_functionally() {
    let empty = check_signature(&[], 100).unwrap();
    assert!(empty.is_empty());
    let lev = &parse_file("Lev : Type.").unwrap()[0];
    let s = empty.check_declaration(lev, 100).unwrap();
    assert!(empty.is_empty());
    assert_eq!(s.lookup("Lev").unwrap().index, 0);
    assert_eq!(
        s.check_declaration(lev, 100).unwrap_err().kind,
        ErrorKind::Redeclaration
    );
    let x = &parse_file("x : Undeclared.").unwrap()[0];
    assert_eq!(
        s.check_declaration(x, 100).unwrap_err().kind,
        ErrorKind::Unbound
    );
}

#[test]
fn redeclaration_is_rejected() {
    let e = check_signature(&parse_file("A : Type. A : Type.").unwrap(), 100).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Redeclaration);
    assert_eq!(e.decl_index, Some(1));
}

#[test]
fn static_heads_are_not_definable() {
    let s = check_signature(&parse_file("A : Type. a : A. b : A.").unwrap(), 100).unwrap();
    let d = &parse_file("[] a --> b.");
    // parsed on its own, so only the checker knows `a` is static
    assert!(d.is_ok());
    let e = s
        .check_declaration(&d.as_ref().unwrap()[0], 100)
        .unwrap_err();
    assert_eq!(e.kind, ErrorKind::NotDefinable);
}

#[test]
fn ill_typed_interval_rule() {
    let src = "I : Type. F : Type. def sym : I -> I. def Fmax : F -> F -> F.\n\
               [i] sym i --> Fmax i i.";
    let ds = parse_file_located(src, Some("bad.dk")).unwrap();
    let e = check_signature_located(&ds, 1000).unwrap_err();
    assert_eq!(e.kind, ErrorKind::RuleIllTyped);
    assert_eq!(e.decl_index, Some(4));
    let shown = alloc::format!("{e}");
    assert!(
        shown.starts_with("bad.dk:2:1: [rule-ill-typed] expected "),
        "{shown}"
    );
}

#[test]
fn non_linear_rule_types_by_conversion() {
    let s = core_sig();
    assert!(s.rules().iter().any(|r| r.head.as_ref() == "J"));
    let bad = parse_file("[i, A, x, P, d] J i A x P d x (refl i A x) --> x.").unwrap();
    let e = s.check_declaration(&bad[0], DEFAULT_FUEL).unwrap_err();
    assert_eq!(e.kind, ErrorKind::RuleIllTyped);
}

#[test]
fn mutated_core_is_rejected() {
    // changing the type of the first projection's reduct breaks its rule
    let mutated = CORE.replace(
        "[i,A,B,a,b] p1 i A B (pair i A B a b) --> a.",
        "[i,A,B,a,b] p1 i A B (pair i A B a b) --> b.",
    );
    assert_ne!(mutated, CORE);
    let e = check_signature(&parse_file(&mutated).unwrap(), DEFAULT_FUEL).unwrap_err();
    assert_eq!(e.kind, ErrorKind::RuleIllTyped);
}

#[test]
fn definition_adds_unfold_rule() {
    let s = core_sig();
    let info = s.lookup("tSig").unwrap();
    assert_eq!(info.staticity, Staticity::Definable);
    assert!(s.rules().get("tSig/def").is_some());
}

#[test]
fn fuel_is_reported() {
    let src = "A : Type. def loop : A. [] loop --> loop. P : A -> Type. p : P loop. a : A.\n\
               def q : P loop := p.";
    let ds = parse_file(src).unwrap();
    // `p` has type `P loop` syntactically, so conversion succeeds before unfolding
    let s = check_signature(&ds, 50).unwrap();
    let e = s
        .check(&TypingContext::new(), &term("p"), &term("P a"), 50)
        .unwrap_err();
    assert_eq!(e.kind, ErrorKind::Fuel);
}
