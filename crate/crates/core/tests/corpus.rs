use morgandk_core::corpus::{
    build, build_examples, filling_example, judgments, Level, TheoryConfig, ALL_FILES,
};
use morgandk_core::parser::{parse_file, print_declarations, Declaration};
use morgandk_core::rewriter::{convertible, normalize};
use morgandk_core::typechecker::{check_signature, ErrorKind, Signature};
use morgandk_core::{Term, TypingContext, DEFAULT_FUEL};
use proptest::prelude::*;

fn full(cfg: &TheoryConfig) -> (Vec<Declaration>, Signature) {
    let mut ds = build(cfg).unwrap();
    if cfg.cubical {
        ds.extend(build_examples());
    }
    let sig = check_signature(&ds, DEFAULT_FUEL).unwrap();
    (ds, sig)
}

fn configs() -> Vec<TheoryConfig> {
    let mut cs = TheoryConfig::sweep();
    cs.push(TheoryConfig::default().with_cubical());
    let mut all = TheoryConfig::sweep().pop().unwrap();
    all.cubical = true;
    cs.push(all);
    cs
}

#[test]
fn every_file_round_trips() {
    for file in ALL_FILES {
        let ds = file.declarations();
        let printed = print_declarations(&ds);
        let again = parse_file(&printed).unwrap_or_else(|e| panic!("{}: {e}", file.path));
        assert_eq!(ds.len(), again.len(), "{}", file.path);
        for (a, b) in ds.iter().zip(&again) {
            assert_eq!(a, b, "{}", file.path);
        }
        assert_eq!(print_declarations(&again), printed, "{}", file.path);
    }
}

#[test]
fn definitions_keep_their_type_under_normalization() {
    let ctx = TypingContext::new();
    let mut checked = 0;
    for cfg in configs() {
        let (ds, sig) = full(&cfg);
        for d in &ds {
            let Declaration::Definition { name, ty, body } = d else {
                continue;
            };
            let ty = match ty {
                Some(ty) => ty.clone(),
                None => sig.infer(&ctx, body, DEFAULT_FUEL).unwrap(),
            };
            let inferred = sig.infer(&ctx, body, DEFAULT_FUEL);
            if let Ok(inf) = inferred {
                assert!(
                    convertible(sig.rules(), &inf, &ty, DEFAULT_FUEL).unwrap(),
                    "{name}: inferred {inf}, declared {ty}"
                );
            }
            let n = normalize(sig.rules(), body, DEFAULT_FUEL).unwrap();
            sig.check(&ctx, &n, &ty, DEFAULT_FUEL)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn declared_types_keep_their_sort_under_normalization() {
    let ctx = TypingContext::new();
    for cfg in [TheoryConfig::default(), configs().pop().unwrap()] {
        let (_, sig) = full(&cfg);
        for (c, info) in sig.constants() {
            let sort = sig.infer(&ctx, &info.ty, DEFAULT_FUEL).unwrap();
            let n = normalize(sig.rules(), &info.ty, DEFAULT_FUEL).unwrap();
            sig.check(&ctx, &n, &sort, DEFAULT_FUEL)
                .unwrap_or_else(|e| panic!("{c}: {e}"));
        }
    }
}

#[test]
fn judgments_check_in_every_configuration() {
    let js = judgments();
    assert!(js.len() >= 10);
    for cfg in configs() {
        let (_, sig) = full(&cfg);
        for j in &js {
            let e = j.encode().unwrap();
            sig.check(&e.ctx, &e.term, &e.ty, DEFAULT_FUEL)
                .unwrap_or_else(|err| panic!("{}: {err}", j.name));
        }
    }
}

#[test]
fn filling_keeps_its_type_under_normalization() {
    let (_, sig) = full(&TheoryConfig::default().with_cubical());
    let ex = filling_example(&Level::named("l0"));
    let n = normalize(sig.rules(), &ex.term, DEFAULT_FUEL).unwrap();
    sig.check(&ex.ctx, &n, &ex.ty, DEFAULT_FUEL).unwrap();
}

fn shuffled(ds: &[Declaration], k: usize, seed: u64) -> Vec<Declaration> {
    let mut tail = ds[k..].to_vec();
    let mut s = seed | 1;
    for i in (1..tail.len()).rev() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        tail.swap(i, (s % (i as u64 + 1)) as usize);
    }
    let mut out = ds[..k].to_vec();
    out.extend(tail);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn errors_never_land_inside_a_checked_prefix(k in 0usize..400, seed in any::<u64>()) {
        let ds = build(&TheoryConfig::default().with_cubical()).unwrap();
        let k = k % ds.len();
        let out = shuffled(&ds, k, seed);
        if let Err(e) = check_signature(&out, DEFAULT_FUEL) {
            let at = e.decl_index.unwrap();
            prop_assert!(at >= k, "error at {} inside prefix {}: {}", at, k, e);
        }
    }

    #[test]
    fn appending_an_ill_typed_declaration_fails_there(k in 0usize..400) {
        let ds = build(&TheoryConfig::default()).unwrap();
        let k = k % (ds.len() + 1);
        let mut out = ds[..k].to_vec();
        out.push(Declaration::StaticConst {
            name: "junk".into(),
            ty: Term::app(Term::cst("Undeclared"), Term::cst("Undeclared")),
        });
        let e = check_signature(&out, DEFAULT_FUEL).unwrap_err();
        prop_assert_eq!(e.decl_index, Some(k));
        prop_assert_eq!(e.kind, ErrorKind::Unbound);
    }
}
