use std::fs;

use ldcalc::gen::Gen;
use ldcalc::surface::{parse_item, print_item, print_signature, Item, SurfaceError, Workspace};
use ldcalc::syntax::Context;
use proptest::prelude::*;

fn reparse(g: &Gen, item: &Item) -> Item {
    let text = print_item(item).pretty();
    parse_item(&g.sig, &text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn terms_read_back(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let ty = g.ty(2, &[]);
        let t = g.term(&ty, 3);
        let ctx = g.context();
        match reparse(&g, &Item::Term(ctx.clone(), t.clone(), Some(ty.clone()))) {
            Item::Term(c, u, Some(b)) => {
                prop_assert_eq!(c, ctx);
                prop_assert_eq!(u, t);
                prop_assert_eq!(b, ty);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn formulas_read_back(seed in any::<u64>(), exists in any::<bool>()) {
        let mut g = Gen::new(seed);
        let f = g.quantified(3, exists, &[]);
        match reparse(&g, &Item::Formula(f.clone())) {
            Item::Formula(h) => prop_assert_eq!(h, f),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn derivations_read_back(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (goal, p) = g.checked_proof(4);
        let gamma = g.pool.clone();
        match reparse(&g, &Item::Proof(gamma.clone(), goal.clone(), p.clone())) {
            Item::Proof(h, b, q) => {
                prop_assert_eq!(h, gamma);
                prop_assert_eq!(b, goal);
                prop_assert_eq!(q.canonical(), p.canonical());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

#[test]
fn signature_reads_back() {
    let g = Gen::new(0);
    let text = print_signature(&g.sig).pretty().to_string();
    let ws = Workspace::parse(&text).unwrap();
    assert_eq!(ws.signature(), g.sig);
}

#[test]
fn fixture_files_print_to_a_fixed_point() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let ws = Workspace::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let once = ws.print();
        let twice = Workspace::parse(&once).unwrap().print();
        assert_eq!(once, twice, "{}", path.display());
        n += 1;
    }
    assert!(n >= 5);
}

fn error(text: &str) -> SurfaceError {
    Workspace::parse(text).unwrap_err()
}

#[test]
fn errors_carry_positions() {
    let sig = "(signature (rel a ()))\n";
    let e = error(&format!("{sig}(formula (and (atom a)))"));
    assert!(matches!(e, SurfaceError::Arity { pos, found: 1, .. } if pos.line == 2 && pos.col == 10), "{e}");
    let e = error(&format!("{sig}(formula (atom z))"));
    assert!(matches!(&e, SurfaceError::Unknown(pos, _, name) if pos.line == 2 && name == "z"), "{e}");
    let e = error(&format!("{sig}(term () (lvar y))"));
    assert!(e.to_string().starts_with("2:"), "{e}");
    let e = error("(formula (one)");
    assert!(matches!(e, SurfaceError::Read(_)), "{e}");
    assert!(e.to_string().contains("1:"), "{e}");
}

#[test]
fn empty_context_prints_as_empty_list() {
    let g = Gen::new(0);
    let item = Item::Term(Context::default(), ldcalc::syntax::Term::Star, None);
    assert!(matches!(reparse(&g, &item), Item::Term(c, _, None) if c.is_empty()));
}
