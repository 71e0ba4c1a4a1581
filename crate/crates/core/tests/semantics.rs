mod common;

use ldcalc::equational::{Theory};
use ldcalc::gen::{standard_signature, Gen};
use ldcalc::semantics::{
    check_ld, demanded_fragment, eval_eq, fixtures, interpret, is_model, logical_consequence, tuple, Fragment,
    TermUniverse,
};
use ldcalc::syntax::{Context, EqualityInContext, Formula, LTerm, Sym, Term, TermInContext};

/// The diamond is the Boolean algebra of subsets of {L, R}: `a = {L}`, `b = {R}`.
fn boolean_value(f: &Formula) -> u8 {
    match f {
        Formula::One => 0b11,
        Formula::Zero => 0,
        Formula::Atom(r, _) => match r.as_str() {
            "b" | "q" => 0b10,
            _ => 0b01,
        },
        Formula::Prod(a, b) => boolean_value(a) & boolean_value(b),
        Formula::Sum(a, b) => boolean_value(a) | boolean_value(b),
        Formula::Arrow(a, b) => (!boolean_value(a) & 0b11) | boolean_value(b),
        // The universe holds the single constant c.
        Formula::Forall(..) | Formula::Exists(..) => boolean_value(&f.instantiate(&LTerm::constant("c", "s")).unwrap()),
    }
}

fn name(v: u8) -> &'static str {
    ["0", "a", "b", "1"][v as usize]
}

fn random_fragment(seed: u64, n: usize, u: &TermUniverse) -> Fragment {
    let mut g = Gen::new(seed);
    Fragment::closure((0..n).map(|_| g.ty(2, &[])), u)
}

#[test]
fn diamond_values_match_the_boolean_oracle() {
    let sig = standard_signature();
    let u = fixtures::constants_universe(&sig);
    let frag = random_fragment(8, 60, &u);
    let s = fixtures::diamond(sig, u.clone(), &frag, &fixtures::standard_atoms(&u)).unwrap();
    for f in frag.iter() {
        assert_eq!(s.obj_name(s.obj(f).unwrap()), name(boolean_value(f)), "{f}");
    }
    assert!(check_ld(&s).unwrap().all_pass());
}

#[test]
fn m3_fails_distributivity_with_a_counterexample() {
    let sig = standard_signature();
    let u = fixtures::constants_universe(&sig);
    let frag = random_fragment(2, 20, &u);
    let s = fixtures::m3(sig, u.clone(), &frag, &fixtures::standard_atoms(&u)).unwrap();
    let r = check_ld(&s).unwrap();
    assert!(r.passes(&[1, 2]));
    let why = r.condition(4).to_string();
    assert!(why.contains("A = ") && why.contains("B = ") && why.contains("C = "), "{why}");
}

#[test]
fn fixtures_satisfy_generated_equalities() {
    let sig = standard_signature();
    let u = fixtures::constants_universe(&sig);
    let corpus = common::schema_corpus(17, 5);
    let tics: Vec<TermInContext> = corpus
        .iter()
        .flat_map(|i| {
            let e = i.conclusion();
            [
                TermInContext::new(e.ctx.clone(), e.lhs.clone(), e.ty.clone()),
                TermInContext::new(e.ctx.clone(), e.rhs.clone(), e.ty.clone()),
            ]
        })
        .collect();
    let frag = demanded_fragment(&sig, &u, &tics).unwrap();
    let models = [
        fixtures::trivial(sig.clone(), u.clone()),
        fixtures::diamond(sig.clone(), u.clone(), &frag, &fixtures::standard_atoms(&u)).unwrap(),
    ];
    for s in &models {
        for inst in &corpus {
            assert!(eval_eq(inst.conclusion(), s).unwrap(), "{}", inst.rule().tag());
        }
    }
}

#[test]
fn finite_sets_separate_the_projections() {
    let sig = standard_signature();
    let u = fixtures::constants_universe(&sig);
    let a = Formula::prop("a");
    let s = fixtures::finite_sets(sig, u, &a);
    assert!(!s.cat.is_thin());
    let ctx = Context::from_entries(vec![(Sym::new("x"), a.clone()), (Sym::new("y"), a.clone())]).unwrap();
    let x = Term::var("x", a.clone());
    let y = Term::var("y", a.clone());
    assert!(!eval_eq(&EqualityInContext::new(ctx.clone(), x.clone(), y.clone(), a.clone()), &s).unwrap());
    let swapped = Term::fst(Term::pair(y.clone(), x.clone()));
    assert!(eval_eq(&EqualityInContext::new(ctx, y, swapped, a.clone()), &s).unwrap());
    assert!(!check_ld(&s).unwrap().all_pass());
}

#[test]
fn substitution_lemma_in_finite_sets() {
    let sig = standard_signature();
    let u = fixtures::constants_universe(&sig);
    let a = Formula::prop("a");
    let aa = Formula::prod(a.clone(), a.clone());
    let s = fixtures::finite_sets(sig, u, &a);
    let ctx = Context::from_entries(vec![(Sym::new("x"), a.clone()), (Sym::new("y"), a.clone())]).unwrap();
    let (atoms, pairs) = common::product_terms(2);
    let x = Sym::new("x");
    let vars = [TermInContext::new(ctx.clone(), Term::var("x", a.clone()), a.clone()), TermInContext::new(ctx.clone(), Term::var("y", a.clone()), a.clone())];
    let proj: Vec<_> = vars.iter().map(|v| interpret(v, &s).unwrap()).collect();
    let dom = s.cat.dom(proj[0]);
    let mut checked = 0;
    for (ty, corpus) in [(&a, &atoms), (&aa, &pairs)] {
        for t in corpus.iter() {
            for r in atoms.iter().take(6) {
                let f = interpret(&TermInContext::new(ctx.clone(), t.clone(), ty.clone()), &s).unwrap();
                let g = interpret(&TermInContext::new(ctx.clone(), r.clone(), a.clone()), &s).unwrap();
                let sub = tuple(&s, dom, &[a.clone(), a.clone()], &[g, proj[1]]).unwrap();
                let lhs = interpret(&TermInContext::new(ctx.clone(), t.subst1(&x, r), ty.clone()), &s).unwrap();
                assert_eq!(lhs, s.compose(f, sub).unwrap(), "{t:?} with x := {r:?}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 100);
}

#[test]
fn consequence_and_models() {
    let sig = standard_signature();
    let u = fixtures::constants_universe(&sig);
    let (a, b) = (Formula::prop("a"), Formula::prop("b"));
    let frag = Fragment::closure([Formula::prod(a.clone(), b.clone()), Formula::sum(a.clone(), b.clone())], &u);
    let s = fixtures::diamond(sig.clone(), u.clone(), &frag, &fixtures::standard_atoms(&u)).unwrap();
    assert!(logical_consequence(&s, &a, &[Formula::prod(a.clone(), b.clone())]).unwrap());
    assert!(!logical_consequence(&s, &b, std::slice::from_ref(&a)).unwrap());
    assert!(logical_consequence(&s, &Formula::sum(a.clone(), b.clone()), std::slice::from_ref(&a)).unwrap());
    assert!(is_model(&s, &Theory::pure(sig)).unwrap());
}
