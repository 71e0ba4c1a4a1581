use ldcalc::curryhoward::{
    axiom_formulas, check_proof, formula_of_type, proof_to_term, term_to_proof, type_of_formula, NdProof, Rule,
};
use ldcalc::gen::Gen;
use ldcalc::surface::{parse_item, Item};
use ldcalc::syntax::{infer_type, Context, Formula, Sym};

fn assumptions(g: &Gen) -> Vec<(Sym, Formula)> {
    g.pool.clone()
}

#[test]
fn generated_proofs_round_trip_through_terms() {
    let mut g = Gen::new(3);
    let sig = g.sig.clone();
    for _ in 0..200 {
        g.reset();
        let (goal, p) = g.checked_proof(4);
        let gamma = assumptions(&g);
        check_proof(&sig.base, &gamma, &p, &goal, &axiom_formulas(&sig)).unwrap();
        let t = proof_to_term(&sig, &p).unwrap();
        let ctx = Context::from_entries(gamma.iter().map(|(x, a)| (x.clone(), type_of_formula(a))).collect()).unwrap();
        assert_eq!(infer_type(&sig, &ctx, &t).unwrap(), type_of_formula(&goal));
        let back = term_to_proof(&sig, &ctx, &t).unwrap();
        assert_eq!(back.canonical(), p.canonical());
        assert_eq!(formula_of_type(&type_of_formula(&goal)), goal);
    }
}

#[test]
fn checker_rejects_broken_derivations() {
    let sig = Gen::new(0).sig;
    let a = Formula::prop("a");
    let b = Formula::prop("b");
    let axioms = axiom_formulas(&sig);
    // a ⊃ b "proved" from an assumption of a
    let wrong = NdProof::new(Rule::ImpI(Sym::new("h")), vec![NdProof::leaf(Rule::Assume(Sym::new("h")), a.clone())], Formula::arrow(a.clone(), b.clone()));
    assert!(check_proof(&sig.base, &vec![], &wrong, &Formula::arrow(a.clone(), b.clone()), &axioms).is_err());
    // undischarged assumption
    let open = NdProof::leaf(Rule::Assume(Sym::new("h")), a.clone());
    assert!(check_proof(&sig.base, &vec![], &open, &a, &axioms).is_err());
    assert!(check_proof(&sig.base, &vec![(Sym::new("h"), a.clone())], &open, &a, &axioms).is_ok());
    // conclusion differs from goal
    assert!(check_proof(&sig.base, &vec![(Sym::new("h"), a.clone())], &open, &b, &axioms).is_err());
}

#[test]
fn eigenvariable_condition_is_enforced() {
    let sig = Gen::new(0).sig;
    let text = "(proof ((h (atom p (var y s)))) (all y s (atom p (var y s)))
        (all-i y s (all y s (atom p (var y s))) (assume h (atom p (var y s)))))";
    let Item::Proof(gamma, goal, p) = parse_item(&sig, text).unwrap() else { panic!() };
    assert!(check_proof(&sig.base, &gamma, &p, &goal, &axiom_formulas(&sig)).is_err());
}

#[test]
fn compiled_terms_follow_the_rules() {
    let sig = Gen::new(0).sig;
    let text = "(proof () (imp (and (atom a) (atom b)) (and (atom b) (atom a)))
        (imp-i h (imp (and (atom a) (atom b)) (and (atom b) (atom a)))
          (and-i (and (atom b) (atom a))
            (and-er (atom b) (assume h (and (atom a) (atom b))))
            (and-el (atom a) (assume h (and (atom a) (atom b)))))))";
    let Item::Proof(gamma, goal, p) = parse_item(&sig, text).unwrap() else { panic!() };
    check_proof(&sig.base, &gamma, &p, &goal, &axiom_formulas(&sig)).unwrap();
    let t = proof_to_term(&sig, &p).unwrap();
    let Item::Term(_, expected, _) =
        parse_item(&sig, "(term () (lam h (and (atom a) (atom b)) (pair (snd (lvar h)) (fst (lvar h)))))").unwrap()
    else {
        panic!()
    };
    assert_eq!(t, expected);
}
