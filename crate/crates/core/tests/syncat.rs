mod common;

use common::classes::{composable, corpus, holds, witness_equations};
use ldcalc::equational::Theory;
use ldcalc::gen::standard_signature;
use ldcalc::kripke::{ld_of_kripke, two_chain};
use ldcalc::semantics::{demanded_fragment, fixtures};
use ldcalc::syncat::{classify, classify_obligations, compose_classes, hom_witness, ClassRep, SyncatError};
use ldcalc::syntax::Formula;

#[test]
fn universal_constructions_satisfy_their_equations() {
    let sig = standard_signature();
    let th = Theory::pure(sig.clone());
    let groups = corpus(1, 4, 5);
    for (i, g) in groups.iter().enumerate() {
        let other = &groups[(i + 1) % groups.len()];
        for (name, l, r) in witness_equations(&sig, g, other) {
            assert!(holds(&th, &l, &r), "{name}: {l} vs {r}");
        }
    }
}

#[test]
fn composition_checks_endpoints() {
    let sig = standard_signature();
    let a = ClassRep::identity(&Formula::prop("a"));
    let b = ClassRep::identity(&Formula::prop("b"));
    assert!(matches!(compose_classes(&sig, &a, &b), Err(SyncatError::Mismatch { .. })));
}

#[test]
fn classification_is_functorial_in_the_fixtures() {
    let sig = standard_signature();
    let th = Theory::pure(sig.clone());
    let classes = composable(&sig, &corpus(2, 1, 3)[0]);
    let u = fixtures::constants_universe(&sig);
    let frag = demanded_fragment(&sig, &u, &classify_obligations(&sig, &classes).unwrap()).unwrap();
    let models = [
        fixtures::trivial(sig.clone(), u.clone()),
        fixtures::diamond(sig.clone(), u.clone(), &frag, &fixtures::standard_atoms(&u)).unwrap(),
        ld_of_kripke(&two_chain(), &frag, &u).unwrap(),
    ];
    for m in &models {
        let r = classify(m, &th, &classes).unwrap();
        assert!(r.is_functorial(), "{r}");
        assert!(r.composites > 0 && r.same_class_pairs > 0, "{r}");
    }
}

#[test]
fn search_finds_tautologies_and_gives_up_on_non_theorems() {
    let th = Theory::pure(standard_signature());
    let (a, b) = (Formula::prop("a"), Formula::prop("b"));
    let curry = Formula::arrow(
        Formula::arrow(Formula::prod(a.clone(), b.clone()), a.clone()),
        Formula::arrow(a.clone(), Formula::arrow(b.clone(), a.clone())),
    );
    assert!(hom_witness(&Formula::One, &curry, &th, 6).is_some());
    let peirce = Formula::arrow(Formula::arrow(Formula::arrow(a.clone(), b.clone()), a.clone()), a.clone());
    assert!(hom_witness(&Formula::One, &peirce, &th, 8).is_none());
    assert!(hom_witness(&Formula::One, &Formula::Zero, &th, 8).is_none());
}
