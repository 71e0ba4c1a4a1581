use std::collections::BTreeMap;

use ldcalc::gen::Gen;
use ldcalc::kripke::{
    forces, ld_of_kripke, losing_relation, non_commuting_chain, single_world_total, two_chain, valid, validate_kripke,
    Env, FinKripkeModel, Stability,
};
use ldcalc::semantics::{check_ld, fixtures, Fragment, TermUniverse};
use ldcalc::syntax::{Formula, LTerm, Sym};

/// Forcing over models whose transitions are identities, written directly
/// from the clauses with named variables.
fn oracle(k: &FinKripkeModel, p: usize, env: &BTreeMap<String, usize>, f: &Formula) -> bool {
    let above: Vec<usize> = (0..k.poset.len()).filter(|&q| k.poset.leq(p, q)).collect();
    let value = |t: &LTerm| match t {
        LTerm::Var(x, _) => env[x.as_str()],
        LTerm::App(g, _, _) => k.funs[p][g][&vec![]],
        LTerm::Bound(..) => unreachable!(),
    };
    match f {
        Formula::One => true,
        Formula::Zero => false,
        Formula::Atom(r, args) => k.rels[p][r].contains(&args.iter().map(value).collect::<Vec<_>>()),
        Formula::Prod(a, b) => oracle(k, p, env, a) && oracle(k, p, env, b),
        Formula::Sum(a, b) => oracle(k, p, env, a) || oracle(k, p, env, b),
        Formula::Arrow(a, b) => above.iter().all(|&q| !oracle(k, q, env, a) || oracle(k, q, env, b)),
        Formula::Forall(h, s, _) | Formula::Exists(h, s, _) => {
            let name = format!("{}!{}", h.0.base(), env.len());
            let body = f.instantiate(&LTerm::Var(Sym::new(&name), s.clone())).unwrap();
            let at = |q: usize| {
                (0..k.carrier(q, s)).map(move |d| (q, d)).collect::<Vec<_>>()
            };
            let holds = |(q, d): (usize, usize)| {
                let mut e = env.clone();
                e.insert(name.clone(), d);
                oracle(k, q, &e, &body)
            };
            if matches!(f, Formula::Forall(..)) {
                above.iter().flat_map(|&q| at(q)).all(holds)
            } else {
                at(p).into_iter().any(holds)
            }
        }
    }
}

fn corpus(seed: u64, n: usize) -> Vec<Formula> {
    let mut g = Gen::new(seed);
    let mut out: Vec<Formula> = (0..n / 2).map(|_| g.ty(2, &[])).collect();
    out.extend((0..n - n / 2).map(|i| g.quantified(2, i % 2 == 0, &[])));
    out
}

#[test]
fn forcing_matches_the_clause_oracle() {
    for k in [two_chain(), single_world_total()] {
        assert!(validate_kripke(&k).is_ok());
        for f in corpus(6, 120) {
            for p in 0..k.poset.len() {
                assert_eq!(forces(&k, p, &Env::new(), &f).unwrap(), oracle(&k, p, &BTreeMap::new(), &f), "{f} at {p}");
            }
        }
    }
}

#[test]
fn classical_laws_fail_on_the_chain() {
    let a = Formula::prop("a");
    let lem = Formula::sum(a.clone(), Formula::neg(a.clone()));
    let dne = Formula::arrow(Formula::neg(Formula::neg(a.clone())), a.clone());
    let k = two_chain();
    assert!(!valid(&k, &lem).unwrap());
    assert!(!valid(&k, &dne).unwrap());
    assert!(!forces(&k, 0, &Env::new(), &lem).unwrap());
    assert!(forces(&k, 1, &Env::new(), &lem).unwrap());
    let one = single_world_total();
    assert!(valid(&one, &lem).unwrap());
    assert!(valid(&one, &dne).unwrap());
}

#[test]
fn forcing_is_monotone() {
    for k in [two_chain(), single_world_total()] {
        let s = Sym::new("s");
        let x = (Sym::new("x"), s.clone());
        let mut g = Gen::new(12);
        let fs: Vec<Formula> = (0..80)
            .map(|_| g.ty(2, &[(x.0.clone(), s.clone())]))
            .chain(corpus(13, 40))
            .collect();
        for f in &fs {
            let vars = f.free_vars();
            for p in 0..k.poset.len() {
                for env in k.environments(p, &vars) {
                    if !forces(&k, p, &env, f).unwrap() {
                        continue;
                    }
                    for q in k.poset.above(p) {
                        let moved: Env = env.iter().map(|(v, &e)| (v.clone(), k.transport(p, q, &v.1, e))).collect();
                        assert!(forces(&k, q, &moved, f).unwrap(), "{f} lost from {p} to {q}");
                    }
                }
            }
        }
    }
}

#[test]
fn model_validation_reports_the_broken_clause() {
    assert!(validate_kripke(&non_commuting_chain()).fails(4));
    assert!(validate_kripke(&losing_relation(Stability::StrictIff)).fails(2));
    assert!(validate_kripke(&losing_relation(Stability::ForwardOnly)).fails(2));
    let mut growing = two_chain();
    growing.stability = Stability::StrictIff;
    assert!(validate_kripke(&growing).fails(2), "a grows along the order");
    assert!(validate_kripke(&two_chain()).is_ok());
}

#[test]
fn validity_matches_global_sections() {
    let k = two_chain();
    let sig = ldcalc::gen::standard_signature();
    let u: TermUniverse = fixtures::constants_universe(&sig);
    let fs = corpus(30, 30);
    let frag = Fragment::closure(fs.iter().cloned(), &u);
    let s = ld_of_kripke(&k, &frag, &u).unwrap();
    assert!(check_ld(&s).unwrap().all_pass());
    for f in &fs {
        let global = !s.cat.hom(s.terminal, s.obj(f).unwrap()).is_empty();
        assert_eq!(valid(&k, f).unwrap(), global, "{f}");
    }
}
