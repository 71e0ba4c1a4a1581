//! Ready-made structures: the one-object model, the four-element diamond
//! Heyting algebra, the non-distributive lattice M₃, and a small non-thin
//! category of finite sets.

use std::collections::HashMap;

use super::lattice::{thin_structure, FiniteLattice};
use super::{ArrowDecl, CoproductW, ExponentialW, FinCategory, Fragment, LdStructure, ProductW, SemanticsError, TermUniverse};
use crate::syntax::{Formula, LTerm, LambdaSignature};

/// One object, one arrow. Every type denotes the object, so every term
/// denotes the identity and every equality holds.
pub fn trivial(sig: LambdaSignature, universe: TermUniverse) -> LdStructure {
    let cat = FinCategory::new(vec!["∗".into()], vec![ArrowDecl { name: "id".into(), dom: 0, cod: 0 }], vec![0], vec![(0, 0, 0)])
        .expect("one-object tables");
    LdStructure {
        sig,
        cat,
        universe,
        m: HashMap::new(),
        uniform: Some(0),
        terminal: 0,
        initial: Some(0),
        products: HashMap::from([((0, 0), ProductW { obj: 0, p1: 0, p2: 0 })]),
        coproducts: HashMap::from([((0, 0), CoproductW { obj: 0, i1: 0, i2: 0 })]),
        exponentials: HashMap::from([((0, 0), ExponentialW { obj: 0, ev: 0 })]),
        cones: HashMap::new(),
        cocones: HashMap::new(),
        axioms: HashMap::new(),
    }
}

/// `0 < a, b < 1` with `a`, `b` incomparable.
pub fn diamond_lattice() -> FiniteLattice {
    FiniteLattice::new(vec!["0".into(), "a".into(), "b".into(), "1".into()], |i, j| i == j || i == 0 || j == 3)
}

/// `0 < x, y, z < 1`, pairwise incomparable atoms: modular, not distributive.
pub fn m3_lattice() -> FiniteLattice {
    FiniteLattice::new(
        vec!["0".into(), "x".into(), "y".into(), "z".into(), "1".into()],
        |i, j| i == j || i == 0 || j == 4,
    )
}

/// A fixed valuation of the atoms of the standard signature in the diamond:
/// `a ↦ a`, `b ↦ b`, `p(c) ↦ a`, `p(g) ↦ 1`, `q(c) ↦ b`, `q(g) ↦ 0`; any other
/// atom goes to `a`.
pub fn standard_atoms(u: &TermUniverse) -> impl Fn(&Formula) -> usize + '_ {
    move |f| match f {
        Formula::Atom(r, args) => {
            let generic = matches!(args.first(), Some(LTerm::Var(x, _)) if u.is_generic(x));
            match (r.as_str(), generic) {
                ("b", _) => 2,
                ("p", true) => 3,
                ("q", false) => 2,
                ("q", true) => 0,
                _ => 1,
            }
        }
        _ => 1,
    }
}

/// The diamond as a Σ-structure on `fragment`, atoms valued by `atoms`.
pub fn diamond(
    sig: LambdaSignature,
    universe: TermUniverse,
    fragment: &Fragment,
    atoms: &dyn Fn(&Formula) -> usize,
) -> Result<LdStructure, SemanticsError> {
    let lattice = diamond_lattice();
    let u = universe.clone();
    thin_structure(sig, universe, &lattice, fragment, &|f| lattice.value(f, &u, atoms))
}

/// M₃ as a Σ-structure on `fragment`. It has products, coproducts and
/// initial/terminal objects but fails distributivity.
pub fn m3(
    sig: LambdaSignature,
    universe: TermUniverse,
    fragment: &Fragment,
    atoms: &dyn Fn(&Formula) -> usize,
) -> Result<LdStructure, SemanticsError> {
    let lattice = m3_lattice();
    let u = universe.clone();
    thin_structure(sig, universe, &lattice, fragment, &|f| lattice.value(f, &u, atoms))
}

/// Sets `1`, `2` and `4 = 2 × 2` with a composition-closed choice of
/// functions: into `2`, the identity, the constants and (from `4`) the two
/// projections; into `4`, every pairing of those; into `1`, the unique map.
/// 41 arrows. `M` sends `1 ↦ 1`, `atom ↦ 2`, `atom × atom ↦ 4`.
///
/// The two projections `4 ⇉ 2` are distinct, so `x, y : atom ⊢ x = y`
/// evaluates to 0. The category has no initial object and no exponentials,
/// so it is not logically distributive.
pub fn finite_sets(sig: LambdaSignature, universe: TermUniverse, atom: &Formula) -> LdStructure {
    let sizes = [1usize, 2, 4];
    // Functions into 2 allowed from each object, as value tables.
    let into_two = |dom: usize| -> Vec<Vec<usize>> {
        let n = sizes[dom];
        let mut fs = vec![vec![0; n], vec![1; n]];
        match dom {
            1 => fs.insert(0, vec![0, 1]),
            2 => {
                fs.insert(0, (0..4).map(|e| e / 2).collect());
                fs.insert(1, (0..4).map(|e| e % 2).collect());
            }
            _ => {}
        }
        fs
    };
    let mut tables: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for dom in 0..3 {
        tables.push((dom, 0, vec![0; sizes[dom]]));
        for f in into_two(dom) {
            tables.push((dom, 1, f));
        }
        for f in into_two(dom) {
            for g in into_two(dom) {
                tables.push((dom, 2, f.iter().zip(&g).map(|(a, b)| 2 * a + b).collect()));
            }
        }
    }
    let mut tables_dedup: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for t in tables {
        if !tables_dedup.contains(&t) {
            tables_dedup.push(t);
        }
    }
    let tables = tables_dedup;
    let names = ["1", "2", "4"];
    let arrows: Vec<ArrowDecl> = tables
        .iter()
        .map(|(d, c, f)| ArrowDecl { name: format!("{}→{}{:?}", names[*d], names[*c], f), dom: *d, cod: *c })
        .collect();
    let find = |d: usize, c: usize, f: &[usize]| tables.iter().position(|(d2, c2, g)| *d2 == d && *c2 == c && g == f);
    let identity: Vec<usize> = (0..3).map(|o| find(o, o, &(0..sizes[o]).collect::<Vec<_>>()).unwrap()).collect();
    let mut triples = Vec::new();
    for (fi, (d, m, f)) in tables.iter().enumerate() {
        for (gi, (m2, c, g)) in tables.iter().enumerate() {
            if m == m2 {
                let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                let hi = find(*d, *c, &h).expect("chosen functions are closed under composition");
                triples.push((gi, fi, hi));
            }
        }
    }
    let cat = FinCategory::new(names.iter().map(|s| s.to_string()).collect(), arrows, identity.clone(), triples)
        .expect("finite set tables");
    let bang = |o: usize| find(o, 0, &vec![0; sizes[o]]).unwrap();
    let mut products = HashMap::new();
    for o in 0..3 {
        products.insert((0, o), ProductW { obj: o, p1: bang(o), p2: identity[o] });
        products.insert((o, 0), ProductW { obj: o, p1: identity[o], p2: bang(o) });
    }
    let pi1: Vec<usize> = (0..4).map(|e| e / 2).collect();
    let pi2: Vec<usize> = (0..4).map(|e| e % 2).collect();
    products.insert((1, 1), ProductW { obj: 2, p1: find(2, 1, &pi1).unwrap(), p2: find(2, 1, &pi2).unwrap() });
    let m = HashMap::from([
        (Formula::One, 0),
        (atom.clone(), 1),
        (Formula::prod(atom.clone(), atom.clone()), 2),
    ]);
    LdStructure {
        sig,
        cat,
        universe,
        m,
        uniform: None,
        terminal: 0,
        initial: None,
        products,
        coproducts: HashMap::new(),
        exponentials: HashMap::new(),
        cones: HashMap::new(),
        cocones: HashMap::new(),
        axioms: HashMap::new(),
    }
}

/// A universe with the closed terms of depth one (the constants).
pub fn constants_universe(sig: &LambdaSignature) -> TermUniverse {
    TermUniverse::closed(&sig.base, 1).expect("closed terms are well formed")
}
