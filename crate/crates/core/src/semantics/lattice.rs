use std::collections::{BTreeMap, HashMap};

use super::{Fragment, LdStructure, ProductW, SemanticsError, TermUniverse};
use super::{CoproductW, ExponentialW, FinCategory};
use crate::syntax::{Formula, LambdaSignature};

/// A finite partial order with whatever meets, joins and relative
/// pseudo-complements it happens to have.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    pub names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FiniteLattice {
    /// `leq` must be a partial order on `0..names.len()`.
    pub fn new(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Self {
        let n = names.len();
        let leq = (0..n).map(|i| (0..n).map(|j| leq(i, j)).collect()).collect();
        FiniteLattice { names, leq }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    fn greatest(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let cands: Vec<usize> = (0..self.len()).filter(|&x| pred(x)).collect();
        cands.iter().copied().find(|&x| cands.iter().all(|&y| self.leq(y, x)))
    }

    fn least(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let cands: Vec<usize> = (0..self.len()).filter(|&x| pred(x)).collect();
        cands.iter().copied().find(|&x| cands.iter().all(|&y| self.leq(x, y)))
    }

    pub fn top(&self) -> Option<usize> {
        self.greatest(|_| true)
    }

    pub fn bottom(&self) -> Option<usize> {
        self.least(|_| true)
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.greatest(|x| self.leq(x, a) && self.leq(x, b))
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.least(|x| self.leq(a, x) && self.leq(b, x))
    }

    /// The greatest `x` with `x ∧ a ≤ b`.
    pub fn imp(&self, a: usize, b: usize) -> Option<usize> {
        self.greatest(|x| self.meet(x, a).is_some_and(|m| self.leq(m, b)))
    }

    /// Compositional value of a formula: ∧, ∨, ⊃ as meet, join and
    /// implication, quantifiers as meets and joins over the universe.
    pub fn value(&self, f: &Formula, u: &TermUniverse, atoms: &dyn Fn(&Formula) -> usize) -> Option<usize> {
        match f {
            Formula::One => self.top(),
            Formula::Zero => self.bottom(),
            Formula::Atom(..) => Some(atoms(f)),
            Formula::Prod(a, b) => self.meet(self.value(a, u, atoms)?, self.value(b, u, atoms)?),
            Formula::Sum(a, b) => self.join(self.value(a, u, atoms)?, self.value(b, u, atoms)?),
            Formula::Arrow(a, b) => self.imp(self.value(a, u, atoms)?, self.value(b, u, atoms)?),
            Formula::Forall(_, s, _) | Formula::Exists(_, s, _) => {
                let is_all = matches!(f, Formula::Forall(..));
                let mut acc = if is_all { self.top()? } else { self.bottom()? };
                for t in u.terms(s) {
                    let v = self.value(&f.instantiate(&t)?, u, atoms)?;
                    acc = if is_all { self.meet(acc, v)? } else { self.join(acc, v)? };
                }
                Some(acc)
            }
        }
    }
}

/// The preorder category of a finite lattice as a Σ-structure: products are
/// meets, coproducts joins, exponentials implications (where they exist),
/// and a cone or co-cone leg is stored whenever the order permits it. An
/// axiom symbol is interpreted whenever its domain lies below its codomain.
pub fn thin_structure(
    sig: LambdaSignature,
    universe: TermUniverse,
    lattice: &FiniteLattice,
    fragment: &Fragment,
    value: &dyn Fn(&Formula) -> Option<usize>,
) -> Result<LdStructure, SemanticsError> {
    let n = lattice.len();
    let cat = FinCategory::preorder(lattice.names.clone(), |i, j| lattice.leq(i, j));
    let arrow = |i: usize, j: usize| cat.hom(i, j).first().copied();
    let mut products = HashMap::new();
    let mut coproducts = HashMap::new();
    let mut exponentials = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            if let Some(m) = lattice.meet(a, b) {
                products.insert((a, b), ProductW { obj: m, p1: arrow(m, a).unwrap(), p2: arrow(m, b).unwrap() });
            }
            if let Some(j) = lattice.join(a, b) {
                coproducts.insert((a, b), CoproductW { obj: j, i1: arrow(a, j).unwrap(), i2: arrow(b, j).unwrap() });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if let Some(e) = lattice.imp(a, b) {
                let m = lattice.meet(e, a).expect("implication exists only with the meet");
                exponentials.insert((a, b), ExponentialW { obj: e, ev: arrow(m, b).unwrap() });
            }
        }
    }
    let mut m = HashMap::new();
    for f in fragment.iter() {
        let v = value(f).ok_or_else(|| SemanticsError::OutsideFragment(f.clone()))?;
        m.insert(f.clone(), v);
    }
    let mut cones = HashMap::new();
    let mut cocones = HashMap::new();
    for f in fragment.iter() {
        let (Formula::Forall(_, s, _) | Formula::Exists(_, s, _)) = f else { continue };
        let is_all = matches!(f, Formula::Forall(..));
        let mut legs = BTreeMap::new();
        for t in universe.terms(s) {
            let inst = m[&f.instantiate(&t).unwrap()];
            let leg = if is_all { arrow(m[f], inst) } else { arrow(inst, m[f]) };
            if let Some(leg) = leg {
                legs.insert(t, leg);
            }
        }
        if is_all { cones.insert(f.clone(), legs) } else { cocones.insert(f.clone(), legs) };
    }
    let mut ax = HashMap::new();
    for decl in &sig.axioms {
        if let Some(f) = value(&decl.dom).zip(value(&decl.cod)).and_then(|(i, j)| arrow(i, j)) {
            ax.insert(decl.name.clone(), f);
        }
    }
    Ok(LdStructure {
        sig,
        cat,
        universe,
        m,
        uniform: None,
        terminal: lattice.top().ok_or(SemanticsError::NoTerminal)?,
        initial: lattice.bottom(),
        products,
        coproducts,
        exponentials,
        cones,
        cocones,
        axioms: ax,
    })
}
