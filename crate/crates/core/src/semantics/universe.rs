use std::collections::{BTreeMap, BTreeSet};

use super::SemanticsError;
use crate::syntax::{fresh, Context, Formula, LTerm, LogicalSignature, Sym, TermInContext};

/// The finite stand-in for the logical terms of each sort: some closed terms
/// plus one generic variable per sort that stands for "any other term".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermUniverse {
    terms: BTreeMap<Sym, Vec<LTerm>>,
    generic: BTreeMap<Sym, Sym>,
}

impl TermUniverse {
    /// Closed terms as given, with freshly named generic variables.
    pub fn new(sig: &LogicalSignature, terms: BTreeMap<Sym, Vec<LTerm>>) -> Result<Self, SemanticsError> {
        let generic = sig.sorts.iter().map(|s| (s.clone(), fresh(&format!("g{s}")))).collect();
        TermUniverse::with_generic(sig, terms, generic)
    }

    pub fn with_generic(
        sig: &LogicalSignature,
        terms: BTreeMap<Sym, Vec<LTerm>>,
        generic: BTreeMap<Sym, Sym>,
    ) -> Result<Self, SemanticsError> {
        for (s, ts) in &terms {
            for t in ts {
                if t.sort() != s || t.check(sig).is_err() || !t.free_vars().is_empty() {
                    return Err(SemanticsError::UniverseTerm(t.clone(), s.clone()));
                }
            }
        }
        for s in &sig.sorts {
            if !generic.contains_key(s) {
                return Err(SemanticsError::NoGeneric(s.clone()));
            }
        }
        let names: BTreeSet<&Sym> = generic.values().collect();
        if names.len() != generic.len() {
            return Err(SemanticsError::NoGeneric(generic.keys().next().cloned().unwrap_or_else(|| Sym::new("?"))));
        }
        let mut terms = terms;
        for s in &sig.sorts {
            terms.entry(s.clone()).or_default();
        }
        Ok(TermUniverse { terms, generic })
    }

    /// All closed terms up to the given nesting depth.
    pub fn closed(sig: &LogicalSignature, depth: usize) -> Result<Self, SemanticsError> {
        let mut by_sort: BTreeMap<Sym, Vec<LTerm>> = sig.sorts.iter().map(|s| (s.clone(), Vec::new())).collect();
        for _ in 0..depth {
            let mut next = by_sort.clone();
            for f in &sig.funs {
                let mut tuples: Vec<Vec<LTerm>> = vec![Vec::new()];
                for a in &f.args {
                    let pool = by_sort.get(a).cloned().unwrap_or_default();
                    tuples = tuples
                        .into_iter()
                        .flat_map(|tu| {
                            pool.iter().map(move |t| {
                                let mut v = tu.clone();
                                v.push(t.clone());
                                v
                            })
                        })
                        .collect();
                }
                for args in tuples {
                    let t = LTerm::App(f.name.clone(), args, f.result.clone());
                    let slot = next.entry(f.result.clone()).or_default();
                    if !slot.contains(&t) {
                        slot.push(t);
                    }
                }
            }
            by_sort = next;
        }
        TermUniverse::new(sig, by_sort)
    }

    /// The listed terms of `sort` followed by its generic variable.
    pub fn terms(&self, sort: &Sym) -> Vec<LTerm> {
        let mut out = self.terms.get(sort).cloned().unwrap_or_default();
        if let Some(g) = self.generic.get(sort) {
            out.push(LTerm::Var(g.clone(), sort.clone()));
        }
        out
    }

    pub fn listed(&self) -> &BTreeMap<Sym, Vec<LTerm>> {
        &self.terms
    }

    pub fn generic(&self, sort: &Sym) -> Option<&Sym> {
        self.generic.get(sort)
    }

    pub fn generics(&self) -> &BTreeMap<Sym, Sym> {
        &self.generic
    }

    pub fn is_generic(&self, x: &Sym) -> bool {
        self.generic.values().any(|g| g == x)
    }

    pub fn contains(&self, t: &LTerm) -> bool {
        self.terms(t.sort()).contains(t)
    }

    /// Largest number of terms (generic variable included) over all sorts.
    pub fn width(&self) -> usize {
        self.terms.keys().map(|s| self.terms(s).len()).max().unwrap_or(0)
    }

    pub fn mentions_generic(&self, f: &Formula) -> bool {
        f.free_vars().iter().any(|(x, _)| self.is_generic(x))
    }

    fn generalizer(&self, vars: impl IntoIterator<Item = (Sym, Sym)>) -> BTreeMap<Sym, LTerm> {
        vars.into_iter()
            .filter(|(x, _)| !self.is_generic(x))
            .filter_map(|(x, s)| self.generic.get(&s).map(|g| (x, LTerm::Var(g.clone(), s))))
            .collect()
    }

    /// Every free logical variable replaced by the generic variable of its sort.
    pub fn generalize_formula(&self, f: &Formula) -> Formula {
        f.subst(&self.generalizer(f.free_vars()))
    }

    /// The same substitution applied to a whole term-in-context.
    pub fn generalize(&self, tic: &TermInContext) -> TermInContext {
        let mut vars = tic.term.logic_vars();
        vars.extend(tic.ty.free_vars());
        for (_, a) in tic.ctx.entries() {
            vars.extend(a.free_vars());
        }
        let map = self.generalizer(vars);
        if map.is_empty() {
            return tic.clone();
        }
        let entries = tic.ctx.entries().iter().map(|(x, a)| (x.clone(), a.subst(&map))).collect();
        let ctx = Context::from_entries(entries).expect("renaming types keeps variables distinct");
        TermInContext::new(ctx, tic.term.subst_logic(&map), tic.ty.subst(&map))
    }
}

/// A finite set of formulas closed under subformulas, under instantiation of
/// quantifiers over the universe, and under `∃x.(A×B) ↦ ∃x.B` when `x` does
/// not occur in `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fragment {
    formulas: BTreeSet<Formula>,
}

impl Fragment {
    pub fn closure(seeds: impl IntoIterator<Item = Formula>, u: &TermUniverse) -> Fragment {
        let mut formulas = BTreeSet::new();
        let mut work: Vec<Formula> = seeds.into_iter().collect();
        while let Some(f) = work.pop() {
            if formulas.contains(&f) {
                continue;
            }
            match &f {
                Formula::Prod(a, b) | Formula::Sum(a, b) | Formula::Arrow(a, b) => {
                    work.push((**a).clone());
                    work.push((**b).clone());
                }
                Formula::Forall(h, s, body) | Formula::Exists(h, s, body) => {
                    for t in u.terms(s) {
                        work.push(body.open_at(0, &t));
                    }
                    if let (Formula::Exists(..), Formula::Prod(a, b)) = (&f, &**body) {
                        if a.closed_at(0) {
                            work.push(Formula::Exists(h.clone(), s.clone(), b.clone()));
                        }
                    }
                }
                _ => {}
            }
            formulas.insert(f);
        }
        Fragment { formulas }
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// Whether the closure conditions hold (true for anything built by `closure`).
    pub fn is_closed(&self, u: &TermUniverse) -> bool {
        Fragment::closure(self.formulas.iter().cloned(), u).formulas == self.formulas
    }

    pub fn union(&self, other: &Fragment, u: &TermUniverse) -> Fragment {
        Fragment::closure(self.formulas.iter().chain(other.formulas.iter()).cloned(), u)
    }
}
