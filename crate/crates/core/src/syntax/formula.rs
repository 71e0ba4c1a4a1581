use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{fresh, Hint, LTerm, LVar, LogicalSignature, SignatureError, Sym};

/// Formulas of first-order intuitionistic logic, read at the same time as
/// λ-types: `One`/`Zero` are ⊤/⊥, `Prod` is ∧, `Sum` is ∨, `Arrow` is ⊃.
///
/// Quantifier bodies refer to their variable with `LTerm::Bound(0, _)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    One,
    Zero,
    Atom(Sym, Vec<LTerm>),
    Prod(Box<Formula>, Box<Formula>),
    Sum(Box<Formula>, Box<Formula>),
    Arrow(Box<Formula>, Box<Formula>),
    Forall(Hint, Sym, Box<Formula>),
    Exists(Hint, Sym, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: &str, args: Vec<LTerm>) -> Self {
        Formula::Atom(Sym::new(rel), args)
    }

    pub fn prop(rel: &str) -> Self {
        Formula::Atom(Sym::new(rel), Vec::new())
    }

    pub fn prod(a: Formula, b: Formula) -> Self {
        Formula::Prod(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Formula, b: Formula) -> Self {
        Formula::Sum(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Formula, b: Formula) -> Self {
        Formula::Arrow(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Formula) -> Self {
        Formula::arrow(a, Formula::Zero)
    }

    /// `∀x:s. body`, binding the free variable `x` of `body`.
    pub fn forall(x: &Sym, sort: &Sym, body: Formula) -> Self {
        Formula::Forall(Hint(x.clone()), sort.clone(), Box::new(body.close_at(0, x)))
    }

    pub fn exists(x: &Sym, sort: &Sym, body: Formula) -> Self {
        Formula::Exists(Hint(x.clone()), sort.clone(), Box::new(body.close_at(0, x)))
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }

    /// For a quantifier, its body instantiated at `t`.
    pub fn instantiate(&self, t: &LTerm) -> Option<Formula> {
        match self {
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => Some(b.open_at(0, t)),
            _ => None,
        }
    }

    /// For a quantifier, its body opened with a fresh variable.
    pub fn open_fresh(&self) -> Option<(Sym, Sym, Formula)> {
        match self {
            Formula::Forall(h, s, b) | Formula::Exists(h, s, b) => {
                let x = fresh(h.0.as_str());
                let body = b.open_at(0, &LTerm::Var(x.clone(), s.clone()));
                Some((x, s.clone(), body))
            }
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<LVar> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut out);
        out
    }

    pub(crate) fn collect_fv(&self, out: &mut BTreeSet<LVar>) {
        match self {
            Formula::One | Formula::Zero => {}
            Formula::Atom(_, ts) => ts.iter().for_each(|t| t.collect_fv(out)),
            Formula::Prod(a, b) | Formula::Sum(a, b) | Formula::Arrow(a, b) => {
                a.collect_fv(out);
                b.collect_fv(out);
            }
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => b.collect_fv(out),
        }
    }

    pub fn mentions(&self, x: &Sym) -> bool {
        match self {
            Formula::One | Formula::Zero => false,
            Formula::Atom(_, ts) => ts.iter().any(|t| t.mentions(x)),
            Formula::Prod(a, b) | Formula::Sum(a, b) | Formula::Arrow(a, b) => a.mentions(x) || b.mentions(x),
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => b.mentions(x),
        }
    }

    pub(crate) fn closed_at(&self, depth: usize) -> bool {
        match self {
            Formula::One | Formula::Zero => true,
            Formula::Atom(_, ts) => ts.iter().all(|t| t.closed_at(depth)),
            Formula::Prod(a, b) | Formula::Sum(a, b) | Formula::Arrow(a, b) => a.closed_at(depth) && b.closed_at(depth),
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => b.closed_at(depth + 1),
        }
    }

    pub fn is_locally_closed(&self) -> bool {
        self.closed_at(0)
    }

    pub(crate) fn open_at(&self, k: usize, with: &LTerm) -> Formula {
        self.map_terms(k, &|d, t| t.open_at(d, with))
    }

    pub(crate) fn close_at(&self, k: usize, name: &Sym) -> Formula {
        self.map_terms(k, &|d, t| t.close_at(d, name))
    }

    fn map_terms(&self, depth: usize, f: &dyn Fn(usize, &LTerm) -> LTerm) -> Formula {
        match self {
            Formula::One => Formula::One,
            Formula::Zero => Formula::Zero,
            Formula::Atom(r, ts) => Formula::Atom(r.clone(), ts.iter().map(|t| f(depth, t)).collect()),
            Formula::Prod(a, b) => Formula::prod(a.map_terms(depth, f), b.map_terms(depth, f)),
            Formula::Sum(a, b) => Formula::sum(a.map_terms(depth, f), b.map_terms(depth, f)),
            Formula::Arrow(a, b) => Formula::arrow(a.map_terms(depth, f), b.map_terms(depth, f)),
            Formula::Forall(h, s, b) => Formula::Forall(h.clone(), s.clone(), Box::new(b.map_terms(depth + 1, f))),
            Formula::Exists(h, s, b) => Formula::Exists(h.clone(), s.clone(), Box::new(b.map_terms(depth + 1, f))),
        }
    }

    /// Capture-avoiding simultaneous substitution of free logical variables.
    pub fn subst(&self, map: &BTreeMap<Sym, LTerm>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        self.map_terms(0, &|_, t| t.subst(map))
    }

    pub fn subst1(&self, x: &Sym, r: &LTerm) -> Formula {
        self.map_terms(0, &|_, t| t.subst1(x, r))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::One | Formula::Zero => 1,
            Formula::Atom(_, ts) => 1 + ts.iter().map(LTerm::size).sum::<usize>(),
            Formula::Prod(a, b) | Formula::Sum(a, b) | Formula::Arrow(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => 1 + b.size(),
        }
    }

    /// Immediate subformulas; quantifier bodies are returned unopened.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prod(a, b) | Formula::Sum(a, b) | Formula::Arrow(a, b) => vec![a, b],
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => vec![b],
            _ => Vec::new(),
        }
    }

    /// Arity and sort agreement with the signature, bound sorts included.
    pub fn check(&self, sig: &LogicalSignature) -> Result<(), SignatureError> {
        self.check_at(sig, &mut Vec::new())
    }

    fn check_at(&self, sig: &LogicalSignature, binders: &mut Vec<Sym>) -> Result<(), SignatureError> {
        match self {
            Formula::One | Formula::Zero => Ok(()),
            Formula::Atom(r, ts) => {
                let decl = sig.rel(r).ok_or_else(|| SignatureError::UnknownSymbol(r.clone()))?;
                if decl.args.len() != ts.len() {
                    return Err(SignatureError::Arity { symbol: r.clone(), expected: decl.args.len(), found: ts.len() });
                }
                for (t, want) in ts.iter().zip(&decl.args) {
                    if t.sort() != want {
                        return Err(SignatureError::SortMismatch { symbol: r.clone(), expected: want.clone(), found: t.sort().clone() });
                    }
                    check_bound_sorts(t, binders)?;
                    t.check(sig)?;
                }
                Ok(())
            }
            Formula::Prod(a, b) | Formula::Sum(a, b) | Formula::Arrow(a, b) => {
                a.check_at(sig, binders)?;
                b.check_at(sig, binders)
            }
            Formula::Forall(_, s, b) | Formula::Exists(_, s, b) => {
                if !sig.has_sort(s) {
                    return Err(SignatureError::UnknownSort(s.clone()));
                }
                binders.push(s.clone());
                let r = b.check_at(sig, binders);
                binders.pop();
                r
            }
        }
    }
}

/// A bound index must point at a binder of the same sort.
pub(crate) fn check_bound_sorts(t: &LTerm, binders: &[Sym]) -> Result<(), SignatureError> {
    match t {
        LTerm::Bound(i, s) => match binders.len().checked_sub(i + 1).map(|j| &binders[j]) {
            Some(b) if b == s => Ok(()),
            Some(b) => Err(SignatureError::SortMismatch { symbol: Sym::new("bound variable"), expected: b.clone(), found: s.clone() }),
            None => Err(SignatureError::LooseBound),
        },
        LTerm::Var(..) => Ok(()),
        LTerm::App(_, args, _) => args.iter().try_for_each(|a| check_bound_sorts(a, binders)),
    }
}

/// Conventional notation for messages: `⊤ ⊥ ∧ ∨ ⊃ ∀x:s. ∃x:s.`, fully parenthesized.
/// Bound variables print as their binder's hint.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(&mut Vec::new(), f)
    }
}

impl Formula {
    /// `names` lists enclosing logical binders, innermost last.
    pub(crate) fn write_with(&self, names: &mut Vec<Sym>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::One => f.write_str("⊤"),
            Formula::Zero => f.write_str("⊥"),
            Formula::Atom(r, args) if args.is_empty() => write!(f, "{r}"),
            Formula::Atom(r, args) => {
                write!(f, "{r}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    t.write_with(names, f)?;
                }
                f.write_str(")")
            }
            Formula::Prod(l, r) | Formula::Sum(l, r) | Formula::Arrow(l, r) => {
                let op = match self {
                    Formula::Prod(..) => "∧",
                    Formula::Sum(..) => "∨",
                    _ => "⊃",
                };
                f.write_str("(")?;
                l.write_with(names, f)?;
                write!(f, " {op} ")?;
                r.write_with(names, f)?;
                f.write_str(")")
            }
            Formula::Forall(h, s, body) | Formula::Exists(h, s, body) => {
                let q = if matches!(self, Formula::Forall(..)) { "∀" } else { "∃" };
                write!(f, "{q}{}:{s}. ", h.0.base())?;
                names.push(h.0.clone());
                let r = body.write_with(names, f);
                names.pop();
                r
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Sym {
        Sym::new("s")
    }

    #[test]
    fn free_vars_of_quantifier_drop_the_bound_variable() {
        let x = Sym::new("x");
        let body = Formula::atom("p", vec![LTerm::var("x", "s"), LTerm::var("y", "s")]);
        let f = Formula::forall(&x, &s(), body);
        let fv = f.free_vars();
        assert_eq!(fv.len(), 1);
        assert!(fv.contains(&(Sym::new("y"), s())));
    }

    #[test]
    fn constants_have_no_free_variables() {
        assert!(LTerm::constant("c", "s").free_vars().is_empty());
    }

    #[test]
    fn substitution_under_binder_does_not_capture() {
        // ∀x. p(x, y) [f(x)/y] keeps the substituted x free.
        let x = Sym::new("x");
        let body = Formula::atom("p", vec![LTerm::var("x", "s"), LTerm::var("y", "s")]);
        let f = Formula::forall(&x, &s(), body);
        let fx = LTerm::App(Sym::new("f"), vec![LTerm::var("x", "s")], s());
        let out = f.subst1(&Sym::new("y"), &fx);
        let w = Sym::new("w");
        let expected = Formula::forall(&w, &s(), Formula::atom("p", vec![LTerm::var("w", "s"), fx.clone()]));
        assert_eq!(out, expected);
        assert!(out.free_vars().contains(&(x, s())));
    }

    #[test]
    fn alpha_renamed_quantifiers_are_equal() {
        let a = Formula::exists(&Sym::new("x"), &s(), Formula::atom("p", vec![LTerm::var("x", "s")]));
        let b = Formula::exists(&Sym::new("z"), &s(), Formula::atom("p", vec![LTerm::var("z", "s")]));
        assert_eq!(a, b);
    }
}
