use std::collections::{BTreeMap, BTreeSet};

use super::{fresh, Formula, Hint, LTerm, LVar, Sym};

/// Proof terms. λ-bound variables are `Bound(i)`; logical variables bound by
/// `AllI`/`ExE` live inside the embedded formulas and logical terms as
/// `LTerm::Bound`. The two index spaces are independent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// A free λ-variable with its type.
    Var(Sym, Formula),
    Bound(usize),
    /// Axiom symbol applied to its argument.
    Ax(Sym, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    /// `inl_B(t) : A + B`, storing `B`.
    Inl(Formula, Box<Term>),
    /// `inr_B(t) : B + A`, storing `B`.
    Inr(Formula, Box<Term>),
    When(Box<Term>, Box<Term>, Box<Term>),
    Lam(Hint, Formula, Box<Term>),
    App(Box<Term>, Box<Term>),
    Star,
    /// `F_A : 0 → A`.
    Absurd(Formula),
    AllI(Hint, Sym, Box<Term>),
    AllE(Box<Term>, LTerm),
    /// `exI_x(t) : ∃x:s. body`, with `t : body[witness/x]`. `body` is under the binder.
    ExI { hint: Hint, sort: Sym, witness: LTerm, body: Formula, term: Box<Term> },
    /// `exE(t, λx:s. r)`; `r` is under the logical binder.
    ExE(Box<Term>, Hint, Sym, Box<Term>),
}

/// What a child of a node is bound by, after opening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binder {
    None,
    Lam(Sym, Formula),
    Logic(Sym, Sym),
}

enum Embedded<'a> {
    Formula(&'a Formula),
    LTerm(&'a LTerm),
}

fn bx(t: Term) -> Box<Term> {
    Box::new(t)
}

impl Term {
    pub fn var(x: &str, ty: Formula) -> Term {
        Term::Var(Sym::new(x), ty)
    }

    pub fn ax(a: &Sym, t: Term) -> Term {
        Term::Ax(a.clone(), bx(t))
    }

    pub fn pair(s: Term, t: Term) -> Term {
        Term::Pair(bx(s), bx(t))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(bx(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(bx(t))
    }

    pub fn inl(other: Formula, t: Term) -> Term {
        Term::Inl(other, bx(t))
    }

    pub fn inr(other: Formula, t: Term) -> Term {
        Term::Inr(other, bx(t))
    }

    pub fn when(s: Term, t: Term, r: Term) -> Term {
        Term::When(bx(s), bx(t), bx(r))
    }

    pub fn app(s: Term, t: Term) -> Term {
        Term::App(bx(s), bx(t))
    }

    pub fn all_e(t: Term, r: LTerm) -> Term {
        Term::AllE(bx(t), r)
    }

    /// `λx:A. body`, binding the free λ-variable `x` of `body`.
    pub fn lam(x: &Sym, ty: Formula, body: Term) -> Term {
        Term::Lam(Hint(x.clone()), ty, bx(body.close_lam_at(0, x)))
    }

    /// `allI(λx:s. body)`, binding the free logical variable `x`.
    pub fn all_i(x: &Sym, sort: &Sym, body: Term) -> Term {
        Term::AllI(Hint(x.clone()), sort.clone(), bx(body.close_logic_at(0, x)))
    }

    /// `exI_x(t) : ∃x:s. body` with `body` mentioning `x` by name.
    pub fn ex_i(x: &Sym, sort: &Sym, witness: LTerm, body: Formula, t: Term) -> Term {
        Term::ExI { hint: Hint(x.clone()), sort: sort.clone(), witness, body: body.close_at(0, x), term: bx(t) }
    }

    /// `exE(t, λx:s. r)` with `r` mentioning `x` by name.
    pub fn ex_e(t: Term, x: &Sym, sort: &Sym, r: Term) -> Term {
        Term::ExE(bx(t), Hint(x.clone()), sort.clone(), bx(r.close_logic_at(0, x)))
    }

    /// For a λ-abstraction: fresh variable, its type, and the opened body.
    pub fn open_lam(&self) -> Option<(Sym, Formula, Term)> {
        match self {
            Term::Lam(h, ty, body) => {
                let x = fresh(h.0.as_str());
                let opened = body.open_lam_at(0, &Term::Var(x.clone(), ty.clone()));
                Some((x, ty.clone(), opened))
            }
            _ => None,
        }
    }

    /// For `AllI`/`ExE`: fresh logical variable, sort, and the opened body.
    pub fn open_logic(&self) -> Option<(Sym, Sym, Term)> {
        match self {
            Term::AllI(h, s, body) | Term::ExE(_, h, s, body) => {
                let y = fresh(h.0.as_str());
                let opened = body.open_logic_at(0, &LTerm::Var(y.clone(), s.clone()));
                Some((y, s.clone(), opened))
            }
            _ => None,
        }
    }

    /// Body of a λ-abstraction instantiated at `u` (a β-step without the redex).
    pub fn lam_body_at(&self, u: &Term) -> Option<Term> {
        match self {
            Term::Lam(_, _, body) => Some(body.open_lam_at(0, u)),
            _ => None,
        }
    }

    /// Body of `AllI`/`ExE` instantiated at the logical term `r`.
    pub fn logic_body_at(&self, r: &LTerm) -> Option<Term> {
        match self {
            Term::AllI(_, _, body) | Term::ExE(_, _, _, body) => Some(body.open_logic_at(0, r)),
            _ => None,
        }
    }

    pub(crate) fn open_lam_at(&self, k: usize, with: &Term) -> Term {
        self.map_lam(k, &|d, t| match t {
            Term::Bound(i) if *i == d => Some(with.clone()),
            _ => None,
        })
    }

    pub(crate) fn close_lam_at(&self, k: usize, name: &Sym) -> Term {
        self.map_lam(k, &|d, t| match t {
            Term::Var(x, _) if x == name => Some(Term::Bound(d)),
            _ => None,
        })
    }

    /// Rebuild bottom-up, letting `f` replace leaves (`Var`/`Bound`) given the λ-depth.
    fn map_lam(&self, depth: usize, f: &dyn Fn(usize, &Term) -> Option<Term>) -> Term {
        match self {
            Term::Var(..) | Term::Bound(_) => f(depth, self).unwrap_or_else(|| self.clone()),
            Term::Star | Term::Absurd(_) => self.clone(),
            Term::Ax(a, t) => Term::Ax(a.clone(), bx(t.map_lam(depth, f))),
            Term::Pair(s, t) => Term::pair(s.map_lam(depth, f), t.map_lam(depth, f)),
            Term::Fst(t) => Term::fst(t.map_lam(depth, f)),
            Term::Snd(t) => Term::snd(t.map_lam(depth, f)),
            Term::Inl(b, t) => Term::inl(b.clone(), t.map_lam(depth, f)),
            Term::Inr(b, t) => Term::inr(b.clone(), t.map_lam(depth, f)),
            Term::When(s, t, r) => Term::when(s.map_lam(depth, f), t.map_lam(depth, f), r.map_lam(depth, f)),
            Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), bx(b.map_lam(depth + 1, f))),
            Term::App(s, t) => Term::app(s.map_lam(depth, f), t.map_lam(depth, f)),
            Term::AllI(h, s, b) => Term::AllI(h.clone(), s.clone(), bx(b.map_lam(depth, f))),
            Term::AllE(t, r) => Term::all_e(t.map_lam(depth, f), r.clone()),
            Term::ExI { hint, sort, witness, body, term } => Term::ExI {
                hint: hint.clone(),
                sort: sort.clone(),
                witness: witness.clone(),
                body: body.clone(),
                term: bx(term.map_lam(depth, f)),
            },
            Term::ExE(t, h, s, r) => Term::ExE(bx(t.map_lam(depth, f)), h.clone(), s.clone(), bx(r.map_lam(depth, f))),
        }
    }

    pub(crate) fn open_logic_at(&self, k: usize, with: &LTerm) -> Term {
        self.map_logic(k, &|d, a| a.open_at(d, with), &|d, t| t.open_at(d, with))
    }

    pub(crate) fn close_logic_at(&self, k: usize, name: &Sym) -> Term {
        self.map_logic(k, &|d, a| a.close_at(d, name), &|d, t| t.close_at(d, name))
    }

    /// Apply `ff`/`ft` to every embedded formula / logical term, given the
    /// number of enclosing logical binders introduced by the term itself.
    fn map_logic(
        &self,
        depth: usize,
        ff: &dyn Fn(usize, &Formula) -> Formula,
        ft: &dyn Fn(usize, &LTerm) -> LTerm,
    ) -> Term {
        match self {
            Term::Var(x, ty) => Term::Var(x.clone(), ff(depth, ty)),
            Term::Bound(_) | Term::Star => self.clone(),
            Term::Absurd(a) => Term::Absurd(ff(depth, a)),
            Term::Ax(a, t) => Term::Ax(a.clone(), bx(t.map_logic(depth, ff, ft))),
            Term::Pair(s, t) => Term::pair(s.map_logic(depth, ff, ft), t.map_logic(depth, ff, ft)),
            Term::Fst(t) => Term::fst(t.map_logic(depth, ff, ft)),
            Term::Snd(t) => Term::snd(t.map_logic(depth, ff, ft)),
            Term::Inl(b, t) => Term::inl(ff(depth, b), t.map_logic(depth, ff, ft)),
            Term::Inr(b, t) => Term::inr(ff(depth, b), t.map_logic(depth, ff, ft)),
            Term::When(s, t, r) => {
                Term::when(s.map_logic(depth, ff, ft), t.map_logic(depth, ff, ft), r.map_logic(depth, ff, ft))
            }
            Term::Lam(h, ty, b) => Term::Lam(h.clone(), ff(depth, ty), bx(b.map_logic(depth, ff, ft))),
            Term::App(s, t) => Term::app(s.map_logic(depth, ff, ft), t.map_logic(depth, ff, ft)),
            Term::AllI(h, s, b) => Term::AllI(h.clone(), s.clone(), bx(b.map_logic(depth + 1, ff, ft))),
            Term::AllE(t, r) => Term::all_e(t.map_logic(depth, ff, ft), ft(depth, r)),
            Term::ExI { hint, sort, witness, body, term } => Term::ExI {
                hint: hint.clone(),
                sort: sort.clone(),
                witness: ft(depth, witness),
                body: ff(depth + 1, body),
                term: bx(term.map_logic(depth, ff, ft)),
            },
            Term::ExE(t, h, s, r) => Term::ExE(
                bx(t.map_logic(depth, ff, ft)),
                h.clone(),
                s.clone(),
                bx(r.map_logic(depth + 1, ff, ft)),
            ),
        }
    }

    /// Simultaneous capture-avoiding substitution of free λ-variables.
    pub fn subst(&self, map: &BTreeMap<Sym, Term>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        self.map_lam(0, &|_, t| match t {
            Term::Var(x, _) => map.get(x).cloned(),
            _ => None,
        })
    }

    /// `self[u/y]`.
    pub fn subst1(&self, y: &Sym, u: &Term) -> Term {
        self.map_lam(0, &|_, t| match t {
            Term::Var(x, _) if x == y => Some(u.clone()),
            _ => None,
        })
    }

    /// Substitute free logical variables everywhere: annotations, witnesses,
    /// `AllE` arguments and the types of variables.
    pub fn subst_logic(&self, map: &BTreeMap<Sym, LTerm>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        self.map_logic(0, &|_, a| a.subst(map), &|_, t| t.subst(map))
    }

    pub fn subst_logic1(&self, x: &Sym, r: &LTerm) -> Term {
        self.map_logic(0, &|_, a| a.subst1(x, r), &|_, t| t.subst1(x, r))
    }

    /// Free λ-variables with their annotated types.
    pub fn free_vars(&self) -> BTreeSet<(Sym, Formula)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Var(x, ty) = t {
                out.insert((x.clone(), ty.clone()));
            }
        });
        out
    }

    /// FV*: logical variables free in the types of the free λ-variables.
    pub fn fv_star(&self) -> BTreeSet<LVar> {
        let mut out = BTreeSet::new();
        for (_, ty) in self.free_vars() {
            ty.collect_fv(&mut out);
        }
        out
    }

    /// Every free logical variable occurring anywhere in the term.
    pub fn logic_vars(&self) -> BTreeSet<LVar> {
        let mut out = BTreeSet::new();
        self.visit_logic(&mut |e| match e {
            Embedded::Formula(a) => a.collect_fv(&mut out),
            Embedded::LTerm(t) => t.collect_fv(&mut out),
        });
        out
    }

    pub fn mentions_var(&self, x: &Sym) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if let Term::Var(y, _) = t {
                found |= y == x;
            }
        });
        found
    }

    pub fn mentions_logic(&self, x: &Sym) -> bool {
        let mut found = false;
        self.visit_logic(&mut |e| match e {
            Embedded::Formula(a) => found |= a.mentions(x),
            Embedded::LTerm(t) => found |= t.mentions(x),
        });
        found
    }

    /// Pre-order walk over all subterms (binder bodies unopened).
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    fn visit_logic(&self, f: &mut dyn FnMut(Embedded<'_>)) {
        match self {
            Term::Var(_, ty) | Term::Absurd(ty) => f(Embedded::Formula(ty)),
            Term::Inl(b, _) | Term::Inr(b, _) | Term::Lam(_, b, _) => f(Embedded::Formula(b)),
            Term::AllE(_, r) => f(Embedded::LTerm(r)),
            Term::ExI { witness, body, .. } => {
                f(Embedded::LTerm(witness));
                f(Embedded::Formula(body));
            }
            _ => {}
        }
        for c in self.children() {
            c.visit_logic(f);
        }
    }

    /// Immediate subterms, binder bodies unopened.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(..) | Term::Bound(_) | Term::Star | Term::Absurd(_) => Vec::new(),
            Term::Ax(_, t) | Term::Fst(t) | Term::Snd(t) | Term::Inl(_, t) | Term::Inr(_, t) => vec![t],
            Term::Lam(_, _, t) | Term::AllI(_, _, t) | Term::AllE(t, _) => vec![t],
            Term::ExI { term, .. } => vec![term],
            Term::Pair(s, t) | Term::App(s, t) | Term::ExE(s, _, _, t) => vec![s, t],
            Term::When(s, t, r) => vec![s, t, r],
        }
    }

    /// Immediate subterms with binder bodies opened at fresh names, together
    /// with what binds them. Feed the (possibly rewritten) children back to
    /// [`Term::with_children`] to rebuild.
    pub fn open_children(&self) -> Vec<(Binder, Term)> {
        match self {
            Term::Lam(..) => {
                let (x, ty, body) = self.open_lam().expect("lambda");
                vec![(Binder::Lam(x, ty), body)]
            }
            Term::AllI(..) => {
                let (y, s, body) = self.open_logic().expect("allI");
                vec![(Binder::Logic(y, s), body)]
            }
            Term::ExE(t, ..) => {
                let (y, s, body) = self.open_logic().expect("exE");
                vec![(Binder::None, (**t).clone()), (Binder::Logic(y, s), body)]
            }
            _ => self.children().into_iter().map(|c| (Binder::None, c.clone())).collect(),
        }
    }

    /// Rebuild this node with new children, closing over the binders
    /// returned by [`Term::open_children`].
    pub fn with_children(&self, binders: &[Binder], kids: Vec<Term>) -> Term {
        let mut it = kids.into_iter().zip(binders).map(|(k, b)| match b {
            Binder::None => k,
            Binder::Lam(x, _) => k.close_lam_at(0, x),
            Binder::Logic(y, _) => k.close_logic_at(0, y),
        });
        let mut next = || bx(it.next().expect("child count"));
        match self {
            Term::Var(..) | Term::Bound(_) | Term::Star | Term::Absurd(_) => self.clone(),
            Term::Ax(a, _) => Term::Ax(a.clone(), next()),
            Term::Pair(..) => Term::Pair(next(), next()),
            Term::Fst(_) => Term::Fst(next()),
            Term::Snd(_) => Term::Snd(next()),
            Term::Inl(b, _) => Term::Inl(b.clone(), next()),
            Term::Inr(b, _) => Term::Inr(b.clone(), next()),
            Term::When(..) => Term::When(next(), next(), next()),
            Term::Lam(h, ty, _) => Term::Lam(h.clone(), ty.clone(), next()),
            Term::App(..) => Term::App(next(), next()),
            Term::AllI(h, s, _) => Term::AllI(h.clone(), s.clone(), next()),
            Term::AllE(_, r) => Term::AllE(next(), r.clone()),
            Term::ExI { hint, sort, witness, body, .. } => Term::ExI {
                hint: hint.clone(),
                sort: sort.clone(),
                witness: witness.clone(),
                body: body.clone(),
                term: next(),
            },
            Term::ExE(_, h, s, _) => {
                let t = next();
                Term::ExE(t, h.clone(), s.clone(), next())
            }
        }
    }

    /// No dangling λ-indices (logical indices are checked by typing).
    pub fn is_locally_closed(&self) -> bool {
        self.lam_closed_at(0)
    }

    /// No dangling indices of either kind.
    pub fn is_closed(&self) -> bool {
        self.lam_closed_at(0) && self.logic_closed_at(0)
    }

    fn logic_closed_at(&self, depth: usize) -> bool {
        let here = match self {
            Term::Var(_, ty) | Term::Absurd(ty) | Term::Inl(ty, _) | Term::Inr(ty, _) | Term::Lam(_, ty, _) => {
                ty.closed_at(depth)
            }
            Term::AllE(_, r) => r.closed_at(depth),
            Term::ExI { witness, body, .. } => witness.closed_at(depth) && body.closed_at(depth + 1),
            _ => true,
        };
        here && match self {
            Term::AllI(_, _, b) => b.logic_closed_at(depth + 1),
            Term::ExE(t, _, _, r) => t.logic_closed_at(depth) && r.logic_closed_at(depth + 1),
            _ => self.children().iter().all(|c| c.logic_closed_at(depth)),
        }
    }

    /// Replace every occurrence of the closed subterm `pat` by `with`.
    pub fn replace(&self, pat: &Term, with: &Term) -> Term {
        if self == pat {
            return with.clone();
        }
        let kids: Vec<Term> = self.children().into_iter().map(|c| c.replace(pat, with)).collect();
        if kids.is_empty() {
            return self.clone();
        }
        let binders = vec![Binder::None; kids.len()];
        self.with_children(&binders, kids)
    }

    /// Number of occurrences of the subterm `pat`.
    pub fn count(&self, pat: &Term) -> usize {
        let mut n = 0;
        self.visit(&mut |t| n += usize::from(t == pat));
        n
    }

    fn lam_closed_at(&self, depth: usize) -> bool {
        match self {
            Term::Bound(i) => *i < depth,
            Term::Lam(_, _, b) => b.lam_closed_at(depth + 1),
            _ => self.children().iter().all(|c| c.lam_closed_at(depth)),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Short constructor name, used in reports.
    pub fn head_name(&self) -> &'static str {
        match self {
            Term::Var(..) | Term::Bound(_) => "lvar",
            Term::Ax(..) => "ax",
            Term::Pair(..) => "pair",
            Term::Fst(_) => "fst",
            Term::Snd(_) => "snd",
            Term::Inl(..) => "inl",
            Term::Inr(..) => "inr",
            Term::When(..) => "when",
            Term::Lam(..) => "lam",
            Term::App(..) => "apl",
            Term::Star => "star",
            Term::Absurd(_) => "absurd",
            Term::AllI(..) => "alli",
            Term::AllE(..) => "alle",
            Term::ExI { .. } => "exi",
            Term::ExE(..) => "exe",
        }
    }
}

/// Readable notation for messages: `λx:A. t`, `⟨s, t⟩`, `(t u)`, `Λx:s. t`, `F_A`.
impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.write_with(&mut Vec::new(), &mut Vec::new(), f)
    }
}

impl Term {
    fn write_with(&self, lam: &mut Vec<Sym>, logic: &mut Vec<Sym>, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ty = |a: &Formula, logic: &mut Vec<Sym>, f: &mut std::fmt::Formatter<'_>| a.write_with(logic, f);
        match self {
            Term::Var(x, _) => write!(f, "{x}"),
            Term::Bound(i) => match lam.len().checked_sub(i + 1) {
                Some(k) => write!(f, "{}", lam[k].base()),
                None => write!(f, "#{i}"),
            },
            Term::Ax(a, t) => {
                write!(f, "{a}(")?;
                t.write_with(lam, logic, f)?;
                f.write_str(")")
            }
            Term::Pair(s, t) => {
                f.write_str("⟨")?;
                s.write_with(lam, logic, f)?;
                f.write_str(", ")?;
                t.write_with(lam, logic, f)?;
                f.write_str("⟩")
            }
            Term::Fst(t) | Term::Snd(t) | Term::Inl(_, t) | Term::Inr(_, t) => {
                let head = match self {
                    Term::Fst(_) => "fst",
                    Term::Snd(_) => "snd",
                    Term::Inl(..) => "inl",
                    _ => "inr",
                };
                write!(f, "{head}(")?;
                t.write_with(lam, logic, f)?;
                f.write_str(")")
            }
            Term::When(s, t, r) => {
                f.write_str("when(")?;
                s.write_with(lam, logic, f)?;
                f.write_str(", ")?;
                t.write_with(lam, logic, f)?;
                f.write_str(", ")?;
                r.write_with(lam, logic, f)?;
                f.write_str(")")
            }
            Term::Lam(h, a, body) => {
                write!(f, "(λ{}:", h.0.base())?;
                ty(a, logic, f)?;
                f.write_str(". ")?;
                lam.push(h.0.clone());
                let r = body.write_with(lam, logic, f);
                lam.pop();
                r?;
                f.write_str(")")
            }
            Term::App(s, t) => {
                f.write_str("(")?;
                s.write_with(lam, logic, f)?;
                f.write_str(" ")?;
                t.write_with(lam, logic, f)?;
                f.write_str(")")
            }
            Term::Star => f.write_str("∗"),
            Term::Absurd(a) => {
                f.write_str("F_")?;
                ty(a, logic, f)
            }
            Term::AllI(h, s, body) => {
                write!(f, "(Λ{}:{s}. ", h.0.base())?;
                logic.push(h.0.clone());
                let r = body.write_with(lam, logic, f);
                logic.pop();
                r?;
                f.write_str(")")
            }
            Term::AllE(t, r) => {
                f.write_str("(")?;
                t.write_with(lam, logic, f)?;
                f.write_str(" @")?;
                r.write_with(logic, f)?;
                f.write_str(")")
            }
            Term::ExI { witness, term, .. } => {
                f.write_str("exI(")?;
                witness.write_with(logic, f)?;
                f.write_str(", ")?;
                term.write_with(lam, logic, f)?;
                f.write_str(")")
            }
            Term::ExE(t, h, s, r) => {
                f.write_str("exE(")?;
                t.write_with(lam, logic, f)?;
                write!(f, ", λ{}:{s}. ", h.0.base())?;
                logic.push(h.0.clone());
                let out = r.write_with(lam, logic, f);
                logic.pop();
                out?;
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::prop("a")
    }

    #[test]
    fn lambda_binder_removes_variable() {
        let x = Sym::new("x");
        let t = Term::lam(&x, a(), Term::Var(x.clone(), a()));
        assert!(t.free_vars().is_empty());
    }

    #[test]
    fn pair_free_vars_are_the_union() {
        let u = Term::var("u", a());
        let v = Term::var("v", Formula::One);
        let fv = Term::pair(u, v).free_vars();
        assert_eq!(fv.len(), 2);
    }

    #[test]
    fn fv_star_reads_variable_types() {
        let ty = Formula::atom("p", vec![LTerm::var("x", "s")]);
        let w = Term::var("w", ty);
        let fv = w.fv_star();
        assert!(fv.contains(&(Sym::new("x"), Sym::new("s"))));
    }

    #[test]
    fn substitution_does_not_capture_lambda_variables() {
        // (λx. y x)[x/y] = λw. x w
        let arrow = Formula::arrow(a(), a());
        let (x, y) = (Sym::new("x"), Sym::new("y"));
        let body = Term::app(Term::Var(y.clone(), arrow.clone()), Term::Var(x.clone(), a()));
        let t = Term::lam(&x, a(), body);
        let out = t.subst1(&y, &Term::Var(x.clone(), arrow.clone()));
        let w = Sym::new("w");
        let expected = Term::lam(&w, a(), Term::app(Term::Var(x, arrow), Term::Var(w.clone(), a())));
        assert_eq!(out, expected);
    }

    #[test]
    fn logical_substitution_reaches_variable_types() {
        let ty = Formula::atom("p", vec![LTerm::var("x", "s")]);
        let w = Term::var("w", ty);
        let r = LTerm::constant("c", "s");
        let out = w.subst_logic1(&Sym::new("x"), &r);
        assert_eq!(out, Term::var("w", Formula::atom("p", vec![r])));
    }

    #[test]
    fn alpha_equivalent_binders_compare_equal() {
        let s = Sym::new("s");
        let mk = |x: &str| {
            let xs = Sym::new(x);
            let ty = Formula::atom("p", vec![LTerm::var(x, "s")]);
            Term::all_i(&xs, &s, Term::lam(&Sym::new("h"), ty.clone(), Term::Var(Sym::new("h"), ty)))
        };
        assert_eq!(mk("x"), mk("y"));
        assert_ne!(Term::var("x", a()), Term::var("y", a()));
    }

    #[test]
    fn open_and_rebuild_children_round_trips() {
        let s = Sym::new("s");
        let x = Sym::new("x");
        let ty = Formula::atom("p", vec![LTerm::var("x", "s")]);
        let h = Sym::new("h");
        let t = Term::all_i(&x, &s, Term::lam(&h, ty.clone(), Term::Var(h.clone(), ty)));
        let opened = t.open_children();
        let (binders, kids): (Vec<_>, Vec<_>) = opened.into_iter().unzip();
        assert_eq!(t.with_children(&binders, kids), t);
    }
}
