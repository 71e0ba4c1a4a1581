use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{RuleId, Theory};
use crate::syntax::{fresh, synth, Context, Formula, LTerm, LambdaSignature, Sym, Term};

/// Why a step was taken: a schema of the calculus or a theory axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepRule {
    Rule(RuleId),
    Axiom { index: usize, reversed: bool },
}

impl StepRule {
    pub fn tag(&self) -> String {
        match self {
            StepRule::Rule(r) => r.tag().to_string(),
            StepRule::Axiom { index, reversed: false } => format!("axiom{index}"),
            StepRule::Axiom { index, reversed: true } => format!("axiom{index}-rev"),
        }
    }
}

/// One rewrite: `result` is the whole term after replacing `redex` at `path`
/// (child indices, binders opened) by `contractum`.
#[derive(Clone, Debug)]
pub struct Step {
    pub rule: StepRule,
    pub path: Vec<usize>,
    pub redex: Term,
    pub contractum: Term,
    pub result: Term,
}

#[derive(Clone, Debug, Default)]
pub struct RewriteTrace {
    pub steps: Vec<Step>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = &StepRule> {
        self.steps.iter().map(|s| &s.rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("step budget of {0} exceeded")]
    Budget(usize),
}

/// An axiom `lhs = rhs` used left to right, context variables as pattern variables.
#[derive(Clone, Debug)]
struct Oriented {
    index: usize,
    reversed: bool,
    vars: Context,
    lhs: Term,
    rhs: Term,
}

/// The oriented rule set: the built-in contractions plus the theory axioms
/// that shrink strictly by size.
#[derive(Clone, Debug)]
pub struct Rewriter<'a> {
    pub sig: &'a LambdaSignature,
    /// Every usable direction of every axiom.
    all: Vec<Oriented>,
    /// Indices into `all` applied during normalisation.
    oriented: Vec<usize>,
    pub budget: usize,
}

impl<'a> Rewriter<'a> {
    pub fn pure(sig: &'a LambdaSignature) -> Self {
        Rewriter { sig, all: Vec::new(), oriented: Vec::new(), budget: 10_000 }
    }

    /// Orientable axioms become rewrite rules; the indices of the others are
    /// returned for bounded search.
    pub fn for_theory(th: &'a Theory) -> (Self, Vec<usize>) {
        let mut rw = Rewriter::pure(&th.sig);
        let mut rest = Vec::new();
        for (i, ax) in th.axioms.iter().enumerate() {
            let vars = |t: &Term| t.free_vars().into_iter().map(|(x, _)| x).collect::<BTreeSet<_>>();
            let (l, r) = (vars(&ax.lhs), vars(&ax.rhs));
            let mut add = |reversed: bool| {
                let (lhs, rhs) = if reversed { (&ax.rhs, &ax.lhs) } else { (&ax.lhs, &ax.rhs) };
                rw.all.push(Oriented { index: i, reversed, vars: ax.ctx.clone(), lhs: lhs.clone(), rhs: rhs.clone() });
                rw.all.len() - 1
            };
            let fwd = r.is_subset(&l).then(|| add(false));
            let bwd = l.is_subset(&r).then(|| add(true));
            match (fwd, bwd) {
                (Some(k), _) if ax.lhs.size() > ax.rhs.size() => rw.oriented.push(k),
                (_, Some(k)) if ax.rhs.size() > ax.lhs.size() => rw.oriented.push(k),
                _ => rest.push(i),
            }
        }
        (rw, rest)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// One leftmost-innermost step.
    pub fn step(&self, t: &Term) -> Option<Step> {
        let (rule, mut path, redex, contractum, result) = self.step_at(t)?;
        path.reverse();
        Some(Step { rule, path, redex, contractum, result })
    }

    fn step_at(&self, t: &Term) -> Option<(StepRule, Vec<usize>, Term, Term, Term)> {
        let opened = t.open_children();
        for (i, (_, kid)) in opened.iter().enumerate() {
            if let Some((rule, mut path, redex, contractum, new_kid)) = self.step_at(kid) {
                let (binders, mut kids): (Vec<_>, Vec<_>) = opened.into_iter().unzip();
                kids[i] = new_kid;
                path.push(i);
                return Some((rule, path, redex, contractum, t.with_children(&binders, kids)));
            }
        }
        let (rule, out) = self.contract(t)?;
        Some((rule, Vec::new(), t.clone(), out.clone(), out))
    }

    /// A contraction at the root of a locally closed term.
    pub fn contract(&self, t: &Term) -> Option<(StepRule, Term)> {
        if let Some((r, out)) = contract_builtin(self.sig, t) {
            return Some((StepRule::Rule(r), out));
        }
        self.oriented.iter().find_map(|&k| self.apply(&self.all[k], t))
    }

    fn apply(&self, o: &Oriented, t: &Term) -> Option<(StepRule, Term)> {
        let mut sub = BTreeMap::new();
        match_pattern(self.sig, &o.lhs, t, &o.vars, &mut sub)
            .then(|| (StepRule::Axiom { index: o.index, reversed: o.reversed }, o.rhs.subst(&sub)))
    }

    /// A step with exactly the given rule at the root of `t`.
    fn contract_with(&self, t: &Term, rule: &StepRule) -> Option<Term> {
        match rule {
            StepRule::Rule(r) => contract_builtin(self.sig, t).filter(|(id, _)| id == r).map(|(_, out)| out),
            StepRule::Axiom { index, reversed } => self
                .all
                .iter()
                .filter(|o| o.index == *index && o.reversed == *reversed)
                .find_map(|o| self.apply(o, t))
                .map(|(_, out)| out),
        }
    }

    /// Every single application of an axiom, in either usable direction, at any position.
    pub fn axiom_steps(&self, t: &Term) -> Vec<Step> {
        let mut out = Vec::new();
        self.axiom_steps_at(t, &mut Vec::new(), &mut |rule, path, redex, contractum, result| {
            out.push(Step { rule, path, redex, contractum, result })
        });
        out
    }

    fn axiom_steps_at(
        &self,
        t: &Term,
        path: &mut Vec<usize>,
        emit: &mut dyn FnMut(StepRule, Vec<usize>, Term, Term, Term),
    ) {
        for o in &self.all {
            if let Some((rule, out)) = self.apply(o, t) {
                emit(rule, path.clone(), t.clone(), out.clone(), out);
            }
        }
        let opened = t.open_children();
        let (binders, kids): (Vec<_>, Vec<_>) = opened.into_iter().unzip();
        for i in 0..kids.len() {
            path.push(i);
            self.axiom_steps_at(&kids[i], path, &mut |rule, p, redex, contractum, new_kid| {
                let mut k2 = kids.clone();
                k2[i] = new_kid;
                emit(rule, p, redex, contractum, t.with_children(&binders, k2))
            });
            path.pop();
        }
    }

    pub fn normalize(&self, t: &Term) -> Result<(Term, RewriteTrace), RewriteError> {
        let mut cur = t.clone();
        let mut trace = RewriteTrace::default();
        while let Some(s) = self.step(&cur) {
            if trace.steps.len() >= self.budget {
                return Err(RewriteError::Budget(self.budget));
            }
            cur = s.result.clone();
            trace.steps.push(s);
        }
        Ok((cur, trace))
    }
}

/// One leftmost-innermost step of the pure calculus.
pub fn step(sig: &LambdaSignature, t: &Term) -> Option<Step> {
    Rewriter::pure(sig).step(t)
}

/// Normal form of the pure calculus with the default budget.
pub fn normalize(sig: &LambdaSignature, t: &Term) -> Result<(Term, RewriteTrace), RewriteError> {
    Rewriter::pure(sig).normalize(t)
}

/// Re-run a trace from `start`: every step must contract at its path by its
/// rule and produce the recorded result (up to α).
pub fn replay(rw: &Rewriter<'_>, start: &Term, trace: &RewriteTrace) -> bool {
    let mut cur = start.clone();
    for s in &trace.steps {
        match replay_at(rw, &cur, &s.path, &s.rule) {
            Some(next) if next == s.result => cur = next,
            _ => return false,
        }
    }
    true
}

fn replay_at(rw: &Rewriter<'_>, t: &Term, path: &[usize], rule: &StepRule) -> Option<Term> {
    match path.split_first() {
        None => rw.contract_with(t, rule),
        Some((&i, rest)) => {
            let (binders, mut kids): (Vec<_>, Vec<_>) = t.open_children().into_iter().unzip();
            let kid = kids.get(i)?;
            kids[i] = replay_at(rw, kid, rest, rule)?;
            Some(t.with_children(&binders, kids))
        }
    }
}

/// The oriented schemas at the root of `t`.
pub(crate) fn contract_builtin(sig: &LambdaSignature, t: &Term) -> Option<(RuleId, Term)> {
    match t {
        Term::Fst(p) => match &**p {
            Term::Pair(a, _) => Some((RuleId::X1, (**a).clone())),
            _ => None,
        },
        Term::Snd(p) => match &**p {
            Term::Pair(_, b) => Some((RuleId::X2, (**b).clone())),
            _ => None,
        },
        Term::Pair(a, b) => match (&**a, &**b) {
            (Term::Fst(z1), Term::Snd(z2)) if z1 == z2 => Some((RuleId::X3, (**z1).clone())),
            _ => None,
        },
        Term::When(s, l, r) => match &**s {
            Term::Inl(_, a) => Some((RuleId::P0, Term::app((**l).clone(), (**a).clone()))),
            Term::Inr(_, b) => Some((RuleId::P1, Term::app((**r).clone(), (**b).clone()))),
            Term::When(x0, x1, x2) => {
                let (a1, a2) = match synth(sig, x0).ok()? {
                    Formula::Sum(a1, a2) => (*a1, *a2),
                    _ => return None,
                };
                let branch = |xi: &Term, ai: Formula| {
                    let y = fresh("y");
                    let body = Term::when(Term::app(xi.clone(), Term::Var(y.clone(), ai.clone())), (**l).clone(), (**r).clone());
                    Term::lam(&y, ai, body)
                };
                Some((RuleId::P2, Term::when((**x0).clone(), branch(x1, a1), branch(x2, a2))))
            }
            _ => None,
        },
        Term::App(f, u) => match &**f {
            Term::Lam(..) => Some((RuleId::A0, f.lam_body_at(u)?)),
            _ => None,
        },
        Term::Lam(_, _, body) => match &**body {
            Term::App(f, y) if **y == Term::Bound(0) && f.is_locally_closed() => Some((RuleId::A1, (**f).clone())),
            _ => None,
        },
        Term::AllE(u, r) => match &**u {
            Term::AllI(..) => Some((RuleId::F0, u.logic_body_at(r)?)),
            _ => None,
        },
        Term::ExE(a, h, s, body) => {
            if let Term::ExI { witness, term, .. } = &**a {
                let v = t.logic_body_at(witness)?;
                return Some((RuleId::E0, Term::app(v, (**term).clone())));
            }
            if let Term::ExE(a2, h2, s2, inner) = &**a {
                if let Term::Lam(hz, d, b) = &**inner {
                    // The outer body moves under the inner binders; it refers to
                    // neither, so no index adjustment is needed.
                    let moved = Term::ExE(b.clone(), h.clone(), s.clone(), body.clone());
                    let lam = Term::Lam(hz.clone(), d.clone(), Box::new(moved));
                    return Some((RuleId::E3, Term::ExE(a2.clone(), h2.clone(), s2.clone(), Box::new(lam))));
                }
            }
            contract_e4(sig, t)
        }
        _ => None,
    }
}

/// `exE(a, λy.λz:C. b[exI_y(z)/w])  ⟶  b[a/w]` when `y`, `z` occur nowhere else.
fn contract_e4(sig: &LambdaSignature, t: &Term) -> Option<(RuleId, Term)> {
    let Term::ExE(a, ..) = t else { return None };
    let (y, s, r) = t.open_logic()?;
    let (z, cy, b) = r.open_lam()?;
    let Formula::Exists(_, s2, cb) = synth(sig, a).ok()? else { return None };
    if s2 != s {
        return None;
    }
    let pat = Term::ExI {
        hint: crate::syntax::Hint(y.clone()),
        sort: s.clone(),
        witness: LTerm::Var(y.clone(), s.clone()),
        body: (*cb).clone(),
        term: Box::new(Term::Var(z.clone(), cy)),
    };
    let out = b.replace(&pat, a);
    if out.mentions_var(&z) || out.mentions_logic(&y) {
        return None;
    }
    Some((RuleId::E4, out))
}

/// First-order matching of a closed pattern; pattern variables are those of `vars`
/// and bind closed subterms of the declared type.
pub(crate) fn match_pattern(
    sig: &LambdaSignature,
    pat: &Term,
    t: &Term,
    vars: &Context,
    sub: &mut BTreeMap<Sym, Term>,
) -> bool {
    if let Term::Var(x, ty) = pat {
        if vars.get(x).is_some() {
            if !t.is_closed() || synth(sig, t).ok().as_ref() != Some(ty) {
                return false;
            }
            return match sub.get(x) {
                Some(prev) => prev == t,
                None => {
                    sub.insert(x.clone(), t.clone());
                    true
                }
            };
        }
    }
    let same_node = match (pat, t) {
        (Term::Var(..), Term::Var(..)) | (Term::Bound(_), Term::Bound(_)) | (Term::Star, Term::Star) => pat == t,
        (Term::Absurd(a), Term::Absurd(b)) => a == b,
        (Term::Ax(a, _), Term::Ax(b, _)) => a == b,
        (Term::Inl(a, _), Term::Inl(b, _)) | (Term::Inr(a, _), Term::Inr(b, _)) => a == b,
        (Term::Lam(_, a, _), Term::Lam(_, b, _)) => a == b,
        (Term::AllI(_, a, _), Term::AllI(_, b, _)) => a == b,
        (Term::AllE(_, a), Term::AllE(_, b)) => a == b,
        (Term::ExE(_, _, a, _), Term::ExE(_, _, b, _)) => a == b,
        (
            Term::ExI { sort: s1, witness: w1, body: b1, .. },
            Term::ExI { sort: s2, witness: w2, body: b2, .. },
        ) => s1 == s2 && w1 == w2 && b1 == b2,
        (Term::Pair(..), Term::Pair(..))
        | (Term::Fst(_), Term::Fst(_))
        | (Term::Snd(_), Term::Snd(_))
        | (Term::When(..), Term::When(..))
        | (Term::App(..), Term::App(..)) => true,
        _ => false,
    };
    same_node && pat.children().iter().zip(t.children()).all(|(p, c)| match_pattern(sig, p, c, vars, sub))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{LogicalSignature, RelDecl};

    fn sig() -> LambdaSignature {
        LambdaSignature::new(LogicalSignature {
            sorts: vec![Sym::new("s")],
            funs: vec![crate::syntax::FunDecl { name: Sym::new("c"), args: vec![], result: Sym::new("s") }],
            rels: vec![
                RelDecl { name: Sym::new("a"), args: vec![] },
                RelDecl { name: Sym::new("b"), args: vec![] },
                RelDecl { name: Sym::new("p"), args: vec![Sym::new("s")] },
            ],
        })
    }

    fn a() -> Formula {
        Formula::prop("a")
    }

    fn b() -> Formula {
        Formula::prop("b")
    }

    #[test]
    fn fst_of_pair() {
        let t = Term::fst(Term::pair(Term::var("u", a()), Term::var("v", b())));
        let s = step(&sig(), &t).unwrap();
        assert_eq!(s.rule, StepRule::Rule(RuleId::X1));
        assert_eq!(s.result, Term::var("u", a()));
    }

    #[test]
    fn when_of_inl() {
        let f = Term::var("f", Formula::arrow(a(), b()));
        let g = Term::var("g", Formula::arrow(b(), b()));
        let t = Term::when(Term::inl(b(), Term::var("u", a())), f.clone(), g);
        let s = step(&sig(), &t).unwrap();
        assert_eq!(s.rule, StepRule::Rule(RuleId::P0));
        assert_eq!(s.result, Term::app(f, Term::var("u", a())));
    }

    #[test]
    fn beta_then_normal() {
        let y = Sym::new("y");
        let body = Term::pair(Term::Var(y.clone(), a()), Term::Var(y.clone(), a()));
        let t = Term::app(Term::lam(&y, a(), body), Term::var("u", a()));
        let (nf, trace) = normalize(&sig(), &t).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(nf, Term::pair(Term::var("u", a()), Term::var("u", a())));
        assert!(replay(&Rewriter::pure(&sig()), &t, &trace));
    }

    #[test]
    fn forall_beta() {
        let (z, s) = (Sym::new("z"), Sym::new("s"));
        let pz = Formula::atom("p", vec![LTerm::var("z", "s")]);
        let h = Sym::new("h");
        let t = Term::all_i(&z, &s, Term::lam(&h, pz.clone(), Term::Var(h.clone(), pz)));
        let c = LTerm::constant("c", "s");
        let st = step(&sig(), &Term::all_e(t, c.clone())).unwrap();
        assert_eq!(st.rule, StepRule::Rule(RuleId::F0));
        let pc = Formula::atom("p", vec![c]);
        assert_eq!(st.result, Term::lam(&h, pc.clone(), Term::Var(h.clone(), pc)));
    }

    #[test]
    fn exists_beta() {
        let (z, s) = (Sym::new("z"), Sym::new("s"));
        let pz = Formula::atom("p", vec![LTerm::var("z", "s")]);
        let c = LTerm::constant("c", "s");
        let pc = Formula::atom("p", vec![c.clone()]);
        let packed = Term::ex_i(&z, &s, c.clone(), pz.clone(), Term::var("u", pc.clone()));
        let k = Term::var("k", Formula::forall(&z, &s, Formula::arrow(pz.clone(), a())));
        let body = Term::all_e(k.clone(), LTerm::var("z", "s"));
        let t = Term::ex_e(packed, &z, &s, body);
        let (nf, _) = normalize(&sig(), &t).unwrap();
        assert_eq!(nf, Term::app(Term::all_e(k, c), Term::var("u", pc)));
    }

    #[test]
    fn variable_is_normal() {
        assert!(step(&sig(), &Term::var("x", a())).is_none());
    }

    #[test]
    fn eta_contraction() {
        let y = Sym::new("y");
        let f = Term::var("f", Formula::arrow(a(), b()));
        let t = Term::lam(&y, a(), Term::app(f.clone(), Term::Var(y.clone(), a())));
        assert_eq!(step(&sig(), &t).unwrap().result, f);
    }
}
