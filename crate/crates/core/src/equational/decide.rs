use std::cell::Cell;
use std::collections::HashSet;

use super::rewrite::{RewriteTrace, Rewriter};
use super::{RuleId, Theory};
use crate::syntax::{
    check_equality_in_context, fresh, synth, Context, EqualityInContext, Formula, Hint, LTerm, Sym, Term, TypeError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Depth of the bounded axiom search.
    pub depth: usize,
    /// Rewrite steps allowed per normalisation.
    pub budget: usize,
    /// Case splits allowed per decision.
    pub split_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { depth: 6, budget: 10_000, split_limit: 256 }
    }
}

/// Why two terms are equal. Every node can be re-checked by [`verify_evidence`].
#[derive(Clone, Debug)]
pub enum Evidence {
    /// A context variable of type 0 makes all terms equal.
    Inconsistent { var: Sym },
    /// Both sides were rewritten to normal form first.
    Normalize { lhs: RewriteTrace, rhs: RewriteTrace, then: Box<Evidence> },
    /// Syntactically equal up to bound names.
    Alpha,
    /// Both sides have type 1.
    Unit,
    /// Components compared after projecting.
    Pair(Box<Evidence>, Box<Evidence>),
    /// Both sides applied to a fresh variable.
    Arrow { var: Sym, body: Box<Evidence> },
    /// Both sides instantiated at a fresh logical variable.
    Forall { var: Sym, body: Box<Evidence> },
    /// A closed subterm of type 0 occurs.
    ZeroNeutral { neutral: Term },
    /// Case analysis on a closed stuck subterm of sum type.
    SumSplit { neutral: Term, left: (Sym, Box<Evidence>), right: (Sym, Box<Evidence>) },
    /// A closed stuck subterm of existential type replaced by a generic witness.
    ExistsSplit { neutral: Term, witness: Sym, var: Sym, body: Box<Evidence> },
    /// Same head, arguments compared pairwise.
    Congruence(Vec<Evidence>),
    /// Bounded search with theory axioms, then comparison.
    Axioms { lhs: RewriteTrace, rhs: RewriteTrace, then: Box<Evidence> },
}

impl Evidence {
    /// The schemas this justification relies on.
    pub fn rules(&self) -> Vec<RuleId> {
        let mut out = Vec::new();
        self.collect(&mut out, &mut Vec::new());
        out.sort();
        out.dedup();
        out
    }

    /// Schema tags followed by the theory axioms used (`axiomN`, `axiomN-rev`).
    pub fn tags(&self) -> Vec<String> {
        let (mut rules, mut axioms) = (Vec::new(), Vec::new());
        self.collect(&mut rules, &mut axioms);
        rules.sort();
        rules.dedup();
        axioms.sort();
        axioms.dedup();
        rules.iter().map(|r| r.tag().to_string()).chain(axioms).collect()
    }

    fn collect(&self, out: &mut Vec<RuleId>, axioms: &mut Vec<String>) {
        let mut trace_rules = |t: &RewriteTrace, out: &mut Vec<RuleId>| {
            for r in t.rules() {
                match r {
                    super::StepRule::Rule(id) => out.push(*id),
                    other => axioms.push(other.tag()),
                }
            }
        };
        match self {
            Evidence::Inconsistent { .. } | Evidence::ZeroNeutral { .. } => out.push(RuleId::P3),
            Evidence::Normalize { lhs, rhs, then } | Evidence::Axioms { lhs, rhs, then } => {
                trace_rules(lhs, out);
                trace_rules(rhs, out);
                then.collect(out, axioms);
            }
            Evidence::Alpha => out.push(RuleId::Eq2),
            Evidence::Unit => out.push(RuleId::X0),
            Evidence::Pair(a, b) => {
                out.push(RuleId::X3);
                a.collect(out, axioms);
                b.collect(out, axioms);
            }
            Evidence::Arrow { body, .. } => {
                out.push(RuleId::A1);
                body.collect(out, axioms);
            }
            Evidence::Forall { body, .. } => {
                out.push(RuleId::F1);
                body.collect(out, axioms);
            }
            Evidence::SumSplit { left, right, .. } => {
                left.1.collect(out, axioms);
                right.1.collect(out, axioms);
            }
            Evidence::ExistsSplit { body, .. } => {
                out.push(RuleId::E2);
                body.collect(out, axioms);
            }
            Evidence::Congruence(kids) => {
                out.push(RuleId::Eq1);
                kids.iter().for_each(|k| k.collect(out, axioms));
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Equal(Evidence),
    /// Not equal; with axioms present the answer only covers search depth `bound`.
    NotEqual { bound: Option<usize> },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }
}

/// Decide `ctx. lhs =_ty rhs` in the theory.
pub fn decide_eq(th: &Theory, eq: &EqualityInContext, cfg: Config) -> Result<Verdict, TypeError> {
    check_equality_in_context(&th.sig, eq)?;
    let (rw, rest) = Rewriter::for_theory(th);
    let d = Decider { rw: rw.with_budget(cfg.budget), splits: Cell::new(cfg.split_limit) };
    if let Some(ev) = d.conv(&eq.ctx, &eq.lhs, &eq.rhs, &eq.ty) {
        return Ok(Verdict::Equal(ev));
    }
    if th.axioms.is_empty() {
        return Ok(Verdict::NotEqual { bound: None });
    }
    if !rest.is_empty() {
        if let Some(ev) = d.search(&eq.ctx, &eq.lhs, &eq.rhs, &eq.ty, cfg.depth) {
            return Ok(Verdict::Equal(ev));
        }
    }
    Ok(Verdict::NotEqual { bound: Some(cfg.depth) })
}

struct Decider<'a> {
    rw: Rewriter<'a>,
    splits: Cell<usize>,
}

fn zero_var(ctx: &Context) -> Option<Sym> {
    ctx.entries().iter().find(|(_, a)| *a == Formula::Zero).map(|(x, _)| x.clone())
}

/// The first closed, non-introduction subterm of type `+`, `∃` or `0`, innermost first.
fn candidate(sig: &crate::syntax::LambdaSignature, t: &Term) -> Option<(Term, Formula)> {
    for c in t.children() {
        if let Some(found) = candidate(sig, c) {
            return Some(found);
        }
    }
    if matches!(t, Term::Inl(..) | Term::Inr(..) | Term::ExI { .. }) || !t.is_closed() {
        return None;
    }
    match synth(sig, t) {
        Ok(ty @ (Formula::Sum(..) | Formula::Exists(..) | Formula::Zero)) => Some((t.clone(), ty)),
        _ => None,
    }
}

fn generic_witness(h: &Hint, s: &Sym, body: &Formula) -> (Sym, Sym, Term) {
    let y = fresh(h.0.as_str());
    let z = fresh("z");
    let ty = body.open_at(0, &LTerm::Var(y.clone(), s.clone()));
    let e = Term::ExI {
        hint: h.clone(),
        sort: s.clone(),
        witness: LTerm::Var(y.clone(), s.clone()),
        body: body.clone(),
        term: Box::new(Term::Var(z.clone(), ty)),
    };
    (y, z, e)
}

impl Decider<'_> {
    fn conv(&self, ctx: &Context, s: &Term, t: &Term, ty: &Formula) -> Option<Evidence> {
        if let Some(var) = zero_var(ctx) {
            return Some(Evidence::Inconsistent { var });
        }
        let (s1, lhs) = self.rw.normalize(s).ok()?;
        let (t1, rhs) = self.rw.normalize(t).ok()?;
        let ev = self.ext(ctx, &s1, &t1, ty)?;
        if lhs.is_empty() && rhs.is_empty() {
            Some(ev)
        } else {
            Some(Evidence::Normalize { lhs, rhs, then: Box::new(ev) })
        }
    }

    fn ext(&self, ctx: &Context, s: &Term, t: &Term, ty: &Formula) -> Option<Evidence> {
        if s == t {
            return Some(Evidence::Alpha);
        }
        match ty {
            Formula::One => Some(Evidence::Unit),
            Formula::Prod(a, b) => {
                let l = self.conv(ctx, &Term::fst(s.clone()), &Term::fst(t.clone()), a)?;
                let r = self.conv(ctx, &Term::snd(s.clone()), &Term::snd(t.clone()), b)?;
                Some(Evidence::Pair(Box::new(l), Box::new(r)))
            }
            Formula::Arrow(c, b) => {
                let x = fresh("x");
                let xv = Term::Var(x.clone(), (**c).clone());
                let inner = ctx.with(x.clone(), (**c).clone()).ok()?;
                let body = self.conv(&inner, &Term::app(s.clone(), xv.clone()), &Term::app(t.clone(), xv), b)?;
                Some(Evidence::Arrow { var: x, body: Box::new(body) })
            }
            Formula::Forall(h, srt, b) => {
                let y = fresh(h.0.as_str());
                let yv = LTerm::Var(y.clone(), srt.clone());
                let body = self.conv(ctx, &Term::all_e(s.clone(), yv.clone()), &Term::all_e(t.clone(), yv.clone()), &b.open_at(0, &yv))?;
                Some(Evidence::Forall { var: y, body: Box::new(body) })
            }
            _ => {
                let found = candidate(self.rw.sig, s).or_else(|| candidate(self.rw.sig, t));
                match found {
                    Some((n, nty)) => self.split(ctx, s, t, ty, n, nty),
                    None => self.structural(ctx, s, t).map(|(ev, _)| ev),
                }
            }
        }
    }

    fn split(&self, ctx: &Context, s: &Term, t: &Term, ty: &Formula, n: Term, nty: Formula) -> Option<Evidence> {
        let left = self.splits.get().checked_sub(1)?;
        self.splits.set(left);
        match nty {
            Formula::Zero => Some(Evidence::ZeroNeutral { neutral: n }),
            Formula::Sum(a1, a2) => {
                let x1 = fresh("l");
                let x2 = fresh("r");
                let i1 = Term::inl((*a2).clone(), Term::Var(x1.clone(), (*a1).clone()));
                let i2 = Term::inr((*a1).clone(), Term::Var(x2.clone(), (*a2).clone()));
                let c1 = ctx.with(x1.clone(), (*a1).clone()).ok()?;
                let c2 = ctx.with(x2.clone(), (*a2).clone()).ok()?;
                let l = self.conv(&c1, &s.replace(&n, &i1), &t.replace(&n, &i1), ty)?;
                let r = self.conv(&c2, &s.replace(&n, &i2), &t.replace(&n, &i2), ty)?;
                Some(Evidence::SumSplit { neutral: n, left: (x1, Box::new(l)), right: (x2, Box::new(r)) })
            }
            Formula::Exists(h, srt, body) => {
                let (y, z, e) = generic_witness(&h, &srt, &body);
                let zty = body.open_at(0, &LTerm::Var(y.clone(), srt.clone()));
                let inner = ctx.with(z.clone(), zty).ok()?;
                let ev = self.conv(&inner, &s.replace(&n, &e), &t.replace(&n, &e), ty)?;
                Some(Evidence::ExistsSplit { neutral: n, witness: y, var: z, body: Box::new(ev) })
            }
            _ => None,
        }
    }

    /// Same constructor on both sides; returns the common type.
    fn structural(&self, ctx: &Context, s: &Term, t: &Term) -> Option<(Evidence, Formula)> {
        let sig = self.rw.sig;
        let cong = |v: Vec<Evidence>| Evidence::Congruence(v);
        match (s, t) {
            (Term::Var(x, a), Term::Var(y, b)) if x == y && a == b => Some((Evidence::Alpha, a.clone())),
            (Term::Absurd(a), Term::Absurd(b)) if a == b => Some((Evidence::Alpha, Formula::arrow(Formula::Zero, a.clone()))),
            (Term::Ax(a, u), Term::Ax(b, v)) if a == b => {
                let decl = sig.axiom(a)?;
                let e = self.conv(ctx, u, v, &decl.dom)?;
                Some((cong(vec![e]), decl.cod.clone()))
            }
            (Term::App(f, u), Term::App(g, v)) => {
                let (ef, fty) = self.structural(ctx, f, g)?;
                let Formula::Arrow(c, b) = fty else { return None };
                let eu = self.conv(ctx, u, v, &c)?;
                Some((cong(vec![ef, eu]), *b))
            }
            (Term::Fst(u), Term::Fst(v)) => match self.structural(ctx, u, v)? {
                (e, Formula::Prod(a, _)) => Some((cong(vec![e]), *a)),
                _ => None,
            },
            (Term::Snd(u), Term::Snd(v)) => match self.structural(ctx, u, v)? {
                (e, Formula::Prod(_, b)) => Some((cong(vec![e]), *b)),
                _ => None,
            },
            (Term::AllE(u, r1), Term::AllE(v, r2)) if r1 == r2 => match self.structural(ctx, u, v)? {
                (e, f @ Formula::Forall(..)) => Some((cong(vec![e]), f.instantiate(r1)?)),
                _ => None,
            },
            (Term::When(n1, l1, r1), Term::When(n2, l2, r2)) => {
                let (en, nty) = self.structural(ctx, n1, n2)?;
                let Formula::Sum(a, b) = nty else { return None };
                let Formula::Arrow(_, c) = synth(sig, l1).ok()? else { return None };
                let el = self.conv(ctx, l1, l2, &Formula::arrow(*a, (*c).clone()))?;
                let er = self.conv(ctx, r1, r2, &Formula::arrow(*b, (*c).clone()))?;
                Some((cong(vec![en, el, er]), *c))
            }
            (Term::ExE(n1, ..), Term::ExE(n2, ..)) => {
                let (en, nty) = self.structural(ctx, n1, n2)?;
                let Formula::Exists(h, srt, body) = nty else { return None };
                let out = synth(sig, s).ok()?;
                let y = fresh(h.0.as_str());
                let yv = LTerm::Var(y, srt);
                let (b1, b2) = (s.logic_body_at(&yv)?, t.logic_body_at(&yv)?);
                let eb = self.conv(ctx, &b1, &b2, &Formula::arrow(body.open_at(0, &yv), out.clone()))?;
                Some((cong(vec![en, eb]), out))
            }
            (Term::Inl(b1, u), Term::Inl(b2, v)) if b1 == b2 => {
                let a = synth(sig, u).ok()?;
                let e = self.conv(ctx, u, v, &a)?;
                Some((cong(vec![e]), Formula::sum(a, b1.clone())))
            }
            (Term::Inr(b1, u), Term::Inr(b2, v)) if b1 == b2 => {
                let a = synth(sig, u).ok()?;
                let e = self.conv(ctx, u, v, &a)?;
                Some((cong(vec![e]), Formula::sum(b1.clone(), a)))
            }
            (
                Term::ExI { hint, sort, witness: w1, body: c1, term: u },
                Term::ExI { witness: w2, body: c2, term: v, .. },
            ) if w1 == w2 && c1 == c2 => {
                let e = self.conv(ctx, u, v, &c1.open_at(0, w1))?;
                Some((cong(vec![e]), Formula::Exists(hint.clone(), sort.clone(), Box::new(c1.clone()))))
            }
            _ => None,
        }
    }

    /// Meet-in-the-middle search with the axioms that could not be oriented.
    fn search(&self, ctx: &Context, s: &Term, t: &Term, ty: &Formula, depth: usize) -> Option<Evidence> {
        const CAP: usize = 300;
        let expand = |start: &Term, rounds: usize| -> Vec<(Term, RewriteTrace)> {
            let (nf, tr) = match self.rw.normalize(start) {
                Ok(x) => x,
                Err(_) => return Vec::new(),
            };
            let mut seen: HashSet<Term> = HashSet::from([nf.clone()]);
            let mut all = vec![(nf, tr)];
            let mut frontier = vec![0usize];
            for _ in 0..rounds {
                let mut next = Vec::new();
                for &i in &frontier {
                    let (cur, tr) = all[i].clone();
                    for st in self.rw.axiom_steps(&cur) {
                        let Ok((nf, more)) = self.rw.normalize(&st.result) else { continue };
                        if seen.insert(nf.clone()) && all.len() < CAP {
                            let mut trace = tr.clone();
                            trace.steps.push(st);
                            trace.steps.extend(more.steps);
                            all.push((nf, trace));
                            next.push(all.len() - 1);
                        }
                    }
                }
                frontier = next;
            }
            all
        };
        let left = expand(s, depth.div_ceil(2));
        let right = expand(t, depth / 2);
        for (l, lt) in &left {
            for (r, rt) in &right {
                if l == r {
                    return Some(Evidence::Axioms { lhs: lt.clone(), rhs: rt.clone(), then: Box::new(Evidence::Alpha) });
                }
            }
        }
        if left.len() * right.len() <= 1024 {
            for (l, lt) in &left {
                for (r, rt) in &right {
                    if let Some(ev) = self.conv(ctx, l, r, ty) {
                        return Some(Evidence::Axioms { lhs: lt.clone(), rhs: rt.clone(), then: Box::new(ev) });
                    }
                }
            }
        }
        None
    }
}

/// Re-check a justification produced by [`decide_eq`].
pub fn verify_evidence(th: &Theory, eq: &EqualityInContext, ev: &Evidence) -> bool {
    let (rw, _) = Rewriter::for_theory(th);
    Verifier { rw }.check(&eq.ctx, &eq.lhs, &eq.rhs, &eq.ty, ev)
}

struct Verifier<'a> {
    rw: Rewriter<'a>,
}

impl Verifier<'_> {
    fn check(&self, ctx: &Context, s: &Term, t: &Term, ty: &Formula, ev: &Evidence) -> bool {
        let sig = self.rw.sig;
        match ev {
            Evidence::Inconsistent { var } => ctx.get(var) == Some(&Formula::Zero),
            Evidence::Normalize { lhs, rhs, then } | Evidence::Axioms { lhs, rhs, then } => {
                let end = |start: &Term, tr: &RewriteTrace| -> Option<Term> {
                    if !super::rewrite::replay(&self.rw, start, tr) {
                        return None;
                    }
                    Some(tr.steps.last().map(|st| st.result.clone()).unwrap_or_else(|| start.clone()))
                };
                match (end(s, lhs), end(t, rhs)) {
                    (Some(s1), Some(t1)) => self.check(ctx, &s1, &t1, ty, then),
                    _ => false,
                }
            }
            Evidence::Alpha => s == t,
            Evidence::Unit => *ty == Formula::One,
            Evidence::Pair(a, b) => match ty {
                Formula::Prod(ta, tb) => {
                    self.check(ctx, &Term::fst(s.clone()), &Term::fst(t.clone()), ta, a)
                        && self.check(ctx, &Term::snd(s.clone()), &Term::snd(t.clone()), tb, b)
                }
                _ => false,
            },
            Evidence::Arrow { var, body } => match ty {
                Formula::Arrow(c, b) => {
                    if s.mentions_var(var) || t.mentions_var(var) {
                        return false;
                    }
                    let Ok(inner) = ctx.with(var.clone(), (**c).clone()) else { return false };
                    let xv = Term::Var(var.clone(), (**c).clone());
                    self.check(&inner, &Term::app(s.clone(), xv.clone()), &Term::app(t.clone(), xv), b, body)
                }
                _ => false,
            },
            Evidence::Forall { var, body } => match ty {
                Formula::Forall(_, srt, b) => {
                    let fresh_enough = !s.mentions_logic(var)
                        && !t.mentions_logic(var)
                        && !ctx.entries().iter().any(|(_, a)| a.mentions(var));
                    let yv = LTerm::Var(var.clone(), srt.clone());
                    fresh_enough
                        && self.check(ctx, &Term::all_e(s.clone(), yv.clone()), &Term::all_e(t.clone(), yv.clone()), &b.open_at(0, &yv), body)
                }
                _ => false,
            },
            Evidence::ZeroNeutral { neutral } => {
                neutral.is_closed()
                    && synth(sig, neutral).ok() == Some(Formula::Zero)
                    && (s.count(neutral) > 0 || t.count(neutral) > 0)
                    && neutral.free_vars().iter().all(|(x, a)| ctx.get(x) == Some(a))
            }
            Evidence::SumSplit { neutral, left, right } => {
                let Ok(Formula::Sum(a1, a2)) = synth(sig, neutral) else { return false };
                if !neutral.is_closed() || neutral.free_vars().iter().any(|(x, a)| ctx.get(x) != Some(a)) {
                    return false;
                }
                let (x1, e1) = left;
                let (x2, e2) = right;
                let i1 = Term::inl((*a2).clone(), Term::Var(x1.clone(), (*a1).clone()));
                let i2 = Term::inr((*a1).clone(), Term::Var(x2.clone(), (*a2).clone()));
                let (Ok(c1), Ok(c2)) = (ctx.with(x1.clone(), (*a1).clone()), ctx.with(x2.clone(), (*a2).clone())) else {
                    return false;
                };
                !s.mentions_var(x1)
                    && !t.mentions_var(x1)
                    && !s.mentions_var(x2)
                    && !t.mentions_var(x2)
                    && self.check(&c1, &s.replace(neutral, &i1), &t.replace(neutral, &i1), ty, e1)
                    && self.check(&c2, &s.replace(neutral, &i2), &t.replace(neutral, &i2), ty, e2)
            }
            Evidence::ExistsSplit { neutral, witness, var, body } => {
                let Ok(Formula::Exists(h, srt, cb)) = synth(sig, neutral) else { return false };
                if !neutral.is_closed() || neutral.free_vars().iter().any(|(x, a)| ctx.get(x) != Some(a)) {
                    return false;
                }
                if s.mentions_logic(witness) || t.mentions_logic(witness) || ctx.entries().iter().any(|(_, a)| a.mentions(witness)) {
                    return false;
                }
                let yv = LTerm::Var(witness.clone(), srt.clone());
                let zty = cb.open_at(0, &yv);
                let e = Term::ExI { hint: h, sort: srt, witness: yv, body: (*cb).clone(), term: Box::new(Term::Var(var.clone(), zty.clone())) };
                let Ok(inner) = ctx.with(var.clone(), zty) else { return false };
                self.check(&inner, &s.replace(neutral, &e), &t.replace(neutral, &e), ty, body)
            }
            Evidence::Congruence(kids) => self.congruence(ctx, s, t, kids).is_some(),
        }
    }

    fn congruence(&self, ctx: &Context, s: &Term, t: &Term, kids: &[Evidence]) -> Option<Formula> {
        let sig = self.rw.sig;
        let ok = |b: bool| if b { Some(()) } else { None };
        let head = |u: &Term, v: &Term, e: &Evidence| -> Option<Formula> {
            match e {
                Evidence::Alpha => {
                    ok(u == v)?;
                    synth(sig, u).ok()
                }
                Evidence::Congruence(k) => self.congruence(ctx, u, v, k),
                _ => None,
            }
        };
        match (s, t, kids) {
            (Term::Ax(a, u), Term::Ax(b, v), [e]) if a == b => {
                let decl = sig.axiom(a)?;
                ok(self.check(ctx, u, v, &decl.dom, e))?;
                Some(decl.cod.clone())
            }
            (Term::App(f, u), Term::App(g, v), [ef, eu]) => {
                let Formula::Arrow(c, b) = head(f, g, ef)? else { return None };
                ok(self.check(ctx, u, v, &c, eu))?;
                Some(*b)
            }
            (Term::Fst(u), Term::Fst(v), [e]) => match head(u, v, e)? {
                Formula::Prod(a, _) => Some(*a),
                _ => None,
            },
            (Term::Snd(u), Term::Snd(v), [e]) => match head(u, v, e)? {
                Formula::Prod(_, b) => Some(*b),
                _ => None,
            },
            (Term::AllE(u, r1), Term::AllE(v, r2), [e]) if r1 == r2 => head(u, v, e)?.instantiate(r1),
            (Term::When(n1, l1, r1), Term::When(n2, l2, r2), [en, el, er]) => {
                let Formula::Sum(a, b) = head(n1, n2, en)? else { return None };
                let Formula::Arrow(_, c) = synth(sig, l1).ok()? else { return None };
                ok(self.check(ctx, l1, l2, &Formula::arrow(*a, (*c).clone()), el))?;
                ok(self.check(ctx, r1, r2, &Formula::arrow(*b, (*c).clone()), er))?;
                Some(*c)
            }
            (Term::ExE(n1, ..), Term::ExE(n2, ..), [en, eb]) => {
                let Formula::Exists(_, srt, body) = head(n1, n2, en)? else { return None };
                let out = synth(sig, s).ok()?;
                let y = fresh("y");
                let yv = LTerm::Var(y, srt);
                let (b1, b2) = (s.logic_body_at(&yv)?, t.logic_body_at(&yv)?);
                ok(self.check(ctx, &b1, &b2, &Formula::arrow(body.open_at(0, &yv), out.clone()), eb))?;
                Some(out)
            }
            (Term::Inl(b1, u), Term::Inl(b2, v), [e]) if b1 == b2 => {
                let a = synth(sig, u).ok()?;
                ok(self.check(ctx, u, v, &a, e))?;
                Some(Formula::sum(a, b1.clone()))
            }
            (Term::Inr(b1, u), Term::Inr(b2, v), [e]) if b1 == b2 => {
                let a = synth(sig, u).ok()?;
                ok(self.check(ctx, u, v, &a, e))?;
                Some(Formula::sum(b1.clone(), a))
            }
            (
                Term::ExI { hint, sort, witness: w1, body: c1, term: u },
                Term::ExI { witness: w2, body: c2, term: v, .. },
                [e],
            ) if w1 == w2 && c1 == c2 => {
                ok(self.check(ctx, u, v, &c1.open_at(0, w1), e))?;
                Some(Formula::Exists(hint.clone(), sort.clone(), Box::new(c1.clone())))
            }
            _ => None,
        }
    }
}
