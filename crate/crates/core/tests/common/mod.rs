//! Independent oracles shared by the integration tests.
//!
//! `named` re-implements terms with explicit variable names and textbook
//! rename-on-clash substitution; `closure` decides equality by exhaustively
//! contracting both sides up to a fixed depth. Neither uses the engine's
//! substitution or rewriting code.
#![allow(dead_code)]

use ldcalc::equational::{RuleId, RuleInstance};
use ldcalc::gen::Gen;
use ldcalc::surface::{parse_item, Item};
use ldcalc::syntax::{EqualityInContext, LambdaSignature};

pub mod named {
    use std::collections::BTreeSet;
    use std::sync::atomic::{AtomicUsize, Ordering};

    use ldcalc::syntax::{Formula, Hint, LTerm, Sym, Term};

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub enum NL {
        V(String, String),
        F(String, Vec<NL>, String),
    }

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub enum NF {
        One,
        Zero,
        Atom(String, Vec<NL>),
        Prod(Box<NF>, Box<NF>),
        Sum(Box<NF>, Box<NF>),
        Arrow(Box<NF>, Box<NF>),
        All(String, String, Box<NF>),
        Ex(String, String, Box<NF>),
    }

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub enum N {
        Var(String, NF),
        Ax(String, Box<N>),
        Pair(Box<N>, Box<N>),
        Fst(Box<N>),
        Snd(Box<N>),
        Inl(NF, Box<N>),
        Inr(NF, Box<N>),
        When(Box<N>, Box<N>, Box<N>),
        Lam(String, NF, Box<N>),
        App(Box<N>, Box<N>),
        Star,
        Absurd(NF),
        AllI(String, String, Box<N>),
        AllE(Box<N>, NL),
        ExI { x: String, sort: String, w: NL, body: NF, t: Box<N> },
        ExE(Box<N>, String, String, Box<N>),
    }

    fn b<T>(x: T) -> Box<T> {
        Box::new(x)
    }

    static COUNTER: AtomicUsize = AtomicUsize::new(0);

    /// A name no input contains (`#` never appears in generated or parsed names).
    pub fn fresh(base: &str) -> String {
        let base = base.split(['#', '%']).next().unwrap_or("v");
        format!("{base}#{}", COUNTER.fetch_add(1, Ordering::Relaxed))
    }

    // ---- conversion from the engine representation ----

    fn pick(hint: &Hint, used: &mut BTreeSet<String>) -> String {
        let base = hint.0.base().to_string();
        let mut name = base.clone();
        let mut i = 1;
        while used.contains(&name) {
            name = format!("{base}'{i}");
            i += 1;
        }
        used.insert(name.clone());
        name
    }

    fn nl_of(t: &LTerm) -> NL {
        match t {
            LTerm::Var(x, s) => NL::V(x.to_string(), s.to_string()),
            LTerm::Bound(..) => panic!("dangling logical index"),
            LTerm::App(f, args, s) => NL::F(f.to_string(), args.iter().map(nl_of).collect(), s.to_string()),
        }
    }

    fn nf_of(f: &Formula, used: &mut BTreeSet<String>) -> NF {
        match f {
            Formula::One => NF::One,
            Formula::Zero => NF::Zero,
            Formula::Atom(r, args) => NF::Atom(r.to_string(), args.iter().map(nl_of).collect()),
            Formula::Prod(l, r) => NF::Prod(b(nf_of(l, used)), b(nf_of(r, used))),
            Formula::Sum(l, r) => NF::Sum(b(nf_of(l, used)), b(nf_of(r, used))),
            Formula::Arrow(l, r) => NF::Arrow(b(nf_of(l, used)), b(nf_of(r, used))),
            Formula::Forall(h, s, _) | Formula::Exists(h, s, _) => {
                let x = pick(h, used);
                let body = f.instantiate(&LTerm::Var(Sym::new(&x), s.clone())).expect("quantifier");
                let body = b(nf_of(&body, used));
                if matches!(f, Formula::Forall(..)) {
                    NF::All(x, s.to_string(), body)
                } else {
                    NF::Ex(x, s.to_string(), body)
                }
            }
        }
    }

    fn n_of(t: &Term, used: &mut BTreeSet<String>) -> N {
        match t {
            Term::Var(x, a) => N::Var(x.to_string(), nf_of(a, used)),
            Term::Bound(_) => panic!("dangling λ index"),
            Term::Ax(a, u) => N::Ax(a.to_string(), b(n_of(u, used))),
            Term::Pair(l, r) => N::Pair(b(n_of(l, used)), b(n_of(r, used))),
            Term::Fst(u) => N::Fst(b(n_of(u, used))),
            Term::Snd(u) => N::Snd(b(n_of(u, used))),
            Term::Inl(o, u) => N::Inl(nf_of(o, used), b(n_of(u, used))),
            Term::Inr(o, u) => N::Inr(nf_of(o, used), b(n_of(u, used))),
            Term::When(s, l, r) => N::When(b(n_of(s, used)), b(n_of(l, used)), b(n_of(r, used))),
            Term::Lam(h, a, _) => {
                let x = pick(h, used);
                let body = t.lam_body_at(&Term::Var(Sym::new(&x), a.clone())).expect("λ");
                N::Lam(x, nf_of(a, used), b(n_of(&body, used)))
            }
            Term::App(f, u) => N::App(b(n_of(f, used)), b(n_of(u, used))),
            Term::Star => N::Star,
            Term::Absurd(a) => N::Absurd(nf_of(a, used)),
            Term::AllI(h, s, _) => {
                let x = pick(h, used);
                let body = t.logic_body_at(&LTerm::Var(Sym::new(&x), s.clone())).expect("∀I");
                N::AllI(x, s.to_string(), b(n_of(&body, used)))
            }
            Term::AllE(u, r) => N::AllE(b(n_of(u, used)), nl_of(r)),
            Term::ExI { hint, sort, witness, body, term } => {
                let x = pick(hint, used);
                let q = Formula::Exists(hint.clone(), sort.clone(), Box::new(body.clone()));
                let opened = q.instantiate(&LTerm::Var(Sym::new(&x), sort.clone())).expect("∃");
                N::ExI { x, sort: sort.to_string(), w: nl_of(witness), body: nf_of(&opened, used), t: b(n_of(term, used)) }
            }
            Term::ExE(u, h, s, _) => {
                let head = n_of(u, used);
                let x = pick(h, used);
                let body = t.logic_body_at(&LTerm::Var(Sym::new(&x), s.clone())).expect("∃E");
                N::ExE(b(head), x, s.to_string(), b(n_of(&body, used)))
            }
        }
    }

    /// Binder names avoid every free name of the term and each other.
    pub fn to_named(t: &Term) -> N {
        let mut used: BTreeSet<String> = t.free_vars().into_iter().map(|(x, _)| x.to_string()).collect();
        used.extend(t.fv_star().into_iter().map(|(x, _)| x.to_string()));
        n_of(t, &mut used)
    }

    // ---- conversion back ----

    fn lt_of(t: &NL) -> LTerm {
        match t {
            NL::V(x, s) => LTerm::Var(Sym::new(x), Sym::new(s)),
            NL::F(f, args, s) => LTerm::App(Sym::new(f), args.iter().map(lt_of).collect(), Sym::new(s)),
        }
    }

    pub fn formula_of(f: &NF) -> Formula {
        match f {
            NF::One => Formula::One,
            NF::Zero => Formula::Zero,
            NF::Atom(r, args) => Formula::Atom(Sym::new(r), args.iter().map(lt_of).collect()),
            NF::Prod(l, r) => Formula::prod(formula_of(l), formula_of(r)),
            NF::Sum(l, r) => Formula::sum(formula_of(l), formula_of(r)),
            NF::Arrow(l, r) => Formula::arrow(formula_of(l), formula_of(r)),
            NF::All(x, s, body) => Formula::forall(&Sym::new(x), &Sym::new(s), formula_of(body)),
            NF::Ex(x, s, body) => Formula::exists(&Sym::new(x), &Sym::new(s), formula_of(body)),
        }
    }

    pub fn from_named(t: &N) -> Term {
        match t {
            N::Var(x, a) => Term::Var(Sym::new(x), formula_of(a)),
            N::Ax(a, u) => Term::ax(&Sym::new(a), from_named(u)),
            N::Pair(l, r) => Term::pair(from_named(l), from_named(r)),
            N::Fst(u) => Term::fst(from_named(u)),
            N::Snd(u) => Term::snd(from_named(u)),
            N::Inl(o, u) => Term::inl(formula_of(o), from_named(u)),
            N::Inr(o, u) => Term::inr(formula_of(o), from_named(u)),
            N::When(s, l, r) => Term::when(from_named(s), from_named(l), from_named(r)),
            N::Lam(x, a, body) => Term::lam(&Sym::new(x), formula_of(a), from_named(body)),
            N::App(f, u) => Term::app(from_named(f), from_named(u)),
            N::Star => Term::Star,
            N::Absurd(a) => Term::Absurd(formula_of(a)),
            N::AllI(x, s, body) => Term::all_i(&Sym::new(x), &Sym::new(s), from_named(body)),
            N::AllE(u, r) => Term::all_e(from_named(u), lt_of(r)),
            N::ExI { x, sort, w, body, t } => {
                Term::ex_i(&Sym::new(x), &Sym::new(sort), lt_of(w), formula_of(body), from_named(t))
            }
            N::ExE(u, x, s, r) => Term::ex_e(from_named(u), &Sym::new(x), &Sym::new(s), from_named(r)),
        }
    }

    // ---- free variables ----

    fn fv_l(t: &NL, out: &mut BTreeSet<String>) {
        match t {
            NL::V(x, _) => {
                out.insert(x.clone());
            }
            NL::F(_, args, _) => args.iter().for_each(|a| fv_l(a, out)),
        }
    }

    fn fv_f(f: &NF, out: &mut BTreeSet<String>) {
        match f {
            NF::One | NF::Zero => {}
            NF::Atom(_, args) => args.iter().for_each(|a| fv_l(a, out)),
            NF::Prod(l, r) | NF::Sum(l, r) | NF::Arrow(l, r) => {
                fv_f(l, out);
                fv_f(r, out);
            }
            NF::All(x, _, body) | NF::Ex(x, _, body) => {
                let mut inner = BTreeSet::new();
                fv_f(body, &mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    /// Free λ-variable names.
    pub fn fv(t: &N) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fv_into(t, &mut out);
        out
    }

    fn fv_into(t: &N, out: &mut BTreeSet<String>) {
        match t {
            N::Var(x, _) => {
                out.insert(x.clone());
            }
            N::Lam(x, _, body) => {
                let mut inner = fv(body);
                inner.remove(x);
                out.extend(inner);
            }
            _ => children(t).into_iter().for_each(|k| fv_into(k, out)),
        }
    }

    /// Free logical-variable names, including those in type annotations.
    pub fn fv_logic(t: &N) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        match t {
            N::Var(_, a) | N::Absurd(a) => fv_f(a, &mut out),
            N::Inl(o, u) | N::Inr(o, u) => {
                fv_f(o, &mut out);
                out.extend(fv_logic(u));
            }
            N::Lam(_, a, body) => {
                fv_f(a, &mut out);
                out.extend(fv_logic(body));
            }
            N::AllI(x, _, body) => {
                let mut inner = fv_logic(body);
                inner.remove(x);
                out.extend(inner);
            }
            N::AllE(u, r) => {
                out.extend(fv_logic(u));
                fv_l(r, &mut out);
            }
            N::ExI { x, w, body, t, .. } => {
                fv_l(w, &mut out);
                let mut inner = BTreeSet::new();
                fv_f(body, &mut inner);
                inner.remove(x);
                out.extend(inner);
                out.extend(fv_logic(t));
            }
            N::ExE(u, x, _, r) => {
                out.extend(fv_logic(u));
                let mut inner = fv_logic(r);
                inner.remove(x);
                out.extend(inner);
            }
            _ => children(t).into_iter().for_each(|k| out.extend(fv_logic(k))),
        }
        out
    }

    fn children(t: &N) -> Vec<&N> {
        match t {
            N::Var(..) | N::Star | N::Absurd(_) => vec![],
            N::Ax(_, u) | N::Fst(u) | N::Snd(u) | N::Inl(_, u) | N::Inr(_, u) | N::AllE(u, _) => vec![u],
            N::Lam(_, _, u) | N::AllI(_, _, u) => vec![u],
            N::ExI { t, .. } => vec![t],
            N::Pair(l, r) | N::App(l, r) | N::ExE(l, _, _, r) => vec![l, r],
            N::When(s, l, r) => vec![s, l, r],
        }
    }

    // ---- logical substitution ----

    fn lsub_l(t: &NL, y: &str, r: &NL) -> NL {
        match t {
            NL::V(x, _) if x == y => r.clone(),
            NL::V(..) => t.clone(),
            NL::F(f, args, s) => NL::F(f.clone(), args.iter().map(|a| lsub_l(a, y, r)).collect(), s.clone()),
        }
    }

    pub fn lsub_f(f: &NF, y: &str, r: &NL) -> NF {
        let go = |g: &NF| b(lsub_f(g, y, r));
        match f {
            NF::One | NF::Zero => f.clone(),
            NF::Atom(p, args) => NF::Atom(p.clone(), args.iter().map(|a| lsub_l(a, y, r)).collect()),
            NF::Prod(l, rr) => NF::Prod(go(l), go(rr)),
            NF::Sum(l, rr) => NF::Sum(go(l), go(rr)),
            NF::Arrow(l, rr) => NF::Arrow(go(l), go(rr)),
            NF::All(x, s, body) | NF::Ex(x, s, body) => {
                let rebuild = |x: String, body: NF| {
                    if matches!(f, NF::All(..)) {
                        NF::All(x, s.clone(), b(body))
                    } else {
                        NF::Ex(x, s.clone(), b(body))
                    }
                };
                if x == y {
                    return f.clone();
                }
                let mut rfv = BTreeSet::new();
                fv_l(r, &mut rfv);
                if rfv.contains(x) {
                    let x2 = fresh(x);
                    let renamed = lsub_f(body, x, &NL::V(x2.clone(), s.clone()));
                    rebuild(x2, lsub_f(&renamed, y, r))
                } else {
                    rebuild(x.clone(), lsub_f(body, y, r))
                }
            }
        }
    }

    /// `t[r/y]` for a logical variable `y`, renaming logical binders on clash.
    pub fn lsub(t: &N, y: &str, r: &NL) -> N {
        let go = |u: &N| b(lsub(u, y, r));
        let mut rfv = BTreeSet::new();
        fv_l(r, &mut rfv);
        match t {
            N::Var(x, a) => N::Var(x.clone(), lsub_f(a, y, r)),
            N::Ax(a, u) => N::Ax(a.clone(), go(u)),
            N::Pair(l, rr) => N::Pair(go(l), go(rr)),
            N::Fst(u) => N::Fst(go(u)),
            N::Snd(u) => N::Snd(go(u)),
            N::Inl(o, u) => N::Inl(lsub_f(o, y, r), go(u)),
            N::Inr(o, u) => N::Inr(lsub_f(o, y, r), go(u)),
            N::When(s, l, rr) => N::When(go(s), go(l), go(rr)),
            N::Lam(x, a, body) => N::Lam(x.clone(), lsub_f(a, y, r), go(body)),
            N::App(f, u) => N::App(go(f), go(u)),
            N::Star => N::Star,
            N::Absurd(a) => N::Absurd(lsub_f(a, y, r)),
            N::AllE(u, w) => N::AllE(go(u), lsub_l(w, y, r)),
            N::AllI(x, s, body) => {
                if x == y {
                    t.clone()
                } else if rfv.contains(x) {
                    let x2 = fresh(x);
                    let renamed = lsub(body, x, &NL::V(x2.clone(), s.clone()));
                    N::AllI(x2, s.clone(), b(lsub(&renamed, y, r)))
                } else {
                    N::AllI(x.clone(), s.clone(), go(body))
                }
            }
            N::ExE(u, x, s, body) => {
                let head = go(u);
                if x == y {
                    N::ExE(head, x.clone(), s.clone(), body.clone())
                } else if rfv.contains(x) {
                    let x2 = fresh(x);
                    let renamed = lsub(body, x, &NL::V(x2.clone(), s.clone()));
                    N::ExE(head, x2, s.clone(), b(lsub(&renamed, y, r)))
                } else {
                    N::ExE(head, x.clone(), s.clone(), go(body))
                }
            }
            N::ExI { x, sort, w, body, t: u } => {
                let quant = lsub_f(&NF::Ex(x.clone(), sort.clone(), b(body.clone())), y, r);
                let NF::Ex(x2, _, body2) = quant else { unreachable!() };
                N::ExI { x: x2, sort: sort.clone(), w: lsub_l(w, y, r), body: *body2, t: go(u) }
            }
        }
    }

    // ---- λ substitution ----

    /// `t[u/x]` with renaming of λ- and logical binders that would capture.
    pub fn subst(t: &N, x: &str, u: &N) -> N {
        if !fv(t).contains(x) {
            return t.clone();
        }
        let go = |v: &N| b(subst(v, x, u));
        match t {
            N::Var(y, _) if y == x => u.clone(),
            N::Var(..) | N::Star | N::Absurd(_) => t.clone(),
            N::Ax(a, v) => N::Ax(a.clone(), go(v)),
            N::Pair(l, r) => N::Pair(go(l), go(r)),
            N::Fst(v) => N::Fst(go(v)),
            N::Snd(v) => N::Snd(go(v)),
            N::Inl(o, v) => N::Inl(o.clone(), go(v)),
            N::Inr(o, v) => N::Inr(o.clone(), go(v)),
            N::When(s, l, r) => N::When(go(s), go(l), go(r)),
            N::App(f, v) => N::App(go(f), go(v)),
            N::AllE(v, r) => N::AllE(go(v), r.clone()),
            N::ExI { x: y, sort, w, body, t: v } => {
                N::ExI { x: y.clone(), sort: sort.clone(), w: w.clone(), body: body.clone(), t: go(v) }
            }
            N::Lam(y, a, body) => {
                if fv(u).contains(y) {
                    let y2 = fresh(y);
                    let renamed = subst(body, y, &N::Var(y2.clone(), a.clone()));
                    N::Lam(y2, a.clone(), b(subst(&renamed, x, u)))
                } else {
                    N::Lam(y.clone(), a.clone(), go(body))
                }
            }
            N::AllI(y, s, body) => {
                if fv_logic(u).contains(y) {
                    let y2 = fresh(y);
                    let renamed = lsub(body, y, &NL::V(y2.clone(), s.clone()));
                    N::AllI(y2, s.clone(), b(subst(&renamed, x, u)))
                } else {
                    N::AllI(y.clone(), s.clone(), go(body))
                }
            }
            N::ExE(v, y, s, body) => {
                let head = go(v);
                if fv_logic(u).contains(y) {
                    let y2 = fresh(y);
                    let renamed = lsub(body, y, &NL::V(y2.clone(), s.clone()));
                    N::ExE(head, y2, s.clone(), b(subst(&renamed, x, u)))
                } else {
                    N::ExE(head, y.clone(), s.clone(), go(body))
                }
            }
        }
    }

    // ---- one-step contractions for the closure oracle ----

    fn contract(t: &N) -> Vec<N> {
        let mut out = Vec::new();
        match t {
            N::Fst(p) => {
                if let N::Pair(l, _) = &**p {
                    out.push((**l).clone());
                }
            }
            N::Snd(p) => {
                if let N::Pair(_, r) = &**p {
                    out.push((**r).clone());
                }
            }
            N::Pair(l, r) => {
                if let (N::Fst(a), N::Snd(c)) = (&**l, &**r) {
                    if from_named(a) == from_named(c) {
                        out.push((**a).clone());
                    }
                }
            }
            N::When(s, l, r) => match &**s {
                N::Inl(_, a) => out.push(N::App(l.clone(), a.clone())),
                N::Inr(_, c) => out.push(N::App(r.clone(), c.clone())),
                _ => {}
            },
            N::App(f, u) => {
                if let N::Lam(y, _, body) = &**f {
                    out.push(subst(body, y, u));
                }
            }
            N::Lam(y, _, body) => {
                if let N::App(f, v) = &**body {
                    if matches!(&**v, N::Var(z, _) if z == y) && !fv(f).contains(y) {
                        out.push((**f).clone());
                    }
                }
            }
            N::AllE(u, r) => {
                if let N::AllI(y, _, body) = &**u {
                    out.push(lsub(body, y, r));
                }
            }
            N::AllI(y, _, body) => {
                if let N::AllE(f, NL::V(z, _)) = &**body {
                    if z == y && !fv_logic(f).contains(y) {
                        out.push((**f).clone());
                    }
                }
            }
            N::ExE(u, y, _, v) => {
                if let N::ExI { w, t: inner, .. } = &**u {
                    out.push(N::App(b(lsub(v, y, w)), inner.clone()));
                }
            }
            N::Var(_, NF::One) => out.push(N::Star),
            _ => {}
        }
        out
    }

    /// Every result of one contraction anywhere in `t`.
    pub fn one_step(t: &N) -> Vec<N> {
        let mut out = contract(t);
        let wrap = |kids: Vec<N>, rebuild: &dyn Fn(N) -> N, out: &mut Vec<N>| {
            out.extend(kids.into_iter().map(rebuild));
        };
        match t {
            N::Var(..) | N::Star | N::Absurd(_) => {}
            N::Ax(a, u) => wrap(one_step(u), &|k| N::Ax(a.clone(), b(k)), &mut out),
            N::Fst(u) => wrap(one_step(u), &|k| N::Fst(b(k)), &mut out),
            N::Snd(u) => wrap(one_step(u), &|k| N::Snd(b(k)), &mut out),
            N::Inl(o, u) => wrap(one_step(u), &|k| N::Inl(o.clone(), b(k)), &mut out),
            N::Inr(o, u) => wrap(one_step(u), &|k| N::Inr(o.clone(), b(k)), &mut out),
            N::AllE(u, r) => wrap(one_step(u), &|k| N::AllE(b(k), r.clone()), &mut out),
            N::Lam(y, a, u) => wrap(one_step(u), &|k| N::Lam(y.clone(), a.clone(), b(k)), &mut out),
            N::AllI(y, s, u) => wrap(one_step(u), &|k| N::AllI(y.clone(), s.clone(), b(k)), &mut out),
            N::ExI { x, sort, w, body, t: u } => wrap(
                one_step(u),
                &|k| N::ExI { x: x.clone(), sort: sort.clone(), w: w.clone(), body: body.clone(), t: b(k) },
                &mut out,
            ),
            N::Pair(l, r) => {
                wrap(one_step(l), &|k| N::Pair(b(k), r.clone()), &mut out);
                wrap(one_step(r), &|k| N::Pair(l.clone(), b(k)), &mut out);
            }
            N::App(l, r) => {
                wrap(one_step(l), &|k| N::App(b(k), r.clone()), &mut out);
                wrap(one_step(r), &|k| N::App(l.clone(), b(k)), &mut out);
            }
            N::ExE(l, y, s, r) => {
                wrap(one_step(l), &|k| N::ExE(b(k), y.clone(), s.clone(), r.clone()), &mut out);
                wrap(one_step(r), &|k| N::ExE(l.clone(), y.clone(), s.clone(), b(k)), &mut out);
            }
            N::When(s, l, r) => {
                wrap(one_step(s), &|k| N::When(b(k), l.clone(), r.clone()), &mut out);
                wrap(one_step(l), &|k| N::When(s.clone(), b(k), r.clone()), &mut out);
                wrap(one_step(r), &|k| N::When(s.clone(), l.clone(), b(k)), &mut out);
            }
        }
        out
    }
}

pub mod closure {
    use std::collections::HashSet;

    use super::named::{one_step, to_named};
    use ldcalc::syntax::{EqualityInContext, Formula, Term};

    /// Every term reachable from `t` in at most `depth` contractions, up to α.
    pub fn reachable(t: &Term, depth: usize) -> HashSet<Term> {
        let mut seen: HashSet<Term> = HashSet::from([t.clone()]);
        let mut frontier = vec![to_named(t)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for n in &frontier {
                for m in one_step(n) {
                    let key = super::named::from_named(&m);
                    if seen.insert(key) {
                        next.push(m);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        seen
    }

    /// Equal when the context is inconsistent or the two closures meet.
    pub fn equal_within(eq: &EqualityInContext, depth: usize) -> bool {
        if eq.ctx.entries().iter().any(|(_, a)| *a == Formula::Zero) {
            return true;
        }
        let left = reachable(&eq.lhs, depth);
        reachable(&eq.rhs, depth).iter().any(|t| left.contains(t))
    }
}

/// 100 random instances of each of the 22 non-congruence schemas.
pub fn schema_corpus(seed: u64, per_rule: usize) -> Vec<RuleInstance> {
    let mut g = Gen::new(seed);
    let mut out = Vec::new();
    for r in RuleId::ALL.into_iter().filter(|r| !r.is_congruence()) {
        for _ in 0..per_rule {
            out.push(g.instance(r).unwrap_or_else(|e| panic!("{}: {e}", r.tag())));
        }
    }
    out
}

pub fn equality(sig: &LambdaSignature, text: &str) -> EqualityInContext {
    match parse_item(sig, text).unwrap_or_else(|e| panic!("{text}: {e}")) {
        Item::Equality(eq) => eq,
        other => panic!("not an equality: {other:?}"),
    }
}

const AB: &str = "(and (atom a) (atom b))";

/// Hand-picked pairs over the standard signature; the flag says whether the
/// theory proves them.
pub fn curated_pairs() -> Vec<(bool, String)> {
    let mut v: Vec<(bool, String)> = Vec::new();
    let mut eq = |s: String| v.push((true, s));
    eq(format!("(eq ((x {AB})) (pair (fst (lvar x)) (snd (lvar x))) (lvar x) {AB})"));
    eq("(eq ((x (atom a)) (y (atom b))) (fst (pair (lvar x) (lvar y))) (lvar x) (atom a))".into());
    eq("(eq ((x (atom a)) (y (atom b))) (snd (pair (lvar x) (lvar y))) (lvar y) (atom b))".into());
    eq("(eq ((x (one))) (lvar x) (star) (one))".into());
    eq("(eq ((x (atom a))) (apl (lam y (atom a) (lvar y)) (lvar x)) (lvar x) (atom a))".into());
    eq("(eq ((f (imp (atom a) (atom b)))) (lam y (atom a) (apl (lvar f) (lvar y))) (lvar f) (imp (atom a) (atom b)))".into());
    eq("(eq ((x (atom a)) (g (imp (atom a) (atom b))) (h (imp (atom b) (atom b)))) (when (inl (atom b) (lvar x)) (lvar g) (lvar h)) (apl (lvar g) (lvar x)) (atom b))".into());
    eq("(eq ((x (atom b)) (g (imp (atom a) (atom b))) (h (imp (atom b) (atom b)))) (when (inr (atom a) (lvar x)) (lvar g) (lvar h)) (apl (lvar h) (lvar x)) (atom b))".into());
    eq("(eq ((u (all z s (atom p (var z s))))) (alle (alli w s (alle (lvar u) (var w s))) (app c)) (alle (lvar u) (app c)) (atom p (app c)))".into());
    eq("(eq ((u (all z s (atom p (var z s))))) (alli w s (alle (lvar u) (var w s))) (lvar u) (all z s (atom p (var z s))))".into());
    eq("(eq ((x (atom p (app c))) (f (all z s (imp (atom p (var z s)) (atom a))))) (exe (exi z s (app c) (atom p (var z s)) (lvar x)) w s (alle (lvar f) (var w s))) (apl (alle (lvar f) (app c)) (lvar x)) (atom a))".into());
    eq("(eq ((x (atom a)) (y (atom b))) (apl (lam k (atom b) (pair (lvar x) (lvar k))) (lvar y)) (pair (lvar x) (lvar y)) (and (atom a) (atom b)))".into());
    eq("(eq ((x (atom a))) (fst (pair (lvar x) (star))) (lvar x) (atom a))".into());
    eq("(eq ((x (atom a))) (snd (pair (star) (lvar x))) (lvar x) (atom a))".into());
    eq("(eq ((x (atom a))) (apl (lam k (one) (lvar x)) (star)) (lvar x) (atom a))".into());
    eq("(eq ((x (atom a))) (alle (alli w s (lvar x)) (app c)) (lvar x) (atom a))".into());
    eq("(eq ((x (atom a))) (apl (apl (lam k (atom a) (lam m (atom a) (lvar k))) (lvar x)) (lvar x)) (lvar x) (atom a))".into());
    eq(format!("(eq ((x {AB})) (pair (fst (pair (fst (lvar x)) (snd (lvar x)))) (snd (lvar x))) (lvar x) {AB})"));
    eq("(eq ((x (atom a)) (y (atom b))) (pair (snd (pair (lvar y) (lvar x))) (fst (pair (lvar y) (lvar x)))) (pair (lvar x) (lvar y)) (and (atom a) (atom b)))".into());
    eq("(eq ((z (zero))) (inl (atom b) (apl (absurd (atom a)) (lvar z))) (inr (atom a) (apl (absurd (atom b)) (lvar z))) (or (atom a) (atom b)))".into());
    eq("(eq ((z (zero)) (x (atom a)) (y (atom a))) (lvar x) (lvar y) (atom a))".into());
    eq("(eq ((f (imp (atom a) (atom b))) (x (atom a))) (apl (lam g (imp (atom a) (atom b)) (apl (lvar g) (lvar x))) (lvar f)) (apl (lvar f) (lvar x)) (atom b))".into());
    eq("(eq ((x (one)) (y (atom a))) (pair (lvar x) (lvar y)) (pair (star) (lvar y)) (and (one) (atom a)))".into());
    eq("(eq ((x (atom a))) (lam k (one) (lvar x)) (lam m (one) (apl (lam n (one) (lvar x)) (lvar m))) (imp (one) (atom a)))".into());
    eq("(eq ((x (atom a)) (y (atom a))) (apl (lam k (atom a) (apl (lam m (atom a) (lvar k)) (lvar y))) (lvar x)) (lvar x) (atom a))".into());

    let mut ne = |s: String| v.push((false, s));
    ne("(eq ((x (atom a)) (y (atom a))) (lvar x) (lvar y) (atom a))".into());
    ne("(eq ((x (and (atom a) (atom a)))) (fst (lvar x)) (snd (lvar x)) (atom a))".into());
    ne("(eq ((x (atom a))) (inl (atom a) (lvar x)) (inr (atom a) (lvar x)) (or (atom a) (atom a)))".into());
    ne("(eq () (lam k (atom a) (lam m (atom a) (lvar k))) (lam k (atom a) (lam m (atom a) (lvar m))) (imp (atom a) (imp (atom a) (atom a))))".into());
    ne("(eq ((x (atom a)) (y (atom a))) (pair (lvar x) (lvar y)) (pair (lvar y) (lvar x)) (and (atom a) (atom a)))".into());
    ne("(eq ((f (imp (atom a) (atom a))) (x (atom a))) (apl (lvar f) (lvar x)) (lvar x) (atom a))".into());
    ne("(eq ((f (imp (atom a) (atom a))) (x (atom a))) (apl (lvar f) (apl (lvar f) (lvar x))) (apl (lvar f) (lvar x)) (atom a))".into());
    ne("(eq ((x (atom a)) (y (atom a))) (alle (alli w s (lvar x)) (app c)) (lvar y) (atom a))".into());
    ne("(eq ((x (or (atom a) (atom a)))) (lvar x) (when (lvar x) (lam k (atom a) (inr (atom a) (lvar k))) (lam k (atom a) (inl (atom a) (lvar k)))) (or (atom a) (atom a)))".into());
    ne("(eq ((x (atom a)) (y (atom a)) (z (atom a))) (pair (lvar x) (pair (lvar y) (lvar z))) (pair (lvar x) (pair (lvar z) (lvar y))) (and (atom a) (and (atom a) (atom a))))".into());
    ne("(eq ((f (imp (atom a) (imp (atom a) (atom b)))) (x (atom a)) (y (atom a))) (apl (apl (lvar f) (lvar x)) (lvar y)) (apl (apl (lvar f) (lvar y)) (lvar x)) (atom b))".into());
    ne("(eq ((g (imp (atom a) (atom b))) (h (imp (atom a) (atom b))) (x (atom a))) (apl (lvar g) (lvar x)) (apl (lvar h) (lvar x)) (atom b))".into());
    ne("(eq ((x (and (atom a) (atom a)))) (pair (fst (lvar x)) (fst (lvar x))) (lvar x) (and (atom a) (atom a)))".into());
    ne("(eq ((x (and (atom a) (atom a)))) (pair (snd (lvar x)) (fst (lvar x))) (lvar x) (and (atom a) (atom a)))".into());
    ne("(eq ((u (imp (atom a) (atom a)))) (lvar u) (lam k (atom a) (lvar k)) (imp (atom a) (atom a)))".into());
    ne("(eq ((x (atom a)) (y (atom a))) (apl (lam k (atom a) (lvar k)) (lvar x)) (lvar y) (atom a))".into());
    ne("(eq ((x (atom a)) (y (atom a))) (fst (pair (lvar x) (lvar y))) (snd (pair (lvar x) (lvar y))) (atom a))".into());
    ne("(eq ((x (atom a)) (y (atom a)) (g (imp (atom a) (atom b)))) (when (inl (atom a) (lvar x)) (lvar g) (lvar g)) (apl (lvar g) (lvar y)) (atom b))".into());
    ne("(eq ((u (all z s (atom p (var z s)))) (v (all z s (atom p (var z s))))) (lvar u) (lvar v) (all z s (atom p (var z s))))".into());
    ne("(eq ((x (atom p (app c))) (y (atom p (app c)))) (exi z s (app c) (atom p (var z s)) (lvar x)) (exi z s (app c) (atom p (var z s)) (lvar y)) (ex z s (atom p (var z s))))".into());
    ne("(eq ((x (atom a)) (y (atom a))) (lam k (one) (lvar x)) (lam k (one) (lvar y)) (imp (one) (atom a)))".into());
    ne("(eq ((x (atom a)) (y (atom a))) (inl (atom b) (lvar x)) (inl (atom b) (lvar y)) (or (atom a) (atom b)))".into());
    ne("(eq ((f (imp (one) (atom a))) (g (imp (one) (atom a)))) (apl (lvar f) (star)) (apl (lvar g) (star)) (atom a))".into());
    ne("(eq ((x (atom a)) (y (atom a))) (apl (lam k (atom a) (lam m (atom a) (lvar m))) (lvar x)) (lam m (atom a) (lvar x)) (imp (atom a) (atom a)))".into());
    ne("(eq ((x (atom a)) (y (atom a))) (pair (lvar x) (lvar x)) (pair (lvar x) (lvar y)) (and (atom a) (atom a)))".into());
    v
}

/// Terms of type `a` and `a ∧ a` in the context `x, y : a`, up to the given depth.
pub fn product_terms(depth: usize) -> (Vec<ldcalc::syntax::Term>, Vec<ldcalc::syntax::Term>) {
    let a = ldcalc::syntax::Formula::prop("a");
    let mut atoms = vec![ldcalc::syntax::Term::var("x", a.clone()), ldcalc::syntax::Term::var("y", a.clone())];
    let mut pairs: Vec<ldcalc::syntax::Term> = Vec::new();
    for _ in 0..depth {
        let new_pairs: Vec<ldcalc::syntax::Term> =
            atoms.iter().flat_map(|l| atoms.iter().map(move |r| ldcalc::syntax::Term::pair(l.clone(), r.clone()))).collect();
        let mut new_atoms = atoms.clone();
        for p in pairs.iter().chain(new_pairs.iter()).take(12) {
            new_atoms.push(ldcalc::syntax::Term::fst(p.clone()));
            new_atoms.push(ldcalc::syntax::Term::snd(p.clone()));
        }
        new_atoms.dedup();
        pairs.extend(new_pairs);
        pairs.dedup();
        atoms = new_atoms;
        atoms.truncate(16);
    }
    (atoms, pairs)
}

/// Universal constructions of the syntactic category, built as classes, and
/// the equations they must satisfy.
pub mod classes {
    use ldcalc::equational::Theory;
    use ldcalc::gen::Gen;
    use ldcalc::syncat::{compose_classes, pack_context, same_class_reps, ClassRep};
    use ldcalc::syntax::{fresh, Formula, LambdaSignature, Term, TermInContext};

    fn class(sig: &LambdaSignature, dom: &Formula, cod: &Formula, body: impl FnOnce(Term) -> Term) -> ClassRep {
        let x = fresh("w");
        let t = body(Term::Var(x.clone(), dom.clone()));
        ClassRep::new(sig, x, dom.clone(), t, cod.clone()).expect("well-typed construction")
    }

    /// `f` applied to the term `arg`.
    pub fn at(f: &ClassRep, arg: Term) -> Term {
        f.term.subst1(&f.var, &arg)
    }

    pub fn bang(sig: &LambdaSignature, a: &Formula) -> ClassRep {
        class(sig, a, &Formula::One, |_| Term::Star)
    }

    pub fn from_zero(sig: &LambdaSignature, a: &Formula) -> ClassRep {
        class(sig, &Formula::Zero, a, |x| Term::app(Term::Absurd(a.clone()), x))
    }

    pub fn fst(sig: &LambdaSignature, a: &Formula, b: &Formula) -> ClassRep {
        class(sig, &Formula::prod(a.clone(), b.clone()), a, Term::fst)
    }

    pub fn snd(sig: &LambdaSignature, a: &Formula, b: &Formula) -> ClassRep {
        class(sig, &Formula::prod(a.clone(), b.clone()), b, Term::snd)
    }

    pub fn pairing(sig: &LambdaSignature, f: &ClassRep, g: &ClassRep) -> ClassRep {
        let cod = Formula::prod(f.cod.clone(), g.cod.clone());
        class(sig, &f.dom, &cod, |w| Term::pair(at(f, w.clone()), at(g, w)))
    }

    pub fn inl(sig: &LambdaSignature, a: &Formula, b: &Formula) -> ClassRep {
        class(sig, a, &Formula::sum(a.clone(), b.clone()), |u| Term::inl(b.clone(), u))
    }

    pub fn inr(sig: &LambdaSignature, a: &Formula, b: &Formula) -> ClassRep {
        class(sig, b, &Formula::sum(a.clone(), b.clone()), |u| Term::inr(a.clone(), u))
    }

    /// `[z : A+B. when(z, λu. f(u), λv. g(v))]`.
    pub fn copairing(sig: &LambdaSignature, f: &ClassRep, g: &ClassRep) -> ClassRep {
        let dom = Formula::sum(f.dom.clone(), g.dom.clone());
        let (u, v) = (fresh("u"), fresh("v"));
        let l = Term::lam(&u, f.dom.clone(), at(f, Term::Var(u.clone(), f.dom.clone())));
        let r = Term::lam(&v, g.dom.clone(), at(g, Term::Var(v.clone(), g.dom.clone())));
        class(sig, &dom, &f.cod, |z| Term::when(z, l, r))
    }

    /// `[w : (A⊃B)×A. fst(w)·snd(w)]`.
    pub fn ev(sig: &LambdaSignature, a: &Formula, b: &Formula) -> ClassRep {
        let dom = Formula::prod(Formula::arrow(a.clone(), b.clone()), a.clone());
        class(sig, &dom, b, |w| Term::app(Term::fst(w.clone()), Term::snd(w)))
    }

    /// `f : C×A → B` to `[w : C. λx:A. f(⟨w, x⟩)] : C → (A⊃B)`.
    pub fn transpose(sig: &LambdaSignature, f: &ClassRep) -> ClassRep {
        let Formula::Prod(c, a) = &f.dom else { panic!("transpose needs a product domain") };
        let x = fresh("x");
        let cod = Formula::arrow((**a).clone(), f.cod.clone());
        class(sig, c, &cod, |w| {
            Term::lam(&x, (**a).clone(), at(f, Term::pair(w, Term::Var(x.clone(), (**a).clone()))))
        })
    }

    /// `f × 1_A : C×A → D×A`.
    pub fn times_id(sig: &LambdaSignature, f: &ClassRep, a: &Formula) -> ClassRep {
        let dom = Formula::prod(f.dom.clone(), a.clone());
        let cod = Formula::prod(f.cod.clone(), a.clone());
        class(sig, &dom, &cod, |w| Term::pair(at(f, Term::fst(w.clone())), Term::snd(w)))
    }

    /// `Δ : A×B + A×C → A×(B+C)`.
    pub fn delta(sig: &LambdaSignature, a: &Formula, b: &Formula, c: &Formula) -> ClassRep {
        let ab = Formula::prod(a.clone(), b.clone());
        let ac = Formula::prod(a.clone(), c.clone());
        let left = class(sig, &ab, &Formula::prod(a.clone(), Formula::sum(b.clone(), c.clone())), |w| {
            Term::pair(Term::fst(w.clone()), Term::inl(c.clone(), Term::snd(w)))
        });
        let right = class(sig, &ac, &Formula::prod(a.clone(), Formula::sum(b.clone(), c.clone())), |w| {
            Term::pair(Term::fst(w.clone()), Term::inr(b.clone(), Term::snd(w)))
        });
        copairing(sig, &left, &right)
    }

    /// The inverse of `Δ`, by cases on the second component.
    pub fn delta_inverse(sig: &LambdaSignature, a: &Formula, b: &Formula, c: &Formula) -> ClassRep {
        let dom = Formula::prod(a.clone(), Formula::sum(b.clone(), c.clone()));
        let ab = Formula::prod(a.clone(), b.clone());
        let ac = Formula::prod(a.clone(), c.clone());
        let cod = Formula::sum(ab.clone(), ac.clone());
        let (x, y) = (fresh("x"), fresh("y"));
        class(sig, &dom, &cod, |w| {
            let l = Term::lam(&x, b.clone(), Term::inl(ac.clone(), Term::pair(Term::fst(w.clone()), Term::Var(x.clone(), b.clone()))));
            let r = Term::lam(&y, c.clone(), Term::inr(ab.clone(), Term::pair(Term::fst(w.clone()), Term::Var(y.clone(), c.clone()))));
            Term::when(Term::snd(w), l, r)
        })
    }

    pub fn compose(sig: &LambdaSignature, g: &ClassRep, f: &ClassRep) -> ClassRep {
        compose_classes(sig, g, f).expect("composable")
    }

    /// Groups of classes sharing a domain: each group packs the context of
    /// several random terms generated against one variable pool.
    pub fn corpus(seed: u64, groups: usize, per_group: usize) -> Vec<Vec<ClassRep>> {
        let mut g = Gen::new(seed);
        let sig = g.sig.clone();
        let mut out = Vec::new();
        while out.len() < groups {
            g.reset();
            let terms: Vec<(Term, Formula)> = (0..per_group)
                .map(|_| {
                    let ty = g.ty(1, &[]);
                    (g.term(&ty, 2), ty)
                })
                .collect();
            let ctx = g.context();
            if ctx.len() < 2 || ctx.entries().iter().any(|(_, a)| *a == Formula::Zero) {
                continue;
            }
            let group = terms
                .into_iter()
                .map(|(t, ty)| pack_context(&sig, &TermInContext::new(ctx.clone(), t, ty)).expect("packs"))
                .collect();
            out.push(group);
        }
        out
    }

    /// Every equation of the form `(name, lhs, rhs)` that the constructions
    /// over one group must satisfy.
    pub fn witness_equations(sig: &LambdaSignature, group: &[ClassRep], other: &[ClassRep]) -> Vec<(&'static str, ClassRep, ClassRep)> {
        let mut eqs = Vec::new();
        let mut push = |n: &'static str, l: ClassRep, r: ClassRep| eqs.push((n, l, r));
        for (i, f) in group.iter().enumerate() {
            push("left unit", compose(sig, &ClassRep::identity(&f.cod), f), f.clone());
            push("right unit", compose(sig, f, &ClassRep::identity(&f.dom)), f.clone());
            push("terminal", compose(sig, &bang(sig, &f.cod), f), bang(sig, &f.dom));
            push("initial", compose(sig, f, &from_zero(sig, &f.dom)), from_zero(sig, &f.cod));
            let g = &group[(i + 1) % group.len()];
            let p = pairing(sig, f, g);
            push("product fst", compose(sig, &fst(sig, &f.cod, &g.cod), &p), f.clone());
            push("product snd", compose(sig, &snd(sig, &f.cod, &g.cod), &p), g.clone());
            let h = pairing(sig, &compose(sig, &fst(sig, &f.cod, &g.cod), &p), &compose(sig, &snd(sig, &f.cod, &g.cod), &p));
            push("product unique", h, p.clone());
            // associativity through the pairing
            let lhs = compose(sig, &compose(sig, &fst(sig, &f.cod, &g.cod), &p), &ClassRep::identity(&f.dom));
            let rhs = compose(sig, &fst(sig, &f.cod, &g.cod), &compose(sig, &p, &ClassRep::identity(&f.dom)));
            push("associativity", lhs, rhs);
            let o = &other[i % other.len()];
            let fl = compose(sig, &inl(sig, &f.cod, &o.cod), f);
            let or = compose(sig, &inr(sig, &f.cod, &o.cod), o);
            let cp = copairing(sig, &fl, &or);
            push("coproduct inl", compose(sig, &cp, &inl(sig, &f.dom, &o.dom)), fl.clone());
            push("coproduct inr", compose(sig, &cp, &inr(sig, &f.dom, &o.dom)), or.clone());
            let again = copairing(sig, &compose(sig, &cp, &inl(sig, &f.dom, &o.dom)), &compose(sig, &cp, &inr(sig, &f.dom, &o.dom)));
            push("coproduct unique", again, cp);
            if let Formula::Prod(_, a) = &f.dom {
                let t = transpose(sig, f);
                let back = compose(sig, &ev(sig, a, &f.cod), &times_id(sig, &t, a));
                push("exponential", back.clone(), f.clone());
                push("exponential unique", transpose(sig, &back), t);
            }
            let (a, b, c) = (&f.cod, &g.cod, &o.cod);
            let d = delta(sig, a, b, c);
            let di = delta_inverse(sig, a, b, c);
            push("distributive left", compose(sig, &di, &d), ClassRep::identity(&d.dom));
            push("distributive right", compose(sig, &d, &di), ClassRep::identity(&di.dom));
        }
        eqs
    }

    /// A corpus with composable pairs and provably equal pairs: the classes
    /// of one group, the projections out of their pairings, and both sides
    /// of the product equations.
    pub fn composable(sig: &LambdaSignature, group: &[ClassRep]) -> Vec<ClassRep> {
        let mut out: Vec<ClassRep> = group.to_vec();
        for (i, f) in group.iter().enumerate() {
            let g = &group[(i + 1) % group.len()];
            let p = pairing(sig, f, g);
            out.push(fst(sig, &f.cod, &g.cod));
            out.push(bang(sig, &f.cod));
            out.push(compose(sig, &fst(sig, &f.cod, &g.cod), &p));
            out.push(p);
        }
        out
    }

    pub fn holds(th: &Theory, l: &ClassRep, r: &ClassRep) -> bool {
        same_class_reps(th, l, r).expect("same hom-set")
    }
}
