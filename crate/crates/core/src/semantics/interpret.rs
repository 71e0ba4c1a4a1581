use std::cell::RefCell;
use std::collections::BTreeSet;

use super::{pack_formula, ArrowId, Fragment, LdStructure, ObjId, SemanticsError, TermUniverse};
use crate::equational::Theory;
use crate::syntax::{
    check_equality_in_context, check_term_in_context, synth, EqualityInContext, Formula, LTerm, LambdaSignature,
    Sym, Term, TermInContext, TypeError,
};

/// The domain of the arrow being built and the arrow picking out each
/// λ-variable in scope, in context order.
#[derive(Clone, Debug)]
struct Env {
    dom: ObjId,
    vars: Vec<(Sym, ArrowId)>,
}

struct Interp<'a> {
    s: &'a LdStructure,
    log: Option<RefCell<BTreeSet<Formula>>>,
}

impl Interp<'_> {
    fn obj(&self, f: &Formula) -> Result<ObjId, SemanticsError> {
        if let Some(log) = &self.log {
            log.borrow_mut().insert(f.clone());
        }
        self.s.obj(f)
    }

    /// The stored product of `MA` and `MB`, which must be `M(A × B)`.
    fn product_of(&self, a: &Formula, b: &Formula) -> Result<super::ProductW, SemanticsError> {
        let whole = Formula::prod(a.clone(), b.clone());
        let w = self.s.product(self.obj(a)?, self.obj(b)?)?;
        if w.obj != self.obj(&whole)? {
            return Err(SemanticsError::NotProduct(whole));
        }
        Ok(w)
    }

    fn coproduct_of(&self, a: &Formula, b: &Formula) -> Result<super::CoproductW, SemanticsError> {
        let whole = Formula::sum(a.clone(), b.clone());
        let w = self.s.coproduct(self.obj(a)?, self.obj(b)?)?;
        if w.obj != self.obj(&whole)? {
            return Err(SemanticsError::NotProduct(whole));
        }
        Ok(w)
    }

    fn exponential_of(&self, a: &Formula, b: &Formula) -> Result<super::ExponentialW, SemanticsError> {
        let whole = Formula::arrow(a.clone(), b.clone());
        let w = self.s.exponential(self.obj(a)?, self.obj(b)?)?;
        if w.obj != self.obj(&whole)? {
            return Err(SemanticsError::NotProduct(whole));
        }
        Ok(w)
    }

    /// `M(A₁ × (A₂ × ⋯))` and its projections.
    fn packed(&self, types: &[Formula]) -> Result<(ObjId, Vec<ArrowId>), SemanticsError> {
        match types {
            [] => Ok((self.obj(&Formula::One)?, Vec::new())),
            [a] => {
                let o = self.obj(a)?;
                Ok((o, vec![self.s.cat.identity(o)]))
            }
            [a, rest @ ..] => {
                let w = self.product_of(a, &pack_formula(rest))?;
                let (_, projs) = self.packed(rest)?;
                let mut out = vec![w.p1];
                for p in projs {
                    out.push(self.s.compose(p, w.p2)?);
                }
                Ok((w.obj, out))
            }
        }
    }

    /// Right-nested pairing of `arrows : X → MAᵢ` into `M(A₁ × (A₂ × ⋯))`.
    fn tuple(&self, dom: ObjId, types: &[Formula], arrows: &[ArrowId]) -> Result<ArrowId, SemanticsError> {
        match (types, arrows) {
            ([], []) => {
                let one = self.obj(&Formula::One)?;
                self.s.unique(dom, one, "arrow to 1", |_| true)
            }
            ([_], [f]) => Ok(*f),
            ([a, rest @ ..], [f, fs @ ..]) => {
                let w = self.product_of(a, &pack_formula(rest))?;
                let tail = self.tuple(dom, rest, fs)?;
                self.s.pair_into(w, *f, tail)
            }
            _ => unreachable!("types and arrows have equal length"),
        }
    }

    fn top_env(&self, types: &[Formula], names: &[Sym]) -> Result<Env, SemanticsError> {
        let (dom, projs) = self.packed(types)?;
        Ok(Env { dom, vars: names.iter().cloned().zip(projs).collect() })
    }

    /// The projection `α` onto the sub-context of the free variables of `t`,
    /// and the environment over that sub-context.
    fn restrict(&self, env: &Env, t: &Term) -> Result<(ArrowId, Env, Vec<Formula>), SemanticsError> {
        let fv = t.free_vars();
        let mut names = Vec::new();
        let mut types = Vec::new();
        let mut arrows = Vec::new();
        for (x, f) in &env.vars {
            if let Some((_, ty)) = fv.iter().find(|(y, _)| y == x) {
                names.push(x.clone());
                types.push(ty.clone());
                arrows.push(*f);
            }
        }
        let alpha = self.tuple(env.dom, &types, &arrows)?;
        let sub = self.top_env(&types, &names)?;
        Ok((alpha, sub, types))
    }

    fn term(&self, env: &Env, t: &Term) -> Result<(ArrowId, Formula), SemanticsError> {
        let (f, ty) = self.clause(env, t)?;
        let o = self.obj(&ty)?;
        if self.s.cat.dom(f) != env.dom || self.s.cat.cod(f) != o {
            return Err(SemanticsError::Composite(self.s.cat.name(f).to_string(), ty.to_string()));
        }
        Ok((f, ty))
    }

    fn clause(&self, env: &Env, t: &Term) -> Result<(ArrowId, Formula), SemanticsError> {
        let s = self.s;
        let c = &s.cat;
        let mismatch = |construct: &'static str, expected: &str, found: &Formula| {
            SemanticsError::Type(TypeError::Mismatch { construct, expected: expected.into(), found: found.clone() })
        };
        match t {
            Term::Var(x, ty) => {
                let f = env.vars.iter().find(|(y, _)| y == x).map(|(_, f)| *f);
                Ok((f.ok_or_else(|| SemanticsError::Type(TypeError::Unbound(x.clone())))?, ty.clone()))
            }
            Term::Bound(_) => Err(SemanticsError::Type(TypeError::LooseBound)),
            Term::Ax(a, u) => {
                let decl = s.sig.axiom(a).ok_or_else(|| SemanticsError::UnknownAxiom(a.clone()))?;
                let (f, _) = self.term(env, u)?;
                self.obj(&decl.dom)?;
                Ok((s.compose(s.axiom(a)?, f)?, decl.cod.clone()))
            }
            Term::Pair(a, b) => {
                let (f, ta) = self.term(env, a)?;
                let (g, tb) = self.term(env, b)?;
                let w = self.product_of(&ta, &tb)?;
                Ok((s.pair_into(w, f, g)?, Formula::prod(ta, tb)))
            }
            Term::Fst(u) | Term::Snd(u) => {
                let (f, ty) = self.term(env, u)?;
                let Formula::Prod(a, b) = &ty else { return Err(mismatch("fst/snd", "a product", &ty)) };
                let w = self.product_of(a, b)?;
                if matches!(t, Term::Fst(_)) {
                    Ok((s.compose(w.p1, f)?, (**a).clone()))
                } else {
                    Ok((s.compose(w.p2, f)?, (**b).clone()))
                }
            }
            Term::Inl(other, u) => {
                let (f, a) = self.term(env, u)?;
                let w = self.coproduct_of(&a, other)?;
                Ok((s.compose(w.i1, f)?, Formula::sum(a, other.clone())))
            }
            Term::Inr(other, u) => {
                let (f, a) = self.term(env, u)?;
                let w = self.coproduct_of(other, &a)?;
                Ok((s.compose(w.i2, f)?, Formula::sum(other.clone(), a)))
            }
            Term::When(scrut, left, right) => {
                let (ft, ty) = self.term(env, scrut)?;
                let Formula::Sum(c1, c2) = &ty else { return Err(mismatch("when", "a sum", &ty)) };
                let (fu, tu) = self.term(env, left)?;
                let (fv, _) = self.term(env, right)?;
                let Formula::Arrow(_, b) = &tu else { return Err(mismatch("when", "a function", &tu)) };
                self.coproduct_of(c1, c2)?;
                let (m1, m2) = (self.obj(c1)?, self.obj(c2)?);
                let d = s.product(env.dom, c.cod(ft))?;
                let with_scrut = s.pair_into(d, c.identity(env.dom), ft)?;
                let delta_inv = s.inverse(s.delta(env.dom, m1, m2)?)?;
                let e1 = self.exponential_of(c1, b)?;
                let e2 = self.exponential_of(c2, b)?;
                let l = s.compose(e1.ev, s.times(fu, c.identity(m1))?)?;
                let r = s.compose(e2.ev, s.times(fv, c.identity(m2))?)?;
                let cases = s.copairing(l, r)?;
                Ok((s.compose_all(&[cases, delta_inv, with_scrut])?, (**b).clone()))
            }
            Term::Lam(..) => {
                let (z, a, body) = t.open_lam().expect("lambda");
                let ma = self.obj(&a)?;
                let w = s.product(env.dom, ma)?;
                let mut vars = Vec::new();
                for (x, f) in &env.vars {
                    vars.push((x.clone(), s.compose(*f, w.p1)?));
                }
                vars.push((z, w.p2));
                let (f, b) = self.term(&Env { dom: w.obj, vars }, &body)?;
                self.exponential_of(&a, &b)?;
                Ok((s.transpose(f, env.dom, ma)?, Formula::arrow(a, b)))
            }
            Term::App(fun, arg) => {
                let (fs, tf) = self.term(env, fun)?;
                let (ft, _) = self.term(env, arg)?;
                let Formula::Arrow(a, b) = &tf else { return Err(mismatch("application", "a function", &tf)) };
                let e = self.exponential_of(a, b)?;
                let w = s.product(e.obj, self.obj(a)?)?;
                Ok((s.compose(e.ev, s.pair_into(w, fs, ft)?)?, (**b).clone()))
            }
            Term::Star => {
                let one = self.obj(&Formula::One)?;
                Ok((s.unique(env.dom, one, "arrow to 1", |_| true)?, Formula::One))
            }
            Term::Absurd(b) => {
                let zero = self.obj(&Formula::Zero)?;
                let w = s.product(env.dom, zero)?;
                let bang = s.unique(zero, self.obj(b)?, "arrow out of 0", |_| true)?;
                let f = s.compose(bang, w.p2)?;
                self.exponential_of(&Formula::Zero, b)?;
                Ok((s.transpose(f, env.dom, zero)?, Formula::arrow(Formula::Zero, b.clone())))
            }
            Term::AllI(_, sort, _) => {
                let ty = synth(&s.sig, t)?;
                let target = self.obj(&ty)?;
                let (alpha, sub, _) = self.restrict(env, t)?;
                let mut eqs = Vec::new();
                for r in s.universe.terms(sort) {
                    let (f, _) = self.term(&sub, &t.logic_body_at(&r).expect("binder"))?;
                    eqs.push((s.leg(&ty, &r)?, f));
                }
                let beta = s.unique(sub.dom, target, "∀-mediator", |h| eqs.iter().all(|&(p, f)| c.compose(p, h) == Some(f)))?;
                Ok((s.compose(beta, alpha)?, ty))
            }
            Term::AllE(u, r) => {
                let (f, ty) = self.term(env, u)?;
                let inst = ty.instantiate(r).filter(|_| matches!(ty, Formula::Forall(..)));
                let inst = inst.ok_or_else(|| mismatch("allE", "a universal", &ty))?;
                self.obj(&inst)?;
                Ok((s.compose(s.leg(&ty, r)?, f)?, inst))
            }
            Term::ExI { hint, sort, witness, body, term } => {
                let (f, _) = self.term(env, term)?;
                let ty = Formula::Exists(hint.clone(), sort.clone(), Box::new(body.clone()));
                Ok((s.compose(s.leg(&ty, witness)?, f)?, ty))
            }
            Term::ExE(scrut, _, sort, _) => {
                let (ft, ty) = self.term(env, scrut)?;
                let Formula::Exists(h, zs, cbody) = &ty else { return Err(mismatch("exE", "an existential", &ty)) };
                if zs != sort {
                    return Err(mismatch("exE", "matching sorts", &ty));
                }
                let (alpha, sub, types) = self.restrict(env, t)?;
                let a = pack_formula(&types);
                let ma = self.obj(&a)?;
                let outer = Formula::Exists(h.clone(), sort.clone(), Box::new(Formula::prod(a.clone(), (**cbody).clone())));
                let mouter = self.obj(&outer)?;
                let target = s.product(ma, self.obj(&ty)?)?;
                let with_scrut = s.pair_into(target, alpha, ft)?;
                let mut beta_eqs = Vec::new();
                let mut gamma_eqs = Vec::new();
                let mut result = None;
                for u in s.universe.terms(sort) {
                    let inst = ty.instantiate(&u).expect("quantifier");
                    self.product_of(&a, &inst)?;
                    let j_outer = s.leg(&outer, &u)?;
                    beta_eqs.push((j_outer, s.times(c.identity(ma), s.leg(&ty, &u)?)?));
                    let (fr, tr) = self.term(&sub, &t.logic_body_at(&u).expect("binder"))?;
                    let Formula::Arrow(_, b) = &tr else { return Err(mismatch("exE", "a function", &tr)) };
                    let e = self.exponential_of(&inst, b)?;
                    let g = s.compose(e.ev, s.times(fr, c.identity(self.obj(&inst)?))?)?;
                    gamma_eqs.push((j_outer, g));
                    result = Some((**b).clone());
                }
                let b = result.expect("the universe has a generic variable per sort");
                let mb = self.obj(&b)?;
                let holds = |eqs: &[(ArrowId, ArrowId)], k: ArrowId| eqs.iter().all(|&(j, g)| c.compose(k, j) == Some(g));
                let beta = s.unique(mouter, target.obj, "Frobenius comparison", |k| holds(&beta_eqs, k))?;
                let gamma = s.unique(mouter, mb, "∃-mediator", |k| holds(&gamma_eqs, k))?;
                Ok((s.compose_all(&[gamma, s.inverse(beta)?, with_scrut])?, b))
            }
        }
    }

    fn run(&self, tic: &TermInContext) -> Result<ArrowId, SemanticsError> {
        let tic = self.s.universe.generalize(tic);
        let (names, types): (Vec<Sym>, Vec<Formula>) = tic.ctx.entries().iter().cloned().unzip();
        let env = self.top_env(&types, &names)?;
        let (f, ty) = self.term(&env, &tic.term)?;
        if ty != tic.ty {
            return Err(SemanticsError::Type(TypeError::Stated { stated: tic.ty.clone(), found: ty }));
        }
        Ok(f)
    }
}

/// The arrow `M(A₁ × ⋯ × Aₙ) → M(B)` denoted by a term-in-context. Free
/// logical variables are first replaced by the generic variables of the
/// universe.
pub fn interpret(tic: &TermInContext, s: &LdStructure) -> Result<ArrowId, SemanticsError> {
    check_term_in_context(&s.sig, tic)?;
    Interp { s, log: None }.run(tic)
}

/// 1 when both sides denote the same arrow.
pub fn eval_eq(eq: &EqualityInContext, s: &LdStructure) -> Result<bool, SemanticsError> {
    check_equality_in_context(&s.sig, eq)?;
    let interp = Interp { s, log: None };
    let l = interp.run(&TermInContext::new(eq.ctx.clone(), eq.lhs.clone(), eq.ty.clone()))?;
    let r = interp.run(&TermInContext::new(eq.ctx.clone(), eq.rhs.clone(), eq.ty.clone()))?;
    Ok(l == r)
}

/// Right-nested pairing of arrows `X → MAᵢ` into `M(A₁ × (A₂ × ⋯))`; the
/// unique arrow to `1` when the list is empty.
pub fn tuple(s: &LdStructure, dom: ObjId, types: &[Formula], arrows: &[ArrowId]) -> Result<ArrowId, SemanticsError> {
    if types.len() != arrows.len() {
        return Err(SemanticsError::Arity(types.len(), arrows.len()));
    }
    Interp { s, log: None }.tuple(dom, types, arrows)
}

/// The formulas the interpretation of the given terms consults, closed up.
/// Computed by a dry run in the one-object structure, where every lookup
/// succeeds, so the recorded lookups are exactly those any structure will
/// receive.
pub fn demanded_fragment(
    sig: &LambdaSignature,
    u: &TermUniverse,
    tics: &[TermInContext],
) -> Result<Fragment, SemanticsError> {
    let trivial = super::fixtures::trivial(sig.clone(), u.clone());
    let interp = Interp { s: &trivial, log: Some(RefCell::new(BTreeSet::new())) };
    for tic in tics {
        check_term_in_context(sig, tic)?;
        interp.run(tic)?;
    }
    let seen = interp.log.expect("recording").into_inner();
    Ok(Fragment::closure(seen, u))
}

/// `t ↦ M(A[t/x])` over the universe terms of sort `sort`.
pub fn sigma(a: &Formula, x: &Sym, sort: &Sym, s: &LdStructure) -> Result<Vec<(LTerm, ObjId)>, SemanticsError> {
    s.universe.terms(sort).into_iter().map(|t| s.obj(&a.subst1(x, &t)).map(|o| (t, o))).collect()
}

/// Whether there is an arrow `M(B₁ × ⋯ × Bₙ) → MA` (from `1` when `bs` is empty).
pub fn logical_consequence(s: &LdStructure, a: &Formula, bs: &[Formula]) -> Result<bool, SemanticsError> {
    let dom = s.obj(&pack_formula(bs))?;
    Ok(!s.cat.hom(dom, s.obj(a)?).is_empty())
}

/// The first reason the structure is not a model of `th`, if any: an axiom
/// symbol without a well-typed `M_Ax` arrow, or an axiom evaluating to 0.
pub fn model_failure(s: &LdStructure, th: &Theory) -> Result<Option<String>, SemanticsError> {
    for decl in &th.sig.axioms {
        let f = match s.axiom(&decl.name) {
            Ok(f) => f,
            Err(_) => return Ok(Some(format!("axiom symbol `{}` has no interpretation", decl.name))),
        };
        if s.cat.dom(f) != s.obj(&decl.dom)? || s.cat.cod(f) != s.obj(&decl.cod)? {
            return Ok(Some(format!("interpretation of `{}` has the wrong type", decl.name)));
        }
    }
    for (i, ax) in th.axioms.iter().enumerate() {
        if !eval_eq(ax, s)? {
            return Ok(Some(format!("axiom {i} evaluates to 0")));
        }
    }
    Ok(None)
}

pub fn is_model(s: &LdStructure, th: &Theory) -> Result<bool, SemanticsError> {
    model_failure(s, th).map(|f| f.is_none())
}
