use std::collections::BTreeMap;

use thiserror::Error;

use super::decide::{decide_eq, verify_evidence, Config, Evidence, Verdict};
use super::{RuleId, Theory};
use crate::syntax::{
    check_equality_in_context, fresh, infer_type, Context, EqualityInContext, Formula, LTerm, LambdaSignature, Sym,
    Term, TypeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("{1}: {0}")]
    Type(#[source] TypeError, RuleId),
    #[error("{rule}: side condition violated: {reason}")]
    SideCondition { rule: RuleId, reason: String },
    #[error("{rule}: premise {index} is not derivable")]
    Premise { rule: RuleId, index: usize },
    #[error("{rule}: the two sides were not shown equal")]
    NotEqual { rule: RuleId },
    #[error("{rule}: the justification failed to re-check")]
    Evidence { rule: RuleId },
}

/// A schema instantiated at concrete terms: premises and conclusion.
/// Built only through the per-schema constructors, which enforce the shape
/// and the side conditions.
#[derive(Clone, Debug)]
pub struct RuleInstance {
    rule: RuleId,
    premises: Vec<EqualityInContext>,
    conclusion: EqualityInContext,
}

fn side(rule: RuleId, ok: bool, reason: &str) -> Result<(), InstanceError> {
    if ok {
        Ok(())
    } else {
        Err(InstanceError::SideCondition { rule, reason: reason.to_string() })
    }
}

fn ty_of(sig: &LambdaSignature, rule: RuleId, ctx: &Context, t: &Term) -> Result<Formula, InstanceError> {
    infer_type(sig, ctx, t).map_err(|e| InstanceError::Type(e, rule))
}

fn var(x: &Sym, a: &Formula) -> Term {
    Term::Var(x.clone(), a.clone())
}

impl RuleInstance {
    pub fn rule(&self) -> RuleId {
        self.rule
    }

    pub fn premises(&self) -> &[EqualityInContext] {
        &self.premises
    }

    pub fn conclusion(&self) -> &EqualityInContext {
        &self.conclusion
    }

    fn finish(
        sig: &LambdaSignature,
        rule: RuleId,
        ctx: Context,
        lhs: Term,
        rhs: Term,
        premises: Vec<EqualityInContext>,
    ) -> Result<Self, InstanceError> {
        let ty = ty_of(sig, rule, &ctx, &lhs)?;
        let conclusion = EqualityInContext::new(ctx, lhs, rhs, ty);
        for eq in premises.iter().chain(std::iter::once(&conclusion)) {
            check_equality_in_context(sig, eq).map_err(|e| InstanceError::Type(e, rule))?;
        }
        Ok(RuleInstance { rule, premises, conclusion })
    }

    /// From `x⃗. s = t` to `y⃗. s[r⃗/x⃗] = t[r⃗/x⃗]`.
    pub fn eq0(sig: &LambdaSignature, premise: EqualityInContext, ctx: Context, rs: Vec<Term>) -> Result<Self, InstanceError> {
        let rule = RuleId::Eq0;
        side(rule, rs.len() == premise.ctx.len(), "one term per context variable")?;
        let mut map = BTreeMap::new();
        for ((x, a), r) in premise.ctx.entries().iter().zip(rs) {
            side(rule, ty_of(sig, rule, &ctx, &r)? == *a, "substituted term has the wrong type")?;
            map.insert(x.clone(), r);
        }
        let (lhs, rhs) = (premise.lhs.subst(&map), premise.rhs.subst(&map));
        Self::finish(sig, rule, ctx, lhs, rhs, vec![premise])
    }

    /// From `x⃗. sᵢ = tᵢ` to `x⃗. r[s⃗/y⃗] = r[t⃗/y⃗]`; `r` is typed in the context
    /// extended by `ys`.
    pub fn eq1(
        sig: &LambdaSignature,
        r: Term,
        ys: Vec<(Sym, Formula)>,
        premises: Vec<EqualityInContext>,
    ) -> Result<Self, InstanceError> {
        let rule = RuleId::Eq1;
        side(rule, !premises.is_empty() && ys.len() == premises.len(), "one premise per substituted variable")?;
        let ctx = premises[0].ctx.clone();
        side(rule, premises.iter().all(|p| p.ctx == ctx), "premises share one context")?;
        let mut ext = ctx.clone();
        let (mut ls, mut rs) = (BTreeMap::new(), BTreeMap::new());
        for ((y, b), p) in ys.into_iter().zip(&premises) {
            side(rule, p.ty == b, "premise type differs from the variable type")?;
            ext.push(y.clone(), b).map_err(|e| InstanceError::Type(e, rule))?;
            ls.insert(y.clone(), p.lhs.clone());
            rs.insert(y, p.rhs.clone());
        }
        ty_of(sig, rule, &ext, &r)?;
        Self::finish(sig, rule, ctx, r.subst(&ls), r.subst(&rs), premises)
    }

    /// Reflexivity, `x⃗. t = t`.
    pub fn eq2(sig: &LambdaSignature, ctx: Context, t: Term) -> Result<Self, InstanceError> {
        Self::finish(sig, RuleId::Eq2, ctx, t.clone(), t, vec![])
    }

    pub fn eq3(sig: &LambdaSignature, premise: EqualityInContext) -> Result<Self, InstanceError> {
        let c = premise.flipped();
        Self::finish(sig, RuleId::Eq3, c.ctx, c.lhs, c.rhs, vec![premise])
    }

    pub fn eq4(sig: &LambdaSignature, first: EqualityInContext, second: EqualityInContext) -> Result<Self, InstanceError> {
        let rule = RuleId::Eq4;
        side(rule, first.ctx == second.ctx && first.ty == second.ty, "premises share context and type")?;
        side(rule, first.rhs == second.lhs, "middle terms differ")?;
        let (ctx, lhs, rhs) = (first.ctx.clone(), first.lhs.clone(), second.rhs.clone());
        Self::finish(sig, rule, ctx, lhs, rhs, vec![first, second])
    }

    /// `t =₁ ∗`.
    pub fn x0(sig: &LambdaSignature, ctx: Context, t: Term) -> Result<Self, InstanceError> {
        side(RuleId::X0, ty_of(sig, RuleId::X0, &ctx, &t)? == Formula::One, "term of type 1")?;
        Self::finish(sig, RuleId::X0, ctx, t, Term::Star, vec![])
    }

    pub fn x1(sig: &LambdaSignature, ctx: Context, a: Term, b: Term) -> Result<Self, InstanceError> {
        Self::finish(sig, RuleId::X1, ctx, Term::fst(Term::pair(a.clone(), b)), a, vec![])
    }

    pub fn x2(sig: &LambdaSignature, ctx: Context, a: Term, b: Term) -> Result<Self, InstanceError> {
        Self::finish(sig, RuleId::X2, ctx, Term::snd(Term::pair(a, b.clone())), b, vec![])
    }

    pub fn x3(sig: &LambdaSignature, ctx: Context, z: Term) -> Result<Self, InstanceError> {
        let lhs = Term::pair(Term::fst(z.clone()), Term::snd(z.clone()));
        Self::finish(sig, RuleId::X3, ctx, lhs, z, vec![])
    }

    /// `when(inl_B(a), t, s) = t · a`.
    pub fn p0(sig: &LambdaSignature, ctx: Context, other: Formula, a: Term, t: Term, s: Term) -> Result<Self, InstanceError> {
        let lhs = Term::when(Term::inl(other, a.clone()), t.clone(), s);
        Self::finish(sig, RuleId::P0, ctx, lhs, Term::app(t, a), vec![])
    }

    /// `when(inr_D(b), t, s) = s · b`.
    pub fn p1(sig: &LambdaSignature, ctx: Context, other: Formula, b: Term, t: Term, s: Term) -> Result<Self, InstanceError> {
        let lhs = Term::when(Term::inr(other, b.clone()), t, s.clone());
        Self::finish(sig, RuleId::P1, ctx, lhs, Term::app(s, b), vec![])
    }

    /// The commuting conversion for nested case analysis; `xs` are x₀ … x₄.
    pub fn p2(sig: &LambdaSignature, ctx: Context, xs: [Term; 5]) -> Result<Self, InstanceError> {
        let rule = RuleId::P2;
        let [x0, x1, x2, x3, x4] = xs;
        let Formula::Sum(a1, a2) = ty_of(sig, rule, &ctx, &x0)? else {
            return Err(InstanceError::SideCondition { rule, reason: "x0 must have a sum type".into() });
        };
        let branch = |xi: &Term, ai: Formula| {
            let y = fresh("y");
            let body = Term::when(Term::app(xi.clone(), var(&y, &ai)), x3.clone(), x4.clone());
            Term::lam(&y, ai, body)
        };
        let rhs = Term::when(x0.clone(), branch(&x1, *a1), branch(&x2, *a2));
        let lhs = Term::when(Term::when(x0, x1, x2), x3, x4);
        Self::finish(sig, rule, ctx, lhs, rhs, vec![])
    }

    /// `F_A · y = x` with `y : 0`.
    pub fn p3(sig: &LambdaSignature, ctx: Context, x: Term, y: Term) -> Result<Self, InstanceError> {
        let rule = RuleId::P3;
        let a = ty_of(sig, rule, &ctx, &x)?;
        side(rule, ty_of(sig, rule, &ctx, &y)? == Formula::Zero, "y must have type 0")?;
        Self::finish(sig, rule, ctx, Term::app(Term::Absurd(a), y), x, vec![])
    }

    /// β: `(λy:C. s) · t = s[t/y]`.
    pub fn a0(sig: &LambdaSignature, ctx: Context, y: &Sym, c: Formula, s: Term, t: Term) -> Result<Self, InstanceError> {
        let lhs = Term::app(Term::lam(y, c, s.clone()), t.clone());
        Self::finish(sig, RuleId::A0, ctx, lhs, s.subst1(y, &t), vec![])
    }

    /// η: `λy:C. t · y = t` with `y ∉ FV(t)`.
    pub fn a1(sig: &LambdaSignature, ctx: Context, y: &Sym, c: Formula, t: Term) -> Result<Self, InstanceError> {
        side(RuleId::A1, !t.mentions_var(y), "y occurs free in t")?;
        let lhs = Term::lam(y, c.clone(), Term::app(t.clone(), var(y, &c)));
        Self::finish(sig, RuleId::A1, ctx, lhs, t, vec![])
    }

    /// `allE(allI(λz:s. t), r) = t[r/z]`.
    pub fn f0(sig: &LambdaSignature, ctx: Context, z: &Sym, sort: &Sym, t: Term, r: LTerm) -> Result<Self, InstanceError> {
        side(RuleId::F0, r.sort() == sort, "witness sort")?;
        let lhs = Term::all_e(Term::all_i(z, sort, t.clone()), r.clone());
        Self::finish(sig, RuleId::F0, ctx, lhs, t.subst_logic1(z, &r), vec![])
    }

    /// From `allE(u, y) = allE(v, y)` for a fresh `y` to `u = v`.
    pub fn f1(sig: &LambdaSignature, ctx: Context, u: Term, v: Term, y: &Sym) -> Result<Self, InstanceError> {
        let rule = RuleId::F1;
        let Formula::Forall(_, sort, body) = ty_of(sig, rule, &ctx, &u)? else {
            return Err(InstanceError::SideCondition { rule, reason: "u must have a universal type".into() });
        };
        let fresh_enough =
            !u.mentions_logic(y) && !v.mentions_logic(y) && !ctx.entries().iter().any(|(_, a)| a.mentions(y));
        side(rule, fresh_enough, "y must be fresh")?;
        let yv = LTerm::Var(y.clone(), sort);
        let premise = EqualityInContext::new(
            ctx.clone(),
            Term::all_e(u.clone(), yv.clone()),
            Term::all_e(v.clone(), yv.clone()),
            body.open_at(0, &yv),
        );
        Self::finish(sig, rule, ctx, u, v, vec![premise])
    }

    /// `exE(exI_z(t), λz:s. v) = v[r/z] · t` where `r` is the witness and `A` the body.
    #[allow(clippy::too_many_arguments)]
    pub fn e0(
        sig: &LambdaSignature,
        ctx: Context,
        z: &Sym,
        sort: &Sym,
        r: LTerm,
        body: Formula,
        t: Term,
        v: Term,
    ) -> Result<Self, InstanceError> {
        side(RuleId::E0, r.sort() == sort, "witness sort")?;
        let packed = Term::ex_i(z, sort, r.clone(), body, t.clone());
        let lhs = Term::ex_e(packed, z, sort, v.clone());
        Self::finish(sig, RuleId::E0, ctx, lhs, Term::app(v.subst_logic1(z, &r), t), vec![])
    }

    /// From `exE(u, λz:s. r) = exE(u, λz:s. t)` to `r = t`, when both have the same free variables.
    pub fn e1(sig: &LambdaSignature, ctx: Context, u: Term, z: &Sym, sort: &Sym, r: Term, t: Term) -> Result<Self, InstanceError> {
        let rule = RuleId::E1;
        let names = |x: &Term| x.free_vars().into_iter().map(|(n, _)| n).collect::<Vec<_>>();
        side(rule, names(&r) == names(&t), "FV(r) and FV(t) differ")?;
        side(rule, !ctx.entries().iter().any(|(_, a)| a.mentions(z)), "z occurs in the context")?;
        let premise = EqualityInContext::new(
            ctx.clone(),
            Term::ex_e(u.clone(), z, sort, r.clone()),
            Term::ex_e(u, z, sort, t.clone()),
            Formula::One,
        );
        let ty = ty_of(sig, rule, &ctx, &premise.lhs)?;
        let premise = EqualityInContext { ty, ..premise };
        Self::finish(sig, rule, ctx, r, t, vec![premise])
    }

    /// `w = exE(v, λy:s. λz:A. w[exI_y(z)/v])` for a context variable `v : ∃y:s. A`.
    pub fn e2(sig: &LambdaSignature, ctx: Context, v: &Sym, w: Term) -> Result<Self, InstanceError> {
        let rule = RuleId::E2;
        let vty = ctx.get(v).cloned().ok_or_else(|| InstanceError::Type(TypeError::Unbound(v.clone()), rule))?;
        let Formula::Exists(h, sort, body) = vty.clone() else {
            return Err(InstanceError::SideCondition { rule, reason: "v must have an existential type".into() });
        };
        let (y, z) = (fresh(h.0.as_str()), fresh("z"));
        let yv = LTerm::Var(y.clone(), sort.clone());
        let a = body.open_at(0, &yv);
        let packed = Term::ExI { hint: h, sort: sort.clone(), witness: yv, body: *body, term: Box::new(var(&z, &a)) };
        let inner = Term::lam(&z, a, w.subst1(v, &packed));
        let rhs = Term::ex_e(var(v, &vty), &y, &sort, inner);
        Self::finish(sig, rule, ctx, w, rhs, vec![])
    }

    /// `exE(exE(a, λy. λz:D. b), λy'. c) = exE(a, λy. λz:D. exE(b, λy'. c))`.
    #[allow(clippy::too_many_arguments)]
    pub fn e3(
        sig: &LambdaSignature,
        ctx: Context,
        a: Term,
        y: &Sym,
        z: &Sym,
        b: Term,
        y2: &Sym,
        c: Term,
    ) -> Result<Self, InstanceError> {
        let rule = RuleId::E3;
        let Formula::Exists(_, sort, body) = ty_of(sig, rule, &ctx, &a)? else {
            return Err(InstanceError::SideCondition { rule, reason: "a must have an existential type".into() });
        };
        let d = body.open_at(0, &LTerm::Var(y.clone(), sort.clone()));
        let Formula::Exists(_, sort2, _) = crate::syntax::synth(sig, &b).map_err(|e| InstanceError::Type(e, rule))? else {
            return Err(InstanceError::SideCondition { rule, reason: "b must have an existential type".into() });
        };
        side(rule, !c.mentions_logic(y) && !c.mentions_var(z), "c must not see the inner binders")?;
        let lhs = Term::ex_e(Term::ex_e(a.clone(), y, &sort, Term::lam(z, d.clone(), b.clone())), y2, &sort2, c.clone());
        let rhs = Term::ex_e(a, y, &sort, Term::lam(z, d, Term::ex_e(b, y2, &sort2, c)));
        Self::finish(sig, rule, ctx, lhs, rhs, vec![])
    }

    /// `exE(a, λy:s. λz:C. b[exI_y(z)/w]) = b[a/w]` with `z ∉ FV(b)`; `b` is typed
    /// in the context extended by `w`.
    pub fn e4(sig: &LambdaSignature, ctx: Context, a: Term, y: &Sym, z: &Sym, w: &Sym, b: Term) -> Result<Self, InstanceError> {
        let rule = RuleId::E4;
        let aty = ty_of(sig, rule, &ctx, &a)?;
        let Formula::Exists(h, sort, body) = aty.clone() else {
            return Err(InstanceError::SideCondition { rule, reason: "a must have an existential type".into() });
        };
        side(rule, !b.mentions_var(z), "z occurs free in b")?;
        side(rule, !b.mentions_logic(y), "y occurs free in b")?;
        let ext = ctx.with(w.clone(), aty).map_err(|e| InstanceError::Type(e, rule))?;
        ty_of(sig, rule, &ext, &b)?;
        let yv = LTerm::Var(y.clone(), sort.clone());
        let c = body.open_at(0, &yv);
        let packed = Term::ExI { hint: h, sort: sort.clone(), witness: yv, body: *body, term: Box::new(var(z, &c)) };
        let lhs = Term::ex_e(a.clone(), y, &sort, Term::lam(z, c, b.subst1(w, &packed)));
        Self::finish(sig, rule, ctx, lhs, b.subst1(w, &a), vec![])
    }
}

/// Check the premises, then decide the conclusion and re-check the justification.
pub fn check_rule_instance(th: &Theory, inst: &RuleInstance, cfg: Config) -> Result<Evidence, InstanceError> {
    let rule = inst.rule;
    let decide = |eq: &EqualityInContext| match decide_eq(th, eq, cfg).map_err(|e| InstanceError::Type(e, rule))? {
        Verdict::Equal(ev) if verify_evidence(th, eq, &ev) => Ok(Some(ev)),
        Verdict::Equal(_) => Err(InstanceError::Evidence { rule }),
        Verdict::NotEqual { .. } => Ok(None),
    };
    for (index, p) in inst.premises.iter().enumerate() {
        if decide(p)?.is_none() {
            return Err(InstanceError::Premise { rule, index });
        }
    }
    decide(&inst.conclusion)?.ok_or(InstanceError::NotEqual { rule })
}
