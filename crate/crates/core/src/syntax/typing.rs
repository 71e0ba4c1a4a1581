use std::fmt;

use thiserror::Error;

use super::{Formula, LTerm, LambdaSignature, SignatureError, Sym, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    Unbound(Sym),
    #[error("variable `{0}` occurs twice in the context")]
    Duplicate(Sym),
    #[error("variable `{var}` is declared as {declared} but annotated {annotated}")]
    Annotation { var: Sym, declared: Formula, annotated: Formula },
    #[error("unknown axiom symbol `{0}`")]
    UnknownAxiom(Sym),
    #[error("{construct}: expected {expected}, found {found}")]
    Mismatch { construct: &'static str, expected: String, found: Formula },
    #[error("{binder}: logical variable `{var}` occurs free in the type of `{culprit}`")]
    SideCondition { binder: &'static str, var: Sym, culprit: Sym },
    #[error("exE: bound variable `{0}` escapes into the result type")]
    Escape(Sym),
    #[error("dangling bound variable")]
    LooseBound,
    #[error("stated type {stated} but the term has type {found}")]
    Stated { stated: Formula, found: Formula },
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// An ordered list of distinct typed λ-variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    entries: Vec<(Sym, Formula)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_entries(entries: Vec<(Sym, Formula)>) -> Result<Self, TypeError> {
        let mut ctx = Context::new();
        for (x, a) in entries {
            ctx.push(x, a)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, x: Sym, a: Formula) -> Result<(), TypeError> {
        if self.get(&x).is_some() {
            return Err(TypeError::Duplicate(x));
        }
        self.entries.push((x, a));
        Ok(())
    }

    pub fn with(&self, x: Sym, a: Formula) -> Result<Self, TypeError> {
        let mut out = self.clone();
        out.push(x, a)?;
        Ok(out)
    }

    pub fn get(&self, x: &Sym) -> Option<&Formula> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, a)| a)
    }

    pub fn index_of(&self, x: &Sym) -> Option<usize> {
        self.entries.iter().position(|(y, _)| y == x)
    }

    pub fn entries(&self) -> &[(Sym, Formula)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The context variables as terms.
    pub fn vars(&self) -> Vec<Term> {
        self.entries.iter().map(|(x, a)| Term::Var(x.clone(), a.clone())).collect()
    }

    pub fn check(&self, sig: &LambdaSignature) -> Result<(), TypeError> {
        for (_, a) in &self.entries {
            a.check(&sig.base)?;
            if !a.is_locally_closed() {
                return Err(TypeError::LooseBound);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermInContext {
    pub ctx: Context,
    pub term: Term,
    pub ty: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityInContext {
    pub ctx: Context,
    pub lhs: Term,
    pub rhs: Term,
    pub ty: Formula,
}

impl fmt::Display for EqualityInContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, a)) in self.ctx.entries().iter().enumerate() {
            write!(f, "{}{x} : {a}", if i == 0 { "" } else { ", " })?;
        }
        write!(f, " ⊢ {} = {} : {}", self.lhs, self.rhs, self.ty)
    }
}

impl TermInContext {
    pub fn new(ctx: Context, term: Term, ty: Formula) -> Self {
        TermInContext { ctx, term, ty }
    }
}

impl EqualityInContext {
    pub fn new(ctx: Context, lhs: Term, rhs: Term, ty: Formula) -> Self {
        EqualityInContext { ctx, lhs, rhs, ty }
    }

    pub fn flipped(&self) -> Self {
        EqualityInContext { ctx: self.ctx.clone(), lhs: self.rhs.clone(), rhs: self.lhs.clone(), ty: self.ty.clone() }
    }
}

/// Type of `t` in `ctx`. Variables must be declared in `ctx` with the same type.
pub fn infer_type(sig: &LambdaSignature, ctx: &Context, t: &Term) -> Result<Formula, TypeError> {
    Infer { sig, ctx: Some(ctx) }.go(t)
}

/// Type of `t` trusting the annotations on its free variables.
pub fn synth(sig: &LambdaSignature, t: &Term) -> Result<Formula, TypeError> {
    Infer { sig, ctx: None }.go(t)
}

pub fn check_term_in_context(sig: &LambdaSignature, tic: &TermInContext) -> Result<(), TypeError> {
    tic.ctx.check(sig)?;
    let found = infer_type(sig, &tic.ctx, &tic.term)?;
    if found != tic.ty {
        return Err(TypeError::Stated { stated: tic.ty.clone(), found });
    }
    Ok(())
}

pub fn check_equality_in_context(sig: &LambdaSignature, eq: &EqualityInContext) -> Result<(), TypeError> {
    for side in [&eq.lhs, &eq.rhs] {
        check_term_in_context(sig, &TermInContext::new(eq.ctx.clone(), side.clone(), eq.ty.clone()))?;
    }
    Ok(())
}

struct Infer<'a> {
    sig: &'a LambdaSignature,
    ctx: Option<&'a Context>,
}

fn mismatch(construct: &'static str, expected: &str, found: Formula) -> TypeError {
    TypeError::Mismatch { construct, expected: expected.to_string(), found }
}

impl Infer<'_> {
    fn formula(&self, a: &Formula) -> Result<(), TypeError> {
        a.check(&self.sig.base)?;
        if !a.is_locally_closed() {
            return Err(TypeError::LooseBound);
        }
        Ok(())
    }

    fn lterm(&self, r: &LTerm) -> Result<(), TypeError> {
        r.check(&self.sig.base)?;
        if !r.closed_at(0) {
            return Err(TypeError::LooseBound);
        }
        Ok(())
    }

    /// Binders of `AllI`/`ExE` may not capture a variable occurring in the type
    /// of a free λ-variable of the body.
    fn side_condition(binder: &'static str, body: &Term, y: &Sym, shown: &Sym) -> Result<(), TypeError> {
        for (w, ty) in body.free_vars() {
            if ty.mentions(y) {
                return Err(TypeError::SideCondition { binder, var: shown.clone(), culprit: w });
            }
        }
        Ok(())
    }

    fn go(&self, t: &Term) -> Result<Formula, TypeError> {
        match t {
            Term::Var(x, a) => {
                self.formula(a)?;
                if let Some(ctx) = self.ctx {
                    match ctx.get(x) {
                        None => return Err(TypeError::Unbound(x.clone())),
                        Some(d) if d != a => {
                            return Err(TypeError::Annotation { var: x.clone(), declared: d.clone(), annotated: a.clone() })
                        }
                        Some(_) => {}
                    }
                }
                Ok(a.clone())
            }
            Term::Bound(_) => Err(TypeError::LooseBound),
            Term::Ax(a, u) => {
                let decl = self.sig.axiom(a).ok_or_else(|| TypeError::UnknownAxiom(a.clone()))?;
                let found = self.go(u)?;
                if found != decl.dom {
                    return Err(TypeError::Mismatch { construct: "ax", expected: decl.dom.to_string(), found });
                }
                Ok(decl.cod.clone())
            }
            Term::Pair(s, u) => Ok(Formula::prod(self.go(s)?, self.go(u)?)),
            Term::Fst(u) => match self.go(u)? {
                Formula::Prod(a, _) => Ok(*a),
                other => Err(mismatch("fst", "a product", other)),
            },
            Term::Snd(u) => match self.go(u)? {
                Formula::Prod(_, b) => Ok(*b),
                other => Err(mismatch("snd", "a product", other)),
            },
            Term::Inl(b, u) => {
                self.formula(b)?;
                Ok(Formula::sum(self.go(u)?, b.clone()))
            }
            Term::Inr(b, u) => {
                self.formula(b)?;
                Ok(Formula::sum(b.clone(), self.go(u)?))
            }
            Term::When(s, l, r) => {
                let (a, b) = match self.go(s)? {
                    Formula::Sum(a, b) => (*a, *b),
                    other => return Err(mismatch("when", "a sum", other)),
                };
                let c = match self.go(l)? {
                    Formula::Arrow(d, c) if *d == a => *c,
                    other => return Err(TypeError::Mismatch { construct: "when", expected: format!("{a} → _"), found: other }),
                };
                match self.go(r)? {
                    Formula::Arrow(d, c2) if *d == b && *c2 == c => Ok(c),
                    other => Err(TypeError::Mismatch { construct: "when", expected: format!("{b} → {c}"), found: other }),
                }
            }
            Term::Lam(..) => {
                let (x, a, body) = t.open_lam().expect("lambda");
                self.formula(&a)?;
                let b = match self.ctx {
                    Some(ctx) => {
                        let inner = ctx.with(x, a.clone())?;
                        Infer { sig: self.sig, ctx: Some(&inner) }.go(&body)?
                    }
                    None => self.go(&body)?,
                };
                Ok(Formula::arrow(a, b))
            }
            Term::App(s, u) => match self.go(s)? {
                Formula::Arrow(a, b) => {
                    let found = self.go(u)?;
                    if found != *a {
                        return Err(TypeError::Mismatch { construct: "apl", expected: a.to_string(), found });
                    }
                    Ok(*b)
                }
                other => Err(mismatch("apl", "an implication", other)),
            },
            Term::Star => Ok(Formula::One),
            Term::Absurd(a) => {
                self.formula(a)?;
                Ok(Formula::arrow(Formula::Zero, a.clone()))
            }
            Term::AllI(h, s, _) => {
                if !self.sig.base.has_sort(s) {
                    return Err(SignatureError::UnknownSort(s.clone()).into());
                }
                let (y, _, body) = t.open_logic().expect("allI");
                Self::side_condition("alli", &body, &y, &h.0)?;
                let a = self.go(&body)?;
                Ok(Formula::Forall(h.clone(), s.clone(), Box::new(a.close_at(0, &y))))
            }
            Term::AllE(u, r) => {
                self.lterm(r)?;
                match self.go(u)? {
                    Formula::Forall(_, s, body) if &s == r.sort() => Ok(body.open_at(0, r)),
                    other => Err(TypeError::Mismatch {
                        construct: "alle",
                        expected: format!("a universal over sort {}", r.sort()),
                        found: other,
                    }),
                }
            }
            Term::ExI { hint, sort, witness, body, term } => {
                self.lterm(witness)?;
                let ex = Formula::Exists(hint.clone(), sort.clone(), Box::new(body.clone()));
                self.formula(&ex)?;
                if witness.sort() != sort {
                    return Err(SignatureError::SortMismatch {
                        symbol: Sym::new("exi"),
                        expected: sort.clone(),
                        found: witness.sort().clone(),
                    }
                    .into());
                }
                let want = body.open_at(0, witness);
                let found = self.go(term)?;
                if found != want {
                    return Err(TypeError::Mismatch { construct: "exi", expected: want.to_string(), found });
                }
                Ok(ex)
            }
            Term::ExE(u, h, s, _) => {
                let body = match self.go(u)? {
                    Formula::Exists(_, s2, body) if &s2 == s => body,
                    other => {
                        return Err(TypeError::Mismatch {
                            construct: "exe",
                            expected: format!("an existential over sort {s}"),
                            found: other,
                        })
                    }
                };
                let (y, _, r) = t.open_logic().expect("exE");
                Self::side_condition("exe", &r, &y, &h.0)?;
                let a = body.open_at(0, &LTerm::Var(y.clone(), s.clone()));
                match self.go(&r)? {
                    Formula::Arrow(d, b) if *d == a => {
                        if b.mentions(&y) {
                            return Err(TypeError::Escape(h.0.clone()));
                        }
                        Ok(*b)
                    }
                    other => Err(TypeError::Mismatch { construct: "exe", expected: format!("{a} → _"), found: other }),
                }
            }
        }
    }
}
