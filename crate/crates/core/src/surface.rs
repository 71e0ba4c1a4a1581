//! The s-expression surface language: reading and printing formulas, terms,
//! contexts, derivations, signatures, theories, structures, Kripke models and
//! the other workspace forms.
//!
//! Printing picks binder names from the stored hints, adding a numeric
//! suffix when the hint is already used in the body, so printed text always
//! reads back to an equal object.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::curryhoward::{Assumptions, NdProof, Rule};
use crate::equational::Theory;
use crate::kripke::{FinKripkeModel, FinPoset, Stability};
use crate::semantics::{
    ArrowDecl, CoproductW, ExponentialW, FinCategory, LdStructure, ObjId, ProductW, TermUniverse,
};
use crate::sexpr::{read_all, Pos, ReadError, Sexp};
use crate::syntax::{
    AxiomDecl, Context, EqualityInContext, Formula, FunDecl, LTerm, LambdaSignature, LogicalSignature, RelDecl, Sym,
    Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error("{0}: {1}")]
    Syntax(Pos, String),
    #[error("{pos}: `{head}` expects {expected} arguments, got {found}")]
    Arity { pos: Pos, head: String, expected: String, found: usize },
    #[error("{0}: unknown {1} `{2}`")]
    Unknown(Pos, &'static str, String),
    #[error("{0}: {1}")]
    Invalid(Pos, String),
}

type Res<T> = Result<T, SurfaceError>;

fn syntax<T>(e: &Sexp, what: &str) -> Res<T> {
    Err(SurfaceError::Syntax(e.pos(), format!("expected {what}, found {}", e.to_flat())))
}

fn sym(e: &Sexp) -> Res<Sym> {
    match e.as_atom() {
        Some(s) if !s.is_empty() => Ok(Sym::new(s)),
        _ => syntax(e, "a symbol"),
    }
}

fn num(e: &Sexp) -> Res<usize> {
    e.as_atom().and_then(|s| s.parse().ok()).map_or_else(|| syntax(e, "a number"), Ok)
}

/// `(head args…)` with exactly `n` arguments.
fn args(e: &Sexp, n: usize) -> Res<&[Sexp]> {
    let items = e.as_list().ok_or_else(|| SurfaceError::Syntax(e.pos(), format!("expected a list, found {e}")))?;
    if items.len() != n + 1 {
        return Err(SurfaceError::Arity {
            pos: e.pos(),
            head: e.head().unwrap_or("?").to_string(),
            expected: n.to_string(),
            found: items.len().saturating_sub(1),
        });
    }
    Ok(&items[1..])
}

fn tail(e: &Sexp) -> Res<&[Sexp]> {
    match e.as_list() {
        Some([_, rest @ ..]) => Ok(rest),
        _ => syntax(e, "a form"),
    }
}

fn list(e: &Sexp) -> Res<&[Sexp]> {
    e.as_list().map_or_else(|| syntax(e, "a list"), Ok)
}

fn at(s: &str) -> Sexp {
    Sexp::atom(s)
}

fn at_sym(s: &Sym) -> Sexp {
    Sexp::atom(s.as_str())
}

/// A name based on `base` for which `taken` is false.
fn pick(base: &Sym, taken: impl Fn(&Sym) -> bool) -> Sym {
    let b = base.base();
    let b = if b.is_empty() { "v" } else { b };
    let first = Sym::new(b);
    if !taken(&first) {
        return first;
    }
    (1..).map(|i| Sym::from(format!("{b}{i}"))).find(|s| !taken(s)).expect("unbounded")
}

/// Reads surface syntax against a signature.
#[derive(Clone, Debug, Default)]
pub struct Reader {
    pub sig: LambdaSignature,
}

impl Reader {
    pub fn new(sig: LambdaSignature) -> Self {
        Reader { sig }
    }

    pub fn formula(&self, e: &Sexp) -> Res<Formula> {
        let head = e.head().map_or_else(|| syntax(e, "a formula"), Ok)?;
        Ok(match head {
            "one" => {
                args(e, 0)?;
                Formula::One
            }
            "zero" => {
                args(e, 0)?;
                Formula::Zero
            }
            "atom" => {
                let rest = tail(e)?;
                let (r, ts) = rest.split_first().map_or_else(|| syntax(e, "(atom R t…)"), Ok)?;
                let r = sym(r)?;
                let ts = ts.iter().map(|t| self.lterm(t)).collect::<Res<Vec<_>>>()?;
                if let Some(decl) = self.sig.base.rel(&r) {
                    let sorts: Vec<&Sym> = ts.iter().map(|t| t.sort()).collect();
                    if decl.args.iter().collect::<Vec<_>>() != sorts {
                        return Err(SurfaceError::Invalid(e.pos(), format!("`{r}` expects sorts {:?}", decl.args)));
                    }
                } else if !self.sig.base.rels.is_empty() || !self.sig.base.sorts.is_empty() {
                    return Err(SurfaceError::Unknown(e.pos(), "relation", r.to_string()));
                }
                Formula::Atom(r, ts)
            }
            "and" | "or" | "imp" | "arrow" => {
                let a = args(e, 2)?;
                let (l, r) = (self.formula(&a[0])?, self.formula(&a[1])?);
                match head {
                    "and" => Formula::prod(l, r),
                    "or" => Formula::sum(l, r),
                    _ => Formula::arrow(l, r),
                }
            }
            "all" | "ex" => {
                let a = args(e, 3)?;
                let (x, s) = (sym(&a[0])?, self.sort(&a[1])?);
                let body = self.formula(&a[2])?;
                if head == "all" {
                    Formula::forall(&x, &s, body)
                } else {
                    Formula::exists(&x, &s, body)
                }
            }
            "type" => self.formula(&args(e, 1)?[0])?,
            other => return Err(SurfaceError::Unknown(e.pos(), "formula form", other.to_string())),
        })
    }

    fn sort(&self, e: &Sexp) -> Res<Sym> {
        let s = sym(e)?;
        if !self.sig.base.sorts.is_empty() && !self.sig.base.has_sort(&s) {
            return Err(SurfaceError::Unknown(e.pos(), "sort", s.to_string()));
        }
        Ok(s)
    }

    pub fn lterm(&self, e: &Sexp) -> Res<LTerm> {
        match e.head() {
            Some("var") => {
                let a = args(e, 2)?;
                Ok(LTerm::Var(sym(&a[0])?, self.sort(&a[1])?))
            }
            Some("app") => {
                let rest = tail(e)?;
                let (f, ts) = rest.split_first().map_or_else(|| syntax(e, "(app f t…)"), Ok)?;
                let f = sym(f)?;
                let decl = self.sig.base.fun(&f).ok_or_else(|| SurfaceError::Unknown(e.pos(), "function", f.to_string()))?;
                let ts = ts.iter().map(|t| self.lterm(t)).collect::<Res<Vec<_>>>()?;
                if ts.len() != decl.args.len() {
                    return Err(SurfaceError::Arity {
                        pos: e.pos(),
                        head: f.to_string(),
                        expected: decl.args.len().to_string(),
                        found: ts.len(),
                    });
                }
                for (t, s) in ts.iter().zip(&decl.args) {
                    if t.sort() != s {
                        return Err(SurfaceError::Invalid(e.pos(), format!("`{f}` expects an argument of sort `{s}`")));
                    }
                }
                Ok(LTerm::App(f, ts, decl.result.clone()))
            }
            _ => syntax(e, "a logical term"),
        }
    }

    pub fn context(&self, e: &Sexp) -> Res<Context> {
        let mut ctx = Context::new();
        for entry in list(e)? {
            let pair = list(entry)?;
            let [x, a] = pair else { return syntax(entry, "(x A)") };
            ctx.push(sym(x)?, self.formula(a)?).map_err(|err| SurfaceError::Invalid(entry.pos(), err.to_string()))?;
        }
        Ok(ctx)
    }

    /// A λ-term whose free variables are looked up in `scope` (innermost last).
    pub fn term(&self, e: &Sexp, scope: &mut Vec<(Sym, Formula)>) -> Res<Term> {
        let head = e.head().map_or_else(|| syntax(e, "a λ-term"), Ok)?;
        Ok(match head {
            "lvar" => {
                let x = sym(&args(e, 1)?[0])?;
                let ty = scope
                    .iter()
                    .rev()
                    .find(|(y, _)| *y == x)
                    .map(|(_, a)| a.clone())
                    .ok_or_else(|| SurfaceError::Unknown(e.pos(), "variable", x.to_string()))?;
                Term::Var(x, ty)
            }
            "ax" => {
                let a = args(e, 2)?;
                let name = sym(&a[0])?;
                if self.sig.axiom(&name).is_none() {
                    return Err(SurfaceError::Unknown(a[0].pos(), "axiom", name.to_string()));
                }
                Term::ax(&name, self.term(&a[1], scope)?)
            }
            "pair" | "apl" => {
                let a = args(e, 2)?;
                let (s, t) = (self.term(&a[0], scope)?, self.term(&a[1], scope)?);
                if head == "pair" {
                    Term::pair(s, t)
                } else {
                    Term::app(s, t)
                }
            }
            "fst" => Term::fst(self.term(&args(e, 1)?[0], scope)?),
            "snd" => Term::snd(self.term(&args(e, 1)?[0], scope)?),
            "inl" | "inr" => {
                let a = args(e, 2)?;
                let (b, t) = (self.formula(&a[0])?, self.term(&a[1], scope)?);
                if head == "inl" {
                    Term::inl(b, t)
                } else {
                    Term::inr(b, t)
                }
            }
            "when" => {
                let a = args(e, 3)?;
                Term::when(self.term(&a[0], scope)?, self.term(&a[1], scope)?, self.term(&a[2], scope)?)
            }
            "lam" => {
                let a = args(e, 3)?;
                let (x, ty) = (sym(&a[0])?, self.formula(&a[1])?);
                scope.push((x.clone(), ty.clone()));
                let body = self.term(&a[2], scope);
                scope.pop();
                Term::lam(&x, ty, body?)
            }
            "star" => {
                args(e, 0)?;
                Term::Star
            }
            "absurd" => Term::Absurd(self.formula(&args(e, 1)?[0])?),
            "alli" => {
                let a = args(e, 3)?;
                Term::all_i(&sym(&a[0])?, &self.sort(&a[1])?, self.term(&a[2], scope)?)
            }
            "alle" => {
                let a = args(e, 2)?;
                Term::all_e(self.term(&a[0], scope)?, self.lterm(&a[1])?)
            }
            "exi" => {
                let a = args(e, 5)?;
                let (x, s, r) = (sym(&a[0])?, self.sort(&a[1])?, self.lterm(&a[2])?);
                Term::ex_i(&x, &s, r, self.formula(&a[3])?, self.term(&a[4], scope)?)
            }
            "exe" => {
                let a = args(e, 4)?;
                let t = self.term(&a[0], scope)?;
                Term::ex_e(t, &sym(&a[1])?, &self.sort(&a[2])?, self.term(&a[3], scope)?)
            }
            other => return Err(SurfaceError::Unknown(e.pos(), "term form", other.to_string())),
        })
    }

    /// `(term CTX t [A])`; without the type it is inferred by the caller.
    pub fn term_in_context(&self, e: &Sexp) -> Res<(Context, Term, Option<Formula>)> {
        let rest = tail(e)?;
        if !(2..=3).contains(&rest.len()) {
            return Err(SurfaceError::Arity { pos: e.pos(), head: "term".into(), expected: "2 or 3".into(), found: rest.len() });
        }
        let ctx = self.context(&rest[0])?;
        let mut scope = ctx.entries().to_vec();
        let t = self.term(&rest[1], &mut scope)?;
        let ty = rest.get(2).map(|a| self.formula(a)).transpose()?;
        Ok((ctx, t, ty))
    }

    /// `(equality CTX s t A)`, also used for theory axioms `(eq CTX s t A)`.
    pub fn equality(&self, e: &Sexp) -> Res<EqualityInContext> {
        let a = args(e, 4)?;
        let ctx = self.context(&a[0])?;
        let mut scope = ctx.entries().to_vec();
        let lhs = self.term(&a[1], &mut scope)?;
        let rhs = self.term(&a[2], &mut scope)?;
        Ok(EqualityInContext::new(ctx, lhs, rhs, self.formula(&a[3])?))
    }

    /// A derivation: `(RULE params… CONCLUSION premises…)`.
    pub fn proof(&self, e: &Sexp) -> Res<NdProof> {
        let head = e.head().map_or_else(|| syntax(e, "a derivation"), Ok)?;
        let rest = tail(e)?;
        let (params, n) = match head {
            "assume" => (1, 0),
            "axiom" | "top-i" | "bot-e" => (0, 0),
            "and-el" | "and-er" | "or-il" | "or-ir" => (0, 1),
            "and-i" | "imp-e" => (0, 2),
            "or-e" => (0, 3),
            "imp-i" | "all-e" | "ex-i" => (1, 1),
            "all-i" => (2, 1),
            "ex-e" => (2, 2),
            other => return Err(SurfaceError::Unknown(e.pos(), "rule", other.to_string())),
        };
        if rest.len() != params + 1 + n {
            return Err(SurfaceError::Arity {
                pos: e.pos(),
                head: head.to_string(),
                expected: (params + 1 + n).to_string(),
                found: rest.len(),
            });
        }
        let c = self.formula(&rest[params])?;
        let premises = rest[params + 1..].iter().map(|p| self.proof(p)).collect::<Res<Vec<_>>>()?;
        let rule = match head {
            "assume" => Rule::Assume(sym(&rest[0])?),
            "axiom" => Rule::Axiom,
            "and-i" => Rule::AndI,
            "and-el" => Rule::AndEl,
            "and-er" => Rule::AndEr,
            "or-il" => Rule::OrIl,
            "or-ir" => Rule::OrIr,
            "or-e" => Rule::OrE,
            "imp-i" => Rule::ImpI(sym(&rest[0])?),
            "imp-e" => Rule::ImpE,
            "top-i" => Rule::TopI,
            "bot-e" => Rule::BotE,
            "all-i" => Rule::AllI { var: sym(&rest[0])?, sort: self.sort(&rest[1])? },
            "all-e" => Rule::AllE { witness: self.lterm(&rest[0])? },
            "ex-i" => Rule::ExI { witness: self.lterm(&rest[0])? },
            _ => Rule::ExE { var: sym(&rest[0])?, sort: self.sort(&rest[1])? },
        };
        Ok(NdProof::new(rule, premises, c))
    }
}

pub fn print_formula(f: &Formula) -> Sexp {
    match f {
        Formula::One => Sexp::form("one", vec![]),
        Formula::Zero => Sexp::form("zero", vec![]),
        Formula::Atom(r, ts) => {
            let mut items = vec![at_sym(r)];
            items.extend(ts.iter().map(print_lterm));
            Sexp::form("atom", items)
        }
        Formula::Prod(a, b) => Sexp::form("and", vec![print_formula(a), print_formula(b)]),
        Formula::Sum(a, b) => Sexp::form("or", vec![print_formula(a), print_formula(b)]),
        Formula::Arrow(a, b) => Sexp::form("imp", vec![print_formula(a), print_formula(b)]),
        Formula::Forall(h, s, _) | Formula::Exists(h, s, _) => {
            let x = pick(&h.0, |y| f.mentions(y));
            let body = f.instantiate(&LTerm::Var(x.clone(), s.clone())).expect("quantifier");
            let head = if matches!(f, Formula::Forall(..)) { "all" } else { "ex" };
            Sexp::form(head, vec![at_sym(&x), at_sym(s), print_formula(&body)])
        }
    }
}

pub fn print_lterm(t: &LTerm) -> Sexp {
    match t {
        LTerm::Var(x, s) => Sexp::form("var", vec![at_sym(x), at_sym(s)]),
        LTerm::Bound(i, s) => Sexp::form("bound", vec![at(&i.to_string()), at_sym(s)]),
        LTerm::App(f, args, _) => {
            let mut items = vec![at_sym(f)];
            items.extend(args.iter().map(print_lterm));
            Sexp::form("app", items)
        }
    }
}

pub fn print_context(ctx: &Context) -> Sexp {
    Sexp::list(ctx.entries().iter().map(|(x, a)| Sexp::list(vec![at_sym(x), print_formula(a)])).collect())
}

pub fn print_term(t: &Term) -> Sexp {
    let p = print_term;
    match t {
        Term::Var(x, _) => Sexp::form("lvar", vec![at_sym(x)]),
        Term::Bound(i) => Sexp::form("bound", vec![at(&i.to_string())]),
        Term::Ax(a, u) => Sexp::form("ax", vec![at_sym(a), p(u)]),
        Term::Pair(s, u) => Sexp::form("pair", vec![p(s), p(u)]),
        Term::Fst(u) => Sexp::form("fst", vec![p(u)]),
        Term::Snd(u) => Sexp::form("snd", vec![p(u)]),
        Term::Inl(b, u) => Sexp::form("inl", vec![print_formula(b), p(u)]),
        Term::Inr(b, u) => Sexp::form("inr", vec![print_formula(b), p(u)]),
        Term::When(s, l, r) => Sexp::form("when", vec![p(s), p(l), p(r)]),
        Term::Lam(h, ty, _) => {
            let x = pick(&h.0, |y| t.mentions_var(y));
            let body = t.lam_body_at(&Term::Var(x.clone(), ty.clone())).expect("lambda");
            Sexp::form("lam", vec![at_sym(&x), print_formula(ty), p(&body)])
        }
        Term::App(s, u) => Sexp::form("apl", vec![p(s), p(u)]),
        Term::Star => Sexp::form("star", vec![]),
        Term::Absurd(a) => Sexp::form("absurd", vec![print_formula(a)]),
        Term::AllI(h, s, _) => {
            let x = pick(&h.0, |y| t.mentions_logic(y));
            let body = t.logic_body_at(&LTerm::Var(x.clone(), s.clone())).expect("binder");
            Sexp::form("alli", vec![at_sym(&x), at_sym(s), p(&body)])
        }
        Term::AllE(u, r) => Sexp::form("alle", vec![p(u), print_lterm(r)]),
        Term::ExI { hint, sort, witness, body, term } => {
            let q = Formula::Exists(hint.clone(), sort.clone(), Box::new(body.clone()));
            let x = pick(&hint.0, |y| q.mentions(y));
            let open = q.instantiate(&LTerm::Var(x.clone(), sort.clone())).expect("quantifier");
            Sexp::form("exi", vec![at_sym(&x), at_sym(sort), print_lterm(witness), print_formula(&open), p(term)])
        }
        Term::ExE(u, h, s, _) => {
            let x = pick(&h.0, |y| t.mentions_logic(y));
            let body = t.logic_body_at(&LTerm::Var(x.clone(), s.clone())).expect("binder");
            Sexp::form("exe", vec![p(u), at_sym(&x), at_sym(s), p(&body)])
        }
    }
}

pub fn print_proof(p: &NdProof) -> Sexp {
    let mut items = match &p.rule {
        Rule::Assume(l) | Rule::ImpI(l) => vec![at_sym(l)],
        Rule::AllI { var, sort } | Rule::ExE { var, sort } => vec![at_sym(var), at_sym(sort)],
        Rule::AllE { witness } | Rule::ExI { witness } => vec![print_lterm(witness)],
        _ => vec![],
    };
    items.push(print_formula(&p.conclusion));
    items.extend(p.premises.iter().map(print_proof));
    Sexp::form(p.rule.name(), items)
}

pub fn print_signature(sig: &LambdaSignature) -> Sexp {
    let mut items: Vec<Sexp> = sig.base.sorts.iter().map(|s| Sexp::form("sort", vec![at_sym(s)])).collect();
    for f in &sig.base.funs {
        let args = Sexp::list(f.args.iter().map(at_sym).collect());
        items.push(Sexp::form("fun", vec![at_sym(&f.name), args, at_sym(&f.result)]));
    }
    for r in &sig.base.rels {
        items.push(Sexp::form("rel", vec![at_sym(&r.name), Sexp::list(r.args.iter().map(at_sym).collect())]));
    }
    for a in &sig.axioms {
        items.push(Sexp::form("axiom", vec![at_sym(&a.name), print_formula(&a.dom), print_formula(&a.cod)]));
    }
    Sexp::form("signature", items)
}

fn print_equality(head: &str, eq: &EqualityInContext) -> Sexp {
    Sexp::form(
        head,
        vec![print_context(&eq.ctx), print_term(&eq.lhs), print_term(&eq.rhs), print_formula(&eq.ty)],
    )
}

pub fn print_universe(u: &TermUniverse) -> Sexp {
    let items = u
        .listed()
        .iter()
        .map(|(s, ts)| {
            let mut row = vec![at_sym(s)];
            if let Some(g) = u.generic(s) {
                row.push(Sexp::form("generic", vec![at_sym(g)]));
            }
            row.extend(ts.iter().map(print_lterm));
            Sexp::list(row)
        })
        .collect();
    Sexp::form("universe", items)
}

pub fn print_kripke(k: &FinKripkeModel) -> Sexp {
    let w = |p: usize| at(&k.poset.names[p]);
    let n = |x: usize| at(&x.to_string());
    let mut items = vec![
        Sexp::form("stability", vec![at(if k.stability == Stability::StrictIff { "strict-iff" } else { "forward-only" })]),
        Sexp::form("worlds", (0..k.poset.len()).map(w).collect()),
    ];
    let mut order = Vec::new();
    for p in 0..k.poset.len() {
        for q in k.poset.above(p).filter(|&q| q != p) {
            order.push(Sexp::list(vec![w(p), w(q)]));
        }
    }
    items.push(Sexp::form("order", order));
    for (p, carriers) in k.carriers.iter().enumerate() {
        for (s, size) in carriers {
            items.push(Sexp::form("carrier", vec![w(p), at_sym(s), n(*size)]));
        }
    }
    for ((p, q), maps) in &k.transitions {
        if p == q && maps.values().all(|m| m.iter().enumerate().all(|(i, &e)| i == e)) {
            continue;
        }
        for (s, map) in maps {
            items.push(Sexp::form("transition", vec![w(*p), w(*q), at_sym(s), Sexp::list(map.iter().map(|&e| n(e)).collect())]));
        }
    }
    for (p, funs) in k.funs.iter().enumerate() {
        for (f, table) in funs {
            for (args, v) in table {
                items.push(Sexp::form("fun", vec![w(p), at_sym(f), Sexp::list(args.iter().map(|&e| n(e)).collect()), n(*v)]));
            }
        }
    }
    for (p, rels) in k.rels.iter().enumerate() {
        for (r, set) in rels {
            let mut row = vec![w(p), at_sym(r)];
            row.extend(set.iter().map(|t| Sexp::list(t.iter().map(|&e| n(e)).collect())));
            items.push(Sexp::form("rel", row));
        }
    }
    Sexp::form("kripke", items)
}

/// How a workspace names a structure.
#[derive(Clone, Debug)]
pub enum ModelSpec {
    /// `trivial`, `diamond` or `m3`, built on demand over the needed fragment.
    Fixture(String),
    /// The thin structure of the workspace's Kripke model.
    Kripke,
    Explicit(Box<LdStructure>),
}

pub fn print_model(m: &ModelSpec) -> Sexp {
    let s = match m {
        ModelSpec::Fixture(name) => return Sexp::form("model", vec![Sexp::form("fixture", vec![at(name)])]),
        ModelSpec::Kripke => return Sexp::form("model", vec![Sexp::form("kripke", vec![])]),
        ModelSpec::Explicit(s) => s,
    };
    let c = &s.cat;
    let o = |x: ObjId| at(&c.objects()[x]);
    let a = |f: usize| at(c.name(f));
    let mut items = vec![Sexp::form("objects", c.objects().iter().map(|x| at(x)).collect())];
    items.push(Sexp::form("arrows", c.arrows().iter().map(|d| Sexp::list(vec![at(&d.name), o(d.dom), o(d.cod)])).collect()));
    items.push(Sexp::form("identities", (0..c.object_count()).map(|x| a(c.identity(x))).collect()));
    let mut triples = c.triples();
    triples.sort();
    items.push(Sexp::form("compose", triples.into_iter().map(|(g, f, h)| Sexp::list(vec![a(g), a(f), a(h)])).collect()));
    items.push(Sexp::form("terminal", vec![o(s.terminal)]));
    if let Some(i) = s.initial {
        items.push(Sexp::form("initial", vec![o(i)]));
    }
    let mut products: Vec<_> = s.products.iter().collect();
    products.sort_by_key(|(k, _)| **k);
    for ((x, y), w) in products {
        items.push(Sexp::form("product", vec![o(*x), o(*y), o(w.obj), a(w.p1), a(w.p2)]));
    }
    let mut coproducts: Vec<_> = s.coproducts.iter().collect();
    coproducts.sort_by_key(|(k, _)| **k);
    for ((x, y), w) in coproducts {
        items.push(Sexp::form("coproduct", vec![o(*x), o(*y), o(w.obj), a(w.i1), a(w.i2)]));
    }
    let mut exps: Vec<_> = s.exponentials.iter().collect();
    exps.sort_by_key(|(k, _)| **k);
    for ((x, y), w) in exps {
        items.push(Sexp::form("exponential", vec![o(*x), o(*y), o(w.obj), a(w.ev)]));
    }
    let mut ms: Vec<_> = s.m.iter().collect();
    ms.sort();
    for (f, x) in ms {
        items.push(Sexp::form("m", vec![print_formula(f), o(*x)]));
    }
    for (head, table) in [("cone", &s.cones), ("cocone", &s.cocones)] {
        let mut rows: Vec<_> = table.iter().collect();
        rows.sort_by(|p, q| p.0.cmp(q.0));
        for (f, legs) in rows {
            let mut row = vec![print_formula(f)];
            row.extend(legs.iter().map(|(t, l)| Sexp::list(vec![print_lterm(t), a(*l)])));
            items.push(Sexp::form(head, row));
        }
    }
    let mut axs: Vec<_> = s.axioms.iter().collect();
    axs.sort();
    for (name, f) in axs {
        items.push(Sexp::form("m-ax", vec![at_sym(name), a(*f)]));
    }
    Sexp::form("model", items)
}

/// Defaults for the bounded procedures; a `(config …)` form overrides them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub depth: usize,
    pub search_depth: usize,
    pub budget: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { depth: 6, search_depth: 8, budget: 10_000 }
    }
}

/// One top-level form of a workspace file.
#[derive(Clone, Debug)]
pub enum Item {
    Signature(LambdaSignature),
    Theory(Vec<EqualityInContext>),
    Formula(Formula),
    Term(Context, Term, Option<Formula>),
    Equality(EqualityInContext),
    Proof(Assumptions, Formula, NdProof),
    Model(ModelSpec),
    Kripke(FinKripkeModel),
    Universe(TermUniverse),
    Fragment(Vec<Formula>),
    Hom(Formula, Formula),
    Consequence(Formula, Vec<Formula>),
    Force(String, Formula, Vec<(Sym, Sym, usize)>),
    Config(Settings),
}

pub fn print_item(item: &Item) -> Sexp {
    match item {
        Item::Signature(sig) => print_signature(sig),
        Item::Theory(axs) => Sexp::form("theory", axs.iter().map(|e| print_equality("eq", e)).collect()),
        Item::Formula(f) => Sexp::form("formula", vec![print_formula(f)]),
        Item::Term(ctx, t, ty) => {
            let mut items = vec![print_context(ctx), print_term(t)];
            items.extend(ty.iter().map(print_formula));
            Sexp::form("term", items)
        }
        Item::Equality(eq) => print_equality("equality", eq),
        Item::Proof(gamma, goal, p) => {
            let g = Sexp::list(gamma.iter().map(|(l, f)| Sexp::list(vec![at_sym(l), print_formula(f)])).collect());
            Sexp::form("proof", vec![g, print_formula(goal), print_proof(p)])
        }
        Item::Model(m) => print_model(m),
        Item::Kripke(k) => print_kripke(k),
        Item::Universe(u) => print_universe(u),
        Item::Fragment(fs) => Sexp::form("fragment", fs.iter().map(print_formula).collect()),
        Item::Hom(a, b) => Sexp::form("hom", vec![print_formula(a), print_formula(b)]),
        Item::Consequence(a, bs) => {
            Sexp::form("consequence", vec![print_formula(a), Sexp::list(bs.iter().map(print_formula).collect())])
        }
        Item::Force(w, f, env) => {
            let env = env.iter().map(|(x, s, e)| Sexp::list(vec![at_sym(x), at_sym(s), at(&e.to_string())])).collect();
            Sexp::form("force", vec![at(w), print_formula(f), Sexp::list(env)])
        }
        Item::Config(c) => Sexp::form(
            "config",
            vec![
                Sexp::form("depth", vec![at(&c.depth.to_string())]),
                Sexp::form("search-depth", vec![at(&c.search_depth.to_string())]),
                Sexp::form("budget", vec![at(&c.budget.to_string())]),
            ],
        ),
    }
}

/// A parsed file: its forms in order, read against the signature declared
/// before them.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub items: Vec<Item>,
}

impl Workspace {
    pub fn parse(text: &str) -> Res<Self> {
        let mut reader = Reader::default();
        let mut universe: Option<TermUniverse> = None;
        let mut items = Vec::new();
        for e in read_all(text)? {
            let item = read_item(&reader, universe.as_ref(), &e)?;
            match &item {
                Item::Signature(sig) => reader = Reader::new(sig.clone()),
                Item::Universe(u) => universe = Some(u.clone()),
                _ => {}
            }
            items.push(item);
        }
        Ok(Workspace { items })
    }

    /// Canonical text: one pretty-printed form per item.
    pub fn print(&self) -> String {
        self.items.iter().map(|i| print_item(i).pretty() + "\n").collect()
    }

    pub fn signature(&self) -> LambdaSignature {
        self.items
            .iter()
            .rev()
            .find_map(|i| match i {
                Item::Signature(s) => Some(s.clone()),
                _ => None,
            })
            .unwrap_or_default()
    }

    pub fn theory(&self) -> Theory {
        let axioms = self
            .items
            .iter()
            .flat_map(|i| match i {
                Item::Theory(axs) => axs.clone(),
                _ => Vec::new(),
            })
            .collect();
        Theory { sig: self.signature(), axioms }
    }

    pub fn settings(&self) -> Settings {
        self.items
            .iter()
            .rev()
            .find_map(|i| match i {
                Item::Config(c) => Some(*c),
                _ => None,
            })
            .unwrap_or_default()
    }

    pub fn universe(&self) -> Option<&TermUniverse> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Universe(u) => Some(u),
            _ => None,
        })
    }

    pub fn model(&self) -> Option<&ModelSpec> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Model(m) => Some(m),
            _ => None,
        })
    }

    pub fn kripke(&self) -> Option<&FinKripkeModel> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Kripke(k) => Some(k),
            _ => None,
        })
    }
}

/// Parse a single form against a signature.
pub fn parse_item(sig: &LambdaSignature, text: &str) -> Res<Item> {
    let mut es = read_all(text)?;
    if es.len() != 1 {
        return Err(SurfaceError::Syntax(Pos { line: 1, col: 1 }, format!("expected one form, found {}", es.len())));
    }
    read_item(&Reader::new(sig.clone()), None, &es.remove(0))
}

fn read_item(r: &Reader, universe: Option<&TermUniverse>, e: &Sexp) -> Res<Item> {
    let head = e.head().map_or_else(|| syntax(e, "a top-level form"), Ok)?;
    Ok(match head {
        "signature" => Item::Signature(read_signature(e)?),
        "theory" => Item::Theory(tail(e)?.iter().map(|x| r.equality(x)).collect::<Res<_>>()?),
        "formula" | "type" => Item::Formula(r.formula(&args(e, 1)?[0])?),
        "term" => {
            let (ctx, t, ty) = r.term_in_context(e)?;
            Item::Term(ctx, t, ty)
        }
        "equality" | "eq" => Item::Equality(r.equality(e)?),
        "proof" => {
            let a = args(e, 3)?;
            let mut gamma = Vec::new();
            for entry in list(&a[0])? {
                let [l, f] = list(entry)? else { return syntax(entry, "(label A)") };
                gamma.push((sym(l)?, r.formula(f)?));
            }
            Item::Proof(gamma, r.formula(&a[1])?, r.proof(&a[2])?)
        }
        "model" => Item::Model(read_model(r, universe, e)?),
        "kripke" => Item::Kripke(read_kripke(r, e)?),
        "universe" => Item::Universe(read_universe(r, e)?),
        "fragment" => Item::Fragment(tail(e)?.iter().map(|f| r.formula(f)).collect::<Res<_>>()?),
        "hom" => {
            let a = args(e, 2)?;
            Item::Hom(r.formula(&a[0])?, r.formula(&a[1])?)
        }
        "consequence" => {
            let a = args(e, 2)?;
            Item::Consequence(r.formula(&a[0])?, list(&a[1])?.iter().map(|f| r.formula(f)).collect::<Res<_>>()?)
        }
        "force" => {
            let a = args(e, 3)?;
            let mut env = Vec::new();
            for entry in list(&a[2])? {
                let [x, s, v] = list(entry)? else { return syntax(entry, "(x s element)") };
                env.push((sym(x)?, sym(s)?, num(v)?));
            }
            Item::Force(sym(&a[0])?.to_string(), r.formula(&a[1])?, env)
        }
        "config" => {
            let mut c = Settings::default();
            for entry in tail(e)? {
                let v = num(&args(entry, 1)?[0])?;
                match entry.head() {
                    Some("depth") => c.depth = v,
                    Some("search-depth") => c.search_depth = v,
                    Some("budget") => c.budget = v,
                    _ => return Err(SurfaceError::Unknown(entry.pos(), "setting", entry.to_flat())),
                }
            }
            Item::Config(c)
        }
        other => return Err(SurfaceError::Unknown(e.pos(), "form", other.to_string())),
    })
}

fn read_signature(e: &Sexp) -> Res<LambdaSignature> {
    let mut base = LogicalSignature::default();
    let decls = tail(e)?;
    for d in decls {
        match d.head() {
            Some("sort") => base.sorts.push(sym(&args(d, 1)?[0])?),
            Some("fun") => {
                let a = args(d, 3)?;
                base.funs.push(FunDecl { name: sym(&a[0])?, args: list(&a[1])?.iter().map(sym).collect::<Res<_>>()?, result: sym(&a[2])? });
            }
            Some("rel") => {
                let a = args(d, 2)?;
                base.rels.push(RelDecl { name: sym(&a[0])?, args: list(&a[1])?.iter().map(sym).collect::<Res<_>>()? });
            }
            Some("axiom") => {}
            _ => return Err(SurfaceError::Unknown(d.pos(), "declaration", d.to_flat())),
        }
    }
    base.validate().map_err(|err| SurfaceError::Invalid(e.pos(), err.to_string()))?;
    let r = Reader::new(LambdaSignature::new(base.clone()));
    let mut sig = LambdaSignature::new(base);
    for d in decls.iter().filter(|d| d.head() == Some("axiom")) {
        let a = args(d, 3)?;
        sig.axioms.push(AxiomDecl { name: sym(&a[0])?, dom: r.formula(&a[1])?, cod: r.formula(&a[2])? });
    }
    sig.validate().map_err(|err| SurfaceError::Invalid(e.pos(), err.to_string()))?;
    Ok(sig)
}

fn read_universe(r: &Reader, e: &Sexp) -> Res<TermUniverse> {
    let mut terms = BTreeMap::new();
    let mut generic = BTreeMap::new();
    for row in tail(e)? {
        let items = list(row)?;
        let (s, rest) = items.split_first().map_or_else(|| syntax(row, "(sort terms…)"), Ok)?;
        let s = r.sort(s)?;
        let mut ts = Vec::new();
        for t in rest {
            if t.head() == Some("generic") {
                generic.insert(s.clone(), sym(&args(t, 1)?[0])?);
            } else {
                ts.push(r.lterm(t)?);
            }
        }
        terms.insert(s, ts);
    }
    let invalid = |err: crate::semantics::SemanticsError| SurfaceError::Invalid(e.pos(), err.to_string());
    if generic.len() == r.sig.base.sorts.len() {
        TermUniverse::with_generic(&r.sig.base, terms, generic).map_err(invalid)
    } else {
        TermUniverse::new(&r.sig.base, terms).map_err(invalid)
    }
}

fn read_kripke(r: &Reader, e: &Sexp) -> Res<FinKripkeModel> {
    let forms = tail(e)?;
    let find = |h: &str| forms.iter().find(|f| f.head() == Some(h));
    let worlds_form = find("worlds").ok_or_else(|| SurfaceError::Syntax(e.pos(), "missing (worlds …)".into()))?;
    let names: Vec<String> = tail(worlds_form)?.iter().map(|w| sym(w).map(|s| s.to_string())).collect::<Res<_>>()?;
    let world = |x: &Sexp| -> Res<usize> {
        let n = sym(x)?;
        names.iter().position(|w| w == n.as_str()).ok_or_else(|| SurfaceError::Unknown(x.pos(), "world", n.to_string()))
    };
    let mut pairs: Vec<(usize, usize)> = (0..names.len()).map(|i| (i, i)).collect();
    if let Some(order) = find("order") {
        for p in tail(order)? {
            let [a, b] = list(p)? else { return syntax(p, "(w v)") };
            pairs.push((world(a)?, world(b)?));
        }
    }
    let poset = FinPoset::from_pairs(names.clone(), &pairs);
    let stability = match find("stability").map(|f| args(f, 1).and_then(|a| sym(&a[0]))).transpose()? {
        None => Stability::StrictIff,
        Some(s) if s.as_str() == "strict-iff" => Stability::StrictIff,
        Some(s) if s.as_str() == "forward-only" => Stability::ForwardOnly,
        Some(s) => return Err(SurfaceError::Unknown(e.pos(), "stability mode", s.to_string())),
    };
    let n = names.len();
    let mut carriers = vec![BTreeMap::new(); n];
    let mut transitions: BTreeMap<(usize, usize), BTreeMap<Sym, Vec<usize>>> = BTreeMap::new();
    let mut funs = vec![BTreeMap::new(); n];
    let mut rels: Vec<BTreeMap<Sym, BTreeSet<Vec<usize>>>> =
        vec![r.sig.base.rels.iter().map(|d| (d.name.clone(), BTreeSet::new())).collect(); n];
    let tuple = |x: &Sexp| -> Res<Vec<usize>> { list(x)?.iter().map(num).collect() };
    for f in forms {
        match f.head() {
            Some("worlds") | Some("order") | Some("stability") => {}
            Some("carrier") => {
                let a = args(f, 3)?;
                carriers[world(&a[0])?].insert(r.sort(&a[1])?, num(&a[2])?);
            }
            Some("transition") => {
                let a = args(f, 4)?;
                transitions.entry((world(&a[0])?, world(&a[1])?)).or_default().insert(r.sort(&a[2])?, tuple(&a[3])?);
            }
            Some("fun") => {
                let a = args(f, 4)?;
                let name = sym(&a[1])?;
                if r.sig.base.fun(&name).is_none() {
                    return Err(SurfaceError::Unknown(a[1].pos(), "function", name.to_string()));
                }
                funs[world(&a[0])?].entry(name).or_insert_with(BTreeMap::new).insert(tuple(&a[2])?, num(&a[3])?);
            }
            Some("rel") => {
                let rest = tail(f)?;
                let [w, name, ts @ ..] = rest else { return syntax(f, "(rel w R tuples…)") };
                let name = sym(name)?;
                if r.sig.base.rel(&name).is_none() {
                    return Err(SurfaceError::Unknown(f.pos(), "relation", name.to_string()));
                }
                let set = rels[world(w)?].entry(name).or_default();
                for t in ts {
                    set.insert(tuple(t)?);
                }
            }
            _ => return Err(SurfaceError::Unknown(f.pos(), "Kripke form", f.to_flat())),
        }
    }
    for p in 0..n {
        for q in poset.above(p) {
            let entry = transitions.entry((p, q)).or_default();
            for s in &r.sig.base.sorts {
                if p == q || carriers[p].get(s).copied().unwrap_or(0) == 0 {
                    let size = carriers[p].get(s).copied().unwrap_or(0);
                    entry.entry(s.clone()).or_insert_with(|| (0..size).collect());
                }
            }
        }
    }
    Ok(FinKripkeModel { sig: r.sig.base.clone(), poset, carriers, transitions, funs, rels, stability })
}

fn read_model(r: &Reader, universe: Option<&TermUniverse>, e: &Sexp) -> Res<ModelSpec> {
    let forms = tail(e)?;
    if let [f] = forms {
        match f.head() {
            Some("fixture") => return Ok(ModelSpec::Fixture(sym(&args(f, 1)?[0])?.to_string())),
            Some("kripke") => {
                args(f, 0)?;
                return Ok(ModelSpec::Kripke);
            }
            _ => {}
        }
    }
    let find = |h: &str| forms.iter().find(|f| f.head() == Some(h));
    let missing = |h: &str| SurfaceError::Syntax(e.pos(), format!("missing ({h} …)"));
    let objects: Vec<String> =
        tail(find("objects").ok_or_else(|| missing("objects"))?)?.iter().map(|o| sym(o).map(|s| s.to_string())).collect::<Res<_>>()?;
    let obj = |x: &Sexp| -> Res<ObjId> {
        let n = sym(x)?;
        objects.iter().position(|o| o == n.as_str()).ok_or_else(|| SurfaceError::Unknown(x.pos(), "object", n.to_string()))
    };
    let mut arrows = Vec::new();
    for a in tail(find("arrows").ok_or_else(|| missing("arrows"))?)? {
        let [name, d, c] = list(a)? else { return syntax(a, "(name dom cod)") };
        arrows.push(ArrowDecl { name: sym(name)?.to_string(), dom: obj(d)?, cod: obj(c)? });
    }
    let names: HashMap<String, usize> = arrows.iter().enumerate().map(|(i, d)| (d.name.clone(), i)).collect();
    let arrow = |x: &Sexp| -> Res<usize> {
        let n = sym(x)?;
        names.get(n.as_str()).copied().ok_or_else(|| SurfaceError::Unknown(x.pos(), "arrow", n.to_string()))
    };
    let identity = tail(find("identities").ok_or_else(|| missing("identities"))?)?.iter().map(arrow).collect::<Res<Vec<_>>>()?;
    let mut triples = Vec::new();
    if let Some(c) = find("compose") {
        for t in tail(c)? {
            let [g, f, h] = list(t)? else { return syntax(t, "(g f g∘f)") };
            triples.push((arrow(g)?, arrow(f)?, arrow(h)?));
        }
    }
    let cat = FinCategory::new(objects.clone(), arrows.clone(), identity, triples)
        .map_err(|err| SurfaceError::Invalid(e.pos(), err.to_string()))?;
    let terminal = obj(&args(find("terminal").ok_or_else(|| missing("terminal"))?, 1)?[0])?;
    let initial = find("initial").map(|f| args(f, 1).and_then(|a| obj(&a[0]))).transpose()?;
    let universe = match universe {
        Some(u) => u.clone(),
        None => TermUniverse::closed(&r.sig.base, 1).map_err(|err| SurfaceError::Invalid(e.pos(), err.to_string()))?,
    };
    let mut s = LdStructure {
        sig: r.sig.clone(),
        cat,
        universe,
        m: HashMap::new(),
        uniform: None,
        terminal,
        initial,
        products: HashMap::new(),
        coproducts: HashMap::new(),
        exponentials: HashMap::new(),
        cones: HashMap::new(),
        cocones: HashMap::new(),
        axioms: HashMap::new(),
    };
    for f in forms {
        match f.head() {
            Some("product") => {
                let a = args(f, 5)?;
                s.products.insert((obj(&a[0])?, obj(&a[1])?), ProductW { obj: obj(&a[2])?, p1: arrow(&a[3])?, p2: arrow(&a[4])? });
            }
            Some("coproduct") => {
                let a = args(f, 5)?;
                s.coproducts.insert((obj(&a[0])?, obj(&a[1])?), CoproductW { obj: obj(&a[2])?, i1: arrow(&a[3])?, i2: arrow(&a[4])? });
            }
            Some("exponential") => {
                let a = args(f, 4)?;
                s.exponentials.insert((obj(&a[0])?, obj(&a[1])?), ExponentialW { obj: obj(&a[2])?, ev: arrow(&a[3])? });
            }
            Some("m") => {
                let a = args(f, 2)?;
                s.m.insert(r.formula(&a[0])?, obj(&a[1])?);
            }
            Some(h @ ("cone" | "cocone")) => {
                let rest = tail(f)?;
                let (q, legs) = rest.split_first().map_or_else(|| syntax(f, "(cone A (t arrow)…)"), Ok)?;
                let mut table = BTreeMap::new();
                for leg in legs {
                    let [t, l] = list(leg)? else { return syntax(leg, "(t arrow)") };
                    table.insert(r.lterm(t)?, arrow(l)?);
                }
                let target = if h == "cone" { &mut s.cones } else { &mut s.cocones };
                target.insert(r.formula(q)?, table);
            }
            Some("m-ax") => {
                let a = args(f, 2)?;
                s.axioms.insert(sym(&a[0])?, arrow(&a[1])?);
            }
            Some("objects" | "arrows" | "identities" | "compose" | "terminal" | "initial") => {}
            _ => return Err(SurfaceError::Unknown(f.pos(), "model form", f.to_flat())),
        }
    }
    Ok(ModelSpec::Explicit(Box::new(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::standard_signature;

    fn read_formula(text: &str) -> Res<Formula> {
        Reader::new(standard_signature()).formula(&read_all(text)?[0])
    }

    #[test]
    fn reads_the_grammar_examples() {
        assert_eq!(read_formula("(type (arrow (one) (one)))"), Ok(Formula::arrow(Formula::One, Formula::One)));
        let e = &read_all("(lam x (one) (lvar x))").unwrap()[0];
        let t = Reader::default().term(e, &mut Vec::new()).unwrap();
        assert_eq!(t, Term::lam(&Sym::new("x"), Formula::One, Term::var("x", Formula::One)));
        match read_formula("(and (one))") {
            Err(SurfaceError::Arity { pos, found: 1, .. }) => assert_eq!(pos, Pos { line: 1, col: 1 }),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn printing_avoids_capture() {
        let sig = standard_signature();
        let ctx = Context::from_entries(vec![(Sym::new("x"), Formula::prop("a"))]).unwrap();
        let body = Box::new(Term::var("x", Formula::prop("a")));
        let inner = Term::Lam(crate::syntax::Hint::new("x"), Formula::prop("b"), body);
        let printed = print_term(&inner).to_flat();
        assert_eq!(printed, "(lam x1 (atom b) (lvar x))");
        let mut scope = ctx.entries().to_vec();
        let back = Reader::new(sig).term(&read_all(&printed).unwrap()[0], &mut scope).unwrap();
        assert_eq!(back, inner);
    }
}
