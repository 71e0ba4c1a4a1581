//! Natural-deduction derivations and their translation to and from proof terms.
//!
//! `∨E` and `⊥E` are the non-discharging variants: `∨E` takes `B ∨ C`, `B ⊃ A`
//! and `C ⊃ A`; `⊥E` is a leaf concluding `⊥ ⊃ B`. Only `⊃I` discharges.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{
    fresh, infer_type, Context, Formula, LTerm, LambdaSignature, LogicalSignature, SignatureError, Sym, Term,
    TypeError,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Assume(Sym),
    Axiom,
    AndI,
    AndEl,
    AndEr,
    OrIl,
    OrIr,
    OrE,
    ImpI(Sym),
    ImpE,
    TopI,
    BotE,
    AllI { var: Sym, sort: Sym },
    AllE { witness: LTerm },
    ExI { witness: LTerm },
    ExE { var: Sym, sort: Sym },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Assume(_) => "assume",
            Rule::Axiom => "axiom",
            Rule::AndI => "and-i",
            Rule::AndEl => "and-el",
            Rule::AndEr => "and-er",
            Rule::OrIl => "or-il",
            Rule::OrIr => "or-ir",
            Rule::OrE => "or-e",
            Rule::ImpI(_) => "imp-i",
            Rule::ImpE => "imp-e",
            Rule::TopI => "top-i",
            Rule::BotE => "bot-e",
            Rule::AllI { .. } => "all-i",
            Rule::AllE { .. } => "all-e",
            Rule::ExI { .. } => "ex-i",
            Rule::ExE { .. } => "ex-e",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Rule::Assume(_) | Rule::Axiom | Rule::TopI | Rule::BotE => 0,
            Rule::AndEl | Rule::AndEr | Rule::OrIl | Rule::OrIr | Rule::ImpI(_) => 1,
            Rule::AllI { .. } | Rule::AllE { .. } | Rule::ExI { .. } => 1,
            Rule::AndI | Rule::ImpE | Rule::ExE { .. } => 2,
            Rule::OrE => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdProof {
    pub rule: Rule,
    pub premises: Vec<NdProof>,
    pub conclusion: Formula,
}

impl NdProof {
    pub fn new(rule: Rule, premises: Vec<NdProof>, conclusion: Formula) -> Self {
        NdProof { rule, premises, conclusion }
    }

    pub fn leaf(rule: Rule, conclusion: Formula) -> Self {
        NdProof { rule, premises: Vec::new(), conclusion }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(NdProof::size).sum::<usize>()
    }

    /// Rename discharged labels and eigenvariables to `h0, h1, …` and
    /// `e0, e1, …` in pre-order; open labels are kept.
    pub fn canonical(&self) -> NdProof {
        let mut n = (0, 0);
        self.canon(&mut n, &BTreeMap::new())
    }

    fn canon(&self, n: &mut (usize, usize), labels: &BTreeMap<Sym, Sym>) -> NdProof {
        match &self.rule {
            Rule::Assume(l) => NdProof::leaf(Rule::Assume(labels.get(l).unwrap_or(l).clone()), self.conclusion.clone()),
            Rule::ImpI(l) => {
                let new = Sym::from(format!("h{}", n.0));
                n.0 += 1;
                let mut inner = labels.clone();
                inner.insert(l.clone(), new.clone());
                let p = self.premises[0].canon(n, &inner);
                NdProof::new(Rule::ImpI(new), vec![p], self.conclusion.clone())
            }
            Rule::AllI { var, sort } | Rule::ExE { var, sort } => {
                let new = Sym::from(format!("e{}", n.1));
                n.1 += 1;
                let r = LTerm::Var(new.clone(), sort.clone());
                let renamed = |p: &NdProof| p.rename_logic(var, &r);
                let (rule, premises) = match &self.rule {
                    Rule::AllI { .. } => (
                        Rule::AllI { var: new.clone(), sort: sort.clone() },
                        vec![renamed(&self.premises[0]).canon(n, labels)],
                    ),
                    _ => (
                        Rule::ExE { var: new.clone(), sort: sort.clone() },
                        vec![self.premises[0].canon(n, labels), renamed(&self.premises[1]).canon(n, labels)],
                    ),
                };
                NdProof::new(rule, premises, self.conclusion.clone())
            }
            _ => NdProof::new(
                self.rule.clone(),
                self.premises.iter().map(|p| p.canon(n, labels)).collect(),
                self.conclusion.clone(),
            ),
        }
    }

    /// Substitute a logical variable throughout the derivation.
    pub fn rename_logic(&self, x: &Sym, r: &LTerm) -> NdProof {
        let rule = match &self.rule {
            Rule::AllE { witness } => Rule::AllE { witness: witness.subst1(x, r) },
            Rule::ExI { witness } => Rule::ExI { witness: witness.subst1(x, r) },
            other => other.clone(),
        };
        NdProof::new(
            rule,
            self.premises.iter().map(|p| p.rename_logic(x, r)).collect(),
            self.conclusion.subst1(x, r),
        )
    }
}

/// Labelled assumptions; the same formula may occur under several labels.
pub type Assumptions = Vec<(Sym, Formula)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("{rule}: {reason}")]
    Rule { rule: &'static str, reason: String },
    #[error("assumption `{label}` : {formula} is neither discharged nor in the assumption list")]
    Undischarged { label: Sym, formula: Formula },
    #[error("assumption label `{0}` is used with two different formulas")]
    LabelClash(Sym),
    #[error("axiom leaf {0} is not an axiom of the theory")]
    NotAnAxiom(Formula),
    #[error("eigenvariable `{var}` of {rule} occurs free in {place}")]
    Eigenvariable { rule: &'static str, var: Sym, place: String },
    #[error("conclusion {found} is not the goal {goal}")]
    Goal { goal: Formula, found: Formula },
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

fn bad(rule: &Rule, reason: impl Into<String>) -> ProofError {
    ProofError::Rule { rule: rule.name(), reason: reason.into() }
}

/// Propositions as types: the two grammars are literally shared, so both
/// directions are the identity.
pub fn type_of_formula(phi: &Formula) -> Formula {
    phi.clone()
}

pub fn formula_of_type(a: &Formula) -> Formula {
    a.clone()
}

/// The formulas that axiom symbols `a : A → B` license as `(Ax)` leaves: `A ⊃ B`,
/// and `B` itself when `A` is `⊤`.
pub fn axiom_formulas(sig: &LambdaSignature) -> Vec<Formula> {
    let mut out = Vec::new();
    for a in &sig.axioms {
        out.push(Formula::arrow(a.dom.clone(), a.cod.clone()));
        if a.dom == Formula::One {
            out.push(a.cod.clone());
        }
    }
    out
}

/// Check `p` as a derivation of `goal` from `gamma` and the axioms.
pub fn check_proof(
    sig: &LogicalSignature,
    gamma: &Assumptions,
    p: &NdProof,
    goal: &Formula,
    axioms: &[Formula],
) -> Result<(), ProofError> {
    let open = open_assumptions(sig, p, axioms)?;
    for (label, formula) in open {
        if !gamma.iter().any(|(l, f)| l == &label && f == &formula) {
            return Err(ProofError::Undischarged { label, formula });
        }
    }
    if &p.conclusion != goal {
        return Err(ProofError::Goal { goal: goal.clone(), found: p.conclusion.clone() });
    }
    Ok(())
}

/// Check every inference and return the undischarged assumptions by label.
pub fn open_assumptions(
    sig: &LogicalSignature,
    p: &NdProof,
    axioms: &[Formula],
) -> Result<BTreeMap<Sym, Formula>, ProofError> {
    let rule = &p.rule;
    if p.premises.len() != rule.arity() {
        return Err(bad(rule, format!("expects {} premises, got {}", rule.arity(), p.premises.len())));
    }
    p.conclusion.check(sig)?;
    if !p.conclusion.is_locally_closed() {
        return Err(SignatureError::LooseBound.into());
    }
    let mut open = BTreeMap::new();
    for q in &p.premises {
        for (l, f) in open_assumptions(sig, q, axioms)? {
            if let Some(g) = open.insert(l.clone(), f.clone()) {
                if g != f {
                    return Err(ProofError::LabelClash(l));
                }
            }
        }
    }
    let c = &p.conclusion;
    let prem = |i: usize| &p.premises[i].conclusion;
    match rule {
        Rule::Assume(l) => {
            open.insert(l.clone(), c.clone());
        }
        Rule::Axiom => {
            let builtin = *c == Formula::One || matches!(c, Formula::Arrow(a, _) if **a == Formula::Zero);
            if !builtin && !axioms.contains(c) {
                return Err(ProofError::NotAnAxiom(c.clone()));
            }
        }
        Rule::AndI => {
            if *c != Formula::prod(prem(0).clone(), prem(1).clone()) {
                return Err(bad(rule, "conclusion is not the conjunction of the premises"));
            }
        }
        Rule::AndEl => match prem(0) {
            Formula::Prod(a, _) if **a == *c => {}
            _ => return Err(bad(rule, "premise is not a conjunction with this left part")),
        },
        Rule::AndEr => match prem(0) {
            Formula::Prod(_, b) if **b == *c => {}
            _ => return Err(bad(rule, "premise is not a conjunction with this right part")),
        },
        Rule::OrIl => match c {
            Formula::Sum(a, _) if **a == *prem(0) => {}
            _ => return Err(bad(rule, "conclusion is not a disjunction with the premise on the left")),
        },
        Rule::OrIr => match c {
            Formula::Sum(_, b) if **b == *prem(0) => {}
            _ => return Err(bad(rule, "conclusion is not a disjunction with the premise on the right")),
        },
        Rule::OrE => match prem(0) {
            Formula::Sum(b, d)
                if *prem(1) == Formula::arrow((**b).clone(), c.clone())
                    && *prem(2) == Formula::arrow((**d).clone(), c.clone()) => {}
            _ => return Err(bad(rule, "premises are not B ∨ C, B ⊃ A, C ⊃ A")),
        },
        Rule::ImpI(l) => match c {
            Formula::Arrow(a, b) if **b == *prem(0) => {
                if let Some(f) = open.remove(l) {
                    if f != **a {
                        return Err(bad(rule, format!("discharged `{l}` has formula {f}, not {a}")));
                    }
                }
            }
            _ => return Err(bad(rule, "conclusion is not an implication with the premise as consequent")),
        },
        Rule::ImpE => match prem(0) {
            Formula::Arrow(a, b) if **a == *prem(1) && **b == *c => {}
            _ => return Err(bad(rule, "premises are not B ⊃ A and B")),
        },
        Rule::TopI => {
            if *c != Formula::One {
                return Err(bad(rule, "conclusion is not ⊤"));
            }
        }
        Rule::BotE => {
            if !matches!(c, Formula::Arrow(a, _) if **a == Formula::Zero) {
                return Err(bad(rule, "conclusion is not ⊥ ⊃ B"));
            }
        }
        Rule::AllI { var, sort } => {
            if *c != Formula::forall(var, sort, prem(0).clone()) {
                return Err(bad(rule, "conclusion is not the generalisation of the premise"));
            }
            eigen_check(rule, var, &open)?;
        }
        Rule::AllE { witness } => {
            witness.check(sig)?;
            match prem(0) {
                Formula::Forall(_, s, _) if s == witness.sort() => {
                    if prem(0).instantiate(witness).as_ref() != Some(c) {
                        return Err(bad(rule, "conclusion is not the instance at the witness"));
                    }
                }
                _ => return Err(bad(rule, "premise is not a universal of the witness sort")),
            }
        }
        Rule::ExI { witness } => {
            witness.check(sig)?;
            match c {
                Formula::Exists(_, s, _) if s == witness.sort() => {
                    if c.instantiate(witness).as_ref() != Some(prem(0)) {
                        return Err(bad(rule, "premise is not the instance at the witness"));
                    }
                }
                _ => return Err(bad(rule, "conclusion is not an existential of the witness sort")),
            }
        }
        Rule::ExE { var, sort } => {
            match prem(0) {
                Formula::Exists(_, s, _) if s == sort => {
                    let b = prem(0).instantiate(&LTerm::Var(var.clone(), sort.clone())).expect("quantifier");
                    if *prem(1) != Formula::arrow(b, c.clone()) {
                        return Err(bad(rule, "minor premise is not B[x] ⊃ A"));
                    }
                }
                _ => return Err(bad(rule, "major premise is not an existential of this sort")),
            }
            if c.mentions(var) {
                return Err(ProofError::Eigenvariable { rule: rule.name(), var: var.clone(), place: "the conclusion".into() });
            }
            // Only the minor premise's assumptions are live for the eigenvariable.
            let minor = open_assumptions(sig, &p.premises[1], axioms)?;
            eigen_check(rule, var, &minor)?;
            if prem(0).mentions(var) {
                return Err(ProofError::Eigenvariable { rule: rule.name(), var: var.clone(), place: "the major premise".into() });
            }
        }
    }
    Ok(open)
}

fn eigen_check(rule: &Rule, var: &Sym, open: &BTreeMap<Sym, Formula>) -> Result<(), ProofError> {
    for (l, f) in open {
        if f.mentions(var) {
            return Err(ProofError::Eigenvariable {
                rule: rule.name(),
                var: var.clone(),
                place: format!("assumption `{l}`"),
            });
        }
    }
    Ok(())
}

/// Read a checked derivation as a proof term; assumption labels become λ-variables.
pub fn proof_to_term(sig: &LambdaSignature, p: &NdProof) -> Result<Term, ProofError> {
    open_assumptions(&sig.base, p, &axiom_formulas(sig))?;
    compile(sig, p)
}

fn axiom_symbol<'a>(sig: &'a LambdaSignature, f: &Formula) -> Option<&'a crate::syntax::AxiomDecl> {
    sig.axioms.iter().find(|a| Formula::arrow(a.dom.clone(), a.cod.clone()) == *f)
}

fn compile(sig: &LambdaSignature, p: &NdProof) -> Result<Term, ProofError> {
    let c = &p.conclusion;
    let sub = |i: usize| compile(sig, &p.premises[i]);
    Ok(match &p.rule {
        Rule::Assume(l) => Term::Var(l.clone(), c.clone()),
        Rule::Axiom => match c {
            Formula::One => Term::Star,
            Formula::Arrow(a, b) if **a == Formula::Zero => Term::Absurd((**b).clone()),
            _ => {
                if let Some(ax) = axiom_symbol(sig, c) {
                    let x = fresh("x");
                    Term::lam(&x, ax.dom.clone(), Term::ax(&ax.name, Term::Var(x.clone(), ax.dom.clone())))
                } else if let Some(ax) = sig.axioms.iter().find(|a| a.dom == Formula::One && a.cod == *c) {
                    Term::ax(&ax.name, Term::Star)
                } else {
                    return Err(ProofError::NotAnAxiom(c.clone()));
                }
            }
        },
        Rule::AndI => Term::pair(sub(0)?, sub(1)?),
        Rule::AndEl => Term::fst(sub(0)?),
        Rule::AndEr => Term::snd(sub(0)?),
        Rule::OrIl => match c {
            Formula::Sum(_, b) => Term::inl((**b).clone(), sub(0)?),
            _ => unreachable!("checked"),
        },
        Rule::OrIr => match c {
            Formula::Sum(b, _) => Term::inr((**b).clone(), sub(0)?),
            _ => unreachable!("checked"),
        },
        Rule::OrE => Term::when(sub(0)?, sub(1)?, sub(2)?),
        Rule::ImpI(l) => match c {
            Formula::Arrow(a, _) => Term::lam(l, (**a).clone(), sub(0)?),
            _ => unreachable!("checked"),
        },
        Rule::ImpE => {
            let major = &p.premises[0];
            match (&major.rule, axiom_symbol(sig, &major.conclusion)) {
                (Rule::Axiom, Some(ax)) => Term::ax(&ax.name, sub(1)?),
                _ => Term::app(sub(0)?, sub(1)?),
            }
        }
        Rule::TopI => Term::Star,
        Rule::BotE => match c {
            Formula::Arrow(_, b) => Term::Absurd((**b).clone()),
            _ => unreachable!("checked"),
        },
        Rule::AllI { var, sort } => Term::all_i(var, sort, sub(0)?),
        Rule::AllE { witness } => Term::all_e(sub(0)?, witness.clone()),
        Rule::ExI { witness } => match c {
            Formula::Exists(h, s, body) => Term::ExI {
                hint: h.clone(),
                sort: s.clone(),
                witness: witness.clone(),
                body: (**body).clone(),
                term: Box::new(sub(0)?),
            },
            _ => unreachable!("checked"),
        },
        Rule::ExE { var, sort } => Term::ex_e(sub(0)?, var, sort, sub(1)?),
    })
}

/// Read a well-typed term as a derivation; bound variables get fresh labels
/// and eigenvariables.
pub fn term_to_proof(sig: &LambdaSignature, ctx: &Context, t: &Term) -> Result<NdProof, ProofError> {
    infer_type(sig, ctx, t)?;
    decompile(sig, t)
}

fn decompile(sig: &LambdaSignature, t: &Term) -> Result<NdProof, ProofError> {
    let ty = |u: &Term| crate::syntax::synth(sig, u).map_err(ProofError::from);
    let go = |u: &Term| decompile(sig, u);
    let c = ty(t)?;
    Ok(match t {
        Term::Var(x, a) => NdProof::leaf(Rule::Assume(x.clone()), a.clone()),
        Term::Bound(_) => return Err(TypeError::LooseBound.into()),
        Term::Ax(a, u) => {
            let decl = sig.axiom(a).ok_or_else(|| TypeError::UnknownAxiom(a.clone()))?;
            let leaf = NdProof::leaf(Rule::Axiom, Formula::arrow(decl.dom.clone(), decl.cod.clone()));
            NdProof::new(Rule::ImpE, vec![leaf, go(u)?], c)
        }
        Term::Pair(s, u) => NdProof::new(Rule::AndI, vec![go(s)?, go(u)?], c),
        Term::Fst(u) => NdProof::new(Rule::AndEl, vec![go(u)?], c),
        Term::Snd(u) => NdProof::new(Rule::AndEr, vec![go(u)?], c),
        Term::Inl(_, u) => NdProof::new(Rule::OrIl, vec![go(u)?], c),
        Term::Inr(_, u) => NdProof::new(Rule::OrIr, vec![go(u)?], c),
        Term::When(s, l, r) => NdProof::new(Rule::OrE, vec![go(s)?, go(l)?, go(r)?], c),
        Term::Lam(..) => {
            let (x, _, body) = t.open_lam().expect("lambda");
            NdProof::new(Rule::ImpI(x), vec![go(&body)?], c)
        }
        Term::App(s, u) => NdProof::new(Rule::ImpE, vec![go(s)?, go(u)?], c),
        Term::Star => NdProof::leaf(Rule::TopI, c),
        Term::Absurd(_) => NdProof::leaf(Rule::BotE, c),
        Term::AllI(..) => {
            let (y, s, body) = t.open_logic().expect("allI");
            NdProof::new(Rule::AllI { var: y, sort: s }, vec![go(&body)?], c)
        }
        Term::AllE(u, r) => NdProof::new(Rule::AllE { witness: r.clone() }, vec![go(u)?], c),
        Term::ExI { witness, term, .. } => NdProof::new(Rule::ExI { witness: witness.clone() }, vec![go(term)?], c),
        Term::ExE(u, ..) => {
            let (y, s, r) = t.open_logic().expect("exE");
            NdProof::new(Rule::ExE { var: y, sort: s }, vec![go(u)?, go(&r)?], c)
        }
    })
}
