//! The syntactic category of a theory, on representatives: context packing,
//! composition by substitution, class comparison through the decision
//! procedure, bounded inhabitant search, and the classifying functor into a
//! finite structure.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::curryhoward::{proof_to_term, NdProof, ProofError, Rule};
use crate::equational::{decide_eq, normalize, Config, RewriteError, Theory};
use crate::semantics::{interpret, is_model, pack_formula, SemanticsError, TermUniverse};
use crate::syntax::{
    check_term_in_context, fresh, Context, EqualityInContext, Formula, LTerm, LambdaSignature, Sym, Term,
    TermInContext, TypeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyncatError {
    #[error("cannot compose: codomain {found} is not the domain {expected}")]
    Mismatch { expected: Formula, found: Formula },
    #[error("classes {} → {} and {} → {} live in different hom-sets", .0[0], .0[1], .0[2], .0[3])]
    HomSet(Box<[Formula; 4]>),
    #[error("the structure is not a model of the theory: {0}")]
    NotAModel(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// `[x : A. t : B]`, an arrow `A → B` of the syntactic category, kept as a
/// normal-form representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassRep {
    pub var: Sym,
    pub dom: Formula,
    pub term: Term,
    pub cod: Formula,
}

impl ClassRep {
    /// `[x : A. x : A]`.
    pub fn identity(a: &Formula) -> Self {
        let x = fresh("x");
        ClassRep { var: x.clone(), dom: a.clone(), term: Term::Var(x, a.clone()), cod: a.clone() }
    }

    /// A class from a single-variable term, normalised and checked.
    pub fn new(sig: &LambdaSignature, var: Sym, dom: Formula, term: Term, cod: Formula) -> Result<Self, SyncatError> {
        let ctx = Context::from_entries(vec![(var.clone(), dom.clone())])?;
        check_term_in_context(sig, &TermInContext::new(ctx, term.clone(), cod.clone()))?;
        let (term, _) = normalize(sig, &term)?;
        Ok(ClassRep { var, dom, term, cod })
    }

    pub fn tic(&self) -> TermInContext {
        let ctx = Context::from_entries(vec![(self.var.clone(), self.dom.clone())]).expect("one variable");
        TermInContext::new(ctx, self.term.clone(), self.cod.clone())
    }

    /// The representative with its variable renamed to `z`.
    pub fn term_in(&self, z: &Sym) -> Term {
        self.term.subst1(&self.var, &Term::Var(z.clone(), self.dom.clone()))
    }
}

impl fmt::Display for ClassRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}. {} : {}]", self.var, self.dom, self.term, self.cod)
    }
}

/// Pack a context into one variable of the right-nested product type: the
/// `i`-th variable becomes `fst(sndⁱ⁻¹(z))` (the last one `sndⁿ⁻¹(z)`); an
/// empty context becomes `z : 1`.
pub fn pack_context(sig: &LambdaSignature, tic: &TermInContext) -> Result<ClassRep, SyncatError> {
    check_term_in_context(sig, tic)?;
    let entries = tic.ctx.entries();
    if let [(x, a)] = entries {
        return ClassRep::new(sig, x.clone(), a.clone(), tic.term.clone(), tic.ty.clone());
    }
    let types: Vec<Formula> = entries.iter().map(|(_, a)| a.clone()).collect();
    let packed = pack_formula(&types);
    let z = fresh("z");
    let mut map = BTreeMap::new();
    let mut rest = Term::Var(z.clone(), packed.clone());
    for (i, (x, _)) in entries.iter().enumerate() {
        if i + 1 == entries.len() {
            map.insert(x.clone(), rest.clone());
        } else {
            map.insert(x.clone(), Term::fst(rest.clone()));
            rest = Term::snd(rest);
        }
    }
    ClassRep::new(sig, z, packed, tic.term.subst(&map), tic.ty.clone())
}

/// `g ∘ f = [x : A. s[t/y] : C]` for `g = [y : B. s : C]`, `f = [x : A. t : B]`.
pub fn compose_classes(sig: &LambdaSignature, g: &ClassRep, f: &ClassRep) -> Result<ClassRep, SyncatError> {
    if f.cod != g.dom {
        return Err(SyncatError::Mismatch { expected: g.dom.clone(), found: f.cod.clone() });
    }
    let x = fresh("x");
    let t = f.term_in(&x);
    ClassRep::new(sig, x, f.dom.clone(), g.term.subst1(&g.var, &t), g.cod.clone())
}

/// Whether two classes with the same domain and codomain are provably equal.
pub fn same_class_reps(th: &Theory, s: &ClassRep, t: &ClassRep) -> Result<bool, SyncatError> {
    if s.dom != t.dom || s.cod != t.cod {
        return Err(SyncatError::HomSet(Box::new([s.dom.clone(), s.cod.clone(), t.dom.clone(), t.cod.clone()])));
    }
    let z = fresh("z");
    let ctx = Context::from_entries(vec![(z.clone(), s.dom.clone())])?;
    let eq = EqualityInContext::new(ctx, s.term_in(&z), t.term_in(&z), s.cod.clone());
    Ok(decide_eq(th, &eq, Config::default())?.is_equal())
}

/// Pack both terms-in-context and compare the classes.
pub fn same_class(th: &Theory, t1: &TermInContext, t2: &TermInContext) -> Result<bool, SyncatError> {
    let s = pack_context(&th.sig, t1)?;
    let t = pack_context(&th.sig, t2)?;
    same_class_reps(th, &s, &t)
}

type Hyps = Vec<(Formula, NdProof)>;

/// Depth-bounded goal-directed search for derivations. Invertible rules are
/// applied eagerly, conjunctive hypotheses are split on arrival, and a
/// sequent repeated on the current branch is cut.
struct Search<'a> {
    constants: &'a BTreeMap<Sym, Vec<LTerm>>,
    path: HashSet<(Vec<Formula>, Formula)>,
    failed: HashMap<(Vec<Formula>, Formula), usize>,
    cut: bool,
}

fn add(hyps: &mut Hyps, f: Formula, p: NdProof) {
    match f {
        Formula::One => {}
        Formula::Prod(a, b) => {
            add(hyps, (*a).clone(), NdProof::new(Rule::AndEl, vec![p.clone()], (*a).clone()));
            add(hyps, (*b).clone(), NdProof::new(Rule::AndEr, vec![p], (*b).clone()));
        }
        f => {
            if !hyps.iter().any(|(g, _)| *g == f) {
                hyps.push((f, p));
            }
        }
    }
}

fn with(hyps: &Hyps, f: Formula, p: NdProof) -> Hyps {
    let mut out = hyps.clone();
    add(&mut out, f, p);
    out
}

fn without(hyps: &Hyps, i: usize) -> Hyps {
    let mut out = hyps.clone();
    out.remove(i);
    out
}

fn assume(label: &Sym, f: &Formula) -> NdProof {
    NdProof::leaf(Rule::Assume(label.clone()), f.clone())
}

impl Search<'_> {
    fn witnesses(&self, sort: &Sym, hyps: &Hyps, goal: &Formula) -> Vec<LTerm> {
        let mut out: Vec<LTerm> = self.constants.get(sort).cloned().unwrap_or_default();
        let mut vars = goal.free_vars();
        for (f, _) in hyps {
            vars.extend(f.free_vars());
        }
        out.extend(vars.into_iter().filter(|(_, s)| s == sort).map(|(x, s)| LTerm::Var(x, s)));
        out
    }

    fn prove(&mut self, hyps: &Hyps, goal: &Formula, d: usize) -> Option<NdProof> {
        if let Some((_, p)) = hyps.iter().find(|(f, _)| f == goal) {
            return Some(p.clone());
        }
        if *goal == Formula::One {
            return Some(NdProof::leaf(Rule::TopI, Formula::One));
        }
        if d == 0 {
            return None;
        }
        let mut fs: Vec<Formula> = hyps.iter().map(|(f, _)| f.clone()).collect();
        fs.sort();
        let key = (fs, goal.clone());
        if self.path.contains(&key) {
            self.cut = true;
            return None;
        }
        if self.failed.get(&key).is_some_and(|&k| k >= d) {
            return None;
        }
        let outer_cut = std::mem::replace(&mut self.cut, false);
        self.path.insert(key.clone());
        let found = self.step(hyps, goal, d - 1);
        self.path.remove(&key);
        if found.is_none() && !self.cut {
            self.failed.insert(key, d);
        }
        self.cut |= outer_cut;
        found
    }

    fn step(&mut self, hyps: &Hyps, goal: &Formula, d: usize) -> Option<NdProof> {
        let c = goal.clone();
        match goal {
            Formula::Prod(a, b) => {
                let pa = self.prove(hyps, a, d)?;
                let pb = self.prove(hyps, b, d)?;
                return Some(NdProof::new(Rule::AndI, vec![pa, pb], c));
            }
            Formula::Arrow(a, b) => {
                let h = fresh("h");
                let pb = self.prove(&with(hyps, (**a).clone(), assume(&h, a)), b, d)?;
                return Some(NdProof::new(Rule::ImpI(h), vec![pb], c));
            }
            Formula::Forall(_, s, _) => {
                let e = fresh("e");
                let body = goal.instantiate(&LTerm::Var(e.clone(), s.clone()))?;
                let p = self.prove(hyps, &body, d)?;
                return Some(NdProof::new(Rule::AllI { var: e, sort: s.clone() }, vec![p], c));
            }
            _ => {}
        }
        if let Some((_, p)) = hyps.iter().find(|(f, _)| *f == Formula::Zero) {
            let bot = NdProof::leaf(Rule::BotE, Formula::arrow(Formula::Zero, c.clone()));
            return Some(NdProof::new(Rule::ImpE, vec![bot, p.clone()], c));
        }
        if let Some(i) = hyps.iter().position(|(f, _)| matches!(f, Formula::Sum(..))) {
            let (Formula::Sum(a, b), p) = &hyps[i] else { unreachable!() };
            let rest = without(hyps, i);
            let (h1, h2) = (fresh("h"), fresh("h"));
            let left = self.prove(&with(&rest, (**a).clone(), assume(&h1, a)), goal, d)?;
            let right = self.prove(&with(&rest, (**b).clone(), assume(&h2, b)), goal, d)?;
            let left = NdProof::new(Rule::ImpI(h1), vec![left], Formula::arrow((**a).clone(), c.clone()));
            let right = NdProof::new(Rule::ImpI(h2), vec![right], Formula::arrow((**b).clone(), c.clone()));
            return Some(NdProof::new(Rule::OrE, vec![p.clone(), left, right], c));
        }
        if let Some(i) = hyps.iter().position(|(f, _)| matches!(f, Formula::Exists(..))) {
            let (f, p) = &hyps[i];
            let Formula::Exists(_, s, _) = f else { unreachable!() };
            let (e, h) = (fresh("e"), fresh("h"));
            let inst = f.instantiate(&LTerm::Var(e.clone(), s.clone()))?;
            let minor = self.prove(&with(&without(hyps, i), inst.clone(), assume(&h, &inst)), goal, d)?;
            let minor = NdProof::new(Rule::ImpI(h), vec![minor], Formula::arrow(inst, c.clone()));
            return Some(NdProof::new(Rule::ExE { var: e, sort: s.clone() }, vec![p.clone(), minor], c));
        }
        match goal {
            Formula::Sum(a, b) => {
                if let Some(p) = self.prove(hyps, a, d) {
                    return Some(NdProof::new(Rule::OrIl, vec![p], c));
                }
                if let Some(p) = self.prove(hyps, b, d) {
                    return Some(NdProof::new(Rule::OrIr, vec![p], c));
                }
            }
            Formula::Exists(_, s, _) => {
                for t in self.witnesses(s, hyps, goal) {
                    let inst = goal.instantiate(&t)?;
                    if let Some(p) = self.prove(hyps, &inst, d) {
                        return Some(NdProof::new(Rule::ExI { witness: t }, vec![p], c));
                    }
                }
            }
            _ => {}
        }
        for (f, p) in hyps.clone() {
            match &f {
                Formula::Arrow(a, b) if !hyps.iter().any(|(g, _)| g == &**b) => {
                    let Some(pa) = self.prove(hyps, a, d) else { continue };
                    let pb = NdProof::new(Rule::ImpE, vec![p.clone(), pa], (**b).clone());
                    if let Some(done) = self.prove(&with(hyps, (**b).clone(), pb), goal, d) {
                        return Some(done);
                    }
                }
                Formula::Forall(_, s, _) => {
                    for t in self.witnesses(s, hyps, goal) {
                        let inst = f.instantiate(&t)?;
                        if hyps.iter().any(|(g, _)| *g == inst) {
                            continue;
                        }
                        let pi = NdProof::new(Rule::AllE { witness: t }, vec![p.clone()], inst.clone());
                        if let Some(done) = self.prove(&with(hyps, inst, pi), goal, d) {
                            return Some(done);
                        }
                    }
                }
                _ => {}
            }
        }
        None
    }
}

/// Search for a derivation of `B` from one assumption `x : A` and the
/// axioms of the theory, nesting at most `depth` inference rules, and
/// compile it to a term with free variable `x`. `None` means no inhabitant
/// within the bound.
pub fn hom_witness(a: &Formula, b: &Formula, th: &Theory, depth: usize) -> Option<Term> {
    let sig = &th.sig;
    let universe = TermUniverse::closed(&sig.base, 1).ok()?;
    let mut hyps = Hyps::new();
    let x = Sym::new("x");
    add(&mut hyps, a.clone(), assume(&x, a));
    for ax in &sig.axioms {
        let f = Formula::arrow(ax.dom.clone(), ax.cod.clone());
        hyps.push((f.clone(), NdProof::leaf(Rule::Axiom, f)));
        if ax.dom == Formula::One {
            add(&mut hyps, ax.cod.clone(), NdProof::leaf(Rule::Axiom, ax.cod.clone()));
        }
    }
    let mut search = Search { constants: universe.listed(), path: HashSet::new(), failed: HashMap::new(), cut: false };
    let proof = (1..=depth.max(1)).find_map(|d| search.prove(&hyps, b, d))?;
    let term = proof_to_term(sig, &proof).ok()?;
    let ctx = Context::from_entries(vec![(x, a.clone())]).ok()?;
    check_term_in_context(sig, &TermInContext::new(ctx, term.clone(), b.clone())).ok()?;
    Some(term)
}

/// The outcome of mapping a corpus of classes into a structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassifyReport {
    pub classes: usize,
    pub identities: usize,
    pub composites: usize,
    pub same_class_pairs: usize,
    pub violations: Vec<String>,
}

impl ClassifyReport {
    pub fn is_functorial(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ClassifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "classes {}, identities {}, composites {}, equal pairs {}, violations {}",
            self.classes,
            self.identities,
            self.composites,
            self.same_class_pairs,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Every term-in-context `classify` will interpret: the corpus, the
/// identities on its types, and all composable pairs.
pub fn classify_obligations(sig: &LambdaSignature, corpus: &[ClassRep]) -> Result<Vec<TermInContext>, SyncatError> {
    let mut out: Vec<TermInContext> = corpus.iter().map(ClassRep::tic).collect();
    let types: BTreeSet<&Formula> = corpus.iter().flat_map(|c| [&c.dom, &c.cod]).collect();
    out.extend(types.into_iter().map(|a| ClassRep::identity(a).tic()));
    for g in corpus {
        for f in corpus {
            if f.cod == g.dom {
                out.push(compose_classes(sig, g, f)?.tic());
            }
        }
    }
    Ok(out)
}

/// Interpret each class in `m` and check functoriality on the corpus:
/// identity classes go to identities, composite classes to composites, and
/// provably equal classes to equal arrows.
pub fn classify(m: &crate::semantics::LdStructure, th: &Theory, corpus: &[ClassRep]) -> Result<ClassifyReport, SyncatError> {
    if !is_model(m, th)? {
        return Err(SyncatError::NotAModel("an axiom fails".into()));
    }
    let sig = &th.sig;
    let mut report = ClassifyReport { classes: corpus.len(), ..Default::default() };
    let arrows: Vec<_> = corpus.iter().map(|c| interpret(&c.tic(), m)).collect::<Result<_, _>>()?;
    let types: BTreeSet<&Formula> = corpus.iter().flat_map(|c| [&c.dom, &c.cod]).collect();
    for a in types {
        let id = interpret(&ClassRep::identity(a).tic(), m)?;
        report.identities += 1;
        if id != m.cat.identity(m.cat.dom(id)) {
            report.violations.push(format!("identity on {a} goes to {}", m.cat.name(id)));
        }
    }
    for (i, g) in corpus.iter().enumerate() {
        for (j, f) in corpus.iter().enumerate() {
            if f.cod != g.dom {
                continue;
            }
            let gf = interpret(&compose_classes(sig, g, f)?.tic(), m)?;
            report.composites += 1;
            if m.cat.compose(arrows[i], arrows[j]) != Some(gf) {
                report.violations.push(format!("{g} ∘ {f} is not sent to the composite"));
            }
        }
    }
    for (i, f) in corpus.iter().enumerate() {
        for (j, g) in corpus.iter().enumerate().skip(i + 1) {
            if f.dom == g.dom && f.cod == g.cod && same_class_reps(th, f, g)? {
                report.same_class_pairs += 1;
                if arrows[i] != arrows[j] {
                    report.violations.push(format!("{f} and {g} are equal but go to different arrows"));
                }
            }
        }
    }
    Ok(report)
}
