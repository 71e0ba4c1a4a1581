//! Seeded random generation of types, derivations, terms and schema instances.
//!
//! Terms are obtained by compiling random derivations, so every generated term
//! is well typed by construction. Free λ-variables are created on demand and
//! collected into the context of the result.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curryhoward::{proof_to_term, NdProof, Rule};
use crate::equational::{InstanceError, RuleId, RuleInstance};
use crate::syntax::{
    fresh, synth, Context, EqualityInContext, Formula, FunDecl, LTerm, LambdaSignature, LogicalSignature, RelDecl,
    Sym, Term,
};

/// One sort `s`, a constant `c : s`, propositions `a`, `b` and unary `p`, `q`.
pub fn standard_signature() -> LambdaSignature {
    let s = Sym::new("s");
    LambdaSignature::new(LogicalSignature {
        sorts: vec![s.clone()],
        funs: vec![FunDecl { name: Sym::new("c"), args: vec![], result: s.clone() }],
        rels: vec![
            RelDecl { name: Sym::new("a"), args: vec![] },
            RelDecl { name: Sym::new("b"), args: vec![] },
            RelDecl { name: Sym::new("p"), args: vec![s.clone()] },
            RelDecl { name: Sym::new("q"), args: vec![s] },
        ],
    })
}

/// What is in scope while generating below binders.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    /// Assumption labels (λ-variables) usable as leaves.
    pub hyps: Vec<(Sym, Formula)>,
    /// Eigenvariables of enclosing `∀I`/`∃E`; new free variables may not mention them.
    pub eigen: Vec<(Sym, Sym)>,
}

impl Scope {
    fn with_hyp(&self, x: &Sym, a: &Formula) -> Scope {
        let mut s = self.clone();
        s.hyps.push((x.clone(), a.clone()));
        s
    }

    fn with_eigen(&self, y: &Sym, sort: &Sym) -> Scope {
        let mut s = self.clone();
        s.eigen.push((y.clone(), sort.clone()));
        s
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
    pub sig: LambdaSignature,
    /// Free variables created so far, in creation order.
    pub pool: Vec<(Sym, Formula)>,
    /// Allow fresh variables of type 0 as leaves (they make the context inconsistent).
    pub zero_leaves: bool,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen::with_signature(seed, standard_signature())
    }

    pub fn with_signature(seed: u64, sig: LambdaSignature) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), sig, pool: Vec::new(), zero_leaves: false }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Forget the free-variable pool.
    pub fn reset(&mut self) {
        self.pool.clear();
    }

    /// The pool as a context.
    pub fn context(&self) -> Context {
        Context::from_entries(self.pool.clone()).expect("pool names are fresh")
    }

    fn sort(&self) -> Sym {
        self.sig.base.sorts[0].clone()
    }

    /// Closed logical terms of sort `s` plus the eigenvariables in scope.
    fn witnesses(&self, sort: &Sym, scope: &[(Sym, Sym)]) -> Vec<LTerm> {
        let mut out: Vec<LTerm> = self
            .sig
            .base
            .funs
            .iter()
            .filter(|f| f.args.is_empty() && &f.result == sort)
            .map(|f| LTerm::App(f.name.clone(), vec![], sort.clone()))
            .collect();
        out.extend(scope.iter().filter(|(_, s)| s == sort).map(|(y, s)| LTerm::Var(y.clone(), s.clone())));
        out
    }

    pub fn witness(&mut self, sort: &Sym, scope: &[(Sym, Sym)]) -> LTerm {
        let ws = self.witnesses(sort, scope);
        ws.choose(&mut self.rng).cloned().expect("every sort has a constant")
    }

    fn atom(&mut self, scope: &[(Sym, Sym)]) -> Formula {
        let rels = self.sig.base.rels.clone();
        let r = rels.choose(&mut self.rng).expect("relations");
        let args = r.args.iter().map(|s| self.witness(s, scope)).collect();
        Formula::Atom(r.name.clone(), args)
    }

    /// A random type of at most the given depth, closed except for `scope`.
    pub fn ty(&mut self, depth: usize, scope: &[(Sym, Sym)]) -> Formula {
        let k = if depth == 0 { self.rng.gen_range(0..10) } else { self.rng.gen_range(0..16) };
        match k {
            0 => Formula::One,
            1..=9 => self.atom(scope),
            10 => Formula::prod(self.ty(depth - 1, scope), self.ty(depth - 1, scope)),
            11 => Formula::sum(self.ty(depth - 1, scope), self.ty(depth - 1, scope)),
            12 | 13 => Formula::arrow(self.ty(depth - 1, scope), self.ty(depth - 1, scope)),
            _ => {
                let (x, s) = (fresh("x"), self.sort());
                let mut inner = scope.to_vec();
                inner.push((x.clone(), s.clone()));
                let body = self.ty(depth - 1, &inner);
                if k == 14 {
                    Formula::forall(&x, &s, body)
                } else {
                    Formula::exists(&x, &s, body)
                }
            }
        }
    }

    /// A type whose only loose end is the single quantified variable; used for
    /// the bodies of generated quantifiers.
    pub fn quantified(&mut self, depth: usize, exists: bool, scope: &[(Sym, Sym)]) -> Formula {
        let (x, s) = (fresh("x"), self.sort());
        let mut inner = scope.to_vec();
        inner.push((x.clone(), s.clone()));
        let body = if self.rng.gen_bool(0.7) { self.atom(&inner) } else { self.ty(depth, &inner) };
        if exists {
            Formula::exists(&x, &s, body)
        } else {
            Formula::forall(&x, &s, body)
        }
    }

    /// A fresh free variable for `goal`, generalised over eigenvariables it mentions.
    fn new_free(&mut self, goal: &Formula, scope: &Scope) -> NdProof {
        let bad: Vec<_> = scope.eigen.iter().filter(|(y, _)| goal.mentions(y)).cloned().collect();
        let mut ty = goal.clone();
        for (y, s) in bad.iter().rev() {
            ty = Formula::forall(y, s, ty);
        }
        let x = fresh("x");
        self.pool.push((x.clone(), ty.clone()));
        let mut p = NdProof::leaf(Rule::Assume(x), ty);
        for (y, s) in &bad {
            let w = LTerm::Var(y.clone(), s.clone());
            let c = p.conclusion.instantiate(&w).expect("quantifier");
            p = NdProof::new(Rule::AllE { witness: w }, vec![p], c);
        }
        p
    }

    fn leaf(&mut self, goal: &Formula, scope: &Scope) -> NdProof {
        let mut cands: Vec<Sym> = scope.hyps.iter().filter(|(_, a)| a == goal).map(|(x, _)| x.clone()).collect();
        cands.extend(self.pool.iter().filter(|(_, a)| a == goal).map(|(x, _)| x.clone()));
        if let Some(x) = cands.choose(&mut self.rng).cloned() {
            if self.rng.gen_bool(0.8) {
                return NdProof::leaf(Rule::Assume(x), goal.clone());
            }
        }
        if *goal == Formula::One && self.rng.gen_bool(0.5) {
            return NdProof::leaf(Rule::TopI, Formula::One);
        }
        if *goal == Formula::Zero && !self.zero_leaves {
            let a = self.atom(&scope.eigen);
            let f = self.new_free(&Formula::neg(a.clone()), scope);
            let x = self.new_free(&a, scope);
            return NdProof::new(Rule::ImpE, vec![f, x], Formula::Zero);
        }
        self.new_free(goal, scope)
    }

    /// A random derivation of `goal`; its open assumptions are `scope.hyps` and the pool.
    pub fn proof(&mut self, goal: &Formula, depth: usize, scope: &Scope) -> NdProof {
        if depth == 0 {
            return self.leaf(goal, scope);
        }
        let intro = !matches!(goal, Formula::Atom(..) | Formula::Zero);
        match self.rng.gen_range(0..10) {
            0 | 1 => self.leaf(goal, scope),
            2..=5 if intro => self.intro(goal, depth, scope),
            _ => self.elim(goal, depth, scope),
        }
    }

    fn intro(&mut self, goal: &Formula, depth: usize, scope: &Scope) -> NdProof {
        let d = depth - 1;
        let g = goal.clone();
        match goal {
            Formula::One => NdProof::leaf(Rule::TopI, g),
            Formula::Prod(a, b) => NdProof::new(Rule::AndI, vec![self.proof(a, d, scope), self.proof(b, d, scope)], g),
            Formula::Sum(a, b) => {
                if self.rng.gen_bool(0.5) {
                    NdProof::new(Rule::OrIl, vec![self.proof(a, d, scope)], g)
                } else {
                    NdProof::new(Rule::OrIr, vec![self.proof(b, d, scope)], g)
                }
            }
            Formula::Arrow(a, b) => {
                if **a == Formula::Zero && self.rng.gen_bool(0.3) {
                    return NdProof::leaf(Rule::BotE, g);
                }
                let h = fresh("h");
                let body = self.proof(b, d, &scope.with_hyp(&h, a));
                NdProof::new(Rule::ImpI(h), vec![body], g)
            }
            Formula::Forall(h, s, body) => {
                let y = fresh(h.0.as_str());
                let inst = body.open_at(0, &LTerm::Var(y.clone(), s.clone()));
                let p = self.proof(&inst, d, &scope.with_eigen(&y, s));
                NdProof::new(Rule::AllI { var: y, sort: s.clone() }, vec![p], g)
            }
            Formula::Exists(_, s, body) => {
                let w = self.witness(s, &scope.eigen);
                let inst = body.open_at(0, &w);
                NdProof::new(Rule::ExI { witness: w }, vec![self.proof(&inst, d, scope)], g)
            }
            Formula::Atom(..) | Formula::Zero => self.elim(goal, depth, scope),
        }
    }

    fn elim(&mut self, goal: &Formula, depth: usize, scope: &Scope) -> NdProof {
        let d = depth - 1;
        let g = goal.clone();
        match self.rng.gen_range(0..7) {
            0 => {
                let b = self.ty(0, &scope.eigen);
                let p = self.proof(&Formula::prod(g.clone(), b), d, scope);
                NdProof::new(Rule::AndEl, vec![p], g)
            }
            1 => {
                let b = self.ty(0, &scope.eigen);
                let p = self.proof(&Formula::prod(b, g.clone()), d, scope);
                NdProof::new(Rule::AndEr, vec![p], g)
            }
            2 | 3 => {
                let c = self.ty(d.min(1), &scope.eigen);
                let f = self.proof(&Formula::arrow(c.clone(), g.clone()), d, scope);
                let x = self.proof(&c, d, scope);
                NdProof::new(Rule::ImpE, vec![f, x], g)
            }
            4 => {
                let (c1, c2) = (self.ty(0, &scope.eigen), self.ty(0, &scope.eigen));
                let n = self.proof(&Formula::sum(c1.clone(), c2.clone()), d, scope);
                let l = self.proof(&Formula::arrow(c1, g.clone()), d, scope);
                let r = self.proof(&Formula::arrow(c2, g.clone()), d, scope);
                NdProof::new(Rule::OrE, vec![n, l, r], g)
            }
            5 => {
                let ex = self.quantified(0, true, &scope.eigen);
                let Formula::Exists(h, s, _) = &ex else { unreachable!() };
                let y = fresh(h.0.as_str());
                let inst = ex.instantiate(&LTerm::Var(y.clone(), s.clone())).expect("quantifier");
                let n = self.proof(&ex, d, scope);
                let minor = self.proof(&Formula::arrow(inst, g.clone()), d, &scope.with_eigen(&y, s));
                NdProof::new(Rule::ExE { var: y, sort: s.clone() }, vec![n, minor], g)
            }
            _ => {
                if goal == &Formula::Zero || self.rng.gen_bool(0.5) {
                    self.leaf(goal, scope)
                } else {
                    let bot = NdProof::leaf(Rule::BotE, Formula::arrow(Formula::Zero, g.clone()));
                    let z = self.proof(&Formula::Zero, d, scope);
                    NdProof::new(Rule::ImpE, vec![bot, z], g)
                }
            }
        }
    }

    /// A random term of type `goal` with the scope's hypotheses as bound-elsewhere variables.
    pub fn term_in(&mut self, goal: &Formula, depth: usize, scope: &Scope) -> Term {
        let p = self.proof(goal, depth, scope);
        proof_to_term(&self.sig, &p).expect("generated derivations check")
    }

    pub fn term(&mut self, goal: &Formula, depth: usize) -> Term {
        self.term_in(goal, depth, &Scope::default())
    }

    /// A random closed-except-for-the-pool derivation and its goal.
    pub fn checked_proof(&mut self, depth: usize) -> (Formula, NdProof) {
        let goal = self.ty(2, &[]);
        let p = self.proof(&goal, depth, &Scope::default());
        (goal, p)
    }

    /// One random provably-equal rewrite of `t`: an expansion at a random
    /// position that keeps the free variables and the type.
    pub fn expand(&mut self, t: &Term) -> Term {
        let n = t.size();
        let mut k = self.rng.gen_range(0..n);
        let choice = self.rng.gen_range(0..10);
        self.expand_at(t, &mut k, choice).unwrap_or_else(|| t.clone())
    }

    pub fn expand_n(&mut self, t: &Term, n: usize) -> Term {
        (0..n).fold(t.clone(), |acc, _| self.expand(&acc))
    }

    fn expand_at(&mut self, t: &Term, k: &mut usize, choice: usize) -> Option<Term> {
        if *k == 0 {
            return self.expansion(t, choice);
        }
        *k -= 1;
        let (binders, mut kids): (Vec<_>, Vec<_>) = t.open_children().into_iter().unzip();
        for i in 0..kids.len() {
            let sz = kids[i].size();
            if *k < sz {
                kids[i] = self.expand_at(&kids[i], k, choice)?;
                return Some(t.with_children(&binders, kids));
            }
            *k -= sz;
        }
        None
    }

    fn expansion(&mut self, u: &Term, choice: usize) -> Option<Term> {
        let ty = synth(&self.sig, u).ok()?;
        let s = self.sort();
        let c = self.witness(&s, &[]);
        let y = fresh("y");
        let structured = matches!(ty, Formula::Arrow(..) | Formula::Prod(..) | Formula::Forall(..) | Formula::Exists(..));
        let choice = match choice {
            0 | 7..=9 if structured => 0,
            0 | 7..=9 => 1,
            k => k,
        };
        Some(match (choice, &ty) {
            (0, Formula::Arrow(a, _)) => Term::lam(&y, (**a).clone(), Term::app(u.clone(), Term::Var(y.clone(), (**a).clone()))),
            (0, Formula::Prod(..)) => Term::pair(Term::fst(u.clone()), Term::snd(u.clone())),
            (0, Formula::Forall(_, srt, _)) => Term::all_i(&y, srt, Term::all_e(u.clone(), LTerm::Var(y.clone(), srt.clone()))),
            (0, Formula::Exists(h, srt, body)) => {
                let z = fresh("z");
                let yv = LTerm::Var(y.clone(), srt.clone());
                let zty = body.open_at(0, &yv);
                let packed = Term::ExI {
                    hint: h.clone(),
                    sort: srt.clone(),
                    witness: yv,
                    body: (**body).clone(),
                    term: Box::new(Term::Var(z.clone(), zty.clone())),
                };
                Term::ex_e(u.clone(), &y, srt, Term::lam(&z, zty, packed))
            }
            (1, _) => Term::fst(Term::pair(u.clone(), Term::Star)),
            (2, _) => Term::snd(Term::pair(Term::Star, u.clone())),
            (3, _) => Term::app(Term::lam(&y, Formula::One, u.clone()), Term::Star),
            (4, _) => Term::all_e(Term::all_i(&y, &s, u.clone()), c),
            (5, _) => {
                let z = fresh("z");
                let packed = Term::ex_i(&y, &s, c, Formula::One, Term::Star);
                Term::ex_e(packed, &y, &s, Term::lam(&z, Formula::One, u.clone()))
            }
            (6, _) => {
                let k = fresh("k");
                let branch = Term::lam(&k, Formula::One, u.clone());
                Term::when(Term::inl(Formula::One, Term::Star), branch.clone(), branch)
            }
            _ => Term::fst(Term::pair(u.clone(), Term::Star)),
        })
    }

    /// A random pair `(s, t)` of provably equal terms of type `ty` in the pool context.
    pub fn equal_pair(&mut self, ty: &Formula, depth: usize) -> (Term, Term) {
        let s = self.term(ty, depth);
        let n = self.rng.gen_range(1..=3);
        let t = self.expand_n(&s, n);
        (s, t)
    }

    /// A random instance of a non-congruence schema.
    pub fn instance(&mut self, rule: RuleId) -> Result<RuleInstance, InstanceError> {
        self.reset();
        let sig = self.sig.clone();
        let d = 3;
        let srt = self.sort();
        match rule {
            RuleId::Eq0 => {
                let ty = self.ty(1, &[]);
                let (s, t) = self.equal_pair(&ty, d);
                let premise = EqualityInContext::new(self.context(), s, t, ty);
                let old = std::mem::take(&mut self.pool);
                let rs = old.iter().map(|(_, a)| self.term(a, 2)).collect();
                RuleInstance::eq0(&sig, premise, self.context(), rs)
            }
            RuleId::Eq1 => {
                let n = self.rng.gen_range(1..=2);
                let ys: Vec<_> = (0..n).map(|_| (fresh("y"), self.ty(1, &[]))).collect();
                let pairs: Vec<_> = ys.iter().map(|(_, b)| self.equal_pair(b, 2)).collect();
                let scope = Scope { hyps: ys.clone(), eigen: vec![] };
                let goal = self.ty(1, &[]);
                let r = self.term_in(&goal, d, &scope);
                let ctx = self.context();
                let premises = ys
                    .iter()
                    .zip(pairs)
                    .map(|((_, b), (s, t))| EqualityInContext::new(ctx.clone(), s, t, b.clone()))
                    .collect();
                RuleInstance::eq1(&sig, r, ys, premises)
            }
            RuleId::Eq2 => {
                let ty = self.ty(2, &[]);
                let t = self.term(&ty, d);
                RuleInstance::eq2(&sig, self.context(), t)
            }
            RuleId::Eq3 => {
                let ty = self.ty(2, &[]);
                let (s, t) = self.equal_pair(&ty, d);
                RuleInstance::eq3(&sig, EqualityInContext::new(self.context(), s, t, ty))
            }
            RuleId::Eq4 => {
                let ty = self.ty(2, &[]);
                let (s, t) = self.equal_pair(&ty, d);
                let u = self.expand(&t);
                let ctx = self.context();
                RuleInstance::eq4(
                    &sig,
                    EqualityInContext::new(ctx.clone(), s, t.clone(), ty.clone()),
                    EqualityInContext::new(ctx, t, u, ty),
                )
            }
            RuleId::X0 => {
                let t = self.term(&Formula::One, d);
                RuleInstance::x0(&sig, self.context(), t)
            }
            RuleId::X1 | RuleId::X2 => {
                let (ta, tb) = (self.ty(1, &[]), self.ty(1, &[]));
                let (a, b) = (self.term(&ta, d), self.term(&tb, d));
                if rule == RuleId::X1 {
                    RuleInstance::x1(&sig, self.context(), a, b)
                } else {
                    RuleInstance::x2(&sig, self.context(), a, b)
                }
            }
            RuleId::X3 => {
                let ty = Formula::prod(self.ty(1, &[]), self.ty(1, &[]));
                let z = self.term(&ty, d);
                RuleInstance::x3(&sig, self.context(), z)
            }
            RuleId::P0 | RuleId::P1 => {
                let (a, b, c) = (self.ty(1, &[]), self.ty(1, &[]), self.ty(1, &[]));
                let t = self.term(&Formula::arrow(a.clone(), c.clone()), d);
                let s = self.term(&Formula::arrow(b.clone(), c), d);
                if rule == RuleId::P0 {
                    let x = self.term(&a, d);
                    RuleInstance::p0(&sig, self.context(), b, x, t, s)
                } else {
                    let x = self.term(&b, d);
                    RuleInstance::p1(&sig, self.context(), a, x, t, s)
                }
            }
            RuleId::P2 => {
                let [a1, a2, b1, b2, c] = [0; 5].map(|_| self.ty(0, &[]));
                let bs = Formula::sum(b1.clone(), b2.clone());
                let x0 = self.term(&Formula::sum(a1.clone(), a2.clone()), 2);
                let x1 = self.term(&Formula::arrow(a1, bs.clone()), 2);
                let x2 = self.term(&Formula::arrow(a2, bs), 2);
                let x3 = self.term(&Formula::arrow(b1, c.clone()), 2);
                let x4 = self.term(&Formula::arrow(b2, c), 2);
                RuleInstance::p2(&sig, self.context(), [x0, x1, x2, x3, x4])
            }
            RuleId::P3 => {
                let ty = self.ty(2, &[]);
                let x = self.term(&ty, d);
                let e = fresh("e");
                self.pool.push((e.clone(), Formula::Zero));
                let y = if self.rng.gen_bool(0.5) {
                    Term::Var(e, Formula::Zero)
                } else {
                    self.term(&Formula::Zero, 1)
                };
                RuleInstance::p3(&sig, self.context(), x, y)
            }
            RuleId::A0 => {
                let c = self.ty(1, &[]);
                let y = fresh("y");
                let b = self.ty(1, &[]);
                let s = self.term_in(&b, d, &Scope { hyps: vec![(y.clone(), c.clone())], eigen: vec![] });
                let t = self.term(&c, d);
                RuleInstance::a0(&sig, self.context(), &y, c, s, t)
            }
            RuleId::A1 => {
                let (c, b) = (self.ty(1, &[]), self.ty(1, &[]));
                let t = self.term(&Formula::arrow(c.clone(), b), d);
                RuleInstance::a1(&sig, self.context(), &fresh("y"), c, t)
            }
            RuleId::F0 => {
                let z = fresh("z");
                let scope = Scope { hyps: vec![], eigen: vec![(z.clone(), srt.clone())] };
                let b = self.ty(1, &scope.eigen);
                let t = self.term_in(&b, d, &scope);
                let r = self.witness(&srt, &[]);
                RuleInstance::f0(&sig, self.context(), &z, &srt, t, r)
            }
            RuleId::F1 => {
                let ty = self.quantified(1, false, &[]);
                let (u, v) = self.equal_pair(&ty, d);
                RuleInstance::f1(&sig, self.context(), u, v, &fresh("y"))
            }
            RuleId::E0 => {
                let ex = self.quantified(1, true, &[]);
                let Formula::Exists(_, _, body) = &ex else { unreachable!() };
                let z = fresh("z");
                let zv = LTerm::Var(z.clone(), srt.clone());
                let r = self.witness(&srt, &[]);
                let t = self.term(&body.open_at(0, &r), d);
                let b = self.ty(1, &[]);
                let scope = Scope { hyps: vec![], eigen: vec![(z.clone(), srt.clone())] };
                let v = self.term_in(&Formula::arrow(body.open_at(0, &zv), b), d, &scope);
                RuleInstance::e0(&sig, self.context(), &z, &srt, r, body.open_at(0, &zv), t, v)
            }
            RuleId::E1 => {
                let ex = self.quantified(1, true, &[]);
                let Formula::Exists(_, _, body) = &ex else { unreachable!() };
                let u = self.term(&ex, 2);
                let z = fresh("z");
                let zv = LTerm::Var(z.clone(), srt.clone());
                let scope = Scope { hyps: vec![], eigen: vec![(z.clone(), srt.clone())] };
                let b = self.ty(1, &[]);
                let r = self.term_in(&Formula::arrow(body.open_at(0, &zv), b), d, &scope);
                let t = self.expand_n(&r, 2);
                RuleInstance::e1(&sig, self.context(), u, &z, &srt, r, t)
            }
            RuleId::E2 => {
                let ex = self.quantified(1, true, &[]);
                let v = fresh("v");
                self.pool.push((v.clone(), ex.clone()));
                let b = self.ty(1, &[]);
                let w = if self.rng.gen_bool(0.5) {
                    let f = self.term(&Formula::arrow(ex.clone(), b), d);
                    Term::app(f, Term::Var(v.clone(), ex))
                } else {
                    self.term(&b, d)
                };
                RuleInstance::e2(&sig, self.context(), &v, w)
            }
            RuleId::E3 => {
                let ex = self.quantified(1, true, &[]);
                let Formula::Exists(_, _, body) = &ex else { unreachable!() };
                let a = self.term(&ex, 2);
                let (y, z) = (fresh("y"), fresh("z"));
                let dty = body.open_at(0, &LTerm::Var(y.clone(), srt.clone()));
                let ex2 = self.quantified(0, true, &[]);
                let Formula::Exists(_, _, body2) = &ex2 else { unreachable!() };
                let inner = Scope { hyps: vec![(z.clone(), dty)], eigen: vec![(y.clone(), srt.clone())] };
                let b = self.term_in(&ex2, d, &inner);
                let y2 = fresh("y");
                let c_ty = self.ty(1, &[]);
                let outer = Scope { hyps: vec![], eigen: vec![(y2.clone(), srt.clone())] };
                let e = body2.open_at(0, &LTerm::Var(y2.clone(), srt.clone()));
                let c = self.term_in(&Formula::arrow(e, c_ty), d, &outer);
                RuleInstance::e3(&sig, self.context(), a, &y, &z, b, &y2, c)
            }
            RuleId::E4 => {
                let ex = self.quantified(1, true, &[]);
                let a = self.term(&ex, 2);
                let w = fresh("w");
                let b_ty = self.ty(1, &[]);
                let b = if self.rng.gen_bool(0.5) {
                    let f = self.term(&Formula::arrow(ex.clone(), b_ty), d);
                    Term::app(f, Term::Var(w.clone(), ex))
                } else {
                    self.term_in(&b_ty, d, &Scope { hyps: vec![(w.clone(), ex)], eigen: vec![] })
                };
                RuleInstance::e4(&sig, self.context(), a, &fresh("y"), &fresh("z"), &w, b)
            }
            RuleId::Eq5 | RuleId::Eq6 | RuleId::Eq7 => Err(InstanceError::SideCondition {
                rule,
                reason: "congruence rules have no standalone instances".into(),
            }),
        }
    }
}
