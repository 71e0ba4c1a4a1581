//! Finite Kripke models: validation, forcing with explicit environments,
//! validity, and the thin Σ-structure of truth sets built from a model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::gen::standard_signature;
use crate::semantics::{thin_structure, FiniteLattice, Fragment, LdStructure, SemanticsError, TermUniverse};
use crate::syntax::{Formula, LTerm, LVar, LambdaSignature, LogicalSignature, Sym};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("no value for variable `{0}` in the environment")]
    Unbound(Sym),
    #[error("dangling bound variable")]
    LooseBound,
    #[error("symbol `{0}` has no interpretation at world {1}")]
    Uninterpreted(Sym, String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("{0} points are too many to enumerate up-sets")]
    TooLarge(usize),
    #[error("the model does not validate: {0}")]
    Invalid(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// A finite partial order given by its full relation table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    pub names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinPoset {
    /// The relation exactly as listed (no closure is taken).
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Self {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for &(i, j) in pairs {
            leq[i][j] = true;
        }
        FinPoset { names, leq }
    }

    /// `w0 < w1 < ⋯`, with the full order listed.
    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| format!("w{i}")).collect();
        let pairs: Vec<_> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        FinPoset::from_pairs(names, &pairs)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.leq[p][q]
    }

    pub fn above(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&q| self.leq(p, q))
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// First failure of reflexivity, antisymmetry or transitivity.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.len();
        for p in 0..n {
            if !self.leq(p, p) {
                return Err(format!("reflexivity fails at {}", self.names[p]));
            }
        }
        for p in 0..n {
            for q in 0..n {
                if p != q && self.leq(p, q) && self.leq(q, p) {
                    return Err(format!("antisymmetry fails for {} and {}", self.names[p], self.names[q]));
                }
                for r in 0..n {
                    if self.leq(p, q) && self.leq(q, r) && !self.leq(p, r) {
                        return Err(format!(
                            "transitivity fails for {} ≤ {} ≤ {}",
                            self.names[p], self.names[q], self.names[r]
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// How relations must behave along the order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    /// `R_p(x⃗)` iff `R_q(A_{p,q} x⃗)`.
    StrictIff,
    /// `R_p(x⃗)` implies `R_q(A_{p,q} x⃗)`.
    ForwardOnly,
}

/// Per-world first-order structures over a finite poset. Carrier elements of
/// sort `s` at world `p` are `0..carriers[p][s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinKripkeModel {
    pub sig: LogicalSignature,
    pub poset: FinPoset,
    pub carriers: Vec<BTreeMap<Sym, usize>>,
    /// For each listed pair `p ≤ q`, the map `A_{p,q}` per sort.
    pub transitions: BTreeMap<(usize, usize), BTreeMap<Sym, Vec<usize>>>,
    pub funs: Vec<BTreeMap<Sym, BTreeMap<Vec<usize>, usize>>>,
    pub rels: Vec<BTreeMap<Sym, BTreeSet<Vec<usize>>>>,
    pub stability: Stability,
}

/// Values of free logical variables, keyed by name and sort.
pub type Env = BTreeMap<LVar, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// 0 for the poset itself and for ill-formed tables.
    pub clause: u8,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KripkeReport {
    pub violations: Vec<Violation>,
}

impl KripkeReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fails(&self, clause: u8) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

impl fmt::Display for KripkeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return writeln!(f, "valid Kripke model");
        }
        for v in &self.violations {
            writeln!(f, "clause {}: {}", v.clause, v.detail)?;
        }
        Ok(())
    }
}

fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |e| {
                    let mut v = t.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

impl FinKripkeModel {
    pub fn carrier(&self, p: usize, sort: &Sym) -> usize {
        self.carriers[p].get(sort).copied().unwrap_or(0)
    }

    /// `A_{p,q}` applied to one element; the identity when `p = q` and the
    /// pair is not listed.
    pub fn transport(&self, p: usize, q: usize, sort: &Sym, e: usize) -> usize {
        match self.transitions.get(&(p, q)).and_then(|m| m.get(sort)) {
            Some(map) => map[e],
            None if p == q => e,
            None => panic!("no transition from {} to {}", self.poset.names[p], self.poset.names[q]),
        }
    }

    fn transport_env(&self, p: usize, q: usize, env: &Env) -> Env {
        env.iter().map(|((x, s), &e)| ((x.clone(), s.clone()), self.transport(p, q, s, e))).collect()
    }

    fn transport_stack(&self, p: usize, q: usize, stack: &[(Sym, usize)]) -> Vec<(Sym, usize)> {
        stack.iter().map(|(s, e)| (s.clone(), self.transport(p, q, s, *e))).collect()
    }

    fn eval_term(&self, p: usize, env: &Env, stack: &[(Sym, usize)], t: &LTerm) -> Result<usize, KripkeError> {
        match t {
            LTerm::Var(x, s) => env.get(&(x.clone(), s.clone())).copied().ok_or_else(|| KripkeError::Unbound(x.clone())),
            LTerm::Bound(i, _) => {
                stack.len().checked_sub(i + 1).map(|k| stack[k].1).ok_or(KripkeError::LooseBound)
            }
            LTerm::App(f, args, _) => {
                let vals = args.iter().map(|a| self.eval_term(p, env, stack, a)).collect::<Result<Vec<_>, _>>()?;
                self.funs[p]
                    .get(f)
                    .and_then(|table| table.get(&vals))
                    .copied()
                    .ok_or_else(|| KripkeError::Uninterpreted(f.clone(), self.poset.names[p].clone()))
            }
        }
    }

    fn force(&self, p: usize, env: &Env, stack: &mut Vec<(Sym, usize)>, phi: &Formula) -> Result<bool, KripkeError> {
        Ok(match phi {
            Formula::One => true,
            Formula::Zero => false,
            Formula::Atom(r, args) => {
                let vals = args.iter().map(|a| self.eval_term(p, env, stack, a)).collect::<Result<Vec<_>, _>>()?;
                let rel = self.rels[p].get(r).ok_or_else(|| KripkeError::Uninterpreted(r.clone(), self.poset.names[p].clone()))?;
                rel.contains(&vals)
            }
            Formula::Prod(a, b) => self.force(p, env, stack, a)? && self.force(p, env, stack, b)?,
            Formula::Sum(a, b) => self.force(p, env, stack, a)? || self.force(p, env, stack, b)?,
            Formula::Arrow(a, b) => {
                for q in self.poset.above(p) {
                    let env_q = self.transport_env(p, q, env);
                    let mut stack_q = self.transport_stack(p, q, stack);
                    if self.force(q, &env_q, &mut stack_q, a)? && !self.force(q, &env_q, &mut stack_q, b)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Forall(_, s, body) => {
                for q in self.poset.above(p) {
                    let env_q = self.transport_env(p, q, env);
                    let mut stack_q = self.transport_stack(p, q, stack);
                    for e in 0..self.carrier(q, s) {
                        stack_q.push((s.clone(), e));
                        let ok = self.force(q, &env_q, &mut stack_q, body)?;
                        stack_q.pop();
                        if !ok {
                            return Ok(false);
                        }
                    }
                }
                true
            }
            Formula::Exists(_, s, body) => {
                for e in 0..self.carrier(p, s) {
                    stack.push((s.clone(), e));
                    let ok = self.force(p, env, stack, body)?;
                    stack.pop();
                    if ok {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Every environment for `vars` at world `p`.
    pub fn environments(&self, p: usize, vars: &BTreeSet<LVar>) -> Vec<Env> {
        let vars: Vec<&LVar> = vars.iter().collect();
        let sizes: Vec<usize> = vars.iter().map(|(_, s)| self.carrier(p, s)).collect();
        tuples(&sizes).into_iter().map(|vals| vars.iter().map(|&v| v.clone()).zip(vals).collect()).collect()
    }
}

/// Checks the poset, the well-formedness of all tables, and the model
/// clauses: identity transitions (3), composition of transitions (4),
/// and coherence of functions and relations with transitions (2).
fn fail(violations: &mut Vec<Violation>, clause: u8, detail: String) {
    violations.push(Violation { clause, detail });
}

pub fn validate_kripke(k: &FinKripkeModel) -> KripkeReport {
    let mut violations = Vec::new();
    if let Err(e) = k.poset.validate() {
        fail(&mut violations, 0, e);
    }
    let n = k.poset.len();
    let name = |p: usize| &k.poset.names[p];
    if k.carriers.len() != n || k.funs.len() != n || k.rels.len() != n {
        fail(&mut violations, 0, "per-world tables do not match the number of worlds".into());
        return KripkeReport { violations };
    }
    for p in 0..n {
        for f in &k.sig.funs {
            let sizes: Vec<usize> = f.args.iter().map(|s| k.carrier(p, s)).collect();
            for args in tuples(&sizes) {
                match k.funs[p].get(&f.name).and_then(|t| t.get(&args)) {
                    Some(&v) if v < k.carrier(p, &f.result) => {}
                    _ => fail(&mut violations, 0, format!("`{}` is not total into its carrier at {} on {args:?}", f.name, name(p))),
                }
            }
        }
        for r in &k.sig.rels {
            match k.rels[p].get(&r.name) {
                None => fail(&mut violations, 0, format!("relation `{}` missing at {}", r.name, name(p))),
                Some(set) => {
                    for t in set {
                        let ok = t.len() == r.args.len() && t.iter().zip(&r.args).all(|(&e, s)| e < k.carrier(p, s));
                        if !ok {
                            fail(&mut violations, 0, format!("`{}` at {} holds of {t:?}, outside the carriers", r.name, name(p)));
                        }
                    }
                }
            }
        }
    }
    for p in 0..n {
        for q in k.poset.above(p) {
            for s in &k.sig.sorts {
                let map = k.transitions.get(&(p, q)).and_then(|m| m.get(s));
                match map {
                    None if p == q => {}
                    None => fail(&mut violations, 0, format!("no transition {} → {} for sort `{s}`", name(p), name(q))),
                    Some(map) => {
                        if map.len() != k.carrier(p, s) || map.iter().any(|&e| e >= k.carrier(q, s)) {
                            fail(&mut violations, 0, format!("transition {} → {} for `{s}` is not a map between carriers", name(p), name(q)));
                        } else if p == q && map.iter().enumerate().any(|(i, &e)| i != e) {
                            fail(&mut violations, 3, format!("transition {} → {} for `{s}` is not the identity", name(p), name(p)));
                        }
                    }
                }
            }
        }
    }
    if violations.iter().any(|v| v.clause == 0) {
        return KripkeReport { violations };
    }
    for p in 0..n {
        for q in k.poset.above(p) {
            for r in k.poset.above(q) {
                for s in &k.sig.sorts {
                    for e in 0..k.carrier(p, s) {
                        let direct = k.transport(p, r, s, e);
                        let via = k.transport(q, r, s, k.transport(p, q, s, e));
                        if direct != via {
                            fail(&mut violations, 
                                4,
                                format!("A_{{{},{}}} differs from A_{{{},{}}} ∘ A_{{{},{}}} at {e} of `{s}`", name(p), name(r), name(q), name(r), name(p), name(q)),
                            );
                        }
                    }
                }
            }
            for f in &k.sig.funs {
                let sizes: Vec<usize> = f.args.iter().map(|s| k.carrier(p, s)).collect();
                for args in tuples(&sizes) {
                    let moved: Vec<usize> = args.iter().zip(&f.args).map(|(&e, s)| k.transport(p, q, s, e)).collect();
                    let lhs = k.transport(p, q, &f.result, k.funs[p][&f.name][&args]);
                    if lhs != k.funs[q][&f.name][&moved] {
                        fail(&mut violations, 2, format!("`{}` does not commute with {} → {} at {args:?}", f.name, name(p), name(q)));
                    }
                }
            }
            for rel in &k.sig.rels {
                let sizes: Vec<usize> = rel.args.iter().map(|s| k.carrier(p, s)).collect();
                for args in tuples(&sizes) {
                    let moved: Vec<usize> = args.iter().zip(&rel.args).map(|(&e, s)| k.transport(p, q, s, e)).collect();
                    let here = k.rels[p][&rel.name].contains(&args);
                    let there = k.rels[q][&rel.name].contains(&moved);
                    let bad = match k.stability {
                        Stability::ForwardOnly => here && !there,
                        Stability::StrictIff => here != there,
                    };
                    if bad {
                        fail(&mut violations, 2, format!("`{}` of {args:?} at {} is not preserved at {}", rel.name, name(p), name(q)));
                    }
                }
            }
        }
    }
    KripkeReport { violations }
}

/// `K ⊨_p φ` under `env`. Implication and `∀` quantify over all later
/// worlds, with the environment carried along the transitions.
pub fn forces(k: &FinKripkeModel, p: usize, env: &Env, phi: &Formula) -> Result<bool, KripkeError> {
    for v in phi.free_vars() {
        if !env.contains_key(&v) {
            return Err(KripkeError::Unbound(v.0));
        }
    }
    k.force(p, env, &mut Vec::new(), phi)
}

/// Forced at every world under every environment for its free variables.
pub fn valid(k: &FinKripkeModel, phi: &Formula) -> Result<bool, KripkeError> {
    let fv = phi.free_vars();
    for p in 0..k.poset.len() {
        for env in k.environments(p, &fv) {
            if !k.force(p, &env, &mut Vec::new(), phi)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A world and values for the generic variables of the universe.
type Point = (usize, Env);

fn points(k: &FinKripkeModel, u: &TermUniverse) -> Vec<Point> {
    let generics: BTreeSet<LVar> = u.generics().iter().map(|(s, g)| (g.clone(), s.clone())).collect();
    (0..k.poset.len()).flat_map(|p| k.environments(p, &generics).into_iter().map(move |e| (p, e))).collect()
}

/// The thin Σ-structure of a model: objects are the up-sets of points
/// (world, values of the generic variables) ordered by inclusion, and each
/// formula of the fragment denotes the set of points forcing it. There is an
/// arrow `Nφ → Nψ` exactly when every point forcing `φ` forces `ψ`.
pub fn ld_of_kripke(k: &FinKripkeModel, fragment: &Fragment, u: &TermUniverse) -> Result<LdStructure, KripkeError> {
    let report = validate_kripke(k);
    if !report.is_ok() {
        return Err(KripkeError::Invalid(report.to_string()));
    }
    let pts = points(k, u);
    if pts.len() > 16 {
        return Err(KripkeError::TooLarge(pts.len()));
    }
    let below = |i: usize, j: usize| {
        let (p, e) = &pts[i];
        let (q, e2) = &pts[j];
        k.poset.leq(*p, *q) && k.transport_env(*p, *q, e) == *e2
    };
    let n = pts.len();
    let upsets: Vec<u32> = (0u32..1 << n)
        .filter(|&m| (0..n).all(|i| m & (1 << i) == 0 || (0..n).all(|j| !below(i, j) || m & (1 << j) != 0)))
        .collect();
    let label = |m: u32| {
        let parts: Vec<String> = (0..n)
            .filter(|i| m & (1 << i) != 0)
            .map(|i| {
                let (p, e) = &pts[i];
                let vals: Vec<String> = e.values().map(|v| v.to_string()).collect();
                format!("{}:{}", k.poset.names[*p], vals.join(","))
            })
            .collect();
        format!("{{{}}}", parts.join(" "))
    };
    let lattice = FiniteLattice::new(upsets.iter().map(|&m| label(m)).collect(), |i, j| upsets[i] & !upsets[j] == 0);
    let mut truth: BTreeMap<Formula, usize> = BTreeMap::new();
    for f in fragment.iter() {
        let mut mask = 0u32;
        for (i, (p, env)) in pts.iter().enumerate() {
            if k.force(*p, env, &mut Vec::new(), f)? {
                mask |= 1 << i;
            }
        }
        let idx = upsets.iter().position(|&m| m == mask).ok_or_else(|| KripkeError::Invalid(format!("{f} is not monotone")))?;
        truth.insert(f.clone(), idx);
    }
    let sig = LambdaSignature::new(k.sig.clone());
    Ok(thin_structure(sig, u.clone(), &lattice, fragment, &|f| truth.get(f).copied())?)
}

/// Worlds `w0 < w1` over the standard signature, both with carrier `{0, 1}`
/// and identity transitions, `c = 0`. `a` holds only at `w1`, `b` nowhere,
/// `p` of `{0}` at `w0` and of `{0, 1}` at `w1`, `q` only of `1` at `w1`.
/// Relations grow along the order, so stability is forward-only.
pub fn two_chain() -> FinKripkeModel {
    let sig = standard_signature().base;
    let s = Sym::new("s");
    let unit = || BTreeSet::from([vec![]]);
    let one = |xs: &[usize]| xs.iter().map(|&x| vec![x]).collect::<BTreeSet<_>>();
    let rels = vec![
        BTreeMap::from([
            (Sym::new("a"), BTreeSet::new()),
            (Sym::new("b"), BTreeSet::new()),
            (Sym::new("p"), one(&[0])),
            (Sym::new("q"), BTreeSet::new()),
        ]),
        BTreeMap::from([
            (Sym::new("a"), unit()),
            (Sym::new("b"), BTreeSet::new()),
            (Sym::new("p"), one(&[0, 1])),
            (Sym::new("q"), one(&[1])),
        ]),
    ];
    standard_model(sig, FinPoset::chain(2), vec![2, 2], &s, rels, Stability::ForwardOnly, None)
}

/// One world, carrier `{0}`, every relation true everywhere.
pub fn single_world_total() -> FinKripkeModel {
    let sig = standard_signature().base;
    let s = Sym::new("s");
    let all = BTreeMap::from([
        (Sym::new("a"), BTreeSet::from([vec![]])),
        (Sym::new("b"), BTreeSet::from([vec![]])),
        (Sym::new("p"), BTreeSet::from([vec![0]])),
        (Sym::new("q"), BTreeSet::from([vec![0]])),
    ]);
    standard_model(sig, FinPoset::chain(1), vec![1], &s, vec![all], Stability::StrictIff, None)
}

/// A three-element chain whose transition `w0 → w2` swaps the two elements
/// while the steps `w0 → w1 → w2` are identities: clause 4 fails.
pub fn non_commuting_chain() -> FinKripkeModel {
    let mut sig = standard_signature().base;
    sig.funs.clear();
    let s = Sym::new("s");
    let empty = || {
        sig.rels.iter().map(|r| (r.name.clone(), BTreeSet::new())).collect::<BTreeMap<_, _>>()
    };
    let rels = vec![empty(), empty(), empty()];
    let mut k = standard_model(sig.clone(), FinPoset::chain(3), vec![2, 2, 2], &s, rels, Stability::StrictIff, None);
    k.transitions.get_mut(&(0, 2)).unwrap().insert(s, vec![1, 0]);
    k
}

/// The two-chain with `a` true at `w0` only: a tuple is lost going up.
pub fn losing_relation(stability: Stability) -> FinKripkeModel {
    let mut k = two_chain();
    k.rels[0].insert(Sym::new("a"), BTreeSet::from([vec![]]));
    k.rels[1].insert(Sym::new("a"), BTreeSet::new());
    k.stability = stability;
    k
}

fn standard_model(
    sig: LogicalSignature,
    poset: FinPoset,
    sizes: Vec<usize>,
    sort: &Sym,
    rels: Vec<BTreeMap<Sym, BTreeSet<Vec<usize>>>>,
    stability: Stability,
    constant: Option<usize>,
) -> FinKripkeModel {
    let n = poset.len();
    let carriers = sizes.iter().map(|&m| BTreeMap::from([(sort.clone(), m)])).collect();
    let mut transitions = BTreeMap::new();
    for p in 0..n {
        for q in poset.above(p) {
            transitions.insert((p, q), BTreeMap::from([(sort.clone(), (0..sizes[p]).collect())]));
        }
    }
    let c = constant.unwrap_or(0);
    let funs = (0..n)
        .map(|_| sig.funs.iter().map(|f| (f.name.clone(), BTreeMap::from([(vec![], c)]))).collect())
        .collect();
    FinKripkeModel { sig, poset, carriers, transitions, funs, rels, stability }
}
