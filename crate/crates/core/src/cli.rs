//! Commands over workspace files and their reports.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::curryhoward::{axiom_formulas, check_proof, proof_to_term, term_to_proof, NdProof};
use crate::equational::{decide_eq, Config, Rewriter, Theory, Verdict as EqVerdict};
use crate::kripke::{forces, ld_of_kripke, valid, validate_kripke, Env, FinKripkeModel};
use crate::semantics::{
    check_category, check_ld_with, demanded_fragment, eval_eq, fixtures, interpret, is_model, logical_consequence,
    model_failure, Budget, Fragment, LdStructure, TermUniverse,
};
use crate::surface::{print_formula, print_proof, print_term, Item, ModelSpec, SurfaceError, Workspace};
use crate::syncat::{compose_classes, hom_witness, pack_context, ClassRep};
use crate::syntax::{check_equality_in_context, infer_type, Formula, TermInContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Typecheck,
    CheckProof,
    CompileProof,
    Normalize,
    DecideEq,
    ModelCheck,
    Interpret,
    EvalEq,
    IsModel,
    Consequence,
    KripkeForce,
    KripkeValid,
    KripkeToLd,
    SyncatCompose,
    HomSearch,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Typecheck => "typecheck",
            Command::CheckProof => "check-proof",
            Command::CompileProof => "compile-proof",
            Command::Normalize => "normalize",
            Command::DecideEq => "decide-eq",
            Command::ModelCheck => "model-check",
            Command::Interpret => "interpret",
            Command::EvalEq => "eval-eq",
            Command::IsModel => "is-model",
            Command::Consequence => "consequence",
            Command::KripkeForce => "kripke-force",
            Command::KripkeValid => "kripke-valid",
            Command::KripkeToLd => "kripke-to-ld",
            Command::SyncatCompose => "syncat-compose",
            Command::HomSearch => "hom-search",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    BoundedNegative,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::BoundedNegative => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::BoundedNegative => "bounded-negative",
        })
    }
}

/// Line-oriented and stable: `command:`, `verdict:`, `rules:`, one
/// `finding:` per result, then `time-ms:`.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub verdict: Verdict,
    pub rules: BTreeSet<String>,
    pub findings: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    fn new(command: Command) -> Self {
        Report {
            command: command.name(),
            verdict: Verdict::Pass,
            rules: BTreeSet::new(),
            findings: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn note(&mut self, v: Verdict, finding: String) {
        self.verdict = self.verdict.max(v);
        self.findings.push(finding);
    }

    fn rule(&mut self, r: impl Into<String>) {
        self.rules.insert(r.into());
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        writeln!(f, "rules: {}", self.rules.iter().cloned().collect::<Vec<_>>().join(" "))?;
        for x in &self.findings {
            writeln!(f, "finding: {x}")?;
        }
        writeln!(f, "time-ms: {}", self.elapsed.as_millis())
    }
}

/// Problems with the input itself (exit code 3).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("the workspace has no {0}")]
    Missing(&'static str),
    #[error("{0}")]
    Input(String),
}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Flag values that take precedence over the workspace `(config …)` form.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub depth: Option<usize>,
    pub search_depth: Option<usize>,
    pub budget: Option<usize>,
}

pub fn run_file(command: Command, path: &str, o: Overrides) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_string(), e))?;
    run(command, &Workspace::parse(&text)?, o)
}

fn flat(f: &Formula) -> String {
    print_formula(f).to_flat()
}

/// Terms with their types (inferred where the form omits one).
fn typed_terms(ws: &Workspace) -> Result<Vec<TermInContext>, CliError> {
    let sig = ws.signature();
    let mut out = Vec::new();
    for item in &ws.items {
        if let Item::Term(ctx, t, ty) = item {
            let inferred = infer_type(&sig, ctx, t).map_err(input)?;
            out.push(TermInContext::new(ctx.clone(), t.clone(), ty.clone().unwrap_or(inferred)));
        }
    }
    Ok(out)
}

fn equalities(ws: &Workspace) -> Vec<&crate::syntax::EqualityInContext> {
    ws.items
        .iter()
        .filter_map(|i| match i {
            Item::Equality(eq) => Some(eq),
            _ => None,
        })
        .collect()
}

fn formulas(ws: &Workspace) -> Vec<&Formula> {
    ws.items
        .iter()
        .filter_map(|i| match i {
            Item::Formula(f) => Some(f),
            _ => None,
        })
        .collect()
}

fn universe(ws: &Workspace) -> Result<TermUniverse, CliError> {
    match ws.universe() {
        Some(u) => Ok(u.clone()),
        None => TermUniverse::closed(&ws.signature().base, 1).map_err(input),
    }
}

/// Everything the workspace will ask a structure about.
fn needed_fragment(ws: &Workspace, u: &TermUniverse) -> Result<Fragment, CliError> {
    let sig = ws.signature();
    let th = ws.theory();
    let mut tics = typed_terms(ws)?;
    for eq in equalities(ws).into_iter().chain(th.axioms.iter()) {
        tics.push(TermInContext::new(eq.ctx.clone(), eq.lhs.clone(), eq.ty.clone()));
        tics.push(TermInContext::new(eq.ctx.clone(), eq.rhs.clone(), eq.ty.clone()));
    }
    let demanded = demanded_fragment(&sig, u, &tics).map_err(input)?;
    let mut seeds: Vec<Formula> = Vec::new();
    for item in &ws.items {
        match item {
            Item::Formula(f) => seeds.push(f.clone()),
            Item::Fragment(fs) => seeds.extend(fs.iter().cloned()),
            Item::Consequence(a, bs) => {
                seeds.push(a.clone());
                seeds.extend(bs.iter().cloned());
                seeds.push(crate::semantics::pack_formula(bs));
            }
            _ => {}
        }
    }
    for a in &sig.axioms {
        seeds.push(a.dom.clone());
        seeds.push(a.cod.clone());
    }
    let seeds: Vec<Formula> = seeds.iter().map(|f| u.generalize_formula(f)).collect();
    Ok(Fragment::closure(seeds, u).union(&demanded, u))
}

fn kripke(ws: &Workspace) -> Result<&FinKripkeModel, CliError> {
    ws.kripke().ok_or(CliError::Missing("(kripke …) form"))
}

pub fn build_model(ws: &Workspace) -> Result<LdStructure, CliError> {
    let spec = ws.model().ok_or(CliError::Missing("(model …) form"))?;
    let sig = ws.signature();
    match spec {
        ModelSpec::Explicit(s) => Ok((**s).clone()),
        ModelSpec::Fixture(name) => {
            let u = universe(ws)?;
            if name == "trivial" {
                return Ok(fixtures::trivial(sig, u));
            }
            let frag = needed_fragment(ws, &u)?;
            let atoms = fixtures::standard_atoms(&u);
            match name.as_str() {
                "diamond" => fixtures::diamond(sig, u.clone(), &frag, &atoms).map_err(input),
                "m3" => fixtures::m3(sig, u.clone(), &frag, &atoms).map_err(input),
                other => Err(CliError::Input(format!("unknown fixture `{other}`"))),
            }
        }
        ModelSpec::Kripke => {
            let u = universe(ws)?;
            let frag = needed_fragment(ws, &u)?;
            ld_of_kripke(kripke(ws)?, &frag, &u).map_err(input)
        }
    }
}

fn proof_rules(p: &NdProof, r: &mut Report) {
    r.rule(p.rule.name());
    p.premises.iter().for_each(|q| proof_rules(q, r));
}

fn check_kripke(k: &FinKripkeModel) -> Result<(), CliError> {
    let report = validate_kripke(k);
    if report.is_ok() {
        Ok(())
    } else {
        Err(CliError::Input(format!("invalid Kripke model: {}", report.to_string().trim_end())))
    }
}

pub fn run(command: Command, ws: &Workspace, o: Overrides) -> Result<Report, CliError> {
    let start = Instant::now();
    let settings = ws.settings();
    let depth = o.depth.unwrap_or(settings.depth);
    let search_depth = o.search_depth.unwrap_or(settings.search_depth);
    let budget = o.budget.unwrap_or(settings.budget);
    let th: Theory = ws.theory();
    th.check().map_err(input)?;
    let sig = &th.sig;
    let mut r = Report::new(command);
    match command {
        Command::Typecheck => {
            r.rule("typing");
            for item in &ws.items {
                match item {
                    Item::Term(ctx, t, ty) => match infer_type(sig, ctx, t) {
                        Ok(found) if ty.as_ref().is_none_or(|want| *want == found) => {
                            r.note(Verdict::Pass, format!("{} : {}", print_term(t), flat(&found)))
                        }
                        Ok(found) => r.note(Verdict::Fail, format!("{} has type {}", print_term(t), flat(&found))),
                        Err(e) => r.note(Verdict::Fail, format!("{}: {e}", print_term(t))),
                    },
                    Item::Equality(eq) => match check_equality_in_context(sig, eq) {
                        Ok(()) => r.note(Verdict::Pass, format!("equality at {} is well typed", flat(&eq.ty))),
                        Err(e) => r.note(Verdict::Fail, format!("equality: {e}")),
                    },
                    _ => {}
                }
            }
        }
        Command::CheckProof => {
            let axioms = axiom_formulas(sig);
            for item in &ws.items {
                if let Item::Proof(gamma, goal, p) = item {
                    proof_rules(p, &mut r);
                    match check_proof(&sig.base, gamma, p, goal, &axioms) {
                        Ok(()) => r.note(Verdict::Pass, format!("derivation of {} checks", flat(goal))),
                        Err(e) => r.note(Verdict::Fail, e.to_string()),
                    }
                }
            }
        }
        Command::CompileProof => {
            for item in &ws.items {
                match item {
                    Item::Proof(_, _, p) => {
                        proof_rules(p, &mut r);
                        match proof_to_term(sig, p) {
                            Ok(t) => r.note(Verdict::Pass, format!("term {}", print_term(&t))),
                            Err(e) => r.note(Verdict::Fail, e.to_string()),
                        }
                    }
                    Item::Term(ctx, t, _) => match term_to_proof(sig, ctx, t) {
                        Ok(p) => {
                            proof_rules(&p, &mut r);
                            r.note(Verdict::Pass, format!("proof {}", print_proof(&p.canonical())));
                        }
                        Err(e) => r.note(Verdict::Fail, e.to_string()),
                    },
                    _ => {}
                }
            }
        }
        Command::Normalize => {
            let rw = Rewriter::pure(sig).with_budget(budget);
            for tic in typed_terms(ws)? {
                match rw.normalize(&tic.term) {
                    Ok((nf, trace)) => {
                        trace.rules().for_each(|s| r.rule(s.tag()));
                        r.note(Verdict::Pass, format!("{} in {} steps", print_term(&nf), trace.len()));
                    }
                    Err(e) => r.note(Verdict::BoundedNegative, e.to_string()),
                }
            }
        }
        Command::DecideEq => {
            let cfg = Config { depth, budget, ..Config::default() };
            for eq in equalities(ws) {
                match decide_eq(&th, eq, cfg).map_err(input)? {
                    EqVerdict::Equal(ev) => {
                        ev.tags().into_iter().for_each(|x| r.rule(x));
                        r.note(Verdict::Pass, format!("equal: {} = {}", print_term(&eq.lhs), print_term(&eq.rhs)));
                    }
                    EqVerdict::NotEqual { bound: None } => {
                        r.note(Verdict::Fail, format!("not equal: {} ≠ {}", print_term(&eq.lhs), print_term(&eq.rhs)))
                    }
                    EqVerdict::NotEqual { bound: Some(k) } => r.note(
                        Verdict::BoundedNegative,
                        format!("no proof within axiom depth {k}: {} = {}", print_term(&eq.lhs), print_term(&eq.rhs)),
                    ),
                }
            }
        }
        Command::ModelCheck => {
            let s = build_model(ws)?;
            check_category(&s.cat).map_err(input)?;
            r.rule("category");
            let report = check_ld_with(&s, Budget::default()).map_err(input)?;
            for n in 1..=7 {
                r.rule(format!("ld-{n}"));
                let st = report.condition(n);
                let v = if st.passed() { Verdict::Pass } else { Verdict::Fail };
                r.note(v, format!("condition {n}: {st}"));
            }
            if report.skipped > 0 {
                r.findings.push(format!("quantified formulas outside the checked range: {}", report.skipped));
            }
        }
        Command::Interpret => {
            let s = build_model(ws)?;
            r.rule("interpretation");
            for tic in typed_terms(ws)? {
                match interpret(&tic, &s) {
                    Ok(f) => r.note(
                        Verdict::Pass,
                        format!("{} ↦ {} : {} → {}", print_term(&tic.term), s.cat.name(f), s.obj_name(s.cat.dom(f)), s.obj_name(s.cat.cod(f))),
                    ),
                    Err(e) => r.note(Verdict::Fail, format!("{}: {e}", print_term(&tic.term))),
                }
            }
        }
        Command::EvalEq => {
            let s = build_model(ws)?;
            r.rule("interpretation");
            for eq in equalities(ws) {
                let text = format!("{} = {}", print_term(&eq.lhs), print_term(&eq.rhs));
                match eval_eq(eq, &s) {
                    Ok(true) => r.note(Verdict::Pass, format!("1: {text}")),
                    Ok(false) => r.note(Verdict::Fail, format!("0: {text}")),
                    Err(e) => r.note(Verdict::Fail, format!("{text}: {e}")),
                }
            }
        }
        Command::IsModel => {
            let s = build_model(ws)?;
            r.rule("model");
            match model_failure(&s, &th).map_err(input)? {
                None => r.note(Verdict::Pass, format!("all {} axioms hold", th.axioms.len())),
                Some(why) => r.note(Verdict::Fail, why),
            }
            debug_assert_eq!(is_model(&s, &th).ok(), Some(r.verdict == Verdict::Pass));
        }
        Command::Consequence => {
            let s = build_model(ws)?;
            r.rule("consequence");
            for item in &ws.items {
                if let Item::Consequence(a, bs) = item {
                    let u = &s.universe;
                    let a2 = u.generalize_formula(a);
                    let bs2: Vec<Formula> = bs.iter().map(|b| u.generalize_formula(b)).collect();
                    let shown = format!("{} from {} hypotheses", flat(a), bs.len());
                    match logical_consequence(&s, &a2, &bs2) {
                        Ok(true) => r.note(Verdict::Pass, format!("follows: {shown}")),
                        Ok(false) => r.note(Verdict::Fail, format!("does not follow: {shown}")),
                        Err(e) => r.note(Verdict::Fail, format!("{shown}: {e}")),
                    }
                }
            }
        }
        Command::KripkeForce => {
            let k = kripke(ws)?;
            check_kripke(k)?;
            r.rule("forcing");
            for item in &ws.items {
                if let Item::Force(w, f, env) = item {
                    let p = k.poset.world(w).ok_or_else(|| CliError::Input(format!("unknown world `{w}`")))?;
                    let env: Env = env.iter().map(|(x, s, e)| ((x.clone(), s.clone()), *e)).collect();
                    match forces(k, p, &env, f) {
                        Ok(true) => r.note(Verdict::Pass, format!("{w} forces {}", flat(f))),
                        Ok(false) => r.note(Verdict::Fail, format!("{w} does not force {}", flat(f))),
                        Err(e) => return Err(input(e)),
                    }
                }
            }
        }
        Command::KripkeValid => {
            let k = kripke(ws)?;
            check_kripke(k)?;
            r.rule("forcing");
            r.rule("validity");
            for f in formulas(ws) {
                if valid(k, f).map_err(input)? {
                    r.note(Verdict::Pass, format!("valid: {}", flat(f)));
                    continue;
                }
                let fv = f.free_vars();
                let witness = (0..k.poset.len())
                    .flat_map(|p| k.environments(p, &fv).into_iter().map(move |e| (p, e)))
                    .find(|(p, e)| forces(k, *p, e, f) == Ok(false));
                let at = witness
                    .map(|(p, e)| {
                        let env: String = e.iter().map(|((x, _), v)| format!(" {x}={v}")).collect();
                        format!(" at {}{env}", k.poset.names[p])
                    })
                    .unwrap_or_default();
                r.note(Verdict::Fail, format!("invalid{at}: {}", flat(f)));
            }
        }
        Command::KripkeToLd => {
            let k = kripke(ws)?;
            let u = universe(ws)?;
            let frag = needed_fragment(ws, &u)?;
            let s = ld_of_kripke(k, &frag, &u).map_err(input)?;
            r.rule("truth-sets");
            r.findings.push(format!("{} objects, {} formulas", s.cat.object_count(), frag.len()));
            for f in formulas(ws) {
                let g = u.generalize_formula(f);
                let o = s.obj(&g).map_err(input)?;
                let arrow = !s.cat.hom(s.terminal, o).is_empty();
                r.findings.push(format!("{} ↦ {}; arrow from 1: {}", flat(f), s.obj_name(o), if arrow { "yes" } else { "no" }));
            }
            let report = check_ld_with(&s, Budget::default()).map_err(input)?;
            for n in 1..=7 {
                r.rule(format!("ld-{n}"));
                let st = report.condition(n);
                r.note(if st.passed() { Verdict::Pass } else { Verdict::Fail }, format!("condition {n}: {st}"));
            }
        }
        Command::SyncatCompose => {
            r.rule("packing");
            r.rule("composition");
            let classes: Vec<ClassRep> = typed_terms(ws)?.iter().map(|t| pack_context(sig, t)).collect::<Result<_, _>>().map_err(input)?;
            let Some((first, rest)) = classes.split_first() else { return Err(CliError::Missing("(term …) form")) };
            let mut acc = first.clone();
            for g in rest {
                match compose_classes(sig, g, &acc) {
                    Ok(c) => acc = c,
                    Err(e) => {
                        r.note(Verdict::Fail, e.to_string());
                        r.elapsed = start.elapsed();
                        return Ok(r);
                    }
                }
            }
            r.note(
                Verdict::Pass,
                format!("[{} : {}. {} : {}]", acc.var, flat(&acc.dom), print_term(&acc.term), flat(&acc.cod)),
            );
        }
        Command::HomSearch => {
            r.rule("search");
            let mut goals: Vec<(Formula, Formula)> = Vec::new();
            for item in &ws.items {
                match item {
                    Item::Hom(a, b) => goals.push((a.clone(), b.clone())),
                    Item::Formula(b) => goals.push((Formula::One, b.clone())),
                    _ => {}
                }
            }
            for (a, b) in goals {
                match hom_witness(&a, &b, &th, search_depth) {
                    Some(t) => {
                        if let Ok(p) = term_to_proof(sig, &crate::syntax::Context::from_entries(vec![(crate::syntax::Sym::new("x"), a.clone())]).map_err(input)?, &t) {
                            proof_rules(&p, &mut r);
                        }
                        r.note(Verdict::Pass, format!("{} → {}: {}", flat(&a), flat(&b), print_term(&t)));
                    }
                    None => r.note(
                        Verdict::BoundedNegative,
                        format!("{} → {}: nothing within depth {search_depth}", flat(&a), flat(&b)),
                    ),
                }
            }
        }
    }
    r.elapsed = start.elapsed();
    Ok(r)
}
