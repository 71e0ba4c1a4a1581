use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{check_category, ArrowId, Budget, LdStructure, ObjId, SemanticsError};
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
}

impl Status {
    pub fn passed(&self) -> bool {
        matches!(self, Status::Pass)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("holds"),
            Status::Fail(why) => write!(f, "fails: {why}"),
        }
    }
}

/// Outcome of the seven logical-distributivity conditions, numbered 1 to 7.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdReport {
    pub conditions: [Status; 7],
    /// Quantified formulas mentioning a generic variable, which conditions 5
    /// and 7 cannot test against a fresh instance.
    pub skipped: usize,
}

impl LdReport {
    pub fn condition(&self, n: usize) -> &Status {
        &self.conditions[n - 1]
    }

    pub fn passes(&self, which: &[usize]) -> bool {
        which.iter().all(|&n| self.condition(n).passed())
    }

    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(Status::passed)
    }
}

impl fmt::Display for LdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conditions.iter().enumerate() {
            match c {
                Status::Pass => writeln!(f, "condition {}: pass", i + 1)?,
                Status::Fail(why) => writeln!(f, "condition {}: fail: {why}", i + 1)?,
            }
        }
        if self.skipped > 0 {
            writeln!(f, "skipped quantified formulas: {}", self.skipped)?;
        }
        Ok(())
    }
}

pub fn check_ld(s: &LdStructure) -> Result<LdReport, SemanticsError> {
    check_ld_with(s, Budget::default())
}

/// Verifies every condition by exhaustive search over hom-sets, for
/// existence and uniqueness of each mediating arrow. Structures beyond the
/// budget are refused rather than sampled.
pub fn check_ld_with(s: &LdStructure, budget: Budget) -> Result<LdReport, SemanticsError> {
    let c = &s.cat;
    if c.object_count() > budget.objects || c.arrow_count() > budget.arrows || s.universe.width() > budget.universe {
        return Err(SemanticsError::Budget(format!(
            "{} objects, {} arrows, {} universe terms",
            c.object_count(),
            c.arrow_count(),
            s.universe.width()
        )));
    }
    check_category(c)?;
    let mut skipped = 0;
    let conditions = [
        verdict(products(s)),
        verdict(coproducts(s)),
        verdict(exponentials(s)),
        verdict(distributive(s)),
        verdict(quantifiers(s, &mut skipped)),
        verdict(m_map(s)),
        verdict(frobenius(s)),
    ];
    Ok(LdReport { conditions, skipped })
}

type Check = Result<(), String>;

fn verdict(r: Check) -> Status {
    match r {
        Ok(()) => Status::Pass,
        Err(why) => Status::Fail(why),
    }
}

fn err(e: SemanticsError) -> String {
    e.to_string()
}

fn objects(s: &LdStructure) -> std::ops::Range<ObjId> {
    0..s.cat.object_count()
}

fn products(s: &LdStructure) -> Check {
    let c = &s.cat;
    for x in objects(s) {
        if c.hom(x, s.terminal).len() != 1 {
            return Err(format!("{} is not terminal: {} arrows from {}", s.obj_name(s.terminal), c.hom(x, s.terminal).len(), s.obj_name(x)));
        }
    }
    for a in objects(s) {
        for b in objects(s) {
            let w = s.product(a, b).map_err(err)?;
            if c.dom(w.p1) != w.obj || c.cod(w.p1) != a || c.dom(w.p2) != w.obj || c.cod(w.p2) != b {
                return Err(format!("projections of {} × {} have wrong endpoints", s.obj_name(a), s.obj_name(b)));
            }
            for x in objects(s) {
                let mut count: HashMap<(ArrowId, ArrowId), usize> = HashMap::new();
                for &h in c.hom(x, w.obj) {
                    let key = (c.compose(w.p1, h).unwrap(), c.compose(w.p2, h).unwrap());
                    *count.entry(key).or_default() += 1;
                }
                for &f in c.hom(x, a) {
                    for &g in c.hom(x, b) {
                        let n = count.get(&(f, g)).copied().unwrap_or(0);
                        if n != 1 {
                            return Err(format!(
                                "{} mediating arrows for ({}, {}) into {} × {}",
                                n,
                                c.name(f),
                                c.name(g),
                                s.obj_name(a),
                                s.obj_name(b)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn coproducts(s: &LdStructure) -> Check {
    let c = &s.cat;
    let zero = s.initial().map_err(err)?;
    for x in objects(s) {
        if c.hom(zero, x).len() != 1 {
            return Err(format!("{} is not initial: {} arrows to {}", s.obj_name(zero), c.hom(zero, x).len(), s.obj_name(x)));
        }
    }
    for a in objects(s) {
        for b in objects(s) {
            let w = s.coproduct(a, b).map_err(err)?;
            if c.cod(w.i1) != w.obj || c.dom(w.i1) != a || c.cod(w.i2) != w.obj || c.dom(w.i2) != b {
                return Err(format!("injections of {} + {} have wrong endpoints", s.obj_name(a), s.obj_name(b)));
            }
            for x in objects(s) {
                let mut count: HashMap<(ArrowId, ArrowId), usize> = HashMap::new();
                for &h in c.hom(w.obj, x) {
                    let key = (c.compose(h, w.i1).unwrap(), c.compose(h, w.i2).unwrap());
                    *count.entry(key).or_default() += 1;
                }
                for &f in c.hom(a, x) {
                    for &g in c.hom(b, x) {
                        let n = count.get(&(f, g)).copied().unwrap_or(0);
                        if n != 1 {
                            return Err(format!(
                                "{} mediating arrows for [{}, {}] out of {} + {}",
                                n,
                                c.name(f),
                                c.name(g),
                                s.obj_name(a),
                                s.obj_name(b)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn exponentials(s: &LdStructure) -> Check {
    let c = &s.cat;
    for a in objects(s) {
        for b in objects(s) {
            let e = s.exponential(a, b).map_err(err)?;
            let ea = s.product(e.obj, a).map_err(err)?;
            if c.dom(e.ev) != ea.obj || c.cod(e.ev) != b {
                return Err(format!("evaluation for {}^{} has wrong endpoints", s.obj_name(b), s.obj_name(a)));
            }
            for x in objects(s) {
                let xa = s.product(x, a).map_err(err)?;
                let mut count: HashMap<ArrowId, usize> = HashMap::new();
                for &h in c.hom(x, e.obj) {
                    let h1 = s.times(h, c.identity(a)).map_err(err)?;
                    *count.entry(s.compose(e.ev, h1).map_err(err)?).or_default() += 1;
                }
                for &f in c.hom(xa.obj, b) {
                    let n = count.get(&f).copied().unwrap_or(0);
                    if n != 1 {
                        return Err(format!(
                            "{} transposes of {} into {}^{}",
                            n,
                            c.name(f),
                            s.obj_name(b),
                            s.obj_name(a)
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn distributive(s: &LdStructure) -> Check {
    for a in objects(s) {
        for b in objects(s) {
            for cc in objects(s) {
                let d = s.delta(a, b, cc).map_err(err)?;
                if let Err(e) = s.inverse(d) {
                    return Err(format!(
                        "Δ for A = {}, B = {}, C = {} has no inverse ({e})",
                        s.obj_name(a),
                        s.obj_name(b),
                        s.obj_name(cc)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Every family of arrows from `vertex` to the diagram, as one choice per leg.
fn families(s: &LdStructure, vertex: ObjId, targets: &[ObjId], outgoing: bool) -> Vec<Vec<ArrowId>> {
    let mut out = vec![Vec::new()];
    for &t in targets {
        let hom = if outgoing { s.cat.hom(vertex, t) } else { s.cat.hom(t, vertex) };
        out = out
            .into_iter()
            .flat_map(|fam| {
                hom.iter().map(move |&f| {
                    let mut v = fam.clone();
                    v.push(f);
                    v
                })
            })
            .collect();
    }
    out
}

fn quantifiers(s: &LdStructure, skipped: &mut usize) -> Check {
    let c = &s.cat;
    let vertices: BTreeSet<ObjId> =
        s.m.iter().filter(|(f, _)| !s.universe.mentions_generic(f)).map(|(_, &o)| o).collect();
    let mut quantified: Vec<&Formula> = s.m.keys().filter(|f| f.is_quantifier()).collect();
    quantified.sort();
    for q in quantified {
        if s.universe.mentions_generic(q) {
            *skipped += 1;
            continue;
        }
        let (Formula::Forall(_, sort, _) | Formula::Exists(_, sort, _)) = q else { unreachable!() };
        let is_all = matches!(q, Formula::Forall(..));
        let vertex = s.obj(q).map_err(err)?;
        let mut legs = Vec::new();
        let mut targets = Vec::new();
        for t in s.universe.terms(sort) {
            let inst = q.instantiate(&t).unwrap();
            let o = s.obj(&inst).map_err(err)?;
            let leg = s.leg(q, &t).map_err(err)?;
            let (from, to) = if is_all { (vertex, o) } else { (o, vertex) };
            if c.dom(leg) != from || c.cod(leg) != to {
                return Err(format!("leg at {t} of {q} has wrong endpoints"));
            }
            legs.push(leg);
            targets.push(o);
        }
        for &v in &vertices {
            for fam in families(s, v, &targets, is_all) {
                let hom = if is_all { c.hom(v, vertex) } else { c.hom(vertex, v) };
                let n = hom
                    .iter()
                    .filter(|&&h| {
                        legs.iter().zip(&fam).all(|(&leg, &f)| {
                            let comp = if is_all { c.compose(leg, h) } else { c.compose(h, leg) };
                            comp == Some(f)
                        })
                    })
                    .count();
                if n != 1 {
                    let kind = if is_all { "cone" } else { "co-cone" };
                    return Err(format!(
                        "{n} mediating arrows between the {kind} at {} and {q}",
                        s.obj_name(v)
                    ));
                }
            }
        }
    }
    Ok(())
}

fn m_map(s: &LdStructure) -> Check {
    let mut formulas: Vec<&Formula> = s.m.keys().collect();
    formulas.sort();
    for f in formulas {
        let o = s.m[f];
        let expected = match f {
            Formula::Zero => Some(s.initial().map_err(err)?),
            Formula::One => Some(s.terminal),
            Formula::Prod(a, b) => Some(s.product(s.obj(a).map_err(err)?, s.obj(b).map_err(err)?).map_err(err)?.obj),
            Formula::Sum(a, b) => Some(s.coproduct(s.obj(a).map_err(err)?, s.obj(b).map_err(err)?).map_err(err)?.obj),
            Formula::Arrow(a, b) => {
                Some(s.exponential(s.obj(a).map_err(err)?, s.obj(b).map_err(err)?).map_err(err)?.obj)
            }
            _ => None,
        };
        if let Some(e) = expected {
            if e != o {
                return Err(format!("M({f}) is {} but the construction gives {}", s.obj_name(o), s.obj_name(e)));
            }
        }
    }
    Ok(())
}

/// Condition 7: the comparison `M(∃x. A×B) → MA × M(∃x. B)` is invertible.
fn frobenius(s: &LdStructure) -> Check {
    let mut cases: Vec<&Formula> = s.m.keys().collect();
    cases.sort();
    for q in cases {
        let Formula::Exists(h, sort, body) = q else { continue };
        let Formula::Prod(a, b) = &**body else { continue };
        if !a.closed_at(0) || s.universe.mentions_generic(q) {
            continue;
        }
        let inner = Formula::Exists(h.clone(), sort.clone(), b.clone());
        let bang = frobenius_mediator(s, q, a, &inner).map_err(err)?;
        if let Err(e) = s.inverse(bang) {
            return Err(format!("the comparison arrow for {q} has no inverse ({e})"));
        }
    }
    Ok(())
}

/// The unique `! : M(∃x. A×B) → MA × M(∃x. B)` with `! ∘ j'_t = 1 × j_t`.
pub(crate) fn frobenius_mediator(
    s: &LdStructure,
    outer: &Formula,
    a: &Formula,
    inner: &Formula,
) -> Result<ArrowId, SemanticsError> {
    let Formula::Exists(_, sort, _) = outer else { unreachable!() };
    let ma = s.obj(a)?;
    let target = s.product(ma, s.obj(inner)?)?;
    let src = s.obj(outer)?;
    let mut eqs = Vec::new();
    for t in s.universe.terms(sort) {
        let outer_leg = s.leg(outer, &t)?;
        let inner_leg = s.leg(inner, &t)?;
        let side = s.times(s.cat.identity(ma), inner_leg)?;
        eqs.push((outer_leg, side));
    }
    let c = &s.cat;
    s.unique(src, target.obj, "Frobenius comparison", |k| eqs.iter().all(|&(j, rhs)| c.compose(k, j) == Some(rhs)))
}
