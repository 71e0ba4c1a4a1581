//! The equational theory of proof terms: oriented contractions, normalisation,
//! a type-directed decision procedure, and schema instances for testing it.

mod decide;
mod instances;
mod rewrite;

pub use decide::{decide_eq, verify_evidence, Config, Evidence, Verdict};
pub use instances::{check_rule_instance, InstanceError, RuleInstance};
pub use rewrite::{normalize, replay, step, RewriteError, RewriteTrace, Rewriter, Step, StepRule};

use std::fmt;

use crate::syntax::{check_equality_in_context, EqualityInContext, LambdaSignature, TypeError};

/// One tag per schema of the calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Eq0,
    Eq1,
    Eq2,
    Eq3,
    Eq4,
    Eq5,
    Eq6,
    Eq7,
    X0,
    X1,
    X2,
    X3,
    P0,
    P1,
    P2,
    P3,
    A0,
    A1,
    F0,
    F1,
    E0,
    E1,
    E2,
    E3,
    E4,
}

impl RuleId {
    pub const ALL: [RuleId; 25] = [
        RuleId::Eq0,
        RuleId::Eq1,
        RuleId::Eq2,
        RuleId::Eq3,
        RuleId::Eq4,
        RuleId::Eq5,
        RuleId::Eq6,
        RuleId::Eq7,
        RuleId::X0,
        RuleId::X1,
        RuleId::X2,
        RuleId::X3,
        RuleId::P0,
        RuleId::P1,
        RuleId::P2,
        RuleId::P3,
        RuleId::A0,
        RuleId::A1,
        RuleId::F0,
        RuleId::F1,
        RuleId::E0,
        RuleId::E1,
        RuleId::E2,
        RuleId::E3,
        RuleId::E4,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            RuleId::Eq0 => "eq0",
            RuleId::Eq1 => "eq1",
            RuleId::Eq2 => "eq2",
            RuleId::Eq3 => "eq3",
            RuleId::Eq4 => "eq4",
            RuleId::Eq5 => "eq5",
            RuleId::Eq6 => "eq6",
            RuleId::Eq7 => "eq7",
            RuleId::X0 => "x0",
            RuleId::X1 => "x1",
            RuleId::X2 => "x2",
            RuleId::X3 => "x3",
            RuleId::P0 => "p0",
            RuleId::P1 => "p1",
            RuleId::P2 => "p2",
            RuleId::P3 => "p3",
            RuleId::A0 => "a0",
            RuleId::A1 => "a1",
            RuleId::F0 => "f0",
            RuleId::F1 => "f1",
            RuleId::E0 => "e0",
            RuleId::E1 => "e1",
            RuleId::E2 => "e2",
            RuleId::E3 => "e3",
            RuleId::E4 => "e4",
        }
    }

    pub fn from_tag(tag: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.tag() == tag)
    }

    /// The three congruence rules for binders.
    pub fn is_congruence(self) -> bool {
        matches!(self, RuleId::Eq5 | RuleId::Eq6 | RuleId::Eq7)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A λ-signature together with equational axioms.
#[derive(Clone, Debug, Default)]
pub struct Theory {
    pub sig: LambdaSignature,
    pub axioms: Vec<EqualityInContext>,
}

impl Theory {
    pub fn pure(sig: LambdaSignature) -> Self {
        Theory { sig, axioms: Vec::new() }
    }

    pub fn check(&self) -> Result<(), TypeError> {
        self.sig.validate()?;
        self.axioms.iter().try_for_each(|ax| check_equality_in_context(&self.sig, ax))
    }
}
