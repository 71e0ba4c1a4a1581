//! The language core: signatures, logical terms, formulas (which double as
//! λ-types), λ-terms, contexts and type inference.
//!
//! Bound variables are stored as indices (locally nameless), separately for
//! λ-binders and logical binders. Free variables keep their names. Binders
//! carry a [`Hint`] that only matters for printing, so the derived structural
//! equality on formulas and terms is α-equivalence.

mod formula;
mod lterm;
mod signature;
mod term;
mod typing;

pub use formula::Formula;
pub use lterm::LTerm;
pub use signature::{AxiomDecl, FunDecl, LambdaSignature, LogicalSignature, RelDecl, SignatureError};
pub use term::Term;
pub use typing::{
    check_equality_in_context, check_term_in_context, infer_type, synth, Context, EqualityInContext,
    TermInContext, TypeError,
};

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

/// An interned-ish name: sort, function, relation, axiom or variable symbol.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(s: &str) -> Self {
        Sym(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for names produced by [`fresh`]; the surface syntax cannot spell them.
    pub fn is_generated(&self) -> bool {
        self.0.contains('%')
    }

    /// The user-facing part of a generated name.
    pub fn base(&self) -> &str {
        match self.0.find('%') {
            Some(i) if i > 0 => &self.0[..i],
            Some(_) => "v",
            None => &self.0,
        }
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl From<String> for Sym {
    fn from(s: String) -> Self {
        Sym(Arc::from(s))
    }
}

static FRESH: AtomicUsize = AtomicUsize::new(0);

/// A name that cannot clash with any parsed name or any earlier fresh name.
pub fn fresh(base: &str) -> Sym {
    let n = FRESH.fetch_add(1, Ordering::Relaxed);
    let base = match base.find('%') {
        Some(i) => &base[..i],
        None => base,
    };
    Sym::from(format!("{base}%{n}"))
}

/// Binder name kept for printing. Ignored by equality, ordering and hashing.
#[derive(Clone)]
pub struct Hint(pub Sym);

impl Hint {
    pub fn new(s: &str) -> Self {
        Hint(Sym::new(s))
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A logical variable with its sort.
pub type LVar = (Sym, Sym);
