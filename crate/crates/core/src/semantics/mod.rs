//! Finite categorical semantics: category tables, logically distributive
//! structures and their checker, and the interpretation of terms as arrows.

mod category;
mod check;
pub mod fixtures;
mod interpret;
mod lattice;
mod structure;
mod universe;

pub use category::{check_category, ArrowDecl, ArrowId, CategoryError, FinCategory, ObjId};
pub use check::{check_ld, check_ld_with, LdReport, Status};
pub use interpret::{
    demanded_fragment, eval_eq, interpret, is_model, logical_consequence, model_failure, sigma, tuple,
};
pub use lattice::{thin_structure, FiniteLattice};
pub use structure::{pack_formula, Budget, CoproductW, ExponentialW, LdStructure, ProductW};
pub use universe::{Fragment, TermUniverse};

use thiserror::Error;

use crate::syntax::{Formula, LTerm, Sym, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("type {0} is outside the fragment")]
    OutsideFragment(Formula),
    #[error("logical term {0} is outside the term universe")]
    OutsideUniverse(LTerm),
    #[error("universe term {0} is not a closed term of sort `{1}`")]
    UniverseTerm(LTerm, Sym),
    #[error("no generic variable for sort `{0}`")]
    NoGeneric(Sym),
    #[error("no {0} witness for {1} and {2}")]
    NoWitness(&'static str, String, String),
    #[error("no terminal object")]
    NoTerminal,
    #[error("no initial object")]
    NoInitial,
    #[error("M({0}) is not the stored construction on its components")]
    NotProduct(Formula),
    #[error("no leg at {1} for {0}")]
    NoLeg(Formula, LTerm),
    #[error("no arrow for axiom `{0}`")]
    UnknownAxiom(Sym),
    #[error("no mediating arrow: {0}")]
    NoMediator(String),
    #[error("mediating arrow is not unique: {0}")]
    NotUnique(String),
    #[error("`{0}` and `{1}` do not compose")]
    Composite(String, String),
    #[error("{0} types but {1} arrows")]
    Arity(usize, usize),
    #[error("structure exceeds the size budget ({0})")]
    Budget(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}
