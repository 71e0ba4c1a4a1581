use std::collections::BTreeSet;

use thiserror::Error;

use super::{Formula, Sym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunDecl {
    pub name: Sym,
    pub args: Vec<Sym>,
    pub result: Sym,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelDecl {
    pub name: Sym,
    pub args: Vec<Sym>,
}

/// Axiom symbol `a : A → B` with closed domain and codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomDecl {
    pub name: Sym,
    pub dom: Formula,
    pub cod: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate symbol `{0}`")]
    Duplicate(Sym),
    #[error("unknown sort `{0}`")]
    UnknownSort(Sym),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(Sym),
    #[error("`{symbol}` expects {expected} arguments, got {found}")]
    Arity { symbol: Sym, expected: usize, found: usize },
    #[error("`{symbol}`: expected sort `{expected}`, found `{found}`")]
    SortMismatch { symbol: Sym, expected: Sym, found: Sym },
    #[error("axiom `{0}` has free logical variables")]
    OpenAxiom(Sym),
    #[error("formula is not locally closed")]
    LooseBound,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogicalSignature {
    pub sorts: Vec<Sym>,
    pub funs: Vec<FunDecl>,
    pub rels: Vec<RelDecl>,
}

impl LogicalSignature {
    pub fn has_sort(&self, s: &Sym) -> bool {
        self.sorts.contains(s)
    }

    pub fn fun(&self, f: &Sym) -> Option<&FunDecl> {
        self.funs.iter().find(|d| &d.name == f)
    }

    pub fn rel(&self, r: &Sym) -> Option<&RelDecl> {
        self.rels.iter().find(|d| &d.name == r)
    }

    /// Names pairwise distinct, every decoration over declared sorts.
    pub fn validate(&self) -> Result<(), SignatureError> {
        let mut seen = BTreeSet::new();
        let names = self.sorts.iter().chain(self.funs.iter().map(|f| &f.name)).chain(self.rels.iter().map(|r| &r.name));
        for n in names {
            if !seen.insert(n.clone()) {
                return Err(SignatureError::Duplicate(n.clone()));
            }
        }
        for f in &self.funs {
            for s in f.args.iter().chain(std::iter::once(&f.result)) {
                if !self.has_sort(s) {
                    return Err(SignatureError::UnknownSort(s.clone()));
                }
            }
        }
        for r in &self.rels {
            for s in &r.args {
                if !self.has_sort(s) {
                    return Err(SignatureError::UnknownSort(s.clone()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaSignature {
    pub base: LogicalSignature,
    pub axioms: Vec<AxiomDecl>,
}

impl LambdaSignature {
    pub fn new(base: LogicalSignature) -> Self {
        LambdaSignature { base, axioms: Vec::new() }
    }

    pub fn axiom(&self, a: &Sym) -> Option<&AxiomDecl> {
        self.axioms.iter().find(|d| &d.name == a)
    }

    pub fn validate(&self) -> Result<(), SignatureError> {
        self.base.validate()?;
        let mut seen: BTreeSet<Sym> = self.base.sorts.iter().cloned().collect();
        seen.extend(self.base.funs.iter().map(|f| f.name.clone()));
        seen.extend(self.base.rels.iter().map(|r| r.name.clone()));
        for a in &self.axioms {
            if !seen.insert(a.name.clone()) {
                return Err(SignatureError::Duplicate(a.name.clone()));
            }
            a.dom.check(&self.base)?;
            a.cod.check(&self.base)?;
            if !a.dom.free_vars().is_empty() || !a.cod.free_vars().is_empty() {
                return Err(SignatureError::OpenAxiom(a.name.clone()));
            }
        }
        Ok(())
    }
}
