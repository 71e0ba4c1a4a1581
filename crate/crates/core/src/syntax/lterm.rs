use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{LVar, LogicalSignature, SignatureError, Sym};

/// A first-order term over a logical signature. Every node knows its sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LTerm {
    Var(Sym, Sym),
    /// Logical variable bound by an enclosing quantifier or `allI`/`exE`.
    Bound(usize, Sym),
    App(Sym, Vec<LTerm>, Sym),
}

impl LTerm {
    pub fn var(name: &str, sort: &str) -> Self {
        LTerm::Var(Sym::new(name), Sym::new(sort))
    }

    pub fn constant(name: &str, sort: &str) -> Self {
        LTerm::App(Sym::new(name), Vec::new(), Sym::new(sort))
    }

    pub fn sort(&self) -> &Sym {
        match self {
            LTerm::Var(_, s) | LTerm::Bound(_, s) | LTerm::App(_, _, s) => s,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<LVar> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut out);
        out
    }

    pub(crate) fn collect_fv(&self, out: &mut BTreeSet<LVar>) {
        match self {
            LTerm::Var(x, s) => {
                out.insert((x.clone(), s.clone()));
            }
            LTerm::Bound(..) => {}
            LTerm::App(_, args, _) => args.iter().for_each(|a| a.collect_fv(out)),
        }
    }

    pub fn mentions(&self, name: &Sym) -> bool {
        match self {
            LTerm::Var(x, _) => x == name,
            LTerm::Bound(..) => false,
            LTerm::App(_, args, _) => args.iter().any(|a| a.mentions(name)),
        }
    }

    /// No bound index at or above `depth`.
    pub(crate) fn closed_at(&self, depth: usize) -> bool {
        match self {
            LTerm::Bound(i, _) => *i < depth,
            LTerm::Var(..) => true,
            LTerm::App(_, args, _) => args.iter().all(|a| a.closed_at(depth)),
        }
    }

    pub(crate) fn open_at(&self, k: usize, with: &LTerm) -> LTerm {
        match self {
            LTerm::Bound(i, _) if *i == k => with.clone(),
            LTerm::Bound(..) | LTerm::Var(..) => self.clone(),
            LTerm::App(f, args, s) => {
                LTerm::App(f.clone(), args.iter().map(|a| a.open_at(k, with)).collect(), s.clone())
            }
        }
    }

    pub(crate) fn close_at(&self, k: usize, name: &Sym) -> LTerm {
        match self {
            LTerm::Var(x, s) if x == name => LTerm::Bound(k, s.clone()),
            LTerm::Var(..) | LTerm::Bound(..) => self.clone(),
            LTerm::App(f, args, s) => {
                LTerm::App(f.clone(), args.iter().map(|a| a.close_at(k, name)).collect(), s.clone())
            }
        }
    }

    /// Simultaneous substitution of free variables. Replacements must be
    /// locally closed; nothing can be captured.
    pub fn subst(&self, map: &BTreeMap<Sym, LTerm>) -> LTerm {
        match self {
            LTerm::Var(x, _) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            LTerm::Bound(..) => self.clone(),
            LTerm::App(f, args, s) => LTerm::App(f.clone(), args.iter().map(|a| a.subst(map)).collect(), s.clone()),
        }
    }

    pub fn subst1(&self, x: &Sym, r: &LTerm) -> LTerm {
        match self {
            LTerm::Var(y, _) if y == x => r.clone(),
            LTerm::Var(..) | LTerm::Bound(..) => self.clone(),
            LTerm::App(f, args, s) => LTerm::App(f.clone(), args.iter().map(|a| a.subst1(x, r)).collect(), s.clone()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            LTerm::Var(..) | LTerm::Bound(..) => 1,
            LTerm::App(_, args, _) => 1 + args.iter().map(LTerm::size).sum::<usize>(),
        }
    }

    /// Arity and sort agreement with the signature.
    pub fn check(&self, sig: &LogicalSignature) -> Result<(), SignatureError> {
        match self {
            LTerm::Var(_, s) | LTerm::Bound(_, s) => {
                if sig.has_sort(s) {
                    Ok(())
                } else {
                    Err(SignatureError::UnknownSort(s.clone()))
                }
            }
            LTerm::App(f, args, s) => {
                let decl = sig.fun(f).ok_or_else(|| SignatureError::UnknownSymbol(f.clone()))?;
                if decl.args.len() != args.len() {
                    return Err(SignatureError::Arity { symbol: f.clone(), expected: decl.args.len(), found: args.len() });
                }
                if &decl.result != s {
                    return Err(SignatureError::SortMismatch { symbol: f.clone(), expected: decl.result.clone(), found: s.clone() });
                }
                for (a, want) in args.iter().zip(&decl.args) {
                    if a.sort() != want {
                        return Err(SignatureError::SortMismatch { symbol: f.clone(), expected: want.clone(), found: a.sort().clone() });
                    }
                    a.check(sig)?;
                }
                Ok(())
            }
        }
    }
}

impl LTerm {
    /// `names` lists enclosing binders, innermost last.
    pub(crate) fn write_with(&self, names: &[Sym], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LTerm::Var(x, _) => write!(f, "{x}"),
            LTerm::Bound(i, _) => match names.len().checked_sub(i + 1) {
                Some(k) => write!(f, "{}", names[k].base()),
                None => write!(f, "#{i}"),
            },
            LTerm::App(g, args, _) if args.is_empty() => write!(f, "{g}"),
            LTerm::App(g, args, _) => {
                write!(f, "{g}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    t.write_with(names, f)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(&[], f)
    }
}
