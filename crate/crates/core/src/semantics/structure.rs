use std::collections::{BTreeMap, HashMap};

use super::{ArrowId, FinCategory, Fragment, ObjId, SemanticsError, TermUniverse};
use crate::syntax::{Formula, LTerm, LambdaSignature, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductW {
    pub obj: ObjId,
    pub p1: ArrowId,
    pub p2: ArrowId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoproductW {
    pub obj: ObjId,
    pub i1: ArrowId,
    pub i2: ArrowId,
}

/// `obj` is the exponential `B^A`; `ev : obj × A → B`, where the product is
/// the one stored for `(obj, A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentialW {
    pub obj: ObjId,
    pub ev: ArrowId,
}

/// A finite Σ-structure: a category, the map `M` on a fragment, the
/// universal-construction witnesses (keyed by objects), the quantifier cones
/// and co-cones (keyed by formulas, indexed by universe terms) and `M_Ax`.
///
/// With `uniform` set, every formula denotes that object and every cone leg
/// and axiom is its identity; this is how the one-object model interprets
/// arbitrary types without a fragment.
#[derive(Clone, Debug)]
pub struct LdStructure {
    pub sig: LambdaSignature,
    pub cat: FinCategory,
    pub universe: TermUniverse,
    pub m: HashMap<Formula, ObjId>,
    pub uniform: Option<ObjId>,
    pub terminal: ObjId,
    pub initial: Option<ObjId>,
    pub products: HashMap<(ObjId, ObjId), ProductW>,
    pub coproducts: HashMap<(ObjId, ObjId), CoproductW>,
    /// Keyed by `(A, B)` for `B^A`.
    pub exponentials: HashMap<(ObjId, ObjId), ExponentialW>,
    pub cones: HashMap<Formula, BTreeMap<LTerm, ArrowId>>,
    pub cocones: HashMap<Formula, BTreeMap<LTerm, ArrowId>>,
    pub axioms: HashMap<Sym, ArrowId>,
}

/// Limits that keep the exhaustive checks exhaustive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub objects: usize,
    pub arrows: usize,
    pub universe: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { objects: 12, arrows: 200, universe: 6 }
    }
}

impl LdStructure {
    pub fn fragment(&self) -> Fragment {
        Fragment::closure(self.m.keys().cloned(), &self.universe)
    }

    pub fn obj_name(&self, o: ObjId) -> &str {
        &self.cat.objects()[o]
    }

    /// `M(A)` for a formula of the fragment.
    pub fn obj(&self, f: &Formula) -> Result<ObjId, SemanticsError> {
        if let Some(o) = self.uniform {
            return Ok(o);
        }
        self.m.get(f).copied().ok_or_else(|| SemanticsError::OutsideFragment(f.clone()))
    }

    pub fn product(&self, a: ObjId, b: ObjId) -> Result<ProductW, SemanticsError> {
        self.products.get(&(a, b)).copied().ok_or_else(|| self.no_witness("product", a, b))
    }

    pub fn coproduct(&self, a: ObjId, b: ObjId) -> Result<CoproductW, SemanticsError> {
        self.coproducts.get(&(a, b)).copied().ok_or_else(|| self.no_witness("coproduct", a, b))
    }

    pub fn exponential(&self, a: ObjId, b: ObjId) -> Result<ExponentialW, SemanticsError> {
        self.exponentials.get(&(a, b)).copied().ok_or_else(|| self.no_witness("exponential", a, b))
    }

    pub fn initial(&self) -> Result<ObjId, SemanticsError> {
        self.initial.ok_or(SemanticsError::NoInitial)
    }

    fn no_witness(&self, kind: &'static str, a: ObjId, b: ObjId) -> SemanticsError {
        SemanticsError::NoWitness(kind, self.obj_name(a).to_string(), self.obj_name(b).to_string())
    }

    /// The `t`-th leg of the cone of a `∀` formula (or co-cone of an `∃` one).
    pub fn leg(&self, quantified: &Formula, t: &LTerm) -> Result<ArrowId, SemanticsError> {
        if let Some(o) = self.uniform {
            return Ok(self.cat.identity(o));
        }
        if !self.universe.contains(t) {
            return Err(SemanticsError::OutsideUniverse(t.clone()));
        }
        let table = match quantified {
            Formula::Forall(..) => &self.cones,
            Formula::Exists(..) => &self.cocones,
            _ => return Err(SemanticsError::NoLeg(quantified.clone(), t.clone())),
        };
        table.get(quantified).and_then(|legs| legs.get(t)).copied().ok_or_else(|| SemanticsError::NoLeg(quantified.clone(), t.clone()))
    }

    pub fn axiom(&self, a: &Sym) -> Result<ArrowId, SemanticsError> {
        if let Some(o) = self.uniform {
            return Ok(self.cat.identity(o));
        }
        self.axioms.get(a).copied().ok_or_else(|| SemanticsError::UnknownAxiom(a.clone()))
    }

    pub fn compose(&self, g: ArrowId, f: ArrowId) -> Result<ArrowId, SemanticsError> {
        self.cat
            .compose(g, f)
            .ok_or_else(|| SemanticsError::Composite(self.cat.name(g).to_string(), self.cat.name(f).to_string()))
    }

    pub fn compose_all(&self, chain: &[ArrowId]) -> Result<ArrowId, SemanticsError> {
        let (&last, rest) = chain.split_last().expect("nonempty chain");
        rest.iter().rev().try_fold(last, |acc, &g| self.compose(g, acc))
    }

    /// The unique arrow `dom → cod` satisfying `pred`.
    pub fn unique(
        &self,
        dom: ObjId,
        cod: ObjId,
        what: &str,
        pred: impl Fn(ArrowId) -> bool,
    ) -> Result<ArrowId, SemanticsError> {
        let mut found = self.cat.hom(dom, cod).iter().copied().filter(|&h| pred(h));
        let describe = || format!("{what} from {} to {}", self.obj_name(dom), self.obj_name(cod));
        let h = found.next().ok_or_else(|| SemanticsError::NoMediator(describe()))?;
        if found.next().is_some() {
            return Err(SemanticsError::NotUnique(describe()));
        }
        Ok(h)
    }

    pub fn to_terminal(&self, x: ObjId) -> Result<ArrowId, SemanticsError> {
        self.unique(x, self.terminal, "arrow to the terminal object", |_| true)
    }

    pub fn from_initial(&self, x: ObjId) -> Result<ArrowId, SemanticsError> {
        self.unique(self.initial()?, x, "arrow from the initial object", |_| true)
    }

    /// `(f, g) : X → A × B` for the stored product of `cod f` and `cod g`.
    pub fn pairing(&self, f: ArrowId, g: ArrowId) -> Result<ArrowId, SemanticsError> {
        let w = self.product(self.cat.cod(f), self.cat.cod(g))?;
        self.pair_into(w, f, g)
    }

    pub fn pair_into(&self, w: ProductW, f: ArrowId, g: ArrowId) -> Result<ArrowId, SemanticsError> {
        let c = &self.cat;
        self.unique(c.dom(f), w.obj, "pairing", |h| c.compose(w.p1, h) == Some(f) && c.compose(w.p2, h) == Some(g))
    }

    /// `[f, g] : A + B → X` for the stored coproduct of `dom f` and `dom g`.
    pub fn copairing(&self, f: ArrowId, g: ArrowId) -> Result<ArrowId, SemanticsError> {
        let c = &self.cat;
        let w = self.coproduct(c.dom(f), c.dom(g))?;
        self.unique(w.obj, c.cod(f), "copairing", |h| c.compose(h, w.i1) == Some(f) && c.compose(h, w.i2) == Some(g))
    }

    /// `f × g : A × B → C × D` between stored products.
    pub fn times(&self, f: ArrowId, g: ArrowId) -> Result<ArrowId, SemanticsError> {
        let c = &self.cat;
        let src = self.product(c.dom(f), c.dom(g))?;
        let a = self.compose(f, src.p1)?;
        let b = self.compose(g, src.p2)?;
        let dst = self.product(c.cod(f), c.cod(g))?;
        self.pair_into(dst, a, b)
    }

    /// The exponential transpose `X → B^A` of `f : X × A → B`.
    pub fn transpose(&self, f: ArrowId, x: ObjId, a: ObjId) -> Result<ArrowId, SemanticsError> {
        let b = self.cat.cod(f);
        let e = self.exponential(a, b)?;
        let src = self.product(x, a)?;
        if src.obj != self.cat.dom(f) {
            return Err(SemanticsError::Composite(self.cat.name(f).to_string(), "transpose".into()));
        }
        let dst = self.product(e.obj, a)?;
        let one_a = self.cat.identity(a);
        let mut candidates = Vec::new();
        for &h in self.cat.hom(x, e.obj) {
            let hp = self.compose(h, src.p1)?;
            let a2 = self.compose(one_a, src.p2)?;
            let h1 = self.pair_into(dst, hp, a2)?;
            if self.cat.compose(e.ev, h1) == Some(f) {
                candidates.push(h);
            }
        }
        let what = || format!("transpose from {} to {}", self.obj_name(x), self.obj_name(e.obj));
        match candidates.as_slice() {
            [h] => Ok(*h),
            [] => Err(SemanticsError::NoMediator(what())),
            _ => Err(SemanticsError::NotUnique(what())),
        }
    }

    pub fn inverse(&self, f: ArrowId) -> Result<ArrowId, SemanticsError> {
        let c = &self.cat;
        let (a, b) = (c.dom(f), c.cod(f));
        self.unique(b, a, "inverse", |g| {
            c.compose(g, f) == Some(c.identity(a)) && c.compose(f, g) == Some(c.identity(b))
        })
    }

    /// `Δ = [1 × ι₁, 1 × ι₂] : (A×B)+(A×C) → A×(B+C)`.
    pub fn delta(&self, a: ObjId, b: ObjId, cc: ObjId) -> Result<ArrowId, SemanticsError> {
        let bc = self.coproduct(b, cc)?;
        let left = self.times(self.cat.identity(a), bc.i1)?;
        let right = self.times(self.cat.identity(a), bc.i2)?;
        self.copairing(left, right)
    }
}

/// `A₁ × (A₂ × (⋯ × Aₙ))`, `1` when empty.
pub fn pack_formula(types: &[Formula]) -> Formula {
    match types {
        [] => Formula::One,
        [a] => a.clone(),
        [a, rest @ ..] => Formula::prod(a.clone(), pack_formula(rest)),
    }
}
