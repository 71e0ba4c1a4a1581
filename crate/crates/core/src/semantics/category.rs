use std::collections::HashMap;

use thiserror::Error;

pub type ObjId = usize;
pub type ArrowId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("arrow `{0}` has an endpoint outside the object list")]
    Endpoint(String),
    #[error("object `{0}` has no identity, or its identity is not an endomorphism on it")]
    Identity(String),
    #[error("composition table mentions an unknown arrow id {0}")]
    UnknownArrow(usize),
    #[error("composite `{g}` ∘ `{f}` is missing from the table")]
    Missing { g: String, f: String },
    #[error("table composes `{g}` ∘ `{f}`, which are not composable")]
    NotComposable { g: String, f: String },
    #[error("composite `{g}` ∘ `{f}` = `{h}` has the wrong domain or codomain")]
    Endpoints { g: String, f: String, h: String },
    #[error("composite `{g}` ∘ `{f}` is given twice with different results")]
    Conflict { g: String, f: String },
    #[error("unit law fails for `{0}`")]
    Unit(String),
    #[error("associativity fails: (`{h}` ∘ `{g}`) ∘ `{f}` differs from `{h}` ∘ (`{g}` ∘ `{f}`)")]
    Assoc { h: String, g: String, f: String },
}

/// A finite category given by explicit tables. Arrow equality is identity of
/// ids; nothing is ever identified up to isomorphism.
#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<ArrowDecl>,
    identity: Vec<ArrowId>,
    compose: HashMap<(ArrowId, ArrowId), ArrowId>,
    hom: Vec<Vec<Vec<ArrowId>>>,
}

impl FinCategory {
    /// Builds the tables, checking only that ids and endpoints are in range.
    /// The category laws are the business of [`check_category`].
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<ArrowDecl>,
        identity: Vec<ArrowId>,
        triples: Vec<(ArrowId, ArrowId, ArrowId)>,
    ) -> Result<Self, CategoryError> {
        let n = objects.len();
        for a in &arrows {
            if a.dom >= n || a.cod >= n {
                return Err(CategoryError::Endpoint(a.name.clone()));
            }
        }
        if identity.len() != n {
            let missing = objects.get(identity.len()).cloned().unwrap_or_default();
            return Err(CategoryError::Identity(missing));
        }
        for (o, &i) in identity.iter().enumerate() {
            match arrows.get(i) {
                Some(a) if a.dom == o && a.cod == o => {}
                _ => return Err(CategoryError::Identity(objects[o].clone())),
            }
        }
        let mut compose = HashMap::new();
        for (g, f, h) in triples {
            for id in [g, f, h] {
                if id >= arrows.len() {
                    return Err(CategoryError::UnknownArrow(id));
                }
            }
            if let Some(&old) = compose.get(&(g, f)) {
                if old != h {
                    return Err(CategoryError::Conflict { g: arrows[g].name.clone(), f: arrows[f].name.clone() });
                }
            }
            compose.insert((g, f), h);
        }
        let mut hom = vec![vec![Vec::new(); n]; n];
        for (i, a) in arrows.iter().enumerate() {
            hom[a.dom][a.cod].push(i);
        }
        Ok(FinCategory { objects, arrows, identity, compose, hom })
    }

    /// The preorder category on `names` with an arrow `i → j` iff `leq(i, j)`.
    /// `leq` must be reflexive and transitive.
    pub fn preorder(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Self {
        let n = names.len();
        let mut arrows = Vec::new();
        let mut id_of = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    id_of.insert((i, j), arrows.len());
                    arrows.push(ArrowDecl { name: format!("{}≤{}", names[i], names[j]), dom: i, cod: j });
                }
            }
        }
        let identity = (0..n).map(|i| id_of[&(i, i)]).collect();
        let mut triples = Vec::new();
        for (&(i, j), &f) in &id_of {
            for k in 0..n {
                if let Some(&g) = id_of.get(&(j, k)) {
                    triples.push((g, f, id_of[&(i, k)]));
                }
            }
        }
        FinCategory::new(names, arrows, identity, triples).expect("preorder tables are well formed")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[ArrowDecl] {
        &self.arrows
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn identity(&self, o: ObjId) -> ArrowId {
        self.identity[o]
    }

    pub fn dom(&self, f: ArrowId) -> ObjId {
        self.arrows[f].dom
    }

    pub fn cod(&self, f: ArrowId) -> ObjId {
        self.arrows[f].cod
    }

    pub fn name(&self, f: ArrowId) -> &str {
        &self.arrows[f].name
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[ArrowId] {
        &self.hom[a][b]
    }

    /// `g ∘ f`, if the pair is composable and the table has it.
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        if self.cod(f) != self.dom(g) {
            return None;
        }
        self.compose.get(&(g, f)).copied()
    }

    /// Composition of a chain, rightmost first applied: `[h, g, f]` is `h ∘ g ∘ f`.
    pub fn compose_all(&self, chain: &[ArrowId]) -> Option<ArrowId> {
        let (&last, rest) = chain.split_last()?;
        rest.iter().rev().try_fold(last, |acc, &g| self.compose(g, acc))
    }

    pub fn object_named(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_named(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// At most one arrow in every hom-set.
    pub fn is_thin(&self) -> bool {
        self.hom.iter().flatten().all(|h| h.len() <= 1)
    }

    /// The composition table as `(g, f, g∘f)` triples in a stable order.
    pub fn triples(&self) -> Vec<(ArrowId, ArrowId, ArrowId)> {
        let mut out: Vec<_> = self.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        out.sort_unstable();
        out
    }
}

/// Exhaustive check of totality, endpoints, unit and associativity laws.
/// Reports the first violation found.
pub fn check_category(c: &FinCategory) -> Result<(), CategoryError> {
    let name = |f: ArrowId| c.arrows[f].name.clone();
    for (&(g, f), &h) in &c.compose {
        if c.cod(f) != c.dom(g) {
            return Err(CategoryError::NotComposable { g: name(g), f: name(f) });
        }
        if c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g) {
            return Err(CategoryError::Endpoints { g: name(g), f: name(f), h: name(h) });
        }
    }
    for f in 0..c.arrows.len() {
        for &g in c.hom[c.cod(f)].iter().flatten() {
            if c.compose(g, f).is_none() {
                return Err(CategoryError::Missing { g: name(g), f: name(f) });
            }
        }
    }
    for f in 0..c.arrows.len() {
        let left = c.compose(c.identity(c.cod(f)), f);
        let right = c.compose(f, c.identity(c.dom(f)));
        if left != Some(f) || right != Some(f) {
            return Err(CategoryError::Unit(name(f)));
        }
    }
    for f in 0..c.arrows.len() {
        for &g in c.hom[c.cod(f)].iter().flatten() {
            let gf = c.compose(g, f).expect("checked total");
            for &h in c.hom[c.cod(g)].iter().flatten() {
                let hg = c.compose(h, g).expect("checked total");
                if c.compose(hg, f) != c.compose(h, gf) {
                    return Err(CategoryError::Assoc { h: name(h), g: name(g), f: name(f) });
                }
            }
        }
    }
    Ok(())
}
