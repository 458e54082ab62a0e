use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock, Weak};

use crate::error::{Error, Result};
use crate::exactlin::{
    is_zero_vec, unit_vec, zero_vec, Field, Matrix, QuotientSpace, Scalar, Subspace,
};
use crate::quiver::Vertex;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

fn fresh_uid() -> u64 {
    NEXT_UID.fetch_add(1, Ordering::Relaxed)
}

/// A morphism `x → y` that generates the category together with the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub source: usize,
    pub target: usize,
    pub vector: Vec<Scalar>,
    pub name: String,
}

/// One term `generator ∘ factor` of a lift; `factor` lies in `Hom(x, generator.source)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub generator: usize,
    pub factor: Vec<Scalar>,
}

/// An element of `Hom(source, target)` in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub coeffs: Vec<Scalar>,
}

/// Per pair `(x, y)` and basis morphism, its expression through the generators.
pub type LiftTable = HashMap<(usize, usize), Vec<Vec<Lift>>>;

/// Raw data needed to assemble a category.
pub struct CategoryParts {
    pub field: Field,
    pub names: Vec<String>,
    pub coords: Vec<Option<Vertex>>,
    /// Row-major `n × n`.
    pub dims: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    /// Keys `(x, y, w)` with distinct entries; matrix rows index `Hom(x,w)`, column `g·dim(x,y) + f` is `g ∘ f`.
    pub table: HashMap<(usize, usize, usize), Matrix>,
    /// Known generators, or `None` to derive them from the radical square.
    pub generators: Option<Vec<Generator>>,
    /// Precomputed lifts; derived by solving when `None`.
    pub lifts: Option<LiftTable>,
    pub boundary_in: Vec<bool>,
}

/// A finite Hom-finite K-linear category with no directed cycles: every `End(x)` is `K` or `0`.
#[derive(Debug)]
pub struct PresentedCategory {
    uid: u64,
    field: Field,
    names: Vec<String>,
    index: HashMap<String, usize>,
    coords: Vec<Option<Vertex>>,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    table: HashMap<(usize, usize, usize), Matrix>,
    generators: Vec<Generator>,
    gens_in: Vec<Vec<usize>>,
    gens_out: Vec<Vec<usize>>,
    lifts: LiftTable,
    topo: Vec<usize>,
    boundary_in: Vec<bool>,
    origin: Option<Weak<PresentedCategory>>,
    opposite: OnceLock<Arc<PresentedCategory>>,
}

impl PresentedCategory {
    pub fn assemble(parts: CategoryParts) -> Result<PresentedCategory> {
        let n = parts.names.len();
        if parts.dims.len() != n * n || parts.labels.len() != n * n || parts.coords.len() != n {
            return Err(Error::DimensionMismatch(
                "category parts have inconsistent sizes".into(),
            ));
        }
        for x in 0..n {
            if parts.dims[x * n + x] > 1 {
                return Err(Error::Invalid(format!(
                    "End({}) has dimension {}; only K or 0 is supported",
                    parts.names[x],
                    parts.dims[x * n + x]
                )));
            }
        }
        let topo = topological_order(n, &parts.dims)?;
        let mut index = HashMap::new();
        for (i, name) in parts.names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate object `{name}`")));
            }
        }
        let mut cat = PresentedCategory {
            uid: fresh_uid(),
            field: parts.field,
            names: parts.names,
            index,
            coords: parts.coords,
            dims: parts.dims,
            labels: parts.labels,
            table: parts.table,
            generators: Vec::new(),
            gens_in: vec![Vec::new(); n],
            gens_out: vec![Vec::new(); n],
            lifts: HashMap::new(),
            topo,
            boundary_in: parts.boundary_in,
            origin: None,
            opposite: OnceLock::new(),
        };
        let generators = match parts.generators {
            Some(g) => g,
            None => cat.derive_generators(),
        };
        cat.set_generators(generators);
        cat.lifts = match parts.lifts {
            Some(l) => l,
            None => cat.derive_lifts()?,
        };
        Ok(cat)
    }

    fn set_generators(&mut self, generators: Vec<Generator>) {
        let n = self.len();
        self.gens_in = vec![Vec::new(); n];
        self.gens_out = vec![Vec::new(); n];
        for (k, g) in generators.iter().enumerate() {
            self.gens_in[g.target].push(k);
            self.gens_out[g.source].push(k);
        }
        self.generators = generators;
    }

    /// Basis of a complement of `rad²(x, y)` in `Hom(x, y)` for every `x ≠ y`.
    fn derive_generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                if x == y || self.dim(x, y) == 0 {
                    continue;
                }
                let sq = self.radical_square(x, y);
                let q = QuotientSpace::new(sq);
                for (k, &c) in q.complement().iter().enumerate() {
                    out.push(Generator {
                        source: x,
                        target: y,
                        vector: unit_vec(self.field, self.dim(x, y), c),
                        name: format!("{}->{}#{k}", self.names[x], self.names[y]),
                    });
                }
            }
        }
        out
    }

    fn radical_square(&self, x: usize, y: usize) -> Subspace {
        let mut cols: Vec<&Matrix> = Vec::new();
        for z in 0..self.len() {
            if z == x || z == y {
                continue;
            }
            if let Some(m) = self.table.get(&(x, z, y)) {
                cols.push(m);
            }
        }
        let d = self.dim(x, y);
        if cols.is_empty() {
            return Subspace::zero(self.field, d);
        }
        Subspace::column_space(&Matrix::hstack(self.field, d, &cols))
    }

    /// Expresses each basis morphism `x → y` (`x ≠ y`) as `Σ α ∘ h` over generators `α` into `y`.
    fn derive_lifts(&self) -> Result<LiftTable> {
        let mut lifts = HashMap::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                let d = self.dim(x, y);
                if x == y || d == 0 {
                    continue;
                }
                let mut blocks = Vec::new();
                let mut cols = Vec::new();
                for &g in &self.gens_in[y] {
                    let s = self.generators[g].source;
                    let ds = self.dim(x, s);
                    blocks.push((g, ds));
                    for h in 0..ds {
                        let hv = unit_vec(self.field, ds, h);
                        cols.push(self.compose_vec(x, s, y, &hv, &self.generators[g].vector));
                    }
                }
                let phi = Matrix::from_columns(self.field, d, &cols);
                let sol = phi
                    .solve_matrix(&Matrix::identity(self.field, d))?
                    .ok_or_else(|| {
                        Error::Invalid(format!(
                            "generators do not span Hom({}, {})",
                            self.names[x], self.names[y]
                        ))
                    })?;
                let mut per_basis = Vec::with_capacity(d);
                for f in 0..d {
                    let col = sol.column(f);
                    let mut terms = Vec::new();
                    let mut off = 0;
                    for &(g, ds) in &blocks {
                        let factor = col[off..off + ds].to_vec();
                        off += ds;
                        if !is_zero_vec(&factor) {
                            terms.push(Lift {
                                generator: g,
                                factor,
                            });
                        }
                    }
                    per_basis.push(terms);
                }
                lifts.insert((x, y), per_basis);
            }
        }
        Ok(lifts)
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.find(name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn coords(&self, x: usize) -> Option<Vertex> {
        self.coords[x]
    }

    pub fn find_vertex(&self, v: Vertex) -> Option<usize> {
        self.coords.iter().position(|c| *c == Some(v))
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.dims[x * self.len() + y]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn basis_labels(&self, x: usize, y: usize) -> &[String] {
        &self.labels[x * self.len() + y]
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn is_boundary(&self, x: usize) -> bool {
        self.boundary_in[x]
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary_in.iter().any(|b| *b)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn gens_in(&self, y: usize) -> &[usize] {
        &self.gens_in[y]
    }

    pub fn gens_out(&self, x: usize) -> &[usize] {
        &self.gens_out[x]
    }

    /// Lifts of the basis of `Hom(x, y)`, `x ≠ y`.
    pub fn lifts(&self, x: usize, y: usize) -> &[Vec<Lift>] {
        self.lifts.get(&(x, y)).map_or(&[], Vec::as_slice)
    }

    pub fn table(&self, x: usize, y: usize, w: usize) -> Option<&Matrix> {
        self.table.get(&(x, y, w))
    }

    pub fn identity(&self, x: usize) -> Option<Vec<Scalar>> {
        (self.dim(x, x) == 1).then(|| vec![self.field.one()])
    }

    /// `g ∘ f` for `f ∈ Hom(x, y)`, `g ∈ Hom(y, w)`.
    pub fn compose_vec(
        &self,
        x: usize,
        y: usize,
        w: usize,
        f: &[Scalar],
        g: &[Scalar],
    ) -> Vec<Scalar> {
        debug_assert_eq!(f.len(), self.dim(x, y));
        debug_assert_eq!(g.len(), self.dim(y, w));
        let d = self.dim(x, w);
        if x == y {
            return match f.first() {
                Some(c) => g.iter().map(|v| v * c).collect(),
                None => zero_vec(self.field, d),
            };
        }
        if y == w {
            return match g.first() {
                Some(c) => f.iter().map(|v| v * c).collect(),
                None => zero_vec(self.field, d),
            };
        }
        let Some(m) = self.table.get(&(x, y, w)) else {
            return zero_vec(self.field, d);
        };
        let dxy = f.len();
        let mut out = zero_vec(self.field, d);
        for (gi, gc) in g.iter().enumerate() {
            if gc.is_zero() {
                continue;
            }
            for (fi, fc) in f.iter().enumerate() {
                if fc.is_zero() {
                    continue;
                }
                let c = gc * fc;
                let col = gi * dxy + fi;
                for (r, o) in out.iter_mut().enumerate() {
                    let v = m.get(r, col);
                    if !v.is_zero() {
                        *o = &*o + &(&c * v);
                    }
                }
            }
        }
        out
    }

    /// `g ∘ f`.
    pub fn compose(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        if f.target != g.source {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.names[f.source],
                self.names[f.target],
                self.names[g.source],
                self.names[g.target]
            )));
        }
        Ok(Morphism {
            source: f.source,
            target: g.target,
            coeffs: self.compose_vec(f.source, f.target, g.target, &f.coeffs, &g.coeffs),
        })
    }

    pub fn basis_morphism(&self, x: usize, y: usize, k: usize) -> Morphism {
        Morphism {
            source: x,
            target: y,
            coeffs: unit_vec(self.field, self.dim(x, y), k),
        }
    }

    /// Non-isomorphisms `x → y`; with `End(x) ∈ {0, K}` this is `Hom(x, y)` off the diagonal and `0` on it.
    pub fn radical(&self, x: usize, y: usize) -> Subspace {
        if x == y {
            Subspace::zero(self.field, self.dim(x, x))
        } else {
            Subspace::full(self.field, self.dim(x, y))
        }
    }

    /// Verifies `h ∘ (g ∘ f) = (h ∘ g) ∘ f` on every composable triple of basis morphisms.
    pub fn check_associativity(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                if x == y || self.dim(x, y) == 0 {
                    continue;
                }
                for z in 0..n {
                    if z == y || self.dim(y, z) == 0 {
                        continue;
                    }
                    for w in 0..n {
                        if w == z || self.dim(z, w) == 0 || self.dim(x, w) == 0 {
                            continue;
                        }
                        for a in 0..self.dim(x, y) {
                            let f = unit_vec(self.field, self.dim(x, y), a);
                            for b in 0..self.dim(y, z) {
                                let g = unit_vec(self.field, self.dim(y, z), b);
                                let gf = self.compose_vec(x, y, z, &f, &g);
                                for c in 0..self.dim(z, w) {
                                    let h = unit_vec(self.field, self.dim(z, w), c);
                                    let left = self.compose_vec(x, z, w, &gf, &h);
                                    let hg = self.compose_vec(y, z, w, &g, &h);
                                    let right = self.compose_vec(x, y, w, &f, &hg);
                                    if left != right {
                                        return Err(Error::Invalid(format!(
                                            "composition not associative at {} -> {} -> {} -> {}",
                                            self.names[x],
                                            self.names[y],
                                            self.names[z],
                                            self.names[w]
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The opposite category, cached; `opposite(opposite(c))` is `c` itself.
    pub fn opposite(self: &Arc<Self>) -> Arc<PresentedCategory> {
        if let Some(orig) = self.origin.as_ref().and_then(Weak::upgrade) {
            return orig;
        }
        self.opposite
            .get_or_init(|| {
                let mut op = self
                    .build_opposite()
                    .expect("opposite of a valid category is valid");
                op.origin = Some(Arc::downgrade(self));
                Arc::new(op)
            })
            .clone()
    }

    fn build_opposite(&self) -> Result<PresentedCategory> {
        let n = self.len();
        let mut dims = vec![0; n * n];
        let mut labels = vec![Vec::new(); n * n];
        for x in 0..n {
            for y in 0..n {
                dims[x * n + y] = self.dim(y, x);
                labels[x * n + y] = self
                    .basis_labels(y, x)
                    .iter()
                    .map(|l| format!("{l}^op"))
                    .collect();
            }
        }
        let mut table = HashMap::new();
        for (&(w, y, x), m) in &self.table {
            // g ∘op f with f ∈ Hom(y,x) and g ∈ Hom(w,y) is the original f ∘ g, stored at (w, y, x)
            // under column f·dim(w,y) + g; the opposite wants column g·dim(y,x) + f.
            let dyx = self.dim(y, x);
            let dwy = self.dim(w, y);
            let perm: Vec<usize> = (0..dwy * dyx)
                .map(|c| {
                    let (g, f) = (c / dyx, c % dyx);
                    f * dwy + g
                })
                .collect();
            table.insert((x, y, w), m.select_cols(&perm));
        }
        let generators = self
            .generators
            .iter()
            .map(|g| Generator {
                source: g.target,
                target: g.source,
                vector: g.vector.clone(),
                name: format!("{}^op", g.name),
            })
            .collect();
        let mut op = PresentedCategory::assemble(CategoryParts {
            field: self.field,
            names: self.names.clone(),
            coords: self.coords.clone(),
            dims,
            labels,
            table,
            generators: Some(generators),
            lifts: None,
            boundary_in: vec![false; n],
        })?;
        op.origin = None;
        Ok(op)
    }

    /// Full subcategory on `objects` (in the given order).
    pub fn full_subcategory(&self, objects: &[usize]) -> Result<PresentedCategory> {
        let n = self.len();
        let m = objects.len();
        if objects.iter().any(|&o| o >= n) || objects.iter().collect::<BTreeSet<_>>().len() != m {
            return Err(Error::Invalid(
                "full subcategory objects must be distinct and known".into(),
            ));
        }
        let mut dims = vec![0; m * m];
        let mut labels = vec![Vec::new(); m * m];
        for (i, &x) in objects.iter().enumerate() {
            for (j, &y) in objects.iter().enumerate() {
                dims[i * m + j] = self.dim(x, y);
                labels[i * m + j] = self.basis_labels(x, y).to_vec();
            }
        }
        let mut table = HashMap::new();
        for (i, &x) in objects.iter().enumerate() {
            for (j, &y) in objects.iter().enumerate() {
                for (k, &w) in objects.iter().enumerate() {
                    if let Some(t) = self.table.get(&(x, y, w)) {
                        table.insert((i, j, k), t.clone());
                    }
                }
            }
        }
        PresentedCategory::assemble(CategoryParts {
            field: self.field,
            names: objects.iter().map(|&o| self.names[o].clone()).collect(),
            coords: objects.iter().map(|&o| self.coords[o]).collect(),
            dims,
            labels,
            table,
            generators: None,
            lifts: None,
            boundary_in: objects.iter().map(|&o| self.boundary_in[o]).collect(),
        })
    }

    /// `C / I` in normal form: each `Hom(x, y)/I(x, y)` keeps the basis morphisms off the pivots of `I(x, y)`.
    pub fn quotient(&self, ideal: &IdealTable) -> Result<PresentedCategory> {
        ideal.check_category(self)?;
        let n = self.len();
        let quot: Vec<QuotientSpace> = (0..n * n)
            .map(|k| QuotientSpace::new(ideal.spans[k].clone()))
            .collect();
        let q = |x: usize, y: usize| &quot[x * n + y];
        let mut dims = vec![0; n * n];
        let mut labels = vec![Vec::new(); n * n];
        for x in 0..n {
            for y in 0..n {
                let qs = q(x, y);
                dims[x * n + y] = qs.dim();
                labels[x * n + y] = qs
                    .complement()
                    .iter()
                    .map(|&c| self.basis_labels(x, y)[c].clone())
                    .collect();
            }
        }
        let mut table = HashMap::new();
        for (&(x, y, w), m) in &self.table {
            let (qxy, qyw, qxw) = (q(x, y), q(y, w), q(x, w));
            if qxy.dim() == 0 || qyw.dim() == 0 || qxw.dim() == 0 {
                continue;
            }
            let dxy = self.dim(x, y);
            let cols: Vec<usize> = qyw
                .complement()
                .iter()
                .flat_map(|&g| qxy.complement().iter().map(move |&f| g * dxy + f))
                .collect();
            let sel = m.select_cols(&cols);
            let projected = &qxw.projection_matrix() * &sel;
            if !projected.is_zero() {
                table.insert((x, y, w), projected);
            }
        }
        let mut generators = Vec::new();
        let mut gen_map = HashMap::new();
        for (k, g) in self.generators.iter().enumerate() {
            let qs = q(g.source, g.target);
            if qs.dim() == 0 {
                continue;
            }
            gen_map.insert(k, generators.len());
            generators.push(Generator {
                source: g.source,
                target: g.target,
                vector: qs.project(&g.vector),
                name: g.name.clone(),
            });
        }
        let mut lifts = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                let qs = q(x, y);
                if x == y || qs.dim() == 0 {
                    continue;
                }
                let source_lifts = self.lifts(x, y);
                let per_basis = qs
                    .complement()
                    .iter()
                    .map(|&c| {
                        source_lifts[c]
                            .iter()
                            .filter_map(|l| {
                                let &ng = gen_map.get(&l.generator)?;
                                let s = self.generators[l.generator].source;
                                let factor = q(x, s).project(&l.factor);
                                (!is_zero_vec(&factor)).then_some(Lift {
                                    generator: ng,
                                    factor,
                                })
                            })
                            .collect()
                    })
                    .collect();
                lifts.insert((x, y), per_basis);
            }
        }
        PresentedCategory::assemble(CategoryParts {
            field: self.field,
            names: self.names.clone(),
            coords: self.coords.clone(),
            dims,
            labels,
            table,
            generators: Some(generators),
            lifts: Some(lifts),
            boundary_in: self.boundary_in.clone(),
        })
    }

    fn span_table(&self, spans: Vec<Subspace>, generators: Option<BTreeSet<usize>>) -> IdealTable {
        IdealTable {
            category: self.uid,
            n: self.len(),
            spans,
            generators,
        }
    }

    pub fn zero_ideal(&self) -> IdealTable {
        let n = self.len();
        let spans = (0..n * n)
            .map(|k| Subspace::zero(self.field, self.dims[k]))
            .collect();
        self.span_table(spans, Some(BTreeSet::new()))
    }

    pub fn full_ideal(&self) -> IdealTable {
        let n = self.len();
        let spans = (0..n * n)
            .map(|k| Subspace::full(self.field, self.dims[k]))
            .collect();
        self.span_table(spans, None)
    }

    pub fn radical_ideal(&self) -> IdealTable {
        let n = self.len();
        let spans = (0..n * n).map(|k| self.radical(k / n, k % n)).collect();
        self.span_table(spans, None)
    }

    /// `I_B`: morphisms factoring through an object of `objects`.
    pub fn ideal_table(&self, objects: &BTreeSet<usize>) -> IdealTable {
        let n = self.len();
        let mut spans = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let d = self.dim(x, y);
                let through_end = |v: usize| objects.contains(&v) && self.dim(v, v) == 1;
                if d == 0 {
                    spans.push(Subspace::zero(self.field, 0));
                } else if through_end(x) || through_end(y) {
                    spans.push(Subspace::full(self.field, d));
                } else {
                    let mats: Vec<&Matrix> = objects
                        .iter()
                        .filter(|&&b| b != x && b != y)
                        .filter_map(|&b| self.table.get(&(x, b, y)))
                        .collect();
                    spans.push(if mats.is_empty() {
                        Subspace::zero(self.field, d)
                    } else {
                        Subspace::column_space(&Matrix::hstack(self.field, d, &mats))
                    });
                }
            }
        }
        self.span_table(spans, Some(objects.clone()))
    }

    /// Span of all `g ∘ h` with `h ∈ first`, `g ∈ second`.
    pub fn ideal_product(&self, first: &IdealTable, second: &IdealTable) -> Result<IdealTable> {
        first.check_category(self)?;
        second.check_category(self)?;
        let n = self.len();
        let mut spans = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let d = self.dim(x, y);
                if d == 0 {
                    spans.push(Subspace::zero(self.field, 0));
                    continue;
                }
                let mut blocks: Vec<Matrix> = Vec::new();
                if first.span(x, x).dim() > 0 {
                    blocks.push(second.span(x, y).basis_matrix().transpose());
                }
                if second.span(y, y).dim() > 0 {
                    blocks.push(first.span(x, y).basis_matrix().transpose());
                }
                for z in 0..n {
                    if z == x || z == y {
                        continue;
                    }
                    let Some(m) = self.table.get(&(x, z, y)) else {
                        continue;
                    };
                    let (a, b) = (first.span(x, z), second.span(z, y));
                    if a.dim() == 0 || b.dim() == 0 {
                        continue;
                    }
                    let pairs = b
                        .basis_matrix()
                        .transpose()
                        .kron(&a.basis_matrix().transpose());
                    blocks.push(m * &pairs);
                }
                let refs: Vec<&Matrix> = blocks.iter().collect();
                spans.push(if refs.is_empty() {
                    Subspace::zero(self.field, d)
                } else {
                    Subspace::column_space(&Matrix::hstack(self.field, d, &refs))
                });
            }
        }
        Ok(self.span_table(spans, None))
    }

    /// Checks closure under composition with every generator on both sides.
    pub fn is_two_sided(&self, ideal: &IdealTable) -> bool {
        let n = self.len();
        for g in &self.generators {
            let (s, t) = (g.source, g.target);
            for x in 0..n {
                for f in ideal.span(x, s).basis() {
                    let v = self.compose_vec(x, s, t, &f, &g.vector);
                    if !ideal.span(x, t).contains(&v) {
                        return false;
                    }
                }
            }
            for y in 0..n {
                for f in ideal.span(t, y).basis() {
                    let v = self.compose_vec(s, t, y, &g.vector, &f);
                    if !ideal.span(s, y).contains(&v) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn topological_order(n: usize, dims: &[usize]) -> Result<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for x in 0..n {
        for y in 0..n {
            if x != y && dims[x * n + y] > 0 {
                indeg[y] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = ready.iter().next() {
        ready.remove(&v);
        order.push(v);
        for y in 0..n {
            if y != v && dims[v * n + y] > 0 {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
    }
    if order.len() != n {
        return Err(Error::Invalid(
            "category has a directed cycle of nonzero morphisms".into(),
        ));
    }
    Ok(order)
}

/// A two-sided ideal given by a subspace of every `Hom(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealTable {
    category: u64,
    n: usize,
    spans: Vec<Subspace>,
    generators: Option<BTreeSet<usize>>,
}

impl IdealTable {
    fn check_category(&self, c: &PresentedCategory) -> Result<()> {
        if self.category != c.uid {
            return Err(Error::Precondition(
                "ideal belongs to a different category".into(),
            ));
        }
        Ok(())
    }

    pub fn category_uid(&self) -> u64 {
        self.category
    }

    pub fn span(&self, x: usize, y: usize) -> &Subspace {
        &self.spans[x * self.n + y]
    }

    /// Object set `B` when this is `I_B`.
    pub fn generator_objects(&self) -> Option<&BTreeSet<usize>> {
        self.generators.as_ref()
    }

    pub fn total_dim(&self) -> usize {
        self.spans.iter().map(Subspace::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.spans.iter().all(|s| s.dim() == 0)
    }

    pub fn same_spans(&self, other: &IdealTable) -> bool {
        self.spans == other.spans
    }

    pub fn contains(&self, other: &IdealTable) -> bool {
        self.spans
            .iter()
            .zip(&other.spans)
            .all(|(a, b)| a.contains_subspace(b))
    }

    pub fn sum(&self, other: &IdealTable) -> IdealTable {
        IdealTable {
            category: self.category,
            n: self.n,
            spans: self
                .spans
                .iter()
                .zip(&other.spans)
                .map(|(a, b)| a.sum(b))
                .collect(),
            generators: None,
        }
    }

    /// First pair where this ideal and `other` differ.
    pub fn first_difference(&self, other: &IdealTable) -> Option<(usize, usize)> {
        (0..self.n * self.n)
            .find(|&k| self.spans[k] != other.spans[k])
            .map(|k| (k / self.n, k % self.n))
    }

    /// Builds a table from explicit spans; used by constructions that know the ideal directly.
    pub fn from_spans(c: &PresentedCategory, spans: Vec<Subspace>) -> Result<IdealTable> {
        let n = c.len();
        if spans.len() != n * n
            || spans
                .iter()
                .enumerate()
                .any(|(k, s)| s.ambient() != c.dims[k])
        {
            return Err(Error::DimensionMismatch(
                "ideal spans do not match the Hom dimensions".into(),
            ));
        }
        Ok(IdealTable {
            category: c.uid,
            n,
            spans,
            generators: None,
        })
    }

    /// Image of the ideal in a quotient category built by [`PresentedCategory::quotient`].
    pub fn project_to(
        &self,
        base: &PresentedCategory,
        killed: &IdealTable,
        quotient: &PresentedCategory,
    ) -> Result<IdealTable> {
        self.check_category(base)?;
        killed.check_category(base)?;
        let n = self.n;
        let spans = (0..n * n)
            .map(|k| {
                let q = QuotientSpace::new(killed.spans[k].clone());
                let vecs: Vec<Vec<Scalar>> =
                    self.spans[k].basis().iter().map(|v| q.project(v)).collect();
                Subspace::span(base.field, q.dim(), &vecs)
            })
            .collect();
        Ok(IdealTable {
            category: quotient.uid,
            n,
            spans,
            generators: None,
        })
    }
}
