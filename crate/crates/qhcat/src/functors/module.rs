use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exactlin::{is_zero_vec, unit_vec, Field, Matrix, QuotientSpace, Scalar, Subspace};
use crate::meshcat::{IdealTable, PresentedCategory};

/// A pointwise finite-dimensional contravariant functor `C → mod K`.
///
/// Stored by one matrix `M(α): M(t) → M(s)` per generator `α: s → t`; the action of every basis
/// morphism is derived from the category's lifts on first use. A covariant functor on `C` is a
/// `FunctorModule` over `C^op`.
#[derive(Clone)]
pub struct FunctorModule {
    inner: Arc<Inner>,
}

struct Inner {
    category: Arc<PresentedCategory>,
    dims: Vec<usize>,
    gen_maps: Vec<Matrix>,
    actions: OnceLock<HashMap<(usize, usize), Vec<Matrix>>>,
}

impl fmt::Debug for FunctorModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctorModule")
            .field("category", &self.inner.category.uid())
            .field("dims", &self.inner.dims)
            .finish()
    }
}

impl FunctorModule {
    /// Validates shapes and functoriality.
    pub fn new(
        category: Arc<PresentedCategory>,
        dims: Vec<usize>,
        gen_maps: Vec<Matrix>,
    ) -> Result<Self> {
        let m = FunctorModule::from_parts(category, dims, gen_maps)?;
        m.check_functorial()?;
        Ok(m)
    }

    /// Validates shapes only; for constructions whose functoriality holds by design.
    pub(crate) fn from_parts(
        category: Arc<PresentedCategory>,
        dims: Vec<usize>,
        gen_maps: Vec<Matrix>,
    ) -> Result<Self> {
        if dims.len() != category.len() || gen_maps.len() != category.generators().len() {
            return Err(Error::DimensionMismatch(
                "module data does not match the category".into(),
            ));
        }
        for (x, &d) in dims.iter().enumerate() {
            if d > 0 && category.dim(x, x) == 0 {
                return Err(Error::NotFunctorial(format!(
                    "object `{}` is zero in the category but carries a nonzero space",
                    category.name(x)
                )));
            }
        }
        for (g, m) in category.generators().iter().zip(&gen_maps) {
            if m.nrows() != dims[g.source] || m.ncols() != dims[g.target] {
                return Err(Error::DimensionMismatch(format!(
                    "generator `{}` has the wrong shape",
                    g.name
                )));
            }
        }
        Ok(FunctorModule {
            inner: Arc::new(Inner {
                category,
                dims,
                gen_maps,
                actions: OnceLock::new(),
            }),
        })
    }

    pub fn zero(category: Arc<PresentedCategory>) -> Self {
        let dims = vec![0; category.len()];
        let gen_maps = category
            .generators()
            .iter()
            .map(|_| Matrix::zeros(category.field(), 0, 0))
            .collect();
        FunctorModule::from_parts(category, dims, gen_maps).expect("zero module")
    }

    /// `C(−, x)`, acting by precomposition.
    pub fn representable(category: &Arc<PresentedCategory>, x: usize) -> Self {
        let c = category;
        let dims: Vec<usize> = (0..c.len()).map(|y| c.dim(y, x)).collect();
        let gen_maps = c
            .generators()
            .iter()
            .map(|g| {
                let (s, t) = (g.source, g.target);
                let cols: Vec<Vec<Scalar>> = (0..dims[t])
                    .map(|h| c.compose_vec(s, t, x, &g.vector, &unit_vec(c.field(), dims[t], h)))
                    .collect();
                Matrix::from_columns(c.field(), dims[s], &cols)
            })
            .collect();
        FunctorModule::from_parts(category.clone(), dims, gen_maps).expect("representable")
    }

    /// The covariant representable `C(x, −)`, as a module over `C^op`.
    pub fn corepresentable(category: &Arc<PresentedCategory>, x: usize) -> Self {
        FunctorModule::representable(&category.opposite(), x)
    }

    pub fn category(&self) -> &Arc<PresentedCategory> {
        &self.inner.category
    }

    pub fn field(&self) -> Field {
        self.inner.category.field()
    }

    pub fn dim(&self, x: usize) -> usize {
        self.inner.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.inner.dims
    }

    pub fn total_dim(&self) -> usize {
        self.inner.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.inner.dims.len())
            .filter(|&x| self.inner.dims[x] > 0)
            .collect()
    }

    pub fn gen_map(&self, g: usize) -> &Matrix {
        &self.inner.gen_maps[g]
    }

    pub fn gen_maps(&self) -> &[Matrix] {
        &self.inner.gen_maps
    }

    pub fn same_category(&self, other: &FunctorModule) -> bool {
        self.category().uid() == other.category().uid()
    }

    /// Identical dimensions and generator matrices.
    pub fn same_data(&self, other: &FunctorModule) -> bool {
        self.same_category(other)
            && self.inner.dims == other.inner.dims
            && self.inner.gen_maps == other.inner.gen_maps
    }

    fn actions(&self) -> &HashMap<(usize, usize), Vec<Matrix>> {
        self.inner.actions.get_or_init(|| self.compute_actions())
    }

    fn compute_actions(&self) -> HashMap<(usize, usize), Vec<Matrix>> {
        let c = &self.inner.category;
        let dims = &self.inner.dims;
        let field = c.field();
        let mut out: HashMap<(usize, usize), Vec<Matrix>> = HashMap::new();
        for x in 0..c.len() {
            if dims[x] == 0 {
                continue;
            }
            for &y in c.topological_order() {
                if y == x || dims[y] == 0 || c.dim(x, y) == 0 {
                    continue;
                }
                let mats: Vec<Matrix> = c
                    .lifts(x, y)
                    .iter()
                    .map(|terms| {
                        let mut acc = Matrix::zeros(field, dims[x], dims[y]);
                        for l in terms {
                            let s = c.generators()[l.generator].source;
                            if dims[s] == 0 {
                                continue;
                            }
                            let inner = if s == x {
                                Matrix::identity(field, dims[x]).scale(&l.factor[0])
                            } else {
                                combine(field, dims[x], dims[s], out.get(&(x, s)), &l.factor)
                            };
                            acc = &acc + &(&inner * &self.inner.gen_maps[l.generator]);
                        }
                        acc
                    })
                    .collect();
                out.insert((x, y), mats);
            }
        }
        out
    }

    /// `M(f)` for the `k`-th basis morphism `f: x → y`, a map `M(y) → M(x)`.
    pub fn action(&self, x: usize, y: usize, k: usize) -> Matrix {
        if x == y {
            return Matrix::identity(self.field(), self.dim(x));
        }
        match self.actions().get(&(x, y)) {
            Some(m) => m[k].clone(),
            None => Matrix::zeros(self.field(), self.dim(x), self.dim(y)),
        }
    }

    /// `M(f)` for `f = Σ coeffs[k] f_k ∈ Hom(x, y)`.
    pub fn act(&self, x: usize, y: usize, coeffs: &[Scalar]) -> Matrix {
        let field = self.field();
        if x == y {
            return match coeffs.first() {
                Some(c) => Matrix::identity(field, self.dim(x)).scale(c),
                None => Matrix::zeros(field, self.dim(x), self.dim(x)),
            };
        }
        combine(
            field,
            self.dim(x),
            self.dim(y),
            self.actions().get(&(x, y)),
            coeffs,
        )
    }

    /// Re-derives every `M(α ∘ f)` from the action table and compares with `M(f) M(α)`.
    pub fn check_functorial(&self) -> Result<()> {
        let c = self.inner.category.clone();
        for (gi, g) in c.generators().iter().enumerate() {
            let (s, t) = (g.source, g.target);
            for x in 0..c.len() {
                let dxs = c.dim(x, s);
                if dxs == 0 || self.dim(x) == 0 && self.dim(t) == 0 {
                    continue;
                }
                for k in 0..dxs {
                    let f = unit_vec(c.field(), dxs, k);
                    let composite = c.compose_vec(x, s, t, &f, &g.vector);
                    let lhs = self.act(x, t, &composite);
                    let rhs = &self.act(x, s, &f) * &self.inner.gen_maps[gi];
                    if lhs != rhs {
                        return Err(Error::NotFunctorial(format!(
                            "M({} ∘ f) differs from M(f) M({}) at object `{}`",
                            g.name,
                            g.name,
                            c.name(x)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Submodule given pointwise; fails unless the subspaces are stable under the action.
    pub fn submodule(&self, spaces: &[Subspace]) -> Result<(FunctorModule, ModuleMap)> {
        let c = self.category();
        let bases: Vec<Matrix> = spaces
            .iter()
            .map(|s| s.basis_matrix().transpose())
            .collect();
        let mut gen_maps = Vec::with_capacity(c.generators().len());
        for (gi, g) in c.generators().iter().enumerate() {
            let (bs, bt) = (&bases[g.source], &bases[g.target]);
            let image = &self.inner.gen_maps[gi] * bt;
            let x = bs.solve_matrix(&image)?.ok_or_else(|| {
                Error::NotFunctorial(format!("subspaces are not stable under `{}`", g.name))
            })?;
            gen_maps.push(x);
        }
        let dims = spaces.iter().map(Subspace::dim).collect();
        let sub = FunctorModule::from_parts(c.clone(), dims, gen_maps)?;
        let inc = ModuleMap::from_parts(sub.clone(), self.clone(), bases);
        Ok((sub, inc))
    }

    /// Pointwise span of `M(f)(v)` over all morphisms `f` into the object of each element.
    pub fn generated_spaces(&self, elements: &[(usize, Vec<Scalar>)]) -> Vec<Subspace> {
        let c = self.category();
        let field = self.field();
        let mut vecs: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); c.len()];
        for (x, v) in elements {
            if is_zero_vec(v) {
                continue;
            }
            vecs[*x].push(v.clone());
            for y in 0..c.len() {
                if y == *x || self.dim(y) == 0 {
                    continue;
                }
                for k in 0..c.dim(y, *x) {
                    let w = self.action(y, *x, k).mul_vec(v);
                    if !is_zero_vec(&w) {
                        vecs[y].push(w);
                    }
                }
            }
        }
        vecs.iter()
            .enumerate()
            .map(|(y, vs)| Subspace::span(field, self.dim(y), vs))
            .collect()
    }

    pub fn generated_submodule(
        &self,
        elements: &[(usize, Vec<Scalar>)],
    ) -> Result<(FunctorModule, ModuleMap)> {
        self.submodule(&self.generated_spaces(elements))
    }

    /// `M / S` in normal form together with the projection.
    pub fn quotient(&self, spaces: &[Subspace]) -> Result<(FunctorModule, ModuleMap)> {
        let c = self.category();
        let qs: Vec<QuotientSpace> = spaces
            .iter()
            .map(|s| QuotientSpace::new(s.clone()))
            .collect();
        let projs: Vec<Matrix> = qs.iter().map(QuotientSpace::projection_matrix).collect();
        let secs: Vec<Matrix> = qs.iter().map(QuotientSpace::section_matrix).collect();
        let gen_maps = c
            .generators()
            .iter()
            .enumerate()
            .map(|(gi, g)| &(&projs[g.source] * &self.inner.gen_maps[gi]) * &secs[g.target])
            .collect();
        let q = FunctorModule::from_parts(
            c.clone(),
            qs.iter().map(QuotientSpace::dim).collect(),
            gen_maps,
        )?;
        let p = ModuleMap::from_parts(self.clone(), q.clone(), projs);
        Ok((q, p))
    }

    /// Direct sum with its inclusions and projections.
    pub fn direct_sum(
        category: &Arc<PresentedCategory>,
        parts: &[FunctorModule],
    ) -> Result<DirectSum> {
        let field = category.field();
        if parts.iter().any(|p| p.category().uid() != category.uid()) {
            return Err(Error::Precondition(
                "summands live over different categories".into(),
            ));
        }
        let n = category.len();
        let dims: Vec<usize> = (0..n)
            .map(|x| parts.iter().map(|p| p.dim(x)).sum())
            .collect();
        let gen_maps = (0..category.generators().len())
            .map(|g| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| p.gen_map(g)).collect();
                Matrix::block_diag(field, &blocks)
            })
            .collect();
        let sum = FunctorModule::from_parts(category.clone(), dims.clone(), gen_maps)?;
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        let mut offsets = vec![0usize; n];
        for p in parts {
            let mut inc = Vec::with_capacity(n);
            let mut pro = Vec::with_capacity(n);
            for x in 0..n {
                let mut i = Matrix::zeros(field, dims[x], p.dim(x));
                i.paste(offsets[x], 0, &Matrix::identity(field, p.dim(x)));
                pro.push(i.transpose());
                inc.push(i);
                offsets[x] += p.dim(x);
            }
            inclusions.push(ModuleMap::from_parts(p.clone(), sum.clone(), inc));
            projections.push(ModuleMap::from_parts(sum.clone(), p.clone(), pro));
        }
        Ok(DirectSum {
            module: sum,
            inclusions,
            projections,
        })
    }

    /// Restriction to a full subcategory whose object `i` is `objects[i]` here.
    pub fn restrict(
        &self,
        sub: &Arc<PresentedCategory>,
        objects: &[usize],
    ) -> Result<FunctorModule> {
        if objects.len() != sub.len() {
            return Err(Error::DimensionMismatch(
                "object map does not match the subcategory".into(),
            ));
        }
        let dims = objects.iter().map(|&o| self.dim(o)).collect();
        let gen_maps = sub
            .generators()
            .iter()
            .map(|g| self.act(objects[g.source], objects[g.target], &g.vector))
            .collect();
        FunctorModule::new(sub.clone(), dims, gen_maps)
    }

    /// Vector-space dual, a module over the opposite category.
    pub fn dualize(&self) -> FunctorModule {
        let op = self.category().opposite();
        let gen_maps = self.inner.gen_maps.iter().map(Matrix::transpose).collect();
        FunctorModule::from_parts(op, self.inner.dims.clone(), gen_maps).expect("dual")
    }

    /// Same data regarded over another category with identical presentation.
    pub fn same_module_over(&self, category: &Arc<PresentedCategory>) -> Result<FunctorModule> {
        FunctorModule::new(
            category.clone(),
            self.inner.dims.clone(),
            self.inner.gen_maps.clone(),
        )
    }

    /// A module killed by `killed` regarded over the quotient category built from it.
    pub fn descend(
        &self,
        quotient: &Arc<PresentedCategory>,
        killed: &IdealTable,
    ) -> Result<FunctorModule> {
        let base = self.category();
        if killed.category_uid() != base.uid() || quotient.len() != base.len() {
            return Err(Error::Precondition(
                "ideal and quotient do not belong to this category".into(),
            ));
        }
        for x in 0..base.len() {
            for y in 0..base.len() {
                if self.dim(x) == 0 || self.dim(y) == 0 {
                    continue;
                }
                if killed
                    .span(x, y)
                    .basis()
                    .iter()
                    .any(|v| !self.act(x, y, v).is_zero())
                {
                    return Err(Error::Precondition(format!(
                        "module does not vanish on the ideal at ({}, {})",
                        base.name(x),
                        base.name(y)
                    )));
                }
            }
        }
        let gen_maps = quotient
            .generators()
            .iter()
            .map(|qg| {
                base.generators()
                    .iter()
                    .position(|g| {
                        g.source == qg.source && g.target == qg.target && g.name == qg.name
                    })
                    .map(|k| self.gen_map(k).clone())
                    .ok_or_else(|| {
                        Error::Precondition(format!("generator `{}` is not inherited", qg.name))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        FunctorModule::new(quotient.clone(), self.inner.dims.clone(), gen_maps)
    }

    /// Regards a module over `C/I` as a module over `C`.
    pub fn inflate(
        &self,
        base: &Arc<PresentedCategory>,
        killed: &IdealTable,
    ) -> Result<FunctorModule> {
        if base.len() != self.category().len() || killed.category_uid() != base.uid() {
            return Err(Error::Precondition(
                "module is not over a quotient of this category".into(),
            ));
        }
        let gen_maps = base
            .generators()
            .iter()
            .map(|g| {
                let (s, t) = (g.source, g.target);
                let q = QuotientSpace::new(killed.span(s, t).clone());
                if q.dim() == 0 {
                    return Matrix::zeros(base.field(), self.dim(s), self.dim(t));
                }
                self.act(s, t, &q.project(&g.vector))
            })
            .collect();
        FunctorModule::new(base.clone(), self.inner.dims.clone(), gen_maps)
    }
}

pub(crate) fn combine(
    field: Field,
    rows: usize,
    cols: usize,
    mats: Option<&Vec<Matrix>>,
    coeffs: &[Scalar],
) -> Matrix {
    let mut acc = Matrix::zeros(field, rows, cols);
    if let Some(ms) = mats {
        for (m, c) in ms.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = &acc + &m.scale(c);
            }
        }
    }
    acc
}

/// A direct sum and its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FunctorModule,
    pub inclusions: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

/// A natural transformation, one matrix `M(x) → N(x)` per object.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FunctorModule,
    target: FunctorModule,
    components: Vec<Matrix>,
}

impl ModuleMap {
    /// Validates shapes and naturality.
    pub fn new(
        source: FunctorModule,
        target: FunctorModule,
        components: Vec<Matrix>,
    ) -> Result<ModuleMap> {
        if !source.same_category(&target) || components.len() != source.category().len() {
            return Err(Error::DimensionMismatch(
                "map endpoints do not match".into(),
            ));
        }
        for (x, m) in components.iter().enumerate() {
            if m.nrows() != target.dim(x) || m.ncols() != source.dim(x) {
                return Err(Error::DimensionMismatch(format!(
                    "component at object {x} has the wrong shape"
                )));
            }
        }
        let map = ModuleMap::from_parts(source, target, components);
        map.check_natural()?;
        Ok(map)
    }

    pub(crate) fn from_parts(
        source: FunctorModule,
        target: FunctorModule,
        components: Vec<Matrix>,
    ) -> ModuleMap {
        ModuleMap {
            source,
            target,
            components,
        }
    }

    pub fn check_natural(&self) -> Result<()> {
        let c = self.source.category();
        for (gi, g) in c.generators().iter().enumerate() {
            let lhs = &self.components[g.source] * self.source.gen_map(gi);
            let rhs = self.target.gen_map(gi) * &self.components[g.target];
            if lhs != rhs {
                return Err(Error::NotFunctorial(format!(
                    "naturality fails along `{}`",
                    g.name
                )));
            }
        }
        Ok(())
    }

    pub fn identity(m: &FunctorModule) -> ModuleMap {
        let comps = m
            .dims()
            .iter()
            .map(|&d| Matrix::identity(m.field(), d))
            .collect();
        ModuleMap::from_parts(m.clone(), m.clone(), comps)
    }

    pub fn zero(source: &FunctorModule, target: &FunctorModule) -> ModuleMap {
        let comps = (0..source.category().len())
            .map(|x| Matrix::zeros(source.field(), target.dim(x), source.dim(x)))
            .collect();
        ModuleMap::from_parts(source.clone(), target.clone(), comps)
    }

    pub fn source(&self) -> &FunctorModule {
        &self.source
    }

    pub fn target(&self) -> &FunctorModule {
        &self.target
    }

    pub fn component(&self, x: usize) -> &Matrix {
        &self.components[x]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.target.category().uid() != other.source.category().uid() {
            return Err(Error::DimensionMismatch("maps are not composable".into()));
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| b * a)
            .collect();
        Ok(ModuleMap::from_parts(
            self.source.clone(),
            other.target.clone(),
            comps,
        ))
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a + b)
            .collect();
        ModuleMap::from_parts(self.source.clone(), self.target.clone(), comps)
    }

    pub fn scale(&self, s: &Scalar) -> ModuleMap {
        let comps = self.components.iter().map(|a| a.scale(s)).collect();
        ModuleMap::from_parts(self.source.clone(), self.target.clone(), comps)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|m| m.rank() == m.ncols())
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().all(|m| m.rank() == m.nrows())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn kernel_spaces(&self) -> Vec<Subspace> {
        self.components
            .iter()
            .map(|m| Subspace::column_space(&m.kernel_basis()))
            .collect()
    }

    pub fn image_spaces(&self) -> Vec<Subspace> {
        self.components.iter().map(Subspace::column_space).collect()
    }

    pub fn kernel(&self) -> Result<(FunctorModule, ModuleMap)> {
        self.source.submodule(&self.kernel_spaces())
    }

    pub fn image(&self) -> Result<(FunctorModule, ModuleMap)> {
        self.target.submodule(&self.image_spaces())
    }

    pub fn cokernel(&self) -> Result<(FunctorModule, ModuleMap)> {
        self.target.quotient(&self.image_spaces())
    }
}
