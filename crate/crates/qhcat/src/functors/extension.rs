use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Scalar};

use super::module::{FunctorModule, ModuleMap};
use super::resolution::{map_from_free, projective_cover};

/// Some `S` with `m S = I`; `m` must have full row rank.
pub(crate) fn right_inverse(m: &Matrix) -> Result<Matrix> {
    m.solve_matrix(&Matrix::identity(m.field(), m.nrows()))?
        .ok_or_else(|| Error::Precondition("matrix is not surjective".into()))
}

/// Pushout of `f: A → B` and `g: A → C`, the cokernel of `a ↦ (f a, −g a)`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub module: FunctorModule,
    pub from_first: ModuleMap,
    pub from_second: ModuleMap,
    projection: ModuleMap,
}

pub fn pushout(f: &ModuleMap, g: &ModuleMap) -> Result<Pushout> {
    let a = f.source();
    if !a.same_data(g.source()) {
        return Err(Error::Precondition(
            "pushout legs must share their source".into(),
        ));
    }
    let c = a.category();
    let sum = FunctorModule::direct_sum(c, &[f.target().clone(), g.target().clone()])?;
    let comps = (0..c.len())
        .map(|y| {
            let neg = g.component(y).scale(&-&c.field().one());
            Matrix::vstack(c.field(), a.dim(y), &[f.component(y), &neg])
        })
        .collect();
    let diff = ModuleMap::new(a.clone(), sum.module.clone(), comps)?;
    let (module, projection) = diff.cokernel()?;
    Ok(Pushout {
        from_first: sum.inclusions[0].then(&projection)?,
        from_second: sum.inclusions[1].then(&projection)?,
        module,
        projection,
    })
}

impl Pushout {
    /// The map out of the pushout determined by `u: B → X` and `v: C → X` with `u f = v g`.
    pub fn induced(&self, u: &ModuleMap, v: &ModuleMap) -> Result<ModuleMap> {
        let c = self.module.category();
        let comps = (0..c.len())
            .map(|y| {
                let joined = Matrix::hstack(
                    c.field(),
                    u.target().dim(y),
                    &[u.component(y), v.component(y)],
                );
                Ok(&joined * &right_inverse(self.projection.component(y))?)
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleMap::new(self.module.clone(), u.target().clone(), comps)
    }
}

/// `0 → N → E → M → 0` with its two maps.
#[derive(Clone, Debug)]
pub struct Extension {
    pub module: FunctorModule,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

impl Extension {
    /// Exactness checked pointwise.
    pub fn is_exact(&self) -> bool {
        self.inclusion.is_injective()
            && self.projection.is_surjective()
            && self
                .inclusion
                .then(&self.projection)
                .map(|m| m.is_zero())
                .unwrap_or(false)
            && (0..self.module.category().len()).all(|y| {
                self.module.dim(y)
                    == self.inclusion.source().dim(y) + self.projection.target().dim(y)
            })
    }
}

/// The extension of `M` by `N` classified by a cocycle in `Hom(P_1, N)`, where `P_1 → P_0 → M` is
/// the minimal presentation: the pushout of `Ω ⊆ P_0` along the induced map `Ω → N`.
pub fn extension_from_cocycle(
    m: &FunctorModule,
    n: &FunctorModule,
    cocycle: &[Scalar],
) -> Result<Extension> {
    let c = m.category();
    let cover = projective_cover(m)?;
    let (omega, iota) = cover.map.kernel()?;
    let relations = projective_cover(&omega)?;
    let mut elements = Vec::with_capacity(relations.summands.len());
    let mut offset = 0;
    for &a in &relations.summands {
        let d = n.dim(a);
        let block = cocycle
            .get(offset..offset + d)
            .ok_or_else(|| Error::DimensionMismatch("cocycle is too short".into()))?;
        elements.push((a, block.to_vec()));
        offset += d;
    }
    if offset != cocycle.len() {
        return Err(Error::DimensionMismatch("cocycle is too long".into()));
    }
    let xi = map_from_free(n, &elements)?;
    let comps = (0..c.len())
        .map(|y| {
            let cov = relations.map.component(y);
            let kernel = cov.kernel_basis();
            if !(xi.component(y) * &kernel).is_zero() {
                return Err(Error::Invalid(
                    "not a cocycle: it does not vanish on the second syzygy".into(),
                ));
            }
            Ok(xi.component(y) * &right_inverse(cov)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let xi_bar = ModuleMap::new(omega, n.clone(), comps)?;
    let po = pushout(&iota, &xi_bar)?;
    let projection = po.induced(&cover.map, &ModuleMap::zero(n, m))?;
    Ok(Extension {
        module: po.module.clone(),
        inclusion: po.from_second.clone(),
        projection,
    })
}
