//! Finite-dimensional modules over presented categories: representables, sub- and quotient
//! modules, projective covers and resolutions, Hom, Ext, tensor products and Tor.

mod extension;
mod hom;
mod module;
mod resolution;
mod tensor;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use extension::{extension_from_cocycle, pushout, Extension, Pushout};
pub use hom::{
    cohomology_classes, ext, ext1, ext_dim, ext_from_resolution, hom_complex_map, hom_dim,
    hom_space, is_isomorphic, ExtSpace,
};
pub use module::{DirectSum, FunctorModule, ModuleMap};
pub use resolution::{
    free_module, map_from_free, minimal_resolution, presentation, projective_cover, radical_spaces,
    top_elements, Presentation, ProjMap, ProjectiveCover, Resolution,
};
pub use tensor::{tensor_dim, tensor_over_c, tor1, tor_dim, tor_from_resolution, tor_resolving};

use crate::error::{Error, Result};
use crate::exactlin::{unit_vec, Matrix, QuotientSpace, Scalar, Subspace};
use crate::meshcat::{IdealTable, PresentedCategory};

/// `I(−, x)` as a submodule of `C(−, x)`.
pub fn ideal_module(
    category: &Arc<PresentedCategory>,
    ideal: &IdealTable,
    x: usize,
) -> Result<(FunctorModule, ModuleMap)> {
    if ideal.category_uid() != category.uid() {
        return Err(Error::Precondition(
            "ideal belongs to another category".into(),
        ));
    }
    let rep = FunctorModule::representable(category, x);
    let spaces: Vec<Subspace> = (0..category.len())
        .map(|y| ideal.span(y, x).clone())
        .collect();
    rep.submodule(&spaces)
}

/// Submodule of `M` generated by `M(e)` for `e ∈ objects`: the trace of their representables.
pub fn trace_of_representables(
    m: &FunctorModule,
    objects: &[usize],
) -> Result<(FunctorModule, ModuleMap)> {
    let elements: Vec<(usize, Vec<Scalar>)> = objects
        .iter()
        .flat_map(|&e| (0..m.dim(e)).map(move |k| (e, unit_vec(m.field(), m.dim(e), k))))
        .collect();
    m.generated_submodule(&elements)
}

/// Sum of the images of all maps from the given modules into `M`.
pub fn trace(m: &FunctorModule, family: &[FunctorModule]) -> Result<(FunctorModule, ModuleMap)> {
    let mut spaces: Vec<Subspace> = m
        .dims()
        .iter()
        .map(|&d| Subspace::zero(m.field(), d))
        .collect();
    for f in family {
        for map in hom_space(f, m)? {
            for (x, s) in map.image_spaces().into_iter().enumerate() {
                spaces[x] = spaces[x].sum(&s);
            }
        }
    }
    m.submodule(&spaces)
}

/// `C ⊗_B G` for a module `G` over a full subcategory `B`, whose object `i` is `objects[i]` in
/// `base`.
pub fn induce(
    base: &Arc<PresentedCategory>,
    objects: &[usize],
    g: &FunctorModule,
) -> Result<FunctorModule> {
    Ok(Induced::new(base, objects, g)?.module)
}

/// The counit `C ⊗_B (F|_B) → F`, `h ⊗ m ↦ F(h) m`.
pub fn induction_counit(
    f: &FunctorModule,
    sub: &Arc<PresentedCategory>,
    objects: &[usize],
) -> Result<ModuleMap> {
    let base = f.category();
    let restricted = f.restrict(sub, objects)?;
    let ind = Induced::new(base, objects, &restricted)?;
    let field = f.field();
    let comps = (0..base.len())
        .map(|y| {
            let cols: Vec<Vec<Scalar>> = ind.pieces[y]
                .iter()
                .map(|&(b, h, m)| {
                    let ob = objects[b];
                    let e = unit_vec(field, f.dim(ob), m);
                    if y == ob {
                        e
                    } else {
                        f.action(y, ob, h).mul_vec(&e)
                    }
                })
                .collect();
            let ambient = Matrix::from_columns(field, f.dim(y), &cols);
            &ambient * &ind.quotients[y].section_matrix()
        })
        .collect();
    ModuleMap::new(ind.module, f.clone(), comps)
}

struct Induced {
    module: FunctorModule,
    /// ambient basis at each object: (subcategory object, morphism index, element index)
    pieces: Vec<Vec<(usize, usize, usize)>>,
    quotients: Vec<QuotientSpace>,
}

impl Induced {
    fn new(base: &Arc<PresentedCategory>, objects: &[usize], g: &FunctorModule) -> Result<Induced> {
        let sub = g.category();
        if objects.len() != sub.len() {
            return Err(Error::DimensionMismatch(
                "object map does not match the subcategory".into(),
            ));
        }
        let field = base.field();
        let n = base.len();
        let mut pieces = Vec::with_capacity(n);
        let mut index: Vec<BTreeMap<(usize, usize, usize), usize>> = Vec::with_capacity(n);
        for y in 0..n {
            let mut p = Vec::new();
            let mut ix = BTreeMap::new();
            for (b, &ob) in objects.iter().enumerate() {
                for h in 0..base.dim(y, ob) {
                    for m in 0..g.dim(b) {
                        ix.insert((b, h, m), p.len());
                        p.push((b, h, m));
                    }
                }
            }
            pieces.push(p);
            index.push(ix);
        }
        let quotients: Vec<QuotientSpace> = (0..n)
            .map(|y| {
                let dim = pieces[y].len();
                let mut rels = Vec::new();
                for (gi, beta) in sub.generators().iter().enumerate() {
                    let (b, b2) = (beta.source, beta.target);
                    let (ob, ob2) = (objects[b], objects[b2]);
                    let gm = g.gen_map(gi);
                    for h in 0..base.dim(y, ob) {
                        let e = unit_vec(field, base.dim(y, ob), h);
                        let composite = base.compose_vec(y, ob, ob2, &e, &beta.vector);
                        for m in 0..g.dim(b2) {
                            let mut v = vec![field.zero(); dim];
                            for (h2, c) in composite.iter().enumerate() {
                                if !c.is_zero() {
                                    let k = index[y][&(b2, h2, m)];
                                    v[k] = &v[k] + c;
                                }
                            }
                            for r in 0..g.dim(b) {
                                let c = gm.get(r, m);
                                if !c.is_zero() {
                                    let k = index[y][&(b, h, r)];
                                    v[k] = &v[k] - c;
                                }
                            }
                            rels.push(v);
                        }
                    }
                }
                QuotientSpace::of_span(field, dim, &rels)
            })
            .collect();
        let gen_maps = base
            .generators()
            .iter()
            .map(|alpha| {
                let (s, t) = (alpha.source, alpha.target);
                // h ⊗ m ↦ (h ∘ α) ⊗ m from the ambient at t to the ambient at s
                let mut amb = Matrix::zeros(field, pieces[s].len(), pieces[t].len());
                for (col, &(b, h, m)) in pieces[t].iter().enumerate() {
                    let ob = objects[b];
                    let e = unit_vec(field, base.dim(t, ob), h);
                    let composite = base.compose_vec(s, t, ob, &alpha.vector, &e);
                    for (h2, c) in composite.iter().enumerate() {
                        if !c.is_zero() {
                            amb.set(index[s][&(b, h2, m)], col, c.clone());
                        }
                    }
                }
                &(&quotients[s].projection_matrix() * &amb) * &quotients[t].section_matrix()
            })
            .collect();
        let dims = quotients.iter().map(QuotientSpace::dim).collect();
        let module = FunctorModule::new(base.clone(), dims, gen_maps)?;
        Ok(Induced {
            module,
            pieces,
            quotients,
        })
    }
}

/// Dimension vector laid out by ambient coordinates: one text row per node, highest first,
/// one column per time step. `K`, `K2`, … give the dimension, `.` marks a zero space and blanks
/// mark positions outside the category.
pub fn render_grid(m: &FunctorModule) -> String {
    let c = m.category();
    let cells: Vec<(i64, i64, usize)> = (0..c.len())
        .filter_map(|x| c.coords(x).map(|v| (v.time, v.node, m.dim(x))))
        .collect();
    if cells.is_empty() {
        return m
            .dims()
            .iter()
            .enumerate()
            .map(|(x, d)| format!("{}: {d}\n", c.name(x)))
            .collect();
    }
    let (tmin, tmax) = cells
        .iter()
        .fold((i64::MAX, i64::MIN), |(a, b), &(t, _, _)| {
            (a.min(t), b.max(t))
        });
    let (nmin, nmax) = cells
        .iter()
        .fold((i64::MAX, i64::MIN), |(a, b), &(_, n, _)| {
            (a.min(n), b.max(n))
        });
    let width = (tmax - tmin + 1) as usize;
    let text = |d: usize| match d {
        0 => ".".to_string(),
        1 => "K".to_string(),
        d => format!("K{d}"),
    };
    let cell = cells.iter().map(|c| text(c.2).len()).max().unwrap_or(1);
    let mut rows = vec![vec![String::new(); width]; (nmax - nmin + 1) as usize];
    for &(t, n, d) in &cells {
        rows[(nmax - n) as usize][(t - tmin) as usize] = text(d);
    }
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().map(|s| format!("{s:<cell$}")).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    out
}
