use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{is_zero_vec, unit_vec, zero_vec, Matrix, QuotientSpace, Scalar, Subspace};
use crate::meshcat::PresentedCategory;

use super::module::{FunctorModule, ModuleMap};

/// `⊕_j C(−, a_j)`.
pub fn free_module(category: &Arc<PresentedCategory>, summands: &[usize]) -> Result<FunctorModule> {
    let parts: Vec<FunctorModule> = summands
        .iter()
        .map(|&a| FunctorModule::representable(category, a))
        .collect();
    Ok(FunctorModule::direct_sum(category, &parts)?.module)
}

fn block_offsets(category: &PresentedCategory, summands: &[usize], y: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(summands.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &a in summands {
        acc += category.dim(y, a);
        out.push(acc);
    }
    out
}

/// A map `⊕_j C(−, source_j) → ⊕_k C(−, target_k)`, by Yoneda a matrix of morphisms
/// `entries[j][k] ∈ C(source_j, target_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjMap {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub entries: Vec<Vec<Vec<Scalar>>>,
}

impl ProjMap {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|v| is_zero_vec(v))
    }

    /// The natural transformation between the free modules.
    pub fn realize(&self, category: &Arc<PresentedCategory>) -> Result<ModuleMap> {
        let from = free_module(category, &self.source)?;
        let to = free_module(category, &self.target)?;
        let field = category.field();
        let comps = (0..category.len())
            .map(|y| {
                let src_off = block_offsets(category, &self.source, y);
                let dst_off = block_offsets(category, &self.target, y);
                let rows = dst_off[self.target.len()];
                let mut cols = Vec::with_capacity(src_off[self.source.len()]);
                for (j, &a) in self.source.iter().enumerate() {
                    for g in 0..category.dim(y, a) {
                        let e = unit_vec(field, category.dim(y, a), g);
                        let mut col = zero_vec(field, rows);
                        for (k, &b) in self.target.iter().enumerate() {
                            let v = category.compose_vec(y, a, b, &e, &self.entries[j][k]);
                            for (r, s) in v.into_iter().enumerate() {
                                col[dst_off[k] + r] = s;
                            }
                        }
                        cols.push(col);
                    }
                }
                Matrix::from_columns(field, rows, &cols)
            })
            .collect();
        ModuleMap::new(from, to, comps)
    }
}

/// `rad M (x) = Σ im M(β)` over generators `β` out of `x`.
pub fn radical_spaces(m: &FunctorModule) -> Vec<Subspace> {
    let c = m.category();
    (0..c.len())
        .map(|x| {
            let vecs: Vec<Vec<Scalar>> = c
                .gens_out(x)
                .iter()
                .flat_map(|&g| m.gen_map(g).columns())
                .filter(|v| !is_zero_vec(v))
                .collect();
            Subspace::span(m.field(), m.dim(x), &vecs)
        })
        .collect()
}

/// Elements of `M` whose classes form a basis of `M / rad M`, object by object.
pub fn top_elements(m: &FunctorModule) -> Vec<(usize, Vec<Scalar>)> {
    radical_spaces(m)
        .into_iter()
        .enumerate()
        .flat_map(|(x, rad)| {
            let n = rad.ambient();
            let q = QuotientSpace::new(rad);
            q.complement()
                .iter()
                .map(|&c| (x, unit_vec(m.field(), n, c)))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `⊕ C(−, x_i) → M` sending `id_{x_i}` to the `i`-th element.
pub fn map_from_free(m: &FunctorModule, elements: &[(usize, Vec<Scalar>)]) -> Result<ModuleMap> {
    let c = m.category();
    let summands: Vec<usize> = elements.iter().map(|(x, _)| *x).collect();
    let free = free_module(c, &summands)?;
    let comps = (0..c.len())
        .map(|y| {
            let mut cols = Vec::new();
            for (a, t) in elements {
                if y == *a {
                    cols.push(t.clone());
                    continue;
                }
                for g in 0..c.dim(y, *a) {
                    cols.push(m.action(y, *a, g).mul_vec(t));
                }
            }
            Matrix::from_columns(m.field(), m.dim(y), &cols)
        })
        .collect();
    Ok(ModuleMap::from_parts(free, m.clone(), comps))
}

/// A projective cover `P → M` with `P = ⊕ C(−, summands_i)`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub summands: Vec<usize>,
    pub elements: Vec<Vec<Scalar>>,
    pub module: FunctorModule,
    pub map: ModuleMap,
}

/// Fails with `WindowTooSmall` when the top meets an object whose representable is cut off by the
/// window boundary.
pub fn projective_cover(m: &FunctorModule) -> Result<ProjectiveCover> {
    let c = m.category();
    let tops = top_elements(m);
    if let Some((x, _)) = tops.iter().find(|(x, _)| c.is_boundary(*x)) {
        return Err(Error::WindowTooSmall(format!(
            "projective cover needs the representable at boundary object `{}`",
            c.name(*x)
        )));
    }
    let map = map_from_free(m, &tops)?;
    debug_assert!(map.is_surjective());
    Ok(ProjectiveCover {
        summands: tops.iter().map(|(x, _)| *x).collect(),
        elements: tops.into_iter().map(|(_, v)| v).collect(),
        module: map.source().clone(),
        map,
    })
}

/// `P_1 → P_0 → M → 0`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub cover: ProjectiveCover,
    pub relations: Vec<usize>,
    pub differential: ProjMap,
}

pub fn presentation(m: &FunctorModule) -> Result<Presentation> {
    let res = minimal_resolution(m, 1)?;
    let cover = projective_cover(m)?;
    let differential = res
        .differentials
        .into_iter()
        .next()
        .unwrap_or_else(|| ProjMap {
            source: Vec::new(),
            target: cover.summands.clone(),
            entries: Vec::new(),
        });
    Ok(Presentation {
        relations: differential.source.clone(),
        cover,
        differential,
    })
}

/// `… → P_1 → P_0 (→ M)`; `differentials[i]: P_{i+1} → P_i`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub terms: Vec<Vec<usize>>,
    pub differentials: Vec<ProjMap>,
    /// The last computed syzygy vanished, so the resolution is complete.
    pub finite: bool,
}

impl Resolution {
    pub fn term(&self, i: usize) -> &[usize] {
        self.terms.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn differential(&self, i: usize) -> Option<&ProjMap> {
        self.differentials.get(i)
    }

    /// Projective dimension when the resolution is complete.
    pub fn length(&self) -> Option<usize> {
        self.finite
            .then(|| self.terms.iter().rposition(|t| !t.is_empty()).unwrap_or(0))
    }
}

/// Minimal projective resolution `P_0, …, P_length`.
pub fn minimal_resolution(m: &FunctorModule, length: usize) -> Result<Resolution> {
    let c = m.category();
    let mut terms = Vec::new();
    let mut differentials = Vec::new();
    let mut current = m.clone();
    // inclusion of the current syzygy into the previous term
    let mut inclusion: Option<(ModuleMap, Vec<usize>)> = None;
    let mut finite = false;
    for step in 0..=length {
        if current.is_zero() {
            finite = true;
            break;
        }
        let cover = projective_cover(&current)?;
        if let Some((inc, prev)) = &inclusion {
            let entries = cover
                .summands
                .iter()
                .zip(&cover.elements)
                .map(|(&a, t)| {
                    let v = inc.component(a).mul_vec(t);
                    let off = block_offsets(c, prev, a);
                    (0..prev.len())
                        .map(|k| v[off[k]..off[k + 1]].to_vec())
                        .collect()
                })
                .collect();
            differentials.push(ProjMap {
                source: cover.summands.clone(),
                target: prev.clone(),
                entries,
            });
        }
        terms.push(cover.summands.clone());
        let (kernel, inc) = cover.map.kernel()?;
        if step == length {
            finite = kernel.is_zero();
            break;
        }
        current = kernel;
        inclusion = Some((inc, cover.summands));
    }
    Ok(Resolution {
        terms,
        differentials,
        finite,
    })
}
