//! Finite K-linear categories: mesh categories of windows, path categories with relations,
//! ideals `I_B`, products of ideals and quotient categories.

mod build;
mod category;

use std::collections::{BTreeSet, HashMap};

pub use build::{build_mesh_category, mesh_relations, QuiverWithRelations, Relation};
pub use category::{
    CategoryParts, Generator, IdealTable, Lift, LiftTable, Morphism, PresentedCategory,
};

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::quiver::{Ambient, TranslationQuiver, Vertex, Window};

/// Mesh category of an ambient family on a path-convex vertex set. Objects whose ambient
/// predecessors fall outside the set are flagged as boundary.
pub fn window_category(
    ambient: &Ambient,
    vertices: &BTreeSet<Vertex>,
    field: Field,
) -> Result<PresentedCategory> {
    let q = TranslationQuiver::from_ambient(ambient, vertices);
    let w = Window::full(&q);
    build_mesh_category(&q, &w, field)
}

/// Full subcategory of the ambient mesh category on `objects`, computed on their convex hull.
///
/// Hom spaces and composition agree with the infinite category, so the result is a closed finite
/// category with no boundary.
pub fn truncation(
    ambient: &Ambient,
    objects: &[Vertex],
    field: Field,
) -> Result<PresentedCategory> {
    let set: BTreeSet<Vertex> = objects.iter().copied().collect();
    if set.len() != objects.len() {
        return Err(Error::Invalid("truncation objects must be distinct".into()));
    }
    if let Some(v) = objects.iter().find(|v| !ambient.contains(**v)) {
        return Err(Error::Invalid(format!(
            "({}, {}) is not a vertex of the family",
            v.time, v.node
        )));
    }
    let hull = ambient.convex_hull(&set);
    let q = TranslationQuiver::from_ambient(ambient, &hull);
    let pos: HashMap<Vertex, usize> = hull.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let rq = QuiverWithRelations {
        names: q.names().to_vec(),
        arrows: q
            .arrows()
            .iter()
            .map(|a| (a.source, a.target, a.name.clone()))
            .collect(),
        relations: mesh_relations(&q, field),
        coords: (0..q.vertex_count()).map(|v| q.coords(v)).collect(),
    };
    let keep: Vec<usize> = objects.iter().map(|v| pos[v]).collect();
    rq.build(field, Some(&keep), None)
}
