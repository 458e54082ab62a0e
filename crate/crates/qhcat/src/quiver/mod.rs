//! Translation quivers, the example families `ZA∞`, `ZA∞^∞`, `ZD∞`, `NΣ`, finite windows and
//! the labelled example filtrations.

mod ambient;
mod families;
mod translation;

use std::collections::BTreeSet;

pub use ambient::{Ambient, AmbientArrow, ExtendedDynkin, Family, Vertex};
pub use families::{
    example_filtration, gen_n_extended_dynkin, gen_za_inf, gen_za_inf_inf, gen_zd_inf, label_name,
    FiltrationKind, LabeledFiltration,
};
pub use translation::{Mesh, QuiverArrow, TranslationQuiver};

/// A set of vertices of a finite translation quiver, with its closure properties computed on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    vertices: BTreeSet<usize>,
    tau_closed: bool,
    path_convex: bool,
}

impl Window {
    /// Convexity is measured in the ambient family when the quiver has one, else inside the quiver.
    pub fn new(q: &TranslationQuiver, vertices: BTreeSet<usize>) -> Window {
        let tau_closed = vertices
            .iter()
            .all(|&v| q.tau(v).is_none_or(|t| vertices.contains(&t)));
        let path_convex = match q.ambient() {
            Some(amb) => {
                let coords: BTreeSet<Vertex> =
                    vertices.iter().filter_map(|&v| q.coords(v)).collect();
                amb.is_path_convex(&coords)
            }
            None => hull_in(q, &vertices) == vertices,
        };
        Window {
            vertices,
            tau_closed,
            path_convex,
        }
    }

    pub fn full(q: &TranslationQuiver) -> Window {
        Window::new(q, (0..q.vertex_count()).collect())
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn is_tau_closed(&self) -> bool {
        self.tau_closed
    }

    pub fn is_path_convex(&self) -> bool {
        self.path_convex
    }
}

/// Vertices of `q` on some path between two members of `set`.
fn hull_in(q: &TranslationQuiver, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let walk = |forward: bool| {
        let mut seen = set.clone();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(v) = stack.pop() {
            for a in q.arrows() {
                let (from, to) = if forward {
                    (a.source, a.target)
                } else {
                    (a.target, a.source)
                };
                if from == v && seen.insert(to) {
                    stack.push(to);
                }
            }
        }
        seen
    };
    let fwd = walk(true);
    let bwd = walk(false);
    fwd.intersection(&bwd).copied().collect()
}
