use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use super::ambient::{Ambient, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverArrow {
    pub source: usize,
    pub target: usize,
    pub name: String,
}

/// A finite translation quiver: vertices, arrows, translation `tau` and semitranslation `sigma`.
///
/// Vertices without `tau` are projective. When the quiver was cut out of an ambient family,
/// `coords` records where each vertex sits.
#[derive(Clone, Debug)]
pub struct TranslationQuiver {
    names: Vec<String>,
    arrows: Vec<QuiverArrow>,
    tau: Vec<Option<usize>>,
    sigma: Vec<Option<usize>>,
    ambient: Option<(Ambient, Vec<Vertex>)>,
    index: HashMap<String, usize>,
}

/// The mesh ending at a non-projective vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mesh {
    pub vertex: usize,
    pub tau: usize,
    /// Arrows ending at the vertex.
    pub incoming: Vec<usize>,
    /// `sigma` of each incoming arrow, in the same order.
    pub sigma: Vec<usize>,
}

impl TranslationQuiver {
    /// Builds and validates a quiver. Missing `sigma` values are inferred when the arrow
    /// `τb → a` is unique.
    pub fn new(
        names: Vec<String>,
        arrows: Vec<QuiverArrow>,
        tau_pairs: &[(usize, usize)],
        sigma_pairs: &[(usize, usize)],
    ) -> Result<TranslationQuiver> {
        let n = names.len();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex `{name}`")));
            }
        }
        for a in &arrows {
            if a.source >= n || a.target >= n {
                return Err(Error::Invalid(format!(
                    "arrow `{}` has an unknown endpoint",
                    a.name
                )));
            }
        }
        let mut tau = vec![None; n];
        let mut images = BTreeSet::new();
        for &(x, t) in tau_pairs {
            if x >= n || t >= n {
                return Err(Error::Invalid("tau pair names an unknown vertex".into()));
            }
            if tau[x].replace(t).is_some() {
                return Err(Error::Invalid(format!("tau given twice at `{}`", names[x])));
            }
            if !images.insert(t) {
                return Err(Error::Invalid(format!(
                    "tau is not injective at `{}`",
                    names[t]
                )));
            }
        }
        let mut sigma = vec![None; arrows.len()];
        for &(a, s) in sigma_pairs {
            if a >= arrows.len() || s >= arrows.len() {
                return Err(Error::Invalid("sigma pair names an unknown arrow".into()));
            }
            sigma[a] = Some(s);
        }
        for (k, a) in arrows.iter().enumerate() {
            let Some(tb) = tau[a.target] else {
                if sigma[k].is_some() {
                    return Err(Error::Invalid(format!(
                        "sigma given for `{}`, whose target is projective",
                        a.name
                    )));
                }
                continue;
            };
            match sigma[k] {
                Some(s) => {
                    if arrows[s].source != tb || arrows[s].target != a.source {
                        return Err(Error::Invalid(format!(
                            "sigma(`{}`) must run from tau of its target to its source",
                            a.name
                        )));
                    }
                }
                None => {
                    let cands: Vec<usize> = (0..arrows.len())
                        .filter(|&s| arrows[s].source == tb && arrows[s].target == a.source)
                        .collect();
                    if cands.len() != 1 {
                        return Err(Error::Invalid(format!(
                            "sigma(`{}`) is not determined ({} candidate arrows)",
                            a.name,
                            cands.len()
                        )));
                    }
                    sigma[k] = Some(cands[0]);
                }
            }
        }
        Ok(TranslationQuiver {
            names,
            arrows,
            tau,
            sigma,
            ambient: None,
            index,
        })
    }

    /// The full translation subquiver of an ambient family on a finite vertex set.
    pub fn from_ambient(ambient: &Ambient, vertices: &BTreeSet<Vertex>) -> TranslationQuiver {
        let coords: Vec<Vertex> = vertices.iter().copied().collect();
        let pos: BTreeMap<Vertex, usize> =
            coords.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let names: Vec<String> = coords.iter().map(|v| ambient.vertex_name(*v)).collect();
        let mut arrows = Vec::new();
        let mut arrow_pos = BTreeMap::new();
        for v in &coords {
            for a in ambient.arrows_out(*v) {
                if let Some(&t) = pos.get(&a.target) {
                    arrow_pos.insert(a, arrows.len());
                    arrows.push(QuiverArrow {
                        source: pos[v],
                        target: t,
                        name: format!("{}->{}", names[pos[v]], names[t]),
                    });
                }
            }
        }
        let tau: Vec<Option<usize>> = coords
            .iter()
            .map(|v| ambient.tau(*v).and_then(|t| pos.get(&t).copied()))
            .collect();
        let sigma = arrow_pos
            .iter()
            .map(|(a, &k)| {
                (
                    k,
                    ambient.sigma(*a).and_then(|s| arrow_pos.get(&s).copied()),
                )
            })
            .collect::<BTreeMap<_, _>>()
            .into_values()
            .collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        TranslationQuiver {
            names,
            arrows,
            tau,
            sigma,
            ambient: Some((ambient.clone(), coords)),
            index,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn arrows(&self) -> &[QuiverArrow] {
        &self.arrows
    }

    pub fn tau(&self, v: usize) -> Option<usize> {
        self.tau[v]
    }

    pub fn sigma(&self, arrow: usize) -> Option<usize> {
        self.sigma[arrow]
    }

    pub fn is_projective(&self, v: usize) -> bool {
        self.tau[v].is_none()
    }

    pub fn projective_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.is_projective(v))
            .collect()
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        self.ambient.as_ref().map(|(a, _)| a)
    }

    pub fn coords(&self, v: usize) -> Option<Vertex> {
        self.ambient.as_ref().map(|(_, c)| c[v])
    }

    pub fn find_vertex(&self, v: Vertex) -> Option<usize> {
        let (_, coords) = self.ambient.as_ref()?;
        coords.binary_search(&v).ok()
    }

    pub fn arrows_into(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&k| self.arrows[k].target == v)
            .collect()
    }

    pub fn arrows_from(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&k| self.arrows[k].source == v)
            .collect()
    }

    /// Incoming arrows at `x`, their `sigma` images and `τx`.
    pub fn mesh_at(&self, x: usize) -> Result<Mesh> {
        let tau = self.tau(x).ok_or_else(|| {
            Error::Precondition(format!("`{}` is projective and has no mesh", self.names[x]))
        })?;
        let incoming = self.arrows_into(x);
        let sigma = incoming
            .iter()
            .map(|&a| self.sigma[a].expect("sigma is defined on arrows into non-projectives"))
            .collect();
        Ok(Mesh {
            vertex: x,
            tau,
            incoming,
            sigma,
        })
    }

    /// Graphviz rendering; translations are drawn dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n  rankdir=LR;\n");
        for (i, name) in self.names.iter().enumerate() {
            match self.coords(i) {
                Some(c) => {
                    let _ = writeln!(
                        out,
                        "  v{i} [label=\"{name}\", pos=\"{},{}!\"];",
                        c.time, c.node
                    );
                }
                None => {
                    let _ = writeln!(out, "  v{i} [label=\"{name}\"];");
                }
            }
        }
        for a in &self.arrows {
            let _ = writeln!(out, "  v{} -> v{};", a.source, a.target);
        }
        for (x, t) in self.tau.iter().enumerate() {
            if let Some(t) = t {
                let _ = writeln!(out, "  v{x} -> v{t} [style=dashed, constraint=false];");
            }
        }
        out.push_str("}\n");
        out
    }
}
