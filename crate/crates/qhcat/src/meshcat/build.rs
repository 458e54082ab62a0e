use std::collections::{BTreeSet, HashMap};

use super::category::{CategoryParts, Generator, Lift, PresentedCategory};
use crate::error::{Error, Result};
use crate::exactlin::{unit_vec, Field, Matrix, QuotientSpace, Scalar};
use crate::quiver::{TranslationQuiver, Vertex, Window};

/// A linear combination of parallel paths; each path lists arrow indices in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

/// A finite acyclic quiver with relations.
#[derive(Clone, Debug)]
pub struct QuiverWithRelations {
    pub names: Vec<String>,
    pub arrows: Vec<(usize, usize, String)>,
    pub relations: Vec<Relation>,
    pub coords: Vec<Option<Vertex>>,
}

/// Basis element of `Hom(x, y)`: the identity, or arrow `α` after basis element `b` of `Hom(x, s(α))`.
#[derive(Clone, Copy, Debug)]
enum Word {
    Identity,
    Step { arrow: usize, prev: usize },
}

/// Everything reachable from one source `x`: the spaces `Hom(x, y)` and the maps induced by arrows.
struct Fan {
    dims: Vec<usize>,
    words: Vec<Vec<Word>>,
    arrow_maps: Vec<Option<Matrix>>,
}

impl QuiverWithRelations {
    pub fn new(
        names: Vec<String>,
        arrows: Vec<(usize, usize, String)>,
        relations: Vec<Relation>,
    ) -> Self {
        let n = names.len();
        QuiverWithRelations {
            names,
            arrows,
            relations,
            coords: vec![None; n],
        }
    }

    /// The path category of the linear quiver `1 → 2 → … → n`.
    pub fn linear(n: usize) -> Self {
        let names = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (0..n.saturating_sub(1))
            .map(|i| (i, i + 1, format!("a{}", i + 1)))
            .collect();
        QuiverWithRelations::new(names, arrows, Vec::new())
    }

    /// Path category with `n` points and no arrows.
    pub fn discrete(n: usize) -> Self {
        QuiverWithRelations::new(
            (1..=n).map(|i| i.to_string()).collect(),
            Vec::new(),
            Vec::new(),
        )
    }

    /// A topological order of the vertices and the endpoints of every relation.
    #[allow(clippy::type_complexity)]
    fn validate(&self) -> Result<(Vec<usize>, Vec<(usize, usize)>)> {
        let n = self.names.len();
        for (s, t, name) in &self.arrows {
            if *s >= n || *t >= n {
                return Err(Error::Invalid(format!(
                    "arrow `{name}` has an unknown endpoint"
                )));
            }
        }
        let mut ends = Vec::new();
        for (k, r) in self.relations.iter().enumerate() {
            let mut ends_r: Option<(usize, usize)> = None;
            for (_, path) in &r.terms {
                let (first, last) = match (path.first(), path.last()) {
                    (Some(&f), Some(&l)) => (f, l),
                    _ => return Err(Error::Invalid(format!("relation {k} has an empty path"))),
                };
                if path.iter().any(|&a| a >= self.arrows.len()) {
                    return Err(Error::Invalid(format!(
                        "relation {k} names an unknown arrow"
                    )));
                }
                if path
                    .windows(2)
                    .any(|w| self.arrows[w[0]].1 != self.arrows[w[1]].0)
                {
                    return Err(Error::Invalid(format!(
                        "relation {k} contains a non-composable path"
                    )));
                }
                let e = (self.arrows[first].0, self.arrows[last].1);
                if ends_r.is_some_and(|p| p != e) {
                    return Err(Error::Invalid(format!(
                        "relation {k} mixes non-parallel paths"
                    )));
                }
                ends_r = Some(e);
            }
            let e = ends_r.ok_or_else(|| Error::Invalid(format!("relation {k} is empty")))?;
            ends.push(e);
        }
        let mut indeg = vec![0; n];
        for (_, t, _) in &self.arrows {
            indeg[*t] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::new();
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            topo.push(v);
            for (s, t, _) in &self.arrows {
                if *s == v {
                    indeg[*t] -= 1;
                    if indeg[*t] == 0 {
                        ready.insert(*t);
                    }
                }
            }
        }
        if topo.len() != n {
            return Err(Error::Invalid("quiver has an oriented cycle".into()));
        }
        Ok((topo, ends))
    }

    fn fan(
        &self,
        field: Field,
        x: usize,
        topo: &[usize],
        ends: &[(usize, usize)],
        into: &[Vec<usize>],
    ) -> Fan {
        let n = self.names.len();
        let mut dims = vec![0; n];
        let mut words = vec![Vec::new(); n];
        let mut arrow_maps: Vec<Option<Matrix>> = vec![None; self.arrows.len()];
        dims[x] = 1;
        words[x] = vec![Word::Identity];
        let start = topo
            .iter()
            .position(|&v| v == x)
            .expect("x in topological order");
        for &y in &topo[start + 1..] {
            let mut offsets = HashMap::new();
            let mut total = 0;
            for &a in &into[y] {
                let s = self.arrows[a].0;
                if dims[s] > 0 {
                    offsets.insert(a, total);
                    total += dims[s];
                }
            }
            if total == 0 {
                continue;
            }
            let mut rels = Vec::new();
            for (r, &(a, b)) in self.relations.iter().zip(ends) {
                if b != y || dims[a] == 0 {
                    continue;
                }
                for g in 0..dims[a] {
                    let mut v = vec![field.zero(); total];
                    for (c, path) in &r.terms {
                        let (last, prefix) = path.split_last().expect("nonempty path");
                        let mut cur = unit_vec(field, dims[a], g);
                        let mut alive = true;
                        for &p in prefix {
                            match &arrow_maps[p] {
                                Some(m) => cur = m.mul_vec(&cur),
                                None => {
                                    alive = false;
                                    break;
                                }
                            }
                        }
                        if !alive {
                            continue;
                        }
                        if let Some(&off) = offsets.get(last) {
                            for (i, val) in cur.iter().enumerate() {
                                if !val.is_zero() {
                                    v[off + i] = &v[off + i] + &(c * val);
                                }
                            }
                        }
                    }
                    rels.push(v);
                }
            }
            let quotient = QuotientSpace::new_reversed(field, total, &rels);
            dims[y] = quotient.dim();
            if dims[y] == 0 {
                continue;
            }
            let proj = quotient.projection_matrix();
            let mut slot = vec![(0usize, 0usize); total];
            for (&a, &off) in &offsets {
                let s = self.arrows[a].0;
                for i in 0..dims[s] {
                    slot[off + i] = (a, i);
                }
                let cols: Vec<usize> = (off..off + dims[s]).collect();
                arrow_maps[a] = Some(proj.select_cols(&cols));
            }
            words[y] = quotient
                .complement()
                .iter()
                .map(|&c| Word::Step {
                    arrow: slot[c].0,
                    prev: slot[c].1,
                })
                .collect();
        }
        Fan {
            dims,
            words,
            arrow_maps,
        }
    }

    /// Builds the path category modulo the ideal generated by the relations, restricted to `objects`
    /// (all objects when `None`). `boundary` flags objects whose ambient predecessors were cut off.
    pub fn build(
        &self,
        field: Field,
        objects: Option<&[usize]>,
        boundary: Option<Vec<bool>>,
    ) -> Result<PresentedCategory> {
        let (topo, ends) = self.validate()?;
        let n = self.names.len();
        let mut into = vec![Vec::new(); n];
        for (k, (_, t, _)) in self.arrows.iter().enumerate() {
            into[*t].push(k);
        }
        let fans: Vec<Fan> = (0..n)
            .map(|x| self.fan(field, x, &topo, &ends, &into))
            .collect();
        let all: Vec<usize> = (0..n).collect();
        let objects = objects.unwrap_or(&all);
        let subset = objects.len() != n || objects.iter().enumerate().any(|(i, &o)| i != o);
        let m = objects.len();
        let pos: HashMap<usize, usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();

        let mut dims = vec![0; m * m];
        let mut labels = vec![Vec::new(); m * m];
        for (i, &x) in objects.iter().enumerate() {
            for (j, &y) in objects.iter().enumerate() {
                dims[i * m + j] = fans[x].dims[y];
                labels[i * m + j] = (0..fans[x].dims[y])
                    .map(|k| self.word_label(&fans[x], x, y, k))
                    .collect();
            }
        }

        // Composition: for fixed x, y the map f ↦ g ∘ f is pushed along the words of g.
        let mut table = HashMap::new();
        for &x in objects {
            for &y in objects {
                let dxy = fans[x].dims[y];
                if x == y || dxy == 0 {
                    continue;
                }
                let mut blocks: Vec<Option<Matrix>> = vec![None; n];
                blocks[y] = Some(Matrix::identity(field, dxy));
                let start = topo.iter().position(|&v| v == y).expect("y in order");
                for &w in &topo[start + 1..] {
                    let dyw = fans[y].dims[w];
                    let dxw = fans[x].dims[w];
                    if dyw == 0 || dxw == 0 {
                        continue;
                    }
                    let mut t = Matrix::zeros(field, dxw, dyw * dxy);
                    for (g, word) in fans[y].words[w].iter().enumerate() {
                        let Word::Step { arrow, prev } = *word else {
                            unreachable!("only y has the identity")
                        };
                        let z = self.arrows[arrow].0;
                        let (Some(bz), Some(am)) = (&blocks[z], &fans[x].arrow_maps[arrow]) else {
                            continue;
                        };
                        let cols: Vec<usize> = (prev * dxy..(prev + 1) * dxy).collect();
                        let piece = am * &bz.select_cols(&cols);
                        t.paste(0, g * dxy, &piece);
                    }
                    blocks[w] = Some(t);
                }
                for &w in objects {
                    if w == x || w == y {
                        continue;
                    }
                    if let Some(t) = blocks[w].take() {
                        if !t.is_zero() {
                            table.insert((pos[&x], pos[&y], pos[&w]), t);
                        }
                    }
                }
            }
        }

        let (generators, lifts) = if subset {
            (None, None)
        } else {
            let mut gens = Vec::new();
            let mut gen_of_arrow = HashMap::new();
            for (k, (s, t, name)) in self.arrows.iter().enumerate() {
                if let Some(mat) = &fans[*s].arrow_maps[k] {
                    let v = mat.column(0);
                    if v.iter().any(|c| !c.is_zero()) {
                        gen_of_arrow.insert(k, gens.len());
                        gens.push(Generator {
                            source: *s,
                            target: *t,
                            vector: v,
                            name: name.clone(),
                        });
                    }
                }
            }
            let mut lifts = HashMap::new();
            for x in 0..n {
                for y in 0..n {
                    if x == y || fans[x].dims[y] == 0 {
                        continue;
                    }
                    let per_basis = fans[x].words[y]
                        .iter()
                        .map(|w| match *w {
                            Word::Step { arrow, prev } => gen_of_arrow
                                .get(&arrow)
                                .map(|&g| {
                                    vec![Lift {
                                        generator: g,
                                        factor: unit_vec(
                                            field,
                                            fans[x].dims[self.arrows[arrow].0],
                                            prev,
                                        ),
                                    }]
                                })
                                .unwrap_or_default(),
                            Word::Identity => unreachable!("identity only at x"),
                        })
                        .collect();
                    lifts.insert((x, y), per_basis);
                }
            }
            (Some(gens), Some(lifts))
        };
        let boundary = boundary.unwrap_or_else(|| vec![false; n]);
        PresentedCategory::assemble(CategoryParts {
            field,
            names: objects.iter().map(|&o| self.names[o].clone()).collect(),
            coords: objects.iter().map(|&o| self.coords[o]).collect(),
            dims,
            labels,
            table,
            generators,
            lifts,
            boundary_in: objects.iter().map(|&o| boundary[o]).collect(),
        })
    }

    fn word_label(&self, fan: &Fan, x: usize, y: usize, k: usize) -> String {
        let mut arrows = Vec::new();
        let (mut cur, mut idx) = (y, k);
        while let Word::Step { arrow, prev } = fan.words[cur][idx] {
            arrows.push(self.arrows[arrow].2.as_str());
            cur = self.arrows[arrow].0;
            idx = prev;
        }
        if arrows.is_empty() {
            return format!("id_{}", self.names[x]);
        }
        arrows.reverse();
        arrows.join(" . ")
    }
}

/// The mesh relations `Σ σ(α)·α` of a translation quiver at its non-projective vertices.
pub fn mesh_relations(q: &TranslationQuiver, field: Field) -> Vec<Relation> {
    (0..q.vertex_count())
        .filter_map(|x| q.mesh_at(x).ok())
        .map(|mesh| Relation {
            terms: mesh
                .incoming
                .iter()
                .zip(&mesh.sigma)
                .map(|(&a, &s)| (field.one(), vec![s, a]))
                .collect(),
        })
        .collect()
}

/// The mesh category of a translation quiver restricted to a path-convex window.
pub fn build_mesh_category(
    q: &TranslationQuiver,
    w: &Window,
    field: Field,
) -> Result<PresentedCategory> {
    if !w.is_path_convex() {
        return Err(Error::WindowTooSmall(
            "window is not path-convex; use a truncation to work on its hull".into(),
        ));
    }
    let keep: Vec<usize> = w.vertices().iter().copied().collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut arrow_pos = HashMap::new();
    let mut arrows = Vec::new();
    for (k, a) in q.arrows().iter().enumerate() {
        if let (Some(&s), Some(&t)) = (pos.get(&a.source), pos.get(&a.target)) {
            arrow_pos.insert(k, arrows.len());
            arrows.push((s, t, a.name.clone()));
        }
    }
    let mut relations = Vec::new();
    for &x in &keep {
        let Ok(mesh) = q.mesh_at(x) else { continue };
        if !pos.contains_key(&mesh.tau) {
            continue;
        }
        let terms = mesh
            .incoming
            .iter()
            .zip(&mesh.sigma)
            .filter_map(|(a, s)| Some((field.one(), vec![*arrow_pos.get(s)?, *arrow_pos.get(a)?])))
            .collect();
        relations.push(Relation { terms });
    }
    let boundary: Vec<bool> = keep
        .iter()
        .map(|&v| match (q.ambient(), q.coords(v)) {
            (Some(amb), Some(c)) => amb.arrows_in(c).iter().any(|a| {
                q.find_vertex(a.source)
                    .is_none_or(|s| !pos.contains_key(&s))
            }),
            _ => q
                .arrows_into(v)
                .iter()
                .any(|&a| !pos.contains_key(&q.arrows()[a].source)),
        })
        .collect();
    let rq = QuiverWithRelations {
        names: keep.iter().map(|&v| q.name(v).to_string()).collect(),
        arrows,
        relations,
        coords: keep.iter().map(|&v| q.coords(v)).collect(),
    };
    rq.build(field, None, Some(boundary))
}
