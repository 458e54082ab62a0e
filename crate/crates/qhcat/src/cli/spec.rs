use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::meshcat::{
    build_mesh_category, truncation, PresentedCategory, QuiverWithRelations, Relation,
};
use crate::qhcheck::Filtration;
use crate::quiver::{
    example_filtration, Ambient, Family, FiltrationKind, LabeledFiltration, QuiverArrow,
    TranslationQuiver, Vertex, Window,
};

/// A category together with its filtration, read from JSON or assembled from flags.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub quiver: Option<QuiverSpec>,
    /// Layers of object names for an explicit quiver.
    #[serde(default)]
    pub layers: Option<Vec<Vec<String>>>,
}

fn default_field() -> String {
    "q".into()
}

fn default_filtration() -> String {
    "standard".into()
}

fn default_layers() -> usize {
    4
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    #[serde(default = "default_filtration")]
    pub filtration: String,
    #[serde(default = "default_layers")]
    pub layers: usize,
    /// Column range of the `za-inf` row filtration.
    #[serde(default)]
    pub cols: Option<[i64; 2]>,
    /// Extra vertices rendered in diagrams: a time range and a node range.
    #[serde(default)]
    pub window: Option<WindowSpec>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub times: [i64; 2],
    pub nodes: [i64; 2],
}

impl WindowSpec {
    /// Parses `T0..T1xN0..N1`.
    pub fn parse(s: &str) -> Result<WindowSpec> {
        let bad = || Error::Invalid(format!("bad window `{s}` (expected T0..T1xN0..N1)"));
        let (t, n) = s.split_once('x').ok_or_else(bad)?;
        let range = |r: &str| -> Result<[i64; 2]> {
            let (a, b) = r.split_once("..").ok_or_else(bad)?;
            Ok([
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ])
        };
        Ok(WindowSpec {
            times: range(t)?,
            nodes: range(n)?,
        })
    }

    pub fn vertices(&self, ambient: &Ambient) -> Vec<Vertex> {
        (self.times[0]..=self.times[1])
            .flat_map(|t| (self.nodes[0]..=self.nodes[1]).map(move |n| Vertex::new(t, n)))
            .filter(|v| ambient.contains(*v))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    /// Each relation is a list of terms; paths list arrow names in the order traversed.
    #[serde(default)]
    pub relations: Vec<Vec<TermSpec>>,
    /// Pairs `[x, τx]`; when present the mesh relations are used instead of `relations`.
    #[serde(default)]
    pub tau: Vec<[String; 2]>,
    /// Pairs `[α, σα]` of arrow names, needed only where `σ` is ambiguous.
    #[serde(default)]
    pub sigma: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default = "one")]
    pub coef: i64,
    pub path: Vec<String>,
}

fn one() -> i64 {
    1
}

/// A built category: the filtration covers every object; `labels` is set for builtin families.
#[derive(Clone, Debug)]
pub struct Built {
    pub category: Arc<PresentedCategory>,
    pub filtration: Filtration,
    pub labels: Option<LabeledFiltration>,
    pub ambient: Option<Ambient>,
    pub dot: String,
}

impl Built {
    /// An object by name, by label `E<i>_<j>`, or by ambient coordinates `time,node`.
    pub fn object(&self, name: &str) -> Result<usize> {
        if let Some(x) = self.category.find(name) {
            return Ok(x);
        }
        if let (Some(lf), Some((i, j))) = (&self.labels, LabeledFiltration::parse_label(name)) {
            if let Some(x) = lf.vertex(i, j).and_then(|v| self.category.find_vertex(v)) {
                return Ok(x);
            }
        }
        if let Some((t, n)) = name.split_once(',') {
            if let (Ok(t), Ok(n)) = (t.trim().parse(), n.trim().parse()) {
                if let Some(x) = self.category.find_vertex(Vertex::new(t, n)) {
                    return Ok(x);
                }
            }
        }
        Err(Error::UnknownObject(name.to_string()))
    }
}

impl SpecFile {
    pub fn field(&self) -> Result<Field> {
        Field::parse(&self.field)
    }

    pub fn build(&self) -> Result<Built> {
        let field = self.field()?;
        match (&self.family, &self.quiver) {
            (Some(f), None) => {
                if self.layers.is_some() {
                    return Err(Error::Invalid(
                        "`layers` lists object names and is only used with `quiver`".into(),
                    ));
                }
                build_family(f, field, f.layers)
            }
            (None, Some(q)) => {
                let layers = self
                    .layers
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("an explicit quiver needs `layers`".into()))?;
                build_quiver(q, layers, field)
            }
            _ => Err(Error::Invalid(
                "give exactly one of `family` and `quiver`".into(),
            )),
        }
    }
}

pub fn labeled_filtration(f: &FamilySpec, layers: usize) -> Result<(Ambient, LabeledFiltration)> {
    let family = Family::parse(&f.name)?;
    let kind = FiltrationKind::parse(&f.filtration)?;
    let cols = match (family, kind, f.cols) {
        (Family::ZAInf, FiltrationKind::Standard, None) => Some(-2..=2),
        (_, _, c) => c.map(|[a, b]| a..=b),
    };
    Ok((
        Ambient::new(family)?,
        example_filtration(family, kind, layers, cols)?,
    ))
}

pub fn build_family(f: &FamilySpec, field: Field, layers: usize) -> Result<Built> {
    let (ambient, lf) = labeled_filtration(f, layers)?;
    let objs: Vec<Vertex> = lf.layers.iter().flatten().map(|(_, v)| *v).collect();
    let category = Arc::new(truncation(&ambient, &objs, field)?);
    let filtration = Filtration::from_labeled(&category, &lf)?;
    let set: BTreeSet<Vertex> = objs.iter().copied().collect();
    let dot = TranslationQuiver::from_ambient(&ambient, &set).to_dot();
    Ok(Built {
        category,
        filtration,
        labels: Some(lf),
        ambient: Some(ambient),
        dot,
    })
}

fn build_quiver(q: &QuiverSpec, layers: &[Vec<String>], field: Field) -> Result<Built> {
    let vertex = |name: &str| {
        q.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    };
    let arrow = |name: &str| {
        q.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Invalid(format!("unknown arrow `{name}`")))
    };
    let arrows = q
        .arrows
        .iter()
        .map(|a| Ok((vertex(&a.from)?, vertex(&a.to)?, a.name.clone())))
        .collect::<Result<Vec<_>>>()?;
    let (category, dot) = if q.tau.is_empty() {
        if !q.sigma.is_empty() {
            return Err(Error::Invalid("`sigma` needs `tau`".into()));
        }
        let relations = q
            .relations
            .iter()
            .map(|terms| {
                Ok(Relation {
                    terms: terms
                        .iter()
                        .map(|t| {
                            let path = t
                                .path
                                .iter()
                                .map(|a| arrow(a))
                                .collect::<Result<Vec<_>>>()?;
                            Ok((field.from_i64(t.coef), path))
                        })
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let rq = QuiverWithRelations::new(q.vertices.clone(), arrows.clone(), relations);
        let mut dot = String::from("digraph quiver {\n  rankdir=LR;\n");
        for (i, name) in q.vertices.iter().enumerate() {
            dot.push_str(&format!("  v{i} [label=\"{name}\"];\n"));
        }
        for (s, t, name) in &arrows {
            dot.push_str(&format!("  v{s} -> v{t} [label=\"{name}\"];\n"));
        }
        dot.push_str("}\n");
        (rq.build(field, None, None)?, dot)
    } else {
        if !q.relations.is_empty() {
            return Err(Error::Invalid(
                "`relations` and `tau` are exclusive: a translation quiver uses its mesh relations"
                    .into(),
            ));
        }
        let qa = arrows
            .iter()
            .map(|(s, t, name)| QuiverArrow {
                source: *s,
                target: *t,
                name: name.clone(),
            })
            .collect();
        let tau = q
            .tau
            .iter()
            .map(|[x, t]| Ok((vertex(x)?, vertex(t)?)))
            .collect::<Result<Vec<_>>>()?;
        let sigma = q
            .sigma
            .iter()
            .map(|[a, s]| Ok((arrow(a)?, arrow(s)?)))
            .collect::<Result<Vec<_>>>()?;
        let tq = TranslationQuiver::new(q.vertices.clone(), qa, &tau, &sigma)?;
        let dot = tq.to_dot();
        (build_mesh_category(&tq, &Window::full(&tq), field)?, dot)
    };
    let category = Arc::new(category);
    let layers = layers
        .iter()
        .map(|l| l.iter().map(|n| vertex(n)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let filtration = Filtration::new(&category, layers)?.declare_finite();
    Ok(Built {
        category,
        filtration,
        labels: None,
        ambient: None,
        dot,
    })
}
