use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::ambient::{Ambient, ExtendedDynkin, Family, Vertex};
use super::translation::TranslationQuiver;
use crate::error::{Error, Result};

fn check_columns(cols: &RangeInclusive<i64>) -> Result<()> {
    if cols.end() - cols.start() + 1 < 2 {
        return Err(Error::Invalid(
            "a window needs at least 2 columns to hold a mesh".into(),
        ));
    }
    Ok(())
}

/// `ZA∞` on rows `1..=rows` and columns `cols`, vertex `(i, j)` in row `i`, column `j`.
pub fn gen_za_inf(rows: usize, cols: RangeInclusive<i64>) -> Result<TranslationQuiver> {
    check_columns(&cols)?;
    if rows == 0 {
        return Err(Error::Invalid("at least one row is needed".into()));
    }
    let ambient = Ambient::new(Family::ZAInf)?;
    let set = cols
        .flat_map(|j| (1..=rows as i64).map(move |i| Vertex::new(2 * j + i, i)))
        .collect();
    Ok(TranslationQuiver::from_ambient(&ambient, &set))
}

/// `ZA∞^∞` on the given rows (the `Y` coordinate) and columns; column `c` holds `(2c + Y mod 2, Y)`.
pub fn gen_za_inf_inf(
    rows: RangeInclusive<i64>,
    cols: RangeInclusive<i64>,
) -> Result<TranslationQuiver> {
    check_columns(&cols)?;
    let ambient = Ambient::new(Family::ZAInfInf)?;
    let set = cols
        .flat_map(|c| {
            rows.clone()
                .map(move |y| Vertex::new(2 * c + y.rem_euclid(2), y))
        })
        .collect();
    Ok(TranslationQuiver::from_ambient(&ambient, &set))
}

/// `ZD∞` with the fork `a, b` and the chain `c_1..c_depth`; column `c` holds the vertices at times `2c`, `2c+1`.
pub fn gen_zd_inf(depth: usize, cols: RangeInclusive<i64>) -> Result<TranslationQuiver> {
    check_columns(&cols)?;
    let ambient = Ambient::new(Family::ZDInf)?;
    let mut set = BTreeSet::new();
    for c in cols {
        for node in 0..=(depth as i64 + 1) {
            set.insert(Vertex::new(2 * c + ambient.colour(node), node));
        }
    }
    Ok(TranslationQuiver::from_ambient(&ambient, &set))
}

/// `NΣ` for an extended Dynkin diagram, first `depth` τ-orbits columns.
pub fn gen_n_extended_dynkin(kind: ExtendedDynkin, depth: usize) -> Result<TranslationQuiver> {
    if depth < 2 {
        return Err(Error::Invalid(
            "a window needs at least 2 columns to hold a mesh".into(),
        ));
    }
    let ambient = Ambient::new(Family::NExtended(kind))?;
    let set = (0..2 * depth as i64)
        .flat_map(|t| (1..=64).map(move |v| Vertex::new(t, v)))
        .filter(|v| ambient.contains(*v))
        .collect();
    Ok(TranslationQuiver::from_ambient(&ambient, &set))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiltrationKind {
    /// The family's first labelled filtration.
    Standard,
    /// `ZA∞` only: growing boxes around `(2,1)`.
    Boxes,
}

impl FiltrationKind {
    pub fn parse(s: &str) -> Result<FiltrationKind> {
        match s {
            "standard" => Ok(FiltrationKind::Standard),
            "boxes" => Ok(FiltrationKind::Boxes),
            _ => Err(Error::Invalid(format!(
                "unknown filtration `{s}` (standard or boxes)"
            ))),
        }
    }
}

/// A filtration given by labelled vertices `E^i_j`; `layers[i-1]` lists `(j, vertex)` in label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledFiltration {
    pub family: Family,
    pub layers: Vec<Vec<(i64, Vertex)>>,
}

impl LabeledFiltration {
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// `|B_i|` for each `i`.
    pub fn cumulative_sizes(&self) -> Vec<usize> {
        self.layers
            .iter()
            .scan(0, |acc, l| {
                *acc += l.len();
                Some(*acc)
            })
            .collect()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.layers.iter().flatten().map(|(_, v)| *v).collect()
    }

    pub fn vertex(&self, i: usize, j: i64) -> Option<Vertex> {
        self.layers
            .get(i.checked_sub(1)?)?
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, v)| *v)
    }

    pub fn label_of(&self, v: Vertex) -> Option<(usize, i64)> {
        self.layers
            .iter()
            .enumerate()
            .find_map(|(i, l)| l.iter().find(|(_, w)| *w == v).map(|(j, _)| (i + 1, *j)))
    }

    /// Parses `E5_7`, `E^5_7` or `5_7` into `(5, 7)`.
    pub fn parse_label(s: &str) -> Option<(usize, i64)> {
        let s = s.trim_start_matches('E').trim_start_matches('^');
        let (i, j) = s.split_once('_')?;
        Some((
            i.parse().ok()?,
            j.trim_matches(|c| c == '{' || c == '}').parse().ok()?,
        ))
    }
}

pub fn label_name(i: usize, j: i64) -> String {
    format!("E{i}_{j}")
}

/// The labelled filtrations of the example families, truncated to `layers` layers.
///
/// `cols` is used only by the row filtration of `ZA∞`, whose layers are infinite.
pub fn example_filtration(
    family: Family,
    kind: FiltrationKind,
    layers: usize,
    cols: Option<RangeInclusive<i64>>,
) -> Result<LabeledFiltration> {
    if layers == 0 {
        return Err(Error::Invalid("at least one layer is needed".into()));
    }
    let ambient = Ambient::new(family)?;
    let layers = match (family, kind) {
        (Family::ZAInf, FiltrationKind::Standard) => {
            let cols = cols
                .ok_or_else(|| Error::Invalid("the row filtration needs a column range".into()))?;
            check_columns(&cols)?;
            (1..=layers as i64)
                .map(|i| {
                    cols.clone()
                        .map(|j| (j, Vertex::new(2 * j + i, i)))
                        .collect()
                })
                .collect()
        }
        (Family::ZAInf, FiltrationKind::Boxes) => {
            box_layers(layers, 4, |k| (1..=k as i64 + 1).collect(), &ambient)
        }
        (Family::ZDInf, FiltrationKind::Standard) => {
            box_layers(layers, 9, |k| (0..=k as i64 + 1).collect(), &ambient)
        }
        (Family::ZAInfInf, FiltrationKind::Standard) => ring_layers(layers),
        (Family::NExtended(_), FiltrationKind::Standard) => (0..layers as i64)
            .map(|t| {
                (1..=64)
                    .map(|v| Vertex::new(t, v))
                    .filter(|v| ambient.contains(*v))
                    .map(|v| (v.node, v))
                    .collect()
            })
            .collect(),
        (f, FiltrationKind::Boxes) => {
            return Err(Error::Invalid(format!(
                "no box filtration for {}",
                f.name()
            )));
        }
    };
    Ok(LabeledFiltration { family, layers })
}

/// Layer `k` adds the vertices at times `|t − centre| ≤ k−1` on the nodes `nodes(k)`:
/// left column top to bottom, then the new bottom vertices left to right, then the right column upwards.
fn box_layers(
    count: usize,
    centre: i64,
    nodes: impl Fn(usize) -> Vec<i64>,
    ambient: &Ambient,
) -> Vec<Vec<(i64, Vertex)>> {
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let mut out = Vec::new();
    for k in 1..=count {
        let r = k as i64 - 1;
        let ns = nodes(k);
        let mut fresh: Vec<Vertex> = (centre - r..=centre + r)
            .flat_map(|t| ns.iter().map(move |&n| Vertex::new(t, n)))
            .filter(|v| ambient.contains(*v) && !seen.contains(v))
            .collect();
        let left = centre - r;
        let right = centre + r;
        fresh.sort_by_key(|v| {
            if v.time == left {
                (0, v.node, 0)
            } else if v.time == right {
                (2, -v.node, 0)
            } else {
                (1, v.time, v.node)
            }
        });
        seen.extend(fresh.iter().copied());
        out.push(
            fresh
                .into_iter()
                .enumerate()
                .map(|(j, v)| (j as i64 + 1, v))
                .collect(),
        );
    }
    out
}

/// Square rings around `(9, 3)` in `ZA∞^∞`, read clockwise from the top-left corner.
fn ring_layers(count: usize) -> Vec<Vec<(i64, Vertex)>> {
    let (cx, cy) = (9i64, 3i64);
    let mut out = vec![vec![(1, Vertex::new(cx, cy))]];
    for k in 1..count as i64 {
        let mut ring = Vec::new();
        let mut x = cx - k;
        while x <= cx + k {
            ring.push(Vertex::new(x, cy + k));
            x += 2;
        }
        let mut y = cy + k - 2;
        while y >= cy - k {
            ring.push(Vertex::new(cx + k, y));
            y -= 2;
        }
        let mut x = cx + k - 2;
        while x >= cx - k {
            ring.push(Vertex::new(x, cy - k));
            x -= 2;
        }
        let mut y = cy - k + 2;
        while y <= cy + k - 2 {
            ring.push(Vertex::new(cx - k, y));
            y += 2;
        }
        out.push(
            ring.into_iter()
                .enumerate()
                .map(|(j, v)| (j as i64 + 1, v))
                .collect(),
        );
    }
    out
}
