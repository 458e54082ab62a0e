use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex `(time, node)` of an infinite translation quiver `ZΣ` or `NΣ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub time: i64,
    pub node: i64,
}

impl Vertex {
    pub fn new(time: i64, node: i64) -> Vertex {
        Vertex { time, node }
    }
}

/// An arrow of the ambient quiver, coming from the edge `edge` of the underlying graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmbientArrow {
    pub source: Vertex,
    pub target: Vertex,
    pub edge: i64,
}

/// Extended Dynkin diagrams with vertices numbered `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtendedDynkin {
    /// Cycle on `m + 1` vertices.
    A(usize),
    /// `n + 1` vertices, forks at both ends.
    D(usize),
    E6,
    E7,
    E8,
}

impl ExtendedDynkin {
    pub fn parse(kind: &str, m: usize) -> Result<ExtendedDynkin> {
        match kind.to_ascii_lowercase().as_str() {
            "a" => Ok(ExtendedDynkin::A(m)),
            "d" => Ok(ExtendedDynkin::D(m)),
            "e6" => Ok(ExtendedDynkin::E6),
            "e7" => Ok(ExtendedDynkin::E7),
            "e8" => Ok(ExtendedDynkin::E8),
            "e" if (6..=8).contains(&m) => ExtendedDynkin::parse(&format!("e{m}"), m),
            _ => Err(Error::Invalid(format!(
                "unknown extended Dynkin type {kind}{m}"
            ))),
        }
    }

    /// Vertex count and edge list on vertices `1..=n`.
    fn graph(self) -> Result<(usize, Vec<(i64, i64)>)> {
        let chain = |from: i64, to: i64| (from..to).map(|k| (k, k + 1)).collect::<Vec<_>>();
        match self {
            ExtendedDynkin::A(m) => {
                let n = m + 1;
                if m < 1 || n % 2 == 1 {
                    return Err(Error::Invalid(format!(
                        "the cycle with {n} vertices has no bipartite orientation"
                    )));
                }
                let mut edges = chain(1, n as i64);
                edges.push((n as i64, 1));
                Ok((n, edges))
            }
            ExtendedDynkin::D(n) => {
                if n < 4 {
                    return Err(Error::Invalid(format!("D~{n} needs n >= 4")));
                }
                let n = n as i64;
                let mut edges = vec![(1, 3), (2, 3)];
                edges.extend(chain(3, n - 1));
                edges.push((n - 1, n));
                edges.push((n - 1, n + 1));
                Ok(((n + 1) as usize, edges))
            }
            ExtendedDynkin::E6 => Ok((7, vec![(1, 2), (2, 7), (5, 4), (4, 7), (3, 6), (6, 7)])),
            ExtendedDynkin::E7 => {
                let mut edges = chain(1, 7);
                edges.push((8, 4));
                Ok((8, edges))
            }
            ExtendedDynkin::E8 => {
                let mut edges = chain(1, 8);
                edges.push((9, 3));
                Ok((9, edges))
            }
        }
    }
}

impl fmt::Display for ExtendedDynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDynkin::A(m) => write!(f, "A~{m}"),
            ExtendedDynkin::D(m) => write!(f, "D~{m}"),
            ExtendedDynkin::E6 => write!(f, "E~6"),
            ExtendedDynkin::E7 => write!(f, "E~7"),
            ExtendedDynkin::E8 => write!(f, "E~8"),
        }
    }
}

/// The infinite example families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    ZAInf,
    ZAInfInf,
    ZDInf,
    NExtended(ExtendedDynkin),
}

impl Family {
    pub fn parse(name: &str) -> Result<Family> {
        match name {
            "za-inf" => Ok(Family::ZAInf),
            "za-inf-inf" => Ok(Family::ZAInfInf),
            "zd-inf" => Ok(Family::ZDInf),
            s => {
                let rest = s
                    .strip_prefix("n-")
                    .ok_or_else(|| Error::Invalid(format!("unknown family `{s}`")))?;
                let split = rest
                    .find(|c: char| c.is_ascii_digit())
                    .unwrap_or(rest.len());
                let (kind, num) = rest.split_at(split);
                let m: usize = num
                    .parse()
                    .map_err(|_| Error::Invalid(format!("family `{s}` needs a size, e.g. n-d4")))?;
                Ok(Family::NExtended(ExtendedDynkin::parse(kind, m)?))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::ZAInf => "za-inf".into(),
            Family::ZAInfInf => "za-inf-inf".into(),
            Family::ZDInf => "zd-inf".into(),
            Family::NExtended(d) => match d {
                ExtendedDynkin::A(m) => format!("n-a{m}"),
                ExtendedDynkin::D(m) => format!("n-d{m}"),
                ExtendedDynkin::E6 => "n-e6".into(),
                ExtendedDynkin::E7 => "n-e7".into(),
                ExtendedDynkin::E8 => "n-e8".into(),
            },
        }
    }
}

/// An infinite translation quiver `ZΣ` (or `NΣ`), with vertices `(x, v)` for `x ≡ colour(v) mod 2`,
/// arrows `(x, u) → (x+1, w)` for every edge `u – w`, and `τ(x, v) = (x−2, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    family: Family,
    graph: Option<FiniteGraph>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct FiniteGraph {
    size: usize,
    edges: Vec<(i64, i64)>,
    colour: Vec<i64>,
}

impl Ambient {
    pub fn new(family: Family) -> Result<Ambient> {
        let graph = match family {
            Family::NExtended(d) => {
                let (size, edges) = d.graph()?;
                Some(FiniteGraph {
                    size,
                    colour: two_colour(size, &edges)?,
                    edges,
                })
            }
            _ => None,
        };
        Ok(Ambient { family, graph })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    fn valid_node(&self, node: i64) -> bool {
        match (&self.family, &self.graph) {
            (Family::ZAInf, _) => node >= 1,
            (Family::ZAInfInf, _) => true,
            (Family::ZDInf, _) => node >= 0,
            (_, Some(g)) => node >= 1 && node <= g.size as i64,
            _ => false,
        }
    }

    pub fn colour(&self, node: i64) -> i64 {
        match (&self.family, &self.graph) {
            (Family::ZDInf, _) if node <= 1 => 0,
            (Family::ZDInf, _) => (node - 1).rem_euclid(2),
            (Family::NExtended(_), Some(g)) => g.colour[(node - 1) as usize],
            _ => node.rem_euclid(2),
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.valid_node(v.node)
            && v.time.rem_euclid(2) == self.colour(v.node)
            && (!matches!(self.family, Family::NExtended(_)) || v.time >= 0)
    }

    /// Neighbours of a node in Σ, with edge ids.
    pub fn neighbours(&self, node: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        match (&self.family, &self.graph) {
            (Family::ZAInf, _) => {
                if node > 1 {
                    out.push((node - 1, node - 1));
                }
                out.push((node + 1, node));
            }
            (Family::ZAInfInf, _) => {
                out.push((node - 1, node - 1));
                out.push((node + 1, node));
            }
            (Family::ZDInf, _) => match node {
                0 | 1 => out.push((2, node)),
                2 => {
                    out.extend([(0, 0), (1, 1), (3, 2)]);
                }
                k => {
                    out.push((k - 1, k - 1));
                    out.push((k + 1, k));
                }
            },
            (_, Some(g)) => {
                for (id, &(u, w)) in g.edges.iter().enumerate() {
                    if u == node {
                        out.push((w, id as i64));
                    } else if w == node {
                        out.push((u, id as i64));
                    }
                }
            }
            _ => {}
        }
        out.sort_unstable();
        out
    }

    pub fn arrows_out(&self, v: Vertex) -> Vec<AmbientArrow> {
        self.neighbours(v.node)
            .into_iter()
            .map(|(w, edge)| AmbientArrow {
                source: v,
                target: Vertex::new(v.time + 1, w),
                edge,
            })
            .filter(|a| self.contains(a.target))
            .collect()
    }

    pub fn arrows_in(&self, v: Vertex) -> Vec<AmbientArrow> {
        self.neighbours(v.node)
            .into_iter()
            .map(|(w, edge)| AmbientArrow {
                source: Vertex::new(v.time - 1, w),
                target: v,
                edge,
            })
            .filter(|a| self.contains(a.source))
            .collect()
    }

    pub fn tau(&self, v: Vertex) -> Option<Vertex> {
        let t = Vertex::new(v.time - 2, v.node);
        self.contains(t).then_some(t)
    }

    pub fn tau_inverse(&self, v: Vertex) -> Option<Vertex> {
        let t = Vertex::new(v.time + 2, v.node);
        self.contains(t).then_some(t)
    }

    /// Semitranslation: `σ(α: a → b) = (τb → a)` along the same edge.
    pub fn sigma(&self, a: AmbientArrow) -> Option<AmbientArrow> {
        let tb = self.tau(a.target)?;
        Some(AmbientArrow {
            source: tb,
            target: a.source,
            edge: a.edge,
        })
    }

    /// Human-readable vertex name in the family's native coordinates.
    pub fn vertex_name(&self, v: Vertex) -> String {
        match self.family {
            Family::ZAInf => format!("({},{})", v.node, (v.time - v.node).div_euclid(2)),
            Family::ZAInfInf => format!("({},{})", v.time, v.node),
            Family::ZDInf => {
                let n = match v.node {
                    0 => "a".to_string(),
                    1 => "b".to_string(),
                    k => format!("c{}", k - 1),
                };
                format!("{n}@{}", v.time)
            }
            Family::NExtended(_) => format!("({},{})", v.time.div_euclid(2) + 1, v.node),
        }
    }

    /// Vertices in a time range reachable forwards from `seeds` (inclusive).
    fn reach(
        &self,
        seeds: &BTreeSet<Vertex>,
        t_min: i64,
        t_max: i64,
        forward: bool,
    ) -> BTreeSet<Vertex> {
        let mut seen: BTreeSet<Vertex> = seeds.clone();
        let mut queue: VecDeque<Vertex> = seeds.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            let next: Vec<Vertex> = if forward {
                self.arrows_out(v).into_iter().map(|a| a.target).collect()
            } else {
                self.arrows_in(v).into_iter().map(|a| a.source).collect()
            };
            for w in next {
                if w.time >= t_min && w.time <= t_max && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Smallest path-convex vertex set containing `set`.
    pub fn convex_hull(&self, set: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
        let (Some(lo), Some(hi)) = (
            set.iter().map(|v| v.time).min(),
            set.iter().map(|v| v.time).max(),
        ) else {
            return BTreeSet::new();
        };
        let fwd = self.reach(set, lo, hi, true);
        let bwd = self.reach(set, lo, hi, false);
        fwd.intersection(&bwd).copied().collect()
    }

    pub fn is_path_convex(&self, set: &BTreeSet<Vertex>) -> bool {
        self.convex_hull(set) == *set
    }

    /// All vertices on some path from `from` to `to`.
    pub fn interval(&self, from: Vertex, to: Vertex) -> BTreeSet<Vertex> {
        let fwd = self.reach(&BTreeSet::from([from]), from.time, to.time, true);
        let bwd = self.reach(&BTreeSet::from([to]), from.time, to.time, false);
        fwd.intersection(&bwd).copied().collect()
    }
}

fn two_colour(size: usize, edges: &[(i64, i64)]) -> Result<Vec<i64>> {
    let mut colour = vec![-1i64; size];
    colour[0] = 0;
    let mut queue = VecDeque::from([1i64]);
    while let Some(u) = queue.pop_front() {
        for &(a, b) in edges {
            let w = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            let cu = colour[(u - 1) as usize];
            let cw = &mut colour[(w - 1) as usize];
            if *cw < 0 {
                *cw = 1 - cu;
                queue.push_back(w);
            } else if *cw == cu {
                return Err(Error::Invalid("graph is not bipartite".into()));
            }
        }
    }
    if colour.contains(&-1) {
        return Err(Error::Invalid("graph is not connected".into()));
    }
    Ok(colour)
}
