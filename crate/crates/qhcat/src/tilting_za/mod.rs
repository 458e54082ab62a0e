//! The family `T(r, s)` of `ZA∞`-modules and window-level checks of its tilting properties.
//!
//! Vertices are addressed as `(i, j)`: row `i ≥ 1` counted from the boundary, column `j`.
//! Arrows run `(i, j) → (i+1, j)` and `(i, j) → (i−1, j+1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::functors::{
    ext_from_resolution, hom_dim, map_from_free, minimal_resolution, projective_cover,
    FunctorModule, ModuleMap,
};
use crate::meshcat::{truncation, PresentedCategory};
use crate::qhcheck::{
    is_delta_filtered, standard_family, Certificate, CertificateKind, Evidence, Filtration,
    StandardFamily,
};
use crate::quiver::{Ambient, Family, Vertex};

/// Ambient vertex of the cell `(i, j)`.
pub fn cell_vertex(i: usize, j: i64) -> Vertex {
    Vertex::new(2 * j + i as i64, i as i64)
}

/// A finite set of cells with the full subcategory of the `ZA∞` mesh category on them.
#[derive(Clone, Debug)]
pub struct ZaWindow {
    cells: Vec<(usize, i64)>,
    index: BTreeMap<(usize, i64), usize>,
    category: Arc<PresentedCategory>,
    label: String,
}

impl ZaWindow {
    /// Rows `1..=rows`, columns `cols` in every row.
    pub fn rectangle(rows: usize, cols: RangeInclusive<i64>, field: Field) -> Result<ZaWindow> {
        let label = format!("rows 1..={rows}, columns {}..={}", cols.start(), cols.end());
        let cells = (1..=rows)
            .flat_map(|i| cols.clone().map(move |j| (i, j)))
            .collect();
        ZaWindow::from_cells(cells, field, label)
    }

    /// Rows `1..=rows`, every vertex whose time `2j + i` lies in `times`.
    pub fn band(rows: usize, times: RangeInclusive<i64>, field: Field) -> Result<ZaWindow> {
        let label = format!("rows 1..={rows}, times {}..={}", times.start(), times.end());
        let cells = (1..=rows)
            .flat_map(|i| {
                times
                    .clone()
                    .filter(move |t| (t - i as i64).rem_euclid(2) == 0)
                    .map(move |t| (i, (t - i as i64) / 2))
            })
            .collect();
        ZaWindow::from_cells(cells, field, label)
    }

    fn from_cells(cells: Vec<(usize, i64)>, field: Field, label: String) -> Result<ZaWindow> {
        if cells.is_empty() {
            return Err(Error::Invalid("a window needs at least one cell".into()));
        }
        let ambient = Ambient::new(Family::ZAInf)?;
        let vertices: Vec<Vertex> = cells.iter().map(|&(i, j)| cell_vertex(i, j)).collect();
        let category = Arc::new(truncation(&ambient, &vertices, field)?);
        let index = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        Ok(ZaWindow {
            cells,
            index,
            category,
            label,
        })
    }

    pub fn category(&self) -> &Arc<PresentedCategory> {
        &self.category
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cells(&self) -> &[(usize, i64)] {
        &self.cells
    }

    pub fn depth(&self) -> usize {
        self.cells.iter().map(|c| c.0).max().unwrap_or(0)
    }

    pub fn object(&self, i: usize, j: i64) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    fn require(&self, i: usize, j: i64) -> Result<usize> {
        self.object(i, j).ok_or_else(|| {
            Error::WindowTooSmall(format!(
                "the window ({}) lacks the cell ({i},{j})",
                self.label
            ))
        })
    }

    /// Columns holding a cell in the deepest row.
    pub fn full_columns(&self) -> Vec<i64> {
        let d = self.depth();
        let cols: BTreeSet<i64> = self
            .cells
            .iter()
            .filter(|c| c.0 == d)
            .map(|c| c.1)
            .collect();
        cols.into_iter().collect()
    }

    /// `B_i` = rows `1..=i`.
    pub fn row_filtration(&self) -> Result<Filtration> {
        let layers = (1..=self.depth())
            .map(|i| {
                self.cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.0 == i)
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        Ok(Filtration::new(&self.category, layers)?.declare_finite())
    }

    /// Text picture of a module: row 1 on top, one character slot per time step, `K` for a
    /// one-dimensional space, `0` for zero and the dimension otherwise.
    pub fn render(&self, m: &FunctorModule) -> String {
        let time = |&(i, j): &(usize, i64)| 2 * j + i as i64;
        let tmin = self.cells.iter().map(time).min().unwrap_or(0);
        let tmax = self.cells.iter().map(time).max().unwrap_or(0);
        let mut out = String::new();
        for i in 1..=self.depth() {
            let mut line = vec![' '; (tmax - tmin + 1) as usize];
            for (k, c) in self.cells.iter().enumerate().filter(|(_, c)| c.0 == i) {
                let d = m.dim(k);
                line[(time(c) - tmin) as usize] = match d {
                    0 => '0',
                    1 => 'K',
                    _ => char::from_digit(d.min(9) as u32, 10).unwrap_or('#'),
                };
            }
            let text: String = line.into_iter().collect();
            out.push_str(text.trim_end());
            out.push('\n');
        }
        out
    }
}

/// Whether `(i, j)` lies in the support of `T(r, s)`.
pub fn in_support(r: usize, s: i64, i: usize, j: i64) -> bool {
    i >= r && s + r as i64 - i as i64 <= j && j <= s
}

/// `T(r, s)` on a window, with the sequence `C(−, E^{r−1}_s) → T(1, s) → T(r, s)`.
#[derive(Clone, Debug)]
pub struct TiltingPiece {
    pub r: usize,
    pub s: i64,
    pub module: FunctorModule,
    /// `T(1, s)`, realized as the representable at the deepest cell of column `s`
    pub top: FunctorModule,
    pub inclusion: Option<ModuleMap>,
    pub projection: ModuleMap,
}

fn unit_map(window: &ZaWindow, from: usize, into: &FunctorModule) -> Result<ModuleMap> {
    let field = window.category.field();
    if into.dim(from) != 1 {
        return Err(Error::Invalid(format!(
            "expected a one-dimensional space at `{}`",
            window.category.name(from)
        )));
    }
    map_from_free(into, &[(from, vec![field.one()])])
}

pub fn build_t(window: &ZaWindow, r: usize, s: i64) -> Result<TiltingPiece> {
    if r == 0 {
        return Err(Error::Invalid("rows start at 1".into()));
    }
    let c = window.category();
    let deepest = window.require(window.depth(), s)?;
    let top = FunctorModule::representable(c, deepest);
    let (module, inclusion, projection) = if r == 1 {
        (top.clone(), None, ModuleMap::identity(&top))
    } else {
        let corner = window.require(r - 1, s)?;
        let inc = unit_map(window, corner, &top)?;
        let (quotient, proj) = inc.cokernel()?;
        (quotient, Some(inc), proj)
    };
    module.check_functorial()?;
    let piece = TiltingPiece {
        r,
        s,
        module,
        top,
        inclusion,
        projection,
    };
    if let Some((i, j)) = piece.definition_mismatch(window) {
        return Err(Error::Invalid(format!(
            "T({r},{s}) differs from its definition at ({i},{j})"
        )));
    }
    Ok(piece)
}

impl TiltingPiece {
    /// First cell where the support or an arrow action disagrees with the piecewise definition.
    pub fn definition_mismatch(&self, window: &ZaWindow) -> Option<(usize, i64)> {
        let c = window.category();
        for (k, &(i, j)) in window.cells.iter().enumerate() {
            if self.module.dim(k) != usize::from(in_support(self.r, self.s, i, j)) {
                return Some((i, j));
            }
        }
        for (g, gen) in c.generators().iter().enumerate() {
            let (a, b) = (window.cells[gen.source], window.cells[gen.target]);
            let adjacent = (b.0 == a.0 + 1 && b.1 == a.1) || (b.0 + 1 == a.0 && b.1 == a.1 + 1);
            let both = self.module.dim(gen.source) == 1 && self.module.dim(gen.target) == 1;
            if adjacent && both && self.module.gen_map(g).get(0, 0).is_zero() {
                return Some(a);
            }
        }
        None
    }
}

fn cell_name(i: usize, j: i64) -> String {
    format!("({i},{j})")
}

/// `0 → C(−, E^{r−1}_s) → T(1, s) → T(r, s) → 0`.
pub fn verify_ses(window: &ZaWindow, r: usize, s: i64) -> Result<Certificate> {
    let piece = build_t(window, r, s)?;
    let mut cert = Certificate::new(
        CertificateKind::Tilting,
        format!(
            "0 -> C(-,E{}_{s}) -> T(1,{s}) -> T({r},{s}) -> 0",
            r.saturating_sub(1)
        ),
    )
    .with_scope(format!("window {}", window.label()));
    match &piece.inclusion {
        None => {
            cert.check(
                "degenerate",
                piece.projection.is_isomorphism(),
                "T(1,s) = T(r,s) and the kernel is zero",
            );
        }
        Some(inc) => {
            let composite_zero = inc.then(&piece.projection)?.is_zero();
            let additive = (0..window.category().len())
                .all(|y| piece.top.dim(y) == inc.source().dim(y) + piece.module.dim(y));
            cert.check("injective", inc.is_injective(), String::new());
            cert.check(
                "surjective",
                piece.projection.is_surjective(),
                String::new(),
            );
            cert.check(
                "exact in the middle",
                composite_zero && additive,
                String::new(),
            );
            cert.witness(
                "sequence",
                format!("kernel {}", cell_name(r - 1, s)),
                Some(Evidence::ShortExact {
                    injection: inc.clone(),
                    surjection: piece.projection.clone(),
                }),
            );
        }
    }
    Ok(cert)
}

/// `Hom(C(−, E^r_s), T(r′, s′))` against the stated vanishing condition.
pub fn verify_hom_vanishing(
    window: &ZaWindow,
    (r, s): (usize, i64),
    (r2, s2): (usize, i64),
) -> Result<Certificate> {
    let source = FunctorModule::representable(window.category(), window.require(r, s)?);
    let target = build_t(window, r2, s2)?;
    let dim = hom_dim(&source, &target.module)?;
    let mut cert = Certificate::new(
        CertificateKind::Tilting,
        format!("Hom(C(-,E{r}_{s}), T({r2},{s2}))"),
    )
    .with_scope(format!("window {}", window.label()));
    let stated = s != s2 || r < r2;
    if stated {
        cert.check("vanishes", dim == 0, format!("dimension {dim}"));
    } else {
        cert.witness("dimension", dim.to_string(), None);
    }
    Ok(cert)
}

/// All `T(r, s)` whose column reaches the deepest row of the window.
pub fn window_pieces(window: &ZaWindow) -> Result<Vec<TiltingPiece>> {
    let mut out = Vec::new();
    for s in window.full_columns() {
        for r in 1..=window.depth() {
            if r == 1 || window.object(r - 1, s).is_some() {
                out.push(build_t(window, r, s)?);
            }
        }
    }
    Ok(out)
}

/// Projective dimension at most one, vanishing `Ext¹` between all pieces, and the two-term
/// resolutions of representables, all on the window.
pub fn verify_tilting(window: &ZaWindow) -> Result<Certificate> {
    let c = window.category();
    let mut cert = Certificate::new(
        CertificateKind::Tilting,
        format!("T(r,s) family on {} cells", c.len()),
    )
    .with_scope(format!(
        "window-level: {}; T(1,s) is the representable at the deepest cell of its column",
        window.label()
    ));
    let pieces = window_pieces(window)?;

    let mut chain_ok = true;
    for s in window.full_columns() {
        let mut prev: Option<usize> = None;
        for i in 1..=window.depth() {
            if let Some(x) = window.object(i, s) {
                if let Some(p) = prev {
                    let inc = unit_map(window, p, &FunctorModule::representable(c, x))?;
                    chain_ok &= inc.is_injective();
                }
                prev = Some(x);
            }
        }
    }
    cert.check("C(-,E^i_s) increasing in i", chain_ok, String::new());

    let mut pd_fail = None;
    for p in &pieces {
        let cover = projective_cover(&p.top)?;
        let (k, _) = cover.map.kernel()?;
        let ses = verify_ses(window, p.r, p.s)?;
        if (!k.is_zero() || !ses.passed) && pd_fail.is_none() {
            pd_fail = Some(format!("T({},{})", p.r, p.s));
        }
    }
    cert.check(
        "projective dimension at most 1",
        pd_fail.is_none(),
        pd_fail.unwrap_or_else(|| format!("{} pieces", pieces.len())),
    );

    let mut ext_fail = None;
    let mut pairs = 0usize;
    for p in &pieces {
        let res = minimal_resolution(&p.module, 2)?;
        for q in &pieces {
            pairs += 1;
            let d = ext_from_resolution(&res, &q.module, 1).dim();
            if d != 0 && ext_fail.is_none() {
                ext_fail = Some(format!(
                    "Ext1(T({},{}), T({},{})) = {d}",
                    p.r, p.s, q.r, q.s
                ));
            }
        }
    }
    cert.check(
        "Ext1(T, T') = 0",
        ext_fail.is_none(),
        ext_fail.unwrap_or_else(|| format!("{pairs} ordered pairs")),
    );

    let mut res_fail = None;
    let mut resolved = 0usize;
    for &(i, s) in window.cells() {
        if window.object(window.depth(), s).is_none() {
            continue;
        }
        resolved += 1;
        let rep = FunctorModule::representable(c, window.require(i, s)?);
        let t1 = build_t(window, 1, s)?;
        let inc = unit_map(window, window.require(i, s)?, &t1.module)?;
        let (quotient, proj) = inc.cokernel()?;
        let expected = if i < window.depth() {
            build_t(window, i + 1, s)?.module
        } else {
            FunctorModule::zero(c.clone())
        };
        let ok = inc.is_injective()
            && quotient.dims() == expected.dims()
            && rep.dims() == inc.source().dims();
        if ok {
            cert.witness(
                format!("resolution of C(-,E{i}_{s})"),
                format!("0 -> C(-,E{i}_{s}) -> T(1,{s}) -> T({},{s}) -> 0", i + 1),
                Some(Evidence::ShortExact {
                    injection: inc,
                    surjection: proj,
                }),
            );
        } else if res_fail.is_none() {
            res_fail = Some(cell_name(i, s));
        }
    }
    cert.check(
        "two-term resolutions of representables",
        res_fail.is_none(),
        res_fail.unwrap_or_else(|| format!("{resolved} representables")),
    );
    Ok(cert)
}

/// Δ-filtration of `T(r, s)` for the row filtration; its standard summands must be the
/// `Δ(E^i_s)` for `r ≤ i ≤ depth`, one per layer.
pub fn verify_t_in_fdelta(
    window: &ZaWindow,
    family: &StandardFamily,
    r: usize,
    s: i64,
) -> Result<Certificate> {
    let piece = build_t(window, r, s)?;
    let mut cert = Certificate::new(CertificateKind::Tilting, format!("T({r},{s}) in F(Delta)"))
        .with_scope(format!("window {}, row filtration", window.label()));
    let filtered = is_delta_filtered(&piece.module, family)?;
    let expected: Vec<String> = (r..=window.depth())
        .map(|i| {
            format!(
                "D_{}({i})^1",
                window
                    .category()
                    .name(window.require(i, s).expect("full column"))
            )
        })
        .collect();
    let found = filtered
        .witnesses
        .iter()
        .find(|w| w.label == "standard summands")
        .map(|w| w.detail.clone())
        .unwrap_or_default();
    let mut sorted: Vec<String> = found
        .split(" + ")
        .filter(|p| !p.is_empty())
        .map(String::from)
        .collect();
    sorted.sort();
    let mut want = expected.clone();
    want.sort();
    cert.check("one standard summand per layer", sorted == want, found);
    cert.absorb(filtered);
    Ok(cert)
}

pub fn row_family(window: &ZaWindow) -> Result<StandardFamily> {
    standard_family(window.category(), &window.row_filtration()?)
}
