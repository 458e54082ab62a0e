use std::sync::Arc;

use crate::error::Result;
use crate::exactlin::Subspace;
use crate::functors::{ext_from_resolution, hom_dim, minimal_resolution, FunctorModule};
use crate::meshcat::{IdealTable, PresentedCategory};

use super::certificate::{Certificate, CertificateKind};
use super::heredity::chain_ideals;
use super::Filtration;

/// Standard, covariant standard and costandard modules of one layer object.
#[derive(Clone, Debug)]
pub struct StandardEntry {
    pub layer: usize,
    pub object: usize,
    /// `C(−, E) / I_{B_{j−1}}(−, E)`
    pub delta: FunctorModule,
    /// `C(E, −) / I_{B_{j−1}}(E, −)`, a module over the opposite category
    pub delta_op: FunctorModule,
    /// the dual of `delta_op`
    pub nabla: FunctorModule,
}

#[derive(Clone, Debug)]
pub struct StandardFamily {
    pub category: Arc<PresentedCategory>,
    pub filtration: Filtration,
    /// `I_{B_0}, …, I_{B_n}`
    pub ideals: Vec<IdealTable>,
    /// `C / I_{B_0}, …, C / I_{B_{n−1}}`
    pub quotients: Vec<Arc<PresentedCategory>>,
    pub entries: Vec<StandardEntry>,
}

impl StandardFamily {
    pub fn layer(&self, j: usize) -> impl Iterator<Item = &StandardEntry> {
        self.entries.iter().filter(move |e| e.layer == j)
    }

    pub fn entry(&self, object: usize) -> Option<&StandardEntry> {
        self.entries.iter().find(|e| e.object == object)
    }

    pub fn deltas(&self) -> impl Iterator<Item = &FunctorModule> {
        self.entries.iter().map(|e| &e.delta)
    }

    pub fn nablas(&self) -> impl Iterator<Item = &FunctorModule> {
        self.entries.iter().map(|e| &e.nabla)
    }
}

pub fn standard_family(c: &Arc<PresentedCategory>, f: &Filtration) -> Result<StandardFamily> {
    let ideals = chain_ideals(c, f);
    let op = c.opposite();
    let mut entries = Vec::new();
    for j in 1..=f.layer_count() {
        let below = &ideals[j - 1];
        for &e in f.layer(j) {
            let rep = FunctorModule::representable(c, e);
            let spaces: Vec<Subspace> = (0..c.len()).map(|y| below.span(y, e).clone()).collect();
            let (delta, _) = rep.quotient(&spaces)?;
            let corep = FunctorModule::representable(&op, e);
            let spaces_op: Vec<Subspace> = (0..c.len()).map(|y| below.span(e, y).clone()).collect();
            let (delta_op, _) = corep.quotient(&spaces_op)?;
            let nabla = delta_op.dualize();
            entries.push(StandardEntry {
                layer: j,
                object: e,
                delta,
                delta_op,
                nabla,
            });
        }
    }
    let quotients = ideals[..f.layer_count()]
        .iter()
        .map(|i| c.quotient(i).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    Ok(StandardFamily {
        category: c.clone(),
        filtration: f.clone(),
        ideals,
        quotients,
        entries,
    })
}

/// Exhaustive sweep of the Hom and Ext¹ direction lemmas, Schurian-ness, and Δ–∇ orthogonality.
pub fn check_delta_lemmas(family: &StandardFamily) -> Result<Certificate> {
    let c = &family.category;
    let mut cert = Certificate::new(
        CertificateKind::QhChain,
        format!("standard modules of {} objects", c.len()),
    );
    let name = |e: &StandardEntry| format!("{}({})", c.name(e.object), e.layer);
    let mut hom_dir = None;
    let mut ext_dir = None;
    let mut schur = None;
    let mut hom_nabla = None;
    let mut ext_nabla = None;
    let mut pairs = 0usize;
    for a in &family.entries {
        let res = minimal_resolution(&a.delta, 2)?;
        for b in &family.entries {
            pairs += 1;
            let (i, j) = (a.layer, b.layer);
            let h = hom_dim(&a.delta, &b.delta)?;
            if h != 0 && i < j {
                hom_dir.get_or_insert(format!("Hom(D_{}, D_{}) = {h}", name(a), name(b)));
            }
            if a.object == b.object && h != 1 {
                schur.get_or_insert(format!("End(D_{}) has dimension {h}", name(a)));
            }
            let e = ext_from_resolution(&res, &b.delta, 1).dim();
            if e != 0 && i <= j {
                ext_dir.get_or_insert(format!("Ext1(D_{}, D_{}) = {e}", name(a), name(b)));
            }
            let hn = hom_dim(&a.delta, &b.nabla)?;
            if hn != 0 && i != j {
                hom_nabla.get_or_insert(format!("Hom(D_{}, N_{}) = {hn}", name(a), name(b)));
            }
            let en = ext_from_resolution(&res, &b.nabla, 1).dim();
            if en != 0 {
                ext_nabla.get_or_insert(format!("Ext1(D_{}, N_{}) = {en}", name(a), name(b)));
            }
        }
    }
    let swept = format!("{pairs} ordered pairs");
    cert.check(
        "Hom(D(i), D(j)) != 0 implies i >= j",
        hom_dir.is_none(),
        hom_dir.unwrap_or_else(|| swept.clone()),
    );
    cert.check(
        "Ext1(D(i), D(j)) != 0 implies i > j",
        ext_dir.is_none(),
        ext_dir.unwrap_or_else(|| swept.clone()),
    );
    cert.check(
        "dim End(D) = 1",
        schur.is_none(),
        schur.unwrap_or_else(|| swept.clone()),
    );
    cert.check(
        "Hom(D(i), N(j)) != 0 implies i = j",
        hom_nabla.is_none(),
        hom_nabla.unwrap_or_else(|| swept.clone()),
    );
    cert.check(
        "Ext1(D(i), N(j)) = 0",
        ext_nabla.is_none(),
        ext_nabla.unwrap_or(swept),
    );
    Ok(cert)
}
