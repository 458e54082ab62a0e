use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::Subspace;
use crate::functors::{
    induction_counit, minimal_resolution, projective_cover, tor_from_resolution,
    trace_of_representables, FunctorModule, ModuleMap,
};

use super::certificate::{Certificate, CertificateKind, Evidence};
use super::standard::{standard_family, StandardFamily};
use super::Filtration;

/// `F^(0) ⊆ F^(1) ⊆ …`, each with its inclusion into `F`.
#[derive(Clone, Debug)]
pub struct TraceFiltration {
    pub module: FunctorModule,
    pub steps: Vec<(FunctorModule, ModuleMap)>,
}

impl TraceFiltration {
    pub fn step(&self, j: usize) -> &FunctorModule {
        &self.steps[j].0
    }

    /// `F^(i) / F^(i−1)`.
    pub fn subquotient(&self, i: usize) -> Result<FunctorModule> {
        let (outer, outer_inc) = &self.steps[i];
        let (_, inner_inc) = &self.steps[i - 1];
        let c = outer.category();
        let spaces = (0..c.len())
            .map(|y| {
                let coords = outer_inc
                    .component(y)
                    .solve_matrix(inner_inc.component(y))?
                    .ok_or_else(|| {
                        Error::Precondition("trace filtration is not ascending".into())
                    })?;
                Ok(Subspace::column_space(&coords))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(outer.quotient(&spaces)?.0)
    }

    /// First index where the chain reaches `F`.
    pub fn stabilizes_at(&self) -> Option<usize> {
        self.steps
            .iter()
            .position(|(s, _)| s.dims() == self.module.dims())
    }
}

pub fn trace_filtration(module: &FunctorModule, f: &Filtration) -> Result<TraceFiltration> {
    let steps = (0..=f.layer_count())
        .map(|j| {
            let objs: Vec<usize> = f.cumulative(j).into_iter().collect();
            trace_of_representables(module, &objs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceFiltration {
        module: module.clone(),
        steps,
    })
}

/// Each trace subquotient must be isomorphic to its projective cover over `C / I_{B_{i−1}}`, whose
/// summands in layer `i` are standard modules.
pub fn is_delta_filtered(module: &FunctorModule, family: &StandardFamily) -> Result<Certificate> {
    let c = &family.category;
    let f = &family.filtration;
    let mut cert = Certificate::new(
        CertificateKind::DeltaFiltration,
        format!("module of total dimension {}", module.total_dim()),
    );
    let tf = trace_filtration(module, f)?;
    cert.check(
        "exhaustive",
        tf.stabilizes_at().is_some(),
        format!(
            "stabilizes at layer {}",
            tf.stabilizes_at().map_or("-".into(), |s| s.to_string())
        ),
    );
    let mut multiset: BTreeMap<(usize, String), usize> = BTreeMap::new();
    for i in 1..=f.layer_count() {
        let q = tf.subquotient(i)?;
        if q.is_zero() {
            continue;
        }
        let over = q.descend(&family.quotients[i - 1], &family.ideals[i - 1])?;
        let cover = projective_cover(&over)?;
        let in_layer = cover.summands.iter().all(|s| f.layer_of(*s) == Some(i));
        let (kernel, _) = cover.map.kernel()?;
        let ok = in_layer && kernel.is_zero();
        cert.check(
            format!("layer {i}: subquotient is a sum of standard modules"),
            ok,
            format!(
                "cover summands {:?}, kernel dimension {}",
                cover
                    .summands
                    .iter()
                    .map(|&s| c.name(s))
                    .collect::<Vec<_>>(),
                kernel.total_dim()
            ),
        );
        if ok {
            for &s in &cover.summands {
                *multiset.entry((i, c.name(s).to_string())).or_default() += 1;
            }
            cert.witness(
                format!("layer {i}"),
                "cover over the quotient category",
                Some(Evidence::Isomorphism(cover.map)),
            );
        }
    }
    let summary: Vec<String> = multiset
        .iter()
        .map(|((i, e), k)| format!("D_{e}({i})^{k}"))
        .collect();
    cert.witness("standard summands", summary.join(" + "), None);
    Ok(cert)
}

/// `Tor₁(F, Δ°_E(j))` for every standard object, cross-checked against the trace-filtration test.
pub fn tor_criterion(module: &FunctorModule, family: &StandardFamily) -> Result<Certificate> {
    if !family.filtration.is_finite_on_window() {
        return Err(Error::Precondition(
            "the Tor criterion needs a filtration declared finite on the window".into(),
        ));
    }
    let c = &family.category;
    let mut cert = Certificate::new(
        CertificateKind::TorCriterion,
        format!("module of total dimension {}", module.total_dim()),
    )
    .with_scope("filtration declared finite on the window");
    let res = minimal_resolution(module, 2)?;
    let mut nonzero = None;
    for e in &family.entries {
        let t = tor_from_resolution(&res, &e.delta_op, 1);
        if t != 0 && nonzero.is_none() {
            nonzero = Some(format!(
                "Tor1(F, D°_{}({})) = {t}",
                c.name(e.object),
                e.layer
            ));
        }
    }
    let vanishes = nonzero.is_none();
    let filtered = is_delta_filtered(module, family)?.passed;
    cert.check(
        "agrees with trace filtration",
        vanishes == filtered,
        format!("Tor vanishing {vanishes}, Delta-filtered {filtered}"),
    );
    cert.check("tor-vanishing", vanishes, nonzero.unwrap_or_default());
    Ok(cert)
}

/// For `F = F^(i)`: `F ≅ C ⊗_{B_i} (F|_{B_i})` via the counit, and `F|_{B_i}` is Δ-filtered for the
/// restricted filtration.
pub fn restrict_induce_check(
    module: &FunctorModule,
    f: &Filtration,
    i: usize,
) -> Result<Certificate> {
    let c = module.category();
    if i == 0 || i > f.layer_count() {
        return Err(Error::Precondition(format!("layer {i} is out of range")));
    }
    let objects: Vec<usize> = f.cumulative(i).into_iter().collect();
    let (traced, _) = trace_of_representables(module, &objects)?;
    if traced.dims() != module.dims() {
        return Err(Error::Precondition(format!(
            "module is not generated in B_{i}"
        )));
    }
    let mut cert = Certificate::new(
        CertificateKind::DeltaFiltration,
        format!("restriction to B_{i}"),
    );
    let sub = Arc::new(c.full_subcategory(&objects)?);
    let counit = induction_counit(module, &sub, &objects)?;
    let iso = counit.is_isomorphism();
    cert.check(
        "counit is an isomorphism",
        iso,
        format!("induced dimension {}", counit.source().total_dim()),
    );
    if iso {
        cert.witness(
            "counit",
            "C (x)_B F|_B -> F",
            Some(Evidence::Isomorphism(counit)),
        );
    }
    let position = |x: usize| objects.iter().position(|&o| o == x).expect("object of B_i");
    let layers: Vec<Vec<usize>> = (1..=i)
        .map(|j| f.layer(j).iter().map(|&x| position(x)).collect())
        .collect();
    let sub_filtration = Filtration::new(&sub, layers)?;
    let sub_family = standard_family(&sub, &sub_filtration)?;
    let restricted = module.restrict(&sub, &objects)?;
    let mut child = is_delta_filtered(&restricted, &sub_family)?;
    child.subject = format!("restricted filtration on B_{i}");
    cert.absorb(child);
    Ok(cert)
}
