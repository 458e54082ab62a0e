use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::functors::{
    ext1, ext_from_resolution, extension_from_cocycle, hom_space, minimal_resolution,
    projective_cover, pushout, FunctorModule, ModuleMap,
};

use super::certificate::{Certificate, CertificateKind, Evidence};
use super::standard::StandardFamily;
use super::trace::is_delta_filtered;

/// `0 → N → N′ → Q → 0` with `Q` a sum of standard modules of one layer.
#[derive(Clone, Debug)]
pub struct UniversalExtension {
    pub layer: usize,
    pub module: FunctorModule,
    pub embedding: ModuleMap,
    pub quotient: FunctorModule,
    pub projection: ModuleMap,
    /// objects `E`, one per summand `Δ_E` of the quotient
    pub summands: Vec<usize>,
    pub certificate: Certificate,
}

/// `0 → N → Y → X → 0` with `X` Δ-filtered and `Ext¹(Δ, Y) = 0`.
#[derive(Clone, Debug)]
pub struct Coresolution {
    pub y: FunctorModule,
    pub x: FunctorModule,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
    pub steps: Vec<UniversalExtension>,
    pub certificate: Certificate,
}

/// A right approximation `Z → M` by a Δ-filtered module.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub z: FunctorModule,
    pub map: ModuleMap,
    pub split: bool,
    pub certificate: Certificate,
}

fn ext1_vanishes(
    family: &StandardFamily,
    n: &FunctorModule,
    upto: usize,
) -> Result<Option<String>> {
    let c = &family.category;
    for e in family.entries.iter().filter(|e| e.layer <= upto) {
        let d = ext1(&e.delta, n)?.dim();
        if d != 0 {
            return Ok(Some(format!(
                "Ext1(D_{}({}), -) = {d}",
                c.name(e.object),
                e.layer
            )));
        }
    }
    Ok(None)
}

fn block_map(
    source: &FunctorModule,
    target: &FunctorModule,
    parts: &[&ModuleMap],
) -> Result<ModuleMap> {
    let c = source.category();
    let comps = (0..c.len())
        .map(|y| {
            let blocks: Vec<&Matrix> = parts.iter().map(|m| m.component(y)).collect();
            Matrix::block_diag(c.field(), &blocks)
        })
        .collect();
    ModuleMap::new(source.clone(), target.clone(), comps)
}

/// Glues one extension per basis class of `Ext¹(Δ_E(t), N)` and pushes out along the codiagonal.
pub fn universal_extension(
    n: &FunctorModule,
    family: &StandardFamily,
    t: usize,
) -> Result<UniversalExtension> {
    let c = &family.category;
    if t == 0 || t > family.filtration.layer_count() {
        return Err(Error::Precondition(format!("layer {t} is out of range")));
    }
    if let Some(bad) = ext1_vanishes(family, n, t - 1)? {
        return Err(Error::Precondition(format!("below layer {t}: {bad}")));
    }
    let mut cert = Certificate::new(
        CertificateKind::Approximation,
        format!("universal extension at layer {t}"),
    );
    let mut extensions = Vec::new();
    let mut summands = Vec::new();
    for e in family.layer(t) {
        let res = minimal_resolution(&e.delta, 2)?;
        for class in ext_from_resolution(&res, n, 1).classes {
            extensions.push((
                e.delta.clone(),
                extension_from_cocycle(&e.delta, n, &class)?,
            ));
            summands.push(e.object);
        }
    }
    if extensions.is_empty() {
        cert.witness("N' = N", "no extension classes", None);
        return Ok(UniversalExtension {
            layer: t,
            module: n.clone(),
            embedding: ModuleMap::identity(n),
            quotient: FunctorModule::zero(c.clone()),
            projection: ModuleMap::zero(n, &FunctorModule::zero(c.clone())),
            summands,
            certificate: cert,
        });
    }
    let copies = FunctorModule::direct_sum(c, &vec![n.clone(); extensions.len()])?;
    let middles: Vec<FunctorModule> = extensions.iter().map(|(_, x)| x.module.clone()).collect();
    let middle = FunctorModule::direct_sum(c, &middles)?;
    let tops: Vec<FunctorModule> = extensions.iter().map(|(d, _)| d.clone()).collect();
    let quotient = FunctorModule::direct_sum(c, &tops)?.module;
    let inclusions: Vec<&ModuleMap> = extensions.iter().map(|(_, x)| &x.inclusion).collect();
    let along = block_map(&copies.module, &middle.module, &inclusions)?;
    let comps = (0..c.len())
        .map(|y| {
            let id = Matrix::identity(c.field(), n.dim(y));
            let blocks: Vec<&Matrix> = vec![&id; extensions.len()];
            Matrix::hstack(c.field(), n.dim(y), &blocks)
        })
        .collect();
    let codiagonal = ModuleMap::new(copies.module.clone(), n.clone(), comps)?;
    let po = pushout(&along, &codiagonal)?;
    let projections: Vec<&ModuleMap> = extensions.iter().map(|(_, x)| &x.projection).collect();
    let onto_tops = block_map(&middle.module, &quotient, &projections)?;
    let projection = po.induced(&onto_tops, &ModuleMap::zero(n, &quotient))?;
    let embedding = po.from_second.clone();
    let exact = embedding.is_injective()
        && projection.is_surjective()
        && (0..c.len()).all(|y| po.module.dim(y) == n.dim(y) + quotient.dim(y));
    cert.check(
        "exact",
        exact,
        format!("{} extension classes", summands.len()),
    );
    let after = ext1_vanishes(family, &po.module, t)?;
    cert.check(
        format!("Ext1(D(j), N') = 0 for j <= {t}"),
        after.is_none(),
        after.unwrap_or_default(),
    );
    cert.witness(
        "sequence",
        format!(
            "0 -> N -> N' -> sum of {} standard modules -> 0",
            summands.len()
        ),
        Some(Evidence::ShortExact {
            injection: embedding.clone(),
            surjection: projection.clone(),
        }),
    );
    Ok(UniversalExtension {
        layer: t,
        module: po.module,
        embedding,
        quotient,
        projection,
        summands,
        certificate: cert,
    })
}

/// Iterates the universal extension through every layer.
pub fn coresolution(n: &FunctorModule, family: &StandardFamily) -> Result<Coresolution> {
    let mut cert = Certificate::new(
        CertificateKind::Approximation,
        format!(
            "coresolution of a module of total dimension {}",
            n.total_dim()
        ),
    );
    let mut current = n.clone();
    let mut inclusion = ModuleMap::identity(n);
    let mut steps = Vec::new();
    for t in 1..=family.filtration.layer_count() {
        let step = universal_extension(&current, family, t)?;
        inclusion = inclusion.then(&step.embedding)?;
        current = step.module.clone();
        cert.absorb(step.certificate.clone());
        steps.push(step);
    }
    let (x, projection) = inclusion.cokernel()?;
    let bad = ext1_vanishes(family, &current, family.filtration.layer_count())?;
    cert.check("Ext1(D, Y) = 0", bad.is_none(), bad.unwrap_or_default());
    let filtered = is_delta_filtered(&x, family)?;
    cert.check(
        "X is Delta-filtered",
        filtered.passed,
        filtered.counterexample.clone().unwrap_or_default(),
    );
    cert.absorb(filtered);
    cert.witness(
        "sequence",
        "0 -> N -> Y -> X -> 0",
        Some(Evidence::ShortExact {
            injection: inclusion.clone(),
            surjection: projection.clone(),
        }),
    );
    Ok(Coresolution {
        y: current,
        x,
        inclusion,
        projection,
        steps,
        certificate: cert,
    })
}

fn flatten(m: &ModuleMap) -> Vec<crate::exactlin::Scalar> {
    m.components()
        .iter()
        .flat_map(|a| (0..a.nrows()).flat_map(move |i| a.row(i).to_vec()))
        .collect()
}

/// Rank of `φ ↦ γ φ` on `Hom(X′, Z)` against `dim Hom(X′, M)`.
fn factors_through(test: &FunctorModule, gamma: &ModuleMap) -> Result<(usize, usize)> {
    let field = gamma.source().field();
    let into_m = hom_space(test, gamma.target())?.len();
    let composites = hom_space(test, gamma.source())?
        .iter()
        .map(|phi| phi.then(gamma).map(|m| flatten(&m)))
        .collect::<Result<Vec<_>>>()?;
    let len = composites.first().map_or(0, Vec::len);
    Ok((Subspace::span(field, len, &composites).dim(), into_m))
}

/// The pushout of `K ⊆ P` along `K → Y_K`, mapped onto `M` through the cover. The approximation
/// property is checked against every standard module, every representable and `extra_tests`.
pub fn right_approximation(
    m: &FunctorModule,
    family: &StandardFamily,
    extra_tests: &[FunctorModule],
) -> Result<Approximation> {
    let c = &family.category;
    let mut cert = Certificate::new(
        CertificateKind::Approximation,
        format!(
            "right approximation of a module of total dimension {}",
            m.total_dim()
        ),
    );
    let direct = is_delta_filtered(m, family)?;
    let (z, gamma, split) = if direct.passed {
        cert.witness(
            "split",
            "the module is Delta-filtered; the identity is an approximation",
            None,
        );
        (m.clone(), ModuleMap::identity(m), true)
    } else {
        let cover = projective_cover(m)?;
        let (kernel, iota) = cover.map.kernel()?;
        let core = coresolution(&kernel, family)?;
        cert.absorb(core.certificate.clone());
        let po = pushout(&iota, &core.inclusion)?;
        let gamma = po.induced(&cover.map, &ModuleMap::zero(&core.y, m))?;
        (po.module, gamma, false)
    };
    if !split {
        let filtered = is_delta_filtered(&z, family)?;
        cert.check(
            "Z is Delta-filtered",
            filtered.passed,
            filtered.counterexample.clone().unwrap_or_default(),
        );
        cert.absorb(filtered);
    }
    cert.check("surjective", gamma.is_surjective(), String::new());
    let mut tests: Vec<(String, FunctorModule)> = family
        .entries
        .iter()
        .map(|e| {
            (
                format!("D_{}({})", c.name(e.object), e.layer),
                e.delta.clone(),
            )
        })
        .collect();
    tests.extend((0..c.len()).map(|x| {
        (
            format!("C(-,{})", c.name(x)),
            FunctorModule::representable(c, x),
        )
    }));
    tests.extend(
        extra_tests
            .iter()
            .enumerate()
            .map(|(i, t)| (format!("test module {i}"), t.clone())),
    );
    let mut failure = None;
    for (label, test) in &tests {
        let (rank, want) = factors_through(test, &gamma)?;
        if rank != want && failure.is_none() {
            failure = Some(format!(
                "{label}: image of rank {rank} in Hom of dimension {want}"
            ));
        }
    }
    cert.check(
        "Hom(X', Z) -> Hom(X', M) surjective",
        failure.is_none(),
        failure.unwrap_or_else(|| format!("{} test modules", tests.len())),
    );
    cert.witness("gamma", "Z -> M", Some(Evidence::Surjection(gamma.clone())));
    Ok(Approximation {
        z,
        map: gamma,
        split,
        certificate: cert,
    })
}
