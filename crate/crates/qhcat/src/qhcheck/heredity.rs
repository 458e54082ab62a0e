use std::sync::Arc;

use crate::error::Result;
use crate::functors::{ideal_module, projective_cover, top_elements};
use crate::meshcat::{IdealTable, PresentedCategory};

use super::certificate::{Certificate, CertificateKind, Evidence};
use super::Filtration;

fn names(c: &PresentedCategory, objs: &[usize]) -> String {
    let v: Vec<&str> = objs.iter().map(|&o| c.name(o)).collect();
    format!("[{}]", v.join(", "))
}

/// `I_{B_0}, …, I_{B_n}`.
pub fn chain_ideals(c: &PresentedCategory, f: &Filtration) -> Vec<IdealTable> {
    (0..=f.layer_count())
        .map(|j| c.ideal_table(&f.cumulative(j)))
        .collect()
}

/// Idempotence, `I · rad · I = 0`, and projectivity of every `I(−, X)`.
pub fn check_heredity_ideal(c: &Arc<PresentedCategory>, ideal: &IdealTable) -> Result<Certificate> {
    let mut cert = Certificate::new(
        CertificateKind::Heredity,
        format!("ideal of total dimension {}", ideal.total_dim()),
    );
    let square = c.ideal_product(ideal, ideal)?;
    let idem = square.same_spans(ideal);
    let at = ideal
        .first_difference(&square)
        .map(|(x, y)| format!("differs at ({}, {})", c.name(x), c.name(y)))
        .unwrap_or_default();
    cert.check("idempotent", idem, at);
    cert.witness(
        "I^2",
        "span table of products",
        Some(Evidence::EqualIdeals(square, ideal.clone())),
    );

    let rad = c.radical_ideal();
    let sandwich = c.ideal_product(&c.ideal_product(ideal, &rad)?, ideal)?;
    let zero = sandwich.is_zero();
    let at = sandwich
        .first_difference(&c.zero_ideal())
        .map(|(x, y)| format!("nonzero at ({}, {})", c.name(x), c.name(y)))
        .unwrap_or_default();
    cert.check("I rad I = 0", zero, at);
    cert.witness(
        "I rad I",
        "span table of triple products",
        Some(Evidence::ZeroIdeal(sandwich)),
    );

    let mut projective = true;
    let mut detail = String::new();
    for x in 0..c.len() {
        let (module, _) = ideal_module(c, ideal, x)?;
        if module.is_zero() {
            continue;
        }
        let cover = projective_cover(&module)?;
        let allowed = ideal
            .generator_objects()
            .is_none_or(|g| cover.summands.iter().all(|s| g.contains(s)));
        let (kernel, _) = cover.map.kernel()?;
        if kernel.is_zero() && allowed {
            cert.witness(
                format!("I(-,{})", c.name(x)),
                format!(
                    "isomorphic to the sum of representables at {}",
                    names(c, &cover.summands)
                ),
                Some(Evidence::Isomorphism(cover.map.clone())),
            );
        } else if projective {
            projective = false;
            detail = format!(
                "I(-,{}) has cover {} with kernel of dimension {}",
                c.name(x),
                names(c, &cover.summands),
                kernel.total_dim()
            );
        }
    }
    cert.check("I(-,X) projective", projective, detail);
    Ok(cert)
}

/// Both routes: the radical and presentation conditions, and heredity of every successive
/// quotient ideal. The verdict requires both to pass; their agreement is recorded as a check.
pub fn check_qh(c: &Arc<PresentedCategory>, f: &Filtration) -> Result<Certificate> {
    let ideals = chain_ideals(c, f);
    let theorem = check_qh_theorem_with(c, f, &ideals)?;
    let definitional = check_qh_definitional_with(c, f, &ideals)?;
    let mut cert = Certificate::new(
        CertificateKind::QhChain,
        format!("{} objects, {} layers", c.len(), f.layer_count()),
    );
    cert.check(
        "routes agree",
        theorem.passed == definitional.passed,
        format!(
            "theorem route {}, definitional route {}",
            verdict(theorem.passed),
            verdict(definitional.passed)
        ),
    );
    cert.absorb(theorem);
    cert.absorb(definitional);
    Ok(cert)
}

fn verdict(p: bool) -> &'static str {
    if p {
        "pass"
    } else {
        "fail"
    }
}

pub fn check_qh_theorem(c: &Arc<PresentedCategory>, f: &Filtration) -> Result<Certificate> {
    check_qh_theorem_with(c, f, &chain_ideals(c, f))
}

fn check_qh_theorem_with(
    c: &Arc<PresentedCategory>,
    f: &Filtration,
    ideals: &[IdealTable],
) -> Result<Certificate> {
    let mut cert = Certificate::new(
        CertificateKind::QhChain,
        "radical and presentation conditions",
    );
    for j in 1..=f.layer_count() {
        let layer = f.layer(j);
        let mut bad = None;
        for &e in layer {
            for &e2 in layer {
                if c.radical(e, e2) != *ideals[j - 1].span(e, e2) {
                    bad.get_or_insert((e, e2));
                }
            }
        }
        let detail = bad.map_or_else(String::new, |(e, e2)| {
            format!(
                "rad({}, {}) differs from I_B{}({}, {})",
                c.name(e),
                c.name(e2),
                j - 1,
                c.name(e),
                c.name(e2)
            )
        });
        cert.check(
            format!("layer {j}: radical identity"),
            bad.is_none(),
            detail,
        );
    }
    for j in 1..=f.layer_count() {
        let here = f.cumulative(j);
        let below = f.cumulative(j - 1);
        let mut failure = None;
        for x in 0..c.len() {
            let (module, _) = ideal_module(c, &ideals[j], x)?;
            if module.is_zero() {
                continue;
            }
            let cover = projective_cover(&module)?;
            let (syzygy, _) = cover.map.kernel()?;
            let relations: Vec<usize> = top_elements(&syzygy).into_iter().map(|(o, _)| o).collect();
            let ok = cover.summands.iter().all(|s| here.contains(s))
                && relations.iter().all(|s| below.contains(s));
            if ok {
                cert.witness(
                    format!("I_B{j}(-,{})", c.name(x)),
                    format!("{} -> {}", names(c, &relations), names(c, &cover.summands)),
                    Some(Evidence::Surjection(cover.map.clone())),
                );
            } else if failure.is_none() {
                failure = Some(format!(
                    "I_B{j}(-,{}) presented by {} -> {}",
                    c.name(x),
                    names(c, &relations),
                    names(c, &cover.summands)
                ));
            }
        }
        cert.check(
            format!("layer {j}: presentations"),
            failure.is_none(),
            failure.unwrap_or_default(),
        );
    }
    Ok(cert)
}

pub fn check_qh_definitional(c: &Arc<PresentedCategory>, f: &Filtration) -> Result<Certificate> {
    check_qh_definitional_with(c, f, &chain_ideals(c, f))
}

fn check_qh_definitional_with(
    c: &Arc<PresentedCategory>,
    f: &Filtration,
    ideals: &[IdealTable],
) -> Result<Certificate> {
    let mut cert = Certificate::new(CertificateKind::QhChain, "heredity of successive quotients");
    for j in 1..=f.layer_count() {
        let quotient = Arc::new(c.quotient(&ideals[j - 1])?);
        let image = ideals[j].project_to(c, &ideals[j - 1], &quotient)?;
        let mut child = check_heredity_ideal(&quotient, &image)?;
        child.subject = format!("I_B{j} / I_B{} in C / I_B{}", j - 1, j - 1);
        cert.absorb(child);
    }
    cert.check(
        "every quotient heredity",
        cert.children.iter().all(|ch| ch.passed),
        String::new(),
    );
    Ok(cert)
}
