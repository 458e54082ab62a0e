//! Tensor product of two finite categories and heredity chains built from chains of the factors.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Scalar, Subspace};
use crate::meshcat::{CategoryParts, IdealTable, PresentedCategory};
use crate::qhcheck::{check_heredity_ideal, check_qh, Certificate, CertificateKind, Filtration};

/// `C₁ ⊗ C₂` with object `(x₁, x₂)` at index `x₁ · |C₂| + x₂` and Hom basis `f₁ ⊗ f₂` at
/// `k₁ · dim₂ + k₂`.
#[derive(Clone, Debug)]
pub struct TensorCategory {
    pub category: Arc<PresentedCategory>,
    pub left: Arc<PresentedCategory>,
    pub right: Arc<PresentedCategory>,
}

fn kron_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .flat_map(|u| b.iter().map(move |v| u * v))
        .collect()
}

pub fn tensor_category(
    left: &Arc<PresentedCategory>,
    right: &Arc<PresentedCategory>,
) -> Result<TensorCategory> {
    if left.field() != right.field() {
        return Err(Error::Invalid("factors are over different fields".into()));
    }
    if left.has_boundary() || right.has_boundary() {
        return Err(Error::WindowTooSmall(
            "tensor factors must be finite categories, not windows with a cut boundary".into(),
        ));
    }
    let field = left.field();
    let (n1, n2) = (left.len(), right.len());
    let n = n1 * n2;
    let split = |x: usize| (x / n2, x % n2);
    let names = (0..n)
        .map(|x| {
            let (a, b) = split(x);
            format!("({},{})", left.name(a), right.name(b))
        })
        .collect();
    let mut dims = vec![0; n * n];
    let mut labels = vec![Vec::new(); n * n];
    for x in 0..n {
        for y in 0..n {
            let ((x1, x2), (y1, y2)) = (split(x), split(y));
            dims[x * n + y] = left.dim(x1, y1) * right.dim(x2, y2);
            labels[x * n + y] = left
                .basis_labels(x1, y1)
                .iter()
                .flat_map(|l1| {
                    right
                        .basis_labels(x2, y2)
                        .iter()
                        .map(move |l2| format!("{l1}|{l2}"))
                })
                .collect();
        }
    }
    let dim = |x: usize, y: usize| dims[x * n + y];
    let unit = |d: usize, k: usize| crate::exactlin::unit_vec(field, d, k);
    let mut table = HashMap::new();
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x && dim(x, y) > 0) {
            for w in (0..n).filter(|&w| w != x && w != y && dim(y, w) > 0 && dim(x, w) > 0) {
                let ((x1, x2), (y1, y2), (w1, w2)) = (split(x), split(y), split(w));
                let (dxy2, dyw2) = (right.dim(x2, y2), right.dim(y2, w2));
                let mut cols = Vec::with_capacity(dim(x, y) * dim(y, w));
                for g in 0..dim(y, w) {
                    for f in 0..dim(x, y) {
                        let first = left.compose_vec(
                            x1,
                            y1,
                            w1,
                            &unit(left.dim(x1, y1), f / dxy2),
                            &unit(left.dim(y1, w1), g / dyw2),
                        );
                        let second = right.compose_vec(
                            x2,
                            y2,
                            w2,
                            &unit(dxy2, f % dxy2),
                            &unit(dyw2, g % dyw2),
                        );
                        cols.push(kron_vec(&first, &second));
                    }
                }
                let m = Matrix::from_columns(field, dim(x, w), &cols);
                if !m.is_zero() {
                    table.insert((x, y, w), m);
                }
            }
        }
    }
    let category = PresentedCategory::assemble(CategoryParts {
        field,
        names,
        coords: vec![None; n],
        dims,
        labels,
        table,
        generators: None,
        lifts: None,
        boundary_in: vec![false; n],
    })?;
    Ok(TensorCategory {
        category: Arc::new(category),
        left: left.clone(),
        right: right.clone(),
    })
}

impl TensorCategory {
    pub fn pair(&self, x1: usize, x2: usize) -> usize {
        x1 * self.right.len() + x2
    }

    pub fn factors(&self, x: usize) -> (usize, usize) {
        (x / self.right.len(), x % self.right.len())
    }

    /// `A ⊗ B` for ideals of the two factors.
    pub fn tensor_ideal(&self, a: &IdealTable, b: &IdealTable) -> Result<IdealTable> {
        let n = self.category.len();
        let field = self.category.field();
        let spans = (0..n * n)
            .map(|k| {
                let ((x1, x2), (y1, y2)) = (self.factors(k / n), self.factors(k % n));
                let vecs: Vec<Vec<Scalar>> = a
                    .span(x1, y1)
                    .basis()
                    .iter()
                    .flat_map(|u| {
                        b.span(x2, y2)
                            .basis()
                            .into_iter()
                            .map(move |v| kron_vec(u, &v))
                    })
                    .collect();
                Subspace::span(field, self.category.dim(k / n, k % n), &vecs)
            })
            .collect();
        IdealTable::from_spans(&self.category, spans)
    }

    /// `A ⊗ C₂ + C₁ ⊗ B`.
    pub fn interleave(&self, a: &IdealTable, b: &IdealTable) -> Result<IdealTable> {
        let first = self.tensor_ideal(a, &self.right.full_ideal())?;
        let second = self.tensor_ideal(&self.left.full_ideal(), b)?;
        Ok(first.sum(&second))
    }

    /// Layer `(a, b)` in lexicographic order holds the pairs with `x₁` in layer `a` and `x₂` in layer `b`.
    pub fn lexicographic_filtration(&self, f1: &Filtration, f2: &Filtration) -> Result<Filtration> {
        let mut layers = Vec::new();
        for a in 1..=f1.layer_count() {
            for b in 1..=f2.layer_count() {
                layers.push(
                    f1.layer(a)
                        .iter()
                        .flat_map(|&x1| f2.layer(b).iter().map(move |&x2| (x1, x2)))
                        .map(|(x1, x2)| self.pair(x1, x2))
                        .collect(),
                );
            }
        }
        Filtration::new(&self.category, layers)
    }
}

/// `C = I_0 ⊃ I_1 ⊃ … ⊃ I_n = 0` with `I_k = I_{B_{n−k}}`.
pub fn descending_chain(c: &PresentedCategory, f: &Filtration) -> Vec<IdealTable> {
    let n = f.layer_count();
    (0..=n)
        .map(|k| {
            if k == 0 {
                c.full_ideal()
            } else {
                c.ideal_table(&f.cumulative(n - k))
            }
        })
        .collect()
}

/// One term of an interleaved chain with the factor indices it came from.
#[derive(Clone, Debug)]
pub struct ChainTerm {
    pub ideal: IdealTable,
    pub label: String,
    /// `(a, b)` such that the step from the previous term is `(I_a / I_{a+1}) ⊗ (J_b / J_{b+1})`
    /// on successive quotients; `None` for the first term or a step of another shape
    pub step: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct InterleavedChain {
    pub terms: Vec<ChainTerm>,
}

/// The alternating chain `I_a ⊗ C₂ + C₁ ⊗ J_b` along `(0,0), (1,1), (1,2), (2,2), (2,3), …`.
pub fn literal_chain(
    t: &TensorCategory,
    first: &[IdealTable],
    second: &[IdealTable],
) -> Result<InterleavedChain> {
    let (n, m) = (first.len() - 1, second.len() - 1);
    let mut path = vec![(0, 0)];
    let (mut a, mut b) = (0, 0);
    let mut raise_b = false;
    while (a, b) != (n, m) {
        if (a, b) == (0, 0) {
            (a, b) = (1.min(n), 1.min(m));
        } else if (raise_b && b < m) || a == n {
            b += 1;
        } else {
            a += 1;
        }
        raise_b = !raise_b;
        path.push((a, b));
    }
    let terms = path
        .into_iter()
        .map(|(a, b)| {
            Ok(ChainTerm {
                ideal: t.interleave(&first[a], &second[b])?,
                label: format!("I{a} (x) C + C (x) J{b}"),
                step: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InterleavedChain { terms })
}

/// The refined chain `K_{a,b} = I_{a+1} ⊗ C₂ + I_a ⊗ J_b`, lexicographic in `(a, b)`.
pub fn interleaved_chain(
    t: &TensorCategory,
    first: &[IdealTable],
    second: &[IdealTable],
) -> Result<InterleavedChain> {
    let (n, m) = (first.len() - 1, second.len() - 1);
    let full2 = t.right.full_ideal();
    let mut terms = vec![ChainTerm {
        ideal: t.category.full_ideal(),
        label: "C (x) C".into(),
        step: None,
    }];
    for a in 0..n {
        let below = t.tensor_ideal(&first[a + 1], &full2)?;
        for (b, j) in second.iter().enumerate().skip(1) {
            let ideal = below.sum(&t.tensor_ideal(&first[a], j)?);
            terms.push(ChainTerm {
                ideal,
                label: format!("I{} (x) C + I{a} (x) J{b}", a + 1),
                step: Some((a, b - 1)),
            });
        }
    }
    debug_assert_eq!(terms.len(), n * m + 1);
    Ok(InterleavedChain { terms })
}

fn quotient_dim(ideals: &[IdealTable], k: usize, x: usize, y: usize) -> usize {
    ideals[k].span(x, y).dim() - ideals[k + 1].span(x, y).dim()
}

/// Heredity of each successive quotient `T_k / T_{k+1}` inside `C / T_{k+1}`, plus idempotency of
/// each term and strict descent.
pub fn check_chain(c: &Arc<PresentedCategory>, chain: &InterleavedChain) -> Result<Certificate> {
    let mut cert = Certificate::new(
        CertificateKind::Tensor,
        format!("chain of {} ideals", chain.terms.len()),
    );
    let last = chain.terms.last().map(|t| &t.ideal);
    cert.check(
        "ends at zero",
        last.is_some_and(IdealTable::is_zero),
        String::new(),
    );
    for pair in chain.terms.windows(2) {
        let (upper, lower) = (&pair[0], &pair[1]);
        cert.check(
            format!("{} strictly contains {}", upper.label, lower.label),
            upper.ideal.contains(&lower.ideal) && !upper.ideal.same_spans(&lower.ideal),
            String::new(),
        );
        let square = c.ideal_product(&lower.ideal, &lower.ideal)?;
        cert.check(
            format!("{} idempotent", lower.label),
            square.same_spans(&lower.ideal),
            String::new(),
        );
        let quotient = Arc::new(c.quotient(&lower.ideal)?);
        let image = upper.ideal.project_to(c, &lower.ideal, &quotient)?;
        let mut step = check_heredity_ideal(&quotient, &image)?;
        step.subject = format!("{} modulo {}", upper.label, lower.label);
        cert.absorb(step);
    }
    Ok(cert)
}

/// Structure checks, the refined chain, and the quasi-hereditary check of the lexicographic
/// filtration, which generates the same ideals.
#[derive(Clone, Debug)]
pub struct TensorVerification {
    pub tensor: TensorCategory,
    pub chain: InterleavedChain,
    pub filtration: Filtration,
    pub certificate: Certificate,
}

pub fn verify_tensor_qh(
    left: &Arc<PresentedCategory>,
    f1: &Filtration,
    right: &Arc<PresentedCategory>,
    f2: &Filtration,
) -> Result<TensorVerification> {
    for (c, f, side) in [(left, f1, "first"), (right, f2, "second")] {
        let qh = check_qh(c, f)?;
        if !qh.passed {
            return Err(Error::Precondition(format!(
                "the {side} factor chain is not a heredity chain: {}",
                qh.counterexample.unwrap_or_default()
            )));
        }
    }
    let t = tensor_category(left, right)?;
    let c = &t.category;
    let mut cert = Certificate::new(
        CertificateKind::Tensor,
        format!("{} objects (x) {} objects", left.len(), right.len()),
    );

    let n = c.len();
    let mut hom_ok = true;
    let mut rad_ok = true;
    for x in 0..n {
        for y in 0..n {
            let ((x1, x2), (y1, y2)) = (t.factors(x), t.factors(y));
            hom_ok &= c.dim(x, y) == left.dim(x1, y1) * right.dim(x2, y2);
        }
    }
    let rad_formula = t
        .tensor_ideal(&left.radical_ideal(), &right.full_ideal())?
        .sum(&t.tensor_ideal(&left.full_ideal(), &right.radical_ideal())?);
    let rad = c.radical_ideal();
    if let Some((x, y)) = rad.first_difference(&rad_formula) {
        rad_ok = false;
        cert.check(
            "rad = rad (x) C + C (x) rad",
            false,
            format!("differs at ({}, {})", c.name(x), c.name(y)),
        );
    }
    cert.check("dim Hom is multiplicative", hom_ok, String::new());
    if rad_ok {
        cert.check("rad = rad (x) C + C (x) rad", true, String::new());
    }

    let first = descending_chain(left, f1);
    let second = descending_chain(right, f2);
    let chain = interleaved_chain(&t, &first, &second)?;
    let ideals: Vec<IdealTable> = chain.terms.iter().map(|t| t.ideal.clone()).collect();
    let mut dims_ok = true;
    for (k, term) in chain.terms.iter().enumerate().skip(1) {
        let (a, b) = term.step.expect("refined chain steps");
        for x in 0..n {
            for y in 0..n {
                let ((x1, x2), (y1, y2)) = (t.factors(x), t.factors(y));
                let want = quotient_dim(&first, a, x1, y1) * quotient_dim(&second, b, x2, y2);
                dims_ok &= quotient_dim(&ideals, k - 1, x, y) == want;
            }
        }
    }
    cert.check(
        "successive quotients are (I_a/I_a+1) (x) (J_b/J_b+1)",
        dims_ok,
        String::new(),
    );

    let filtration = t.lexicographic_filtration(f1, f2)?;
    let by_objects = descending_chain(c, &filtration);
    let same = by_objects.iter().zip(&ideals).all(|(a, b)| a.same_spans(b));
    cert.check(
        "chain terms are the ideals of the lexicographic filtration",
        same && by_objects.len() == ideals.len(),
        String::new(),
    );
    cert.absorb(check_chain(c, &chain)?);
    cert.absorb(check_qh(c, &filtration)?);
    Ok(TensorVerification {
        tensor: t,
        chain,
        filtration,
        certificate: cert,
    })
}
