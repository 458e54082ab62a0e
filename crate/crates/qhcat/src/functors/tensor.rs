use crate::error::{Error, Result};
use crate::exactlin::{Matrix, SparseMatrix};

use super::hom::cohomology_classes;
use super::module::FunctorModule;
use super::resolution::{minimal_resolution, Resolution};

fn check_pairing(first: &FunctorModule, second: &FunctorModule) -> Result<()> {
    if first.category().opposite().uid() != second.category().uid() {
        return Err(Error::Precondition(
            "tensor factors must live over a category and its opposite".into(),
        ));
    }
    Ok(())
}

/// `dim (M ⊗_C N)`: `⊕_x M(x) ⊗ N(x)` modulo `M(α)m ⊗ n − m ⊗ N(α)n` for every generator `α`.
///
/// `covariant` is a module over `C^op`, `contravariant` one over `C`; either order is accepted.
pub fn tensor_dim(first: &FunctorModule, second: &FunctorModule) -> Result<usize> {
    check_pairing(first, second)?;
    // Index generators by the contravariant side's category; the opposite shares the order.
    let (cov, contra) = (first, second);
    let c = contra.category();
    let field = c.field();
    let mut offsets = Vec::with_capacity(c.len());
    let mut total = 0;
    for x in 0..c.len() {
        offsets.push(total);
        total += cov.dim(x) * contra.dim(x);
    }
    let idx = |x: usize, i: usize, j: usize| offsets[x] + i * contra.dim(x) + j;
    let mut rel = SparseMatrix::new(field, 0, total);
    for (gi, g) in c.generators().iter().enumerate() {
        let (s, t) = (g.source, g.target);
        // covariant action M(s) → M(t) and contravariant action N(t) → N(s)
        let (ma, na) = (cov.gen_map(gi), contra.gen_map(gi));
        for i in 0..cov.dim(s) {
            for j in 0..contra.dim(t) {
                let row = rel.add_row();
                for r in 0..cov.dim(t) {
                    let v = ma.get(r, i);
                    if !v.is_zero() {
                        rel.push(row, idx(t, r, j), v.clone());
                    }
                }
                for r in 0..contra.dim(s) {
                    let v = na.get(r, j);
                    if !v.is_zero() {
                        rel.push(row, idx(s, i, r), -v);
                    }
                }
            }
        }
    }
    Ok(total - rel.rank())
}

/// `∂_i: other ⊗ P_i → other ⊗ P_{i−1}`, with `other ⊗ C(−, a) = other(a)`.
fn tensor_complex_map(res: &Resolution, other: &FunctorModule, i: usize) -> Matrix {
    let field = other.field();
    let offsets = |term: &[usize]| {
        let mut out = vec![0];
        for &a in term {
            out.push(out.last().copied().unwrap_or(0) + other.dim(a));
        }
        out
    };
    let source = res.term(i);
    let src = offsets(source);
    if i == 0 {
        return Matrix::zeros(field, 0, src[source.len()]);
    }
    let target = res.term(i - 1);
    let dst = offsets(target);
    let mut out = Matrix::zeros(field, dst[target.len()], src[source.len()]);
    if let Some(d) = res.differential(i - 1) {
        for (j, &a) in source.iter().enumerate() {
            for (k, &b) in target.iter().enumerate() {
                // d_jk ∈ C(a, b) acts covariantly on `other`: C(a, b) = C^op(b, a)
                out.paste(dst[k], src[j], &other.act(b, a, &d.entries[j][k]));
            }
        }
    }
    out
}

/// `dim Tor_t(first, second)` computed from a minimal resolution of `resolve`.
pub fn tor_resolving(resolve: &FunctorModule, other: &FunctorModule, t: usize) -> Result<usize> {
    check_pairing(other, resolve)?;
    let res = minimal_resolution(resolve, t + 1)?;
    Ok(tor_from_resolution(&res, other, t))
}

/// `dim Tor_t` from a resolution reaching at least `P_{t+1}` (or complete).
pub fn tor_from_resolution(res: &Resolution, other: &FunctorModule, t: usize) -> usize {
    let dim = res.term(t).iter().map(|&a| other.dim(a)).sum::<usize>();
    if dim == 0 {
        return 0;
    }
    let out = tensor_complex_map(res, other, t);
    let into = tensor_complex_map(res, other, t + 1);
    cohomology_classes(other.field(), dim, &into, &out).len()
}

/// `dim Tor_t` of a module over `C` against a module over `C^op`, resolving the second factor.
pub fn tor_dim(first: &FunctorModule, second: &FunctorModule, t: usize) -> Result<usize> {
    tor_resolving(second, first, t)
}

pub fn tor1(first: &FunctorModule, second: &FunctorModule) -> Result<usize> {
    tor_dim(first, second, 1)
}

pub fn tensor_over_c(first: &FunctorModule, second: &FunctorModule) -> Result<usize> {
    tensor_dim(first, second)
}
