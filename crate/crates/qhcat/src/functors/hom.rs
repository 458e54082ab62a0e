use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Scalar, SparseMatrix, Subspace};

use super::module::{FunctorModule, ModuleMap};
use super::resolution::{minimal_resolution, Resolution};

/// Basis of `Hom(M, N)`, solving the naturality equations `φ_s M(α) = N(α) φ_t`.
pub fn hom_space(m: &FunctorModule, n: &FunctorModule) -> Result<Vec<ModuleMap>> {
    if !m.same_category(n) {
        return Err(Error::Precondition(
            "modules live over different categories".into(),
        ));
    }
    let c = m.category();
    let field = m.field();
    let mut offsets = Vec::with_capacity(c.len() + 1);
    let mut total = 0;
    for x in 0..c.len() {
        offsets.push(total);
        total += n.dim(x) * m.dim(x);
    }
    let var = |x: usize, r: usize, col: usize| offsets[x] + r * m.dim(x) + col;
    let mut eqs = SparseMatrix::new(field, 0, total);
    for (gi, g) in c.generators().iter().enumerate() {
        let (s, t) = (g.source, g.target);
        let (ma, na) = (m.gen_map(gi), n.gen_map(gi));
        for r in 0..n.dim(s) {
            for col in 0..m.dim(t) {
                let row = eqs.add_row();
                for k in 0..m.dim(s) {
                    let v = ma.get(k, col);
                    if !v.is_zero() {
                        eqs.push(row, var(s, r, k), v.clone());
                    }
                }
                for l in 0..n.dim(t) {
                    let v = na.get(r, l);
                    if !v.is_zero() {
                        eqs.push(row, var(t, l, col), -v);
                    }
                }
            }
        }
    }
    let kernel = eqs.kernel_basis();
    let maps = (0..kernel.ncols())
        .map(|k| {
            let comps = (0..c.len())
                .map(|x| {
                    Matrix::from_fn(field, n.dim(x), m.dim(x), |r, col| {
                        kernel.get(var(x, r, col), k).clone()
                    })
                })
                .collect();
            ModuleMap::new(m.clone(), n.clone(), comps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(maps)
}

pub fn hom_dim(m: &FunctorModule, n: &FunctorModule) -> Result<usize> {
    Ok(hom_space(m, n)?.len())
}

/// Dimension of `Hom(P_i, N)` and its block offsets, `Hom(C(−, a), N) = N(a)`.
fn hom_offsets(n: &FunctorModule, term: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for &a in term {
        out.push(out.last().copied().unwrap_or(0) + n.dim(a));
    }
    out
}

/// `δ_i: Hom(P_i, N) → Hom(P_{i+1}, N)`, precomposition with the `i`-th differential.
pub fn hom_complex_map(res: &Resolution, n: &FunctorModule, i: usize) -> Matrix {
    let field = n.field();
    let source = res.term(i);
    let target = res.term(i + 1);
    let src = hom_offsets(n, source);
    let dst = hom_offsets(n, target);
    let mut out = Matrix::zeros(field, dst[target.len()], src[source.len()]);
    if let Some(d) = res.differential(i) {
        for (j, &a) in target.iter().enumerate() {
            for (k, &b) in source.iter().enumerate() {
                let block = n.act(a, b, &d.entries[j][k]);
                out.paste(dst[j], src[k], &block);
            }
        }
    }
    out
}

/// Representatives of `ker out / im into` extending an echelon basis of the image.
pub fn cohomology_classes(
    field: Field,
    dim: usize,
    into: &Matrix,
    out: &Matrix,
) -> Vec<Vec<Scalar>> {
    let cycles = if out.nrows() == 0 {
        Matrix::identity(field, dim)
    } else {
        out.kernel_basis()
    };
    let mut acc = if into.ncols() == 0 {
        Subspace::zero(field, dim)
    } else {
        Subspace::column_space(into)
    };
    let mut classes = Vec::new();
    for z in Subspace::column_space(&cycles).basis() {
        if !acc.contains(&z) {
            acc = acc.sum(&Subspace::span(field, dim, std::slice::from_ref(&z)));
            classes.push(z);
        }
    }
    classes
}

/// `Ext^t(M, N)` with cocycle representatives in `Hom(P_t, N)`.
#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub degree: usize,
    /// summands of `P_t`, indexing the blocks of each cocycle
    pub term: Vec<usize>,
    pub classes: Vec<Vec<Scalar>>,
}

impl ExtSpace {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }
}

pub fn ext(m: &FunctorModule, n: &FunctorModule, t: usize) -> Result<ExtSpace> {
    if !m.same_category(n) {
        return Err(Error::Precondition(
            "modules live over different categories".into(),
        ));
    }
    let res = minimal_resolution(m, t + 1)?;
    Ok(ext_from_resolution(&res, n, t))
}

pub fn ext_from_resolution(res: &Resolution, n: &FunctorModule, t: usize) -> ExtSpace {
    let field = n.field();
    let dim = hom_offsets(n, res.term(t)).last().copied().unwrap_or(0);
    let into = if t == 0 {
        Matrix::zeros(field, dim, 0)
    } else {
        hom_complex_map(res, n, t - 1)
    };
    let out = hom_complex_map(res, n, t);
    let classes = if dim == 0 {
        Vec::new()
    } else {
        cohomology_classes(field, dim, &into, &out)
    };
    ExtSpace {
        degree: t,
        term: res.term(t).to_vec(),
        classes,
    }
}

pub fn ext1(m: &FunctorModule, n: &FunctorModule) -> Result<ExtSpace> {
    ext(m, n, 1)
}

pub fn ext_dim(m: &FunctorModule, n: &FunctorModule, t: usize) -> Result<usize> {
    Ok(ext(m, n, t)?.dim())
}

/// Isomorphism test: a random combination of a basis of `Hom(M, N)` is invertible whenever an
/// isomorphism exists, up to a small failure probability on the `false` side.
pub fn is_isomorphic(m: &FunctorModule, n: &FunctorModule) -> Result<bool> {
    if m.dims() != n.dims() {
        return Ok(false);
    }
    let basis = hom_space(m, n)?;
    if m.is_zero() {
        return Ok(true);
    }
    let field = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..4 {
        let mut acc = ModuleMap::zero(m, n);
        for b in &basis {
            let c = field.from_i64(rng.gen_range(1..1000));
            acc = acc.add(&b.scale(&c));
        }
        if acc.is_isomorphism() {
            return Ok(true);
        }
    }
    Ok(false)
}
