use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

/// A subspace of `K^n`, stored as the nonzero rows of a reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            rows: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            rows: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        let m = Matrix::from_rows(field, ambient, vectors.to_vec());
        Subspace::row_space(&m)
    }

    /// Span of the columns of `m`.
    pub fn column_space(m: &Matrix) -> Subspace {
        Subspace::row_space(&m.transpose())
    }

    pub fn row_space(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        let k = pivots.len();
        Subspace {
            field: m.field(),
            ambient: m.ncols(),
            rows: r.block(0, 0, k, m.ncols()),
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors (echelon rows).
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.rows.row(i).to_vec()).collect()
    }

    /// Basis as the rows of a matrix.
    pub fn basis_matrix(&self) -> &Matrix {
        &self.rows
    }

    /// Residue of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let f = v[p].clone();
            if f.is_zero() {
                continue;
            }
            for (j, r) in self.rows.row(i).iter().enumerate() {
                if !r.is_zero() {
                    v[j] = &v[j] - &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let m = Matrix::vstack(self.field, self.ambient, &[&self.rows, &other.rows]);
        Subspace::row_space(&m)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve a·A = b·B via the kernel of [A; -B]^T.
        let stacked = Matrix::vstack(self.field, self.ambient, &[&self.rows, &-&other.rows]);
        let ker = stacked.transpose().kernel_basis();
        let a = ker.block(0, 0, self.dim(), ker.ncols());
        let vecs = (&a.transpose() * &self.rows).transpose();
        Subspace::column_space(&vecs)
    }

    /// Image under the linear map `m` (acting on column vectors).
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        let img = m * &self.rows.transpose();
        let mut s = Subspace::column_space(&img);
        s.ambient = m.nrows();
        s
    }
}

/// The quotient `K^n / U` in normal form: coordinates on the columns outside the pivots of `U`.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    sub: Subspace,
    complement: Vec<usize>,
    reversed: bool,
}

impl QuotientSpace {
    pub fn new(sub: Subspace) -> QuotientSpace {
        let complement = (0..sub.ambient)
            .filter(|c| !sub.pivots.contains(c))
            .collect();
        QuotientSpace {
            sub,
            complement,
            reversed: false,
        }
    }

    /// Normal form eliminating the highest-index coordinates first.
    pub fn new_reversed(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> QuotientSpace {
        let flipped: Vec<Vec<Scalar>> = vectors
            .iter()
            .map(|v| v.iter().rev().cloned().collect())
            .collect();
        let sub = Subspace::span(field, ambient, &flipped);
        let mut complement: Vec<usize> = (0..ambient)
            .filter(|c| !sub.pivots.contains(c))
            .map(|c| ambient - 1 - c)
            .collect();
        complement.sort_unstable();
        QuotientSpace {
            sub,
            complement,
            reversed: true,
        }
    }

    pub fn of_span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> QuotientSpace {
        QuotientSpace::new(Subspace::span(field, ambient, vectors))
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient
    }

    /// Ambient coordinates kept as the quotient basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn subspace_dim(&self) -> usize {
        self.sub.dim()
    }

    /// Class of `v` in complement coordinates.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        if self.reversed {
            let n = self.ambient();
            let flipped: Vec<Scalar> = v.iter().rev().cloned().collect();
            let r = self.sub.reduce(&flipped);
            self.complement
                .iter()
                .map(|&c| r[n - 1 - c].clone())
                .collect()
        } else {
            let r = self.sub.reduce(v);
            self.complement.iter().map(|&c| r[c].clone()).collect()
        }
    }

    /// Projection as a `dim x ambient` matrix.
    pub fn projection_matrix(&self) -> Matrix {
        let field = self.sub.field;
        let n = self.ambient();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| {
                let mut e = vec![field.zero(); n];
                e[j] = field.one();
                self.project(&e)
            })
            .collect();
        Matrix::from_columns(field, self.dim(), &cols)
    }

    /// Section sending the `k`-th quotient basis vector to the unit vector at `complement[k]`.
    pub fn section_matrix(&self) -> Matrix {
        let field = self.sub.field;
        let mut m = Matrix::zeros(field, self.ambient(), self.dim());
        for (k, &c) in self.complement.iter().enumerate() {
            m.set(c, k, field.one());
        }
        m
    }
}
