//! Linear-algebra helpers shared by the pipelines.

use nalgebra::{ComplexField, DMatrix, DMatrixView, DVector};

use crate::Complex64;

/// Matrices at or above this size are multiplied through four real products,
/// which use the blocked real kernel instead of the generic complex loop.
const SPLIT_PRODUCT_MIN_DIM: usize = 16;

/// Complex matrix product.
pub fn cmul(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimension mismatch");
    if a.nrows().min(a.ncols()).min(b.ncols()) < SPLIT_PRODUCT_MIN_DIM {
        return a * b;
    }
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    DMatrix::from_fn(a.nrows(), b.ncols(), |r, c| {
        Complex64::new(re[(r, c)], im[(r, c)])
    })
}

/// Commutator `ab − ba`.
pub fn ccommutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    cmul(a, b) - cmul(b, a)
}

fn split(m: &DMatrix<Complex64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// Kronecker product with `a` as the leading (most significant) factor.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Real embedding `[Re vec(m); Im vec(m)]` (column-major). The Euclidean dot
/// product of two embeddings equals `Re Tr(a†b)`.
pub fn realify(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.len();
    let mut v = vec![0.0; 2 * n];
    for (k, z) in m.iter().enumerate() {
        v[k] = z.re;
        v[n + k] = z.im;
    }
    v
}

/// Inverse of [`realify`] for a square `d×d` matrix.
pub fn unrealify(v: &[f64], d: usize) -> DMatrix<Complex64> {
    let n = d * d;
    assert_eq!(v.len(), 2 * n, "embedding length mismatch");
    DMatrix::from_iterator(d, d, (0..n).map(|k| Complex64::new(v[k], v[n + k])))
}

/// Orthonormal basis of the kernel of the matrix whose rows are `rows`.
///
/// Kernel vectors are right singular vectors with singular value below
/// `rank_tol·σ_max`. A matrix with no rows has the whole space as kernel.
pub fn nullspace<T>(rows: &DMatrix<T>, rank_tol: f64) -> Vec<DVector<T>>
where
    T: ComplexField<RealField = f64>,
{
    let n = rows.ncols();
    if n == 0 {
        return Vec::new();
    }
    if rows.nrows() == 0 {
        return (0..n)
            .map(|k| {
                let mut v = DVector::zeros(n);
                v[k] = T::one();
                v
            })
            .collect();
    }
    // The thin SVD only returns min(rows, cols) right singular vectors; pad
    // with zero rows so the full right basis is available.
    let padded;
    let m = if rows.nrows() < n {
        padded = {
            let mut p = DMatrix::zeros(n, n);
            p.rows_mut(0, rows.nrows()).copy_from(rows);
            p
        };
        &padded
    } else {
        rows
    };
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let cut = rank_tol * smax;
    (0..n)
        .filter(|&k| smax == 0.0 || sigma[k] <= cut)
        .map(|k| v_t.row(k).adjoint())
        .collect()
}

/// Numerical rank at relative tolerance `rank_tol`.
pub fn rank<T>(m: &DMatrix<T>, rank_tol: f64) -> usize
where
    T: ComplexField<RealField = f64>,
{
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rank_tol * smax).count()
}

/// Singular values in descending order.
pub fn singular_values<T>(m: &DMatrix<T>) -> Vec<f64>
where
    T: ComplexField<RealField = f64>,
{
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal basis of the column space, as columns, at relative tolerance
/// `rank_tol`.
pub fn column_space(m: &DMatrix<f64>, rank_tol: f64) -> DMatrix<f64> {
    if m.is_empty() {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let s = &svd.singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..s.len())
        .filter(|&k| smax > 0.0 && s[k] > rank_tol * smax)
        .collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Growable orthonormal set of real vectors stored contiguously.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    len: usize,
    data: Vec<f64>,
    count: usize,
}

impl OrthoBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            data: Vec::new(),
            count: 0,
        }
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.data[k * self.len..(k + 1) * self.len]
    }

    fn view(&self) -> DMatrixView<'_, f64> {
        DMatrixView::from_slice(&self.data, self.len, self.count)
    }

    /// Coefficients of `v` against every stored vector.
    pub fn coefficients(&self, v: &[f64]) -> DVector<f64> {
        if self.count == 0 {
            return DVector::zeros(0);
        }
        let v = DVector::from_column_slice(v);
        self.view().tr_mul(&v)
    }

    /// `v` minus its projection, after two Gram–Schmidt passes.
    pub fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut r = DVector::from_column_slice(v);
        if self.count > 0 {
            let basis = self.view();
            for _ in 0..2 {
                let c = basis.tr_mul(&r);
                r -= basis * c;
            }
        }
        r.as_slice().to_vec()
    }

    /// Appends the normalised residual of `v` if its norm exceeds
    /// `rank_tol` times the norm of `v`; returns the stored vector's index.
    pub fn try_push(&mut self, v: &[f64], rank_tol: f64) -> Option<usize> {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let n0 = norm(v);
        if n0 == 0.0 || !n0.is_finite() {
            return None;
        }
        let r = self.residual(v);
        let nr = norm(&r);
        if nr <= rank_tol * n0 {
            return None;
        }
        self.data.extend(r.iter().map(|x| x / nr));
        self.count += 1;
        Some(self.count - 1)
    }

    /// Stored vectors as matrix columns.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        self.view().into_owned()
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Orthonormal basis of the orthogonal complement of the columns of `q`
/// (assumed orthonormal) inside `R^n`.
pub fn orthogonal_complement(q: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let mut b = OrthoBasis::new(n);
    for c in 0..q.ncols() {
        b.try_push(q.column(c).as_slice(), 1e-12);
    }
    let start = b.count();
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        b.try_push(&e, 1e-8);
    }
    let all = b.to_matrix();
    all.columns(start, all.ncols() - start).into_owned()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
