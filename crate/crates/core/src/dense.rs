//! Dense complex operators with role tags, spectral projectors and time
//! evolution.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ccommutator, cmul};
use crate::Complex64;

/// Relative tolerance for role checks.
pub const ROLE_TOL: f64 = 1e-9;

/// Structural property an operator is known to satisfy.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Hermitian,
    AntiHermitian,
    Unitary,
    General,
}

/// Square complex matrix tagged with its [`Role`].
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
    role: Role,
}

impl DenseOperator {
    /// Wraps `matrix` after checking that it satisfies `role`.
    pub fn new(matrix: DMatrix<Complex64>, role: Role) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::invalid(format!(
                "operator matrix is {}x{}, not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let residual = role_residual(&matrix, role);
        if residual > ROLE_TOL {
            return Err(Error::WrongRole {
                expected: role,
                residual,
            });
        }
        Ok(Self { matrix, role })
    }

    pub(crate) fn from_parts(matrix: DMatrix<Complex64>, role: Role) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix, role }
    }

    pub fn general(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::new(matrix, Role::General)
    }

    pub fn hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::new(matrix, Role::Hermitian)
    }

    pub fn anti_hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::new(matrix, Role::AntiHermitian)
    }

    /// Real diagonal Hermitian operator.
    pub fn diagonal(values: &[f64]) -> Self {
        let d = values.len();
        let m = DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::new(values[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::from_parts(m, Role::Hermitian)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_parts(DMatrix::identity(d, d), Role::Unitary)
    }

    pub fn zeros(d: usize) -> Self {
        Self::from_parts(DMatrix::zeros(d, d), Role::General)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Relative distance from satisfying `role`.
    pub fn role_residual(&self, role: Role) -> f64 {
        role_residual(&self.matrix, role)
    }

    /// Re-tags the operator, checking the new role.
    pub fn with_role(self, role: Role) -> Result<Self> {
        Self::new(self.matrix, role)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.matrix.adjoint(), self.role)
    }

    /// Multiplies by a real scalar; roles other than unitary are preserved.
    pub fn scale(&self, k: f64) -> Self {
        let role = if self.role == Role::Unitary {
            Role::General
        } else {
            self.role
        };
        Self::from_parts(self.matrix.map(|z| z * k), role)
    }

    /// Multiplies by `i`, exchanging Hermitian and anti-Hermitian roles.
    pub fn times_i(&self) -> Self {
        let role = match self.role {
            Role::Hermitian => Role::AntiHermitian,
            Role::AntiHermitian => Role::Hermitian,
            r => r,
        };
        Self::from_parts(self.matrix.map(|z| z * Complex64::new(0.0, 1.0)), role)
    }

    /// Multiplies by `−i`, exchanging Hermitian and anti-Hermitian roles.
    pub fn times_minus_i(&self) -> Self {
        self.times_i().scale(-1.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_parts(
            &self.matrix + &other.matrix,
            linear_role(self.role, other.role),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_parts(
            &self.matrix - &other.matrix,
            linear_role(self.role, other.role),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let role = if self.role == Role::Unitary && other.role == Role::Unitary {
            Role::Unitary
        } else {
            Role::General
        };
        Ok(Self::from_parts(cmul(&self.matrix, &other.matrix), role))
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        use Role::*;
        let role = match (self.role, other.role) {
            (AntiHermitian, AntiHermitian) | (Hermitian, Hermitian) => AntiHermitian,
            (AntiHermitian, Hermitian) | (Hermitian, AntiHermitian) => Hermitian,
            _ => General,
        };
        Ok(Self::from_parts(
            ccommutator(&self.matrix, &other.matrix),
            role,
        ))
    }

    /// `self ⊗ other` with `self` as the leading factor.
    pub fn kron(&self, other: &Self) -> Self {
        use Role::*;
        let role = match (self.role, other.role) {
            (Unitary, Unitary) => Unitary,
            (Hermitian, Hermitian) => Hermitian,
            (AntiHermitian, Hermitian) | (Hermitian, AntiHermitian) => AntiHermitian,
            _ => General,
        };
        Self::from_parts(self.matrix.kronecker(&other.matrix), role)
    }

    /// Real inner product `Re Tr(a†b)`.
    pub fn real_inner(&self, other: &Self) -> Result<f64> {
        Ok(hs_inner(self, other)?.re)
    }

    /// Matrix JSON form `{ "dim", "re", "im" }` with row-major nested lists.
    pub fn to_json(&self) -> MatrixJson {
        let d = self.dim();
        MatrixJson {
            dim: d,
            re: (0..d)
                .map(|r| (0..d).map(|c| self.matrix[(r, c)].re).collect())
                .collect(),
            im: (0..d)
                .map(|r| (0..d).map(|c| self.matrix[(r, c)].im).collect())
                .collect(),
        }
    }

    /// Loads a matrix JSON value and checks it against `role`.
    pub fn from_json(json: &MatrixJson, role: Role) -> Result<Self> {
        let d = json.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if !shape_ok(&json.re) || !shape_ok(&json.im) {
            return Err(Error::invalid(format!(
                "matrix JSON does not match declared dim {d}"
            )));
        }
        let m = DMatrix::from_fn(d, d, |r, c| Complex64::new(json.re[r][c], json.im[r][c]));
        Self::new(m, role)
    }
}

fn linear_role(a: Role, b: Role) -> Role {
    if a == b && a != Role::Unitary {
        a
    } else {
        Role::General
    }
}

fn role_residual(m: &DMatrix<Complex64>, role: Role) -> f64 {
    let scale = m.norm().max(f64::MIN_POSITIVE);
    match role {
        Role::General => 0.0,
        Role::Hermitian => (m - m.adjoint()).norm() / scale,
        Role::AntiHermitian => (m + m.adjoint()).norm() / scale,
        Role::Unitary => {
            let d = m.nrows();
            (cmul(&m.adjoint(), m) - DMatrix::identity(d, d)).norm() / (d as f64).sqrt()
        }
    }
}

/// Serialized matrix: `{ "dim": d, "re": [[...]], "im": [[...]] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// Hilbert–Schmidt pairing `Tr(a†b)`.
pub fn hs_inner(a: &DenseOperator, b: &DenseOperator) -> Result<Complex64> {
    a.check_dim(b)?;
    Ok(a
        .matrix
        .iter()
        .zip(b.matrix.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Largest singular value.
pub fn operator_norm(m: &DenseOperator) -> f64 {
    if m.dim() == 0 {
        return 0.0;
    }
    m.matrix
        .clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Distinct eigenvalues (descending) and the orthogonal projectors onto their
/// eigenspaces.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<DenseOperator>,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `Σ λ_m Π_m`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d = self.projectors.first().map_or(0, |p| p.dim());
        let mut m = DMatrix::zeros(d, d);
        for (l, p) in self.eigenvalues.iter().zip(&self.projectors) {
            m += p.matrix.map(|z| z * *l);
        }
        m
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.projectors
            .iter()
            .map(|p| p.matrix.trace().re.round() as usize)
            .collect()
    }
}

/// Hermitian eigendecomposition with eigenvalues ascending.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let d = m.nrows();
    let vectors = DMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn require_hermitian(h: &DenseOperator) -> Result<()> {
    let residual = h.role_residual(Role::Hermitian);
    if residual > ROLE_TOL {
        return Err(Error::WrongRole {
            expected: Role::Hermitian,
            residual,
        });
    }
    Ok(())
}

/// Groups eigenvalues of a Hermitian `chi` into clusters whose neighbours lie
/// within `group_tol` (default `1e−8·max|λ|`) and returns one projector per
/// cluster, largest eigenvalue first.
pub fn spectral_projectors(
    chi: &DenseOperator,
    group_tol: Option<f64>,
) -> Result<SpectralDecomposition> {
    require_hermitian(chi)?;
    let d = chi.dim();
    let (values, vectors) = hermitian_eigen(&chi.matrix);
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = group_tol.unwrap_or(1e-8 * scale).max(1e-14);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in (0..d).rev() {
        match clusters.last_mut() {
            Some(c) if values[*c.last().unwrap()] - values[k] <= tol => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    let mut eigenvalues = Vec::with_capacity(clusters.len());
    let mut projectors = Vec::with_capacity(clusters.len());
    for c in clusters {
        let mean = c.iter().map(|&k| values[k]).sum::<f64>() / c.len() as f64;
        let v = DMatrix::from_fn(d, c.len(), |r, j| vectors[(r, c[j])]);
        let p = &v * v.adjoint();
        eigenvalues.push(mean);
        projectors.push(DenseOperator::from_parts(p, Role::Hermitian));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        projectors,
    })
}

/// `e^{−iht}` for Hermitian `h`.
pub fn evolve(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    require_hermitian(h)?;
    let (values, vectors) = hermitian_eigen(&h.matrix);
    Ok(DenseOperator::from_parts(
        exp_from_eigen(&values, &vectors, t),
        Role::Unitary,
    ))
}

/// `V·diag(e^{−iλt})·V†`.
pub(crate) fn exp_from_eigen(
    values: &[f64],
    vectors: &DMatrix<Complex64>,
    t: f64,
) -> DMatrix<Complex64> {
    let mut scaled = vectors.clone();
    for (c, l) in values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -l * t);
        scaled.column_mut(c).apply(|z| *z *= phase);
    }
    cmul(&scaled, &vectors.adjoint())
}
