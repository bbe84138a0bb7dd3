//! Reductive structure of a closure: Lie center, simple ideals, filtering
//! operators and the reduced generating sets they produce.
//!
//! Everything here works in orthonormal coordinates of the closure basis.
//! The real inner product `Re Tr(a†b)` is ad-invariant on anti-Hermitian
//! operators, so every `ad` matrix is skew-symmetric in those coordinates and
//! orthogonal complements of ideals are ideals.

mod filter;
mod fock;

pub use filter::{
    build_filter, check_prop2, prop2_trials, reduce, su4_pauli_basis, verify_reduction,
    FilterOperator, Prop2Check, Prop2Trials, ReductionReport, CENTRAL_TOL, FILTER_COMPONENT_MIN,
    REDUCE_DROP_TOL, REDUCTION_RESIDUAL_MAX,
};
pub use fock::{
    fock_operators, oscillator_reduction, FockOperators, OscillatorReport, RelationCheck,
    MIN_TRUNCATION,
};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::closure::{adjoint_matrices, DenseBasis, LieBasis};
use crate::dense::{hermitian_eigen, DenseOperator};
use crate::error::{Error, Result};
use crate::linalg::{norm, orthogonal_complement, OrthoBasis};
use crate::Complex64;

/// Redraws allowed when a random split fails.
pub const DEFAULT_MAX_RETRIES: usize = 8;
/// Kernel cut for the Lie center, relative to the largest `ad` norm.
pub const CENTER_TOL: f64 = 1e-9;
/// Smallest admissible `|λ_min / λ_max|` of the Killing form on the
/// complement of the center.
pub const KILLING_TOL: f64 = 1e-8;
/// Largest complement handled through the adjoint centroid; bigger algebras
/// use isolated eigenvectors of a random `ad_x`.
pub const CENTROID_MAX_DIM: usize = 16;
/// Bracket and closure residual accepted for the ideals.
pub const IDEAL_TOL: f64 = 1e-9;
/// Relative separation that makes two eigenvalues distinct.
const EIGEN_GAP: f64 = 1e-6;

/// Subspace of the closure, as orthonormal coordinate columns plus the
/// matching operators.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub coords: DMatrix<f64>,
    pub elements: Vec<DenseOperator>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    fn from_coords(basis: &DenseBasis, coords: DMatrix<f64>) -> Self {
        let elements = coords
            .column_iter()
            .map(|c| basis.combine(c.as_slice()))
            .collect();
        Self { coords, elements }
    }

    /// Orthogonal projector onto the subspace, in coordinates.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.coords * self.coords.transpose()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRoute {
    /// At most one ideal; nothing to split.
    Trivial,
    /// Eigenspaces of a random symmetric element of the adjoint centroid.
    Centroid,
    /// Ideals generated by isolated eigenvectors of a random `ad_x`.
    Spectral,
}

/// `𝔤 = center ⊕ 𝔤_1 ⊕ … ⊕ 𝔤_T` with simple `𝔤_j`.
#[derive(Clone, Debug)]
pub struct IdealDecomposition {
    /// Orthonormal dense form of the input basis.
    pub basis: DenseBasis,
    pub center: Subspace,
    pub ideals: Vec<Subspace>,
    pub dims: Vec<usize>,
    pub route: SplitRoute,
    /// Random draws used (0 for the trivial route).
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub input_dim: usize,
    pub center_dim: usize,
    pub ideal_dims: Vec<usize>,
    pub route: SplitRoute,
    pub attempts: usize,
}

impl IdealDecomposition {
    pub fn summary(&self) -> DecompositionSummary {
        DecompositionSummary {
            input_dim: self.basis.elements.len(),
            center_dim: self.center.dim(),
            ideal_dims: self.dims.clone(),
            route: self.route,
            attempts: self.attempts,
        }
    }

    /// Operators spanning the sum of the selected ideals.
    pub fn target_elements(&self, targets: &[usize]) -> Result<Vec<DenseOperator>> {
        let targets = checked_targets(targets, self.ideals.len())?;
        Ok(targets
            .iter()
            .flat_map(|&j| self.ideals[j].elements.iter().cloned())
            .collect())
    }
}

pub(crate) fn checked_targets(targets: &[usize], count: usize) -> Result<Vec<usize>> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    let mut t = targets.to_vec();
    t.sort_unstable();
    t.dedup();
    if let Some(&index) = t.iter().find(|&&j| j >= count) {
        return Err(Error::TargetOutOfRange { index, count });
    }
    Ok(t)
}

/// Orthonormal basis together with its skew-symmetric `ad` matrices.
pub(crate) struct Structure {
    pub basis: DenseBasis,
    pub ad: Vec<DMatrix<f64>>,
    /// Largest Frobenius norm among the `ad` matrices.
    pub scale: f64,
}

impl Structure {
    pub fn new(basis: &LieBasis) -> Result<Self> {
        let mut ad = adjoint_matrices(basis)?;
        if let LieBasis::Symbolic(_) = basis {
            // Strings stand for iP; the dense basis uses iP/√d.
            let s = 1.0 / (basis.operator_dim() as f64).sqrt();
            for a in &mut ad {
                *a *= s;
            }
        }
        let scale = ad.iter().map(|a| a.norm()).fold(0.0, f64::max);
        Ok(Self {
            basis: basis.to_dense()?,
            ad,
            scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.ad.len()
    }

    /// `ad_x` for the element with coordinates `x`.
    pub fn ad_of(&self, x: &[f64]) -> DMatrix<f64> {
        let m = self.dim();
        let mut out = DMatrix::zeros(m, m);
        for (c, a) in x.iter().zip(&self.ad) {
            if *c != 0.0 {
                out += a * *c;
            }
        }
        out
    }

    /// Coordinates of the Lie center, canonicalized.
    pub fn center(&self) -> DMatrix<f64> {
        let m = self.dim();
        let cut = CENTER_TOL * self.scale.max(f64::MIN_POSITIVE);
        let mut k = DMatrix::<f64>::identity(m, m);
        // [z, b_j] = −ad_j z, so the center is the common kernel.
        for a in &self.ad {
            if k.ncols() == 0 {
                break;
            }
            let image = a * &k;
            let inner = kernel_below(&image, cut);
            k = &k * inner;
        }
        canonical_basis(&(&k * k.transpose()), k.ncols())
    }
}

/// Right kernel vectors (as columns) with singular value at most `cut`.
fn kernel_below(m: &DMatrix<f64>, cut: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let padded;
    let src = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.rows_mut(0, m.nrows()).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let svd = src.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let keep: Vec<usize> = (0..n).filter(|&k| svd.singular_values[k] <= cut).collect();
    DMatrix::from_fn(n, keep.len(), |r, c| v_t[(keep[c], r)])
}

/// Gram–Schmidt of the projector columns in index order: a basis fixed by the
/// subspace alone, independent of how it was found.
fn canonical_basis(p: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let m = p.nrows();
    let mut b = OrthoBasis::new(m);
    for c in 0..m {
        if b.count() == k {
            break;
        }
        let col = p.column(c);
        if col.norm() > 1e-6 {
            b.try_push(col.as_slice(), 1e-6);
        }
    }
    b.to_matrix()
}

/// Lie center of a closure basis.
pub fn lie_center(basis: &LieBasis) -> Result<Subspace> {
    let s = Structure::new(basis)?;
    let coords = s.center();
    Ok(Subspace::from_coords(&s.basis, coords))
}

/// Splits a reductive closure into its center and simple ideals.
pub fn ideal_decomposition(basis: &LieBasis, seed: u64) -> Result<IdealDecomposition> {
    ideal_decomposition_with(basis, seed, DEFAULT_MAX_RETRIES)
}

/// [`ideal_decomposition`] with an explicit retry budget.
pub fn ideal_decomposition_with(
    basis: &LieBasis,
    seed: u64,
    max_retries: usize,
) -> Result<IdealDecomposition> {
    let s = Structure::new(basis)?;
    decompose(&s, seed, max_retries)
}

pub(crate) fn decompose(s: &Structure, seed: u64, max_retries: usize) -> Result<IdealDecomposition> {
    let m = s.dim();
    let center = s.center();
    let q = orthogonal_complement(&center, m);
    let r = q.ncols();
    check_reductive(s, &q)?;

    let (route, ideals, attempts) = if r == 0 {
        (SplitRoute::Trivial, Vec::new(), 0)
    } else {
        let route = if r <= CENTROID_MAX_DIM {
            SplitRoute::Centroid
        } else {
            SplitRoute::Spectral
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let centroid = (route == SplitRoute::Centroid).then(|| adjoint_centroid(s, &q));
        let mut found = None;
        for attempt in 1..=max_retries.max(1) {
            let candidate = match &centroid {
                Some(c) => split_centroid(&q, c, &mut rng),
                None => split_spectral(s, &q, &mut rng),
            };
            if let Some(ideals) = candidate {
                if ideals_valid(s, &ideals) {
                    found = Some((ideals, attempt));
                    break;
                }
            }
        }
        let Some((ideals, attempts)) = found else {
            return Err(Error::IdealSplit {
                attempts: max_retries.max(1),
            });
        };
        let route = if ideals.len() == 1 { SplitRoute::Trivial } else { route };
        (route, ideals, attempts)
    };

    let mut ideals: Vec<DMatrix<f64>> = ideals
        .into_iter()
        .map(|u| canonical_basis(&(&u * u.transpose()), u.ncols()))
        .collect();
    ideals.sort_by(|a, b| ideal_key(a).partial_cmp(&ideal_key(b)).expect("finite keys"));
    let dims = ideals.iter().map(|u| u.ncols()).collect();
    Ok(IdealDecomposition {
        center: Subspace::from_coords(&s.basis, center),
        ideals: ideals
            .into_iter()
            .map(|u| Subspace::from_coords(&s.basis, u))
            .collect(),
        dims,
        route,
        attempts,
        basis: s.basis.clone(),
    })
}

/// Position of the first basis element the ideal touches, then how much.
fn ideal_key(u: &DMatrix<f64>) -> (usize, f64) {
    let p = u * u.transpose();
    let k = (0..p.nrows()).find(|&k| p[(k, k)] > 1e-6).unwrap_or(p.nrows());
    (k, if k < p.nrows() { -p[(k, k)] } else { 0.0 })
}

fn check_reductive(s: &Structure, q: &DMatrix<f64>) -> Result<()> {
    let r = q.ncols();
    if r == 0 {
        return Ok(());
    }
    let ads: Vec<DMatrix<f64>> = q.column_iter().map(|c| s.ad_of(c.as_slice())).collect();
    let killing = DMatrix::from_fn(r, r, |i, j| (&ads[i] * &ads[j]).trace());
    let ev = killing.symmetric_eigenvalues();
    let max = ev.iter().fold(0.0, |a: f64, v| a.max(v.abs()));
    let min = ev.iter().fold(f64::INFINITY, |a: f64, v| a.min(v.abs()));
    let ratio = if max == 0.0 { 0.0 } else { min / max };
    if ratio <= KILLING_TOL {
        return Err(Error::NotReductive { ratio });
    }
    Ok(())
}

/// Basis of the real matrices on the complement commuting with every
/// restricted `ad`.
fn adjoint_centroid(s: &Structure, q: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let r = q.ncols();
    let restricted: Vec<DMatrix<f64>> = q
        .column_iter()
        .map(|c| q.transpose() * s.ad_of(c.as_slice()) * q)
        .collect();
    // Row-major vec(X); one block of r² rows per restricted ad.
    let mut rows = DMatrix::<f64>::zeros(r * r * restricted.len(), r * r);
    for (t, a) in restricted.iter().enumerate() {
        for i in 0..r {
            for j in 0..r {
                let row = t * r * r + i * r + j;
                for c in 0..r {
                    // (XA − AX)_{ij}
                    rows[(row, i * r + c)] += a[(c, j)];
                    rows[(row, c * r + j)] -= a[(i, c)];
                }
            }
        }
    }
    crate::linalg::nullspace(&rows, 1e-9)
        .into_iter()
        .map(|v| DMatrix::from_row_slice(r, r, v.as_slice()))
        .collect()
}

fn normal_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

/// Eigenvalue clusters of ascending values; each entry lists indices.
fn clusters(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(c) if (v - values[*c.last().expect("nonempty")]).abs() <= gap => c.push(k),
            _ => out.push(vec![k]),
        }
    }
    out
}

fn split_centroid(
    q: &DMatrix<f64>,
    centroid: &[DMatrix<f64>],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<DMatrix<f64>>> {
    let r = q.ncols();
    let w = normal_vector(rng, centroid.len());
    let mut x = DMatrix::<f64>::zeros(r, r);
    for (c, k) in w.iter().zip(centroid) {
        x += k * *c;
    }
    let sym = (&x + x.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let spread = values.iter().fold(0.0, |a: f64, v| a.max(v.abs()));
    let groups = clusters(&values, EIGEN_GAP * spread.max(f64::MIN_POSITIVE));
    // The centroid of a semisimple adjoint representation is R^T.
    if groups.len() != centroid.len() {
        return None;
    }
    Some(
        groups
            .iter()
            .map(|g| {
                let v = DMatrix::from_fn(r, g.len(), |row, c| eig.eigenvectors[(row, order[g[c]])]);
                q * v
            })
            .collect(),
    )
}

fn split_spectral(
    s: &Structure,
    q: &DMatrix<f64>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<DMatrix<f64>>> {
    let r = q.ncols();
    let x = q * normal_vector(rng, r);
    let ad = s.ad_of(x.as_slice());
    // i·ad_x is Hermitian; eigenvectors of isolated eigenvalues lie in a
    // single ideal.
    let h = ad.map(|v| Complex64::new(0.0, v));
    let (values, vectors) = hermitian_eigen(&h);
    let top = values.iter().fold(0.0, |a: f64, v| a.max(v.abs()));
    if top == 0.0 {
        return None;
    }
    let gap = EIGEN_GAP * top;
    let n = values.len();
    let mut found: Vec<DMatrix<f64>> = Vec::new();
    let mut covered = OrthoBasis::new(s.dim());
    for k in 0..n {
        if covered.count() == r {
            break;
        }
        let isolated = values[k].abs() > gap
            && (k == 0 || values[k] - values[k - 1] > gap)
            && (k + 1 == n || values[k + 1] - values[k] > gap);
        if !isolated {
            continue;
        }
        let col = vectors.column(k);
        let re: Vec<f64> = col.iter().map(|z| z.re).collect();
        let im: Vec<f64> = col.iter().map(|z| z.im).collect();
        let seed = if norm(&re) >= norm(&im) { re } else { im };
        let n0 = norm(&seed);
        if norm(&covered.residual(&seed)) <= 1e-6 * n0 {
            continue;
        }
        let ideal = ideal_span(s, &seed);
        for c in ideal.column_iter() {
            covered.try_push(c.as_slice(), 1e-6);
        }
        found.push(ideal);
    }
    (covered.count() == r).then_some(found)
}

/// Smallest ideal containing `w`.
fn ideal_span(s: &Structure, w: &[f64]) -> DMatrix<f64> {
    let mut b = OrthoBasis::new(s.dim());
    b.try_push(w, 1e-12);
    let floor = 1e-9 * s.scale;
    let mut k = 0;
    while k < b.count() {
        let v = DVector::from_column_slice(b.vector(k));
        for a in &s.ad {
            let image = a * &v;
            if image.norm() > floor {
                b.try_push(image.as_slice(), 1e-8);
            }
        }
        k += 1;
    }
    b.to_matrix()
}

/// Closure of every ideal and vanishing cross brackets, to [`IDEAL_TOL`].
fn ideals_valid(s: &Structure, ideals: &[DMatrix<f64>]) -> bool {
    let tol = IDEAL_TOL * s.scale.max(f64::MIN_POSITIVE);
    let projectors: Vec<DMatrix<f64>> = ideals.iter().map(|u| u * u.transpose()).collect();
    let m = s.dim();
    for (i, u) in ideals.iter().enumerate() {
        for c in u.column_iter() {
            let ad = s.ad_of(c.as_slice());
            for (j, v) in ideals.iter().enumerate() {
                let image = &ad * v;
                let bad = if i == j {
                    (&image - &projectors[i] * &image).norm()
                } else {
                    image.norm()
                };
                if bad > tol * (v.ncols() as f64).sqrt().max(1.0) {
                    return false;
                }
            }
        }
    }
    let total: usize = ideals.iter().map(|u| u.ncols()).sum();
    total <= m
}
