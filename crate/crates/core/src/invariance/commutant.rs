use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::closure::proportionality_residual;
use crate::dense::{hermitian_eigen, DenseOperator, Role, ROLE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{ccommutator, nullspace, realify, unrealify, OrthoBasis};
use crate::Complex64;

/// Largest operator dimension accepted by [`commutant`].
pub const COMMUTANT_DIM_LIMIT: usize = 32;

/// Largest operator dimension accepted by [`doubled_commutant_dim`].
pub const DOUBLED_DIM_LIMIT: usize = 8;

/// Relative eigenvalue threshold for kernels computed from Gram matrices.
pub const GRAM_KERNEL_TOL: f64 = 1e-10;

/// Above this many unknowns kernels are taken from the Gram matrix instead
/// of a stacked SVD.
const SVD_MAX_UNKNOWNS: usize = 256;

type CMat = DMatrix<Complex64>;

/// Orthonormal basis of operators commuting with a set of generators.
#[derive(Clone, Debug)]
pub struct CommutantBasis {
    pub ops: Vec<DenseOperator>,
    pub dim: usize,
}

/// Orthonormal anti-Hermitian basis `ρ_α = iσ_α` (σ Hermitian) of the
/// center of a commutant.
#[derive(Clone, Debug)]
pub struct CenterBasis {
    pub rho: Vec<DenseOperator>,
    pub k: usize,
}

impl CenterBasis {
    /// Orthonormalizes user-supplied anti-Hermitian directions.
    pub fn from_operators(ops: &[DenseOperator]) -> Result<Self> {
        let d = ops
            .first()
            .map(|o| o.dim())
            .ok_or_else(|| Error::invalid("empty center basis"))?;
        let mut ortho = OrthoBasis::new(2 * d * d);
        for o in ops {
            if o.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: o.dim(),
                });
            }
            let residual = o.role_residual(Role::AntiHermitian);
            if residual > ROLE_TOL {
                return Err(Error::WrongRole {
                    expected: Role::AntiHermitian,
                    residual,
                });
            }
            ortho.try_push(&realify(o.matrix()), 1e-9);
        }
        let rho: Vec<DenseOperator> = (0..ortho.count())
            .map(|k| DenseOperator::from_parts(unrealify(ortho.vector(k), d), Role::AntiHermitian))
            .collect();
        Ok(Self { k: rho.len(), rho })
    }
}

/// Kernel of `X ↦ (A_g X − X B_g)_g` over `m×n` matrices `X`, as row-major
/// vectorizations. Returns the dimension and, when requested, a basis.
fn intertwiner_kernel(
    lefts: &[CMat],
    rights: &[CMat],
    m: usize,
    n: usize,
    rank_tol: f64,
    want_vectors: bool,
) -> (usize, Vec<DVector<Complex64>>) {
    let unknowns = m * n;
    if lefts.is_empty() || unknowns == 0 {
        let basis = if want_vectors {
            (0..unknowns)
                .map(|k| {
                    let mut v = DVector::zeros(unknowns);
                    v[k] = Complex64::new(1.0, 0.0);
                    v
                })
                .collect()
        } else {
            Vec::new()
        };
        return (unknowns, basis);
    }
    let im = CMat::identity(m, m);
    let in_ = CMat::identity(n, n);
    if unknowns <= SVD_MAX_UNKNOWNS {
        let mut stacked = CMat::zeros(lefts.len() * unknowns, unknowns);
        for (g, (a, b)) in lefts.iter().zip(rights).enumerate() {
            let l = a.kronecker(&in_) - im.kronecker(&b.transpose());
            stacked.rows_mut(g * unknowns, unknowns).copy_from(&l);
        }
        let k = nullspace(&stacked, rank_tol);
        return (k.len(), k);
    }
    // Σ L†L with L = A⊗I − I⊗Bᵀ, assembled from Kronecker products.
    let blocks: Vec<CMat> = lefts
        .par_iter()
        .zip(rights.par_iter())
        .map(|(a, b)| {
            let ad = a.adjoint();
            let bc = b.conjugate();
            let bt = b.transpose();
            (&ad * a).kronecker(&in_) + im.kronecker(&(&bc * &bt))
                - ad.kronecker(&bt)
                - a.kronecker(&bc)
        })
        .collect();
    let mut gram = CMat::zeros(unknowns, unknowns);
    for b in blocks {
        gram += b;
    }
    gram = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    if want_vectors {
        let (values, vectors) = hermitian_eigen(&gram);
        let lmax = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let keep: Vec<usize> = (0..values.len())
            .filter(|&k| lmax == 0.0 || values[k] <= GRAM_KERNEL_TOL * lmax)
            .collect();
        let basis = keep.iter().map(|&k| vectors.column(k).into_owned()).collect();
        (keep.len(), basis)
    } else {
        let values = crate::linalg::hermitian_eigenvalues(&gram);
        let lmax = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let count = values
            .iter()
            .filter(|&&v| lmax == 0.0 || v <= GRAM_KERNEL_TOL * lmax)
            .count();
        (count, Vec::new())
    }
}

fn check_gens(gens: &[DenseOperator], dim: usize, limit: usize, what: &'static str) -> Result<()> {
    if dim > limit {
        return Err(Error::Limit {
            what,
            size: dim,
            limit,
        });
    }
    for g in gens {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
    }
    Ok(())
}

fn row_major_matrix(v: &DVector<Complex64>, d: usize) -> CMat {
    CMat::from_fn(d, d, |r, c| v[r * d + c])
}

/// Basis of `{X : [X, g] = 0 for every g}` on dimension `dim`.
pub fn commutant(gens: &[DenseOperator], dim: usize, rank_tol: f64) -> Result<CommutantBasis> {
    check_gens(gens, dim, COMMUTANT_DIM_LIMIT, "commutant operator dimension")?;
    let mats: Vec<CMat> = gens.iter().map(|g| g.matrix().clone()).collect();
    let (_, vectors) = intertwiner_kernel(&mats, &mats, dim, dim, rank_tol, true);
    let ops: Vec<DenseOperator> = vectors
        .iter()
        .map(|v| DenseOperator::from_parts(row_major_matrix(v, dim), Role::General))
        .collect();
    Ok(CommutantBasis {
        dim: ops.len(),
        ops,
    })
}

/// Center of the commutant: commutant elements commuting with the whole
/// commutant, returned as an orthonormal anti-Hermitian basis.
pub fn center_of_commutant(
    gens: &[DenseOperator],
    dim: usize,
    rank_tol: f64,
) -> Result<CenterBasis> {
    let comm = commutant(gens, dim, rank_tol)?;
    let c: Vec<&CMat> = comm.ops.iter().map(|o| o.matrix()).collect();
    let m = c.len();
    // Gram matrix of z ↦ ([Σ z_i C_i, C_k])_k.
    let brackets: Vec<Vec<CMat>> = (0..m)
        .into_par_iter()
        .map(|i| (0..m).map(|k| ccommutator(c[i], c[k])).collect())
        .collect();
    let gram = CMat::from_fn(m, m, |i, j| {
        (0..m)
            .map(|k| {
                brackets[i][k]
                    .iter()
                    .zip(brackets[j][k].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum::<Complex64>()
            })
            .sum()
    });
    let (values, vectors) = hermitian_eigen(&gram);
    let lmax = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut ortho = OrthoBasis::new(2 * dim * dim);
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    for (k, &l) in values.iter().enumerate() {
        if lmax > 0.0 && l > GRAM_KERNEL_TOL * lmax {
            continue;
        }
        let mut z = CMat::zeros(dim, dim);
        for i in 0..m {
            z += c[i] * vectors[(i, k)].conj();
        }
        let h1 = (&z + z.adjoint()) * half;
        let h2 = (&z - z.adjoint()) * minus_half_i;
        let zn = z.norm();
        for h in [h1, h2] {
            if h.norm() > 1e-8 * zn {
                ortho.try_push(&realify(&h), 1e-8);
            }
        }
    }
    let rho = (0..ortho.count())
        .map(|k| {
            let mut sigma = unrealify(ortho.vector(k), dim);
            let lead = sigma
                .iter()
                .find(|z| z.norm() > 1e-8)
                .copied()
                .unwrap_or(Complex64::new(1.0, 0.0));
            if lead.re < 0.0 {
                sigma = -sigma;
            }
            DenseOperator::from_parts(sigma * Complex64::new(0.0, 1.0), Role::AntiHermitian)
        })
        .collect::<Vec<_>>();
    Ok(CenterBasis { k: rho.len(), rho })
}

/// `k × |gens|` matrix with entries `Re Tr(ρ_α† g_β)`.
pub fn central_projection_matrix(
    gens: &[DenseOperator],
    center: &CenterBasis,
) -> Result<DMatrix<f64>> {
    let mut t = DMatrix::zeros(center.k, gens.len());
    for (a, rho) in center.rho.iter().enumerate() {
        for (b, g) in gens.iter().enumerate() {
            let v = crate::dense::hs_inner(rho, g)?;
            let scale = rho.frobenius_norm() * g.frobenius_norm();
            if v.im.abs() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::invalid(format!(
                    "central projection of generator {b} has imaginary part {:.3e}; generators must be anti-Hermitian",
                    v.im
                )));
            }
            t[(a, b)] = v.re;
        }
    }
    Ok(t)
}

/// Drops zero operators and operators proportional to an earlier one.
pub fn dedup_up_to_scalar(ops: &[DenseOperator]) -> Vec<DenseOperator> {
    let mut kept: Vec<DenseOperator> = Vec::new();
    for o in ops {
        if o.frobenius_norm() == 0.0 {
            continue;
        }
        if kept.iter().all(|k| proportionality_residual(o, k) > 1e-9) {
            kept.push(o.clone());
        }
    }
    kept
}

/// Splits `dim = d′·m` with every generator of the form `g′ ⊗ I_m` (trailing)
/// or `I_m ⊗ g′` (leading), for the largest such `m` found greedily.
fn strip_identity_factors(gens: &[CMat], dim: usize) -> (Vec<CMat>, usize, usize) {
    let mut cur: Vec<CMat> = gens.to_vec();
    let mut d = dim;
    let mut factor = 1;
    'outer: loop {
        for m in 2..=d {
            if d % m != 0 {
                continue;
            }
            let dp = d / m;
            if let Some(reduced) = reduce_trailing(&cur, dp, m) {
                cur = reduced;
                d = dp;
                factor *= m;
                continue 'outer;
            }
            if let Some(reduced) = reduce_leading(&cur, dp, m) {
                cur = reduced;
                d = dp;
                factor *= m;
                continue 'outer;
            }
        }
        break;
    }
    (cur, d, factor)
}

fn reduce_trailing(gens: &[CMat], dp: usize, m: usize) -> Option<Vec<CMat>> {
    gens.iter()
        .map(|g| {
            let r = CMat::from_fn(dp, dp, |i, j| g[(i * m, j * m)]);
            let rebuilt = r.kronecker(&CMat::identity(m, m));
            ((&rebuilt - g).norm() <= 1e-12 * g.norm().max(1.0)).then_some(r)
        })
        .collect()
}

fn reduce_leading(gens: &[CMat], dp: usize, m: usize) -> Option<Vec<CMat>> {
    gens.iter()
        .map(|g| {
            let r = CMat::from_fn(dp, dp, |i, j| g[(i, j)]);
            let rebuilt = CMat::identity(m, m).kronecker(&r);
            ((&rebuilt - g).norm() <= 1e-12 * g.norm().max(1.0)).then_some(r)
        })
        .collect()
}

/// Dimension of the commutant of `{M ⊗ I + I ⊗ M}` on `dim²`.
///
/// The collective action commutes with the swap, so the problem splits into
/// symmetric and antisymmetric blocks; idle tensor factors are factored out
/// first.
pub fn doubled_commutant_dim(gens: &[DenseOperator], dim: usize, rank_tol: f64) -> Result<usize> {
    check_gens(gens, dim, DOUBLED_DIM_LIMIT, "doubled commutant operator dimension")?;
    let mats: Vec<CMat> = dedup_up_to_scalar(gens)
        .into_iter()
        .map(|g| g.into_matrix())
        .collect();
    if mats.is_empty() {
        return Ok(dim.pow(4));
    }
    let (reduced, d, factor) = strip_identity_factors(&mats, dim);
    let (us, ua) = swap_bases(d);
    let collective: Vec<CMat> = reduced
        .iter()
        .map(|m| m.kronecker(&CMat::identity(d, d)) + CMat::identity(d, d).kronecker(m))
        .collect();
    let restrict = |u: &CMat, v: &CMat| -> Vec<CMat> {
        collective.iter().map(|g| u.adjoint() * g * v).collect()
    };
    let gs = restrict(&us, &us);
    let ga = restrict(&ua, &ua);
    let (ns, na) = (us.ncols(), ua.ncols());
    let (kss, _) = intertwiner_kernel(&gs, &gs, ns, ns, rank_tol, false);
    let (kaa, _) = intertwiner_kernel(&ga, &ga, na, na, rank_tol, false);
    let (ksa, _) = intertwiner_kernel(&gs, &ga, ns, na, rank_tol, false);
    Ok((kss + kaa + 2 * ksa) * factor.pow(4))
}

/// Orthonormal bases of the symmetric and antisymmetric subspaces of
/// `C^d ⊗ C^d`.
fn swap_bases(d: usize) -> (CMat, CMat) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    for a in 0..d {
        for b in a..d {
            let mut v = DVector::<Complex64>::zeros(d * d);
            if a == b {
                v[a * d + a] = Complex64::new(1.0, 0.0);
                sym.push(v);
            } else {
                v[a * d + b] = Complex64::new(s, 0.0);
                v[b * d + a] = Complex64::new(s, 0.0);
                sym.push(v.clone());
                v[b * d + a] = Complex64::new(-s, 0.0);
                anti.push(v);
            }
        }
    }
    let to_mat = |cols: Vec<DVector<Complex64>>| {
        if cols.is_empty() {
            CMat::zeros(d * d, 0)
        } else {
            CMat::from_columns(&cols)
        }
    };
    (to_mat(sym), to_mat(anti))
}
