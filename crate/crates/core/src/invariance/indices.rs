use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::commutant::{
    center_of_commutant, central_projection_matrix, dedup_up_to_scalar, doubled_commutant_dim,
    DOUBLED_DIM_LIMIT, GRAM_KERNEL_TOL,
};
use crate::closure::{closure_dim, ClosureOptions, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::genset::GeneratorSet;
use crate::linalg::{column_space, rank, singular_values};
use crate::report::{tolerances, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapOptions {
    pub rank_tol: f64,
    /// Evaluate the doubled-commutant condition when the dimension allows.
    pub evaluate_cond1: bool,
    pub closure: ClosureOptions,
}

impl Default for OverlapOptions {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            evaluate_cond1: true,
            closure: ClosureOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub center_dim: usize,
    /// Rows indexed by center direction, columns by generator of `P`.
    pub t_tilde: Vec<Vec<f64>>,
    /// Same for `P ∪ Q`.
    pub t: Vec<Vec<f64>>,
    /// Central projections of the generators of `Q`.
    pub q_projection: Vec<Vec<f64>>,
    pub rank_t_tilde: usize,
    pub rank_t: usize,
    pub singular_values_t_tilde: Vec<f64>,
    pub singular_values_t: Vec<f64>,
    pub overlap: f64,
    pub dim_p: usize,
    pub dim_pq: usize,
    pub d_c: f64,
    pub doubled_dim_p: Option<usize>,
    pub doubled_dim_pq: Option<usize>,
    /// `None` when the doubled commutant was not evaluated.
    pub lemma2_cond1: Option<bool>,
    pub lemma2_cond2: bool,
    pub tolerances: Tolerances,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| m.row(r).iter().copied().collect())
        .collect()
}

/// Fraction of the squared norm of the columns of `q` lying in the span of
/// the columns of `p`; 1 when `q` vanishes.
pub fn overlap_from_vectors(p: &DMatrix<f64>, q: &DMatrix<f64>, rank_tol: f64) -> Result<f64> {
    if p.nrows() != q.nrows() && p.ncols() > 0 && q.ncols() > 0 {
        return Err(Error::DimensionMismatch {
            expected: p.nrows(),
            found: q.nrows(),
        });
    }
    let total = q.norm_squared();
    if total <= 1e-28 {
        return Ok(1.0);
    }
    let basis = column_space(p, rank_tol);
    if basis.ncols() == 0 {
        return Ok(0.0);
    }
    let inside = (basis.transpose() * q).norm_squared();
    Ok((inside / total).clamp(0.0, 1.0))
}

/// `(dim_pq − dim_p) / dim_p × 100`.
pub fn percentage_change_from_dims(dim_p: usize, dim_pq: usize) -> Result<f64> {
    if dim_p == 0 {
        return Err(Error::invalid("closure of P is zero-dimensional"));
    }
    Ok((dim_pq as f64 - dim_p as f64) / dim_p as f64 * 100.0)
}

/// Percentage growth of the closure dimension when `Q` is added to `P`.
pub fn percentage_change(p: &GeneratorSet, q: &GeneratorSet) -> Result<f64> {
    let opts = ClosureOptions::default();
    let dp = closure_dim(p, &opts)?;
    let dpq = closure_dim(&p.union(q)?, &opts)?;
    percentage_change_from_dims(dp, dpq)
}

/// Full invariance analysis of adding `Q` to `P`.
pub fn analyze_overlap(
    p: &GeneratorSet,
    q: &GeneratorSet,
    opts: &OverlapOptions,
) -> Result<OverlapReport> {
    let dim = p.dim();
    if q.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: q.dim(),
        });
    }
    let pq = p.union(q)?;
    let ops_p = dedup_up_to_scalar(&p.dense_ops()?);
    let ops_q = dedup_up_to_scalar(&q.dense_ops()?);
    let ops_pq = dedup_up_to_scalar(&pq.dense_ops()?);

    let center = center_of_commutant(&ops_pq, dim, opts.rank_tol)?;
    let t_tilde = central_projection_matrix(&ops_p, &center)?;
    let t = central_projection_matrix(&ops_pq, &center)?;
    let q_proj = central_projection_matrix(&ops_q, &center)?;
    let rank_t_tilde = rank(&t_tilde, opts.rank_tol);
    let rank_t = rank(&t, opts.rank_tol);
    let overlap = overlap_from_vectors(&t_tilde, &q_proj, opts.rank_tol)?;

    let dim_p = closure_dim(p, &opts.closure)?;
    let dim_pq = closure_dim(&pq, &opts.closure)?;
    let d_c = percentage_change_from_dims(dim_p, dim_pq)?;

    let (doubled_dim_p, doubled_dim_pq) = if opts.evaluate_cond1 && dim <= DOUBLED_DIM_LIMIT {
        (
            Some(doubled_commutant_dim(&ops_p, dim, opts.rank_tol)?),
            Some(doubled_commutant_dim(&ops_pq, dim, opts.rank_tol)?),
        )
    } else {
        (None, None)
    };
    let lemma2_cond1 = doubled_dim_p.zip(doubled_dim_pq).map(|(a, b)| a == b);

    Ok(OverlapReport {
        center_dim: center.k,
        t_tilde: rows(&t_tilde),
        t: rows(&t),
        q_projection: rows(&q_proj),
        rank_t_tilde,
        rank_t,
        singular_values_t_tilde: singular_values(&t_tilde),
        singular_values_t: singular_values(&t),
        overlap,
        dim_p,
        dim_pq,
        d_c,
        doubled_dim_p,
        doubled_dim_pq,
        lemma2_cond1,
        lemma2_cond2: rank_t_tilde == rank_t,
        tolerances: tolerances([
            ("rank_tol", opts.rank_tol),
            ("closure_rank_tol", opts.closure.rank_tol),
            ("gram_kernel_tol", GRAM_KERNEL_TOL),
        ]),
    })
}

/// [`analyze_overlap`] with default options; the `overlap` field is `O(P,Q)`.
pub fn projection_overlap(p: &GeneratorSet, q: &GeneratorSet) -> Result<OverlapReport> {
    analyze_overlap(p, q, &OverlapOptions::default())
}

/// [`analyze_overlap`] with default options; see the `lemma2_*` fields.
pub fn simulability_check(p: &GeneratorSet, q: &GeneratorSet) -> Result<OverlapReport> {
    analyze_overlap(p, q, &OverlapOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_column_slice(v.len(), 1, v)
    }

    #[test]
    fn formula_level_overlaps() {
        let p = DMatrix::from_column_slice(2, 2, &[0.0, 1.0, 0.0, 2.0]);
        assert_eq!(overlap_from_vectors(&p, &col(&[0.0, 2.0]), 1e-9).unwrap(), 1.0);
        let o = overlap_from_vectors(&p, &col(&[0.3, 0.5]), 1e-9).unwrap();
        assert!((o - 25.0 / 34.0).abs() < 1e-12);
        assert_eq!(overlap_from_vectors(&p, &col(&[0.0, 0.0]), 1e-9).unwrap(), 1.0);
    }

    #[test]
    fn percentage_examples() {
        assert_eq!(percentage_change_from_dims(4, 5).unwrap(), 25.0);
        let x = GeneratorSet::from_strings(&["X"]).unwrap();
        let y = GeneratorSet::from_strings(&["Y"]).unwrap();
        assert_eq!(percentage_change(&x, &y).unwrap(), 200.0);
        let xy = GeneratorSet::from_strings(&["X", "Y"]).unwrap();
        let z = GeneratorSet::from_strings(&["Z"]).unwrap();
        assert_eq!(percentage_change(&xy, &z).unwrap(), 0.0);
    }

    #[test]
    fn q_inside_closure_satisfies_both_conditions() {
        let p = GeneratorSet::from_strings(&["XI", "YI"]).unwrap();
        let q = GeneratorSet::from_strings(&["ZI"]).unwrap();
        let r = simulability_check(&p, &q).unwrap();
        assert_eq!(r.lemma2_cond1, Some(true));
        assert!(r.lemma2_cond2);
        assert_eq!(r.overlap, 1.0);
        assert_eq!(r.d_c, 0.0);
    }
}
