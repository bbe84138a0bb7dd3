//! Truncated bosonic modes and the number-operator filter.
//!
//! Mode 1 is the leading tensor factor. Relations are checked on the safe
//! subspace, the bottom `d − 2` levels of every mode, where truncation does
//! not reach.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::filter::{reduce, FilterOperator};
use crate::closure::{dense_closure, span_residual, ClosureOptions};
use crate::dense::{DenseOperator, Role};
use crate::error::{Error, Result};
use crate::genset::GeneratorSet;
use crate::linalg::{cmul, realify, OrthoBasis};
use crate::pauli::dense_qubit_limit;
use crate::report::{tolerances, Tolerances, Verdict};
use crate::Complex64;

/// Smallest truncation with a nonempty safe subspace for quadratic relations.
pub const MIN_TRUNCATION: usize = 4;
/// Residual accepted for the filtered directions.
const DIRECTION_TOL: f64 = 1e-9;

type CMat = DMatrix<Complex64>;

/// Ladder and quadrature operators of `modes` truncated oscillators.
#[derive(Clone, Debug)]
pub struct FockOperators {
    pub d_trunc: usize,
    pub modes: usize,
    pub dim: usize,
    pub a: Vec<DenseOperator>,
    pub a_dag: Vec<DenseOperator>,
    /// `a + a†`
    pub x: Vec<DenseOperator>,
    /// `i(a† − a)`
    pub p: Vec<DenseOperator>,
    /// `a†a`
    pub n: Vec<DenseOperator>,
    /// `a² + a†²`
    pub s: Vec<DenseOperator>,
    /// `a†² − a²`, anti-Hermitian.
    pub s_prime: Vec<DenseOperator>,
}

pub fn fock_operators(d_trunc: usize, modes: usize) -> Result<FockOperators> {
    if d_trunc < MIN_TRUNCATION {
        return Err(Error::invalid(format!(
            "truncation {d_trunc} too small; at least {MIN_TRUNCATION} levels required"
        )));
    }
    if modes == 0 {
        return Err(Error::invalid("at least one mode required"));
    }
    let limit = 1usize << dense_qubit_limit();
    let dim = d_trunc
        .checked_pow(modes as u32)
        .filter(|&d| d <= limit)
        .ok_or(Error::Limit {
            what: "Fock space dimension",
            size: d_trunc.saturating_pow(modes as u32),
            limit,
        })?;
    let ladder = CMat::from_fn(d_trunc, d_trunc, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let embed = |m: &CMat, j: usize| {
        let left = CMat::identity(d_trunc.pow(j as u32), d_trunc.pow(j as u32));
        let k = modes - j - 1;
        let right = CMat::identity(d_trunc.pow(k as u32), d_trunc.pow(k as u32));
        left.kronecker(m).kronecker(&right)
    };
    let i = Complex64::new(0.0, 1.0);
    let mut out = FockOperators {
        d_trunc,
        modes,
        dim,
        a: Vec::new(),
        a_dag: Vec::new(),
        x: Vec::new(),
        p: Vec::new(),
        n: Vec::new(),
        s: Vec::new(),
        s_prime: Vec::new(),
    };
    for j in 0..modes {
        let a = embed(&ladder, j);
        let ad = a.adjoint();
        let a2 = cmul(&a, &a);
        let ad2 = a2.adjoint();
        out.x.push(DenseOperator::from_parts(&a + &ad, Role::Hermitian));
        out.p.push(DenseOperator::from_parts((&ad - &a) * i, Role::Hermitian));
        out.n.push(DenseOperator::from_parts(cmul(&ad, &a), Role::Hermitian));
        out.s.push(DenseOperator::from_parts(&a2 + &ad2, Role::Hermitian));
        out.s_prime.push(DenseOperator::from_parts(&ad2 - &a2, Role::AntiHermitian));
        out.a.push(DenseOperator::from_parts(a, Role::General));
        out.a_dag.push(DenseOperator::from_parts(ad, Role::General));
    }
    Ok(out)
}

/// Outcome of one commutation relation on the safe subspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub mode: usize,
    pub lhs: String,
    /// Right-hand side as commonly quoted.
    pub quoted_rhs: String,
    pub quoted_residual: f64,
    /// Right-hand side obtained by direct evaluation.
    pub measured_rhs: String,
    pub measured_residual: f64,
}

impl FockOperators {
    /// Diagonal projector onto the levels `0..d−2` of every mode.
    pub fn safe_projector(&self) -> DMatrix<f64> {
        let d = self.d_trunc;
        DMatrix::from_fn(self.dim, self.dim, |r, c| {
            if r != c {
                return 0.0;
            }
            let mut k = r;
            for _ in 0..self.modes {
                if k % d >= d - 2 {
                    return 0.0;
                }
                k /= d;
            }
            1.0
        })
    }

    fn restrict(&self, m: &CMat) -> CMat {
        let p = self.safe_projector().map(|v| Complex64::new(v, 0.0));
        &p * m * &p
    }

    /// `‖Π(L − R)Π‖ / max(‖ΠLΠ‖, ‖ΠRΠ‖)`.
    pub fn safe_residual(&self, lhs: &CMat, rhs: &CMat) -> f64 {
        let l = self.restrict(lhs);
        let r = self.restrict(rhs);
        let scale = l.norm().max(r.norm());
        if scale == 0.0 {
            0.0
        } else {
            (&l - &r).norm() / scale
        }
    }

    /// Generators `{iX_j, iP_j, iN_j, iS_j}` named `x{j}`, `p{j}`, `n{j}`, `s{j}`.
    pub fn generator_set(&self) -> Result<GeneratorSet> {
        let mut gens = Vec::new();
        for j in 0..self.modes {
            let m = j + 1;
            gens.push((format!("x{m}"), self.x[j].times_i()));
            gens.push((format!("p{m}"), self.p[j].times_i()));
            gens.push((format!("n{m}"), self.n[j].times_i()));
            gens.push((format!("s{m}"), self.s[j].times_i()));
        }
        GeneratorSet::dense(gens)
    }

    /// `F = i Σ_j ω_j N_j` over the first `omegas.len()` modes.
    pub fn number_filter(&self, omegas: &[f64]) -> Result<FilterOperator> {
        if omegas.is_empty() || omegas.len() > self.modes {
            return Err(Error::invalid(format!(
                "need between 1 and {} frequencies, got {}",
                self.modes,
                omegas.len()
            )));
        }
        for (k, w) in omegas.iter().enumerate() {
            if *w == 0.0 || omegas[..k].contains(w) {
                return Err(Error::invalid("frequencies must be distinct and nonzero"));
            }
        }
        let mut f = CMat::zeros(self.dim, self.dim);
        for (w, n) in omegas.iter().zip(&self.n) {
            f += n.matrix() * Complex64::new(0.0, *w);
        }
        FilterOperator::user_supplied(DenseOperator::from_parts(f, Role::AntiHermitian))
    }

    /// Commutation relations of mode `j` (0-based) on the safe subspace.
    pub fn relations(&self, j: usize) -> Vec<RelationCheck> {
        let (a, ad) = (self.a[j].matrix(), self.a_dag[j].matrix());
        let (x, p, n) = (self.x[j].matrix(), self.p[j].matrix(), self.n[j].matrix());
        let (s, sp) = (self.s[j].matrix(), self.s_prime[j].matrix());
        let id = CMat::identity(self.dim, self.dim);
        let i = Complex64::new(0.0, 1.0);
        let c = |k: f64| Complex64::new(k, 0.0);
        let br = |u: &CMat, v: &CMat| cmul(u, v) - cmul(v, u);
        let m = j + 1;
        let rows: Vec<(String, CMat, String, CMat, String, CMat)> = vec![
            (format!("[a{m}, a{m}†]"), br(a, ad), "I".into(), id.clone(), "I".into(), id.clone()),
            (format!("[X{m}, P{m}]"), br(x, p), "2iI".into(), &id * (i * 2.0), "2iI".into(), &id * (i * 2.0)),
            (format!("[N{m}, a{m}]"), br(n, a), format!("-a{m}"), a * c(-1.0), format!("-a{m}"), a * c(-1.0)),
            (format!("[N{m}, a{m}†]"), br(n, ad), format!("a{m}†"), ad.clone(), format!("a{m}†"), ad.clone()),
            (format!("[N{m}, X{m}]"), br(n, x), format!("-iP{m}"), p * (-i), format!("-iP{m}"), p * (-i)),
            (format!("[N{m}, P{m}]"), br(n, p), format!("iX{m}"), x * i, format!("iX{m}"), x * i),
            (format!("[N{m}, S{m}]"), br(n, s), format!("2S'{m}"), sp * c(2.0), format!("2S'{m}"), sp * c(2.0)),
            (format!("[X{m}, S{m}]"), br(x, s), format!("2P{m}"), p * c(2.0), format!("-2iP{m}"), p * (-i * 2.0)),
            (format!("[P{m}, S{m}]"), br(p, s), format!("-2X{m}"), x * c(-2.0), format!("-2iX{m}"), x * (-i * 2.0)),
            (format!("[S{m}, S'{m}]"), br(s, sp), format!("4N{m}"), n * c(4.0), format!("8N{m} + 4I"), n * c(8.0) + &id * c(4.0)),
        ];
        rows.into_iter()
            .map(|(lhs, l, qr, q, mr, mm)| RelationCheck {
                mode: m,
                quoted_residual: self.safe_residual(&l, &q),
                measured_residual: self.safe_residual(&l, &mm),
                lhs,
                quoted_rhs: qr,
                measured_rhs: mr,
            })
            .collect()
    }
}

/// Number-filter reduction of the oscillator generators onto the first
/// `s_modes` modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillatorReport {
    pub d_trunc: usize,
    pub modes: usize,
    pub s_modes: usize,
    pub omegas: Vec<f64>,
    pub aprime: Vec<String>,
    /// Largest residual of an `A′` element against `span{iX_j, iP_j, S′_j : j ≤ S}`.
    pub direction_residual: f64,
    /// The same on the safe subspace.
    pub safe_direction_residual: f64,
    /// Largest residual of an expected direction against `span A′`.
    pub coverage_residual: f64,
    pub expected_count: usize,
    pub dim_closure_aprime: usize,
    /// Closure dimension of the target modes' generators.
    pub dim_target: usize,
    pub relations: Vec<RelationCheck>,
    pub verdict: Verdict,
    pub tolerances: Tolerances,
}

/// Filters `{iX_j, iP_j, iN_j, iS_j}` with `F = iΣ_{j≤S} ω_j N_j`; default
/// frequencies are `ω_j = j`.
pub fn oscillator_reduction(
    d_trunc: usize,
    modes: usize,
    s_modes: usize,
    omegas: Option<&[f64]>,
) -> Result<OscillatorReport> {
    if s_modes == 0 || s_modes > modes {
        return Err(Error::invalid(format!(
            "target mode count {s_modes} outside 1..={modes}"
        )));
    }
    let ops = fock_operators(d_trunc, modes)?;
    let omegas: Vec<f64> = match omegas {
        Some(w) => w.to_vec(),
        None => (1..=s_modes).map(|j| j as f64).collect(),
    };
    if omegas.len() != s_modes {
        return Err(Error::invalid("one frequency per target mode required"));
    }
    let f = ops.number_filter(&omegas)?;
    let a = ops.generator_set()?;
    let aprime = reduce(&a, &f)?;
    let aprime_ops = aprime.dense_ops()?;

    let expected: Vec<DenseOperator> = (0..s_modes)
        .flat_map(|j| [ops.x[j].times_i(), ops.p[j].times_i(), ops.s_prime[j].clone()])
        .collect();
    let n2 = 2 * ops.dim * ops.dim;
    let span_of = |v: &[DenseOperator], restrict: bool| {
        let mut b = OrthoBasis::new(n2);
        for e in v {
            let m = if restrict { ops.restrict(e.matrix()) } else { e.matrix().clone() };
            b.try_push(&realify(&m), 1e-12);
        }
        b
    };
    let max_residual = |basis: &OrthoBasis, v: &[DenseOperator], restrict: bool| {
        v.iter()
            .map(|e| {
                let m = if restrict { ops.restrict(e.matrix()) } else { e.matrix().clone() };
                span_residual(basis, &DenseOperator::from_parts(m, Role::General))
            })
            .fold(0.0, f64::max)
    };
    let direction_residual = max_residual(&span_of(&expected, false), &aprime_ops, false);
    let safe_direction_residual = max_residual(&span_of(&expected, true), &aprime_ops, true);
    let coverage_residual = max_residual(&span_of(&aprime_ops, false), &expected, false);

    let opts = ClosureOptions::default();
    let dim_closure_aprime = dense_closure(&aprime_ops, &opts)?.elements.len();
    let target_gens: Vec<DenseOperator> = a
        .dense_ops()?
        .into_iter()
        .take(4 * s_modes)
        .collect();
    let dim_target = dense_closure(&target_gens, &opts)?.elements.len();

    let ok = aprime.len() == expected.len()
        && direction_residual <= DIRECTION_TOL
        && safe_direction_residual <= DIRECTION_TOL
        && coverage_residual <= DIRECTION_TOL;
    Ok(OscillatorReport {
        d_trunc,
        modes,
        s_modes,
        omegas,
        aprime: aprime.names().into_iter().map(String::from).collect(),
        direction_residual,
        safe_direction_residual,
        coverage_residual,
        expected_count: expected.len(),
        dim_closure_aprime,
        dim_target,
        relations: (0..modes).flat_map(|j| ops.relations(j)).collect(),
        verdict: Verdict::from_bool(ok),
        tolerances: tolerances([
            ("direction_tol", DIRECTION_TOL),
            ("rank_tol", opts.rank_tol),
        ]),
    })
}
