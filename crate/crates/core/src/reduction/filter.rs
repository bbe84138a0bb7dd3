//! Filtering operators, the reduced set `A′ = {[F, A]}` and its checks.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{checked_targets, IdealDecomposition, Structure};
use crate::closure::{closure, dense_closure, span_residual, ClosureOptions, LieBasis};
use crate::dense::{DenseOperator, Role};
use crate::error::{Error, Result};
use crate::genset::GeneratorSet;
use crate::linalg::{realify, unrealify, OrthoBasis};
use crate::pauli::{PauliString, PauliSum};
use crate::report::{tolerances, Tolerances, Verdict};

/// A target component must carry at least this fraction of `‖F‖`.
pub const FILTER_COMPONENT_MIN: f64 = 1e-6;
/// `[F_j, ·]` below this (relative) counts as vanishing.
pub const CENTRAL_TOL: f64 = 1e-9;
/// Commutators `[F, A]` below this (relative to `‖F‖‖A‖`) are dropped.
pub const REDUCE_DROP_TOL: f64 = 1e-10;
/// Largest containment residual of a passing reduction.
pub const REDUCTION_RESIDUAL_MAX: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct FilterOperator {
    /// Anti-Hermitian `F`.
    pub f: DenseOperator,
    /// Symbolic form when `F` is a Pauli sum.
    pub pauli: Option<PauliSum>,
    /// Projections `F_j` on the target ideals, in target order.
    pub components: Vec<DenseOperator>,
    pub target_indices: Vec<usize>,
}

impl FilterOperator {
    /// Filter taken as given, with no decomposition attached.
    pub fn user_supplied(f: DenseOperator) -> Result<Self> {
        let f = f.with_role(Role::AntiHermitian)?;
        if f.frobenius_norm() == 0.0 {
            return Err(Error::invalid("filter operator is zero"));
        }
        Ok(Self {
            f,
            pauli: None,
            components: Vec::new(),
            target_indices: Vec::new(),
        })
    }

    /// Symbolic filter `i·Σ c_P P`, taken as given.
    pub fn from_pauli(sum: PauliSum) -> Result<Self> {
        if sum.is_empty() {
            return Err(Error::invalid("filter operator is zero"));
        }
        let mut out = Self::user_supplied(sum.to_dense()?)?;
        out.pauli = Some(sum);
        Ok(out)
    }

    /// Filter given as an operator, checked against a decomposition: it must
    /// lie in the sum of the target ideals and touch each of them non-centrally.
    pub fn from_operator(
        dec: &IdealDecomposition,
        f: &DenseOperator,
        targets: &[usize],
    ) -> Result<Self> {
        let targets = checked_targets(targets, dec.ideals.len())?;
        let f = f.clone().with_role(Role::AntiHermitian)?;
        let total = f.frobenius_norm();
        if total == 0.0 {
            return Err(Error::invalid("filter operator is zero"));
        }
        let coords = DVector::from_vec(dec.basis.coordinates(&f)?);
        let outside_basis = span_residual(&dec.basis.ortho(), &f);
        let mut inside = DVector::zeros(coords.len());
        let mut components = Vec::new();
        for &j in &targets {
            let u = &dec.ideals[j].coords;
            let c = u * (u.transpose() * &coords);
            let fj = dec.basis.combine(c.as_slice());
            if fj.frobenius_norm() <= FILTER_COMPONENT_MIN * total {
                return Err(Error::invalid(format!(
                    "filter has no component on target ideal {j}"
                )));
            }
            check_noncentral(&fj, &dec.basis.elements, j)?;
            inside += c;
            components.push(fj);
        }
        let outside = (&coords - inside).norm() / total;
        if outside.max(outside_basis) > CENTRAL_TOL.sqrt() {
            return Err(Error::invalid(format!(
                "filter has a component of relative size {outside:.3e} outside the target ideals"
            )));
        }
        Ok(Self {
            f,
            pauli: None,
            components,
            target_indices: targets,
        })
    }
}

fn check_noncentral(fj: &DenseOperator, elements: &[DenseOperator], index: usize) -> Result<()> {
    let n = fj.frobenius_norm();
    let moved = elements.iter().any(|b| {
        let c = fj.commutator(b).expect("same dimension");
        c.frobenius_norm() > CENTRAL_TOL * n * b.frobenius_norm().max(f64::MIN_POSITIVE)
    });
    if n == 0.0 || !moved {
        return Err(Error::CentralFilter { index });
    }
    Ok(())
}

/// Random filter with a unit-norm component on each target ideal.
pub fn build_filter(dec: &IdealDecomposition, targets: &[usize], seed: u64) -> Result<FilterOperator> {
    let targets = checked_targets(targets, dec.ideals.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut components = Vec::new();
    let mut coords = DVector::zeros(dec.basis.elements.len());
    for &j in &targets {
        let u = &dec.ideals[j].coords;
        let mut g = DVector::from_iterator(
            u.ncols(),
            (0..u.ncols()).map(|_| rng.sample::<f64, _>(StandardNormal)),
        );
        let n = g.norm();
        if n > 0.0 {
            g /= n;
        }
        let c = u * g;
        let fj = dec.basis.combine(c.as_slice());
        check_noncentral(&fj, &dec.basis.elements, j)?;
        coords += c;
        components.push(fj);
    }
    Ok(FilterOperator {
        f: dec.basis.combine(coords.as_slice()),
        pauli: None,
        components,
        target_indices: targets,
    })
}

/// `A′ = {[F, A_l]}` with vanishing commutators dropped and the rest scaled to
/// unit norm (coefficient norm for Pauli sums, Hilbert–Schmidt otherwise).
/// Names are `[F,name]`.
pub fn reduce(a: &GeneratorSet, f: &FilterOperator) -> Result<GeneratorSet> {
    if a.dim() != f.f.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: f.f.dim(),
        });
    }
    if let (Some(sums), Some(fp), Some(n)) = (a.pauli_sums(), &f.pauli, a.qubits()) {
        let mut out = Vec::new();
        for (g, s) in a.generators().iter().zip(sums) {
            let c = fp.commutator(s)?;
            let size = c.norm();
            if size > REDUCE_DROP_TOL * fp.norm() * s.norm() {
                out.push((format!("[F,{}]", g.name), c.scale(1.0 / size)));
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyReduction);
        }
        return GeneratorSet::pauli(n, out);
    }
    let fnorm = f.f.frobenius_norm();
    let mut out = Vec::new();
    for g in a.generators() {
        let op = g.op.to_dense()?;
        let c = f.f.commutator(&op)?;
        let size = c.frobenius_norm();
        if size > REDUCE_DROP_TOL * fnorm * op.frobenius_norm() {
            out.push((format!("[F,{}]", g.name), c.scale(1.0 / size)));
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyReduction);
    }
    GeneratorSet::dense(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub targets: Vec<usize>,
    pub ideal_dims: Vec<usize>,
    pub center_dim: usize,
    pub dim_h_target: usize,
    pub generator_count: usize,
    /// Names of the generators kept in `A′`.
    pub aprime: Vec<String>,
    pub dim_closure_aprime: usize,
    /// Largest relative residual of an `A′`-closure element against `𝔥`.
    pub containment_residual: f64,
    pub verdict: Verdict,
    pub tolerances: Tolerances,
}

/// Closes `reduce(A, F)` and compares it with the sum of the target ideals.
pub fn verify_reduction(
    a: &GeneratorSet,
    f: &FilterOperator,
    dec: &IdealDecomposition,
    targets: &[usize],
    opts: &ClosureOptions,
) -> Result<ReductionReport> {
    let targets = checked_targets(targets, dec.ideals.len())?;
    if a.dim() != dec.basis.dim {
        return Err(Error::DimensionMismatch {
            expected: dec.basis.dim,
            found: a.dim(),
        });
    }
    let mut h = OrthoBasis::new(2 * dec.basis.dim * dec.basis.dim);
    for &j in &targets {
        for e in &dec.ideals[j].elements {
            h.try_push(&realify(e.matrix()), 1e-9);
        }
    }
    let dim_h_target = targets.iter().map(|&j| dec.dims[j]).sum();
    let aprime = reduce(a, f)?;
    let cl = closure(&aprime, opts)?;
    let elements = cl.to_dense()?.elements;
    let containment_residual = elements
        .iter()
        .map(|e| span_residual(&h, e))
        .fold(0.0, f64::max);
    let dim_closure_aprime = cl.dim();
    let ok = dim_closure_aprime == dim_h_target && containment_residual <= REDUCTION_RESIDUAL_MAX;
    Ok(ReductionReport {
        targets,
        ideal_dims: dec.dims.clone(),
        center_dim: dec.center.dim(),
        dim_h_target,
        generator_count: a.len(),
        aprime: aprime.names().into_iter().map(String::from).collect(),
        dim_closure_aprime,
        containment_residual,
        verdict: Verdict::from_bool(ok),
        tolerances: tolerances([
            ("rank_tol", opts.rank_tol),
            ("reduce_drop_tol", REDUCE_DROP_TOL),
            ("containment_max", REDUCTION_RESIDUAL_MAX),
            ("central_tol", CENTRAL_TOL),
        ]),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop2Check {
    pub ideal_dim: usize,
    pub dim_closure: usize,
    pub residual: f64,
    pub passed: bool,
}

/// Whether the first-order commutators `{[F, b]}` regenerate a simple
/// algebra spanned by `ideal`.
pub fn check_prop2(ideal: &[DenseOperator], f: &DenseOperator) -> Result<Prop2Check> {
    let Some(first) = ideal.first() else {
        return Err(Error::invalid("empty ideal"));
    };
    let d = first.dim();
    let fnorm = f.frobenius_norm();
    if fnorm == 0.0 {
        return Err(Error::invalid("filter operator is zero"));
    }
    let mut span = OrthoBasis::new(2 * d * d);
    for e in ideal {
        span.try_push(&realify(e.matrix()), 1e-9);
    }
    if span_residual(&span, f) > 1e-9 {
        return Err(Error::invalid("filter operator lies outside the ideal"));
    }
    let basis: Vec<DenseOperator> = (0..span.count())
        .map(|k| DenseOperator::from_parts(unrealify(span.vector(k), d), Role::AntiHermitian))
        .collect();
    let structure = Structure::new(&LieBasis::Dense(crate::closure::DenseBasis {
        dim: d,
        elements: basis.clone(),
        provenance: vec![None; basis.len()],
        saturated: false,
    }))?;
    if structure.center().ncols() > 0 {
        return Err(Error::invalid("ideal has a nontrivial center"));
    }
    let brackets: Vec<DenseOperator> = basis
        .iter()
        .map(|b| f.commutator(b))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|c| c.frobenius_norm() > CENTRAL_TOL * fnorm)
        .collect();
    if brackets.is_empty() {
        return Err(Error::CentralFilter { index: 0 });
    }
    let cl = dense_closure(&brackets, &ClosureOptions::default())?;
    let residual = cl
        .elements
        .iter()
        .map(|e| span_residual(&span, e))
        .fold(0.0, f64::max);
    let dim_closure = cl.elements.len();
    Ok(Prop2Check {
        ideal_dim: basis.len(),
        dim_closure,
        residual,
        passed: dim_closure == basis.len() && residual <= REDUCTION_RESIDUAL_MAX,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop2Trials {
    pub trials: usize,
    pub passed: usize,
    /// Trial indices that failed.
    pub failures: Vec<usize>,
}

/// [`check_prop2`] for `trials` random unit filters drawn from `seed`.
pub fn prop2_trials(ideal: &[DenseOperator], trials: usize, seed: u64) -> Result<Prop2Trials> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for t in 0..trials {
        let mut m = ideal[0].scale(0.0).into_matrix();
        for e in ideal {
            m += e.matrix() * crate::Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0);
        }
        let f = DenseOperator::from_parts(m, Role::AntiHermitian);
        let f = f.scale(1.0 / f.frobenius_norm());
        if !check_prop2(ideal, &f)?.passed {
            failures.push(t);
        }
    }
    Ok(Prop2Trials {
        trials,
        passed: trials - failures.len(),
        failures,
    })
}

/// The 15 non-identity two-qubit strings as dense `iP/2`.
pub fn su4_pauli_basis() -> Vec<DenseOperator> {
    (1..16u64)
        .map(|k| {
            let p = PauliString::new(2, k & 3, k >> 2).expect("two-qubit string");
            PauliSum::from_string(p, 0.5)
                .to_dense()
                .expect("dense two-qubit operator")
        })
        .collect()
}
