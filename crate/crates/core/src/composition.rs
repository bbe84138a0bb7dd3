//! Direct-sum composition of generating sets through an ancilla register.
//!
//! Block `m` is tagged with the projector `Π_m` onto the `m`-th eigenspace of
//! a Hermitian `χ` (largest eigenvalue first), so generators of different
//! blocks commute and the composed algebra is the direct sum of the blocks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closure::{dense_closure, ClosureOptions};
use crate::dense::{evolve, spectral_projectors, DenseOperator, Role, ROLE_TOL};
use crate::error::{Error, Result};
use crate::genset::GeneratorSet;
use crate::linalg::singular_values;
use crate::report::{tolerances, Tolerances, Verdict};

/// Largest `‖[a, b]‖_F / (‖a‖‖b‖)` across blocks still accepted as zero.
pub const CROSS_TOL: f64 = 1e-10;

/// Power families with a Vandermonde condition number above this are
/// rejected as numerically dependent.
pub const VANDERMONDE_COND_MAX: f64 = 1e12;

/// Leave-one-out minimality is only checked up to this many generators.
pub const MINIMALITY_MAX_GENERATORS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionKind {
    Projectors,
    Powers,
}

/// Composed generating set plus the data needed to verify it.
#[derive(Clone, Debug)]
pub struct Composition {
    pub kind: CompositionKind,
    /// Composed generators on `system_dim · ancilla_dim`.
    pub set: GeneratorSet,
    /// Block sets in block order; repeated for power compositions.
    pub blocks: Vec<GeneratorSet>,
    /// Ancilla projectors `Π_m`, one per block.
    pub projectors: Vec<DenseOperator>,
    pub system_dim: usize,
    pub ancilla_dim: usize,
}

impl Composition {
    /// `A_{m,l} ⊗ Π_m` for every block generator, tagged with its block.
    pub fn block_images(&self) -> Result<Vec<(usize, DenseOperator)>> {
        let mut out = Vec::new();
        for (m, (block, pi)) in self.blocks.iter().zip(&self.projectors).enumerate() {
            for g in block.dense_ops()? {
                out.push((m, g.kron(pi)));
            }
        }
        Ok(out)
    }
}

fn ceil_log2(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

/// `χ = diag(0, 1, …, K−1)` on `⌈log₂ K⌉` qubits, padding with `K−1`.
pub fn default_chi(k: usize) -> Result<DenseOperator> {
    if k == 0 {
        return Err(Error::invalid("block count must be positive"));
    }
    let d = 1usize << ceil_log2(k);
    let values: Vec<f64> = (0..d).map(|i| i.min(k - 1) as f64).collect();
    Ok(DenseOperator::diagonal(&values))
}

fn common_system_dim(sets: &[GeneratorSet]) -> Result<usize> {
    let first = sets
        .first()
        .ok_or_else(|| Error::invalid("no blocks to compose"))?;
    for s in sets {
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: s.dim(),
            });
        }
        if s.is_empty() {
            return Err(Error::invalid("empty block"));
        }
    }
    Ok(first.dim())
}

fn check_projector(pi: &DenseOperator) -> Result<()> {
    let herm = pi.role_residual(Role::Hermitian);
    let m = pi.matrix();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let idem = (crate::linalg::cmul(m, m) - m).norm() / scale;
    let residual = herm.max(idem);
    if residual > ROLE_TOL {
        return Err(Error::NotProjector { residual });
    }
    Ok(())
}

/// `{A_{m,l} ⊗ Π_m}` for explicitly supplied projectors.
///
/// Only the projector property of each `Π_m` is checked; mutual
/// orthogonality is what [`verify_composition`] tests.
pub fn compose_with_projectors(
    sets: &[GeneratorSet],
    projectors: &[DenseOperator],
) -> Result<Composition> {
    let system_dim = common_system_dim(sets)?;
    if projectors.len() != sets.len() {
        return Err(Error::EigenvalueCount {
            needed: sets.len(),
            found: projectors.len(),
        });
    }
    let ancilla_dim = projectors[0].dim();
    for pi in projectors {
        if pi.dim() != ancilla_dim {
            return Err(Error::DimensionMismatch {
                expected: ancilla_dim,
                found: pi.dim(),
            });
        }
        check_projector(pi)?;
    }
    let mut gens = Vec::new();
    for (m, (set, pi)) in sets.iter().zip(projectors).enumerate() {
        for (g, op) in set.generators().iter().zip(set.dense_ops()?) {
            gens.push((format!("{}.P{}", g.name, m + 1), op.kron(pi)));
        }
    }
    let set = GeneratorSet::dense(gens).map_err(|e| match e {
        Error::Invalid(msg) if msg.contains("duplicate") => {
            Error::invalid(format!("{msg}; block generator names must be unique per block"))
        }
        e => e,
    })?;
    Ok(Composition {
        kind: CompositionKind::Projectors,
        set,
        blocks: sets.to_vec(),
        projectors: projectors.to_vec(),
        system_dim,
        ancilla_dim,
    })
}

/// `A′ = ∪_m {A_{m,l} ⊗ Π_m}` with `Π_m` the eigenprojectors of `chi`.
pub fn compose_projectors(sets: &[GeneratorSet], chi: &DenseOperator) -> Result<Composition> {
    let sd = spectral_projectors(chi, None)?;
    if sd.len() < sets.len() {
        return Err(Error::EigenvalueCount {
            needed: sets.len(),
            found: sd.len(),
        });
    }
    compose_with_projectors(sets, &sd.projectors[..sets.len()])
}

/// `{A_i ⊗ χ^j : j = 0..K−1}`.
pub fn compose_powers(set: &GeneratorSet, chi: &DenseOperator, k: usize) -> Result<Composition> {
    let system_dim = common_system_dim(std::slice::from_ref(set))?;
    let sd = spectral_projectors(chi, None)?;
    if sd.len() != k {
        return Err(Error::EigenvalueCount {
            needed: k,
            found: sd.len(),
        });
    }
    let vandermonde =
        nalgebra::DMatrix::from_fn(k, k, |m, j| sd.eigenvalues[m].powi(j as i32));
    let s = singular_values(&vandermonde);
    let condition = s[0] / s[k - 1].max(f64::MIN_POSITIVE);
    if !condition.is_finite() || condition > VANDERMONDE_COND_MAX {
        return Err(Error::DependentPowers { condition });
    }
    let mut power = DenseOperator::identity(chi.dim()).with_role(Role::Hermitian)?;
    let chi = chi.clone().with_role(Role::Hermitian)?;
    let ops = set.dense_ops()?;
    let mut gens = Vec::new();
    for j in 0..k {
        for (g, op) in set.generators().iter().zip(&ops) {
            gens.push((format!("{}.chi{}", g.name, j), op.kron(&power)));
        }
        power = DenseOperator::from_parts(
            crate::linalg::cmul(power.matrix(), chi.matrix()),
            Role::Hermitian,
        );
    }
    Ok(Composition {
        kind: CompositionKind::Powers,
        set: GeneratorSet::dense(gens)?,
        blocks: vec![set.clone(); k],
        projectors: sd.projectors,
        system_dim,
        ancilla_dim: chi.dim(),
    })
}

/// `e^{−i(−i·a)t} ⊗ Π + I ⊗ (I − Π)`: evolution inside one labelled block.
pub fn block_evolution(a: &DenseOperator, pi: &DenseOperator, t: f64) -> Result<DenseOperator> {
    let residual = a.role_residual(Role::AntiHermitian);
    if residual > ROLE_TOL {
        return Err(Error::WrongRole {
            expected: Role::AntiHermitian,
            residual,
        });
    }
    check_projector(pi)?;
    let u = evolve(&a.times_minus_i(), t)?;
    let rest = DenseOperator::identity(pi.dim()).sub(pi)?;
    let m = u.kron(pi).matrix() + DenseOperator::identity(a.dim()).kron(&rest).matrix();
    Ok(DenseOperator::from_parts(m, Role::Unitary))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub kind: CompositionKind,
    pub block_dims: Vec<usize>,
    pub composed_dim: usize,
    pub cross_commutator_max: f64,
    pub generator_count: usize,
    pub system_dim: usize,
    pub ancilla_dim: usize,
    pub blocks: usize,
    /// `⌈log₂ d_sys⌉ + ⌈log₂ K⌉`.
    pub qubit_cost: u32,
    pub ancilla_within_budget: bool,
    /// Leave-one-out result; `None` when not evaluated.
    pub minimal: Option<bool>,
    pub direct_sum: bool,
    pub verdict: Verdict,
    pub tolerances: Tolerances,
}

/// Closes every block and the composed set and checks the direct-sum
/// structure.
pub fn verify_composition(
    sets: &[GeneratorSet],
    comp: &Composition,
    opts: &ClosureOptions,
) -> Result<CompositionReport> {
    let blocks: Vec<GeneratorSet> = match (comp.kind, sets.len()) {
        (CompositionKind::Powers, 1) => vec![sets[0].clone(); comp.blocks.len()],
        _ => sets.to_vec(),
    };
    if blocks.len() != comp.blocks.len() {
        return Err(Error::invalid(format!(
            "{} block sets supplied for a {}-block composition",
            blocks.len(),
            comp.blocks.len()
        )));
    }
    let block_dims: Vec<usize> = blocks
        .par_iter()
        .map(|b| Ok(dense_closure(&b.dense_ops()?, opts)?.elements.len()))
        .collect::<Result<_>>()?;
    let composed_ops = comp.set.dense_ops()?;
    let composed_dim = dense_closure(&composed_ops, opts)?.elements.len();

    let images = comp.block_images()?;
    let mut cross: f64 = 0.0;
    for (x, (mx, a)) in images.iter().enumerate() {
        for (my, b) in &images[x + 1..] {
            if mx == my {
                continue;
            }
            let scale = a.frobenius_norm() * b.frobenius_norm();
            if scale > 0.0 {
                cross = cross.max(a.commutator(b)?.frobenius_norm() / scale);
            }
        }
    }

    let minimal = if composed_ops.len() <= MINIMALITY_MAX_GENERATORS && composed_ops.len() > 1 {
        let drops: Vec<bool> = (0..composed_ops.len())
            .into_par_iter()
            .map(|skip| {
                let rest: Vec<DenseOperator> = composed_ops
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, g)| g.clone())
                    .collect();
                Ok(dense_closure(&rest, opts)?.elements.len() < composed_dim)
            })
            .collect::<Result<_>>()?;
        Some(drops.into_iter().all(|b| b))
    } else {
        None
    };

    let k = comp.blocks.len();
    let direct_sum = composed_dim == block_dims.iter().sum::<usize>() && cross <= CROSS_TOL;
    Ok(CompositionReport {
        kind: comp.kind,
        block_dims,
        composed_dim,
        cross_commutator_max: cross,
        generator_count: comp.set.len(),
        system_dim: comp.system_dim,
        ancilla_dim: comp.ancilla_dim,
        blocks: k,
        qubit_cost: ceil_log2(comp.system_dim) + ceil_log2(k),
        ancilla_within_budget: comp.ancilla_dim <= 1usize << ceil_log2(k),
        minimal,
        direct_sum,
        verdict: Verdict::from_bool(direct_sum),
        tolerances: tolerances([("rank_tol", opts.rank_tol), ("cross_tol", CROSS_TOL)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    fn z() -> DenseOperator {
        let p: PauliString = "Z".parse().unwrap();
        DenseOperator::hermitian(p.to_matrix().unwrap()).unwrap()
    }

    fn xy() -> GeneratorSet {
        GeneratorSet::from_strings(&["X", "Y"]).unwrap()
    }

    #[test]
    fn default_chi_shapes() {
        assert_eq!(default_chi(1).unwrap().dim(), 1);
        assert_eq!(default_chi(2).unwrap().dim(), 2);
        let c = default_chi(3).unwrap();
        assert_eq!(c.dim(), 4);
        assert_eq!(spectral_projectors(&c, None).unwrap().len(), 3);
        assert!(default_chi(0).is_err());
    }

    #[test]
    fn two_copies_of_su2() {
        let opts = ClosureOptions::default();
        let sets = [xy(), xy()];
        let c = compose_projectors(&sets, &z()).unwrap();
        assert_eq!(c.set.len(), 4);
        let r = verify_composition(&sets, &c, &opts).unwrap();
        assert_eq!(r.composed_dim, 6);
        assert!(r.verdict.passed());

        let p = compose_powers(&xy(), &z(), 2).unwrap();
        assert_eq!(p.set.len(), 4);
        let r = verify_composition(&[xy()], &p, &opts).unwrap();
        assert_eq!(r.block_dims, vec![3, 3]);
        assert_eq!(r.composed_dim, 6);
        assert!(r.verdict.passed());
    }

    #[test]
    fn single_block_with_identity_chi() {
        let c = compose_projectors(&[xy()], &DenseOperator::identity(2)).unwrap();
        let r = verify_composition(&[xy()], &c, &ClosureOptions::default()).unwrap();
        assert_eq!(r.composed_dim, 3);
        assert_eq!(r.block_dims, vec![3]);
        let p = compose_powers(&xy(), &DenseOperator::identity(2), 1).unwrap();
        assert_eq!(p.set.len(), 2);
    }

    #[test]
    fn too_few_eigenvalues() {
        let err = compose_projectors(&[xy(), xy()], &DenseOperator::identity(2)).unwrap_err();
        assert!(matches!(err, Error::EigenvalueCount { needed: 2, found: 1 }));
        let err = compose_powers(&xy(), &z(), 3).unwrap_err();
        assert!(matches!(err, Error::EigenvalueCount { .. }));
    }

    #[test]
    fn near_degenerate_powers_rejected() {
        let values: Vec<f64> = (0..21).map(|v| v as f64).collect();
        let chi = DenseOperator::diagonal(&values);
        let err = compose_powers(&xy(), &chi, 21).unwrap_err();
        assert!(matches!(err, Error::DependentPowers { .. }), "{err}");
    }

    #[test]
    fn overlapping_projectors_fail() {
        let pi = spectral_projectors(&z(), None).unwrap().projectors[0].clone();
        let c = compose_with_projectors(&[xy(), xy()], &[pi.clone(), pi]).unwrap();
        let r = verify_composition(&[xy(), xy()], &c, &ClosureOptions::default()).unwrap();
        assert!(r.cross_commutator_max > CROSS_TOL);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn block_evolution_cases() {
        let a = crate::pauli::PauliSum::from_labels(&[(0.7, "XY"), (0.2, "ZI")])
            .unwrap()
            .to_dense()
            .unwrap();
        let pi = spectral_projectors(&z(), None).unwrap().projectors[0].clone();
        let u = block_evolution(&a, &pi, 0.0).unwrap();
        assert!((u.matrix() - nalgebra::DMatrix::identity(8, 8)).norm() < 1e-12);

        let u = block_evolution(&a, &DenseOperator::identity(2).with_role(Role::Hermitian).unwrap(), 0.4)
            .unwrap();
        let plain = evolve(&a.times_minus_i(), 0.4).unwrap().kron(&DenseOperator::identity(2));
        assert!((u.matrix() - plain.matrix()).norm() < 1e-10);

        let u = block_evolution(&a, &pi, 0.9).unwrap();
        let direct = evolve(&a.kron(&pi).times_minus_i(), 0.9).unwrap();
        assert!((u.matrix() - direct.matrix()).norm() < 1e-10);
        assert!(u.role_residual(Role::Unitary) < 1e-10);

        assert!(matches!(
            block_evolution(&a, &z(), 0.1),
            Err(Error::NotProjector { .. })
        ));
    }
}
