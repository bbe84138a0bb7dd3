//! Hand-derived values and frozen reference numbers.

use std::collections::BTreeSet;
use std::f64::consts::SQRT_2;

use lieforge_core::closure::{closure, closure_dim, pauli_closure, ClosureOptions};
use lieforge_core::composition::{compose_projectors, default_chi, verify_composition};
use lieforge_core::invariance::{
    build_su4_minimal, build_sun_generators, commutant, overlap_from_vectors,
    percentage_change_from_dims, SuNVariant,
};
use lieforge_core::models;
use lieforge_core::nalgebra::DMatrix;
use lieforge_core::reduction::{fock_operators, lie_center};
use lieforge_core::trotter::{
    build_tfim, dla_dims, error_sweep, exact_evolution, lemma4_bound, phase_min_distance, u_apx,
    z_fragments, IsingSpec,
};
use lieforge_core::{evolve, operator_norm, Complex64, DenseOperator, GeneratorSet, PauliString, PauliSum};

fn ps(s: &str) -> PauliString {
    s.parse().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn single_qubit_products() {
    for (a, b, phase, c) in [("X", "Y", 1, "Z"), ("Y", "Z", 1, "X"), ("Z", "X", 1, "Y"), ("Y", "X", 3, "Z")] {
        let (p, r) = ps(a).multiply(&ps(b)).unwrap();
        assert_eq!((p.exponent(), r), (phase, ps(c)), "{a}{b}");
    }
    let (p, r) = ps("XX").multiply(&ps("YY")).unwrap();
    assert_eq!((p.exponent(), r), (2, ps("ZZ")));
}

#[test]
fn commutation_parity() {
    assert!(ps("XX").commutes_with(&ps("YY")).unwrap());
    assert!(!ps("XI").commutes_with(&ps("ZZ")).unwrap());
    assert!(ps("XYZ").commutes_with(&ps("XYZ")).unwrap());
}

#[test]
fn su2_bracket() {
    // [iX, iY] = −[X, Y] = −2iZ.
    let x = PauliSum::from_labels(&[(1.0, "X")]).unwrap();
    let y = PauliSum::from_labels(&[(1.0, "Y")]).unwrap();
    let c = x.commutator(&y).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c.coeff(&ps("Z")), -2.0);
}

#[test]
fn matrix_convention_first_qubit_is_leading_factor() {
    let m = ps("ZI").to_matrix().unwrap();
    let diag: Vec<f64> = (0..4).map(|k| m[(k, k)].re).collect();
    assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
}

#[test]
fn tfim_two_sites_closure() {
    let gens = [ps("ZZ"), ps("XI"), ps("IX")];
    let basis = pauli_closure(&gens).unwrap();
    let got: BTreeSet<String> = basis.strings.iter().map(|s| s.to_string()).collect();
    let want: BTreeSet<String> = ["ZZ", "XI", "IX", "YZ", "ZY", "YY"].iter().map(|s| s.to_string()).collect();
    assert_eq!(got, want);
}

#[test]
fn tfim_measured_dims() {
    let dims: Vec<usize> = dla_dims(&[2, 3, 4, 5, 6]).unwrap().iter().map(|d| d.tfim_dim).collect();
    assert_eq!(dims, vec![6, 15, 28, 45, 66]);
}

#[test]
fn minimal_sets_reach_full_algebra() {
    assert_eq!(closure_dim(&build_su4_minimal(), &ClosureOptions::default()).unwrap(), 15);
    for n in 2..=4u32 {
        for v in [SuNVariant::ZChain, SuNVariant::NearestNeighbor] {
            let set = build_sun_generators(n, v).unwrap();
            assert_eq!(set.len(), 2 * n as usize + 1);
            let strings = set.pauli_strings().unwrap();
            assert_eq!(pauli_closure(&strings).unwrap().strings.len(), 4usize.pow(n) - 1);
        }
    }
}

#[test]
fn worked_example_dims() {
    let opts = ClosureOptions::default();
    assert_eq!(closure_dim(&models::dipole_set(), &opts).unwrap(), 4);
    assert_eq!(closure_dim(&models::heisenberg_set(), &opts).unwrap(), 1);
    let dipole = closure(&models::dipole_set(), &opts).unwrap();
    assert_eq!(lie_center(&dipole).unwrap().dim(), 1);

    let sets = [models::dipole_set(), models::heisenberg_set()];
    let comp = compose_projectors(&sets, &default_chi(2).unwrap()).unwrap();
    let r = verify_composition(&sets, &comp, &opts).unwrap();
    assert_eq!(r.block_dims, vec![4, 1]);
    assert_eq!(r.composed_dim, 5);
    assert_eq!(r.qubit_cost, 3);
}

#[test]
fn central_spin_pipeline_dims() {
    let cs = models::central_spin(1.0);
    let opts = ClosureOptions::default();
    assert_eq!(closure_dim(&cs.p, &opts).unwrap(), 15);
    assert_eq!(closure_dim(&cs.p.union(&cs.q1).unwrap(), &opts).unwrap(), 15);
    assert_eq!(closure_dim(&cs.p.union(&cs.q2).unwrap(), &opts).unwrap(), 16);
}

#[test]
fn commutant_of_first_qubit_algebra() {
    // {iXI, iYI} commutes exactly with I ⊗ M₂(ℂ).
    let gens = GeneratorSet::from_strings(&["XI", "YI"]).unwrap().dense_ops().unwrap();
    assert_eq!(commutant(&gens, 4, 1e-9).unwrap().dim, 4);
}

#[test]
fn stated_projection_vectors() {
    let p = DMatrix::from_column_slice(2, 2, &[0.0, 1.0, 0.0, 2.0]);
    let q1 = DMatrix::from_column_slice(2, 1, &[0.0, 2.0]);
    let q2 = DMatrix::from_column_slice(2, 1, &[0.3, 0.5]);
    assert_eq!(overlap_from_vectors(&p, &q1, 1e-9).unwrap(), 1.0);
    assert!((overlap_from_vectors(&p, &q2, 1e-9).unwrap() - 25.0 / 34.0).abs() < 1e-12);
    assert_eq!(percentage_change_from_dims(4, 5).unwrap(), 25.0);
}

#[test]
fn pauli_z_evolution() {
    let t = 0.7;
    let z = PauliSum::from_labels(&[(1.0, "Z")]).unwrap().hamiltonian_dense().unwrap();
    let u = evolve(&z, t).unwrap();
    let want = [Complex64::new(t.cos(), -t.sin()), Complex64::new(t.cos(), t.sin())];
    for k in 0..2 {
        assert!((u.matrix()[(k, k)] - want[k]).norm() < 1e-14);
    }
    assert!(u.matrix()[(0, 1)].norm() < 1e-14);
}

#[test]
fn phase_min_identity_vs_flip() {
    let i = DenseOperator::identity(2);
    let x = PauliSum::from_labels(&[(1.0, "X")]).unwrap().hamiltonian_dense().unwrap();
    assert!((phase_min_distance(&i, &x).unwrap() - SQRT_2).abs() < 1e-12);
    assert!(phase_min_distance(&i, &i.scale(-1.0)).unwrap() < 1e-12);
}

#[test]
fn oscillator_squeeze_bracket() {
    let ops = fock_operators(6, 1).unwrap();
    let rel = ops.relations(0);
    let ss = rel.iter().find(|r| r.lhs == "[S1, S'1]").unwrap();
    assert_eq!(ss.measured_rhs, "8N1 + 4I");
    assert!(ss.measured_residual < 1e-12);
    assert!(ss.quoted_residual > 0.1);
    for r in &rel {
        assert!(r.measured_residual < 1e-12, "{}", r.lhs);
    }
}

#[test]
fn frozen_trotter_two_sites() {
    let h0 = build_tfim(&IsingSpec::new(2, 1.0, 0.0, 1.0).unwrap()).unwrap();
    let frags = z_fragments(2).unwrap();
    let u = exact_evolution(&h0, &frags, 0.2, 0.3).unwrap();
    let apx = u_apx(&h0, &frags, 0.2, 0.3).unwrap();
    let err = operator_norm(&u.sub(&apx).unwrap());
    assert!(rel(err, 1.2628263176283992e-5) < 1e-6, "{err:e}");
    let bound = lemma4_bound(&h0, &frags, 0.2, 0.3, 33).unwrap();
    assert!(rel(bound, 1.2631154572242897e-5) < 1e-6, "{bound:e}");
    assert!(err <= bound);
}

#[test]
fn frozen_trotter_three_sites() {
    let base = IsingSpec::new(3, 1.0, 0.0, 1.0).unwrap();
    let r = error_sweep(&base, &[3], &[0.05], &[0.32]).unwrap();
    let p = &r.points[0];
    assert!(rel(p.err_apx, 2.1689768e-6) < 1e-6, "{:e}", p.err_apx);
    assert!(p.err_apx <= p.bound);
}
