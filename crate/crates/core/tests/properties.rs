use lieforge_core::closure::{closure, dense_closure, pauli_closure, ClosureOptions};
use lieforge_core::invariance::{commutant, overlap_from_vectors};
use lieforge_core::nalgebra::DMatrix;
use lieforge_core::reduction::{
    build_filter, ideal_decomposition, oscillator_reduction, verify_reduction,
};
use lieforge_core::trotter::phase_min_distance;
use lieforge_core::{
    evolve, spectral_projectors, DenseOperator, GeneratorSet, PauliString, PauliSum,
};
use proptest::prelude::*;

fn label(n: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['I', 'X', 'Y', 'Z']), n)
        .prop_map(|v| v.into_iter().collect())
}

fn pair() -> impl Strategy<Value = (String, String)> {
    (1usize..=3).prop_flat_map(|n| (label(n), label(n)))
}

fn sum(n: usize) -> impl Strategy<Value = Vec<(f64, String)>> {
    prop::collection::vec((-2.0f64..2.0, label(n)), 1..4)
}

fn to_sum(terms: &[(f64, String)]) -> PauliSum {
    let t: Vec<(f64, &str)> = terms.iter().map(|(c, s)| (*c, s.as_str())).collect();
    PauliSum::from_labels(&t).unwrap()
}

fn hermitian(d: usize) -> impl Strategy<Value = DenseOperator> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |v| {
        let m = DMatrix::from_fn(d, d, |r, c| {
            lieforge_core::Complex64::new(v[r * d + c], v[d * d + r * d + c])
        });
        DenseOperator::hermitian((&m + m.adjoint()) * lieforge_core::Complex64::new(0.5, 0.0))
            .unwrap()
    })
}

fn random_set() -> impl Strategy<Value = Vec<String>> {
    (1usize..=3).prop_flat_map(|n| prop::collection::vec(label(n), 2..=5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_matches_matrices((a, b) in pair()) {
        let p: PauliString = a.parse().unwrap();
        let q: PauliString = b.parse().unwrap();
        let (phase, r) = p.multiply(&q).unwrap();
        let lhs = p.to_matrix().unwrap() * q.to_matrix().unwrap();
        let rhs = r.to_matrix().unwrap() * phase.to_complex();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn commutation_matches_matrices((a, b) in pair()) {
        let p: PauliString = a.parse().unwrap();
        let q: PauliString = b.parse().unwrap();
        let (mp, mq) = (p.to_matrix().unwrap(), q.to_matrix().unwrap());
        let c = &mp * &mq - &mq * &mp;
        prop_assert_eq!(p.commutes_with(&q).unwrap(), c.norm() < 1e-12);
    }

    #[test]
    fn label_round_trip(s in (1usize..=8).prop_flat_map(label)) {
        let p: PauliString = s.parse().unwrap();
        prop_assert_eq!(p.to_string(), s);
    }

    #[test]
    fn sum_bracket_matches_matrices((a, b) in (1usize..=3).prop_flat_map(|n| (sum(n), sum(n)))) {
        let (x, y) = (to_sum(&a), to_sum(&b));
        let sym = x.commutator(&y).unwrap().to_dense().unwrap();
        let dense = x.to_dense().unwrap().commutator(&y.to_dense().unwrap()).unwrap();
        prop_assert!(sym.sub(&dense).unwrap().frobenius_norm() < 1e-10);
    }

    #[test]
    fn generator_text_round_trip(set in random_set()) {
        let refs: Vec<&str> = set.iter().map(String::as_str).collect();
        let g = GeneratorSet::from_strings(&refs).unwrap();
        let back = GeneratorSet::parse(&g.to_text().unwrap()).unwrap();
        prop_assert_eq!(back.names(), g.names());
        prop_assert_eq!(back.pauli_strings(), g.pauli_strings());
    }

    #[test]
    fn symbolic_and_dense_closures_agree(set in random_set()) {
        let strings: Vec<PauliString> = set.iter().map(|s| s.parse().unwrap()).collect();
        let sym = pauli_closure(&strings).unwrap().strings.len();
        let refs: Vec<&str> = set.iter().map(String::as_str).collect();
        let ops = GeneratorSet::from_strings(&refs).unwrap().dense_ops().unwrap();
        let dense = dense_closure(&ops, &ClosureOptions::default()).unwrap().elements.len();
        prop_assert_eq!(sym, dense);
    }

    #[test]
    fn spectral_projectors_resolve_identity(h in hermitian(4)) {
        let s = spectral_projectors(&h, None).unwrap();
        let d = h.dim();
        let mut total = DMatrix::zeros(d, d);
        for p in &s.projectors {
            let m = p.matrix();
            prop_assert!((m * m - m).norm() < 1e-10);
            total += m;
        }
        prop_assert!((total - DMatrix::identity(d, d)).norm() < 1e-10);
        prop_assert!((s.reconstruct() - h.matrix()).norm() < 1e-10);
    }

    #[test]
    fn evolution_is_unitary(h in hermitian(4), t in -3.0f64..3.0) {
        let u = evolve(&h, t).unwrap();
        let d = u.dim();
        prop_assert!((u.matrix().adjoint() * u.matrix() - DMatrix::identity(d, d)).norm() < 1e-12);
    }

    #[test]
    fn phase_min_never_exceeds_plain(h in hermitian(3), g in hermitian(3), t in 0.0f64..2.0) {
        let u = evolve(&h, t).unwrap();
        let v = evolve(&g, t).unwrap();
        let plain = lieforge_core::operator_norm(&u.sub(&v).unwrap());
        prop_assert!(phase_min_distance(&u, &v).unwrap() <= plain + 1e-12);
    }

    #[test]
    fn overlap_is_a_fraction(
        p in prop::collection::vec(-1.0f64..1.0, 6),
        q in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        let pm = DMatrix::from_column_slice(3, 2, &p);
        let qm = DMatrix::from_column_slice(3, 1, &q);
        let o = overlap_from_vectors(&pm, &qm, 1e-9).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&o));
    }

    #[test]
    fn commutant_elements_commute(set in (1usize..=2).prop_flat_map(|n| prop::collection::vec(label(n), 1..=3))) {
        let refs: Vec<&str> = set.iter().map(String::as_str).collect();
        let Ok(g) = GeneratorSet::from_strings(&refs) else { return Ok(()); };
        let ops = g.dense_ops().unwrap();
        let d = ops[0].dim();
        for x in commutant(&ops, d, 1e-9).unwrap().ops {
            for a in &ops {
                prop_assert!(x.commutator(a).unwrap().frobenius_norm() < 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn decomposition_is_seed_independent(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = GeneratorSet::from_strings(&["XII", "YII", "IXI", "IYI", "IIZ"]).unwrap();
        let basis = closure(&g, &ClosureOptions::default()).unwrap();
        let a = ideal_decomposition(&basis, s1).unwrap();
        let b = ideal_decomposition(&basis, s2).unwrap();
        prop_assert_eq!(&a.dims, &b.dims);
        prop_assert_eq!(a.center.dim(), 1);
        for (x, y) in a.ideals.iter().zip(&b.ideals) {
            prop_assert!((x.projector() - y.projector()).norm() < 1e-8);
        }
    }

    #[test]
    fn random_filter_regenerates_targets(
        seed in any::<u64>(),
        targets in prop::sample::select(vec![vec![0usize], vec![1], vec![0, 1]]),
    ) {
        let g = GeneratorSet::from_strings(&["XII", "YII", "IXI", "IYI", "IIZ"]).unwrap();
        let basis = closure(&g, &ClosureOptions::default()).unwrap();
        let dec = ideal_decomposition(&basis, seed).unwrap();
        let f = build_filter(&dec, &targets, seed).unwrap();
        let r = verify_reduction(&g, &f, &dec, &targets, &ClosureOptions::default()).unwrap();
        prop_assert!(r.verdict.passed(), "{:?}", r);
        prop_assert_eq!(r.dim_closure_aprime, 3 * targets.len());
    }

    #[test]
    fn number_filter_selects_modes(
        d in 4usize..=5,
        w in 0.5f64..3.0,
    ) {
        let r = oscillator_reduction(d, 2, 1, Some(&[w])).unwrap();
        prop_assert!(r.verdict.passed(), "{:?}", r);
        prop_assert_eq!(r.aprime.len(), 3);
    }
}
