//! One PASS/FAIL line per acceptance criterion. Runs every criterion even when
//! an earlier one fails and exits non-zero if any did.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lieforge_core::closure::{closure, dense_closure, pauli_closure, ClosureOptions};
use lieforge_core::composition::{
    block_evolution, compose_powers, compose_projectors, default_chi, verify_composition,
};
use lieforge_core::invariance::{
    analyze_overlap, build_sun_generators, overlap_from_vectors, percentage_change_from_dims,
    OverlapOptions, SuNVariant,
};
use lieforge_core::models;
use lieforge_core::nalgebra::DMatrix;
use lieforge_core::reduction::{
    build_filter, ideal_decomposition, oscillator_reduction, prop2_trials, su4_pauli_basis,
    verify_reduction,
};
use lieforge_core::trotter::{dla_dims, error_sweep, geometric_grid, IsingSpec};
use lieforge_core::{DenseOperator, GeneratorSet, PauliString};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CROSS_MAX: f64 = 1e-10;
const UNITARITY_MAX: f64 = 1e-10;
const OVERLAP_TOL: f64 = 1e-6;
const CONTAINMENT_MAX: f64 = 1e-9;
const DIRECTION_MAX: f64 = 1e-9;
const SLOPE_WINDOW: (f64, f64) = (1.8, 2.2);
const IDENTITY_MAX: f64 = 1e-12;
const SU32_BUDGET: Duration = Duration::from_secs(60);
const SWEEP_BUDGET: Duration = Duration::from_secs(120);

type Outcome = (bool, String);

fn unitarity(u: &DenseOperator) -> f64 {
    let m = u.matrix();
    (m.adjoint() * m - DMatrix::identity(m.nrows(), m.ncols())).norm()
}

fn minimal_sets() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut n5 = Duration::ZERO;
    for n in 2..=5u32 {
        for v in [SuNVariant::ZChain, SuNVariant::NearestNeighbor] {
            let set = build_sun_generators(n, v).unwrap();
            let start = Instant::now();
            let dim = pauli_closure(&set.pauli_strings().unwrap()).unwrap().strings.len();
            if n == 5 {
                n5 = n5.max(start.elapsed());
            }
            ok &= set.len() == 2 * n as usize + 1 && dim == 4usize.pow(n) - 1;
            parts.push(format!("N={n} {v:?} {}/{dim}", set.len()));
        }
    }
    ok &= n5 < SU32_BUDGET;
    (ok, format!("{}; N=5 closure {:.2}s", parts.join(", "), n5.as_secs_f64()))
}

fn composition() -> Outcome {
    let opts = ClosureOptions::default();
    let sets = [models::dipole_set(), models::heisenberg_set()];
    let comp = compose_projectors(&sets, &default_chi(2).unwrap()).unwrap();
    let r = verify_composition(&sets, &comp, &opts).unwrap();
    let mut unit: f64 = 0.0;
    for (block, pi) in comp.blocks.iter().zip(&comp.projectors) {
        for a in block.dense_ops().unwrap() {
            unit = unit.max(unitarity(&block_evolution(&a, pi, 0.7).unwrap()));
        }
    }
    let ok = r.block_dims == [4, 1]
        && r.composed_dim == 5
        && r.cross_commutator_max <= CROSS_MAX
        && unit <= UNITARITY_MAX
        && r.qubit_cost == 3;
    (
        ok,
        format!(
            "block dims {:?}, composed {}, cross {:.1e}, unitarity {:.1e}, qubits {}",
            r.block_dims, r.composed_dim, r.cross_commutator_max, unit, r.qubit_cost
        ),
    )
}

fn copies() -> Outcome {
    let opts = ClosureOptions::default();
    let set = GeneratorSet::from_strings(&["X", "Y"]).unwrap();
    let chi = DenseOperator::diagonal(&[1.0, -1.0]);
    let powers = compose_powers(&set, &chi, 2).unwrap();
    let proj = compose_projectors(&[set.clone(), set.clone()], &chi).unwrap();
    let dp = dense_closure(&powers.set.dense_ops().unwrap(), &opts).unwrap().elements.len();
    let dq = dense_closure(&proj.set.dense_ops().unwrap(), &opts).unwrap().elements.len();
    (dp == 6 && dq == 6, format!("powers {dp}, projectors {dq}"))
}

fn overlap_indices() -> Outcome {
    let p = DMatrix::from_column_slice(2, 2, &[0.0, 1.0, 0.0, 2.0]);
    let q1 = DMatrix::from_column_slice(2, 1, &[0.0, 2.0]);
    let q2 = DMatrix::from_column_slice(2, 1, &[0.3, 0.5]);
    let o1 = overlap_from_vectors(&p, &q1, 1e-9).unwrap();
    let o2 = overlap_from_vectors(&p, &q2, 1e-9).unwrap();
    let dc = percentage_change_from_dims(4, 5).unwrap();
    let cs = models::central_spin(1.0);
    let opts = OverlapOptions::default();
    let r1 = analyze_overlap(&cs.p, &cs.q1, &opts).unwrap();
    let r2 = analyze_overlap(&cs.p, &cs.q2, &opts).unwrap();
    let ok = o1 == 1.0 && (o2 - 25.0 / 34.0).abs() <= OVERLAP_TOL && dc == 25.0;
    (
        ok,
        format!(
            "stated vectors O1={o1}, O2={o2:.9} (25/34={:.9}), D_c={dc}%; pipeline O1={:.6}, O2={:.6}, dims {}/{}/{}, D_c={:.4}%, Q2 projection {:?}",
            25.0 / 34.0,
            r1.overlap,
            r2.overlap,
            r1.dim_p,
            r1.dim_pq,
            r2.dim_pq,
            r2.d_c,
            r2.q_projection.iter().map(|r| r[0]).collect::<Vec<_>>()
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let letters = ['I', 'X', 'Y', 'Z'];
    let opts = ClosureOptions::default();
    let mut mismatches = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=3);
        let k = rng.random_range(2..=5);
        let labels: Vec<String> = (0..k)
            .map(|_| (0..n).map(|_| letters[rng.random_range(0..4)]).collect())
            .collect();
        let strings: Vec<PauliString> = labels.iter().map(|s| s.parse().unwrap()).collect();
        let sym = pauli_closure(&strings).unwrap().strings.len();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let ops = GeneratorSet::from_strings(&refs).unwrap().dense_ops().unwrap();
        let dense = dense_closure(&ops, &opts).unwrap().elements.len();
        if sym != dense {
            mismatches += 1;
        }
    }
    (mismatches == 0, format!("100 random sets, {mismatches} mismatches"))
}

fn proposition_suite() -> Outcome {
    let su2 = GeneratorSet::from_strings(&["X", "Y", "Z"]).unwrap().dense_ops().unwrap();
    let a = prop2_trials(&su2, 50, 0).unwrap();
    let b = prop2_trials(&su4_pauli_basis(), 50, 1).unwrap();
    (
        a.passed == 50 && b.passed == 50,
        format!("su(2) {}/{}, su(4) {}/{}", a.passed, a.trials, b.passed, b.trials),
    )
}

fn reduction() -> Outcome {
    let opts = ClosureOptions::default();
    let g = GeneratorSet::from_strings(&["XI", "YI", "IX", "IY"]).unwrap();
    let dec = ideal_decomposition(&closure(&g, &opts).unwrap(), 0).unwrap();
    let f = build_filter(&dec, &[0], 0).unwrap();
    let r = verify_reduction(&g, &f, &dec, &[0], &opts).unwrap();
    let osc = oscillator_reduction(8, 2, 1, None).unwrap();
    let ok = r.dim_closure_aprime == 3
        && r.containment_residual <= CONTAINMENT_MAX
        && osc.aprime.len() == 3
        && osc.safe_direction_residual <= DIRECTION_MAX
        && osc.coverage_residual <= DIRECTION_MAX
        && osc.verdict.passed();
    (
        ok,
        format!(
            "disjoint qubits dim {} containment {:.1e}; oscillator A' {:?} safe residual {:.1e} coverage {:.1e}",
            r.dim_closure_aprime,
            r.containment_residual,
            osc.aprime,
            osc.safe_direction_residual,
            osc.coverage_residual
        ),
    )
}

fn tfim_dims() -> Outcome {
    let dims = dla_dims(&[2, 3, 4, 5, 6]).unwrap();
    let listed: Vec<String> = dims
        .iter()
        .map(|d| {
            let flag = if d.matches_n_squared { "" } else { " (differs from n^2)" };
            format!("n={} dim {}{flag}", d.n, d.tfim_dim)
        })
        .collect();
    (dims[0].tfim_dim == 6, listed.join(", "))
}

fn trotter_scaling() -> Outcome {
    let base = IsingSpec::new(3, 1.0, 0.0, 1.0).unwrap();
    let ts = geometric_grid(0.02, 0.32, 9);
    let start = Instant::now();
    let r = error_sweep(&base, &[3], &[0.05, 0.1, 0.2], &ts).unwrap();
    let elapsed = start.elapsed();
    let inside = |s: Option<f64>| s.is_some_and(|v| (SLOPE_WINDOW.0..=SLOPE_WINDOW.1).contains(&v));
    let slopes = |v: &[lieforge_core::trotter::SlopeFit]| {
        v.iter()
            .map(|f| f.slope.map_or("none".into(), |s| format!("{s:.3}")))
            .collect::<Vec<_>>()
            .join("/")
    };
    let ident = r
        .identity_residuals
        .iter()
        .map(|i| i.alpha_zero.max(i.single_fragment))
        .fold(0.0, f64::max);
    let t_ok = r.t_slopes.iter().all(|f| inside(f.slope));
    let a_ok = r.alpha_slopes.iter().all(|f| inside(f.slope));
    let ok = t_ok && a_ok && ident <= IDENTITY_MAX && elapsed < SWEEP_BUDGET;
    (
        ok,
        format!(
            "t slopes {} ({}), alpha slopes {} ({}), identities {:.1e}, sweep {:.2}s; tfim distance t slopes {}, alpha slopes {}",
            slopes(&r.t_slopes),
            if t_ok { "in window" } else { "outside window" },
            slopes(&r.alpha_slopes),
            if a_ok { "in window" } else { "outside window" },
            ident,
            elapsed.as_secs_f64(),
            slopes(&r.tfim_t_slopes),
            slopes(&r.tfim_alpha_slopes)
        ),
    )
}

fn reports_once() -> Vec<String> {
    let opts = ClosureOptions::default();
    let tfim = closure(&models::tfim_generators(4).unwrap(), &opts).unwrap();
    let g = GeneratorSet::from_strings(&["XII", "YII", "IXI", "IYI", "IIZ"]).unwrap();
    let dec = ideal_decomposition(&closure(&g, &opts).unwrap(), 7).unwrap();
    let f = build_filter(&dec, &[1], 7).unwrap();
    let red = verify_reduction(&g, &f, &dec, &[1], &opts).unwrap();
    let cs = models::central_spin(1.0);
    let ov = analyze_overlap(&cs.p, &cs.q2, &OverlapOptions::default()).unwrap();
    let tr = error_sweep(&IsingSpec::new(3, 1.0, 0.0, 1.0).unwrap(), &[2, 3], &[0.1, 0.2], &[0.1, 0.2]).unwrap();
    let sets = [models::dipole_set(), models::heisenberg_set()];
    let comp = compose_projectors(&sets, &default_chi(2).unwrap()).unwrap();
    let cr = verify_composition(&sets, &comp, &opts).unwrap();
    let basis_json = match &tfim {
        lieforge_core::closure::LieBasis::Symbolic(b) => serde_json::to_string(b).unwrap(),
        other => format!("{}", other.dim()),
    };
    vec![
        basis_json,
        serde_json::to_string(&dec.summary()).unwrap(),
        serde_json::to_string(&red).unwrap(),
        serde_json::to_string(&ov).unwrap(),
        serde_json::to_string(&tr).unwrap(),
        serde_json::to_string(&cr).unwrap(),
    ]
}

fn determinism() -> Outcome {
    let a = reports_once();
    let b = reports_once();
    let same = a.iter().zip(&b).filter(|(x, y)| x == y).count();
    (same == a.len(), format!("{same}/{} reports byte-identical", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("minimal su(2^N) sets", minimal_sets),
        ("composition of dipole and Heisenberg blocks", composition),
        ("two copies of su(2)", copies),
        ("overlap indices", overlap_indices),
        ("symbolic and dense closure agree", oracle_equivalence),
        ("first-order filter regeneration", proposition_suite),
        ("reduction end to end", reduction),
        ("transverse-field Ising dims", tfim_dims),
        ("Trotter error scaling", trotter_scaling),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {detail}", k + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
