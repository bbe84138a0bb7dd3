//! Fixtures shared by the pipeline benchmarks.

use lieforge_core::closure::{closure, ClosureOptions, LieBasis};
use lieforge_core::trotter::IsingSpec;
use lieforge_core::GeneratorSet;

/// `su(2) ⊕ su(2) ⊕ u(1)` on three qubits.
pub fn reductive_set() -> GeneratorSet {
    GeneratorSet::from_strings(&["XII", "YII", "IXI", "IYI", "IIZ"]).expect("fixed strings")
}

pub fn reductive_basis() -> LieBasis {
    closure(&reductive_set(), &ClosureOptions::default()).expect("small closure")
}

/// Unit-coupling Ising chain of length `n`.
pub fn unit_chain(n: u32) -> IsingSpec {
    IsingSpec::new(n, 1.0, 0.0, 1.0).expect("n ≥ 2")
}
