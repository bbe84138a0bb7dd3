//! Generating sets of the worked physical examples.

use crate::error::Result;
use crate::genset::GeneratorSet;
use crate::invariance::CenterBasis;
use crate::pauli::PauliSum;

fn set(n: u32, gens: &[(&str, &[(f64, &str)])]) -> GeneratorSet {
    GeneratorSet::pauli(
        n,
        gens.iter()
            .map(|(name, terms)| (name.to_string(), PauliSum::from_labels(terms).expect("fixed terms")))
            .collect(),
    )
    .expect("fixed generator set")
}

/// Two-qubit dipole coupling in a tilted field:
/// `A1 = i(2ZZ − XX − YY)`, `A2 = i(X1 − Y1 + X2 − Y2)`.
pub fn dipole_set() -> GeneratorSet {
    set(
        2,
        &[
            ("A1", &[(2.0, "ZZ"), (-1.0, "XX"), (-1.0, "YY")]),
            ("A2", &[(1.0, "XI"), (-1.0, "YI"), (1.0, "IX"), (-1.0, "IY")]),
        ],
    )
}

/// Two-qubit Heisenberg coupling `B1 = i(XX + YY + ZZ)`.
pub fn heisenberg_set() -> GeneratorSet {
    set(2, &[("B1", &[(1.0, "XX"), (1.0, "YY"), (1.0, "ZZ")])])
}

/// Three-qubit central-spin sets `P`, `Q1`, `Q2`.
#[derive(Clone, Debug)]
pub struct CentralSpin {
    pub p: GeneratorSet,
    pub q1: GeneratorSet,
    pub q2: GeneratorSet,
}

/// `P = {i(X1 + J2(XX + YY + ZZ)_{12}), iZ1}`, `Q1 = {i(2Z1 + 0.5 X1X2)}`,
/// `Q2 = {i(0.5 Z1 + 0.3 I)}` on three qubits.
pub fn central_spin(j2: f64) -> CentralSpin {
    CentralSpin {
        p: set(
            3,
            &[
                ("H1", &[(1.0, "XII"), (j2, "XXI"), (j2, "YYI"), (j2, "ZZI")]),
                ("H2", &[(1.0, "ZII")]),
            ],
        ),
        q1: set(3, &[("H3", &[(2.0, "ZII"), (0.5, "XXI")])]),
        q2: set(3, &[("H4", &[(0.5, "ZII"), (0.3, "III")])]),
    }
}

/// The directions `{iI_8, iZ1}` used as a center basis in the central-spin
/// discussion (orthonormalized).
pub fn central_spin_stated_center() -> Result<CenterBasis> {
    let ops = [
        PauliSum::from_labels(&[(1.0, "III")])?.to_dense()?,
        PauliSum::from_labels(&[(1.0, "ZII")])?.to_dense()?,
    ];
    CenterBasis::from_operators(&ops)
}

/// Transverse-field Ising generators `{iZ_jZ_{j+1}} ∪ {iX_j}`.
pub fn tfim_generators(n: u32) -> Result<GeneratorSet> {
    crate::trotter::tfim_generator_set(n, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(dipole_set().len(), 2);
        assert_eq!(heisenberg_set().len(), 1);
        let cs = central_spin(1.0);
        assert_eq!(cs.p.qubits(), Some(3));
        assert_eq!(cs.p.len() + cs.q1.len() + cs.q2.len(), 4);
        assert_eq!(central_spin_stated_center().unwrap().k, 2);
    }
}
