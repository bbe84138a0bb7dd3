use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genset::GeneratorSet;
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Family used to extend the two-qubit set to `N` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuNVariant {
    /// `X_2 Z_3⋯Z_{i−1} Y_i` and `Y_2 Z_3⋯Z_{i−1} X_i` for `i = 3..N`.
    ZChain,
    /// `X_i Y_{i+1}` and `Y_i X_{i+1}` for `i = 2..N−1`.
    NearestNeighbor,
}

impl std::str::FromStr for SuNVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z-chain" | "zchain" | "b1" | "b_i" | "i" => Ok(SuNVariant::ZChain),
            "nearest-neighbor" | "nn" | "b2" | "b_ii" | "ii" => Ok(SuNVariant::NearestNeighbor),
            _ => Err(Error::invalid(format!("unknown variant '{s}'"))),
        }
    }
}

fn gen(n: u32, name: String, sites: &[(u32, Pauli)]) -> Result<(String, PauliSum)> {
    Ok((name, PauliSum::from_string(PauliString::from_sites(n, sites)?, 1.0)))
}

fn two_qubit_core(n: u32) -> Result<Vec<(String, PauliSum)>> {
    use Pauli::*;
    Ok(vec![
        gen(n, "x1".into(), &[(1, X)])?,
        gen(n, "y1".into(), &[(1, Y)])?,
        gen(n, "x2".into(), &[(2, X)])?,
        gen(n, "y2".into(), &[(2, Y)])?,
        gen(n, "y1y2".into(), &[(1, Y), (2, Y)])?,
    ])
}

/// `{XI, YI, IX, IY, YY}`, which generates `su(4)`.
pub fn build_su4_minimal() -> GeneratorSet {
    GeneratorSet::pauli(2, two_qubit_core(2).expect("fixed two-qubit strings"))
        .expect("fixed two-qubit set")
}

/// `2N + 1` Pauli strings generating `su(2^N)`.
pub fn build_sun_generators(n: u32, variant: SuNVariant) -> Result<GeneratorSet> {
    use Pauli::*;
    if n < 2 {
        return Err(Error::invalid(format!("N = {n}; at least 2 qubits are required")));
    }
    let mut gens = two_qubit_core(n)?;
    match variant {
        SuNVariant::ZChain => {
            for i in 3..=n {
                let chain: Vec<(u32, Pauli)> = (3..i).map(|j| (j, Z)).collect();
                let mut a = vec![(2, X)];
                a.extend(&chain);
                a.push((i, Y));
                let mut b = vec![(2, Y)];
                b.extend(&chain);
                b.push((i, X));
                gens.push(gen(n, format!("x2z{i}y"), &a)?);
                gens.push(gen(n, format!("y2z{i}x"), &b)?);
            }
        }
        SuNVariant::NearestNeighbor => {
            for i in 2..n {
                gens.push(gen(n, format!("x{i}y{}", i + 1), &[(i, X), (i + 1, Y)])?);
                gens.push(gen(n, format!("y{i}x{}", i + 1), &[(i, Y), (i + 1, X)])?);
            }
        }
    }
    GeneratorSet::pauli(n, gens)
}
