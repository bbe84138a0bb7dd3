//! Pauli strings in symplectic form and real-coefficient sums of them.
//!
//! A [`PauliString`] stores one X bit and one Z bit per site. Site `k`
//! (zero-based) is qubit `k + 1`, printed as the `k`-th letter from the left
//! and acting on the most significant tensor factor first.
//!
//! A [`PauliSum`] with coefficients `c_P` stands for the anti-Hermitian
//! operator `i·Σ c_P P`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use crate::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dense::{DenseOperator, Role};
use crate::error::{Error, Result};

/// Largest register a [`PauliString`] can describe.
pub const MAX_QUBITS: u32 = 64;

/// Coefficients with magnitude at or below this are dropped from sums.
pub const PRUNE_TOL: f64 = 1e-14;

/// Default cap on the register size accepted by dense conversions.
pub const DEFAULT_DENSE_LIMIT: u32 = 12;

/// Environment variable overriding [`DEFAULT_DENSE_LIMIT`].
pub const DENSE_LIMIT_ENV: &str = "LIEFORGE_DENSE_LIMIT";

/// Dense register cap in qubits, honouring `LIEFORGE_DENSE_LIMIT` when set.
pub fn dense_qubit_limit() -> u32 {
    std::env::var(DENSE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .unwrap_or(DEFAULT_DENSE_LIMIT)
}

/// Single-site Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A power of `i`, stored as its exponent mod 4.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(e: i64) -> Self {
        Phase(e.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    /// Sign `s` such that the phase equals `s·i`; `None` for real phases.
    pub fn imaginary_sign(self) -> Option<f64> {
        match self.0 {
            1 => Some(1.0),
            3 => Some(-1.0),
            _ => None,
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

/// Tensor product of single-site Paulis on an `n`-qubit register.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u32,
    x: u64,
    z: u64,
}

fn site_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    /// Builds a string from raw masks; bit `k` is qubit `k + 1`.
    pub fn new(n: u32, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "qubit count {n} outside 1..={MAX_QUBITS}"
            )));
        }
        let m = site_mask(n);
        if x_mask & !m != 0 || z_mask & !m != 0 {
            return Err(Error::invalid(format!(
                "Pauli masks have bits set beyond qubit {n}"
            )));
        }
        Ok(Self {
            n,
            x: x_mask,
            z: z_mask,
        })
    }

    pub fn identity(n: u32) -> Result<Self> {
        Self::new(n, 0, 0)
    }

    /// `letter` on qubit `site` (one-based), identity elsewhere.
    pub fn single(n: u32, site: u32, letter: Pauli) -> Result<Self> {
        if site == 0 || site > n {
            return Err(Error::invalid(format!(
                "site {site} outside 1..={n}"
            )));
        }
        let (x, z) = letter.bits();
        let bit = 1u64 << (site - 1);
        Self::new(n, if x { bit } else { 0 }, if z { bit } else { 0 })
    }

    /// Builds a string from `(site, letter)` pairs with one-based sites.
    pub fn from_sites(n: u32, sites: &[(u32, Pauli)]) -> Result<Self> {
        let mut p = Self::identity(n)?;
        for &(site, letter) in sites {
            let q = Self::single(n, site, letter)?;
            p.x ^= q.x;
            p.z ^= q.z;
        }
        Ok(p)
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Letter on zero-based site `k`.
    pub fn letter(&self, k: u32) -> Pauli {
        Pauli::from_bits((self.x >> k) & 1 == 1, (self.z >> k) & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    fn check_register(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RegisterMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Commutation test by symplectic parity.
    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        self.check_register(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Product `self · other = phase · r`.
    pub fn multiply(&self, other: &Self) -> Result<(Phase, PauliString)> {
        self.check_register(other)?;
        Ok(self.multiply_unchecked(other))
    }

    pub(crate) fn multiply_unchecked(&self, other: &Self) -> (Phase, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // Y = i·XZ per site, so P = i^{|x∧z|} X^x Z^z; moving Z^{z1} past X^{x2}
        // contributes (−1)^{|z1∧x2|}.
        let e = (self.x & self.z).count_ones() as i64
            + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        (Phase::from_exponent(e), PauliString { n: self.n, x, z })
    }

    /// Canonical sort key: letters from qubit 1 with `I < X < Y < Z`.
    fn letter_codes(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.n).map(move |k| {
            let x = ((self.x >> k) & 1) as u8;
            let z = ((self.z >> k) & 1) as u8;
            if z == 0 {
                x
            } else {
                3 - x
            }
        })
    }

    /// Hermitian matrix of the string (no factor of `i`).
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        let limit = dense_qubit_limit();
        if self.n > limit {
            return Err(Error::Limit {
                what: "dense register (qubits)",
                size: self.n as usize,
                limit: limit as usize,
            });
        }
        Ok(self.to_matrix_unchecked())
    }

    /// Index masks with qubit 1 as the most significant bit.
    fn index_masks(&self) -> (usize, usize) {
        let mut xi = 0usize;
        let mut zi = 0usize;
        for k in 0..self.n {
            let b = (self.n - 1 - k) as usize;
            xi |= (((self.x >> k) & 1) as usize) << b;
            zi |= (((self.z >> k) & 1) as usize) << b;
        }
        (xi, zi)
    }

    /// Visits the nonzero entries `(row, col, value)` of the matrix.
    pub(crate) fn for_each_entry(&self, mut f: impl FnMut(usize, usize, Complex64)) {
        let d = 1usize << self.n;
        let (xi, zi) = self.index_masks();
        let base = Phase::from_exponent((self.x & self.z).count_ones() as i64).to_complex();
        for c in 0..d {
            let sign = if (zi & c).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            f(c ^ xi, c, base * sign);
        }
    }

    pub(crate) fn to_matrix_unchecked(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.n;
        let mut m = DMatrix::zeros(d, d);
        self.for_each_entry(|r, c, v| m[(r, c)] = v);
        m
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.letter_codes().cmp(other.letter_codes()))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n {
            write!(f, "{}", self.letter(k).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count() as u32;
        let mut x = 0u64;
        let mut z = 0u64;
        for (k, c) in s.chars().enumerate() {
            let letter = Pauli::from_letter(c)
                .ok_or_else(|| Error::invalid(format!("bad Pauli letter '{c}' in \"{s}\"")))?;
            let (bx, bz) = letter.bits();
            if k < 64 {
                x |= (bx as u64) << k;
                z |= (bz as u64) << k;
            }
        }
        Self::new(n, x, z)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Product of two strings; see [`PauliString::multiply`].
pub fn pauli_multiply(p: &PauliString, q: &PauliString) -> Result<(Phase, PauliString)> {
    p.multiply(q)
}

/// Whether two strings commute; see [`PauliString::commutes_with`].
pub fn symplectic_commutes(p: &PauliString, q: &PauliString) -> Result<bool> {
    p.commutes_with(q)
}

/// `[iP, iQ]` as `(coefficient, R)` with `[iP, iQ] = coefficient · iR`, or
/// `None` when the strings commute.
pub(crate) fn string_bracket(p: &PauliString, q: &PauliString) -> Option<(f64, PauliString)> {
    if p.commutes_unchecked(q) {
        return None;
    }
    // PQ = s·i·R and QP = −PQ, so [iP, iQ] = −2PQ = −2s·i·R.
    let (phase, r) = p.multiply_unchecked(q);
    let s = phase
        .imaginary_sign()
        .expect("anticommuting strings have an imaginary product phase");
    Some((-2.0 * s, r))
}

/// Anti-Hermitian operator `i·Σ c_P P` with real coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    n: u32,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliSum {
    pub fn zero(n: u32) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `i·coeff·P`.
    pub fn from_string(p: PauliString, coeff: f64) -> Self {
        let mut s = Self::zero(p.num_qubits());
        s.add_term(p, coeff);
        s
    }

    /// Sums repeated strings and prunes vanishing coefficients.
    pub fn from_terms(n: u32, terms: impl IntoIterator<Item = (PauliString, f64)>) -> Result<Self> {
        let mut s = Self::zero(n);
        for (p, c) in terms {
            if p.num_qubits() != n {
                return Err(Error::RegisterMismatch {
                    left: n,
                    right: p.num_qubits(),
                });
            }
            s.accumulate(p, c);
        }
        s.prune();
        Ok(s)
    }

    /// Parses `[(coeff, "XYZ"), ...]`.
    pub fn from_labels(terms: &[(f64, &str)]) -> Result<Self> {
        let parsed: Vec<(PauliString, f64)> = terms
            .iter()
            .map(|&(c, s)| Ok((s.parse::<PauliString>()?, c)))
            .collect::<Result<_>>()?;
        let n = parsed
            .first()
            .map(|(p, _)| p.num_qubits())
            .ok_or_else(|| Error::invalid("empty term list"))?;
        Self::from_terms(n, parsed)
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn coeff(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    /// The sole string when the sum has exactly one term.
    pub fn as_single_string(&self) -> Option<(PauliString, f64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(p, &c)| (*p, c))
        } else {
            None
        }
    }

    fn accumulate(&mut self, p: PauliString, c: f64) {
        *self.terms.entry(p).or_insert(0.0) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.abs() > PRUNE_TOL);
    }

    /// Adds `i·c·P` in place.
    pub fn add_term(&mut self, p: PauliString, c: f64) {
        assert_eq!(p.num_qubits(), self.n, "register size mismatch");
        self.accumulate(p, c);
        if self.terms.get(&p).is_some_and(|v| v.abs() <= PRUNE_TOL) {
            self.terms.remove(&p);
        }
    }

    fn check_register(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RegisterMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_register(other)?;
        let mut s = self.clone();
        for (p, c) in other.terms() {
            s.accumulate(*p, c);
        }
        s.prune();
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut s = Self::zero(self.n);
        for (p, c) in self.terms() {
            s.accumulate(*p, c * k);
        }
        s.prune();
        s
    }

    /// `[self, other]` in canonical form.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_register(other)?;
        let mut out = Self::zero(self.n);
        for (p, a) in self.terms() {
            for (q, b) in other.terms() {
                if let Some((k, r)) = string_bracket(p, q) {
                    out.accumulate(r, k * a * b);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Coefficient 2-norm; the Hilbert–Schmidt norm divided by `2^{n/2}`.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Coefficient dot product; `Re Tr(a†b) = 2^n · dot(a, b)`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.terms()
            .map(|(p, c)| c * other.coeff(p))
            .sum()
    }

    /// Dense anti-Hermitian matrix `i·Σ c_P P`.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        let m = self.dense_sum(Complex64::new(0.0, 1.0))?;
        Ok(DenseOperator::from_parts(m, Role::AntiHermitian))
    }

    /// Dense Hermitian matrix `Σ c_P P`.
    pub fn hamiltonian_dense(&self) -> Result<DenseOperator> {
        let m = self.dense_sum(Complex64::new(1.0, 0.0))?;
        Ok(DenseOperator::from_parts(m, Role::Hermitian))
    }

    fn dense_sum(&self, factor: Complex64) -> Result<DMatrix<Complex64>> {
        let limit = dense_qubit_limit();
        if self.n > limit {
            return Err(Error::Limit {
                what: "dense register (qubits)",
                size: self.n as usize,
                limit: limit as usize,
            });
        }
        let d = 1usize << self.n;
        let mut m = DMatrix::zeros(d, d);
        for (p, c) in self.terms() {
            let k = factor * c;
            p.for_each_entry(|r, col, v| m[(r, col)] += k * v);
        }
        Ok(m)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c} {p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn letters_round_trip() {
        let p = ps("IXYZ");
        assert_eq!(p.to_string(), "IXYZ");
        assert_eq!(p.letter(0), Pauli::I);
        assert_eq!(p.letter(3), Pauli::Z);
        assert_eq!(p.weight(), 3);
        assert!("IXA".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn masks_beyond_register_rejected() {
        assert!(PauliString::new(2, 0b100, 0).is_err());
        assert!(PauliString::new(2, 0b11, 0b01).is_ok());
    }

    #[test]
    fn product_table() {
        assert_eq!(ps("X").multiply(&ps("Y")).unwrap(), (Phase::I, ps("Z")));
        assert_eq!(ps("Y").multiply(&ps("X")).unwrap(), (Phase::MINUS_I, ps("Z")));
        assert_eq!(ps("Z").multiply(&ps("X")).unwrap(), (Phase::I, ps("Y")));
        assert_eq!(ps("Y").multiply(&ps("Y")).unwrap(), (Phase::ONE, ps("I")));
        assert_eq!(ps("II").multiply(&ps("XY")).unwrap(), (Phase::ONE, ps("XY")));
        assert_eq!(ps("XZ").multiply(&ps("ZX")).unwrap(), (Phase::ONE, ps("YY")));
        assert!(ps("X").multiply(&ps("XX")).is_err());
    }

    #[test]
    fn commutation() {
        assert!(!ps("X").commutes_with(&ps("Z")).unwrap());
        assert!(ps("XX").commutes_with(&ps("YY")).unwrap());
        assert!(ps("XYZ").commutes_with(&ps("XYZ")).unwrap());
    }

    #[test]
    fn commutator_examples() {
        let x = PauliSum::from_labels(&[(1.0, "X")]).unwrap();
        let y = PauliSum::from_labels(&[(1.0, "Y")]).unwrap();
        let c = x.commutator(&y).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff(&ps("Z")), -2.0);

        let zz = PauliSum::from_labels(&[(1.0, "ZZ")]).unwrap();
        let xi = PauliSum::from_labels(&[(1.0, "XI")]).unwrap();
        let c = zz.commutator(&xi).unwrap();
        assert_eq!(c.coeff(&ps("YZ")).abs(), 2.0);
        assert!(zz.commutator(&zz).unwrap().is_empty());
    }

    #[test]
    fn dense_images() {
        let z = PauliSum::from_labels(&[(1.0, "Z")]).unwrap().to_dense().unwrap();
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(z.matrix()[(0, 0)], i);
        assert_eq!(z.matrix()[(1, 1)], -i);
        let x = PauliSum::from_labels(&[(1.0, "X")]).unwrap().to_dense().unwrap();
        assert_eq!(x.matrix()[(0, 1)], i);
        assert_eq!(x.matrix()[(1, 0)], i);
        // Qubit 1 is the leftmost Kronecker factor.
        let zi = ps("ZI").to_matrix_unchecked();
        assert_eq!(zi[(2, 2)].re, -1.0);
        assert_eq!(zi[(1, 1)].re, 1.0);
        let y = ps("Y").to_matrix_unchecked();
        assert_eq!(y[(0, 1)], -i);
        assert_eq!(y[(1, 0)], i);
    }

    #[test]
    fn pruning_and_display() {
        let a = PauliSum::from_labels(&[(1.0, "XX"), (-1.0, "XX"), (2.0, "ZZ")]).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.to_string(), "2 ZZ");
        assert!(a.sub(&a).unwrap().is_empty());
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![ps("ZI"), ps("IX"), ps("YY"), ps("XZ"), ps("II")];
        v.sort();
        let s: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["II", "IX", "XZ", "YY", "ZI"]);
    }

    #[test]
    fn serde_as_letters() {
        let p = ps("XYZ");
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, "\"XYZ\"");
        assert_eq!(serde_json::from_str::<PauliString>(&j).unwrap(), p);
    }
}
