//! Lie closure of generating sets, structure constants, membership and
//! cyclicity search.

use std::collections::{HashMap, HashSet};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{DenseOperator, Role};
use crate::error::{Error, Result};
use crate::genset::GeneratorSet;
use crate::linalg::{ccommutator, realify, unrealify, OrthoBasis};
use crate::pauli::{string_bracket, PauliString, PauliSum};
use crate::Complex64;

/// Default relative tolerance deciding numerical linear independence.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Relative residual below which an operator counts as contained in a span.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Default nesting budget for [`is_cyclic`].
pub const DEFAULT_DEPTH_BUDGET: usize = 6;

/// Per-level cap on distinct intermediates kept by the cyclicity search.
pub const CYCLIC_FRONTIER_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureOptions {
    pub rank_tol: f64,
    /// Error out once the basis grows beyond this many elements.
    pub max_dim: Option<usize>,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            max_dim: None,
        }
    }
}

/// Parents `(a, b)` of a basis element produced as `[b_a, b_b]`; `None` for
/// generators.
pub type Provenance = Option<(usize, usize)>;

/// Closure basis made of Pauli strings, each standing for `iP`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolicBasis {
    pub n: u32,
    pub strings: Vec<PauliString>,
    pub provenance: Vec<Provenance>,
}

/// Hilbert–Schmidt orthonormal anti-Hermitian closure basis.
#[derive(Clone, Debug)]
pub struct DenseBasis {
    pub dim: usize,
    pub elements: Vec<DenseOperator>,
    pub provenance: Vec<Provenance>,
    /// The basis reached all of `su(d)` or `u(d)` and the search stopped.
    pub saturated: bool,
}

impl DenseBasis {
    /// Orthonormal real embeddings of the elements.
    pub fn ortho(&self) -> OrthoBasis {
        let mut b = OrthoBasis::new(2 * self.dim * self.dim);
        for e in &self.elements {
            b.try_push(&realify(e.matrix()), 0.0);
        }
        b
    }

    /// Element `Σ_k c_k b_k`.
    pub fn combine(&self, coords: &[f64]) -> DenseOperator {
        let mut m = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (c, e) in coords.iter().zip(&self.elements) {
            if *c != 0.0 {
                m += e.matrix() * Complex64::new(*c, 0.0);
            }
        }
        DenseOperator::from_parts(m, Role::AntiHermitian)
    }

    /// Coordinates `Re Tr(b_k† x)` of `x` in this basis.
    pub fn coordinates(&self, x: &DenseOperator) -> Result<Vec<f64>> {
        self.elements.iter().map(|e| e.real_inner(x)).collect()
    }
}

/// Result of a closure computation.
#[derive(Clone, Debug)]
pub enum LieBasis {
    Symbolic(SymbolicBasis),
    Dense(DenseBasis),
}

impl LieBasis {
    pub fn dim(&self) -> usize {
        match self {
            LieBasis::Symbolic(b) => b.strings.len(),
            LieBasis::Dense(b) => b.elements.len(),
        }
    }

    pub fn provenance(&self) -> &[Provenance] {
        match self {
            LieBasis::Symbolic(b) => &b.provenance,
            LieBasis::Dense(b) => &b.provenance,
        }
    }

    /// Matrix dimension of the operators.
    pub fn operator_dim(&self) -> usize {
        match self {
            LieBasis::Symbolic(b) => 1usize << b.n,
            LieBasis::Dense(b) => b.dim,
        }
    }

    /// Dense form; strings become `iP/√d`, which is orthonormal.
    pub fn to_dense(&self) -> Result<DenseBasis> {
        match self {
            LieBasis::Dense(b) => Ok(b.clone()),
            LieBasis::Symbolic(b) => {
                let d = 1usize << b.n;
                let scale = 1.0 / (d as f64).sqrt();
                let elements = b
                    .strings
                    .iter()
                    .map(|p| Ok(PauliSum::from_string(*p, scale).to_dense()?))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DenseBasis {
                    dim: d,
                    elements,
                    provenance: b.provenance.clone(),
                    saturated: b.strings.len() + 1 >= d * d,
                })
            }
        }
    }
}

/// Closure of a set of Pauli strings.
///
/// The generators are deduplicated; the returned strings are sorted
/// canonically and provenance indices refer to that order.
pub fn pauli_closure(gens: &[PauliString]) -> Result<SymbolicBasis> {
    let Some(first) = gens.first() else {
        return Err(Error::invalid("empty generator list"));
    };
    let n = first.num_qubits();
    if let Some(bad) = gens.iter().find(|p| p.num_qubits() != n) {
        return Err(Error::RegisterMismatch {
            left: n,
            right: bad.num_qubits(),
        });
    }
    let mut seeds = gens.to_vec();
    seeds.sort();
    seeds.dedup();

    let mut strings = seeds.clone();
    let mut provenance: Vec<Provenance> = vec![None; strings.len()];
    let mut index: HashMap<PauliString, usize> =
        strings.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut j = 0;
    while j < strings.len() {
        for i in 0..j {
            if let Some((_, r)) = string_bracket(&strings[i], &strings[j]) {
                if !index.contains_key(&r) {
                    index.insert(r, strings.len());
                    strings.push(r);
                    provenance.push(Some((i, j)));
                }
            }
        }
        j += 1;
    }

    let mut order: Vec<usize> = (0..strings.len()).collect();
    order.sort_by(|&a, &b| strings[a].cmp(&strings[b]));
    let mut rank = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    Ok(SymbolicBasis {
        n,
        strings: order.iter().map(|&k| strings[k]).collect(),
        provenance: order
            .iter()
            .map(|&k| provenance[k].map(|(a, b)| (rank[a], rank[b])))
            .collect(),
    })
}

/// Numerical closure of anti-Hermitian dense generators.
///
/// Linearly dependent generators are skipped. Pairs are processed in the
/// fixed order `(i, j)`, `j` ascending then `i < j` ascending; commutators of
/// one sweep row are evaluated in parallel and appended sequentially.
pub fn dense_closure(gens: &[DenseOperator], opts: &ClosureOptions) -> Result<DenseBasis> {
    let Some(first) = gens.first() else {
        return Err(Error::invalid("empty generator list"));
    };
    let d = first.dim();
    for g in gens {
        if g.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: g.dim(),
            });
        }
        let residual = g.role_residual(Role::AntiHermitian);
        if residual > crate::dense::ROLE_TOL {
            return Err(Error::WrongRole {
                expected: Role::AntiHermitian,
                residual,
            });
        }
    }
    let cap = d * d;
    let limit = opts.max_dim.unwrap_or(cap).min(cap);
    let mut ortho = OrthoBasis::new(2 * d * d);
    let mut elements: Vec<DMatrix<Complex64>> = Vec::new();
    let mut provenance: Vec<Provenance> = Vec::new();
    let mut traceless = true;

    let push = |v: &[f64],
                    prov: Provenance,
                    ortho: &mut OrthoBasis,
                    elements: &mut Vec<DMatrix<Complex64>>,
                    provenance: &mut Vec<Provenance>,
                    traceless: &mut bool|
     -> Result<bool> {
        if ortho.try_push(v, opts.rank_tol).is_some() {
            if ortho.count() > limit {
                return Err(Error::ClosureLimit { limit });
            }
            let m = unrealify(ortho.vector(ortho.count() - 1), d);
            if m.trace().norm() > 1e-9 {
                *traceless = false;
            }
            elements.push(m);
            provenance.push(prov);
            return Ok(true);
        }
        Ok(false)
    };

    for g in gens {
        push(
            &realify(g.matrix()),
            None,
            &mut ortho,
            &mut elements,
            &mut provenance,
            &mut traceless,
        )?;
    }
    let saturated = |count: usize, traceless: bool| count == cap || (traceless && count + 1 == cap);
    let mut j = 0;
    while j < elements.len() && !saturated(elements.len(), traceless) {
        let bj = &elements[j];
        let row: Vec<Vec<f64>> = (0..j)
            .into_par_iter()
            .map(|i| realify(&ccommutator(&elements[i], bj)))
            .collect();
        for (i, v) in row.iter().enumerate() {
            push(
                v,
                Some((i, j)),
                &mut ortho,
                &mut elements,
                &mut provenance,
                &mut traceless,
            )?;
            if saturated(elements.len(), traceless) {
                break;
            }
        }
        j += 1;
    }
    let full = saturated(elements.len(), traceless);
    Ok(DenseBasis {
        dim: d,
        elements: elements
            .into_iter()
            .map(|m| DenseOperator::from_parts(m, Role::AntiHermitian))
            .collect(),
        provenance,
        saturated: full,
    })
}

/// Closure of a generator set: symbolic when every generator is a single
/// Pauli string, dense otherwise.
pub fn closure(set: &GeneratorSet, opts: &ClosureOptions) -> Result<LieBasis> {
    if let Some(strings) = set.pauli_strings() {
        return Ok(LieBasis::Symbolic(pauli_closure(&strings)?));
    }
    Ok(LieBasis::Dense(dense_closure(&set.dense_ops()?, opts)?))
}

/// Dimension of the closure of a generator set.
pub fn closure_dim(set: &GeneratorSet, opts: &ClosureOptions) -> Result<usize> {
    Ok(closure(set, opts)?.dim())
}

/// Matrices of `ad_{b_i}` in the basis: `ad_i[(k, j)]` is the coefficient of
/// `b_k` in `[b_i, b_j]`.
pub fn adjoint_matrices(basis: &LieBasis) -> Result<Vec<DMatrix<f64>>> {
    match basis {
        LieBasis::Symbolic(b) => Ok(symbolic_adjoint(b)),
        LieBasis::Dense(b) => Ok(dense_adjoint(b)),
    }
}

fn symbolic_adjoint(b: &SymbolicBasis) -> Vec<DMatrix<f64>> {
    let m = b.strings.len();
    let index: HashMap<PauliString, usize> =
        b.strings.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut ad = vec![DMatrix::zeros(m, m); m];
    for i in 0..m {
        for j in 0..m {
            if let Some((c, r)) = string_bracket(&b.strings[i], &b.strings[j]) {
                if let Some(&k) = index.get(&r) {
                    ad[i][(k, j)] = c;
                }
            }
        }
    }
    ad
}

fn dense_adjoint(b: &DenseBasis) -> Vec<DMatrix<f64>> {
    let m = b.elements.len();
    let ortho = b.ortho();
    let rows: Vec<Vec<(usize, Vec<f64>)>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (i + 1..m)
                .map(|j| {
                    let c = ccommutator(b.elements[i].matrix(), b.elements[j].matrix());
                    (j, ortho.coefficients(&realify(&c)).as_slice().to_vec())
                })
                .collect()
        })
        .collect();
    let mut ad = vec![DMatrix::zeros(m, m); m];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, f) in row {
            for (k, v) in f.into_iter().enumerate() {
                ad[i][(k, j)] = v;
                ad[j][(k, i)] = -v;
            }
        }
    }
    ad
}

/// Operand accepted by [`contains`].
#[derive(Clone, Copy, Debug)]
pub enum Element<'a> {
    Pauli(&'a PauliSum),
    Dense(&'a DenseOperator),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub contained: bool,
    /// `‖x − proj(x)‖ / ‖x‖`; zero for `x = 0`.
    pub residual: f64,
}

impl Containment {
    fn from_residual(residual: f64) -> Self {
        Self {
            contained: residual <= CONTAINMENT_TOL,
            residual,
        }
    }
}

/// Membership of `x` in the span of `basis`.
pub fn contains(basis: &LieBasis, x: Element<'_>) -> Result<Containment> {
    match (basis, x) {
        (LieBasis::Symbolic(b), Element::Pauli(s)) => {
            if s.num_qubits() != b.n {
                return Err(Error::RegisterMismatch {
                    left: b.n,
                    right: s.num_qubits(),
                });
            }
            let total = s.norm();
            if total == 0.0 {
                return Ok(Containment::from_residual(0.0));
            }
            let members: HashSet<&PauliString> = b.strings.iter().collect();
            let outside: f64 = s
                .terms()
                .filter(|(p, _)| !members.contains(p))
                .map(|(_, c)| c * c)
                .sum();
            Ok(Containment::from_residual(outside.sqrt() / total))
        }
        (LieBasis::Symbolic(_), Element::Dense(x)) => {
            contains(&LieBasis::Dense(basis.to_dense()?), Element::Dense(x))
        }
        (LieBasis::Dense(_), Element::Pauli(s)) => {
            let x = s.to_dense()?;
            contains(basis, Element::Dense(&x))
        }
        (LieBasis::Dense(b), Element::Dense(x)) => {
            if x.dim() != b.dim {
                return Err(Error::DimensionMismatch {
                    expected: b.dim,
                    found: x.dim(),
                });
            }
            Ok(Containment::from_residual(span_residual(&b.ortho(), x)))
        }
    }
}

/// Relative residual of `x` against an orthonormal set of embeddings.
pub fn span_residual(ortho: &OrthoBasis, x: &DenseOperator) -> f64 {
    let v = realify(x.matrix());
    let n0 = crate::linalg::norm(&v);
    if n0 == 0.0 {
        return 0.0;
    }
    crate::linalg::norm(&ortho.residual(&v)) / n0
}

/// Lie-algebra element usable by the cyclicity search.
pub trait LieElement: Clone + Send + Sync {
    fn bracket(&self, other: &Self) -> Result<Self>;
    /// Real inner product.
    fn inner(&self, other: &Self) -> f64;
    /// Key identifying the element up to a nonzero real scale.
    fn fingerprint(&self) -> Vec<i64>;

    fn norm(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }
}

fn quantize(values: impl Iterator<Item = f64>, norm: f64) -> Vec<i64> {
    let v: Vec<f64> = values.map(|x| x / norm).collect();
    let sign = v
        .iter()
        .find(|x| x.abs() > 1e-6)
        .map_or(1.0, |x| x.signum());
    v.into_iter()
        .map(|x| (x * sign * 1e8).round() as i64)
        .collect()
}

impl LieElement for PauliSum {
    fn bracket(&self, other: &Self) -> Result<Self> {
        self.commutator(other)
    }

    fn inner(&self, other: &Self) -> f64 {
        self.dot(other)
    }

    fn fingerprint(&self) -> Vec<i64> {
        let norm = PauliSum::norm(self);
        let coeffs = quantize(self.terms().map(|(_, c)| c), norm);
        let mut key = Vec::with_capacity(3 * coeffs.len());
        for ((p, _), c) in self.terms().zip(coeffs) {
            key.extend([p.x_mask() as i64, p.z_mask() as i64, c]);
        }
        key
    }
}

impl LieElement for DenseOperator {
    fn bracket(&self, other: &Self) -> Result<Self> {
        self.commutator(other)
    }

    fn inner(&self, other: &Self) -> f64 {
        self.real_inner(other).unwrap_or(0.0)
    }

    fn fingerprint(&self) -> Vec<i64> {
        quantize(realify(self.matrix()).into_iter(), self.frobenius_norm())
    }
}

/// Relative distance of `x` from the line spanned by `target`; 1 for `x = 0`.
pub fn proportionality_residual<T: LieElement>(x: &T, target: &T) -> f64 {
    let nx2 = x.inner(x);
    let nt2 = target.inner(target);
    if nx2 <= 0.0 || nt2 <= 0.0 {
        return 1.0;
    }
    let p = x.inner(target);
    ((nx2 - p * p / nt2).max(0.0) / nx2).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CyclicVerdict {
    Cyclic,
    Unknown,
}

/// Search outcome for the non-commuting pair `(i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    /// `k_1..k_ℓ` with `[A_{k_ℓ}, [⋯, [A_{k_1}, [A_j, A_i]]]] ∝ [A_j, A_i]`.
    pub chain: Option<Vec<usize>>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub verdict: CyclicVerdict,
    pub witnesses: Vec<Witness>,
    pub depth_budget: usize,
}

/// Bounded breadth-first search for stable extensions of every
/// non-commuting generator pair.
pub fn is_cyclic<T: LieElement>(gens: &[T], depth_budget: usize) -> Result<CyclicityReport> {
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let found: Vec<Option<Witness>> = pairs
        .par_iter()
        .map(|&(i, j)| search_pair(gens, i, j, depth_budget))
        .collect::<Result<_>>()?;
    let witnesses: Vec<Witness> = found.into_iter().flatten().collect();
    let verdict = if witnesses.iter().all(|w| w.chain.is_some()) {
        CyclicVerdict::Cyclic
    } else {
        CyclicVerdict::Unknown
    };
    Ok(CyclicityReport {
        verdict,
        witnesses,
        depth_budget,
    })
}

fn search_pair<T: LieElement>(
    gens: &[T],
    i: usize,
    j: usize,
    depth_budget: usize,
) -> Result<Option<Witness>> {
    let target = gens[j].bracket(&gens[i])?;
    let scale = gens[i].norm() * gens[j].norm();
    if target.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Ok(None);
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(target.fingerprint());
    let mut frontier: Vec<(T, Vec<usize>)> = vec![(target.clone(), Vec::new())];
    for _ in 0..depth_budget {
        let mut next = Vec::new();
        for (state, chain) in &frontier {
            for (k, g) in gens.iter().enumerate() {
                let child = g.bracket(state)?;
                let scale = g.norm() * state.norm();
                if child.norm() <= 1e-12 * scale {
                    continue;
                }
                let mut c = chain.clone();
                c.push(k);
                let residual = proportionality_residual(&child, &target);
                if residual < CONTAINMENT_TOL {
                    return Ok(Some(Witness {
                        i,
                        j,
                        chain: Some(c),
                        residual: Some(residual),
                    }));
                }
                if next.len() < CYCLIC_FRONTIER_CAP && seen.insert(child.fingerprint()) {
                    next.push((child, c));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Some(Witness {
        i,
        j,
        chain: None,
        residual: None,
    }))
}

/// Replays a witness chain and returns its proportionality residual.
pub fn replay_witness<T: LieElement>(gens: &[T], w: &Witness) -> Result<f64> {
    let chain = w
        .chain
        .as_ref()
        .ok_or_else(|| Error::invalid("witness has no chain"))?;
    let target = gens[w.j].bracket(&gens[w.i])?;
    let mut x = target.clone();
    for &k in chain {
        x = gens[k].bracket(&x)?;
    }
    Ok(proportionality_residual(&x, &target))
}

/// [`is_cyclic`] on a generator set, symbolically when possible.
pub fn is_cyclic_set(set: &GeneratorSet, depth_budget: usize) -> Result<CyclicityReport> {
    match set.pauli_sums() {
        Some(sums) => {
            let owned: Vec<PauliSum> = sums.into_iter().cloned().collect();
            is_cyclic(&owned, depth_budget)
        }
        None => is_cyclic(&set.dense_ops()?, depth_budget),
    }
}
