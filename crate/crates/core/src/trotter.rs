//! Ising-chain Hamiltonians, the interaction-picture product formula and its
//! error study.
//!
//! With `H = H0 + α Σ_γ H^γ` the product formula is
//! `U_apx(t) = e^{−itH0} ∏_γ (e^{itH0} e^{−it(H0 + αH^γ)})`, with `γ = 1`
//! as the leftmost factor.

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closure::pauli_closure;
use crate::dense::{exp_from_eigen, hermitian_eigen, DenseOperator, Role};
use crate::error::{Error, Result};
use crate::genset::GeneratorSet;
use crate::linalg::{cmul, hermitian_eigenvalues};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::report::{tolerances, Tolerances};
use crate::Complex64;

/// Largest chain handled by dense evolution (`d = 256`).
pub const DENSE_CHAIN_LIMIT: u32 = 8;
/// Largest chain for the symbolic TFIM closure.
pub const TFIM_CLOSURE_LIMIT: u32 = 8;
/// Largest chain for the symbolic LTFIM closure.
pub const LTFIM_CLOSURE_LIMIT: u32 = 5;
/// Quadrature nodes per axis for the double-integral bound.
pub const BOUND_NODES: usize = 33;
/// Errors outside `[FIT_MIN, FIT_MAX]` are excluded from slope fits.
pub const FIT_MIN: f64 = 1e-12;
pub const FIT_MAX: f64 = 0.5;

/// Open-boundary Ising chain
/// `h_zz Σ Z_jZ_{j+1} + h_z Σ Z_j + h_x Σ X_j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingSpec {
    pub n: u32,
    pub h_zz: f64,
    pub h_z: f64,
    pub h_x: f64,
}

impl IsingSpec {
    pub fn new(n: u32, h_zz: f64, h_z: f64, h_x: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("chain length {n}; at least 2 sites required")));
        }
        Ok(Self { n, h_zz, h_z, h_x })
    }

    /// `h_z / h_zz`.
    pub fn alpha(&self) -> Option<f64> {
        (self.h_zz != 0.0).then(|| self.h_z / self.h_zz)
    }
}

fn site(n: u32, sites: &[(u32, Pauli)]) -> Result<PauliString> {
    PauliString::from_sites(n, sites)
}

fn check_chain(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("chain length {n}; at least 2 sites required")));
    }
    Ok(())
}

fn ising_terms(n: u32, h_zz: f64, h_z: f64, h_x: f64) -> Result<PauliSum> {
    check_chain(n)?;
    let mut terms = Vec::new();
    for j in 1..n {
        terms.push((site(n, &[(j, Pauli::Z), (j + 1, Pauli::Z)])?, h_zz));
    }
    for j in 1..=n {
        terms.push((site(n, &[(j, Pauli::Z)])?, h_z));
        terms.push((site(n, &[(j, Pauli::X)])?, h_x));
    }
    PauliSum::from_terms(n, terms)
}

/// LTFIM Hamiltonian; the `PauliSum` coefficients are those of `H`.
pub fn build_ltfim(spec: &IsingSpec) -> Result<PauliSum> {
    ising_terms(spec.n, spec.h_zz, spec.h_z, spec.h_x)
}

/// TFIM Hamiltonian (the LTFIM without the longitudinal field).
pub fn build_tfim(spec: &IsingSpec) -> Result<PauliSum> {
    ising_terms(spec.n, spec.h_zz, 0.0, spec.h_x)
}

/// `Σ_j Z_j`.
pub fn longitudinal_field(n: u32) -> Result<PauliSum> {
    ising_terms(n, 0.0, 1.0, 0.0)
}

/// Single-site fragments `Z_γ`, `γ = 1..n`.
pub fn z_fragments(n: u32) -> Result<Vec<PauliSum>> {
    check_chain(n)?;
    (1..=n)
        .map(|g| Ok(PauliSum::from_string(site(n, &[(g, Pauli::Z)])?, 1.0)))
        .collect()
}

pub(crate) fn tfim_generator_set(n: u32, longitudinal: bool) -> Result<GeneratorSet> {
    check_chain(n)?;
    let mut gens = Vec::new();
    for j in 1..n {
        gens.push((
            format!("zz{j}"),
            PauliSum::from_string(site(n, &[(j, Pauli::Z), (j + 1, Pauli::Z)])?, 1.0),
        ));
    }
    for j in 1..=n {
        gens.push((format!("x{j}"), PauliSum::from_string(site(n, &[(j, Pauli::X)])?, 1.0)));
    }
    if longitudinal {
        for j in 1..=n {
            gens.push((format!("z{j}"), PauliSum::from_string(site(n, &[(j, Pauli::Z)])?, 1.0)));
        }
    }
    GeneratorSet::pauli(n, gens)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DlaDims {
    pub n: u32,
    pub tfim_dim: usize,
    /// `None` above the LTFIM closure cap.
    pub ltfim_dim: Option<usize>,
    pub n_squared: usize,
    pub matches_n_squared: bool,
}

/// Closure dimensions of the TFIM and LTFIM generator sets.
pub fn dla_dims(n_list: &[u32]) -> Result<Vec<DlaDims>> {
    n_list
        .iter()
        .map(|&n| {
            if n > TFIM_CLOSURE_LIMIT {
                return Err(Error::Limit {
                    what: "TFIM closure chain length",
                    size: n as usize,
                    limit: TFIM_CLOSURE_LIMIT as usize,
                });
            }
            let strings = |l| -> Result<Vec<PauliString>> {
                Ok(tfim_generator_set(n, l)?.pauli_strings().expect("string generators"))
            };
            let tfim_dim = pauli_closure(&strings(false)?)?.strings.len();
            let ltfim_dim = if n <= LTFIM_CLOSURE_LIMIT {
                Some(pauli_closure(&strings(true)?)?.strings.len())
            } else {
                None
            };
            let n_squared = (n * n) as usize;
            Ok(DlaDims {
                n,
                tfim_dim,
                ltfim_dim,
                n_squared,
                matches_n_squared: tfim_dim == n_squared,
            })
        })
        .collect()
}

fn check_dense_chain(n: u32) -> Result<()> {
    if n > DENSE_CHAIN_LIMIT {
        return Err(Error::Limit {
            what: "dense chain length",
            size: n as usize,
            limit: DENSE_CHAIN_LIMIT as usize,
        });
    }
    Ok(())
}

/// Precomputed dense data of `H0` and its fragments.
struct Problem {
    h0: DMatrix<Complex64>,
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
    fragments: Vec<DMatrix<Complex64>>,
}

impl Problem {
    fn new(h0: &PauliSum, fragments: &[PauliSum]) -> Result<Self> {
        check_dense_chain(h0.num_qubits())?;
        let h0m = h0.hamiltonian_dense()?.into_matrix();
        let fragments = fragments
            .iter()
            .map(|f| {
                if f.num_qubits() != h0.num_qubits() {
                    return Err(Error::RegisterMismatch {
                        left: h0.num_qubits(),
                        right: f.num_qubits(),
                    });
                }
                Ok(f.hamiltonian_dense()?.into_matrix())
            })
            .collect::<Result<Vec<_>>>()?;
        let (values, vectors) = hermitian_eigen(&h0m);
        Ok(Self {
            h0: h0m,
            values,
            vectors,
            fragments,
        })
    }

    fn free(&self, t: f64) -> DMatrix<Complex64> {
        exp_from_eigen(&self.values, &self.vectors, t)
    }

    fn perturbed(&self, alpha: f64, t: f64, which: Option<usize>) -> DMatrix<Complex64> {
        let mut h = self.h0.clone();
        let a = Complex64::new(alpha, 0.0);
        match which {
            Some(g) => h += &self.fragments[g] * a,
            None => {
                for f in &self.fragments {
                    h += f * a;
                }
            }
        }
        let (v, w) = hermitian_eigen(&h);
        exp_from_eigen(&v, &w, t)
    }

    fn u_apx(&self, alpha: f64, t: f64) -> DMatrix<Complex64> {
        let mut u = self.free(t);
        let back = self.free(-t);
        for g in 0..self.fragments.len() {
            u = cmul(&cmul(&u, &back), &self.perturbed(alpha, t, Some(g)));
        }
        u
    }

    fn exact(&self, alpha: f64, t: f64) -> DMatrix<Complex64> {
        self.perturbed(alpha, t, None)
    }

    /// `α² ∫_0^t dν ∫_0^ν ds Σ_{γ1<γ2} ‖[H̃^{γ1}(s), H̃^{γ2}(ν)]‖`.
    fn bound(&self, alpha: f64, t: f64, nodes: usize) -> f64 {
        let r = self.fragments.len();
        if r < 2 || t == 0.0 || alpha == 0.0 {
            return 0.0;
        }
        let d = self.values.len();
        let vd = self.vectors.adjoint();
        let rotated: Vec<DMatrix<Complex64>> = self
            .fragments
            .iter()
            .map(|f| cmul(&cmul(&vd, f), &self.vectors))
            .collect();
        let picture = |g: usize, tau: f64| {
            DMatrix::from_fn(d, d, |a, b| {
                rotated[g][(a, b)] * Complex64::from_polar(1.0, tau * (self.values[a] - self.values[b]))
            })
        };
        let w = simpson_weights(nodes);
        let h = 1.0 / (nodes - 1) as f64;
        let outer: Vec<f64> = (0..nodes)
            .into_par_iter()
            .map(|iv| {
                let nu = t * iv as f64 * h;
                if nu == 0.0 {
                    return 0.0;
                }
                let late: Vec<DMatrix<Complex64>> = (0..r).map(|g| picture(g, nu)).collect();
                let mut inner = 0.0;
                for (iu, wu) in w.iter().enumerate() {
                    let s = nu * iu as f64 * h;
                    let early: Vec<DMatrix<Complex64>> = (0..r).map(|g| picture(g, s)).collect();
                    let mut f = 0.0;
                    for g1 in 0..r {
                        for g2 in g1 + 1..r {
                            let c = cmul(&early[g1], &late[g2]) - cmul(&late[g2], &early[g1]);
                            f += anti_hermitian_norm(&c);
                        }
                    }
                    inner += wu * f;
                }
                nu * inner * h
            })
            .collect();
        let integral: f64 = outer.iter().zip(&w).map(|(f, wv)| f * wv).sum::<f64>() * t * h;
        alpha * alpha * integral
    }
}

/// Composite Simpson weights (without the step factor) on an odd node count.
fn simpson_weights(nodes: usize) -> Vec<f64> {
    assert!(nodes >= 3 && nodes % 2 == 1, "Simpson rule needs an odd node count");
    (0..nodes)
        .map(|k| {
            if k == 0 || k == nodes - 1 {
                1.0 / 3.0
            } else if k % 2 == 1 {
                4.0 / 3.0
            } else {
                2.0 / 3.0
            }
        })
        .collect()
}

/// Operator norm of an anti-Hermitian matrix via the Hermitian `iC`.
fn anti_hermitian_norm(c: &DMatrix<Complex64>) -> f64 {
    let h = c.map(|z| z * Complex64::new(0.0, 1.0));
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    hermitian_eigenvalues(&h)
        .iter()
        .fold(0.0, |a: f64, v| a.max(v.abs()))
}

fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// The product formula for `H0 + α Σ fragments` at time `t`.
pub fn u_apx(h0: &PauliSum, fragments: &[PauliSum], alpha: f64, t: f64) -> Result<DenseOperator> {
    let p = Problem::new(h0, fragments)?;
    Ok(DenseOperator::from_parts(p.u_apx(alpha, t), Role::Unitary))
}

/// `e^{−it(H0 + α Σ fragments)}`.
pub fn exact_evolution(
    h0: &PauliSum,
    fragments: &[PauliSum],
    alpha: f64,
    t: f64,
) -> Result<DenseOperator> {
    let p = Problem::new(h0, fragments)?;
    Ok(DenseOperator::from_parts(p.exact(alpha, t), Role::Unitary))
}

/// Double-integral commutator bound on `‖U − U_apx‖`, by composite Simpson
/// quadrature with `nodes` points per axis (odd).
pub fn lemma4_bound(
    h0: &PauliSum,
    fragments: &[PauliSum],
    alpha: f64,
    t: f64,
    nodes: usize,
) -> Result<f64> {
    if nodes < 3 || nodes % 2 == 0 {
        return Err(Error::invalid("quadrature needs an odd node count of at least 3"));
    }
    Ok(Problem::new(h0, fragments)?.bound(alpha, t, nodes))
}

/// `min_φ ‖U − e^{iφ}V‖` from the eigenphases of `V†U`.
pub fn phase_min_distance(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(phase_min_distance_matrix(&cmul(&v.matrix().adjoint(), u.matrix())))
}

fn phase_min_distance_matrix(w: &DMatrix<Complex64>) -> f64 {
    // The default Schur iteration can stall on near-identity input; cap it
    // and loosen the deflation threshold on retry.
    let eig = [(f64::EPSILON, 10_000), (1e-12, 100_000)]
        .iter()
        .find_map(|&(eps, iters)| Schur::try_new(w.clone(), eps, iters))
        .and_then(|s| s.eigenvalues())
        .unwrap_or_else(|| normal_eigenvalues(w));
    let mut phases: Vec<f64> = eig.iter().map(|z| z.arg()).collect();
    phases.sort_by(f64::total_cmp);
    let tau = std::f64::consts::TAU;
    let mut gap = tau - (phases[phases.len() - 1] - phases[0]);
    for pair in phases.windows(2) {
        gap = gap.max(pair[1] - pair[0]);
    }
    let arc = (tau - gap).max(0.0);
    2.0 * (arc / 4.0).sin()
}

/// Eigenvalues of a normal matrix from the eigenvectors of a generic
/// Hermitian combination of its Hermitian and anti-Hermitian parts.
fn normal_eigenvalues(w: &DMatrix<Complex64>) -> DVector<Complex64> {
    let wd = w.adjoint();
    let k = (w + &wd) * Complex64::new(0.5, 0.0)
        + (w - &wd) * Complex64::new(0.0, -0.5 * 0.618_033_988_749_894_8);
    let (_, v) = hermitian_eigen(&k);
    DVector::from_iterator(
        w.nrows(),
        v.column_iter().map(|c| (c.adjoint() * w * c)[(0, 0)]),
    )
}

/// One grid point of the sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterPoint {
    pub n: u32,
    pub alpha: f64,
    pub t: f64,
    /// `‖U − U_apx‖`.
    pub err_apx: f64,
    /// `min_φ ‖U − e^{iφ}U_apx‖`.
    pub err_apx_phase_min: f64,
    /// `‖U_LTFIM − U_TFIM‖`.
    pub err_tfim: f64,
    /// Double-integral bound on `err_apx`.
    pub bound: f64,
    /// `err_apx / (n² α² t²)`; `None` when `α t = 0`.
    pub scaled: Option<f64>,
}

/// Least-squares log-log slope over one grid line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub n: u32,
    /// The value held fixed (`α` for fits in `t`, `t` for fits in `α`).
    pub fixed: f64,
    pub slope: Option<f64>,
    pub points_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    pub n: u32,
    /// `‖U_apx − e^{−itH0}‖` at `α = 0`.
    pub alpha_zero: f64,
    /// `‖U_apx − U‖` with the perturbation as a single fragment.
    pub single_fragment: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterReport {
    pub h_zz: f64,
    pub h_x: f64,
    pub points: Vec<TrotterPoint>,
    pub t_slopes: Vec<SlopeFit>,
    pub alpha_slopes: Vec<SlopeFit>,
    pub tfim_t_slopes: Vec<SlopeFit>,
    pub tfim_alpha_slopes: Vec<SlopeFit>,
    pub bound_constant: Option<f64>,
    pub bound_holds: bool,
    /// Per `(n, α)`: whether `err_apx` is non-decreasing along the `t` grid.
    pub monotone_in_t: Vec<SlopeFlag>,
    pub identity_residuals: Vec<IdentityResiduals>,
    pub max_unitarity_residual: f64,
    pub fit_window: [f64; 2],
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFlag {
    pub n: u32,
    pub alpha: f64,
    pub monotone: bool,
}

/// Slope of `log y` against `log x` over points inside the fit window.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> (Option<f64>, usize) {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y >= FIT_MIN && **y <= FIT_MAX)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = pts.len();
    if k < 2 {
        return (None, k);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (None, k);
    }
    (Some(sxy / sxx), k)
}

fn unitarity_residual(u: &DMatrix<Complex64>) -> f64 {
    let d = u.nrows();
    (cmul(&u.adjoint(), u) - DMatrix::identity(d, d)).norm() / d as f64
}

/// Error study over an `(n, α, t)` grid with `H0 = TFIM` and perturbation
/// `α·h_zz·Σ Z_γ` (so that `h_z = α·h_zz`).
pub fn error_sweep(
    base: &IsingSpec,
    n_list: &[u32],
    alpha_list: &[f64],
    t_list: &[f64],
) -> Result<TrotterReport> {
    if n_list.is_empty() || alpha_list.is_empty() || t_list.is_empty() {
        return Err(Error::invalid("empty sweep grid"));
    }
    let mut points = Vec::new();
    let mut identity_residuals = Vec::new();
    let mut max_unitarity: f64 = 0.0;
    for &n in n_list {
        check_chain(n)?;
        check_dense_chain(n)?;
        let spec = IsingSpec::new(n, base.h_zz, 0.0, base.h_x)?;
        let h0 = build_tfim(&spec)?;
        let fragments: Vec<PauliSum> = z_fragments(n)?
            .into_iter()
            .map(|f| f.scale(base.h_zz))
            .collect();
        let problem = Problem::new(&h0, &fragments)?;
        let grid: Vec<(f64, f64)> = alpha_list
            .iter()
            .flat_map(|&a| t_list.iter().map(move |&t| (a, t)))
            .collect();
        let results: Vec<(TrotterPoint, f64)> = grid
            .par_iter()
            .map(|&(alpha, t)| {
                let u = problem.exact(alpha, t);
                let apx = problem.u_apx(alpha, t);
                let free = problem.free(t);
                let err_apx = spectral_norm(&(&u - &apx));
                let phase = phase_min_distance_matrix(&cmul(&apx.adjoint(), &u));
                let err_tfim = spectral_norm(&(&u - &free));
                let bound = problem.bound(alpha, t, BOUND_NODES);
                let denom = (n * n) as f64 * alpha * alpha * t * t;
                let unit = unitarity_residual(&u).max(unitarity_residual(&apx));
                (
                    TrotterPoint {
                        n,
                        alpha,
                        t,
                        err_apx,
                        err_apx_phase_min: phase,
                        err_tfim,
                        bound,
                        scaled: (denom > 0.0).then(|| err_apx / denom),
                    },
                    unit,
                )
            })
            .collect();
        for (p, unit) in results {
            max_unitarity = max_unitarity.max(unit);
            points.push(p);
        }

        let t_ref = t_list.iter().cloned().fold(0.0, f64::max);
        let a_ref = alpha_list.iter().cloned().fold(0.0, |a: f64, b| a.max(b.abs()));
        let zero = spectral_norm(&(problem.u_apx(0.0, t_ref) - problem.free(t_ref)));
        let mut whole = PauliSum::zero(n);
        for f in &fragments {
            whole = whole.add(f)?;
        }
        let single = Problem::new(&h0, &[whole])?;
        let one = spectral_norm(&(single.u_apx(a_ref, t_ref) - single.exact(a_ref, t_ref)));
        identity_residuals.push(IdentityResiduals {
            n,
            alpha_zero: zero,
            single_fragment: one,
        });
    }

    let line = |n: u32, pick: &dyn Fn(&TrotterPoint) -> bool| -> Vec<&TrotterPoint> {
        points.iter().filter(|p| p.n == n && pick(p)).collect()
    };
    let mut t_slopes = Vec::new();
    let mut tfim_t_slopes = Vec::new();
    let mut monotone_in_t = Vec::new();
    let mut alpha_slopes = Vec::new();
    let mut tfim_alpha_slopes = Vec::new();
    for &n in n_list {
        for &a in alpha_list {
            let pts = line(n, &|p| p.alpha == a);
            let ts: Vec<f64> = pts.iter().map(|p| p.t).collect();
            let apx: Vec<f64> = pts.iter().map(|p| p.err_apx).collect();
            let tf: Vec<f64> = pts.iter().map(|p| p.err_tfim).collect();
            let (slope, used) = loglog_slope(&ts, &apx);
            t_slopes.push(SlopeFit { n, fixed: a, slope, points_used: used });
            let (slope, used) = loglog_slope(&ts, &tf);
            tfim_t_slopes.push(SlopeFit { n, fixed: a, slope, points_used: used });
            let mut order: Vec<usize> = (0..ts.len()).collect();
            order.sort_by(|&x, &y| ts[x].total_cmp(&ts[y]));
            let monotone = order.windows(2).all(|w| apx[w[1]] >= apx[w[0]]);
            monotone_in_t.push(SlopeFlag { n, alpha: a, monotone });
        }
        for &t in t_list {
            let pts = line(n, &|p| p.t == t);
            let al: Vec<f64> = pts.iter().map(|p| p.alpha.abs()).collect();
            let apx: Vec<f64> = pts.iter().map(|p| p.err_apx).collect();
            let tf: Vec<f64> = pts.iter().map(|p| p.err_tfim).collect();
            let (slope, used) = loglog_slope(&al, &apx);
            alpha_slopes.push(SlopeFit { n, fixed: t, slope, points_used: used });
            let (slope, used) = loglog_slope(&al, &tf);
            tfim_alpha_slopes.push(SlopeFit { n, fixed: t, slope, points_used: used });
        }
    }
    let bound_constant = points
        .iter()
        .filter_map(|p| p.scaled)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    let bound_holds = points
        .iter()
        .all(|p| p.err_apx <= p.bound * (1.0 + 1e-6) + 1e-13);

    Ok(TrotterReport {
        h_zz: base.h_zz,
        h_x: base.h_x,
        points,
        t_slopes,
        alpha_slopes,
        tfim_t_slopes,
        tfim_alpha_slopes,
        bound_constant,
        bound_holds,
        monotone_in_t,
        identity_residuals,
        max_unitarity_residual: max_unitarity,
        fit_window: [FIT_MIN, FIT_MAX],
        tolerances: tolerances([
            ("fit_min", FIT_MIN),
            ("fit_max", FIT_MAX),
            ("bound_nodes", BOUND_NODES as f64),
        ]),
    })
}

/// `t_0·ratio^k` for `k = 0..count`.
pub fn geometric_grid(t0: f64, t1: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![t0];
    }
    let ratio = (t1 / t0).powf(1.0 / (count - 1) as f64);
    (0..count).map(|k| t0 * ratio.powi(k as i32)).collect()
}
