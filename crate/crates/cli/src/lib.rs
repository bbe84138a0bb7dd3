//! Command-line frontend: argument model, dispatch and report emission.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lieforge_core::closure::{closure, is_cyclic_set, ClosureOptions, CyclicityReport, LieBasis, Provenance};
use lieforge_core::composition::{
    compose_powers, compose_projectors, default_chi, verify_composition, CompositionReport,
};
use lieforge_core::genset::read_matrix_json;
use lieforge_core::invariance::{analyze_overlap, build_sun_generators, OverlapOptions, SuNVariant};
use lieforge_core::reduction::{
    build_filter, fock_operators, ideal_decomposition, oscillator_reduction, reduce,
    verify_reduction, DecompositionSummary, FilterOperator, OscillatorReport, ReductionReport,
};
use lieforge_core::trotter::{dla_dims, error_sweep, geometric_grid, DlaDims, IsingSpec, TrotterReport};
use lieforge_core::{Error, GeneratorSet, Role};

/// Exit status for a produced report whose verdict passed.
pub const EXIT_OK: u8 = 0;
/// Exit status for a produced report whose verdict failed.
pub const EXIT_FAIL: u8 = 1;
/// Exit status for unreadable or invalid input.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "lieforge", version, about = "Dynamical Lie algebra toolkit")]
pub struct RunConfig {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Report format; CSV is available for grid-shaped outputs only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Relative rank tolerance for closure and rank decisions.
    #[arg(long, global = true)]
    pub rank_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lie closure of a generator set.
    Closure {
        /// Generator set, text or JSON.
        #[arg(long = "in")]
        input: PathBuf,
        /// Also search for stable extensions up to this chain length.
        #[arg(long)]
        cyclicity: Option<usize>,
    },
    /// Direct-sum composition of generator sets through an ancilla register.
    Compose {
        /// One generator set per block.
        #[arg(long, num_args = 1.., required = true)]
        blocks: Vec<PathBuf>,
        /// Hermitian label operator in matrix JSON; defaults to diag(0, 1, …).
        #[arg(long)]
        chi: Option<PathBuf>,
        /// Compose `K` copies of a single block through powers of χ.
        #[arg(long)]
        powers: Option<usize>,
    },
    /// Closure of the minimal su(2^N) generating sets.
    Invariance {
        /// Qubit counts.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        n_list: Vec<u32>,
        /// `z-chain`, `nearest-neighbor`, or `both`.
        #[arg(long, default_value = "both")]
        variant: String,
    },
    /// Central projection overlap between two generator sets.
    Overlap {
        /// Reference generator set.
        #[arg(long)]
        p: PathBuf,
        /// Candidate extension of the reference set.
        #[arg(long)]
        q: PathBuf,
    },
    /// Ideal decomposition, filtering and first-order reduction.
    Reduce {
        /// Generator set to reduce; omit together with `--modes`.
        #[arg(long = "in", required_unless_present = "modes")]
        input: Option<PathBuf>,
        /// Target ideal indices (0-based, in decomposition order).
        #[arg(long, value_delimiter = ',')]
        targets: Vec<usize>,
        /// Anti-Hermitian filter in matrix JSON; drawn at random otherwise.
        #[arg(long)]
        filter: Option<PathBuf>,
        /// Oscillator mode: keep the first `S` modes.
        #[arg(long, conflicts_with_all = ["input", "filter"])]
        modes: Option<usize>,
        /// Oscillator count for `--modes`.
        #[arg(long, default_value_t = 2)]
        oscillators: usize,
        /// Fock truncation for `--modes`.
        #[arg(long, default_value_t = 8)]
        d_trunc: usize,
        /// Filter frequencies for `--modes`; defaults to 1, 2, …
        #[arg(long, value_delimiter = ',')]
        omegas: Option<Vec<f64>>,
        /// Write the reduced generator set here.
        #[arg(long)]
        aprime_out: Option<PathBuf>,
    },
    /// Interaction-picture product-formula error sweep on Ising chains.
    Trotter {
        /// Chain lengths.
        #[arg(long, value_delimiter = ',', default_value = "3")]
        n_list: Vec<u32>,
        /// Longitudinal field strengths, relative to `--hzz`.
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        alpha_list: Vec<f64>,
        /// Times; defaults to 9 geometric points from 0.02 to 0.32.
        #[arg(long, value_delimiter = ',')]
        t_list: Option<Vec<f64>>,
        /// ZZ coupling.
        #[arg(long, default_value_t = 1.0)]
        hzz: f64,
        /// Transverse field.
        #[arg(long, default_value_t = 1.0)]
        hx: f64,
        /// Also write one CSV row per grid point here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Rendered report plus the exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub status: u8,
    pub output: String,
}

fn status(pass: bool) -> u8 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn closure_options(g: &GlobalArgs) -> Result<ClosureOptions, Error> {
    let mut opts = ClosureOptions::default();
    if let Some(t) = g.rank_tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Invalid(format!("rank tolerance {t} must be positive")));
        }
        opts.rank_tol = t;
    }
    Ok(opts)
}

fn read_set(path: &Path) -> Result<GeneratorSet, Error> {
    GeneratorSet::read(path).map_err(|e| match e {
        Error::Parse { line, message } => Error::Invalid(format!("{}: line {line}: {message}", path.display())),
        Error::Io(err) => Error::Invalid(format!("{}: {err}", path.display())),
        e => Error::Invalid(format!("{}: {e}", path.display())),
    })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Invalid(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}

fn json_only(g: &GlobalArgs, what: &str) -> Result<(), Error> {
    if g.format == Format::Csv {
        return Err(Error::Invalid(format!("{what} reports are JSON only")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ClosureReport {
    kind: &'static str,
    generator_count: usize,
    dim: usize,
    operator_dim: usize,
    /// Pauli strings for symbolic closures, matrix JSON otherwise.
    basis: serde_json::Value,
    provenance: Vec<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    saturated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cyclicity: Option<CyclicityReport>,
    tolerances: BTreeMap<String, f64>,
}

fn run_closure(g: &GlobalArgs, input: &Path, depth: Option<usize>) -> Result<Outcome, Error> {
    json_only(g, "closure")?;
    let opts = closure_options(g)?;
    let set = read_set(input)?;
    let basis = closure(&set, &opts)?;
    let (kind, json, saturated) = match &basis {
        LieBasis::Symbolic(b) => ("symbolic", serde_json::to_value(&b.strings)?, None),
        LieBasis::Dense(b) => (
            "dense",
            serde_json::to_value(b.elements.iter().map(|e| e.to_json()).collect::<Vec<_>>())?,
            Some(b.saturated),
        ),
    };
    let cyclicity = depth.map(|d| is_cyclic_set(&set, d)).transpose()?;
    let report = ClosureReport {
        kind,
        generator_count: set.len(),
        dim: basis.dim(),
        operator_dim: basis.operator_dim(),
        basis: json,
        provenance: basis.provenance().to_vec(),
        saturated,
        cyclicity,
        tolerances: BTreeMap::from([("rank_tol".to_string(), opts.rank_tol)]),
    };
    Ok(Outcome {
        status: EXIT_OK,
        output: to_json(&report)?,
    })
}

fn run_compose(
    g: &GlobalArgs,
    blocks: &[PathBuf],
    chi: Option<&Path>,
    powers: Option<usize>,
) -> Result<Outcome, Error> {
    json_only(g, "composition")?;
    let opts = closure_options(g)?;
    let sets: Vec<GeneratorSet> = blocks.iter().map(|p| read_set(p)).collect::<Result<_, _>>()?;
    let k = powers.unwrap_or(sets.len());
    let chi = match chi {
        Some(p) => read_matrix_json(&fs::read_to_string(p)?, Role::Hermitian)
            .map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?,
        None => default_chi(k)?,
    };
    let comp = match powers {
        Some(k) => {
            if sets.len() != 1 {
                return Err(Error::Invalid("--powers takes exactly one block".into()));
            }
            compose_powers(&sets[0], &chi, k)?
        }
        None => compose_projectors(&sets, &chi)?,
    };
    let report: CompositionReport = verify_composition(&sets, &comp, &opts)?;
    Ok(Outcome {
        status: status(report.verdict.passed()),
        output: to_json(&report)?,
    })
}

#[derive(Serialize)]
struct InvarianceRow {
    n: u32,
    variant: String,
    generator_count: usize,
    dim: usize,
    expected_dim: usize,
    full: bool,
}

fn run_invariance(g: &GlobalArgs, n_list: &[u32], variant: &str) -> Result<Outcome, Error> {
    let opts = closure_options(g)?;
    let variants = if variant.eq_ignore_ascii_case("both") {
        vec![SuNVariant::ZChain, SuNVariant::NearestNeighbor]
    } else {
        vec![variant.parse()?]
    };
    let mut rows = Vec::new();
    for &n in n_list {
        for &v in &variants {
            let set = build_sun_generators(n, v)?;
            let dim = closure(&set, &opts)?.dim();
            let expected_dim = 4usize.pow(n) - 1;
            rows.push(InvarianceRow {
                n,
                variant: serde_json::to_value(v)?.as_str().unwrap_or_default().to_string(),
                generator_count: set.len(),
                dim,
                expected_dim,
                full: dim == expected_dim,
            });
        }
    }
    let pass = rows.iter().all(|r| r.full);
    let output = match g.format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => to_json(&serde_json::json!({
            "rows": rows,
            "verdict": if pass { "pass" } else { "fail" },
            "tolerances": { "rank_tol": opts.rank_tol },
        }))?,
    };
    Ok(Outcome {
        status: status(pass),
        output,
    })
}

fn run_overlap(g: &GlobalArgs, p: &Path, q: &Path) -> Result<Outcome, Error> {
    json_only(g, "overlap")?;
    let closure = closure_options(g)?;
    let opts = OverlapOptions {
        rank_tol: closure.rank_tol,
        closure,
        ..OverlapOptions::default()
    };
    let report = analyze_overlap(&read_set(p)?, &read_set(q)?, &opts)?;
    Ok(Outcome {
        status: EXIT_OK,
        output: to_json(&report)?,
    })
}

#[derive(Serialize)]
struct ReduceOutput {
    seed: u64,
    decomposition: DecompositionSummary,
    #[serde(flatten)]
    report: ReductionReport,
}

fn write_set(path: &Path, set: &GeneratorSet) -> Result<(), Error> {
    let text = if set.is_symbolic() {
        set.to_text()?
    } else {
        to_json(&set.to_json()?)?
    };
    fs::write(path, text)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_reduce(
    g: &GlobalArgs,
    input: Option<&Path>,
    targets: &[usize],
    filter: Option<&Path>,
    modes: Option<usize>,
    oscillators: usize,
    d_trunc: usize,
    omegas: Option<&[f64]>,
    aprime_out: Option<&Path>,
) -> Result<Outcome, Error> {
    json_only(g, "reduction")?;
    if let Some(s) = modes {
        let report: OscillatorReport = oscillator_reduction(d_trunc, oscillators, s, omegas)?;
        if let Some(path) = aprime_out {
            let ops = fock_operators(d_trunc, oscillators)?;
            let w: Vec<f64> = omegas.map_or_else(|| (1..=s).map(|j| j as f64).collect(), <[f64]>::to_vec);
            write_set(path, &reduce(&ops.generator_set()?, &ops.number_filter(&w)?)?)?;
        }
        return Ok(Outcome {
            status: status(report.verdict.passed()),
            output: to_json(&report)?,
        });
    }
    let input = input.ok_or_else(|| Error::Invalid("--in is required".into()))?;
    let opts = closure_options(g)?;
    let set = read_set(input)?;
    let dec = ideal_decomposition(&closure(&set, &opts)?, g.seed)?;
    let f = match filter {
        Some(p) => {
            let op = read_matrix_json(&fs::read_to_string(p)?, Role::AntiHermitian)
                .map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
            FilterOperator::from_operator(&dec, &op, targets)?
        }
        None => build_filter(&dec, targets, g.seed)?,
    };
    let report = verify_reduction(&set, &f, &dec, targets, &opts)?;
    if let Some(path) = aprime_out {
        write_set(path, &reduce(&set, &f)?)?;
    }
    let out = ReduceOutput {
        seed: g.seed,
        decomposition: dec.summary(),
        report,
    };
    Ok(Outcome {
        status: status(out.report.verdict.passed()),
        output: to_json(&out)?,
    })
}

#[derive(Serialize)]
struct TrotterOutput {
    #[serde(flatten)]
    report: TrotterReport,
    dla_dims: Vec<DlaDims>,
}

#[derive(Serialize)]
struct TrotterRow {
    n: u32,
    alpha: f64,
    t: f64,
    err_apx: f64,
    err_apx_phase_min: f64,
    err_tfim: f64,
    bound: f64,
    scaled: Option<f64>,
}

fn trotter_csv(report: &TrotterReport) -> Result<String, Error> {
    let rows: Vec<TrotterRow> = report
        .points
        .iter()
        .map(|p| TrotterRow {
            n: p.n,
            alpha: p.alpha,
            t: p.t,
            err_apx: p.err_apx,
            err_apx_phase_min: p.err_apx_phase_min,
            err_tfim: p.err_tfim,
            bound: p.bound,
            scaled: p.scaled,
        })
        .collect();
    to_csv(&rows)
}

fn run_trotter(
    g: &GlobalArgs,
    n_list: &[u32],
    alpha_list: &[f64],
    t_list: Option<&[f64]>,
    hzz: f64,
    hx: f64,
    csv_path: Option<&Path>,
) -> Result<Outcome, Error> {
    let ts = t_list.map_or_else(|| geometric_grid(0.02, 0.32, 9), <[f64]>::to_vec);
    let base = IsingSpec::new(n_list.iter().copied().min().unwrap_or(0), hzz, 0.0, hx)?;
    let report = error_sweep(&base, n_list, alpha_list, &ts)?;
    let csv_text = trotter_csv(&report)?;
    if let Some(path) = csv_path {
        fs::write(path, &csv_text)?;
    }
    let output = match g.format {
        Format::Csv => csv_text,
        Format::Json => to_json(&TrotterOutput {
            dla_dims: dla_dims(n_list)?,
            report,
        })?,
    };
    Ok(Outcome {
        status: EXIT_OK,
        output,
    })
}

/// Dispatches a parsed configuration; errors are input errors.
pub fn run(config: &RunConfig) -> Result<Outcome, Error> {
    let g = &config.global;
    match &config.command {
        Command::Closure { input, cyclicity } => run_closure(g, input, *cyclicity),
        Command::Compose { blocks, chi, powers } => run_compose(g, blocks, chi.as_deref(), *powers),
        Command::Invariance { n_list, variant } => run_invariance(g, n_list, variant),
        Command::Overlap { p, q } => run_overlap(g, p, q),
        Command::Reduce {
            input,
            targets,
            filter,
            modes,
            oscillators,
            d_trunc,
            omegas,
            aprime_out,
        } => run_reduce(
            g,
            input.as_deref(),
            targets,
            filter.as_deref(),
            *modes,
            *oscillators,
            *d_trunc,
            omegas.as_deref(),
            aprime_out.as_deref(),
        ),
        Command::Trotter {
            n_list,
            alpha_list,
            t_list,
            hzz,
            hx,
            csv,
        } => run_trotter(g, n_list, alpha_list, t_list.as_deref(), *hzz, *hx, csv.as_deref()),
    }
}

/// Runs and writes the report; returns the process exit status.
pub fn execute(config: &RunConfig) -> u8 {
    match run(config).and_then(|o| {
        match &config.global.out {
            Some(path) => fs::write(path, &o.output)?,
            None => print!("{}", o.output),
        }
        Ok(o.status)
    }) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
