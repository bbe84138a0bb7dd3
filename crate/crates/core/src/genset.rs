//! Generator sets and their text and JSON file formats.
//!
//! Text format:
//!
//! ```text
//! # comment
//! qubits 2
//! gen A1 : 2.0 ZZ + -1.0 XX + -1.0 YY
//! ```
//!
//! Each generator line denotes the anti-Hermitian operator `i·Σ c_P P`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dense::{DenseOperator, MatrixJson, Role};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

/// Symbolic or dense generator payload.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorOp {
    Pauli(PauliSum),
    Dense(DenseOperator),
}

impl GeneratorOp {
    /// Anti-Hermitian dense matrix of the generator.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        match self {
            GeneratorOp::Pauli(s) => s.to_dense(),
            GeneratorOp::Dense(d) => Ok(d.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub op: GeneratorOp,
}

/// Ordered, named list of anti-Hermitian generators on a common space.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    dim: usize,
    qubits: Option<u32>,
    generators: Vec<Generator>,
}

fn qubits_of_dim(d: usize) -> Option<u32> {
    (d.is_power_of_two() && d > 1).then(|| d.trailing_zeros())
}

fn check_unique(names: impl Iterator<Item = impl AsRef<str>>) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_ref().to_string()) {
            return Err(Error::invalid(format!("duplicate generator name '{}'", n.as_ref())));
        }
    }
    Ok(())
}

impl GeneratorSet {
    /// Symbolic set on `n` qubits.
    pub fn pauli(n: u32, generators: Vec<(String, PauliSum)>) -> Result<Self> {
        check_unique(generators.iter().map(|(name, _)| name))?;
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::invalid(format!("qubit count {n} out of range")));
        }
        for (name, s) in &generators {
            if s.num_qubits() != n {
                return Err(Error::RegisterMismatch {
                    left: n,
                    right: s.num_qubits(),
                });
            }
            if s.is_empty() {
                return Err(Error::invalid(format!("generator '{name}' is zero")));
            }
        }
        let dim = if n < usize::BITS { 1usize << n } else { 0 };
        Ok(Self {
            dim,
            qubits: Some(n),
            generators: generators
                .into_iter()
                .map(|(name, s)| Generator {
                    name,
                    op: GeneratorOp::Pauli(s),
                })
                .collect(),
        })
    }

    /// Symbolic set with names `g1, g2, …`.
    pub fn from_pauli_sums(n: u32, sums: Vec<PauliSum>) -> Result<Self> {
        Self::pauli(
            n,
            sums.into_iter()
                .enumerate()
                .map(|(k, s)| (format!("g{}", k + 1), s))
                .collect(),
        )
    }

    /// Unit-coefficient strings, e.g. `["XI", "YI"]`.
    pub fn from_strings(strings: &[&str]) -> Result<Self> {
        let parsed: Vec<PauliString> = strings
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?;
        let n = parsed
            .first()
            .map(|p| p.num_qubits())
            .ok_or_else(|| Error::invalid("no generators"))?;
        Self::from_pauli_sums(n, parsed.into_iter().map(|p| PauliSum::from_string(p, 1.0)).collect())
    }

    /// Dense set; every operator must be anti-Hermitian.
    pub fn dense(generators: Vec<(String, DenseOperator)>) -> Result<Self> {
        check_unique(generators.iter().map(|(name, _)| name))?;
        let dim = generators
            .first()
            .map(|(_, g)| g.dim())
            .ok_or_else(|| Error::invalid("no generators"))?;
        let mut checked = Vec::with_capacity(generators.len());
        for (name, g) in generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            let g = g.with_role(Role::AntiHermitian)?;
            checked.push(Generator {
                name,
                op: GeneratorOp::Dense(g),
            });
        }
        Ok(Self {
            dim,
            qubits: qubits_of_dim(dim),
            generators: checked,
        })
    }

    /// Dense set with names `g1, g2, …`.
    pub fn from_dense_ops(ops: Vec<DenseOperator>) -> Result<Self> {
        Self::dense(
            ops.into_iter()
                .enumerate()
                .map(|(k, g)| (format!("g{}", k + 1), g))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qubits(&self) -> Option<u32> {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn is_symbolic(&self) -> bool {
        self.generators
            .iter()
            .all(|g| matches!(g.op, GeneratorOp::Pauli(_)))
    }

    /// The Pauli sums when every generator is symbolic.
    pub fn pauli_sums(&self) -> Option<Vec<&PauliSum>> {
        self.generators
            .iter()
            .map(|g| match &g.op {
                GeneratorOp::Pauli(s) => Some(s),
                GeneratorOp::Dense(_) => None,
            })
            .collect()
    }

    /// The strings when every generator is a single scaled Pauli string.
    pub fn pauli_strings(&self) -> Option<Vec<PauliString>> {
        self.pauli_sums()?
            .into_iter()
            .map(|s| s.as_single_string().map(|(p, _)| p))
            .collect()
    }

    /// Dense anti-Hermitian images of all generators.
    pub fn dense_ops(&self) -> Result<Vec<DenseOperator>> {
        self.generators.iter().map(|g| g.op.to_dense()).collect()
    }

    /// Copy with every generator converted to dense form.
    pub fn to_dense_set(&self) -> Result<Self> {
        Self::dense(
            self.generators
                .iter()
                .map(|g| Ok((g.name.clone(), g.op.to_dense()?)))
                .collect::<Result<_>>()?,
        )
    }

    /// Concatenation; clashing names in `other` get a `#k` suffix.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut names: HashSet<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let mut generators = self.generators.clone();
        for g in &other.generators {
            let mut name = g.name.clone();
            let mut k = 2;
            while names.contains(&name) {
                name = format!("{}#{k}", g.name);
                k += 1;
            }
            names.insert(name.clone());
            generators.push(Generator {
                name,
                op: g.op.clone(),
            });
        }
        let symbolic = self.is_symbolic() && other.is_symbolic();
        let mut out = Self {
            dim: self.dim,
            qubits: self.qubits,
            generators,
        };
        if !symbolic {
            out = out.to_dense_set()?;
        }
        Ok(out)
    }

    /// Subset by generator index.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let generators = indices
            .iter()
            .map(|&k| {
                self.generators.get(k).cloned().ok_or_else(|| {
                    Error::invalid(format!("generator index {k} out of range"))
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            dim: self.dim,
            qubits: self.qubits,
            generators,
        })
    }

    /// Parses the text format.
    pub fn parse(text: &str) -> Result<Self> {
        parse_text(text)
    }

    /// Serializes a symbolic set to the text format.
    pub fn to_text(&self) -> Result<String> {
        let sums = self
            .pauli_sums()
            .ok_or_else(|| Error::invalid("only symbolic generator sets have a text form"))?;
        let mut out = String::new();
        writeln!(out, "qubits {}", self.qubits.unwrap_or(0)).unwrap();
        for (g, s) in self.generators.iter().zip(sums) {
            let terms: Vec<String> = s.terms().map(|(p, c)| format!("{c:?} {p}")).collect();
            writeln!(out, "gen {} : {}", g.name, terms.join(" + ")).unwrap();
        }
        Ok(out)
    }

    /// Dense JSON form: one matrix object per generator, with names.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let entries: Vec<NamedMatrix> = self
            .generators
            .iter()
            .map(|g| {
                Ok(NamedMatrix {
                    name: Some(g.name.clone()),
                    matrix: g.op.to_dense()?.to_json(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(serde_json::to_value(entries)?)
    }

    /// Parses dense generators from a single matrix object or a list of them
    /// (optionally carrying a `name` field).
    pub fn parse_json(text: &str) -> Result<Self> {
        let entries = parse_matrix_entries(text)?;
        if entries.is_empty() {
            return Err(Error::invalid("no generators"));
        }
        Self::dense(
            entries
                .into_iter()
                .enumerate()
                .map(|(k, e)| {
                    let name = e.name.unwrap_or_else(|| format!("g{}", k + 1));
                    let op = DenseOperator::from_json(&e.matrix, Role::AntiHermitian)
                        .map_err(|err| Error::invalid(format!("generator '{name}': {err}")))?;
                    Ok((name, op))
                })
                .collect::<Result<_>>()?,
        )
    }

    /// Reads a generator file: JSON when the content starts with `{` or `[`,
    /// the text format otherwise.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let first = text.trim_start().chars().next();
        if matches!(first, Some('{') | Some('[')) {
            Self::parse_json(&text)
        } else {
            Self::parse(&text)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NamedMatrix {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(flatten)]
    matrix: MatrixJson,
}

fn parse_matrix_entries(text: &str) -> Result<Vec<NamedMatrix>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(|v| Ok(serde_json::from_value(v)?))
            .collect(),
        v => Ok(vec![serde_json::from_value(v)?]),
    }
}

/// Reads one matrix (e.g. a χ operator) from matrix JSON.
pub fn read_matrix_json(text: &str, role: Role) -> Result<DenseOperator> {
    let mut entries = parse_matrix_entries(text)?;
    if entries.len() != 1 {
        return Err(Error::invalid(format!(
            "expected one matrix, found {}",
            entries.len()
        )));
    }
    DenseOperator::from_json(&entries.remove(0).matrix, role)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_coeff(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(parse_err(line, format!("non-finite coefficient '{tok}'"))),
        Err(_) if tok.contains(['i', 'j']) => {
            Err(parse_err(line, format!("non-real coefficient '{tok}'")))
        }
        Err(_) => Err(parse_err(line, format!("bad coefficient '{tok}'"))),
    }
}

fn parse_terms(body: &str, n: u32, line: usize) -> Result<PauliSum> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(parse_err(line, "generator has no terms"));
    }
    let mut terms = Vec::new();
    let mut k = 0;
    let mut sign = 1.0;
    loop {
        let (Some(c), Some(s)) = (tokens.get(k), tokens.get(k + 1)) else {
            return Err(parse_err(line, "expected '<coeff> <string>'"));
        };
        let coeff = parse_coeff(c, line)? * sign;
        if s.contains(['i', 'j']) && s.chars().all(|ch| "ij".contains(ch)) {
            return Err(parse_err(line, format!("non-real coefficient '{c} {s}'")));
        }
        let p: PauliString = s
            .parse()
            .map_err(|e: Error| parse_err(line, e.to_string()))?;
        if p.num_qubits() != n {
            return Err(parse_err(
                line,
                format!(
                    "Pauli string '{s}' has {} letters but the register has {n} qubits",
                    p.num_qubits()
                ),
            ));
        }
        terms.push((p, coeff));
        k += 2;
        match tokens.get(k) {
            None => break,
            Some(&"+") => sign = 1.0,
            Some(&"-") => sign = -1.0,
            Some(t) => return Err(parse_err(line, format!("expected '+' or '-', found '{t}'"))),
        }
        k += 1;
    }
    let sum = PauliSum::from_terms(n, terms).map_err(|e| parse_err(line, e.to_string()))?;
    if sum.is_empty() {
        return Err(parse_err(line, "generator is zero"));
    }
    Ok(sum)
}

fn parse_text(text: &str) -> Result<GeneratorSet> {
    let mut qubits: Option<u32> = None;
    let mut gens: Vec<(String, PauliSum)> = Vec::new();
    let mut names = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.splitn(2, char::is_whitespace);
        let keyword = parts.next().unwrap_or("");
        let rest = parts.next().unwrap_or("").trim();
        match keyword {
            "qubits" => {
                if qubits.is_some() {
                    return Err(parse_err(line, "repeated 'qubits' header"));
                }
                let n: u32 = rest
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad qubit count '{rest}'")))?;
                if n == 0 || n > crate::pauli::MAX_QUBITS {
                    return Err(parse_err(line, format!("qubit count {n} out of range")));
                }
                qubits = Some(n);
            }
            "gen" => {
                let n = qubits.ok_or_else(|| parse_err(line, "'gen' before 'qubits' header"))?;
                let (name, body) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(line, "expected 'gen <name> : <terms>'"))?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(parse_err(line, format!("bad generator name '{name}'")));
                }
                if !names.insert(name.to_string()) {
                    return Err(parse_err(line, format!("duplicate generator name '{name}'")));
                }
                gens.push((name.to_string(), parse_terms(body, n, line)?));
            }
            other => return Err(parse_err(line, format!("unknown keyword '{other}'"))),
        }
    }
    let n = qubits.ok_or_else(|| parse_err(1, "no generators"))?;
    if gens.is_empty() {
        return Err(parse_err(1, "no generators"));
    }
    GeneratorSet::pauli(n, gens)
}
