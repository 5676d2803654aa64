//! Compact X-state representation.
//!
//! An N-qubit X density matrix is stored as three vectors of length
//! `n = 2^(N-1)`: the upper diagonal entries `a`, the lower diagonal entries
//! `b` and the antidiagonal coherences `z`. Block `i` is the 2×2 sub-matrix
//! `[[a_i, z_i], [conj(z_i), b_i]]` formed by dense rows/columns `i` and
//! `d-1-i`, so `b[0]` is the bottom-right entry of the dense matrix.
//!
//! Dense rows are ordered `|1,1,…,1⟩, |1,1,…,0⟩, …, |0,0,…,0⟩`: row `r`
//! holds the ket whose bit label is `d-1-r`, with qubit 0 as the most
//! significant bit.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest qubit count with a notion of genuine multipartite entanglement.
pub const MIN_QUBITS: u32 = 2;

/// Largest qubit count accepted by the compact representation
/// (vectors of length 2^23).
pub const MAX_COMPACT_QUBITS: u32 = 24;

/// Default largest qubit count for which a dense matrix is materialised.
pub const DEFAULT_DENSE_CAP: u32 = 12;

/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "XMEMS_DENSE_CAP";

/// Default tolerance for the compact physicality conditions.
pub const VALIDATION_TOLERANCE: f64 = 1e-12;

/// Dense cap in effect: `XMEMS_DENSE_CAP` if set and parseable, otherwise
/// [`DEFAULT_DENSE_CAP`].
pub fn dense_cap() -> u32 {
    std::env::var(DENSE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

/// Number of 2×2 blocks for `n_qubits`.
pub fn block_count(n_qubits: u32) -> usize {
    1usize << (n_qubits - 1)
}

pub(crate) fn check_qubits(n_qubits: u32) -> Result<()> {
    if n_qubits < MIN_QUBITS {
        return Err(Error::Domain(format!(
            "need at least {MIN_QUBITS} qubits, got {n_qubits}"
        )));
    }
    if n_qubits > MAX_COMPACT_QUBITS {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits exceeds the compact limit of {MAX_COMPACT_QUBITS}"
        )));
    }
    Ok(())
}

/// An N-qubit density matrix with X structure.
#[derive(Debug, Clone, PartialEq)]
pub struct XState {
    n_qubits: u32,
    a: Vec<f64>,
    b: Vec<f64>,
    z: Vec<Complex64>,
}

impl XState {
    /// Builds a state after structural checks only (lengths, finiteness,
    /// qubit count). Physicality is checked by [`XState::validate`].
    pub fn new(n_qubits: u32, a: Vec<f64>, b: Vec<f64>, z: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        let n = block_count(n_qubits);
        for (name, len) in [("a", a.len()), ("b", b.len()), ("z", z.len())] {
            if len != n {
                return Err(Error::Structural(format!(
                    "vector `{name}` has length {len}, expected 2^(N-1) = {n} for N = {n_qubits}"
                )));
            }
        }
        let finite = a.iter().chain(&b).all(|v| v.is_finite())
            && z.iter().all(|c| c.re.is_finite() && c.im.is_finite());
        if !finite {
            return Err(Error::Structural("non-finite matrix entry".into()));
        }
        Ok(Self { n_qubits, a, b, z })
    }

    /// Like [`XState::new`] with real coherences.
    pub fn from_real(n_qubits: u32, a: Vec<f64>, b: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        let z = z.into_iter().map(|re| Complex64::new(re, 0.0)).collect();
        Self::new(n_qubits, a, b, z)
    }

    /// The pure GHZ state `(|1…1⟩ + |0…0⟩)/√2`.
    pub fn ghz(n_qubits: u32) -> Result<Self> {
        check_qubits(n_qubits)?;
        let n = block_count(n_qubits);
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        a[0] = 0.5;
        b[0] = 0.5;
        z[0] = Complex64::new(0.5, 0.0);
        Ok(Self { n_qubits, a, b, z })
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(n_qubits: u32) -> Result<Self> {
        check_qubits(n_qubits)?;
        let n = block_count(n_qubits);
        let p = 1.0 / (2 * n) as f64;
        Ok(Self {
            n_qubits,
            a: vec![p; n],
            b: vec![p; n],
            z: vec![Complex64::new(0.0, 0.0); n],
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Number of blocks, `n = 2^(N-1)`.
    pub fn blocks(&self) -> usize {
        self.a.len()
    }

    /// Hilbert space dimension, `d = 2^N`.
    pub fn dim(&self) -> usize {
        2 * self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    /// `Σ_i (a_i + b_i)`, summed block by block in index order.
    pub fn trace(&self) -> f64 {
        block_trace(&self.a, &self.b)
    }

    /// `sqrt(a_i b_i)`, the largest coherence block `i` can carry.
    /// Products that are negative by rounding are clamped to zero.
    pub fn coherence_ceiling(&self, block: usize) -> f64 {
        (self.a[block] * self.b[block]).max(0.0).sqrt()
    }

    /// Checks nonnegativity, unit trace and `|z_i| ≤ sqrt(a_i b_i)`, all
    /// within `tolerance`. Together these are equivalent to the dense matrix
    /// being a density matrix.
    pub fn validate(&self, tolerance: f64) -> Result<ValidationReport> {
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(Error::Domain(format!(
                "tolerance must be nonnegative, got {tolerance}"
            )));
        }
        let mut violations = Vec::new();
        for (block, (&a, &b)) in self.a.iter().zip(&self.b).enumerate() {
            if a < -tolerance {
                violations.push(Violation::NegativeDiagonal {
                    side: Side::Upper,
                    block,
                    value: a,
                });
            }
            if b < -tolerance {
                violations.push(Violation::NegativeDiagonal {
                    side: Side::Lower,
                    block,
                    value: b,
                });
            }
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > tolerance {
            violations.push(Violation::Trace { trace });
        }
        for (block, z) in self.z.iter().enumerate() {
            let excess = z.norm() - self.coherence_ceiling(block);
            if excess > tolerance {
                violations.push(Violation::Coherence { block, excess });
            }
        }
        Ok(ValidationReport { violations })
    }

    /// Fails with [`Error::InvalidState`] unless the state validates at
    /// [`VALIDATION_TOLERANCE`].
    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate(VALIDATION_TOLERANCE)?;
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidState(report.to_string()))
        }
    }

    /// Dense diagonal entry at row `row`.
    pub fn diagonal_entry(&self, row: usize) -> f64 {
        let n = self.blocks();
        if row < n {
            self.a[row]
        } else {
            self.b[2 * n - 1 - row]
        }
    }

    /// Expands to a `2^N × 2^N` matrix, honouring the dense cap from the
    /// environment.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        self.to_dense_with_cap(dense_cap())
    }

    pub fn to_dense_with_cap(&self, cap: u32) -> Result<DenseMatrix> {
        if self.n_qubits > cap {
            return Err(Error::Capacity(format!(
                "{} qubits exceeds the dense cap of {cap}",
                self.n_qubits
            )));
        }
        let d = self.dim();
        let n = self.blocks();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for i in 0..n {
            let j = d - 1 - i;
            m[(i, i)] = Complex64::new(self.a[i], 0.0);
            m[(j, j)] = Complex64::new(self.b[i], 0.0);
            m[(i, j)] = self.z[i];
            m[(j, i)] = self.z[i].conj();
        }
        Ok(DenseMatrix(m))
    }

    /// Diagonal of the `(N-1)`-qubit state left after tracing out `qubit`.
    ///
    /// Every antidiagonal pair `(r, d-1-r)` differs in all bits, including
    /// the traced one, so no coherence survives: the reduced state is
    /// diagonal and only its diagonal is returned, in the same all-ones-first
    /// ordering.
    pub fn partial_trace_single_qubit(&self, qubit: u32) -> Result<Vec<f64>> {
        if qubit >= self.n_qubits {
            return Err(Error::Structural(format!(
                "qubit index {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        let bit = self.n_qubits - 1 - qubit;
        let d = self.dim();
        let mut reduced = vec![0.0; d / 2];
        for row in 0..d {
            debug_assert_ne!((row >> bit) & 1, ((d - 1 - row) >> bit) & 1);
            reduced[remove_bit(row, bit)] += self.diagonal_entry(row);
        }
        Ok(reduced)
    }

    /// Exchanges blocks `i` and `j`. This is a relabelling of basis pairs and
    /// leaves every measure in this crate unchanged.
    pub fn swap_blocks(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.b.swap(i, j);
        self.z.swap(i, j);
    }

    /// Multiplies `z[block]` by `e^{i·phase}`.
    pub fn with_phase(mut self, block: usize, phase: f64) -> Self {
        self.z[block] *= Complex64::from_polar(1.0, phase);
        self
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Self, StateFileError> {
        let file: StateFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&StateFile::from(self)).expect("state serialises")
    }
}

/// `Σ_i (a_i + b_i)` in the fixed summation order used by validation.
pub(crate) fn block_trace(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (a, b)| acc + (a + b))
}

/// Index `i` with bit position `bit` (counted from the least significant
/// end) deleted.
pub(crate) fn remove_bit(i: usize, bit: u32) -> usize {
    let low = i & ((1usize << bit) - 1);
    let high = i >> (bit + 1);
    (high << bit) | low
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// One failed physicality condition. Blocks are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    NegativeDiagonal { side: Side, block: usize, value: f64 },
    Trace { trace: f64 },
    Coherence { block: usize, excess: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeDiagonal { side, block, value } => {
                let name = match side {
                    Side::Upper => 'a',
                    Side::Lower => 'b',
                };
                write!(f, "{name}[{block}] = {value:e} is negative")
            }
            Violation::Trace { trace } => {
                write!(f, "trace is {trace}, off by {:e}", trace - 1.0)
            }
            Violation::Coherence { block, excess } => {
                write!(
                    f,
                    "|z[{block}]| exceeds sqrt(a[{block}] b[{block}]) by {excess:e}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A full `d × d` complex matrix. Only used on the verification side.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix(pub DMatrix<Complex64>);

impl DenseMatrix {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

/// On-disk JSON state: `{"n_qubits": N, "a": [...], "b": [...], "z": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n_qubits: u32,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub z: Vec<[f64; 2]>,
}

#[derive(Debug, thiserror::Error)]
pub enum StateFileError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Shape(#[from] Error),
}

impl TryFrom<StateFile> for XState {
    type Error = StateFileError;

    fn try_from(file: StateFile) -> std::result::Result<Self, StateFileError> {
        let z = file.z.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(XState::new(file.n_qubits, file.a, file.b, z)?)
    }
}

impl From<&XState> for StateFile {
    fn from(s: &XState) -> Self {
        StateFile {
            n_qubits: s.n_qubits,
            a: s.a.clone(),
            b: s.b.clone(),
            z: s.z.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}
