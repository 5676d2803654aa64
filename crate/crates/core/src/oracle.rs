//! Brute-force cross-checks for the closed forms.
//!
//! Everything here works on dense matrices or on explicit grids and avoids
//! the block structure the analytic code relies on: eigenvalues come from a
//! general Hermitian eigensolver, purities from an explicit matrix product,
//! partial traces from index arithmetic on the full matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{gm_concurrence, linear_entropy, purity};
use crate::mems::{bar_transform, boundary_entropy, f_value, BoundaryCoefficients};
use crate::sampling::{sample_xstate, SamplerConfig, SweepRecord, SweepSummary};
use crate::xstate::{block_count, check_qubits, dense_cap, DenseMatrix, VALIDATION_TOLERANCE};

/// Hermiticity defect above which a matrix is rejected.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Slack on the smallest eigenvalue in PSD checks.
pub const EIGEN_TOLERANCE: f64 = 1e-10;

/// Agreement required between compact and dense purity/entropy.
pub const PURITY_TOLERANCE: f64 = 1e-12;

/// Agreement required between the closed-form and Wootters concurrence.
pub const WOOTTERS_TOLERANCE: f64 = 1e-9;

/// Largest surviving off-diagonal after a single-qubit partial trace.
pub const PARTIAL_TRACE_TOLERANCE: f64 = 1e-12;

/// Concurrence drift allowed across the bar transform.
pub const BAR_TOLERANCE: f64 = 1e-12;

/// Outcome of one comparison between an analytic value and an oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub check_name: String,
    pub analytic_value: f64,
    pub oracle_value: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl OracleReport {
    /// Report that passes iff `|analytic - oracle| ≤ tolerance`.
    pub fn compare(name: impl Into<String>, analytic: f64, oracle: f64, tolerance: f64) -> Self {
        let abs_diff = (analytic - oracle).abs();
        Self {
            check_name: name.into(),
            analytic_value: analytic,
            oracle_value: oracle,
            abs_diff,
            tolerance,
            passed: abs_diff <= tolerance,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

fn require_hermitian(dense: &DenseMatrix) -> Result<()> {
    let defect = dense.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE {
        return Err(Error::Structural(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(dense: &DenseMatrix) -> Result<Vec<f64>> {
    require_hermitian(dense)?;
    let mut ev: Vec<f64> = dense
        .as_matrix()
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

/// Positive semidefiniteness by eigenvalues: `min λ ≥ -tolerance`.
pub fn psd_check(dense: &DenseMatrix, tolerance: f64) -> Result<PsdCheck> {
    let ev = hermitian_eigenvalues(dense)?;
    let min_eigenvalue = ev.first().copied().unwrap_or(0.0);
    Ok(PsdCheck {
        psd: min_eigenvalue >= -tolerance,
        min_eigenvalue,
    })
}

/// `Tr(ρ·ρ)` from the full matrix product.
pub fn dense_purity(dense: &DenseMatrix) -> f64 {
    let m = dense.as_matrix();
    (m * m).trace().re
}

pub fn dense_linear_entropy(dense: &DenseMatrix) -> f64 {
    let d = dense.dim() as f64;
    d / (d - 1.0) * (1.0 - dense_purity(dense))
}

fn insert_bit(i: usize, bit: u32, value: usize) -> usize {
    let low = i & ((1usize << bit) - 1);
    let high = i >> bit;
    (high << (bit + 1)) | (value << bit) | low
}

/// Reduced state after tracing out `qubit` (qubit 0 is the most significant
/// bit of the ket label).
pub fn dense_partial_trace(dense: &DenseMatrix, qubit: u32) -> Result<DenseMatrix> {
    let d = dense.dim();
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::Structural(format!("dimension {d} is not a power of two")));
    }
    let n_qubits = d.trailing_zeros();
    if qubit >= n_qubits {
        return Err(Error::Structural(format!(
            "qubit index {qubit} out of range for {n_qubits} qubits"
        )));
    }
    let bit = n_qubits - 1 - qubit;
    let half = d / 2;
    let m = dense.as_matrix();
    let reduced = DMatrix::from_fn(half, half, |r, c| {
        (0..2)
            .map(|v| m[(insert_bit(r, bit, v), insert_bit(c, bit, v))])
            .sum::<Complex64>()
    });
    Ok(DenseMatrix(reduced))
}

/// Largest off-diagonal magnitude.
pub fn max_offdiagonal(dense: &DenseMatrix) -> f64 {
    let d = dense.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                worst = worst.max(dense.entry(i, j).norm());
            }
        }
    }
    worst
}

fn hermitian_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = m.clone().symmetric_eigen();
    let roots = eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&roots) * v.adjoint()
}

/// Two-qubit concurrence `max(0, λ1 - λ2 - λ3 - λ4)`, where the λ are the
/// decreasing square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`,
/// obtained here as eigenvalues of the Hermitian `√ρ ρ̃ √ρ`.
pub fn wootters_concurrence(dense: &DenseMatrix) -> Result<f64> {
    if dense.dim() != 4 {
        return Err(Error::Structural(format!(
            "Wootters concurrence needs a 4x4 matrix, got {0}x{0}",
            dense.dim()
        )));
    }
    require_hermitian(dense)?;
    let rho = dense.as_matrix();
    let one = Complex64::new(1.0, 0.0);
    let mut flip = DMatrix::<Complex64>::zeros(4, 4);
    flip[(0, 3)] = -one;
    flip[(1, 2)] = one;
    flip[(2, 1)] = one;
    flip[(3, 0)] = -one;
    let tilde = &flip * rho.map(|c| c.conj()) * &flip;
    let root = hermitian_sqrt(rho);
    let mut r = &root * tilde * &root;
    // Symmetrise away rounding so the Hermitian solver sees a Hermitian input.
    r = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
    let mut lambdas: Vec<f64> = r
        .symmetric_eigenvalues()
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|x, y| y.total_cmp(x));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Linear entropy from explicit diagonal entries and coherence moduli.
fn entropy_from_entries(dim: usize, diagonal: &[f64], coherences: &[f64]) -> f64 {
    let p: f64 =
        diagonal.iter().map(|x| x * x).sum::<f64>() + coherences.iter().map(|c| 2.0 * c * c).sum::<f64>();
    let d = dim as f64;
    d / (d - 1.0) * (1.0 - p)
}

/// Largest qubit count for which [`mems_grid_verify`] also searches unequal
/// populations.
pub const MULTI_GRID_MAX_QUBITS: u32 = 3;

/// Checks the closed-form maximiser of the entropy at fixed `|γ|`.
///
/// First, on small systems, a coarse lattice over all nonnegative
/// populations `(a_1, b_1, a_2, …, a_n)` compatible with coherence `|γ|`
/// must never beat the analytic maximum. Then the equal-population family is
/// scanned on `grid_points` evenly spaced values of `t = a_1 = b_1` in
/// `[|γ|, 1/2]`; its argmax must sit within one step of `f(γ)` and its
/// maximum within the quadratic's loss over half a step.
pub fn mems_grid_verify(n_qubits: u32, gamma_abs: f64, grid_points: usize) -> Result<OracleReport> {
    check_qubits(n_qubits)?;
    if grid_points < 100 {
        return Err(Error::Domain(format!(
            "need at least 100 grid points, got {grid_points}"
        )));
    }
    let analytic = boundary_entropy(n_qubits, gamma_abs)?;
    let gamma_abs = gamma_abs.min(0.5);
    let n = block_count(n_qubits);
    let dim = 2 * n;

    let lo = gamma_abs;
    let step = (0.5 - lo) / (grid_points - 1) as f64;
    let mut diagonal = vec![0.0; dim];
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for k in 0..grid_points {
        let t = if k + 1 == grid_points {
            0.5
        } else {
            lo + k as f64 * step
        };
        let y = ((1.0 - 2.0 * t) / (n - 1) as f64).max(0.0);
        diagonal[0] = t;
        diagonal[dim - 1] = t;
        diagonal[1..n].iter_mut().for_each(|v| *v = y);
        let s = entropy_from_entries(dim, &diagonal, &[gamma_abs]);
        if s > best.1 {
            best = (t, s);
        }
    }
    let (grid_argmax, grid_max) = best;
    let analytic_argmax = f_value(n_qubits, gamma_abs);

    let coeffs = BoundaryCoefficients::new(n_qubits, gamma_abs)?;
    let resolution = coeffs.prefactor() * coeffs.a.abs() * step * step / 4.0 + 1e-12;
    let argmax_ok = (grid_argmax - analytic_argmax).abs() <= step + 1e-15;
    let value_ok = grid_max <= analytic + 1e-12 && analytic - grid_max <= resolution;

    let mut detail = format!(
        "N={n_qubits} |gamma|={gamma_abs} grid_argmax={grid_argmax} analytic_argmax={analytic_argmax} step={step:e}"
    );
    let mut multi_ok = true;
    if n_qubits <= MULTI_GRID_MAX_QUBITS {
        let lattice = if n == 2 { 201 } else { 21 };
        let multi_max = population_lattice_max(n, gamma_abs, lattice);
        multi_ok = multi_max <= analytic + 1e-12;
        detail.push_str(&format!(" lattice={lattice} lattice_max={multi_max}"));
    }

    let mut report = OracleReport::compare("mems_grid", analytic, grid_max, resolution).with_detail(detail);
    report.passed = argmax_ok && value_ok && multi_ok;
    Ok(report)
}

/// Largest entropy over the lattice `{k/(m-1)}` of populations
/// `a_1, b_1, a_2, …, a_{n-1}` (with `a_n` fixed by the trace) subject to
/// `a_1 b_1 ≥ γ²`, all lower entries beyond `b_1` zero, coherence `γ`.
fn population_lattice_max(n: usize, gamma_abs: f64, m: usize) -> f64 {
    let dim = 2 * n;
    let free = n; // a_1, b_1, a_2..a_{n-1}
    let step = 1.0 / (m - 1) as f64;
    let mut idx = vec![0usize; free];
    let mut best = f64::NEG_INFINITY;
    let mut diagonal = vec![0.0; dim];
    loop {
        let vals: Vec<f64> = idx.iter().map(|&k| k as f64 * step).collect();
        let used: f64 = vals.iter().sum();
        let last = 1.0 - used;
        let (p, q) = (vals[0], vals[1]);
        if last >= -1e-15 && p * q >= gamma_abs * gamma_abs - 1e-15 {
            diagonal[0] = p;
            diagonal[dim - 1] = q;
            for (i, v) in vals[2..].iter().enumerate() {
                diagonal[i + 1] = *v;
            }
            diagonal[n - 1] = last.max(0.0);
            best = best.max(entropy_from_entries(dim, &diagonal, &[gamma_abs]));
        }
        // odometer
        let mut k = 0;
        loop {
            if k == free {
                return best;
            }
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Runs every oracle check over `config.count` sampled states and returns
/// one report per check (worst case over the corpus), followed by the
/// optimality checks on a 21-point `|γ|` grid.
pub fn run_suite(config: &SamplerConfig) -> Result<Vec<OracleReport>> {
    let n_qubits = config.n_qubits;
    let cap = dense_cap();
    if n_qubits > cap {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits exceeds the dense cap of {cap}"
        )));
    }

    let mut purity_worst = Worst::default();
    let mut entropy_worst = Worst::default();
    let mut dense_shape_worst: f64 = 0.0;
    let mut validity = (0u64, 0u64, 0u64); // compact ok, psd ok, disagreements
    let mut min_eig: f64 = f64::INFINITY;
    let mut trace_off: f64 = 0.0;
    let mut trace_diag_worst: f64 = 0.0;
    let mut wootters_worst = Worst::default();
    let mut bar_c_worst = Worst::default();
    let mut bar_min_gain = f64::INFINITY;
    let mut entangled = 0u64;
    let mut summary = SweepSummary::new(n_qubits)?;

    for k in 0..config.count {
        let s = sample_xstate(config, k);
        let dense = s.to_dense_with_cap(cap)?;
        purity_worst.push(purity(&s), dense_purity(&dense));
        entropy_worst.push(linear_entropy(&s), dense_linear_entropy(&dense));
        dense_shape_worst = dense_shape_worst
            .max(dense.hermiticity_defect())
            .max((dense.trace() - Complex64::new(1.0, 0.0)).norm());

        let compact_ok = s.validate(VALIDATION_TOLERANCE)?.is_ok();
        let psd = psd_check(&dense, EIGEN_TOLERANCE)?;
        min_eig = min_eig.min(psd.min_eigenvalue);
        validity.0 += compact_ok as u64;
        validity.1 += psd.psd as u64;
        validity.2 += (compact_ok != psd.psd) as u64;

        for q in 0..n_qubits {
            let reduced = dense_partial_trace(&dense, q)?;
            trace_off = trace_off.max(max_offdiagonal(&reduced));
            let compact = s.partial_trace_single_qubit(q)?;
            for (i, c) in compact.iter().enumerate() {
                trace_diag_worst = trace_diag_worst.max((reduced.entry(i, i).re - c).abs());
            }
        }

        let c = gm_concurrence(&s);
        if n_qubits == 2 {
            wootters_worst.push(c.value, wootters_concurrence(&dense)?);
        }
        if c.is_entangled() {
            entangled += 1;
            let bar = bar_transform(&s)?.state;
            bar_c_worst.push(c.value, gm_concurrence(&bar).value);
            bar_min_gain = bar_min_gain.min(linear_entropy(&bar) - linear_entropy(&s));
        }
        summary.push(&SweepRecord {
            sample_index: k,
            entropy: linear_entropy(&s),
            concurrence: c.value,
        });
    }

    let mut reports = vec![
        purity_worst.report("purity", PURITY_TOLERANCE),
        entropy_worst.report("linear_entropy", PURITY_TOLERANCE),
        OracleReport::compare(
            "dense_hermitian_unit_trace",
            0.0,
            dense_shape_worst,
            PURITY_TOLERANCE,
        ),
        OracleReport::compare("validity_vs_psd", validity.0 as f64, validity.1 as f64, 0.0)
            .with_detail(format!("disagreements={} min_eigenvalue={min_eig:e}", validity.2)),
        OracleReport::compare(
            "partial_trace_offdiagonal",
            0.0,
            trace_off,
            PARTIAL_TRACE_TOLERANCE,
        ),
        OracleReport::compare(
            "partial_trace_diagonal",
            0.0,
            trace_diag_worst,
            PARTIAL_TRACE_TOLERANCE,
        ),
    ];
    if validity.2 != 0 {
        reports[3].passed = false;
    }
    if n_qubits == 2 {
        reports.push(wootters_worst.report("wootters_concurrence", WOOTTERS_TOLERANCE));
    }
    reports.push(
        bar_c_worst
            .report("bar_concurrence_preserved", BAR_TOLERANCE)
            .with_detail(format!("entangled={entangled}")),
    );
    let gain = if entangled == 0 { 0.0 } else { bar_min_gain };
    let mut monotone = OracleReport::compare("bar_entropy_nondecreasing", 0.0, gain, f64::INFINITY)
        .with_detail(format!("min_gain={gain:e} entangled={entangled}"));
    monotone.tolerance = BAR_TOLERANCE;
    monotone.passed = gain >= -BAR_TOLERANCE;
    reports.push(monotone);

    let mut dominance = OracleReport::compare(
        "boundary_dominance",
        0.0,
        (summary.boundary_violations + summary.beyond_critical) as f64,
        0.0,
    );
    dominance.detail = format!(
        "boundary_violations={} beyond_critical={} entangled={}",
        summary.boundary_violations, summary.beyond_critical, summary.entangled
    );
    reports.push(dominance);

    for g in gamma_grid(21) {
        reports.push(mems_grid_verify(n_qubits, g, 1000)?);
    }
    Ok(reports)
}

/// `points` evenly spaced values of `|γ|` on `[0, 1/2]`.
pub fn gamma_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| 0.5 * k as f64 / (points - 1) as f64)
        .collect()
}

/// Tracks the worst disagreement between two routes.
#[derive(Debug, Clone, Copy)]
struct Worst {
    analytic: f64,
    oracle: f64,
    diff: f64,
}

impl Default for Worst {
    fn default() -> Self {
        Self {
            analytic: 0.0,
            oracle: 0.0,
            diff: 0.0,
        }
    }
}

impl Worst {
    fn push(&mut self, analytic: f64, oracle: f64) {
        let diff = (analytic - oracle).abs();
        if diff >= self.diff {
            *self = Self {
                analytic,
                oracle,
                diff,
            };
        }
    }

    fn report(&self, name: &str, tolerance: f64) -> OracleReport {
        OracleReport::compare(name, self.analytic, self.oracle, tolerance)
    }
}
