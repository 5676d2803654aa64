//! Seeded random X-states and the Monte Carlo entanglement–entropy sweep.
//!
//! Sample `k` of a sweep is drawn from a ChaCha8 generator seeded with the
//! master seed and switched to stream `k`. Every sample is therefore a pure
//! function of `(master_seed, k)` and shards can generate any index range in
//! any order.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{gm_concurrence, linear_entropy};
use crate::mems::{boundary_entropy, critical_entropy};
use crate::xstate::{block_count, check_qubits, XState};

/// Slack used when comparing sweep records against the boundary curve and
/// the critical entropy.
pub const BOUNDARY_SLACK: f64 = 1e-9;

/// Concurrence above which a record counts as entangled for the
/// critical-entropy check.
pub const ENTANGLED_THRESHOLD: f64 = 1e-12;

/// Indices generated per parallel batch in [`sweep_sharded`].
const BATCH: u64 = 1 << 14;

/// Law of the 2n diagonal entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalDistribution {
    /// Uniform on the probability simplex: normalised standard exponentials.
    #[default]
    FlatSimplex,
    /// A uniformly chosen block takes a fraction `w ~ U[0,1)` of the trace,
    /// split uniformly between its two entries; the other `2n - 2` entries
    /// share `1 - w` on the flat simplex. Produces entangled states at every
    /// N, where the flat law almost never does for N ≥ 5.
    DominantBlock,
}

impl std::str::FromStr for DiagonalDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat-simplex" => Ok(Self::FlatSimplex),
            "dominant-block" => Ok(Self::DominantBlock),
            other => Err(Error::Domain(format!(
                "unknown diagonal law `{other}` (expected flat-simplex or dominant-block)"
            ))),
        }
    }
}

/// Law of the coherences given the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OffdiagFill {
    /// `|z_i| = u_i sqrt(a_i b_i)` with `u_i ~ U[0,1)` and a uniform phase.
    #[default]
    UniformFraction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub n_qubits: u32,
    pub count: u64,
    pub master_seed: u64,
    pub diagonal_distribution: DiagonalDistribution,
    pub offdiag_fill: OffdiagFill,
}

impl SamplerConfig {
    pub fn with_diagonal(mut self, law: DiagonalDistribution) -> Self {
        self.diagonal_distribution = law;
        self
    }

    pub fn new(n_qubits: u32, count: u64, master_seed: u64) -> Result<Self> {
        check_qubits(n_qubits)?;
        if count == 0 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        Ok(Self {
            n_qubits,
            count,
            master_seed,
            diagonal_distribution: DiagonalDistribution::default(),
            offdiag_fill: OffdiagFill::default(),
        })
    }
}

fn index_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Draws sample `index` of `config`.
///
/// The result passes [`XState::validate`] at tolerance 0: the trace is
/// corrected until it sums to exactly 1.0 in validation order, and each
/// coherence is shrunk by ulps if rounding pushed it past its ceiling.
/// Indices at or beyond `config.count` are generated the same way.
pub fn sample_xstate(config: &SamplerConfig, index: u64) -> XState {
    let mut rng = index_rng(config.master_seed, index);
    let n = block_count(config.n_qubits);

    let (mut a, mut b) = match config.diagonal_distribution {
        DiagonalDistribution::FlatSimplex => {
            let mut diag: Vec<f64> = (0..2 * n).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = diag.iter().sum();
            diag.iter_mut().for_each(|x| *x /= total);
            let b = diag.split_off(n);
            (diag, b)
        }
        DiagonalDistribution::DominantBlock => {
            let block = rng.random_range(0..n);
            let weight: f64 = rng.random();
            let split: f64 = rng.random();
            let mut rest: Vec<f64> = (0..2 * n - 2).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = rest.iter().sum();
            rest.iter_mut().for_each(|x| *x *= (1.0 - weight) / total);
            let mut rest = rest.into_iter();
            let mut a = Vec::with_capacity(n);
            let mut b = Vec::with_capacity(n);
            for i in 0..n {
                if i == block {
                    a.push(weight * split);
                    b.push(weight * (1.0 - split));
                } else {
                    a.push(rest.next().unwrap());
                    b.push(rest.next().unwrap());
                }
            }
            (a, b)
        }
    };
    fix_trace(&mut a, &mut b);

    let z = match config.offdiag_fill {
        OffdiagFill::UniformFraction => a
            .iter()
            .zip(&b)
            .map(|(&ai, &bi)| {
                let ceiling = (ai * bi).max(0.0).sqrt();
                let u: f64 = rng.random();
                let phase = rng.random::<f64>() * std::f64::consts::TAU;
                let mut z = Complex64::from_polar(u * ceiling, phase);
                while z.norm() > ceiling {
                    z *= 1.0 - f64::EPSILON;
                }
                z
            })
            .collect(),
    };

    XState::new(config.n_qubits, a, b, z).expect("sampler produces well-formed vectors")
}

/// Rounds every entry to a multiple of 2^-52 and moves the rounding
/// deficit onto the largest one. Partial sums of such entries are exact, so
/// the trace is exactly 1.0 whatever the summation order.
fn fix_trace(a: &mut [f64], b: &mut [f64]) {
    const SCALE: f64 = (1u64 << 52) as f64;
    let mut units: Vec<i64> = a
        .iter()
        .chain(b.iter())
        .map(|x| (x * SCALE).round() as i64)
        .collect();
    let deficit = (1i64 << 52) - units.iter().sum::<i64>();
    let largest = (0..units.len()).max_by_key(|&k| units[k]).unwrap_or(0);
    units[largest] += deficit;
    let n = a.len();
    for (k, u) in units.into_iter().enumerate() {
        let v = u as f64 / SCALE;
        if k < n {
            a[k] = v;
        } else {
            b[k - n] = v;
        }
    }
}

/// One Monte Carlo sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub sample_index: u64,
    pub entropy: f64,
    pub concurrence: f64,
}

pub fn record(config: &SamplerConfig, index: u64) -> SweepRecord {
    let state = sample_xstate(config, index);
    SweepRecord {
        sample_index: index,
        entropy: linear_entropy(&state),
        concurrence: gm_concurrence(&state).value,
    }
}

/// Sequential, constant-memory sweep.
pub fn sweep(config: SamplerConfig) -> Sweep {
    Sweep { config, next: 0 }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    config: SamplerConfig,
    next: u64,
}

impl Iterator for Sweep {
    type Item = SweepRecord;

    fn next(&mut self) -> Option<SweepRecord> {
        if self.next >= self.config.count {
            return None;
        }
        let r = record(&self.config, self.next);
        self.next += 1;
        Some(r)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.config.count - self.next) as usize;
        (left, Some(left))
    }
}

/// Parallel sweep over `shards` worker threads. Records reach `sink` in
/// index order, batch by batch, so memory stays bounded and the output is
/// identical for every shard count.
pub fn sweep_sharded<F>(config: &SamplerConfig, shards: usize, mut sink: F) -> Result<()>
where
    F: FnMut(SweepRecord) -> Result<()>,
{
    if shards == 0 {
        return Err(Error::Domain("shard count must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(shards)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    let mut buf = Vec::with_capacity(BATCH.min(config.count) as usize);
    let mut start = 0;
    while start < config.count {
        let end = (start + BATCH).min(config.count);
        pool.install(|| {
            (0..(end - start) as usize)
                .into_par_iter()
                .map(|k| record(config, start + k as u64))
                .collect_into_vec(&mut buf)
        });
        for r in buf.drain(..) {
            sink(r)?;
        }
        start = end;
    }
    Ok(())
}

/// Running statistics over sweep records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n_qubits: u32,
    pub count: u64,
    pub entangled: u64,
    /// Largest entropy among records with nonzero concurrence.
    pub max_entropy_among_entangled: Option<f64>,
    /// Entangled records above the boundary curve.
    pub boundary_violations: u64,
    /// Records with concurrence above [`ENTANGLED_THRESHOLD`] and entropy
    /// above the critical entropy.
    pub beyond_critical: u64,
    #[serde(skip)]
    critical: f64,
}

impl SweepSummary {
    pub fn new(n_qubits: u32) -> Result<Self> {
        Ok(Self {
            n_qubits,
            count: 0,
            entangled: 0,
            max_entropy_among_entangled: None,
            boundary_violations: 0,
            beyond_critical: 0,
            critical: critical_entropy(n_qubits)?,
        })
    }

    pub fn push(&mut self, r: &SweepRecord) {
        self.count += 1;
        if r.concurrence > 0.0 {
            self.entangled += 1;
            self.max_entropy_among_entangled = Some(
                self.max_entropy_among_entangled
                    .map_or(r.entropy, |m| m.max(r.entropy)),
            );
            if violates_boundary(self.n_qubits, r) {
                self.boundary_violations += 1;
            }
        }
        if r.concurrence > ENTANGLED_THRESHOLD && r.entropy > self.critical + BOUNDARY_SLACK {
            self.beyond_critical += 1;
        }
    }

    /// Fraction of records with nonzero concurrence.
    pub fn entangled_fraction(&self) -> f64 {
        self.entangled as f64 / self.count as f64
    }
}

/// True when an entangled record lies above the boundary curve by more than
/// [`BOUNDARY_SLACK`]. Separable records are never violations: the curve
/// bounds the entropy of entangled states only.
pub fn violates_boundary(n_qubits: u32, r: &SweepRecord) -> bool {
    if r.concurrence <= 0.0 {
        return false;
    }
    match boundary_entropy(n_qubits, r.concurrence / 2.0) {
        Ok(bound) => r.entropy > bound + BOUNDARY_SLACK,
        Err(_) => true,
    }
}

/// Renders a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes records as `index,entropy,concurrence` CSV.
pub struct SweepCsvWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> SweepCsvWriter<W> {
    pub fn new(w: W) -> std::io::Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(["index", "entropy", "concurrence"])?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, r: &SweepRecord) -> std::io::Result<()> {
        self.inner.write_record([
            r.sample_index.to_string(),
            fmt_f64(r.entropy),
            fmt_f64(r.concurrence),
        ])?;
        Ok(())
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| e.into_error())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstate::block_trace;

    #[test]
    fn zero_count_rejected() {
        assert!(matches!(SamplerConfig::new(3, 0, 1), Err(Error::Domain(_))));
        assert!(SamplerConfig::new(1, 10, 1).is_err());
    }

    #[test]
    fn same_index_same_state() {
        let cfg = SamplerConfig::new(4, 10, 99).unwrap();
        for k in 0..10 {
            assert_eq!(sample_xstate(&cfg, k), sample_xstate(&cfg, k));
        }
        assert_ne!(sample_xstate(&cfg, 0), sample_xstate(&cfg, 1));
        let other = SamplerConfig::new(4, 10, 100).unwrap();
        assert_ne!(sample_xstate(&cfg, 0), sample_xstate(&other, 0));
    }

    #[test]
    fn samples_validate_exactly() {
        for (n, law) in (2..=6).flat_map(|n| {
            [
                (n, DiagonalDistribution::FlatSimplex),
                (n, DiagonalDistribution::DominantBlock),
            ]
        }) {
            let cfg = SamplerConfig::new(n, 2000, 7).unwrap().with_diagonal(law);
            for k in 0..cfg.count {
                let s = sample_xstate(&cfg, k);
                let report = s.validate(0.0).unwrap();
                assert!(report.is_ok(), "N={n} k={k}: {report}");
            }
        }
    }

    #[test]
    fn fix_trace_handles_ulp_residuals() {
        let mut a = vec![0.1, 0.2];
        let mut b = vec![0.3, 0.4 + 3e-16];
        fix_trace(&mut a, &mut b);
        assert_eq!(block_trace(&a, &b), 1.0);

        // A single-ulp walk on a_0 skips over 1.0 here.
        let mut a = vec![0.5688465817942138, 0.0087281180997323];
        let mut b = vec![0.33115187059913115, 0.09127342950692277];
        fix_trace(&mut a, &mut b);
        assert_eq!(block_trace(&a, &b), 1.0);
        assert!((a[0] - 0.5688465817942138).abs() < 1e-15);
    }

    #[test]
    fn dominant_block_yields_entanglement() {
        let cfg = SamplerConfig::new(5, 2000, 1)
            .unwrap()
            .with_diagonal(DiagonalDistribution::DominantBlock);
        let entangled = sweep(cfg).filter(|r| r.concurrence > 0.0).count();
        assert!(entangled > 200, "only {entangled} entangled samples");
        assert_eq!(
            "dominant-block".parse::<DiagonalDistribution>().unwrap(),
            DiagonalDistribution::DominantBlock
        );
        assert!("gaussian".parse::<DiagonalDistribution>().is_err());
    }

    #[test]
    fn iterator_and_shards_agree() {
        let cfg = SamplerConfig::new(3, 40_000, 5).unwrap();
        let seq: Vec<_> = sweep(cfg).collect();
        assert_eq!(seq.len(), 40_000);
        for shards in [1, 3, 8] {
            let mut par = Vec::new();
            sweep_sharded(&cfg, shards, |r| {
                par.push(r);
                Ok(())
            })
            .unwrap();
            assert_eq!(par, seq);
        }
        assert!(sweep_sharded(&cfg, 0, |_| Ok(())).is_err());
    }

    #[test]
    fn summary_counts() {
        let mut s = SweepSummary::new(3).unwrap();
        s.push(&SweepRecord {
            sample_index: 0,
            entropy: 1.0,
            concurrence: 0.0,
        });
        s.push(&SweepRecord {
            sample_index: 1,
            entropy: 0.1,
            concurrence: 0.5,
        });
        s.push(&SweepRecord {
            sample_index: 2,
            entropy: 0.99,
            concurrence: 0.01,
        });
        assert_eq!(s.count, 3);
        assert_eq!(s.entangled, 2);
        assert_eq!(s.boundary_violations, 1);
        assert_eq!(s.beyond_critical, 1);
        assert_eq!(s.max_entropy_among_entangled, Some(0.99));
    }

    #[test]
    fn csv_format() {
        let mut w = SweepCsvWriter::new(Vec::new()).unwrap();
        w.write(&SweepRecord {
            sample_index: 3,
            entropy: 32.0 / 35.0,
            concurrence: 0.0,
        })
        .unwrap();
        let out = String::from_utf8(w.finish().unwrap()).unwrap();
        assert_eq!(
            out,
            "index,entropy,concurrence\n3,9.1428571428571426e-1,0.0000000000000000e0\n"
        );
        let parsed: f64 = "9.1428571428571426e-1".parse().unwrap();
        assert_eq!(parsed, 32.0 / 35.0);
    }
}
