//! Monte Carlo sweep of random X-states in the entropy/concurrence plane,
//! summarised as a text histogram of the largest entropy reached by
//! entangled states per concurrence bin, next to the boundary curve.
//!
//! `cargo run --release --example sweep_plane -- 3 100000 dominant-block`

use xmems::mems::boundary_entropy;
use xmems::sampling::{sweep_sharded, DiagonalDistribution, SamplerConfig, SweepSummary};

const BINS: usize = 10;

fn main() -> xmems::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().map_or(3, |s| s.parse().expect("qubit count"));
    let count: u64 = args.next().map_or(100_000, |s| s.parse().expect("sample count"));
    let law: DiagonalDistribution = args
        .next()
        .map_or(Ok(DiagonalDistribution::FlatSimplex), |s| s.parse())?;

    let cfg = SamplerConfig::new(n, count, 42)?.with_diagonal(law);
    let mut summary = SweepSummary::new(n)?;
    let mut top = [f64::NEG_INFINITY; BINS];
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get());
    sweep_sharded(&cfg, threads, |r| {
        summary.push(&r);
        if r.concurrence > 0.0 {
            let bin = ((r.concurrence * BINS as f64) as usize).min(BINS - 1);
            top[bin] = top[bin].max(r.entropy);
        }
        Ok(())
    })?;

    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("summary serialises")
    );
    println!("{:>12} {:>12} {:>12}", "C bin", "max S", "boundary");
    for (k, s) in top.iter().enumerate() {
        let lo = k as f64 / BINS as f64;
        let bound = boundary_entropy(n, lo / 2.0)?;
        let shown = if s.is_finite() {
            format!("{s:.6}")
        } else {
            "-".into()
        };
        println!(
            "{:>5.2}..{:<5.2} {shown:>12} {bound:>12.6}",
            lo,
            lo + 1.0 / BINS as f64
        );
    }
    Ok(())
}
