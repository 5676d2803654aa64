//! Runs the brute-force oracle suite and prints one line per check.
//!
//! `cargo run --release --example oracle_verify -- 3 2000`

use xmems::oracle::{mems_grid_verify, run_suite, wootters_concurrence};
use xmems::sampling::SamplerConfig;
use xmems::xstate::XState;

fn main() -> xmems::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().map_or(3, |s| s.parse().expect("qubit count"));
    let count: u64 = args.next().map_or(1000, |s| s.parse().expect("sample count"));

    let reports = run_suite(&SamplerConfig::new(n, count, 1)?)?;
    for r in &reports {
        let mark = if r.passed { "ok  " } else { "FAIL" };
        println!(
            "{mark} {:<28} diff {:.2e} (tol {:.0e})",
            r.check_name, r.abs_diff, r.tolerance
        );
    }

    // Single checks can be called directly too.
    let bell = XState::from_real(2, vec![0.5, 0.0], vec![0.5, 0.0], vec![0.5, 0.0])?;
    println!(
        "\nWootters concurrence of a Bell state: {}",
        wootters_concurrence(&bell.to_dense()?)?
    );
    println!("{}", mems_grid_verify(4, 0.1, 5001)?.to_json_line());

    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("\n{} checks, {failed} failed", reports.len());
    Ok(())
}
