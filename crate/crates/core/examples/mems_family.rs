//! Builds the maximally entangled mixed X-state for a range of coherences
//! and prints its populations, entropy and concurrence.
//!
//! `cargo run --example mems_family -- 3`

use num_complex::Complex64;
use xmems::measures::linear_entropy;
use xmems::mems::{branch_point, mems_state};

fn main() -> xmems::Result<()> {
    let n: u32 = std::env::args()
        .nth(1)
        .map_or(3, |s| s.parse().expect("qubit count"));
    println!("N = {n}, branch point |gamma| = {:.6}", branch_point(n));
    println!(
        "{:>8} {:>10} {:>10} {:>8} {:>10}",
        "|gamma|", "f", "g", "C", "S_L"
    );
    for k in 0..=10 {
        let gamma = 0.05 * k as f64;
        let (p, state) = mems_state(n, Complex64::new(gamma, 0.0))?;
        assert!((linear_entropy(&state) - p.entropy).abs() < 1e-12);
        println!(
            "{gamma:>8.3} {:>10.6} {:>10.6} {:>8.3} {:>10.6}",
            p.f_value, p.g_value, p.concurrence, p.entropy
        );
    }
    let (point, state) = mems_state(2, Complex64::new(1.0 / 3.0, 0.0))?;
    println!(
        "\ntwo qubits at |gamma| = 1/3: S = {:.12} (16/27), C = {:.12}",
        point.entropy, point.concurrence
    );
    println!("{}", state.to_json_string());
    Ok(())
}
