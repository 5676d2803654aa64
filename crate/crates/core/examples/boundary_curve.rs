//! Maximal linear entropy against concurrence for several qubit counts,
//! written as CSV on stdout.
//!
//! `cargo run --example boundary_curve > boundary.csv`

use xmems::mems::boundary_entropy;

fn main() -> xmems::Result<()> {
    let qubits = [2u32, 3, 4, 5, 8];
    let header: Vec<String> = qubits.iter().map(|n| format!("S_N{n}")).collect();
    println!("concurrence,{}", header.join(","));
    for k in 0..=50 {
        let c = k as f64 / 50.0;
        let row = qubits
            .iter()
            .map(|&n| boundary_entropy(n, c / 2.0).map(|s| format!("{s:.10}")))
            .collect::<xmems::Result<Vec<_>>>()?;
        println!("{c:.2},{}", row.join(","));
    }
    Ok(())
}
