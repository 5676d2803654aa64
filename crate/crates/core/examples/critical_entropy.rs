//! Critical entropy above which no X-state is genuinely multipartite
//! entangled, as an exact fraction and a float.

use xmems::mems::{critical_entropy, critical_entropy_exact, EXACT_CRITICAL_MAX_QUBITS};

fn main() -> xmems::Result<()> {
    for n in 2..=EXACT_CRITICAL_MAX_QUBITS {
        let (num, den) = critical_entropy_exact(n)?;
        let s = critical_entropy(n)?;
        println!("N={n:>2}  {num}/{den}  = {s:.15}  1 - S_cr = {:.3e}", 1.0 - s);
    }
    // Float form only beyond the exact range.
    println!("N=64  {:.17}", critical_entropy(64)?);
    Ok(())
}
