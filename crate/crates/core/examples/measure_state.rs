//! Entropy and concurrence of a few hand-built X-states.
//!
//! `cargo run --example measure_state`

use num_complex::Complex64;
use xmems::measures::{gm_concurrence, linear_entropy, purity};
use xmems::xstate::XState;

fn main() -> xmems::Result<()> {
    let example = XState::from_real(2, vec![0.3, 0.2], vec![0.1, 0.4], vec![0.15, 0.1])?;
    let werner_like = XState::new(
        3,
        vec![0.4, 0.05, 0.05, 0.05],
        vec![0.3, 0.05, 0.05, 0.05],
        vec![
            Complex64::from_polar(0.3, 1.2),
            0.0.into(),
            0.0.into(),
            0.0.into(),
        ],
    )?;
    let states = [
        ("ghz(3)", XState::ghz(3)?),
        ("maximally mixed(3)", XState::maximally_mixed(3)?),
        ("two-qubit example", example),
        ("three-qubit, one coherence", werner_like),
    ];
    println!(
        "{:<28} {:>10} {:>10} {:>12} {:>6}",
        "state", "purity", "S_L", "C_GM", "block"
    );
    for (name, s) in &states {
        s.require_valid()?;
        let c = gm_concurrence(s);
        println!(
            "{name:<28} {:>10.6} {:>10.6} {:>12.6} {:>6}",
            purity(s),
            linear_entropy(s),
            c.value,
            c.argmax_index
        );
    }
    Ok(())
}
