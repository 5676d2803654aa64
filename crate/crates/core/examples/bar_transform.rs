//! Moves all coherence into one block and shows that the concurrence is
//! kept while the entropy grows.

use xmems::measures::{gm_concurrence, linear_entropy};
use xmems::mems::bar_transform;
use xmems::sampling::{sample_xstate, DiagonalDistribution, SamplerConfig};

fn main() -> xmems::Result<()> {
    let cfg = SamplerConfig::new(3, 1, 7)?.with_diagonal(DiagonalDistribution::DominantBlock);
    let mut shown = 0;
    for index in 0.. {
        let s = sample_xstate(&cfg, index);
        if !gm_concurrence(&s).is_entangled() {
            continue;
        }
        let bar = bar_transform(&s)?;
        println!(
            "sample {index:>3}: block {} -> 0, C {:.6} -> {:.6}, S {:.6} -> {:.6}",
            bar.source_block,
            gm_concurrence(&s).value,
            gm_concurrence(&bar.state).value,
            linear_entropy(&s),
            linear_entropy(&bar.state)
        );
        shown += 1;
        if shown == 8 {
            break;
        }
    }
    Ok(())
}
