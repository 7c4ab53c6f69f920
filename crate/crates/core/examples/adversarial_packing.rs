//! Translated unions of the layer values against adversaries that choose
//! each translation after seeing the earlier values.

use graphdim::prevalence::{build_layers, simulate_statement_31, Adversary, BaseSpace, CollidingAdversary, StickyAdversary, ZeroAdversary};

fn main() -> graphdim::Result<()> {
    let construction = build_layers(BaseSpace::Cantor, 1, 5)?;
    let layer = construction.layer(5).unwrap();
    let adversaries: [&dyn Adversary; 3] = [&ZeroAdversary, &CollidingAdversary, &StickyAdversary];
    for a in adversaries {
        let r = simulate_statement_31(layer, a, 100_000, 7)?;
        println!(
            "{:<10} failures {:>3}/{}  upper {:.2e}  bound {:.2e}  {}",
            r.adversary,
            r.failures,
            r.trials,
            r.ci.1,
            r.bound,
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
