//! The layered random function: layer sizes, one sampled witness, and the
//! packing event on its graph.

use graphdim::cantor::DigitFunction;
use graphdim::prevalence::{build_layers, check_event, eval_witness, event_trials, sample_witness, BaseSpace, DigitDrift, ZeroDrift};
use graphdim::rational::rat;

fn main() -> graphdim::Result<()> {
    let construction = build_layers(BaseSpace::Cantor, 1, 7)?;
    for layer in &construction.layers {
        println!(
            "layer {}: s={} k={} m={} ell={} grid 0..={} step {}",
            layer.n, layer.s_n, layer.k_n, layer.m_n, layer.ell_n, layer.grid_max_index, layer.grid_step
        );
    }

    let sample = sample_witness(&construction, 42);
    // satellites of one layer-5 cluster carry that layer's sampled values
    for x in construction.layers[4].satellites[0].iter().take(6) {
        println!("witness at {x}: {}", eval_witness(&construction, &sample, x, 7)?[0]);
    }
    println!("witness at 0: {}", eval_witness(&construction, &sample, &rat(0, 1), 7)?[0]);

    let drift = DigitDrift(DigitFunction::OddDigits);
    for n in 5..=7 {
        let r = check_event(&construction, &sample, &drift, n)?;
        println!("n={n}: packing {} (greedy {}, clusters {}) vs threshold {:.1}", r.graph_count, r.greedy_count, r.cluster_count, r.threshold);
    }
    let s = event_trials(&construction, &ZeroDrift, 5, 100, 1)?;
    println!("event frequency at n=5: {} of {} (bound {:.4})", s.holds, s.trials, s.reference);
    Ok(())
}
