//! The pair integral against p^d q^{d-2u}: the ratio stays under the sharp
//! constant, and for u >= 1 it still drifts with q when q is comparable to p.

use graphdim::energy_method::{dyadic_ladder, lemma_52_check, lemma_52_sweep, pair_integral, sharp_constant};

fn main() -> graphdim::Result<()> {
    let ladder = dyadic_ladder(8);
    for u in [0.75, 1.0, 1.5] {
        let s = lemma_52_sweep(1, u, &ladder, &ladder, &[0.0, 0.3, 2.0], 1)?;
        println!("u={u}: max ratio {:.4}, constant {:.4}, slope in ln q {:.3}", s.max_ratio, s.constant, s.slope);
    }
    println!("ratios at p = 1/2, theta = 0, u = 1:");
    for &q in &ladder {
        let r = lemma_52_check(0.5, q, 0.0, 1.0, 1, 0)?;
        println!("  q = {q:<10} {:.5}", r.ratio);
    }
    let spot = lemma_52_check(1.0, 1.0, 0.0, 1.0, 1, 0)?.integral;
    println!("spot {spot:.10} vs pi/2 - ln 2 = {:.10}", std::f64::consts::PI / 2.0 - 2f64.ln());

    let e = pair_integral(0.25, 0.125, &[0.3, 0.0], 1.5, 9)?;
    println!("plane: {:.6} +- {:.1e}, constant {:.4}", e.value, e.std_err, sharp_constant(2, 1.5)?);
    Ok(())
}
