//! Greedy and exact maximum packings on small nets.

use graphdim::estimators::{greedy_packing, max_packing_exact, max_packing_greedy, packing_count, DEFAULT_EXACT_LIMIT};
use graphdim::metric_spaces::{build_net, SpaceDescriptor};
use graphdim::rational::rat;

fn main() -> graphdim::Result<()> {
    for n in 1..=4 {
        let net = build_net(&SpaceDescriptor::TriadicCantor, n)?;
        let g = max_packing_greedy(&net, n)?;
        let e = max_packing_exact(&net, n)?;
        println!("cantor n={n}: {} net points, greedy {}, exact {}", net.len(), g.count, e.count);
    }

    let net = build_net(&SpaceDescriptor::product(SpaceDescriptor::HarmonicSequence, 1), 4)?;
    let r = greedy_packing(net.points(), &rat(1, 16))?;
    assert!(r.verify(net.points()));
    println!("harmonic x [0,1] at 1/16: {} of {} points", r.count, net.len());

    // radius 1/3 is not dyadic; the count is exact on this small set
    let net = build_net(&SpaceDescriptor::UnitInterval, 4)?;
    let r = packing_count(net.points(), &rat(1, 3), DEFAULT_EXACT_LIMIT)?;
    println!("interval net, radius 1/3: {} ({})", r.count, r.method.as_str());
    Ok(())
}
