//! Lower, upper and full-fit box estimates for the three base spaces and
//! their products with a cube.

use graphdim::estimators::{box_dim_estimate, max_packing_greedy, ScaleSeries, Variant};
use graphdim::metric_spaces::{build_net, SpaceDescriptor};

fn series(space: &SpaceDescriptor, scales: std::ops::RangeInclusive<u32>) -> graphdim::Result<ScaleSeries> {
    let entries = scales
        .map(|n| Ok((n, max_packing_greedy(&build_net(space, n)?, n)?.count as u64)))
        .collect::<graphdim::Result<Vec<_>>>()?;
    ScaleSeries::new(2, entries)
}

fn main() -> graphdim::Result<()> {
    let bases = [SpaceDescriptor::UnitInterval, SpaceDescriptor::TriadicCantor, SpaceDescriptor::HarmonicSequence];
    for base in &bases {
        let s = series(base, 4..=12)?;
        let est = |v| box_dim_estimate(&s, v).map(|e| e.slope);
        println!(
            "{:<10} liminf {:.4}  limsup {:.4}  fit {:.4}",
            base.name(),
            est(Variant::Liminf)?,
            est(Variant::Limsup)?,
            est(Variant::FullFit)?
        );
    }
    // the product count is the base count times 2^{nd}, so the slope moves by d
    for base in &bases {
        let b = box_dim_estimate(&series(base, 4..=10)?, Variant::FullFit)?.slope;
        let p = box_dim_estimate(&series(&SpaceDescriptor::product(base.clone(), 1), 4..=10)?, Variant::FullFit)?.slope;
        println!("{:<22} {p:.4} = {b:.4} + 1", format!("{}x[0,1]", base.name()));
    }
    Ok(())
}
