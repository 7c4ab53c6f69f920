//! Cover-based bounds: Hausdorff content sums over cylinder covers and the
//! localized box estimate over the pieces of a cover.

use graphdim::estimators::{hausdorff_content_upper, localized_upper_box, CoverFamily};
use graphdim::metric_spaces::{build_net, SpaceDescriptor};
use graphdim::rational::rat;

fn main() -> graphdim::Result<()> {
    let dim = 2f64.ln() / 3f64.ln();
    for m in [2, 4, 6, 8] {
        let cover = CoverFamily::middle_thirds_cylinders(m)?;
        let below = hausdorff_content_upper(&cover, dim - 0.1)?;
        let at = hausdorff_content_upper(&cover, dim)?;
        let above = hausdorff_content_upper(&cover, dim + 0.1)?;
        println!("m={m}: {} pieces, sums {below:.4} {at:.4} {above:.4}", cover.len());
    }

    // split a fine Cantor net into its two first-level halves
    let net = build_net(&SpaceDescriptor::TriadicCantor, 12)?;
    let quarter = rat(1, 4);
    let halves = CoverFamily::partition(net.points(), 2, |i| usize::from(net.points().coord(i, 0) >= quarter));
    let local = localized_upper_box(&halves, 4..=10)?;
    println!("halves: per piece {:?}, localized estimate {:.4}", local.per_piece, local.value);
    Ok(())
}
