//! Random fields on a nested family of Cantor cylinders: the pair constant
//! across separation scales and the expected energy of the graph measure.

use graphdim::energy_method::{build_nested_family, expected_energy_check, lacunary_schedule, sample_field, statement_55_check};
use graphdim::estimators::DiscreteMeasure;
use graphdim::prevalence::ZeroDrift;

fn main() -> graphdim::Result<()> {
    let family = build_nested_family(&lacunary_schedule(3))?;
    for n in 1..=family.depth() {
        println!("level {n}: {} pieces", family.pieces(n).len());
    }
    let field = sample_field(&family, 1, 3);
    for leaf in 0..family.leaves().len() {
        println!("  leaf {leaf}: {}", field.value(&family, leaf, family.depth())[0]);
    }

    let pairs = statement_55_check(&family, &ZeroDrift, 1, 0.5, 0.6, 1000, 200, 1)?;
    for c in &pairs.decades {
        println!("distance 1e{}: {} pairs, constant {:.3}", c.decade, c.pairs, c.constant);
    }
    println!("stability {:.3} over {} decades", pairs.stability, pairs.span);

    for depth in 2..=3 {
        let f = family.truncate(depth)?;
        let nu = DiscreteMeasure::uniform(f.leaf_points(0)?)?;
        let r = expected_energy_check(&f, &nu, &ZeroDrift, 1, 0.5, 0.6, pairs.constant, 1000, 2)?;
        println!(
            "depth {depth}: sampled {:.1} +- {:.1}, pairwise {:.1}, bound {:.1}",
            r.monte_carlo, r.monte_carlo_err, r.pairwise, r.reference
        );
    }
    Ok(())
}
