//! Energy-dimension profile of the uniform measures on the depth-D Cantor
//! points: bounded below the dimension, divergent above.

use graphdim::estimators::{energy_dimension_profile, natural_measure};
use graphdim::metric_spaces::SpaceDescriptor;

fn main() -> graphdim::Result<()> {
    let family = (4..=12)
        .map(|depth| natural_measure(&SpaceDescriptor::TriadicCantor, depth))
        .collect::<graphdim::Result<Vec<_>>>()?;
    let grid: Vec<f64> = (1..=20).map(|k| k as f64 * 0.05).collect();
    let profile = energy_dimension_profile(&family, &grid)?;
    for row in &profile.rows {
        let last = row.energies.last().unwrap();
        println!("s = {:.2}  I_s at depth 12 = {last:>12.4}  {}", row.s, if row.divergent { "divergent" } else { "" });
    }
    println!("estimate {:.2}, bracket {:?}, log2/log3 = {:.4}", profile.estimate, profile.bracket, 2f64.ln() / 3f64.ln());
    Ok(())
}
