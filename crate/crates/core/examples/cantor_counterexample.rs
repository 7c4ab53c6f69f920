//! Mesh counts of the three digit-function graphs: f and g have graphs of
//! dimension log 8/log 9, their sum has a strictly larger one.

use graphdim::cantor::{brute_force_mesh_count, closed_form_counts, mesh_series, DigitFunction};
use graphdim::estimators::{box_dim_estimate, Variant};

fn main() -> graphdim::Result<()> {
    println!("{:>3} {:>10} {:>10} {:>10}", "n", "f", "g", "f+g");
    for n in 1..=6 {
        let counts: Vec<u64> = DigitFunction::ALL
            .iter()
            .map(|f| brute_force_mesh_count(*f, n))
            .collect::<graphdim::Result<_>>()?;
        let (cf, cg, cs) = closed_form_counts(n)?;
        assert_eq!(counts, vec![cf as u64, cg as u64, cs as u64]);
        println!("{n:>3} {:>10} {:>10} {:>10}", counts[0], counts[1], counts[2]);
    }

    for f in DigitFunction::ALL {
        let est = box_dim_estimate(&mesh_series(f, 3..=7)?, Variant::FullFit)?;
        println!("slope({}) = {:.5}", f.name(), est.slope);
    }
    println!("log 8/log 9     = {:.5}", 8f64.ln() / 9f64.ln());
    println!("1/2 + log2/log3 = {:.5}", 0.5 + 2f64.ln() / 3f64.ln());
    Ok(())
}
