//! A P-convergent double sequence that is not bounded: its tail settles at
//! 2 while one row makes σ explode.

use tauberian::corpus;
use tauberian::oscillation::empirical_limit;
use tauberian::transform::weighted_mean_field;
use tauberian::weights::WeightSequence;

fn main() -> anyhow::Result<()> {
    let u = corpus::paper_unbounded();
    let est = empirical_limit(|m, n| u.value(m, n), &[8, 16, 32, 64], 0.5, 0.05)?;
    println!("u limit {} (converged: {}), residuals {:?}", est.value.re, est.converged, est.residual_profile);

    let ones = WeightSequence::ones();
    let field = weighted_mean_field(&u, &ones, &ones, 16, 16)?;
    let worst = field
        .sigma
        .cells()
        .map(|(m, n, z)| (m, n, (z.re - 2.0).abs()))
        .max_by(|a, b| a.2.total_cmp(&b.2))
        .unwrap();
    println!("sup |sigma - 2| on [0,16]^2 = {:.6e} at ({}, {})", worst.2, worst.0, worst.1);
    Ok(())
}
