//! Regular versus rapid variation of the built-in weight families.

use tauberian::corpus;
use tauberian::variation::classify;
use tauberian::weights::WeightSequence;

fn main() -> anyhow::Result<()> {
    let mut weights = corpus::corpus().weights;
    // p_m = 2m + 1, so P_m = (m + 1)^2.
    weights.push(WeightSequence::new("squares", "odd", |m| 2.0 * m as f64 + 1.0));
    weights.push(WeightSequence::geometric(1.01)?);
    println!("{:<18} {:<16} {:>10} {:>12} {:>10}", "weights", "kind", "alpha_hat", "lemma_tail", "horizon");
    for p in &weights {
        let c = classify(p, 100_000, 0.05)?;
        let alpha = c.alpha_hat.map_or("-".to_string(), |a| format!("{a:.5}"));
        println!(
            "{:<18} {:<16} {:>10} {:>12.8} {:>10}",
            c.name,
            format!("{:?}", c.kind),
            alpha,
            c.lemma23_tail,
            c.effective_horizon
        );
    }
    Ok(())
}
