//! Both decompositions of u_mn − σ_mn at one point, then the seeded random
//! suite.

use tauberian::corpus;
use tauberian::harness::{lemma_backward, lemma_forward, random_lemma_suite, LemmaSuiteConfig};
use tauberian::weights::WeightSequence;

fn main() -> anyhow::Result<()> {
    let u = corpus::separable_convergent(1.0, 0.5);
    let (p, q) = (WeightSequence::harmonic(), WeightSequence::odd());
    let f = lemma_forward(&u, &p, &q, 6, 4, 11, 9)?;
    let b = lemma_backward(&u, &p, &q, 11, 9, 6, 4)?;
    for d in [&f, &b] {
        println!("{:?}: lhs = {:.15}", d.direction, d.lhs.re);
        for (k, t) in d.terms.iter().enumerate() {
            println!("  term {k} = {:+.15}", t.re);
        }
        println!("  relative residual = {:.3e}", d.relative_residual());
    }

    let records = random_lemma_suite(&LemmaSuiteConfig { seed: 42, ..Default::default() })?;
    let worst = records.iter().max_by(|a, b| a.residual.total_cmp(&b.residual)).unwrap();
    println!(
        "{} random decompositions, worst relative residual {:.3e} at (m, n, mu, eta) = ({}, {}, {}, {}) under {} x {}",
        records.len(),
        worst.residual,
        worst.m,
        worst.n,
        worst.mu,
        worst.eta,
        worst.weights.0,
        worst.weights.1
    );
    Ok(())
}
