//! The window indices μ, μ̃ and the bounds on u_mn − σ_mn built from them,
//! with the telescoping bound that links scaled differences to slow decrease.

use tauberian::corpus;
use tauberian::harness::{choose_mu, choose_mu_backward, landau_bridge, proof_inequality_backward, proof_inequality_forward};
use tauberian::oscillation::landau_stat;
use tauberian::weights::WeightSequence;

fn main() -> anyhow::Result<()> {
    let h = WeightSequence::harmonic();
    for m in [10, 40, 160] {
        println!("harmonic m={m}: mu = {}, mu~ = {}", choose_mu(&h, m, 0.5)?, choose_mu_backward(&h, m, 0.5)?);
    }
    let u = corpus::additive_convergent(1.0);
    for m in [10, 20, 40, 80] {
        let f = proof_inequality_forward(&u, &h, &h, m, m, 0.5, 0.5)?;
        let b = proof_inequality_backward(&u, &h, &h, m, m, 0.5, 0.5)?;
        println!("m=n={m:<3} {:+.6} <= {:+.6} ({})   {:+.6} >= {:+.6} ({})", f.lhs, f.rhs, f.holds, b.lhs, b.rhs, b.holds);
    }

    let ones = WeightSequence::ones();
    let (inf_p, _) = landau_stat(&u, &ones, &ones, 1..=1000, 1..=1000)?;
    let m1 = -inf_p.min(0.0);
    println!("M1 = {m1:.6}");
    for lambda in [2.0, 1.25, 1.05] {
        let s = landau_bridge(&u, &ones, 100, 100, lambda, m1)?;
        println!("  lambda={lambda}: sd_P = {:+.6} >= {:+.6}: {}", s.sd, s.bound, s.holds);
    }
    Ok(())
}
