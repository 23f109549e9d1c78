//! σ for a convergent double sequence under two weight pairs, checked
//! against direct summation, plus the diagonal regularity ratios.

use tauberian::corpus;
use tauberian::transform::{regularity_diagnostic, sigma_single, weighted_mean_field};
use tauberian::weights::WeightSequence;

fn main() -> anyhow::Result<()> {
    let u = corpus::additive_convergent(1.0);
    for (p, q) in [
        (WeightSequence::ones(), WeightSequence::ones()),
        (WeightSequence::harmonic(), WeightSequence::odd()),
    ] {
        let field = weighted_mean_field(&u, &p, &q, 400, 400)?;
        println!("weights {} x {}", p.name(), q.name());
        for m in [50, 100, 200, 400] {
            let fast = field.sigma(m, m).re;
            let direct = sigma_single(&u, &p, &q, m, m)?.re;
            println!("  sigma[{m},{m}] = {fast:.12}  direct = {direct:.12}  u = {:.6}", u.value(m, m).re);
        }
    }

    // P_mn = P_m Q_n for factorable weights.
    let p = WeightSequence::harmonic();
    let report = regularity_diagnostic(|m, n| p.prefix(m).unwrap() * p.prefix(n).unwrap(), &[0, 5, 20], 2000, 2000);
    for probe in &report.probes {
        let last = probe.row_profile.last().unwrap();
        println!("P_(k,{})/P_(k,k) at k={}: {:.5} ({:?})", probe.index, last.0, last.1, probe.row_verdict);
    }
    Ok(())
}
