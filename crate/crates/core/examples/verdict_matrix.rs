//! Verdicts for every corpus sequence under ones and harmonic weights.

use rayon::prelude::*;
use tauberian::corpus;
use tauberian::harness::{verify_theorems, HarnessConfig, Theorem};

fn main() -> anyhow::Result<()> {
    let cfg = HarnessConfig::default();
    let c = corpus::corpus();
    let weights: Vec<_> = ["ones", "harmonic"].iter().map(|w| c.weight(w).unwrap().clone()).collect();
    let cells: Vec<_> = c.sequences.iter().flat_map(|s| weights.iter().map(move |w| (s, w))).collect();
    let rows = cells
        .par_iter()
        .map(|(s, w)| {
            let theorems: Vec<Theorem> = Theorem::ALL.into_iter().filter(|t| s.is_real() || !t.requires_real()).collect();
            verify_theorems(s, w, w, &theorems, &cfg).map(|r| (s.name().to_string(), w.name().to_string(), r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    println!("{:<22} {:<9} {:<4} {:<20} {:<18} u_limit", "sequence", "weights", "thm", "verdict", "sigma_limit");
    for (s, w, reports) in rows {
        for r in reports {
            let sigma = r.sigma_limit.as_ref().map_or("n/a".to_string(), |l| format!("{:.6}{}", l.value.re, if l.converged { "" } else { "*" }));
            println!(
                "{:<22} {:<9} {:<4} {:<20} {:<18} {:.6}{}",
                s,
                w,
                r.theorem.to_string(),
                format!("{:?}", r.verdict),
                sigma,
                r.u_limit.value.re,
                if r.u_limit.converged { "" } else { "*" }
            );
        }
    }
    println!("* = not converged on the ladder");
    Ok(())
}
