//! Tail statistics over the (λ, horizon) ladders and the trend decisions
//! taken on them.

use tauberian::corpus;
use tauberian::oscillation::field::DEFAULT_REGION_BUDGET;
use tauberian::oscillation::profile::{condition_profiles, window_profiles, write_profiles_csv};
use tauberian::oscillation::{Direction, StatKind};
use tauberian::weights::WeightSequence;

fn main() -> anyhow::Result<()> {
    let ones = WeightSequence::ones();
    let rungs = [(2.0, 2.0), (1.5, 1.5), (1.25, 1.25), (1.1, 1.1), (1.05, 1.05)];
    let horizons = [64, 128, 256, 512];
    for seq in [corpus::additive_convergent(1.0), corpus::alternating()] {
        println!("{}", seq.name());
        let windows = window_profiles(&seq, &ones, &ones, &rungs, &horizons, Direction::Forward, 0.5, DEFAULT_REGION_BUDGET)?;
        let landau = condition_profiles(&seq, &ones, &ones, StatKind::Liminf, &horizons, 0.5)?;
        let hardy = condition_profiles(&seq, &ones, &ones, StatKind::Limsup, &horizons, 0.5)?;
        for p in windows.iter().chain(&landau).chain(&hardy) {
            let series: Vec<String> = p
                .decisive_series()
                .iter()
                .map(|(_, s)| s.map_or("-".into(), |v| format!("{v:+.4}")))
                .collect();
            println!("  {:<12} {:<5} [{}]", p.name, p.trend_holds(0.05), series.join(", "));
        }
        if seq.name() == "alternating" {
            write_profiles_csv(&hardy, std::io::stdout().lock())?;
        }
    }
    Ok(())
}
