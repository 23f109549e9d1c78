//! Sequences given as expressions in m and n.

use tauberian::corpus;
use tauberian::oscillation::hardy_stat;
use tauberian::weights::WeightSequence;

fn main() -> anyhow::Result<()> {
    let ones = WeightSequence::ones();
    for src in ["(-1)^(m+n)", "1 + 1/log(m+2) + 1/log(n+2)", "sin(m)/(m+1) + pow(n+1, -0.5)", "constant c=2.5"] {
        let u = corpus::sequence(src)?;
        let (hp, hq) = hardy_stat(&u, &ones, &ones, 100..=200, 100..=200)?;
        println!("{src:<32} u(3,4) = {:+.6}  hardy on [100,200]^2 = ({hp:.4}, {hq:.4})", u.value(3, 4).re);
    }
    Ok(())
}
