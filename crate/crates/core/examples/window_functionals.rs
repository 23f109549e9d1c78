//! Slow decrease and slow oscillation windows at single points and over a
//! whole block.

use tauberian::corpus;
use tauberian::oscillation::{
    evaluate_block, functionals, window_lower_index, window_upper_index, Block, Functional, WindowParams,
};
use tauberian::weights::WeightSequence;

fn main() -> anyhow::Result<()> {
    let ones = WeightSequence::ones();
    let harmonic = WeightSequence::harmonic();
    println!("ones:     window(9, 1.5) ends at {}", window_upper_index(&ones, 9, 1.5)?);
    println!("ones:     backward window(19, 0.5) starts at {}", window_lower_index(&ones, 19, 0.5)?);
    println!("harmonic: window(100, 1.1) ends at {}", window_upper_index(&harmonic, 100, 1.1)?);

    let params = WindowParams::forward(1.5, 1.5)?;
    for seq in [corpus::alternating(), corpus::additive_convergent(1.0), corpus::complex_convergent()] {
        let f = functionals(&seq, &ones, &ones, 10, 10, params)?;
        println!(
            "{:<20} sd_both={:?} so_both={:.6} so_strong_P={:.6}",
            seq.name(),
            f.sd_both,
            f.so_both,
            f.so_strong_p
        );
    }

    let u = corpus::additive_convergent(1.0);
    let block = Block::tail(256, 0.5);
    let set = evaluate_block(&u, &harmonic, &harmonic, WindowParams::forward(1.05, 1.05)?, block, 1 << 23)?
        .expect("within budget");
    for f in Functional::ALL {
        println!("{:<12} tail stat on [{}, {}]^2: {:+.3e}", f.name(), block.m0, block.m1, set.tail_stat(f).unwrap());
    }
    Ok(())
}
