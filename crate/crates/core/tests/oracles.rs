//! Library results against independent reference computations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tauberian::corpus;
use tauberian::harness::{choose_mu, choose_mu_backward};
use tauberian::oscillation::{window_lower_index, window_upper_index};
use tauberian::sequence::DoubleSequence;
use tauberian::transform::weighted_mean_field;
use tauberian::weights::WeightSequence;

/// σ of an integer table under integer weights, as an exact fraction.
fn exact_sigma(table: &[i64], cols: usize, p: &[i128], q: &[i128], m: usize, n: usize) -> (i128, i128) {
    let mut num = 0i128;
    for i in 0..=m {
        for j in 0..=n {
            num += p[i] * q[j] * table[i * cols + j] as i128;
        }
    }
    let pm: i128 = p[..=m].iter().sum();
    let qn: i128 = q[..=n].iter().sum();
    (num, pm * qn)
}

#[test]
fn sigma_matches_exact_fractions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let size = 30;
    let integer_weights: [(WeightSequence, fn(usize) -> i128); 2] = [
        (WeightSequence::ones(), |_| 1),
        (WeightSequence::odd(), |m| 2 * m as i128 + 1),
    ];
    for trial in 0..8 {
        let table: Vec<i64> = (0..size * size).map(|_| rng.random_range(-1000..=1000)).collect();
        let seq = DoubleSequence::from_table("t", size, size, table.iter().map(|&v| v as f64).collect());
        let (p, pw) = &integer_weights[trial % 2];
        let (q, qw) = &integer_weights[(trial / 2) % 2];
        let pi: Vec<i128> = (0..size).map(pw).collect();
        let qi: Vec<i128> = (0..size).map(qw).collect();
        let field = weighted_mean_field(&seq, p, q, size - 1, size - 1).unwrap();
        for m in 0..size {
            for n in 0..size {
                let (num, den) = exact_sigma(&table, size, &pi, &qi, m, n);
                // Both fit in 53 bits, so this quotient is correctly rounded.
                let want = num as f64 / den as f64;
                let got = field.sigma(m, n).re;
                assert!((got - want).abs() <= f64::EPSILON * want.abs(), "trial {trial} ({m},{n}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn prefix_sums_match_closed_forms() {
    let ones = WeightSequence::ones();
    let odd = WeightSequence::odd();
    for m in [0, 1, 10, 1000, 100_000] {
        assert_eq!(ones.prefix(m).unwrap(), (m + 1) as f64);
        assert_eq!(odd.prefix(m).unwrap(), ((m + 1) * (m + 1)) as f64);
    }
    let g = WeightSequence::geometric(2.0).unwrap();
    for m in [0, 5, 52] {
        assert_eq!(g.prefix(m).unwrap(), 2f64.powi(m as i32 + 1) - 1.0);
    }
    // Harmonic prefix against a high-order asymptotic expansion.
    let h = WeightSequence::harmonic();
    let n = 1e6_f64;
    let gamma = 0.577_215_664_901_532_9_f64;
    let h_n = n.ln() + gamma + 1.0 / (2.0 * n) - 1.0 / (12.0 * n * n);
    assert!((h.prefix(999_999).unwrap() - h_n).abs() < 1e-12);
}

fn random_query(rng: &mut ChaCha8Rng, weights: &[WeightSequence]) -> (WeightSequence, usize, f64) {
    let p = weights[rng.random_range(0..weights.len())].clone();
    let m = rng.random_range(0..=200usize).min(p.finite_limit(200).unwrap() / 2);
    (p, m, rng.random_range(0.05..1.0))
}

fn prefixes_until(p: &WeightSequence, bound: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut i = 0;
    while let Ok(v) = p.prefix(i) {
        out.push(v);
        if v > bound {
            break;
        }
        i += 1;
    }
    out
}

#[test]
fn window_indices_match_linear_scans() {
    let weights = corpus::corpus().weights;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let (p, m, d) = random_query(&mut rng, &weights);
        let lambda = 1.0 + d;
        let pm = p.prefix(m).unwrap();
        let table = prefixes_until(&p, lambda * pm);
        let upper = (0..table.len()).rev().find(|&i| table[i] <= lambda * pm).unwrap();
        assert_eq!(window_upper_index(&p, m, lambda).unwrap(), upper, "{} m={m} λ={lambda}", p.name());

        let shrink = 1.0 / lambda;
        let lower = (0..=m).find(|&i| table[i] > shrink * pm).unwrap();
        assert_eq!(window_lower_index(&p, m, shrink).unwrap(), lower, "{} m={m} λ={shrink}", p.name());
    }
}

#[test]
fn choosers_match_linear_scans() {
    let weights = corpus::corpus().weights;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let (p, m, delta) = random_query(&mut rng, &weights);
        let c = 1.0 + delta / 2.0;
        let pm = p.prefix(m).unwrap();
        let table = prefixes_until(&p, c * pm);
        let mu = (m + 1..table.len()).find(|&i| table[i] >= c * pm).unwrap();
        assert_eq!(choose_mu(&p, m, delta).unwrap(), mu, "{} m={m} δ={delta}", p.name());
        assert!(table[mu - 1] < c * pm && c * pm <= table[mu]);

        match (0..m).rev().find(|&i| c * table[i] <= pm) {
            Some(back) => assert_eq!(choose_mu_backward(&p, m, delta).unwrap(), back),
            None => assert!(choose_mu_backward(&p, m, delta).is_err()),
        }
    }
}
