use proptest::prelude::*;
use tauberian::accumulate::ulp;
use tauberian::harness::{choose_mu, choose_mu_backward, lemma_backward, lemma_forward};
use tauberian::oscillation::{
    functional, sd_functional_both, sd_functional_p, sd_functional_q, sd_functional_strong_p, so_functional_p,
    Functional, WindowParams,
};
use tauberian::sequence::DoubleSequence;
use tauberian::transform::{sigma_single, weighted_mean_field};
use tauberian::weights::WeightSequence;

fn weight(k: usize) -> WeightSequence {
    match k {
        0 => WeightSequence::ones(),
        1 => WeightSequence::harmonic(),
        2 => WeightSequence::odd(),
        _ => WeightSequence::power(0.5).unwrap(),
    }
}

/// Deterministic pseudo-random real sequence indexed by `seed`.
fn noisy(seed: u64) -> DoubleSequence {
    let s = seed as f64;
    DoubleSequence::real("noisy", move |m, n| {
        let x = (s + 12.9898 * m as f64 + 78.233 * n as f64).sin() * 43758.5453;
        x - x.floor() - 0.5
    })
}

fn window(p: &WeightSequence, m: usize, lambda: f64) -> Vec<usize> {
    let pm = p.prefix(m).unwrap();
    (m..).take_while(|&i| p.prefix(i).unwrap() <= lambda * pm).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functionals_match_brute_force(
        seed in 0u64..1000, wp in 0usize..4, wq in 0usize..4,
        m in 0usize..20, n in 0usize..20, lambda in 1.01f64..1.6, kappa in 1.01f64..1.6,
    ) {
        let (u, p, q) = (noisy(seed), weight(wp), weight(wq));
        let params = WindowParams::forward(lambda, kappa).unwrap();
        let (is, js) = (window(&p, m, lambda), window(&q, n, kappa));
        let v = |i: usize, j: usize| u.value(i, j).re;
        let min_p = is.iter().map(|&i| v(i, n) - v(m, n)).fold(f64::INFINITY, f64::min);
        let mut strong_p = f64::INFINITY;
        let mut both = f64::INFINITY;
        let mut so_strong_q = 0.0f64;
        for &i in &is {
            for &j in &js {
                strong_p = strong_p.min(v(i, j) - v(m, j));
                both = both.min(v(i, j) - v(m, n));
                so_strong_q = so_strong_q.max((v(i, j) - v(i, n)).abs());
            }
        }
        prop_assert_eq!(functional(&u, &p, &q, Functional::SdP, m, n, params).unwrap(), min_p);
        prop_assert_eq!(functional(&u, &p, &q, Functional::SdStrongP, m, n, params).unwrap(), strong_p);
        prop_assert_eq!(functional(&u, &p, &q, Functional::SdBoth, m, n, params).unwrap(), both);
        prop_assert_eq!(functional(&u, &p, &q, Functional::SoStrongQ, m, n, params).unwrap(), so_strong_q);
    }

    #[test]
    fn rectangle_minimum_splits(
        seed in 0u64..1000, wp in 0usize..4, wq in 0usize..4,
        m in 0usize..40, n in 0usize..40, lambda in 1.01f64..1.6, kappa in 1.01f64..1.6,
    ) {
        let (u, p, q) = (noisy(seed), weight(wp), weight(wq));
        let both = sd_functional_both(&u, &p, &q, m, n, lambda, kappa).unwrap();
        let strong = sd_functional_strong_p(&u, &p, &q, m, n, lambda, kappa).unwrap();
        let single = sd_functional_q(&u, &q, m, n, kappa).unwrap();
        let scale = both.abs().max(strong.abs()).max(single.abs());
        prop_assert!(both >= strong + single - ulp(scale));
    }

    #[test]
    fn wider_windows_give_more_extreme_values(
        seed in 0u64..1000, wp in 0usize..4, m in 0usize..40, n in 0usize..40,
        l1 in 1.01f64..1.5, extra in 0.0f64..0.5,
    ) {
        let (u, p) = (noisy(seed), weight(wp));
        let l2 = l1 + extra;
        prop_assert!(sd_functional_p(&u, &p, m, n, l1).unwrap() >= sd_functional_p(&u, &p, m, n, l2).unwrap());
        prop_assert!(so_functional_p(&u, &p, m, n, l1).unwrap() <= so_functional_p(&u, &p, m, n, l2).unwrap());
    }

    #[test]
    fn single_point_window_is_zero(seed in 0u64..1000, m in 0usize..200, n in 0usize..200) {
        let u = noisy(seed);
        let ones = WeightSequence::ones();
        // (m + 1.5)/(m + 1) < (m + 2)/(m + 1), so the window is {m}.
        let lambda = (m as f64 + 1.5) / (m as f64 + 1.0);
        prop_assert_eq!(sd_functional_p(&u, &ones, m, n, lambda).unwrap(), 0.0);
        prop_assert_eq!(so_functional_p(&u, &ones, m, n, lambda).unwrap(), 0.0);
    }

    #[test]
    fn field_agrees_with_direct_sums(seed in 0u64..1000, wp in 0usize..4, wq in 0usize..4) {
        let (u, p, q) = (noisy(seed), weight(wp), weight(wq));
        let field = weighted_mean_field(&u, &p, &q, 24, 24).unwrap();
        for m in (0..=24).step_by(3) {
            for n in (0..=24).step_by(4) {
                let a = field.sigma(m, n).re;
                let b = sigma_single(&u, &p, &q, m, n).unwrap().re;
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300));
            }
        }
    }

    #[test]
    fn decompositions_reproduce_difference(
        seed in 0u64..1000, wp in 0usize..4, wq in 0usize..4,
        m in 0usize..20, n in 0usize..20, dm in 1usize..20, dn in 1usize..20,
    ) {
        let (u, p, q) = (noisy(seed), weight(wp), weight(wq));
        let f = lemma_forward(&u, &p, &q, m, n, m + dm, n + dn).unwrap();
        prop_assert!(f.relative_residual() <= 1e-9);
        let b = lemma_backward(&u, &p, &q, m + dm, n + dn, m, n).unwrap();
        prop_assert!(b.relative_residual() <= 1e-9);
    }

    #[test]
    fn chooser_postconditions(wp in 0usize..4, m in 1usize..500, delta in 0.01f64..2.0) {
        let p = weight(wp);
        let c = 1.0 + delta / 2.0;
        let pm = p.prefix(m).unwrap();
        let mu = choose_mu(&p, m, delta).unwrap();
        prop_assert!(mu > m);
        prop_assert!(p.prefix(mu - 1).unwrap() < c * pm && c * pm <= p.prefix(mu).unwrap());
        if let Ok(b) = choose_mu_backward(&p, m, delta) {
            prop_assert!(b < m);
            prop_assert!(c * p.prefix(b).unwrap() <= pm && c * p.prefix(b + 1).unwrap() > pm);
        }
    }
}
