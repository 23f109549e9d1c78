//! Acceptance checks. Prints one `criterion NN: PASS|FAIL` line per check,
//! followed by the measured quantities, and exits non-zero if any fails.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tauberian::corpus;
use tauberian::harness::{
    choose_mu, choose_mu_backward, landau_bridge, proof_inequality_backward, proof_inequality_forward,
    random_lemma_suite, verify_theorems, HarnessConfig, LemmaSuiteConfig, Theorem, Verdict,
};
use tauberian::oscillation::{
    empirical_limit, evaluate_block, hardy_stat, landau_stat, window_upper_index, Block, Direction, Functional,
    WindowParams,
};
use tauberian::sequence::DoubleSequence;
use tauberian::transform::{sigma_single, weighted_mean_field};
use tauberian::variation::{classify, VariationKind};
use tauberian::weights::WeightSequence;

const LEMMA_TOL: f64 = 1e-9;
const TRANSFORM_RTOL: f64 = 1e-12;
const REGULARITY_BOUND: f64 = 0.2;
const UNBOUNDED_FLOOR: f64 = 1e3;
const CONDITION_BOUND: f64 = 1.0;
const ALPHA_TOL: f64 = 0.01;
const SLOW_ALPHA_MAX: f64 = 0.05;
const LEMMA23_TOL: f64 = 1e-12;
const CLASSIFY_HORIZON: usize = 100_000;

type Outcome = (bool, String);

fn verdict(_id: u32, pass: bool, detail: String) -> Outcome {
    (pass, detail)
}

fn c01_lemma_identity_suite() -> Outcome {
    let records = random_lemma_suite(&LemmaSuiteConfig { seed: 1, ..Default::default() }).unwrap();
    let worst = records.iter().map(|r| r.residual).fold(0.0, f64::max);
    let dirs = [Direction::Forward, Direction::Backward].map(|d| records.iter().filter(|r| r.direction == d).count());
    let sequences = records.iter().map(|r| r.sequence).max().unwrap() + 1;
    verdict(
        1,
        worst <= LEMMA_TOL && dirs.iter().all(|&c| c > 0) && sequences == 100,
        format!("{sequences} sequences, {} forward + {} backward, max relative residual {worst:.3e}", dirs[0], dirs[1]),
    )
}

fn c02_transform_oracle_equivalence() -> Outcome {
    let weights = corpus::corpus().weights;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let table: Vec<f64> = (0..30 * 30).map(|_| rng.random_range(-1.0..1.0)).collect();
        let u = DoubleSequence::from_table(format!("table{k}"), 30, 30, table);
        let p = &weights[rng.random_range(0..weights.len())];
        let q = &weights[rng.random_range(0..weights.len())];
        let field = weighted_mean_field(&u, p, q, 29, 29).unwrap();
        for m in 0..30 {
            for n in 0..30 {
                let (a, b) = (field.sigma(m, n).re, sigma_single(&u, p, q, m, n).unwrap().re);
                worst = worst.max((a - b).abs() / b.abs().max(f64::MIN_POSITIVE));
            }
        }
    }
    verdict(2, worst <= TRANSFORM_RTOL, format!("20 pairs on 30x30, max relative difference {worst:.3e}"))
}

fn c03_regularity_positive_case() -> Outcome {
    let u = corpus::additive_convergent(1.0);
    let ones = WeightSequence::ones();
    let field = weighted_mean_field(&u, &ones, &ones, 400, 400).unwrap();
    let errs: Vec<f64> = [50, 100, 200, 400].iter().map(|&m| (field.sigma(m, m).re - 1.0).abs()).collect();
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    verdict(
        3,
        decreasing && errs[3] < REGULARITY_BOUND,
        format!("|sigma_MM - 1| at M=50,100,200,400: {errs:.4?}; strictly decreasing {decreasing}, bound {REGULARITY_BOUND}"),
    )
}

fn c04_boundedness_necessity() -> Outcome {
    let u = corpus::paper_unbounded();
    let est = empirical_limit(|m, n| u.value(m, n), &[8, 16, 32, 64], 0.5, 0.05).unwrap();
    let ones = WeightSequence::ones();
    let field = weighted_mean_field(&u, &ones, &ones, 16, 16).unwrap();
    let sup = field.sigma.cells().map(|(_, _, z)| (z.re - 2.0).abs()).fold(0.0, f64::max);
    verdict(
        4,
        est.converged && est.value.re == 2.0 && est.value.im == 0.0 && sup > UNBOUNDED_FLOOR,
        format!("u limit {} (converged {}), sup |sigma - 2| on [0,16]^2 = {sup:.3e}", est.value.re, est.converged),
    )
}

fn c05_counterexample_matrix() -> Outcome {
    let u = corpus::alternating();
    let ones = WeightSequence::ones();
    let s200 = weighted_mean_field(&u, &ones, &ones, 200, 200).unwrap().sigma(200, 200).norm();
    let (hp, hq) = hardy_stat(&u, &ones, &ones, 1..=200, 1..=200).unwrap();
    let cfg = HarnessConfig::default();
    let r = verify_theorems(&u, &ones, &ones, &[Theorem::T52], &cfg).unwrap().remove(0);
    let sigma = r.sigma_limit.as_ref().expect("sigma limit available");
    let sigma_zero = sigma.converged && sigma.value.norm() <= 1.0 / 201.0;
    verdict(
        5,
        sigma_zero && s200 <= 1.0 / 201.0 && !r.u_limit.converged && hp.min(hq) >= 402.0 && r.verdict == Verdict::ConsistentNegative,
        format!(
            "sigma limit {:.3e} (converged {}), |sigma_200,200| = {s200:.3e}, u converged {}, hardy ({hp}, {hq}), verdict {:?}",
            sigma.value.norm(),
            sigma.converged,
            r.u_limit.converged,
            r.verdict
        ),
    )
}

fn c06_tauberian_positive_case() -> Outcome {
    let u = corpus::additive_convergent(1.0);
    let cfg = HarnessConfig::default();
    let mut pass = true;
    let mut detail = Vec::new();
    for w in [WeightSequence::ones(), WeightSequence::harmonic()] {
        let reports = verify_theorems(&u, &w, &w, &[Theorem::T42, Theorem::T52], &cfg).unwrap();
        for r in &reports {
            let stat = r
                .condition_profiles
                .iter()
                .flat_map(|p| p.decisive_series())
                .filter_map(|(_, s)| s)
                .fold(0.0f64, |a, s| a.max(s.abs()));
            let gap = r.sigma_limit.as_ref().map(|s| (s.value - r.u_limit.value).norm());
            let ok = stat <= CONDITION_BOUND
                && r.verdict == Verdict::ConsistentPositive
                && gap.is_some_and(|g| g <= r.eps_agree);
            pass &= ok;
            detail.push(format!(
                "{}/{:?}: max|stat| {stat:.4}, verdict {:?}, |sigma - u| {} vs {:.4}{}",
                w.name(),
                r.theorem,
                r.verdict,
                gap.map_or("n/a".into(), |g| format!("{g:.4}")),
                r.eps_agree,
                r.sigma_limit.as_ref().map_or(String::new(), |s| format!(" (sigma converged {})", s.converged)),
            ));
        }
    }
    verdict(6, pass, detail.join("; "))
}

fn c07_variation_classifier() -> Outcome {
    let odd = WeightSequence::odd();
    let ones = classify(&WeightSequence::ones(), CLASSIFY_HORIZON, 0.05).unwrap();
    let sq = classify(&odd, CLASSIFY_HORIZON, 0.05).unwrap();
    let h = classify(&WeightSequence::harmonic(), CLASSIFY_HORIZON, 0.05).unwrap();
    let g = classify(&WeightSequence::geometric(2.0).unwrap(), CLASSIFY_HORIZON, 0.05).unwrap();
    let rv = |c: &tauberian::variation::VariationClass| c.kind == VariationKind::RegularlyVarying;
    let alpha = |c: &tauberian::variation::VariationClass| c.alpha_hat.unwrap_or(f64::NAN);
    let pass = rv(&ones)
        && (alpha(&ones) - 1.0).abs() <= ALPHA_TOL
        && rv(&sq)
        && (alpha(&sq) - 2.0).abs() <= ALPHA_TOL
        && rv(&h)
        && alpha(&h) <= SLOW_ALPHA_MAX
        && g.kind == VariationKind::RapidlyVarying
        && (g.lemma23_tail - 0.5).abs() <= LEMMA23_TOL;
    verdict(
        7,
        pass,
        format!(
            "ones {:?} {:.5}; odd {:?} {:.5}; harmonic {:?} {:.5}; geometric {:?} tail {}",
            ones.kind,
            alpha(&ones),
            sq.kind,
            alpha(&sq),
            h.kind,
            alpha(&h),
            g.kind,
            g.lemma23_tail
        ),
    )
}

fn c08_decomposition_inequality() -> Outcome {
    let c = corpus::corpus();
    let weights = [WeightSequence::ones(), WeightSequence::harmonic()];
    let (mut checked, mut violations, mut skipped) = (0usize, 0usize, Vec::new());
    for u in c.real_sequences() {
        for p in &weights {
            for q in &weights {
                for lambda in [1.1, 1.5] {
                    for kappa in [1.1, 1.5] {
                        let params = WindowParams::forward(lambda, kappa).unwrap();
                        let set = match evaluate_block(u, p, q, params, Block::new(0, 100, 0, 100), 1 << 24) {
                            Ok(Some(s)) => s,
                            other => {
                                skipped.push(format!("{}/{}x{}/{lambda},{kappa}: {:?}", u.name(), p.name(), q.name(), other.err()));
                                continue;
                            }
                        };
                        for m in 0..=100 {
                            for n in 0..=100 {
                                let both = set.value(Functional::SdBoth, m, n).unwrap();
                                let strong = set.value(Functional::SdStrongP, m, n).unwrap();
                                let single = set.value(Functional::SdQ, m, n).unwrap();
                                // Overflowed entries of u make some minima −∞; the
                                // comparison is then exact and needs no slack.
                                let scale = both.abs().max(strong.abs()).max(single.abs());
                                let slack = if scale.is_finite() { tauberian::accumulate::ulp(scale) } else { 0.0 };
                                checked += 1;
                                if !(both >= strong + single - slack) {
                                    violations += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    verdict(
        8,
        violations == 0 && skipped.is_empty(),
        format!("{checked} cells checked, {violations} violations, skipped {skipped:?}"),
    )
}

fn c09_proof_inequality_suites() -> Outcome {
    let c = corpus::corpus();
    let (mut checked, mut violations, mut errors) = (0usize, Vec::new(), Vec::new());
    for u in c.real_sequences() {
        for w in [WeightSequence::ones(), WeightSequence::harmonic()] {
            for m in [10, 20, 40, 80] {
                for d in [0.2, 0.5, 1.0] {
                    let tag = format!("{}/{}/m={m}/δ={d}", u.name(), w.name());
                    for r in [
                        proof_inequality_forward(u, &w, &w, m, m, d, d),
                        proof_inequality_backward(u, &w, &w, m, m, d, d),
                    ] {
                        match r {
                            Ok(ineq) => {
                                checked += 1;
                                if !ineq.holds {
                                    violations.push(format!("{tag}/{:?}", ineq.direction));
                                }
                            }
                            Err(e) => errors.push(format!("{tag}: {e}")),
                        }
                    }
                }
            }
        }
    }
    verdict(
        9,
        violations.is_empty() && errors.is_empty(),
        format!("{checked} inequalities, violations {violations:?}, errors {errors:?}"),
    )
}

fn c10_window_machinery() -> Outcome {
    let weights = corpus::corpus().weights;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let p = &weights[rng.random_range(0..weights.len())];
        let m = rng.random_range(1..=200usize).min(p.finite_limit(200).unwrap() / 2);
        let d: f64 = rng.random_range(0.05..1.0);
        let pm = p.prefix(m).unwrap();
        let c = 1.0 + d / 2.0;
        let scan_up = |t: f64| (m..).take_while(|&i| p.prefix(i).unwrap() <= t).last().unwrap();
        let mu = (m + 1..).find(|&i| p.prefix(i).unwrap() >= c * pm).unwrap();
        let back = (0..m).rev().find(|&i| c * p.prefix(i).unwrap() <= pm);
        let got_mu = choose_mu(p, m, d).unwrap();
        let post = p.prefix(got_mu - 1).unwrap() < c * pm && c * pm <= p.prefix(got_mu).unwrap();
        if window_upper_index(p, m, 1.0 + d).unwrap() != scan_up((1.0 + d) * pm)
            || got_mu != mu
            || !post
            || choose_mu_backward(p, m, d).ok() != back
        {
            mismatches += 1;
        }
    }
    verdict(10, mismatches == 0, format!("1000 queries, {mismatches} mismatches"))
}

fn c11_landau_bridge() -> Outcome {
    let u = corpus::additive_convergent(1.0);
    let ones = WeightSequence::ones();
    let (inf_p, _) = landau_stat(&u, &ones, &ones, 1..=1000, 1..=1000).unwrap();
    let m1 = -inf_p.min(0.0);
    let (mut samples, mut violations) = (0, 0);
    for m in [10, 20, 50, 100, 200, 400] {
        for n in [10, 100, 400] {
            for lambda in [2.0, 1.5, 1.25, 1.1, 1.05] {
                let s = landau_bridge(&u, &ones, m, n, lambda, m1).unwrap();
                samples += 1;
                violations += usize::from(!s.holds);
            }
        }
    }
    verdict(11, violations == 0, format!("M1 = {m1:.6}, {samples} samples, {violations} violations"))
}

fn c12_cli_determinism_and_exit_codes() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let run = |dir: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_tauberian"))
            .arg("--out")
            .arg(tmp.path().join(dir))
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    let a = run("a", &["--seed", "5", "verify-lemma"]);
    let b = run("b", &["--seed", "5", "verify-lemma"]);
    let same = std::fs::read(tmp.path().join("a/lemma.csv")).unwrap() == std::fs::read(tmp.path().join("b/lemma.csv")).unwrap();
    let geometric = run("g", &["--sequence", "additive_convergent", "--weights", "geometric", "analyze", "--theorem", "T41"]);
    let bad = run("h", &["--horizon", "3", "verify-lemma"]);
    verdict(
        12,
        a == 0 && b == 0 && same && geometric == 5 && bad == 2,
        format!("verify-lemma exits ({a}, {b}), identical {same}; geometric analyze {geometric}; bad horizon {bad}"),
    )
}

fn main() {
    let checks: [fn() -> Outcome; 12] = [
        c01_lemma_identity_suite,
        c02_transform_oracle_equivalence,
        c03_regularity_positive_case,
        c04_boundedness_necessity,
        c05_counterexample_matrix,
        c06_tauberian_positive_case,
        c07_variation_classifier,
        c08_decomposition_inequality,
        c09_proof_inequality_suites,
        c10_window_machinery,
        c11_landau_bridge,
        c12_cli_determinism_and_exit_codes,
    ];
    let mut failed = 0;
    for (k, check) in checks.iter().enumerate() {
        let start = std::time::Instant::now();
        let (pass, detail) = match std::panic::catch_unwind(check) {
            Ok(outcome) => outcome,
            Err(e) => (false, format!("panicked: {:?}", e.downcast_ref::<String>().map(String::as_str).or(e.downcast_ref::<&str>().copied()))),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {:02}: {}  [{:.1}s]  {detail}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
