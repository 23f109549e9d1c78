//! One-sided (Landau) and two-sided (Hardy) bounds on scaled differences
//! `(P_m/p_m)Δ₁₀u_mn` and `(Q_n/q_n)Δ₀₁u_mn`.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequence::DoubleSequence;
use crate::weights::WeightSequence;

fn scales(w: &WeightSequence, range: &RangeInclusive<usize>) -> Result<Vec<f64>> {
    range.clone().map(|k| Ok(w.prefix(k)? / w.weight(k)?)).collect()
}

fn check_ranges(op: &'static str, m_range: &RangeInclusive<usize>, n_range: &RangeInclusive<usize>) -> Result<()> {
    if m_range.is_empty() || n_range.is_empty() {
        return Err(Error::domain(op, "empty index range"));
    }
    if *m_range.start() == 0 || *n_range.start() == 0 {
        return Err(Error::domain(op, "ranges must start at index 1 or later"));
    }
    Ok(())
}

/// Folds `g` over both scaled differences at every cell of the ranges.
fn fold_scaled<G>(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m_range: &RangeInclusive<usize>,
    n_range: &RangeInclusive<usize>,
    init: f64,
    g: G,
) -> Result<(f64, f64)>
where
    G: Fn(f64, Complex64) -> f64 + Sync,
{
    let sp = scales(p, m_range)?;
    let sq = scales(q, n_range)?;
    let (m0, n0) = (*m_range.start(), *n_range.start());
    m_range
        .clone()
        .into_par_iter()
        .map(|m| {
            let mut acc = (init, init);
            let mut left = seq.value(m, n0 - 1);
            for n in n_range.clone() {
                let u = seq.value(m, n);
                let dp = (u - seq.value(m - 1, n)) * sp[m - m0];
                let dq = (u - left) * sq[n - n0];
                if dp.re.is_nan() || dp.im.is_nan() || dq.re.is_nan() || dq.im.is_nan() {
                    return Err(Error::NonFinite { m, n });
                }
                acc = (g(acc.0, dp), g(acc.1, dq));
                left = u;
            }
            Ok(acc)
        })
        .try_reduce(|| (init, init), |a, b| Ok((g_pair(&g, a.0, b.0), g_pair(&g, a.1, b.1))))
}

fn g_pair<G: Fn(f64, Complex64) -> f64>(g: &G, a: f64, b: f64) -> f64 {
    g(a, Complex64::new(b, 0.0))
}

/// Infima of `(P_m/p_m)Δ₁₀u_mn` and `(Q_n/q_n)Δ₀₁u_mn` over the ranges.
pub fn landau_stat(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m_range: RangeInclusive<usize>,
    n_range: RangeInclusive<usize>,
) -> Result<(f64, f64)> {
    seq.require_real("landau_stat")?;
    check_ranges("landau_stat", &m_range, &n_range)?;
    fold_scaled(seq, p, q, &m_range, &n_range, f64::INFINITY, |a, d| a.min(d.re))
}

/// Suprema of `|(P_m/p_m)Δ₁₀u_mn|` and `|(Q_n/q_n)Δ₀₁u_mn|` over the ranges.
pub fn hardy_stat(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m_range: RangeInclusive<usize>,
    n_range: RangeInclusive<usize>,
) -> Result<(f64, f64)> {
    check_ranges("hardy_stat", &m_range, &n_range)?;
    fold_scaled(seq, p, q, &m_range, &n_range, 0.0, |a, d| a.max(d.norm()))
}
