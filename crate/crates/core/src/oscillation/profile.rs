//! Tail statistics over a (scale ladder × horizon ladder) and the
//! finite-data trend rule applied to them.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use super::conditions::{hardy_stat, landau_stat};
use super::field::{evaluate_block, Block};
use super::{Direction, Functional, WindowParams};
use crate::error::Result;
use crate::sequence::DoubleSequence;
use crate::transform::fmt17;
use crate::weights::WeightSequence;

/// Which side of the statistic the condition constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StatKind {
    /// Bounded below: the tail infimum must not fall as the horizon grows.
    Liminf,
    /// Bounded above: the tail supremum must not rise.
    Limsup,
}

/// What a trend-holding profile must also satisfy at the largest horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrendRule {
    /// Window functionals: the limit must be 0, so the last value is within `ε_dec` of it.
    Vanishing,
    /// Scaled-difference conditions: only boundedness, no threshold.
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileEntry {
    pub functional: String,
    pub lambda: Option<f64>,
    pub kappa: Option<f64>,
    pub horizon: usize,
    /// `None` when the windows exceed the evaluation budget.
    pub tail_stat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionProfile {
    pub name: String,
    pub kind: StatKind,
    pub rule: TrendRule,
    pub direction: Direction,
    pub entries: Vec<ProfileEntry>,
}

fn trend_ok(kind: StatKind, v: &[f64]) -> bool {
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let slack = 1e-12 * scale;
    v.windows(2).all(|w| match kind {
        StatKind::Liminf => w[1] >= w[0] - slack,
        StatKind::Limsup => w[1] <= w[0] + slack,
    })
}

impl DecisionProfile {
    /// Horizon-ordered statistics at the rung closest to 1.
    pub fn decisive_series(&self) -> Vec<(usize, Option<f64>)> {
        let closest = self
            .entries
            .iter()
            .filter_map(|e| e.lambda)
            .fold(None, |best: Option<f64>, l| {
                let d = (l.ln()).abs();
                match best {
                    Some(b) if (b.ln()).abs() <= d => Some(b),
                    _ => Some(l),
                }
            });
        let mut series: Vec<(usize, Option<f64>)> = self
            .entries
            .iter()
            .filter(|e| e.lambda == closest)
            .map(|e| (e.horizon, e.tail_stat))
            .collect();
        series.sort_by_key(|s| s.0);
        series
    }

    /// Finite-data check of the condition: over the last three horizons at
    /// the rung closest to 1 the statistic moves monotonically toward its
    /// bound, and for vanishing rules ends within `eps_dec` of 0.
    pub fn trend_holds(&self, eps_dec: f64) -> bool {
        let series = self.decisive_series();
        if series.len() < 3 {
            return false;
        }
        let last: Option<Vec<f64>> = series[series.len() - 3..].iter().map(|s| s.1).collect();
        let Some(last) = last else {
            return false;
        };
        let end = last[2];
        let bound_ok = match (self.rule, self.kind) {
            (TrendRule::Bounded, _) => end.is_finite(),
            (TrendRule::Vanishing, StatKind::Liminf) => end >= -eps_dec,
            (TrendRule::Vanishing, StatKind::Limsup) => end <= eps_dec,
        };
        bound_ok && trend_ok(self.kind, &last)
    }
}

/// Statistics of every applicable window functional on tail blocks
/// `[⌈f·h⌉, h]²`. `rungs` are forward `(λ, κ)` pairs; backward profiles
/// use the reciprocals.
pub fn window_profiles(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    rungs: &[(f64, f64)],
    horizons: &[usize],
    direction: Direction,
    tail_fraction: f64,
    budget: usize,
) -> Result<Vec<DecisionProfile>> {
    let mut params = Vec::with_capacity(rungs.len());
    for &(l, k) in rungs {
        let fwd = WindowParams::forward(l, k)?;
        params.push(match direction {
            Direction::Forward => fwd,
            Direction::Backward => fwd.mirrored(),
        });
    }
    let cells: Vec<(usize, usize)> = (0..params.len())
        .flat_map(|r| horizons.iter().map(move |&h| (r, h)))
        .collect();
    let sets = cells
        .par_iter()
        .map(|&(r, h)| evaluate_block(seq, p, q, params[r], Block::tail(h, tail_fraction), budget))
        .collect::<Result<Vec<_>>>()?;
    let functionals: &[Functional] = if seq.is_real() { &Functional::ALL } else { &Functional::SO };
    Ok(functionals
        .iter()
        .map(|&f| DecisionProfile {
            name: f.name().to_string(),
            kind: if f.is_decrease() { StatKind::Liminf } else { StatKind::Limsup },
            rule: TrendRule::Vanishing,
            direction,
            entries: cells
                .iter()
                .zip(&sets)
                .map(|(&(r, h), set)| ProfileEntry {
                    functional: f.name().to_string(),
                    lambda: Some(params[r].lambda),
                    kappa: Some(params[r].kappa),
                    horizon: h,
                    tail_stat: set.as_ref().and_then(|s| s.tail_stat(f)),
                })
                .collect(),
        })
        .collect())
}

/// Landau (`inf`) or Hardy (`sup`) statistics on tail blocks, as the pair
/// of profiles `<prefix>_P` and `<prefix>_Q`.
pub fn condition_profiles(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    kind: StatKind,
    horizons: &[usize],
    tail_fraction: f64,
) -> Result<[DecisionProfile; 2]> {
    let prefix = match kind {
        StatKind::Liminf => "landau",
        StatKind::Limsup => "hardy",
    };
    let stats = horizons
        .iter()
        .map(|&h| {
            let b = Block::tail(h, tail_fraction);
            let (m0, n0) = (b.m0.max(1), b.n0.max(1));
            match kind {
                StatKind::Liminf => landau_stat(seq, p, q, m0..=b.m1, n0..=b.n1),
                StatKind::Limsup => hardy_stat(seq, p, q, m0..=b.m1, n0..=b.n1),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let make = |axis: &str, pick: fn(&(f64, f64)) -> f64| {
        let name = format!("{prefix}_{axis}");
        DecisionProfile {
            name: name.clone(),
            kind,
            rule: TrendRule::Bounded,
            direction: Direction::Forward,
            entries: horizons
                .iter()
                .zip(&stats)
                .map(|(&h, s)| ProfileEntry {
                    functional: name.clone(),
                    lambda: None,
                    kappa: None,
                    horizon: h,
                    tail_stat: Some(pick(s)),
                })
                .collect(),
        }
    };
    Ok([make("P", |s| s.0), make("Q", |s| s.1)])
}

/// One value of a functional at a sampled cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub functional: String,
    pub lambda: f64,
    pub kappa: f64,
    pub horizon: usize,
    pub m: usize,
    pub n: usize,
    pub value: Option<f64>,
}

/// Evenly spaced indices `lo..=hi`, at most `count`, endpoints included.
pub fn lattice(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if count <= 1 || lo == hi {
        return vec![hi];
    }
    let mut v: Vec<usize> = (0..count)
        .map(|k| lo + ((hi - lo) as f64 * k as f64 / (count - 1) as f64).round() as usize)
        .collect();
    v.dedup();
    v
}

/// Values of `f` on a `points × points` lattice of each tail block.
pub fn sweep(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    f: Functional,
    rungs: &[(f64, f64)],
    horizons: &[usize],
    tail_fraction: f64,
    points: usize,
    budget: usize,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &(l, k) in rungs {
        let params = WindowParams::forward(l, k)?;
        for &h in horizons {
            let block = Block::tail(h, tail_fraction);
            let set = evaluate_block(seq, p, q, params, block, budget)?;
            for &m in &lattice(block.m0, block.m1, points) {
                for &n in &lattice(block.n0, block.n1, points) {
                    let value = match &set {
                        Some(s) => s.value(f, m, n),
                        None => Some(super::functional(seq, p, q, f, m, n, params)?),
                    };
                    rows.push(SweepRow {
                        functional: f.name().to_string(),
                        lambda: l,
                        kappa: k,
                        horizon: h,
                        m,
                        n,
                        value,
                    });
                }
            }
        }
    }
    Ok(rows)
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

/// CSV `functional,lambda,kappa,horizon,m,n,value`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "functional,lambda,kappa,horizon,m,n,value")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.functional,
            fmt17(r.lambda),
            fmt17(r.kappa),
            r.horizon,
            r.m,
            r.n,
            opt(r.value)
        )?;
    }
    Ok(())
}

/// CSV `functional,lambda,kappa,horizon,tail_stat`; blank fields for
/// conditions without scale factors and for statistics over budget.
pub fn write_profiles_csv<'a, W, I>(profiles: I, mut out: W) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a DecisionProfile>,
{
    writeln!(out, "functional,lambda,kappa,horizon,tail_stat")?;
    for p in profiles {
        let name = match p.direction {
            Direction::Forward => p.name.clone(),
            Direction::Backward => format!("{}'", p.name),
        };
        for e in &p.entries {
            writeln!(
                out,
                "{},{},{},{},{}",
                name,
                opt(e.lambda),
                opt(e.kappa),
                e.horizon,
                opt(e.tail_stat)
            )?;
        }
    }
    Ok(())
}
