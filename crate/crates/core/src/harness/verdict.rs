//! Limits, condition profiles and the four-valued verdict.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillation::field::DEFAULT_REGION_BUDGET;
use crate::oscillation::limit::{noise_floor, residuals_converge, validate_ladder};
use crate::oscillation::profile::{condition_profiles, window_profiles};
use crate::oscillation::{empirical_limit, DecisionProfile, Direction, LimitEstimate, StatKind};
use crate::sequence::DoubleSequence;
use crate::transform::RowKernel;
use crate::variation::{classify, VariationClass};
use crate::weights::WeightSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// Slow decrease relative to both weights, real sequences.
    T41,
    /// One-sided bounds on scaled differences, real sequences.
    T42,
    /// Slow oscillation relative to both weights.
    T51,
    /// Two-sided bounds on scaled differences.
    T52,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::T41, Theorem::T42, Theorem::T51, Theorem::T52];

    pub fn requires_real(self) -> bool {
        matches!(self, Theorem::T41 | Theorem::T42)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('.', "");
        match key.strip_prefix('T').unwrap_or(&key) {
            "41" => Ok(Theorem::T41),
            "42" => Ok(Theorem::T42),
            "51" => Ok(Theorem::T51),
            "52" => Ok(Theorem::T52),
            _ => Err(Error::Config(format!("unknown theorem `{s}` (expected T41, T42, T51 or T52)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Hypotheses trend-hold and `u` converges to the limit of σ.
    ConsistentPositive,
    /// A hypothesis fails and `u` does not converge.
    ConsistentNegative,
    /// A hypothesis fails but `u` converges anyway.
    VacuouslyConsistent,
    /// Hypotheses trend-hold but `u` does not follow σ.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub classify_horizon: usize,
    pub tol: f64,
    pub profile_horizons: Vec<usize>,
    pub lambda_ladder: Vec<f64>,
    pub kappa_ladder: Vec<f64>,
    pub limit_ladder: Vec<usize>,
    pub tail_fraction: f64,
    pub eps_dec: f64,
    /// Agreement tolerance relative to `1 + |σ limit|`.
    pub eps_agree: f64,
    pub region_budget: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            classify_horizon: 100_000,
            tol: 0.05,
            profile_horizons: vec![64, 128, 256, 512],
            lambda_ladder: vec![2.0, 1.5, 1.25, 1.1, 1.05],
            kappa_ladder: vec![2.0, 1.5, 1.25, 1.1, 1.05],
            limit_ladder: vec![512, 1024, 2048, 4096],
            tail_fraction: 0.5,
            eps_dec: 0.05,
            eps_agree: 0.02,
            region_budget: DEFAULT_REGION_BUDGET,
        }
    }
}

impl HarnessConfig {
    fn rungs(&self) -> Vec<(f64, f64)> {
        self.lambda_ladder.iter().copied().zip(self.kappa_ladder.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauberianReport {
    pub theorem: Theorem,
    pub sequence: String,
    pub weight_class_p: VariationClass,
    pub weight_class_q: VariationClass,
    pub condition_profiles: Vec<DecisionProfile>,
    pub conditions: Vec<ConditionCheck>,
    /// Backward-window profiles; reported, not used in the verdict.
    pub backward_profiles: Vec<DecisionProfile>,
    /// `None` when σ cannot be evaluated at the ladder horizons.
    pub sigma_limit: Option<LimitEstimate>,
    pub u_limit: LimitEstimate,
    pub hypotheses_hold: bool,
    /// Absolute tolerance used for `|σ limit − u limit|`.
    pub eps_agree: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl TauberianReport {
    pub fn weights_regular(&self) -> bool {
        self.weight_class_p.is_regular() && self.weight_class_q.is_regular()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Empirical limit of σ on weight-scaled tails
/// `{(m, n) : P_m ≥ f·P_h, Q_n ≥ f·Q_h, m, n ≤ h}`, streamed row by row.
///
/// Horizons where `P_h·Q_h` overflows are dropped; fewer than three usable
/// horizons is an error.
pub fn sigma_limit(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    ladder: &[usize],
    tail_fraction: f64,
    eps_dec: f64,
) -> Result<LimitEstimate> {
    validate_ladder(ladder, tail_fraction)?;
    let mut usable = Vec::with_capacity(ladder.len());
    let mut last_err = None;
    for &h in ladder {
        let ok = p.prefix(h).and_then(|ph| Ok(ph * q.prefix(h)?)).and_then(|v| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Overflow {
                    family: format!("{}×{}", p.family(), q.family()),
                    index: h,
                })
            }
        });
        match ok {
            Ok(()) => usable.push(h),
            Err(e) => last_err = Some(e),
        }
    }
    if usable.len() < 3 {
        return Err(last_err.unwrap_or_else(|| Error::domain("sigma_limit", "need at least 3 usable horizons")));
    }
    let top = *usable.last().expect("non-empty");
    let mut row = vec![Complex64::default(); top + 1];

    let mut kernel = RowKernel::new(seq, p, q, top, top)?;
    for _ in 0..=top {
        kernel.advance(&mut row, None)?;
    }
    let l = row[top];

    // Tail bounds per horizon: first m (n) whose prefix reaches f·P_h (f·Q_h).
    let pp = kernel.p_prefix().to_vec();
    let qp = kernel.q_prefix().to_vec();
    let first_at_least = |v: &[f64], h: usize| v[..=h].partition_point(|&x| x < tail_fraction * v[h]);
    let bounds: Vec<(usize, usize, usize)> = usable
        .iter()
        .map(|&h| (h, first_at_least(&pp, h), first_at_least(&qp, h)))
        .collect();
    let mut sup = vec![0.0f64; usable.len()];
    let mut kernel = RowKernel::new(seq, p, q, top, top)?;
    for m in 0..=top {
        kernel.advance(&mut row, None)?;
        for (k, &(h, m_lo, n_lo)) in bounds.iter().enumerate() {
            if m < m_lo || m > h {
                continue;
            }
            for (n, z) in row.iter().enumerate().take(h + 1).skip(n_lo) {
                let r = (z - l).norm();
                if r.is_nan() {
                    return Err(Error::NonFinite { m, n });
                }
                sup[k] = sup[k].max(r);
            }
        }
    }
    let residual_profile: Vec<(usize, f64)> = usable.iter().copied().zip(sup.iter().copied()).collect();
    Ok(LimitEstimate {
        value: l,
        tail_start: bounds.last().expect("non-empty").1,
        converged: residuals_converge(&sup, eps_dec, noise_floor(l)),
        residual_profile,
    })
}

fn profile_or_note(
    result: Result<Vec<DecisionProfile>>,
    what: &str,
    notes: &mut Vec<String>,
) -> Vec<DecisionProfile> {
    match result {
        Ok(v) => v,
        Err(e) => {
            notes.push(format!("{what} unavailable: {e}"));
            Vec::new()
        }
    }
}

fn holds(profiles: &[DecisionProfile], name: &str, eps_dec: f64) -> bool {
    profiles.iter().find(|p| p.name == name).is_some_and(|p| p.trend_holds(eps_dec))
}

/// Reports for several theorems on one configuration, sharing the
/// classifications, limits and profiles.
pub fn verify_theorems(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    theorems: &[Theorem],
    cfg: &HarnessConfig,
) -> Result<Vec<TauberianReport>> {
    if let Some(t) = theorems.iter().find(|t| t.requires_real()) {
        if !seq.is_real() {
            return Err(Error::ComplexInput {
                op: match t {
                    Theorem::T41 => "verify_theorem(T41)",
                    _ => "verify_theorem(T42)",
                },
            });
        }
    }
    if cfg.lambda_ladder.len() != cfg.kappa_ladder.len() {
        return Err(Error::Config("λ and κ ladders must have equal length".into()));
    }
    let class_p = classify(p, cfg.classify_horizon, cfg.tol)?;
    let class_q = if p.name() == q.name() {
        class_p.clone()
    } else {
        classify(q, cfg.classify_horizon, cfg.tol)?
    };

    let mut shared_notes = Vec::new();
    let sigma = match sigma_limit(seq, p, q, &cfg.limit_ladder, cfg.tail_fraction, cfg.eps_dec) {
        Ok(s) => Some(s),
        Err(e) => {
            shared_notes.push(format!("σ limit unavailable, treated as not summable: {e}"));
            None
        }
    };
    let u_limit = empirical_limit(|m, n| seq.value(m, n), &cfg.limit_ladder, cfg.tail_fraction, cfg.eps_dec)?;

    let rungs = cfg.rungs();
    let needs_windows = theorems.iter().any(|t| matches!(t, Theorem::T41 | Theorem::T51));
    let (forward, backward) = if needs_windows {
        let f = window_profiles(
            seq,
            p,
            q,
            &rungs,
            &cfg.profile_horizons,
            Direction::Forward,
            cfg.tail_fraction,
            cfg.region_budget,
        );
        let b = window_profiles(
            seq,
            p,
            q,
            &rungs,
            &cfg.profile_horizons,
            Direction::Backward,
            cfg.tail_fraction,
            cfg.region_budget,
        );
        (
            profile_or_note(f, "forward window profiles", &mut shared_notes),
            profile_or_note(b, "backward window profiles", &mut shared_notes),
        )
    } else {
        (Vec::new(), Vec::new())
    };
    let conditions_for = |kind: StatKind, notes: &mut Vec<String>| {
        let r = condition_profiles(seq, p, q, kind, &cfg.profile_horizons, cfg.tail_fraction).map(|a| a.to_vec());
        profile_or_note(r, "scaled-difference profiles", notes)
    };

    let mut reports = Vec::with_capacity(theorems.len());
    for &theorem in theorems {
        let mut notes = shared_notes.clone();
        let (profiles, backward_profiles, names): (Vec<DecisionProfile>, Vec<DecisionProfile>, &[&str]) = match theorem {
            Theorem::T41 => (
                forward.iter().filter(|p| p.name.starts_with("sd_")).cloned().collect(),
                backward.iter().filter(|p| p.name.starts_with("sd_")).cloned().collect(),
                &["sd_P", "sd_Q", "sd_strong_P", "sd_strong_Q"],
            ),
            Theorem::T51 => (
                forward.iter().filter(|p| p.name.starts_with("so_")).cloned().collect(),
                backward.iter().filter(|p| p.name.starts_with("so_")).cloned().collect(),
                &["so_P", "so_Q", "so_strong_P", "so_strong_Q"],
            ),
            Theorem::T42 => (conditions_for(StatKind::Liminf, &mut notes), Vec::new(), &["landau_P", "landau_Q"]),
            Theorem::T52 => (conditions_for(StatKind::Limsup, &mut notes), Vec::new(), &["hardy_P", "hardy_Q"]),
        };
        let conditions: Vec<ConditionCheck> = names
            .iter()
            .map(|&name| ConditionCheck {
                name: name.to_string(),
                holds: holds(&profiles, name, cfg.eps_dec),
            })
            .collect();
        let c = |k: usize| conditions[k].holds;
        let conditions_hold = match theorem {
            Theorem::T41 | Theorem::T51 => c(0) && c(1) && (c(2) || c(3)),
            Theorem::T42 | Theorem::T52 => c(0) && c(1),
        };
        for check in conditions.iter().filter(|c| !c.holds) {
            notes.push(format!("condition {} does not trend-hold", check.name));
        }
        let weights_regular = class_p.is_regular() && class_q.is_regular();
        if !weights_regular {
            notes.push(format!(
                "weights not both regularly varying: {} is {:?}, {} is {:?}",
                class_p.name, class_p.kind, class_q.name, class_q.kind
            ));
        }
        let summable = sigma.as_ref().is_some_and(|s| s.converged);
        if sigma.as_ref().is_some_and(|s| !s.converged) {
            notes.push("σ does not converge on the ladder".into());
        }
        let hypotheses_hold = weights_regular && conditions_hold && summable;
        let eps_agree = cfg.eps_agree * (1.0 + sigma.as_ref().map_or(0.0, |s| s.value.norm()));
        let agree = sigma.as_ref().is_some_and(|s| (s.value - u_limit.value).norm() <= eps_agree);
        let verdict = match (hypotheses_hold, u_limit.converged) {
            (true, true) if agree => Verdict::ConsistentPositive,
            (true, _) => Verdict::Inconsistent,
            (false, true) => Verdict::VacuouslyConsistent,
            (false, false) => Verdict::ConsistentNegative,
        };
        if verdict == Verdict::Inconsistent {
            notes.push(if u_limit.converged {
                "u converges but its limit differs from the σ limit".into()
            } else {
                "u does not converge although the hypotheses trend-hold".into()
            });
        }
        reports.push(TauberianReport {
            theorem,
            sequence: seq.name().to_string(),
            weight_class_p: class_p.clone(),
            weight_class_q: class_q.clone(),
            condition_profiles: profiles,
            conditions,
            backward_profiles,
            sigma_limit: sigma.clone(),
            u_limit: u_limit.clone(),
            hypotheses_hold,
            eps_agree,
            verdict,
            notes,
        });
    }
    Ok(reports)
}

pub fn verify_theorem(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    theorem: Theorem,
    cfg: &HarnessConfig,
) -> Result<TauberianReport> {
    Ok(verify_theorems(seq, p, q, &[theorem], cfg)?.remove(0))
}
