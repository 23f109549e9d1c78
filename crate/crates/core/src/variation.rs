//! Regular and rapid variation of weight prefix sums.
//!
//! `P` is regularly varying of index α when `P_⌊λm⌋/P_m → λ^α` for every
//! `λ > 0`, and rapidly varying when the same ratio tends to 0 or ∞ for
//! `λ < 1` or `λ > 1`. Both are read off dyadic ratios at a finite horizon.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weights::WeightSequence;

pub const MIN_HORIZON: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VariationKind {
    RegularlyVarying,
    RapidlyVarying,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSample {
    pub lambda: f64,
    pub m: usize,
    pub ratio: f64,
}

/// One rung of the dyadic ladder: `log2(P_{2m}/P_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DyadicSample {
    pub m: usize,
    pub local_index: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RvEstimate {
    /// Extrapolated index, clamped below at 0.
    pub alpha_hat: f64,
    /// Plain median of the ladder samples, clamped below at 0.
    pub alpha_median: f64,
    /// Largest deviation of a ladder sample from the median.
    pub fit_residual: f64,
    pub samples: Vec<DyadicSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationClass {
    pub name: String,
    pub kind: VariationKind,
    pub alpha_hat: Option<f64>,
    pub tol: f64,
    pub horizon: usize,
    /// Horizon actually used; smaller than `horizon` when `P` overflows first.
    pub effective_horizon: usize,
    pub lemma23_tail: f64,
    pub samples: Vec<DyadicSample>,
    pub estimate: Option<RvEstimate>,
    pub ratio_profile: Vec<RatioSample>,
    pub lemma23_profile: Vec<(usize, f64)>,
    pub sv_residual: Vec<(usize, f64)>,
}

impl VariationClass {
    pub fn is_regular(&self) -> bool {
        self.kind == VariationKind::RegularlyVarying
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("variation report serializes")
    }
}

fn horizon_error(p: &WeightSequence, needed: usize, e: Error) -> Error {
    match e {
        Error::Overflow { .. } | Error::Horizon { .. } => Error::Horizon {
            weight: p.name().to_string(),
            needed,
            available: p.evaluated_len().saturating_sub(1),
        },
        other => other,
    }
}

/// `P_⌊λm⌋ / P_m` for every `(λ, m)` pair, exact.
pub fn ratio_profile(p: &WeightSequence, lambdas: &[f64], m_samples: &[usize]) -> Result<Vec<RatioSample>> {
    let mut out = Vec::with_capacity(lambdas.len() * m_samples.len());
    for &lambda in lambdas {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain("ratio_profile", format!("λ must be positive, got {lambda}")));
        }
        for &m in m_samples {
            let k = (lambda * m as f64).floor() as usize;
            let needed = k.max(m);
            p.extend_to(needed).map_err(|e| horizon_error(p, needed, e))?;
            out.push(RatioSample {
                lambda,
                m,
                ratio: p.prefix(k)? / p.prefix(m)?,
            });
        }
    }
    Ok(out)
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Dyadic ladder `m ∈ {h/16, h/8, h/4, h/2}`.
fn ladder(horizon: usize) -> [usize; 4] {
    [horizon / 16, horizon / 8, horizon / 4, horizon / 2]
}

/// Estimates the index α from `log2(P_{2m}/P_m)` on the dyadic ladder.
///
/// The local index at octave `m` behaves like `α + c/log m` when the
/// slowly varying factor is logarithmic, so `alpha_hat` is the intercept of
/// a least-squares line in `1/log(m√2)`. The plain median is kept alongside.
pub fn estimate_rv_index(p: &WeightSequence, horizon: usize) -> Result<RvEstimate> {
    if horizon < MIN_HORIZON {
        return Err(Error::domain(
            "estimate_rv_index",
            format!("horizon must be at least {MIN_HORIZON}, got {horizon}"),
        ));
    }
    let top = ladder(horizon)[3] * 2;
    p.extend_to(top).map_err(|e| horizon_error(p, top, e))?;
    let samples = ladder(horizon)
        .iter()
        .map(|&m| {
            Ok(DyadicSample {
                m,
                local_index: (p.prefix(2 * m)? / p.prefix(m)?).log2(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ys: Vec<f64> = samples.iter().map(|s| s.local_index).collect();
    let med = median(&ys);
    let fit_residual = ys.iter().map(|y| (y - med).abs()).fold(0.0, f64::max);

    let xs: Vec<f64> = samples
        .iter()
        .map(|s| 1.0 / (s.m as f64 * std::f64::consts::SQRT_2).ln())
        .collect();
    let k = xs.len() as f64;
    let (xbar, ybar) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let intercept = if sxx > 0.0 { ybar - sxy / sxx * xbar } else { med };

    Ok(RvEstimate {
        alpha_hat: intercept.max(0.0),
        alpha_median: med.max(0.0),
        fit_residual,
        samples,
    })
}

/// `P_{m−1}/P_m` at `m = 1, 2, 4, …` and at `horizon` itself.
pub fn lemma23_check(p: &WeightSequence, horizon: usize) -> Result<Vec<(usize, f64)>> {
    if horizon < 2 {
        return Err(Error::domain("lemma23_check", "horizon must be at least 2"));
    }
    p.extend_to(horizon).map_err(|e| horizon_error(p, horizon, e))?;
    let mut ms: Vec<usize> = std::iter::successors(Some(1usize), |m| m.checked_mul(2))
        .take_while(|&m| m < horizon)
        .collect();
    ms.push(horizon);
    ms.into_iter()
        .map(|m| Ok((m, p.prefix(m - 1)? / p.prefix(m)?)))
        .collect()
}

/// `L(m) = P_m/(m+1)^α` at nine points across the top octave `[h/2, h]`.
pub fn sv_residual(p: &WeightSequence, alpha: f64, horizon: usize) -> Result<Vec<(usize, f64)>> {
    let lo = horizon / 2;
    (0..=8)
        .map(|k| {
            let m = lo + (horizon - lo) * k / 8;
            Ok((m, p.prefix(m)? / (m as f64 + 1.0).powf(alpha)))
        })
        .collect()
}

/// Classifies `P` as regularly varying, rapidly varying, or neither.
pub fn classify(p: &WeightSequence, horizon: usize, tol: f64) -> Result<VariationClass> {
    if horizon < MIN_HORIZON {
        return Err(Error::domain(
            "classify",
            format!("horizon must be at least {MIN_HORIZON}, got {horizon}"),
        ));
    }
    if !(tol > 0.0 && tol < 0.5) {
        return Err(Error::domain("classify", format!("tol must lie in (0, 0.5), got {tol}")));
    }
    // Geometric-type weights overflow long before the horizon; classify on
    // what is representable.
    let h = p.finite_limit(horizon).ok_or_else(|| Error::Horizon {
        weight: p.name().to_string(),
        needed: 0,
        available: 0,
    })?;
    if h < 4 {
        return Err(Error::Horizon {
            weight: p.name().to_string(),
            needed: 4,
            available: h,
        });
    }
    let half = h / 2;
    let ratios = ratio_profile(p, &[2.0], &[half])?
        .into_iter()
        .chain(ratio_profile(p, &[0.5], &[h])?)
        .collect::<Vec<_>>();
    let lemma23_profile = lemma23_check(p, h)?;
    let lemma23_tail = lemma23_profile.last().map(|&(_, r)| r).unwrap_or(f64::NAN);

    let rapid = ratios[0].ratio > 1.0 / tol && ratios[1].ratio < tol;
    let estimate = if h >= MIN_HORIZON {
        Some(estimate_rv_index(p, h)?)
    } else {
        None
    };
    let regular = !rapid
        && estimate
            .as_ref()
            .is_some_and(|e| e.fit_residual < tol && (lemma23_tail - 1.0).abs() < tol);

    let kind = if rapid {
        VariationKind::RapidlyVarying
    } else if regular {
        VariationKind::RegularlyVarying
    } else {
        VariationKind::Inconclusive
    };
    let alpha_hat = match kind {
        VariationKind::RegularlyVarying => estimate.as_ref().map(|e| e.alpha_hat),
        _ => None,
    };
    let sv = match alpha_hat {
        Some(a) => sv_residual(p, a, h)?,
        None => Vec::new(),
    };
    Ok(VariationClass {
        name: p.name().to_string(),
        kind,
        alpha_hat,
        tol,
        horizon,
        effective_horizon: h,
        lemma23_tail,
        samples: estimate.as_ref().map(|e| e.samples.clone()).unwrap_or_default(),
        estimate,
        ratio_profile: ratios,
        lemma23_profile,
        sv_residual: sv,
    })
}
