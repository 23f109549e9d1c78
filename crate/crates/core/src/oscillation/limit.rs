//! Finite-scale estimate of a Pringsheim limit.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// Value at the largest diagonal cell of the ladder.
    pub value: Complex64,
    /// First index of the tail block at the largest horizon.
    pub tail_start: usize,
    /// `(horizon, sup over the tail block of |value − ℓ̂|)`.
    pub residual_profile: Vec<(usize, f64)>,
    pub converged: bool,
}

impl LimitEstimate {
    pub fn final_residual(&self) -> f64 {
        self.residual_profile.last().map(|r| r.1).unwrap_or(f64::NAN)
    }
}

/// Residuals at or below this are rounding noise around `ℓ̂`.
pub fn noise_floor(l: Complex64) -> f64 {
    64.0 * f64::EPSILON * l.norm().max(1.0)
}

/// Convergence call on a residual profile: the last three residuals
/// strictly decrease (or are all at most `floor`) and the last is below `eps`.
pub fn residuals_converge(residuals: &[f64], eps: f64, floor: f64) -> bool {
    if residuals.len() < 3 {
        return false;
    }
    let last = &residuals[residuals.len() - 3..];
    let all_zero = last.iter().all(|&r| r <= floor);
    let decreasing = last[0] > last[1] && last[1] > last[2];
    (all_zero || decreasing) && last[2] < eps
}

pub(crate) fn tail_lo(horizon: usize, fraction: f64) -> usize {
    ((fraction * horizon as f64).ceil() as usize).min(horizon)
}

pub(crate) fn validate_ladder(ladder: &[usize], fraction: f64) -> Result<()> {
    if ladder.len() < 3 {
        return Err(Error::domain("empirical_limit", "need at least 3 ladder horizons"));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("empirical_limit", "ladder must be strictly increasing"));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::domain("empirical_limit", format!("tail fraction must lie in (0, 1), got {fraction}")));
    }
    Ok(())
}

/// Estimates the limit of `value(m, n)` from a ladder of horizons.
///
/// `ℓ̂ = value(H, H)` for the largest horizon `H`; the residual at horizon
/// `h` is the supremum of `|value − ℓ̂|` over `[⌈f·h⌉, h]²`.
pub fn empirical_limit<F>(value: F, ladder: &[usize], tail_fraction: f64, eps_dec: f64) -> Result<LimitEstimate>
where
    F: Fn(usize, usize) -> Complex64 + Sync,
{
    validate_ladder(ladder, tail_fraction)?;
    let top = *ladder.last().expect("validated");
    let l = value(top, top);
    if !(l.re.is_finite() && l.im.is_finite()) {
        return Err(Error::NonFinite { m: top, n: top });
    }
    let mut residual_profile = Vec::with_capacity(ladder.len());
    for &h in ladder {
        let lo = tail_lo(h, tail_fraction);
        let sup = (lo..=h)
            .into_par_iter()
            .map(|m| {
                let mut best = 0.0f64;
                for n in lo..=h {
                    let r = (value(m, n) - l).norm();
                    if r.is_nan() {
                        return Err(Error::NonFinite { m, n });
                    }
                    best = best.max(r);
                }
                Ok(best)
            })
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
        residual_profile.push((h, sup));
    }
    let residuals: Vec<f64> = residual_profile.iter().map(|r| r.1).collect();
    Ok(LimitEstimate {
        value: l,
        tail_start: tail_lo(top, tail_fraction),
        converged: residuals_converge(&residuals, eps_dec, noise_floor(l)),
        residual_profile,
    })
}
