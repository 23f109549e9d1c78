//! Positive weight sequences `p_m` and their cached prefix sums `P_m`.
//!
//! The prefix cache grows on demand and only ever grows: once `P_k` has been
//! published it is never rewritten, so concurrent readers see identical values
//! no matter who extended the cache.

use std::fmt;
use std::sync::{Arc, RwLock};

use crate::accumulate::Compensated;
use crate::error::{Error, Result};

/// Largest number of prefix entries a weight sequence will ever evaluate.
pub const MAX_PREFIX_LEN: usize = 1 << 24;

#[derive(Debug, Clone)]
enum Barrier {
    NonPositive { index: usize, value: f64 },
    Overflow { index: usize },
    NotIncreasing { index: usize },
}

#[derive(Debug, Default)]
struct PrefixCache {
    values: Vec<f64>,
    acc: Compensated,
    barrier: Option<Barrier>,
}

struct Inner {
    name: String,
    family: String,
    weight: Box<dyn Fn(usize) -> f64 + Send + Sync>,
    cache: RwLock<PrefixCache>,
}

/// A positive weight sequence with its partial sums. Cloning shares the cache.
#[derive(Clone)]
pub struct WeightSequence {
    inner: Arc<Inner>,
}

impl fmt::Debug for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSequence")
            .field("name", &self.inner.name)
            .field("family", &self.inner.family)
            .field("evaluated", &self.evaluated_len())
            .finish()
    }
}

impl WeightSequence {
    pub fn new<F>(name: impl Into<String>, family: impl Into<String>, weight: F) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        Self {
            inner: Arc::new(Inner {
                name: name.into(),
                family: family.into(),
                weight: Box::new(weight),
                cache: RwLock::new(PrefixCache::default()),
            }),
        }
    }

    /// `p_m = 1`, `P_m = m + 1` (Cesàro).
    pub fn ones() -> Self {
        Self::new("ones", "ones", |_| 1.0)
    }

    /// `p_m = 1/(m+1)`, `P_m ~ log m` (logarithmic means).
    pub fn harmonic() -> Self {
        Self::new("harmonic", "harmonic", |m| 1.0 / (m as f64 + 1.0))
    }

    /// `p_m = (m+1)^β` for `β > −1`.
    pub fn power(beta: f64) -> Result<Self> {
        if !(beta > -1.0) || !beta.is_finite() {
            return Err(Error::domain("power weights", format!("need β > −1, got {beta}")));
        }
        Ok(Self::new(format!("power(beta={beta})"), "power", move |m| {
            (m as f64 + 1.0).powf(beta)
        }))
    }

    /// `p_m = r^m` for `r > 1`; rapidly varying.
    pub fn geometric(r: f64) -> Result<Self> {
        if !(r > 1.0) || !r.is_finite() {
            return Err(Error::domain("geometric weights", format!("need r > 1, got {r}")));
        }
        Ok(Self::new(format!("geometric(r={r})"), "geometric", move |m| {
            r.powi(m.min(i32::MAX as usize) as i32)
        }))
    }

    /// `p_m = 2m + 1`, so that `P_m = (m+1)^2`.
    pub fn odd() -> Self {
        Self::new("odd", "odd", |m| 2.0 * m as f64 + 1.0)
    }

    /// Same weights multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain("scaled weights", format!("need c > 0, got {c}")));
        }
        let base = self.clone();
        Ok(Self::new(
            format!("{}*{c}", self.name()),
            self.family().to_string(),
            move |m| c * (base.inner.weight)(m),
        ))
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn family(&self) -> &str {
        &self.inner.family
    }

    /// `p_m`, checked for positivity.
    pub fn weight(&self, m: usize) -> Result<f64> {
        let w = (self.inner.weight)(m);
        if w > 0.0 && w.is_finite() {
            Ok(w)
        } else if w.is_infinite() {
            Err(Error::Overflow {
                family: self.family().to_string(),
                index: m,
            })
        } else {
            Err(Error::NonPositiveWeight {
                name: self.name().to_string(),
                index: m,
                value: w,
            })
        }
    }

    /// Number of prefix entries published so far.
    pub fn evaluated_len(&self) -> usize {
        self.inner.cache.read().expect("prefix cache poisoned").values.len()
    }

    /// `P_m = p_0 + … + p_m`, extending the cache as needed.
    pub fn prefix(&self, m: usize) -> Result<f64> {
        {
            let cache = self.inner.cache.read().expect("prefix cache poisoned");
            if let Some(&v) = cache.values.get(m) {
                return Ok(v);
            }
        }
        self.extend_to(m)?;
        let cache = self.inner.cache.read().expect("prefix cache poisoned");
        Ok(cache.values[m])
    }

    /// `P_{m−1}` with `P_{−1} = 0`.
    pub fn prefix_before(&self, m: usize) -> Result<f64> {
        match m {
            0 => Ok(0.0),
            _ => self.prefix(m - 1),
        }
    }

    /// Copy of `P_0..=P_m`.
    pub fn prefixes(&self, m: usize) -> Result<Vec<f64>> {
        self.extend_to(m)?;
        let cache = self.inner.cache.read().expect("prefix cache poisoned");
        Ok(cache.values[..=m].to_vec())
    }

    /// Largest index `k ≤ limit` such that `P_0..=P_k` are all representable,
    /// or `None` if not even `P_0` is.
    pub fn finite_limit(&self, limit: usize) -> Option<usize> {
        match self.extend_to(limit) {
            Ok(()) => Some(limit),
            Err(_) => {
                let len = self.evaluated_len();
                len.checked_sub(1)
            }
        }
    }

    /// Ensures `P_0..=P_m` are cached.
    pub fn extend_to(&self, m: usize) -> Result<()> {
        if m >= MAX_PREFIX_LEN {
            return Err(Error::Horizon {
                weight: self.name().to_string(),
                needed: m,
                available: MAX_PREFIX_LEN - 1,
            });
        }
        {
            let cache = self.inner.cache.read().expect("prefix cache poisoned");
            if m < cache.values.len() {
                return Ok(());
            }
            if let Some(b) = &cache.barrier {
                return Err(self.barrier_error(b, m));
            }
        }
        let mut guard = self.inner.cache.write().expect("prefix cache poisoned");
        let cache = &mut *guard;
        if m < cache.values.len() {
            return Ok(());
        }
        if let Some(b) = &cache.barrier {
            return Err(self.barrier_error(b, m));
        }
        // Grow geometrically so that sweeping m upward costs amortized O(1).
        let target = (m + 1)
            .max(cache.values.len() * 2)
            .max(64)
            .min(MAX_PREFIX_LEN);
        cache.values.reserve(target - cache.values.len());
        for k in cache.values.len()..target {
            let w = (self.inner.weight)(k);
            if !(w > 0.0) || w.is_nan() {
                cache.barrier = Some(Barrier::NonPositive { index: k, value: w });
                break;
            }
            let mut acc = cache.acc;
            acc.add(w);
            let p = acc.value();
            if !p.is_finite() {
                cache.barrier = Some(Barrier::Overflow { index: k });
                break;
            }
            if let Some(&prev) = cache.values.last() {
                if p <= prev {
                    cache.barrier = Some(Barrier::NotIncreasing { index: k });
                    break;
                }
            }
            cache.acc = acc;
            cache.values.push(p);
        }
        if m < cache.values.len() {
            Ok(())
        } else {
            let b = cache.barrier.clone().expect("extension stopped without a barrier");
            Err(self.barrier_error(&b, m))
        }
    }

    fn barrier_error(&self, barrier: &Barrier, _needed: usize) -> Error {
        match *barrier {
            Barrier::NonPositive { index, value } => Error::NonPositiveWeight {
                name: self.name().to_string(),
                index,
                value,
            },
            Barrier::Overflow { index } => Error::Overflow {
                family: self.family().to_string(),
                index,
            },
            Barrier::NotIncreasing { index } => Error::NotIncreasing {
                name: self.name().to_string(),
                index,
            },
        }
    }

    /// Largest `i ≥ start` with `P_i ≤ threshold`, assuming `P_start ≤ threshold`.
    /// Gallops then bisects over the strictly increasing prefix.
    pub(crate) fn last_at_most(&self, start: usize, threshold: f64) -> Result<usize> {
        debug_assert!(self.prefix(start)? <= threshold);
        let mut lo = start; // P_lo ≤ threshold
        let mut step = 1usize;
        let hi = loop {
            let probe = lo.saturating_add(step);
            if probe >= MAX_PREFIX_LEN {
                let cap = MAX_PREFIX_LEN - 1;
                if self.prefix(cap)? <= threshold {
                    return Err(Error::Horizon {
                        weight: self.name().to_string(),
                        needed: MAX_PREFIX_LEN,
                        available: cap,
                    });
                }
                break cap;
            }
            match self.prefix(probe) {
                Ok(v) if v <= threshold => {
                    lo = probe;
                    step = step.saturating_mul(2);
                }
                Ok(_) => break probe,
                Err(Error::Overflow { .. }) if threshold.is_finite() => {
                    // The first unrepresentable P exceeds any finite threshold.
                    break self.evaluated_len();
                }
                Err(e) => return Err(e),
            }
        };
        // Invariant: P_lo ≤ threshold < P_hi.
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.prefix(mid)? <= threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_prefix_is_m_plus_one() {
        let w = WeightSequence::ones();
        for m in [0usize, 1, 7, 1000, 99_999] {
            assert_eq!(w.prefix(m).unwrap(), m as f64 + 1.0);
        }
        assert_eq!(w.prefix_before(0).unwrap(), 0.0);
    }

    #[test]
    fn odd_prefix_is_square() {
        let w = WeightSequence::odd();
        for m in [0usize, 3, 500, 40_000] {
            let k = m as f64 + 1.0;
            assert_eq!(w.prefix(m).unwrap(), k * k);
        }
    }

    #[test]
    fn harmonic_prefix_near_log() {
        let w = WeightSequence::harmonic();
        let p = w.prefix(10_000).unwrap();
        let target = (10_000f64).ln() + 0.577_215_664_901_532_9;
        assert!((p - target).abs() / target < 0.02, "{p} vs {target}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WeightSequence::power(-1.0).is_err());
        assert!(WeightSequence::geometric(1.0).is_err());
        assert!(WeightSequence::ones().scaled(0.0).is_err());
    }

    #[test]
    fn non_positive_weight_is_reported() {
        let w = WeightSequence::new("bad", "bad", |m| if m == 5 { 0.0 } else { 1.0 });
        assert_eq!(w.prefix(4).unwrap(), 5.0);
        assert!(matches!(
            w.prefix(5),
            Err(Error::NonPositiveWeight { index: 5, .. })
        ));
        assert!(matches!(w.weight(5), Err(Error::NonPositiveWeight { .. })));
    }

    #[test]
    fn geometric_overflow_is_reported_with_family() {
        let w = WeightSequence::geometric(2.0).unwrap();
        assert_eq!(w.prefix(10).unwrap(), 2047.0);
        match w.prefix(2000) {
            Err(Error::Overflow { family, index }) => {
                assert_eq!(family, "geometric");
                assert!((1000..1100).contains(&index));
            }
            other => panic!("expected overflow, got {other:?}"),
        }
        let limit = w.finite_limit(5000).unwrap();
        assert!(w.prefix(limit).unwrap().is_finite());
        assert!(w.prefix(limit + 1).is_err());
    }

    #[test]
    fn extension_is_idempotent() {
        let w = WeightSequence::harmonic();
        let early: Vec<f64> = (0..100).map(|k| w.prefix(k).unwrap()).collect();
        w.extend_to(200_000).unwrap();
        let late: Vec<f64> = (0..100).map(|k| w.prefix(k).unwrap()).collect();
        assert_eq!(
            early.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            late.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn concurrent_readers_see_identical_prefixes() {
        let w = WeightSequence::harmonic();
        let reference = WeightSequence::harmonic().prefixes(50_000).unwrap();
        std::thread::scope(|s| {
            for t in 0..8usize {
                let w = w.clone();
                let reference = &reference;
                s.spawn(move || {
                    for k in (t..50_000).step_by(997) {
                        assert_eq!(w.prefix(k).unwrap().to_bits(), reference[k].to_bits());
                    }
                });
            }
        });
    }

    #[test]
    fn last_at_most_matches_scan() {
        let w = WeightSequence::harmonic();
        for m in [0usize, 1, 10, 100, 1000] {
            for lam in [1.01, 1.1, 1.5, 2.0] {
                let t = lam * w.prefix(m).unwrap();
                let fast = w.last_at_most(m, t).unwrap();
                let mut slow = m;
                while w.prefix(slow + 1).unwrap() <= t {
                    slow += 1;
                }
                assert_eq!(fast, slow, "m={m} λ={lam}");
            }
        }
    }

    #[test]
    fn last_at_most_stops_at_overflow() {
        let w = WeightSequence::geometric(2.0).unwrap();
        let t = 1.5 * w.prefix(100).unwrap();
        assert_eq!(w.last_at_most(100, t).unwrap(), 100);
        let limit = w.finite_limit(5000).unwrap();
        assert_eq!(w.last_at_most(0, f64::MAX).unwrap(), limit);
    }
}
