//! Window functionals behind slow decrease and slow oscillation.
//!
//! Forward windows are `P_m ≤ P_i ≤ λP_m` (λ > 1), backward windows are
//! `λP_m < P_i ≤ P_m` (0 < λ < 1), and likewise in `n` with κ and `Q`. Each
//! functional is an exact minimum (slow decrease, `sd_*`) or maximum of
//! absolute values (slow oscillation, `so_*`) of differences over the window:
//!
//! | functional  | forward difference | backward difference |
//! |-------------|--------------------|---------------------|
//! | `*_P`       | `u_in − u_mn`      | `u_mn − u_in`       |
//! | `*_Q`       | `u_mj − u_mn`      | `u_mn − u_mj`       |
//! | `*_strong_P`| `u_ij − u_mj`      | `u_mj − u_ij`       |
//! | `*_strong_Q`| `u_ij − u_in`      | `u_in − u_ij`       |
//! | `*_both`    | `u_ij − u_mn`      | `u_mn − u_ij`       |
//!
//! Point evaluations scan the window. [`field::evaluate_block`] computes the
//! same values for a whole block of `(m, n)` at once and agrees bit for bit.

pub mod conditions;
pub mod field;
pub mod limit;
pub mod profile;
pub mod sliding;

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::DoubleSequence;
use crate::weights::WeightSequence;

pub use conditions::{hardy_stat, landau_stat};
pub use field::{evaluate_block, Block, FieldSet};
pub use limit::{empirical_limit, LimitEstimate};
pub use profile::{DecisionProfile, ProfileEntry, StatKind};
pub use sliding::sliding_extrema;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// Window scale factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowParams {
    pub lambda: f64,
    pub kappa: f64,
    pub direction: Direction,
}

impl WindowParams {
    pub fn forward(lambda: f64, kappa: f64) -> Result<Self> {
        if !(lambda > 1.0 && kappa > 1.0) || !(lambda.is_finite() && kappa.is_finite()) {
            return Err(Error::domain(
                "window",
                format!("forward windows need λ, κ > 1, got ({lambda}, {kappa})"),
            ));
        }
        Ok(Self {
            lambda,
            kappa,
            direction: Direction::Forward,
        })
    }

    pub fn backward(lambda: f64, kappa: f64) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if !(ok(lambda) && ok(kappa)) {
            return Err(Error::domain(
                "window",
                format!("backward windows need 0 < λ, κ < 1, got ({lambda}, {kappa})"),
            ));
        }
        Ok(Self {
            lambda,
            kappa,
            direction: Direction::Backward,
        })
    }

    /// The backward window with reciprocal scale factors.
    pub fn mirrored(&self) -> Self {
        Self {
            lambda: 1.0 / self.lambda,
            kappa: 1.0 / self.kappa,
            direction: match self.direction {
                Direction::Forward => Direction::Backward,
                Direction::Backward => Direction::Forward,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Functional {
    SdP,
    SdQ,
    SdStrongP,
    SdStrongQ,
    SdBoth,
    SoP,
    SoQ,
    SoStrongP,
    SoStrongQ,
    SoBoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axes {
    P,
    Q,
    Rect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Anchor {
    Corner,
    Column,
    Row,
}

impl Functional {
    pub const ALL: [Functional; 10] = [
        Functional::SdP,
        Functional::SdQ,
        Functional::SdStrongP,
        Functional::SdStrongQ,
        Functional::SdBoth,
        Functional::SoP,
        Functional::SoQ,
        Functional::SoStrongP,
        Functional::SoStrongQ,
        Functional::SoBoth,
    ];

    pub const SD: [Functional; 5] = [
        Functional::SdP,
        Functional::SdQ,
        Functional::SdStrongP,
        Functional::SdStrongQ,
        Functional::SdBoth,
    ];

    pub const SO: [Functional; 5] = [
        Functional::SoP,
        Functional::SoQ,
        Functional::SoStrongP,
        Functional::SoStrongQ,
        Functional::SoBoth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functional::SdP => "sd_P",
            Functional::SdQ => "sd_Q",
            Functional::SdStrongP => "sd_strong_P",
            Functional::SdStrongQ => "sd_strong_Q",
            Functional::SdBoth => "sd_both",
            Functional::SoP => "so_P",
            Functional::SoQ => "so_Q",
            Functional::SoStrongP => "so_strong_P",
            Functional::SoStrongQ => "so_strong_Q",
            Functional::SoBoth => "so_both",
        }
    }

    pub fn from_name(name: &str) -> Option<Functional> {
        Functional::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Slow-decrease functionals are minima and need real input.
    pub fn is_decrease(self) -> bool {
        Functional::SD.contains(&self)
    }

    pub(crate) fn index(self) -> usize {
        Functional::ALL.iter().position(|&f| f == self).expect("listed")
    }

    fn axes(self) -> Axes {
        match self {
            Functional::SdP | Functional::SoP => Axes::P,
            Functional::SdQ | Functional::SoQ => Axes::Q,
            _ => Axes::Rect,
        }
    }

    fn anchor(self) -> Anchor {
        match self {
            Functional::SdStrongP | Functional::SoStrongP => Anchor::Column,
            Functional::SdStrongQ | Functional::SoStrongQ => Anchor::Row,
            _ => Anchor::Corner,
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Largest `i` with `P_i ≤ λP_m` (λ > 1); always at least `m`.
pub fn window_upper_index(p: &WeightSequence, m: usize, lambda: f64) -> Result<usize> {
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::domain("window_upper_index", format!("need λ > 1, got {lambda}")));
    }
    let threshold = lambda * p.prefix(m)?;
    p.last_at_most(m, threshold)
}

/// Smallest `i` with `P_i > λP_m` (0 < λ < 1); always at most `m`.
pub fn window_lower_index(p: &WeightSequence, m: usize, lambda: f64) -> Result<usize> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain("window_lower_index", format!("need 0 < λ < 1, got {lambda}")));
    }
    let threshold = lambda * p.prefix(m)?;
    if p.prefix(0)? > threshold {
        return Ok(0);
    }
    Ok(p.last_at_most(0, threshold)? + 1)
}

/// Index range of the window around `m` in one axis.
pub fn window_range(p: &WeightSequence, m: usize, scale: f64, direction: Direction) -> Result<RangeInclusive<usize>> {
    match direction {
        Direction::Forward => Ok(m..=window_upper_index(p, m, scale)?),
        Direction::Backward => Ok(window_lower_index(p, m, scale)?..=m),
    }
}

/// All ten functionals at one `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationFunctionals {
    pub m: usize,
    pub n: usize,
    pub params: WindowParams,
    pub sd_p: Option<f64>,
    pub sd_q: Option<f64>,
    pub sd_strong_p: Option<f64>,
    pub sd_strong_q: Option<f64>,
    pub sd_both: Option<f64>,
    pub so_p: f64,
    pub so_q: f64,
    pub so_strong_p: f64,
    pub so_strong_q: f64,
    pub so_both: f64,
}

fn nan_check(v: f64, i: usize, j: usize) -> Result<f64> {
    if v.is_nan() {
        Err(Error::NonFinite { m: i, n: j })
    } else {
        Ok(v)
    }
}

/// Exact scan of one functional over explicit index ranges.
fn scan(
    seq: &DoubleSequence,
    f: Functional,
    direction: Direction,
    m: usize,
    n: usize,
    is: RangeInclusive<usize>,
    js: RangeInclusive<usize>,
) -> Result<f64> {
    let (is, js) = match f.axes() {
        Axes::P => (is, n..=n),
        Axes::Q => (m..=m, js),
        Axes::Rect => (is, js),
    };
    let anchor = |i: usize, j: usize| match f.anchor() {
        Anchor::Corner => seq.value(m, n),
        Anchor::Column => seq.value(m, j),
        Anchor::Row => seq.value(i, n),
    };
    if f.is_decrease() {
        seq.require_real("slow-decrease functional")?;
        let mut best = f64::INFINITY;
        for i in is {
            for j in js.clone() {
                let (c, x) = (anchor(i, j).re, seq.value(i, j).re);
                let d = match direction {
                    Direction::Forward => x - c,
                    Direction::Backward => c - x,
                };
                best = best.min(nan_check(d, i, j)?);
            }
        }
        Ok(best)
    } else {
        let mut best = 0.0f64;
        for i in is {
            for j in js.clone() {
                let d = seq.value(i, j) - anchor(i, j);
                let a = if seq.is_real() { d.re.abs() } else { d.norm() };
                best = best.max(nan_check(a, i, j)?);
            }
        }
        Ok(best)
    }
}

/// One functional at `(m, n)`. Window sizes come from `params`.
pub fn functional(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    f: Functional,
    m: usize,
    n: usize,
    params: WindowParams,
) -> Result<f64> {
    let is = match f.axes() {
        Axes::Q => m..=m,
        _ => window_range(p, m, params.lambda, params.direction)?,
    };
    let js = match f.axes() {
        Axes::P => n..=n,
        _ => window_range(q, n, params.kappa, params.direction)?,
    };
    scan(seq, f, params.direction, m, n, is, js)
}

/// Every applicable functional at `(m, n)`; the `sd_*` entries are `None`
/// for complex sequences.
pub fn functionals(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    params: WindowParams,
) -> Result<OscillationFunctionals> {
    let is = window_range(p, m, params.lambda, params.direction)?;
    let js = window_range(q, n, params.kappa, params.direction)?;
    let run = |f: Functional| scan(seq, f, params.direction, m, n, is.clone(), js.clone());
    let sd = |f: Functional| -> Result<Option<f64>> {
        if seq.is_real() {
            run(f).map(Some)
        } else {
            Ok(None)
        }
    };
    Ok(OscillationFunctionals {
        m,
        n,
        params,
        sd_p: sd(Functional::SdP)?,
        sd_q: sd(Functional::SdQ)?,
        sd_strong_p: sd(Functional::SdStrongP)?,
        sd_strong_q: sd(Functional::SdStrongQ)?,
        sd_both: sd(Functional::SdBoth)?,
        so_p: run(Functional::SoP)?,
        so_q: run(Functional::SoQ)?,
        so_strong_p: run(Functional::SoStrongP)?,
        so_strong_q: run(Functional::SoStrongQ)?,
        so_both: run(Functional::SoBoth)?,
    })
}

// κ is irrelevant for single-axis functionals but must be valid.
fn forward_p(lambda: f64) -> Result<WindowParams> {
    WindowParams::forward(lambda, 2.0)
}

/// `min_{P_m ≤ P_i ≤ λP_m} (u_in − u_mn)`.
pub fn sd_functional_p(seq: &DoubleSequence, p: &WeightSequence, m: usize, n: usize, lambda: f64) -> Result<f64> {
    functional(seq, p, p, Functional::SdP, m, n, forward_p(lambda)?)
}

/// `min_{Q_n ≤ Q_j ≤ κQ_n} (u_mj − u_mn)`.
pub fn sd_functional_q(seq: &DoubleSequence, q: &WeightSequence, m: usize, n: usize, kappa: f64) -> Result<f64> {
    let params = WindowParams::forward(2.0, kappa)?;
    functional(seq, q, q, Functional::SdQ, m, n, params)
}

/// `min (u_ij − u_mj)` over the forward rectangle.
pub fn sd_functional_strong_p(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    lambda: f64,
    kappa: f64,
) -> Result<f64> {
    functional(seq, p, q, Functional::SdStrongP, m, n, WindowParams::forward(lambda, kappa)?)
}

/// `min (u_ij − u_in)` over the forward rectangle.
pub fn sd_functional_strong_q(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    lambda: f64,
    kappa: f64,
) -> Result<f64> {
    functional(seq, p, q, Functional::SdStrongQ, m, n, WindowParams::forward(lambda, kappa)?)
}

/// `min (u_ij − u_mn)` over the forward rectangle.
pub fn sd_functional_both(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    lambda: f64,
    kappa: f64,
) -> Result<f64> {
    functional(seq, p, q, Functional::SdBoth, m, n, WindowParams::forward(lambda, kappa)?)
}

/// `max |u_in − u_mn|` over the forward `P` window.
pub fn so_functional_p(seq: &DoubleSequence, p: &WeightSequence, m: usize, n: usize, lambda: f64) -> Result<f64> {
    functional(seq, p, p, Functional::SoP, m, n, forward_p(lambda)?)
}

/// `max |u_mj − u_mn|` over the forward `Q` window.
pub fn so_functional_q(seq: &DoubleSequence, q: &WeightSequence, m: usize, n: usize, kappa: f64) -> Result<f64> {
    functional(seq, q, q, Functional::SoQ, m, n, WindowParams::forward(2.0, kappa)?)
}

/// `max |u_ij − u_mj|` over the forward rectangle.
pub fn so_functional_strong_p(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    lambda: f64,
    kappa: f64,
) -> Result<f64> {
    functional(seq, p, q, Functional::SoStrongP, m, n, WindowParams::forward(lambda, kappa)?)
}

/// `max |u_ij − u_in|` over the forward rectangle.
pub fn so_functional_strong_q(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    lambda: f64,
    kappa: f64,
) -> Result<f64> {
    functional(seq, p, q, Functional::SoStrongQ, m, n, WindowParams::forward(lambda, kappa)?)
}

/// `max |u_ij − u_mn|` over the forward rectangle.
pub fn so_functional_both(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    lambda: f64,
    kappa: f64,
) -> Result<f64> {
    functional(seq, p, q, Functional::SoBoth, m, n, WindowParams::forward(lambda, kappa)?)
}

/// Any functional over the backward windows `λP_m < P_i ≤ P_m`,
/// `κQ_n < Q_j ≤ Q_n`, as anchor minus cell.
#[allow(clippy::too_many_arguments)]
pub fn backward_functional(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    f: Functional,
    m: usize,
    n: usize,
    lambda: f64,
    kappa: f64,
) -> Result<f64> {
    functional(seq, p, q, f, m, n, WindowParams::backward(lambda, kappa)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ramp_m() -> DoubleSequence {
        DoubleSequence::real("m", |m, _| m as f64)
    }

    #[test]
    fn window_examples() {
        let ones = WeightSequence::ones();
        assert_eq!(window_upper_index(&ones, 9, 1.5).unwrap(), 14);
        assert_eq!(window_upper_index(&ones, 100, 1.001).unwrap(), 100);
        let h = WeightSequence::harmonic();
        let fast = window_upper_index(&h, 100, 1.1).unwrap();
        let t = 1.1 * h.prefix(100).unwrap();
        let slow = (100..).take_while(|&i| h.prefix(i).unwrap() <= t).last().unwrap();
        assert_eq!(fast, slow);
        assert_eq!(window_lower_index(&ones, 19, 0.5).unwrap(), 10);
        assert!(window_upper_index(&ones, 3, 1.0).is_err());
        assert!(window_lower_index(&ones, 3, 1.0).is_err());
    }

    #[test]
    fn sd_examples() {
        let ones = WeightSequence::ones();
        let c = corpus::constant(4.0);
        let alt = corpus::alternating();
        assert_eq!(sd_functional_p(&c, &ones, 9, 3, 1.5).unwrap(), 0.0);
        assert_eq!(sd_functional_p(&ramp_m(), &ones, 9, 0, 1.5).unwrap(), 0.0);
        // u_90 = −1 is the window minimum, so the forward minimum is 0; one
        // step over the anchor is +1 and the window reaches −1.
        assert_eq!(sd_functional_p(&alt, &ones, 9, 0, 1.5).unwrap(), 0.0);
        assert_eq!(sd_functional_p(&alt, &ones, 10, 0, 1.5).unwrap(), -2.0);
        assert_eq!(sd_functional_q(&alt, &ones, 0, 10, 1.5).unwrap(), -2.0);
        let col = DoubleSequence::real("f(n)", |_, n| (n as f64).sqrt());
        assert_eq!(sd_functional_strong_p(&col, &ones, &ones, 9, 9, 1.5, 1.5).unwrap(), 0.0);
        assert_eq!(sd_functional_strong_p(&alt, &ones, &ones, 9, 9, 1.5, 1.5).unwrap(), -2.0);
        let sum = DoubleSequence::real("m+n", |m, n| (m + n) as f64);
        assert_eq!(sd_functional_both(&sum, &ones, &ones, 9, 9, 1.5, 1.5).unwrap(), 0.0);
        assert_eq!(sd_functional_both(&alt, &ones, &ones, 9, 9, 1.5, 1.5).unwrap(), -2.0);
    }

    #[test]
    fn so_examples() {
        let ones = WeightSequence::ones();
        let alt = corpus::alternating();
        for f in Functional::SO {
            let v = functional(&alt, &ones, &ones, f, 9, 9, WindowParams::forward(1.5, 1.5).unwrap()).unwrap();
            assert_eq!(v, 2.0, "{f}");
            let c = functional(&corpus::constant(1.0), &ones, &ones, f, 9, 9, WindowParams::forward(1.5, 1.5).unwrap()).unwrap();
            assert_eq!(c, 0.0, "{f}");
        }
        // linear ramp of slope ε: window i = 9..=14 has width 5.
        let eps = 0.125;
        let ramp = DoubleSequence::real("ramp", move |m, _| m as f64 * eps);
        assert_eq!(so_functional_p(&ramp, &ones, 9, 0, 1.5).unwrap(), 5.0 * eps);
    }

    #[test]
    fn backward_examples() {
        let ones = WeightSequence::ones();
        let params = (0.5, 0.5);
        let c = corpus::constant(2.0);
        let alt = corpus::alternating();
        for f in Functional::SD {
            assert_eq!(backward_functional(&c, &ones, &ones, f, 19, 19, params.0, params.1).unwrap(), 0.0);
            assert_eq!(backward_functional(&alt, &ones, &ones, f, 19, 18, params.0, params.1).unwrap(), -2.0, "{f}");
        }
        assert_eq!(backward_functional(&alt, &ones, &ones, Functional::SdP, 19, 19, 0.5, 0.5).unwrap(), 0.0);
        let v = backward_functional(&ramp_m(), &ones, &ones, Functional::SdP, 19, 0, 0.5, 0.5).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn complex_rejected_by_decrease_family() {
        let z = corpus::complex_convergent();
        let ones = WeightSequence::ones();
        assert!(matches!(
            sd_functional_p(&z, &ones, 5, 5, 1.5),
            Err(Error::ComplexInput { .. })
        ));
        let all = functionals(&z, &ones, &ones, 5, 5, WindowParams::forward(1.5, 1.5).unwrap()).unwrap();
        assert!(all.sd_both.is_none());
        assert!(all.so_both > 0.0);
    }

    #[test]
    fn window_params_validate() {
        assert!(WindowParams::forward(1.0, 2.0).is_err());
        assert!(WindowParams::backward(0.5, 1.5).is_err());
        let b = WindowParams::forward(2.0, 1.25).unwrap().mirrored();
        assert_eq!((b.lambda, b.kappa, b.direction), (0.5, 0.8, Direction::Backward));
    }
}
