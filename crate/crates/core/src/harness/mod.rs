//! Exact decompositions of `u_mn − σ_mn`, the window indices built on them,
//! and per-theorem verdicts.
//!
//! Forward (`μ > m`, `η > n`):
//!
//! ```text
//! u_mn − σ_mn = A(σ_μη − σ_μn − σ_mη + σ_mn) + B(σ_μn − σ_mn) + C(σ_mη − σ_mn)
//!             − (1/((P_μ−P_m)(Q_η−Q_n))) Σ_{i=m+1}^{μ} Σ_{j=n+1}^{η} p_i q_j (u_ij − u_mn)
//! ```
//!
//! with `A = P_μQ_η/((P_μ−P_m)(Q_η−Q_n))`, `B = P_μ/(P_μ−P_m)`,
//! `C = Q_η/(Q_η−Q_n)`. Backward (`μ < m`, `η < n`) swaps the roles and the
//! double sum of `u_mn − u_ij` enters with a plus sign.

pub mod suite;
pub mod verdict;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::accumulate::{two_prod, CompensatedComplex};
use crate::error::{Error, Result};
use crate::oscillation::{window_upper_index, Direction};
use crate::sequence::DoubleSequence;
use crate::transform::sigma_single;
use crate::weights::WeightSequence;

pub use suite::{random_lemma_suite, LemmaRecord, LemmaSuiteConfig};
pub use verdict::{sigma_limit, verify_theorem, verify_theorems, HarnessConfig, TauberianReport, Theorem, Verdict};

/// `min{i > m : P_i ≥ (1+δ/2)P_m}`.
pub fn choose_mu(p: &WeightSequence, m: usize, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain("choose_mu", format!("δ must be positive, got {delta}")));
    }
    let t = (1.0 + delta / 2.0) * p.prefix(m)?;
    let k = p.last_at_most(m, t)?;
    let mu = if k > m && p.prefix(k)? == t { k } else { k + 1 };
    p.extend_to(mu)?;
    Ok(mu)
}

/// Largest `i < m` with `(1+δ/2)P_i ≤ P_m`.
pub fn choose_mu_backward(p: &WeightSequence, m: usize, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain("choose_mu_backward", format!("δ must be positive, got {delta}")));
    }
    let c = 1.0 + delta / 2.0;
    let target = p.prefix(m)?;
    let fits = |i: usize| -> Result<bool> { Ok(c * p.prefix(i)? <= target) };
    if m == 0 || !fits(0)? {
        return Err(Error::domain(
            "choose_mu_backward",
            format!("no i < {m} with (1+δ/2)P_i ≤ P_m for δ = {delta}"),
        ));
    }
    // fits(lo) holds, fits(hi) fails (hi = m always fails since c > 1).
    let (mut lo, mut hi) = (0usize, m);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Both sides of one decomposition, evaluated independently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaDecomposition {
    pub m: usize,
    pub n: usize,
    pub mu: usize,
    pub eta: usize,
    pub direction: Direction,
    /// `u_mn − σ_mn`.
    pub lhs: Complex64,
    /// The three σ-difference terms, then the weighted double-sum term.
    pub terms: [Complex64; 4],
    /// `lhs − (t₀ + t₁ + t₂ ∓ t₃)`, minus for forward, plus for backward.
    pub residual: Complex64,
    /// Largest magnitude among `u_mn`, the four σ values and the terms.
    pub scale: f64,
    /// Sum of the coefficients multiplying the σ differences (at least 1).
    pub gain: f64,
}

impl LemmaDecomposition {
    pub fn relative_residual(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.norm()
        } else {
            self.residual.norm() / self.scale
        }
    }
}

struct Corners {
    u: Complex64,
    s_mn: Complex64,
    s_mu_n: Complex64,
    s_m_eta: Complex64,
    s_mu_eta: Complex64,
}

fn corners(seq: &DoubleSequence, p: &WeightSequence, q: &WeightSequence, m: usize, n: usize, mu: usize, eta: usize) -> Result<Corners> {
    Ok(Corners {
        u: seq.value(m, n),
        s_mn: sigma_single(seq, p, q, m, n)?,
        s_mu_n: sigma_single(seq, p, q, mu, n)?,
        s_m_eta: sigma_single(seq, p, q, m, eta)?,
        s_mu_eta: sigma_single(seq, p, q, mu, eta)?,
    })
}

/// `Σ_{i∈is} Σ_{j∈js} p_i q_j f(i, j)`, compensated.
fn weighted_sum<F>(p: &WeightSequence, q: &WeightSequence, is: std::ops::RangeInclusive<usize>, js: std::ops::RangeInclusive<usize>, f: F) -> Result<Complex64>
where
    F: Fn(usize, usize) -> Complex64,
{
    let mut acc = CompensatedComplex::new();
    for i in is {
        let pi = p.weight(i)?;
        for j in js.clone() {
            let (hi, lo) = two_prod(pi, q.weight(j)?);
            acc.add_weighted(hi, lo, f(i, j));
        }
    }
    Ok(acc.value())
}

fn finish(
    (m, n, mu, eta): (usize, usize, usize, usize),
    direction: Direction,
    c: &Corners,
    terms: [Complex64; 4],
    coefficients: [f64; 3],
) -> Result<LemmaDecomposition> {
    let lhs = c.u - c.s_mn;
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Backward => 1.0,
    };
    let residual = lhs - (terms[0] + terms[1] + terms[2] + terms[3] * sign);
    let scale = [c.u, c.s_mn, c.s_mu_n, c.s_m_eta, c.s_mu_eta]
        .iter()
        .chain(terms.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if !(residual.re.is_finite() && residual.im.is_finite() && scale.is_finite()) {
        return Err(Error::NonFinite { m, n });
    }
    Ok(LemmaDecomposition {
        m,
        n,
        mu,
        eta,
        direction,
        lhs,
        terms,
        residual,
        scale,
        gain: coefficients.iter().sum::<f64>().max(1.0),
    })
}

/// Forward decomposition at `(m, n)` with `μ > m`, `η > n`.
pub fn lemma_forward(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    mu: usize,
    eta: usize,
) -> Result<LemmaDecomposition> {
    if mu <= m || eta <= n {
        return Err(Error::domain(
            "lemma_forward",
            format!("need μ > m and η > n, got (m, n, μ, η) = ({m}, {n}, {mu}, {eta})"),
        ));
    }
    let (pm, pmu, qn, qeta) = (p.prefix(m)?, p.prefix(mu)?, q.prefix(n)?, q.prefix(eta)?);
    let (dp, dq) = (pmu - pm, qeta - qn);
    if !(dp > 0.0 && dq > 0.0) {
        return Err(Error::domain("lemma_forward", "P_μ − P_m and Q_η − Q_n must be positive"));
    }
    let c = corners(seq, p, q, m, n, mu, eta)?;
    let sum = weighted_sum(p, q, m + 1..=mu, n + 1..=eta, |i, j| seq.value(i, j) - c.u)?;
    let coefficients = [pmu * qeta / (dp * dq), pmu / dp, qeta / dq];
    let terms = [
        (c.s_mu_eta - c.s_mu_n - c.s_m_eta + c.s_mn) * coefficients[0],
        (c.s_mu_n - c.s_mn) * coefficients[1],
        (c.s_m_eta - c.s_mn) * coefficients[2],
        sum / (dp * dq),
    ];
    finish((m, n, mu, eta), Direction::Forward, &c, terms, coefficients)
}

/// Backward decomposition at `(m, n)` with `μ < m`, `η < n`.
pub fn lemma_backward(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    mu: usize,
    eta: usize,
) -> Result<LemmaDecomposition> {
    if mu >= m || eta >= n {
        return Err(Error::domain(
            "lemma_backward",
            format!("need μ < m and η < n, got (m, n, μ, η) = ({m}, {n}, {mu}, {eta})"),
        ));
    }
    let (pm, pmu, qn, qeta) = (p.prefix(m)?, p.prefix(mu)?, q.prefix(n)?, q.prefix(eta)?);
    let (dp, dq) = (pm - pmu, qn - qeta);
    if !(dp > 0.0 && dq > 0.0) {
        return Err(Error::domain("lemma_backward", "P_m − P_μ and Q_n − Q_η must be positive"));
    }
    let c = corners(seq, p, q, m, n, mu, eta)?;
    let sum = weighted_sum(p, q, mu + 1..=m, eta + 1..=n, |i, j| c.u - seq.value(i, j))?;
    let coefficients = [pmu * qeta / (dp * dq), pmu / dp, qeta / dq];
    let terms = [
        (c.s_mn - c.s_mu_n - c.s_m_eta + c.s_mu_eta) * coefficients[0],
        (c.s_mn - c.s_mu_n) * coefficients[1],
        (c.s_mn - c.s_m_eta) * coefficients[2],
        sum / (dp * dq),
    ];
    finish((m, n, mu, eta), Direction::Backward, &c, terms, coefficients)
}

/// One side-by-side evaluation of the upper (forward) or lower (backward)
/// bound on `u_mn − σ_mn` that replaces the double sum by window minima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofInequality {
    pub m: usize,
    pub n: usize,
    pub mu: usize,
    pub eta: usize,
    pub direction: Direction,
    pub lhs: f64,
    pub rhs: f64,
    /// Rounding allowance: 64 ε times the largest magnitude involved times
    /// the coefficient gain.
    pub slack: f64,
    pub holds: bool,
}

fn min_over<F: Fn(usize, usize) -> f64>(is: std::ops::RangeInclusive<usize>, js: std::ops::RangeInclusive<usize>, f: F) -> f64 {
    let mut best = f64::INFINITY;
    for i in is {
        for j in js.clone() {
            best = best.min(f(i, j));
        }
    }
    best
}

fn inequality(d: &LemmaDecomposition, mins: [f64; 2]) -> ProofInequality {
    let t: Vec<f64> = d.terms.iter().map(|z| z.re).collect();
    let lhs = d.lhs.re;
    let (rhs, holds_exact): (f64, fn(f64, f64, f64) -> bool) = match d.direction {
        Direction::Forward => (t[0] + t[1] + t[2] - mins[0] - mins[1], |l, r, s| l <= r + s),
        Direction::Backward => (t[0] + t[1] + t[2] + mins[0] + mins[1], |l, r, s| l >= r - s),
    };
    let scale = t
        .iter()
        .chain(mins.iter())
        .chain([lhs, d.scale].iter())
        .fold(0.0f64, |a, x| a.max(x.abs()));
    let slack = 64.0 * f64::EPSILON * scale * d.gain;
    ProofInequality {
        m: d.m,
        n: d.n,
        mu: d.mu,
        eta: d.eta,
        direction: d.direction,
        lhs,
        rhs,
        slack,
        holds: holds_exact(lhs, rhs, slack),
    }
}

/// `u_mn − σ_mn ≤ A(…) + B(…) + C(…) − min_{rect}(u_ij − u_in) − min_i(u_in − u_mn)`
/// over `[m, μ] × [n, η]` with `μ`, `η` from [`choose_mu`].
pub fn proof_inequality_forward(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    delta: f64,
    gamma: f64,
) -> Result<ProofInequality> {
    seq.require_real("proof_inequality_forward")?;
    let mu = choose_mu(p, m, delta)?;
    let eta = choose_mu(q, n, gamma)?;
    let d = lemma_forward(seq, p, q, m, n, mu, eta)?;
    let u = |i, j| seq.value(i, j).re;
    let rect = min_over(m..=mu, n..=eta, |i, j| u(i, j) - u(i, n));
    let line = min_over(m..=mu, n..=n, |i, _| u(i, n) - u(m, n));
    Ok(inequality(&d, [rect, line]))
}

/// `u_mn − σ_mn ≥ A(…) + B(…) + C(…) + min_i(u_mn − u_in) + min_{rect}(u_in − u_ij)`
/// over `[μ̃, m] × [η̃, n]` with `μ̃`, `η̃` from [`choose_mu_backward`].
pub fn proof_inequality_backward(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
    delta: f64,
    gamma: f64,
) -> Result<ProofInequality> {
    seq.require_real("proof_inequality_backward")?;
    let mu = choose_mu_backward(p, m, delta)?;
    let eta = choose_mu_backward(q, n, gamma)?;
    let d = lemma_backward(seq, p, q, m, n, mu, eta)?;
    let u = |i, j| seq.value(i, j).re;
    let line = min_over(mu..=m, n..=n, |i, _| u(m, n) - u(i, n));
    let rect = min_over(mu..=m, eta..=n, |i, j| u(i, n) - u(i, j));
    Ok(inequality(&d, [line, rect]))
}

/// The telescoping bound `sd_P(m, n, λ) ≥ −M₁(P_μ/P_m − 1)` at one point,
/// where `μ` is the forward window end and `M₁` bounds the scaled
/// differences from below.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeSample {
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub mu: usize,
    pub sd: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn landau_bridge(
    seq: &DoubleSequence,
    p: &WeightSequence,
    m: usize,
    n: usize,
    lambda: f64,
    m1: f64,
) -> Result<BridgeSample> {
    let mu = window_upper_index(p, m, lambda)?;
    let sd = crate::oscillation::sd_functional_p(seq, p, m, n, lambda)?;
    let bound = -m1 * (p.prefix(mu)? / p.prefix(m)? - 1.0);
    Ok(BridgeSample {
        m,
        n,
        lambda,
        mu,
        sd,
        bound,
        holds: sd >= bound,
    })
}
