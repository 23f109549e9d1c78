//! The (N̄,p,q) weighted mean
//!
//! ```text
//! σ_mn = (1 / (P_m Q_n)) Σ_{i≤m} Σ_{j≤n} p_i q_j u_ij
//! ```
//!
//! computed row by row: `S_mn = S_{m−1,n} + p_m Σ_{j≤n} q_j u_mj`, which is the
//! inclusion–exclusion recurrence with the row sum kept separately. Each
//! column of `S` lives in a compensated accumulator, so the field costs
//! O(m·n) and loses essentially nothing to cancellation.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::accumulate::{two_prod, Compensated, CompensatedComplex};
use crate::error::{Error, Result};
use crate::sequence::{DoubleSequence, Grid};
use crate::weights::WeightSequence;

/// σ together with the numerator and prefix sums that produced it.
#[derive(Debug, Clone)]
pub struct MeanField {
    pub sigma: Grid,
    pub numerator: Grid,
    pub p_prefix: Vec<f64>,
    pub q_prefix: Vec<f64>,
}

impl MeanField {
    pub fn sigma(&self, m: usize, n: usize) -> Complex64 {
        self.sigma.get(m, n)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        write_grid_csv(&self.sigma, out)
    }
}

fn checked_value(seq: &DoubleSequence, m: usize, n: usize) -> Result<Complex64> {
    let z = seq.value(m, n);
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite { m, n })
    }
}

fn product_overflow(p: &WeightSequence, q: &WeightSequence, pm: f64, qn: f64, m: usize, n: usize) -> Error {
    // Blame the factor that carries the magnitude.
    if pm >= qn {
        Error::Overflow {
            family: p.family().to_string(),
            index: m,
        }
    } else {
        Error::Overflow {
            family: q.family().to_string(),
            index: n,
        }
    }
}

/// Streams σ one row at a time over `[0, m_max] × [0, n_max]`.
///
/// Memory is O(n_max) regardless of `m_max`.
pub struct RowKernel<'a> {
    seq: &'a DoubleSequence,
    p: &'a WeightSequence,
    p_prefix: Vec<f64>,
    q_prefix: Vec<f64>,
    q_weights: Vec<f64>,
    columns: Vec<CompensatedComplex>,
    next_row: usize,
}

impl<'a> RowKernel<'a> {
    pub fn new(
        seq: &'a DoubleSequence,
        p: &'a WeightSequence,
        q: &'a WeightSequence,
        m_max: usize,
        n_max: usize,
    ) -> Result<Self> {
        let p_prefix = p.prefixes(m_max)?;
        let q_prefix = q.prefixes(n_max)?;
        let q_weights = (0..=n_max).map(|j| q.weight(j)).collect::<Result<Vec<_>>>()?;
        let pm = p_prefix[m_max];
        let qn = q_prefix[n_max];
        if !(pm * qn).is_finite() {
            return Err(product_overflow(p, q, pm, qn, m_max, n_max));
        }
        Ok(Self {
            seq,
            p,
            p_prefix,
            q_prefix,
            q_weights,
            columns: vec![CompensatedComplex::new(); n_max + 1],
            next_row: 0,
        })
    }

    pub fn p_prefix(&self) -> &[f64] {
        &self.p_prefix
    }

    pub fn q_prefix(&self) -> &[f64] {
        &self.q_prefix
    }

    /// Advances to the next row, writing σ (and optionally `S`) for it.
    /// Returns the row index just produced.
    pub fn advance(
        &mut self,
        sigma: &mut [Complex64],
        mut numerator: Option<&mut [Complex64]>,
    ) -> Result<usize> {
        let m = self.next_row;
        assert!(m < self.p_prefix.len(), "row kernel exhausted");
        let pm = self.p.weight(m)?;
        let big_p = self.p_prefix[m];
        let mut row = CompensatedComplex::new();
        for (n, col) in self.columns.iter_mut().enumerate() {
            let u = checked_value(self.seq, m, n)?;
            let (w_hi, w_lo) = two_prod(pm, self.q_weights[n]);
            row.add_weighted(w_hi, w_lo, u);
            col.merge(&row);
            let s = col.value();
            let denom = big_p * self.q_prefix[n];
            sigma[n] = s / denom;
            if let Some(num) = numerator.as_deref_mut() {
                num[n] = s;
            }
            if !(s.re.is_finite() && s.im.is_finite()) {
                return Err(Error::NonFinite { m, n });
            }
        }
        self.next_row += 1;
        Ok(m)
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }
}

/// σ on the full grid `[0, m_max] × [0, n_max]`.
pub fn weighted_mean_field(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m_max: usize,
    n_max: usize,
) -> Result<MeanField> {
    let mut sigma = Grid::allocate(m_max, n_max)?;
    let mut numerator = Grid::allocate(m_max, n_max)?;
    let mut kernel = RowKernel::new(seq, p, q, m_max, n_max)?;
    let w = n_max + 1;
    sigma.resize(w * (m_max + 1), Complex64::default());
    numerator.resize(w * (m_max + 1), Complex64::default());
    for m in 0..=m_max {
        let range = m * w..(m + 1) * w;
        kernel.advance(&mut sigma[range.clone()], Some(&mut numerator[range]))?;
    }
    Ok(MeanField {
        sigma: Grid::from_parts(m_max, n_max, sigma),
        numerator: Grid::from_parts(m_max, n_max, numerator),
        p_prefix: kernel.p_prefix,
        q_prefix: kernel.q_prefix,
    })
}

/// σ_mn by direct double summation. Quadratic per cell; this is the oracle.
pub fn sigma_single(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    m: usize,
    n: usize,
) -> Result<Complex64> {
    let big_p = p.prefix(m)?;
    let big_q = q.prefix(n)?;
    if !(big_p * big_q).is_finite() {
        return Err(product_overflow(p, q, big_p, big_q, m, n));
    }
    let mut acc = CompensatedComplex::new();
    for i in 0..=m {
        let pi = p.weight(i)?;
        for j in 0..=n {
            let (hi, lo) = two_prod(pi, q.weight(j)?);
            acc.add_weighted(hi, lo, checked_value(seq, i, j)?);
        }
    }
    let s = acc.value();
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite { m, n });
    }
    Ok(s / (big_p * big_q))
}

/// Weighted mean with a general positive weight `p_mn`:
/// `σ_mn = (1/P_mn) Σ_{i≤m} Σ_{j≤n} p_ij u_ij` with `P_mn = Σ Σ p_ij`.
pub fn general_mean<F>(seq: &DoubleSequence, p2: F, m_max: usize, n_max: usize) -> Result<Grid>
where
    F: Fn(usize, usize) -> f64,
{
    let mut out = Grid::allocate(m_max, n_max)?;
    let mut num_cols = vec![CompensatedComplex::new(); n_max + 1];
    let mut den_cols = vec![Compensated::new(); n_max + 1];
    for m in 0..=m_max {
        let mut num_row = CompensatedComplex::new();
        let mut den_row = Compensated::new();
        for n in 0..=n_max {
            let w = p2(m, n);
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight {
                    name: "p_mn".into(),
                    index: m * (n_max + 1) + n,
                    value: w,
                });
            }
            num_row.add_weighted(w, 0.0, checked_value(seq, m, n)?);
            den_row.add(w);
            num_cols[n].merge(&num_row);
            den_cols[n].merge(&den_row);
            let den = den_cols[n].value();
            if !den.is_finite() {
                return Err(Error::Overflow {
                    family: "p_mn".into(),
                    index: m.max(n),
                });
            }
            out.push(num_cols[n].value() / den);
        }
    }
    Ok(Grid::from_parts(m_max, n_max, out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrendVerdict {
    DecreasingToZero,
    NotDecreasing,
}

/// Ratio profiles for one probe index `i`: `P_ki/P_kk` and `P_ik/P_kk` along
/// the diagonal `k ≥ i`.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityProbe {
    pub index: usize,
    pub row_profile: Vec<(usize, f64)>,
    pub col_profile: Vec<(usize, f64)>,
    pub row_verdict: TrendVerdict,
    pub col_verdict: TrendVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub horizon: usize,
    pub probes: Vec<RegularityProbe>,
}

impl RegularityReport {
    pub fn all_decreasing(&self) -> bool {
        self.probes.iter().all(|p| {
            p.row_verdict == TrendVerdict::DecreasingToZero
                && p.col_verdict == TrendVerdict::DecreasingToZero
        })
    }
}

/// Non-increasing along the whole profile and strictly decreasing on its
/// second half.
fn trend(profile: &[(usize, f64)]) -> TrendVerdict {
    let vals: Vec<f64> = profile.iter().map(|&(_, v)| v).collect();
    if vals.len() < 3 {
        return TrendVerdict::NotDecreasing;
    }
    let monotone = vals.windows(2).all(|w| w[1] <= w[0]);
    let strict_tail = vals[vals.len() / 2..].windows(2).all(|w| w[1] < w[0]);
    if monotone && strict_tail {
        TrendVerdict::DecreasingToZero
    } else {
        TrendVerdict::NotDecreasing
    }
}

/// Diagnoses the ratio conditions `P_mi/P_mn → 0` and `P_jn/P_mn → 0` of
/// the Kojima–Robinson regularity theorem along the diagonal `m = n`.
pub fn regularity_diagnostic<F>(
    p2_prefix: F,
    probe_rows: &[usize],
    m_max: usize,
    n_max: usize,
) -> RegularityReport
where
    F: Fn(usize, usize) -> f64,
{
    let horizon = m_max.min(n_max);
    let probes = probe_rows
        .iter()
        .filter(|&&i| i <= horizon)
        .map(|&i| {
            let mut row_profile = Vec::new();
            let mut col_profile = Vec::new();
            for k in i..=horizon {
                let d = p2_prefix(k, k);
                row_profile.push((k, p2_prefix(k, i) / d));
                col_profile.push((k, p2_prefix(i, k) / d));
            }
            RegularityProbe {
                index: i,
                row_verdict: trend(&row_profile),
                col_verdict: trend(&col_profile),
                row_profile,
                col_profile,
            }
        })
        .collect();
    RegularityReport { horizon, probes }
}

/// Writes a grid as CSV `m,n,value_re,value_im`, 17 significant digits.
pub fn write_grid_csv<W: Write>(grid: &Grid, mut out: W) -> io::Result<()> {
    writeln!(out, "m,n,value_re,value_im")?;
    for (m, n, z) in grid.cells() {
        writeln!(out, "{m},{n},{},{}", fmt17(z.re), fmt17(z.im))?;
    }
    Ok(())
}

/// Decimal with 17 significant digits; round-trips every finite double.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}
