//! All window functionals over a block of `(m, n)` at once.
//!
//! Windows in one axis move monotonically with `m`, so column extremes
//! `min_{i∈I(m)} u_ij` come from one sliding-window pass per column, and the
//! rectangle extremes from a second pass over the row extremes. Since
//! `x ↦ fl(x − c)` is monotone, `min_x fl(x − c) = fl(min_x x − c)` and the
//! block values equal the scanned point values exactly.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;

use super::sliding::sliding_extrema;
use super::{window_range, Direction, Functional, WindowParams};
use crate::error::{Error, Result};
use crate::sequence::DoubleSequence;
use crate::weights::WeightSequence;

/// Default cap on the number of `u` values materialized for one block.
pub const DEFAULT_REGION_BUDGET: usize = 1 << 23;

/// Inclusive index block `[m0, m1] × [n0, n1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub m0: usize,
    pub m1: usize,
    pub n0: usize,
    pub n1: usize,
}

impl Block {
    pub fn new(m0: usize, m1: usize, n0: usize, n1: usize) -> Self {
        assert!(m0 <= m1 && n0 <= n1, "empty block");
        Self { m0, m1, n0, n1 }
    }

    /// `[⌈f·h⌉, h]²`.
    pub fn tail(horizon: usize, fraction: f64) -> Self {
        let lo = ((fraction * horizon as f64).ceil() as usize).min(horizon);
        Self::new(lo, horizon, lo, horizon)
    }

    pub fn rows(&self) -> usize {
        self.m1 - self.m0 + 1
    }

    pub fn cols(&self) -> usize {
        self.n1 - self.n0 + 1
    }

    pub fn cells(&self) -> usize {
        self.rows() * self.cols()
    }
}

/// Functional values on a block, row-major in `(m, n)`.
#[derive(Debug, Clone)]
pub struct FieldSet {
    pub block: Block,
    pub params: WindowParams,
    fields: [Option<Vec<f64>>; 10],
}

impl FieldSet {
    pub fn get(&self, f: Functional) -> Option<&[f64]> {
        self.fields[f.index()].as_deref()
    }

    pub fn value(&self, f: Functional, m: usize, n: usize) -> Option<f64> {
        let b = &self.block;
        assert!((b.m0..=b.m1).contains(&m) && (b.n0..=b.n1).contains(&n));
        self.get(f).map(|v| v[(m - b.m0) * b.cols() + (n - b.n0)])
    }

    /// Infimum over the block for `sd_*`, supremum for `so_*`.
    pub fn tail_stat(&self, f: Functional) -> Option<f64> {
        let v = self.get(f)?;
        Some(if f.is_decrease() {
            v.iter().copied().fold(f64::INFINITY, f64::min)
        } else {
            v.iter().copied().fold(0.0, f64::max)
        })
    }
}

fn ranges(
    w: &WeightSequence,
    lo: usize,
    hi: usize,
    scale: f64,
    direction: Direction,
) -> Result<Vec<RangeInclusive<usize>>> {
    (lo..=hi).map(|k| window_range(w, k, scale, direction)).collect()
}

fn first_nan(v: &[f64], block: &Block) -> Result<()> {
    match v.iter().position(|x| x.is_nan()) {
        None => Ok(()),
        Some(k) => Err(Error::NonFinite {
            m: block.m0 + k / block.cols(),
            n: block.n0 + k % block.cols(),
        }),
    }
}

/// Evaluates every applicable functional on `block`. Returns `Ok(None)`
/// when the windows reach further than `budget` values of `u`.
pub fn evaluate_block(
    seq: &DoubleSequence,
    p: &WeightSequence,
    q: &WeightSequence,
    params: WindowParams,
    block: Block,
    budget: usize,
) -> Result<Option<FieldSet>> {
    let dir = params.direction;
    let iw = ranges(p, block.m0, block.m1, params.lambda, dir)?;
    let jw = ranges(q, block.n0, block.n1, params.kappa, dir)?;
    let (r0, r1) = (*iw[0].start(), *iw[iw.len() - 1].end());
    let (c0, c1) = (*jw[0].start(), *jw[jw.len() - 1].end());
    let (nr, nc) = (r1 - r0 + 1, c1 - c0 + 1);
    match nr.checked_mul(nc) {
        Some(cells) if cells <= budget => {}
        _ => return Ok(None),
    }
    let iw_rel: Vec<(usize, usize)> = iw.iter().map(|r| (r.start() - r0, r.end() - r0)).collect();
    let jw_rel: Vec<(usize, usize)> = jw.iter().map(|r| (r.start() - c0, r.end() - c0)).collect();
    let fields = if seq.is_real() {
        real_fields(seq, &block, (r0, nr), (c0, nc), &iw_rel, &jw_rel, dir)?
    } else {
        complex_fields(seq, &block, (r0, nr), (c0, nc), &iw_rel, &jw_rel, budget)?
    };
    for f in fields.iter().flatten() {
        first_nan(f, &block)?;
    }
    Ok(Some(FieldSet {
        block,
        params,
        fields,
    }))
}

fn real_fields(
    seq: &DoubleSequence,
    block: &Block,
    (r0, nr): (usize, usize),
    (c0, nc): (usize, usize),
    iw: &[(usize, usize)],
    jw: &[(usize, usize)],
    dir: Direction,
) -> Result<[Option<Vec<f64>>; 10]> {
    let (bm, bn) = (block.rows(), block.cols());
    // u on the region, row-major.
    let mut u = vec![0.0; nr * nc];
    u.par_chunks_mut(nc).enumerate().for_each(|(a, row)| {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = seq.re(r0 + a, c0 + b);
        }
    });
    let at = |i: usize, j: usize| u[(i - r0) * nc + (j - c0)];

    // Column extremes over I(m): [j][m].
    let mut col_min = vec![0.0; nc * bm];
    let mut col_max = vec![0.0; nc * bm];
    col_min
        .par_chunks_mut(bm)
        .zip(col_max.par_chunks_mut(bm))
        .enumerate()
        .for_each(|(b, (lo, hi))| {
            let column: Vec<f64> = (0..nr).map(|a| u[a * nc + b]).collect();
            lo.copy_from_slice(&sliding_extrema(&column, iw.iter().copied(), true));
            hi.copy_from_slice(&sliding_extrema(&column, iw.iter().copied(), false));
        });
    // Row extremes over J(n): [i][n].
    let mut row_min = vec![0.0; nr * bn];
    let mut row_max = vec![0.0; nr * bn];
    row_min
        .par_chunks_mut(bn)
        .zip(row_max.par_chunks_mut(bn))
        .enumerate()
        .for_each(|(a, (lo, hi))| {
            let row = &u[a * nc..(a + 1) * nc];
            lo.copy_from_slice(&sliding_extrema(row, jw.iter().copied(), true));
            hi.copy_from_slice(&sliding_extrema(row, jw.iter().copied(), false));
        });

    let fwd = dir == Direction::Forward;
    // Slow-decrease difference from the relevant extreme: fl(min − c) or fl(c − max).
    let sd = |lo: f64, hi: f64, c: f64| if fwd { lo - c } else { c - hi };
    let so = |lo: f64, hi: f64, c: f64| (hi - c).max(c - lo);
    let m_of = |k: usize| block.m0 + k;
    let n_of = |k: usize| block.n0 + k;

    let mut out: [Option<Vec<f64>>; 10] = Default::default();
    let cell_field = |g: &(dyn Fn(usize, usize) -> f64 + Sync)| {
        let mut v = vec![0.0; bm * bn];
        v.par_chunks_mut(bn).enumerate().for_each(|(a, row)| {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = g(a, b);
            }
        });
        Some(v)
    };

    // Single-axis functionals.
    out[Functional::SdP.index()] = cell_field(&|a, b| {
        let j = n_of(b) - c0;
        sd(col_min[j * bm + a], col_max[j * bm + a], at(m_of(a), n_of(b)))
    });
    out[Functional::SoP.index()] = cell_field(&|a, b| {
        let j = n_of(b) - c0;
        so(col_min[j * bm + a], col_max[j * bm + a], at(m_of(a), n_of(b)))
    });
    out[Functional::SdQ.index()] = cell_field(&|a, b| {
        let i = m_of(a) - r0;
        sd(row_min[i * bn + b], row_max[i * bn + b], at(m_of(a), n_of(b)))
    });
    out[Functional::SoQ.index()] = cell_field(&|a, b| {
        let i = m_of(a) - r0;
        so(row_min[i * bn + b], row_max[i * bn + b], at(m_of(a), n_of(b)))
    });

    // Strong P: for each m, the column functional at every j ∈ C, then
    // extremes over J(n).
    let strong_p = |decrease: bool| -> Vec<f64> {
        let mut v = vec![0.0; bm * bn];
        v.par_chunks_mut(bn).enumerate().for_each(|(a, row)| {
            let m = m_of(a);
            let line: Vec<f64> = (0..nc)
                .map(|j| {
                    let (lo, hi, c) = (col_min[j * bm + a], col_max[j * bm + a], at(m, c0 + j));
                    if decrease {
                        sd(lo, hi, c)
                    } else {
                        so(lo, hi, c)
                    }
                })
                .collect();
            row.copy_from_slice(&sliding_extrema(&line, jw.iter().copied(), decrease));
        });
        v
    };
    out[Functional::SdStrongP.index()] = Some(strong_p(true));
    out[Functional::SoStrongP.index()] = Some(strong_p(false));

    // Strong Q: for each n, the row functional at every i ∈ R, then
    // extremes over I(m). Built column-wise and transposed.
    let strong_q = |decrease: bool| -> Vec<f64> {
        let mut t = vec![0.0; bn * bm];
        t.par_chunks_mut(bm).enumerate().for_each(|(b, col)| {
            let n = n_of(b);
            let line: Vec<f64> = (0..nr)
                .map(|i| {
                    let (lo, hi, c) = (row_min[i * bn + b], row_max[i * bn + b], at(r0 + i, n));
                    if decrease {
                        sd(lo, hi, c)
                    } else {
                        so(lo, hi, c)
                    }
                })
                .collect();
            col.copy_from_slice(&sliding_extrema(&line, iw.iter().copied(), decrease));
        });
        transpose(&t, bn, bm)
    };
    out[Functional::SdStrongQ.index()] = Some(strong_q(true));
    out[Functional::SoStrongQ.index()] = Some(strong_q(false));

    // Rectangle extremes: row extremes slid over I(m), per n.
    let mut rect_min_t = vec![0.0; bn * bm];
    let mut rect_max_t = vec![0.0; bn * bm];
    rect_min_t
        .par_chunks_mut(bm)
        .zip(rect_max_t.par_chunks_mut(bm))
        .enumerate()
        .for_each(|(b, (lo, hi))| {
            let line_min: Vec<f64> = (0..nr).map(|i| row_min[i * bn + b]).collect();
            let line_max: Vec<f64> = (0..nr).map(|i| row_max[i * bn + b]).collect();
            lo.copy_from_slice(&sliding_extrema(&line_min, iw.iter().copied(), true));
            hi.copy_from_slice(&sliding_extrema(&line_max, iw.iter().copied(), false));
        });
    let rect_min = transpose(&rect_min_t, bn, bm);
    let rect_max = transpose(&rect_max_t, bn, bm);
    out[Functional::SdBoth.index()] = cell_field(&|a, b| {
        sd(rect_min[a * bn + b], rect_max[a * bn + b], at(m_of(a), n_of(b)))
    });
    out[Functional::SoBoth.index()] = cell_field(&|a, b| {
        so(rect_min[a * bn + b], rect_max[a * bn + b], at(m_of(a), n_of(b)))
    });
    Ok(out)
}

/// `t` is `rows × cols`; returns `cols × rows`.
fn transpose(t: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = t[r * cols + c];
        }
    }
    out
}

/// Complex sequences only admit the `so_*` family, evaluated by scanning a
/// materialized region. Rectangle functionals are skipped when the total
/// scan length exceeds `16 × budget`.
fn complex_fields(
    seq: &DoubleSequence,
    block: &Block,
    (r0, nr): (usize, usize),
    (c0, nc): (usize, usize),
    iw: &[(usize, usize)],
    jw: &[(usize, usize)],
    budget: usize,
) -> Result<[Option<Vec<f64>>; 10]> {
    let (bm, bn) = (block.rows(), block.cols());
    let mut u = vec![Complex64::default(); nr * nc];
    u.par_chunks_mut(nc).enumerate().for_each(|(a, row)| {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = seq.value(r0 + a, c0 + b);
        }
    });
    let at = |a: usize, b: usize| u[a * nc + b];
    let scan_cost: usize = iw.iter().map(|w| w.1 - w.0 + 1).sum::<usize>()
        * jw.iter().map(|w| w.1 - w.0 + 1).sum::<usize>();

    let mut out: [Option<Vec<f64>>; 10] = Default::default();
    for f in Functional::SO {
        let rect = !matches!(f, Functional::SoP | Functional::SoQ);
        if rect && scan_cost > budget.saturating_mul(16) {
            continue;
        }
        let mut v = vec![0.0; bm * bn];
        v.par_chunks_mut(bn).enumerate().for_each(|(a, row)| {
            let mr = block.m0 + a - r0;
            for (b, slot) in row.iter_mut().enumerate() {
                let nrel = block.n0 + b - c0;
                let (ilo, ihi) = iw[a];
                let (jlo, jhi) = jw[b];
                let mut best = 0.0f64;
                match f {
                    Functional::SoP => {
                        for i in ilo..=ihi {
                            best = best.max((at(i, nrel) - at(mr, nrel)).norm());
                        }
                    }
                    Functional::SoQ => {
                        for j in jlo..=jhi {
                            best = best.max((at(mr, j) - at(mr, nrel)).norm());
                        }
                    }
                    _ => {
                        for i in ilo..=ihi {
                            for j in jlo..=jhi {
                                let anchor = match f {
                                    Functional::SoStrongP => at(mr, j),
                                    Functional::SoStrongQ => at(i, nrel),
                                    _ => at(mr, nrel),
                                };
                                best = best.max((at(i, j) - anchor).norm());
                            }
                        }
                    }
                }
                *slot = best;
            }
        });
        out[f.index()] = Some(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::oscillation::functional;

    fn agree(seq: &DoubleSequence, p: &WeightSequence, q: &WeightSequence, params: WindowParams, block: Block) {
        let fs = evaluate_block(seq, p, q, params, block, DEFAULT_REGION_BUDGET)
            .unwrap()
            .expect("within budget");
        for f in Functional::ALL {
            let Some(_) = fs.get(f) else {
                assert!(f.is_decrease() && !seq.is_real());
                continue;
            };
            for m in block.m0..=block.m1 {
                for n in block.n0..=block.n1 {
                    let want = functional(seq, p, q, f, m, n, params).unwrap();
                    let got = fs.value(f, m, n).unwrap();
                    assert!(
                        got.to_bits() == want.to_bits() || (got == 0.0 && want == 0.0),
                        "{} {f} ({m},{n}) {params:?}: block {got} vs scan {want}",
                        seq.name()
                    );
                }
            }
        }
    }

    #[test]
    fn block_equals_scan_on_corpus() {
        let c = corpus::corpus();
        let block = Block::new(5, 17, 3, 14);
        for seq in &c.sequences {
            for (p, q) in [("ones", "ones"), ("harmonic", "odd"), ("power", "harmonic")] {
                let (p, q) = (corpus::weight(p).unwrap(), corpus::weight(q).unwrap());
                for params in [
                    WindowParams::forward(1.5, 1.25).unwrap(),
                    WindowParams::forward(1.1, 2.0).unwrap(),
                    WindowParams::backward(0.5, 0.8).unwrap(),
                ] {
                    agree(seq, &p, &q, params, block);
                }
            }
        }
    }

    #[test]
    fn budget_is_respected() {
        let h = WeightSequence::harmonic();
        let u = corpus::additive_convergent(1.0);
        let params = WindowParams::forward(2.0, 2.0).unwrap();
        let r = evaluate_block(&u, &h, &h, params, Block::tail(256, 0.5), 1 << 20).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn tail_block_bounds() {
        assert_eq!(Block::tail(512, 0.5), Block::new(256, 512, 256, 512));
        assert_eq!(Block::tail(7, 0.5), Block::new(4, 7, 4, 7));
    }
}
