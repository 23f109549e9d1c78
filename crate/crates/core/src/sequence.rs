//! Double sequences, dense grids of their values, and backward differences.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of cells a single [`Grid`] may hold.
pub const MAX_GRID_CELLS: usize = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarKind {
    Real,
    Complex,
}

#[derive(Clone)]
enum Rule {
    Real(Arc<dyn Fn(usize, usize) -> f64 + Send + Sync>),
    Complex(Arc<dyn Fn(usize, usize) -> Complex64 + Send + Sync>),
}

/// A double sequence `u_mn`: a pure evaluation rule on ℕ×ℕ plus what is known
/// about it.
#[derive(Clone)]
pub struct DoubleSequence {
    name: String,
    rule: Rule,
    declared_limit: Option<Complex64>,
    declared_bounded: Option<bool>,
}

impl fmt::Debug for DoubleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DoubleSequence")
            .field("name", &self.name)
            .field("kind", &self.kind())
            .field("declared_limit", &self.declared_limit)
            .field("declared_bounded", &self.declared_bounded)
            .finish()
    }
}

impl DoubleSequence {
    pub fn real<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            rule: Rule::Real(Arc::new(f)),
            declared_limit: None,
            declared_bounded: None,
        }
    }

    pub fn complex<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            rule: Rule::Complex(Arc::new(f)),
            declared_limit: None,
            declared_bounded: None,
        }
    }

    /// Real sequence backed by a dense row-major table; zero outside it.
    pub fn from_table(name: impl Into<String>, rows: usize, cols: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), rows * cols, "table shape mismatch");
        let values: Arc<[f64]> = values.into();
        Self::real(name, move |m, n| {
            if m < rows && n < cols {
                values[m * cols + n]
            } else {
                0.0
            }
        })
    }

    pub fn with_limit(mut self, limit: impl Into<Complex64>) -> Self {
        self.declared_limit = Some(limit.into());
        self
    }

    pub fn with_bounded(mut self, bounded: bool) -> Self {
        self.declared_bounded = Some(bounded);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ScalarKind {
        match self.rule {
            Rule::Real(_) => ScalarKind::Real,
            Rule::Complex(_) => ScalarKind::Complex,
        }
    }

    pub fn is_real(&self) -> bool {
        self.kind() == ScalarKind::Real
    }

    pub fn declared_limit(&self) -> Option<Complex64> {
        self.declared_limit
    }

    pub fn declared_bounded(&self) -> Option<bool> {
        self.declared_bounded
    }

    #[inline]
    pub fn value(&self, m: usize, n: usize) -> Complex64 {
        match &self.rule {
            Rule::Real(f) => Complex64::new(f(m, n), 0.0),
            Rule::Complex(f) => f(m, n),
        }
    }

    /// Real part of `u_mn`; for real sequences this is the whole value.
    #[inline]
    pub(crate) fn re(&self, m: usize, n: usize) -> f64 {
        match &self.rule {
            Rule::Real(f) => f(m, n),
            Rule::Complex(f) => f(m, n).re,
        }
    }

    /// `u_mn` for a real sequence; fails on complex sequences.
    pub fn real_value(&self, m: usize, n: usize) -> Result<f64> {
        match &self.rule {
            Rule::Real(f) => Ok(f(m, n)),
            Rule::Complex(_) => Err(Error::ComplexInput { op: "real_value" }),
        }
    }

    pub(crate) fn require_real(&self, op: &'static str) -> Result<()> {
        match self.kind() {
            ScalarKind::Real => Ok(()),
            ScalarKind::Complex => Err(Error::ComplexInput { op }),
        }
    }

    /// `c·u + d·v`, cellwise. The result is real when both inputs are real and
    /// both coefficients have zero imaginary part.
    pub fn linear_combination(
        a: Complex64,
        u: &DoubleSequence,
        b: Complex64,
        v: &DoubleSequence,
    ) -> DoubleSequence {
        let name = format!("{a}*{}+{b}*{}", u.name, v.name);
        let (u, v) = (u.clone(), v.clone());
        if u.is_real() && v.is_real() && a.im == 0.0 && b.im == 0.0 {
            DoubleSequence::real(name, move |m, n| a.re * u.re(m, n) + b.re * v.re(m, n))
        } else {
            DoubleSequence::complex(name, move |m, n| a * u.value(m, n) + b * v.value(m, n))
        }
    }
}

/// Backward difference in the first index, `u_mn − u_{m−1,n}`.
pub fn delta10(seq: &DoubleSequence, m: usize, n: usize) -> Result<Complex64> {
    if m == 0 {
        return Err(Error::domain("delta10", "difference undefined at m = 0"));
    }
    Ok(seq.value(m, n) - seq.value(m - 1, n))
}

/// Backward difference in the second index, `u_mn − u_{m,n−1}`.
pub fn delta01(seq: &DoubleSequence, m: usize, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::domain("delta01", "difference undefined at n = 0"));
    }
    Ok(seq.value(m, n) - seq.value(m, n - 1))
}

/// Dense `(m_max+1) × (n_max+1)` table of scalars, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    m_max: usize,
    n_max: usize,
    values: Vec<Complex64>,
}

impl Grid {
    pub(crate) fn allocate(m_max: usize, n_max: usize) -> Result<Vec<Complex64>> {
        let err = Error::Resource {
            rows: m_max.saturating_add(1),
            cols: n_max.saturating_add(1),
        };
        let cells = m_max
            .checked_add(1)
            .and_then(|r| n_max.checked_add(1).and_then(|c| r.checked_mul(c)))
            .ok_or_else(|| err.clone())?;
        if cells > MAX_GRID_CELLS {
            return Err(err);
        }
        let mut values = Vec::new();
        values.try_reserve_exact(cells).map_err(|_| err)?;
        Ok(values)
    }

    pub(crate) fn from_parts(m_max: usize, n_max: usize, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), (m_max + 1) * (n_max + 1));
        Self {
            m_max,
            n_max,
            values,
        }
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        assert!(m <= self.m_max && n <= self.n_max, "({m},{n}) outside grid");
        self.values[m * (self.n_max + 1) + n]
    }

    pub fn row(&self, m: usize) -> &[Complex64] {
        let w = self.n_max + 1;
        &self.values[m * w..(m + 1) * w]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Iterates `(m, n, value)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let w = self.n_max + 1;
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / w, k % w, *v))
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Grid {
        Grid {
            m_max: self.m_max,
            n_max: self.n_max,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Evaluates `seq` on every cell of `[0, m_max] × [0, n_max]`.
pub fn eval_grid(seq: &DoubleSequence, m_max: usize, n_max: usize) -> Result<Grid> {
    let mut values = Grid::allocate(m_max, n_max)?;
    for m in 0..=m_max {
        values.extend((0..=n_max).map(|n| seq.value(m, n)));
    }
    Ok(Grid::from_parts(m_max, n_max, values))
}
