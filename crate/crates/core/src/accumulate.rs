//! Compensated (error-free transformation) accumulation.
//!
//! Every long sum in the crate goes through [`Compensated`], a Neumaier-style
//! accumulator that carries the rounding error of each addition in a second
//! word. Products of weights and sequence values are formed with
//! [`two_prod`] so that the low-order part of `p_i * q_j * u_ij` is not lost
//! before it reaches the accumulator.

use num_complex::Complex64;

/// `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// `a * b = p + e` exactly (barring overflow/underflow).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Neumaier accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            comp: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.comp += e;
    }

    /// Adds a value carried as an unevaluated pair `hi + lo`.
    #[inline]
    pub fn add_pair(&mut self, hi: f64, lo: f64) {
        self.add(hi);
        self.comp += lo;
    }

    /// Adds another accumulator without rounding its state first.
    #[inline]
    pub fn merge(&mut self, other: &Compensated) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    /// Adds `a * b` with the product's rounding error kept.
    #[inline]
    pub fn add_product(&mut self, a: f64, b: f64) {
        let (p, e) = two_prod(a, b);
        self.add_pair(p, e);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn parts(&self) -> (f64, f64) {
        (self.sum, self.comp)
    }

    pub fn from_parts(sum: f64, comp: f64) -> Self {
        Self { sum, comp }
    }
}

impl FromIterator<f64> for Compensated {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Compensated::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of a slice or iterator.
pub fn sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<Compensated>().value()
}

/// Component-wise Neumaier accumulator for complex values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedComplex {
    pub re: Compensated,
    pub im: Compensated,
}

impl CompensatedComplex {
    pub const fn new() -> Self {
        Self {
            re: Compensated::new(),
            im: Compensated::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn merge(&mut self, other: &CompensatedComplex) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    /// Adds `w * z` for a real weight `w = hi + lo` (itself a compensated
    /// product) and a complex value `z`.
    #[inline]
    pub fn add_weighted(&mut self, w_hi: f64, w_lo: f64, z: Complex64) {
        let (p, e) = two_prod(w_hi, z.re);
        self.re.add_pair(p, e + w_lo * z.re);
        if z.im != 0.0 {
            let (p, e) = two_prod(w_hi, z.im);
            self.im.add_pair(p, e + w_lo * z.im);
        }
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Distance between adjacent doubles at the magnitude of `x`.
pub fn ulp(x: f64) -> f64 {
    let x = x.abs();
    if !x.is_finite() {
        return f64::NAN;
    }
    if x < f64::MIN_POSITIVE {
        return f64::from_bits(1);
    }
    let next = f64::from_bits(x.to_bits() + 1);
    next - x
}
