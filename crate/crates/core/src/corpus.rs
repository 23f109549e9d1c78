//! Named sequences and weights shared by the tests, examples and the CLI.
//!
//! Entries are addressed by a stable name optionally followed by `key=value`
//! parameters, e.g. `"geometric r=3"` or `"constant c=-0.5"`. The display
//! form `"power(beta=0.5)"` is accepted too.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr;
use crate::sequence::DoubleSequence;
use crate::weights::WeightSequence;

pub const SEQUENCE_NAMES: &[&str] = &[
    "constant",
    "paper_unbounded",
    "alternating",
    "additive_convergent",
    "separable_convergent",
    "complex_convergent",
];

pub const WEIGHT_NAMES: &[&str] = &["ones", "harmonic", "power", "geometric", "odd"];

/// The built-in entries with default parameters.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub sequences: Vec<DoubleSequence>,
    pub weights: Vec<WeightSequence>,
}

impl Corpus {
    pub fn real_sequences(&self) -> impl Iterator<Item = &DoubleSequence> {
        self.sequences.iter().filter(|s| s.is_real())
    }

    pub fn sequence(&self, name: &str) -> Option<&DoubleSequence> {
        self.sequences.iter().find(|s| s.name() == name)
    }

    pub fn weight(&self, name: &str) -> Option<&WeightSequence> {
        self.weights.iter().find(|w| w.name() == name || w.family() == name)
    }
}

pub fn corpus() -> Corpus {
    Corpus {
        sequences: SEQUENCE_NAMES
            .iter()
            .map(|n| sequence(n).expect("built-in sequence"))
            .collect(),
        weights: WEIGHT_NAMES
            .iter()
            .map(|n| weight(n).expect("built-in weight"))
            .collect(),
    }
}

pub fn constant(c: f64) -> DoubleSequence {
    DoubleSequence::real("constant", move |_, _| c)
        .with_limit(c)
        .with_bounded(true)
}

/// `7^n` on row `m = 1`, `7^{m+2}` on column `n = 3`, `2` elsewhere.
/// P-convergent to 2 but unbounded. At `(1,3)` the row clause applies.
pub fn paper_unbounded() -> DoubleSequence {
    DoubleSequence::real("paper_unbounded", |m, n| {
        if m == 1 {
            pow7(n)
        } else if n == 3 {
            pow7(m.saturating_add(2))
        } else {
            2.0
        }
    })
    .with_limit(2.0)
    .with_bounded(false)
}

fn pow7(k: usize) -> f64 {
    7f64.powi(k.min(i32::MAX as usize) as i32)
}

/// `(−1)^{m+n}`.
pub fn alternating() -> DoubleSequence {
    DoubleSequence::real("alternating", |m, n| if (m + n) % 2 == 0 { 1.0 } else { -1.0 })
        .with_bounded(true)
}

/// `ℓ + 1/log(m+2) + 1/log(n+2)`: bounded, P-convergent to ℓ at a
/// logarithmic rate.
pub fn additive_convergent(l: f64) -> DoubleSequence {
    DoubleSequence::real("additive_convergent", move |m, n| {
        l + 1.0 / (m as f64 + 2.0).ln() + 1.0 / (n as f64 + 2.0).ln()
    })
    .with_limit(l)
    .with_bounded(true)
}

/// `a_m + b_n` with `a_m = A + 1/(m+1)` and `b_n = B + (−1)^n/(n+1)`.
pub fn separable_convergent(a: f64, b: f64) -> DoubleSequence {
    DoubleSequence::real("separable_convergent", move |m, n| {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        (a + 1.0 / (m as f64 + 1.0)) + (b + sign / (n as f64 + 1.0))
    })
    .with_limit(a + b)
    .with_bounded(true)
}

/// `(1+i) + e^{im}/(m+1) + e^{in}/(n+1)`.
pub fn complex_convergent() -> DoubleSequence {
    let l = Complex64::new(1.0, 1.0);
    DoubleSequence::complex("complex_convergent", move |m, n| {
        let (m, n) = (m as f64, n as f64);
        l + Complex64::from_polar(1.0 / (m + 1.0), m) + Complex64::from_polar(1.0 / (n + 1.0), n)
    })
    .with_limit(l)
    .with_bounded(true)
}

/// Splits `"name k=v k2=v2"` (or `"name(k=v, k2=v2)"`) into its parts.
fn split_params(text: &str) -> Result<(String, BTreeMap<String, f64>)> {
    let cleaned: String = text
        .chars()
        .map(|c| if matches!(c, '(' | ')' | ',') { ' ' } else { c })
        .collect();
    let mut parts = cleaned.split_whitespace();
    let name = parts
        .next()
        .ok_or_else(|| Error::Config("empty name".into()))?
        .to_string();
    let mut params = BTreeMap::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("`{p}` is not key=value")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| Error::Config(format!("`{v}` is not a number")))?;
        params.insert(k.to_string(), v);
    }
    Ok((name, params))
}

fn take(params: &mut BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.remove(key).unwrap_or(default)
}

fn no_leftovers(name: &str, params: &BTreeMap<String, f64>) -> Result<()> {
    match params.keys().next() {
        None => Ok(()),
        Some(k) => Err(Error::Config(format!("{name} has no parameter `{k}`"))),
    }
}

fn leading_word(text: &str) -> &str {
    let end = text
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(text.len());
    &text[..end]
}

/// Looks up a corpus sequence, falling back to an inline expression.
pub fn sequence(text: &str) -> Result<DoubleSequence> {
    let text = text.trim();
    if !SEQUENCE_NAMES.contains(&leading_word(text)) {
        return expr::sequence(text);
    }
    let (name, mut params) = split_params(text)?;
    let seq = match name.as_str() {
        "constant" => constant(take(&mut params, "c", 1.0)),
        "paper_unbounded" => paper_unbounded(),
        "alternating" => alternating(),
        "additive_convergent" => additive_convergent(take(&mut params, "l", 1.0)),
        "separable_convergent" => {
            separable_convergent(take(&mut params, "a", 1.0), take(&mut params, "b", 0.5))
        }
        "complex_convergent" => complex_convergent(),
        _ => unreachable!("checked against SEQUENCE_NAMES"),
    };
    no_leftovers(&name, &params)?;
    Ok(seq)
}

/// Looks up a corpus weight family.
pub fn weight(text: &str) -> Result<WeightSequence> {
    let (name, mut params) = split_params(text)?;
    let w = match name.as_str() {
        "ones" => WeightSequence::ones(),
        "harmonic" => WeightSequence::harmonic(),
        "odd" => WeightSequence::odd(),
        "power" => WeightSequence::power(take(&mut params, "beta", 0.5))
            .map_err(|e| Error::Config(e.to_string()))?,
        "geometric" => WeightSequence::geometric(take(&mut params, "r", 2.0))
            .map_err(|e| Error::Config(e.to_string()))?,
        other => {
            return Err(Error::Config(format!(
                "unknown weights `{other}` (known: {})",
                WEIGHT_NAMES.join(", ")
            )))
        }
    };
    no_leftovers(&name, &params)?;
    Ok(w)
}
