//! Elementary sequence operators: the centered modulo map, higher-order
//! finite differences, the running-sum anti-difference and rounding to the
//! `2*lambda` grid. Everything here is a pure function on plain data.

use crate::error::{Error, Result};

/// A finite, uniformly indexed list of real amplitudes.
///
/// `base_index` records the semantic index of the first stored element so
/// that sequences produced at different pipeline stages (e.g. a recovered
/// tail window) can be compared sample-by-sample against their source.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSequence {
    values: Vec<f64>,
    base_index: i64,
}

impl RealSequence {
    /// Build a sequence with `base_index = 0`, rejecting empty or non-finite data.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidConfig("sequence must be non-empty".into()));
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Self { values, base_index: 0 })
    }

    pub fn with_base_index(mut self, base_index: i64) -> Self {
        self.base_index = base_index;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn base_index(&self) -> i64 {
        self.base_index
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    /// Largest absolute value in the sequence.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The tail starting at stored position `offset`; the base index advances
    /// accordingly so semantic alignment is preserved.
    pub fn tail(&self, offset: usize) -> Result<Self> {
        if offset >= self.values.len() {
            return Err(Error::InsufficientLength { len: self.values.len(), order: offset });
        }
        Ok(Self {
            values: self.values[offset..].to_vec(),
            base_index: self.base_index + offset as i64,
        })
    }

    /// Element-wise map, keeping length and base index.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            base_index: self.base_index,
        }
    }
}

impl std::ops::Index<usize> for RealSequence {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// The ADC folding threshold `lambda > 0`, in volts. Amplitudes are recorded
/// modulo `2*lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldingThreshold(f64);

impl FoldingThreshold {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NonFinite(lambda));
        }
        if lambda <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "folding threshold must be positive, got {lambda}"
            )));
        }
        Ok(Self(lambda))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn two_lambda(self) -> f64 {
        2.0 * self.0
    }
}

/// Centered modulo map: folds `x` into `[-lambda, lambda)` by
/// `2*lambda*(frac(x/(2*lambda) + 1/2) - 1/2)` with `frac(t) = t - floor(t)`.
///
/// Values already inside `[-lambda, lambda)` are returned unchanged, so the
/// map is an exact identity there and exactly idempotent.
pub fn fold(x: f64, threshold: FoldingThreshold) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    let lambda = threshold.get();
    if (-lambda..lambda).contains(&x) {
        return Ok(x);
    }
    let two_lambda = threshold.two_lambda();
    let t = x / two_lambda + 0.5;
    let frac = t - t.floor();
    let mut folded = two_lambda * (frac - 0.5);
    // frac can round up to 1.0 when x sits a few ulps below a fold boundary;
    // snap back into the half-open output interval.
    if folded >= lambda {
        folded = -lambda;
    }
    Ok(folded)
}

/// Element-wise [`fold`], keeping length and base index.
pub fn fold_sequence(s: &RealSequence, threshold: FoldingThreshold) -> Result<RealSequence> {
    let values = s
        .values()
        .iter()
        .map(|&v| fold(v, threshold))
        .collect::<Result<Vec<_>>>()?;
    Ok(RealSequence { values, base_index: s.base_index() })
}

/// Order-`n` finite difference, computed as `n` passes of the first
/// difference `(Ds)[k] = s[k+1] - s[k]`. Output length is `len(s) - n`.
pub fn finite_difference(s: &RealSequence, order: usize) -> Result<RealSequence> {
    if order == 0 {
        return Err(Error::InvalidConfig("difference order must be >= 1".into()));
    }
    if s.len() <= order {
        return Err(Error::InsufficientLength { len: s.len(), order });
    }
    let mut values = s.values().to_vec();
    for _ in 0..order {
        for k in 0..values.len() - 1 {
            values[k] = values[k + 1] - values[k];
        }
        values.pop();
    }
    Ok(RealSequence { values, base_index: s.base_index() })
}

/// Running-sum anti-difference `(Ss)[k] = sum_{m=1..k} s[m]`, same length as
/// the input. Inverts the first difference up to an additive constant:
/// `S(Ds)[k] = s[k+1] - s[1]`.
pub fn anti_difference(s: &RealSequence) -> RealSequence {
    let mut values = Vec::with_capacity(s.len());
    let mut acc = 0.0;
    for &v in s.values() {
        acc += v;
        values.push(acc);
    }
    RealSequence { values, base_index: s.base_index() }
}

/// Round `x` to the nearest integer multiple of `2*lambda`, as
/// `2*lambda*ceil(floor(x/lambda)/2)`. The result is within `lambda` of `x`.
pub fn round_to_2lambda_grid(x: f64, threshold: FoldingThreshold) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    let lambda = threshold.get();
    Ok(threshold.two_lambda() * ((x / lambda).floor() / 2.0).ceil())
}
