//! Simulated self-reset ADC front end. Instead of saturating at the
//! threshold, the converter folds out-of-range amplitudes back into
//! `[-lambda, lambda)`; optional stages add bounded measurement noise and
//! B-bit mid-rise quantization.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{fold_sequence, FoldingThreshold, RealSequence};

/// Front-end configuration: folding threshold, optional bit depth and
/// optional bounded-noise injection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuloAdcConfig {
    pub threshold: FoldingThreshold,
    /// Quantizer bit depth; `None` records unquantized amplitudes.
    pub bits: Option<u32>,
    /// Sup bound of the additive noise; `None` (or 0) disables noise.
    pub noise_bound: Option<f64>,
    pub noise_seed: u64,
}

impl ModuloAdcConfig {
    pub fn noiseless(threshold: FoldingThreshold) -> Self {
        Self { threshold, bits: None, noise_bound: None, noise_seed: 0 }
    }

    fn validate(&self) -> Result<()> {
        if let Some(b) = self.bits {
            if b == 0 {
                return Err(Error::InvalidConfig("bit depth must be >= 1".into()));
            }
        }
        if let Some(b0) = self.noise_bound {
            if !b0.is_finite() || b0 < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "noise bound must be non-negative, got {b0}"
                )));
            }
        }
        Ok(())
    }
}

/// Run samples through the front end: fold, then add noise, then quantize.
///
/// The output leaves `[-lambda, lambda)` only through the noise term, by at
/// most the noise bound.
pub fn acquire(gamma: &RealSequence, cfg: &ModuloAdcConfig) -> Result<RealSequence> {
    cfg.validate()?;
    let mut y = fold_sequence(gamma, cfg.threshold)?;
    if let Some(b0) = cfg.noise_bound {
        y = add_bounded_noise(&y, b0, cfg.noise_seed)?;
    }
    if let Some(bits) = cfg.bits {
        y = quantize(&y, bits, cfg.threshold)?;
    }
    Ok(y)
}

/// The mid-rise codebook `{ +/- (2n+1) lambda / 2^B : n = 0..2^(B-1)-1 }`,
/// in ascending order. It has exactly `2^B` elements and no zero level.
pub fn codebook(bits: u32, threshold: FoldingThreshold) -> Vec<f64> {
    let lambda = threshold.get();
    let step = lambda / (1u64 << (bits - 1)) as f64;
    let half: i64 = 1i64 << (bits - 1);
    (-half..half).map(|n| (2 * n + 1) as f64 * step / 2.0).collect()
}

/// Round each sample to the nearest codebook element.
///
/// Ties are broken toward the element of smaller absolute value, except at
/// exactly 0, which maps to the positive element `lambda / 2^B`. For inputs
/// in `[-lambda, lambda]` the per-sample error is at most `lambda / 2^B`.
pub fn quantize(y: &RealSequence, bits: u32, threshold: FoldingThreshold) -> Result<RealSequence> {
    if bits == 0 {
        return Err(Error::InvalidConfig("bit depth must be >= 1".into()));
    }
    if bits > 52 {
        return Err(Error::InvalidConfig(format!("bit depth {bits} too large")));
    }
    let lambda = threshold.get();
    let levels = 1i64 << (bits - 1); // codebook elements per sign
    let step = lambda / levels as f64; // cell width 2*lambda/2^B
    let quantize_one = |v: f64| -> f64 {
        let (mag, sign) = if v < 0.0 { (-v, -1.0) } else { (v, 1.0) };
        let u = mag / step;
        let mut n = u.floor() as i64;
        // cell boundaries are equidistant between codewords: resolve toward 0
        if n >= 1 && u == u.floor() {
            n -= 1;
        }
        let n = n.clamp(0, levels - 1);
        sign * (2 * n + 1) as f64 * step / 2.0
    };
    Ok(y.map(quantize_one))
}

/// Add i.i.d. noise drawn uniformly from `[-b0, b0]` to every sample.
/// Deterministic for a fixed seed; `b0 = 0` returns the input unchanged.
pub fn add_bounded_noise(y: &RealSequence, b0: f64, seed: u64) -> Result<RealSequence> {
    if !b0.is_finite() || b0 < 0.0 {
        return Err(Error::InvalidConfig(format!("noise bound must be non-negative, got {b0}")));
    }
    if b0 == 0.0 {
        return Ok(y.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = y.values().iter().map(|&v| v + rng.random_range(-b0..=b0)).collect();
    Ok(RealSequence::new(values)?.with_base_index(y.base_index()))
}

/// Conventional-ADC saturation: clamp to `[-lambda, lambda]`. Used only for
/// the direct-quantization comparison experiment.
pub fn clip_sequence(gamma: &RealSequence, threshold: FoldingThreshold) -> RealSequence {
    let lambda = threshold.get();
    gamma.map(|v| v.clamp(-lambda, lambda))
}
