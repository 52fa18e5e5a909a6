//! Recovery of bandlimited samples from folded (modulo) measurements.
//!
//! The method rests on two facts. First, higher-order finite differences of
//! oversampled bandlimited sequences shrink geometrically, so for a suitable
//! order `N` the differences of the true samples pass through the modulo map
//! unchanged. Second, the residual between the true samples and their folded
//! version only takes values on the grid `2*lambda*Z`, which lets us rebuild
//! it from its `N`-th difference by repeated summation, snapping to the grid
//! and fixing the unknown constant at each level from a window statistic.
//! The recovered samples are exact up to one global multiple of `2*lambda`.

use crate::error::{Error, Result};
use crate::numerics::{finite_difference, fold, FoldingThreshold, RealSequence};

/// How aggressively the order selection must suppress differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryMode {
    /// Clean modulo samples; target `(T*omega*e)^N * beta_g <= lambda`.
    Noiseless,
    /// Samples carry bounded noise; target `... <= lambda/2` and a sampling
    /// rate `T <= 1/(2^alpha * omega * e)`.
    Noisy { alpha: u32 },
}

/// Everything the recovery algorithm needs to know about the acquisition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryConfig {
    /// Signal bandwidth (rad/s).
    pub omega: f64,
    /// Sampling step T (seconds).
    pub step: f64,
    /// Known amplitude bound with `beta_g >= ||g||_inf`, constrained to the
    /// grid `2*lambda*Z`.
    pub beta_g: f64,
    pub threshold: FoldingThreshold,
    /// Difference order override; `None` selects the order from the bound.
    pub order: Option<usize>,
    pub mode: RecoveryMode,
}

impl RecoveryConfig {
    pub fn noiseless(
        omega: f64,
        step: f64,
        beta_g: f64,
        threshold: FoldingThreshold,
    ) -> Self {
        Self { omega, step, beta_g, threshold, order: None, mode: RecoveryMode::Noiseless }
    }

    /// `beta_g / (2*lambda)` as the positive integer it must be.
    pub fn grid_multiple(&self) -> Result<u64> {
        let two_lambda = self.threshold.two_lambda();
        let q = self.beta_g / two_lambda;
        let rounded = q.round();
        if !(q.is_finite() && rounded >= 1.0 && (q - rounded).abs() <= 1e-9 * q.abs().max(1.0)) {
            return Err(Error::BetaNotOnGrid { beta_g: self.beta_g, two_lambda });
        }
        Ok(rounded as u64)
    }

    /// The window constant `J = 6*beta_g/lambda`, an integer because
    /// `beta_g` lies on the `2*lambda` grid.
    pub fn window_j(&self) -> Result<usize> {
        Ok(12 * self.grid_multiple()? as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "bandwidth must be positive, got {}",
                self.omega
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sampling step must be positive, got {}",
                self.step
            )));
        }
        self.grid_multiple()?;
        if let RecoveryMode::Noisy { alpha } = self.mode {
            if alpha == 0 {
                return Err(Error::InvalidConfig("alpha must be >= 1".into()));
            }
            let bound = 1.0 / (2f64.powi(alpha as i32) * self.omega * std::f64::consts::E);
            if self.step > bound * (1.0 + 1e-12) {
                return Err(Error::InvalidConfig(format!(
                    "noisy mode with alpha = {alpha} needs T <= {bound}, got {}",
                    self.step
                )));
            }
        }
        Ok(())
    }
}

/// Output of [`recover`]: samples and residual are defined up to one common
/// additive multiple of `2*lambda`, and cover the input window shifted by
/// `order_used` samples (their base index records the shift).
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    /// Recovered samples, `residual + y` on the overlapping window.
    pub gamma_tilde: RealSequence,
    /// Recovered residual; every value is a multiple of `2*lambda`.
    pub residual: RealSequence,
    /// The integer constants resolved at each anti-difference level, in loop
    /// order.
    pub kappas: Vec<i64>,
    pub order_used: usize,
    pub j_used: usize,
}

/// Ceiling that ignores round-off at integer boundaries.
fn ceil_tolerant(x: f64) -> f64 {
    (x - 1e-9).ceil()
}

/// Smallest difference order `N` with `(T*omega*e)^N * beta_g` below the
/// recovery target (`lambda` in noiseless mode, `lambda/2` in noisy mode).
///
/// Requires `T*omega*e < 1`; returns at least 1.
pub fn choose_order(cfg: &RecoveryConfig) -> Result<usize> {
    cfg.validate()?;
    let product = cfg.step * cfg.omega * std::f64::consts::E;
    if product >= 1.0 {
        return Err(Error::OversamplingInsufficient { product });
    }
    let lambda = cfg.threshold.get();
    let target = match cfg.mode {
        RecoveryMode::Noiseless => lambda / cfg.beta_g,
        RecoveryMode::Noisy { .. } => lambda / (2.0 * cfg.beta_g),
    };
    if target >= 1.0 {
        return Ok(1);
    }
    let ratio = target.ln() / product.ln();
    Ok((ceil_tolerant(ratio) as usize).max(1))
}

/// Largest admissible noise amplitude for the noisy-mode guarantee:
/// `(lambda/4) * (2*dr)^(-1/alpha)` with dynamic range `dr = beta_g/lambda`.
///
/// Callers must supply `dr >= 1` and `alpha >= 1`; the bound increases with
/// `alpha` toward `lambda/4`.
pub fn max_noise_bound(threshold: FoldingThreshold, dr: f64, alpha: u32) -> f64 {
    threshold.get() / 4.0 * (2.0 * dr).powf(-1.0 / alpha as f64)
}

/// Resolve the integer constant left over by one anti-difference level.
///
/// `zeta` is the twice-summed current difference sequence; the constant is
/// read off the drift between the first and the `(j+1)`-th element:
/// `floor((zeta[1] - zeta[j+1]) / (12*beta_g) + 1/2)`. With `j = 6*beta_g/lambda`
/// the candidate interval has length 1/2 and contains exactly one integer.
pub fn estimate_kappa(zeta: &RealSequence, beta_g: f64, j: usize) -> Result<i64> {
    if j == 0 {
        return Err(Error::InvalidConfig("window constant j must be >= 1".into()));
    }
    if zeta.len() < j + 1 {
        return Err(Error::WindowTooShort { len: zeta.len(), required: j + 1 });
    }
    let drift = (zeta[0] - zeta[j]) / (12.0 * beta_g) + 0.5;
    Ok(drift.floor() as i64)
}

/// Cumulative sum in place; on integer-valued data this is exact as long as
/// partial sums stay below 2^53.
fn cumsum(values: &mut [f64]) {
    let mut acc = 0.0;
    for v in values.iter_mut() {
        acc += *v;
        *v = acc;
    }
}

/// Recover bandlimited samples from (possibly noisy) modulo samples.
///
/// Runs the difference/anti-difference unfolding loop: take the order-`N`
/// difference of `y`, read off the residual differences through the modulo
/// map, then repeatedly sum, snap to the `2*lambda` grid and fix the level
/// constant until the residual itself is rebuilt. The result covers stored
/// positions `N..len(y)` of the input (base index advances by `N`) and is
/// exact up to one additive multiple of `2*lambda` whenever the sampling
/// rate and order satisfy the recovery bound.
///
/// The residual levels are carried internally in integer multiples of
/// `2*lambda`, on which the grid-snapping step is the identity; this is the
/// same arithmetic as summing in volts and rounding each level, without the
/// accumulated round-off.
pub fn recover(y: &RealSequence, cfg: &RecoveryConfig) -> Result<RecoveryResult> {
    cfg.validate()?;
    let order = match cfg.order {
        Some(n) if n >= 1 => n,
        Some(_) => return Err(Error::InvalidConfig("difference order must be >= 1".into())),
        None => choose_order(cfg)?,
    };
    let j = cfg.window_j()?;
    let required = j + order + 2;
    if y.len() < required {
        return Err(Error::WindowTooShort { len: y.len(), required });
    }

    let two_lambda = cfg.threshold.two_lambda();
    let diffs = finite_difference(y, order)?;

    // s0 = fold(D^N y) - D^N y, in grid units of 2*lambda:
    // fold(x) - x = -2*lambda*floor(x/(2*lambda) + 1/2) exactly.
    let mut units: Vec<f64> =
        diffs.values().iter().map(|&x| -((x / two_lambda + 0.5).floor())).collect();

    let mut kappas = Vec::with_capacity(order.saturating_sub(1));
    for _ in 0..order.saturating_sub(1) {
        cumsum(&mut units);
        // kappa from the twice-summed sequence, scaled back to volts
        let mut zeta_units = units.clone();
        cumsum(&mut zeta_units);
        let zeta = RealSequence::new(zeta_units.iter().map(|&u| u * two_lambda).collect())?;
        let kappa = estimate_kappa(&zeta, cfg.beta_g, j)?;
        for u in units.iter_mut() {
            *u += kappa as f64;
        }
        kappas.push(kappa);
    }
    cumsum(&mut units);

    let base = y.base_index() + order as i64;
    let residual_vals: Vec<f64> = units.iter().map(|&u| u * two_lambda).collect();
    let gamma_vals: Vec<f64> = residual_vals
        .iter()
        .zip(&y.values()[order..])
        .map(|(&r, &yk)| r + yk)
        .collect();

    Ok(RecoveryResult {
        gamma_tilde: RealSequence::new(gamma_vals)?.with_base_index(base),
        residual: RealSequence::new(residual_vals)?.with_base_index(base),
        kappas,
        order_used: order,
        j_used: j,
    })
}

/// First-order unwrapping baseline: accumulate folded first differences,
/// `u[0] = y[0]`, `u[k+1] = u[k] + fold(y[k+1] - y[k])`.
///
/// Recovers the original samples (shifted by `y[0] - gamma[0]`) exactly when
/// every first difference of the original samples stays below `lambda` in
/// magnitude; it has no mechanism to detect or repair violations.
pub fn itoh_unwrap(y: &RealSequence, threshold: FoldingThreshold) -> RealSequence {
    let vals = y.values();
    let mut out = Vec::with_capacity(vals.len());
    let mut acc = vals[0];
    out.push(acc);
    for w in vals.windows(2) {
        acc += fold(w[1] - w[0], threshold).expect("differences of finite samples are finite");
        out.push(acc);
    }
    RealSequence::new(out)
        .expect("unwrapped sequence is finite and non-empty")
        .with_base_index(y.base_index())
}

/// Resolve the global `2*lambda*Z` ambiguity against a known reference:
/// shifts `gamma_tilde` by `2*lambda*m` with
/// `m = round(mean(reference - gamma_tilde) / (2*lambda))`.
pub fn align_constant(
    gamma_tilde: &RealSequence,
    reference: &RealSequence,
    threshold: FoldingThreshold,
) -> Result<(RealSequence, i64)> {
    if gamma_tilde.len() != reference.len() {
        return Err(Error::LengthMismatch { left: gamma_tilde.len(), right: reference.len() });
    }
    let mean_gap = reference
        .iter()
        .zip(gamma_tilde.iter())
        .map(|(r, g)| r - g)
        .sum::<f64>()
        / gamma_tilde.len() as f64;
    let m = (mean_gap / threshold.two_lambda()).round() as i64;
    let shift = threshold.two_lambda() * m as f64;
    Ok((gamma_tilde.map(|v| v + shift), m))
}
