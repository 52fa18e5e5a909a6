//! Simulation of self-reset (folding) ADCs and recovery of bandlimited
//! signals from their modulo samples.
//!
//! A conventional converter clips whenever the input exceeds its dynamic
//! range `[-lambda, lambda]`. A self-reset converter folds instead: it
//! records amplitudes modulo `2*lambda`, trading saturation for a stack of
//! wrap-around discontinuities. Given enough oversampling, those folds can
//! be undone in software: higher-order finite differences of the true
//! samples shrink below the folding threshold, so they survive the modulo
//! map, and the piecewise-constant residual (which lives on the grid
//! `2*lambda*Z`) can be rebuilt from its differences by repeated summation
//! with a grid snap and a window statistic fixing each level's constant.
//! The samples come back exactly, up to one global multiple of `2*lambda`,
//! once the sampling step satisfies `T <= 1/(2*omega*e)` — independent of
//! how small the threshold is. With bounded measurement noise (e.g.
//! round-off quantization) the same loop returns the noisy samples, so the
//! recovery error equals the injected noise.
//!
//! Modules:
//!
//! - [`numerics`] — centered modulo map, finite differences, running-sum
//!   anti-difference, rounding to the `2*lambda` grid.
//! - [`signals`] — random bandlimited test signals with piecewise-constant
//!   spectrum, sampling, sinc reconstruction, sup-norm estimation.
//! - [`adc`] — the simulated front end: folding, bounded noise, B-bit
//!   mid-rise quantization.
//! - [`recovery`] — order selection, the unfolding loop, the first-order
//!   unwrapping baseline and constant alignment.
//! - [`harness`] — reproducible experiment runners with CSV/JSON export;
//!   also backs the `usamp` command-line tool.
//!
//! # Example
//!
//! ```
//! use usamp::prelude::*;
//! use std::f64::consts::PI;
//!
//! // a random bandlimited signal with unit sup-norm and bandwidth pi
//! let signal = BandlimitedSignal::random(7, 16, PI)?;
//! let step = 11.0 / 200.0;
//!
//! // fold it into [-0.05, 0.05): amplitudes 20x beyond the ADC range
//! let threshold = FoldingThreshold::new(0.05)?;
//! let cfg = RecoveryConfig::noiseless(PI, step, 1.0, threshold);
//! let n = choose_order(&cfg)?;
//! let count = cfg.window_j()? + n + 32;
//! let gamma = signal.sample(&SamplingGrid::new(step, count, 0.0)?);
//! let y = fold_sequence(&gamma, threshold)?;
//!
//! // unfold and compare against ground truth
//! let result = recover(&y, &cfg)?;
//! let truth = gamma.tail(result.order_used)?;
//! let (aligned, _m) = align_constant(&result.gamma_tilde, &truth, threshold)?;
//! assert!(usamp::harness::mse(&aligned, &truth)? < 1e-24);
//! # Ok::<(), usamp::Error>(())
//! ```

pub mod adc;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod recovery;
pub mod signals;

pub use error::{Error, Result};

/// The commonly used types and operations in one import.
pub mod prelude {
    pub use crate::adc::{acquire, add_bounded_noise, codebook, quantize, ModuloAdcConfig};
    pub use crate::error::{Error, Result};
    pub use crate::harness::{mse, ExportFormat};
    pub use crate::numerics::{
        anti_difference, finite_difference, fold, fold_sequence, round_to_2lambda_grid,
        FoldingThreshold, RealSequence,
    };
    pub use crate::recovery::{
        align_constant, choose_order, estimate_kappa, itoh_unwrap, max_noise_bound, recover,
        RecoveryConfig, RecoveryMode, RecoveryResult,
    };
    pub use crate::signals::{sinc, sinc_reconstruct, BandlimitedSignal, SamplingGrid};
}
