//! Analytic model of bandlimited test signals with a piecewise-constant,
//! even, nonnegative spectrum, plus pointwise evaluation, uniform sampling,
//! truncated sinc-series reconstruction and sup-norm estimation.
//!
//! For a spectrum that is constant `c_l` on `(w_{l-1}, w_l]` (mirrored to
//! negative frequencies) the time-domain signal has the closed form
//!
//! ```text
//! g(t) = scale/pi * sum_l c_l * (sin(w_l t) - sin(w_{l-1} t)) / t
//! ```
//!
//! with the obvious limit at `t = 0`. Such signals peak at the origin and
//! carry finite energy, which makes them convenient ground truth: their
//! sup-norm over the whole line is exactly `g(0)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RealSequence;

/// Default number of spectrum bins for randomly drawn signals.
pub const DEFAULT_NUM_BINS: usize = 16;

/// Default oversampling factor (relative to Nyquist) for sup-norm grids.
pub const DEFAULT_SUP_NORM_OVERSAMPLE: u32 = 32;

/// Window on which freshly drawn signals are normalized. Any window that
/// contains `t = 0` gives the same result for the nonnegative spectra drawn
/// here, because the global maximum sits at the origin.
const NORMALIZATION_WINDOW: (f64, f64) = (0.0, 8.0);

/// A finite-energy bandlimited signal with piecewise-constant even spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandlimitedSignal {
    /// Ascending bin edges `0 = w_0 < w_1 < ... < w_L <= omega`, in rad/s.
    bin_edges: Vec<f64>,
    /// Spectral density on each bin, length `L`.
    bin_heights: Vec<f64>,
    /// Bandwidth `omega` in rad/s.
    omega: f64,
    /// Output normalization factor.
    scale: f64,
    /// Seed the spectrum was drawn from (0 for hand-built spectra).
    seed: u64,
}

impl BandlimitedSignal {
    /// Build a signal from an explicit spectrum.
    ///
    /// `bin_edges` must start at 0, increase strictly and end at or below
    /// `omega`; `bin_heights` holds one finite value per bin.
    pub fn from_spectrum(
        bin_edges: Vec<f64>,
        bin_heights: Vec<f64>,
        omega: f64,
        scale: f64,
    ) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidConfig(format!("bandwidth must be positive, got {omega}")));
        }
        if bin_edges.len() < 2 || bin_heights.len() != bin_edges.len() - 1 {
            return Err(Error::InvalidConfig(format!(
                "need L >= 1 bins: got {} edges, {} heights",
                bin_edges.len(),
                bin_heights.len()
            )));
        }
        if bin_edges[0] != 0.0 {
            return Err(Error::InvalidConfig("first bin edge must be 0".into()));
        }
        if !bin_edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig("bin edges must be strictly increasing".into()));
        }
        let last = *bin_edges.last().unwrap();
        if last > omega {
            return Err(Error::InvalidConfig(format!(
                "last bin edge {last} exceeds bandwidth {omega}"
            )));
        }
        if let Some(&bad) = bin_heights.iter().find(|h| !h.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidConfig(format!("scale must be positive, got {scale}")));
        }
        Ok(Self { bin_edges, bin_heights, omega, scale, seed: 0 })
    }

    /// Draw a random signal: `num_bins` equal bins over `[0, omega]` with
    /// heights i.i.d. uniform on [0, 1), normalized so that the sup-norm
    /// estimate over the default window is 1.
    pub fn random(seed: u64, num_bins: usize, omega: f64) -> Result<Self> {
        if num_bins == 0 {
            return Err(Error::InvalidConfig("need at least one spectrum bin".into()));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidConfig(format!("bandwidth must be positive, got {omega}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bin_edges: Vec<f64> =
            (0..=num_bins).map(|l| omega * l as f64 / num_bins as f64).collect();
        let bin_heights: Vec<f64> = (0..num_bins).map(|_| rng.random::<f64>()).collect();
        let mut sig = Self { bin_edges, bin_heights, omega, scale: 1.0, seed };
        let peak = sig.sup_norm_estimate(NORMALIZATION_WINDOW, DEFAULT_SUP_NORM_OVERSAMPLE)?;
        if peak <= 0.0 {
            return Err(Error::InvalidConfig("degenerate spectrum: signal is identically 0".into()));
        }
        sig.scale = 1.0 / peak;
        Ok(sig)
    }

    /// A copy with the output amplitude multiplied by `factor`.
    pub fn scaled_by(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidConfig(format!("scale factor must be positive, got {factor}")));
        }
        let mut out = self.clone();
        out.scale *= factor;
        Ok(out)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn bin_heights(&self) -> &[f64] {
        &self.bin_heights
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Evaluate the signal at time `t` (seconds).
    pub fn evaluate(&self, t: f64) -> f64 {
        let inv_pi = std::f64::consts::FRAC_1_PI;
        // Direct formula loses nothing down to very small |t|; switch to the
        // Taylor form of (sin(w t) - sin(v t))/t near 0 to cover t = 0.
        if t.abs() * self.omega < 1e-6 {
            let t2 = t * t;
            let mut acc = 0.0;
            for (l, &c) in self.bin_heights.iter().enumerate() {
                let (v, w) = (self.bin_edges[l], self.bin_edges[l + 1]);
                let d1 = w - v;
                let d3 = w * w * w - v * v * v;
                let d5 = w.powi(5) - v.powi(5);
                acc += c * (d1 - t2 * d3 / 6.0 + t2 * t2 * d5 / 120.0);
            }
            return self.scale * inv_pi * acc;
        }
        let mut acc = 0.0;
        for (l, &c) in self.bin_heights.iter().enumerate() {
            let (v, w) = (self.bin_edges[l], self.bin_edges[l + 1]);
            acc += c * ((w * t).sin() - (v * t).sin());
        }
        self.scale * inv_pi * acc / t
    }

    /// Pointwise samples on a uniform grid, `values[k] = g(origin + k*step)`.
    pub fn sample(&self, grid: &SamplingGrid) -> RealSequence {
        let values: Vec<f64> =
            (0..grid.count).map(|k| self.evaluate(grid.origin + k as f64 * grid.step)).collect();
        RealSequence::new(values).expect("grid evaluation is finite and non-empty")
    }

    /// Maximum of `|g|` over a uniform grid on `[t_min, t_max]` with density
    /// `oversample` times the Nyquist rate (grid step `pi/(omega*oversample)`).
    ///
    /// Doubling `oversample` refines the grid in place, so the estimate is
    /// monotone non-decreasing in `oversample`.
    pub fn sup_norm_estimate(&self, window: (f64, f64), oversample: u32) -> Result<f64> {
        let (t_min, t_max) = window;
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(Error::InvalidConfig(format!(
                "degenerate window [{t_min}, {t_max}]"
            )));
        }
        if oversample == 0 {
            return Err(Error::InvalidConfig("oversample must be >= 1".into()));
        }
        let h = std::f64::consts::PI / (self.omega * oversample as f64);
        let steps = ((t_max - t_min) / h).floor() as u64;
        let mut sup = self.evaluate(t_max).abs();
        for i in 0..=steps {
            sup = sup.max(self.evaluate(t_min + i as f64 * h).abs());
        }
        Ok(sup)
    }
}

/// A uniform sampling grid: `count` samples spaced `step` seconds apart,
/// starting at `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    pub step: f64,
    pub count: usize,
    pub origin: f64,
}

impl SamplingGrid {
    pub fn new(step: f64, count: usize, origin: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidConfig(format!("sampling step must be positive, got {step}")));
        }
        if count == 0 {
            return Err(Error::InvalidConfig("sample count must be >= 1".into()));
        }
        if !origin.is_finite() {
            return Err(Error::NonFinite(origin));
        }
        Ok(Self { step, count, origin })
    }
}

/// Normalized sinc, `sin(pi x)/(pi x)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Truncated Shannon reconstruction at time `t` from uniform samples.
///
/// Stored sample `k` is taken to lie at time `k*step`; the sum runs over the
/// at most `2*half_width + 1` stored samples nearest `t`:
/// `sum_k samples[k] * sinc(t/step - k)`.
pub fn sinc_reconstruct(
    samples: &RealSequence,
    step: f64,
    t: f64,
    half_width: usize,
) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidConfig(format!("sampling step must be positive, got {step}")));
    }
    if half_width == 0 {
        return Err(Error::InvalidConfig("half_width must be >= 1".into()));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite(t));
    }
    let x = t / step;
    let center = x.round() as i64;
    let lo = (center - half_width as i64).max(0);
    let hi = (center + half_width as i64).min(samples.len() as i64 - 1);
    let mut acc = 0.0;
    let mut k = lo;
    while k <= hi {
        acc += samples[k as usize] * sinc(x - k as f64);
        k += 1;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Brute-force inverse Fourier transform of the piecewise-constant even
    /// spectrum: (scale/pi) * sum_l c_l * integral_{v..w} cos(omega t) domega,
    /// by composite Simpson quadrature on each bin.
    fn quadrature_oracle(sig: &BandlimitedSignal, t: f64) -> f64 {
        let mut acc = 0.0;
        for (l, &c) in sig.bin_heights().iter().enumerate() {
            let (v, w) = (sig.bin_edges()[l], sig.bin_edges()[l + 1]);
            let n = 2000usize; // even
            let h = (w - v) / n as f64;
            let mut s = (v * t).cos() + (w * t).cos();
            for i in 1..n {
                let x = v + i as f64 * h;
                s += (x * t).cos() * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc += c * s * h / 3.0;
        }
        sig.scale() * acc / PI
    }

    #[test]
    fn closed_form_matches_quadrature_oracle() {
        let sig = BandlimitedSignal::random(7, 4, PI).unwrap();
        for t in [0.0, 0.055, 0.3, 1.0, 1.7, -2.4, 13.37] {
            let direct = sig.evaluate(t);
            let oracle = quadrature_oracle(&sig, t);
            assert!(
                (direct - oracle).abs() < 1e-9,
                "t = {t}: closed form {direct} vs quadrature {oracle}"
            );
        }
    }

    #[test]
    fn single_bin_is_normalized_sinc() {
        let sig =
            BandlimitedSignal::from_spectrum(vec![0.0, PI], vec![1.0], PI, 1.0).unwrap();
        assert!((sig.evaluate(0.0) - 1.0).abs() < 1e-15);
        // zero crossings at nonzero integers
        for t in [1.0, 2.0, -3.0] {
            assert!(sig.evaluate(t).abs() < 1e-15, "t = {t}");
        }
        assert!((sig.evaluate(0.5) - sinc(0.5)).abs() < 1e-14);
    }

    #[test]
    fn random_single_bin_normalizes_to_unit_peak() {
        let sig = BandlimitedSignal::random(42, 1, PI).unwrap();
        let c = sig.bin_heights()[0];
        assert!((sig.scale() - 1.0 / c).abs() < 1e-12 * (1.0 / c));
        assert!((sig.evaluate(0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_signal() {
        let a = BandlimitedSignal::random(123, DEFAULT_NUM_BINS, PI).unwrap();
        let b = BandlimitedSignal::random(123, DEFAULT_NUM_BINS, PI).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_seeds_give_distinct_spectra() {
        let a = BandlimitedSignal::random(1, DEFAULT_NUM_BINS, PI).unwrap();
        let b = BandlimitedSignal::random(2, DEFAULT_NUM_BINS, PI).unwrap();
        assert_ne!(a.bin_heights(), b.bin_heights());
    }

    #[test]
    fn rejects_degenerate_configs() {
        assert!(BandlimitedSignal::random(0, 0, PI).is_err());
        assert!(BandlimitedSignal::random(0, 4, 0.0).is_err());
        assert!(BandlimitedSignal::random(0, 4, -1.0).is_err());
        assert!(BandlimitedSignal::from_spectrum(vec![0.1, PI], vec![1.0], PI, 1.0).is_err());
        assert!(BandlimitedSignal::from_spectrum(vec![0.0, 2.0, 1.0], vec![1.0, 1.0], PI, 1.0)
            .is_err());
        assert!(BandlimitedSignal::from_spectrum(vec![0.0, 4.0], vec![1.0], PI, 1.0).is_err());
    }

    #[test]
    fn partition_refinement_leaves_signal_unchanged() {
        let coarse = BandlimitedSignal::from_spectrum(vec![0.0, PI], vec![1.0], PI, 1.0).unwrap();
        let fine = BandlimitedSignal::from_spectrum(
            vec![0.0, PI / 2.0, PI],
            vec![1.0, 1.0],
            PI,
            1.0,
        )
        .unwrap();
        for t in [0.0, 0.1, 0.77, -3.2, 10.0] {
            assert!(
                (coarse.evaluate(t) - fine.evaluate(t)).abs() < 1e-12,
                "t = {t}"
            );
        }
    }

    #[test]
    fn sample_single_point() {
        let sig = BandlimitedSignal::random(9, 4, PI).unwrap();
        let grid = SamplingGrid::new(0.1, 1, 0.4).unwrap();
        let s = sig.sample(&grid);
        assert_eq!(s.values(), &[sig.evaluate(0.4)]);
    }

    #[test]
    fn decimated_grid_matches_every_other_sample() {
        let sig = BandlimitedSignal::random(11, 8, PI).unwrap();
        let fine = sig.sample(&SamplingGrid::new(0.055, 20, 0.0).unwrap());
        let coarse = sig.sample(&SamplingGrid::new(0.11, 10, 0.0).unwrap());
        for k in 0..10 {
            assert_eq!(coarse[k], fine[2 * k]);
        }
    }

    #[test]
    fn nyquist_samples_of_unit_sinc_are_impulse() {
        let sig = BandlimitedSignal::from_spectrum(vec![0.0, PI], vec![1.0], PI, 1.0).unwrap();
        let s = sig.sample(&SamplingGrid::new(1.0, 8, 0.0).unwrap());
        assert!((s[0] - 1.0).abs() < 1e-15);
        for k in 1..8 {
            assert!(s[k].abs() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn reconstruction_at_sample_instant_returns_sample() {
        let sig = BandlimitedSignal::random(5, 8, PI).unwrap();
        let step = 0.055;
        let s = sig.sample(&SamplingGrid::new(step, 64, 0.0).unwrap());
        let r = sinc_reconstruct(&s, step, 17.0 * step, 64).unwrap();
        assert!((r - s[17]).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_midpoint_matches_direct_formula() {
        let s = RealSequence::new(vec![0.0, 1.0, 0.0]).unwrap();
        let r = sinc_reconstruct(&s, 1.0, 0.5, 2).unwrap();
        let manual = 0.0 * sinc(0.5) + 1.0 * sinc(-0.5) + 0.0 * sinc(-1.5);
        assert!((r - manual).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_error_shrinks_with_window() {
        let sig = BandlimitedSignal::random(21, DEFAULT_NUM_BINS, PI).unwrap();
        let step = 11.0 / 200.0;
        let count = 512usize;
        let origin = -(count as f64) / 2.0 * step;
        let s = sig.sample(&SamplingGrid::new(step, count, origin).unwrap());
        let max_err = |w: usize| {
            let mut err: f64 = 0.0;
            for i in 0..101 {
                let t = -3.0 + 6.0 * i as f64 / 100.0;
                let r = sinc_reconstruct(&s, step, t - origin, w).unwrap();
                err = err.max((r - sig.evaluate(t)).abs());
            }
            err
        };
        let (e_small, e_mid, e_full) = (max_err(32), max_err(128), max_err(count));
        assert!(e_mid < e_small, "errors {e_small} -> {e_mid} did not shrink");
        assert!(e_full < e_mid, "errors {e_mid} -> {e_full} did not shrink");
    }

    #[test]
    fn nyquist_rate_reconstruction_is_truncation_limited() {
        // At the critical rate T = pi/omega the sinc series reproduces the
        // signal on interior points up to the truncated tails.
        let sig = BandlimitedSignal::random(33, DEFAULT_NUM_BINS, PI).unwrap();
        let count = 2048usize;
        let origin = -(count as f64 / 2.0);
        let s = sig.sample(&SamplingGrid::new(1.0, count, origin).unwrap());
        let mut err: f64 = 0.0;
        for i in 0..200 {
            let t = -300.0 + 600.0 * i as f64 / 199.0;
            let r = sinc_reconstruct(&s, 1.0, t - origin, count).unwrap();
            err = err.max((r - sig.evaluate(t)).abs());
        }
        assert!(err <= 1e-3, "interior reconstruction error {err} above 1e-3 of sup-norm");
    }

    #[test]
    fn sup_norm_of_normalized_signal_is_one() {
        let sig = BandlimitedSignal::random(17, DEFAULT_NUM_BINS, PI).unwrap();
        let est = sig.sup_norm_estimate((0.0, 4.0), 32).unwrap();
        assert!((est - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_estimate_monotone_in_oversampling() {
        let sig = BandlimitedSignal::random(29, DEFAULT_NUM_BINS, PI).unwrap();
        // A window away from the peak, where the grid max genuinely moves.
        let coarse = sig.sup_norm_estimate((1.3, 9.7), 4).unwrap();
        let fine = sig.sup_norm_estimate((1.3, 9.7), 8).unwrap();
        assert!(fine >= coarse);
    }

    #[test]
    fn sup_norm_estimate_converges_under_refinement() {
        let sig = BandlimitedSignal::random(31, DEFAULT_NUM_BINS, PI).unwrap();
        let a = sig.sup_norm_estimate((0.7, 12.0), 32).unwrap();
        let b = sig.sup_norm_estimate((0.7, 12.0), 64).unwrap();
        assert!((b - a).abs() / b < 1e-3, "estimates {a} vs {b}");
        assert!(b >= a);
    }

    #[test]
    fn sup_norm_rejects_degenerate_window() {
        let sig = BandlimitedSignal::random(3, 4, PI).unwrap();
        assert!(sig.sup_norm_estimate((1.0, 1.0), 32).is_err());
        assert!(sig.sup_norm_estimate((2.0, 1.0), 32).is_err());
        assert!(sig.sup_norm_estimate((0.0, 1.0), 0).is_err());
    }

    #[test]
    fn signal_round_trips_through_json() {
        let sig = BandlimitedSignal::random(55, DEFAULT_NUM_BINS, PI).unwrap();
        let text = serde_json::to_string(&sig).unwrap();
        let back: BandlimitedSignal = serde_json::from_str(&text).unwrap();
        assert_eq!(sig, back);
    }
}
