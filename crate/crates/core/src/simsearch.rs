//! Similarity search kernels: FFT sliding dot products, the dot-product to
//! z-normalized-distance formula, and MASS distance profiles.
//!
//! All functions here are pure over immutable inputs; FFT scratch space is
//! per call, so callers may run many searches concurrently.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::series::{check_window, is_flat, RollingStats, TimeSeries};

/// Distances (and Pearson correlations) from one query window to every
/// window of a series.
#[derive(Debug, Clone)]
pub struct DistanceProfile {
    /// z-normalized Euclidean distance per window.
    pub distances: Vec<f64>,
    /// Pearson correlation per window, clamped to [-1, 1].
    pub correlations: Vec<f64>,
    /// Set when the query is a window of the searched series itself.
    pub query_start: Option<usize>,
}

/// `sqrt(2m(1 - r))` with the correlation `r` derived from a dot product.
///
/// Returns `(distance, correlation)`. Flat-window convention: two constant
/// windows match exactly (distance 0, r = 1); a constant window is treated as
/// uncorrelated with any non-constant one (r = 0, distance `sqrt(2m)`).
pub fn dist_from_dot(
    qt: f64,
    mu_q: f64,
    sigma_q: f64,
    mu_i: f64,
    sigma_i: f64,
    m: usize,
) -> (f64, f64) {
    let mf = m as f64;
    let q_flat = is_flat(sigma_q, mu_q);
    let i_flat = is_flat(sigma_i, mu_i);
    if q_flat && i_flat {
        return (0.0, 1.0);
    }
    if q_flat || i_flat {
        return ((2.0 * mf).sqrt(), 0.0);
    }
    let r = ((qt - mf * mu_q * mu_i) / (mf * sigma_q * sigma_i)).clamp(-1.0, 1.0);
    // The radicand can round a hair negative at perfect matches.
    ((2.0 * mf * (1.0 - r)).max(0.0).sqrt(), r)
}

/// Reusable FFT state for repeated queries against one series.
///
/// Holds the padded spectrum of the series; each query costs one forward and
/// one inverse transform. Shareable across threads.
pub(crate) struct MassContext {
    n: usize,
    fft_len: usize,
    t_spectrum: Vec<Complex<f64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

pub(crate) struct MassScratch {
    freq: Vec<Complex<f64>>,
    work: Vec<Complex<f64>>,
}

impl MassContext {
    /// Context over the series shifted by `offset` (the centered frame the
    /// accompanying [`RollingStats`] describe).
    pub fn for_series(t_values: &[f64], offset: f64) -> Self {
        let centered: Vec<f64> = t_values.iter().map(|v| v - offset).collect();
        Self::new(&centered)
    }

    pub fn new(t_values: &[f64]) -> Self {
        let n = t_values.len();
        // Smallest power of two >= 2n: the classic algorithm pads to exactly
        // 2n; extra zeros leave the valid cells unchanged.
        let fft_len = (2 * n).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(fft_len);
        let inv = planner.plan_fft_inverse(fft_len);
        let mut t_spectrum = vec![Complex::new(0.0, 0.0); fft_len];
        for (slot, &v) in t_spectrum.iter_mut().zip(t_values) {
            slot.re = v;
        }
        let mut work = vec![Complex::new(0.0, 0.0); fwd.get_inplace_scratch_len()];
        fwd.process_with_scratch(&mut t_spectrum, &mut work);
        Self {
            n,
            fft_len,
            t_spectrum,
            fwd,
            inv,
        }
    }

    pub fn scratch(&self) -> MassScratch {
        let len = self
            .fwd
            .get_inplace_scratch_len()
            .max(self.inv.get_inplace_scratch_len());
        MassScratch {
            freq: vec![Complex::new(0.0, 0.0); self.fft_len],
            work: vec![Complex::new(0.0, 0.0); len],
        }
    }

    /// Sliding dot products of `q` against the series, written to `out`
    /// (length `n - m + 1`).
    pub fn dots_into(&self, q: &[f64], scratch: &mut MassScratch, out: &mut [f64]) {
        let m = q.len();
        debug_assert!(m <= self.n);
        debug_assert_eq!(out.len(), self.n - m + 1);
        scratch.freq.fill(Complex::new(0.0, 0.0));
        // Reversed query turns the convolution into in-order alignment.
        for (slot, &v) in scratch.freq.iter_mut().zip(q.iter().rev()) {
            slot.re = v;
        }
        self.fwd
            .process_with_scratch(&mut scratch.freq, &mut scratch.work);
        for (f, t) in scratch.freq.iter_mut().zip(&self.t_spectrum) {
            *f *= t;
        }
        self.inv
            .process_with_scratch(&mut scratch.freq, &mut scratch.work);
        let scale = 1.0 / self.fft_len as f64;
        // Valid cells sit at offsets m-1 .. n-1 of the linear convolution.
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = scratch.freq[m - 1 + i].re * scale;
        }
    }
}

/// Dot product between `q` and every window of `t` of length `|q|`,
/// via FFT convolution in O(n log n).
pub fn sliding_dot_product(q: &[f64], t: &TimeSeries) -> Result<Vec<f64>> {
    let (n, m) = (t.len(), q.len());
    if m == 0 || m > n {
        return Err(Error::InvalidWindow(format!(
            "query length {m} incompatible with series length {n}"
        )));
    }
    let ctx = MassContext::new(t.values());
    let mut scratch = ctx.scratch();
    let mut out = vec![0.0; n - m + 1];
    ctx.dots_into(q, &mut scratch, &mut out);
    Ok(out)
}

/// MASS: the full distance profile of `q` against `t` in O(n log n).
///
/// `stats` must have been computed over `t` with `m == |q|`.
pub fn mass(q: &[f64], t: &TimeSeries, stats: &RollingStats) -> Result<DistanceProfile> {
    let ctx = MassContext::for_series(t.values(), stats.offset());
    let mut scratch = ctx.scratch();
    mass_with_context(&ctx, &mut scratch, q, stats)
}

/// [`mass`] against a prebuilt series context; the context does not depend
/// on the query length, so one context serves every window length.
pub(crate) fn mass_with_context(
    ctx: &MassContext,
    scratch: &mut MassScratch,
    q: &[f64],
    stats: &RollingStats,
) -> Result<DistanceProfile> {
    let m = q.len();
    if m != stats.m() {
        return Err(Error::InvalidWindow(format!(
            "query length {m} does not match stats window {}",
            stats.m()
        )));
    }
    check_window(m, ctx.n)?;

    // Work in a mean-centered frame: shifting both query and series leaves
    // the correlation unchanged and avoids most of the cancellation in
    // `qt - m*mu_q*mu_i`.
    let q_mean = q.iter().sum::<f64>() / m as f64;
    let qc: Vec<f64> = q.iter().map(|v| v - q_mean).collect();
    let mu_q = qc.iter().sum::<f64>() / m as f64;
    let var_q = (qc.iter().map(|v| v * v).sum::<f64>() / m as f64 - mu_q * mu_q).max(0.0);
    let sigma_q = var_q.sqrt();

    let mut qt = vec![0.0; ctx.n - m + 1];
    ctx.dots_into(&qc, scratch, &mut qt);

    let count = qt.len();
    let mut distances = Vec::with_capacity(count);
    let mut correlations = Vec::with_capacity(count);
    for i in 0..count {
        let (d, r) = dist_from_dot(
            qt[i],
            mu_q,
            sigma_q,
            stats.centered_mean(i),
            stats.stds()[i],
            m,
        );
        distances.push(d);
        correlations.push(r);
    }
    Ok(DistanceProfile {
        distances,
        correlations,
        query_start: None,
    })
}

/// Raw (non-normalized) Euclidean distance profile. Debug aid only; the
/// normalized profile is the supported surface.
#[doc(hidden)]
pub fn mass_raw(q: &[f64], t: &TimeSeries) -> Result<Vec<f64>> {
    let qt = sliding_dot_product(q, t)?;
    let m = q.len();
    let qq: f64 = q.iter().map(|v| v * v).sum();
    let mut sq = 0.0;
    let mut prefix_sq = Vec::with_capacity(t.len() + 1);
    prefix_sq.push(0.0);
    for &v in t.values() {
        sq += v * v;
        prefix_sq.push(sq);
    }
    Ok(qt
        .iter()
        .enumerate()
        .map(|(i, &dot)| {
            let tt = prefix_sq[i + m] - prefix_sq[i];
            (qq - 2.0 * dot + tt).max(0.0).sqrt()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rolling_stats, znormalize};
    use crate::synth::random_walk;

    fn direct_dots(q: &[f64], t: &[f64]) -> Vec<f64> {
        (0..=t.len() - q.len())
            .map(|i| q.iter().zip(&t[i..]).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Independent oracle: z-normalize both windows, then plain Euclidean.
    fn brute_profile(q: &[f64], t: &TimeSeries) -> Vec<f64> {
        let m = q.len();
        let zq = znormalize(q).unwrap();
        (0..=t.len() - m)
            .map(|i| {
                let zw = znormalize(t.window(i, m)).unwrap();
                zq.iter()
                    .zip(&zw)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    #[test]
    fn sliding_dot_small_example() {
        let t = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        let got = sliding_dot_product(&[1.0, 1.0], &t).unwrap();
        assert!((got[0] - 3.0).abs() < 1e-9);
        assert!((got[1] - 5.0).abs() < 1e-9);
    }

    #[test]
    fn sliding_dot_zero_query() {
        let t = random_walk(1, 64);
        let got = sliding_dot_product(&[0.0; 8], &t).unwrap();
        assert!(got.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn sliding_dot_matches_direct_loop() {
        let t = random_walk(7, 4096);
        let q: Vec<f64> = random_walk(8, 128).values().to_vec();
        let got = sliding_dot_product(&q, &t).unwrap();
        let want = direct_dots(&q, t.values());
        let worst = got
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-7, "max |fft - direct| = {worst}");
    }

    #[test]
    fn sliding_dot_rejects_long_query() {
        let t = TimeSeries::new(vec![1.0, 2.0]).unwrap();
        assert!(sliding_dot_product(&[1.0, 2.0, 3.0], &t).is_err());
    }

    #[test]
    fn dist_from_dot_conventions() {
        let m = 32;
        // Identical z-normalized windows: qt = m when sigma = 1, mu = 0.
        let (d, r) = dist_from_dot(m as f64, 0.0, 1.0, 0.0, 1.0, m);
        assert!(d.abs() < 1e-12);
        assert!((r - 1.0).abs() < 1e-12);
        // Exact negations.
        let (d, r) = dist_from_dot(-(m as f64), 0.0, 1.0, 0.0, 1.0, m);
        assert!((d - 2.0 * (m as f64).sqrt()).abs() < 1e-12);
        assert!((r + 1.0).abs() < 1e-12);
        // Uncorrelated.
        let (d, r) = dist_from_dot(0.0, 0.0, 1.0, 0.0, 1.0, m);
        assert!((d - (2.0 * m as f64).sqrt()).abs() < 1e-12);
        assert!(r.abs() < 1e-12);
        // Flat conventions.
        let (d, r) = dist_from_dot(0.0, 5.0, 0.0, 5.0, 0.0, m);
        assert_eq!((d, r), (0.0, 1.0));
        let (d, r) = dist_from_dot(0.0, 5.0, 0.0, 0.0, 1.0, m);
        assert!((d - (2.0 * m as f64).sqrt()).abs() < 1e-12);
        assert_eq!(r, 0.0);
    }

    #[test]
    fn mass_self_query_is_zero() {
        let t = random_walk(21, 512);
        let m = 48;
        let stats = rolling_stats(&t, m).unwrap();
        let i = 137;
        let q: Vec<f64> = t.window(i, m).to_vec();
        let dp = mass(&q, &t, &stats).unwrap();
        assert!(dp.distances[i] <= 1e-6, "self distance {}", dp.distances[i]);
    }

    #[test]
    fn mass_is_scale_and_offset_invariant() {
        let t = random_walk(5, 512);
        let m = 40;
        let stats = rolling_stats(&t, m).unwrap();
        let i = 200;
        let q: Vec<f64> = t.window(i, m).iter().map(|v| 3.0 * v + 7.0).collect();
        let dp = mass(&q, &t, &stats).unwrap();
        assert!(dp.distances[i] <= 1e-6);

        let plain = mass(t.window(i, m), &t, &stats).unwrap();
        let argmin = |d: &[f64]| {
            d.iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0
        };
        assert_eq!(argmin(&dp.distances), argmin(&plain.distances));
        for (a, b) in dp.distances.iter().zip(&plain.distances) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn mass_matches_brute_force() {
        let t = random_walk(33, 2048);
        let q: Vec<f64> = random_walk(34, 64).values().to_vec();
        let stats = rolling_stats(&t, 64).unwrap();
        let dp = mass(&q, &t, &stats).unwrap();
        let want = brute_profile(&q, &t);
        let worst = dp
            .distances
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1e-6, "max |mass - brute| = {worst}");
        for (&d, &r) in dp.distances.iter().zip(&dp.correlations) {
            assert!(d >= 0.0 && (-1.0..=1.0).contains(&r));
            assert!((d - (2.0 * 64.0 * (1.0 - r)).max(0.0).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn mass_rejects_mismatched_stats() {
        let t = random_walk(2, 128);
        let stats = rolling_stats(&t, 16).unwrap();
        assert!(mass(&[0.0; 8], &t, &stats).is_err());
    }
}
