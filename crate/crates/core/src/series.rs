//! Foundational time series types and windowed statistics.
//!
//! Everything here is immutable after construction and safe to share across
//! threads. Inputs are validated once (finite values, compatible lengths) so
//! downstream min/argmin folds never have to special-case NaN.

use crate::error::{Error, Result};

/// A single real-valued sequence. Values are guaranteed finite and non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWindow("time series must be non-empty".into()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "sample {pos} is {}",
                values[pos]
            )));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The window of length `m` starting at `start`.
    pub fn window(&self, start: usize, m: usize) -> &[f64] {
        &self.values[start..start + m]
    }

    /// Number of windows of length `m`, or an error if `m` does not fit.
    pub fn window_count(&self, m: usize) -> Result<usize> {
        check_window(m, self.len())?;
        Ok(self.len() - m + 1)
    }
}

/// `d` co-evolving series of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTimeSeries {
    rows: Vec<TimeSeries>,
}

impl MultiTimeSeries {
    pub fn new(rows: Vec<TimeSeries>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidWindow("need at least one dimension".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidWindow(
                "all dimensions must share the same length".into(),
            ));
        }
        Ok(Self { rows })
    }

    pub fn from_vecs(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows.into_iter().map(TimeSeries::new).collect::<Result<_>>()?)
    }

    pub fn dims(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn row(&self, d: usize) -> &TimeSeries {
        &self.rows[d]
    }

    pub fn rows(&self) -> &[TimeSeries] {
        &self.rows
    }

    /// The single dimension when `d == 1`.
    pub fn single(&self) -> Option<&TimeSeries> {
        (self.rows.len() == 1).then(|| &self.rows[0])
    }
}

/// A window identified by start position and length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subsequence {
    pub start: usize,
    pub m: usize,
}

impl Subsequence {
    /// Validates `0 <= start <= n - m` and `m >= 2`.
    pub fn new(start: usize, m: usize, n: usize) -> Result<Self> {
        check_window(m, n)?;
        if start > n - m {
            return Err(Error::InvalidWindow(format!(
                "start {start} out of range for n={n}, m={m}"
            )));
        }
        Ok(Self { start, m })
    }

    pub fn values<'a>(&self, ts: &'a TimeSeries) -> &'a [f64] {
        ts.window(self.start, self.m)
    }
}

pub(crate) fn check_window(m: usize, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidWindow(format!(
            "window length must be at least 2, got {m}"
        )));
    }
    if m > n {
        return Err(Error::InvalidWindow(format!(
            "window length {m} exceeds series length {n}"
        )));
    }
    Ok(())
}

/// Trivial-match exclusion radius for window length `m`: `ceil(m / 2)`.
///
/// Rounded up so an odd `m` never admits a half-window self match.
pub fn exclusion_radius(m: usize) -> usize {
    m.div_ceil(2)
}

/// Trivial-match zone around a window start.
///
/// Position `j` is excluded iff `|j - center| < radius`; membership is
/// symmetric in `center` and `j` for a fixed `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExclusionZone {
    pub center: usize,
    pub radius: usize,
}

impl ExclusionZone {
    pub fn new(center: usize, m: usize) -> Self {
        Self {
            center,
            radius: exclusion_radius(m),
        }
    }

    pub fn excludes(&self, j: usize) -> bool {
        self.center.abs_diff(j) < self.radius
    }
}

/// A window standard deviation this far below the data scale is treated as
/// zero; pure floating-point cancellation noise otherwise leaks garbage
/// correlations out of flat regions.
pub(crate) fn is_flat(sigma: f64, mean: f64) -> bool {
    sigma <= 1e-12 * mean.abs().max(1.0)
}

/// Per-window means and population standard deviations over every window of
/// length `m`, computed from cached cumulative sums in O(n).
///
/// Sums are taken over the series after subtracting its global mean, which
/// keeps the classic `E[x^2] - E[x]^2` cancellation at the level of the
/// window spread rather than the raw magnitude.
#[derive(Debug, Clone)]
pub struct RollingStats {
    pub(crate) m: usize,
    /// Global mean subtracted before accumulating; `means` are raw again.
    pub(crate) offset: f64,
    pub(crate) means: Vec<f64>,
    pub(crate) stds: Vec<f64>,
    pub(crate) cumsum: Vec<f64>,
    pub(crate) cumsum_sq: Vec<f64>,
}

impl RollingStats {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Raw per-window means, length `n - m + 1`.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Per-window population standard deviations, length `n - m + 1`.
    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// Mean and population std of an arbitrary window, straight from the
    /// cached cumulative sums (any length, not just `m`).
    pub fn window_stats(&self, start: usize, len: usize) -> (f64, f64) {
        let s = self.cumsum[start + len] - self.cumsum[start];
        let sq = self.cumsum_sq[start + len] - self.cumsum_sq[start];
        let mean_c = s / len as f64;
        let var = (sq / len as f64 - mean_c * mean_c).max(0.0);
        (mean_c + self.offset, var.sqrt())
    }

    /// Mean of window `i` in the internally centered frame.
    pub(crate) fn centered_mean(&self, i: usize) -> f64 {
        self.means[i] - self.offset
    }

    pub(crate) fn offset(&self) -> f64 {
        self.offset
    }
}

/// Windowed mean/std for every window of length `m`. O(n) time.
pub fn rolling_stats(t: &TimeSeries, m: usize) -> Result<RollingStats> {
    check_window(m, t.len())?;
    let offset = t.values().iter().sum::<f64>() / t.len() as f64;
    Ok(rolling_stats_centered(t.values(), m, offset))
}

/// Stats over `values` centered by a caller-chosen `offset`.
pub(crate) fn rolling_stats_centered(values: &[f64], m: usize, offset: f64) -> RollingStats {
    let n = values.len();
    let count = n - m + 1;
    let mut cumsum = Vec::with_capacity(n + 1);
    let mut cumsum_sq = Vec::with_capacity(n + 1);
    cumsum.push(0.0);
    cumsum_sq.push(0.0);
    let (mut s, mut sq) = (0.0, 0.0);
    for &v in values {
        let x = v - offset;
        s += x;
        sq += x * x;
        cumsum.push(s);
        cumsum_sq.push(sq);
    }
    let inv_m = 1.0 / m as f64;
    let mut means = Vec::with_capacity(count);
    let mut stds = Vec::with_capacity(count);
    for i in 0..count {
        let mean_c = (cumsum[i + m] - cumsum[i]) * inv_m;
        // Cancellation can drive the variance a hair negative; clamp to zero
        // before the square root.
        let var = ((cumsum_sq[i + m] - cumsum_sq[i]) * inv_m - mean_c * mean_c).max(0.0);
        means.push(mean_c + offset);
        stds.push(var.sqrt());
    }
    RollingStats {
        m,
        offset,
        means,
        stds,
        cumsum,
        cumsum_sq,
    }
}

/// z-normalize a vector: subtract the mean, divide by the population
/// standard deviation. A constant vector maps to the all-zero vector.
pub fn znormalize(x: &[f64]) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(Error::InvalidWindow(
            "z-normalization needs at least 2 samples".into(),
        ));
    }
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
    let std = var.sqrt();
    if is_flat(std, mean) {
        return Ok(vec![0.0; x.len()]);
    }
    Ok(x.iter().map(|v| (v - mean) / std).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::random_walk;
    use proptest::prelude::*;

    fn direct_stats(values: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
        let count = values.len() - m + 1;
        let mut means = Vec::with_capacity(count);
        let mut stds = Vec::with_capacity(count);
        for i in 0..count {
            let w = &values[i..i + m];
            let mean = w.iter().sum::<f64>() / m as f64;
            let var = w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m as f64;
            means.push(mean);
            stds.push(var.sqrt());
        }
        (means, stds)
    }

    #[test]
    fn rejects_non_finite() {
        assert!(TimeSeries::new(vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(TimeSeries::new(vec![]).is_err());
    }

    #[test]
    fn rolling_stats_constant_series() {
        let t = TimeSeries::new(vec![3.25; 64]).unwrap();
        let stats = rolling_stats(&t, 7).unwrap();
        for (&mu, &sd) in stats.means().iter().zip(stats.stds()) {
            assert!((mu - 3.25).abs() < 1e-12);
            assert_eq!(sd, 0.0);
        }
    }

    #[test]
    fn rolling_stats_small_example() {
        let t = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let stats = rolling_stats(&t, 2).unwrap();
        let want_means = [1.5, 2.5, 3.5, 4.5];
        for (got, want) in stats.means().iter().zip(want_means) {
            assert!((got - want).abs() < 1e-12);
        }
        for &sd in stats.stds() {
            assert!((sd - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn rolling_stats_matches_direct_loop() {
        let t = random_walk(42, 1000);
        let stats = rolling_stats(&t, 50).unwrap();
        let (means, stds) = direct_stats(t.values(), 50);
        for i in 0..means.len() {
            assert!(
                (stats.means()[i] - means[i]).abs() < 1e-9,
                "mean mismatch at {i}"
            );
            assert!(
                (stats.stds()[i] - stds[i]).abs() < 1e-9,
                "std mismatch at {i}"
            );
        }
    }

    #[test]
    fn window_stats_any_length() {
        let t = random_walk(3, 200);
        let stats = rolling_stats(&t, 10).unwrap();
        for (start, len) in [(0usize, 10usize), (17, 31), (150, 50)] {
            let w = &t.values()[start..start + len];
            let mean = w.iter().sum::<f64>() / len as f64;
            let var = w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / len as f64;
            let (got_mean, got_std) = stats.window_stats(start, len);
            assert!((got_mean - mean).abs() < 1e-9);
            assert!((got_std - var.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn rolling_stats_rejects_bad_window() {
        let t = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(rolling_stats(&t, 1).is_err());
        assert!(rolling_stats(&t, 4).is_err());
    }

    #[test]
    fn znormalize_examples() {
        let z = znormalize(&[1.0, 2.0, 3.0]).unwrap();
        let s = (2.0f64 / 3.0).sqrt();
        assert!((z[0] + 1.0 / s).abs() < 1e-12);
        assert!(z[1].abs() < 1e-12);
        assert!((z[2] - 1.0 / s).abs() < 1e-12);

        assert_eq!(znormalize(&[5.0, 5.0, 5.0]).unwrap(), vec![0.0; 3]);
        assert!(znormalize(&[1.0]).is_err());
    }

    #[test]
    fn znormalize_affine_invariance() {
        let x = [0.3, -1.2, 2.5, 0.1, 0.7];
        let a = 3.7;
        let b = -11.0;
        let shifted: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let zx = znormalize(&x).unwrap();
        let zs = znormalize(&shifted).unwrap();
        for (u, v) in zx.iter().zip(&zs) {
            assert!((u - v).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn exclusion_zone_symmetric(i in 0usize..500, j in 0usize..500, m in 2usize..64) {
            let zi = ExclusionZone::new(i, m);
            let zj = ExclusionZone::new(j, m);
            prop_assert_eq!(zi.excludes(j), zj.excludes(i));
        }

        #[test]
        fn rolling_stats_nonnegative(seed in 0u64..32, m in 2usize..32) {
            let t = random_walk(seed, 128);
            let stats = rolling_stats(&t, m).unwrap();
            prop_assert!(stats.stds().iter().all(|&s| s >= 0.0));
            prop_assert_eq!(stats.len(), 128 - m + 1);
        }
    }
}
