//! Incremental matrix profile maintenance (STOMPI).
//!
//! State is initialized from a batch STOMP run; each appended sample updates
//! the profile in O(n): the dot products of the newest window against all
//! others follow from the previous ones by the same recurrence STOMP uses,
//! and the new window's mean/std follow incrementally from the last window's.

use crate::error::{Error, Result};
use crate::profile::{stomp, MatrixProfile, NO_NEIGHBOR};
use crate::series::{exclusion_radius, TimeSeries};
use crate::simsearch::dist_from_dot;

/// Grows a [`MatrixProfile`] one sample at a time.
///
/// Not shareable concurrently; transferable between threads between appends.
#[derive(Debug, Clone)]
pub struct Stompi {
    m: usize,
    radius: usize,
    /// Series in the centered frame fixed at initialization.
    values: Vec<f64>,
    offset: f64,
    means: Vec<f64>,
    stds: Vec<f64>,
    /// Dot products of the current last window against every window.
    qt: Vec<f64>,
    p_sq: Vec<f64>,
    idx: Vec<i64>,
}

impl Stompi {
    /// Batch-initialize from `t`; requires room for at least one admissible
    /// neighbor pair (`n >= m + ceil(m/2) + 1`).
    pub fn new(t: &TimeSeries, m: usize) -> Result<Self> {
        let radius = exclusion_radius(m);
        if t.len() < m + radius + 1 {
            return Err(Error::InvalidWindow(format!(
                "initial series of length {} too short for m={m} (need {})",
                t.len(),
                m + radius + 1
            )));
        }
        let mp = stomp(t, m)?;
        let offset = t.values().iter().sum::<f64>() / t.len() as f64;
        let values: Vec<f64> = t.values().iter().map(|v| v - offset).collect();
        let stats = crate::series::rolling_stats_centered(t.values(), m, offset);
        let count = mp.len();

        // Dot products of the last window against all windows, by direct loop.
        let last = count - 1;
        let mut qt = vec![0.0; count];
        for (j, slot) in qt.iter_mut().enumerate() {
            *slot = (0..m).map(|k| values[last + k] * values[j + k]).sum();
        }
        let means = (0..count).map(|i| stats.centered_mean(i)).collect();
        Ok(Self {
            m,
            radius,
            values,
            offset,
            means,
            stds: stats.stds().to_vec(),
            qt,
            p_sq: mp.profile.iter().map(|p| p * p).collect(),
            idx: mp.profile_index,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Samples seen so far.
    pub fn series_len(&self) -> usize {
        self.values.len()
    }

    /// Windows covered so far.
    pub fn profile_len(&self) -> usize {
        self.p_sq.len()
    }

    /// Ingest one sample; rejects non-finite values with the state unchanged.
    pub fn append(&mut self, sample: f64) -> Result<()> {
        if !sample.is_finite() {
            return Err(Error::NonFinite(format!("appended sample is {sample}")));
        }
        let m = self.m;
        let x = sample - self.offset;
        let old_count = self.p_sq.len();
        let new_pos = old_count; // start of the new last window
        self.values.push(x);
        let v = &self.values;

        // Drop the first element of the previous last window, add the new
        // sample: same recurrence as the STOMP inner loop, shifted form.
        let x_drop = v[new_pos - 1];
        self.qt.push(0.0);
        for j in (1..=new_pos).rev() {
            self.qt[j] = self.qt[j - 1] - x_drop * v[j - 1] + x * v[j + m - 1];
        }
        self.qt[0] = (0..m).map(|k| v[k] * v[new_pos + k]).sum();

        // Incremental mean/std of the new window from the previous one.
        let mf = m as f64;
        let mu_prev = self.means[old_count - 1];
        let sd_prev = self.stds[old_count - 1];
        let mu_new = mu_prev + (x - x_drop) / mf;
        let var_new =
            (sd_prev * sd_prev + mu_prev * mu_prev + (x * x - x_drop * x_drop) / mf
                - mu_new * mu_new)
                .max(0.0);
        let sd_new = var_new.sqrt();
        self.means.push(mu_new);
        self.stds.push(sd_new);

        // Distance profile of the new window against everything, folded into
        // the old positions, plus the new window's own minimum.
        let mut best_sq = f64::INFINITY;
        let mut best_at = NO_NEIGHBOR;
        for j in 0..=new_pos {
            let (d, _) = dist_from_dot(self.qt[j], mu_new, sd_new, self.means[j], self.stds[j], m);
            let d_sq = d * d;
            if new_pos.abs_diff(j) < self.radius {
                continue;
            }
            if j < old_count
                && (d_sq < self.p_sq[j] || (d_sq == self.p_sq[j] && (new_pos as i64) < self.idx[j]))
            {
                self.p_sq[j] = d_sq;
                self.idx[j] = new_pos as i64;
            }
            if d_sq < best_sq {
                best_sq = d_sq;
                best_at = j as i64;
            }
        }
        self.p_sq.push(best_sq);
        self.idx.push(best_at);
        Ok(())
    }

    /// Snapshot of the current profile.
    pub fn profile(&self) -> MatrixProfile {
        MatrixProfile {
            m: self.m,
            exclusion_radius: self.radius,
            profile: self.p_sq.iter().map(|p| p.sqrt()).collect(),
            profile_index: self.idx.clone(),
            fraction_done: 1.0,
        }
    }
}
