//! Single-dimensional matrix profile engines.
//!
//! Four routes to the same answer: a brute-force oracle, STAMP (anytime,
//! parallel, random order), STOMP (ordered, O(n^2) via the rolling dot
//! product recurrence), and the incremental STOMPI in [`crate::stream`].
//!
//! Tie-breaking is uniform everywhere: a strictly smaller distance replaces,
//! an exact tie keeps the smaller neighbor index. That makes anytime and
//! parallel runs reproducible regardless of fold order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::series::{
    check_window, exclusion_radius, is_flat, rolling_stats_centered, RollingStats, TimeSeries,
};
use crate::simsearch::MassContext;

/// Rows between full recomputations of the STOMP dot-product row, bounding
/// accumulated floating-point drift in the recurrence.
pub const STOMP_REBUILD_ROWS: usize = 4096;

/// Neighbor index sentinel used when every candidate is excluded.
pub const NO_NEIGHBOR: i64 = -1;

/// Minimal z-normalized neighbor distance per window, plus neighbor indices.
///
/// `profile[i]` is `f64::INFINITY` (and `profile_index[i] == NO_NEIGHBOR`)
/// when position `i` has no admissible neighbor yet.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProfile {
    pub m: usize,
    pub exclusion_radius: usize,
    pub profile: Vec<f64>,
    pub profile_index: Vec<i64>,
    /// Fraction of rows folded in; 1.0 for completed profiles.
    pub fraction_done: f64,
}

impl MatrixProfile {
    pub fn len(&self) -> usize {
        self.profile.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profile.is_empty()
    }

    /// Position of the smallest finite profile value (ties go to the
    /// smaller index); `None` when the whole profile is the sentinel.
    pub fn min_position(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &v) in self.profile.iter().enumerate() {
            if v.is_finite() && best.map_or(true, |b| v < self.profile[b]) {
                best = Some(i);
            }
        }
        best
    }

    fn empty(m: usize, count: usize) -> Self {
        Self {
            m,
            exclusion_radius: exclusion_radius(m),
            profile: vec![f64::INFINITY; count],
            profile_index: vec![NO_NEIGHBOR; count],
            fraction_done: 0.0,
        }
    }
}

/// Row visit order for STAMP-style engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Sequential,
    /// Fisher-Yates shuffle keyed by the seed; required for the anytime
    /// guarantees to be meaningful.
    Shuffled(u64),
}

/// How much of the join to compute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Full,
    /// Fraction of all rows, in (0, 1].
    Fraction(f64),
    /// Absolute number of rows, >= 1.
    Rows(usize),
}

impl Budget {
    pub(crate) fn resolve(self, total: usize) -> Result<usize> {
        match self {
            Budget::Full => Ok(total),
            Budget::Fraction(f) => {
                if f <= 0.0 || f > 1.0 || f.is_nan() {
                    return Err(Error::InvalidBudget(format!(
                        "fraction must be in (0, 1], got {f}"
                    )));
                }
                Ok(((f * total as f64).ceil() as usize).clamp(1, total))
            }
            Budget::Rows(r) => {
                if r == 0 {
                    return Err(Error::InvalidBudget("row budget must be >= 1".into()));
                }
                Ok(r.min(total))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StampOptions {
    pub order: Order,
    pub budget: Budget,
    /// Worker count for row-parallel execution; results are byte-identical
    /// for any value.
    pub threads: usize,
    /// Progress callback cadence, in rows.
    pub progress_every: usize,
}

impl Default for StampOptions {
    fn default() -> Self {
        Self {
            order: Order::Shuffled(0),
            budget: Budget::Full,
            threads: 1,
            progress_every: 64,
        }
    }
}

/// Squared-distance twin of [`dist_from_dot`]; engines fold in squared space
/// and take one square root per position at the end.
#[inline]
fn dist_sq_from_dot(qt: f64, mu_q: f64, sigma_q: f64, mu_i: f64, sigma_i: f64, m: f64) -> f64 {
    let q_flat = is_flat(sigma_q, mu_q);
    let i_flat = is_flat(sigma_i, mu_i);
    if q_flat && i_flat {
        return 0.0;
    }
    if q_flat || i_flat {
        return 2.0 * m;
    }
    let r = ((qt - m * mu_q * mu_i) / (m * sigma_q * sigma_i)).clamp(-1.0, 1.0);
    (2.0 * m * (1.0 - r)).max(0.0)
}

#[inline]
fn fold_row(
    p: &mut [f64],
    idx: &mut [i64],
    d: &[f64],
    row: usize,
    radius: usize,
    forbidden: Option<&[bool]>,
) {
    let row_i = row as i64;
    for (j, &dj) in d.iter().enumerate() {
        if row.abs_diff(j) < radius {
            continue;
        }
        if let Some(f) = forbidden {
            if f[j] {
                continue;
            }
        }
        if dj < p[j] || (dj == p[j] && row_i < idx[j]) {
            p[j] = dj;
            idx[j] = row_i;
        }
    }
}

fn finalize(m: usize, p_sq: Vec<f64>, idx: Vec<i64>, fraction_done: f64) -> MatrixProfile {
    MatrixProfile {
        m,
        exclusion_radius: exclusion_radius(m),
        profile: p_sq.into_iter().map(f64::sqrt).collect(),
        profile_index: idx,
        fraction_done,
    }
}

/// Shared per-engine state: the series in a mean-centered frame plus its
/// rolling stats (the correlation is shift-invariant, and centering keeps
/// the dot-product cancellation small).
struct Prepared {
    centered: Vec<f64>,
    stats: RollingStats,
    count: usize,
    radius: usize,
}

fn prepare(t: &TimeSeries, m: usize) -> Result<Prepared> {
    check_window(m, t.len())?;
    let count = t.len() - m + 1;
    if count < 2 {
        return Err(Error::InvalidWindow(format!(
            "need at least 2 windows, got {count}"
        )));
    }
    let offset = t.values().iter().sum::<f64>() / t.len() as f64;
    let centered: Vec<f64> = t.values().iter().map(|v| v - offset).collect();
    let stats = rolling_stats_centered(t.values(), m, offset);
    Ok(Prepared {
        centered,
        stats,
        count,
        radius: exclusion_radius(m),
    })
}

impl Prepared {
    fn window(&self, i: usize, m: usize) -> &[f64] {
        &self.centered[i..i + m]
    }

    fn mean(&self, i: usize) -> f64 {
        self.stats.centered_mean(i)
    }

    fn std(&self, i: usize) -> f64 {
        self.stats.stds()[i]
    }

    fn row_dists_sq(&self, qt: &[f64], row: usize, m: usize, out: &mut [f64]) {
        let mf = m as f64;
        let mu_q = self.mean(row);
        let sd_q = self.std(row);
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = dist_sq_from_dot(qt[j], mu_q, sd_q, self.mean(j), self.std(j), mf);
        }
    }
}

/// The O(n^2 m) nested-loop join over z-normalized windows. This is the
/// oracle the fast engines are checked against.
pub fn brute_force_profile(t: &TimeSeries, m: usize) -> Result<MatrixProfile> {
    check_window(m, t.len())?;
    let count = t.len() - m + 1;
    if count < 2 {
        return Err(Error::InvalidWindow(format!(
            "need at least 2 windows, got {count}"
        )));
    }
    let radius = exclusion_radius(m);
    let mf = m as f64;

    // z-normalize every window once; flat windows become zero vectors.
    let mut z = vec![0.0; count * m];
    let mut flat = vec![false; count];
    for i in 0..count {
        let w = t.window(i, m);
        let mean = w.iter().sum::<f64>() / mf;
        let var = (w.iter().map(|v| v * v).sum::<f64>() / mf - mean * mean).max(0.0);
        let sd = var.sqrt();
        if is_flat(sd, mean) {
            flat[i] = true;
            continue;
        }
        for (k, &v) in w.iter().enumerate() {
            z[i * m + k] = (v - mean) / sd;
        }
    }

    let mut p_sq = vec![f64::INFINITY; count];
    let mut idx = vec![NO_NEIGHBOR; count];
    for i in 0..count {
        let zi = &z[i * m..(i + 1) * m];
        for j in (i + radius)..count {
            let d_sq = if flat[i] && flat[j] {
                0.0
            } else if flat[i] || flat[j] {
                2.0 * mf
            } else {
                let zj = &z[j * m..(j + 1) * m];
                // For unit-variance windows, |a - b|^2 = 2m - 2 a.b.
                let dot: f64 = zi.iter().zip(zj).map(|(a, b)| a * b).sum();
                (2.0 * mf - 2.0 * dot).max(0.0)
            };
            if d_sq < p_sq[i] {
                p_sq[i] = d_sq;
                idx[i] = j as i64;
            }
            if d_sq < p_sq[j] {
                p_sq[j] = d_sq;
                idx[j] = i as i64;
            }
        }
    }
    Ok(finalize(m, p_sq, idx, 1.0))
}

/// STAMP: one MASS call per selected row, folded by element-wise min.
///
/// With `Budget::Full` the result equals [`brute_force_profile`]; with a
/// partial budget it is an element-wise upper bound on the exact profile
/// and `fraction_done < 1`.
pub fn stamp(t: &TimeSeries, m: usize, opts: &StampOptions) -> Result<MatrixProfile> {
    stamp_interruptible(t, m, opts, &|_| true)
}

/// STAMP with an interrupt hook: `progress` is invoked every
/// `opts.progress_every` rows with the fraction done; returning `false`
/// stops the join and yields the current snapshot.
pub fn stamp_interruptible(
    t: &TimeSeries,
    m: usize,
    opts: &StampOptions,
    progress: &(dyn Fn(f64) -> bool + Sync),
) -> Result<MatrixProfile> {
    let prep = prepare(t, m)?;
    let count = prep.count;
    let take = opts.budget.resolve(count)?;

    let mut rows: Vec<usize> = (0..count).collect();
    if let Order::Shuffled(seed) = opts.order {
        rows.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    rows.truncate(take);

    let threads = opts.threads.max(1).min(rows.len());
    let every = opts.progress_every.max(1);
    let ctx = MassContext::new(&prep.centered);
    let done = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);

    let chunk_size = rows.len().div_ceil(threads);
    let chunks: Vec<&[usize]> = rows.chunks(chunk_size).collect();

    let run_chunk = |chunk: &[usize]| -> (Vec<f64>, Vec<i64>) {
        let mut p_sq = vec![f64::INFINITY; count];
        let mut idx = vec![NO_NEIGHBOR; count];
        let mut scratch = ctx.scratch();
        let mut qt = vec![0.0; count];
        let mut d_sq = vec![0.0; count];
        for &row in chunk {
            if stop.load(Ordering::Relaxed) {
                break;
            }
            ctx.dots_into(prep.window(row, m), &mut scratch, &mut qt);
            prep.row_dists_sq(&qt, row, m, &mut d_sq);
            fold_row(&mut p_sq, &mut idx, &d_sq, row, prep.radius, None);
            let total_done = done.fetch_add(1, Ordering::Relaxed) + 1;
            if total_done % every == 0 && !progress(total_done as f64 / count as f64) {
                stop.store(true, Ordering::Relaxed);
            }
        }
        (p_sq, idx)
    };

    let partials: Vec<(Vec<f64>, Vec<i64>)> = if threads == 1 {
        chunks.iter().map(|c| run_chunk(c)).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| scope.spawn(|| run_chunk(chunk)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };

    // Deterministic merge: worker order is fixed and the tie rule makes the
    // fold order irrelevant anyway.
    let mut merged_p = vec![f64::INFINITY; count];
    let mut merged_i = vec![NO_NEIGHBOR; count];
    for (p_sq, idx) in partials {
        for j in 0..count {
            if p_sq[j] < merged_p[j] || (p_sq[j] == merged_p[j] && idx[j] < merged_i[j]) {
                merged_p[j] = p_sq[j];
                merged_i[j] = idx[j];
            }
        }
    }
    let processed = done.load(Ordering::Relaxed).min(count);
    Ok(finalize(
        m,
        merged_p,
        merged_i,
        processed as f64 / count as f64,
    ))
}

/// Element-wise minimum of two (possibly partial) profiles.
///
/// Smaller distance wins; an exact tie keeps the smaller neighbor index,
/// which makes the merge commutative and associative.
pub fn elementwise_min_merge(a: &MatrixProfile, b: &MatrixProfile) -> Result<MatrixProfile> {
    if a.m != b.m || a.len() != b.len() || a.exclusion_radius != b.exclusion_radius {
        return Err(Error::InvalidMerge(format!(
            "shape mismatch: m {} vs {}, len {} vs {}",
            a.m,
            b.m,
            a.len(),
            b.len()
        )));
    }
    let mut out = MatrixProfile::empty(a.m, a.len());
    out.fraction_done = a.fraction_done.max(b.fraction_done);
    for j in 0..a.len() {
        let (pa, ia) = (a.profile[j], a.profile_index[j]);
        let (pb, ib) = (b.profile[j], b.profile_index[j]);
        if pb < pa || (pb == pa && ib < ia) {
            out.profile[j] = pb;
            out.profile_index[j] = ib;
        } else {
            out.profile[j] = pa;
            out.profile_index[j] = ia;
        }
    }
    Ok(out)
}

/// STOMP: ordered O(n^2) join using the rolling dot-product recurrence.
pub fn stomp(t: &TimeSeries, m: usize) -> Result<MatrixProfile> {
    stomp_masked(t, m, None)
}

/// STOMP with positions marked `true` in `forbidden` removed from the join:
/// they are neither searched nor eligible as neighbors. Used for profiles
/// over concatenated segments where windows crossing a junction are not real.
pub fn stomp_masked(
    t: &TimeSeries,
    m: usize,
    forbidden: Option<&[bool]>,
) -> Result<MatrixProfile> {
    let prep = prepare(t, m)?;
    let count = prep.count;
    if let Some(f) = forbidden {
        if f.len() != count {
            return Err(Error::InvalidWindow(format!(
                "mask length {} does not match window count {count}",
                f.len()
            )));
        }
    }
    let ctx = MassContext::new(&prep.centered);
    let mut scratch = ctx.scratch();

    let mut qt = vec![0.0; count];
    ctx.dots_into(prep.window(0, m), &mut scratch, &mut qt);
    let qt_first = qt.clone();

    let mut p_sq = vec![f64::INFINITY; count];
    let mut idx = vec![NO_NEIGHBOR; count];
    let mut d_sq = vec![0.0; count];

    let row_allowed = |row: usize| forbidden.map_or(true, |f| !f[row]);

    if row_allowed(0) {
        prep.row_dists_sq(&qt, 0, m, &mut d_sq);
        fold_row(&mut p_sq, &mut idx, &d_sq, 0, prep.radius, forbidden);
    }

    let v = &prep.centered;
    for row in 1..count {
        if row % STOMP_REBUILD_ROWS == 0 {
            // Rebuild from scratch to bound recurrence drift.
            ctx.dots_into(prep.window(row, m), &mut scratch, &mut qt);
        } else {
            let drop_v = v[row - 1];
            let add_v = v[row + m - 1];
            for j in (1..count).rev() {
                qt[j] = qt[j - 1] - drop_v * v[j - 1] + add_v * v[j + m - 1];
            }
            qt[0] = qt_first[row];
        }
        if row_allowed(row) {
            prep.row_dists_sq(&qt, row, m, &mut d_sq);
            fold_row(&mut p_sq, &mut idx, &d_sq, row, prep.radius, forbidden);
        }
    }
    Ok(finalize(m, p_sq, idx, 1.0))
}

/// Runtime prediction from one calibration run: the join is O(n^2) with a
/// data-independent constant, so `delta_cal / n_cal^2 * n_new^2`.
pub fn predict_runtime(delta_cal: f64, n_cal: usize, n_new: usize) -> f64 {
    let scale = n_new as f64 / n_cal as f64;
    delta_cal * scale * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::znormalize;
    use crate::synth::{burst_pattern, planted_walk, random_walk};

    fn assert_profiles_close(a: &MatrixProfile, b: &MatrixProfile, tol: f64) {
        assert_eq!(a.len(), b.len());
        for j in 0..a.len() {
            let (x, y) = (a.profile[j], b.profile[j]);
            if x.is_infinite() || y.is_infinite() {
                assert_eq!(x, y, "sentinel mismatch at {j}");
            } else {
                assert!((x - y).abs() <= tol, "profile mismatch at {j}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn brute_all_excluded() {
        // L = 4 windows, radius = 4: every pair is a trivial match.
        let t = random_walk(0, 11);
        let mp = brute_force_profile(&t, 8).unwrap();
        assert_eq!(mp.len(), 4);
        assert!(mp.profile.iter().all(|p| p.is_infinite()));
        assert!(mp.profile_index.iter().all(|&i| i == NO_NEIGHBOR));
    }

    #[test]
    fn brute_exact_repeat_points_at_itself() {
        // Two literally identical windows separated by noise.
        let mut values = random_walk(4, 400).values().to_vec();
        let copy: Vec<f64> = values[50..82].to_vec();
        values[300..332].copy_from_slice(&copy);
        let t = TimeSeries::new(values).unwrap();
        let mp = brute_force_profile(&t, 32).unwrap();
        let i = mp.min_position().unwrap();
        let j = mp.profile_index[i] as usize;
        let pair = if i < j { (i, j) } else { (j, i) };
        assert_eq!(pair, (50, 300));
        assert!(mp.profile[i] <= 1e-6);
        assert_eq!(mp.profile_index[j] as usize, i);
    }

    #[test]
    fn brute_regression_baseline() {
        // Frozen once from this oracle; guards against silent drift.
        let t = random_walk(512, 512);
        let mp = brute_force_profile(&t, 32).unwrap();
        let sum: f64 = mp.profile.iter().sum();
        let argmin = mp.min_position().unwrap();
        let digest = (sum * 1e6).round() / 1e6;
        assert_eq!((digest, argmin), (crate::tests_baseline::BRUTE_512_32));
    }

    #[test]
    fn stamp_full_matches_brute() {
        for seed in [1u64, 2, 3] {
            let t = random_walk(seed, 700);
            let brute = brute_force_profile(&t, 40).unwrap();
            let st = stamp(&t, 40, &StampOptions::default()).unwrap();
            assert_profiles_close(&st, &brute, 1e-6);
            assert_eq!(st.fraction_done, 1.0);
        }
    }

    #[test]
    fn stamp_planted_motif_ties() {
        let pat = burst_pattern(30, 66.0);
        let (t, _) = planted_walk(77, 500, &pat, &[150, 350]).unwrap();
        let mp = stamp(&t, 30, &StampOptions::default()).unwrap();
        let i = mp.min_position().unwrap();
        let j = mp.profile_index[i] as usize;
        let mut pair = [i, j];
        pair.sort_unstable();
        assert!(pair[0].abs_diff(150) <= 15 && pair[1].abs_diff(350) <= 15, "{pair:?}");
        assert!((mp.profile[i] - mp.profile[j]).abs() <= 1e-9);
    }

    #[test]
    fn stamp_single_row_budget() {
        let t = random_walk(9, 200);
        let m = 16;
        let opts = StampOptions {
            order: Order::Sequential,
            budget: Budget::Rows(1),
            ..StampOptions::default()
        };
        let mp = stamp(&t, m, &opts).unwrap();
        // Row 0 only: the profile is exactly that masked distance profile.
        let stats = crate::series::rolling_stats(&t, m).unwrap();
        let dp = crate::simsearch::mass(t.window(0, m), &t, &stats).unwrap();
        let radius = exclusion_radius(m);
        for j in 0..mp.len() {
            if j < radius {
                assert!(mp.profile[j].is_infinite());
                assert_eq!(mp.profile_index[j], NO_NEIGHBOR);
            } else {
                assert!((mp.profile[j] - dp.distances[j]).abs() <= 1e-9);
                assert_eq!(mp.profile_index[j], 0);
            }
        }
        assert!(mp.fraction_done > 0.0 && mp.fraction_done < 1.0);
    }

    #[test]
    fn stamp_snapshots_monotone() {
        let t = random_walk(5, 600);
        let budgets = [0.05, 0.2, 0.5, 1.0];
        let mut prev: Option<MatrixProfile> = None;
        for &b in &budgets {
            let opts = StampOptions {
                order: Order::Shuffled(123),
                budget: Budget::Fraction(b),
                ..StampOptions::default()
            };
            let mp = stamp(&t, 32, &opts).unwrap();
            if let Some(pr) = &prev {
                for j in 0..mp.len() {
                    assert!(mp.profile[j] <= pr.profile[j]);
                }
            }
            prev = Some(mp);
        }
        // Exact profile lower-bounds every snapshot.
        let exact = brute_force_profile(&t, 32).unwrap();
        let early = stamp(
            &t,
            32,
            &StampOptions {
                order: Order::Shuffled(123),
                budget: Budget::Fraction(0.05),
                ..StampOptions::default()
            },
        )
        .unwrap();
        for j in 0..exact.len() {
            assert!(exact.profile[j] <= early.profile[j] + 1e-9);
        }
    }

    #[test]
    fn stamp_rejects_bad_budget() {
        let t = random_walk(0, 100);
        for budget in [Budget::Fraction(0.0), Budget::Fraction(-0.5), Budget::Rows(0)] {
            let opts = StampOptions {
                budget,
                ..StampOptions::default()
            };
            assert!(stamp(&t, 8, &opts).is_err());
        }
    }

    #[test]
    fn stamp_interrupt_yields_snapshot() {
        let t = random_walk(3, 800);
        let opts = StampOptions {
            progress_every: 10,
            ..StampOptions::default()
        };
        let mp = stamp_interruptible(&t, 16, &opts, &|_| false).unwrap();
        assert!(mp.fraction_done < 1.0);
        assert!(mp.fraction_done > 0.0);
    }

    #[test]
    fn merge_properties() {
        let t = random_walk(11, 400);
        let make = |seed, frac| {
            stamp(
                &t,
                24,
                &StampOptions {
                    order: Order::Shuffled(seed),
                    budget: Budget::Fraction(frac),
                    ..StampOptions::default()
                },
            )
            .unwrap()
        };
        let a = make(1, 0.3);
        let b = make(2, 0.4);
        // Idempotence, identity, commutativity.
        assert_eq!(elementwise_min_merge(&a, &a).unwrap().profile, a.profile);
        let empty = MatrixProfile::empty(24, a.len());
        let with_empty = elementwise_min_merge(&a, &empty).unwrap();
        assert_eq!(with_empty.profile, a.profile);
        assert_eq!(with_empty.profile_index, a.profile_index);
        let ab = elementwise_min_merge(&a, &b).unwrap();
        let ba = elementwise_min_merge(&b, &a).unwrap();
        assert_eq!(ab.profile, ba.profile);
        assert_eq!(ab.profile_index, ba.profile_index);
    }

    #[test]
    fn merge_rejects_shape_mismatch() {
        let t = random_walk(0, 128);
        let a = stomp(&t, 8).unwrap();
        let b = stomp(&t, 16).unwrap();
        assert!(elementwise_min_merge(&a, &b).is_err());
    }

    #[test]
    fn stomp_matches_stamp() {
        for seed in [10u64, 20, 30] {
            let t = random_walk(seed, 1024);
            let a = stomp(&t, 64).unwrap();
            let b = stamp(&t, 64, &StampOptions::default()).unwrap();
            assert_profiles_close(&a, &b, 1e-6);
        }
    }

    #[test]
    fn stomp_all_zero_series() {
        let t = TimeSeries::new(vec![0.0; 64]).unwrap();
        let mp = stomp(&t, 8).unwrap();
        assert!(mp.profile.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn stomp_consistency_invariant() {
        // dist(T_i, T_I[i]) must re-verify against the stored P[i].
        let t = random_walk(42, 600);
        let m = 48;
        let mp = stomp(&t, m).unwrap();
        for i in (0..mp.len()).step_by(37) {
            let j = mp.profile_index[i];
            if j < 0 {
                continue;
            }
            let zi = znormalize(t.window(i, m)).unwrap();
            let zj = znormalize(t.window(j as usize, m)).unwrap();
            let d: f64 = zi
                .iter()
                .zip(&zj)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!((d - mp.profile[i]).abs() <= 1e-6);
            assert!((j as usize).abs_diff(i) >= mp.exclusion_radius);
        }
    }

    #[test]
    fn parallel_workers_byte_identical() {
        let t = random_walk(8, 900);
        let base = stamp(&t, 32, &StampOptions::default()).unwrap();
        for threads in [2usize, 3, 5] {
            let par = stamp(
                &t,
                32,
                &StampOptions {
                    threads,
                    ..StampOptions::default()
                },
            )
            .unwrap();
            let same_bits = base
                .profile
                .iter()
                .zip(&par.profile)
                .all(|(a, b)| a.to_bits() == b.to_bits());
            assert!(same_bits);
            assert_eq!(base.profile_index, par.profile_index);
        }
    }

    #[test]
    fn predict_runtime_scaling() {
        assert_eq!(predict_runtime(10.0, 1000, 1000), 10.0);
        assert_eq!(predict_runtime(10.0, 1000, 2000), 40.0);
        assert_eq!(predict_runtime(10.0, 1000, 0), 0.0);
    }
}
