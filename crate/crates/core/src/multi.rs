//! Multidimensional matrix profiles (mSTAMP / mSTOMP) and lazy subspace
//! recovery.
//!
//! For each query window the engine computes one distance profile per
//! dimension, sorts each column ascending, and turns prefix averages into the
//! k-dimensional distance profiles for every k at once. The k best dimensions
//! of a match are recomputed on demand rather than stored.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::profile::{Budget, Order, NO_NEIGHBOR, STOMP_REBUILD_ROWS};
use crate::series::{
    check_window, exclusion_radius, rolling_stats_centered, MultiTimeSeries, RollingStats,
};
use crate::simsearch::{dist_from_dot, MassContext, MassScratch};

/// Per-k matrix profiles of a multidimensional series: row `k-1` holds the
/// k-dimensional profile (average of the k smallest dimension-wise distances
/// to the best neighbor).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiProfile {
    pub m: usize,
    pub exclusion_radius: usize,
    /// `profiles[k-1][j]`: k-dimensional profile value at window `j`.
    pub profiles: Vec<Vec<f64>>,
    pub profile_index: Vec<Vec<i64>>,
    pub fraction_done: f64,
    /// Original indices of the dimensions searched, constrained dims first.
    pub active_dims: Vec<usize>,
    /// Rows `k <= include_count` are only defined for `k >= include_count`;
    /// smaller k cannot span all whitelisted dimensions and stay sentinel.
    pub include_count: usize,
}

impl MultiProfile {
    /// Number of k levels (the searched dimensionality).
    pub fn dims(&self) -> usize {
        self.profiles.len()
    }

    pub fn len(&self) -> usize {
        self.profiles.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Argmin of the k-dimensional row (`k` is 1-based); ties go to the
    /// smaller index.
    pub fn min_position(&self, k: usize) -> Option<usize> {
        let row = &self.profiles[k - 1];
        let mut best: Option<usize> = None;
        for (j, &v) in row.iter().enumerate() {
            if v.is_finite() && best.map_or(true, |b| v < row[b]) {
                best = Some(j);
            }
        }
        best
    }
}

/// Options for [`mstamp`]; `include`/`exclude` hold original dim indices.
#[derive(Debug, Clone, Default)]
pub struct MstampOptions {
    pub order: Option<Order>,
    pub budget: Option<Budget>,
    pub threads: usize,
    pub progress_every: usize,
    pub include: Vec<usize>,
    pub exclude: Vec<usize>,
}

fn resolve_dims(d: usize, include: &[usize], exclude: &[usize]) -> Result<(Vec<usize>, usize)> {
    for &dim in include.iter().chain(exclude) {
        if dim >= d {
            return Err(Error::InvalidConstraint(format!(
                "dimension {dim} out of range for d={d}"
            )));
        }
    }
    if include.iter().any(|dim| exclude.contains(dim)) {
        return Err(Error::InvalidConstraint(
            "include and exclude sets overlap".into(),
        ));
    }
    let mut incl: Vec<usize> = include.to_vec();
    incl.sort_unstable();
    incl.dedup();
    let mut rest: Vec<usize> = (0..d)
        .filter(|dim| !incl.contains(dim) && !exclude.contains(dim))
        .collect();
    if incl.is_empty() && rest.is_empty() {
        return Err(Error::InvalidConstraint("every dimension excluded".into()));
    }
    let include_count = incl.len();
    incl.append(&mut rest);
    Ok((incl, include_count))
}

struct DimPrep {
    centered: Vec<f64>,
    stats: RollingStats,
}

fn prepare_dims(t: &MultiTimeSeries, m: usize, active: &[usize]) -> Result<Vec<DimPrep>> {
    check_window(m, t.len())?;
    if t.len() - m + 1 < 2 {
        return Err(Error::InvalidWindow("need at least 2 windows".into()));
    }
    Ok(active
        .iter()
        .map(|&dim| {
            let row = t.row(dim);
            let offset = row.values().iter().sum::<f64>() / row.len() as f64;
            let centered = row.values().iter().map(|v| v - offset).collect();
            let stats = rolling_stats_centered(row.values(), m, offset);
            DimPrep { centered, stats }
        })
        .collect())
}

fn dim_dist_row(prep: &DimPrep, qt: &[f64], row: usize, m: usize, out: &mut [f64]) {
    let mu_q = prep.stats.centered_mean(row);
    let sd_q = prep.stats.stds()[row];
    for (j, slot) in out.iter_mut().enumerate() {
        let (d, _) = dist_from_dot(
            qt[j],
            mu_q,
            sd_q,
            prep.stats.centered_mean(j),
            prep.stats.stds()[j],
            m,
        );
        *slot = d;
    }
}

/// Sort the gathered column (whitelisted dims stay in front), prefix-average,
/// and fold each k level.
#[inline]
fn fold_column(
    col: &mut [f64],
    include_count: usize,
    profiles: &mut [Vec<f64>],
    indices: &mut [Vec<i64>],
    row: usize,
    j: usize,
) {
    let cmp = |a: &f64, b: &f64| a.partial_cmp(b).unwrap();
    col[..include_count].sort_unstable_by(cmp);
    col[include_count..].sort_unstable_by(cmp);
    let row_i = row as i64;
    let mut sum = 0.0;
    for (k_idx, &d) in col.iter().enumerate() {
        sum += d;
        if k_idx + 1 < include_count {
            continue; // cannot span all whitelisted dims yet
        }
        let avg = sum / (k_idx + 1) as f64;
        let (p, i) = (&mut profiles[k_idx][j], &mut indices[k_idx][j]);
        if avg < *p || (avg == *p && row_i < *i) {
            *p = avg;
            *i = row_i;
        }
    }
}

/// Multidimensional matrix profile for every k at once.
///
/// Sequential order runs the per-dimension STOMP recurrence (mSTOMP);
/// shuffled order runs MASS per dimension, accepts a budget, and is anytime.
pub fn mstamp(t: &MultiTimeSeries, m: usize, opts: &MstampOptions) -> Result<MultiProfile> {
    let (active, include_count) = resolve_dims(t.dims(), &opts.include, &opts.exclude)?;
    let preps = prepare_dims(t, m, &active)?;
    let count = t.len() - m + 1;
    let d = preps.len();
    let radius = exclusion_radius(m);
    let order = opts.order.unwrap_or(Order::Sequential);
    let budget = opts.budget.unwrap_or(Budget::Full);

    let make_empty = || {
        (
            vec![vec![f64::INFINITY; count]; d],
            vec![vec![NO_NEIGHBOR; count]; d],
        )
    };

    let (profiles, indices, fraction) = match order {
        Order::Sequential => {
            if !matches!(budget, Budget::Full) {
                return Err(Error::InvalidBudget(
                    "ordered search is not anytime; use shuffled order for budgets".into(),
                ));
            }
            let (mut profiles, mut indices) = make_empty();
            let ctxs: Vec<MassContext> =
                preps.iter().map(|p| MassContext::new(&p.centered)).collect();
            let mut scratches: Vec<MassScratch> = ctxs.iter().map(MassContext::scratch).collect();
            let mut qts: Vec<Vec<f64>> = Vec::with_capacity(d);
            let mut qt_firsts: Vec<Vec<f64>> = Vec::with_capacity(d);
            for (prep, (ctx, scratch)) in preps.iter().zip(ctxs.iter().zip(&mut scratches)) {
                let mut qt = vec![0.0; count];
                ctx.dots_into(&prep.centered[..m], scratch, &mut qt);
                qt_firsts.push(qt.clone());
                qts.push(qt);
            }
            let mut dmat = vec![vec![0.0; count]; d];
            let mut col = vec![0.0; d];
            for row in 0..count {
                for (dim, prep) in preps.iter().enumerate() {
                    if row > 0 {
                        if row % STOMP_REBUILD_ROWS == 0 {
                            ctxs[dim].dots_into(
                                &prep.centered[row..row + m],
                                &mut scratches[dim],
                                &mut qts[dim],
                            );
                        } else {
                            let v = &prep.centered;
                            let drop_v = v[row - 1];
                            let add_v = v[row + m - 1];
                            let qt = &mut qts[dim];
                            for j in (1..count).rev() {
                                qt[j] = qt[j - 1] - drop_v * v[j - 1] + add_v * v[j + m - 1];
                            }
                            qt[0] = qt_firsts[dim][row];
                        }
                    }
                    dim_dist_row(prep, &qts[dim], row, m, &mut dmat[dim]);
                }
                for j in 0..count {
                    if row.abs_diff(j) < radius {
                        continue;
                    }
                    for (dim, dist_row) in dmat.iter().enumerate() {
                        col[dim] = dist_row[j];
                    }
                    fold_column(&mut col, include_count, &mut profiles, &mut indices, row, j);
                }
            }
            (profiles, indices, 1.0)
        }
        Order::Shuffled(seed) => {
            let take = budget.resolve(count)?;
            let mut rows: Vec<usize> = (0..count).collect();
            rows.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            rows.truncate(take);
            let threads = opts.threads.max(1).min(rows.len());
            let ctxs: Vec<MassContext> =
                preps.iter().map(|p| MassContext::new(&p.centered)).collect();
            let done = AtomicUsize::new(0);
            let stop = AtomicBool::new(false);
            let _ = stop; // interrupt hook reserved for parity with stamp

            let chunk_size = rows.len().div_ceil(threads);
            let chunks: Vec<&[usize]> = rows.chunks(chunk_size).collect();
            let run_chunk = |chunk: &[usize]| {
                let (mut profiles, mut indices) = make_empty();
                let mut scratches: Vec<MassScratch> =
                    ctxs.iter().map(MassContext::scratch).collect();
                let mut qt = vec![0.0; count];
                let mut dmat = vec![vec![0.0; count]; d];
                let mut col = vec![0.0; d];
                for &row in chunk {
                    for (dim, prep) in preps.iter().enumerate() {
                        ctxs[dim].dots_into(
                            &prep.centered[row..row + m],
                            &mut scratches[dim],
                            &mut qt,
                        );
                        dim_dist_row(prep, &qt, row, m, &mut dmat[dim]);
                    }
                    for j in 0..count {
                        if row.abs_diff(j) < radius {
                            continue;
                        }
                        for (dim, dist_row) in dmat.iter().enumerate() {
                            col[dim] = dist_row[j];
                        }
                        fold_column(
                            &mut col,
                            include_count,
                            &mut profiles,
                            &mut indices,
                            row,
                            j,
                        );
                    }
                    done.fetch_add(1, Ordering::Relaxed);
                }
                (profiles, indices)
            };

            let partials: Vec<_> = if threads == 1 {
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

            let (mut profiles, mut indices) = make_empty();
            for (pp, ii) in partials {
                for k_idx in 0..d {
                    for j in 0..count {
                        let (p, i) = (pp[k_idx][j], ii[k_idx][j]);
                        if p < profiles[k_idx][j]
                            || (p == profiles[k_idx][j] && i < indices[k_idx][j])
                        {
                            profiles[k_idx][j] = p;
                            indices[k_idx][j] = i;
                        }
                    }
                }
            }
            let frac = done.load(Ordering::Relaxed) as f64 / count as f64;
            (profiles, indices, frac)
        }
    };

    Ok(MultiProfile {
        m,
        exclusion_radius: radius,
        profiles,
        profile_index: indices,
        fraction_done: fraction,
        active_dims: active,
        include_count,
    })
}

/// The k dimensions spanned by a match, with their distances (ascending, ties
/// to the smaller dim index).
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceResult {
    pub k: usize,
    pub position: usize,
    pub neighbor: usize,
    /// Original dimension indices, ordered by ascending distance.
    pub dims: Vec<usize>,
    /// Distances aligned with `dims`.
    pub dim_distances: Vec<f64>,
}

/// Recompute the dimension-wise distances between windows `i` and `j` and
/// return the `k` smallest with their dimensions.
pub fn subspace(
    t: &MultiTimeSeries,
    m: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<SubspaceResult> {
    let all: Vec<usize> = (0..t.dims()).collect();
    subspace_ranked(t, m, i, j, k, &all, 0)
}

/// Subspace recovery honoring a constrained search: `active` are the searched
/// dims with the first `include_count` forced to the front of the ranking.
pub(crate) fn subspace_ranked(
    t: &MultiTimeSeries,
    m: usize,
    i: usize,
    j: usize,
    k: usize,
    active: &[usize],
    include_count: usize,
) -> Result<SubspaceResult> {
    check_window(m, t.len())?;
    let count = t.len() - m + 1;
    if i >= count || j >= count {
        return Err(Error::InvalidPair(format!(
            "positions ({i}, {j}) out of range for {count} windows"
        )));
    }
    if i.abs_diff(j) < exclusion_radius(m) {
        return Err(Error::InvalidPair(format!(
            "pair ({i}, {j}) is a trivial match for m={m}"
        )));
    }
    if k == 0 || k > active.len() {
        return Err(Error::InvalidPair(format!(
            "k={k} out of range for {} searched dimensions",
            active.len()
        )));
    }

    let window_stats = |w: &[f64]| {
        let mf = m as f64;
        let mean = w.iter().sum::<f64>() / mf;
        let var = (w.iter().map(|v| v * v).sum::<f64>() / mf - mean * mean).max(0.0);
        (mean, var.sqrt())
    };
    let mut ranked: Vec<(f64, usize)> = active
        .iter()
        .map(|&dim| {
            let row = t.row(dim).values();
            let (wi, wj) = (&row[i..i + m], &row[j..j + m]);
            let (mu_i, sd_i) = window_stats(wi);
            let (mu_j, sd_j) = window_stats(wj);
            let dot: f64 = wi.iter().zip(wj).map(|(a, b)| a * b).sum();
            let (d, _) = dist_from_dot(dot, mu_i, sd_i, mu_j, sd_j, m);
            (d, dim)
        })
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| {
        a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1))
    };
    ranked[..include_count].sort_unstable_by(cmp);
    ranked[include_count..].sort_unstable_by(cmp);
    ranked.truncate(k);
    Ok(SubspaceResult {
        k,
        position: i,
        neighbor: j,
        dims: ranked.iter().map(|&(_, dim)| dim).collect(),
        dim_distances: ranked.iter().map(|&(d, _)| d).collect(),
    })
}
