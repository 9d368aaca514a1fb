//! Scalable dictionary learning for weakly labeled time series.
//!
//! Training concatenates the positively labeled segments, mines shape
//! candidates from the matrix profile of that concatenation (windows crossing
//! segment junctions are ignored), tunes one distance threshold per candidate
//! by golden-section search on the F-beta score, and greedily grows the
//! dictionary while thresholds are re-refined by coordinate ascent.
//!
//! Prediction flags every position covered by a window within threshold of
//! any dictionary shape; a streaming variant reproduces the window-end
//! aligned bits sample by sample.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::profile::stomp_masked;
use crate::series::{is_flat, rolling_stats, znormalize, RollingStats, TimeSeries};
use crate::simsearch::{mass, mass_with_context, MassContext};

/// Golden-section terminates when the bracket shrinks to this fraction of
/// the initial interval.
const GOLDEN_TOL: f64 = 1e-3;
/// Uniform probes layered over the golden-section search; F-beta over a
/// threshold is piecewise constant and can plateau.
const GOLDEN_SEEDS: usize = 16;

/// A {0,1} annotation paired with a series of the same length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanAnnotation {
    bits: Vec<bool>,
}

impl BooleanAnnotation {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Maximal runs of consecutive positives as `[start, end)` ranges.
    pub fn positive_segments(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, &b) in self.bits.iter().enumerate() {
            match (b, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    out.push((s, i));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, self.bits.len()));
        }
        out
    }
}

/// Point-wise F-beta between a ground-truth annotation and a prediction.
/// Zero when precision and recall are both zero.
pub fn f_beta(truth: &BooleanAnnotation, pred: &BooleanAnnotation, beta: f64) -> Result<f64> {
    if truth.len() != pred.len() {
        return Err(Error::InvalidAnnotation(format!(
            "length mismatch: {} vs {}",
            truth.len(),
            pred.len()
        )));
    }
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::InvalidAnnotation(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let (mut tp, mut fp, mut fnn) = (0u64, 0u64, 0u64);
    for (&t, &p) in truth.bits.iter().zip(&pred.bits) {
        match (t, p) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fnn += 1,
            _ => {}
        }
    }
    Ok(f_from_counts(tp, fp, fnn, beta))
}

fn f_from_counts(tp: u64, fp: u64, fnn: u64, beta: f64) -> f64 {
    let precision = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else {
        0.0
    };
    let recall = if tp + fnn > 0 {
        tp as f64 / (tp + fnn) as f64
    } else {
        0.0
    };
    if precision + recall == 0.0 {
        return 0.0;
    }
    let b2 = beta * beta;
    (1.0 + b2) * precision * recall / (b2 * precision + recall)
}

/// One learned shape with its match threshold on z-normalized distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    pub values: Vec<f64>,
    pub threshold: f64,
}

impl Shape {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A learned dictionary: shapes (possibly of different lengths), one
/// threshold each, and the scoring parameters used during training.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeDictionary {
    pub shapes: Vec<Shape>,
    pub beta: f64,
    pub m_set: Vec<usize>,
}

impl ShapeDictionary {
    pub fn max_shape_len(&self) -> usize {
        self.shapes.iter().map(Shape::len).max().unwrap_or(0)
    }
}

/// How a window match is written into the predicted annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlagMode {
    /// Flag the whole covered window `[i, i+m)`. Point-wise recall against
    /// segment labels is meaningless when only single indices are flagged,
    /// so this is the default.
    #[default]
    Cover,
    /// Flag only the window start.
    Starts,
    /// Flag only the window end; this is the alignment a streaming predictor
    /// can reproduce with zero latency.
    Ends,
}

fn flags_from_dists(dists: &[f64], h: f64, m: usize, n: usize, mode: FlagMode) -> Vec<bool> {
    let mut bits = vec![false; n];
    match mode {
        FlagMode::Cover => {
            // Difference array: +1 at starts, -1 past ends, then prefix.
            let mut diff = vec![0i32; n + 1];
            for (i, &d) in dists.iter().enumerate() {
                if d < h {
                    diff[i] += 1;
                    diff[i + m] -= 1;
                }
            }
            let mut level = 0;
            for (slot, d) in bits.iter_mut().zip(diff) {
                level += d;
                *slot = level > 0;
            }
        }
        FlagMode::Starts => {
            for (i, &d) in dists.iter().enumerate() {
                bits[i] = d < h;
            }
        }
        FlagMode::Ends => {
            for (i, &d) in dists.iter().enumerate() {
                bits[i + m - 1] = d < h;
            }
        }
    }
    bits
}

fn or_into(acc: &mut [bool], other: &[bool]) {
    for (a, &b) in acc.iter_mut().zip(other) {
        *a |= b;
    }
}

/// Maximize `F_beta(labels, predict_with_one_shape(h))` over `h` by
/// golden-section search plus uniform seed probes (the objective is
/// piecewise constant, so plateaus are probed explicitly).
///
/// Returns `(threshold, score)`; on an everywhere-zero objective the interval
/// midpoint is returned with score 0.
pub fn golden_section_threshold(
    shape: &[f64],
    t: &TimeSeries,
    labels: &BooleanAnnotation,
    beta: f64,
    interval: Option<(f64, f64)>,
) -> Result<(f64, f64)> {
    if labels.len() != t.len() {
        return Err(Error::InvalidAnnotation(
            "labels must match the series length".into(),
        ));
    }
    if shape.len() > t.len() {
        return Err(Error::InvalidShape(format!(
            "shape of length {} exceeds series length {}",
            shape.len(),
            t.len()
        )));
    }
    let stats = rolling_stats(t, shape.len())?;
    let dists = mass(shape, t, &stats)?.distances;
    let (lo, hi) = interval.unwrap_or((0.0, 2.0 * (shape.len() as f64).sqrt()));
    golden_over_dists(&dists, shape.len(), t.len(), labels, beta, lo, hi, FlagMode::Cover)
}

#[allow(clippy::too_many_arguments)]
fn golden_over_dists(
    dists: &[f64],
    m: usize,
    n: usize,
    labels: &BooleanAnnotation,
    beta: f64,
    lo: f64,
    hi: f64,
    mode: FlagMode,
) -> Result<(f64, f64)> {
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInterval(format!(
            "degenerate interval [{lo}, {hi}]"
        )));
    }
    let eval = |h: f64| -> f64 {
        let pred = BooleanAnnotation::new(flags_from_dists(dists, h, m, n, mode));
        f_beta(labels, &pred, beta).expect("lengths verified")
    };
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    let mut probe = |h: f64, f: f64| {
        if f > best.1 {
            best = (h, f);
        }
    };
    probe(lo, eval(lo));
    probe(hi, eval(hi));
    for s in 1..=GOLDEN_SEEDS {
        let h = lo + (hi - lo) * s as f64 / (GOLDEN_SEEDS + 1) as f64;
        probe(h, eval(h));
    }

    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let tol = GOLDEN_TOL * (hi - lo);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    probe(c, fc);
    probe(d, fd);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c);
            probe(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d);
            probe(d, fd);
        }
    }
    if best.1 <= 0.0 {
        return Ok(((lo + hi) / 2.0, 0.0));
    }
    Ok(best)
}

/// Training knobs; `threads = 0` means one worker per available core for the
/// independent candidate threshold searches.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub m_set: Vec<usize>,
    pub beta: f64,
    pub threads: usize,
}

impl TrainConfig {
    pub fn new(m_set: Vec<usize>) -> Self {
        Self {
            m_set,
            beta: 1.0,
            threads: 0,
        }
    }
}

struct Candidate {
    values: Vec<f64>,
    m: usize,
    h0: f64,
    /// Distance profile against the full training series, cached.
    dists: Vec<f64>,
}

fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let threads = if threads == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        threads
    }
    .min(items.len().max(1));
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect()
    })
}

/// Learn a shape dictionary from a weakly labeled series.
///
/// Candidates come from the lowest matrix-profile window of each positive
/// segment (per window length in `m_set`); greedy forward selection keeps a
/// candidate only while it improves the joint training F-beta, and stops at
/// half the candidate count.
pub fn train(t: &TimeSeries, labels: &BooleanAnnotation, cfg: &TrainConfig) -> Result<ShapeDictionary> {
    if labels.len() != t.len() {
        return Err(Error::InvalidAnnotation(
            "labels must match the series length".into(),
        ));
    }
    if cfg.beta <= 0.0 || !cfg.beta.is_finite() {
        return Err(Error::InvalidAnnotation("beta must be positive".into()));
    }
    let segments = labels.positive_segments();
    if segments.is_empty() {
        return Err(Error::NoPositives);
    }
    let mut m_set: Vec<usize> = cfg.m_set.clone();
    m_set.sort_unstable();
    m_set.dedup();
    if m_set.is_empty() || m_set[0] < 2 {
        return Err(Error::InvalidWindow("m_set must contain lengths >= 2".into()));
    }

    // Concatenate positive segments; remember junctions.
    let mut concat = Vec::new();
    let mut bounds = Vec::new(); // [start, end) of each segment inside `concat`
    for &(s, e) in &segments {
        let off = concat.len();
        concat.extend_from_slice(&t.values()[s..e]);
        bounds.push((off, concat.len()));
    }
    let concat_ts = TimeSeries::new(concat)?;

    // Mine candidates per window length.
    let mut raw_candidates: Vec<(Vec<f64>, usize)> = Vec::new();
    for &m in &m_set {
        if m > concat_ts.len() || concat_ts.len() - m + 1 < 2 {
            log::warn!("skipping m={m}: concatenated positives too short");
            continue;
        }
        let count = concat_ts.len() - m + 1;
        // Windows spanning a junction do not exist in the original series.
        let mut forbidden = vec![false; count];
        for &(_, end) in &bounds[..bounds.len() - 1] {
            for p in end.saturating_sub(m - 1)..end.min(count) {
                forbidden[p] = true;
            }
        }
        let profile = stomp_masked(&concat_ts, m, Some(&forbidden))?;
        for (seg_idx, &(s, e)) in bounds.iter().enumerate() {
            if e - s < m {
                log::warn!("segment {seg_idx} shorter than m={m}; skipped");
                continue;
            }
            let mut best: Option<usize> = None;
            for p in s..=e - m {
                if profile.profile[p].is_finite()
                    && best.map_or(true, |b| profile.profile[p] < profile.profile[b])
                {
                    best = Some(p);
                }
            }
            if let Some(p) = best {
                raw_candidates.push((concat_ts.window(p, m).to_vec(), m));
            }
        }
    }
    if raw_candidates.is_empty() {
        return Err(Error::NoCandidates(
            "every (segment, m) combination was skipped".into(),
        ));
    }

    // Distance profiles against the full series are reused by every
    // threshold search below; stats are shared per window length.
    let mut stats_by_m: Vec<(usize, RollingStats)> = Vec::new();
    for &m in &m_set {
        if m <= t.len() {
            stats_by_m.push((m, rolling_stats(t, m)?));
        }
    }
    let stats_for = |m: usize| &stats_by_m.iter().find(|(mm, _)| *mm == m).unwrap().1;

    let n = t.len();
    let beta = cfg.beta;
    // One FFT context serves every window length.
    let ctx = MassContext::for_series(t.values(), stats_by_m[0].1.offset());
    let candidates: Vec<Candidate> = parallel_map(&raw_candidates, cfg.threads, |(values, m)| {
        let mut scratch = ctx.scratch();
        let dists = mass_with_context(&ctx, &mut scratch, values, stats_for(*m))
            .expect("candidate windows fit the series")
            .distances;
        let (h0, _f0) = golden_over_dists(
            &dists,
            *m,
            n,
            labels,
            beta,
            0.0,
            2.0 * (*m as f64).sqrt(),
            FlagMode::Cover,
        )
        .expect("interval is non-degenerate");
        Candidate {
            values: values.clone(),
            m: *m,
            h0,
            dists,
        }
    });

    // Greedy forward selection with one coordinate-ascent threshold pass per
    // tested combination.
    let cap = (candidates.len() / 2).max(1);
    let mut selected: Vec<usize> = Vec::new();
    let mut thresholds: Vec<f64> = Vec::new();
    let mut f_curr = f64::NEG_INFINITY;

    let joint_cover = |members: &[usize], hs: &[f64], skip: Option<usize>| -> Vec<bool> {
        let mut acc = vec![false; n];
        for (slot, (&c, &h)) in members.iter().zip(hs).enumerate() {
            if Some(slot) == skip {
                continue;
            }
            let cand = &candidates[c];
            or_into(
                &mut acc,
                &flags_from_dists(&cand.dists, h, cand.m, n, FlagMode::Cover),
            );
        }
        acc
    };

    while selected.len() < cap {
        let remaining: Vec<usize> = (0..candidates.len())
            .filter(|c| !selected.contains(c))
            .collect();
        if remaining.is_empty() {
            break;
        }
        let trials: Vec<(f64, Vec<f64>)> = parallel_map(&remaining, cfg.threads, |&cand_idx| {
            let members: Vec<usize> = selected.iter().copied().chain([cand_idx]).collect();
            let mut hs: Vec<f64> = thresholds.iter().copied().collect();
            hs.push(candidates[cand_idx].h0);
            let mut f_joint = 0.0;
            for coord in 0..members.len() {
                let others = joint_cover(&members, &hs, Some(coord));
                let cand = &candidates[members[coord]];
                let eval_union = |h: f64| {
                    let mut acc = others.clone();
                    or_into(
                        &mut acc,
                        &flags_from_dists(&cand.dists, h, cand.m, n, FlagMode::Cover),
                    );
                    f_beta(labels, &BooleanAnnotation::new(acc), beta).expect("lengths match")
                };
                let (h_best, f_best) = golden_maximize(eval_union, 0.0, 2.0 * (cand.m as f64).sqrt());
                hs[coord] = h_best;
                f_joint = f_best;
            }
            (f_joint, hs)
        });
        let mut best: Option<(usize, f64, &Vec<f64>)> = None;
        for (slot, (f_new, hs)) in trials.iter().enumerate() {
            if best.map_or(true, |(_, f, _)| *f_new > f) {
                best = Some((remaining[slot], *f_new, hs));
            }
        }
        let (winner, f_new, hs) = best.unwrap();
        if f_new > f_curr {
            // Greedy additions never decrease the training score.
            debug_assert!(f_new >= f_curr.max(0.0));
            selected.push(winner);
            thresholds = hs.clone();
            f_curr = f_new;
        } else {
            break;
        }
    }

    Ok(ShapeDictionary {
        shapes: selected
            .iter()
            .zip(&thresholds)
            .map(|(&c, &h)| Shape {
                values: candidates[c].values.clone(),
                threshold: h,
            })
            .collect(),
        beta: cfg.beta,
        m_set,
    })
}

/// Golden-section maximization of an arbitrary objective over `[lo, hi]`,
/// with the same plateau probing as the threshold search.
fn golden_maximize(eval: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let mut best = ((lo + hi) / 2.0, f64::NEG_INFINITY);
    let probe = |h: f64, f: f64, best: &mut (f64, f64)| {
        if f > best.1 {
            *best = (h, f);
        }
    };
    let f_lo = eval(lo);
    probe(lo, f_lo, &mut best);
    let f_hi = eval(hi);
    probe(hi, f_hi, &mut best);
    for s in 1..=GOLDEN_SEEDS {
        let h = lo + (hi - lo) * s as f64 / (GOLDEN_SEEDS + 1) as f64;
        probe(h, eval(h), &mut best);
    }
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let tol = GOLDEN_TOL * (hi - lo);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    probe(c, fc, &mut best);
    probe(d, fd, &mut best);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c);
            probe(c, fc, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d);
            probe(d, fd, &mut best);
        }
    }
    if best.1 <= 0.0 {
        ((lo + hi) / 2.0, best.1.max(0.0))
    } else {
        best
    }
}

/// Annotate `t` with the dictionary: one MASS sweep per shape, positions
/// within threshold flagged per the default window-cover mode.
pub fn predict(t: &TimeSeries, dict: &ShapeDictionary) -> Result<BooleanAnnotation> {
    predict_with_mode(t, dict, FlagMode::Cover)
}

/// [`predict`] with an explicit flagging mode.
pub fn predict_with_mode(
    t: &TimeSeries,
    dict: &ShapeDictionary,
    mode: FlagMode,
) -> Result<BooleanAnnotation> {
    let mut acc = vec![false; t.len()];
    let mut ctx: Option<MassContext> = None;
    for shape in &dict.shapes {
        if shape.len() > t.len() {
            return Err(Error::InvalidShape(format!(
                "shape of length {} exceeds series length {}",
                shape.len(),
                t.len()
            )));
        }
        let stats = rolling_stats(t, shape.len())?;
        let ctx =
            ctx.get_or_insert_with(|| MassContext::for_series(t.values(), stats.offset()));
        let mut scratch = ctx.scratch();
        let dists = mass_with_context(ctx, &mut scratch, &shape.values, &stats)?.distances;
        or_into(
            &mut acc,
            &flags_from_dists(&dists, shape.threshold, shape.len(), t.len(), mode),
        );
    }
    Ok(BooleanAnnotation::new(acc))
}

/// Drop the first `lag` label bits so training learns precursors; the caller
/// truncates the series tail to match.
pub fn apply_lag(labels: &BooleanAnnotation, lag: usize) -> Result<BooleanAnnotation> {
    if lag >= labels.len() {
        return Err(Error::InvalidLag(format!(
            "lag {lag} out of range for {} labels",
            labels.len()
        )));
    }
    Ok(BooleanAnnotation::new(labels.bits[lag..].to_vec()))
}

/// Sample-by-sample prediction over a stream.
///
/// Each pushed sample yields the bit for the newest window of every shape
/// whose length already fits; this matches batch prediction in
/// [`FlagMode::Ends`] alignment bit for bit. Before any shape's window fits,
/// the output is 0.
#[derive(Debug, Clone)]
pub struct StreamingPredictor {
    /// (z-normalized shape, threshold, flat) per dictionary entry.
    shapes: Vec<(Vec<f64>, f64, bool)>,
    max_m: usize,
    buf: VecDeque<f64>,
    seen: usize,
}

impl StreamingPredictor {
    pub fn new(dict: &ShapeDictionary) -> Result<Self> {
        let mut shapes = Vec::with_capacity(dict.shapes.len());
        for s in &dict.shapes {
            let z = znormalize(&s.values)?;
            let flat = z.iter().all(|&v| v == 0.0);
            shapes.push((z, s.threshold, flat));
        }
        Ok(Self {
            max_m: dict.max_shape_len(),
            shapes,
            buf: VecDeque::new(),
            seen: 0,
        })
    }

    /// Ingest one sample and return the annotation bit for its position.
    pub fn push(&mut self, sample: f64) -> Result<bool> {
        if !sample.is_finite() {
            return Err(Error::NonFinite(format!("streamed sample is {sample}")));
        }
        self.buf.push_back(sample);
        if self.buf.len() > self.max_m {
            self.buf.pop_front();
        }
        self.seen += 1;
        let mut bit = false;
        for (z, h, shape_flat) in &self.shapes {
            let m = z.len();
            if self.seen < m {
                continue;
            }
            if self.window_matches(z, *h, *shape_flat, m) {
                bit = true;
                break;
            }
        }
        Ok(bit)
    }

    fn window_matches(&self, z: &[f64], h: f64, shape_flat: bool, m: usize) -> bool {
        let start = self.buf.len() - m;
        let mf = m as f64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for i in 0..m {
            let v = self.buf[start + i];
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / mf;
        let var = (sum_sq / mf - mean * mean).max(0.0);
        let sd = var.sqrt();
        let window_flat = is_flat(sd, mean);
        // Same sigma-zero convention as the batch kernels.
        if window_flat && shape_flat {
            return 0.0 < h;
        }
        if window_flat || shape_flat {
            return (2.0 * mf).sqrt() < h;
        }
        // Early-abandoning accumulation of |z_window - z_shape|^2.
        let limit = h * h;
        let mut acc = 0.0;
        for (i, &zs) in z.iter().enumerate() {
            let zw = (self.buf[start + i] - mean) / sd;
            let diff = zw - zs;
            acc += diff * diff;
            if acc > limit {
                return false;
            }
        }
        acc.sqrt() < h
    }
}

/// Shapelet-transform features: per (series, shape) the maximum correlation
/// and minimum distance from one MASS sweep. Output is `|xs| x 2|shapes|`,
/// column `2j` the correlation, column `2j+1` the distance.
pub fn shapelet_transform(xs: &[TimeSeries], shapes: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        let mut row = Vec::with_capacity(2 * shapes.len());
        let mut ctx: Option<MassContext> = None;
        for shape in shapes {
            if shape.len() > x.len() {
                return Err(Error::InvalidShape(format!(
                    "shape of length {} exceeds series length {}",
                    shape.len(),
                    x.len()
                )));
            }
            let stats = rolling_stats(x, shape.len())?;
            let ctx =
                ctx.get_or_insert_with(|| MassContext::for_series(x.values(), stats.offset()));
            let mut scratch = ctx.scratch();
            let dp = mass_with_context(ctx, &mut scratch, shape, &stats)?;
            let best_corr = dp
                .correlations
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            let best_dist = dp.distances.iter().cloned().fold(f64::INFINITY, f64::min);
            row.push(best_corr);
            row.push(best_dist);
        }
        out.push(row);
    }
    Ok(out)
}
