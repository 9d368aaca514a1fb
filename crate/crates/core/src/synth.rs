//! Seeded synthetic data: random walks, planted-motif series, and weakly
//! labeled datasets for dictionary-learning experiments.
//!
//! Everything is deterministic for a fixed seed (ChaCha8 keyed by the seed),
//! so the same arguments always produce bit-identical data.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::sdts::BooleanAnnotation;
use crate::series::{MultiTimeSeries, TimeSeries};

/// Random walk of length `n`: cumulative sum of standard normal steps.
pub fn random_walk(seed: u64, n: usize) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(n);
    let mut level = 0.0;
    for _ in 0..n {
        let step: f64 = rng.sample(StandardNormal);
        level += step;
        values.push(level);
    }
    TimeSeries::new(values).expect("normal steps are finite")
}

/// Positions and extent of planted pattern copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantTruth {
    pub positions: Vec<usize>,
    pub dims: Vec<usize>,
    pub pattern_len: usize,
}

fn check_plant(n: usize, len: usize, positions: &[usize]) -> Result<()> {
    if len == 0 {
        return Err(Error::InvalidPlant("empty pattern".into()));
    }
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    for (k, &p) in sorted.iter().enumerate() {
        if p + len > n {
            return Err(Error::InvalidPlant(format!(
                "pattern of length {len} at {p} does not fit in n={n}"
            )));
        }
        if k > 0 && sorted[k - 1] + len > p {
            return Err(Error::InvalidPlant(format!(
                "plants at {} and {p} overlap",
                sorted[k - 1]
            )));
        }
    }
    Ok(())
}

/// Additive blend with a linear fade-in/out over `len/8` samples at each end
/// so the plant does not introduce discontinuity artifacts.
fn blend(into: &mut [f64], at: usize, pattern: &[f64]) {
    let len = pattern.len();
    let fade = (len / 8).max(1) as f64;
    for (k, &p) in pattern.iter().enumerate() {
        let head = (k + 1) as f64 / fade;
        let tail = (len - k) as f64 / fade;
        let w = head.min(tail).min(1.0);
        into[at + k] += w * p;
    }
}

/// Random walk with `pattern` additively planted at the given positions.
pub fn planted_walk(
    seed: u64,
    n: usize,
    pattern: &[f64],
    positions: &[usize],
) -> Result<(TimeSeries, PlantTruth)> {
    check_plant(n, pattern.len(), positions)?;
    let mut values = random_walk(seed, n).values().to_vec();
    for &p in positions {
        blend(&mut values, p, pattern);
    }
    Ok((
        TimeSeries::new(values)?,
        PlantTruth {
            positions: positions.to_vec(),
            dims: vec![0],
            pattern_len: pattern.len(),
        },
    ))
}

/// `d` independent random walks with `pattern` planted into `dims` at the
/// given positions (each target dimension gets a phase-shifted variant so the
/// planted dimensions stay distinguishable).
pub fn planted_walk_multi(
    seed: u64,
    n: usize,
    d: usize,
    pattern: &[f64],
    positions: &[usize],
    dims: &[usize],
) -> Result<(MultiTimeSeries, PlantTruth)> {
    check_plant(n, pattern.len(), positions)?;
    if dims.iter().any(|&dim| dim >= d) {
        return Err(Error::InvalidPlant(format!(
            "plant dimension out of range for d={d}"
        )));
    }
    let mut rows: Vec<Vec<f64>> = (0..d)
        .map(|i| random_walk(seed.wrapping_add(i as u64), n).values().to_vec())
        .collect();
    for (which, &dim) in dims.iter().enumerate() {
        // Reverse every other target dimension; exact copies per dimension,
        // different shapes across dimensions.
        let variant: Vec<f64> = if which % 2 == 0 {
            pattern.to_vec()
        } else {
            pattern.iter().rev().copied().collect()
        };
        for &p in positions {
            blend(&mut rows[dim], p, &variant);
        }
    }
    Ok((
        MultiTimeSeries::from_vecs(rows)?,
        PlantTruth {
            positions: positions.to_vec(),
            dims: dims.to_vec(),
            pattern_len: pattern.len(),
        },
    ))
}

/// A smooth, strongly non-random burst used as a plantable pattern.
pub fn burst_pattern(len: usize, amplitude: f64) -> Vec<f64> {
    (0..len)
        .map(|i| {
            let t = i as f64 / len as f64;
            let env = (std::f64::consts::PI * t).sin();
            amplitude * env * (std::f64::consts::TAU * 3.0 * t).sin()
        })
        .collect()
}

/// Generator knobs for a weakly labeled dataset: a long random walk with a
/// conserved pattern embedded in labeled segments.
///
/// `slop` is the fraction of each positive segment that is background rather
/// than pattern; `false_positive`/`false_negative` corrupt the labels without
/// touching the signal.
#[derive(Debug, Clone)]
pub struct WeakLabelConfig {
    pub seed: u64,
    /// Number of genuine pattern occurrences.
    pub events: usize,
    pub pattern_len: usize,
    /// Fraction of each positive segment not covered by the pattern, in [0, 1).
    pub slop: f64,
    /// Fraction of positive labels that mark pattern-free segments, in [0, 1).
    pub false_positive: f64,
    /// Fraction of genuine events whose labels are dropped, in [0, 1).
    pub false_negative: f64,
    /// Mean gap length between segments, in samples.
    pub gap_len: usize,
    pub amplitude: f64,
}

impl Default for WeakLabelConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            events: 30,
            pattern_len: 275,
            slop: 0.7,
            false_positive: 0.0,
            false_negative: 0.0,
            gap_len: 400,
            amplitude: 25.0,
        }
    }
}

/// A generated weakly labeled dataset.
#[derive(Debug, Clone)]
pub struct WeakLabelData {
    pub series: TimeSeries,
    /// The (possibly corrupted) labels a learner is given.
    pub labels: BooleanAnnotation,
    /// Uncorrupted segment labels, for evaluation.
    pub clean_labels: BooleanAnnotation,
    /// Exact extent of each embedded pattern copy.
    pub truth: BooleanAnnotation,
}

/// Build a weakly labeled series per `cfg`. Deterministic for a fixed config.
pub fn weak_label_dataset(cfg: &WeakLabelConfig) -> Result<WeakLabelData> {
    if !(0.0..1.0).contains(&cfg.slop)
        || !(0.0..1.0).contains(&cfg.false_positive)
        || !(0.0..1.0).contains(&cfg.false_negative)
    {
        return Err(Error::InvalidPlant(
            "slop and label-noise fractions must be in [0, 1)".into(),
        ));
    }
    if cfg.events == 0 || cfg.pattern_len < 2 {
        return Err(Error::InvalidPlant(
            "need at least one event and a pattern of length >= 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(7));
    let seg_len = (cfg.pattern_len as f64 / (1.0 - cfg.slop)).ceil() as usize;

    // Pattern is fixed per dataset seed and copied exactly at each event.
    let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let pattern: Vec<f64> = (0..cfg.pattern_len)
        .map(|i| {
            let t = i as f64 / cfg.pattern_len as f64;
            let env = (std::f64::consts::PI * t).sin();
            cfg.amplitude
                * env
                * ((std::f64::consts::TAU * 3.0 * t + phase).sin()
                    + 0.5 * (std::f64::consts::TAU * 7.0 * t).cos())
        })
        .collect();

    let n_fake = if cfg.false_positive > 0.0 {
        (cfg.false_positive / (1.0 - cfg.false_positive) * cfg.events as f64).round() as usize
    } else {
        0
    };
    // Segment kinds laid out in a seeded random order.
    let mut kinds: Vec<bool> = Vec::new(); // true = genuine event
    kinds.extend(std::iter::repeat(true).take(cfg.events));
    kinds.extend(std::iter::repeat(false).take(n_fake));
    for i in (1..kinds.len()).rev() {
        let j = rng.gen_range(0..=i);
        kinds.swap(i, j);
    }

    let gap = |rng: &mut ChaCha8Rng| {
        let lo = cfg.gap_len / 2;
        let hi = cfg.gap_len + cfg.gap_len / 2;
        rng.gen_range(lo..=hi.max(lo + 1))
    };

    // Walk layout first, then a single walk over the whole length.
    struct Seg {
        start: usize,
        genuine: bool,
        pattern_at: usize,
    }
    let mut segs = Vec::with_capacity(kinds.len());
    let mut cursor = gap(&mut rng);
    for &genuine in &kinds {
        let pattern_at = if seg_len > cfg.pattern_len {
            cursor + rng.gen_range(0..=(seg_len - cfg.pattern_len))
        } else {
            cursor
        };
        segs.push(Seg {
            start: cursor,
            genuine,
            pattern_at,
        });
        cursor += seg_len + gap(&mut rng);
    }
    let n = cursor + cfg.gap_len;

    let mut values = random_walk(cfg.seed, n).values().to_vec();
    let mut labels = vec![false; n];
    let mut clean = vec![false; n];
    let mut truth = vec![false; n];

    let drop_label: Vec<bool> = segs
        .iter()
        .map(|s| s.genuine && rng.gen_bool(cfg.false_negative))
        .collect();

    for (seg, &dropped) in segs.iter().zip(&drop_label) {
        if seg.genuine {
            blend(&mut values, seg.pattern_at, &pattern);
            for t in truth[seg.pattern_at..seg.pattern_at + cfg.pattern_len].iter_mut() {
                *t = true;
            }
            for c in clean[seg.start..seg.start + seg_len].iter_mut() {
                *c = true;
            }
        }
        if !dropped {
            for l in labels[seg.start..seg.start + seg_len].iter_mut() {
                *l = true;
            }
        }
    }

    Ok(WeakLabelData {
        series: TimeSeries::new(values)?,
        labels: BooleanAnnotation::new(labels),
        clean_labels: BooleanAnnotation::new(clean),
        truth: BooleanAnnotation::new(truth),
    })
}
