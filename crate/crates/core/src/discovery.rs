//! Turning profiles into findings: motif and discord extraction, constrained
//! multidimensional search, and MDL-guided dimensionality selection.

use crate::error::{Error, Result};
use crate::multi::{mstamp, subspace_ranked, MstampOptions, MultiProfile};
use crate::profile::MatrixProfile;
use crate::series::{znormalize, ExclusionZone, MultiTimeSeries, TimeSeries};

/// A discovered motif pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifResult {
    /// Start positions, smaller first.
    pub pair: (usize, usize),
    /// Profile value of the match (average over `dims` for k > 1).
    pub distance: f64,
    /// Dimensionality of the match; 1 for single-dimensional motifs.
    pub k: usize,
    /// Spanned dimensions.
    pub dims: Vec<usize>,
    /// Discovery order, starting at 0.
    pub rank: usize,
}

/// A discovered discord: the admissible position whose nearest neighbor is
/// farthest.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscordResult {
    pub position: usize,
    pub distance: f64,
}

/// Top-`count` motifs: repeatedly take the best admissible pair, then mask
/// the exclusion zones of both members before the next pick.
///
/// A candidate whose recorded neighbor is already masked is skipped; emitted
/// pairs are therefore mutually non-overlapping. Returns fewer than `count`
/// results when the profile is exhausted.
pub fn extract_motifs(
    profile: &MatrixProfile,
    t: &TimeSeries,
    count: usize,
) -> Result<Vec<MotifResult>> {
    if count == 0 {
        return Err(Error::InvalidCount("motif count must be >= 1".into()));
    }
    if t.len() < profile.m || profile.len() != t.len() - profile.m + 1 {
        return Err(Error::InvalidWindow(
            "profile does not match the series".into(),
        ));
    }
    let mut masked = vec![false; profile.len()];
    let mut out = Vec::new();
    while out.len() < count {
        let mut best: Option<usize> = None;
        for i in 0..profile.len() {
            let nb = profile.profile_index[i];
            if masked[i] || nb < 0 || masked[nb as usize] || !profile.profile[i].is_finite() {
                continue;
            }
            if best.map_or(true, |b| profile.profile[i] < profile.profile[b]) {
                best = Some(i);
            }
        }
        let Some(i) = best else { break };
        let j = profile.profile_index[i] as usize;
        mask_zone(&mut masked, i, profile.exclusion_radius);
        mask_zone(&mut masked, j, profile.exclusion_radius);
        out.push(MotifResult {
            pair: (i.min(j), i.max(j)),
            distance: profile.profile[i],
            k: 1,
            dims: vec![0],
            rank: out.len(),
        });
    }
    Ok(out)
}

/// Top-`count` discords: argmax analogue of [`extract_motifs`]. Sentinel
/// (infinite) entries are skipped so anytime snapshots cannot emit fake
/// discords.
pub fn extract_discords(profile: &MatrixProfile, count: usize) -> Result<Vec<DiscordResult>> {
    if count == 0 {
        return Err(Error::InvalidCount("discord count must be >= 1".into()));
    }
    let mut masked = vec![false; profile.len()];
    let mut out = Vec::new();
    while out.len() < count {
        let mut best: Option<usize> = None;
        for i in 0..profile.len() {
            if masked[i] || !profile.profile[i].is_finite() {
                continue;
            }
            if best.map_or(true, |b| profile.profile[i] > profile.profile[b]) {
                best = Some(i);
            }
        }
        let Some(i) = best else { break };
        mask_zone(&mut masked, i, profile.exclusion_radius);
        out.push(DiscordResult {
            position: i,
            distance: profile.profile[i],
        });
    }
    Ok(out)
}

fn mask_zone(masked: &mut [bool], center: usize, radius: usize) {
    let zone = ExclusionZone { center, radius };
    let lo = center.saturating_sub(radius);
    let hi = (center + radius).min(masked.len());
    for (j, slot) in masked.iter_mut().enumerate().take(hi).skip(lo) {
        if zone.excludes(j) {
            *slot = true;
        }
    }
}

/// Multidimensional profile restricted by dimension constraints: excluded
/// dims are removed before the join, and every reported motif of k >=
/// `include.len()` spans all whitelisted dims (rows below that stay
/// sentinel).
pub fn constrained_mstamp(
    t: &MultiTimeSeries,
    m: usize,
    include: &[usize],
    exclude: &[usize],
) -> Result<MultiProfile> {
    mstamp(
        t,
        m,
        &MstampOptions {
            include: include.to_vec(),
            exclude: exclude.to_vec(),
            ..MstampOptions::default()
        },
    )
}

/// Description lengths of a motif pair under difference encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MdlCost {
    /// Storing both windows directly: `2 m b` bits per dimension.
    pub direct_bits: u64,
    /// Reference window plus difference: `m b + m bits(delta)` per dimension.
    pub encoded_bits: u64,
}

/// Bit cost of storing the window pair `(i, j)` over `dims`: both windows are
/// z-normalized, discretized jointly to `b`-bit integers, and the second
/// window is difference-encoded against the first.
pub fn mdl_bits(
    t: &MultiTimeSeries,
    m: usize,
    pair: (usize, usize),
    dims: &[usize],
    b: u32,
) -> Result<MdlCost> {
    if b < 2 {
        return Err(Error::InvalidBits(format!("need at least 2 bits, got {b}")));
    }
    if dims.is_empty() || dims.iter().any(|&d| d >= t.dims()) {
        return Err(Error::InvalidConstraint(format!(
            "bad dimension set {dims:?} for d={}",
            t.dims()
        )));
    }
    let (i, j) = pair;
    let count = t
        .len()
        .checked_sub(m)
        .map(|r| r + 1)
        .filter(|_| m >= 2)
        .ok_or_else(|| Error::InvalidWindow(format!("m={m} does not fit")))?;
    if i >= count || j >= count {
        return Err(Error::InvalidPair(format!("pair {pair:?} out of range")));
    }
    if i.abs_diff(j) < crate::series::exclusion_radius(m) {
        return Err(Error::InvalidPair(format!("pair {pair:?} is trivial")));
    }

    let levels = (1u64 << b) - 1;
    let mut direct = 0u64;
    let mut encoded = 0u64;
    for &dim in dims {
        let row = t.row(dim).values();
        let zi = znormalize(&row[i..i + m])?;
        let zj = znormalize(&row[j..j + m])?;
        let lo = zi.iter().chain(&zj).cloned().fold(f64::INFINITY, f64::min);
        let hi = zi
            .iter()
            .chain(&zj)
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let scale = if hi > lo { levels as f64 / (hi - lo) } else { 0.0 };
        let disc = |x: f64| ((x - lo) * scale).round() as i64;
        let mut max_abs: u64 = 0;
        let mut any_negative = false;
        for (&a, &b_) in zi.iter().zip(&zj) {
            let delta = disc(a) - disc(b_);
            any_negative |= delta < 0;
            max_abs = max_abs.max(delta.unsigned_abs());
        }
        // Bits per difference cell: enough for 0..=max plus a sign bit when
        // negatives occur; an all-zero difference still costs one bit each.
        let delta_bits = if max_abs == 0 {
            1
        } else {
            u64::from(64 - max_abs.leading_zeros()) + u64::from(any_negative)
        };
        let mb = m as u64 * u64::from(b);
        direct += 2 * mb;
        encoded += mb + m as u64 * delta_bits;
    }
    Ok(MdlCost {
        direct_bits: direct,
        encoded_bits: encoded,
    })
}

/// One row of an [`MdlReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct MdlPerK {
    pub k: usize,
    pub pair: (usize, usize),
    pub dims: Vec<usize>,
    /// k-dimensional profile value of the pair (elbow-plot data).
    pub profile_value: f64,
    /// Pair cost over the subspace dims alone.
    pub encoded_bits: u64,
    /// Full description: subspace difference-encoded, remaining searched
    /// dims stored directly. This is what `chosen_k` minimizes.
    pub total_bits: u64,
}

/// MDL selection report across every k.
#[derive(Debug, Clone, PartialEq)]
pub struct MdlReport {
    pub per_k: Vec<MdlPerK>,
    /// The k whose motif compresses the pair best (ties to smaller k).
    pub chosen_k: usize,
}

fn best_unmasked(
    profile: &MultiProfile,
    k_idx: usize,
    masked: Option<&[bool]>,
) -> Option<(usize, usize)> {
    let row = &profile.profiles[k_idx];
    let idx = &profile.profile_index[k_idx];
    let mut best: Option<usize> = None;
    for j in 0..row.len() {
        if !row[j].is_finite() || idx[j] < 0 {
            continue;
        }
        if let Some(mask) = masked {
            if mask[j] || mask[idx[j] as usize] {
                continue;
            }
        }
        if best.map_or(true, |b| row[j] < row[b]) {
            best = Some(j);
        }
    }
    best.map(|j| (j, idx[j] as usize))
}

fn mdl_entry(
    t: &MultiTimeSeries,
    profile: &MultiProfile,
    k: usize,
    pair: (usize, usize),
    b: u32,
) -> Result<MdlPerK> {
    let sub = subspace_ranked(
        t,
        profile.m,
        pair.0,
        pair.1,
        k,
        &profile.active_dims,
        profile.include_count,
    )?;
    let cost = mdl_bits(t, profile.m, pair, &sub.dims, b)?;
    let spare = (profile.active_dims.len() - k) as u64;
    let total = cost.encoded_bits + spare * 2 * profile.m as u64 * u64::from(b);
    Ok(MdlPerK {
        k,
        pair: (pair.0.min(pair.1), pair.0.max(pair.1)),
        dims: sub.dims,
        profile_value: profile.profiles[k - 1][pair.0],
        encoded_bits: cost.encoded_bits,
        total_bits: total,
    })
}

/// For each k, take the k-dimensional motif pair and its subspace, and score
/// it by description length; the chosen k is the cheapest one.
///
/// On structureless input the report is still produced; the chosen k is then
/// meaningless.
pub fn select_natural_k(t: &MultiTimeSeries, profile: &MultiProfile, b: u32) -> Result<MdlReport> {
    let mut per_k = Vec::new();
    for k in profile.include_count.max(1)..=profile.dims() {
        let Some(pair) = best_unmasked(profile, k - 1, None) else {
            continue;
        };
        per_k.push(mdl_entry(t, profile, k, pair, b)?);
    }
    if per_k.is_empty() {
        return Err(Error::InvalidWindow(
            "profile has no admissible motif at any k".into(),
        ));
    }
    let chosen_k = per_k
        .iter()
        .min_by(|a, b| a.total_bits.cmp(&b.total_bits).then(a.k.cmp(&b.k)))
        .map(|e| e.k)
        .unwrap();
    Ok(MdlReport { per_k, chosen_k })
}

/// Iterative top-K subdimensional motifs: each round emits the minimum-bit
/// k-dimensional motif, then masks the exclusion zones of both members
/// across every k row. Runs for at most `iterations` rounds.
pub fn iterative_mdl_motifs(
    t: &MultiTimeSeries,
    m: usize,
    iterations: usize,
    b: u32,
) -> Result<Vec<MotifResult>> {
    let profile = mstamp(t, m, &MstampOptions::default())?;
    let mut masked = vec![false; profile.len()];
    let mut out = Vec::new();
    for round in 0..iterations {
        let mut best: Option<MdlPerK> = None;
        for k in 1..=profile.dims() {
            let Some(pair) = best_unmasked(&profile, k - 1, Some(&masked)) else {
                continue;
            };
            let entry = mdl_entry(t, &profile, k, pair, b)?;
            let better = best.as_ref().map_or(true, |cur| {
                entry.total_bits < cur.total_bits
                    || (entry.total_bits == cur.total_bits && entry.k < cur.k)
            });
            if better {
                best = Some(entry);
            }
        }
        let Some(winner) = best else { break };
        mask_zone(&mut masked, winner.pair.0, profile.exclusion_radius);
        mask_zone(&mut masked, winner.pair.1, profile.exclusion_radius);
        out.push(MotifResult {
            pair: winner.pair,
            distance: winner.profile_value,
            k: winner.k,
            dims: winner.dims,
            rank: round,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::stomp;
    use crate::series::exclusion_radius;
    use crate::synth::{burst_pattern, planted_walk, planted_walk_multi, random_walk};

    #[test]
    fn planted_pair_extracted_first() {
        let pat = burst_pattern(30, 66.0);
        let (t, _) = planted_walk(21, 500, &pat, &[150, 350]).unwrap();
        let mp = stomp(&t, 30).unwrap();
        let motifs = extract_motifs(&mp, &t, 2).unwrap();
        assert!(motifs[0].pair.0.abs_diff(150) <= 15, "{:?}", motifs[0].pair);
        assert!(motifs[0].pair.1.abs_diff(350) <= 15, "{:?}", motifs[0].pair);
        assert_eq!(motifs[0].rank, 0);
        // Count = 1 returns exactly the global minimum pair.
        let one = extract_motifs(&mp, &t, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].pair, motifs[0].pair);
        assert!(extract_motifs(&mp, &t, 0).is_err());
    }

    #[test]
    fn motif_distances_reverify() {
        let t = random_walk(8, 400);
        let m = 24;
        let mp = stomp(&t, m).unwrap();
        let motifs = extract_motifs(&mp, &t, 3).unwrap();
        for mo in &motifs {
            assert!(mo.pair.1 - mo.pair.0 >= exclusion_radius(m));
            let zi = znormalize(t.window(mo.pair.0, m)).unwrap();
            let zj = znormalize(t.window(mo.pair.1, m)).unwrap();
            let d: f64 = zi
                .iter()
                .zip(&zj)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!((d - mo.distance).abs() <= 1e-6);
        }
    }

    #[test]
    fn top_k_matches_masked_pair_enumeration() {
        let t = random_walk(99, 300);
        let m = 16;
        let mp = stomp(&t, m).unwrap();
        let got = extract_motifs(&mp, &t, 3).unwrap();

        // Oracle: full pair-distance matrix, iteratively take the best pair
        // with both members unmasked, then mask both zones.
        let count = t.len() - m + 1;
        let radius = exclusion_radius(m);
        let z: Vec<Vec<f64>> = (0..count)
            .map(|i| znormalize(t.window(i, m)).unwrap())
            .collect();
        let dist = |a: usize, b: usize| -> f64 {
            z[a].iter()
                .zip(&z[b])
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        };
        let mut masked = vec![false; count];
        let mut want = Vec::new();
        for _ in 0..3 {
            let mut best: Option<(usize, usize)> = None;
            for a in 0..count {
                for bidx in (a + radius)..count {
                    if masked[a] || masked[bidx] {
                        continue;
                    }
                    if best.map_or(true, |(x, y)| dist(a, bidx) < dist(x, y)) {
                        best = Some((a, bidx));
                    }
                }
            }
            let Some((a, b)) = best else { break };
            mask_zone(&mut masked, a, radius);
            mask_zone(&mut masked, b, radius);
            want.push((a, b));
        }
        let got_pairs: Vec<(usize, usize)> = got.iter().map(|m| m.pair).collect();
        assert_eq!(got_pairs, want);
    }

    #[test]
    fn masked_reextraction_never_repeats() {
        let t = random_walk(4, 400);
        let mp = stomp(&t, 20).unwrap();
        let motifs = extract_motifs(&mp, &t, 5).unwrap();
        let radius = exclusion_radius(20);
        for (a, ma) in motifs.iter().enumerate() {
            for mb in motifs.iter().skip(a + 1) {
                for &x in &[ma.pair.0, ma.pair.1] {
                    for &y in &[mb.pair.0, mb.pair.1] {
                        assert!(x.abs_diff(y) >= radius, "{x} vs {y} overlap");
                    }
                }
            }
        }
    }

    #[test]
    fn discord_finds_planted_anomaly() {
        // Periodic signal with one out-of-family spike.
        let n = 600;
        let mut values: Vec<f64> = (0..n)
            .map(|i| (i as f64 * std::f64::consts::TAU / 40.0).sin() * 4.0)
            .collect();
        for (k, v) in values.iter_mut().enumerate().skip(300).take(25) {
            *v += ((k - 300) as f64 * 0.9).sin() * 9.0;
        }
        let t = TimeSeries::new(values).unwrap();
        let mp = stomp(&t, 40).unwrap();
        let discords = extract_discords(&mp, 1).unwrap();
        assert!(
            (280..=330).contains(&discords[0].position),
            "discord at {}",
            discords[0].position
        );
    }

    #[test]
    fn discord_tie_and_truncation() {
        let t = TimeSeries::new(vec![0.0; 40]).unwrap();
        let mp = stomp(&t, 8).unwrap();
        // All-equal profile: the first admissible index wins the tie.
        let discords = extract_discords(&mp, 1).unwrap();
        assert_eq!(discords[0].position, 0);
        // Asking for more than fits truncates without error.
        let many = extract_discords(&mp, 100).unwrap();
        assert!(many.len() < 100);
        assert!(extract_discords(&mp, 0).is_err());
    }

    #[test]
    fn discords_skip_sentinels() {
        let t = random_walk(2, 300);
        let partial = crate::profile::stamp(
            &t,
            20,
            &crate::profile::StampOptions {
                budget: crate::profile::Budget::Rows(3),
                order: crate::profile::Order::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        for d in extract_discords(&partial, 5).unwrap() {
            assert!(d.distance.is_finite());
        }
    }

    #[test]
    fn constrained_reduction_to_single_dim() {
        let rows: Vec<TimeSeries> = (0..3).map(|i| random_walk(50 + i, 300)).collect();
        let t = MultiTimeSeries::new(rows).unwrap();
        let mp = constrained_mstamp(&t, 20, &[], &[0, 2]).unwrap();
        let single = stomp(t.row(1), 20).unwrap();
        assert_eq!(mp.active_dims, vec![1]);
        for j in 0..single.len() {
            assert!((mp.profiles[0][j] - single.profile[j]).abs() <= 1e-9);
        }
    }

    #[test]
    fn constrained_include_recovers_planted_dims() {
        let pat = burst_pattern(25, 55.0);
        let (t, _) = planted_walk_multi(31, 500, 4, &pat, &[120, 330], &[1, 3]).unwrap();
        let mp = constrained_mstamp(&t, 25, &[1, 3], &[]).unwrap();
        assert_eq!(mp.include_count, 2);
        // Rows below |include| are unavailable.
        assert!(mp.profiles[0].iter().all(|p| p.is_infinite()));
        let j = mp.min_position(2).unwrap();
        let nb = mp.profile_index[1][j] as usize;
        let mut pair = [j, nb];
        pair.sort_unstable();
        assert!(pair[0].abs_diff(120) <= 13 && pair[1].abs_diff(330) <= 13, "{pair:?}");
    }

    #[test]
    fn constrained_rejects_overlap() {
        let t = MultiTimeSeries::new((0..3).map(|i| random_walk(i, 100)).collect()).unwrap();
        assert!(constrained_mstamp(&t, 10, &[0, 1], &[1]).is_err());
        assert!(constrained_mstamp(&t, 10, &[], &[0, 1, 2]).is_err());
    }

    #[test]
    fn mdl_worked_example() {
        // Two length-10 windows whose z-normalized, jointly min-max
        // discretized 4-bit codes differ by 1 in exactly three cells.
        let mut values = vec![1.0, 2.0, 0.0, 12.0, 4.0, 5.0, 2.0, 1.0, 10.0, 15.0];
        values.extend([1.0, 2.0, 0.0, 11.0, 4.0, 5.0, 1.0, 0.0, 10.0, 15.0]);
        let t = MultiTimeSeries::from_vecs(vec![values]).unwrap();
        let cost = mdl_bits(&t, 10, (0, 10), &[0], 4).unwrap();
        assert_eq!(cost.direct_bits, 80);
        assert_eq!(cost.encoded_bits, 50);
    }

    #[test]
    fn mdl_identical_windows() {
        let pat = burst_pattern(16, 4.0);
        let mut values = pat.clone();
        values.extend(&pat);
        let t = MultiTimeSeries::from_vecs(vec![values]).unwrap();
        let cost = mdl_bits(&t, 16, (0, 16), &[0], 4).unwrap();
        assert_eq!(cost.encoded_bits, 16 * 4 + 16);
    }

    #[test]
    fn mdl_random_pair_costs_more() {
        let pat = burst_pattern(20, 44.0);
        let (t, _) = planted_walk(61, 400, &pat, &[50, 200]).unwrap();
        let mt = MultiTimeSeries::new(vec![t]).unwrap();
        let planted = mdl_bits(&mt, 20, (50, 200), &[0], 4).unwrap();
        let random = mdl_bits(&mt, 20, (120, 300), &[0], 4).unwrap();
        assert!(random.encoded_bits >= planted.encoded_bits);
    }

    #[test]
    fn mdl_symmetric_and_affine_invariant() {
        let t = MultiTimeSeries::new(vec![random_walk(7, 200)]).unwrap();
        let a = mdl_bits(&t, 16, (10, 100), &[0], 4).unwrap();
        let b = mdl_bits(&t, 16, (100, 10), &[0], 4).unwrap();
        assert_eq!(a, b);
        let scaled = MultiTimeSeries::from_vecs(vec![t
            .row(0)
            .values()
            .iter()
            .map(|v| 2.5 * v - 3.0)
            .collect()])
        .unwrap();
        let c = mdl_bits(&scaled, 16, (10, 100), &[0], 4).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn mdl_rejects_bad_arguments() {
        let t = MultiTimeSeries::new(vec![random_walk(0, 100)]).unwrap();
        assert!(mdl_bits(&t, 16, (0, 50), &[0], 1).is_err());
        assert!(mdl_bits(&t, 16, (0, 3), &[0], 4).is_err());
        assert!(mdl_bits(&t, 16, (0, 50), &[1], 4).is_err());
    }

    #[test]
    fn select_k_single_dim() {
        let t = MultiTimeSeries::new(vec![random_walk(5, 300)]).unwrap();
        let mp = mstamp(&t, 20, &MstampOptions::default()).unwrap();
        let report = select_natural_k(&t, &mp, 4).unwrap();
        assert_eq!(report.chosen_k, 1);
    }

    #[test]
    fn select_k_finds_planted_dims() {
        let pat = burst_pattern(40, 88.0);
        let (t, _) = planted_walk_multi(133, 2000, 6, &pat, &[400, 1300], &[0, 1]).unwrap();
        let mp = mstamp(&t, 40, &MstampOptions::default()).unwrap();
        let report = select_natural_k(&t, &mp, 4).unwrap();
        assert_eq!(report.chosen_k, 2, "report: {:?}", report.per_k);
        let entry = report.per_k.iter().find(|e| e.k == 2).unwrap();
        let mut dims = entry.dims.clone();
        dims.sort_unstable();
        assert_eq!(dims, vec![0, 1]);
    }

    #[test]
    fn select_k_total_on_noise() {
        let t = MultiTimeSeries::new((0..4).map(|i| random_walk(900 + i, 400)).collect()).unwrap();
        let mp = mstamp(&t, 24, &MstampOptions::default()).unwrap();
        let report = select_natural_k(&t, &mp, 4).unwrap();
        assert_eq!(report.per_k.len(), 4);
    }

    /// Strong 3-dim motif plus a weaker (but tight) 2-dim motif elsewhere.
    /// The two sites carry unrelated patterns so they cannot cross-match.
    fn two_motif_fixture() -> (MultiTimeSeries, [usize; 2], [usize; 2]) {
        let n = 700;
        let m = 30;
        let pat_a = burst_pattern(m, 16.0);
        let pat_b: Vec<f64> = (0..m)
            .map(|i| {
                let t = i as f64 / m as f64;
                16.0 * (std::f64::consts::PI * t).sin()
                    * (std::f64::consts::TAU * 1.5 * t + 0.9).cos()
            })
            .collect();
        let mut rows: Vec<Vec<f64>> = (0..3)
            .map(|i| random_walk(400 + i as u64, n).values().to_vec())
            .collect();
        // Spliced-in copies: the exact repeats make the argmin sharp.
        let set = |row: &mut Vec<f64>, at: usize, pat: &[f64], eps_seed: Option<u64>| {
            let noise = eps_seed.map(|s| random_walk(s, m));
            for (k, &v) in pat.iter().enumerate() {
                row[at + k] = v + noise.as_ref().map_or(0.0, |w| 0.35 * w.values()[k]);
            }
        };
        // Exact 3-dim pair at (100, 250).
        for dim in 0..3 {
            set(&mut rows[dim], 100, &pat_a, None);
            set(&mut rows[dim], 250, &pat_a, None);
        }
        // Slightly perturbed 2-dim pair at (420, 580) in dims {1, 2}.
        for dim in [1usize, 2] {
            set(&mut rows[dim], 420, &pat_b, None);
            set(&mut rows[dim], 580, &pat_b, Some(777 + dim as u64));
        }
        (
            MultiTimeSeries::from_vecs(rows).unwrap(),
            [100, 250],
            [420, 580],
        )
    }

    #[test]
    fn iterative_mdl_peels_motifs_in_order() {
        let (t, first, second) = two_motif_fixture();
        let motifs = iterative_mdl_motifs(&t, 30, 2, 4).unwrap();
        assert_eq!(motifs.len(), 2);
        assert_eq!(motifs[0].k, 3, "{motifs:?}");
        assert!(motifs[0].pair.0.abs_diff(first[0]) <= 15, "{motifs:?}");
        assert!(motifs[0].pair.1.abs_diff(first[1]) <= 15, "{motifs:?}");
        assert_eq!(motifs[1].k, 2, "{motifs:?}");
        assert!(motifs[1].pair.0.abs_diff(second[0]) <= 15, "{motifs:?}");
        assert!(motifs[1].pair.1.abs_diff(second[1]) <= 15, "{motifs:?}");

        // One iteration reproduces the plain MDL winner.
        let mp = mstamp(&t, 30, &MstampOptions::default()).unwrap();
        let report = select_natural_k(&t, &mp, 4).unwrap();
        let one = iterative_mdl_motifs(&t, 30, 1, 4).unwrap();
        assert_eq!(one[0].k, report.chosen_k);

        // Emitted pairs never overlap under the masking rule.
        let radius = exclusion_radius(30);
        for &x in &[motifs[0].pair.0, motifs[0].pair.1] {
            for &y in &[motifs[1].pair.0, motifs[1].pair.1] {
                assert!(x.abs_diff(y) >= radius);
            }
        }
    }
}
