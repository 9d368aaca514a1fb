//! Data ingestion, serialization, and converters.
//!
//! Series travel as CSV (one column per dimension, optional header) or as the
//! compact `tsbin` container; profiles, findings, and dictionaries serialize
//! to JSON documents carrying a provenance digest of their input.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::{Read, Write};
use std::path::Path;

use crate::discovery::{DiscordResult, MotifResult};
use crate::error::{Error, Result};
use crate::multi::MultiProfile;
use crate::profile::MatrixProfile;
use crate::sdts::{BooleanAnnotation, Shape, ShapeDictionary};
use crate::series::{MultiTimeSeries, TimeSeries};

/// `tsbin` container magic.
const TSBIN_MAGIC: &[u8; 4] = b"MPTS";
const TSBIN_VERSION: u8 = 1;

/// On-disk series formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFormat {
    Csv,
    TsBin,
}

impl SeriesFormat {
    /// Infer from a file extension; defaults to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsbin") | Some("bin") => SeriesFormat::TsBin,
            _ => SeriesFormat::Csv,
        }
    }
}

/// SHA-256 of a byte buffer, lowercase hex. Stored as provenance in every
/// output document so stale-profile misuse is detectable.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of a file's raw contents.
pub fn digest_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

/// Load a series from `path`, sniffing the format from the extension.
pub fn load_series(path: &Path) -> Result<MultiTimeSeries> {
    load_series_as(path, SeriesFormat::from_path(path))
}

pub fn load_series_as(path: &Path, format: SeriesFormat) -> Result<MultiTimeSeries> {
    match format {
        SeriesFormat::Csv => read_csv(&std::fs::File::open(path)?),
        SeriesFormat::TsBin => read_tsbin(&mut std::fs::File::open(path)?),
    }
}

pub fn save_series(path: &Path, t: &MultiTimeSeries) -> Result<()> {
    save_series_as(path, t, SeriesFormat::from_path(path))
}

pub fn save_series_as(path: &Path, t: &MultiTimeSeries, format: SeriesFormat) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    match format {
        SeriesFormat::Csv => write_csv(&mut file, t),
        SeriesFormat::TsBin => write_tsbin(&mut file, t),
    }
}

/// CSV: one row per time step, one column per dimension. A first row that
/// does not parse as numbers is treated as a header.
pub fn read_csv(reader: impl Read) -> Result<MultiTimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first_data_line = true;
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e
                .position()
                .map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let mut parsed = Vec::with_capacity(record.len());
        let mut failed = false;
        for field in record.iter() {
            match field.parse::<f64>() {
                Ok(v) => parsed.push(v),
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            if first_data_line {
                // Optional header row.
                first_data_line = false;
                continue;
            }
            return Err(Error::Parse {
                line,
                message: format!("cannot parse record {record:?} as numbers"),
            });
        }
        first_data_line = false;
        if let Some(pos) = parsed.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse {
                line,
                message: format!("non-finite value {} in column {pos}", parsed[pos]),
            });
        }
        if rows.is_empty() {
            rows = vec![Vec::new(); parsed.len()];
        } else if parsed.len() != rows.len() {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected {} columns, found {}",
                    rows.len(),
                    parsed.len()
                ),
            });
        }
        for (row, v) in rows.iter_mut().zip(parsed) {
            row.push(v);
        }
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no data rows".into(),
        });
    }
    MultiTimeSeries::from_vecs(rows)
}

pub fn write_csv(writer: impl Write, t: &MultiTimeSeries) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for i in 0..t.len() {
        let record: Vec<String> = (0..t.dims())
            .map(|d| format!("{:?}", t.row(d).values()[i]))
            .collect();
        w.write_record(&record)
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// `tsbin`: magic "MPTS", u8 version, u32 LE dimension count, u64 LE length,
/// then `d * n` little-endian f64 values, one dimension row after another.
pub fn read_tsbin(reader: &mut impl Read) -> Result<MultiTimeSeries> {
    let mut header = [0u8; 4 + 1 + 4 + 8];
    reader.read_exact(&mut header)?;
    if &header[..4] != TSBIN_MAGIC {
        return Err(Error::Format("bad magic, not a tsbin file".into()));
    }
    if header[4] != TSBIN_VERSION {
        return Err(Error::Format(format!("unsupported version {}", header[4])));
    }
    let d = u32::from_le_bytes(header[5..9].try_into().unwrap()) as usize;
    let n = u64::from_le_bytes(header[9..17].try_into().unwrap()) as usize;
    if d == 0 || n == 0 {
        return Err(Error::Format(format!("degenerate shape {d}x{n}")));
    }
    let mut payload = vec![0u8; d * n * 8];
    reader.read_exact(&mut payload)?;
    let mut rows = Vec::with_capacity(d);
    for dim in 0..d {
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            let off = (dim * n + i) * 8;
            let v = f64::from_le_bytes(payload[off..off + 8].try_into().unwrap());
            if !v.is_finite() {
                return Err(Error::Format(format!(
                    "non-finite value at byte offset {}",
                    17 + off
                )));
            }
            row.push(v);
        }
        rows.push(row);
    }
    MultiTimeSeries::from_vecs(rows)
}

pub fn write_tsbin(writer: &mut impl Write, t: &MultiTimeSeries) -> Result<()> {
    writer.write_all(TSBIN_MAGIC)?;
    writer.write_all(&[TSBIN_VERSION])?;
    writer.write_all(&(t.dims() as u32).to_le_bytes())?;
    writer.write_all(&(t.len() as u64).to_le_bytes())?;
    for d in 0..t.dims() {
        for &v in t.row(d).values() {
            writer.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Annotation files: CSV of 0/1, one bit per line.
pub fn load_annotation(path: &Path) -> Result<BooleanAnnotation> {
    let text = std::fs::read_to_string(path)?;
    let mut bits = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed {
            "0" => bits.push(false),
            "1" => bits.push(true),
            other => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected 0 or 1, found {other:?}"),
                })
            }
        }
    }
    Ok(BooleanAnnotation::new(bits))
}

pub fn save_annotation(path: &Path, b: &BooleanAnnotation) -> Result<()> {
    let mut out = String::with_capacity(2 * b.len());
    for &bit in b.bits() {
        out.push(if bit { '1' } else { '0' });
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Infinity-tolerant matrix encoding: JSON has no Inf, so sentinel entries
/// serialize as `null` and round-trip back to `f64::INFINITY`.
mod inf_matrix {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<f64>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let wrapped: Vec<Vec<Option<f64>>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| if v.is_finite() { Some(v) } else { None })
                    .collect()
            })
            .collect();
        serde::Serialize::serialize(&wrapped, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<f64>>, D::Error> {
        let wrapped: Vec<Vec<Option<f64>>> = Deserialize::deserialize(d)?;
        Ok(wrapped
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.unwrap_or(f64::INFINITY))
                    .collect()
            })
            .collect())
    }
}

/// Where a result came from: digest of the input file, the seed (if any) and
/// a creation timestamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub seed: Option<u64>,
    pub created_unix: u64,
}

impl Provenance {
    pub fn new(input_sha256: String, seed: Option<u64>) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            input_sha256,
            seed,
            created_unix,
        }
    }
}

/// Serialized matrix profile (single- or multidimensional; single-dimensional
/// profiles carry one row).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub schema: u32,
    pub m: usize,
    pub exclusion_radius: usize,
    pub algorithm: String,
    pub fraction_done: f64,
    #[serde(with = "inf_matrix")]
    pub profile: Vec<Vec<f64>>,
    pub profile_index: Vec<Vec<i64>>,
    pub provenance: Provenance,
}

impl ProfileDocument {
    pub fn from_single(mp: &MatrixProfile, algorithm: &str, provenance: Provenance) -> Self {
        Self {
            schema: 1,
            m: mp.m,
            exclusion_radius: mp.exclusion_radius,
            algorithm: algorithm.to_string(),
            fraction_done: mp.fraction_done,
            profile: vec![mp.profile.clone()],
            profile_index: vec![mp.profile_index.clone()],
            provenance,
        }
    }

    pub fn from_multi(mp: &MultiProfile, algorithm: &str, provenance: Provenance) -> Self {
        Self {
            schema: 1,
            m: mp.m,
            exclusion_radius: mp.exclusion_radius,
            algorithm: algorithm.to_string(),
            fraction_done: mp.fraction_done,
            profile: mp.profiles.clone(),
            profile_index: mp.profile_index.clone(),
            provenance,
        }
    }

    /// Reconstruct a single-dimensional profile (first row).
    pub fn to_single(&self) -> Result<MatrixProfile> {
        if self.profile.len() != 1 {
            return Err(Error::Format(format!(
                "expected a single-dimensional profile, found {} rows",
                self.profile.len()
            )));
        }
        Ok(MatrixProfile {
            m: self.m,
            exclusion_radius: self.exclusion_radius,
            profile: self.profile[0].clone(),
            profile_index: self.profile_index[0].clone(),
            fraction_done: self.fraction_done,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let doc: Self = serde_json::from_slice(&std::fs::read(path)?)?;
        if doc.schema != 1 {
            return Err(Error::Format(format!("unsupported schema {}", doc.schema)));
        }
        Ok(doc)
    }
}

/// JSON report for motif/discord findings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FindingsDocument {
    pub schema: u32,
    pub m: usize,
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub motifs: Vec<MotifEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discords: Vec<DiscordEntry>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifEntry {
    pub rank: usize,
    pub position: usize,
    pub neighbor: usize,
    pub distance: f64,
    pub k: usize,
    pub dims: Vec<usize>,
}

impl From<&MotifResult> for MotifEntry {
    fn from(m: &MotifResult) -> Self {
        Self {
            rank: m.rank,
            position: m.pair.0,
            neighbor: m.pair.1,
            distance: m.distance,
            k: m.k,
            dims: m.dims.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscordEntry {
    pub rank: usize,
    pub position: usize,
    pub distance: f64,
}

impl DiscordEntry {
    pub fn from_results(discords: &[DiscordResult]) -> Vec<Self> {
        discords
            .iter()
            .enumerate()
            .map(|(rank, d)| Self {
                rank,
                position: d.position,
                distance: d.distance,
            })
            .collect()
    }
}

impl FindingsDocument {
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }
}

/// Dictionary document: `{beta, shapes: [{values, threshold, m}]}`.
/// `serde_json` emits shortest-round-trip decimals, so doubles survive
/// save/load exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DictionaryDocument {
    pub beta: f64,
    pub shapes: Vec<ShapeEntry>,
    #[serde(default)]
    pub m_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeEntry {
    pub values: Vec<f64>,
    pub threshold: f64,
    pub m: usize,
}

impl DictionaryDocument {
    pub fn from_dictionary(dict: &ShapeDictionary) -> Self {
        Self {
            beta: dict.beta,
            shapes: dict
                .shapes
                .iter()
                .map(|s| ShapeEntry {
                    values: s.values.clone(),
                    threshold: s.threshold,
                    m: s.len(),
                })
                .collect(),
            m_set: dict.m_set.clone(),
        }
    }

    pub fn to_dictionary(&self) -> Result<ShapeDictionary> {
        for (i, s) in self.shapes.iter().enumerate() {
            if s.m != s.values.len() {
                return Err(Error::Format(format!(
                    "shape {i}: declared m={} but {} values",
                    s.m,
                    s.values.len()
                )));
            }
        }
        Ok(ShapeDictionary {
            shapes: self
                .shapes
                .iter()
                .map(|s| Shape {
                    values: s.values.clone(),
                    threshold: s.threshold,
                })
                .collect(),
            beta: self.beta,
            m_set: self.m_set.clone(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }
}

/// DNA string to cumulative time series: A +2, G +1, C -1, T -2, starting at
/// zero. Case-insensitive; in lenient mode unknown symbols are skipped.
pub fn dna_to_ts(sequence: &str, strict: bool) -> Result<TimeSeries> {
    let mut values = Vec::with_capacity(sequence.len() + 1);
    values.push(0.0);
    let mut level = 0.0;
    for (i, ch) in sequence.chars().enumerate() {
        let step = match ch.to_ascii_uppercase() {
            'A' => 2.0,
            'G' => 1.0,
            'C' => -1.0,
            'T' => -2.0,
            _ if strict => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("invalid symbol {ch:?} at offset {i}"),
                })
            }
            _ => continue,
        };
        level += step;
        values.push(level);
    }
    TimeSeries::new(values)
}

/// Mean of each consecutive `factor`-sized block; a short trailing block is
/// averaged too. Output length is `ceil(n / factor)`.
pub fn downsample(t: &TimeSeries, factor: usize) -> Result<TimeSeries> {
    if factor < 1 {
        return Err(Error::InvalidWindow("factor must be >= 1".into()));
    }
    if factor == 1 {
        return Ok(t.clone());
    }
    let values: Vec<f64> = t
        .values()
        .chunks(factor)
        .map(|chunk| chunk.iter().sum::<f64>() / chunk.len() as f64)
        .collect();
    TimeSeries::new(values)
}
