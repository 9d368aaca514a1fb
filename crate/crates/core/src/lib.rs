//! Matrix profile toolkit for time series mining.
//!
//! The matrix profile of a series stores, for every window, the z-normalized
//! Euclidean distance to its nearest non-trivial neighbor, together with that
//! neighbor's position. On top of this one structure the crate builds motif
//! and discord discovery, constrained and MDL-guided subdimensional motif
//! search over multidimensional series, incremental profile maintenance for
//! streams, and weakly supervised shape-dictionary classifiers.
//!
//! Engines:
//! - [`profile::brute_force_profile`]: the O(n^2 m) oracle.
//! - [`profile::stamp`]: anytime and parallel; random order, interruptible.
//! - [`profile::stomp`]: ordered O(n^2) via the dot-product recurrence.
//! - [`stream::Stompi`]: O(n) per appended sample.
//! - [`multi::mstamp`]: all k-dimensional profiles of a d-dimensional series.

pub mod discovery;
pub mod error;
pub mod io;
pub mod multi;
pub mod profile;
pub mod sdts;
pub mod series;
pub mod simsearch;
pub mod stream;
pub mod synth;

pub use discovery::{
    constrained_mstamp, extract_discords, extract_motifs, iterative_mdl_motifs, mdl_bits,
    select_natural_k, DiscordResult, MdlCost, MdlPerK, MdlReport, MotifResult,
};
pub use error::{Error, Result};
pub use multi::{mstamp, subspace, MstampOptions, MultiProfile, SubspaceResult};
pub use profile::{
    brute_force_profile, elementwise_min_merge, predict_runtime, stamp, stamp_interruptible,
    stomp, Budget, MatrixProfile, Order, StampOptions,
};
pub use sdts::{
    apply_lag, f_beta, golden_section_threshold, predict, predict_with_mode, shapelet_transform,
    train, BooleanAnnotation, FlagMode, Shape, ShapeDictionary, StreamingPredictor, TrainConfig,
};
pub use series::{
    exclusion_radius, rolling_stats, znormalize, ExclusionZone, MultiTimeSeries, RollingStats,
    Subsequence, TimeSeries,
};
pub use simsearch::{dist_from_dot, mass, sliding_dot_product, DistanceProfile};
pub use stream::Stompi;
pub use synth::{
    planted_walk, planted_walk_multi, random_walk, weak_label_dataset, PlantTruth, WeakLabelConfig,
    WeakLabelData,
};
