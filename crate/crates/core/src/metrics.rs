//! Hub-side accounting: unique/duplicate trackers, per-node counters, run
//! reports, aggregation across repetitions and rule-of-three scaling.

use std::collections::{BTreeMap, HashMap};
use std::io;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{Algorithm, TrackerKind};
use crate::types::{MessageKey, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recorded {
    Unique,
    Duplicate,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TrackerError {
    #[error("dedup tracker out of memory budget: {limit} entries in use")]
    EntryLimit { limit: usize },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("source duration must be positive, got {0} minutes")]
    NonPositiveDuration(f64),
    #[error("cannot aggregate an empty set of reports")]
    EmptyReports,
    #[error("reports mix {0}")]
    Heterogeneous(&'static str),
}

/// Distinguishes first sightings of a message from repeats.
pub trait DedupTracker {
    fn record(&mut self, key: MessageKey) -> Result<Recorded, TrackerError>;
    fn unique_count(&self) -> u64;
    fn duplicate_count(&self) -> u64;
    fn clear(&mut self);

    fn total_count(&self) -> u64 {
        self.unique_count() + self.duplicate_count()
    }
}

/// Map from message id to the number of times it was seen.
#[derive(Clone, Debug, Default)]
pub struct HashMapTracker {
    counts: HashMap<MessageKey, u32>,
    limit: Option<usize>,
    unique: u64,
    duplicate: u64,
}

impl HashMapTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tracker that refuses new ids once `limit` entries exist.
    pub fn with_limit(limit: usize) -> Self {
        HashMapTracker {
            limit: Some(limit),
            ..Self::default()
        }
    }

    pub fn entries(&self) -> usize {
        self.counts.len()
    }

    pub fn count_of(&self, key: MessageKey) -> u32 {
        self.counts.get(&key).copied().unwrap_or(0)
    }
}

impl DedupTracker for HashMapTracker {
    fn record(&mut self, key: MessageKey) -> Result<Recorded, TrackerError> {
        if let Some(count) = self.counts.get_mut(&key) {
            *count += 1;
            self.duplicate += 1;
            return Ok(Recorded::Duplicate);
        }
        if let Some(limit) = self.limit {
            if self.counts.len() >= limit {
                return Err(TrackerError::EntryLimit { limit });
            }
        }
        self.counts.insert(key, 1);
        self.unique += 1;
        Ok(Recorded::Unique)
    }

    fn unique_count(&self) -> u64 {
        self.unique
    }

    fn duplicate_count(&self) -> u64 {
        self.duplicate
    }

    fn clear(&mut self) {
        self.counts.clear();
        self.unique = 0;
        self.duplicate = 0;
    }
}

/// Disjoint, maximal, sorted intervals of `u32` sequence numbers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalSet {
    // lo -> hi, inclusive
    ranges: BTreeMap<u32, u32>,
}

impl IntervalSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, seq: u32) -> bool {
        self.ranges
            .range(..=seq)
            .next_back()
            .is_some_and(|(_, &hi)| hi >= seq)
    }

    /// Adds `seq`, coalescing with neighbours. Returns `false` if already present.
    pub fn insert(&mut self, seq: u32) -> bool {
        let left = self
            .ranges
            .range(..=seq)
            .next_back()
            .map(|(&lo, &hi)| (lo, hi));
        if let Some((_, hi)) = left {
            if hi >= seq {
                return false;
            }
        }
        let joins_left = left
            .filter(|&(_, hi)| hi.checked_add(1) == Some(seq))
            .map(|(lo, _)| lo);
        let right_lo = seq.checked_add(1);
        let joins_right = right_lo.and_then(|lo| self.ranges.get(&lo).copied());

        match (joins_left, joins_right) {
            (Some(lo), Some(hi)) => {
                self.ranges.remove(&(seq + 1));
                self.ranges.insert(lo, hi);
            }
            (Some(lo), None) => {
                self.ranges.insert(lo, seq);
            }
            (None, Some(hi)) => {
                self.ranges.remove(&(seq + 1));
                self.ranges.insert(seq, hi);
            }
            (None, None) => {
                self.ranges.insert(seq, seq);
            }
        }
        true
    }

    pub fn len_intervals(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn intervals(&self) -> impl Iterator<Item = RangeInclusive<u32>> + '_ {
        self.ranges.iter().map(|(&lo, &hi)| lo..=hi)
    }

    /// Missing runs strictly between the first and last received number.
    pub fn gaps(&self) -> impl Iterator<Item = RangeInclusive<u32>> + '_ {
        self.ranges
            .iter()
            .zip(self.ranges.iter().skip(1))
            .map(|((_, &hi), (&next_lo, _))| hi + 1..=next_lo - 1)
    }
}

/// Per-origin interval sets. Memory grows with gaps, not with messages.
#[derive(Clone, Debug, Default)]
pub struct IntervalTracker {
    per_origin: BTreeMap<NodeId, IntervalSet>,
    unique: u64,
    duplicate: u64,
}

impl IntervalTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intervals_for(&self, origin: NodeId) -> Option<&IntervalSet> {
        self.per_origin.get(&origin)
    }

    pub fn origins(&self) -> impl Iterator<Item = (&NodeId, &IntervalSet)> {
        self.per_origin.iter()
    }

    /// Stored intervals across all origins.
    pub fn interval_count(&self) -> usize {
        self.per_origin
            .values()
            .map(IntervalSet::len_intervals)
            .sum()
    }
}

impl DedupTracker for IntervalTracker {
    fn record(&mut self, key: MessageKey) -> Result<Recorded, TrackerError> {
        if self
            .per_origin
            .entry(key.origin)
            .or_default()
            .insert(key.seq)
        {
            self.unique += 1;
            Ok(Recorded::Unique)
        } else {
            self.duplicate += 1;
            Ok(Recorded::Duplicate)
        }
    }

    fn unique_count(&self) -> u64 {
        self.unique
    }

    fn duplicate_count(&self) -> u64 {
        self.duplicate
    }

    fn clear(&mut self) {
        self.per_origin.clear();
        self.unique = 0;
        self.duplicate = 0;
    }
}

/// Tracker owned by the hub in a simulation run.
#[derive(Clone, Debug)]
pub enum HubTracker {
    HashMap(HashMapTracker),
    Interval(IntervalTracker),
}

impl HubTracker {
    pub fn new(kind: TrackerKind, entry_limit: Option<usize>) -> Self {
        match kind {
            TrackerKind::HashMap => HubTracker::HashMap(match entry_limit {
                Some(limit) => HashMapTracker::with_limit(limit),
                None => HashMapTracker::new(),
            }),
            TrackerKind::Interval => HubTracker::Interval(IntervalTracker::new()),
        }
    }

    fn inner(&self) -> &dyn DedupTracker {
        match self {
            HubTracker::HashMap(t) => t,
            HubTracker::Interval(t) => t,
        }
    }

    fn inner_mut(&mut self) -> &mut dyn DedupTracker {
        match self {
            HubTracker::HashMap(t) => t,
            HubTracker::Interval(t) => t,
        }
    }
}

impl DedupTracker for HubTracker {
    fn record(&mut self, key: MessageKey) -> Result<Recorded, TrackerError> {
        self.inner_mut().record(key)
    }

    fn unique_count(&self) -> u64 {
        self.inner().unique_count()
    }

    fn duplicate_count(&self) -> u64 {
        self.inner().duplicate_count()
    }

    fn clear(&mut self) {
        self.inner_mut().clear()
    }
}

/// Counters a node keeps about its own activity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeStats {
    pub generated: u64,
    pub relayed: u64,
    pub received: u64,
    pub tx_dropped: u64,
    pub restarts: u64,
}

/// Outcome of one simulation run.
///
/// Field order is the serialization order for both JSON and CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub duration_ms: u64,
    pub seed: u64,
    pub unique_received: u64,
    pub duplicate_received: u64,
    pub total_received: u64,
    /// Frames put on air by all nodes.
    pub tx_total: u64,
    /// Frames delivered to a receiver.
    pub rx_total: u64,
    /// Frames on air carrying sensor data.
    pub data_tx: u64,
    /// Data frames discarded because MAM had no route.
    pub no_route_drops: u64,
    pub per_node: BTreeMap<NodeId, NodeStats>,
}

/// Column order of [`RunReport::write_csv`].
pub const REPORT_CSV_HEADER: [&str; 10] = [
    "algorithm",
    "duration_ms",
    "seed",
    "unique_received",
    "duplicate_received",
    "total_received",
    "tx_total",
    "rx_total",
    "data_tx",
    "no_route_drops",
];

impl RunReport {
    pub fn empty(algorithm: Algorithm, duration_ms: u64, seed: u64) -> Self {
        RunReport {
            algorithm,
            duration_ms,
            seed,
            unique_received: 0,
            duplicate_received: 0,
            total_received: 0,
            tx_total: 0,
            rx_total: 0,
            data_tx: 0,
            no_route_drops: 0,
            per_node: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    fn csv_fields(&self) -> [String; 10] {
        [
            self.algorithm.slug().to_string(),
            self.duration_ms.to_string(),
            self.seed.to_string(),
            self.unique_received.to_string(),
            self.duplicate_received.to_string(),
            self.total_received.to_string(),
            self.tx_total.to_string(),
            self.rx_total.to_string(),
            self.data_tx.to_string(),
            self.no_route_drops.to_string(),
        ]
    }

    /// Writes a header row followed by one row per report.
    pub fn write_csv<'a, W: io::Write>(
        out: W,
        reports: impl IntoIterator<Item = &'a RunReport>,
    ) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(REPORT_CSV_HEADER)?;
        for r in reports {
            w.write_record(r.csv_fields())?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Proportional rescaling of a count observed over `from_minutes` to
/// `to_minutes`.
pub fn scale_rule_of_three(
    count: f64,
    from_minutes: f64,
    to_minutes: f64,
) -> Result<f64, MetricsError> {
    if from_minutes.is_nan() || from_minutes <= 0.0 {
        return Err(MetricsError::NonPositiveDuration(from_minutes));
    }
    Ok(count * to_minutes / from_minutes)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (n - 1). Zero when only one value exists.
    pub stdev: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len();
        if n == 0 {
            return Summary {
                mean: 0.0,
                stdev: 0.0,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stdev = if n < 2 {
            0.0
        } else {
            let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (n - 1) as f64).sqrt()
        };
        Summary { mean, stdev }
    }
}

/// Mean and spread of every numeric report field over repeated runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub algorithm: Algorithm,
    pub duration_ms: u64,
    pub runs: usize,
    /// Set when a single run was aggregated and the stdev carries no information.
    pub single_run: bool,
    pub unique_received: Summary,
    pub duplicate_received: Summary,
    pub total_received: Summary,
    pub tx_total: Summary,
    pub rx_total: Summary,
    pub data_tx: Summary,
    pub no_route_drops: Summary,
}

pub fn aggregate(reports: &[RunReport]) -> Result<Aggregate, MetricsError> {
    let first = reports.first().ok_or(MetricsError::EmptyReports)?;
    if reports.iter().any(|r| r.algorithm != first.algorithm) {
        return Err(MetricsError::Heterogeneous("algorithms"));
    }
    if reports.iter().any(|r| r.duration_ms != first.duration_ms) {
        return Err(MetricsError::Heterogeneous("durations"));
    }
    let field = |f: fn(&RunReport) -> u64| {
        let values: Vec<f64> = reports.iter().map(|r| f(r) as f64).collect();
        Summary::of(&values)
    };
    Ok(Aggregate {
        algorithm: first.algorithm,
        duration_ms: first.duration_ms,
        runs: reports.len(),
        single_run: reports.len() == 1,
        unique_received: field(|r| r.unique_received),
        duplicate_received: field(|r| r.duplicate_received),
        total_received: field(|r| r.total_received),
        tx_total: field(|r| r.tx_total),
        rx_total: field(|r| r.rx_total),
        data_tx: field(|r| r.data_tx),
        no_route_drops: field(|r| r.no_route_drops),
    })
}
