//! Reference field and model results, kept as fixtures for report formatting
//! and rescaling checks. None of these are targets for the simulator: the
//! field radio conditions and the energy-model constants behind them are not
//! available.

use crate::config::Algorithm;

/// Single indoor ESP-32 run: algorithm, minutes, unique, duplicate.
pub const INDOOR_RUNS: [(Algorithm, f64, u64, u64); 12] = [
    (Algorithm::Btmr, 15.0, 617, 90),
    (Algorithm::Mam, 15.0, 632, 106),
    (Algorithm::Btmr, 15.0, 532, 80),
    (Algorithm::Mam, 15.0, 497, 78),
    (Algorithm::Btmr, 15.0, 279, 46),
    (Algorithm::Mam, 15.0, 359, 42),
    (Algorithm::Btmr, 15.0, 495, 60),
    (Algorithm::Mam, 15.0, 745, 119),
    (Algorithm::Btmr, 30.0, 1301, 391),
    (Algorithm::Mam, 30.0, 1354, 798),
    (Algorithm::Btmr, 60.0, 1532, 142),
    (Algorithm::Mam, 60.0, 2682, 328),
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutdoorAverage {
    pub algorithm: Algorithm,
    pub minutes: f64,
    pub unique_mean: f64,
    pub unique_stdev: f64,
    pub duplicate_mean: f64,
    pub duplicate_stdev: f64,
}

const fn avg(
    algorithm: Algorithm,
    minutes: f64,
    unique_mean: f64,
    unique_stdev: f64,
    duplicate_mean: f64,
    duplicate_stdev: f64,
) -> OutdoorAverage {
    OutdoorAverage {
        algorithm,
        minutes,
        unique_mean,
        unique_stdev,
        duplicate_mean,
        duplicate_stdev,
    }
}

/// Outdoor ESP-32 runs, mean of three repetitions.
pub const OUTDOOR_AVERAGES: [OutdoorAverage; 6] = [
    avg(Algorithm::Btmr, 5.0, 477.00, 9.54, 175.67, 20.03),
    avg(Algorithm::Mam, 5.0, 484.67, 60.29, 180.33, 41.53),
    avg(Algorithm::Btmr, 10.0, 938.33, 17.62, 296.33, 126.88),
    avg(Algorithm::Mam, 10.0, 996.00, 137.98, 370.33, 60.62),
    avg(Algorithm::Btmr, 15.0, 1395.33, 14.29, 534.67, 13.61),
    avg(Algorithm::Mam, 15.0, 1458.00, 144.21, 536.67, 72.28),
];

/// Duration of the OMNET++ model runs, in minutes.
pub const MODEL_MINUTES: f64 = 3.33;

/// OMNET++ model runs: algorithm, unique, energy in joules.
pub const MODEL_RUNS: [(Algorithm, f64, f64); 2] = [
    (Algorithm::Btmr, 2992.0, 104.30),
    (Algorithm::Mam, 1498.0, 24.99),
];

/// Outdoor averages rescaled to [`MODEL_MINUTES`]: algorithm, source minutes,
/// rescaled unique count as reported.
pub const OUTDOOR_SCALED: [(Algorithm, f64, f64); 6] = [
    (Algorithm::Btmr, 5.0, 317.68),
    (Algorithm::Mam, 5.0, 322.79),
    (Algorithm::Btmr, 10.0, 312.46),
    (Algorithm::Mam, 10.0, 331.68),
    (Algorithm::Btmr, 15.0, 309.76),
    (Algorithm::Mam, 15.0, 323.67),
];

/// Mean of the rescaled outdoor values per algorithm, as reported.
pub const OUTDOOR_SCALED_MEAN: [(Algorithm, f64); 2] =
    [(Algorithm::Btmr, 313.30), (Algorithm::Mam, 326.05)];

/// Model results rescaled up to the field durations: algorithm, minutes, unique.
pub const MODEL_SCALED: [(Algorithm, f64, f64); 6] = [
    (Algorithm::Mam, 5.0, 2249.24),
    (Algorithm::Mam, 10.0, 4498.49),
    (Algorithm::Mam, 15.0, 6747.74),
    (Algorithm::Btmr, 5.0, 4492.49),
    (Algorithm::Btmr, 10.0, 8984.98),
    (Algorithm::Btmr, 15.0, 13477.47),
];

/// Accumulated unique messages of the MAM ESP-32 runs: minutes, unique.
pub const MAM_FIELD_SERIES: [(f64, f64); 3] = [(5.0, 484.0), (10.0, 996.0), (15.0, 1458.0)];
/// Same for BTM-R.
pub const BTMR_FIELD_SERIES: [(f64, f64); 3] = [(5.0, 477.0), (10.0, 938.0), (15.0, 1395.0)];
