//! Observables over opinion profiles and event streams.

use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::EventRecord;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricsError {
    EmptyInput,
    InvalidGap(f64),
    InvalidValue(f64),
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::EmptyInput => write!(f, "empty input"),
            MetricsError::InvalidGap(g) => write!(f, "gap must be positive, got {g}"),
            MetricsError::InvalidValue(v) => write!(f, "invalid value {v}"),
        }
    }
}

impl core::error::Error for MetricsError {}

/// Gap-split clustering of a 1-D opinion profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub count: usize,
    /// midpoints between adjacent clusters, one fewer than `count`
    pub boundaries: Vec<f64>,
    /// agent indices per cluster, ascending
    pub members: Vec<Vec<usize>>,
    /// per-cluster means, strictly increasing
    pub centroids: Vec<f64>,
}

pub const DEFAULT_CLUSTER_GAP: f64 = 0.01;

/// Sorts the values and opens a new cluster wherever two consecutive sorted
/// values differ by more than `gap`. Empty input is a report with zero
/// clusters, not an error.
pub fn clusters(values: &[f64], gap: f64) -> Result<ClusterReport, MetricsError> {
    if !(gap > 0.0) || gap.is_nan() {
        return Err(MetricsError::InvalidGap(gap));
    }
    for &v in values {
        if v.is_nan() {
            return Err(MetricsError::InvalidValue(v));
        }
    }

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut report = ClusterReport {
        count: 0,
        boundaries: Vec::new(),
        members: Vec::new(),
        centroids: Vec::new(),
    };
    let mut bucket: Vec<usize> = Vec::new();
    let close = |bucket: &mut Vec<usize>, report: &mut ClusterReport| {
        if bucket.is_empty() {
            return;
        }
        let sum: f64 = bucket.iter().map(|&i| values[i]).sum();
        report.centroids.push(sum / bucket.len() as f64);
        bucket.sort_unstable();
        report.members.push(core::mem::take(bucket));
        report.count += 1;
    };

    let mut prev = None;
    for &idx in &order {
        let v = values[idx];
        if let Some(p) = prev {
            if v - p > gap {
                close(&mut bucket, &mut report);
                report.boundaries.push((p + v) / 2.0);
            }
        }
        bucket.push(idx);
        prev = Some(v);
    }
    close(&mut bucket, &mut report);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// population convention: mean squared deviation
    pub variance: f64,
}

pub fn spread(values: &[f64]) -> Result<Spread, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &v in values {
        if v.is_nan() {
            return Err(MetricsError::InvalidValue(v));
        }
        min = min.min(v);
        max = max.max(v);
        sum += v;
    }
    let n = values.len() as f64;
    let mean = sum / n;
    let variance = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(Spread {
        min,
        max,
        mean,
        variance,
    })
}

/// Quiescence test: true when each of the last `window_len` events moved
/// every opinion it updated by less than `tol`. Events that updated nothing
/// count as quiet. False while fewer than `window_len` events exist.
pub fn converged(records: &[EventRecord], tol: f64, window_len: usize) -> bool {
    debug_assert!(window_len >= 1);
    debug_assert!(tol > 0.0);
    if records.len() < window_len {
        return false;
    }
    records[records.len() - window_len..].iter().all(|r| {
        (!r.updated_i || (r.x_i_post - r.x_i_pre).abs() < tol)
            && (!r.updated_j || (r.x_j_post - r.x_j_pre).abs() < tol)
    })
}
