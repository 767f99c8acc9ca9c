//! Per-epoch metrics and their comma-separated file format.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

/// Column order of the metrics file.
pub const METRICS_HEADER: [&str; 8] = [
    "epoch",
    "mean_return",
    "mean_edge_queue",
    "mean_cloud_queue",
    "empty_event_ratio",
    "overflow_event_ratio",
    "actor_loss",
    "critic_loss",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub epoch: usize,
    /// Mean undiscounted episode return.
    pub mean_return: f64,
    /// Mean post-step edge queue level, fraction of `q_max`.
    pub mean_edge_queue: f64,
    /// Mean post-step cloud queue level, fraction of `q_max`.
    pub mean_cloud_queue: f64,
    /// Cloud-steps ending exactly empty, over `K · T · episodes`.
    pub empty_event_ratio: f64,
    /// Cloud-steps ending exactly full, over `K · T · episodes`.
    pub overflow_event_ratio: f64,
    pub actor_loss: f64,
    pub critic_loss: f64,
}

impl MetricsRecord {
    /// Edge and cloud fill averaged with equal weight.
    pub fn mean_queue(&self) -> f64 {
        0.5 * (self.mean_edge_queue + self.mean_cloud_queue)
    }
}

pub fn write_metrics<W: Write>(writer: W, records: &[MetricsRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(METRICS_HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics<R: Read>(reader: R) -> csv::Result<Vec<MetricsRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.iter().ne(METRICS_HEADER) {
        return Err(csv::Error::from(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("unexpected metrics header `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        )));
    }
    r.deserialize().collect()
}

/// Column-wise mean of the last `window` records (all of them if fewer).
pub fn final_window_mean(records: &[MetricsRecord], window: usize) -> Option<MetricsRecord> {
    if records.is_empty() || window == 0 {
        return None;
    }
    let tail = &records[records.len().saturating_sub(window)..];
    let n = tail.len() as f64;
    let mean = |f: fn(&MetricsRecord) -> f64| tail.iter().map(f).sum::<f64>() / n;
    Some(MetricsRecord {
        epoch: tail[tail.len() - 1].epoch,
        mean_return: mean(|r| r.mean_return),
        mean_edge_queue: mean(|r| r.mean_edge_queue),
        mean_cloud_queue: mean(|r| r.mean_cloud_queue),
        empty_event_ratio: mean(|r| r.empty_event_ratio),
        overflow_event_ratio: mean(|r| r.overflow_event_ratio),
        actor_loss: mean(|r| r.actor_loss),
        critic_loss: mean(|r| r.critic_loss),
    })
}
