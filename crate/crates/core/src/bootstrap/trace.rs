use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::ansatz::AngleVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Sample,
    Optimize,
}

/// One evaluation; `iter` counts within its phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub phase: Phase,
    pub iter: usize,
    pub angles: AngleVector,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trace {
    records: Vec<TraceRecord>,
    best_so_far: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceMetrics {
    pub min_loss: f64,
    /// Unbiased variance of the sample-phase losses; 0 when fewer than two.
    pub sample_variance: f64,
    pub variance_defined: bool,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, phase: Phase, angles: AngleVector, loss: f64) {
        let iter = self.records.iter().filter(|r| r.phase == phase).count();
        let best = self.best_so_far.last().map_or(loss, |&b| b.min(loss));
        self.records.push(TraceRecord { phase, iter, angles, loss });
        self.best_so_far.push(best);
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn best_so_far(&self) -> &[f64] {
        &self.best_so_far
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// First record attaining the minimum loss.
    pub fn best(&self) -> Option<&TraceRecord> {
        self.records
            .iter()
            .fold(None, |acc: Option<&TraceRecord>, r| match acc {
                Some(b) if b.loss <= r.loss => Some(b),
                _ => Some(r),
            })
    }

    pub fn losses(&self, phase: Phase) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().filter(move |r| r.phase == phase).map(|r| r.loss)
    }

    /// JSON lines, one `{phase, iter, angles, loss}` object per evaluation.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r).map_err(std::io::Error::other)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub fn trace_metrics(t: &Trace) -> Result<TraceMetrics> {
    if t.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let min_loss = t.records.iter().map(|r| r.loss).fold(f64::INFINITY, f64::min);
    let sample: Vec<f64> = t.losses(Phase::Sample).collect();
    let (sample_variance, variance_defined) = if sample.len() < 2 {
        (0.0, false)
    } else {
        let mean = sample.iter().sum::<f64>() / sample.len() as f64;
        let ss: f64 = sample.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (sample.len() - 1) as f64, true)
    };
    Ok(TraceMetrics {
        min_loss,
        sample_variance,
        variance_defined,
    })
}
