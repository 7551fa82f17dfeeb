//! Continual-learning metrics over a degradation profile.
//!
//! `k` and `j` are 1-based task indices. Values come out in the profile's
//! units (fractions); reports scale them to percentages.

use std::fmt::Write as _;

use super::DegradationProfile;

/// Mean accuracy over tasks `1..=k` after training task `k`.
pub fn average_accuracy(p: &DegradationProfile, k: usize) -> f64 {
    p.row(k).iter().sum::<f64>() / k as f64
}

/// Running mean of `AA_1..AA_k`.
pub fn average_incremental_accuracy(p: &DegradationProfile, k: usize) -> f64 {
    (1..=k).map(|i| average_accuracy(p, i)).sum::<f64>() / k as f64
}

/// Incremental accuracy with each `AA_i` taken over the full sequence
/// length, counting tasks not yet seen as 0. This is the convention the
/// published summaries follow.
pub fn padded_incremental_accuracy(p: &DegradationProfile, k: usize) -> f64 {
    let n = p.tasks() as f64;
    (1..=k).map(|i| p.row(i).iter().sum::<f64>() / n).sum::<f64>() / k as f64
}

/// `f_{j,k}`: best accuracy on task `j` before training task `k`, minus the
/// current one. Negative when the task improved. Requires `j < k`.
pub fn forgetting(p: &DegradationProfile, j: usize, k: usize) -> f64 {
    assert!(j < k, "forgetting needs j < k");
    let best = (j..k).map(|i| p.get(i, j)).fold(f64::NEG_INFINITY, f64::max);
    best - p.get(k, j)
}

/// Mean of `f_{j,k}` over `j < k`; undefined for `k = 1`.
pub fn forgetting_measure(p: &DegradationProfile, k: usize) -> Option<f64> {
    (k > 1).then(|| (1..k).map(|j| forgetting(p, j, k)).sum::<f64>() / (k - 1) as f64)
}

/// Mean of `a_{k,j} - a_{j,j}` over `j < k`; undefined for `k = 1`.
pub fn backward_transfer(p: &DegradationProfile, k: usize) -> Option<f64> {
    (k > 1).then(|| (1..k).map(|j| p.get(k, j) - p.get(j, j)).sum::<f64>() / (k - 1) as f64)
}

/// Mean of `a_{j,j} - baseline_j` over `j = 2..=k`; undefined for `k = 1`.
pub fn forward_transfer(p: &DegradationProfile, baseline: &[f64], k: usize) -> Option<f64> {
    assert!(baseline.len() >= k, "baseline series shorter than the profile");
    (k > 1).then(|| (2..=k).map(|j| p.get(j, j) - baseline[j - 1]).sum::<f64>() / (k - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub avg: f64,
    /// Largest value, or the most negative one for backward transfer.
    pub extreme: f64,
    /// Population standard deviation.
    pub std: f64,
}

/// Which end of the series a summary reports as its extreme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Max,
    Min,
}

pub fn summarize(series: &[f64], extreme: Extreme) -> Option<Summary> {
    if series.is_empty() {
        return None;
    }
    let n = series.len() as f64;
    let avg = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|v| (v - avg).powi(2)).sum::<f64>() / n;
    let extreme = match extreme {
        Extreme::Max => series.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Extreme::Min => series.iter().copied().fold(f64::INFINITY, f64::min),
    };
    Some(Summary {
        avg,
        extreme,
        std: var.sqrt(),
    })
}

/// Summary of a series whose first element is undefined: the undefined
/// entries count as 0 (no tasks to forget yet). `None` if nothing is defined.
pub fn summarize_partial(series: &[Option<f64>], extreme: Extreme) -> Option<Summary> {
    if series.iter().all(Option::is_none) {
        return None;
    }
    let filled: Vec<f64> = series.iter().map(|v| v.unwrap_or(0.0)).collect();
    summarize(&filled, extreme)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub aa: Vec<f64>,
    pub aia: Vec<f64>,
    pub aia_padded: Vec<f64>,
    pub fm: Vec<Option<f64>>,
    /// `per_task_forgetting[k - 1][j - 1] = f_{j,k}` for `j < k`.
    pub per_task_forgetting: Vec<Vec<f64>>,
    pub bwt: Vec<Option<f64>>,
    pub fwt: Option<Vec<Option<f64>>>,
    pub baseline: Option<Vec<f64>>,
}

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub metric: &'static str,
    pub summary: Option<Summary>,
}

impl MetricsReport {
    pub fn compute(p: &DegradationProfile, baseline: Option<&[f64]>) -> Self {
        let ks = 1..=p.tasks();
        MetricsReport {
            aa: ks.clone().map(|k| average_accuracy(p, k)).collect(),
            aia: ks.clone().map(|k| average_incremental_accuracy(p, k)).collect(),
            aia_padded: ks.clone().map(|k| padded_incremental_accuracy(p, k)).collect(),
            fm: ks.clone().map(|k| forgetting_measure(p, k)).collect(),
            per_task_forgetting: ks
                .clone()
                .map(|k| (1..k).map(|j| forgetting(p, j, k)).collect())
                .collect(),
            bwt: ks.clone().map(|k| backward_transfer(p, k)).collect(),
            fwt: baseline.map(|b| ks.clone().map(|k| forward_transfer(p, b, k)).collect()),
            baseline: baseline.map(|b| b[..p.tasks()].to_vec()),
        }
    }

    pub fn tasks(&self) -> usize {
        self.aa.len()
    }

    /// Rows in the published table layout: AA, AIA (padded convention), FM
    /// and BWT, plus FWT when a baseline is present.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut rows = vec![
            SummaryRow {
                metric: "AA",
                summary: summarize(&self.aa, Extreme::Max),
            },
            SummaryRow {
                metric: "AIA",
                summary: summarize(&self.aia_padded, Extreme::Max),
            },
            SummaryRow {
                metric: "FM",
                summary: summarize_partial(&self.fm, Extreme::Max),
            },
            SummaryRow {
                metric: "BWT",
                summary: summarize_partial(&self.bwt, Extreme::Min),
            },
        ];
        if let Some(fwt) = &self.fwt {
            rows.push(SummaryRow {
                metric: "FWT",
                summary: summarize_partial(fwt, Extreme::Max),
            });
        }
        rows
    }

    /// Per-iteration series as CSV, in percent. Undefined cells read `NA`.
    pub fn to_csv(&self) -> String {
        let pct = |v: f64| format!("{:.4}", 100.0 * v);
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), pct);
        let mut out = String::from("k,aa,aia,aia_padded,fm,bwt");
        if self.fwt.is_some() {
            out.push_str(",fwt,baseline");
        }
        out.push('\n');
        for i in 0..self.tasks() {
            let _ = write!(
                out,
                "{},{},{},{},{},{}",
                i + 1,
                pct(self.aa[i]),
                pct(self.aia[i]),
                pct(self.aia_padded[i]),
                opt(self.fm[i]),
                opt(self.bwt[i])
            );
            if let (Some(fwt), Some(b)) = (&self.fwt, &self.baseline) {
                let _ = write!(out, ",{},{}", opt(fwt[i]), pct(b[i]));
            }
            out.push('\n');
        }
        out
    }

    /// Plain-text summary table: one row per metric with avg, max and std in
    /// percent (BWT reports its most negative value as max).
    pub fn summary_text(&self) -> String {
        let mut out = format!("{:<6}{:>10}{:>10}{:>10}\n", "metric", "avg", "max", "std");
        for row in self.summary() {
            match row.summary {
                Some(s) => {
                    let _ = writeln!(
                        out,
                        "{:<6}{:>10.2}{:>10.2}{:>10.2}",
                        row.metric,
                        100.0 * s.avg,
                        100.0 * s.extreme,
                        100.0 * s.std
                    );
                }
                None => {
                    let _ = writeln!(out, "{:<6}{:>10}{:>10}{:>10}", row.metric, "NA", "NA", "NA");
                }
            }
        }
        out
    }

    /// Summary rows as CSV (percent).
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("metric,avg,max,std\n");
        for row in self.summary() {
            match row.summary {
                Some(s) => {
                    let _ = writeln!(
                        out,
                        "{},{:.6},{:.6},{:.6}",
                        row.metric,
                        100.0 * s.avg,
                        100.0 * s.extreme,
                        100.0 * s.std
                    );
                }
                None => {
                    let _ = writeln!(out, "{},NA,NA,NA", row.metric);
                }
            }
        }
        out
    }
}
