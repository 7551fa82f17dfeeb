use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Lower-triangular accuracy matrix: row `k` holds the accuracies on tasks
/// `1..=k` after training task `k`. Entries are fractions in `[0, 1]`.
///
/// Indices are 1-based to match task ids.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradationProfile {
    rows: Vec<Vec<f64>>,
}

impl DegradationProfile {
    pub fn new() -> Self {
        DegradationProfile { rows: Vec::new() }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut p = DegradationProfile::new();
        for row in rows {
            p.push_row(row)?;
        }
        Ok(p)
    }

    /// Builds a profile from percentages, as printed in published tables.
    pub fn from_percent_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|v| v / 100.0).collect()).collect())
    }

    /// Appends row `k = len + 1`, which must hold exactly `k` entries.
    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        let k = self.rows.len() + 1;
        if row.len() != k {
            return Err(Error::Profile(format!(
                "row {k} has {} entries, expected {k}",
                row.len()
            )));
        }
        if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Profile(format!("a[{k}][{}] = {v} is outside [0, 1]", j + 1)));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Number of completed training iterations.
    pub fn tasks(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `a[k][j]`, accuracy on task `j` after training task `k` (`j <= k`).
    pub fn get(&self, k: usize, j: usize) -> f64 {
        assert!(1 <= j && j <= k && k <= self.tasks(), "a[{k}][{j}] outside the profile");
        self.rows[k - 1][j - 1]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k - 1]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (1..=self.tasks()).map(|k| self.get(k, k)).collect()
    }

    /// CSV with header `task_1..task_n`; upper-triangle cells are empty.
    pub fn to_csv(&self) -> String {
        let n = self.tasks();
        let mut out = (1..=n).map(|j| format!("task_{j}")).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = (0..n)
                .map(|j| row.get(j).map_or_else(String::new, |v| format!("{v}")))
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Parses the CSV form. Values are fractions unless some cell exceeds 1,
    /// in which case the whole file is read as percentages. Lines starting
    /// with `#` are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::Profile(format!("header: {e}")))?
            .clone();
        let n = headers.len();
        for (j, h) in headers.iter().enumerate() {
            if h != format!("task_{}", j + 1) {
                return Err(Error::Profile(format!(
                    "header column {}: expected task_{}, found {h:?}",
                    j + 1,
                    j + 1
                )));
            }
        }
        let mut raw: Vec<Vec<f64>> = Vec::new();
        for (r, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Profile(format!("row {}: {e}", r + 2)))?;
            let line = record.position().map_or(r + 2, |p| p.line() as usize);
            let k = r + 1;
            if k > n {
                return Err(Error::Profile(format!("row {line}: more rows than tasks ({n})")));
            }
            let mut row = Vec::with_capacity(k);
            for (j, cell) in record.iter().enumerate() {
                let col = j + 1;
                if col <= k {
                    let v: f64 = cell
                        .parse()
                        .map_err(|_| Error::Profile(format!("row {line}, column {col}: invalid number {cell:?}")))?;
                    if !v.is_finite() {
                        return Err(Error::Profile(format!("row {line}, column {col}: non-finite value")));
                    }
                    row.push(v);
                } else if !cell.is_empty() {
                    return Err(Error::Profile(format!(
                        "row {line}, column {col}: upper-triangle cell must be empty"
                    )));
                }
            }
            raw.push(row);
        }
        let percent = raw.iter().flatten().any(|&v| v > 1.0);
        if percent {
            raw.iter_mut().flatten().for_each(|v| *v /= 100.0);
        }
        Self::from_rows(raw)
    }
}

/// Baseline accuracies `ã_j` as CSV: header `task,accuracy`, one row per task.
pub fn baseline_to_csv(acc: &[f64]) -> String {
    let mut out = String::from("task,accuracy\n");
    for (j, a) in acc.iter().enumerate() {
        let _ = writeln!(out, "{},{a}", j + 1);
    }
    out
}

/// Parses [`baseline_to_csv`] output. Rows must be numbered `1..=n` in
/// order; values above 1 switch the file to percentages.
pub fn baseline_from_csv(text: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Profile(format!("header: {e}")))?;
    if headers.iter().collect::<Vec<_>>() != ["task", "accuracy"] {
        return Err(Error::Profile("baseline header must be `task,accuracy`".into()));
    }
    let mut acc = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Profile(format!("row {}: {e}", r + 2)))?;
        let line = record.position().map_or(r + 2, |p| p.line() as usize);
        let task: usize = record[0]
            .parse()
            .map_err(|_| Error::Profile(format!("row {line}, column 1: invalid task {:?}", &record[0])))?;
        if task != r + 1 {
            return Err(Error::Profile(format!("row {line}, column 1: expected task {}", r + 1)));
        }
        let v: f64 = record[1]
            .parse()
            .map_err(|_| Error::Profile(format!("row {line}, column 2: invalid number {:?}", &record[1])))?;
        acc.push(v);
    }
    if acc.iter().any(|&v| v > 1.0) {
        acc.iter_mut().for_each(|v| *v /= 100.0);
    }
    if let Some(v) = acc.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::Profile(format!("baseline accuracy {v} outside [0, 1]")));
    }
    Ok(acc)
}

impl Default for DegradationProfile {
    fn default() -> Self {
        Self::new()
    }
}
