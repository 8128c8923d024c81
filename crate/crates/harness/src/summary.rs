//! Regret curves and per-method summaries recomputed from trace files.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use boap_core::engine::{Method, RunTrace};
use serde::Serialize;

use crate::experiment::{read_runs, trace_path};

/// Mean and standard error of the regret at each evaluation count.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretCurve {
    pub method: Method,
    /// Evaluation count of the first point (t').
    pub start: usize,
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
    pub per_seed: Vec<(usize, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: String,
    pub runs: usize,
    pub failed: usize,
    pub final_mean: f64,
    pub final_se: f64,
    pub wins_vs_bo_ts: Option<usize>,
    pub ties_vs_bo_ts: Option<usize>,
    pub losses_vs_bo_ts: Option<usize>,
    pub human_share: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub curves: Vec<RegretCurve>,
    pub rows: Vec<SummaryRow>,
    pub warnings: Vec<String>,
    /// Total seconds per method, when timing was recorded.
    pub wall_clock: BTreeMap<String, f64>,
}

/// Sample mean and standard error (n − 1 denominator; zero for n = 1).
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn curve(method: Method, start: usize, per_seed: Vec<(usize, Vec<f64>)>) -> RegretCurve {
    let len = per_seed.iter().map(|(_, c)| c.len()).min().unwrap_or(0);
    let (mean, se) = (0..len)
        .map(|t| mean_se(&per_seed.iter().map(|(_, c)| c[t]).collect::<Vec<_>>()))
        .unzip();
    RegretCurve {
        method,
        start,
        mean,
        se,
        per_seed,
    }
}

/// Reads a results directory and aggregates successful runs.
pub fn summarize(dir: &Path) -> Result<Summary> {
    let runs = read_runs(dir)?;
    let mut warnings = Vec::new();
    let mut by_method: BTreeMap<Method, Vec<(usize, RunTrace, bool)>> = BTreeMap::new();
    for r in &runs {
        if !r.ok() {
            warnings.push(format!("{} repeat {} failed: {}", r.method.id(), r.repeat, r.error));
        }
        let path = trace_path(dir, r.method, r.repeat);
        match std::fs::read_to_string(&path) {
            Ok(text) => {
                let trace = RunTrace::from_jsonl(&text).with_context(|| format!("parsing {}", path.display()))?;
                by_method.entry(r.method).or_default().push((r.repeat, trace, r.ok()));
            }
            Err(_) => warnings.push(format!("missing trace {}", path.display())),
        }
    }

    let mut curves = Vec::new();
    for (&method, entries) in &by_method {
        let start = entries
            .iter()
            .find_map(|(_, t, _)| t.initial.as_ref().map(|i| i.t))
            .unwrap_or(0);
        let per_seed: Vec<(usize, Vec<f64>)> = entries
            .iter()
            .filter(|(_, _, ok)| *ok)
            .filter_map(|(k, t, _)| t.regret_curve().map(|c| (*k, c)))
            .collect();
        curves.push(curve(method, start, per_seed));
    }

    let baseline: Option<BTreeMap<usize, f64>> = curves.iter().find(|c| c.method == Method::BoTs).map(|c| {
        c.per_seed
            .iter()
            .filter_map(|(k, v)| v.last().map(|r| (*k, *r)))
            .collect()
    });

    let mut rows = Vec::new();
    for c in &curves {
        let entries = &by_method[&c.method];
        let finals: Vec<f64> = c.per_seed.iter().filter_map(|(_, v)| v.last().copied()).collect();
        let (final_mean, final_se) = mean_se(&finals);
        let vs = baseline.as_ref().map(|b| {
            let mut wlt = (0, 0, 0);
            for (k, v) in &c.per_seed {
                if let (Some(mine), Some(theirs)) = (v.last(), b.get(k)) {
                    match mine.partial_cmp(theirs) {
                        Some(std::cmp::Ordering::Less) => wlt.0 += 1,
                        Some(std::cmp::Ordering::Equal) => wlt.1 += 1,
                        _ => wlt.2 += 1,
                    }
                }
            }
            wlt
        });
        let steps: usize = entries.iter().filter(|e| e.2).map(|(_, t, _)| t.steps.len()).sum();
        let human: usize = entries
            .iter()
            .filter(|e| e.2)
            .map(|(_, t, _)| t.arms().iter().filter(|a| **a == boap_core::engine::Arm::Human).count())
            .sum();
        rows.push(SummaryRow {
            method: c.method.id().to_string(),
            runs: entries.len(),
            failed: entries.iter().filter(|e| !e.2).count(),
            final_mean,
            final_se,
            wins_vs_bo_ts: vs.map(|v| v.0),
            ties_vs_bo_ts: vs.map(|v| v.1),
            losses_vs_bo_ts: vs.map(|v| v.2),
            human_share: c
                .method
                .mode()
                .uses_properties()
                .then(|| human as f64 / steps.max(1) as f64),
        });
    }

    let mut wall_clock = BTreeMap::new();
    if let Ok(mut reader) = csv::Reader::from_path(dir.join("timing.csv")) {
        for rec in reader.records() {
            let rec = rec?;
            let secs: f64 = rec.get(2).unwrap_or("0").parse().unwrap_or(0.0);
            *wall_clock.entry(rec.get(0).unwrap_or("").to_string()).or_insert(0.0) += secs;
        }
    }
    Ok(Summary {
        curves,
        rows,
        warnings,
        wall_clock,
    })
}

/// Writes `curves.csv` (one row per method and evaluation count) and
/// `summary.csv`.
pub fn write_summary(dir: &Path, summary: &Summary) -> Result<()> {
    let mut w = csv::Writer::from_path(dir.join("curves.csv"))?;
    w.write_record(["method", "t", "n", "mean_regret", "se_regret"])?;
    for c in &summary.curves {
        for (i, (m, s)) in c.mean.iter().zip(&c.se).enumerate() {
            w.write_record([
                c.method.id().to_string(),
                (c.start + i).to_string(),
                c.per_seed.len().to_string(),
                m.to_string(),
                s.to_string(),
            ])?;
        }
    }
    w.flush()?;
    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    for row in &summary.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable table for the terminal.
pub fn render(summary: &Summary) -> String {
    let mut out = format!(
        "{:<10} {:>5} {:>6} {:>14} {:>12} {:>11} {:>9}\n",
        "method", "runs", "failed", "final regret", "se", "vs bo_ts", "seconds"
    );
    for r in &summary.rows {
        let vs = match (r.wins_vs_bo_ts, r.ties_vs_bo_ts, r.losses_vs_bo_ts) {
            (Some(w), Some(t), Some(l)) => format!("{w}/{t}/{l}"),
            _ => "-".into(),
        };
        let secs = summary
            .wall_clock
            .get(&r.method)
            .map_or("-".into(), |s| format!("{s:.1}"));
        out.push_str(&format!(
            "{:<10} {:>5} {:>6} {:>14.6e} {:>12.4e} {:>11} {:>9}\n",
            r.method, r.runs, r.failed, r.final_mean, r.final_se, vs, secs
        ));
    }
    for w in &summary.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}
