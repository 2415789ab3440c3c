//! Evaluation harness: repeated seeded runs over a scenario grid,
//! common-outlier counts, recall against planted truth, and merit grading.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::datagen::{generate, GenSpec};
use crate::detector::{detect, DetectionConfig, OutlierReport};
use crate::error::{Error, Result};
use crate::metrics::MetricKind;

/// A labeled detector configuration, one column of the comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub label: String,
    pub config: DetectionConfig,
}

impl Scenario {
    pub fn new(label: impl Into<String>, config: DetectionConfig) -> Self {
        Self {
            label: label.into(),
            config,
        }
    }

    /// The three standard scenarios: raw Euclidean, Euclidean on
    /// variance-standardized data, and Mahalanobis.
    pub fn standard_three(k: usize) -> Vec<Scenario> {
        vec![
            Scenario::new("raw-euclidean", DetectionConfig::new(k)),
            Scenario::new("standardized", DetectionConfig::new(k).standardized(true)),
            Scenario::new(
                "mahalanobis",
                DetectionConfig::new(k).with_metric(MetricKind::Mahalanobis),
            ),
        ]
    }
}

/// All reports from a scenario x seed grid, plus the per-seed truth labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMatrix {
    pub scenarios: Vec<Scenario>,
    pub seeds: Vec<u64>,
    /// Planted outlier ids per seed; empty vectors when unlabeled.
    pub truth: Vec<Vec<usize>>,
    /// Reports indexed `[scenario][seed]`.
    pub reports: Vec<Vec<OutlierReport>>,
}

/// Merit bands: strictly above 75% is good, exactly 75% average, below bad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Good,
    Average,
    Bad,
}

impl std::fmt::Display for Grade {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Grade::Good => "Good",
            Grade::Average => "Average",
            Grade::Bad => "Bad",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeritGrade {
    pub accuracy_percent: f64,
    pub grade: Grade,
}

/// Number of outlier ids two reports share. Both reports must have run with
/// the same budget.
pub fn common_outliers(a: &OutlierReport, b: &OutlierReport) -> Result<usize> {
    if a.config.k != b.config.k {
        return Err(Error::InvalidParameter {
            reason: format!(
                "reports have different budgets (k = {} vs {})",
                a.config.k, b.config.k
            ),
        });
    }
    let sa: HashSet<usize> = a.outlier_ids.iter().copied().collect();
    Ok(b.outlier_ids.iter().filter(|id| sa.contains(id)).count())
}

/// Fraction of planted truth recovered by a report.
pub fn recall(report: &OutlierReport, truth: &[usize]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::InvalidParameter {
            reason: "recall needs a non-empty truth set".into(),
        });
    }
    let truth_set: HashSet<usize> = truth.iter().copied().collect();
    let hit = report
        .outlier_ids
        .iter()
        .filter(|id| truth_set.contains(id))
        .count();
    Ok(hit as f64 / truth_set.len() as f64)
}

/// Grade an accuracy percentage against the 75% threshold.
pub fn grade(accuracy_percent: f64) -> Result<MeritGrade> {
    if !accuracy_percent.is_finite() || !(0.0..=100.0).contains(&accuracy_percent) {
        return Err(Error::InvalidParameter {
            reason: format!("accuracy must lie in [0, 100], got {accuracy_percent}"),
        });
    }
    let grade = if accuracy_percent > 75.0 {
        Grade::Good
    } else if accuracy_percent == 75.0 {
        Grade::Average
    } else {
        Grade::Bad
    };
    Ok(MeritGrade {
        accuracy_percent,
        grade,
    })
}

/// Run every scenario against a fresh dataset per seed. The generator spec's
/// own seed field is ignored; each run uses one of `seeds`.
pub fn run_experiment(gen: &GenSpec, scenarios: &[Scenario], seeds: &[u64]) -> Result<RunMatrix> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter {
            reason: "at least one seed is required".into(),
        });
    }
    if scenarios.is_empty() {
        return Err(Error::InvalidParameter {
            reason: "at least one scenario is required".into(),
        });
    }

    let mut truth = Vec::with_capacity(seeds.len());
    let mut reports: Vec<Vec<OutlierReport>> =
        vec![Vec::with_capacity(seeds.len()); scenarios.len()];
    for &seed in seeds {
        let ds = generate(&GenSpec {
            seed,
            ..gen.clone()
        })?;
        truth.push(ds.truth_outlier_ids.clone());
        for (s, scenario) in scenarios.iter().enumerate() {
            reports[s].push(detect(&ds.points, &scenario.config)?);
        }
    }

    Ok(RunMatrix {
        scenarios: scenarios.to_vec(),
        seeds: seeds.to_vec(),
        truth,
        reports,
    })
}

/// Per-scenario summary row. Truth-dependent fields are present only in
/// planted mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub label: String,
    /// Outliers shared with the planted truth, one count per seed.
    pub truth_common: Option<Vec<usize>>,
    pub recalls: Option<Vec<f64>>,
    pub mean_recall: Option<f64>,
    pub merit: Option<MeritGrade>,
}

/// Outliers shared by a pair of scenarios, one count per seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseCommon {
    pub a: String,
    pub b: String,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub n: usize,
    pub k: usize,
    pub seeds: Vec<u64>,
    pub planted: bool,
    pub scenarios: Vec<ScenarioSummary>,
    pub pairwise: Vec<PairwiseCommon>,
}

/// Reduce a run matrix to the summary grid: truth intersections and recall
/// per scenario when truth exists, plus pairwise intersections between
/// scenarios in every mode.
pub fn summarize(matrix: &RunMatrix, gen: &GenSpec) -> Result<EvalSummary> {
    let planted = matrix.truth.iter().any(|t| !t.is_empty());
    let k = matrix
        .scenarios
        .first()
        .map(|s| s.config.k)
        .unwrap_or_default();

    let mut scenario_rows = Vec::with_capacity(matrix.scenarios.len());
    for (s, scenario) in matrix.scenarios.iter().enumerate() {
        let row = if planted {
            let mut commons = Vec::with_capacity(matrix.seeds.len());
            let mut recalls = Vec::with_capacity(matrix.seeds.len());
            for (r, report) in matrix.reports[s].iter().enumerate() {
                let truth_set: HashSet<usize> = matrix.truth[r].iter().copied().collect();
                commons.push(
                    report
                        .outlier_ids
                        .iter()
                        .filter(|id| truth_set.contains(id))
                        .count(),
                );
                recalls.push(recall(report, &matrix.truth[r])?);
            }
            let mean_recall = recalls.iter().sum::<f64>() / recalls.len() as f64;
            let merit = grade(mean_recall * 100.0)?;
            ScenarioSummary {
                label: scenario.label.clone(),
                truth_common: Some(commons),
                recalls: Some(recalls),
                mean_recall: Some(mean_recall),
                merit: Some(merit),
            }
        } else {
            ScenarioSummary {
                label: scenario.label.clone(),
                truth_common: None,
                recalls: None,
                mean_recall: None,
                merit: None,
            }
        };
        scenario_rows.push(row);
    }

    let mut pairwise = Vec::new();
    for a in 0..matrix.scenarios.len() {
        for b in (a + 1)..matrix.scenarios.len() {
            let counts = matrix.reports[a]
                .iter()
                .zip(&matrix.reports[b])
                .map(|(ra, rb)| common_outliers(ra, rb))
                .collect::<Result<Vec<usize>>>()?;
            pairwise.push(PairwiseCommon {
                a: matrix.scenarios[a].label.clone(),
                b: matrix.scenarios[b].label.clone(),
                counts,
            });
        }
    }

    Ok(EvalSummary {
        n: gen.n,
        k,
        seeds: matrix.seeds.clone(),
        planted,
        scenarios: scenario_rows,
        pairwise,
    })
}

impl EvalSummary {
    /// Render the summary as CSV. Planted mode emits a truth-intersection
    /// grid with recall and merit columns; the pairwise grid follows after a
    /// blank line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let seed_headers: Vec<String> = self.seeds.iter().map(|s| format!("seed_{s}")).collect();
        if self.planted {
            let _ = writeln!(out, "scenario,{},mean_recall,merit", seed_headers.join(","));
            for row in &self.scenarios {
                let counts = row
                    .truth_common
                    .as_ref()
                    .map(|c| {
                        c.iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{:.4},{}",
                    row.label,
                    counts,
                    row.mean_recall.unwrap_or(f64::NAN),
                    row.merit.map(|m| m.grade.to_string()).unwrap_or_default()
                );
            }
            out.push('\n');
        }
        let _ = writeln!(out, "pair,{}", seed_headers.join(","));
        for pair in &self.pairwise {
            let counts = pair
                .counts
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(out, "{}|{},{}", pair.a, pair.b, counts);
        }
        out
    }

    /// Render the summary as an aligned text table.
    pub fn to_text_table(&self) -> String {
        let mut out = String::new();
        let label_width = self
            .scenarios
            .iter()
            .map(|s| s.label.len())
            .chain(self.pairwise.iter().map(|p| p.a.len() + p.b.len() + 1))
            .max()
            .unwrap_or(8)
            .max(8);
        let _ = writeln!(
            out,
            "n = {}, k = {}, {} seed(s)",
            self.n,
            self.k,
            self.seeds.len()
        );

        if self.planted {
            let _ = writeln!(out, "\ncommon outliers with planted truth, per seed:");
            let _ = write!(out, "{:<label_width$}", "scenario");
            for seed in &self.seeds {
                let _ = write!(out, " {:>6}", format!("s{seed}"));
            }
            let _ = writeln!(out, "  {:>11}  {:>7}", "mean_recall", "merit");
            for row in &self.scenarios {
                let _ = write!(out, "{:<label_width$}", row.label);
                if let Some(counts) = &row.truth_common {
                    for c in counts {
                        let _ = write!(out, " {c:>6}");
                    }
                }
                let _ = writeln!(
                    out,
                    "  {:>11.4}  {:>7}",
                    row.mean_recall.unwrap_or(f64::NAN),
                    row.merit.map(|m| m.grade.to_string()).unwrap_or_default()
                );
            }
        }

        if !self.pairwise.is_empty() {
            let _ = writeln!(out, "\ncommon outliers between scenarios, per seed:");
            let _ = write!(out, "{:<label_width$}", "pair");
            for seed in &self.seeds {
                let _ = write!(out, " {:>6}", format!("s{seed}"));
            }
            let _ = writeln!(out);
            for pair in &self.pairwise {
                let _ = write!(out, "{:<label_width$}", format!("{}|{}", pair.a, pair.b));
                for c in &pair.counts {
                    let _ = write!(out, " {c:>6}");
                }
                let _ = writeln!(out);
            }
        }
        out
    }
}
