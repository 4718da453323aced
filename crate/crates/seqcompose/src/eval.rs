//! Scoring mined rules against planted ground truth, and the benchmark
//! harness that sweeps algorithm/threshold grids into CSV reports.
//!
//! Two metrics, both computed in integer arithmetic and rounded half-up to
//! two decimals so report values are exact and reproducible:
//!
//! * precision: matched compositions over total compositions, as a percent;
//! * noise ratio: generated rules over expected associations (ideally 1).

use std::collections::HashSet;
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::miners::{self, Algorithm, AssociationRule, MiningParams};
use crate::multilevel::{self, MultilevelParams};
use crate::pattern::HierarchyLevel;
use crate::types::Session;
use crate::workload::{Composition, Dataset};

/// How a rule is compared with a planted composition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// The rule's antecedent followed by its consequent equals the
    /// composition's step sequence exactly. This is the only predicate under
    /// which exhaustive mining is guaranteed to match every composition.
    #[default]
    ExactComposition,
}

/// Matching configuration (an extension point; exactly one mode is active).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchCriteria {
    pub mode: MatchMode,
}

/// Counts the compositions reconstructed by at least one rule. Each
/// composition counts at most once no matter how many rules rebuild it.
/// Rules must be operation-level; service-level rules cannot address
/// compositions and are rejected.
pub fn match_rules(
    rules: &[AssociationRule],
    compositions: &[Composition],
    criteria: &MatchCriteria,
) -> Result<usize> {
    for rule in rules {
        if let Some(item) = rule
            .antecedent
            .iter()
            .chain(&rule.consequent)
            .find(|item| !item.contains('.'))
        {
            return Err(Error::Eval(format!(
                "rule item {item:?} is a bare service name; compositions are matched \
                 against operation-level rules (mine with level=operation)"
            )));
        }
    }
    let full_sequences: HashSet<Vec<String>> =
        rules.iter().map(|r| r.full_sequence()).collect();
    match criteria.mode {
        MatchMode::ExactComposition => Ok(compositions
            .iter()
            .filter(|c| full_sequences.contains(&c.labels()))
            .count()),
    }
}

/// `numer / denom` rounded half-up to two decimals, in integer arithmetic.
fn round2(numer: u64, denom: u64) -> f64 {
    let hundredths = (200 * numer + denom) / (2 * denom);
    hundredths as f64 / 100.0
}

/// Matched compositions over all compositions, as a percent with two exact
/// decimals.
pub fn precision_pct(matching_count: usize, n_compositions: usize) -> Result<f64> {
    if n_compositions == 0 {
        return Err(Error::Eval(
            "precision needs at least one ground-truth composition".into(),
        ));
    }
    Ok(round2(matching_count as u64 * 100, n_compositions as u64))
}

/// Generated rules over expected associations, with two exact decimals.
pub fn noise_ratio(generated_count: usize, expected_count: usize) -> Result<f64> {
    if expected_count == 0 {
        return Err(Error::Eval(
            "noise ratio needs a positive expected association count".into(),
        ));
    }
    Ok(round2(generated_count as u64, expected_count as u64))
}

/// One benchmark row: counters and metrics for one algorithm at one
/// threshold pair. `wall_time_ms` is informational and excluded from any
/// reproducibility comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub algorithm: String,
    pub min_support_pct: f64,
    pub min_confidence_pct: f64,
    pub candidate_count: usize,
    pub frequent_count: usize,
    pub rule_count: usize,
    pub matching_count: usize,
    pub precision_pct: f64,
    pub noise_ratio: f64,
    pub wall_time_ms: u64,
}

pub const REPORT_HEADER: &str = "algorithm,min_support_pct,min_confidence_pct,candidate_count,frequent_count,rule_count,matching_count,precision_pct,noise_ratio,wall_time_ms";

impl EvalReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.2},{:.2},{}",
            self.algorithm,
            self.min_support_pct,
            self.min_confidence_pct,
            self.candidate_count,
            self.frequent_count,
            self.rule_count,
            self.matching_count,
            self.precision_pct,
            self.noise_ratio,
            self.wall_time_ms
        )
    }

    /// Label used in plot data: `apriori 3.5/3.5`.
    pub fn label(&self) -> String {
        format!(
            "{} {}/{}",
            self.algorithm, self.min_support_pct, self.min_confidence_pct
        )
    }
}

/// One cell of a benchmark grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub algorithm: Algorithm,
    pub min_support_pct: f64,
    pub min_confidence_pct: f64,
}

/// The six-row grid the report tables are built from: three baseline rows
/// and the two-level pipeline at three threshold pairs.
pub fn default_grid() -> Vec<GridCell> {
    let cell = |algorithm, s, c| GridCell {
        algorithm,
        min_support_pct: s,
        min_confidence_pct: c,
    };
    vec![
        cell(Algorithm::Apriori, 3.5, 3.5),
        cell(Algorithm::Apriori, 3.5, 3.8),
        cell(Algorithm::Apriori, 3.7, 3.7),
        cell(Algorithm::Multilevel, 3.5, 3.5),
        cell(Algorithm::Multilevel, 4.5, 4.5),
        cell(Algorithm::Multilevel, 6.5, 6.5),
    ]
}

/// Reads a grid from a JSON file: an array of cells
/// `{"algorithm":"apriori","min_support_pct":3.5,"min_confidence_pct":3.5}`.
pub fn read_grid(path: &Path) -> Result<Vec<GridCell>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

/// Runs one grid cell against a session store and scores it.
pub fn run_cell(
    cell: &GridCell,
    sessions: &[Session],
    compositions: &[Composition],
    expected_count: usize,
) -> Result<EvalReport> {
    let started = Instant::now();
    let (stats, rules) = match cell.algorithm {
        Algorithm::Multilevel => {
            let params = MultilevelParams::new(cell.min_support_pct, cell.min_confidence_pct);
            let rec = multilevel::recommend(sessions, &params)?;
            (rec.stats, rec.rules)
        }
        baseline => {
            let params = MiningParams {
                min_support_pct: cell.min_support_pct,
                min_confidence_pct: cell.min_confidence_pct,
                level: HierarchyLevel::Operation,
                max_pattern_length: None,
            };
            let frequent = miners::mine(baseline, sessions, &params)?;
            let rules = miners::generate_rules(&frequent, sessions, cell.min_confidence_pct)?;
            (frequent.stats, rules)
        }
    };
    let wall_time_ms = started.elapsed().as_millis() as u64;

    let matching_count = match_rules(&rules, compositions, &MatchCriteria::default())?;
    Ok(EvalReport {
        algorithm: cell.algorithm.name().to_string(),
        min_support_pct: cell.min_support_pct,
        min_confidence_pct: cell.min_confidence_pct,
        candidate_count: stats.candidate_count,
        frequent_count: stats.frequent_count,
        rule_count: rules.len(),
        matching_count,
        precision_pct: precision_pct(matching_count, compositions.len())?,
        noise_ratio: noise_ratio(rules.len(), expected_count)?,
        wall_time_ms,
    })
}

/// Runs every grid cell against the dataset and returns reports in grid
/// order. `jobs` > 1 runs cells on that many threads; the output order and
/// contents are independent of the worker count.
pub fn run_benchmark(dataset: &Dataset, grid: &[GridCell], jobs: usize) -> Result<Vec<EvalReport>> {
    let sessions = dataset.sessions();
    let compositions = &dataset.compositions;
    let expected = compositions.len();

    let mut slots: Vec<Option<Result<EvalReport>>> = Vec::new();
    slots.resize_with(grid.len(), || None);
    if jobs <= 1 {
        for (i, cell) in grid.iter().enumerate() {
            slots[i] = Some(run_cell(cell, &sessions, compositions, expected));
        }
    } else {
        let next = Mutex::new(0usize);
        let slots_mx = Mutex::new(&mut slots);
        std::thread::scope(|scope| {
            for _ in 0..jobs.min(grid.len()) {
                scope.spawn(|| loop {
                    let i = {
                        let mut n = next.lock().unwrap();
                        let i = *n;
                        *n += 1;
                        i
                    };
                    if i >= grid.len() {
                        break;
                    }
                    let report = run_cell(&grid[i], &sessions, compositions, expected);
                    slots_mx.lock().unwrap()[i] = Some(report);
                });
            }
        });
    }
    slots
        .into_iter()
        .map(|slot| slot.expect("every grid cell ran"))
        .collect()
}

/// Writes the report CSV: fixed header plus one row per report.
pub fn write_report_csv(path: &Path, reports: &[EvalReport]) -> Result<()> {
    let mut text = String::from(REPORT_HEADER);
    text.push('\n');
    for report in reports {
        text.push_str(&report.csv_row());
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes the plot-data CSV (`label,noise_ratio`), one row per report.
pub fn write_plot_csv(path: &Path, reports: &[EvalReport]) -> Result<()> {
    let mut text = String::from("label,noise_ratio\n");
    for report in reports {
        text.push_str(&format!("{},{:.2}\n", report.label(), report.noise_ratio));
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::{generate_dataset, Composition, GeneratorConfig, InclusiveRange};

    fn comp(id: usize, labels: &[(&str, &str)]) -> Composition {
        Composition {
            id,
            steps: labels
                .iter()
                .map(|&(s, o)| {
                    crate::types::Invocation::new(crate::types::ServiceId::new(s).unwrap(), o)
                        .unwrap()
                })
                .collect(),
        }
    }

    fn rule(ant: &[&str], cons: &[&str]) -> AssociationRule {
        AssociationRule {
            antecedent: ant.iter().map(|s| s.to_string()).collect(),
            consequent: cons.iter().map(|s| s.to_string()).collect(),
            support_pct: 10.0,
            confidence_pct: 90.0,
        }
    }

    #[test]
    fn metric_values_are_exact() {
        assert_eq!(precision_pct(16, 50).unwrap(), 32.0);
        assert_eq!(precision_pct(48, 50).unwrap(), 96.0);
        assert_eq!(precision_pct(35, 50).unwrap(), 70.0);
        assert_eq!(precision_pct(0, 50).unwrap(), 0.0);
        assert_eq!(noise_ratio(12_664_936, 50).unwrap(), 253_298.72);
        assert_eq!(noise_ratio(1370, 50).unwrap(), 27.4);
        assert_eq!(noise_ratio(156, 50).unwrap(), 3.12);
        assert_eq!(noise_ratio(101, 50).unwrap(), 2.02);
        assert_eq!(noise_ratio(50, 50).unwrap(), 1.0);
    }

    #[test]
    fn zero_denominators_are_errors() {
        assert_eq!(precision_pct(1, 0).unwrap_err().class(), "eval");
        assert_eq!(noise_ratio(1, 0).unwrap_err().class(), "eval");
    }

    #[test]
    fn metrics_scale_as_defined() {
        // Doubling both counts leaves precision unchanged.
        assert_eq!(
            precision_pct(13, 40).unwrap(),
            precision_pct(26, 80).unwrap()
        );
        // Scaling generated scales the ratio (exact-division cases).
        assert_eq!(noise_ratio(300, 50).unwrap(), 3.0 * noise_ratio(100, 50).unwrap());
        // Monotone in the numerator.
        assert!(precision_pct(20, 50).unwrap() >= precision_pct(19, 50).unwrap());
    }

    #[test]
    fn matching_counts_each_composition_once() {
        let comps = vec![
            comp(0, &[("A", "a"), ("B", "b")]),
            comp(1, &[("C", "c"), ("D", "d")]),
        ];
        // Two rules rebuild composition 0 from different split points.
        let rules = vec![
            rule(&["A.a"], &["B.b"]),
            rule(&["A.a", "B.b"], &[]),
            rule(&["X.x"], &["Y.y"]),
        ];
        // An empty consequent never comes out of rule generation, but the
        // matcher only cares about the concatenation; drop it for realism.
        let rules: Vec<AssociationRule> =
            rules.into_iter().filter(|r| !r.consequent.is_empty()).collect();
        let n = match_rules(&rules, &comps, &MatchCriteria::default()).unwrap();
        assert_eq!(n, 1);
        assert_eq!(match_rules(&[], &comps, &MatchCriteria::default()).unwrap(), 0);
    }

    #[test]
    fn service_level_rules_are_rejected() {
        let comps = vec![comp(0, &[("A", "a"), ("B", "b")])];
        let rules = vec![rule(&["A"], &["B"])];
        let err = match_rules(&rules, &comps, &MatchCriteria::default()).unwrap_err();
        assert_eq!(err.class(), "eval");
    }

    fn small_config(seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            n_services: 8,
            ops_per_service_range: InclusiveRange(2, 3),
            n_compositions: 3,
            composition_length_range: InclusiveRange(2, 3),
            n_sessions: 60,
            noise_invocations_per_session_range: InclusiveRange(2, 4),
            plant_gap_range: InclusiveRange(1, 2),
            seed,
            ..GeneratorConfig::default()
        }
    }

    #[test]
    fn benchmark_rows_recompute_and_follow_grid_order() {
        let dataset = generate_dataset(&small_config(7)).unwrap();
        let grid = vec![
            GridCell {
                algorithm: Algorithm::PatternGrowth,
                min_support_pct: 20.0,
                min_confidence_pct: 10.0,
            },
            GridCell {
                algorithm: Algorithm::Apriori,
                min_support_pct: 20.0,
                min_confidence_pct: 10.0,
            },
        ];
        let reports = run_benchmark(&dataset, &grid, 1).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].algorithm, "patterngrowth");
        assert_eq!(reports[1].algorithm, "apriori");
        for r in &reports {
            assert_eq!(
                r.precision_pct,
                precision_pct(r.matching_count, dataset.compositions.len()).unwrap()
            );
            assert_eq!(
                r.noise_ratio,
                noise_ratio(r.rule_count, dataset.compositions.len()).unwrap()
            );
        }
        // Same frequent sets from both miners ⇒ same counts except the
        // candidate counter, whose semantics differ per algorithm.
        assert_eq!(reports[0].rule_count, reports[1].rule_count);
        assert_eq!(reports[0].matching_count, reports[1].matching_count);
    }

    #[test]
    fn parallel_benchmark_matches_sequential() {
        let dataset = generate_dataset(&small_config(9)).unwrap();
        let grid = default_grid();
        // The pipeline can fail legitimately on tiny logs (empty kept set);
        // compare outcomes cell by cell instead of demanding success.
        let seq: Vec<_> = grid
            .iter()
            .map(|c| {
                run_cell(
                    c,
                    &dataset.sessions(),
                    &dataset.compositions,
                    dataset.compositions.len(),
                )
            })
            .collect();
        if seq.iter().all(|r| r.is_ok()) {
            let par = run_benchmark(&dataset, &grid, 4).unwrap();
            let seq: Vec<EvalReport> = seq.into_iter().map(|r| r.unwrap()).collect();
            for (a, b) in seq.iter().zip(&par) {
                let mut b = b.clone();
                b.wall_time_ms = a.wall_time_ms;
                assert_eq!(*a, b);
            }
        }
    }

    #[test]
    fn csv_outputs_have_pinned_shapes() {
        let report = EvalReport {
            algorithm: "apriori".into(),
            min_support_pct: 3.5,
            min_confidence_pct: 3.8,
            candidate_count: 10,
            frequent_count: 5,
            rule_count: 4,
            matching_count: 2,
            precision_pct: 4.0,
            noise_ratio: 0.08,
            wall_time_ms: 12,
        };
        assert_eq!(report.csv_row(), "apriori,3.5,3.8,10,5,4,2,4.00,0.08,12");
        assert_eq!(report.label(), "apriori 3.5/3.8");

        let dir = std::env::temp_dir().join(format!("seqc-eval-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let report_path = dir.join("report.csv");
        let plot_path = dir.join("plot.csv");
        write_report_csv(&report_path, std::slice::from_ref(&report)).unwrap();
        write_plot_csv(&plot_path, &[report]).unwrap();
        let report_text = std::fs::read_to_string(&report_path).unwrap();
        assert!(report_text.starts_with(REPORT_HEADER));
        assert_eq!(report_text.lines().count(), 2);
        let plot_text = std::fs::read_to_string(&plot_path).unwrap();
        assert_eq!(plot_text, "label,noise_ratio\napriori 3.5/3.8,0.08\n");
        // Empty report lists still produce header-only files.
        write_report_csv(&report_path, &[]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&report_path).unwrap(),
            format!("{REPORT_HEADER}\n")
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn grid_files_round_trip() {
        let dir = std::env::temp_dir().join(format!("seqc-grid-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("grid.json");
        let grid = default_grid();
        std::fs::write(&path, serde_json::to_string_pretty(&grid).unwrap()).unwrap();
        assert_eq!(read_grid(&path).unwrap(), grid);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
