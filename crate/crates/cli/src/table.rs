//! Side-by-side accuracy tables from stored run results.

use std::collections::BTreeMap;

use crate::config::SamplerKind;
use crate::result::RunResult;

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub dataset: String,
    pub units: usize,
    pub iterations: usize,
    pub mcmc: Option<f64>,
    pub smc_ea: Option<f64>,
}

fn dataset_name(result: &RunResult) -> String {
    result
        .config
        .dataset
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| result.config.dataset.display().to_string())
}

type CellKey = (String, usize, usize);

/// Collapse results into rows keyed by `(dataset, units, iterations)`; a
/// sampler that appears twice in the same cell keeps the later result.
pub fn build_rows(results: &[RunResult]) -> Vec<TableRow> {
    let mut cells: BTreeMap<CellKey, (Option<f64>, Option<f64>)> = BTreeMap::new();
    for result in results {
        let key = (
            dataset_name(result),
            result.config.units,
            result.config.iterations,
        );
        let entry = cells.entry(key).or_default();
        match result.config.sampler {
            SamplerKind::Mcmc => entry.0 = Some(result.mean_accuracy),
            SamplerKind::SmcEa => entry.1 = Some(result.mean_accuracy),
        }
    }
    cells
        .into_iter()
        .map(|((dataset, units, iterations), (mcmc, smc_ea))| TableRow {
            dataset,
            units,
            iterations,
            mcmc,
            smc_ea,
        })
        .collect()
}

fn cell(value: Option<f64>) -> String {
    match value {
        Some(acc) => format!("{:.1}", acc * 100.0),
        None => "\u{2014}".to_string(),
    }
}

/// Aligned text table, one section per dataset, columns
/// `Chains_Trees | Iterations | MCMC | SMC-EA`.
pub fn compare_table(results: &[RunResult]) -> String {
    let rows = build_rows(results);
    let mut out = String::new();
    let mut current_dataset: Option<&str> = None;
    for row in &rows {
        if current_dataset != Some(row.dataset.as_str()) {
            if current_dataset.is_some() {
                out.push('\n');
            }
            out.push_str(&format!("{}\n", row.dataset));
            out.push_str(&format!(
                "{:>12} | {:>10} | {:>6} | {:>6}\n",
                "Chains_Trees", "Iterations", "MCMC", "SMC-EA"
            ));
            current_dataset = Some(row.dataset.as_str());
        }
        out.push_str(&format!(
            "{:>12} | {:>10} | {:>6} | {:>6}\n",
            row.units,
            row.iterations,
            cell(row.mcmc),
            cell(row.smc_ea),
        ));
    }
    out
}

/// Same rows as CSV.
pub fn compare_table_csv(results: &[RunResult]) -> String {
    let mut out = String::from("dataset,chains_trees,iterations,mcmc,smc_ea\n");
    for row in build_rows(results) {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.dataset,
            row.units,
            row.iterations,
            cell(row.mcmc),
            cell(row.smc_ea),
        ));
    }
    out
}
