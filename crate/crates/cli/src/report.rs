//! Output rendering: aligned key-value reports for single results and CSV
//! for sweep curves.
//!
//! CSV numeric cells use 17 significant digits so a parsed-back file
//! reproduces every f64 bit for bit.

use std::fs;
use std::path::Path;

use pst_core::design_tools::SweepOutcome;

use crate::error::{CliError, CliResult};

/// Aligned key-value block; keys padded to the longest, values as given.
#[derive(Debug, Default)]
pub struct Report {
    rows: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.rows.push((key.to_string(), value.into()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, format!("{value:.6}"));
    }

    pub fn push_u64(&mut self, key: &str, value: u64) {
        self.push(key, value.to_string());
    }

    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0) + 2;
        let mut text = String::new();
        for (key, value) in &self.rows {
            text.push_str(&format!("{key:<width$}{value}\n"));
        }
        text
    }
}

fn csv_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a sweep as CSV in the canonical row order. `std_error` is empty
/// for closed-form results, `vary_value` is empty when nothing varies.
pub fn render_csv(outcome: &SweepOutcome) -> String {
    let mut text = String::from("n,vary_name,vary_value,psi,psi_star,std_error\n");
    let vary_name = outcome
        .vary
        .as_ref()
        .map(|p| p.name())
        .unwrap_or("none");
    for point in &outcome.points {
        let vary_value = point.vary_value.map(csv_f64).unwrap_or_default();
        let std_error = point
            .result
            .mc
            .map(|mc| csv_f64(mc.std_error))
            .unwrap_or_default();
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            point.n_total,
            vary_name,
            vary_value,
            csv_f64(point.result.psi),
            csv_f64(point.result.psi_star),
            std_error,
        ));
    }
    text
}

/// Writes to the path when given, otherwise to standard output.
pub fn deliver(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_aligns_on_the_longest_key() {
        let mut r = Report::new();
        r.push("psi", "0.5");
        r.push("allocation_ratio", "1.0");
        let text = r.render();
        assert_eq!(text, "psi               0.5\nallocation_ratio  1.0\n");
    }

    #[test]
    fn csv_cells_round_trip_f64_exactly() {
        for v in [0.4620015816623433_f64, 1.0 / 3.0, 6.02e23, 1e-300] {
            let back: f64 = csv_f64(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
