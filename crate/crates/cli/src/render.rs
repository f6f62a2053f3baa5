//! Output rendering. Every command builds its whole output as one string
//! before anything is written, so a failed run never leaves partial output
//! on the sink.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Number text for CSV and plot output: the shortest decimal that parses
/// back to the same bits, in exponent form.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Friendlier numbers for the table format, still round-trip exact.
pub fn human(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e7).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub trait Render: Serialize {
    fn csv(&self) -> String;
    fn table(&self) -> String;
    /// Two-column data for external plotting, when the command has any.
    fn plot(&self) -> Option<String> {
        None
    }
}
