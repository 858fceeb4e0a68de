//! Flip rates, attack success, and chi-square / Cramér's V over the
//! experiment × outcome contingency table.

use std::fmt;

use thiserror::Error;

use crate::labels::{Basis, ExperimentLabel};
use crate::simulator::Counts;

/// Attacks succeed when strictly more than this fraction of shots flip.
pub const SUCCESS_THRESHOLD: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("counts do not add up: {n0} + {n1} != {shots}")]
    InvalidCounts { n0: u64, n1: u64, shots: u64 },
    #[error("experiment has zero shots")]
    EmptyExperiment,
    #[error("`{0}` is not a control experiment")]
    NotAControl(String),
    #[error("contingency table needs at least 2 rows, found {0}")]
    TooFewRows(usize),
    #[error("outcome column {0} is empty; expected frequencies would be zero")]
    DegenerateColumn(usize),
    #[error("row {0} has no observations")]
    EmptyRow(usize),
    #[error("invalid table dimensions r = {r}, c = {c}")]
    InvalidDims { r: usize, c: usize },
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("chi-square statistic {0} is negative or not finite")]
    BadStatistic(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub label: ExperimentLabel,
    pub counts: Counts,
    pub prepared: Basis,
}

impl ExperimentResult {
    /// Result whose prepared state follows the label's centre-prep flag.
    pub fn new(label: ExperimentLabel, counts: Counts) -> Result<Self, StatsError> {
        let result = Self {
            prepared: label.prepared(),
            label,
            counts,
        };
        result.validate()?;
        Ok(result)
    }

    pub fn validate(&self) -> Result<(), StatsError> {
        let Counts { shots, n0, n1 } = self.counts;
        if !self.counts.is_valid() {
            return Err(StatsError::InvalidCounts { n0, n1, shots });
        }
        if shots == 0 {
            return Err(StatsError::EmptyExperiment);
        }
        Ok(())
    }

    fn flipped(&self) -> u64 {
        match self.prepared {
            Basis::Zero => self.counts.n1,
            Basis::One => self.counts.n0,
        }
    }
}

/// Fraction of shots whose outcome differs from the prepared state.
pub fn flip_rate(result: &ExperimentResult) -> f64 {
    result.flipped() as f64 / result.counts.shots as f64
}

pub fn is_successful_attack(result: &ExperimentResult) -> bool {
    flip_rate(result) > SUCCESS_THRESHOLD
}

/// Fraction of a control experiment's shots that read back the prepared state.
pub fn precision_baseline(control: &ExperimentResult) -> Result<f64, StatsError> {
    if !control.label.is_control() {
        return Err(StatsError::NotAControl(control.label.to_string()));
    }
    Ok(1.0 - flip_rate(control))
}

/// `count / shots` as a percentage with exactly four decimals, rounded half
/// up in integer arithmetic so the text is independent of float formatting.
pub fn format_percent(count: u64, shots: u64) -> String {
    assert!(shots > 0, "percentage of zero shots");
    let scaled = (u128::from(count) * 2_000_000 + u128::from(shots)) / (2 * u128::from(shots));
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

/// Observed outcome frequencies, one row per experiment, columns outcome 0/1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContingencyTable {
    pub rows: Vec<(String, [u64; 2])>,
}

impl ContingencyTable {
    pub fn from_results<'a>(results: impl IntoIterator<Item = &'a ExperimentResult>) -> Self {
        Self {
            rows: results
                .into_iter()
                .map(|r| (r.label.to_string(), [r.counts.n0, r.counts.n1]))
                .collect(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, n0: u64, n1: u64) {
        self.rows.push((label.into(), [n0, n1]));
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        2
    }

    pub fn row_total(&self, i: usize) -> u64 {
        self.rows[i].1.iter().sum()
    }

    pub fn column_totals(&self) -> [u64; 2] {
        self.rows
            .iter()
            .fold([0, 0], |acc, (_, r)| [acc[0] + r[0], acc[1] + r[1]])
    }

    pub fn grand_total(&self) -> u64 {
        self.column_totals().iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub chi2: f64,
    /// `row_total * col_total / n` per cell.
    pub expected: Vec<[f64; 2]>,
    /// `(O - E)^2 / E` per cell.
    pub contributions: Vec<[f64; 2]>,
}

/// Pearson chi-square without continuity correction.
pub fn chi_square(table: &ContingencyTable) -> Result<ChiSquare, StatsError> {
    if table.row_count() < 2 {
        return Err(StatsError::TooFewRows(table.row_count()));
    }
    let cols = table.column_totals();
    if let Some(j) = cols.iter().position(|&t| t == 0) {
        return Err(StatsError::DegenerateColumn(j));
    }
    if let Some(i) = (0..table.row_count()).find(|&i| table.row_total(i) == 0) {
        return Err(StatsError::EmptyRow(i));
    }
    let n = table.grand_total() as f64;

    let mut expected = Vec::with_capacity(table.row_count());
    let mut contributions = Vec::with_capacity(table.row_count());
    let mut chi2 = 0.0;
    for (i, (_, observed)) in table.rows.iter().enumerate() {
        let row_total = table.row_total(i) as f64;
        let e = [
            row_total * cols[0] as f64 / n,
            row_total * cols[1] as f64 / n,
        ];
        let contrib = [0, 1].map(|j| {
            let d = observed[j] as f64 - e[j];
            d * d / e[j]
        });
        chi2 += contrib[0] + contrib[1];
        expected.push(e);
        contributions.push(contrib);
    }
    Ok(ChiSquare {
        chi2,
        expected,
        contributions,
    })
}

/// Effect-size interpretation bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssociationBand {
    None,
    Weak,
    Moderate,
    Strong,
    Perfect,
}

impl AssociationBand {
    pub fn classify(v: f64) -> Self {
        const EPS: f64 = 1e-12;
        if v <= 0.0 {
            AssociationBand::None
        } else if v >= 1.0 - EPS {
            AssociationBand::Perfect
        } else if v <= 0.2 {
            AssociationBand::Weak
        } else if v <= 0.6 {
            AssociationBand::Moderate
        } else {
            AssociationBand::Strong
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            AssociationBand::None => "No association among the fields.",
            AssociationBand::Weak => "The result is weak, although statistically significant.",
            AssociationBand::Moderate => "The fields are moderately associated.",
            AssociationBand::Strong => "The fields are strongly associated.",
            AssociationBand::Perfect => "There is a perfect association among the fields.",
        }
    }
}

impl fmt::Display for AssociationBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CramersVResult {
    pub chi2: f64,
    pub n: u64,
    pub min_dim: usize,
    pub v: f64,
    pub band: AssociationBand,
}

/// `V = sqrt(chi2 / (n * min(c - 1, r - 1)))`.
pub fn cramers_v(chi2: f64, n: u64, r: usize, c: usize) -> Result<CramersVResult, StatsError> {
    if r < 2 || c < 2 {
        return Err(StatsError::InvalidDims { r, c });
    }
    if n == 0 {
        return Err(StatsError::EmptySample);
    }
    if !(chi2.is_finite() && chi2 >= 0.0) {
        return Err(StatsError::BadStatistic(chi2));
    }
    let min_dim = (c - 1).min(r - 1);
    let v = (chi2 / (n as f64 * min_dim as f64)).sqrt().min(1.0);
    Ok(CramersVResult {
        chi2,
        n,
        min_dim,
        v,
        band: AssociationBand::classify(v),
    })
}

/// Chi-square and Cramér's V of a table in one step.
pub fn analyze_table(table: &ContingencyTable) -> Result<(ChiSquare, CramersVResult), StatsError> {
    let chi = chi_square(table)?;
    let v = cramers_v(
        chi.chi2,
        table.grand_total(),
        table.row_count(),
        table.column_count(),
    )?;
    Ok((chi, v))
}
