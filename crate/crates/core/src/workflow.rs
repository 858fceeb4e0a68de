//! File-based campaign workflows: QASM generation, simulated runs to CSV,
//! contingency analysis, and per-centre plot data.
//!
//! Results CSV layout (LF line endings, `.` decimal separator):
//!
//! ```text
//! Experiment,Output 0 %,Output 1 %,Output 0 count,Output 1 count,Shots
//! Precision(72),97.3125,2.6875,38925,1075,40000
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::GateKind;
use crate::factory::{build_circuit, campaign, CampaignError, ExperimentSpec, FactoryError};
use crate::labels::{parse_label, Basis, Config, ExperimentLabel, LabelError};
use crate::simulator::{derive_seed, simulate, Counts, NoiseModel, SimError};
use crate::stats::{
    analyze_table, flip_rate, format_percent, is_successful_attack, ChiSquare, ContingencyTable,
    CramersVResult, ExperimentResult, StatsError, SUCCESS_THRESHOLD,
};
use crate::topology::{load_device_map, CouplingGraph, Qubit, TopologyError};

pub const CSV_HEADER: [&str; 6] = [
    "Experiment",
    "Output 0 %",
    "Output 1 %",
    "Output 0 count",
    "Output 1 count",
    "Shots",
];

#[derive(Debug, Error)]
pub enum WorkflowError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("label `{text}`: {source}")]
    Label {
        text: String,
        #[source]
        source: LabelError,
    },
    #[error("noise model: {0}")]
    Noise(SimError),
    #[error(transparent)]
    Generation(#[from] CampaignError),
    #[error("{} experiment(s) failed: {}", .0.len(), .0.iter().map(|(l, e)| format!("[{l}] {e}")).collect::<Vec<_>>().join("; "))]
    Experiments(Vec<(String, String)>),
    #[error("CSV line {line}: {reason}")]
    Csv { line: u64, reason: String },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl WorkflowError {
    /// Process exit code: 2 for configuration problems, 1 for failures of
    /// individual experiments or rows.
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkflowError::Config(_)
            | WorkflowError::Topology(_)
            | WorkflowError::Label { .. }
            | WorkflowError::Noise(_) => 2,
            WorkflowError::Io { .. }
            | WorkflowError::Generation(_)
            | WorkflowError::Experiments(_)
            | WorkflowError::Csv { .. }
            | WorkflowError::Stats(_) => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> WorkflowError + '_ {
    move |source| WorkflowError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), WorkflowError> {
    fs::write(path, contents).map_err(io_err(path))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub map: String,
    pub labels: Vec<String>,
    pub shots: u64,
    pub noise: NoiseModel,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Prepare auto-inserted controls in |1> instead of |0>.
    pub control_prep_one: bool,
    pub angle: Option<f64>,
    /// Honor the labels' leading '-' neighbor-preparation flag.
    pub honor_neighbor_prep: bool,
}

impl CampaignConfig {
    pub fn new(labels: Vec<String>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            map: "eagle127".to_string(),
            labels,
            shots: crate::factory::DEFAULT_SHOTS,
            noise: NoiseModel::noiseless(),
            seed: 0,
            out_dir: out_dir.into(),
            control_prep_one: false,
            angle: None,
            honor_neighbor_prep: false,
        }
    }

    fn parsed_labels(&self) -> Result<Vec<ExperimentLabel>, WorkflowError> {
        self.labels
            .iter()
            .map(|text| {
                parse_label(text).map_err(|source| WorkflowError::Label {
                    text: text.clone(),
                    source,
                })
            })
            .collect()
    }

    fn validate(&self) -> Result<(Vec<ExperimentLabel>, CouplingGraph), WorkflowError> {
        if self.shots == 0 {
            return Err(WorkflowError::Config("shots must be at least 1".into()));
        }
        self.noise.validate().map_err(WorkflowError::Noise)?;
        let labels = self.parsed_labels()?;
        let graph = load_device_map(&self.map)?;
        Ok((labels, graph))
    }

    fn spec(&self, label: ExperimentLabel) -> ExperimentSpec {
        ExperimentSpec {
            label,
            shots: self.shots,
            angle_override: self.angle,
            honor_neighbor_prep: self.honor_neighbor_prep,
        }
    }

    fn ensure_out_dir(&self) -> Result<(), WorkflowError> {
        fs::create_dir_all(&self.out_dir).map_err(io_err(&self.out_dir))
    }
}

/// Reads one label per line, skipping blank lines and `#` comments.
pub fn read_labels_file(path: &Path) -> Result<Vec<String>, WorkflowError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

/// Reads and validates a noise configuration file.
pub fn read_noise_file(path: &Path) -> Result<NoiseModel, WorkflowError> {
    let text = fs::read_to_string(path).map_err(|e| {
        WorkflowError::Config(format!("cannot read noise file {}: {e}", path.display()))
    })?;
    NoiseModel::parse(&text).map_err(WorkflowError::Noise)
}

/// Filesystem-safe stem for a label, e.g. `n1_cx_c72_t1_e1_4cross`.
pub fn file_stem(label: &ExperimentLabel) -> String {
    let mut stem = String::new();
    if label.neighbor_prep_one {
        stem.push_str("n1_");
    }
    if label.is_control() {
        stem.push_str("precision");
    } else {
        stem.push_str(label.gate.name());
    }
    let _ = write!(stem, "_c{}", label.center);
    if label.target_prep_one {
        stem.push_str("_t1");
    }
    if !label.is_control() {
        let _ = write!(
            stem,
            "_e{}_{}",
            label.extra_sets,
            label.config.token().replace(' ', "")
        );
    }
    stem
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub label: String,
    pub file: String,
    pub ops: usize,
    pub cx: usize,
    pub single_qubit: usize,
    pub barriers: usize,
    pub measures: usize,
}

/// Writes one QASM file per label plus `manifest.csv`. Nothing is written
/// if any label fails to build.
pub fn gen(config: &CampaignConfig) -> Result<Vec<ManifestEntry>, WorkflowError> {
    let (labels, graph) = config.validate()?;
    let specs: Vec<_> = labels.into_iter().map(|l| config.spec(l)).collect();
    let circuits = campaign(&specs, &graph)?;
    config.ensure_out_dir()?;

    let mut manifest = Vec::with_capacity(circuits.len());
    for (idx, (label, circuit)) in circuits.iter().enumerate() {
        let file = format!("{idx:03}_{}.qasm", file_stem(label));
        write_file(&config.out_dir.join(&file), &circuit.emit_qasm())?;
        manifest.push(ManifestEntry {
            label: label.to_string(),
            file,
            ops: circuit.ops.len(),
            cx: circuit.count(GateKind::Cx),
            single_qubit: circuit
                .ops
                .iter()
                .filter(|g| g.kind.is_single_qubit_unitary())
                .count(),
            barriers: circuit.count(GateKind::Barrier),
            measures: circuit.count(GateKind::Measure),
        });
    }

    let mut text = String::from("Experiment,File,Ops,CX,Single-qubit,Barriers,Measures\n");
    for m in &manifest {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{}",
            m.label, m.file, m.ops, m.cx, m.single_qubit, m.barriers, m.measures
        );
    }
    write_file(&config.out_dir.join("manifest.csv"), &text)?;
    Ok(manifest)
}

/// Label list with a control inserted ahead of the first experiment on each
/// centre that does not already have one.
pub fn with_controls(labels: &[ExperimentLabel], control_prep_one: bool) -> Vec<ExperimentLabel> {
    let explicit: HashSet<Qubit> = labels
        .iter()
        .filter(|l| l.is_control())
        .map(|l| l.center)
        .collect();
    let mut covered = HashSet::new();
    let mut out = Vec::with_capacity(labels.len() + 4);
    for label in labels {
        if covered.insert(label.center) && !explicit.contains(&label.center) {
            out.push(ExperimentLabel {
                target_prep_one: control_prep_one,
                ..ExperimentLabel::control(label.center)
            });
        }
        out.push(*label);
    }
    out
}

pub fn csv_row(label: &ExperimentLabel, counts: &Counts) -> String {
    format!(
        "{},{},{},{},{},{}",
        label,
        format_percent(counts.n0, counts.shots),
        format_percent(counts.n1, counts.shots),
        counts.n0,
        counts.n1,
        counts.shots
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub csv_path: PathBuf,
    pub rows: Vec<(ExperimentLabel, Counts)>,
    pub failures: Vec<(String, String)>,
}

/// Simulates every label (plus auto-inserted controls) and writes
/// `results.csv`. Rows appear in label order regardless of scheduling.
/// Experiments that fail are left out of the CSV and listed in the report.
pub fn run(config: &CampaignConfig) -> Result<RunReport, WorkflowError> {
    let (labels, graph) = config.validate()?;
    let expanded = with_controls(&labels, config.control_prep_one);

    let outcomes: Vec<Result<Counts, String>> = expanded
        .par_iter()
        .map(|label| {
            let circuit = build_circuit(&config.spec(*label), &graph)
                .map_err(|e: FactoryError| e.to_string())?;
            simulate(
                &circuit,
                &graph,
                &config.noise,
                derive_seed(config.seed, label),
                config.shots,
            )
            .map_err(|e| e.to_string())
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (label, outcome) in expanded.iter().zip(outcomes) {
        match outcome {
            Ok(counts) => rows.push((*label, counts)),
            Err(e) => failures.push((label.to_string(), e)),
        }
    }

    let mut text = CSV_HEADER.join(",");
    text.push('\n');
    for (label, counts) in &rows {
        text.push_str(&csv_row(label, counts));
        text.push('\n');
    }
    config.ensure_out_dir()?;
    let csv_path = config.out_dir.join("results.csv");
    write_file(&csv_path, &text)?;
    Ok(RunReport {
        csv_path,
        rows,
        failures,
    })
}

/// Parses a results CSV into experiment results, checking counts against
/// the shot total and the percentage columns.
pub fn read_results(text: &str) -> Result<Vec<ExperimentResult>, WorkflowError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| WorkflowError::Csv {
        line: 1,
        reason: e.to_string(),
    })?;
    if headers.is_empty() && text.trim().is_empty() {
        return Ok(Vec::new());
    }
    if headers.iter().ne(CSV_HEADER) {
        return Err(WorkflowError::Csv {
            line: 1,
            reason: format!("expected header `{}`", CSV_HEADER.join(",")),
        });
    }

    let mut results = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| WorkflowError::Csv {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fail = |reason: String| WorkflowError::Csv { line, reason };
        let label = parse_label(&record[0]).map_err(|e| fail(format!("`{}`: {e}", &record[0])))?;
        let int = |i: usize| {
            record[i]
                .parse::<u64>()
                .map_err(|_| fail(format!("{} `{}` is not a count", CSV_HEADER[i], &record[i])))
        };
        let (n0, n1, shots) = (int(3)?, int(4)?, int(5)?);
        if n0.checked_add(n1) != Some(shots) || shots == 0 {
            return Err(fail(format!(
                "counts {n0} + {n1} do not match {shots} shots"
            )));
        }
        for (col, count) in [(1, n0), (2, n1)] {
            let pct: f64 = record[col].parse().map_err(|_| {
                fail(format!(
                    "{} `{}` is not a number",
                    CSV_HEADER[col], &record[col]
                ))
            })?;
            let exact = count as f64 * 100.0 / shots as f64;
            if (pct - exact).abs() > 1e-4 {
                return Err(fail(format!(
                    "{} is {pct} but counts give {}",
                    CSV_HEADER[col],
                    format_percent(count, shots)
                )));
            }
        }
        let result = ExperimentResult::new(label, Counts { shots, n0, n1 })
            .map_err(|e| fail(e.to_string()))?;
        results.push(result);
    }
    Ok(results)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowSummary {
    pub label: ExperimentLabel,
    pub counts: Counts,
    pub flipped: u64,
    pub flip_rate: f64,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub rows: Vec<RowSummary>,
    pub table: ContingencyTable,
    pub chi: ChiSquare,
    pub cramers: CramersVResult,
}

fn flipped_count(r: &ExperimentResult) -> u64 {
    match r.prepared {
        Basis::Zero => r.counts.n1,
        Basis::One => r.counts.n0,
    }
}

impl Analysis {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("Experiment,Prepared,Flip %,Success\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                row.label,
                u8::from(row.label.target_prep_one),
                format_percent(row.flipped, row.counts.shots),
                if row.success { "yes" } else { "no" }
            );
        }

        out.push_str("\nContingency table\n");
        out.push_str("Experiment,Output 0 frequency,Output 1 frequency,Total,Expected 0,Expected 1,(O-E)^2/E 0,(O-E)^2/E 1\n");
        for (i, (label, obs)) in self.table.rows.iter().enumerate() {
            let e = self.chi.expected[i];
            let c = self.chi.contributions[i];
            let _ = writeln!(
                out,
                "{label},{},{},{},{:.2},{:.2},{:.2},{:.2}",
                obs[0],
                obs[1],
                obs[0] + obs[1],
                e[0],
                e[1],
                c[0],
                c[1]
            );
        }
        let cols = self.table.column_totals();
        let _ = writeln!(
            out,
            "Total,{},{},{}",
            cols[0],
            cols[1],
            self.table.grand_total()
        );

        let v = &self.cramers;
        out.push_str("\nCramér's V\n");
        let _ = writeln!(out, "chi2 = {:.2}", v.chi2);
        let _ = writeln!(out, "n = {}", v.n);
        let _ = writeln!(out, "min(c-1,r-1) = {}", v.min_dim);
        let _ = writeln!(out, "V = {:.4}", v.v);
        let _ = writeln!(out, "band = {}", v.band);
        out
    }
}

/// Per-row flip rates and success flags plus the chi-square / Cramér's V
/// analysis of the whole table.
pub fn analyze(csv_text: &str) -> Result<Analysis, WorkflowError> {
    let results = read_results(csv_text)?;
    let table = ContingencyTable::from_results(&results);
    let (chi, cramers) = analyze_table(&table)?;
    let rows = results
        .iter()
        .map(|r| RowSummary {
            label: r.label,
            counts: r.counts,
            flipped: flipped_count(r),
            flip_rate: flip_rate(r),
            success: is_successful_attack(r),
        })
        .collect();
    Ok(Analysis {
        rows,
        table,
        chi,
        cramers,
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlotReport {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Writes one whitespace-delimited data file per (centre, prepared state)
/// group, and optionally an SVG bar chart with the success threshold.
pub fn plotdata(csv_text: &str, out_dir: &Path, svg: bool) -> Result<PlotReport, WorkflowError> {
    let results = read_results(csv_text)?;
    let mut report = PlotReport::default();
    if results.is_empty() {
        report
            .warnings
            .push("no result rows; nothing to plot".to_string());
        return Ok(report);
    }

    let mut groups: BTreeMap<(Qubit, u8), Vec<&ExperimentResult>> = BTreeMap::new();
    for r in &results {
        let prepared = u8::from(r.prepared == Basis::One);
        groups
            .entry((r.label.center, prepared))
            .or_default()
            .push(r);
    }

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    for ((centre, prepared), rows) in groups {
        let stem = format!("centre_{centre}_from{prepared}");
        let mut text = format!(
            "# centre {centre}, prepared |{prepared}>, threshold {:.4} %\n# label flip_percent success\n",
            SUCCESS_THRESHOLD * 100.0
        );
        let bars: Vec<(String, f64, bool)> = rows
            .iter()
            .map(|r| {
                (
                    r.label.to_string(),
                    flip_rate(r) * 100.0,
                    is_successful_attack(r),
                )
            })
            .collect();
        for (r, (label, _, success)) in rows.iter().zip(&bars) {
            let _ = writeln!(
                text,
                "\"{label}\" {} {}",
                format_percent(flipped_count(r), r.counts.shots),
                u8::from(*success)
            );
        }
        let path = out_dir.join(format!("{stem}.dat"));
        write_file(&path, &text)?;
        report.files.push(path);

        if svg {
            let path = out_dir.join(format!("{stem}.svg"));
            let title = format!(
                "Centre {centre}: flipping |{prepared}> to |{}>",
                1 - prepared
            );
            write_file(&path, &bar_chart_svg(&title, &bars))?;
            report.files.push(path);
        }
    }
    Ok(report)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Self-contained SVG bar chart of flip percentages with a dashed line at
/// the success threshold. Successful bars are drawn in a darker colour.
fn bar_chart_svg(title: &str, bars: &[(String, f64, bool)]) -> String {
    const BAR: f64 = 36.0;
    const GAP: f64 = 24.0;
    const LEFT: f64 = 60.0;
    const TOP: f64 = 40.0;
    const PLOT_H: f64 = 240.0;
    const BOTTOM: f64 = 140.0;
    let width = LEFT + bars.len() as f64 * (BAR + GAP) + GAP;
    let height = TOP + PLOT_H + BOTTOM;
    let y_of = |pct: f64| TOP + PLOT_H * (1.0 - pct / 100.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{LEFT}" y="20" font-size="13">{}</text>"#,
        xml_escape(title)
    );
    for tick in [0, 25, 50, 75, 100] {
        let y = y_of(tick as f64);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.0}" y="{:.1}" text-anchor="end">{tick}%</text>"##,
            width - GAP / 2.0,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for (i, (label, pct, success)) in bars.iter().enumerate() {
        let x = LEFT + GAP + i as f64 * (BAR + GAP);
        let y = y_of(*pct);
        let fill = if *success { "#1f4e9c" } else { "#8fb3e6" };
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.1}" y="{y:.1}" width="{BAR}" height="{:.1}" fill="{fill}"><title>{} {pct:.4}%</title></rect>"#,
            TOP + PLOT_H - y,
            xml_escape(label)
        );
        let lx = x + BAR / 2.0;
        let ly = TOP + PLOT_H + 10.0;
        let _ = writeln!(
            svg,
            r#"<text x="{lx:.1}" y="{ly:.1}" transform="rotate(60 {lx:.1} {ly:.1})">{}</text>"#,
            xml_escape(label)
        );
    }
    let ty = y_of(SUCCESS_THRESHOLD * 100.0);
    let _ = writeln!(
        svg,
        r##"<line x1="{LEFT}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#c0392b" stroke-dasharray="6 4"/><text x="{:.1}" y="{:.1}" fill="#c0392b" text-anchor="end">2/3</text>"##,
        width - GAP / 2.0,
        width - GAP / 2.0,
        ty - 4.0
    );
    svg.push_str("</svg>\n");
    svg
}

/// Labels for one configuration swept over several centres.
pub fn centre_sweep(centres: &[Qubit], extra_sets: u32, config: Config) -> Vec<String> {
    centres
        .iter()
        .map(|&c| ExperimentLabel::cx(c, extra_sets, config).to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_stems() {
        let l = parse_label("-cx(-72-1) 4 cross").unwrap();
        assert_eq!(file_stem(&l), "n1_cx_c72_t1_e1_4cross");
        assert_eq!(file_stem(&ExperimentLabel::control(93)), "precision_c93");
        assert_eq!(
            file_stem(&parse_label("sxdg(93-1000) 6").unwrap()),
            "sxdg_c93_e1000_6"
        );
    }

    #[test]
    fn controls_inserted_once_per_centre() {
        let labels: Vec<_> = [
            "cx(72-0) 30",
            "cx(72-1) 30",
            "cx(15-0) 30",
            "Precision(93)",
            "p(93-1000) 6",
        ]
        .iter()
        .map(|s| parse_label(s).unwrap())
        .collect();
        let out: Vec<String> = with_controls(&labels, false)
            .iter()
            .map(|l| l.to_string())
            .collect();
        assert_eq!(
            out,
            [
                "Precision(72)",
                "cx(72-0) 30",
                "cx(72-1) 30",
                "Precision(15)",
                "cx(15-0) 30",
                "Precision(93)",
                "p(93-1000) 6"
            ]
        );
        let one = with_controls(&labels[..1], true);
        assert_eq!(one[0].to_string(), "Precision(-72)");
    }

    #[test]
    fn csv_rows() {
        let l = ExperimentLabel::control(72);
        assert_eq!(
            csv_row(&l, &Counts::new(40000, 0)),
            "Precision(72),100.0000,0.0000,40000,0,40000"
        );
    }

    #[test]
    fn read_results_errors() {
        let header = CSV_HEADER.join(",");
        let bad_counts = format!("{header}\nPrecision(72),50.0000,50.0000,10,10,30\n");
        assert!(matches!(
            read_results(&bad_counts),
            Err(WorkflowError::Csv { line: 2, .. })
        ));
        let bad_label = format!("{header}\nPrecision(72),50,50,1,1,2\nfoo(1-1) 3,50,50,1,1,2\n");
        assert!(matches!(
            read_results(&bad_label),
            Err(WorkflowError::Csv { line: 3, .. })
        ));
        let bad_pct = format!("{header}\nPrecision(72),40.0000,60.0000,1,1,2\n");
        assert!(matches!(
            read_results(&bad_pct),
            Err(WorkflowError::Csv { line: 2, .. })
        ));
        assert!(matches!(
            read_results("Label,A,B\n"),
            Err(WorkflowError::Csv { line: 1, .. })
        ));
        assert!(read_results("").unwrap().is_empty());
        assert!(read_results(&format!("{header}\n")).unwrap().is_empty());
    }

    #[test]
    fn single_row_analysis_fails() {
        let text = format!(
            "{}\nPrecision(72),97.3125,2.6875,38925,1075,40000\n",
            CSV_HEADER.join(",")
        );
        assert!(matches!(
            analyze(&text),
            Err(WorkflowError::Stats(StatsError::TooFewRows(1)))
        ));
    }
}
