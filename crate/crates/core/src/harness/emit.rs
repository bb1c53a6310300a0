use super::config::ExperimentConfig;
use crate::error::Result;
use crate::report::ObservableReport;
use serde_json::{Map, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const ARTIFACT_VERSION: &str = concat!("spt-core ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Doc,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "table" => Some(OutputFormat::Table),
            "doc" => Some(OutputFormat::Doc),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Table => "tsv",
            OutputFormat::Doc => "json",
        }
    }
}

/// Labelled numeric table, e.g. a Rabi trajectory or the bulk/edge table.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<f64>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub reports: Vec<ObservableReport>,
    pub tables: Vec<ResultTable>,
}

impl RunOutput {
    pub fn report(&self, name: &str) -> Option<&ObservableReport> {
        self.reports.iter().find(|r| r.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.report(name).map(|r| r.value)
    }

    pub fn table(&self, name: &str) -> Option<&ResultTable> {
        self.tables.iter().find(|t| t.name == name)
    }
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&e) {
        trim(&format!("{:.*}", (11 - e) as usize, x))
    } else {
        format!("{}e{}", trim(mant), e)
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn round12(x: f64) -> Value {
    if x.is_finite() {
        let r: f64 = format!("{x:.11e}").parse().expect("round trip");
        Value::from(if r == 0.0 { 0.0 } else { r })
    } else {
        Value::Null
    }
}

fn meta_cell(r: &ObservableReport) -> String {
    r.metadata.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

pub fn render_table(out: &RunOutput) -> String {
    let cfg = &out.config;
    let mut s = String::new();
    let _ = writeln!(s, "# experiment: {}", cfg.experiment.name());
    let _ = writeln!(s, "# version: {ARTIFACT_VERSION}");
    let _ = writeln!(s, "# config_hash: {}", cfg.hash());
    let _ = writeln!(s, "# seed: {}", cfg.seed.map_or("none".into(), |v| v.to_string()));
    let _ = writeln!(s, "name\tvalue\terror\tmeta");
    for r in &out.reports {
        let _ = writeln!(s, "{}\t{}\t{}\t{}", r.name, fmt12(r.value), fmt12(r.error), meta_cell(r));
    }
    for t in &out.tables {
        let _ = writeln!(s, "\n# table: {}", t.name);
        let _ = writeln!(s, "row\t{}", t.columns.join("\t"));
        for (label, vals) in &t.rows {
            let cells: Vec<String> = vals.iter().map(|v| fmt12(*v)).collect();
            let _ = writeln!(s, "{label}\t{}", cells.join("\t"));
        }
    }
    s
}

pub fn render_doc(out: &RunOutput) -> String {
    let cfg = &out.config;
    let mut config = Map::new();
    for line in cfg.to_text().lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            config.insert(k.to_string(), Value::from(v));
        }
    }
    let reports: Vec<Value> = out
        .reports
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("name".into(), Value::from(r.name.clone()));
            m.insert("value".into(), round12(r.value));
            m.insert("error".into(), round12(r.error));
            m.insert("metadata".into(), Value::Object(r.metadata.iter().map(|(k, v)| (k.clone(), Value::from(v.clone()))).collect()));
            Value::Object(m)
        })
        .collect();
    let tables: Vec<Value> = out
        .tables
        .iter()
        .map(|t| {
            let mut m = Map::new();
            m.insert("name".into(), Value::from(t.name.clone()));
            m.insert("columns".into(), Value::from(t.columns.clone()));
            m.insert(
                "rows".into(),
                Value::Array(
                    t.rows
                        .iter()
                        .map(|(label, vals)| {
                            let mut row = vec![Value::from(label.clone())];
                            row.extend(vals.iter().map(|v| round12(*v)));
                            Value::Array(row)
                        })
                        .collect(),
                ),
            );
            Value::Object(m)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("artifact_version".into(), Value::from(ARTIFACT_VERSION));
    doc.insert("experiment".into(), Value::from(cfg.experiment.name()));
    doc.insert("config_hash".into(), Value::from(cfg.hash()));
    doc.insert("config".into(), Value::Object(config));
    doc.insert("reports".into(), Value::Array(reports));
    doc.insert("tables".into(), Value::Array(tables));
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
    text.push('\n');
    text
}

pub fn render(out: &RunOutput, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => render_table(out),
        OutputFormat::Doc => render_doc(out),
    }
}

/// `<experiment>-<hash prefix>.<ext>`.
pub fn output_file_name(cfg: &ExperimentConfig, format: OutputFormat) -> String {
    format!("{}-{}.{}", cfg.experiment.name(), &cfg.hash()[..12], format.extension())
}

pub fn emit_results(out: &RunOutput, format: OutputFormat, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(output_file_name(&out.config, format));
    std::fs::write(&path, render(out, format))?;
    Ok(path)
}
