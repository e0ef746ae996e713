//! Versioned report envelope.
//!
//! Every command emits one JSON report: schema id, tool version, pinned RNG
//! identifier, the fully-materialized config, a deterministic `results`
//! section, and wall-clock timings. For a fixed config and seed the
//! `results` subtree is byte-identical across runs and thread counts;
//! `timings` carries no determinism guarantee and sits outside `results`.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub const REPORT_SCHEMA: &str = "stackstab-report/v1";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub rng: String,
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub timings: Timings,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
    pub threads: Option<usize>,
}

pub struct ReportBuilder {
    command: &'static str,
    started: Instant,
    threads: Option<usize>,
}

impl ReportBuilder {
    pub fn new(command: &'static str, threads: Option<usize>) -> Self {
        ReportBuilder {
            command,
            started: Instant::now(),
            threads,
        }
    }

    pub fn finish(
        self,
        config: &impl Serialize,
        results: &impl Serialize,
    ) -> Result<Report, CliError> {
        Ok(Report {
            schema: REPORT_SCHEMA.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng: stackstab::rng::GENERATOR_ID.to_string(),
            command: self.command.to_string(),
            config: serde_json::to_value(config)
                .map_err(|e| CliError::runtime_msg(format!("config echo: {e}")))?,
            results: serde_json::to_value(results)
                .map_err(|e| CliError::runtime_msg(format!("results: {e}")))?,
            timings: Timings {
                total_ms: self.started.elapsed().as_secs_f64() * 1e3,
                threads: self.threads,
            },
        })
    }
}

/// Structural validation of a report document: the fields every report must
/// carry, with the right shapes.
pub fn validate_report(value: &Value) -> Result<(), String> {
    let obj = value.as_object().ok_or("report is not a JSON object")?;
    for field in [
        "schema",
        "tool_version",
        "rng",
        "command",
        "config",
        "results",
        "timings",
    ] {
        if !obj.contains_key(field) {
            return Err(format!("missing field '{field}'"));
        }
    }
    if obj["schema"] != REPORT_SCHEMA {
        return Err(format!(
            "schema is {}, expected {REPORT_SCHEMA}",
            obj["schema"]
        ));
    }
    if !obj["results"].is_object() {
        return Err("results is not an object".to_string());
    }
    if !obj["config"].is_object() {
        return Err("config is not an object".to_string());
    }
    let known = [
        "gen-data",
        "stability",
        "bounds",
        "equivalence",
        "experiment",
    ];
    let command = obj["command"].as_str().ok_or("command is not a string")?;
    if !known.contains(&command) {
        return Err(format!("unknown command '{command}'"));
    }
    let timings = obj["timings"]
        .as_object()
        .ok_or("timings is not an object")?;
    if !timings.contains_key("total_ms") {
        return Err("timings.total_ms missing".to_string());
    }
    Ok(())
}

/// Emit the report: JSON to stdout or `--out`, a one-line summary to stderr.
pub fn emit(report: &Report, out: Option<&Path>, summary: &str) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::runtime_msg(format!("serialize report: {e}")))?;
    match out {
        Some(path) => {
            std::fs::write(path, text.as_bytes())
                .map_err(|e| CliError::runtime_msg(format!("{}: {e}", path.display())))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.write_all(b"\n"))
                .map_err(|e| CliError::runtime_msg(format!("stdout: {e}")))?;
        }
    }
    eprintln!("{summary}");
    Ok(())
}
