use serde::Serialize;
use serde_json::Value;

use super::config::{Format, RunConfig};
use super::CliError;

/// A command result in every format it supports.
#[derive(Clone, Debug)]
pub struct Payload {
    pub json: Value,
    pub csv: Option<String>,
    pub text: String,
    pub natural: Format,
    pub warnings: Vec<String>,
    /// False when a check ran but did not hold.
    pub ok: bool,
}

impl Payload {
    pub fn json(value: impl Serialize, text: String) -> Self {
        Payload {
            json: serde_json::to_value(value).expect("payloads serialize"),
            csv: None,
            text,
            natural: Format::Json,
            warnings: Vec::new(),
            ok: true,
        }
    }

    pub fn csv(value: impl Serialize, csv: String) -> Self {
        Payload { csv: Some(csv.clone()), natural: Format::Csv, ..Payload::json(value, csv) }
    }

    pub fn warn(mut self, w: impl IntoIterator<Item = String>) -> Self {
        self.warnings.extend(w);
        self
    }

    pub fn check(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEnvelope<'a> {
    pub command: &'a [String],
    pub config: &'a RunConfig,
    pub timestamp: String,
    pub result: &'a Value,
    pub warnings: &'a [String],
}

/// Serializes `payload`, wrapped in an envelope unless `bare`.
pub fn emit(
    payload: &Payload,
    format: Option<Format>,
    bare: bool,
    argv: &[String],
    config: &RunConfig,
) -> Result<String, CliError> {
    let format = format.unwrap_or(payload.natural);
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let mut out = String::new();
    match format {
        Format::Json => {
            let s = if bare {
                serde_json::to_string_pretty(&payload.json)
            } else {
                serde_json::to_string_pretty(&ReportEnvelope {
                    command: argv,
                    config,
                    timestamp,
                    result: &payload.json,
                    warnings: &payload.warnings,
                })
            };
            out.push_str(&s.expect("envelopes serialize"));
            out.push('\n');
        }
        Format::Csv | Format::Text => {
            let body = if format == Format::Csv {
                payload
                    .csv
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("csv output is not available for this command".into()))?
            } else {
                &payload.text
            };
            if !bare {
                out.push_str(&format!("# command: {}\n# timestamp: {timestamp}\n", argv.join(" ")));
                for w in &payload.warnings {
                    out.push_str(&format!("# warning: {w}\n"));
                }
            }
            out.push_str(body);
            if !body.ends_with('\n') {
                out.push('\n');
            }
        }
    }
    Ok(out)
}
