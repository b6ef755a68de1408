//! Row encodings shared by every subcommand.
//!
//! Rows are flat structs of strings and integers, so JSON and CSV both encode
//! them losslessly and Markdown is derived from the CSV form.

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use wblow::report::markdown_table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Md,
    Json,
    Csv,
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn from_csv<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .context("reading CSV")
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    serde_json::from_str(text).context("reading JSON")
}

fn csv_to_markdown(text: &str) -> Result<String> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    let rows = rd
        .records()
        .map(|r| r.map(|rec| rec.iter().map(|c| c.replace('|', "\\|")).collect()))
        .collect::<std::result::Result<Vec<Vec<String>>, _>>()?;
    let refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    Ok(markdown_table(&refs, &rows))
}

/// Encodes rows; an empty list still yields a header line for CSV and Markdown.
pub fn render<T: Serialize>(rows: &[T], headers: &[&str], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Csv if rows.is_empty() => Ok(headers.join(",") + "\n"),
        Format::Csv => to_csv(rows),
        Format::Md if rows.is_empty() => Ok(markdown_table(headers, &[])),
        Format::Md => csv_to_markdown(&to_csv(rows)?),
    }
}
