//! Tabular output in the four supported formats. Every format carries the
//! same strings; JSON values are strings so large integers survive intact.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
    Markdown,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => self.plain(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Markdown => self.markdown(),
        }
    }

    fn widths(&self) -> Vec<usize> {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        widths
    }

    fn plain(&self) -> String {
        let widths = self.widths();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            format!("{}\n", padded.join("  ").trim_end())
        };
        let mut out = line(&self.headers);
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    fn csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> =
                    self.headers.iter().cloned().zip(row.iter().cloned().map(Value::String)).collect();
                Value::Object(object)
            })
            .collect();
        format!("{}\n", serde_json::to_string_pretty(&rows).expect("serializable"))
    }

    fn markdown(&self) -> String {
        let escape = |c: &String| c.replace('|', "\\|");
        let mut out = format!("| {} |\n", self.headers.iter().map(escape).collect::<Vec<_>>().join(" | "));
        out.push_str(&format!("|{}\n", "---|".repeat(self.headers.len())));
        for row in &self.rows {
            out.push_str(&format!("| {} |\n", row.iter().map(escape).collect::<Vec<_>>().join(" | ")));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Cached,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Computed => "computed",
            Provenance::Cached => "cached",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "computed" => Ok(Provenance::Computed),
            "cached" => Ok(Provenance::Cached),
            _ => Err(format!("unknown provenance {s:?}")),
        }
    }
}

/// One computed invariant: `key \t invariant \t value \t provenance`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputRecord {
    pub key: String,
    /// `N` or `hat`.
    pub invariant: String,
    pub value: BigInt,
    pub provenance: Provenance,
}

impl OutputRecord {
    pub fn table(&self) -> Table {
        let mut table = Table::new(["key", "invariant", "value", "source"]);
        table.push([self.key.clone(), self.invariant.clone(), self.value.to_string(), self.provenance.to_string()]);
        table
    }
}

impl fmt::Display for OutputRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.key, self.invariant, self.value, self.provenance)
    }
}

impl FromStr for OutputRecord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let fields: Vec<&str> = s.split('\t').collect();
        let [key, invariant, value, provenance] = fields[..] else {
            return Err(format!("expected four tab-separated fields in {s:?}"));
        };
        Ok(OutputRecord {
            key: key.to_string(),
            invariant: invariant.to_string(),
            value: value.parse().map_err(|_| format!("bad value {value:?}"))?,
            provenance: provenance.parse()?,
        })
    }
}
