use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn of(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub id: String,
    /// Statement of what was checked.
    pub formula: String,
    pub parameters: Value,
    pub verdict: Status,
    pub detail: Value,
    pub wall_ms: f64,
}

/// One coefficient of an expansion table.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub exponent: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub command: &'static str,
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub cases: Vec<CaseRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableRow>,
    pub summary: Summary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

impl Report {
    pub fn new(command: &'static str, suite: impl Into<String>) -> Self {
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            suite: suite.into(),
            seed: None,
            precision: None,
            cases: Vec::new(),
            table: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, case: CaseRecord) {
        match case.verdict {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Error => self.summary.error += 1,
        }
        self.cases.push(case);
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Tsv => self.write_tsv(out),
        }
    }

    fn write_tsv(&self, out: &mut impl Write) -> io::Result<()> {
        write!(out, "# schema={} version={} command={} suite={}", self.schema, self.version, self.command, self.suite)?;
        if let Some(s) = self.seed {
            write!(out, " seed={s}")?;
        }
        if let Some(p) = self.precision {
            write!(out, " precision={p}")?;
        }
        writeln!(out)?;
        writeln!(out, "id\tverdict\tparameters\tdetail\twall_ms")?;
        for c in &self.cases {
            writeln!(out, "{}\t{}\t{}\t{}\t{:.3}", c.id, c.verdict.as_str(), c.parameters, c.detail, c.wall_ms)?;
        }
        if !self.table.is_empty() {
            writeln!(out, "exponent\tlhs\trhs\tmatch")?;
            for r in &self.table {
                writeln!(out, "{}\t{}\t{}\t{}", r.exponent, r.lhs, r.rhs, r.matches)?;
            }
        }
        writeln!(out, "# pass={} fail={} error={}", self.summary.pass, self.summary.fail, self.summary.error)
    }
}
