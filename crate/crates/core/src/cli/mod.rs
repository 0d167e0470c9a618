//! Job runner behind the `pllab` binary. A [`JobSpec`] fully determines the
//! [`Report`]; rendering is byte-stable for a fixed job.

mod input;
mod suites;

use std::fmt;
use std::path::PathBuf;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use input::{parse_document, CaseInput, Expected};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Norm,
    Pl,
    L,
    Compare,
    VerifyPaper,
    Properties,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Pl => "pl",
            Command::L => "l",
            Command::Compare => "compare",
            Command::VerifyPaper => "verify-paper",
            Command::Properties => "properties",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "norm" => Command::Norm,
            "pl" => Command::Pl,
            "l" => Command::L,
            "compare" => Command::Compare,
            "verify-paper" => Command::VerifyPaper,
            "properties" => Command::Properties,
            _ => return None,
        })
    }

    fn needs_input(self) -> bool {
        !matches!(self, Command::VerifyPaper | Command::Properties)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where the input document comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Path(PathBuf),
    Inline(String),
}

impl InputSource {
    /// Text starting with `{` is inline JSON, anything else a path.
    pub fn from_arg(s: &str) -> Self {
        if s.trim_start().starts_with('{') {
            InputSource::Inline(s.to_string())
        } else {
            InputSource::Path(PathBuf::from(s))
        }
    }

    fn read(&self) -> Result<String> {
        match self {
            InputSource::Inline(s) => Ok(s.clone()),
            InputSource::Path(p) => std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", p.display()))),
        }
    }

    fn as_arg(&self) -> String {
        match self {
            InputSource::Path(p) => shell_quote(&p.display().to_string()),
            InputSource::Inline(s) => shell_quote(s),
        }
    }
}

fn shell_quote(s: &str) -> String {
    if !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_./=:".contains(c))
    {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<InputSource>,
    pub budget: usize,
    pub seed: u64,
    pub format: Format,
    pub tolerance: f64,
    /// Largest `n` of the V example in `verify-paper`.
    pub n_max: usize,
    /// Trials per suite in `properties`.
    pub trials: usize,
    /// Restricts the run to one case id.
    pub case: Option<String>,
    /// Records wall time per case; breaks byte-identical reruns.
    pub timing: bool,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            input: None,
            budget: 200,
            seed: 0,
            format: Format::Json,
            tolerance: 1e-9,
            n_max: 4,
            trials: 1000,
            case: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        if self.budget == 0 || self.trials == 0 || self.n_max == 0 {
            return Err(Error::InvalidParameter(
                "budget, trials and n-max must be positive".into(),
            ));
        }
        if self.command.needs_input() && self.input.is_none() {
            return Err(Error::InvalidParameter(format!(
                "command {} needs --input",
                self.command.name()
            )));
        }
        Ok(())
    }

    /// Command line reproducing one case of this job.
    pub fn repro(&self, case: &str) -> String {
        let mut s = format!(
            "pllab --command {} --budget {} --seed {} --tolerance {:e}",
            self.command.name(),
            self.budget,
            self.seed,
            self.tolerance
        );
        if let Some(input) = &self.input {
            s += &format!(" --input {}", input.as_arg());
        }
        match self.command {
            Command::VerifyPaper => s += &format!(" --n-max {}", self.n_max),
            Command::Properties => s += &format!(" --trials {}", self.trials),
            _ => {}
        }
        s += &format!(" --case {}", shell_quote(case));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Gap,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Gap => "gap",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct CaseRecord {
    pub id: String,
    pub inputs_digest: String,
    pub lower: f64,
    pub upper: f64,
    pub expected: Option<f64>,
    pub status: Status,
    pub message: Option<String>,
    /// Brackets, witnesses and counters.
    pub detail: Value,
    pub repro: Option<String>,
    pub wall_time_ms: Option<f64>,
}

impl CaseRecord {
    pub(crate) fn new(id: impl Into<String>, inputs: &Value) -> Self {
        CaseRecord {
            id: id.into(),
            inputs_digest: digest(inputs),
            lower: f64::NAN,
            upper: f64::NAN,
            expected: None,
            status: Status::Pass,
            message: None,
            detail: Value::Null,
            repro: None,
            wall_time_ms: None,
        }
    }

    pub(crate) fn fail(&mut self, message: impl Into<String>) {
        self.status = Status::Fail;
        self.message.get_or_insert_with(|| message.into());
    }

    pub(crate) fn gap(&mut self, message: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Gap;
            self.message = Some(message.into());
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("id".into(), json!(self.id));
        m.insert("inputs_digest".into(), json!(self.inputs_digest));
        m.insert("lower".into(), num(self.lower));
        m.insert("upper".into(), num(self.upper));
        m.insert("expected".into(), self.expected.map_or(Value::Null, num));
        m.insert("status".into(), json!(self.status.name()));
        if let Some(msg) = &self.message {
            m.insert("message".into(), json!(msg));
        }
        if let Some(r) = &self.repro {
            m.insert("repro".into(), json!(r));
        }
        if let Some(t) = self.wall_time_ms {
            m.insert("wall_time_ms".into(), json!(t));
        }
        m.insert("detail".into(), self.detail.clone());
        Value::Object(m)
    }
}

/// JSON numbers cannot hold infinities or NaN; those become strings.
pub(crate) fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("serializable");
    let h = Sha256::digest(&bytes);
    h.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: Command,
    pub seed: u64,
    pub budget: usize,
    pub tolerance: f64,
    /// Sorted by id.
    pub cases: Vec<CaseRecord>,
}

impl Report {
    pub fn count(&self, s: Status) -> usize {
        self.cases.iter().filter(|c| c.status == s).count()
    }

    /// 0 when every case passes, 1 on any violation, 2 when the only
    /// problems are unresolved gaps.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            1
        } else if self.count(Status::Gap) > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command.name(),
            "seed": self.seed,
            "budget": self.budget,
            "tolerance": self.tolerance,
            "cases": self.cases.iter().map(CaseRecord::to_json).collect::<Vec<_>>(),
            "summary": {
                "total": self.cases.len(),
                "passed": self.count(Status::Pass),
                "gaps": self.count(Status::Gap),
                "failed": self.count(Status::Fail),
            },
        })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["case", "lower", "upper", "expected", "pass"])
            .expect("in-memory write");
        for c in &self.cases {
            w.write_record([
                c.id.clone(),
                fmt_num(c.lower),
                fmt_num(c.upper),
                c.expected.map(fmt_num).unwrap_or_default(),
                c.status.name().to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

/// Runs a job. Errors are input errors (exit code 3); assertion outcomes are
/// in the report.
pub fn run(job: &JobSpec) -> Result<Report> {
    job.validate()?;
    let mut cases = match job.command {
        Command::VerifyPaper => suites::verify_paper(job),
        Command::Properties => suites::properties(job),
        cmd => {
            let text = job.input.as_ref().expect("validated").read()?;
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| Error::schema("", format!("invalid JSON: {e}")))?;
            let inputs = parse_document(&doc, cmd)?;
            let selected: Vec<CaseInput> = match &job.case {
                Some(id) => inputs.into_iter().filter(|c| &c.id == id).collect(),
                None => inputs,
            };
            let mut out = Vec::new();
            for c in &selected {
                out.extend(suites::run_case(job, c)?);
            }
            out
        }
    };
    if let (Some(id), true) = (&job.case, !job.command.needs_input()) {
        cases.retain(|c| &c.id == id);
    }
    if job.case.is_some() && cases.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no case with id {:?}",
            job.case.as_deref().unwrap_or_default()
        )));
    }
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    for c in &mut cases {
        if c.status != Status::Pass {
            c.repro = Some(job.repro(&c.id));
        }
    }
    Ok(Report {
        command: job.command,
        seed: job.seed,
        budget: job.budget,
        tolerance: job.tolerance,
        cases,
    })
}

/// Bracket status against an optional expected value.
pub(crate) fn judge(
    record: &mut CaseRecord,
    lower: f64,
    upper: f64,
    sound: bool,
    expected: Option<f64>,
    tol: f64,
) {
    record.lower = lower;
    record.upper = upper;
    record.expected = expected;
    let scale = tol * upper.abs().max(1.0);
    if !sound || lower > upper + scale {
        record.fail(format!(
            "unsound bracket: lower {lower} exceeds upper {upper}"
        ));
    }
    if let Some(x) = expected {
        let xs = tol * x.abs().max(1.0);
        if lower > x + xs || upper < x - xs {
            record.fail(format!("expected {x} lies outside [{lower}, {upper}]"));
        }
    }
    if upper - lower > scale {
        record.gap(format!("bracket [{lower}, {upper}] did not close"));
    }
}
