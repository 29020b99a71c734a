//! Photoassociation line lists: CSV parsing, validation and serialization,
//! plus the bundled 174/176Yb87Rb F'=2 dataset.
//!
//! Line-list schema (one header row):
//!
//! ```text
//! isotopologue,delta_pa_cm1,dv,f_prime,rel_depth,b_rot_mcm1,delta_r1_mcm1,observed
//! ```
//!
//! Empty cells mean "not measured"; a leading `<` marks an upper bound
//! (unresolved structure). `b_rot_mcm1` and `delta_r1_mcm1` are in units of
//! 1e-3 cm-1.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{amu_to_electron_mass, reduced_mass};

pub const LINE_LIST_HEADER: [&str; 8] = [
    "isotopologue",
    "delta_pa_cm1",
    "dv",
    "f_prime",
    "rel_depth",
    "b_rot_mcm1",
    "delta_r1_mcm1",
    "observed",
];

pub const ISOTOPOLOGUE_HEADER: [&str; 3] = ["id", "mass_a_amu", "mass_b_amu"];

/// Lines closer to the atomic resonance than this could not be recorded.
pub const OBSERVATION_EDGE_CM1: f64 = -0.38;

const BUNDLED_LINES: &str = include_str!("../../../data/table1_lines.csv");
const BUNDLED_ISOTOPOLOGUES: &str = include_str!("../../../data/isotopologues.csv");

/// A tabulated quantity that may be missing or only bounded from above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Reading {
    Value(f64),
    UpperBound(f64),
    Absent,
}

impl Reading {
    /// The measured value; bounds and absences give `None`.
    pub fn value(self) -> Option<f64> {
        match self {
            Reading::Value(v) => Some(v),
            _ => None,
        }
    }

    fn parse(cell: &str) -> std::result::Result<Self, String> {
        let cell = cell.trim();
        if cell.is_empty() {
            return Ok(Reading::Absent);
        }
        if let Some(rest) = cell.strip_prefix('<') {
            return parse_f64(rest).map(Reading::UpperBound);
        }
        parse_f64(cell).map(Reading::Value)
    }

    fn to_cell(self) -> String {
        match self {
            Reading::Value(v) => v.to_string(),
            Reading::UpperBound(v) => format!("<{v}"),
            Reading::Absent => String::new(),
        }
    }

    fn check(self, field: &str, ok: impl Fn(f64) -> bool) -> std::result::Result<(), String> {
        match self {
            Reading::Value(v) | Reading::UpperBound(v) if !ok(v) => {
                Err(format!("{field} = {v} out of range"))
            }
            _ => Ok(()),
        }
    }
}

/// One observed (or searched-for) photoassociation line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineRecord {
    pub isotopologue: String,
    /// Detuning of the R'=0 component, cm-1.
    pub delta_pa: Option<f64>,
    /// `v' - v'_max`, negative; `None` when unassigned.
    pub dv: Option<i32>,
    pub f_prime: u8,
    pub rel_depth: Reading,
    /// Rotational constant in 1e-3 cm-1.
    pub b_rot_mcm1: Option<f64>,
    /// Splitting of the R'=1 components in 1e-3 cm-1.
    pub delta_r1_mcm1: Reading,
    pub observed: bool,
}

impl LineRecord {
    pub fn b_rot_cm1(&self) -> Option<f64> {
        self.b_rot_mcm1.map(|b| b * 1e-3)
    }

    /// Measured splitting in cm-1; upper bounds are not measurements.
    pub fn delta_r1_cm1(&self) -> Option<f64> {
        self.delta_r1_mcm1.value().map(|d| d * 1e-3)
    }

    fn validate(&self) -> std::result::Result<Vec<String>, String> {
        let mut warnings = Vec::new();
        if !matches!(self.f_prime, 1 | 2) {
            return Err(format!("f_prime must be 1 or 2, got {}", self.f_prime));
        }
        if let Some(dv) = self.dv {
            if dv > -1 {
                return Err(format!("dv must be <= -1, got {dv}"));
            }
        }
        self.rel_depth.check("rel_depth", |v| (0.0..=1.0).contains(&v))?;
        if let Some(b) = self.b_rot_mcm1 {
            if !(b > 0.0 && b.is_finite()) {
                return Err(format!("b_rot_mcm1 must be positive, got {b}"));
            }
        }
        self.delta_r1_mcm1
            .check("delta_r1_mcm1", |v| v >= 0.0 && v.is_finite())?;
        match (self.observed, self.delta_pa) {
            (true, None) => return Err("observed line needs delta_pa_cm1".into()),
            (_, Some(d)) if !d.is_finite() => return Err(format!("delta_pa_cm1 must be finite, got {d}")),
            (true, Some(d)) if d >= OBSERVATION_EDGE_CM1 => warnings.push(format!(
                "delta_pa_cm1 = {d} lies inside the unobservable band above {OBSERVATION_EDGE_CM1} cm-1"
            )),
            _ => {}
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopologueSpec {
    pub id: String,
    pub mass_a: f64,
    pub mass_b: f64,
    /// amu
    pub reduced_mass: f64,
}

impl IsotopologueSpec {
    pub fn new(id: impl Into<String>, mass_a: f64, mass_b: f64) -> Result<Self> {
        Ok(Self {
            id: id.into(),
            mass_a,
            mass_b,
            reduced_mass: reduced_mass(mass_a, mass_b)?,
        })
    }

    /// Reduced mass in electron masses.
    pub fn mu_au(&self) -> f64 {
        amu_to_electron_mass(self.reduced_mass)
    }
}

/// Parsed line list together with non-fatal findings.
#[derive(Debug, Clone, Default)]
pub struct LineList {
    pub records: Vec<LineRecord>,
    pub warnings: Vec<String>,
}

fn parse_f64(cell: &str) -> std::result::Result<f64, String> {
    cell.trim()
        .parse::<f64>()
        .map_err(|_| format!("'{cell}' is not a number"))
}

fn parse_optional<T: std::str::FromStr>(cell: &str, field: &str) -> std::result::Result<Option<T>, String> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<T>()
        .map(Some)
        .map_err(|_| format!("{field}: cannot parse '{cell}'"))
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?.clone();
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header '{}', got '{}'",
                expected.join(","),
                got.join(",")
            ),
        });
    }
    Ok(())
}

fn parse_row(row: &csv::StringRecord) -> std::result::Result<LineRecord, String> {
    let field = |i: usize| row.get(i).unwrap_or("");
    let isotopologue = field(0).to_string();
    if isotopologue.is_empty() {
        return Err("isotopologue is empty".into());
    }
    let f_prime =
        parse_optional::<u8>(field(3), "f_prime")?.ok_or_else(|| "f_prime is required".to_string())?;
    let observed = match field(7) {
        "true" => true,
        "false" => false,
        other => return Err(format!("observed must be true or false, got '{other}'")),
    };
    Ok(LineRecord {
        isotopologue,
        delta_pa: parse_optional(field(1), "delta_pa_cm1")?,
        dv: parse_optional(field(2), "dv")?,
        f_prime,
        rel_depth: Reading::parse(field(4)).map_err(|e| format!("rel_depth: {e}"))?,
        b_rot_mcm1: parse_optional(field(5), "b_rot_mcm1")?,
        delta_r1_mcm1: Reading::parse(field(6)).map_err(|e| format!("delta_r1_mcm1: {e}"))?,
        observed,
    })
}

/// Parse and validate a line-list CSV against known isotopologues.
pub fn parse_line_list(text: &str, isotopologues: &[IsotopologueSpec]) -> Result<LineList> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &LINE_LIST_HEADER)?;
    let mut out = LineList::default();
    let mut lines = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() != LINE_LIST_HEADER.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, got {}", LINE_LIST_HEADER.len(), row.len()),
            });
        }
        let record = parse_row(&row).map_err(|message| Error::Parse { line, message })?;
        if !isotopologues.iter().any(|i| i.id == record.isotopologue) {
            return Err(Error::Parse {
                line,
                message: format!("unknown isotopologue '{}'", record.isotopologue),
            });
        }
        let warnings = record
            .validate()
            .map_err(|message| Error::Parse { line, message })?;
        out.warnings
            .extend(warnings.into_iter().map(|w| format!("line {line}: {w}")));
        out.records.push(record);
        lines.push(line);
    }
    check_series_order(&out.records, &lines)?;
    Ok(out)
}

/// Within one (isotopologue, F') series, deeper lines must carry lower dv.
fn check_series_order(records: &[LineRecord], lines: &[usize]) -> Result<()> {
    // (isotopologue, F') -> (delta_pa, dv, source line)
    type Series<'a> = BTreeMap<(&'a str, u8), Vec<(f64, i32, usize)>>;
    let mut series: Series = BTreeMap::new();
    for (rec, &line) in records.iter().zip(lines) {
        if let (Some(d), Some(dv)) = (rec.delta_pa, rec.dv) {
            series
                .entry((rec.isotopologue.as_str(), rec.f_prime))
                .or_default()
                .push((d, dv, line));
        }
    }
    for ((iso, f), mut members) in series {
        members.sort_by(|a, b| b.0.total_cmp(&a.0));
        for pair in members.windows(2) {
            if pair[1].1 >= pair[0].1 {
                return Err(Error::Parse {
                    line: pair[1].2,
                    message: format!(
                        "{iso} F'={f}: dv {} at {} cm-1 does not decrease from dv {} at {} cm-1",
                        pair[1].1, pair[1].0, pair[0].1, pair[0].0
                    ),
                });
            }
        }
    }
    Ok(())
}

pub fn parse_isotopologues(text: &str) -> Result<Vec<IsotopologueSpec>> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &ISOTOPOLOGUE_HEADER)?;
    let mut out: Vec<IsotopologueSpec> = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let parse_err = |message: String| Error::Parse { line, message };
        if row.len() != 3 {
            return Err(parse_err(format!("expected 3 fields, got {}", row.len())));
        }
        let id = row[0].to_string();
        if id.is_empty() {
            return Err(parse_err("id is empty".into()));
        }
        if out.iter().any(|i| i.id == id) {
            return Err(parse_err(format!("duplicate isotopologue '{id}'")));
        }
        let a = parse_f64(&row[1]).map_err(|e| parse_err(format!("mass_a_amu: {e}")))?;
        let b = parse_f64(&row[2]).map_err(|e| parse_err(format!("mass_b_amu: {e}")))?;
        let spec = IsotopologueSpec::new(id, a, b).map_err(|e| parse_err(e.to_string()))?;
        out.push(spec);
    }
    Ok(out)
}

pub fn write_line_list(records: &[LineRecord]) -> String {
    let mut out = LINE_LIST_HEADER.join(",");
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.isotopologue,
            r.delta_pa.map(|d| d.to_string()).unwrap_or_default(),
            r.dv.map(|d| d.to_string()).unwrap_or_default(),
            r.f_prime,
            r.rel_depth.to_cell(),
            r.b_rot_mcm1.map(|b| b.to_string()).unwrap_or_default(),
            r.delta_r1_mcm1.to_cell(),
            r.observed,
        );
    }
    out
}

pub fn write_isotopologues(isotopologues: &[IsotopologueSpec]) -> String {
    let mut out = ISOTOPOLOGUE_HEADER.join(",");
    out.push('\n');
    for i in isotopologues {
        let _ = writeln!(out, "{},{},{}", i.id, i.mass_a, i.mass_b);
    }
    out
}

pub fn read_isotopologues_file(path: &Path) -> Result<Vec<IsotopologueSpec>> {
    parse_isotopologues(&read_text(path)?)
}

pub fn read_line_list_file(path: &Path, isotopologues: &[IsotopologueSpec]) -> Result<LineList> {
    parse_line_list(&read_text(path)?, isotopologues)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn bundled_isotopologues() -> Vec<IsotopologueSpec> {
    parse_isotopologues(BUNDLED_ISOTOPOLOGUES).expect("bundled isotopologue table is valid")
}

/// The 20 F'=2 rows for 176Yb87Rb (14, one of them not observed) and
/// 174Yb87Rb (6).
pub fn bundled_table1() -> Vec<LineRecord> {
    parse_line_list(BUNDLED_LINES, &bundled_isotopologues())
        .expect("bundled line list is valid")
        .records
}

pub fn bundled_table1_csv() -> &'static str {
    BUNDLED_LINES
}

pub fn bundled_isotopologues_csv() -> &'static str {
    BUNDLED_ISOTOPOLOGUES
}
