//! Level documents and plain-text instance formats.
//!
//! Instances:
//! - CNF: DIMACS (`p cnf V C`, clauses terminated by `0`, `c` comments).
//! - Subset sum: one value per line and a `target N` line.
//! - Grid graph: one `x y` lattice point per line and an optional `start x y`.
//! - NCL: `u v w` for an edge of weight `w` pointing from `u` into `v`,
//!   `v c` for a constraint and `target u v` for the target edge.
//!
//! Blank lines and anything after `#` are ignored in the last three.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::instance::{CnfFormula, GridGraph, InstanceError, Literal, Point, SubsetSumInstance};
use crate::kinematics::Geometry;
use crate::level::{validate_level, Level};
use crate::ncl::{ConstraintGraph, Edge, EdgeKey, NclError, VertexId};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Instance(#[from] InstanceError),
    #[error("{0}")]
    Ncl(#[from] NclError),
    #[error("malformed level document: {0}")]
    Document(String),
    #[error("unsupported format_version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("embedded level does not validate: {0}")]
    InvalidLevel(String),
    #[error("geometry must be present exactly for subset-sum levels")]
    GeometryMismatch,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceProblem {
    SubsetSum,
    #[serde(rename = "3sat")]
    ThreeSat,
    HamcycleTimed,
    HamcycleHep,
    Ncl,
    /// Levels written by hand rather than compiled.
    Manual,
}

impl SourceProblem {
    pub fn name(self) -> &'static str {
        match self {
            SourceProblem::SubsetSum => "subset-sum",
            SourceProblem::ThreeSat => "3sat",
            SourceProblem::HamcycleTimed => "hamcycle-timed",
            SourceProblem::HamcycleHep => "hamcycle-hep",
            SourceProblem::Ncl => "ncl",
            SourceProblem::Manual => "manual",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: SourceProblem,
    /// Hex SHA-256 of the instance in its canonical text form.
    pub instance_digest: String,
    pub parameters: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDocument {
    pub format_version: u32,
    pub level: Level,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    pub provenance: Provenance,
}

pub fn digest(canonical_text: &str) -> String {
    hex::encode(Sha256::digest(canonical_text.as_bytes()))
}

impl LevelDocument {
    pub fn new(level: Level, geometry: Option<Geometry>, provenance: Provenance) -> Self {
        LevelDocument { format_version: FORMAT_VERSION, level, geometry, provenance }
    }

    pub fn check(&self) -> Result<(), FormatError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(self.format_version));
        }
        let report = validate_level(&self.level);
        if !report.is_valid() {
            return Err(FormatError::InvalidLevel(report.to_string().replace('\n', "; ")));
        }
        if self.geometry.is_some() != (self.provenance.source == SourceProblem::SubsetSum) {
            return Err(FormatError::GeometryMismatch);
        }
        Ok(())
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        // Read the version first so newer documents get a clear message.
        #[derive(Deserialize)]
        struct Version {
            format_version: u32,
        }
        let v: Version = serde_json::from_str(text).map_err(|e| FormatError::Document(e.to_string()))?;
        if v.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(v.format_version));
        }
        let doc: LevelDocument = serde_json::from_str(text).map_err(|e| FormatError::Document(e.to_string()))?;
        doc.check()?;
        Ok(doc)
    }
}

/// Non-empty lines with `#` comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let words: Vec<&str> = line.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number<T: std::str::FromStr>(line: usize, word: &str) -> Result<T, FormatError> {
    word.parse().map_err(|_| syntax(line, format!("expected a number, found {word:?}")))
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, FormatError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.first() {
            None => continue,
            Some(&"c") | Some(&"%") => continue,
            Some(&"p") => {
                if header.is_some() {
                    return Err(syntax(line_no, "second problem line"));
                }
                if words.len() != 4 || words[1] != "cnf" {
                    return Err(syntax(line_no, "expected `p cnf VARS CLAUSES`"));
                }
                header = Some((number(line_no, words[2])?, number(line_no, words[3])?));
            }
            Some(_) => {
                let Some((vars, _)) = header else {
                    return Err(syntax(line_no, "clause before the problem line"));
                };
                for w in words {
                    let lit: i32 = number(line_no, w)?;
                    if lit == 0 {
                        clauses.push(std::mem::take(&mut current));
                        continue;
                    }
                    if lit.unsigned_abs() > vars {
                        return Err(syntax(line_no, format!("literal {lit} exceeds {vars} variables")));
                    }
                    current.push(Literal::from_dimacs(lit)?);
                }
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(syntax(0, "missing problem line"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(syntax(0, format!("problem line declares {count} clauses, found {}", clauses.len())));
    }
    Ok(CnfFormula::new(vars, clauses)?)
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.vars, f.clauses.len());
    for clause in &f.clauses {
        for lit in clause {
            let _ = write!(s, "{} ", lit.to_dimacs());
        }
        s.push_str("0\n");
    }
    s
}

pub fn parse_subset_sum(text: &str) -> Result<SubsetSumInstance, FormatError> {
    let mut values = Vec::new();
    let mut target = None;
    for (line, words) in content_lines(text) {
        match words.as_slice() {
            ["target", t] => {
                if target.replace(number::<i64>(line, t)?).is_some() {
                    return Err(syntax(line, "second target line"));
                }
            }
            [v] => values.push(number::<i64>(line, v)?),
            _ => return Err(syntax(line, "expected a value or `target N`")),
        }
    }
    let target = target.ok_or_else(|| syntax(0, "missing `target` line"))?;
    Ok(SubsetSumInstance::from_signed(&values, target)?)
}

pub fn write_subset_sum(inst: &SubsetSumInstance) -> String {
    let mut s: String = inst.values.iter().map(|v| format!("{v}\n")).collect();
    let _ = writeln!(s, "target {}", inst.target);
    s
}

pub fn parse_grid(text: &str) -> Result<GridGraph, FormatError> {
    let mut points: Vec<Point> = Vec::new();
    let mut start = None;
    for (line, words) in content_lines(text) {
        match words.as_slice() {
            ["start", x, y] => start = Some((number(line, x)?, number(line, y)?)),
            [x, y] => points.push((number(line, x)?, number(line, y)?)),
            _ => return Err(syntax(line, "expected `x y` or `start x y`")),
        }
    }
    Ok(GridGraph::new(points, start)?)
}

pub fn write_grid(g: &GridGraph) -> String {
    let mut s: String = g.vertices.iter().map(|(x, y)| format!("{x} {y}\n")).collect();
    let _ = writeln!(s, "start {} {}", g.start.0, g.start.1);
    s
}

pub fn parse_ncl(text: &str) -> Result<(ConstraintGraph, EdgeKey), FormatError> {
    let mut constraints: BTreeMap<VertexId, i64> = BTreeMap::new();
    let mut arcs: Vec<(u32, u32, u64)> = Vec::new();
    let mut target = None;
    for (line, words) in content_lines(text) {
        match words.as_slice() {
            ["target", u, v] => {
                target = Some(EdgeKey::new(VertexId(number(line, u)?), VertexId(number(line, v)?)));
            }
            [u, v, w] => arcs.push((number(line, u)?, number(line, v)?, number(line, w)?)),
            [v, c] => {
                if constraints.insert(VertexId(number(line, v)?), number(line, c)?).is_some() {
                    return Err(syntax(line, format!("second constraint for vertex {v}")));
                }
            }
            _ => return Err(syntax(line, "expected `u v w`, `v c` or `target u v`")),
        }
    }
    let target = target.ok_or_else(|| syntax(0, "missing `target` line"))?;
    let edges = arcs
        .into_iter()
        .map(|(u, v, weight)| {
            let key = EdgeKey::new(VertexId(u), VertexId(v));
            Edge { key, weight, orientation: if key.hi == VertexId(v) { 1 } else { -1 } }
        })
        .collect();
    Ok((ConstraintGraph::new(constraints, edges)?, target))
}

pub fn write_ncl(g: &ConstraintGraph, target: EdgeKey) -> String {
    let mut s = String::new();
    for (v, c) in g.constraints() {
        let _ = writeln!(s, "{} {c}", v.0);
    }
    for e in g.edges() {
        let tail = if e.head() == e.key.hi { e.key.lo } else { e.key.hi };
        let _ = writeln!(s, "{} {} {}", tail.0, e.head().0, e.weight);
    }
    let _ = writeln!(s, "target {} {}", target.lo.0, target.hi.0);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::LevelBuilder;

    #[test]
    fn dimacs_round_trip() {
        let text = "c two clauses\np cnf 2 2\n1 -2 0\n-1\n2 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(f, CnfFormula::from_dimacs(2, &[&[1, -2], &[-1, 2]]).unwrap());
        assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    #[test]
    fn subset_sum_text() {
        let inst = parse_subset_sum("# A = {1, 2, 3}\n1\n2\n3\ntarget 3\n").unwrap();
        assert_eq!(inst, SubsetSumInstance::new(vec![1, 2, 3], 3).unwrap());
        assert_eq!(parse_subset_sum(&write_subset_sum(&inst)).unwrap(), inst);
        assert!(matches!(parse_subset_sum("0\ntarget 1\n"), Err(FormatError::Instance(_))));
        assert!(parse_subset_sum("1\n").is_err());
    }

    #[test]
    fn grid_text() {
        let g = parse_grid("0 0\n1 0\n0 1\n1 1\nstart 1 1\n").unwrap();
        assert_eq!(g.start, (1, 1));
        assert_eq!(parse_grid(&write_grid(&g)).unwrap(), g);
        assert!(parse_grid("0 0\nstart 5 5\n").is_err());
    }

    #[test]
    fn ncl_text() {
        let (g, t) = parse_ncl("0 2\n1 0\n2 0\n3 0\n1 0 1\n2 0 1\n0 3 2\ntarget 0 3\n").unwrap();
        assert_eq!(t, EdgeKey::new(VertexId(0), VertexId(3)));
        assert!(g.edges()[2].points_into(VertexId(3)));
        assert_eq!(parse_ncl(&write_ncl(&g, t)).unwrap(), (g, t));
    }

    #[test]
    fn document_checks() {
        let mut b = LevelBuilder::new();
        let r = b.room("only");
        let level = b.build(r, r);
        let prov = Provenance {
            source: SourceProblem::Manual,
            instance_digest: digest(""),
            parameters: BTreeMap::new(),
        };
        let doc = LevelDocument::new(level, None, prov);
        let text = doc.to_text();
        assert!(text.ends_with("}\n"));
        assert_eq!(LevelDocument::from_text(&text).unwrap(), doc);
        let future = text.replace("\"format_version\": 1", "\"format_version\": 2");
        assert_eq!(LevelDocument::from_text(&future), Err(FormatError::Version(2)));
        let mut odd = doc.clone();
        odd.provenance.source = SourceProblem::SubsetSum;
        assert_eq!(odd.check(), Err(FormatError::GeometryMismatch));
    }
}
