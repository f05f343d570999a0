//! Reading polytopes and configurations from JSON, and result rows.
//!
//! A polytope file holds one object or a list of objects of the form
//! `{"id": "optional", "dim": d, "vertices": [["p/q", ...], ...]}`.
//! Entries may also be bare JSON integers.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, QVector, Rational};
use crate::fine::FineProfile;
use crate::geometry::Polytope;
use crate::spectrum::NormalConfiguration;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub dim: usize,
    pub vertices: Vec<QVector>,
}

impl PolytopeRecord {
    pub fn from_polytope(id: Option<String>, p: &Polytope) -> Self {
        PolytopeRecord { id, dim: p.ambient_dim(), vertices: p.vertices().to_vec() }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        if let Some(v) = self.vertices.iter().find(|v| v.dim() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        Polytope::from_points(self.dim, self.vertices.iter().cloned())
    }
}

/// A list or a single object, told apart by the first character so that
/// diagnostics describe the intended shape.
fn parse_one_or_many<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<Vec<T>> {
    let trimmed = text.trim_start();
    let parsed = if trimmed.starts_with('[') {
        serde_json::from_str::<Vec<T>>(text)
    } else {
        serde_json::from_str::<T>(text).map(|x| vec![x])
    };
    parsed.map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

pub fn parse_polytopes(text: &str) -> Result<Vec<PolytopeRecord>> {
    parse_one_or_many(text, "<input>")
}

pub fn parse_configs(text: &str) -> Result<Vec<NormalConfiguration>> {
    let configs: Vec<NormalConfiguration> = parse_one_or_many(text, "<input>")?;
    configs.iter().try_for_each(NormalConfiguration::validate)?;
    Ok(configs)
}

/// A polytope record together with the file it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SourcedRecord {
    pub record: PolytopeRecord,
    pub source: PathBuf,
    pub index: usize,
}

impl SourcedRecord {
    /// The record's own id, or `stem#index` when it has none.
    pub fn label(&self) -> String {
        self.record.id.clone().unwrap_or_else(|| {
            let stem = self.source.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            format!("{stem}#{}", self.index)
        })
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// `*.json` files of a directory in name order.
fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Reads a polytope file, or every `*.json` file of a directory.
pub fn read_polytopes(path: &Path) -> Result<Vec<SourcedRecord>> {
    let files = if path.is_dir() { json_files(path)? } else { vec![path.to_path_buf()] };
    let mut out = Vec::new();
    for file in files {
        let records: Vec<PolytopeRecord> = parse_one_or_many(&read_text(&file)?, &file.display().to_string())?;
        out.extend(records.into_iter().enumerate().map(|(index, record)| SourcedRecord { record, source: file.clone(), index }));
    }
    Ok(out)
}

/// Reads a configuration file, or every `*.json` file of a directory.
pub fn read_configs(path: &Path) -> Result<Vec<NormalConfiguration>> {
    let files = if path.is_dir() { json_files(path)? } else { vec![path.to_path_buf()] };
    let mut out = Vec::new();
    for file in files {
        let configs: Vec<NormalConfiguration> = parse_one_or_many(&read_text(&file)?, &file.display().to_string())?;
        for c in &configs {
            c.validate().map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
        }
        out.extend(configs);
    }
    Ok(out)
}

pub fn polytopes_to_json(records: &[PolytopeRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

/// One line of `compute` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub id: String,
    pub dim: usize,
    #[serde(rename = "nF", with = "crate::exact::rational_string")]
    pub fine_number: Rational,
    #[serde(rename = "muF", with = "crate::exact::rational_string")]
    pub mu_f: Rational,
    pub core_dim: usize,
    pub core_normal_count: usize,
    pub source_file: String,
}

impl ResultRow {
    pub const HEADER: [&'static str; 7] = ["id", "dim", "nF", "muF", "core_dim", "core_normal_count", "source_file"];

    pub fn new(id: impl Into<String>, dim: usize, profile: &FineProfile, source_file: impl Into<String>) -> Self {
        ResultRow {
            id: id.into(),
            dim,
            fine_number: profile.fine_number.clone(),
            mu_f: profile.mu_f.clone(),
            core_dim: profile.core_dim,
            core_normal_count: profile.core_normals.len(),
            source_file: source_file.into(),
        }
    }

    /// Field values in header order, as exact strings.
    pub fn fields(&self) -> [String; 7] {
        [
            self.id.clone(),
            self.dim.to_string(),
            format_rational(&self.fine_number),
            format_rational(&self.mu_f),
            self.core_dim.to_string(),
            self.core_normal_count.to_string(),
            self.source_file.clone(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::fine::fine_profile;

    #[test]
    fn single_object_and_list() {
        let one = parse_polytopes(r#"{"dim": 1, "vertices": [["0"], ["1/2"]]}"#).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].vertices[1][0], rat(1, 2));
        let many = parse_polytopes(r#"[{"id": "t", "dim": 2, "vertices": [[0, 0], [1, 0], ["0", "1"]]}]"#).unwrap();
        assert_eq!(many[0].id.as_deref(), Some("t"));
        assert_eq!(many[0].to_polytope().unwrap().vertices().len(), 3);
        assert!(parse_polytopes("[]").unwrap().is_empty());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_polytopes("[\n{\"dim\": 1,\n \"vertices\": [[\"x\"]]}\n]").unwrap_err();
        let Error::Parse(msg) = err else { panic!("expected a parse error") };
        assert!(msg.contains("line 3"), "{msg}");
        assert!(parse_polytopes(r#"{"dim": 2, "vertices": [[0]]}"#).unwrap()[0].to_polytope().is_err());
    }

    #[test]
    fn record_round_trip() {
        let p = Polytope::from_points(2, [QVector::new(vec![int(0), rat(1, 3)]), QVector::from_ints(&[2, 1])]).unwrap();
        let rec = PolytopeRecord::from_polytope(Some("s".into()), &p);
        let back = parse_polytopes(&polytopes_to_json(&[rec.clone()])).unwrap();
        assert_eq!(back, vec![rec]);
        assert_eq!(back[0].to_polytope().unwrap(), p);
    }

    #[test]
    fn configs_validate() {
        let c = parse_configs(r#"{"dim": 2, "normals": [[1, 0], [0, 1], [-1, -1]]}"#).unwrap();
        assert_eq!(c[0].len(), 3);
        assert!(parse_configs(r#"{"dim": 2, "normals": [[2, 0]]}"#).is_err());
        assert!(parse_configs(r#"{"dim": 2, "normals": [[1, 0, 0]]}"#).is_err());
    }

    #[test]
    fn rows_hold_exact_strings() {
        let p = Polytope::from_int_points(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let row = ResultRow::new("d2", 2, &fine_profile(&p).unwrap(), "x.json");
        assert_eq!(row.fields()[2..4], ["1/3".to_string(), "3".to_string()]);
        let json = serde_json::to_value(&row).unwrap();
        assert_eq!(json["muF"], "3");
        assert_eq!(json["nF"], "1/3");
        assert_eq!(serde_json::from_value::<ResultRow>(json).unwrap(), row);
    }
}
