//! Transcribed table data shipped as JSON, each file carrying a row count
//! and a SHA-256 digest of its canonical serialization.
//!
//! Digest rule: drop the `digest` key, serialize the remaining object with
//! sorted keys and no whitespace, hash the UTF-8 bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::rootsys::{RootSystem, RootSystemType};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        source: std::io::Error,
    },
    #[error("{file}: malformed JSON: {msg}")]
    Parse { file: String, msg: String },
    #[error("{file}: digest mismatch (recorded {recorded}, computed {computed})")]
    Digest {
        file: String,
        recorded: String,
        computed: String,
    },
    #[error("{file}: row count {recorded} recorded but {actual} rows present")]
    RowCount {
        file: String,
        recorded: usize,
        actual: usize,
    },
    #[error("{file}: {msg}")]
    Content { file: String, msg: String },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessRow {
    pub case: u32,
    pub pattern: Vec<u8>,
    #[serde(rename = "D")]
    pub d: Vec<String>,
    #[serde(rename = "Dprime")]
    pub dprime: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessFile {
    #[serde(rename = "type")]
    pub ty: String,
    pub row_count: usize,
    pub digest: String,
    pub rows: Vec<WitnessRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightsFile {
    #[serde(rename = "type")]
    pub ty: String,
    pub row_count: usize,
    pub digest: String,
    pub mu_simple: Vec<Vec<i64>>,
    pub mu_euclid: Vec<Vec<String>>,
    pub cascade_euclid: Vec<Vec<String>>,
    /// Entry `i` is the canonical cascade position of the table's `beta_{i+1}`.
    #[serde(rename = "paperOrderPermutation")]
    pub table_order_permutation: Vec<usize>,
    /// Weight order used by the original search program, as table indices.
    #[serde(default)]
    pub search_order_permutation: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RootsFile {
    #[serde(rename = "type")]
    pub ty: String,
    pub row_count: usize,
    pub digest: String,
    pub positive_roots: Vec<String>,
    pub cascade: Vec<String>,
}

const EMBEDDED: &[(&str, &str)] = &[
    ("weights_E6.json", include_str!("../fixtures/weights_E6.json")),
    ("weights_E7.json", include_str!("../fixtures/weights_E7.json")),
    ("weights_E8.json", include_str!("../fixtures/weights_E8.json")),
    ("weights_F4.json", include_str!("../fixtures/weights_F4.json")),
    ("weights_G2.json", include_str!("../fixtures/weights_G2.json")),
    ("witnesses_E6.json", include_str!("../fixtures/witnesses_E6.json")),
    ("witnesses_E7.json", include_str!("../fixtures/witnesses_E7.json")),
    ("witnesses_E8.json", include_str!("../fixtures/witnesses_E8.json")),
    ("witnesses_F4.json", include_str!("../fixtures/witnesses_F4.json")),
    ("witnesses_G2.json", include_str!("../fixtures/witnesses_G2.json")),
    ("roots_E7.json", include_str!("../fixtures/roots_E7.json")),
    ("roots_E8.json", include_str!("../fixtures/roots_E8.json")),
];

/// Directory holding the fixture files in the source tree.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn digest_of(v: &Value) -> String {
    let mut v = v.clone();
    if let Value::Object(m) = &mut v {
        m.remove("digest");
    }
    let canon = canonical_json(&v);
    let h = Sha256::digest(canon.as_bytes());
    h.iter().map(|b| format!("{b:02x}")).collect()
}

fn canonical_json(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let sorted: BTreeMap<&String, &Value> = m.iter().collect();
            let parts: Vec<String> = sorted
                .into_iter()
                .map(|(k, v)| format!("{}:{}", Value::String(k.clone()), canonical_json(v)))
                .collect();
            format!("{{{}}}", parts.join(","))
        }
        Value::Array(a) => format!("[{}]", a.iter().map(canonical_json).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

fn parse_checked<T: DeserializeOwned>(file: &str, text: &str, rows_key: &str) -> Result<T, FixtureError> {
    let perr = |msg: String| FixtureError::Parse {
        file: file.to_string(),
        msg,
    };
    let v: Value = serde_json::from_str(text).map_err(|e| perr(e.to_string()))?;
    let recorded = v
        .get("digest")
        .and_then(Value::as_str)
        .ok_or_else(|| perr("missing digest".into()))?
        .to_string();
    let computed = digest_of(&v);
    if recorded != computed {
        return Err(FixtureError::Digest {
            file: file.to_string(),
            recorded,
            computed,
        });
    }
    let count = v
        .get("rowCount")
        .and_then(Value::as_u64)
        .ok_or_else(|| perr("missing rowCount".into()))? as usize;
    let actual = v.get(rows_key).and_then(Value::as_array).map_or(0, Vec::len);
    if count != actual {
        return Err(FixtureError::RowCount {
            file: file.to_string(),
            recorded: count,
            actual,
        });
    }
    serde_json::from_value(v).map_err(|e| perr(e.to_string()))
}

/// Source of fixture text: the copies compiled into the library or a directory.
#[derive(Clone, Debug)]
pub enum Source {
    Embedded,
    Dir(PathBuf),
}

impl Source {
    fn read(&self, name: &str) -> Result<String, FixtureError> {
        match self {
            Source::Embedded => EMBEDDED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| FixtureError::Io {
                    file: name.to_string(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "not embedded"),
                }),
            Source::Dir(d) => std::fs::read_to_string(d.join(name)).map_err(|e| FixtureError::Io {
                file: d.join(name).display().to_string(),
                source: e,
            }),
        }
    }

    pub fn weights(&self, ty: RootSystemType) -> Result<WeightsFile, FixtureError> {
        let name = format!("weights_{ty}.json");
        parse_checked(&name, &self.read(&name)?, "muSimple")
    }

    pub fn witnesses(&self, ty: RootSystemType) -> Result<WitnessFile, FixtureError> {
        let name = format!("witnesses_{ty}.json");
        parse_checked(&name, &self.read(&name)?, "rows")
    }

    pub fn roots(&self, ty: RootSystemType) -> Result<RootsFile, FixtureError> {
        let name = format!("roots_{ty}.json");
        parse_checked(&name, &self.read(&name)?, "positiveRoots")
    }

    /// SHA-256 over the raw bytes of every file this source provides for `ty`.
    pub fn input_digest(&self, ty: RootSystemType) -> Result<String, FixtureError> {
        let mut h = Sha256::new();
        for stem in ["weights", "witnesses"] {
            h.update(self.read(&format!("{stem}_{ty}.json"))?.as_bytes());
        }
        Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }
}

/// Expected number of witness rows per exceptional type.
pub fn expected_rows(ty: RootSystemType) -> Option<usize> {
    match ty.to_string().as_str() {
        "E6" | "F4" => Some(14),
        "G2" => Some(2),
        "E7" => Some(112),
        "E8" => Some(240),
        _ => None,
    }
}

/// Structural checks: row count per type, pattern lengths, root strings.
pub fn check_witness_file(sys: &RootSystem, m: usize, f: &WitnessFile) -> Result<(), FixtureError> {
    let file = format!("witnesses_{}.json", sys.ty());
    let err = |msg: String| FixtureError::Content {
        file: file.clone(),
        msg,
    };
    if f.ty != sys.ty().to_string() {
        return Err(err(format!("type label {} does not match {}", f.ty, sys.ty())));
    }
    if let Some(n) = expected_rows(sys.ty()) {
        if f.rows.len() != n {
            return Err(err(format!("{} rows, expected {n}", f.rows.len())));
        }
    }
    for row in &f.rows {
        if row.pattern.len() != m || row.pattern.iter().any(|&b| b > 1) {
            return Err(err(format!("case {}: bad pattern {:?}", row.case, row.pattern)));
        }
        for s in row.d.iter().chain(&row.dprime) {
            sys.parse_root(s)
                .map_err(|e| err(format!("case {}: {e}", row.case)))?;
        }
        if !row.dprime.iter().all(|s| row.d.contains(s)) {
            return Err(err(format!("case {}: Dprime is not contained in D", row.case)));
        }
    }
    Ok(())
}
