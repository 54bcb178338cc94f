//! On-disk artifacts: group summaries, character tables and verification
//! reports, each wrapped with a SHA-256 checksum of its payload and written
//! atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::chartab::{orthogonality_check, CharacterTable, OrthogonalityReport};
use crate::classfun::ClassFunction;
use crate::field::FieldDescriptor;
use crate::group::GroupId;
use crate::lie::{Family, LieGroupData, TheoremReport};

pub const GROUP_SCHEMA: &str = "liechars.group/1";
pub const TABLE_SCHEMA: &str = "liechars.table/1";
pub const REPORT_SCHEMA: &str = "liechars.report/1";

/// Bumped whenever a change could alter cached tables or reports.
pub const ALGORITHM_REVISION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path} is not a valid artifact: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error("checksum mismatch in {path}: recorded {recorded}, computed {computed}")]
    Checksum {
        path: PathBuf,
        recorded: String,
        computed: String,
    },
    #[error("{path} has schema {found}, expected {expected}")]
    Schema {
        path: PathBuf,
        found: String,
        expected: &'static str,
    },
    #[error("{path} was written by engine {found}, this is {expected}")]
    Engine {
        path: PathBuf,
        found: String,
        expected: String,
    },
    #[error("{path} belongs to group {found}, expected {expected}")]
    WrongGroup {
        path: PathBuf,
        found: GroupId,
        expected: GroupId,
    },
    #[error("cached table in {path} fails orthogonality: {summary}")]
    Orthogonality { path: PathBuf, summary: String },
    #[error("cached table in {path} is invalid: {reason}")]
    InvalidTable { path: PathBuf, reason: String },
}

pub type Result<T> = std::result::Result<T, CacheError>;

/// Short hash of the crate version and algorithm revision.
pub fn engine_version() -> String {
    let tag = format!(
        "liechars {} alg {}",
        env!("CARGO_PKG_VERSION"),
        ALGORITHM_REVISION
    );
    hex(&Sha256::digest(tag.as_bytes())[..6])
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// SHA-256 of the compact JSON encoding of `payload`.
pub fn checksum_of<T: Serialize>(payload: &T) -> String {
    let bytes = serde_json::to_vec(payload).expect("payload serializes");
    hex(&Sha256::digest(&bytes))
}

#[derive(Debug, Serialize, Deserialize)]
struct Envelope<T> {
    checksum: String,
    payload: T,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CacheError + '_ {
    move |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| CacheError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

pub fn write_artifact<T: Serialize>(path: &Path, payload: &T) -> Result<()> {
    let env = Envelope {
        checksum: checksum_of(payload),
        payload,
    };
    let mut bytes = serde_json::to_vec_pretty(&env).expect("payload serializes");
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Reads an artifact and checks its checksum.
pub fn read_artifact<T: Serialize + DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let env: Envelope<T> = serde_json::from_str(&text).map_err(|e| CacheError::Malformed {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    let computed = checksum_of(&env.payload);
    if computed != env.checksum {
        return Err(CacheError::Checksum {
            path: path.to_path_buf(),
            recorded: env.checksum,
            computed,
        });
    }
    Ok(env.payload)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupArtifact {
    pub schema: String,
    pub engine: String,
    pub family: Family,
    pub n: usize,
    pub q: u64,
    pub field: FieldDescriptor,
    pub group_id: GroupId,
    pub order: u64,
    pub num_classes: usize,
    pub class_sizes: Vec<u64>,
}

impl GroupArtifact {
    pub fn new(data: &LieGroupData) -> Self {
        let cd = data.group.classes();
        GroupArtifact {
            schema: GROUP_SCHEMA.to_string(),
            engine: engine_version(),
            family: data.family,
            n: data.n,
            q: data.q,
            field: data.field_descriptor(),
            group_id: data.group.id(),
            order: data.group.order() as u64,
            num_classes: cd.num_classes(),
            class_sizes: cd.sizes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableArtifact {
    pub schema: String,
    pub engine: String,
    pub group_id: GroupId,
    pub exponent: u64,
    pub seed: u64,
    pub prime: u64,
    pub degrees: Vec<u64>,
    pub irreducibles: Vec<ClassFunction>,
}

impl TableArtifact {
    pub fn new(table: &CharacterTable) -> Self {
        TableArtifact {
            schema: TABLE_SCHEMA.to_string(),
            engine: engine_version(),
            group_id: table.group,
            exponent: table.exponent,
            seed: table.seed,
            prime: table.prime,
            degrees: table.degrees.clone(),
            irreducibles: table.irreducibles.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportArtifact {
    pub schema: String,
    pub engine: String,
    pub group_id: GroupId,
    pub report: TheoremReport,
}

impl ReportArtifact {
    pub fn new(group_id: GroupId, report: &TheoremReport) -> Self {
        ReportArtifact {
            schema: REPORT_SCHEMA.to_string(),
            engine: engine_version(),
            group_id,
            report: report.clone(),
        }
    }
}

/// File layout of a cache directory, keyed by family, rank, field and engine.
#[derive(Debug, Clone)]
pub struct CacheDir {
    pub root: PathBuf,
}

impl CacheDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        CacheDir { root: root.into() }
    }

    fn stem(family: Family, n: usize, q: u64, field: &FieldDescriptor) -> String {
        let modulus: Vec<String> = field.modulus.iter().map(u32::to_string).collect();
        format!(
            "{}-{n}-{q}-m{}-e{}",
            family.to_string().to_lowercase(),
            modulus.join("."),
            engine_version()
        )
    }

    pub fn group_path(&self, family: Family, n: usize, q: u64, field: &FieldDescriptor) -> PathBuf {
        self.root
            .join(format!("{}.group.json", Self::stem(family, n, q, field)))
    }

    pub fn table_path(
        &self,
        family: Family,
        n: usize,
        q: u64,
        field: &FieldDescriptor,
        seed: u64,
    ) -> PathBuf {
        self.root
            .join(format!("{}-s{seed}.table.json", Self::stem(family, n, q, field)))
    }

    pub fn report_path(
        &self,
        family: Family,
        n: usize,
        q: u64,
        field: &FieldDescriptor,
        seed: u64,
    ) -> PathBuf {
        self.root
            .join(format!("{}-s{seed}.report.json", Self::stem(family, n, q, field)))
    }
}

fn check_header(path: &Path, schema: &str, expected: &'static str, engine: &str) -> Result<()> {
    if schema != expected {
        return Err(CacheError::Schema {
            path: path.to_path_buf(),
            found: schema.to_string(),
            expected,
        });
    }
    if engine != engine_version() {
        return Err(CacheError::Engine {
            path: path.to_path_buf(),
            found: engine.to_string(),
            expected: engine_version(),
        });
    }
    Ok(())
}

pub fn load_group(path: &Path) -> Result<GroupArtifact> {
    let a: GroupArtifact = read_artifact(path)?;
    check_header(path, &a.schema, GROUP_SCHEMA, &a.engine)?;
    Ok(a)
}

/// Loads a cached table for `data`, recomputing indicators and requiring
/// orthogonality before returning it.
pub fn load_table(path: &Path, data: &LieGroupData) -> Result<(CharacterTable, OrthogonalityReport)> {
    let a: TableArtifact = read_artifact(path)?;
    check_header(path, &a.schema, TABLE_SCHEMA, &a.engine)?;
    let g = &data.group;
    if a.group_id != g.id() {
        return Err(CacheError::WrongGroup {
            path: path.to_path_buf(),
            found: a.group_id,
            expected: g.id(),
        });
    }
    let invalid = |reason: String| CacheError::InvalidTable {
        path: path.to_path_buf(),
        reason,
    };
    let r = g.classes().num_classes();
    if let Some(i) = a.irreducibles.iter().position(|c| c.values.len() != r) {
        return Err(invalid(format!("irreducible {i} has the wrong number of values")));
    }
    if let Some(i) = a
        .irreducibles
        .iter()
        .position(|c| c.degree().as_i64().is_none_or(|d| d <= 0))
    {
        return Err(invalid(format!("irreducible {i} has a nonpositive degree")));
    }
    let table = CharacterTable::from_irreducibles(g, a.irreducibles, a.seed, a.prime)
        .map_err(|e| invalid(e.to_string()))?;
    if table.degrees != a.degrees {
        return Err(invalid("recorded degrees disagree with the characters".into()));
    }
    let rep = orthogonality_check(g, &table);
    if !rep.passed {
        return Err(CacheError::Orthogonality {
            path: path.to_path_buf(),
            summary: orthogonality_summary(&rep),
        });
    }
    Ok((table, rep))
}

pub fn load_report(path: &Path) -> Result<ReportArtifact> {
    let a: ReportArtifact = read_artifact(path)?;
    check_header(path, &a.schema, REPORT_SCHEMA, &a.engine)?;
    Ok(a)
}

pub fn orthogonality_summary(rep: &OrthogonalityReport) -> String {
    let mut parts = Vec::new();
    if !rep.row_violations.is_empty() {
        parts.push(format!("row violations at {:?}", rep.row_violations));
    }
    if !rep.column_violations.is_empty() {
        parts.push(format!("column violations at {:?}", rep.column_violations));
    }
    if rep.degree_square_sum != rep.group_order {
        parts.push(format!(
            "sum of squared degrees {} != |G| = {}",
            rep.degree_square_sum, rep.group_order
        ));
    }
    if parts.is_empty() {
        "pass".to_string()
    } else {
        parts.join("; ")
    }
}
