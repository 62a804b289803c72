use std::fs;
use std::path::{Path, PathBuf};

use cellcov_core::covers::CC10Config;
use cellcov_core::exactlin::parse_rational;
use cellcov_core::format::{GroupFile, LocalForm};
use cellcov_core::groups::GeneratorScheme;
use cellcov_core::{LocalizedGroup, RationalVector};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Provenance of one input file.
#[derive(Clone, Debug, Serialize)]
pub struct InputRecord {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
    /// Hash of the canonical local form, equal for files describing the same group.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_sha256: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

pub struct ParsedGroup {
    pub group: LocalizedGroup,
    /// The generator scheme as written, when the file is in generator form.
    pub scheme: Option<GeneratorScheme>,
    pub record: InputRecord,
}

pub fn canonical_hash(g: &LocalizedGroup) -> String {
    let text = serde_json::to_vec(&LocalForm::from_group(g)).expect("local forms serialize");
    sha256_hex(&text)
}

pub fn parse_group_file(path: &Path, role: &str) -> Result<ParsedGroup, CliError> {
    let bytes = read(path)?;
    let file: GroupFile = parse_json(path, &bytes)?;
    let located = |e: cellcov_core::Error| CliError::Core(relabel(e, path));
    let scheme = file.scheme().map_err(located)?;
    let group = file.to_group().map_err(located)?;
    let record = InputRecord {
        role: role.into(),
        path: path.to_path_buf(),
        sha256: sha256_hex(&bytes),
        canonical_sha256: Some(canonical_hash(&group)),
    };
    Ok(ParsedGroup { group, scheme, record })
}

fn relabel(e: cellcov_core::Error, path: &Path) -> cellcov_core::Error {
    match e {
        cellcov_core::Error::Input(m) => cellcov_core::Error::Input(format!("{}: {m}", path.display())),
        other => other,
    }
}

pub fn parse_config_file(path: &Path) -> Result<(CC10Config, InputRecord), CliError> {
    let bytes = read(path)?;
    let cfg: CC10Config = parse_json(path, &bytes)?;
    let record = InputRecord { role: "config".into(), path: path.to_path_buf(), sha256: sha256_hex(&bytes), canonical_sha256: None };
    Ok((cfg, record))
}

/// `"1/9,1/9"` to a vector.
pub fn parse_vector(text: &str) -> Result<RationalVector, CliError> {
    text.split(',').map(|s| parse_rational(s).map_err(CliError::Core)).collect()
}

/// `"v1;v2"` to a list of vectors; the empty string gives no vectors.
pub fn parse_vectors(text: &str) -> Result<Vec<RationalVector>, CliError> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(parse_vector).collect()
}
