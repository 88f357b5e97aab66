//! Resolving `--group`, `--table` and `--names` into a character table.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use eqper_core::chartab::{load_table, parse_names, table_for, CharacterTable, TableDocument, TableError};
use eqper_core::grp::{Builtin, FiniteGroup, GroupSpec};
use log::warn;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const CACHE_ENV: &str = "EQPER_TABLE_CACHE";

pub fn resolve_group(spec: &str) -> Result<Arc<FiniteGroup>, CliError> {
    let spec = spec.trim();
    let group = if let Some(name) = spec.strip_prefix("builtin:") {
        let b: Builtin = name.parse().map_err(|e| CliError::user(format!("{e}")))?;
        b.build()
    } else {
        let text = match spec.strip_prefix("file:") {
            Some(path) => read(Path::new(path))?,
            None => spec.to_string(),
        };
        let parsed: GroupSpec =
            serde_json::from_str(&text).map_err(|e| CliError::user(format!("group spec: {e}")))?;
        FiniteGroup::from_spec(&parsed)
    };
    Ok(Arc::new(group.map_err(|e| CliError::user(e.to_string()))?))
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

fn table_error(e: TableError, computed: bool) -> CliError {
    match e {
        TableError::TooLarge { .. } => CliError::user(e.to_string()),
        _ if computed => CliError::invariant(e.to_string()),
        _ => CliError::user(e.to_string()),
    }
}

fn cache_path(dir: &Path, group: &FiniteGroup) -> PathBuf {
    let digest = Sha256::digest(group.descriptor().as_bytes());
    let key: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{key}.json"))
}

/// Computed tables go through the process memo and, when the cache
/// variable is set, a directory of verified table documents.
fn computed_table(group: &Arc<FiniteGroup>) -> Result<Arc<CharacterTable>, CliError> {
    let Some(dir) = std::env::var_os(CACHE_ENV).map(PathBuf::from) else {
        return table_for(group).map_err(|e| table_error(e, true));
    };
    let path = cache_path(&dir, group);
    if let Ok(text) = fs::read_to_string(&path) {
        match TableDocument::from_json(&text).and_then(|doc| load_table(group.clone(), &doc)) {
            Ok(t) => return Ok(Arc::new(t)),
            Err(e) => warn!("ignoring cached table {}: {e}", path.display()),
        }
    }
    let table = table_for(group).map_err(|e| table_error(e, true))?;
    let doc = serde_json::to_string(&table.to_document()).expect("table documents serialize");
    if let Err(e) = fs::create_dir_all(&dir).and_then(|_| fs::write(&path, doc)) {
        warn!("could not write table cache {}: {e}", path.display());
    }
    Ok(table)
}

pub fn resolve_table(
    group: &Arc<FiniteGroup>,
    table: Option<&Path>,
    names: Option<&Path>,
) -> Result<Arc<CharacterTable>, CliError> {
    let base = match table {
        Some(path) => {
            let doc = TableDocument::from_json(&read(path)?).map_err(|e| table_error(e, false))?;
            Arc::new(load_table(group.clone(), &doc).map_err(|e| table_error(e, false))?)
        }
        None => computed_table(group)?,
    };
    match names {
        None => Ok(base),
        Some(path) => {
            let aliases = parse_names(&read(path)?).map_err(|e| table_error(e, false))?;
            let t = (*base).clone().with_aliases(&aliases).map_err(|e| table_error(e, false))?;
            Ok(Arc::new(t))
        }
    }
}
