//! Scenario documents stored as `<name>.json` in one directory.

use std::collections::HashMap;
use std::io::ErrorKind;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("invalid scenario name `{0}`")]
    BadName(String),
    #[error("no scenario named `{0}`")]
    NotFound(String),
    #[error("library I/O: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug)]
pub struct ScenarioLibrary {
    dir: PathBuf,
    writers: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

fn check_name(name: &str) -> Result<(), LibraryError> {
    let ok = !name.is_empty()
        && name.len() <= 128
        && !name.starts_with('.')
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(LibraryError::BadName(name.to_string()))
    }
}

impl ScenarioLibrary {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ScenarioLibrary {
            dir: dir.into(),
            writers: Mutex::new(HashMap::new()),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.json"))
    }

    /// Stored names, sorted.
    pub async fn list(&self) -> Result<Vec<String>, LibraryError> {
        let mut names = Vec::new();
        let mut entries = tokio::fs::read_dir(&self.dir).await?;
        while let Some(entry) = entries.next_entry().await? {
            let path = entry.path();
            if path.extension().is_some_and(|x| x == "json") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    if check_name(stem).is_ok() {
                        names.push(stem.to_string());
                    }
                }
            }
        }
        names.sort();
        Ok(names)
    }

    pub async fn get(&self, name: &str) -> Result<Vec<u8>, LibraryError> {
        check_name(name)?;
        match tokio::fs::read(self.path(name)).await {
            Ok(bytes) => Ok(bytes),
            Err(e) if e.kind() == ErrorKind::NotFound => Err(LibraryError::NotFound(name.into())),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes through a temporary file so readers never see a partial
    /// document. Returns whether the name was new.
    pub async fn put(&self, name: &str, document: &str) -> Result<bool, LibraryError> {
        check_name(name)?;
        let lock = {
            let mut writers = self.writers.lock().expect("writer table poisoned");
            writers.entry(name.to_string()).or_default().clone()
        };
        let _guard = lock.lock().await;
        let target = self.path(name);
        let created = !tokio::fs::try_exists(&target).await?;
        let tmp = self.dir.join(format!(".{name}.json.tmp"));
        tokio::fs::write(&tmp, document).await?;
        tokio::fs::rename(&tmp, &target).await?;
        Ok(created)
    }
}
