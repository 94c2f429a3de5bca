//! All-or-nothing output writing.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{AppError, AppResult};

/// Files rendered in memory and written together.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, content: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), content.into()));
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_slice())
    }

    /// Writes every file into `dir`. On failure, files written so far
    /// (and temporaries) are removed.
    pub fn commit(&self, dir: &Path) -> AppResult<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
        let mut written: Vec<PathBuf> = Vec::new();
        for (name, content) in &self.files {
            let target = dir.join(name);
            let tmp = dir.join(format!(".{name}.partial"));
            let result = fs::write(&tmp, content)
                .and_then(|_| fs::rename(&tmp, &target))
                .map_err(|e| AppError::io(&target, e));
            if let Err(e) = result {
                let _ = fs::remove_file(&tmp);
                for p in &written {
                    let _ = fs::remove_file(p);
                }
                return Err(e);
            }
            written.push(target);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commit_writes_everything() {
        let dir = tempfile::tempdir().unwrap();
        let mut o = OutputSet::new();
        o.add("a.csv", "x\n");
        o.add("b.txt", "y\n");
        o.commit(&dir.path().join("out")).unwrap();
        assert_eq!(fs::read_to_string(dir.path().join("out/b.txt")).unwrap(), "y\n");
    }

    #[test]
    fn failed_commit_leaves_nothing_behind() {
        let dir = tempfile::tempdir().unwrap();
        // a directory squatting on the second target makes the rename fail
        fs::create_dir_all(dir.path().join("b.txt/inner")).unwrap();
        let mut o = OutputSet::new();
        o.add("a.csv", "x\n");
        o.add("b.txt", "y\n");
        assert!(o.commit(dir.path()).is_err());
        assert!(!dir.path().join("a.csv").exists());
        assert!(!dir.path().join(".b.txt.partial").exists());
    }
}
