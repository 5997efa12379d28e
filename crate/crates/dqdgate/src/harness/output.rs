use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub runtime_s: f64,
    pub files: Vec<ManifestEntry>,
    pub checks: Vec<Check>,
}

impl Manifest {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Write `bytes` next to `path` and rename into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.partial", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Collects the files of one run under a directory and records their hashes.
#[derive(Debug)]
pub struct OutputSink {
    dir: PathBuf,
    files: Vec<ManifestEntry>,
}

impl OutputSink {
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let probe = dir.join(".write_probe");
        fs::write(&probe, b"")
            .and_then(|_| fs::remove_file(&probe))
            .map_err(|e| Error::InvalidParameter(format!("output directory {} not writable: {e}", dir.display())))?;
        Ok(Self { dir, files: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Renders into memory first; nothing reaches disk if `render` fails.
    pub fn write_with(&mut self, name: &str, render: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<PathBuf> {
        let mut buf = Vec::new();
        render(&mut buf)?;
        self.write_bytes(name, &buf)
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        write_atomic(&path, bytes)?;
        self.files.retain(|f| f.path != name);
        self.files.push(ManifestEntry { path: name.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() });
        Ok(path)
    }

    pub fn files(&self) -> &[ManifestEntry] {
        &self.files
    }

    pub fn finish(mut self, mut manifest: Manifest) -> Result<Manifest> {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        manifest.files = self.files;
        let text = serde_json::to_string_pretty(&manifest)?;
        write_atomic(&self.dir.join("manifest.json"), text.as_bytes())?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_render_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let mut sink = OutputSink::create(dir.path()).unwrap();
        let r = sink.write_with("a.csv", |w| {
            w.extend_from_slice(b"partial");
            Err(Error::InvalidParameter("boom".into()))
        });
        assert!(r.is_err());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn manifest_lists_hashes() {
        let dir = tempfile::tempdir().unwrap();
        let mut sink = OutputSink::create(dir.path().join("nested")).unwrap();
        sink.write_bytes("b.csv", b"x,y\n").unwrap();
        sink.write_bytes("a.csv", b"abc").unwrap();
        let m = Manifest {
            command: "test".into(),
            version: "0".into(),
            config_sha256: String::new(),
            seed: 0,
            runtime_s: 0.0,
            files: vec![],
            checks: vec![],
        };
        let m = sink.finish(m).unwrap();
        assert_eq!(m.files[0].path, "a.csv");
        assert_eq!(m.files[0].sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        assert!(dir.path().join("nested/manifest.json").exists());
    }
}
