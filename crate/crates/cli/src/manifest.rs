//! Pipeline manifest: checksums of every artifact a stage read or wrote.
//!
//! Paths inside the data directory are stored relative to it; the file
//! carries no timestamps, so reruns with the same inputs and seed write the
//! same bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cohort_core::checksum::sha256_file;

use crate::failure::{CliResult, Failure, WithPath};

pub const MANIFEST_VERSION: u32 = 1;
pub const EXTERNAL: &str = "external";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub sha256: String,
    /// Stage that wrote the file, or `external` for inputs from elsewhere.
    pub produced_by: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub artifacts: BTreeMap<String, Artifact>,
    pub stages: BTreeMap<String, StageRecord>,
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest {
            version: MANIFEST_VERSION,
            artifacts: BTreeMap::new(),
            stages: BTreeMap::new(),
        }
    }
}

impl Manifest {
    pub fn load(path: &Path) -> CliResult<Self> {
        if !path.exists() {
            return Ok(Manifest::default());
        }
        let m: Manifest = serde_json::from_slice(&fs::read(path).at(path)?).at(path)?;
        if m.version != MANIFEST_VERSION {
            return Err(Failure::invalid(format!(
                "{}: manifest version {} is not supported",
                path.display(),
                m.version
            )));
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, bytes).at(&tmp)?;
        fs::rename(&tmp, path).at(path)?;
        Ok(())
    }
}

/// Bookkeeping for one stage run.
pub struct StageRun {
    name: String,
    manifest_path: PathBuf,
    data_dir: PathBuf,
    manifest: Manifest,
    record: StageRecord,
}

fn key(data_dir: &Path, path: &Path) -> String {
    path.strip_prefix(data_dir)
        .unwrap_or(path)
        .to_string_lossy()
        .replace('\\', "/")
}

impl StageRun {
    /// Verifies the inputs against the manifest. An input the manifest
    /// already knows must still have the recorded checksum unless `force`.
    pub fn begin(
        name: &str,
        manifest_path: &Path,
        data_dir: &Path,
        inputs: &[&Path],
        seed: Option<u64>,
        force: bool,
    ) -> CliResult<Self> {
        let mut manifest = Manifest::load(manifest_path)?;
        let mut record = StageRecord {
            seed,
            ..StageRecord::default()
        };
        for &input in inputs {
            let k = key(data_dir, input);
            let sha = sha256_file(input).at(input)?;
            match manifest.artifacts.get(&k) {
                Some(a) if a.sha256 != sha => {
                    if !force {
                        return Err(Failure::invalid(format!(
                            "{k} changed since the manifest recorded it (expected {}, found {sha}); \
                             rerun the stage that produces it or pass --force",
                            a.sha256
                        )));
                    }
                    log::warn!("{k}: checksum mismatch ignored (--force)");
                    manifest.artifacts.insert(
                        k.clone(),
                        Artifact {
                            sha256: sha.clone(),
                            produced_by: EXTERNAL.into(),
                        },
                    );
                }
                Some(_) => {}
                None => {
                    manifest.artifacts.insert(
                        k.clone(),
                        Artifact {
                            sha256: sha.clone(),
                            produced_by: EXTERNAL.into(),
                        },
                    );
                }
            }
            record.inputs.insert(k, sha);
        }
        // the stage is incomplete until `finish`
        manifest.stages.remove(name);
        Ok(StageRun {
            name: name.to_string(),
            manifest_path: manifest_path.to_path_buf(),
            data_dir: data_dir.to_path_buf(),
            manifest,
            record,
        })
    }

    pub fn finish(mut self, outputs: &[&Path]) -> CliResult<()> {
        for &out in outputs {
            let k = key(&self.data_dir, out);
            let sha = sha256_file(out).at(out)?;
            self.manifest.artifacts.insert(
                k.clone(),
                Artifact {
                    sha256: sha.clone(),
                    produced_by: self.name.clone(),
                },
            );
            self.record.outputs.insert(k, sha);
        }
        self.record.complete = true;
        self.manifest.stages.insert(self.name.clone(), self.record);
        self.manifest.save(&self.manifest_path)
    }
}
