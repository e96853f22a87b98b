use std::path::{Path, PathBuf};
use std::time::Instant;

use polyedge::error::{Error, Result};
use polyedge::io::{read_to_string, write_string};
use polyedge::optimizer::SearchConfig;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one command invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: SearchConfig,
    /// Command-specific flags after defaults were applied.
    pub parameters: Map<String, Value>,
    pub seeds: Map<String, Value>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub wall_time_seconds: f64,
    pub evaluations: Option<usize>,
    pub notes: Map<String, Value>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Builder threaded through a command; records inputs as they are read and
/// outputs as they are written.
pub struct Run {
    started: Instant,
    manifest: RunManifest,
    /// Where the manifest goes when `--manifest` is not given.
    default_target: Option<PathBuf>,
}

impl Run {
    pub fn new(command: &str, config: &SearchConfig) -> Self {
        Run {
            started: Instant::now(),
            manifest: RunManifest {
                command: command.to_string(),
                config: config.clone(),
                parameters: Map::new(),
                seeds: Map::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                wall_time_seconds: 0.0,
                evaluations: None,
                notes: Map::new(),
            },
            default_target: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.manifest.parameters.insert(key.into(), to_value(value));
    }

    pub fn seed(&mut self, key: &str, seed: u64) {
        self.manifest.seeds.insert(key.into(), Value::from(seed));
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.manifest.notes.insert(key.into(), to_value(value));
    }

    pub fn add_evaluations(&mut self, n: usize) {
        *self.manifest.evaluations.get_or_insert(0) += n;
    }

    /// Reads an input file and records its digest.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = read_to_string(path)?;
        self.manifest.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        Ok(text)
    }

    pub fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        write_string(path, contents)?;
        self.manifest.outputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    pub fn write_json(&mut self, path: &Path, value: &impl Serialize) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| Error::InvalidParameter(format!("cannot serialise report: {e}")))?;
        text.push('\n');
        self.write(path, &text)
    }

    /// Manifest lands next to a single output file.
    pub fn manifest_beside(&mut self, file: &Path) {
        let mut name = file.as_os_str().to_owned();
        name.push(".manifest.json");
        self.default_target = Some(PathBuf::from(name));
    }

    /// Manifest lands inside an output directory.
    pub fn manifest_in(&mut self, dir: &Path) {
        self.default_target = Some(dir.join("manifest.json"));
    }

    /// Writes the manifest to `explicit`, the default target, or standard error.
    pub fn finish(mut self, explicit: Option<&Path>) -> Result<()> {
        self.manifest.wall_time_seconds = self.started.elapsed().as_secs_f64();
        let ser = |pretty: bool| {
            if pretty {
                serde_json::to_string_pretty(&self.manifest)
            } else {
                serde_json::to_string(&self.manifest)
            }
            .map_err(|e| Error::InvalidParameter(format!("cannot serialise manifest: {e}")))
        };
        match explicit.map(Path::to_path_buf).or(self.default_target.clone()) {
            Some(p) => write_string(&p, &(ser(true)? + "\n")),
            // one line, so it stays out of the way of the printed result
            None => {
                eprintln!("manifest: {}", ser(false)?);
                Ok(())
            }
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}
