//! Buffered run outputs, written only once a command has fully succeeded.

use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const MANIFEST: &str = "manifest.json";

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'static str,
    seed: Option<u64>,
    config: &'a serde_json::Value,
    outputs: Vec<&'a str>,
}

pub struct RunOutputs {
    command: &'static str,
    seed: Option<u64>,
    config: serde_json::Value,
    files: Vec<(&'static str, Vec<u8>)>,
}

impl RunOutputs {
    pub fn new(command: &'static str, seed: Option<u64>, config: impl Serialize) -> Self {
        let config = serde_json::to_value(config).expect("configs serialize to JSON");
        RunOutputs { command, seed, config, files: Vec::new() }
    }

    pub fn add(&mut self, name: &'static str, contents: Vec<u8>) {
        self.files.push((name, contents));
    }

    pub fn manifest(&self) -> Vec<u8> {
        let m = Manifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            seed: self.seed,
            config: &self.config,
            outputs: self.files.iter().map(|f| f.0).collect(),
        };
        let mut text = serde_json::to_vec_pretty(&m).expect("manifest serializes");
        text.push(b'\n');
        text
    }

    /// Writes every file and then the manifest into `dir`.
    pub fn write(self, dir: &Path) -> CliResult<()> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(io(&path))?;
        }
        let path = dir.join(MANIFEST);
        std::fs::write(&path, self.manifest()).map_err(io(&path))
    }
}
