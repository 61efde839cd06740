//! Output directory with failure cleanup, and the run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::params::{Params, Source};
use crate::CliError;

/// Version of every file layout written by this tool.
pub const FORMAT_VERSION: u32 = 1;

/// Tracks the files a run writes so that a failed run leaves nothing behind.
pub struct OutputDir {
    root: PathBuf,
    created_root: bool,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        let created_root = !root.exists();
        std::fs::create_dir_all(root).map_err(|e| CliError::Io { path: root.to_path_buf(), source: e })?;
        Ok(OutputDir { root: root.to_path_buf(), created_root, written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
        let path = self.root.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::Io { path: path.clone(), source: e })?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(())
    }

    /// Serializes `value` with a leading `format_version` field.
    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut v = serde_json::to_value(value).map_err(|e| CliError::Invalid { field: name.into(), reason: e.to_string() })?;
        if let serde_json::Value::Object(map) = &mut v {
            map.insert("format_version".into(), FORMAT_VERSION.into());
        }
        let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        self.write(name, text + "\n")
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    /// Removes everything this run wrote, and the directory if the run created it.
    pub fn discard(self) {
        for name in &self.written {
            let _ = std::fs::remove_file(self.root.join(name));
        }
        if self.created_root {
            let _ = std::fs::remove_dir(&self.root);
        }
    }
}

/// Written last as `manifest.json`; see the README for the schema.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub format_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub parameters: BTreeMap<String, String>,
    pub sources: BTreeMap<String, Source>,
    pub files: Vec<String>,
    pub wall_seconds: f64,
}

impl Manifest {
    pub fn new(params: &Params, files: &[String], wall_seconds: f64) -> Self {
        Manifest {
            format_version: FORMAT_VERSION,
            tool: "isde",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: params.subcommand,
            parameters: params.echo(),
            sources: params.sources(),
            files: files.to_vec(),
            wall_seconds,
        }
    }
}
