//! Output directories with a manifest of the operations that filled them.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::RunConfig;
use crate::error::Result;
use crate::pointset::PointSet;

/// One output directory. Files are written as they are added; the manifest
/// lists them together with the configuration and every module operation
/// that ran, in order.
pub struct Bundle {
    dir: PathBuf,
    command: Value,
    config: RunConfig,
    ops: Vec<Value>,
    files: Vec<String>,
}

impl Bundle {
    pub fn create(config: &RunConfig, subdir: &str, command: Value) -> Result<Self> {
        let dir = config.out.join(subdir);
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, command, config: config.clone(), ops: Vec::new(), files: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Records one module operation and its parameters.
    pub fn op(&mut self, name: &str, params: Value) {
        self.ops.push(json!({ "op": name, "params": params }));
    }

    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        fs::write(self.dir.join(name), content)?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// A point cloud as `re,im` CSV.
    pub fn csv(&mut self, name: &str, set: &PointSet) -> Result<()> {
        self.write(name, &set.to_csv())
    }

    /// A CSV with a custom header.
    pub fn table(&mut self, name: &str, header: &str, rows: &[Vec<f64>]) -> Result<()> {
        let mut s = format!("{header}\n");
        for r in rows {
            let line: Vec<String> = r.iter().map(f64::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        self.write(name, &s)
    }

    /// A JSON report wrapped together with the configuration.
    pub fn json<T: Serialize>(&mut self, name: &str, data: &T) -> Result<()> {
        let doc = json!({ "config": self.config, "data": data });
        self.write(name, &(serde_json::to_string_pretty(&doc)? + "\n"))
    }

    /// Writes `manifest.json` and returns its path.
    pub fn finish(self) -> Result<PathBuf> {
        let manifest = json!({
            "command": self.command,
            "config": self.config,
            "ops": self.ops,
            "files": self.files,
        });
        let path = self.dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn bundle_writes_files_and_manifest() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = RunConfig { out: tmp.path().to_path_buf(), ..RunConfig::default() };
        let mut b = Bundle::create(&cfg, "demo", json!({"figure": "demo"})).unwrap();
        b.op("noop", json!({"k": 1}));
        b.csv("pts.csv", &PointSet::new("p", vec![Complex64::new(1.0, -0.5)])).unwrap();
        b.table("t.csv", "x,y", &[vec![0.5, 2.0]]).unwrap();
        b.json("r.json", &json!({"ok": true})).unwrap();
        let m = b.finish().unwrap();
        assert_eq!(fs::read_to_string(tmp.path().join("demo/pts.csv")).unwrap(), "re,im\n1,-0.5\n");
        assert_eq!(fs::read_to_string(tmp.path().join("demo/t.csv")).unwrap(), "x,y\n0.5,2\n");
        let v: Value = serde_json::from_str(&fs::read_to_string(m).unwrap()).unwrap();
        assert_eq!(v["files"], json!(["pts.csv", "t.csv", "r.json"]));
        assert_eq!(v["ops"][0]["op"], "noop");
        assert_eq!(v["config"]["grid"], 200);
    }
}
