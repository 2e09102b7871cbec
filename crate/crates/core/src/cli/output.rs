//! Run manifests and the CSV/JSON writers that stamp every file with the manifest hash.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::ScenarioConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Record of one invocation. The hash covers the command, the resolved
/// configuration, the seed and the tool version, so two runs with equal hashes
/// produce identical data files in deterministic modes.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub seed: u64,
    pub tool_version: String,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub sha256: String,
}

impl RunManifest {
    pub fn new(command: &str, config: &ScenarioConfig) -> Self {
        let pairs = config.to_pairs();
        let seed = config.integrator.rng_seed;
        Self {
            command: command.to_string(),
            sha256: manifest_hash(command, &pairs, seed),
            config: pairs,
            seed,
            tool_version: TOOL_VERSION.to_string(),
            wall_time_s: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let config: serde_json::Map<String, Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "command": self.command,
            "config": config,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "wall_time_s": self.wall_time_s,
            "outputs": self.outputs,
            "sha256": self.sha256,
        })
    }
}

pub fn manifest_hash(command: &str, pairs: &[(String, String)], seed: u64) -> String {
    let mut h = Sha256::new();
    h.update(format!("command={command}\n"));
    for (k, v) in pairs {
        // `output.dir` only says where files go, so moving a run does not change its identity.
        if k != "output.dir" {
            h.update(format!("{k}={v}\n"));
        }
    }
    h.update(format!("seed={seed}\nversion={TOOL_VERSION}\n"));
    hex::encode(h.finalize())
}

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::I(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::S(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::S(b.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => format_f64(*x),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// Output directory of one run. Every written file is recorded for the manifest.
pub struct OutputDir {
    dir: PathBuf,
    manifest: RunManifest,
}

impl OutputDir {
    pub fn create(dir: &Path, manifest: RunManifest) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest,
        })
    }

    pub fn hash(&self) -> &str {
        &self.manifest.sha256
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    /// Writes a CSV whose first line is `# manifest_sha256=<hash>`, followed by
    /// the header and the rows.
    pub fn write_csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> io::Result<PathBuf>
    where
        I: IntoIterator<Item = Vec<Cell>>,
    {
        let path = self.dir.join(name);
        let mut file = io::BufWriter::new(File::create(&path)?);
        writeln!(file, "# manifest_sha256={}", self.manifest.sha256)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for row in rows {
            debug_assert_eq!(row.len(), header.len());
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        self.manifest.outputs.push(name.to_string());
        Ok(path)
    }

    /// Writes pretty JSON with `manifest_sha256` inserted as the first key.
    pub fn write_json(&mut self, name: &str, body: Value) -> io::Result<PathBuf> {
        let mut obj = serde_json::Map::new();
        obj.insert("manifest_sha256".into(), Value::String(self.manifest.sha256.clone()));
        match body {
            Value::Object(m) => obj.extend(m),
            other => {
                obj.insert("data".into(), other);
            }
        }
        let path = self.dir.join(name);
        fs::write(&path, serde_json::to_string_pretty(&Value::Object(obj))? + "\n")?;
        self.manifest.outputs.push(name.to_string());
        Ok(path)
    }

    /// Writes `manifest.json` and returns the finished manifest.
    pub fn finish(mut self, wall_time_s: f64) -> io::Result<RunManifest> {
        self.manifest.wall_time_s = wall_time_s;
        let path = self.dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(&self.manifest.to_json())? + "\n")?;
        Ok(self.manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
    }

    #[test]
    fn hash_depends_on_config_and_seed_only() {
        let c = ScenarioConfig::default();
        let a = RunManifest::new("simulate", &c);
        let mut moved = c.clone();
        moved.out_dir = "elsewhere".into();
        assert_eq!(a.sha256, RunManifest::new("simulate", &moved).sha256);
        let mut c2 = c.clone();
        c2.integrator.rng_seed = 7;
        assert_ne!(a.sha256, RunManifest::new("simulate", &c2).sha256);
        assert_ne!(a.sha256, RunManifest::new("scan", &c).sha256);
    }

    #[test]
    fn csv_quotes_and_stamps() {
        let dir = tempfile::tempdir().unwrap();
        let c = ScenarioConfig::default();
        let mut out = OutputDir::create(dir.path(), RunManifest::new("test", &c)).unwrap();
        let hash = out.hash().to_string();
        let p = out
            .write_csv("t.csv", &["a", "b"], vec![vec![Cell::from("x,\"y\""), Cell::from(0.5)]])
            .unwrap();
        let text = fs::read_to_string(p).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), format!("# manifest_sha256={hash}"));
        assert_eq!(lines.next().unwrap(), "a,b");
        assert_eq!(lines.next().unwrap(), "\"x,\"\"y\"\"\",5.0000000000000000e-1");
    }
}
