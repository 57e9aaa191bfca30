//! Human tables on stdout, plus optional JSON and CSV files.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use treeshade::SCHEMA_VERSION;

pub struct Csv {
    pub header: String,
    pub lines: Vec<String>,
}

pub struct Report {
    pub command: String,
    pub text: String,
    pub json: Value,
    pub csv: Option<Csv>,
    /// Raised after the output is written (e.g. a failed verification).
    pub failure: Option<anyhow::Error>,
}

impl Report {
    pub fn new(command: impl Into<String>, text: impl Into<String>, json: Value) -> Self {
        Report {
            command: command.into(),
            text: text.into(),
            json,
            csv: None,
            failure: None,
        }
    }

    pub fn with_csv(mut self, header: &str, lines: Vec<String>) -> Self {
        self.csv = Some(Csv {
            header: header.to_string(),
            lines,
        });
        self
    }

    /// The versioned JSON document.
    pub fn document(&self) -> Value {
        json!({
            "version": SCHEMA_VERSION,
            "command": self.command,
            "result": self.json,
        })
    }

    pub fn csv_text(&self) -> Option<String> {
        self.csv.as_ref().map(|c| {
            let mut s = c.header.clone();
            s.push('\n');
            for l in &c.lines {
                s.push_str(l);
                s.push('\n');
            }
            s
        })
    }

    pub fn emit(&self, json_path: Option<&Path>, csv_path: Option<&Path>) -> Result<()> {
        if csv_path.is_some() && self.csv.is_none() {
            bail!("`{}` has no tabular output for --csv", self.command);
        }
        print!("{}", self.text);
        if !self.text.ends_with('\n') {
            println!();
        }
        if let Some(p) = json_path {
            let mut text = serde_json::to_string_pretty(&self.document())?;
            text.push('\n');
            write_atomic(p, text.as_bytes())?;
        }
        if let (Some(p), Some(text)) = (csv_path, self.csv_text()) {
            write_atomic(p, text.as_bytes())?;
        }
        Ok(())
    }
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path
        .file_name()
        .with_context(|| format!("{} is not a file path", path.display()))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            if i + 1 < cells.len() {
                s.push_str(&" ".repeat(w - c.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Splits a CSV line produced by the core row types (no quoting) into cells.
pub fn cells(line: &str) -> Vec<String> {
    line.split(',').map(str::to_string).collect()
}

/// Quotes a CSV field when it needs it.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligns_columns() {
        let t = table(&["a", "bbb"], &[vec!["xx".into(), "y".into()]]);
        assert_eq!(t, "a   bbb\nxx  y\n");
        assert_eq!(csv_field("m0:n=4,m=2"), "\"m0:n=4,m=2\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out").join("x.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
