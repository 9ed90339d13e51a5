//! CSV emission and run summaries.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Floats are printed with 17 significant digits so that runs are
/// reproducible bit-for-bit from the files alone.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a fixed header, accumulated in memory and written by a
/// single writer.
pub struct Csv {
    name: String,
    lines: Vec<String>,
}

impl Csv {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Csv {
            name: name.to_string(),
            lines: vec![columns.join(",")],
        }
    }

    pub fn row(&mut self, fields: &[Field]) {
        let mut line = String::new();
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            match f {
                Field::Int(v) => {
                    let _ = write!(line, "{v}");
                }
                Field::Float(v) => line.push_str(&fmt_float(*v)),
                Field::Text(v) => line.push_str(v),
            }
        }
        self.lines.push(line);
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.csv", self.name));
        fs::write(&path, self.lines.join("\n") + "\n")?;
        Ok(path)
    }
}

pub enum Field {
    Int(i64),
    Float(f64),
    Text(&'static str),
}

/// Outcome of one experiment run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub experiment: String,
    pub checks: usize,
    pub failures: usize,
    pub artifacts: Vec<PathBuf>,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn print(&self) {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        println!(
            "{}: {} checks, {} failures -> {}",
            self.experiment, self.checks, self.failures, verdict
        );
        for a in &self.artifacts {
            println!("  wrote {}", a.display());
        }
    }
}
