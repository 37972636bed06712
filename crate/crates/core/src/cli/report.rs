//! Human-readable run report and the output-file manifest.

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::format::write_file;
use crate::error::{Error, Result};
use crate::ni::{NiVerdict, StabilityReport};
use crate::synthesis::{CertifyReport, EpsilonRange, SynthesisResult};

#[derive(Debug, Clone)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

/// Scalar gain-condition test together with the direct loop-pole check.
#[derive(Debug, Clone)]
pub struct StabilityCheck {
    pub delta_kind: &'static str,
    pub report: StabilityReport,
    pub loop_poles: Vec<Complex64>,
    pub direct_stable: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub command: String,
    pub sections: Vec<Section>,
    pub verdicts: Vec<(String, NiVerdict)>,
    pub range: Option<EpsilonRange>,
    pub synthesis: Option<SynthesisResult>,
    pub stability: Option<StabilityCheck>,
    pub certify: Option<CertifyReport>,
    /// Files written, relative to the output directory.
    pub manifest: Vec<PathBuf>,
    pub failures: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.into(),
            ..RunReport::default()
        }
    }

    pub fn section(&mut self, title: impl Into<String>, lines: Vec<String>) {
        self.sections.push(Section {
            title: title.into(),
            lines,
        });
    }

    pub fn fail(&mut self, why: impl Into<String>) {
        self.failures.push(why.into());
    }

    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }

    /// 0 on success, 1 when a checked property or obligation fails.
    pub fn exit_code(&self) -> i32 {
        if self.success() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!("ni-synth {}\n", self.command);
        for sec in &self.sections {
            s.push_str(&format!("\n== {} ==\n", sec.title));
            for l in &sec.lines {
                s.push_str("  ");
                s.push_str(l);
                s.push('\n');
            }
        }
        s.push_str("\n== files ==\n");
        for f in &self.manifest {
            s.push_str(&format!("  {}\n", f.display()));
        }
        if self.success() {
            s.push_str("\nstatus: ok\n");
        } else {
            s.push_str(&format!("\nstatus: FAILED ({})\n", self.failures.len()));
            for f in &self.failures {
                s.push_str(&format!("  - {f}\n"));
            }
        }
        s
    }
}

/// Writes artifacts into one directory and records them.
#[derive(Debug)]
pub struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    pub fn create(dir: &Path) -> Result<Outputs> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        write_file(&self.dir.join(name), contents)?;
        self.written.push(PathBuf::from(name));
        Ok(())
    }

    /// Record the manifest (including the report itself) and write the report.
    pub fn finish(mut self, report: &mut RunReport) -> Result<()> {
        self.written.push(PathBuf::from("report.txt"));
        report.manifest = self.written.clone();
        write_file(&self.dir.join("report.txt"), &report.render())
    }
}
