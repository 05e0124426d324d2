//! Output directory bookkeeping. The MANIFEST is written before any other
//! file and rewritten after each one, so an interrupted run always leaves a
//! listing of what was completed.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    Complete,
    Partial,
    Failed,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Running => "running",
            Status::Complete => "complete",
            Status::Partial => "partial",
            Status::Failed => "failed",
        }
    }
}

pub struct Manifest {
    dir: PathBuf,
    command: String,
    files: Vec<String>,
    notes: Vec<String>,
    status: Status,
}

impl Manifest {
    pub fn start(dir: &Path, command: &str) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let m = Self { dir: dir.to_path_buf(), command: command.into(), files: Vec::new(), notes: Vec::new(), status: Status::Running };
        m.flush()?;
        Ok(m)
    }

    fn flush(&self) -> io::Result<()> {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(s, "status: {}", self.status.label());
        for f in &self.files {
            let _ = writeln!(s, "file: {f}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        fs::write(self.dir.join("MANIFEST"), s)
    }

    pub fn write(&mut self, name: &str, contents: &str) -> io::Result<()> {
        fs::write(self.dir.join(name), contents)?;
        self.files.push(name.into());
        self.flush()
    }

    pub fn note(&mut self, note: impl Into<String>) -> io::Result<()> {
        self.notes.push(note.into().replace('\n', " "));
        self.flush()
    }

    pub fn finish(&mut self, status: Status) -> io::Result<()> {
        self.status = status;
        self.flush()
    }
}
