//! The persistent memo file: one `records` line per entry, rewritten through
//! a temporary file and a rename. A sidecar `<path>.lock` file holds an
//! exclusive advisory lock for as long as the cache is open.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use tangentcount::records::{self, CacheRecord};
use tangentcount::Engine;

pub struct CacheFile {
    path: PathBuf,
    _lock: File,
    loaded: usize,
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

impl CacheFile {
    /// Locks the cache and loads its entries into `engine`. A missing file is
    /// an empty cache; unreadable lines are skipped with a warning.
    pub fn open(path: &Path, engine: &Engine) -> io::Result<Self> {
        let lock_path = with_suffix(path, ".lock");
        let lock = OpenOptions::new().create(true).truncate(false).write(true).open(&lock_path)?;
        lock.lock()?;

        let mut entries = Vec::new();
        match File::open(path) {
            Ok(file) => {
                for (n, line) in BufReader::new(file).lines().enumerate() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match line.parse::<CacheRecord>() {
                        Ok(record) => entries.push(record),
                        Err(e) => eprintln!("warning: {}:{}: skipping entry: {e}", path.display(), n + 1),
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        let loaded = entries.len();
        records::import(engine, entries);
        Ok(CacheFile { path: path.to_path_buf(), _lock: lock, loaded })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn loaded(&self) -> usize {
        self.loaded
    }

    /// Writes every memoized entry, replacing the file atomically. Skipped
    /// when nothing was added since loading.
    pub fn save(&self, engine: &Engine) -> io::Result<()> {
        let entries = records::export(engine);
        if entries.len() == self.loaded && self.path.exists() {
            return Ok(());
        }
        let tmp = with_suffix(&self.path, &format!(".tmp.{}", std::process::id()));
        let result = (|| {
            let mut out = BufWriter::new(File::create(&tmp)?);
            for record in &entries {
                writeln!(out, "{record}")?;
            }
            out.into_inner().map_err(io::IntoInnerError::into_error)?.sync_all()?;
            fs::rename(&tmp, &self.path)
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        result
    }
}
