//! Corpus manifests: which image belongs to which writer, and in what role.
//!
//! The file is CSV with header `doc_id,writer_id,path,role`. Paths are
//! relative to the manifest's directory unless absolute. A document may hold
//! several roles joined with `+`, e.g. `train+gallery`.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Train,
    Gallery,
    Template,
    Query,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Train => "train",
            Role::Gallery => "gallery",
            Role::Template => "template",
            Role::Query => "query",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "train" => Ok(Role::Train),
            "gallery" => Ok(Role::Gallery),
            "template" => Ok(Role::Template),
            "query" => Ok(Role::Query),
            other => Err(Error::Manifest(format!("unknown role '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub doc_id: String,
    pub writer_id: String,
    /// Path as written in the manifest.
    pub path: PathBuf,
    pub roles: Vec<Role>,
}

impl ManifestEntry {
    pub fn has_role(&self, role: Role) -> bool {
        self.roles.contains(&role)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub root: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn new(root: impl Into<PathBuf>, entries: Vec<ManifestEntry>) -> Result<Self> {
        let m = Self {
            root: root.into(),
            entries,
        };
        m.check_unique()?;
        Ok(m)
    }

    fn check_unique(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.entries {
            if e.doc_id.is_empty() || e.writer_id.is_empty() {
                return Err(Error::Manifest("document and writer ids must be non-empty".into()));
            }
            // ids double as output file names
            if e.doc_id.contains(['/', '\\']) || e.doc_id == "." || e.doc_id == ".." {
                return Err(Error::Manifest(format!("document id '{}' is not a valid file name", e.doc_id)));
            }
            if !seen.insert(e.doc_id.as_str()) {
                return Err(Error::Manifest(format!("duplicate document id '{}'", e.doc_id)));
            }
        }
        Ok(())
    }

    /// Reads a manifest and checks that every referenced image exists.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let manifest = Self::parse(&text, root)?;
        for e in &manifest.entries {
            let p = manifest.resolve(e);
            if !p.is_file() {
                return Err(Error::Manifest(format!("image for '{}' not found: {}", e.doc_id, p.display())));
            }
        }
        Ok(manifest)
    }

    pub fn parse(text: &str, root: impl Into<PathBuf>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Manifest(format!("missing column '{name}'")))
        };
        let (c_doc, c_writer, c_path, c_role) = (col("doc_id")?, col("writer_id")?, col("path")?, col("role")?);
        let mut entries = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            let roles = rec[c_role]
                .split('+')
                .map(Role::from_str)
                .collect::<Result<Vec<_>>>()?;
            entries.push(ManifestEntry {
                doc_id: rec[c_doc].to_string(),
                writer_id: rec[c_writer].to_string(),
                path: PathBuf::from(&rec[c_path]),
                roles,
            });
        }
        Self::new(root, entries)
    }

    /// Builds a manifest from a flat directory of `<writer>_<doc>.{png,pgm}` files.
    pub fn from_flat_dir(dir: impl AsRef<Path>, roles: &[Role]) -> Result<Self> {
        let dir = dir.as_ref();
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "pgm"))
            })
            .collect();
        files.sort();
        let mut entries = Vec::new();
        for f in files {
            let stem = f.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let Some((writer, _)) = stem.split_once('_') else {
                log::warn!("skipping {}: name is not <writer>_<doc>", f.display());
                continue;
            };
            entries.push(ManifestEntry {
                doc_id: stem.to_string(),
                writer_id: writer.to_string(),
                path: PathBuf::from(f.file_name().expect("listed file has a name")),
                roles: roles.to_vec(),
            });
        }
        Self::new(dir, entries)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["doc_id", "writer_id", "path", "role"])?;
        for e in &self.entries {
            let roles: Vec<&str> = e.roles.iter().map(|r| r.as_str()).collect();
            w.write_record([
                e.doc_id.as_str(),
                e.writer_id.as_str(),
                &e.path.to_string_lossy(),
                &roles.join("+"),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Manifest(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()?).map_err(|e| Error::io(path, e))
    }

    /// Absolute (or root-relative) location of an entry's image.
    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.root.join(&entry.path)
        }
    }

    pub fn with_role(&self, role: Role) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.has_role(role))
    }
}
