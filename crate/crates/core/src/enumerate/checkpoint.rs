//! Resumable progress files.
//!
//! ```text
//! # dualgraph checkpoint
//! genus 8
//! class loopless
//! done 7:0
//! done 7:1
//! done 6:12
//! ```
//!
//! A `done <genus>:<index>` line records that every child of parent `index`
//! (in certificate order) at the given genus has been merged. The
//! representatives found so far live next to the checkpoint in a MEL stream
//! (see [`companion_path`]).

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::multigraph::GraphClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefixId {
    pub genus: u64,
    pub index: usize,
}

impl fmt::Display for PrefixId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.genus, self.index)
    }
}

impl FromStr for PrefixId {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (g, i) = s.split_once(':').ok_or(())?;
        Ok(PrefixId { genus: g.parse().map_err(|_| ())?, index: i.parse().map_err(|_| ())? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub genus: u64,
    pub class: GraphClass,
    pub done: BTreeSet<PrefixId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckpointError {
    #[error("line {line}: unrecognised `{text}`")]
    BadLine { line: usize, text: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("duplicate `{0}` line")]
    Duplicate(&'static str),
    #[error("checkpoint is for genus {found_genus} class {found_class}, not genus {genus} class {class}")]
    Mismatch { genus: u64, class: GraphClass, found_genus: u64, found_class: GraphClass },
    #[error("prefix {0} does not belong to this run")]
    ForeignPrefix(PrefixId),
}

impl Checkpoint {
    pub fn new(genus: u64, class: GraphClass) -> Self {
        Checkpoint { genus, class, done: BTreeSet::new() }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# dualgraph checkpoint\ngenus {}\nclass {}\n", self.genus, self.class);
        for id in &self.done {
            out.push_str(&format!("done {id}\n"));
        }
        out
    }

    /// Checks that the file describes the run `(genus, class)`.
    pub fn expect(&self, genus: u64, class: GraphClass) -> Result<(), CheckpointError> {
        if self.genus != genus || self.class != class {
            return Err(CheckpointError::Mismatch { genus, class, found_genus: self.genus, found_class: self.class });
        }
        Ok(())
    }
}

pub fn parse_checkpoint(text: &str) -> Result<Checkpoint, CheckpointError> {
    let mut genus = None;
    let mut class = None;
    let mut done = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CheckpointError::BadLine { line: i + 1, text: raw.to_string() };
        let (key, value) = line.split_once(char::is_whitespace).ok_or_else(bad)?;
        let value = value.trim();
        match key {
            "genus" => {
                if genus.replace(value.parse::<u64>().map_err(|_| bad())?).is_some() {
                    return Err(CheckpointError::Duplicate("genus"));
                }
            }
            "class" => {
                if class.replace(value.parse::<GraphClass>().map_err(|_| bad())?).is_some() {
                    return Err(CheckpointError::Duplicate("class"));
                }
            }
            "done" => {
                done.insert(value.parse::<PrefixId>().map_err(|_| bad())?);
            }
            _ => return Err(bad()),
        }
    }
    let genus = genus.ok_or(CheckpointError::Missing("genus"))?;
    let class = class.ok_or(CheckpointError::Missing("class"))?;
    if let Some(id) = done.iter().find(|id| id.genus >= genus || id.genus + 2 < genus) {
        return Err(CheckpointError::ForeignPrefix(*id));
    }
    Ok(Checkpoint { genus, class, done })
}

/// The MEL stream holding the representatives recorded by a checkpoint.
pub fn companion_path(checkpoint: &Path) -> PathBuf {
    let mut name = checkpoint.as_os_str().to_owned();
    name.push(".mel");
    PathBuf::from(name)
}
