//! Artifact files in `out_dir`, each with a `.meta` sidecar recording the
//! hash of the configuration keys that shaped it.

use std::path::{Path, PathBuf};

use super::config::{RunConfig, Stage};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Artifact {
    Corpus,
    Metadata,
    Vocab,
    NbWeights,
    Bon,
    DocVectors,
    NgramVectors,
}

impl Artifact {
    pub fn file_name(self) -> &'static str {
        match self {
            Artifact::Corpus => "corpus.txt",
            Artifact::Metadata => "meta.tsv",
            Artifact::Vocab => "vocab.tsv",
            Artifact::NbWeights => "nb_weights.tsv",
            Artifact::Bon => "bon.txt",
            Artifact::DocVectors => "doc_vectors.vec",
            Artifact::NgramVectors => "ngram_vectors.vec",
        }
    }

    /// Subcommand that produces the artifact.
    pub fn producer(self) -> &'static str {
        match self {
            Artifact::Corpus | Artifact::Metadata => "ingest",
            Artifact::Vocab => "vocab",
            Artifact::NbWeights => "nb-weights",
            Artifact::Bon => "bon",
            Artifact::DocVectors | Artifact::NgramVectors => "train-dv",
        }
    }

    pub fn stages(self) -> &'static [Stage] {
        use Stage::*;
        match self {
            Artifact::Corpus | Artifact::Metadata => &[Ingest],
            Artifact::Vocab => &[Ingest, Vocab],
            Artifact::NbWeights => &[Ingest, Vocab, Nb],
            Artifact::Bon => &[Ingest, Vocab, Nb, Bon],
            Artifact::DocVectors | Artifact::NgramVectors => &[Ingest, Vocab, Nb, Dv],
        }
    }
}

pub struct Store<'a> {
    pub dir: PathBuf,
    pub config: &'a RunConfig,
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

impl<'a> Store<'a> {
    pub fn new(config: &'a RunConfig) -> Self {
        Store {
            dir: PathBuf::from(config.str("out_dir")),
            config,
        }
    }

    pub fn path(&self, a: Artifact) -> PathBuf {
        self.dir.join(a.file_name())
    }

    /// Path of an existing artifact; warns on stderr if it was produced
    /// under a different configuration.
    pub fn require(&self, a: Artifact) -> Result<PathBuf> {
        let path = self.path(a);
        if !path.exists() {
            return Err(Error::MissingDependency(format!(
                "{} not found; run `dvlab {}` first",
                path.display(),
                a.producer()
            )));
        }
        if let Ok(meta) = std::fs::read_to_string(sidecar(&path)) {
            let expected = self.config.hash(a.stages());
            let recorded = meta
                .lines()
                .find_map(|l| l.strip_prefix("config_hash="))
                .unwrap_or("");
            if recorded != expected {
                eprintln!(
                    "warning: kind=config_mismatch artifact={} recorded={} current={}",
                    a.file_name(),
                    recorded,
                    expected
                );
            }
        }
        Ok(path)
    }

    pub fn write(&self, a: Artifact, contents: &str) -> Result<PathBuf> {
        let path = self.path(a);
        self.write_file(&path, contents, a.stages())?;
        Ok(path)
    }

    /// Write `contents` to `path` plus its sidecar hashed over `stages`.
    pub fn write_file(&self, path: &Path, contents: &str, stages: &[Stage]) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(path, contents).map_err(|e| Error::io(path, e))?;
        let meta = format!("config_hash={}\n", self.config.hash(stages));
        let side = sidecar(path);
        std::fs::write(&side, meta).map_err(|e| Error::io(&side, e))
    }
}
