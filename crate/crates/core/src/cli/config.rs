//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// Which artifact a key influences; used to scope config hashes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Paths and reporting knobs; never hashed.
    Io,
    Ingest,
    Vocab,
    Nb,
    Bon,
    Dv,
    Clf,
    Ensemble,
    Experiment,
}

pub struct Key {
    pub name: &'static str,
    pub default: &'static str,
    pub stage: Stage,
    pub help: &'static str,
    pub boolean: bool,
}

const fn key(name: &'static str, default: &'static str, stage: Stage, help: &'static str) -> Key {
    Key {
        name,
        default,
        stage,
        help,
        boolean: false,
    }
}

const fn flag(name: &'static str, default: &'static str, stage: Stage, help: &'static str) -> Key {
    Key {
        name,
        default,
        stage,
        help,
        boolean: true,
    }
}

use Stage::*;

pub const SCHEMA: &[Key] = &[
    key("out_dir", "dvlab_out", Io, "Directory holding all artifacts"),
    key("corpus_text", "", Io, "Raw corpus, one document per line (ingest, synth)"),
    key("corpus_meta", "", Io, "Metadata TSV with doc_id, label, split (ingest, synth)"),
    flag("normalize", "true", Ingest, "Lowercase and tokenize raw text on ingest"),
    key("max_order", "3", Vocab, "Longest n-gram order (1-3)"),
    key("min_count", "5,20,20", Vocab, "Minimum count per order, or one value for all"),
    key("smoothing", "1.0", Nb, "Laplace pseudo-count of the NB weights"),
    key("nb_model", "multinomial", Nb, "NB event model: multinomial or bernoulli"),
    flag("bon_signed", "true", Bon, "Use the signed log-ratio r instead of |r|"),
    flag("bon_binarized", "true", Bon, "Presence indicators instead of counts"),
    key("dim", "500", Dv, "Embedding dimension"),
    key("alpha", "6.0", Dv, "Cosine scale inside the sigmoid"),
    key("negatives", "5", Dv, "Negative samples per n-gram occurrence"),
    key("epochs", "20", Dv, "Training epochs"),
    key("lr", "0.025", Dv, "Initial learning rate"),
    key("lr_end", "0.0001", Dv, "Final learning rate"),
    key("objective", "cosine", Dv, "cosine or dot"),
    key("power", "0.75", Dv, "Exponent of the negative-sampling distribution"),
    flag("nb_subsample", "false", Dv, "Thin n-gram occurrences by NB keep probability"),
    key("n_a", "2.0", Dv, "Sub-sampling temperature n_a"),
    key("n_b", "3.0", Dv, "Sub-sampling divisor n_b"),
    key("seed", "1", Dv, "Base seed; every random stream is derived from it"),
    key("workers", "1", Dv, "Training threads (1 is bit-reproducible)"),
    key("model", "DV", Clf, "train-clf representation: DV, BON or DV+BON"),
    key("c_grid", "log:1e-4:1e4:10", Clf, "C values: comma list or log:lo:hi:count"),
    key("tol", "1e-6", Clf, "Gradient-norm tolerance of the classifier"),
    key("max_iter", "1000", Clf, "Classifier iteration cap"),
    key("scale", "1.0", Ensemble, "Dense multiplier when it is not tuned"),
    key("scale_grid", "0.25,0.5,1,2,4,8", Ensemble, "Dense multipliers tried on validation"),
    key("protocol", "auto", Ensemble, "auto, validation or cv"),
    key("cv_folds", "5", Ensemble, "Folds when cross-validating on Train"),
    key("fixed_c", "none", Ensemble, "Reuse this C for every scheme instead of tuning"),
    key("scheme", "correct", Ensemble, "correct, original, A, B, C or D"),
    key("train_scheme", "same", Ensemble, "Scheme for train rows when it differs from scheme"),
    key("runs", "30", Ensemble, "Seeds per shuffled scheme"),
    key("dense_vectors", "", Io, "External document vectors instead of train-dv output"),
    key("id_map", "", Io, "TSV key<TAB>doc_id resolving dense_vectors keys"),
    key("sizes", "10,20,50,100,200,500,1000,2000,5000,10000,20000", Experiment, "Learning-curve training sizes"),
    key("repeats", "30", Experiment, "Subsets per learning-curve size"),
    key("models", "DV,BON,DV+BON", Experiment, "Learning-curve representations"),
    flag("balanced", "true", Experiment, "Class-balanced learning-curve subsets"),
    key("external_curve", "", Io, "CSV of externally produced learning-curve rows"),
    key("runs_per_variant", "3", Experiment, "Progress-study runs per variant"),
    key("cadence_early", "500", Experiment, "Checkpoint every this many steps early on"),
    key("cadence_early_until", "5000", Experiment, "Last step of the early cadence"),
    flag("cadence_epoch", "true", Experiment, "Also checkpoint at every epoch end"),
    key("logit_split", "test", Experiment, "Split analysed by logit-analysis"),
    key("plot_input", "", Io, "CSV to chart"),
    key("plot_kind", "auto", Io, "curve, progress, logits, or auto from the header"),
    key("plot_output", "", Io, "SVG path (default: input with .svg)"),
    key("order_a", "", Io, "align: doc-id order of representation A"),
    key("order_b", "", Io, "align: doc-id order of representation B"),
    key("synth_sizes", "400,100,400,200", Io, "synth: train, valid, test, extra documents"),
];

pub fn schema_key(name: &str) -> Option<&'static Key> {
    SCHEMA.iter().find(|k| k.name == name)
}

pub fn kebab(name: &str) -> String {
    name.replace('_', "-")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<&'static str, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            values: SCHEMA.iter().map(|k| (k.name, k.default.to_string())).collect(),
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn set(&mut self, name: &str, value: &str) -> Result<()> {
        let k = schema_key(name).ok_or_else(|| config_err(format!("unknown key {name:?}")))?;
        let value = value.trim();
        if k.boolean && value.parse::<bool>().is_err() {
            return Err(config_err(format!("{name} expects true or false, got {value:?}")));
        }
        self.values.insert(k.name, value.to_string());
        Ok(())
    }

    /// Apply a flat `key = value` file; `#` starts a comment line.
    pub fn apply_file_text(&mut self, text: &str, origin: &str) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("{origin}:{}: expected key = value", n + 1)))?;
            let k = k.trim();
            if !seen.insert(k.to_string()) {
                return Err(config_err(format!("{origin}:{}: duplicate key {k}", n + 1)));
            }
            self.set(k, v)
                .map_err(|e| config_err(format!("{origin}:{}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_file_text(&text, &path.display().to_string())
    }

    pub fn str(&self, name: &str) -> &str {
        self.values
            .get(name)
            .unwrap_or_else(|| panic!("{name} is not a schema key"))
    }

    fn parse<T: std::str::FromStr>(&self, name: &str, what: &str) -> Result<T> {
        self.str(name)
            .parse()
            .map_err(|_| config_err(format!("{name} expects {what}, got {:?}", self.str(name))))
    }

    pub fn usize(&self, name: &str) -> Result<usize> {
        self.parse(name, "a non-negative integer")
    }

    pub fn u64(&self, name: &str) -> Result<u64> {
        self.parse(name, "a non-negative integer")
    }

    pub fn f64(&self, name: &str) -> Result<f64> {
        self.parse(name, "a number")
    }

    pub fn bool(&self, name: &str) -> Result<bool> {
        self.parse(name, "true or false")
    }

    /// `None` for an empty value.
    pub fn path(&self, name: &str) -> Option<PathBuf> {
        let v = self.str(name);
        (!v.is_empty()).then(|| PathBuf::from(v))
    }

    pub fn list<T: std::str::FromStr>(&self, name: &str) -> Result<Vec<T>> {
        self.str(name)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| config_err(format!("{name}: bad list element {s:?}")))
            })
            .collect()
    }

    /// Comma list, or `log:lo:hi:count` for log-spaced values.
    pub fn grid(&self, name: &str) -> Result<Vec<f64>> {
        let v = self.str(name);
        if let Some(spec) = v.strip_prefix("log:") {
            let parts: Vec<&str> = spec.split(':').collect();
            let bad = || config_err(format!("{name}: expected log:lo:hi:count, got {v:?}"));
            let [lo, hi, k] = parts[..] else {
                return Err(bad());
            };
            let (lo, hi): (f64, f64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
            let k: usize = k.parse().map_err(|_| bad())?;
            if !(lo > 0.0 && hi >= lo && k >= 1) {
                return Err(bad());
            }
            return Ok(crate::classifier::log_grid(lo, hi, k));
        }
        self.list(name)
    }

    pub fn snapshot(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    /// SHA-256 over the `key=value` lines of every key in `stages`.
    pub fn hash(&self, stages: &[Stage]) -> String {
        let mut h = Sha256::new();
        for k in SCHEMA.iter().filter(|k| stages.contains(&k.stage)) {
            h.update(format!("{}={}\n", k.name, self.str(k.name)).as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}
