use std::path::PathBuf;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;

use super::loss::{pair_loss_into, Gradients};
use super::{DVModel, EmbeddingMatrix, TrainConfig};
use crate::corpus::Corpus;
use crate::nb_features::SubSampler;
use crate::seed;
use crate::vocab::{NegativeSampler, Vocabulary};
use crate::{Error, Result};

/// When the monitor fires, in global steps (documents processed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckpointCadence {
    /// Fire every `early_every` steps ...
    pub early_every: u64,
    /// ... up to and including this step.
    pub early_until: u64,
    /// Also fire at the end of every epoch.
    pub every_epoch: bool,
}

impl Default for CheckpointCadence {
    fn default() -> Self {
        CheckpointCadence {
            early_every: 500,
            early_until: 5000,
            every_epoch: true,
        }
    }
}

impl CheckpointCadence {
    pub fn per_epoch() -> Self {
        CheckpointCadence {
            early_every: 0,
            early_until: 0,
            every_epoch: true,
        }
    }

    /// Checkpoint steps inside `(start, end]`, ascending.
    pub fn steps_in(&self, start: u64, end: u64) -> Vec<u64> {
        let mut out = Vec::new();
        if let Some(q) = start.checked_div(self.early_every) {
            let mut s = (q + 1) * self.early_every;
            while s <= end.min(self.early_until) {
                out.push(s);
                s += self.early_every;
            }
        }
        if self.every_epoch && end > start && out.last() != Some(&end) {
            out.push(end);
        }
        out
    }
}

/// State visible to a [`Monitor`] at a checkpoint. All workers are joined, so
/// the vectors are a consistent snapshot.
pub struct Checkpoint<'a> {
    pub step: u64,
    pub epoch: usize,
    pub end_of_epoch: bool,
    docs: &'a SharedMatrix,
}

impl Checkpoint<'_> {
    pub fn doc_vectors(&self) -> EmbeddingMatrix {
        self.docs.to_matrix()
    }
}

/// Observer called during training.
pub trait Monitor {
    fn cadence(&self) -> CheckpointCadence;
    fn on_checkpoint(&mut self, checkpoint: &Checkpoint<'_>) -> Result<()>;
}

/// Writes the document vectors at every checkpoint to
/// `<dir>/checkpoint_step_<step>.vec`.
pub struct FileCheckpointer {
    pub dir: PathBuf,
    pub cadence: CheckpointCadence,
    pub written: Vec<PathBuf>,
}

impl FileCheckpointer {
    pub fn new(dir: impl Into<PathBuf>, cadence: CheckpointCadence) -> Self {
        FileCheckpointer {
            dir: dir.into(),
            cadence,
            written: Vec::new(),
        }
    }
}

impl Monitor for FileCheckpointer {
    fn cadence(&self) -> CheckpointCadence {
        self.cadence
    }

    fn on_checkpoint(&mut self, cp: &Checkpoint<'_>) -> Result<()> {
        let path = self.dir.join(format!("checkpoint_step_{}.vec", cp.step));
        let text = super::io::format_embeddings(&cp.doc_vectors(), |i| i.to_string());
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }
}

/// `f32` matrix shared between workers without locks.
///
/// Elements are stored as `AtomicU32` bit patterns and accessed with relaxed
/// loads and stores, so concurrent updates of the same row may overwrite
/// each other (as in Hogwild-style SGD) but never tear.
struct SharedMatrix {
    dim: usize,
    data: Vec<AtomicU32>,
}

impl SharedMatrix {
    fn from_matrix(m: &EmbeddingMatrix) -> Self {
        SharedMatrix {
            dim: m.dim(),
            data: m.as_slice().iter().map(|x| AtomicU32::new(x.to_bits())).collect(),
        }
    }

    #[inline]
    fn load(&self, row: usize, out: &mut [f64]) {
        let r = &self.data[row * self.dim..(row + 1) * self.dim];
        for (o, a) in out.iter_mut().zip(r) {
            *o = f32::from_bits(a.load(Ordering::Relaxed)) as f64;
        }
    }

    #[inline]
    fn store(&self, row: usize, v: &[f64]) {
        let r = &self.data[row * self.dim..(row + 1) * self.dim];
        for (a, &x) in r.iter().zip(v) {
            a.store((x as f32).to_bits(), Ordering::Relaxed);
        }
    }

    /// `row += scale * delta`.
    #[inline]
    fn add_scaled(&self, row: usize, delta: &[f64], scale: f64) {
        let r = &self.data[row * self.dim..(row + 1) * self.dim];
        for (a, &d) in r.iter().zip(delta) {
            let x = f32::from_bits(a.load(Ordering::Relaxed)) as f64 + scale * d;
            a.store((x as f32).to_bits(), Ordering::Relaxed);
        }
    }

    fn to_matrix(&self) -> EmbeddingMatrix {
        let data = self
            .data
            .iter()
            .map(|a| f32::from_bits(a.load(Ordering::Relaxed)))
            .collect();
        EmbeddingMatrix::from_vec(data, self.dim).expect("shape preserved")
    }
}

fn uniform_init(rows: usize, dim: usize, rng: &mut impl Rng) -> EmbeddingMatrix {
    let half = 0.5 / dim as f64;
    let data = (0..rows * dim)
        .map(|_| {
            let mut x = 0.0;
            while x == 0.0 {
                x = rng.random_range(-half..half);
            }
            x as f32
        })
        .collect();
    EmbeddingMatrix::from_vec(data, dim).expect("shape")
}

/// Train on a corpus, encoding its documents with `vocab` first.
pub fn train(
    corpus: &Corpus,
    vocab: &Vocabulary,
    config: &TrainConfig,
    subsampler: Option<&SubSampler>,
    monitor: Option<&mut dyn Monitor>,
) -> Result<DVModel> {
    if let Some(n) = vocab.source_documents() {
        if n != corpus.len() {
            return Err(Error::InvalidArgument(format!(
                "vocabulary was built on {n} documents, corpus has {}",
                corpus.len()
            )));
        }
    }
    let encoded = vocab.encode_all(corpus);
    train_encoded(&encoded, vocab, config, subsampler, monitor)
}

/// Shared, read-only inputs of one training run.
struct Job<'a> {
    encoded: &'a [Vec<u32>],
    config: &'a TrainConfig,
    sampler: &'a NegativeSampler,
    subsampler: Option<&'a SubSampler>,
    docs: &'a SharedMatrix,
    ngrams: &'a SharedMatrix,
    processed: &'a AtomicU64,
    total: f64,
}

struct WorkerOutcome {
    loss: f64,
    pairs: u64,
}

impl Job<'_> {
    fn lr(&self, processed: u64) -> f64 {
        let c = self.config;
        let p = (processed as f64 / self.total).min(1.0);
        c.lr_start - (c.lr_start - c.lr_end) * p
    }

    fn run_worker(&self, docs: &[usize], epoch: usize) -> Result<WorkerOutcome> {
        let cfg = self.config;
        let dim = cfg.dim;
        let k = cfg.negatives;

        let mut doc_v = vec![0.0; dim];
        let mut pos_v = vec![0.0; dim];
        let mut neg_v = vec![0.0; dim * k];
        let mut neg_ids = vec![0u32; k];
        let mut grads = Gradients::new(dim, k);
        let mut out = WorkerOutcome { loss: 0.0, pairs: 0 };

        for &d in docs {
            // Streams are keyed by (epoch, document) so that results do not
            // depend on how an epoch is cut into segments or workers.
            let cell = [epoch as u64, d as u64];
            let mut rng = seed::rng(cfg.seed, "dv-negatives", &cell);
            let mut keep_rng = self.subsampler.map(|s| seed::rng(s.seed(), "nb-subsample", &cell));
            let ngrams = &self.encoded[d];
            let base = self.processed.fetch_add(ngrams.len() as u64, Ordering::Relaxed);
            self.docs.load(d, &mut doc_v);
            for (offset, &u) in ngrams.iter().enumerate() {
                if let (Some(s), Some(r)) = (self.subsampler, keep_rng.as_mut()) {
                    if !s.keep(u, r) {
                        continue;
                    }
                }
                let lr = self.lr(base + offset as u64);
                self.ngrams.load(u as usize, &mut pos_v);
                for (j, id) in neg_ids.iter_mut().enumerate() {
                    *id = self.sampler.sample(&mut rng);
                    self.ngrams.load(*id as usize, &mut neg_v[j * dim..(j + 1) * dim]);
                }
                let loss =
                    pair_loss_into(&doc_v, &pos_v, &neg_v, cfg.alpha, cfg.objective, &mut grads)?;
                if !loss.is_finite() {
                    return Err(Error::NonFinite(format!(
                        "training loss at epoch {epoch}, document {d} (learning rate too high?)"
                    )));
                }
                out.loss += loss;
                out.pairs += 1;
                for (x, g) in doc_v.iter_mut().zip(&grads.doc) {
                    *x -= lr * g;
                }
                self.ngrams.add_scaled(u as usize, &grads.pos, -lr);
                for (j, &id) in neg_ids.iter().enumerate() {
                    self.ngrams
                        .add_scaled(id as usize, &grads.negs[j * dim..(j + 1) * dim], -lr);
                }
            }
            self.docs.store(d, &doc_v);
        }
        Ok(out)
    }

    fn run_segment(&self, docs: &[usize], epoch: usize) -> Result<WorkerOutcome> {
        let workers = self.config.workers.min(docs.len()).max(1);
        let outcomes: Vec<Result<WorkerOutcome>> = if workers == 1 {
            vec![self.run_worker(docs, epoch)]
        } else {
            let chunk = docs.len().div_ceil(workers);
            std::thread::scope(|s| {
                let handles: Vec<_> = docs
                    .chunks(chunk)
                    .map(|part| s.spawn(move || self.run_worker(part, epoch)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("training worker panicked"))
                    .collect()
            })
        };
        let mut total = WorkerOutcome { loss: 0.0, pairs: 0 };
        for o in outcomes {
            let o = o?;
            total.loss += o.loss;
            total.pairs += o.pairs;
        }
        Ok(total)
    }
}

/// Train on pre-encoded documents (`encoded[d]` holds the vocabulary ids of
/// every n-gram occurrence of document `d`).
///
/// Per epoch the documents are visited in a seeded random order; each
/// in-vocabulary occurrence (optionally thinned by `subsampler`, redrawn
/// every epoch) triggers one SGD step with `negatives` fresh negatives. The
/// learning rate decays linearly over all scheduled occurrences. With
/// `workers > 1` documents are split between threads that update both
/// matrices without locking, so only `workers == 1` is bit-reproducible.
pub fn train_encoded(
    encoded: &[Vec<u32>],
    vocab: &Vocabulary,
    config: &TrainConfig,
    subsampler: Option<&SubSampler>,
    mut monitor: Option<&mut dyn Monitor>,
) -> Result<DVModel> {
    config.validate()?;
    if encoded.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if vocab.is_empty() {
        return Err(Error::InvalidArgument("vocabulary is empty".into()));
    }
    let occurrences: u64 = encoded.iter().map(|d| d.len() as u64).sum();
    if occurrences == 0 {
        return Err(Error::InvalidArgument(
            "no document contains an in-vocabulary n-gram".into(),
        ));
    }
    if let Some(bad) = encoded.iter().flatten().find(|&&id| id as usize >= vocab.len()) {
        return Err(Error::InvalidArgument(format!(
            "n-gram id {bad} is outside the vocabulary (corpus/vocabulary mismatch)"
        )));
    }
    if let Some(s) = subsampler {
        if s.len() != vocab.len() {
            return Err(Error::DimensionMismatch {
                expected: vocab.len(),
                actual: s.len(),
            });
        }
    }

    let sampler = NegativeSampler::new(vocab, config.sampling_power, config.seed)?;
    let mut init_rng = seed::rng(config.seed, "dv-init", &[]);
    let docs = SharedMatrix::from_matrix(&uniform_init(encoded.len(), config.dim, &mut init_rng));
    let ngrams = SharedMatrix::from_matrix(&uniform_init(vocab.len(), config.dim, &mut init_rng));
    let processed = AtomicU64::new(0);
    let job = Job {
        encoded,
        config,
        sampler: &sampler,
        subsampler,
        docs: &docs,
        ngrams: &ngrams,
        processed: &processed,
        total: (occurrences * config.epochs as u64) as f64,
    };

    let cadence = monitor.as_ref().map(|m| m.cadence());
    let n_docs = encoded.len() as u64;
    let mut order: Vec<usize> = (0..encoded.len()).collect();
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    let mut step = 0u64;
    for epoch in 0..config.epochs {
        order.shuffle(&mut seed::rng(config.seed, "dv-order", &[epoch as u64]));
        let epoch_start = step;
        let epoch_end = step + n_docs;
        let mut bounds = cadence.map_or_else(Vec::new, |c| c.steps_in(epoch_start, epoch_end));
        if bounds.last() != Some(&epoch_end) {
            bounds.push(epoch_end);
        }
        let (mut loss, mut pairs) = (0.0, 0u64);
        for b in bounds {
            let lo = (step - epoch_start) as usize;
            let hi = (b - epoch_start) as usize;
            let o = job.run_segment(&order[lo..hi], epoch)?;
            loss += o.loss;
            pairs += o.pairs;
            step = b;
            if let (Some(m), Some(c)) = (monitor.as_deref_mut(), cadence) {
                let is_checkpoint = c.steps_in(b - 1, b).contains(&b);
                if is_checkpoint {
                    m.on_checkpoint(&Checkpoint {
                        step,
                        epoch,
                        end_of_epoch: step == epoch_end,
                        docs: &docs,
                    })?;
                }
            }
        }
        epoch_losses.push(if pairs > 0 { loss / pairs as f64 } else { 0.0 });
    }

    let doc_vectors = docs.to_matrix();
    let ngram_vectors = ngrams.to_matrix();
    for (name, m) in [("document", &doc_vectors), ("n-gram", &ngram_vectors)] {
        if !m.all_finite() {
            return Err(Error::NonFinite(format!("{name} vectors after training")));
        }
        if let Some(r) = m.first_zero_row() {
            return Err(Error::DegenerateInput(format!("{name} vector {r} has zero norm")));
        }
    }
    Ok(DVModel {
        doc_vectors,
        ngram_vectors,
        config: config.clone(),
        epoch_losses,
        steps: step,
    })
}
