//! N-gram vocabulary with frequency thresholds, and the negative-sampling
//! distribution over it.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use crate::corpus::{Corpus, DocumentSource, NGram, MAX_ORDER};
use crate::{Error, Result};

const NO_TOKEN: u32 = u32::MAX;

type TupleKey = [u32; MAX_ORDER];

/// Thresholds for [`build_vocab_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VocabConfig {
    pub max_order: usize,
    /// Minimum count per order: index 0 for unigrams, 1 for bigrams, ...
    pub min_count: [u64; MAX_ORDER],
}

impl VocabConfig {
    pub fn uniform(max_order: usize, min_count: u64) -> Self {
        VocabConfig {
            max_order,
            min_count: [min_count; MAX_ORDER],
        }
    }
}

impl Default for VocabConfig {
    fn default() -> Self {
        VocabConfig {
            max_order: 3,
            min_count: [5, 20, 20],
        }
    }
}

/// N-grams that passed the count threshold, with dense ids ordered by
/// descending count, ties broken by lexicographic n-gram order.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    ngrams: Vec<NGram>,
    counts: Vec<u64>,
    config: VocabConfig,
    token_ids: HashMap<String, u32>,
    tuple_ids: HashMap<TupleKey, u32>,
    source_documents: Option<usize>,
}

/// Build with a single threshold for every order.
pub fn build_vocab(corpus: &Corpus, max_order: usize, min_count: u64) -> Result<Vocabulary> {
    build_vocab_with(corpus, VocabConfig::uniform(max_order, min_count))
}

/// Count n-grams over every document (all splits, including unlabeled ones)
/// and keep those reaching the per-order threshold.
pub fn build_vocab_with(corpus: &Corpus, config: VocabConfig) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    check_order(config.max_order)?;

    let mut interner: HashMap<&str, u32> = HashMap::new();
    let mut names: Vec<&str> = Vec::new();
    let mut counts: HashMap<TupleKey, u64> = HashMap::new();
    let mut ids = Vec::new();
    for i in 0..corpus.num_documents() {
        ids.clear();
        for t in corpus.tokens_of(i) {
            let next = names.len() as u32;
            let id = *interner.entry(t.as_str()).or_insert_with(|| {
                names.push(t.as_str());
                next
            });
            ids.push(id);
        }
        for k in 1..=config.max_order {
            for w in ids.windows(k) {
                *counts.entry(tuple_key(w)).or_insert(0) += 1;
            }
        }
    }

    let mut kept: Vec<(NGram, u64)> = counts
        .into_iter()
        .filter(|(key, c)| *c >= config.min_count[key_order(key) - 1])
        .map(|(key, c)| {
            let parts = key.iter().take_while(|&&t| t != NO_TOKEN).map(|&t| names[t as usize]);
            (NGram::new(parts).expect("order within bounds"), c)
        })
        .collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let mut vocab = Vocabulary::from_entries(kept, config)?;
    vocab.source_documents = Some(corpus.len());
    Ok(vocab)
}

fn check_order(max_order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&max_order) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "max_order must be in 1..={MAX_ORDER}, got {max_order}"
        )))
    }
}

fn tuple_key(window: &[u32]) -> TupleKey {
    let mut key = [NO_TOKEN; MAX_ORDER];
    key[..window.len()].copy_from_slice(window);
    key
}

fn key_order(key: &TupleKey) -> usize {
    key.iter().take_while(|&&t| t != NO_TOKEN).count()
}

impl Vocabulary {
    /// Build from entries already in id order.
    pub fn from_entries(entries: Vec<(NGram, u64)>, config: VocabConfig) -> Result<Self> {
        check_order(config.max_order)?;
        let mut token_ids: HashMap<String, u32> = HashMap::new();
        let mut tuple_ids = HashMap::with_capacity(entries.len());
        let mut ngrams = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        for (id, (ngram, count)) in entries.into_iter().enumerate() {
            if ngram.order() > config.max_order {
                return Err(Error::InvalidArgument(format!(
                    "n-gram {ngram} exceeds max_order {}",
                    config.max_order
                )));
            }
            if count < config.min_count[ngram.order() - 1] {
                return Err(Error::InvalidArgument(format!(
                    "n-gram {ngram} has count {count} below its threshold"
                )));
            }
            let mut key = [NO_TOKEN; MAX_ORDER];
            for (slot, part) in key.iter_mut().zip(ngram.parts()) {
                let next = token_ids.len() as u32;
                *slot = *token_ids.entry(part.clone()).or_insert(next);
            }
            if tuple_ids.insert(key, id as u32).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate n-gram {ngram}")));
            }
            ngrams.push(ngram);
            counts.push(count);
        }
        Ok(Vocabulary {
            ngrams,
            counts,
            config,
            token_ids,
            tuple_ids,
            source_documents: None,
        })
    }

    pub fn len(&self) -> usize {
        self.ngrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ngrams.is_empty()
    }

    pub fn max_order(&self) -> usize {
        self.config.max_order
    }

    /// Smallest threshold over the orders in use.
    pub fn min_count(&self) -> u64 {
        self.config.min_count[..self.config.max_order]
            .iter()
            .copied()
            .min()
            .unwrap_or(0)
    }

    pub fn config(&self) -> VocabConfig {
        self.config
    }

    /// Number of documents of the corpus this vocabulary was counted on, when
    /// known.
    pub fn source_documents(&self) -> Option<usize> {
        self.source_documents
    }

    pub fn ngram(&self, id: u32) -> &NGram {
        &self.ngrams[id as usize]
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn id(&self, ngram: &NGram) -> Option<u32> {
        let mut key = [NO_TOKEN; MAX_ORDER];
        for (slot, part) in key.iter_mut().zip(ngram.parts()) {
            *slot = *self.token_ids.get(part)?;
        }
        self.tuple_ids.get(&key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &NGram, u64)> {
        self.ngrams
            .iter()
            .zip(&self.counts)
            .enumerate()
            .map(|(i, (g, &c))| (i as u32, g, c))
    }

    /// Ids of every in-vocabulary n-gram occurrence in `tokens`, grouped by
    /// order like [`extract_ngrams`](crate::corpus::extract_ngrams).
    pub fn encode(&self, tokens: &[String]) -> Vec<u32> {
        let ids: Vec<u32> = tokens
            .iter()
            .map(|t| self.token_ids.get(t).copied().unwrap_or(NO_TOKEN))
            .collect();
        let mut out = Vec::with_capacity(ids.len() * self.config.max_order);
        for k in 1..=self.config.max_order {
            for w in ids.windows(k) {
                if w.contains(&NO_TOKEN) {
                    continue;
                }
                if let Some(&id) = self.tuple_ids.get(&tuple_key(w)) {
                    out.push(id);
                }
            }
        }
        out
    }

    /// Encode every document of a source.
    pub fn encode_all<S: DocumentSource + Sync>(&self, source: &S) -> Vec<Vec<u32>> {
        let n = source.num_documents();
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .map(|i| self.encode(source.tokens_of(i)))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..n).map(|i| self.encode(source.tokens_of(i))).collect()
        }
    }

    /// Vocabulary file: a `#` comment with the thresholds, a header, then
    /// `ngram  ngram_id  count` rows with n-gram tokens joined by `_`.
    pub fn to_tsv(&self) -> String {
        let mc = self.config.min_count;
        let mut out = format!(
            "# max_order={} min_count={},{},{}\nngram\tngram_id\tcount\n",
            self.config.max_order, mc[0], mc[1], mc[2]
        );
        for (id, g, c) in self.iter() {
            let _ = writeln!(out, "{}\t{id}\t{c}", g.key());
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut config = VocabConfig::uniform(MAX_ORDER, 0);
        let mut entries = Vec::new();
        let mut saw_header = false;
        for (n, line) in text.lines().enumerate() {
            let loc = || format!("vocabulary line {}", n + 1);
            if let Some(comment) = line.strip_prefix('#') {
                for kv in comment.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("max_order", v)) => {
                            config.max_order = v.parse().map_err(|_| Error::parse(loc(), "max_order"))?
                        }
                        Some(("min_count", v)) => {
                            for (slot, x) in config.min_count.iter_mut().zip(v.split(',')) {
                                *slot = x.parse().map_err(|_| Error::parse(loc(), "min_count"))?;
                            }
                        }
                        _ => {}
                    }
                }
                continue;
            }
            if !saw_header {
                if line != "ngram\tngram_id\tcount" {
                    return Err(Error::parse(loc(), "expected vocabulary header"));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [key, id, count] = fields[..] else {
                return Err(Error::parse(loc(), "expected 3 fields"));
            };
            let id: usize = id.parse().map_err(|_| Error::parse(loc(), "bad ngram_id"))?;
            if id != entries.len() {
                return Err(Error::parse(loc(), "ngram ids must be dense and ascending"));
            }
            let count: u64 = count.parse().map_err(|_| Error::parse(loc(), "bad count"))?;
            entries.push((NGram::from_key(key)?, count));
        }
        Vocabulary::from_entries(entries, config)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&text)
    }
}

/// Draws negative n-gram ids with `P(id) ∝ count(id)^power`.
///
/// `power = 1` samples by frequency, `power = 0` uniformly; the default
/// `0.75` follows word2vec. Draws are O(1) through an alias table.
#[derive(Debug, Clone)]
pub struct NegativeSampler {
    probabilities: Vec<f64>,
    power: f64,
    seed: u64,
    table: WeightedAliasIndex<f64>,
}

pub const DEFAULT_SAMPLING_POWER: f64 = 0.75;

impl NegativeSampler {
    pub fn new(vocab: &Vocabulary, power: f64, seed: u64) -> Result<Self> {
        Self::from_counts(vocab.counts(), power, seed)
    }

    pub fn from_counts(counts: &[u64], power: f64, seed: u64) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument("vocabulary is empty".into()));
        }
        if !power.is_finite() || power < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "sampling power must be finite and >= 0, got {power}"
            )));
        }
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(power)).collect();
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidArgument("sampling weights do not normalize".into()));
        }
        let probabilities = weights.iter().map(|w| w / total).collect();
        let table = WeightedAliasIndex::new(weights)
            .map_err(|e| Error::InvalidArgument(format!("alias table: {e}")))?;
        Ok(NegativeSampler {
            probabilities,
            power,
            seed,
            table,
        })
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn probability(&self, id: u32) -> f64 {
        self.probabilities[id as usize]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.table.sample(rng) as u32
    }

    /// Independent stream keyed by this sampler's seed and `indices`.
    pub fn stream(&self, indices: &[u64]) -> crate::seed::Rng {
        crate::seed::rng(self.seed, "negatives", indices)
    }
}
