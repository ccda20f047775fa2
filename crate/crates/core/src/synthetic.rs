//! Synthetic data with known structure: a two-view leakage benchmark, a
//! two-topic corpus, and a small sentiment corpus with raw text.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal, Zipf};
use statrs::distribution::ContinuousCDF;

use crate::corpus::{Corpus, CorpusMeta, Document, Label, Split};
use crate::dv_model::EmbeddingMatrix;
use crate::nb_features::BonVector;
use crate::{seed, Error, Result};

/// Two-view leakage benchmark.
///
/// Every document has a shared latent `t ~ N(0,1)` and two view logits
/// `l_k = y (mu_k + t + sigma e_k) / sqrt(1 + sigma²)`, so each view alone
/// errs with the requested rate and the two views are positively correlated
/// within a class only when paired with their own document.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageParams {
    /// Documents per (class, split) block; four blocks in total.
    pub block_len: usize,
    pub dense_error: f64,
    pub sparse_error: f64,
    /// Per-view noise on top of the shared latent.
    pub view_noise: f64,
    /// Dense view width; coordinate 0 carries the signal.
    pub dense_dim: usize,
    /// Sparse view: feature 0 carries the signal, the rest is noise.
    pub sparse_dim: usize,
    pub noise_features: usize,
}

impl Default for LeakageParams {
    fn default() -> Self {
        LeakageParams {
            block_len: 5000,
            dense_error: 0.07,
            sparse_error: 0.09,
            view_noise: 0.5,
            dense_dim: 8,
            sparse_dim: 200,
            noise_features: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LeakageData {
    pub meta: CorpusMeta,
    pub dense: EmbeddingMatrix,
    pub sparse: Vec<BonVector>,
    pub sparse_dim: usize,
    /// The generating view logits, `(dense, sparse)` per document.
    pub view_logits: Vec<(f64, f64)>,
}

fn normal_quantile(p: f64) -> f64 {
    statrs::distribution::Normal::standard().inverse_cdf(p)
}

pub fn leakage_dataset(params: &LeakageParams, seed: u64) -> Result<LeakageData> {
    let p = params;
    let ok_rate = |e: f64| e > 0.0 && e < 0.5;
    if p.block_len == 0 || !ok_rate(p.dense_error) || !ok_rate(p.sparse_error) {
        return Err(Error::InvalidArgument(
            "need block_len > 0 and error rates in (0, 0.5)".into(),
        ));
    }
    if p.dense_dim == 0 || p.sparse_dim <= p.noise_features || p.view_noise < 0.0 {
        return Err(Error::InvalidArgument("invalid view dimensions".into()));
    }
    let norm = (1.0 + p.view_noise * p.view_noise).sqrt();
    let mu_dense = normal_quantile(1.0 - p.dense_error) * norm;
    let mu_sparse = normal_quantile(1.0 - p.sparse_error) * norm;

    let mut tags = Vec::with_capacity(4 * p.block_len);
    for split in [Split::Train, Split::Test] {
        for label in [Label::Positive, Label::Negative] {
            tags.extend(std::iter::repeat_n((label, split), p.block_len));
        }
    }
    let n = tags.len();
    let mut rng = seed::rng(seed, "synthetic-leakage", &[]);
    let mut dense = Vec::with_capacity(n * p.dense_dim);
    let mut sparse = Vec::with_capacity(n);
    let mut view_logits = Vec::with_capacity(n);
    let noise_ids: Vec<u32> = (1..p.sparse_dim as u32).collect();
    for &(label, _) in &tags {
        let y = if label == Label::Positive { 1.0 } else { -1.0 };
        let t: f64 = StandardNormal.sample(&mut rng);
        let e1: f64 = StandardNormal.sample(&mut rng);
        let e2: f64 = StandardNormal.sample(&mut rng);
        let l1 = y * (mu_dense + t + p.view_noise * e1) / norm;
        let l2 = y * (mu_sparse + t + p.view_noise * e2) / norm;
        view_logits.push((l1, l2));
        dense.push(l1 as f32);
        for _ in 1..p.dense_dim {
            dense.push(StandardNormal.sample(&mut rng));
        }
        let mut entries = vec![(0u32, l2)];
        for &id in noise_ids.choose_multiple(&mut rng, p.noise_features) {
            entries.push((id, StandardNormal.sample(&mut rng)));
        }
        entries.sort_by_key(|e| e.0);
        sparse.push(BonVector { entries });
    }
    Ok(LeakageData {
        meta: CorpusMeta::from_tags(tags)?,
        dense: EmbeddingMatrix::from_vec(dense, p.dense_dim)?,
        sparse,
        sparse_dim: p.sparse_dim,
        view_logits,
    })
}

/// Documents drawn from two disjoint topic vocabularies plus shared filler.
/// Returns the corpus (topic 0 labeled positive, all in Train) and the topic
/// of every document.
pub fn two_topic_corpus(
    n_docs: usize,
    doc_len: usize,
    seed: u64,
) -> Result<(Corpus, Vec<usize>)> {
    if n_docs < 2 || doc_len == 0 {
        return Err(Error::InvalidArgument("need >= 2 documents of length >= 1".into()));
    }
    let topic_words: [Vec<String>; 2] = [
        (0..40).map(|i| format!("alpha{i}")).collect(),
        (0..40).map(|i| format!("beta{i}")).collect(),
    ];
    let shared: Vec<String> = (0..20).map(|i| format!("common{i}")).collect();
    let mut rng = seed::rng(seed, "synthetic-topics", &[]);
    let mut docs = Vec::with_capacity(n_docs);
    let mut topics = Vec::with_capacity(n_docs);
    for doc_id in 0..n_docs {
        let topic = doc_id % 2;
        let tokens = (0..doc_len)
            .map(|_| {
                let pool = if rng.random_bool(0.8) {
                    &topic_words[topic]
                } else {
                    &shared
                };
                pool.choose(&mut rng).expect("non-empty").clone()
            })
            .collect();
        docs.push(Document {
            doc_id,
            tokens,
            label: Label::from_bool(topic == 0),
            split: Split::Train,
        });
        topics.push(topic);
    }
    Ok((Corpus::new(docs)?, topics))
}

/// Split sizes of [`sentiment_corpus`]; labeled splits are half positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentimentSizes {
    pub train: usize,
    pub valid: usize,
    pub test: usize,
    pub extra: usize,
}

impl Default for SentimentSizes {
    fn default() -> Self {
        SentimentSizes {
            train: 400,
            valid: 100,
            test: 400,
            extra: 200,
        }
    }
}

const POSITIVE: &[&str] = &[
    "great", "excellent", "wonderful", "superb", "moving", "brilliant", "delightful", "fun",
];
const NEGATIVE: &[&str] = &[
    "awful", "boring", "terrible", "dull", "waste", "bland", "tedious", "mess",
];
const FILLER_WORDS: usize = 400;

const NEUTRAL: &[&str] = &[
    "the", "movie", "film", "plot", "actor", "scene", "story", "was", "and", "a", "it", "this",
    "director", "ending", "music", "characters", "with", "of", "in", "script",
];

/// Review-like raw text lines and the matching metadata file, ordered in
/// (split, class) blocks: train pos, train neg, valid pos, valid neg, test
/// pos, test neg, then unlabeled extra. Each review mixes neutral filler with
/// sentiment words of its class, a few words of the other class, and negated
/// phrases (`not <word>`) whose polarity flips.
pub fn sentiment_corpus(sizes: SentimentSizes, seed: u64) -> (String, String) {
    let mut rng = seed::rng(seed, "synthetic-sentiment", &[]);
    let len_dist = Normal::new(60.0, 15.0).expect("valid normal");
    // A long Zipfian tail of filler tokens keeps negative sampling informative.
    let filler: Vec<String> = (0..FILLER_WORDS).map(|k| format!("w{k}")).collect();
    let zipf = Zipf::new(FILLER_WORDS as f64, 1.0).expect("valid zipf");
    let mut text = String::new();
    let mut meta = String::from("doc_id\tlabel\tsplit\n");
    let mut blocks = Vec::new();
    for (split, n) in [
        (Split::Train, sizes.train),
        (Split::Validation, sizes.valid),
        (Split::Test, sizes.test),
    ] {
        blocks.push((Label::Positive, split, n / 2));
        blocks.push((Label::Negative, split, n - n / 2));
    }
    blocks.push((Label::Unlabeled, Split::Extra, sizes.extra));
    let mut doc_id = 0;
    for (label, split, n) in blocks {
        for _ in 0..n {
            let polarity = match label {
                Label::Positive => Some(true),
                Label::Negative => Some(false),
                Label::Unlabeled => Some(rng.random_bool(0.5)),
            };
            let len = (len_dist.sample(&mut rng) as f64).clamp(10.0, 150.0) as usize;
            // Per-document strength makes some reviews much harder than others.
            let strength: f64 = rng.random_range(0.02..0.2);
            let mut words: Vec<&str> = Vec::with_capacity(len + 4);
            for _ in 0..len {
                let u: f64 = rng.random();
                let own = polarity.unwrap_or(true);
                if u < strength {
                    let (pool, negate) = if rng.random_bool(0.15) {
                        (if own { NEGATIVE } else { POSITIVE }, true)
                    } else if rng.random_bool(0.3) {
                        (if own { NEGATIVE } else { POSITIVE }, false)
                    } else {
                        (if own { POSITIVE } else { NEGATIVE }, false)
                    };
                    if negate {
                        words.push("not");
                    }
                    words.push(pool.choose(&mut rng).expect("non-empty"));
                } else {
                    words.push(if rng.random_bool(0.5) {
                        NEUTRAL.choose(&mut rng).expect("non-empty")
                    } else {
                        &filler[zipf.sample(&mut rng) as usize - 1]
                    });
                }
            }
            text.push_str(&words.join(" "));
            text.push_str(" .\n");
            meta.push_str(&format!("{doc_id}\t{label}\t{split}\n"));
            doc_id += 1;
        }
    }
    (text, meta)
}
