//! Naive-Bayes importance weights, NB-weighted bag-of-n-grams vectors, and
//! the NB sub-sampling probability used while training document vectors.
//!
//! For an n-gram `f` with class-conditional probabilities `p(f|y)` estimated
//! on labeled training documents, the signed log-ratio is
//! `r = log p(f|y=1) - log p(f|y=0)` and the importance is `h = |r|`. During
//! embedding training an occurrence of `f` is kept with probability
//! `min(exp(h / n_a) / n_b, 1)`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::corpus::{Document, DocumentSource, Label, NGram, Split};
use crate::vocab::Vocabulary;
use crate::{Error, Result};

pub const DEFAULT_SMOOTHING: f64 = 1.0;
pub const DEFAULT_N_A: f64 = 2.0;
pub const DEFAULT_N_B: f64 = 3.0;

/// How class-conditional n-gram probabilities are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventModel {
    /// Token-level counts.
    Multinomial,
    /// Document frequencies.
    Bernoulli,
}

impl FromStr for EventModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multinomial" => Ok(EventModel::Multinomial),
            "bernoulli" => Ok(EventModel::Bernoulli),
            other => Err(Error::UnknownTag {
                field: "nb_model",
                tag: other.into(),
            }),
        }
    }
}

impl std::fmt::Display for EventModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EventModel::Multinomial => "multinomial",
            EventModel::Bernoulli => "bernoulli",
        })
    }
}

/// What the weights were estimated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitSummary {
    /// Always [`Split::Train`].
    pub split: Split,
    pub positives: usize,
    pub negatives: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NBWeights {
    log_ratio: Vec<f64>,
    pub smoothing: f64,
    pub event_model: EventModel,
    pub fitted_on: FitSummary,
}

impl NBWeights {
    pub fn len(&self) -> usize {
        self.log_ratio.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_ratio.is_empty()
    }

    /// Importance `h = |r|`.
    pub fn h(&self, id: u32) -> f64 {
        self.log_ratio[id as usize].abs()
    }

    /// Signed log-ratio `r = log p(f|y=1) - log p(f|y=0)`.
    pub fn r(&self, id: u32) -> f64 {
        self.log_ratio[id as usize]
    }

    pub fn log_ratios(&self) -> &[f64] {
        &self.log_ratio
    }

    /// Weights file: a `#` comment with the fit settings, a header, then
    /// `ngram  h  r` rows in vocabulary id order.
    pub fn to_tsv(&self, vocab: &Vocabulary) -> String {
        let mut out = format!(
            "# smoothing={} nb_model={} fitted_on={} positives={} negatives={}\nngram\th\tr\n",
            self.smoothing,
            self.event_model,
            self.fitted_on.split,
            self.fitted_on.positives,
            self.fitted_on.negatives
        );
        for (id, &r) in self.log_ratio.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{r}", vocab.ngram(id as u32).key(), r.abs());
        }
        out
    }

    pub fn from_tsv(text: &str, vocab: &Vocabulary) -> Result<Self> {
        let mut smoothing = DEFAULT_SMOOTHING;
        let mut event_model = EventModel::Multinomial;
        let mut fitted_on = FitSummary {
            split: Split::Train,
            positives: 0,
            negatives: 0,
        };
        let mut log_ratio = vec![f64::NAN; vocab.len()];
        let mut header = false;
        for (n, line) in text.lines().enumerate() {
            let loc = || format!("weights line {}", n + 1);
            if let Some(c) = line.strip_prefix('#') {
                for kv in c.split_whitespace() {
                    let num = |v: &str| v.parse::<usize>().map_err(|_| Error::parse(loc(), kv));
                    match kv.split_once('=') {
                        Some(("smoothing", v)) => {
                            smoothing = v.parse().map_err(|_| Error::parse(loc(), kv))?
                        }
                        Some(("nb_model", v)) => event_model = v.parse()?,
                        Some(("fitted_on", v)) => fitted_on.split = v.parse()?,
                        Some(("positives", v)) => fitted_on.positives = num(v)?,
                        Some(("negatives", v)) => fitted_on.negatives = num(v)?,
                        _ => {}
                    }
                }
                continue;
            }
            if !header {
                if line != "ngram\th\tr" {
                    return Err(Error::parse(loc(), "expected weights header"));
                }
                header = true;
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [key, _h, r] = fields[..] else {
                return Err(Error::parse(loc(), "expected 3 fields"));
            };
            let id = vocab
                .id(&NGram::from_key(key)?)
                .ok_or_else(|| Error::MissingIds(format!("n-gram {key:?} not in vocabulary")))?;
            log_ratio[id as usize] = r.parse().map_err(|_| Error::parse(loc(), "bad r"))?;
        }
        if fitted_on.split != Split::Train {
            return Err(Error::InvalidArgument(
                "NB weights must be fitted on the training split".into(),
            ));
        }
        if let Some(i) = log_ratio.iter().position(|r| r.is_nan()) {
            return Err(Error::MissingIds(format!(
                "no weight for n-gram {}",
                vocab.ngram(i as u32).key()
            )));
        }
        Ok(NBWeights {
            log_ratio,
            smoothing,
            event_model,
            fitted_on,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>, vocab: &Vocabulary) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_tsv(vocab)).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>, vocab: &Vocabulary) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&text, vocab)
    }
}

/// Multinomial NB weights with pseudo-count `smoothing`.
pub fn fit_nb_weights<S: DocumentSource>(
    source: &S,
    vocab: &Vocabulary,
    smoothing: f64,
) -> Result<NBWeights> {
    fit_nb_weights_with(source, vocab, smoothing, EventModel::Multinomial)
}

/// Fit on labeled Train-split documents only; no other document's label or
/// text is read.
///
/// Multinomial: `p(f|y) = (count_y(f) + a) / (Σ_j count_y(f_j) + a·|V|)`.
/// Bernoulli: `p(f|y) = (df_y(f) + a) / (N_y + 2a)`.
pub fn fit_nb_weights_with<S: DocumentSource>(
    source: &S,
    vocab: &Vocabulary,
    smoothing: f64,
    event_model: EventModel,
) -> Result<NBWeights> {
    if !(smoothing > 0.0 && smoothing.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "smoothing must be > 0, got {smoothing}"
        )));
    }
    let v = vocab.len();
    let mut counts = [vec![0f64; v], vec![0f64; v]];
    let mut docs = [0usize; 2];
    let mut seen = vec![u32::MAX; v];
    for i in 0..source.num_documents() {
        if source.split_of(i) != Split::Train {
            continue;
        }
        let class = match source.label_of(i) {
            Label::Positive => 1,
            Label::Negative => 0,
            Label::Unlabeled => continue,
        };
        docs[class] += 1;
        for id in vocab.encode(source.tokens_of(i)) {
            match event_model {
                EventModel::Multinomial => counts[class][id as usize] += 1.0,
                EventModel::Bernoulli => {
                    if seen[id as usize] != i as u32 {
                        seen[id as usize] = i as u32;
                        counts[class][id as usize] += 1.0;
                    }
                }
            }
        }
    }
    if docs[0] == 0 || docs[1] == 0 {
        return Err(Error::SingleClass);
    }
    let log_p = |class: usize| -> Vec<f64> {
        let denom = match event_model {
            EventModel::Multinomial => counts[class].iter().sum::<f64>() + smoothing * v as f64,
            EventModel::Bernoulli => docs[class] as f64 + 2.0 * smoothing,
        };
        counts[class]
            .iter()
            .map(|&c| ((c + smoothing) / denom).ln())
            .collect()
    };
    let (lp1, lp0) = (log_p(1), log_p(0));
    Ok(NBWeights {
        log_ratio: lp1.iter().zip(&lp0).map(|(a, b)| a - b).collect(),
        smoothing,
        event_model,
        fitted_on: FitSummary {
            split: Split::Train,
            positives: docs[1],
            negatives: docs[0],
        },
    })
}

/// Sparse NB-weighted bag-of-n-grams vector, sorted by n-gram id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BonVector {
    pub entries: Vec<(u32, f64)>,
}

impl BonVector {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<f64> {
        self.entries
            .binary_search_by_key(&id, |e| e.0)
            .ok()
            .map(|k| self.entries[k].1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BonOptions {
    /// Use the signed log-ratio `r`; otherwise `h = |r|`.
    pub signed: bool,
    /// Presence indicator; otherwise the occurrence count multiplies the
    /// weight.
    pub binarized: bool,
}

impl Default for BonOptions {
    fn default() -> Self {
        BonOptions {
            signed: true,
            binarized: true,
        }
    }
}

pub fn bon_vector(
    doc: &Document,
    vocab: &Vocabulary,
    weights: &NBWeights,
    options: BonOptions,
) -> BonVector {
    bon_from_ids(&vocab.encode(&doc.tokens), weights, options)
}

/// BON vector from the encoded n-gram occurrences of one document.
pub fn bon_from_ids(ids: &[u32], weights: &NBWeights, options: BonOptions) -> BonVector {
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    let mut entries: Vec<(u32, f64)> = Vec::new();
    for id in sorted {
        match entries.last_mut() {
            Some((last, n)) if *last == id => *n += 1.0,
            _ => entries.push((id, 1.0)),
        }
    }
    for (id, n) in &mut entries {
        let w = if options.signed {
            weights.r(*id)
        } else {
            weights.h(*id)
        };
        *n = if options.binarized { w } else { *n * w };
    }
    BonVector { entries }
}

/// Sparse BON file: one line per document of space-separated `id:weight`.
pub fn format_bon(rows: &[BonVector]) -> String {
    let mut out = String::new();
    for row in rows {
        for (k, (id, w)) in row.entries.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{id}:{w}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_bon(text: &str) -> Result<Vec<BonVector>> {
    text.lines()
        .enumerate()
        .map(|(n, line)| {
            let mut entries = line
                .split_whitespace()
                .map(|pair| {
                    let bad = || Error::parse(format!("BON line {}", n + 1), format!("bad pair {pair:?}"));
                    let (id, w) = pair.split_once(':').ok_or_else(bad)?;
                    Ok((id.parse().map_err(|_| bad())?, w.parse().map_err(|_| bad())?))
                })
                .collect::<Result<Vec<(u32, f64)>>>()?;
            entries.sort_by_key(|e| e.0);
            Ok(BonVector { entries })
        })
        .collect()
}

/// `min(exp(h / n_a) / n_b, 1)`.
pub fn keep_probability(h: f64, n_a: f64, n_b: f64) -> Result<f64> {
    if !(n_a > 0.0 && n_b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "n_a and n_b must be > 0, got {n_a} and {n_b}"
        )));
    }
    Ok(keep_probability_unchecked(h, n_a, n_b))
}

#[inline]
fn keep_probability_unchecked(h: f64, n_a: f64, n_b: f64) -> f64 {
    let x = h / n_a;
    // Compare in the log domain so the clamp is exact at h = n_a·ln(n_b).
    if x >= n_b.ln() {
        1.0
    } else {
        (x.exp() / n_b).min(1.0)
    }
}

/// Per-occurrence filter for embedding training.
#[derive(Debug, Clone)]
pub struct SubSampler {
    keep: Vec<f64>,
    n_a: f64,
    n_b: f64,
    seed: u64,
}

impl SubSampler {
    pub fn new(weights: &NBWeights, n_a: f64, n_b: f64, seed: u64) -> Result<Self> {
        keep_probability(0.0, n_a, n_b)?;
        let keep = (0..weights.len() as u32)
            .map(|id| keep_probability_unchecked(weights.h(id), n_a, n_b))
            .collect();
        Ok(SubSampler {
            keep,
            n_a,
            n_b,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.keep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keep.is_empty()
    }

    pub fn n_a(&self) -> f64 {
        self.n_a
    }

    pub fn n_b(&self) -> f64 {
        self.n_b
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn keep_probability(&self, id: u32) -> f64 {
        self.keep[id as usize]
    }

    #[inline]
    pub fn keep<R: Rng + ?Sized>(&self, id: u32, rng: &mut R) -> bool {
        let p = self.keep[id as usize];
        p >= 1.0 || rng.random::<f64>() < p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AccessTracker, Corpus};
    use crate::vocab::build_vocab;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn corpus(rows: &[(&str, Label, Split)]) -> Corpus {
        let docs = rows
            .iter()
            .enumerate()
            .map(|(i, (t, l, s))| Document {
                doc_id: i,
                tokens: t.split_whitespace().map(str::to_owned).collect(),
                label: *l,
                split: *s,
            })
            .collect();
        Corpus::new(docs).unwrap()
    }

    use Label::{Negative as N, Positive as P, Unlabeled as U};
    use Split::{Extra, Test, Train, Validation};

    #[test]
    fn good_bad_example() {
        let c = corpus(&[("good", P, Train), ("bad", N, Train)]);
        let v = build_vocab(&c, 1, 1).unwrap();
        let w = fit_nb_weights(&c, &v, 1.0).unwrap();
        let good = v.id(&NGram::new(["good"]).unwrap()).unwrap();
        // p(good|1) = (1+1)/(1+2) = 2/3, p(good|0) = (0+1)/(1+2) = 1/3
        assert!((w.h(good) - 2f64.ln()).abs() < 1e-15);
        assert!((w.r(good) - ((2.0 / 3.0f64).ln() - (1.0 / 3.0f64).ln())).abs() < 1e-15);

        let doc = &c.documents()[0];
        let bon = bon_vector(doc, &v, &w, BonOptions::default());
        assert_eq!(bon.entries.len(), 1);
        assert!((bon.get(good).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn symmetric_counts_give_zero_importance() {
        let c = corpus(&[("the good", P, Train), ("the bad", N, Train)]);
        let v = build_vocab(&c, 1, 1).unwrap();
        let w = fit_nb_weights(&c, &v, 1.0).unwrap();
        assert_eq!(w.h(v.id(&NGram::new(["the"]).unwrap()).unwrap()), 0.0);
    }

    #[test]
    fn missing_class_is_an_error() {
        let c = corpus(&[("good", P, Train), ("bad", N, Test)]);
        let v = build_vocab(&c, 1, 1).unwrap();
        assert!(matches!(fit_nb_weights(&c, &v, 1.0), Err(Error::SingleClass)));
        assert!(fit_nb_weights(&corpus(&[("a", P, Train), ("b", N, Train)]), &v, 0.0).is_err());
    }

    #[test]
    fn fit_reads_only_training_documents() {
        let c = corpus(&[
            ("good fun", P, Train),
            ("bad dull", N, Train),
            ("good", P, Validation),
            ("bad", N, Test),
            ("fun dull", U, Extra),
            ("great", P, Train),
        ]);
        let v = build_vocab(&c, 2, 1).unwrap();
        let tracker = AccessTracker::new(&c);
        let w = fit_nb_weights(&tracker, &v, 1.0).unwrap();
        assert_eq!(tracker.touched(), vec![0, 1, 5]);
        assert_eq!(w.fitted_on.positives, 2);
        assert_eq!(w.fitted_on.negatives, 1);
        // Same result as fitting on the train documents alone.
        let train_only = corpus(&[
            ("good fun", P, Train),
            ("bad dull", N, Train),
            ("great", P, Train),
        ]);
        let w2 = fit_nb_weights(&train_only, &v, 1.0).unwrap();
        assert_eq!(w.log_ratios(), w2.log_ratios());
    }

    #[test]
    fn bon_edge_cases() {
        let c = corpus(&[("good good movie", P, Train), ("bad movie", N, Train)]);
        let v = build_vocab(&c, 1, 1).unwrap();
        let w = fit_nb_weights(&c, &v, 1.0).unwrap();
        let unseen = Document {
            doc_id: 0,
            tokens: vec!["zzz".into()],
            label: P,
            split: Test,
        };
        assert!(bon_vector(&unseen, &v, &w, BonOptions::default()).is_empty());

        let twice = &c.documents()[0];
        let once = Document {
            tokens: vec!["good".into(), "movie".into()],
            ..twice.clone()
        };
        let opts = BonOptions::default();
        assert_eq!(bon_vector(twice, &v, &w, opts), bon_vector(&once, &v, &w, opts));

        let counts = BonOptions {
            signed: false,
            binarized: false,
        };
        let good = v.id(&NGram::new(["good"]).unwrap()).unwrap();
        let b = bon_vector(twice, &v, &w, counts);
        assert!((b.get(good).unwrap() - 2.0 * w.h(good)).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_uses_document_frequency() {
        let c = corpus(&[("good good good", P, Train), ("bad", N, Train)]);
        let v = build_vocab(&c, 1, 1).unwrap();
        let w = fit_nb_weights_with(&c, &v, 1.0, EventModel::Bernoulli).unwrap();
        let good = v.id(&NGram::new(["good"]).unwrap()).unwrap();
        // (1+1)/(1+2) vs (0+1)/(1+2)
        assert!((w.r(good) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn weights_file_round_trip() {
        let c = corpus(&[("a b c", P, Train), ("b c d", N, Train)]);
        let v = build_vocab(&c, 2, 1).unwrap();
        let w = fit_nb_weights(&c, &v, 0.5).unwrap();
        let back = NBWeights::from_tsv(&w.to_tsv(&v), &v).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn bon_file_round_trip() {
        let rows = vec![
            BonVector {
                entries: vec![(0, 0.5), (7, -1.25)],
            },
            BonVector::default(),
        ];
        let text = format_bon(&rows);
        assert_eq!(text, "0:0.5 7:-1.25\n\n");
        assert_eq!(parse_bon(&text).unwrap(), rows);
        assert!(parse_bon("3-1.0\n").is_err());
    }

    #[test]
    fn keep_probability_points() {
        assert_eq!(keep_probability(0.0, 2.0, 3.0).unwrap(), 1.0 / 3.0);
        assert_eq!(keep_probability(2.0 * 3f64.ln(), 2.0, 3.0).unwrap(), 1.0);
        assert_eq!(keep_probability(100.0, 2.0, 3.0).unwrap(), 1.0);
        assert!(keep_probability(1.0, 0.0, 3.0).is_err());
        assert!(keep_probability(1.0, 2.0, -1.0).is_err());
    }

    #[test]
    fn empirical_keep_rate() {
        let c = corpus(&[("a b", P, Train), ("b c", N, Train)]);
        let v = build_vocab(&c, 1, 1).unwrap();
        let w = fit_nb_weights(&c, &v, 1.0).unwrap();
        let s = SubSampler::new(&w, 2.0, 3.0, 9).unwrap();
        let mut rng = crate::seed::rng(9, "test", &[]);
        for id in 0..v.len() as u32 {
            let kept = (0..100_000).filter(|_| s.keep(id, &mut rng)).count();
            let rate = kept as f64 / 100_000.0;
            assert!((rate - s.keep_probability(id)).abs() < 0.01);
        }
    }

    /// Dictionary-based reference for the multinomial weights.
    fn brute_force(c: &Corpus, v: &Vocabulary, a: f64) -> Vec<f64> {
        let mut counts: [HashMap<String, f64>; 2] = Default::default();
        for d in c.documents() {
            if d.split != Train {
                continue;
            }
            let y = usize::from(d.label == P);
            for g in crate::corpus::extract_ngrams(d, v.max_order()) {
                if v.id(&g).is_some() {
                    *counts[y].entry(g.key()).or_default() += 1.0;
                }
            }
        }
        let tot: Vec<f64> = counts.iter().map(|m| m.values().sum()).collect();
        v.iter()
            .map(|(_, g, _)| {
                let p = |y: usize| {
                    (counts[y].get(&g.key()).copied().unwrap_or(0.0) + a)
                        / (tot[y] + a * v.len() as f64)
                };
                p(1).ln() - p(0).ln()
            })
            .collect()
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            docs in prop::collection::vec((prop::collection::vec(0u8..8, 1..15), any::<bool>()), 20),
        ) {
            let rows: Vec<(String, Label, Split)> = docs
                .iter()
                .enumerate()
                .map(|(i, (t, pos))| {
                    let text = t.iter().map(|x| format!("w{x}")).collect::<Vec<_>>().join(" ");
                    let label = if i < 2 { if i == 0 { P } else { N } } else if *pos { P } else { N };
                    (text, label, if i % 5 == 4 { Test } else { Train })
                })
                .collect();
            let refs: Vec<(&str, Label, Split)> =
                rows.iter().map(|(t, l, s)| (t.as_str(), *l, *s)).collect();
            let c = corpus(&refs);
            let v = build_vocab(&c, 2, 1).unwrap();
            let w = fit_nb_weights(&c, &v, 1.0).unwrap();
            for (a, b) in w.log_ratios().iter().zip(brute_force(&c, &v, 1.0)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn label_swap_negates_r(
            docs in prop::collection::vec(prop::collection::vec(0u8..6, 1..10), 4..12),
        ) {
            let make = |flip: bool| {
                let rows: Vec<(String, Label, Split)> = docs
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let pos = (i % 2 == 0) != flip;
                        let text = t.iter().map(|x| format!("w{x}")).collect::<Vec<_>>().join(" ");
                        (text, if pos { P } else { N }, Train)
                    })
                    .collect();
                let refs: Vec<(&str, Label, Split)> =
                    rows.iter().map(|(t, l, s)| (t.as_str(), *l, *s)).collect();
                corpus(&refs)
            };
            let (c, f) = (make(false), make(true));
            let v = build_vocab(&c, 1, 1).unwrap();
            let (w, wf) = (fit_nb_weights(&c, &v, 1.0).unwrap(), fit_nb_weights(&f, &v, 1.0).unwrap());
            for id in 0..v.len() as u32 {
                prop_assert!((w.r(id) + wf.r(id)).abs() < 1e-12);
                prop_assert!((w.h(id) - wf.h(id)).abs() < 1e-12);
            }
        }

        #[test]
        fn keep_probability_is_monotone(h1 in 0.0f64..20.0, dh in 0.0f64..5.0, n_a in 0.1f64..5.0, n_b in 0.1f64..10.0) {
            let p1 = keep_probability(h1, n_a, n_b).unwrap();
            let p2 = keep_probability(h1 + dh, n_a, n_b).unwrap();
            prop_assert!(p1 > 0.0 && p1 <= 1.0);
            prop_assert!(p2 >= p1);
            prop_assert_eq!(keep_probability(n_a * n_b.ln().max(0.0) + dh + 1e-9, n_a, n_b).unwrap(), 1.0);
        }
    }
}
