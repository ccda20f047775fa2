//! Classifier accuracy on document vectors as training progresses, with and
//! without NB sub-sampling.

use std::fmt::Write as _;
use std::sync::mpsc;

use crate::corpus::{AlignmentMap, Corpus, CorpusMeta, Split};
use crate::dv_model::{self, Checkpoint, CheckpointCadence, EmbeddingMatrix, Monitor, TrainConfig};
use crate::ensemble::{fit_view, EnsembleConfig, EnsembleInputs, View};
use crate::guard::LabelGuard;
use crate::nb_features::{NBWeights, SubSampler};
use crate::vocab::Vocabulary;
use crate::{seed, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Vanilla,
    NbSubsampled,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Vanilla => "vanilla",
            Variant::NbSubsampled => "nb_subsampled",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vanilla" => Ok(Variant::Vanilla),
            "nb_subsampled" => Ok(Variant::NbSubsampled),
            other => Err(Error::UnknownTag {
                field: "variant",
                tag: other.into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgressRecord {
    pub variant: Variant,
    pub run_id: usize,
    /// Documents processed since the start of training.
    pub step: u64,
    pub epoch: usize,
    pub valid_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgressSpec {
    pub variants: Vec<Variant>,
    pub runs_per_variant: usize,
    pub cadence: CheckpointCadence,
    pub train: TrainConfig,
    pub n_a: f64,
    pub n_b: f64,
    pub seed: u64,
}

impl Default for ProgressSpec {
    fn default() -> Self {
        ProgressSpec {
            variants: vec![Variant::Vanilla, Variant::NbSubsampled],
            runs_per_variant: 3,
            cadence: CheckpointCadence::default(),
            train: TrainConfig::default(),
            n_a: crate::nb_features::DEFAULT_N_A,
            n_b: crate::nb_features::DEFAULT_N_B,
            seed: 1,
        }
    }
}

/// Sends each checkpoint's document vectors to the evaluator thread so that
/// training continues while the classifier is fitted.
struct ChannelMonitor {
    cadence: CheckpointCadence,
    tx: mpsc::Sender<(u64, usize, EmbeddingMatrix)>,
}

impl Monitor for ChannelMonitor {
    fn cadence(&self) -> CheckpointCadence {
        self.cadence
    }

    fn on_checkpoint(&mut self, cp: &Checkpoint<'_>) -> Result<()> {
        // A closed channel means the evaluator failed; its error is reported
        // after training.
        let _ = self.tx.send((cp.step, cp.epoch, cp.doc_vectors()));
        Ok(())
    }
}

/// Accuracy of a classifier fitted on Train document vectors, tuned on
/// Validation (or cross-validated), on Validation and Test.
pub fn evaluate_doc_vectors(
    vectors: &EmbeddingMatrix,
    meta: &CorpusMeta,
    config: &EnsembleConfig,
    guard: &LabelGuard,
    cv_seed: u64,
) -> Result<(f64, f64)> {
    let inputs = EnsembleInputs {
        dense: vectors,
        sparse: &[],
        sparse_dim: 0,
        meta,
    };
    let train = meta.indices_in(Split::Train);
    let identity = AlignmentMap::identity(meta.len());
    let fitted = fit_view(&inputs, View::Dense, identity, &train, config, guard, cv_seed)?;
    let test_idx = meta.indices_in(Split::Test);
    let test = fitted.features(&inputs, &test_idx)?;
    let test_acc = guard.score_test(&test_idx, &fitted.model.predict(&test)?)?;
    Ok((fitted.tuning_accuracy.unwrap_or(f64::NAN), test_acc))
}

/// Seed of the embedding run `(variant, run_id)`.
pub fn run_seed(base: u64, variant: Variant, run_id: usize) -> u64 {
    seed::derive(base, "progress-study", &[variant as u64, run_id as u64])
}

/// Train every `(variant, run)` and evaluate each checkpoint. `sink`
/// receives the records of a run as soon as it finishes.
pub fn progress_study(
    corpus: &Corpus,
    vocab: &Vocabulary,
    weights: &NBWeights,
    spec: &ProgressSpec,
    config: &EnsembleConfig,
    guard: &LabelGuard,
    mut sink: impl FnMut(&[ProgressRecord]),
) -> Result<Vec<ProgressRecord>> {
    if weights.fitted_on.split != Split::Train {
        return Err(Error::InvalidArgument(
            "NB weights must be fitted on the labeled training split".into(),
        ));
    }
    let encoded = vocab.encode_all(corpus);
    let mut all = Vec::new();
    for &variant in &spec.variants {
        for run_id in 0..spec.runs_per_variant {
            let seed = run_seed(spec.seed, variant, run_id);
            let train_cfg = TrainConfig {
                seed,
                ..spec.train.clone()
            };
            let subsampler = match variant {
                Variant::Vanilla => None,
                Variant::NbSubsampled => Some(SubSampler::new(weights, spec.n_a, spec.n_b, seed)?),
            };
            let (tx, rx) = mpsc::channel();
            let mut monitor = ChannelMonitor {
                cadence: spec.cadence,
                tx,
            };
            let records = std::thread::scope(|s| -> Result<Vec<ProgressRecord>> {
                let evaluator = s.spawn(move || -> Result<Vec<ProgressRecord>> {
                    let mut out = Vec::new();
                    for (step, epoch, vectors) in rx {
                        let cv_seed = seed::derive(seed, "progress-cv", &[step]);
                        let (valid, test) =
                            evaluate_doc_vectors(&vectors, corpus.meta(), config, guard, cv_seed)?;
                        out.push(ProgressRecord {
                            variant,
                            run_id,
                            step,
                            epoch,
                            valid_accuracy: valid,
                            test_accuracy: test,
                        });
                    }
                    Ok(out)
                });
                let trained = dv_model::train_encoded(
                    &encoded,
                    vocab,
                    &train_cfg,
                    subsampler.as_ref(),
                    Some(&mut monitor),
                );
                drop(monitor);
                let evaluated = evaluator.join().expect("evaluator thread panicked");
                trained?;
                evaluated
            })?;
            sink(&records);
            all.extend(records);
        }
    }
    Ok(all)
}

pub const PROGRESS_HEADER: &str = "variant,run_id,step,epoch,valid_accuracy,test_accuracy";

pub fn progress_csv(records: &[ProgressRecord]) -> String {
    let mut out = format!("{PROGRESS_HEADER}\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.variant.name(),
            r.run_id,
            r.step,
            r.epoch,
            r.valid_accuracy,
            r.test_accuracy
        );
    }
    out
}

pub fn parse_progress_csv(text: &str) -> Result<Vec<ProgressRecord>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next() != Some(PROGRESS_HEADER) {
        return Err(Error::parse("progress csv", "unexpected header"));
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let bad = || Error::parse(format!("progress csv row {}", n + 2), line.to_string());
            let f: Vec<&str> = line.split(',').collect();
            let [v, run, step, epoch, valid, test] = f[..] else {
                return Err(bad());
            };
            Ok(ProgressRecord {
                variant: v.parse()?,
                run_id: run.parse().map_err(|_| bad())?,
                step: step.parse().map_err(|_| bad())?,
                epoch: epoch.parse().map_err(|_| bad())?,
                valid_accuracy: valid.parse().map_err(|_| bad())?,
                test_accuracy: test.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

/// Per `(variant, run)`: mean test accuracy over the last quarter of
/// checkpoints and over the second half (the plateau).
pub fn plateau_summary(records: &[ProgressRecord]) -> Vec<(Variant, usize, f64, f64)> {
    let mut keys: Vec<(Variant, usize)> = records.iter().map(|r| (r.variant, r.run_id)).collect();
    keys.dedup();
    keys.into_iter()
        .map(|(v, run)| {
            let acc: Vec<f64> = records
                .iter()
                .filter(|r| r.variant == v && r.run_id == run)
                .map(|r| r.test_accuracy)
                .collect();
            let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len().max(1) as f64;
            let n = acc.len();
            let last_quarter = &acc[n - n.div_ceil(4)..];
            let plateau = &acc[n / 2..];
            (v, run, mean(last_quarter), mean(plateau))
        })
        .collect()
}
