//! Subcommand bodies. Each reads its inputs from the artifact store, writes
//! its outputs next to them and prints `key=value` result lines.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::artifacts::{Artifact, Store};
use super::config::{RunConfig, Stage};
use crate::classifier::FitOptions;
use crate::corpus::{self, build_alignment, read_order_file, AlignmentClass, AlignmentMap, Corpus, Split};
use crate::dv_model::{self, EmbeddingMatrix, TrainConfig, VectorKind};
use crate::ensemble::{
    self, apply_scheme, evaluate_seeds, fit_ensemble, fit_view, merge_by_split, replication_seeds,
    EnsembleConfig, EnsembleInputs, EnsembleReport, Protocol, SchemeKind, ShuffleScheme, View,
};
use crate::experiments::{self, plot, CurveReport, CurveSpec, ProgressSpec};
use crate::guard::LabelGuard;
use crate::nb_features::{self, BonOptions, BonVector, EventModel, NBWeights, SubSampler};
use crate::synthetic::{sentiment_corpus, SentimentSizes};
use crate::corpus::MAX_ORDER;
use crate::vocab::{build_vocab_with, VocabConfig, Vocabulary};
use crate::{seed, Error, Result};

const ALL_STAGES: &[Stage] = &[
    Stage::Ingest,
    Stage::Vocab,
    Stage::Nb,
    Stage::Bon,
    Stage::Dv,
    Stage::Clf,
    Stage::Ensemble,
    Stage::Experiment,
];

pub fn dispatch(name: &str, cfg: &RunConfig) -> Result<()> {
    let store = Store::new(cfg);
    std::fs::create_dir_all(&store.dir).map_err(|e| Error::io(&store.dir, e))?;
    let snapshot = store.dir.join(format!("resolved_config.{name}.txt"));
    std::fs::write(&snapshot, cfg.snapshot()).map_err(|e| Error::io(&snapshot, e))?;
    match name {
        "ingest" => ingest(&store),
        "vocab" => vocab(&store),
        "nb-weights" => nb_weights(&store),
        "bon" => bon(&store),
        "train-dv" => train_dv(&store),
        "train-clf" => train_clf(&store),
        "ensemble-eval" => ensemble_eval(&store),
        "learning-curve" => learning_curve(&store),
        "progress-study" => progress_study(&store),
        "logit-analysis" => logit_analysis(&store),
        "plot" => plot_cmd(&store),
        "align" => align(&store),
        "synth" => synth(&store),
        other => Err(Error::Config(format!("unknown subcommand {other}"))),
    }
}

fn required_path(cfg: &RunConfig, key: &str) -> Result<PathBuf> {
    cfg.path(key)
        .ok_or_else(|| Error::Config(format!("{key} is not set")))
}

fn input_path(cfg: &RunConfig, key: &str) -> Result<PathBuf> {
    let p = required_path(cfg, key)?;
    if !p.exists() {
        return Err(Error::MissingDependency(format!("{key} {} does not exist", p.display())));
    }
    Ok(p)
}

fn write_plain(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn load_corpus(store: &Store<'_>) -> Result<Corpus> {
    let text = store.require(Artifact::Corpus)?;
    let meta = store.require(Artifact::Metadata)?;
    corpus::ingest_files(text, meta, false)
}

fn load_vocab(store: &Store<'_>) -> Result<Vocabulary> {
    Vocabulary::read(store.require(Artifact::Vocab)?)
}

fn load_weights(store: &Store<'_>, vocab: &Vocabulary) -> Result<NBWeights> {
    NBWeights::read(store.require(Artifact::NbWeights)?, vocab)
}

fn load_bon(store: &Store<'_>, vocab_len: usize, n_docs: usize) -> Result<Vec<BonVector>> {
    let rows = nb_features::parse_bon(&read_text(&store.require(Artifact::Bon)?)?)?;
    if rows.len() != n_docs {
        return Err(Error::IdSetMismatch(format!(
            "bon.txt has {} rows, corpus has {n_docs} documents",
            rows.len()
        )));
    }
    if let Some(id) = rows.iter().flat_map(|r| r.entries.iter().map(|e| e.0)).find(|&id| id as usize >= vocab_len) {
        return Err(Error::IdSetMismatch(format!("bon.txt references n-gram id {id} outside the vocabulary")));
    }
    Ok(rows)
}

/// Document vectors in doc-id order: `dense_vectors` (resolved through
/// `id_map` when set) or the `train-dv` artifact.
fn load_dense(store: &Store<'_>, n_docs: usize) -> Result<EmbeddingMatrix> {
    let cfg = store.config;
    let Some(path) = cfg.path("dense_vectors") else {
        return dv_model::read_doc_vectors(store.require(Artifact::DocVectors)?, n_docs);
    };
    if !path.exists() {
        return Err(Error::MissingDependency(format!("dense_vectors {} does not exist", path.display())));
    }
    let Some(map_path) = cfg.path("id_map") else {
        return dv_model::read_doc_vectors(path, n_docs);
    };
    let file = dv_model::read_embeddings(&path)?;
    let mut id_map = HashMap::new();
    for (n, line) in read_text(&map_path)?.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || (n == 0 && line.ends_with("doc_id")) {
            continue;
        }
        let (key, id) = line.split_once('\t').ok_or_else(|| {
            Error::parse(format!("{}:{}", map_path.display(), n + 1), "expected key<TAB>doc_id")
        })?;
        let id: usize = id.trim().parse().map_err(|_| {
            Error::parse(format!("{}:{}", map_path.display(), n + 1), format!("bad doc_id {id:?}"))
        })?;
        id_map.insert(key.to_string(), id);
    }
    ensemble::import_external_dense(&file, &id_map, n_docs)
}

fn vocab_config(cfg: &RunConfig) -> Result<VocabConfig> {
    let max_order = cfg.usize("max_order")?;
    let counts: Vec<u64> = cfg.list("min_count")?;
    let mut min_count = [0u64; MAX_ORDER];
    match counts.len() {
        1 => min_count = [counts[0]; MAX_ORDER],
        n if n == MAX_ORDER => min_count.copy_from_slice(&counts),
        n if n == max_order => {
            min_count[..n].copy_from_slice(&counts);
            min_count[n..].fill(counts[n - 1]);
        }
        _ => {
            return Err(Error::Config(format!(
                "min_count needs 1, max_order or {MAX_ORDER} values"
            )))
        }
    }
    Ok(VocabConfig {
        max_order,
        min_count,
    })
}

fn train_config(cfg: &RunConfig) -> Result<TrainConfig> {
    Ok(TrainConfig {
        dim: cfg.usize("dim")?,
        alpha: cfg.f64("alpha")?,
        negatives: cfg.usize("negatives")?,
        epochs: cfg.usize("epochs")?,
        lr_start: cfg.f64("lr")?,
        lr_end: cfg.f64("lr_end")?,
        objective: cfg.str("objective").parse()?,
        sampling_power: cfg.f64("power")?,
        seed: cfg.u64("seed")?,
        workers: cfg.usize("workers")?,
    })
}

fn ensemble_config(cfg: &RunConfig) -> Result<EnsembleConfig> {
    let protocol = match cfg.str("protocol") {
        "auto" => Protocol::Auto,
        "validation" => Protocol::Validation,
        "cv" => Protocol::CrossValidation,
        other => {
            return Err(Error::UnknownTag {
                field: "protocol",
                tag: other.into(),
            })
        }
    };
    let fixed_c = match cfg.str("fixed_c") {
        "none" | "" => None,
        _ => Some(cfg.f64("fixed_c")?),
    };
    let config = EnsembleConfig {
        scale: cfg.f64("scale")?,
        c_grid: cfg.grid("c_grid")?,
        scale_grid: cfg.grid("scale_grid")?,
        protocol,
        cv_folds: cfg.usize("cv_folds")?,
        fixed_c,
        fit: FitOptions {
            tol: cfg.f64("tol")?,
            max_iter: cfg.usize("max_iter")?,
        },
    };
    config.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(config)
}

fn ingest(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let text = input_path(cfg, "corpus_text")?;
    let meta = input_path(cfg, "corpus_meta")?;
    let corpus = corpus::ingest_files(text, meta, cfg.bool("normalize")?)?;
    let mut lines = String::new();
    let mut tags = String::from("doc_id\tlabel\tsplit\n");
    for d in corpus.documents() {
        lines.push_str(&d.tokens.join(" "));
        lines.push('\n');
        let _ = writeln!(tags, "{}\t{}\t{}", d.doc_id, d.label.as_tag(), d.split.as_tag());
    }
    store.write(Artifact::Corpus, &lines)?;
    store.write(Artifact::Metadata, &tags)?;
    let layout = corpus.layout();
    println!("documents={}", corpus.len());
    println!("blocks={}", layout.blocks().len());
    println!("canonical_layout={}", layout.is_imdb_canonical());
    Ok(())
}

fn vocab(store: &Store<'_>) -> Result<()> {
    let corpus = load_corpus(store)?;
    let vocab = build_vocab_with(&corpus, vocab_config(store.config)?)?;
    store.write(Artifact::Vocab, &vocab.to_tsv())?;
    println!("ngrams={}", vocab.len());
    Ok(())
}

fn nb_weights(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let corpus = load_corpus(store)?;
    let vocab = load_vocab(store)?;
    let model: EventModel = cfg.str("nb_model").parse()?;
    let weights = nb_features::fit_nb_weights_with(&corpus, &vocab, cfg.f64("smoothing")?, model)?;
    store.write(Artifact::NbWeights, &weights.to_tsv(&vocab))?;
    println!("ngrams={}", weights.len());
    println!("positives={}", weights.fitted_on.positives);
    println!("negatives={}", weights.fitted_on.negatives);
    Ok(())
}

fn bon(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let corpus = load_corpus(store)?;
    let vocab = load_vocab(store)?;
    let weights = load_weights(store, &vocab)?;
    let opts = BonOptions {
        signed: cfg.bool("bon_signed")?,
        binarized: cfg.bool("bon_binarized")?,
    };
    let rows: Vec<BonVector> = corpus
        .documents()
        .iter()
        .map(|d| nb_features::bon_vector(d, &vocab, &weights, opts))
        .collect();
    store.write(Artifact::Bon, &nb_features::format_bon(&rows))?;
    let nnz: usize = rows.iter().map(|r| r.entries.len()).sum();
    println!("documents={}", rows.len());
    println!("nonzeros={nnz}");
    Ok(())
}

fn train_dv(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let corpus = load_corpus(store)?;
    let vocab = load_vocab(store)?;
    let config = train_config(cfg)?;
    let subsampler = if cfg.bool("nb_subsample")? {
        let weights = load_weights(store, &vocab)?;
        let s = seed::derive(config.seed, "nb-subsample", &[]);
        Some(SubSampler::new(&weights, cfg.f64("n_a")?, cfg.f64("n_b")?, s)?)
    } else {
        None
    };
    let model = dv_model::train(&corpus, &vocab, &config, subsampler.as_ref(), None)?;
    store.write(Artifact::DocVectors, &model.export_vectors(VectorKind::Documents, &vocab))?;
    store.write(Artifact::NgramVectors, &model.export_vectors(VectorKind::NGrams, &vocab))?;
    for (e, loss) in model.epoch_losses.iter().enumerate() {
        println!("epoch={} loss={loss:.6}", e + 1);
    }
    println!("steps={}", model.steps);
    Ok(())
}

/// Everything a classifier over `views` needs; unused tables stay empty.
struct Loaded {
    corpus_meta: corpus::CorpusMeta,
    dense: EmbeddingMatrix,
    sparse: Vec<BonVector>,
    sparse_dim: usize,
}

impl Loaded {
    fn new(store: &Store<'_>, views: &[View]) -> Result<Self> {
        let meta_path = store.require(Artifact::Metadata)?;
        let corpus_meta = corpus::CorpusMeta::from_tags(corpus::parse_metadata(&read_text(&meta_path)?)?)?;
        let n = corpus_meta.len();
        let dense = if views.iter().any(|v| *v != View::Sparse) {
            load_dense(store, n)?
        } else {
            EmbeddingMatrix::zeros(0, 1)
        };
        let (sparse, sparse_dim) = if views.iter().any(|v| *v != View::Dense) {
            let vocab = load_vocab(store)?;
            (load_bon(store, vocab.len(), n)?, vocab.len())
        } else {
            (Vec::new(), 0)
        };
        Ok(Loaded {
            corpus_meta,
            dense,
            sparse,
            sparse_dim,
        })
    }

    fn inputs(&self) -> EnsembleInputs<'_> {
        EnsembleInputs {
            dense: &self.dense,
            sparse: &self.sparse,
            sparse_dim: self.sparse_dim,
            meta: &self.corpus_meta,
        }
    }
}

fn file_tag(name: &str) -> String {
    name.to_ascii_lowercase().replace('+', "_").replace('>', "_to_")
}

fn train_clf(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let view: View = cfg.str("model").parse()?;
    let data = Loaded::new(store, &[view])?;
    let inputs = data.inputs();
    let guard = LabelGuard::new(&data.corpus_meta);
    let config = ensemble_config(cfg)?;
    let n = data.corpus_meta.len();
    let train_idx = data.corpus_meta.indices_in(Split::Train);
    let cv_seed = cfg.u64("seed")?;
    let fitted = fit_view(&inputs, view, AlignmentMap::identity(n), &train_idx, &config, &guard, cv_seed)?;
    let test_idx = data.corpus_meta.indices_in(Split::Test);
    let test = fitted.features(&inputs, &test_idx)?;
    let test_accuracy = guard.score_test(&test_idx, &fitted.model.predict(&test)?)?;
    let path = store.dir.join(format!("clf_{}.tsv", file_tag(view.name())));
    store.write_file(&path, &fitted.model.to_tsv(), ALL_STAGES)?;
    println!("model={}", view.name());
    println!("protocol={}", fitted.protocol);
    println!("C={}", fitted.c);
    println!("scale={}", fitted.scale);
    if let Some(v) = fitted.tuning_accuracy {
        println!("valid_accuracy={v:.4}");
    }
    println!("test_accuracy={test_accuracy:.4}");
    Ok(())
}

fn scheme_kinds(value: &str) -> Result<Vec<SchemeKind>> {
    if value == "all" {
        return Ok(SchemeKind::ALL.to_vec());
    }
    value.split(',').map(|s| s.trim().parse()).collect()
}

fn ensemble_eval(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let kinds = scheme_kinds(cfg.str("scheme"))?;
    let train_kind = match cfg.str("train_scheme") {
        "same" => None,
        s => Some(s.parse::<SchemeKind>()?),
    };
    let data = Loaded::new(store, &[View::Both])?;
    let inputs = data.inputs();
    let guard = LabelGuard::new(&data.corpus_meta);
    let config = ensemble_config(cfg)?;
    let base = cfg.u64("seed")?;
    let runs = cfg.usize("runs")?;
    if runs == 0 {
        return Err(Error::Config("runs must be >= 1".into()));
    }
    let mut report = EnsembleReport::default();
    for &kind in &kinds {
        let train = train_kind.unwrap_or(kind);
        let seeds = replication_seeds(if train.is_seeded() { train } else { kind }, base, runs);
        report.extend(evaluate_seeds(&inputs, train, kind, &seeds, &config, &guard)?);
    }
    let tag = match (kinds.len(), train_kind) {
        (1, None) => file_tag(kinds[0].name()),
        (1, Some(t)) => file_tag(&format!("{}>{}", t.name(), kinds[0].name())),
        _ if cfg.str("scheme") == "all" => "all".to_string(),
        _ => kinds.iter().map(|k| file_tag(k.name())).collect::<Vec<_>>().join("_"),
    };
    let path = store.dir.join(format!("ensemble_{tag}.csv"));
    store.write_file(&path, &report.to_csv(), ALL_STAGES)?;
    let summary = report.summary();
    for (scheme, mean, sd, n) in &summary {
        if summary.len() == 1 {
            println!("scheme={scheme}");
            println!("test_accuracy={mean:.4}");
            println!("std={sd:.4}");
            println!("runs={n}");
        } else {
            println!("scheme={scheme} test_accuracy={mean:.4} std={sd:.4} runs={n}");
        }
    }
    println!("output={}", path.display());
    Ok(())
}

fn learning_curve(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let models: Vec<View> = cfg.list("models")?;
    let spec = CurveSpec {
        sizes: cfg.list("sizes")?,
        repeats: cfg.usize("repeats")?,
        models: models.clone(),
        seed: cfg.u64("seed")?,
        balanced: cfg.bool("balanced")?,
    };
    let data = Loaded::new(store, &models)?;
    let guard = LabelGuard::new(&data.corpus_meta);
    let mut report = experiments::learning_curve(&spec, &data.inputs(), &ensemble_config(cfg)?, &guard)?;
    if let Some(ext) = cfg.path("external_curve") {
        if !ext.exists() {
            return Err(Error::MissingDependency(format!("external_curve {} does not exist", ext.display())));
        }
        report.rows.extend(CurveReport::from_csv(&read_text(&ext)?)?.rows);
    }
    let csv = store.dir.join("learning_curve.csv");
    store.write_file(&csv, &report.to_csv(), ALL_STAGES)?;
    let summary = store.dir.join("learning_curve_summary.csv");
    store.write_file(&summary, &report.summary_csv(), ALL_STAGES)?;
    for (model, size, n, mean, sd) in report.summary() {
        println!("model={model} size={size} n={n} mean={mean:.4} std={sd:.4}");
    }
    println!("output={}", csv.display());
    Ok(())
}

fn progress_study(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let corpus = load_corpus(store)?;
    let vocab = load_vocab(store)?;
    let weights = load_weights(store, &vocab)?;
    let spec = ProgressSpec {
        runs_per_variant: cfg.usize("runs_per_variant")?,
        cadence: dv_model::CheckpointCadence {
            early_every: cfg.u64("cadence_early")?,
            early_until: cfg.u64("cadence_early_until")?,
            every_epoch: cfg.bool("cadence_epoch")?,
        },
        train: train_config(cfg)?,
        n_a: cfg.f64("n_a")?,
        n_b: cfg.f64("n_b")?,
        seed: cfg.u64("seed")?,
        ..ProgressSpec::default()
    };
    let guard = LabelGuard::new(corpus.meta());
    let config = ensemble_config(cfg)?;
    let path = store.dir.join("progress.csv");
    let mut so_far = Vec::new();
    let mut sink_err = None;
    let records = experiments::progress_study(&corpus, &vocab, &weights, &spec, &config, &guard, |rs| {
        so_far.extend_from_slice(rs);
        if let Err(e) = store.write_file(&path, &experiments::progress_csv(&so_far), ALL_STAGES) {
            sink_err.get_or_insert(e);
        }
    })?;
    if let Some(e) = sink_err {
        return Err(e);
    }
    store.write_file(&path, &experiments::progress_csv(&records), ALL_STAGES)?;
    for (variant, run, last_quarter, plateau) in experiments::plateau_summary(&records) {
        println!(
            "variant={} run={run} last_quarter_test_accuracy={last_quarter:.4} plateau_test_accuracy={plateau:.4}",
            variant.name()
        );
    }
    println!("output={}", path.display());
    Ok(())
}

fn logit_analysis(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let kind: SchemeKind = cfg.str("scheme").parse()?;
    let train_kind = match cfg.str("train_scheme") {
        "same" => kind,
        s => s.parse()?,
    };
    let split: Split = cfg.str("logit_split").parse()?;
    let data = Loaded::new(store, &[View::Both])?;
    let inputs = data.inputs();
    let guard = LabelGuard::new(&data.corpus_meta);
    let seed = cfg.u64("seed")?;
    let layout = data.corpus_meta.layout();
    let train_map = apply_scheme(&ShuffleScheme::new(train_kind, seed), layout);
    let alignment = if train_kind == kind {
        train_map
    } else {
        merge_by_split(&train_map, &apply_scheme(&ShuffleScheme::new(kind, seed), layout), &data.corpus_meta)?
    };
    let fitted = fit_ensemble(&inputs, alignment, &ensemble_config(cfg)?, &guard, seed)?;
    let report = experiments::logit_analysis(&fitted, &inputs, split, &guard)?;
    let tag = if train_kind == kind {
        file_tag(kind.name())
    } else {
        file_tag(&format!("{}>{}", train_kind.name(), kind.name()))
    };
    let csv = store.dir.join(format!("logits_{tag}.csv"));
    store.write_file(&csv, &report.to_csv(), ALL_STAGES)?;
    let text = report.summary_text();
    store.write_file(&store.dir.join(format!("logits_{tag}_summary.txt")), &text, ALL_STAGES)?;
    print!("{text}");
    println!("output={}", csv.display());
    Ok(())
}

fn plot_cmd(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let input = input_path(cfg, "plot_input")?;
    let text = read_text(&input)?;
    let header = text.lines().next().unwrap_or("").trim();
    let kind = match cfg.str("plot_kind") {
        "auto" if header.starts_with(experiments::CURVE_HEADER) => "curve",
        "auto" if header.starts_with(experiments::PROGRESS_HEADER) => "progress",
        "auto" if header.starts_with(experiments::LOGIT_HEADER) => "logits",
        "auto" => {
            return Err(Error::parse(input.display().to_string(), "unrecognised CSV header"));
        }
        k => k,
    };
    let chart = match kind {
        "curve" => plot::learning_curve_chart(&CurveReport::from_csv(&text)?),
        "progress" => plot::progress_chart(&experiments::parse_progress_csv(&text)?),
        "logits" => plot::logit_scatter(&experiments::parse_logit_csv(&text)?),
        other => {
            return Err(Error::UnknownTag {
                field: "plot_kind",
                tag: other.into(),
            })
        }
    };
    let output = cfg.path("plot_output").unwrap_or_else(|| input.with_extension("svg"));
    write_plain(&output, &chart.to_svg())?;
    println!("kind={kind}");
    println!("output={}", output.display());
    Ok(())
}

fn align(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let a = read_order_file(input_path(cfg, "order_a")?)?;
    let b = read_order_file(input_path(cfg, "order_b")?)?;
    let map = build_alignment(&a, &b)?;
    let meta_path = store.require(Artifact::Metadata)?;
    let meta = corpus::CorpusMeta::from_tags(corpus::parse_metadata(&read_text(&meta_path)?)?)?;
    let class = map.classify(meta.layout())?;
    let path = store.dir.join("alignment.tsv");
    write_plain(&path, &map.report_tsv(meta.layout())?)?;
    let moved = (0..map.len()).filter(|&i| map.get(i) != i).count();
    let cross = (0..map.len()).filter(|&i| !meta.layout().same_block(i, map.get(i))).count();
    println!(
        "class={}",
        match class {
            AlignmentClass::Identity => "identity",
            AlignmentClass::InBlock => "in_block",
            AlignmentClass::CrossBlock => "cross_block",
        }
    );
    println!("moved={moved}");
    println!("cross_block={cross}");
    println!("output={}", path.display());
    Ok(())
}

fn synth(store: &Store<'_>) -> Result<()> {
    let cfg = store.config;
    let text_path = required_path(cfg, "corpus_text")?;
    let meta_path = required_path(cfg, "corpus_meta")?;
    let sizes: Vec<usize> = cfg.list("synth_sizes")?;
    let [train, valid, test, extra] = sizes[..] else {
        return Err(Error::Config("synth_sizes needs train,valid,test,extra".into()));
    };
    let (text, meta) = sentiment_corpus(
        SentimentSizes {
            train,
            valid,
            test,
            extra,
        },
        cfg.u64("seed")?,
    );
    write_plain(&text_path, &text)?;
    write_plain(&meta_path, &meta)?;
    println!("documents={}", text.lines().count());
    println!("corpus_text={}", text_path.display());
    println!("corpus_meta={}", meta_path.display());
    Ok(())
}
