use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::json;

use cohort_core::analytics::{
    drug_mention_series, neutrality_test, read_effect_tags, sentiment_drug_correlation, sentiment_series,
    side_effect_pairs, DrugLexicon, EffectVocabulary, Filters, StudyCorpus, TimeBins,
};
use cohort_core::annotate::{AnnotationService, Pool, PoolConfig, Snapshot, SENTIMENT_CONVENTION};
use cohort_core::classifier::{
    compare_testing_samples, grid_search, pick_threshold, roc, class_scores, kept_fraction, Example, Role,
    SolverOptions, SplitFractions, SvmModel, TrainConfig, TrainSplit, DEFAULT_FEATURES,
};
use cohort_core::cleanse::{apply_rules, default_rules, default_loss_evidence, loss_report, parse_rules};
use cohort_core::features::{
    read_features_csv, write_features_csv, CorpusStats, Feature, FeatureExtractor, FeatureVector, LanguageLists,
    PosTagger,
};
use cohort_core::ingest::{
    keyword_gate, parse_corpus, token_frequency, tokenize, write_corpus, DuplicatePolicy, IngestConfig,
    InputFormat, KeywordSet, LexemeIndex, TweetRecord,
};
use cohort_core::labels::{read_labeled, write_labeled, Category, LabeledTweet};
use cohort_core::langfilter::{yield_report, LangCut};
use cohort_core::synth::{generate_corpus, simulate_raters, CorpusConfig, RaterModel};
use cohort_server::{AppState, ServerConfig};

use crate::failure::{CliResult, Failure, WithPath};
use crate::manifest::StageRun;
use crate::*;

fn parse_date(s: &str) -> CliResult<NaiveDate> {
    s.parse()
        .map_err(|_| Failure::invalid(format!("`{s}` is not a YYYY-MM-DD date")))
}

struct Ctx {
    data_dir: PathBuf,
    manifest: PathBuf,
    seed: u64,
    force: bool,
}

impl Ctx {
    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.data_dir.join(p)
        }
    }

    fn stage(&self, name: &str, inputs: &[&Path], seeded: bool) -> CliResult<StageRun> {
        StageRun::begin(
            name,
            &self.manifest,
            &self.data_dir,
            inputs,
            seeded.then_some(self.seed),
            self.force,
        )
    }
}

pub fn dispatch(cli: Cli) -> CliResult<()> {
    let data_dir = cli.data_dir.clone();
    if !data_dir.is_dir() {
        return Err(Failure::Io(format!("data directory {} does not exist", data_dir.display())));
    }
    let manifest = match &cli.manifest {
        Some(m) if m.is_absolute() => m.clone(),
        Some(m) => data_dir.join(m),
        None => data_dir.join("manifest.json"),
    };
    let ctx = Ctx {
        data_dir,
        manifest,
        seed: cli.seed,
        force: cli.force,
    };
    match cli.command {
        Command::Ingest(a) => ingest(&ctx, a),
        Command::Cleanse(a) => cleanse(&ctx, a),
        Command::Features(FeaturesCommand::BuildStats { labels, output }) => build_stats(&ctx, &labels, &output),
        Command::Features(FeaturesCommand::Extract { input, stats, output }) => {
            extract(&ctx, &input, &stats, &output)
        }
        Command::Langfilter(a) => langfilter(&ctx, a),
        Command::Train(a) => train(&ctx, a),
        Command::Score(a) => score(&ctx, a),
        Command::Roc(a) => roc_cmd(&ctx, a),
        Command::Serve(a) => serve(&ctx, a),
        Command::ExportLabels(a) => export_labels(&ctx, a),
        Command::Analyze(a) => analyze(&ctx, a),
        Command::Synth(a) => synth(&ctx, a),
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).at(parent)?;
    }
    Ok(BufWriter::new(File::create(path).at(path)?))
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    Ok(BufReader::new(File::open(path).at(path)?))
}

fn finish_file(mut w: BufWriter<File>, path: &Path) -> CliResult<()> {
    w.flush().at(path)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).at(path)?;
    w.write_all(b"\n").at(path)?;
    finish_file(w, path)
}

/// JSONL tweet records; labeled rows are accepted too.
fn read_records(path: &Path) -> CliResult<Vec<TweetRecord>> {
    let mut out = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.at(path)?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TweetRecord = serde_json::from_str(&line)
            .map_err(|e| Failure::invalid(format!("{} line {}: {e}", path.display(), i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

fn read_labels(path: &Path) -> CliResult<Vec<LabeledTweet>> {
    read_labeled(open(path)?).at(path)
}

fn label_map(rows: &[LabeledTweet]) -> BTreeMap<u64, Category> {
    rows.iter().map(|r| (r.record.tweet_id, r.category)).collect()
}

/// Sidecar of a features file, naming the statistics it was extracted with.
#[derive(Debug, Serialize, Deserialize)]
struct FeaturesMeta {
    stats_checksum: String,
    rows: usize,
}

fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn write_features(path: &Path, rows: &[(u64, FeatureVector)], stats_checksum: &str) -> CliResult<PathBuf> {
    let mut w = create(path)?;
    write_features_csv(&mut w, rows).at(path)?;
    finish_file(w, path)?;
    let meta = meta_path(path);
    write_json(
        &meta,
        &FeaturesMeta {
            stats_checksum: stats_checksum.to_string(),
            rows: rows.len(),
        },
    )?;
    Ok(meta)
}

fn read_features(path: &Path, required: &[Feature]) -> CliResult<(Vec<(u64, FeatureVector)>, Option<String>)> {
    let rows = read_features_csv(open(path)?, required).at(path)?;
    let meta = meta_path(path);
    let checksum = if meta.exists() {
        let m: FeaturesMeta = serde_json::from_reader(open(&meta)?).at(&meta)?;
        Some(m.stats_checksum)
    } else {
        None
    };
    Ok((rows, checksum))
}

fn check_model_stats(model: &SvmModel, features_checksum: Option<&str>, features: &Path) -> CliResult<()> {
    match (&model.stats_checksum, features_checksum) {
        (Some(_), Some(found)) => Ok(model.check_stats(found)?),
        (Some(_), None) => Err(Failure::invalid(format!(
            "{} has no statistics checksum sidecar; the model requires one",
            features.display()
        ))),
        (None, _) => Ok(()),
    }
}

fn ingest(ctx: &Ctx, a: IngestArgs) -> CliResult<()> {
    let input = ctx.path(&a.input);
    let output = ctx.path(&a.output);
    let run = ctx.stage("ingest", &[&input], false)?;
    let config = IngestConfig {
        max_text_chars: a.max_text_chars,
        duplicates: if a.fail_on_duplicate {
            DuplicatePolicy::Fail
        } else {
            DuplicatePolicy::Reject
        },
        ..IngestConfig::default()
    };
    let format = match a.format {
        Format::Jsonl => InputFormat::Jsonl,
        Format::Csv => InputFormat::Csv,
    };
    let parsed = parse_corpus(open(&input)?, format, &config).at(&input)?;
    let keywords = KeywordSet::hiv_default();
    let mut kept = Vec::new();
    let mut lexemes = Vec::new();
    for rec in parsed.records.iter() {
        let lex = tokenize(&rec.text);
        if a.no_gate || keyword_gate(&lex, &keywords) {
            kept.push(rec.clone());
            lexemes.push(lex);
        }
    }
    log::info!(
        "{}: {} accepted, {} rejected, {} pass the keyword gate",
        input.display(),
        parsed.records.len(),
        parsed.rejected.len(),
        kept.len()
    );
    let mut w = create(&output)?;
    write_corpus(&kept, &mut w).at(&output)?;
    finish_file(w, &output)?;
    let mut outputs = vec![output];
    if let Some(p) = &a.rejects {
        let p = ctx.path(p);
        let mut w = csv::Writer::from_writer(create(&p)?);
        w.write_record(["line", "reason"]).at(&p)?;
        for r in &parsed.rejected {
            w.write_record([r.line.to_string(), r.reason.clone()]).at(&p)?;
        }
        w.flush().at(&p)?;
        outputs.push(p);
    }
    if let Some(p) = &a.frequency {
        let p = ctx.path(p);
        let mut w = create(&p)?;
        cohort_core::ingest::write_frequency_csv(&token_frequency(&lexemes), &mut w).at(&p)?;
        finish_file(w, &p)?;
        outputs.push(p);
    }
    if let Some(p) = &a.index {
        let p = ctx.path(p);
        let mut w = create(&p)?;
        LexemeIndex::build(&kept).write(&mut w).at(&p)?;
        finish_file(w, &p)?;
        outputs.push(p);
    }
    run.finish(&outputs.iter().map(PathBuf::as_path).collect::<Vec<_>>())
}

fn cleanse(ctx: &Ctx, a: CleanseArgs) -> CliResult<()> {
    let input = ctx.path(&a.input);
    let output = ctx.path(&a.output);
    let rules_path = a.rules.as_ref().map(|p| ctx.path(p));
    let mut inputs = vec![input.as_path()];
    inputs.extend(rules_path.as_deref());
    let run = ctx.stage("cleanse", &inputs, false)?;
    let rules = match &rules_path {
        Some(p) => parse_rules(&fs::read_to_string(p).at(p)?).at(p)?,
        None => default_rules(),
    };
    let corpus = read_records(&input)?;
    let outcome = apply_rules(&corpus, &rules);
    log::info!("cleanse kept {} of {} tweets", outcome.kept.len(), corpus.len());
    let mut w = create(&output)?;
    write_corpus(&outcome.kept, &mut w).at(&output)?;
    finish_file(w, &output)?;

    let report = match &a.report {
        Some(p) => ctx.path(p),
        None => output.with_extension("report.csv"),
    };
    let mut w = csv::Writer::from_writer(create(&report)?);
    w.write_record(["rule", "removed_count"]).at(&report)?;
    for c in &outcome.counts {
        w.write_record([c.rule.clone(), c.removed_count.to_string()]).at(&report)?;
    }
    w.write_record(["kept".to_string(), outcome.kept.len().to_string()]).at(&report)?;
    w.flush().at(&report)?;
    let mut outputs = vec![output, report];

    if let Some(p) = &a.loss_report {
        let p = ctx.path(p);
        let mut w = csv::Writer::from_writer(create(&p)?);
        w.write_record(["group", "observed", "expected", "sigma", "n_samples", "z", "prob"]).at(&p)?;
        for r in loss_report(&default_loss_evidence())? {
            let e = &r.estimate;
            w.write_record([
                r.group.clone(),
                r.observed.to_string(),
                e.expected.to_string(),
                e.sigma.to_string(),
                e.n_samples.to_string(),
                e.z.to_string(),
                e.prob.to_string(),
            ])
            .at(&p)?;
        }
        w.flush().at(&p)?;
        outputs.push(p);
    }
    run.finish(&outputs.iter().map(PathBuf::as_path).collect::<Vec<_>>())
}

fn build_stats(ctx: &Ctx, labels: &Path, output: &Path) -> CliResult<()> {
    let labels = ctx.path(labels);
    let output = ctx.path(output);
    let run = ctx.stage("features-build-stats", &[&labels], false)?;
    let stats = CorpusStats::build(&read_labels(&labels)?).at(&labels)?;
    if let Some(parent) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).at(parent)?;
    }
    stats.write(&output).at(&output)?;
    run.finish(&[&output])
}

fn extract(ctx: &Ctx, input: &Path, stats: &Path, output: &Path) -> CliResult<()> {
    let input = ctx.path(input);
    let stats_path = ctx.path(stats);
    let output = ctx.path(output);
    let stage = format!("features-extract:{}", output.strip_prefix(&ctx.data_dir).unwrap_or(&output).display());
    let run = ctx.stage(&stage, &[&input, &stats_path], false)?;
    let stats = CorpusStats::read(&stats_path).at(&stats_path)?;
    let tagger = PosTagger::default();
    let keywords = KeywordSet::hiv_default();
    let extractor = FeatureExtractor {
        stats: &stats,
        tagger: &tagger,
        languages: LanguageLists::bundled(),
        keywords: &keywords,
    };
    let rows = read_records(&input)?
        .iter()
        .map(|r| Ok((r.tweet_id, extractor.extract(r)?)))
        .collect::<cohort_core::Result<Vec<_>>>()
        .at(&input)?;
    let meta = write_features(&output, &rows, &stats.checksum())?;
    run.finish(&[&output, &meta])
}

fn langfilter(ctx: &Ctx, a: LangfilterArgs) -> CliResult<()> {
    let features = ctx.path(&a.features);
    let output = ctx.path(&a.output);
    let labels_path = a.labels.as_ref().map(|p| ctx.path(p));
    let mut inputs = vec![features.as_path()];
    inputs.extend(labels_path.as_deref());
    let cut = LangCut {
        min_is_english: a.min_is_english,
        max_ncharacters: a.max_nchars,
        max_in_notenglish: a.max_notenglish,
        min_word_ratio: a.min_word_ratio,
    };
    cut.validate()?;
    let run = ctx.stage("langfilter", &inputs, false)?;
    let required = [Feature::IsEnglish, Feature::NCharacters, Feature::InNotEnglish, Feature::WordCount];
    let (rows, checksum) = read_features(&features, &required)?;
    let checksum = checksum.ok_or_else(|| {
        Failure::invalid(format!("{} has no statistics checksum sidecar", features.display()))
    })?;
    let kept: Vec<(u64, FeatureVector)> = rows.iter().filter(|(_, v)| cut.passes(v)).cloned().collect();
    log::info!("language cut kept {} of {} rows", kept.len(), rows.len());
    let meta = write_features(&output, &kept, &checksum)?;
    let mut outputs = vec![output, meta];
    if let (Some(report), Some(labels_path)) = (&a.report, &labels_path) {
        let report = ctx.path(report);
        let labels = label_map(&read_labels(labels_path)?);
        let table = yield_report(rows.iter().filter_map(|(id, v)| labels.get(id).map(|&c| (c, v))), &cut);
        let mut w = csv::Writer::from_writer(create(&report)?);
        w.write_record(["class", "before", "after"]).at(&report)?;
        for r in table {
            w.write_record([r.class.to_string(), r.before.to_string(), r.after.to_string()]).at(&report)?;
        }
        w.flush().at(&report)?;
        outputs.push(report);
    }
    run.finish(&outputs.iter().map(PathBuf::as_path).collect::<Vec<_>>())
}

/// Signal and noise rows of a features file that carry an agreed label.
fn labeled_examples(rows: &[(u64, FeatureVector)], labels: &BTreeMap<u64, Category>) -> Vec<Example> {
    rows.iter()
        .filter_map(|(id, v)| match labels.get(id) {
            Some(Category::Signal) => Some((id, v, true)),
            Some(Category::Noise) => Some((id, v, false)),
            _ => None,
        })
        .map(|(&tweet_id, v, signal)| Example {
            tweet_id,
            features: *v,
            signal,
        })
        .collect()
}

fn train(ctx: &Ctx, a: TrainArgs) -> CliResult<()> {
    let features = ctx.path(&a.features);
    let labels_path = ctx.path(&a.labels);
    let output = ctx.path(&a.output);
    let run = ctx.stage("train", &[&features, &labels_path], true)?;
    let (rows, checksum) = read_features(&features, &DEFAULT_FEATURES)?;
    let examples = labeled_examples(&rows, &label_map(&read_labels(&labels_path)?));
    let ids: Vec<(u64, bool)> = examples.iter().map(|e| (e.tweet_id, e.signal)).collect();
    let split = TrainSplit::new(&ids, &SplitFractions::default(), ctx.seed)?;
    log::info!(
        "split: {} train, {} test, {} validation",
        split.train.len(),
        split.test.len(),
        split.validation.len()
    );
    let mut config = TrainConfig {
        gamma: a.gamma,
        gamma_scale: a.gamma_scale,
        solver: SolverOptions {
            cost: a.cost,
            ..SolverOptions::default()
        },
        ..TrainConfig::default()
    };
    let mut outputs = vec![output.clone()];
    if a.grid {
        let (best, table) = grid_search(&examples, &split, &config, &[0.25, 0.5, 1.0, 2.0, 4.0], &[0.1, 1.0, 10.0])?;
        config = best;
        if let Some(p) = &a.grid_report {
            let p = ctx.path(p);
            let mut w = csv::Writer::from_writer(create(&p)?);
            w.write_record(["gamma_scale", "cost", "rejection"]).at(&p)?;
            for g in table {
                w.write_record([g.gamma_scale.to_string(), g.cost.to_string(), g.rejection.to_string()]).at(&p)?;
            }
            w.flush().at(&p)?;
            outputs.push(p);
        }
    }
    let mut model = SvmModel::train(&examples, &split, &config)?;
    model.stats_checksum = checksum;
    if let Some(parent) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).at(parent)?;
    }
    model.save(&output).at(&output)?;
    run.finish(&outputs.iter().map(PathBuf::as_path).collect::<Vec<_>>())
}

fn score(ctx: &Ctx, a: ScoreArgs) -> CliResult<()> {
    let model_path = ctx.path(&a.model);
    let features = ctx.path(&a.features);
    let output = ctx.path(&a.output);
    let run = ctx.stage("score", &[&model_path, &features], false)?;
    let model = SvmModel::load(&model_path).at(&model_path)?;
    let (rows, checksum) = read_features(&features, &model.features)?;
    check_model_stats(&model, checksum.as_deref(), &features)?;
    let mut w = csv::Writer::from_writer(create(&output)?);
    let mut header = vec!["tweet_id", "score"];
    if a.threshold.is_some() {
        header.push("kept");
    }
    w.write_record(&header).at(&output)?;
    for (id, v) in &rows {
        let s = cohort_core::classifier::Scorer::score(&model, v).map_err(|e| Failure::invalid(format!("tweet {id}: {e}")))?;
        let mut rec = vec![id.to_string(), s.to_string()];
        if let Some(t) = a.threshold {
            rec.push((s > t).to_string());
        }
        w.write_record(&rec).at(&output)?;
    }
    w.flush().at(&output)?;
    run.finish(&[&output])
}

#[derive(Debug, Serialize)]
struct ThresholdSummary {
    role: String,
    target: f64,
    threshold: f64,
    n_signal: usize,
    n_noise: usize,
    signal_kept: f64,
    noise_rejected: f64,
}

fn roc_cmd(ctx: &Ctx, a: RocArgs) -> CliResult<()> {
    let model_path = ctx.path(&a.model);
    let features = ctx.path(&a.features);
    let labels_path = ctx.path(&a.labels);
    let output = ctx.path(&a.output);
    let run = ctx.stage("roc", &[&model_path, &features, &labels_path], false)?;
    let model = SvmModel::load(&model_path).at(&model_path)?;
    let (rows, checksum) = read_features(&features, &model.features)?;
    check_model_stats(&model, checksum.as_deref(), &features)?;
    let examples = labeled_examples(&rows, &label_map(&read_labels(&labels_path)?));
    let in_role = |role: Option<Role>| -> Vec<Example> {
        examples
            .iter()
            .filter(|e| role.is_none() || model.split.role(e.tweet_id) == role)
            .cloned()
            .collect()
    };
    let role = match a.role {
        RoleArg::Train => Some(Role::Train),
        RoleArg::Test => Some(Role::Test),
        RoleArg::Validation => Some(Role::Validation),
        RoleArg::All => None,
    };
    let sample = in_role(role);
    let curve = roc(&model, &sample, a.nthresholds)?;
    let mut w = create(&output)?;
    curve.write_csv(&mut w).at(&output)?;
    finish_file(w, &output)?;
    let mut outputs = vec![output];

    if let Some(p) = &a.threshold_out {
        let p = ctx.path(p);
        let (signal, noise) = class_scores(&model, &sample)?;
        let threshold = pick_threshold(&signal, a.target)?;
        let summary = ThresholdSummary {
            role: format!("{:?}", a.role).to_lowercase(),
            target: a.target,
            threshold,
            n_signal: signal.len(),
            n_noise: noise.len(),
            signal_kept: kept_fraction(&signal, threshold),
            noise_rejected: 1.0 - kept_fraction(&noise, threshold),
        };
        write_json(&p, &summary)?;
        outputs.push(p);
    }
    if let Some(p) = &a.compare_out {
        let p = ctx.path(p);
        let cmp = compare_testing_samples(&model, &in_role(Some(Role::Test)), &in_role(Some(Role::Validation)), a.nthresholds)?;
        let mut w = csv::Writer::from_writer(create(&p)?);
        w.write_record(["threshold", "signal_pull", "noise_pull"]).at(&p)?;
        for pt in &cmp.points {
            w.write_record([pt.threshold.to_string(), pt.signal_pull.to_string(), pt.noise_pull.to_string()]).at(&p)?;
        }
        w.flush().at(&p)?;
        if cmp.flagged > 0 {
            log::warn!("{} thresholds differ by more than 3 sigma between test and validation", cmp.flagged);
        }
        outputs.push(p);
    }
    run.finish(&outputs.iter().map(PathBuf::as_path).collect::<Vec<_>>())
}

fn pool_config(third_rater: bool) -> PoolConfig {
    PoolConfig {
        requeue_disagreements: third_rater,
    }
}

fn serve(ctx: &Ctx, a: ServeArgs) -> CliResult<()> {
    let tasks = read_records(&ctx.path(&a.tasks))?;
    let log = ctx.path(&a.log);
    let snapshot = a.snapshot.as_ref().map(|p| ctx.path(p));
    let pool = Pool::new(tasks, a.raters.iter().cloned(), pool_config(a.third_rater))?;
    let service = AnnotationService::open(pool, &log, snapshot.as_deref()).at(&log)?;
    let config = ServerConfig {
        open_enrollment: a.raters.is_empty(),
        ui_dir: a.ui_dir.as_ref().map(|p| ctx.path(p)),
        snapshot: snapshot.map(|p| (p, a.snapshot_every)),
    };
    let state = AppState::new(service, config);
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(cohort_server::serve(state, a.addr))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ExportMeta {
    sentiment_convention: &'static str,
    stats: cohort_core::annotate::PoolStats,
}

fn export_labels(ctx: &Ctx, a: ExportArgs) -> CliResult<()> {
    let tasks_path = ctx.path(&a.tasks);
    let log = ctx.path(&a.log);
    let snapshot = a.snapshot.as_ref().map(|p| ctx.path(p));
    let output = ctx.path(&a.output);
    let mut inputs = vec![tasks_path.as_path(), log.as_path()];
    inputs.extend(snapshot.as_deref().filter(|p| p.exists()));
    let run = ctx.stage("export-labels", &inputs, false)?;
    let annotations = Snapshot::recover(snapshot.as_deref(), &log).at(&log)?;
    let raters: BTreeSet<String> = annotations.iter().map(|a| a.rater.clone()).collect();
    let mut pool = Pool::new(read_records(&tasks_path)?, raters, pool_config(a.third_rater))?;
    pool.replay(annotations).at(&log)?;
    let rows = pool.export_labels();
    log::info!("{} agreed labels exported", rows.len());
    let mut w = create(&output)?;
    write_labeled(&rows, &mut w).at(&output)?;
    finish_file(w, &output)?;
    let meta = meta_path(&output);
    write_json(
        &meta,
        &ExportMeta {
            sentiment_convention: SENTIMENT_CONVENTION,
            stats: pool.stats(),
        },
    )?;
    run.finish(&[&output, &meta])
}

struct Study {
    corpus: StudyCorpus,
    lexicon: DrugLexicon,
    bins: TimeBins,
    filters: Filters,
}

fn load_study(ctx: &Ctx, s: &StudyArgs) -> CliResult<(Study, Vec<PathBuf>)> {
    let labels_path = ctx.path(&s.labels);
    let mut inputs = vec![labels_path.clone()];
    let lexicon = match &s.drugs {
        Some(p) => {
            let p = ctx.path(p);
            let lex = DrugLexicon::from_reader(open(&p)?).at(&p)?;
            inputs.push(p);
            lex
        }
        None => DrugLexicon::bundled(),
    };
    let vocab = match &s.effect_vocab {
        Some(p) => {
            let p = ctx.path(p);
            let v = EffectVocabulary::parse(&fs::read_to_string(&p).at(&p)?).at(&p)?;
            inputs.push(p);
            v
        }
        None => EffectVocabulary::bundled(),
    };
    let effects = match &s.effects {
        Some(p) => {
            let p = ctx.path(p);
            let tags = read_effect_tags(open(&p)?, &vocab).at(&p)?;
            inputs.push(p);
            tags
        }
        None => BTreeMap::new(),
    };
    if s.require_side_effects && s.effects.is_none() {
        return Err(Failure::invalid("--require-side-effects needs --effects"));
    }
    let bins = TimeBins {
        origin: parse_date(&s.origin)?,
        width_days: s.bin_days,
        end: parse_date(&s.end)?,
    };
    bins.validate()?;
    let corpus = StudyCorpus::from_labeled(&read_labels(&labels_path)?, &effects);
    let filters = Filters {
        exclude_retweets: s.exclude_retweets,
        require_side_effects: s.require_side_effects,
        unique_users_only: s.unique_users,
    };
    Ok((
        Study {
            corpus,
            lexicon,
            bins,
            filters,
        },
        inputs,
    ))
}

fn analyze(ctx: &Ctx, cmd: AnalyzeCommand) -> CliResult<()> {
    let (kind, s) = match &cmd {
        AnalyzeCommand::Mentions(s) => ("mentions", s),
        AnalyzeCommand::Effects { study, .. } => ("effects", study),
        AnalyzeCommand::Sentiment { study, .. } => ("sentiment", study),
        AnalyzeCommand::Correlation(s) => ("correlation", s),
    };
    let (study, inputs) = load_study(ctx, s)?;
    let output = ctx.path(&s.output);
    let stage = format!("analyze-{kind}:{}", output.strip_prefix(&ctx.data_dir).unwrap_or(&output).display());
    let run = ctx.stage(&stage, &inputs.iter().map(PathBuf::as_path).collect::<Vec<_>>(), false)?;
    let mut outputs = vec![output.clone()];
    match &cmd {
        AnalyzeCommand::Mentions(_) => {
            let series = drug_mention_series(&study.corpus, &study.lexicon, &study.bins, &study.filters);
            let mut w = create(&output)?;
            series.write_csv(&mut w).at(&output)?;
            finish_file(w, &output)?;
        }
        AnalyzeCommand::Effects { totals, .. } => {
            if study.filters != Filters::default() {
                return Err(Failure::invalid("filters do not apply to drug/effect pairs"));
            }
            let table = side_effect_pairs(&study.corpus, &study.lexicon);
            let mut w = create(&output)?;
            table.write_csv(&mut w).at(&output)?;
            finish_file(w, &output)?;
            if let Some(p) = totals {
                let p = ctx.path(p);
                let mut w = create(&p)?;
                table.write_totals_csv(&mut w).at(&p)?;
                finish_file(w, &p)?;
                outputs.push(p);
            }
        }
        AnalyzeCommand::Sentiment { drug, neutrality, .. } => {
            let drug = drug.as_deref().map(|d| (&study.lexicon, d));
            let series = sentiment_series(&study.corpus, &study.bins, &study.filters, drug)?;
            let mut w = create(&output)?;
            series.write_csv(&mut w).at(&output)?;
            finish_file(w, &output)?;
            if let Some(p) = neutrality {
                let p = ctx.path(p);
                let mut w = csv::Writer::from_writer(create(&p)?);
                w.write_record(["bin_start", "z", "compatible"]).at(&p)?;
                for r in neutrality_test(&series) {
                    w.write_record([r.bin_start.to_string(), r.z.to_string(), r.compatible.to_string()]).at(&p)?;
                }
                w.flush().at(&p)?;
                outputs.push(p);
            }
        }
        AnalyzeCommand::Correlation(_) => {
            let series = sentiment_series(&study.corpus, &study.bins, &study.filters, None)?;
            let mentions = drug_mention_series(&study.corpus, &study.lexicon, &study.bins, &study.filters);
            let populated = series.bins.iter().filter(|b| b.n > 0).count();
            let value = match sentiment_drug_correlation(&series, &mentions.totals()) {
                Ok(r) => json!({ "correlation": r, "populated_bins": populated, "filters": study.filters }),
                Err(cohort_core::Error::Domain(reason)) => {
                    log::warn!("correlation undefined: {reason}");
                    json!({ "correlation": null, "undefined_because": reason, "populated_bins": populated, "filters": study.filters })
                }
                Err(e) => return Err(e.into()),
            };
            write_json(&output, &value)?;
        }
    }
    run.finish(&outputs.iter().map(PathBuf::as_path).collect::<Vec<_>>())
}

fn synth(ctx: &Ctx, a: SynthArgs) -> CliResult<()> {
    if !(0.0..=1.0).contains(&a.match_prob) {
        return Err(Failure::invalid("--match-prob must lie in [0, 1]"));
    }
    let dir = ctx.path(&a.out_dir);
    fs::create_dir_all(&dir).at(&dir)?;
    let run = ctx.stage("synth", &[], true)?;
    let corpus = generate_corpus(
        &CorpusConfig {
            tweets: a.tweets,
            ..CorpusConfig::default()
        },
        ctx.seed,
    );
    let tweets = dir.join("tweets.jsonl");
    let mut w = create(&tweets)?;
    write_corpus(&corpus.tweets, &mut w).at(&tweets)?;
    finish_file(w, &tweets)?;

    let raters = ["rater-a", "rater-b"];
    let mut pool = Pool::new(corpus.annotation_pool(), raters, PoolConfig::default())?;
    let model = RaterModel {
        match_prob: a.match_prob,
        ..RaterModel::default()
    };
    let log = simulate_raters(&mut pool, raters, &corpus.truth, &corpus.sentiments, &model, ctx.seed.wrapping_add(1))?;
    let log_path = dir.join("annotations.jsonl");
    let mut w = create(&log_path)?;
    for a in &log {
        serde_json::to_writer(&mut w, a).at(&log_path)?;
        w.write_all(b"\n").at(&log_path)?;
    }
    finish_file(w, &log_path)?;

    let effects = dir.join("effects.csv");
    fs::write(&effects, corpus.effects_csv()).at(&effects)?;

    let truth = dir.join("truth.csv");
    let mut w = csv::Writer::from_writer(create(&truth)?);
    w.write_record(["tweet_id", "category", "sentiment"]).at(&truth)?;
    for (id, c) in &corpus.truth {
        let s = corpus.sentiments.get(id).map(|s| s.to_string()).unwrap_or_default();
        w.write_record([id.to_string(), c.to_string(), s]).at(&truth)?;
    }
    w.flush().at(&truth)?;
    run.finish(&[&tweets, &log_path, &effects, &truth])
}
