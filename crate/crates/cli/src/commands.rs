use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lexclean::assoc::{build_initial_lexicon, count_cooccurrences, InitialLexiconOptions};
use lexclean::corpus::{load_corpus, Corpus, Preprocessor, Side, Vocabulary};
use lexclean::eval::{
    apply_adjudication, concordance, concordance_words, format_adjudication_template, format_precision_report,
    format_recall, gold_precision, measure_recall, render_excerpt, sample_for_precision, summarize_precision,
    Adjudication, Excerpt, GoldLexicon, PrecisionSummary, Verdict,
};
use lexclean::io::{
    format_lexicon, format_params, read_lexicon, read_regraded_lexicon, write_text, RunDir,
    WordMapping, LEXICON_FILE, PARAMS_FILE, REPORT_FILE,
};
use lexclean::lexicon::Lexicon;
use lexclean::linker::link_dump_rows;
use lexclean::pipeline::{apply_cutoff, clean_with, greedy_baseline, CleanConfig, CutoffSpec};
use lexclean::synth::{format_bitext, generate_pairs, GeneratorConfig};
use serde::Serialize;

use crate::options::{
    CleanArgs, ConcordArgs, CorpusArgs, CutoffArgs, EvalArgs, InduceArgs, RunArgs, SnapshotArgs, SynthArgs,
};
use crate::CliError;

pub const CONFIG_FILE: &str = "config.resolved";
pub const LINKS_FILE: &str = "links.tsv";
pub const LINKS_HEADER: &str = "segment\tsource_word\ttarget_word";

/// The merged settings of one run, written as TOML.
struct Resolved(toml::Table);

impl Resolved {
    fn new(command: &str) -> Self {
        let mut table = toml::Table::new();
        table.insert("command".into(), command.into());
        table.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        Resolved(table)
    }

    fn with<T: Serialize>(mut self, group: &T) -> Self {
        let group = toml::Table::try_from(group).expect("flag groups serialize to tables");
        self.0.extend(group);
        self
    }

    fn with_section<T: Serialize>(mut self, name: &str, section: &T) -> Self {
        let section = toml::Table::try_from(section).expect("records serialize to tables");
        self.0.insert(name.into(), section.into());
        self
    }

    fn write(&self, out: &Path) -> Result<(), CliError> {
        let text = toml::to_string(&self.0).expect("tables serialize");
        Ok(write_text(&out.join(CONFIG_FILE), &text)?)
    }
}

/// `metric TAB value` rows for commands without an iteration report.
struct Metrics(String);

impl Metrics {
    fn new() -> Self {
        Metrics(String::from("metric\tvalue\n"))
    }

    fn add(&mut self, name: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.0, "{name}\t{value}");
        self
    }

    fn write(&self, out: &Path) -> Result<(), CliError> {
        Ok(write_text(&out.join(REPORT_FILE), &self.0)?)
    }
}

fn in_pool<T: Send>(run: &RunArgs, work: impl FnOnce() -> Result<T, CliError> + Send) -> Result<T, CliError> {
    let workers = run.workers.expect("resolved");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))?;
    pool.install(work)
}

fn load(corpus: &CorpusArgs) -> Result<(Corpus, Preprocessor), CliError> {
    let options = corpus.preprocess_options()?;
    let pre = Preprocessor::from_options(&options)?;
    let loaded = load_corpus(&corpus.corpus(), &options)?;
    log::info!(
        "{} segment pairs, {} source and {} target word types",
        loaded.len(),
        loaded.source_vocab().len(),
        loaded.target_vocab().len()
    );
    Ok((loaded, pre))
}

fn initial_options(induce: &InduceArgs) -> InitialLexiconOptions {
    InitialLexiconOptions {
        min_score: induce.min_score.expect("resolved"),
        max_candidates_per_word: induce.max_candidates,
    }
}

/// Reads a lexicon whose words must all occur in `corpus`.
fn read_for_corpus(path: &Path, params: Option<&PathBuf>, corpus: &Corpus) -> Result<Lexicon, CliError> {
    let (mut sv, mut tv) = (corpus.source_vocab().clone(), corpus.target_vocab().clone());
    Ok(match params {
        Some(p) => read_regraded_lexicon(path, p, &mut sv, &mut tv, WordMapping::Lookup)?,
        None => read_lexicon(path, &mut sv, &mut tv, WordMapping::Lookup)?,
    })
}

fn write_lexicon_for(path: &Path, lexicon: &Lexicon, corpus: &Corpus) -> Result<(), CliError> {
    Ok(write_text(
        path,
        &format_lexicon(lexicon, corpus.source_vocab(), corpus.target_vocab()),
    )?)
}

fn add_recall(metrics: &mut Metrics, lexicon: &Lexicon, corpus: &Corpus) {
    let recall = measure_recall(lexicon, corpus);
    metrics
        .add("recall_source_percent", format!("{:.4}", recall.source.percent))
        .add("recall_target_percent", format!("{:.4}", recall.target.percent))
        .add("recall_combined_percent", format!("{:.4}", recall.combined.percent));
}

pub fn induce(run: &RunArgs, corpus: &CorpusArgs, induce: &InduceArgs) -> Result<(), CliError> {
    let out = run.out();
    let resolved = Resolved::new("induce").with(run).with(corpus).with(induce);
    resolved.write(&out)?;
    in_pool(run, || {
        let (loaded, _) = load(corpus)?;
        resolved.with_section("preprocessing", loaded.preprocessing()).write(&out)?;
        let table = count_cooccurrences(&loaded, None)?;
        let lexicon = build_initial_lexicon(&table, &loaded, &initial_options(induce))?;
        write_lexicon_for(&RunDir::new(&out).iteration_dir(0).join(LEXICON_FILE), &lexicon, &loaded)?;
        let mut metrics = Metrics::new();
        metrics
            .add("segments", loaded.len())
            .add("source_types", loaded.source_vocab().len())
            .add("target_types", loaded.target_vocab().len())
            .add("cooccurring_pairs", table.num_pairs())
            .add("total_cooc", table.total_cooc())
            .add("entries", lexicon.len());
        add_recall(&mut metrics, &lexicon, &loaded);
        metrics.write(&out)
    })
}

pub fn clean(run: &RunArgs, corpus: &CorpusArgs, induce: &InduceArgs, clean: &CleanArgs) -> Result<(), CliError> {
    let out = run.out();
    let resolved = Resolved::new("clean").with(run).with(corpus).with(induce).with(clean);
    resolved.write(&out)?;
    let config = CleanConfig {
        max_iterations: clean.max_iter.expect("resolved"),
        ..CleanConfig::default()
    };
    let dump = clean.dump_links.unwrap_or(false);
    in_pool(run, || {
        let (loaded, _) = load(corpus)?;
        resolved.with_section("preprocessing", loaded.preprocessing()).write(&out)?;
        let initial = match &clean.lexicon {
            Some(path) => read_for_corpus(path, None, &loaded)?,
            None => {
                let table = count_cooccurrences(&loaded, None)?;
                build_initial_lexicon(&table, &loaded, &initial_options(induce))?
            }
        };
        let dir = RunDir::new(&out);
        write_lexicon_for(&dir.iteration_dir(0).join(LEXICON_FILE), &initial, &loaded)?;
        let outcome = clean_with(&loaded, &initial, &config, |state| {
            dir.write_iteration(state, &loaded)?;
            if dump {
                let mut text = format!("{LINKS_HEADER}\n");
                for (segment, s, t) in link_dump_rows(&loaded, state.linked) {
                    let _ = writeln!(text, "{segment}\t{s}\t{t}");
                }
                write_text(&dir.iteration_dir(state.iteration).join(LINKS_FILE), &text)?;
            }
            log::info!(
                "iteration {}: {} entries, lambda_right {:.6}, lambda_wrong {:.6}",
                state.iteration,
                state.lexicon.len(),
                state.params.lambda_right,
                state.params.lambda_wrong
            );
            Ok(())
        })?;
        dir.write_report(&outcome.reports)?;
        if !outcome.reached_fixed_point {
            log::warn!("no fixed point within {} iterations", config.max_iterations);
        }
        Ok(())
    })
}

pub fn cutoff(run: &RunArgs, snapshot: &SnapshotArgs, cutoff: &CutoffArgs, spec: CutoffSpec) -> Result<(), CliError> {
    let out = run.out();
    Resolved::new("cutoff").with(run).with(snapshot).with(cutoff).write(&out)?;
    let (mut sv, mut tv) = (Vocabulary::new(Side::Source), Vocabulary::new(Side::Target));
    let path = snapshot.lexicon();
    let lexicon = match &snapshot.params {
        Some(p) => read_regraded_lexicon(&path, p, &mut sv, &mut tv, WordMapping::Intern)?,
        None => read_lexicon(&path, &mut sv, &mut tv, WordMapping::Intern)?,
    };
    let kept = apply_cutoff(&lexicon, spec)?;
    let params = kept.params().expect("cutoffs only apply to regraded lexicons");
    write_text(&out.join(LEXICON_FILE), &format_lexicon(&kept, &sv, &tv))?;
    write_text(&out.join(PARAMS_FILE), &format_params(params))?;
    let mut metrics = Metrics::new();
    metrics
        .add("cutoff", spec)
        .add("threshold", format!("{:.6}", spec.threshold(params)))
        .add("entries_before", lexicon.len())
        .add("entries_after", kept.len());
    metrics.write(&out)
}

pub fn baseline(run: &RunArgs, corpus: &CorpusArgs, induce: &InduceArgs) -> Result<(), CliError> {
    if induce.max_candidates.is_some() {
        return Err(CliError::Usage("--max-candidates does not apply to baseline".into()));
    }
    let out = run.out();
    let resolved = Resolved::new("baseline").with(run).with(corpus).with(induce);
    resolved.write(&out)?;
    let threshold = induce.min_score.expect("resolved");
    in_pool(run, || {
        let (loaded, _) = load(corpus)?;
        resolved.with_section("preprocessing", loaded.preprocessing()).write(&out)?;
        let lexicon = greedy_baseline(&loaded, threshold)?;
        write_lexicon_for(&out.join(LEXICON_FILE), &lexicon, &loaded)?;
        let mut metrics = Metrics::new();
        metrics.add("threshold", threshold).add("entries", lexicon.len());
        add_recall(&mut metrics, &lexicon, &loaded);
        metrics.write(&out)
    })
}

pub const RECALL_FILE: &str = "recall.tsv";
pub const PRECISION_FILE: &str = "precision.tsv";
pub const ADJUDICATION_FILE: &str = "adjudication.tsv";
pub const CONCORDANCE_FILE: &str = "concordance.txt";

fn render_concordance(entries: &[((String, String), Vec<Excerpt>)], corpus: &Corpus) -> String {
    let mut text = String::new();
    for ((s, t), excerpts) in entries {
        let _ = writeln!(text, "# {s}\t{t}\t{} excerpts", excerpts.len());
        for e in excerpts {
            text.push_str(&render_excerpt(e, corpus));
        }
        text.push('\n');
    }
    text
}

pub fn eval(
    run: &RunArgs,
    corpus: &CorpusArgs,
    snapshot: &SnapshotArgs,
    cutoff: &CutoffArgs,
    spec: Option<CutoffSpec>,
    eval: &EvalArgs,
) -> Result<(), CliError> {
    let out = run.out();
    let resolved = Resolved::new("eval").with(run).with(corpus).with(snapshot).with(cutoff).with(eval);
    resolved.write(&out)?;
    in_pool(run, || {
        let (loaded, pre) = load(corpus)?;
        resolved.with_section("preprocessing", loaded.preprocessing()).write(&out)?;
        let mut lexicon = read_for_corpus(&snapshot.lexicon(), snapshot.params.as_ref(), &loaded)?;
        if let Some(spec) = spec {
            lexicon = apply_cutoff(&lexicon, spec)?;
        }
        let gold = match &eval.gold {
            Some(path) => GoldLexicon::load(path, &pre)?,
            None => GoldLexicon::default(),
        };

        let mut metrics = Metrics::new();
        metrics.add("entries", lexicon.len());
        write_text(&out.join(RECALL_FILE), &format_recall(&measure_recall(&lexicon, &loaded)))?;
        add_recall(&mut metrics, &lexicon, &loaded);
        if eval.gold.is_some() {
            metrics
                .add("gold_pairs", gold.len())
                .add("gold_precision_percent", format!("{:.4}", 100.0 * gold_precision(&lexicon, &loaded, &gold)));
        }

        let mut samples = sample_for_precision(
            &lexicon,
            &loaded,
            &gold,
            eval.samples.expect("resolved"),
            eval.sample_size.expect("resolved"),
            eval.seed.expect("resolved"),
        )?;
        if let Some(path) = &eval.adjudication {
            apply_adjudication(&mut samples, &Adjudication::load(path)?);
        }
        write_text(&out.join(PRECISION_FILE), &format_precision_report(&samples))?;
        match summarize_precision(&samples) {
            PrecisionSummary::Complete { mean, std_dev } => {
                metrics
                    .add("sampled_precision_mean", format!("{mean:.4}"))
                    .add("sampled_precision_std_dev", format!("{std_dev:.4}"));
            }
            PrecisionSummary::IncompleteAdjudication { pending } => {
                let distinct: BTreeSet<(String, String)> = samples
                    .iter()
                    .flat_map(|s| &s.entries)
                    .filter(|e| e.verdict == Verdict::HumanPending)
                    .map(|e| (e.source.clone(), e.target.clone()))
                    .collect();
                write_text(&out.join(ADJUDICATION_FILE), &format_adjudication_template(&samples))?;
                let max_lines = eval.max_lines.expect("resolved");
                let bundle: Vec<_> = distinct
                    .into_iter()
                    .map(|(s, t)| {
                        let excerpts = match (loaded.source_vocab().get(&s), loaded.target_vocab().get(&t)) {
                            (Some(v), Some(w)) => concordance(v, w, &loaded, max_lines),
                            _ => Vec::new(),
                        };
                        ((s, t), excerpts)
                    })
                    .collect();
                write_text(&out.join(CONCORDANCE_FILE), &render_concordance(&bundle, &loaded))?;
                metrics.add("pending_verdicts", pending);
                log::warn!("{pending} sampled verdicts pending; fill in {ADJUDICATION_FILE} and pass --adjudication");
            }
        }
        metrics.write(&out)
    })
}

pub fn concord(run: &RunArgs, corpus: &CorpusArgs, concord: &ConcordArgs) -> Result<(), CliError> {
    let out = run.out();
    let mut resolved = Resolved::new("concord").with(run).with(corpus).with(concord);
    if !concord.entry.is_empty() {
        let entries: Vec<Vec<String>> = concord.entries().into_iter().map(|(s, t)| vec![s, t]).collect();
        resolved.0.insert(
            "entry".into(),
            toml::Value::try_from(entries).expect("strings serialize"),
        );
    }
    resolved.write(&out)?;
    let max_lines = concord.max_lines.expect("resolved");
    in_pool(run, || {
        let (loaded, pre) = load(corpus)?;
        resolved.with_section("preprocessing", loaded.preprocessing()).write(&out)?;
        let mut bundle = Vec::new();
        for (s, t) in concord.entries() {
            let excerpts = concordance_words(&s, &t, &loaded, &pre, max_lines);
            bundle.push(((s, t), excerpts));
        }
        if let Some(path) = &concord.lexicon {
            let lexicon = read_for_corpus(path, None, &loaded)?;
            for e in lexicon.ranked_in(&loaded) {
                let words = (
                    loaded.source_vocab().word(e.source).to_owned(),
                    loaded.target_vocab().word(e.target).to_owned(),
                );
                bundle.push((words, concordance(e.source, e.target, &loaded, max_lines)));
            }
        }
        write_text(&out.join(CONCORDANCE_FILE), &render_concordance(&bundle, &loaded))?;
        let mut metrics = Metrics::new();
        metrics
            .add("entries", bundle.len())
            .add("excerpts", bundle.iter().map(|(_, x)| x.len()).sum::<usize>())
            .add("entries_without_excerpts", bundle.iter().filter(|(_, x)| x.is_empty()).count());
        metrics.write(&out)
    })
}

pub const BITEXT_FILE: &str = "bitext.tsv";
pub const GOLD_FILE: &str = "gold.tsv";

pub fn synth(run: &RunArgs, synth: &SynthArgs, config: &GeneratorConfig) -> Result<(), CliError> {
    let out = run.out();
    Resolved::new("synth").with(run).with(synth).write(&out)?;
    let (pairs, truth) = generate_pairs(config)?;
    write_text(&out.join(BITEXT_FILE), &format_bitext(&pairs))?;
    write_text(&out.join(GOLD_FILE), &truth.to_tsv())?;
    let mut metrics = Metrics::new();
    metrics
        .add("segments", pairs.len())
        .add("source_tokens", pairs.iter().map(|(s, _)| s.len()).sum::<usize>())
        .add("target_tokens", pairs.iter().map(|(_, t)| t.len()).sum::<usize>())
        .add("true_pairs", truth.pairs.len())
        .add("p_noise", format!("{:.6}", config.p_noise().max(0.0)));
    metrics.write(&out)
}
