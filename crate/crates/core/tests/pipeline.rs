use std::fs;

use lexclean::assoc::{induce, InitialLexiconOptions};
use lexclean::corpus::{Corpus, Preprocessor};
use lexclean::eval::{
    apply_adjudication, sample_for_precision, summarize_precision, Adjudication, GoldLexicon, PrecisionSummary,
};
use lexclean::io::{clean_into, read_regraded_lexicon, read_report, RunDir, WordMapping, LEXICON_FILE, PARAMS_FILE};
use lexclean::lexicon::Lexicon;
use lexclean::pipeline::{apply_cutoff, clean, CleanConfig, CutoffSpec};
use lexclean::synth::{generate_bitext, GeneratorConfig, GroundTruth};

fn small() -> (Corpus, GroundTruth) {
    generate_bitext(&GeneratorConfig {
        segments: 4000,
        vocabulary: 200,
        ..GeneratorConfig::default()
    })
    .unwrap()
}

fn cleaned(corpus: &Corpus) -> Lexicon {
    let initial = induce(corpus, &InitialLexiconOptions::default()).unwrap();
    clean(corpus, &initial, &CleanConfig::default()).unwrap().lexicon
}

#[test]
fn cleaning_its_own_output_stops_after_one_iteration() {
    let (corpus, _) = small();
    let initial = induce(&corpus, &InitialLexiconOptions::default()).unwrap();
    let first = clean(&corpus, &initial, &CleanConfig::default()).unwrap();
    assert!(first.reached_fixed_point);
    let again = clean(&corpus, &first.lexicon, &CleanConfig::default()).unwrap();
    assert_eq!(again.reports.len(), 1);
    assert!(again.reached_fixed_point);
    assert!(again.lexicon.keys().eq(first.lexicon.keys()));
}

#[test]
fn report_means_match_totals() {
    let (corpus, _) = small();
    let initial = induce(&corpus, &InitialLexiconOptions::default()).unwrap();
    for r in clean(&corpus, &initial, &CleanConfig::default()).unwrap().reports {
        let back = r.mean_entry_log_likelihood * r.entries_in_lexicon as f64;
        assert!((back - r.log_data_prob).abs() <= 1e-9 * r.log_data_prob.abs());
    }
}

#[test]
fn stricter_cutoffs_nest() {
    let (corpus, _) = small();
    let lexicon = cleaned(&corpus);
    let params = lexicon.params().unwrap().clone();
    let mut cutoffs: Vec<CutoffSpec> = CutoffSpec::PRESETS.to_vec();
    cutoffs.extend([(1, 2), (4, 4), (2, 3)].map(|(k, n)| CutoffSpec::Plateau { k, n }));
    cutoffs.push(CutoffSpec::MinLogScore(0.0));
    for a in &cutoffs {
        for b in &cutoffs {
            if a.threshold(&params) >= b.threshold(&params) {
                let strict = apply_cutoff(&lexicon, *a).unwrap();
                let loose = apply_cutoff(&lexicon, *b).unwrap();
                assert!(strict.keys().all(|k| loose.contains(k.0, k.1)), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn run_directory_round_trips() {
    let (corpus, _) = small();
    let initial = induce(&corpus, &InitialLexiconOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let run = RunDir::new(dir.path());
    let outcome = clean_into(&corpus, &initial, &CleanConfig::default(), &run).unwrap();
    let last = run.iteration_dir(outcome.reports.len());
    let (mut sv, mut tv) = (corpus.source_vocab().clone(), corpus.target_vocab().clone());
    let restored = read_regraded_lexicon(
        &last.join(LEXICON_FILE),
        &last.join(PARAMS_FILE),
        &mut sv,
        &mut tv,
        WordMapping::Lookup,
    )
    .unwrap();
    assert!(restored.keys().eq(outcome.lexicon.keys()));
    for (a, b) in restored.entries().iter().zip(outcome.lexicon.entries()) {
        assert_eq!((a.links, a.cooc), (b.links, b.cooc));
        assert!((a.score - b.score).abs() < 1e-9);
    }
    let report = read_report(&run.report_path()).unwrap();
    assert_eq!(report.len(), outcome.reports.len());
}

fn run_files(threads: usize) -> Vec<(String, Vec<u8>)> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let dir = tempfile::tempdir().unwrap();
    pool.install(|| {
        let (corpus, _) = small();
        let initial = induce(&corpus, &InitialLexiconOptions::default()).unwrap();
        clean_into(&corpus, &initial, &CleanConfig::default(), &RunDir::new(dir.path())).unwrap();
    });
    let mut files = Vec::new();
    let mut stack = vec![dir.path().to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir.path()).unwrap().display().to_string();
                files.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn runs_are_byte_identical_across_worker_counts() {
    let one = run_files(1);
    assert!(one.iter().any(|(name, _)| name == "report.tsv"));
    assert_eq!(one, run_files(4));
}

#[test]
fn synthetic_truth_needs_no_human_verdicts() {
    let (corpus, truth) = small();
    let lexicon = apply_cutoff(&cleaned(&corpus), CutoffSpec::Plateau { k: 1, n: 1 }).unwrap();
    let gold = GoldLexicon::from_pairs(truth.pairs.iter().cloned(), &Preprocessor::default());
    let samples = sample_for_precision(&lexicon, &corpus, &gold, 5, 100, 42).unwrap();
    assert!(samples.iter().all(|s| s.entries.len() == 100));
    let mut samples = samples;
    let mut adjudication = Adjudication::default();
    for e in samples.iter().flat_map(|s| &s.entries) {
        if !gold.contains(&e.source, &e.target) {
            adjudication.insert(&e.source, &e.target, false);
        }
    }
    apply_adjudication(&mut samples, &adjudication);
    match summarize_precision(&samples) {
        PrecisionSummary::Complete { mean, .. } => assert!(mean > 90.0, "{mean}"),
        other => panic!("{other:?}"),
    }
}
