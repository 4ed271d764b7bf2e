//! Snapshot files: lexicon TSV, parameter JSON and the iteration report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Vocabulary, WordId};
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, LexiconEntry};
use crate::mixture::MixtureParams;
use crate::pipeline::{clean_with, CleanConfig, CleanOutcome, IterationReport, IterationState};

pub const LEXICON_HEADER: &str = "source_word\ttarget_word\tscore\tk\tn";
pub const REPORT_HEADER: &str =
    "iteration\tlambda_right\tlambda_wrong\tentries_in_lexicon\tlog_data_prob\tmean_entry_log_likelihood";

pub const LEXICON_FILE: &str = "lexicon.tsv";
pub const PARAMS_FILE: &str = "params.txt";
pub const REPORT_FILE: &str = "report.tsv";

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes `text` to `path`, creating missing parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Lexicon as TSV: descending score, ties by word strings, six fractional
/// digits.
pub fn format_lexicon(lexicon: &Lexicon, source: &Vocabulary, target: &Vocabulary) -> String {
    let mut out = String::with_capacity(32 * (lexicon.len() + 1));
    out.push_str(LEXICON_HEADER);
    out.push('\n');
    for e in lexicon.ranked(source, target) {
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}\t{}\t{}",
            source.word(e.source),
            target.word(e.target),
            e.score,
            e.links,
            e.cooc
        );
    }
    out
}

pub fn write_lexicon(path: &Path, lexicon: &Lexicon, source: &Vocabulary, target: &Vocabulary) -> Result<()> {
    write_text(path, &format_lexicon(lexicon, source, target))
}

/// How words read from a file are mapped to ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordMapping {
    /// Unknown words are an error.
    Lookup,
    /// Unknown words are added to the vocabulary.
    Intern,
}

fn map_word(vocab: &mut Vocabulary, word: &str, mapping: WordMapping) -> Result<WordId> {
    match mapping {
        WordMapping::Intern => Ok(vocab.intern(word)),
        WordMapping::Lookup => vocab.get(word).ok_or_else(|| Error::UnknownWord {
            side: vocab.side().as_str(),
            word: word.to_owned(),
        }),
    }
}

/// Reads a lexicon TSV. The result has generation 0 and no parameters;
/// use [`read_params`] and [`Lexicon::with_state`] to restore a regraded
/// snapshot.
pub fn parse_lexicon(
    text: &str,
    path: &Path,
    source: &mut Vocabulary,
    target: &mut Vocabulary,
    mapping: WordMapping,
) -> Result<Lexicon> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == LEXICON_HEADER => {}
        _ => return Err(Error::parse(path, 1, format!("expected header `{LEXICON_HEADER}`"))),
    }
    let mut entries = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let bad = |m: &str| Error::parse(path, i + 1, m.to_owned());
        if cols.len() != 5 {
            return Err(bad("expected 5 TAB-separated columns"));
        }
        let score: f64 = cols[2].parse().map_err(|_| bad("bad score"))?;
        let links: u64 = cols[3].parse().map_err(|_| bad("bad k"))?;
        let cooc: u64 = cols[4].parse().map_err(|_| bad("bad n"))?;
        if links > cooc {
            return Err(bad("k exceeds n"));
        }
        entries.push(LexiconEntry {
            source: map_word(source, cols[0], mapping)?,
            target: map_word(target, cols[1], mapping)?,
            score,
            links,
            cooc,
        });
    }
    Lexicon::new(entries).map_err(|e| Error::parse(path, 0, e.to_string()))
}

pub fn read_lexicon(
    path: &Path,
    source: &mut Vocabulary,
    target: &mut Vocabulary,
    mapping: WordMapping,
) -> Result<Lexicon> {
    parse_lexicon(&read_text(path)?, path, source, target, mapping)
}

/// Reads a lexicon snapshot together with the parameters that graded it.
/// Scores are recomputed from (k, n) so they are exact rather than rounded.
pub fn read_regraded_lexicon(
    lexicon_path: &Path,
    params_path: &Path,
    source: &mut Vocabulary,
    target: &mut Vocabulary,
    mapping: WordMapping,
) -> Result<Lexicon> {
    let params = read_params(params_path)?;
    let lexicon = read_lexicon(lexicon_path, source, target, mapping)?;
    Ok(regrade(&lexicon, params))
}

/// Scores every entry by log-likelihood ratio under `params`.
pub fn regrade(lexicon: &Lexicon, params: MixtureParams) -> Lexicon {
    let generation = lexicon.generation().max(1);
    let entries = lexicon
        .entries()
        .iter()
        .map(|e| LexiconEntry {
            score: params.score(e.links, e.cooc),
            ..*e
        })
        .collect();
    Lexicon::new(entries)
        .expect("regrading keeps keys unique")
        .with_state(generation, Some(params))
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    lambda_right: f64,
    lambda_wrong: f64,
    tau: f64,
    lambda: f64,
    #[serde(rename = "K")]
    total_links: u64,
    #[serde(rename = "N")]
    total_cooc: u64,
    /// `null` when not estimated.
    log_data_prob: Option<f64>,
    converged: bool,
    iterations: usize,
    #[serde(default)]
    saturated: bool,
}

/// Parameters as a flat JSON object.
pub fn format_params(params: &MixtureParams) -> String {
    let file = ParamsFile {
        lambda_right: params.lambda_right,
        lambda_wrong: params.lambda_wrong,
        tau: params.tau,
        lambda: params.lambda,
        total_links: params.total_links,
        total_cooc: params.total_cooc,
        log_data_prob: params.log_data_prob.is_finite().then_some(params.log_data_prob),
        converged: params.converged,
        iterations: params.iterations,
        saturated: params.saturated,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("flat struct serializes");
    s.push('\n');
    s
}

pub fn parse_params(text: &str, path: &Path) -> Result<MixtureParams> {
    let f: ParamsFile =
        serde_json::from_str(text).map_err(|e| Error::parse(path, e.line(), e.to_string()))?;
    Ok(MixtureParams {
        lambda_right: f.lambda_right,
        lambda_wrong: f.lambda_wrong,
        lambda: f.lambda,
        tau: f.tau,
        total_links: f.total_links,
        total_cooc: f.total_cooc,
        log_data_prob: f.log_data_prob.unwrap_or(f64::NAN),
        converged: f.converged,
        iterations: f.iterations,
        saturated: f.saturated,
    })
}

pub fn write_params(path: &Path, params: &MixtureParams) -> Result<()> {
    write_text(path, &format_params(params))
}

pub fn read_params(path: &Path) -> Result<MixtureParams> {
    parse_params(&read_text(path)?, path)
}

/// One row per iteration, full float precision.
pub fn format_report(reports: &[IterationReport]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.iteration,
            r.lambda_right,
            r.lambda_wrong,
            r.entries_in_lexicon,
            r.log_data_prob,
            r.mean_entry_log_likelihood
        );
    }
    out
}

pub fn parse_report(text: &str, path: &Path) -> Result<Vec<IterationReport>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == REPORT_HEADER => {}
        _ => return Err(Error::parse(path, 1, "unexpected report header")),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let bad = || Error::parse(path, i + 1, "malformed report row");
            let c: Vec<&str> = line.split('\t').collect();
            if c.len() != 6 {
                return Err(bad());
            }
            Ok(IterationReport {
                iteration: c[0].parse().map_err(|_| bad())?,
                lambda_right: c[1].parse().map_err(|_| bad())?,
                lambda_wrong: c[2].parse().map_err(|_| bad())?,
                entries_in_lexicon: c[3].parse().map_err(|_| bad())?,
                log_data_prob: c[4].parse().map_err(|_| bad())?,
                mean_entry_log_likelihood: c[5].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

pub fn read_report(path: &Path) -> Result<Vec<IterationReport>> {
    parse_report(&read_text(path)?, path)
}

pub fn write_report(path: &Path, reports: &[IterationReport]) -> Result<()> {
    write_text(path, &format_report(reports))
}

/// Layout of a cleaning run: `iter_<i>/lexicon.tsv`, `iter_<i>/params.txt`
/// and `report.tsv`.
#[derive(Clone, Debug)]
pub struct RunDir {
    root: PathBuf,
}

impl RunDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        RunDir { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn iteration_dir(&self, iteration: usize) -> PathBuf {
        self.root.join(format!("iter_{iteration}"))
    }

    pub fn report_path(&self) -> PathBuf {
        self.root.join(REPORT_FILE)
    }

    pub fn write_iteration(&self, state: &IterationState<'_>, corpus: &Corpus) -> Result<()> {
        let dir = self.iteration_dir(state.iteration);
        write_lexicon(
            &dir.join(LEXICON_FILE),
            state.lexicon,
            corpus.source_vocab(),
            corpus.target_vocab(),
        )?;
        write_params(&dir.join(PARAMS_FILE), state.params)
    }

    pub fn write_report(&self, reports: &[IterationReport]) -> Result<()> {
        write_report(&self.report_path(), reports)
    }
}

/// Cleans `initial`, snapshotting every iteration and the report into `run`.
pub fn clean_into(corpus: &Corpus, initial: &Lexicon, config: &CleanConfig, run: &RunDir) -> Result<CleanOutcome> {
    let outcome = clean_with(corpus, initial, config, |state| run.write_iteration(state, corpus))?;
    run.write_report(&outcome.reports)?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Side;

    fn vocabs() -> (Vocabulary, Vocabulary) {
        (Vocabulary::new(Side::Source), Vocabulary::new(Side::Target))
    }

    #[test]
    fn lexicon_file_is_sorted_and_round_trips() {
        let (mut s, mut t) = vocabs();
        let text = "source_word\ttarget_word\tscore\tk\tn\n\
                    b\ty\t1.500000\t1\t2\n\
                    a\tx\t3.250000\t2\t2\n\
                    a\ty\t1.500000\t0\t1\n";
        let lex = parse_lexicon(text, Path::new("t"), &mut s, &mut t, WordMapping::Intern).unwrap();
        let out = format_lexicon(&lex, &s, &t);
        assert_eq!(
            out,
            "source_word\ttarget_word\tscore\tk\tn\n\
             a\tx\t3.250000\t2\t2\n\
             a\ty\t1.500000\t0\t1\n\
             b\ty\t1.500000\t1\t2\n"
        );
        let again = parse_lexicon(&out, Path::new("t"), &mut s, &mut t, WordMapping::Lookup).unwrap();
        assert_eq!(again, lex);
    }

    #[test]
    fn lookup_rejects_unknown_words() {
        let (mut s, mut t) = vocabs();
        let text = format!("{LEXICON_HEADER}\na\tx\t1\t0\t1\n");
        assert!(matches!(
            parse_lexicon(&text, Path::new("t"), &mut s, &mut t, WordMapping::Lookup),
            Err(Error::UnknownWord { side: "source", .. })
        ));
    }

    #[test]
    fn malformed_rows_name_the_line() {
        let (mut s, mut t) = vocabs();
        let text = format!("{LEXICON_HEADER}\na\tx\t1\t0\t1\nb\ty\t1\t3\t2\n");
        assert!(matches!(
            parse_lexicon(&text, Path::new("t"), &mut s, &mut t, WordMapping::Intern),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_lexicon("nope\n", Path::new("t"), &mut s, &mut t, WordMapping::Intern).is_err());
    }

    #[test]
    fn params_round_trip_exactly() {
        let p = MixtureParams {
            lambda_right: 0.9751234567891234,
            lambda_wrong: 4.42e-6,
            lambda: 0.123,
            tau: 0.126,
            total_links: 12,
            total_cooc: 97,
            log_data_prob: -686651.123456789,
            converged: true,
            iterations: 212,
            saturated: false,
        };
        let text = format_params(&p);
        for key in ["lambda_right", "lambda_wrong", "tau", "lambda", "\"K\"", "\"N\"", "log_data_prob", "converged", "iterations"] {
            assert!(text.contains(key), "{key} missing from {text}");
        }
        assert_eq!(parse_params(&text, Path::new("p")).unwrap(), p);
    }

    #[test]
    fn report_round_trips_exactly() {
        let reports = vec![
            IterationReport {
                iteration: 1,
                lambda_right: 0.969,
                lambda_wrong: 0.00879,
                entries_in_lexicon: 100601,
                log_data_prob: -942206.0,
                mean_entry_log_likelihood: -942206.0 / 100601.0,
            },
            IterationReport {
                iteration: 2,
                lambda_right: 0.975,
                lambda_wrong: 0.000402,
                entries_in_lexicon: 88653,
                log_data_prob: -690935.0,
                mean_entry_log_likelihood: -690935.0 / 88653.0,
            },
        ];
        let text = format_report(&reports);
        assert!(text.starts_with(REPORT_HEADER));
        assert_eq!(parse_report(&text, Path::new("r")).unwrap(), reports);
    }
}
