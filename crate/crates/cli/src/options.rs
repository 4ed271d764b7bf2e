//! Flag groups shared by the subcommands, and their merge with a TOML
//! config file. Every group doubles as a serde struct so the file uses the
//! flag names with underscores.

use std::path::PathBuf;

use clap::Args;
use lexclean::corpus::{PreprocessOptions, Stemmer, DEFAULT_MIN_STEM_LEN};
use lexclean::pipeline::CutoffSpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

macro_rules! merge_fields {
    ($into:expr, $from:expr; $($field:ident),+ $(,)?) => {
        $(if $into.$field.is_none() {
            $into.$field = $from.$field.clone();
        })+
    };
}

/// Keys a config file may contain.
pub const CONFIG_KEYS: &[&str] = &[
    "out",
    "workers",
    "corpus",
    "stoplist_src",
    "stoplist_tgt",
    "stemmer",
    "lowercase",
    "min_score",
    "max_candidates",
    "max_iter",
    "dump_links",
    "lexicon",
    "params",
    "plateau",
    "min_log_score",
    "gold",
    "seed",
    "samples",
    "sample_size",
    "adjudication",
    "max_lines",
    "segments",
    "vocabulary",
    "zipf_exponent",
    "min_length",
    "max_length",
    "p_collocate",
    "p_translate",
    "p_drop",
    "p_indirect",
];

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RunArgs {
    /// TOML file with defaults for any flag; flags win.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Worker threads for counting and linking [default: available cores].
    #[arg(long, env = "LEXCLEAN_WORKERS", value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl RunArgs {
    pub fn merge(&mut self, file: &RunArgs) {
        merge_fields!(self, file; out, workers);
    }

    pub fn resolve(&mut self) -> Result<(), CliError> {
        if self.out.is_none() {
            return Err(CliError::Usage("--out is required".into()));
        }
        match self.workers {
            Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
            Some(_) => {}
            None => {
                self.workers = Some(std::thread::available_parallelism().map_or(1, |n| n.get()));
            }
        }
        Ok(())
    }

    pub fn out(&self) -> PathBuf {
        self.out.clone().expect("resolved")
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusArgs {
    /// Bitext file: one segment pair per line, `source TAB target`.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PathBuf>,

    /// Source-side stop-list, one word per line.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stoplist_src: Option<PathBuf>,

    /// Target-side stop-list, one word per line.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stoplist_tgt: Option<PathBuf>,

    /// `identity`, or `suffix:SUF,SUF,...[:MIN_STEM_LEN]`.
    #[arg(long, value_name = "SPEC")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stemmer: Option<String>,

    /// Lowercase tokens before stop-listing and stemming.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lowercase: Option<bool>,
}

impl CorpusArgs {
    pub fn merge(&mut self, file: &CorpusArgs) {
        merge_fields!(self, file; corpus, stoplist_src, stoplist_tgt, stemmer, lowercase);
    }

    pub fn resolve(&mut self) -> Result<(), CliError> {
        if self.corpus.is_none() {
            return Err(CliError::Usage("--corpus is required".into()));
        }
        self.stemmer.get_or_insert_with(|| "identity".into());
        self.lowercase.get_or_insert(false);
        self.preprocess_options().map(drop)
    }

    pub fn corpus(&self) -> PathBuf {
        self.corpus.clone().expect("resolved")
    }

    pub fn preprocess_options(&self) -> Result<PreprocessOptions, CliError> {
        Ok(PreprocessOptions {
            source_stoplist: self.stoplist_src.clone(),
            target_stoplist: self.stoplist_tgt.clone(),
            stemmer: parse_stemmer(self.stemmer.as_deref().unwrap_or("identity"))?,
            lowercase: self.lowercase.unwrap_or(false),
        })
    }
}

pub fn parse_stemmer(spec: &str) -> Result<Stemmer, CliError> {
    if spec == "identity" {
        return Ok(Stemmer::Identity);
    }
    let bad = || CliError::Usage(format!("bad stemmer `{spec}`; expected `identity` or `suffix:SUF,...[:MIN]`"));
    let rest = spec.strip_prefix("suffix:").ok_or_else(bad)?;
    let (list, min) = match rest.split_once(':') {
        Some((list, min)) => (list, min.parse::<usize>().map_err(|_| bad())?),
        None => (rest, DEFAULT_MIN_STEM_LEN),
    };
    let suffixes: Vec<&str> = list.split(',').filter(|s| !s.is_empty()).collect();
    if suffixes.is_empty() {
        return Err(bad());
    }
    Ok(Stemmer::suffixes(suffixes, min))
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct InduceArgs {
    /// Smallest G² score kept in the initial lexicon.
    #[arg(long, value_name = "SCORE", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_score: Option<f64>,

    /// Keep a pair only if it ranks in the top N for both of its words.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_candidates: Option<usize>,
}

impl InduceArgs {
    pub fn merge(&mut self, file: &InduceArgs) {
        merge_fields!(self, file; min_score, max_candidates);
    }

    pub fn resolve(&mut self) -> Result<(), CliError> {
        let score = *self.min_score.get_or_insert(0.0);
        if score.is_nan() {
            return Err(CliError::Usage("--min-score must be a number".into()));
        }
        if self.max_candidates == Some(0) {
            return Err(CliError::Usage("--max-candidates must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CleanArgs {
    /// Initial lexicon TSV to clean instead of inducing one.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,

    /// Upper bound on cleaning iterations.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,

    /// Also write each iteration's links as `iter_<i>/links.tsv`.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump_links: Option<bool>,
}

impl CleanArgs {
    pub fn merge(&mut self, file: &CleanArgs) {
        merge_fields!(self, file; lexicon, max_iter, dump_links);
    }

    pub fn resolve(&mut self, default_max_iter: usize) -> Result<(), CliError> {
        if *self.max_iter.get_or_insert(default_max_iter) == 0 {
            return Err(CliError::Usage("--max-iter must be at least 1".into()));
        }
        self.dump_links.get_or_insert(false);
        Ok(())
    }
}

/// A lexicon snapshot and, optionally, the parameters that graded it.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SnapshotArgs {
    /// Lexicon TSV.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,

    /// Parameter file [default: params.txt next to the lexicon, if present].
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<PathBuf>,
}

impl SnapshotArgs {
    pub fn merge(&mut self, file: &SnapshotArgs) {
        merge_fields!(self, file; lexicon, params);
    }

    pub fn resolve(&mut self) -> Result<(), CliError> {
        let lexicon = self
            .lexicon
            .clone()
            .ok_or_else(|| CliError::Usage("--lexicon is required".into()))?;
        if self.params.is_none() {
            let sibling = lexicon.with_file_name(lexclean::io::PARAMS_FILE);
            if sibling.is_file() {
                self.params = Some(sibling);
            }
        }
        Ok(())
    }

    pub fn lexicon(&self) -> PathBuf {
        self.lexicon.clone().expect("resolved")
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CutoffArgs {
    /// Keep entries scoring at least as well as the k/n plateau.
    #[arg(long, value_name = "K/N", value_parser = ["1/1", "2/2", "3/3"], conflicts_with = "min_log_score")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plateau: Option<String>,

    /// Keep entries whose log-likelihood ratio is at least this.
    #[arg(long, value_name = "SCORE", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_log_score: Option<f64>,
}

impl CutoffArgs {
    /// The flags' choice of cutoff replaces the file's as a whole.
    pub fn merge(&mut self, file: &CutoffArgs) {
        if self.plateau.is_none() && self.min_log_score.is_none() {
            self.plateau = file.plateau.clone();
            self.min_log_score = file.min_log_score;
        }
    }

    pub fn spec(&self) -> Result<Option<CutoffSpec>, CliError> {
        match (&self.plateau, self.min_log_score) {
            (Some(_), Some(_)) => Err(CliError::Usage(
                "--plateau and --min-log-score are mutually exclusive".into(),
            )),
            (Some(p), None) => {
                let spec: CutoffSpec = p.parse().map_err(|e: lexclean::Error| CliError::Usage(e.to_string()))?;
                if !CutoffSpec::PRESETS.contains(&spec) {
                    return Err(CliError::Usage(format!("--plateau must be 1/1, 2/2 or 3/3, not `{p}`")));
                }
                Ok(Some(spec))
            }
            (None, Some(t)) if t.is_nan() => Err(CliError::Usage("--min-log-score must be a number".into())),
            (None, Some(t)) => Ok(Some(CutoffSpec::MinLogScore(t))),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalArgs {
    /// Reference lexicon TSV, `source TAB target`.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gold: Option<PathBuf>,

    /// Seed for precision sampling.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Number of precision samples.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    /// Entries per precision sample, drawn with replacement.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,

    /// Filled-in adjudication TSV from an earlier run.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjudication: Option<PathBuf>,

    /// Concordance lines per entry awaiting adjudication.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_lines: Option<usize>,
}

impl EvalArgs {
    pub fn merge(&mut self, file: &EvalArgs) {
        merge_fields!(self, file; gold, seed, samples, sample_size, adjudication, max_lines);
    }

    pub fn resolve(&mut self) -> Result<(), CliError> {
        self.seed.get_or_insert(42);
        self.max_lines.get_or_insert(5);
        if *self.samples.get_or_insert(5) == 0 || *self.sample_size.get_or_insert(100) == 0 {
            return Err(CliError::Usage("--samples and --sample-size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ConcordArgs {
    /// Entry to look up; may be repeated.
    #[arg(long, num_args = 2, value_names = ["SOURCE", "TARGET"], action = clap::ArgAction::Append)]
    #[serde(skip)]
    pub entry: Vec<String>,

    /// Look up every entry of this lexicon TSV.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,

    /// Excerpts per entry.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_lines: Option<usize>,
}

impl ConcordArgs {
    pub fn merge(&mut self, file: &ConcordArgs) {
        merge_fields!(self, file; lexicon, max_lines);
    }

    pub fn resolve(&mut self) -> Result<(), CliError> {
        if self.entry.is_empty() && self.lexicon.is_none() {
            return Err(CliError::Usage("give --entry SOURCE TARGET or --lexicon".into()));
        }
        self.max_lines.get_or_insert(10);
        Ok(())
    }

    pub fn entries(&self) -> Vec<(String, String)> {
        self.entry
            .chunks(2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect()
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthArgs {
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Segment pairs to generate.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segments: Option<usize>,
    /// Word types per side.
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vocabulary: Option<usize>,
    #[arg(long, value_name = "S")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zipf_exponent: Option<f64>,
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_length: Option<usize>,
    #[arg(long, value_name = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_length: Option<usize>,
    #[arg(long, value_name = "P")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_collocate: Option<f64>,
    #[arg(long, value_name = "P")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_translate: Option<f64>,
    #[arg(long, value_name = "P")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_drop: Option<f64>,
    #[arg(long, value_name = "P")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_indirect: Option<f64>,
}

impl SynthArgs {
    pub fn merge(&mut self, file: &SynthArgs) {
        merge_fields!(self, file; seed, segments, vocabulary, zipf_exponent, min_length, max_length,
            p_collocate, p_translate, p_drop, p_indirect);
    }

    /// Fills every unset field from the generator defaults.
    pub fn resolve(&mut self) -> lexclean::synth::GeneratorConfig {
        let d = lexclean::synth::GeneratorConfig::default();
        lexclean::synth::GeneratorConfig {
            segments: *self.segments.get_or_insert(d.segments),
            vocabulary: *self.vocabulary.get_or_insert(d.vocabulary),
            zipf_exponent: *self.zipf_exponent.get_or_insert(d.zipf_exponent),
            min_length: *self.min_length.get_or_insert(d.min_length),
            max_length: *self.max_length.get_or_insert(d.max_length),
            p_collocate: *self.p_collocate.get_or_insert(d.p_collocate),
            p_translate: *self.p_translate.get_or_insert(d.p_translate),
            p_drop: *self.p_drop.get_or_insert(d.p_drop),
            p_indirect: *self.p_indirect.get_or_insert(d.p_indirect),
            seed: *self.seed.get_or_insert(d.seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stemmer_specs() {
        assert_eq!(parse_stemmer("identity").unwrap(), Stemmer::Identity);
        assert_eq!(
            parse_stemmer("suffix:s,es").unwrap(),
            Stemmer::suffixes(["s", "es"], DEFAULT_MIN_STEM_LEN)
        );
        assert_eq!(parse_stemmer("suffix:ing:4").unwrap(), Stemmer::suffixes(["ing"], 4));
        for bad in ["porter", "suffix:", "suffix:s:x"] {
            assert!(matches!(parse_stemmer(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn flag_cutoff_replaces_file_cutoff() {
        let mut flags = CutoffArgs {
            plateau: None,
            min_log_score: Some(2.5),
        };
        flags.merge(&CutoffArgs {
            plateau: Some("3/3".into()),
            min_log_score: None,
        });
        assert_eq!(flags.spec().unwrap(), Some(CutoffSpec::MinLogScore(2.5)));
    }
}
