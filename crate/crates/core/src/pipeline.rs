//! The iterative cleaning loop and plateau cutoffs.
//!
//! Each iteration links the corpus against the current lexicon, discards
//! entries that were never linked, re-estimates the link model on the
//! survivors and regrades them by log-likelihood ratio. Later iterations
//! link with the regraded scores.

use std::fmt;
use std::str::FromStr;

use crate::assoc::{build_initial_lexicon, count_cooccurrences, InitialLexiconOptions};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, LexiconEntry};
use crate::linker::{LinkTally, Linker};
use crate::mixture::{estimate_params_with, EstimatorConfig, MixtureParams, Tallies};

#[derive(Clone, Debug, PartialEq)]
pub struct CleanConfig {
    pub max_iterations: usize,
    /// Largest change in either rate that still counts as stable.
    pub param_tolerance: f64,
    /// Also require an unchanged entry set before declaring a fixed point.
    pub entry_set_stability: bool,
    pub estimator: EstimatorConfig,
}

impl Default for CleanConfig {
    fn default() -> Self {
        CleanConfig {
            max_iterations: 10,
            param_tolerance: 1e-6,
            entry_set_stability: true,
            estimator: EstimatorConfig::default(),
        }
    }
}

/// Diagnostics recorded after each cleaning iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationReport {
    pub iteration: usize,
    pub lambda_right: f64,
    pub lambda_wrong: f64,
    pub entries_in_lexicon: usize,
    pub log_data_prob: f64,
    pub mean_entry_log_likelihood: f64,
}

impl IterationReport {
    fn new(iteration: usize, params: &MixtureParams, entries: usize) -> Self {
        IterationReport {
            iteration,
            lambda_right: params.lambda_right,
            lambda_wrong: params.lambda_wrong,
            entries_in_lexicon: entries,
            log_data_prob: params.log_data_prob,
            mean_entry_log_likelihood: params.log_data_prob / entries as f64,
        }
    }
}

/// What one iteration saw, handed to observers of [`clean_with`].
pub struct IterationState<'a> {
    pub iteration: usize,
    /// The lexicon the corpus was linked against.
    pub linked: &'a Lexicon,
    pub tally: &'a LinkTally,
    /// Survivors, regraded.
    pub lexicon: &'a Lexicon,
    pub params: &'a MixtureParams,
    pub report: &'a IterationReport,
}

#[derive(Clone, Debug)]
pub struct CleanOutcome {
    pub lexicon: Lexicon,
    pub reports: Vec<IterationReport>,
    pub reached_fixed_point: bool,
}

/// Runs the cleaning loop to a fixed point or `max_iterations`.
pub fn clean(corpus: &Corpus, initial: &Lexicon, config: &CleanConfig) -> Result<CleanOutcome> {
    clean_with(corpus, initial, config, |_| Ok(()))
}

/// [`clean`], calling `observe` after every iteration (for snapshots).
pub fn clean_with(
    corpus: &Corpus,
    initial: &Lexicon,
    config: &CleanConfig,
    mut observe: impl FnMut(&IterationState<'_>) -> Result<()>,
) -> Result<CleanOutcome> {
    if initial.is_empty() {
        return Err(Error::Pipeline {
            iteration: 0,
            message: "initial lexicon is empty".into(),
        });
    }
    let mut current = initial.clone();
    let mut reports = Vec::new();
    let mut reached_fixed_point = false;

    for iteration in 1..=config.max_iterations {
        let tally = Linker::new(&current, corpus).link_corpus(corpus);
        let survivors: Vec<LexiconEntry> = current
            .entries()
            .iter()
            .zip(&tally.links)
            .filter(|(_, &k)| k > 0)
            .map(|(e, &k)| LexiconEntry { links: k, ..*e })
            .collect();
        if survivors.is_empty() {
            return Err(Error::Pipeline {
                iteration,
                message: "no entry ever linked".into(),
            });
        }
        let in_context = |e: Error| Error::Pipeline {
            iteration,
            message: e.to_string(),
        };
        let tallies = Tallies::from_pairs(survivors.iter().map(|e| (e.links, e.cooc))).map_err(in_context)?;
        let params = estimate_params_with(&tallies, &config.estimator).map_err(in_context)?;
        let regraded: Vec<LexiconEntry> = survivors
            .into_iter()
            .map(|e| LexiconEntry {
                score: params.score(e.links, e.cooc),
                ..e
            })
            .collect();
        let next = Lexicon::new(regraded)?.with_state(current.generation() + 1, Some(params.clone()));

        let report = IterationReport::new(iteration, &params, next.len());
        observe(&IterationState {
            iteration,
            linked: &current,
            tally: &tally,
            lexicon: &next,
            params: &params,
            report: &report,
        })?;
        reports.push(report);

        let same_entries = !config.entry_set_stability || current.keys().eq(next.keys());
        let params_stable = current.params().is_some_and(|prev| {
            (prev.lambda_right - params.lambda_right).abs() < config.param_tolerance
                && (prev.lambda_wrong - params.lambda_wrong).abs() < config.param_tolerance
        });
        current = next;
        if same_entries && params_stable {
            reached_fixed_point = true;
            break;
        }
    }

    Ok(CleanOutcome {
        lexicon: current,
        reports,
        reached_fixed_point,
    })
}

/// Selects a lexicon snapshot: everything at or above a plateau's score,
/// or at or above a raw log-likelihood ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CutoffSpec {
    /// Entries linked `k` times out of `n` co-occurrences.
    Plateau { k: u64, n: u64 },
    MinLogScore(f64),
}

impl CutoffSpec {
    pub const PRESETS: [CutoffSpec; 3] = [
        CutoffSpec::Plateau { k: 1, n: 1 },
        CutoffSpec::Plateau { k: 2, n: 2 },
        CutoffSpec::Plateau { k: 3, n: 3 },
    ];

    /// Lowest score kept under `params`.
    pub fn threshold(&self, params: &MixtureParams) -> f64 {
        match *self {
            CutoffSpec::Plateau { k, n } => params.score(k, n),
            CutoffSpec::MinLogScore(t) => t,
        }
    }
}

impl fmt::Display for CutoffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutoffSpec::Plateau { k, n } => write!(f, "{k}/{n}"),
            CutoffSpec::MinLogScore(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for CutoffSpec {
    type Err = Error;

    /// `k/n` for a plateau, anything else parses as a minimum score.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((k, n)) = s.split_once('/') {
            let parse = |x: &str| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("bad plateau `{s}`")))
            };
            let (k, n) = (parse(k)?, parse(n)?);
            if k > n || n == 0 {
                return Err(Error::Config(format!("plateau `{s}` needs 0 <= k <= n, n > 0")));
            }
            return Ok(CutoffSpec::Plateau { k, n });
        }
        s.parse::<f64>()
            .map(CutoffSpec::MinLogScore)
            .map_err(|_| Error::Config(format!("bad cutoff `{s}`")))
    }
}

/// Filtered copy of a regraded lexicon.
pub fn apply_cutoff(lexicon: &Lexicon, cutoff: CutoffSpec) -> Result<Lexicon> {
    let params = match lexicon.params() {
        Some(p) if lexicon.is_regraded() => p,
        _ => {
            return Err(Error::NotRegraded(
                "cutoffs need log-likelihood scores from at least one cleaning iteration".into(),
            ))
        }
    };
    let threshold = cutoff.threshold(params);
    if matches!(cutoff, CutoffSpec::Plateau { .. }) && threshold <= 0.0 {
        log::warn!("plateau {cutoff} scores {threshold} under the current rates; the cutoff keeps entries that are not favoured");
    }
    Ok(lexicon.filtered(|e| e.score >= threshold))
}

/// The one-pass greedy method: score every co-occurring pair by G² and keep
/// those scoring strictly above `threshold`.
pub fn greedy_baseline(corpus: &Corpus, threshold: f64) -> Result<Lexicon> {
    let table = count_cooccurrences(corpus, None)?;
    let all = build_initial_lexicon(
        &table,
        corpus,
        &InitialLexiconOptions {
            min_score: f64::NEG_INFINITY,
            max_candidates_per_word: None,
        },
    )?;
    Ok(all.filtered(|e| e.score > threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linker::tests::{corpus_of, lexicon_of};

    fn initial(corpus: &Corpus) -> Lexicon {
        let t = count_cooccurrences(corpus, None).unwrap();
        build_initial_lexicon(&t, corpus, &InitialLexiconOptions::default()).unwrap()
    }

    #[test]
    fn degenerate_corpus_reaches_fixed_point_on_second_iteration() {
        let c = corpus_of(&[("a", "x"); 10]);
        let out = clean(&c, &initial(&c), &CleanConfig::default()).unwrap();
        assert!(out.reached_fixed_point);
        assert_eq!(out.reports.len(), 2);
        let e = out.lexicon.entries()[0];
        assert_eq!((e.links, e.cooc), (10, 10));
        assert!(e.score > 100.0);
        assert!(out.reports[0].lambda_right > 0.999);
        assert_eq!(out.lexicon.generation(), 2);
    }

    #[test]
    fn never_linked_entries_are_discarded() {
        // (b, x) co-occurs with x only where (a, x) takes it.
        let c = corpus_of(&[("a b", "x"), ("a", "x"), ("a b", "x y"), ("b", "y")]);
        let lex = initial(&c);
        let (b, x) = (c.source_vocab().get("b").unwrap(), c.target_vocab().get("x").unwrap());
        assert!(lex.contains(b, x));
        let out = clean(&c, &lex, &CleanConfig::default()).unwrap();
        assert!(!out.lexicon.contains(b, x));
    }

    #[test]
    fn empty_after_discard_is_an_error() {
        let c = corpus_of(&[("a", "x"), ("b", "y")]);
        let lex = lexicon_of(&c, &[("a", "y", 1.0)]);
        assert!(matches!(
            clean(&c, &lex, &CleanConfig::default()),
            Err(Error::Pipeline { iteration: 1, .. })
        ));
    }

    #[test]
    fn mean_entry_log_likelihood_matches_total() {
        let c = corpus_of(&[("a b", "x y"), ("a", "x"), ("b c", "y"), ("c", "z"), ("a c", "x z")]);
        let out = clean(&c, &initial(&c), &CleanConfig::default()).unwrap();
        for r in &out.reports {
            let back = r.mean_entry_log_likelihood * r.entries_in_lexicon as f64;
            assert!((back - r.log_data_prob).abs() <= 1e-9 * r.log_data_prob.abs());
        }
    }

    #[test]
    fn cutoff_requires_regrading() {
        let c = corpus_of(&[("a", "x")]);
        assert!(matches!(
            apply_cutoff(&initial(&c), CutoffSpec::Plateau { k: 1, n: 1 }),
            Err(Error::NotRegraded(_))
        ));
    }

    #[test]
    fn plateau_cutoff_example() {
        let c = corpus_of(&[("a b c", "x y z")]);
        let params = MixtureParams::from_rates(0.9, 0.1, 6, 8);
        let mut lex = lexicon_of(&c, &[("a", "x", 0.0), ("b", "y", 0.0), ("c", "z", 0.0)]);
        for (e, (k, n)) in lex.entries_mut().iter_mut().zip([(3, 3), (2, 2), (1, 2)]) {
            e.links = k;
            e.cooc = n;
            e.score = params.score(k, n);
        }
        let lex = lex.with_state(1, Some(params));
        let kept = apply_cutoff(&lex, CutoffSpec::Plateau { k: 2, n: 2 }).unwrap();
        let kn: Vec<_> = kept.entries().iter().map(|e| (e.links, e.cooc)).collect();
        assert_eq!(kn, vec![(3, 3), (2, 2)]);
        let one = apply_cutoff(&lex, CutoffSpec::Plateau { k: 1, n: 1 }).unwrap();
        assert!(one.entries().iter().all(|e| e.score >= (0.9f64 / 0.1).ln()));
        assert_eq!(one.len(), 2);
        let all = apply_cutoff(&lex, CutoffSpec::MinLogScore(f64::NEG_INFINITY)).unwrap();
        assert_eq!(all.entries(), lex.entries());
    }

    #[test]
    fn cutoff_spec_parsing() {
        assert_eq!("2/2".parse::<CutoffSpec>().unwrap(), CutoffSpec::Plateau { k: 2, n: 2 });
        assert_eq!("-1.5".parse::<CutoffSpec>().unwrap(), CutoffSpec::MinLogScore(-1.5));
        assert!("3/2".parse::<CutoffSpec>().is_err());
        assert!("x/2".parse::<CutoffSpec>().is_err());
    }

    #[test]
    fn baseline_thresholds() {
        let c = corpus_of(&[("a b", "x y"), ("a", "x"), ("b", "y")]);
        let base = greedy_baseline(&c, -1.0).unwrap();
        assert_eq!(base, initial(&c));
        assert!(greedy_baseline(&c, f64::INFINITY).unwrap().is_empty());
    }
}
