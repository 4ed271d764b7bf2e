#![allow(dead_code)]

use std::collections::HashMap;

use lexclean::corpus::{Corpus, CorpusBuilder, Preprocessor};
use lexclean::lexicon::{Lexicon, LexiconEntry};
use lexclean::linker::link_segment;
use lexclean::mixture::{mixture_log_likelihood, Tallies};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

pub const SOURCE_WORDS: [&str; 5] = ["a", "b", "c", "d", "e"];
pub const TARGET_WORDS: [&str; 5] = ["v", "w", "x", "y", "z"];

/// A segment pair plus a score table over word pairs.
#[derive(Clone, Debug)]
pub struct LinkCase {
    pub source: Vec<&'static str>,
    pub target: Vec<&'static str>,
    pub scores: Vec<(&'static str, &'static str, f64)>,
}

/// Small vocabularies and integer scores, so repeated words and score ties
/// are common.
pub fn random_link_case(rng: &mut impl Rng) -> LinkCase {
    let s_len = rng.random_range(0..=6);
    let t_len = rng.random_range(0..=6);
    let source = (0..s_len).map(|_| *SOURCE_WORDS.choose(rng).unwrap()).collect();
    let target = (0..t_len).map(|_| *TARGET_WORDS.choose(rng).unwrap()).collect();
    let mut scores = Vec::new();
    for s in SOURCE_WORDS {
        for t in TARGET_WORDS {
            if rng.random_bool(0.6) {
                scores.push((s, t, rng.random_range(-3..=6) as f64));
            }
        }
    }
    LinkCase { source, target, scores }
}

/// Accepts every applicable token pair in (score desc, source word, target
/// word, source position, target position) order when both tokens are free.
pub fn oracle_links(case: &LinkCase) -> Vec<(usize, usize)> {
    let table: HashMap<(&str, &str), f64> = case.scores.iter().map(|&(s, t, x)| ((s, t), x)).collect();
    let mut candidates = Vec::new();
    for (i, s) in case.source.iter().enumerate() {
        for (j, t) in case.target.iter().enumerate() {
            if let Some(&score) = table.get(&(*s, *t)) {
                candidates.push((score, *s, *t, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.cmp(b.1))
            .then(a.2.cmp(b.2))
            .then(a.3.cmp(&b.3))
            .then(a.4.cmp(&b.4))
    });
    let (mut s_used, mut t_used) = (vec![false; case.source.len()], vec![false; case.target.len()]);
    let mut links = Vec::new();
    for (_, _, _, i, j) in candidates {
        if !s_used[i] && !t_used[j] {
            s_used[i] = true;
            t_used[j] = true;
            links.push((i, j));
        }
    }
    links
}

/// Corpus whose segment 0 is the case; `vocab_first` segments are pushed
/// before it to control id assignment.
pub fn build_case(case: &LinkCase, vocab_first: &[(Vec<&str>, Vec<&str>)]) -> (Corpus, Lexicon, usize) {
    let mut builder = CorpusBuilder::new(Preprocessor::default());
    for (s, t) in vocab_first {
        builder.push(s, t);
    }
    builder.push(&SOURCE_WORDS, &TARGET_WORDS);
    let index = builder.len();
    builder.push(&case.source, &case.target);
    let corpus = builder.finish();
    let entries = case
        .scores
        .iter()
        .map(|&(s, t, score)| LexiconEntry {
            source: corpus.source_vocab().get(s).unwrap(),
            target: corpus.target_vocab().get(t).unwrap(),
            score,
            links: 0,
            cooc: 0,
        })
        .collect();
    (corpus, Lexicon::new(entries).unwrap(), index)
}

/// Links of the library linker, as position pairs in link order.
pub fn library_links(case: &LinkCase) -> Vec<(usize, usize)> {
    let (corpus, lexicon, index) = build_case(case, &[]);
    link_segment(&corpus.segments()[index], &lexicon, &corpus)
        .links
        .iter()
        .map(|l| (l.source_pos, l.target_pos))
        .collect()
}

/// `entries` tallies with `n` co-occurrences each; a share `tau` of them
/// link at `lambda_right`, the rest at `lambda_wrong`.
pub fn simulate_tallies(
    rng: &mut impl Rng,
    entries: usize,
    n: u64,
    tau: f64,
    lambda_right: f64,
    lambda_wrong: f64,
) -> Tallies {
    let right = Binomial::new(n, lambda_right).unwrap();
    let wrong = Binomial::new(n, lambda_wrong).unwrap();
    let pairs: Vec<(u64, u64)> = (0..entries)
        .map(|_| {
            let k = if rng.random_bool(tau) {
                right.sample(rng)
            } else {
                wrong.sample(rng)
            };
            (k, n)
        })
        .collect();
    Tallies::from_pairs(pairs).unwrap()
}

/// Best objective over a `steps`×`steps` grid of interior rate pairs.
pub fn grid_best(tallies: &Tallies, steps: usize) -> (f64, f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 1..steps {
        for j in 1..steps {
            let (right, wrong) = (i as f64 / steps as f64, j as f64 / steps as f64);
            let ll = mixture_log_likelihood(tallies, right, wrong);
            if ll > best.0 {
                best = (ll, right, wrong);
            }
        }
    }
    best
}
