//! Co-occurrence counting and the initial graded lexicon.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::corpus::{Corpus, SegmentPair, WordId};
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, LexiconEntry};

/// Counts kept for one candidate pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairCounts {
    /// n: sum over segment pairs of min(count of v in S, count of w in T).
    pub cooc: u64,
    /// Number of segment pairs containing both words at least once.
    pub joint_segments: u64,
}

/// Co-occurrence statistics for every pair that co-occurs at least once.
#[derive(Clone, Debug, Default)]
pub struct CoocTable {
    pairs: FxHashMap<(WordId, WordId), PairCounts>,
    source_segments: Vec<u64>,
    target_segments: Vec<u64>,
    segments: u64,
}

impl CoocTable {
    pub fn get(&self, source: WordId, target: WordId) -> Option<PairCounts> {
        self.pairs.get(&(source, target)).copied()
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// P, the number of segment pairs counted.
    pub fn segments(&self) -> u64 {
        self.segments
    }

    /// Segment pairs whose source side contains `v`.
    pub fn source_occurrences(&self, v: WordId) -> u64 {
        self.source_segments.get(v.index()).copied().unwrap_or(0)
    }

    /// Segment pairs whose target side contains `w`.
    pub fn target_occurrences(&self, w: WordId) -> u64 {
        self.target_segments.get(w.index()).copied().unwrap_or(0)
    }

    /// Sum of n over every stored pair.
    pub fn total_cooc(&self) -> u64 {
        self.pairs.values().map(|c| c.cooc).sum()
    }

    /// Sum of joint-presence counts over every stored pair.
    pub fn total_joint_segments(&self) -> u64 {
        self.pairs.values().map(|c| c.joint_segments).sum()
    }

    /// Pairs in `(source, target)` id order.
    pub fn sorted_pairs(&self) -> Vec<((WordId, WordId), PairCounts)> {
        let mut out: Vec<_> = self.pairs.iter().map(|(&k, &v)| (k, v)).collect();
        out.sort_unstable_by_key(|(k, _)| *k);
        out
    }

    /// G² score of a stored pair.
    pub fn g2(&self, source: WordId, target: WordId) -> Result<f64> {
        let joint = self.get(source, target).map_or(0, |c| c.joint_segments);
        g2_score(
            joint,
            self.source_occurrences(source),
            self.target_occurrences(target),
            self.segments,
        )
    }

    fn merge(mut self, other: CoocTable, limit: Option<usize>) -> Result<CoocTable> {
        let (mut big, small) = if self.pairs.len() >= other.pairs.len() {
            (std::mem::take(&mut self), other)
        } else {
            (other, self)
        };
        for (k, c) in small.pairs {
            let e = big.pairs.entry(k).or_default();
            e.cooc += c.cooc;
            e.joint_segments += c.joint_segments;
        }
        add_into(&mut big.source_segments, &small.source_segments);
        add_into(&mut big.target_segments, &small.target_segments);
        big.segments += small.segments;
        check_limit(big.pairs.len(), limit)?;
        Ok(big)
    }
}

fn add_into(acc: &mut Vec<u64>, other: &[u64]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), 0);
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

fn check_limit(len: usize, limit: Option<usize>) -> Result<()> {
    match limit {
        Some(limit) if len > limit => Err(Error::TooManyPairs { limit }),
        _ => Ok(()),
    }
}

/// Distinct words of a token sequence with their multiplicities, id-sorted.
pub(crate) fn type_counts(tokens: &[WordId]) -> Vec<(WordId, u64)> {
    let mut sorted = tokens.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<(WordId, u64)> = Vec::with_capacity(sorted.len());
    for id in sorted {
        match out.last_mut() {
            Some((last, n)) if *last == id => *n += 1,
            _ => out.push((id, 1)),
        }
    }
    out
}

fn count_chunk(
    segments: &[SegmentPair],
    source_len: usize,
    target_len: usize,
    limit: Option<usize>,
) -> Result<CoocTable> {
    let mut table = CoocTable {
        pairs: FxHashMap::default(),
        source_segments: vec![0; source_len],
        target_segments: vec![0; target_len],
        segments: segments.len() as u64,
    };
    for seg in segments {
        let src = type_counts(&seg.source);
        let tgt = type_counts(&seg.target);
        for &(v, _) in &src {
            table.source_segments[v.index()] += 1;
        }
        for &(w, _) in &tgt {
            table.target_segments[w.index()] += 1;
        }
        for &(v, cv) in &src {
            for &(w, cw) in &tgt {
                let e = table.pairs.entry((v, w)).or_default();
                e.cooc += cv.min(cw);
                e.joint_segments += 1;
            }
        }
        check_limit(table.pairs.len(), limit)?;
    }
    Ok(table)
}

const COUNT_CHUNK: usize = 2048;

/// Counts co-occurrences over every segment pair.
///
/// Work is split across the current rayon pool; partial tables are summed,
/// so the result does not depend on the number of workers. `max_pairs`
/// bounds the number of distinct candidate pairs.
pub fn count_cooccurrences(corpus: &Corpus, max_pairs: Option<usize>) -> Result<CoocTable> {
    if corpus.is_empty() {
        return Err(Error::Config("cannot count co-occurrences in an empty corpus".into()));
    }
    let (ns, nt) = (corpus.source_vocab().len(), corpus.target_vocab().len());
    corpus
        .segments()
        .par_chunks(COUNT_CHUNK)
        .map(|chunk| count_chunk(chunk, ns, nt, max_pairs))
        .try_reduce(
            || CoocTable {
                source_segments: vec![0; ns],
                target_segments: vec![0; nt],
                ..Default::default()
            },
            |a, b| a.merge(b, max_pairs),
        )
}

/// G² log-likelihood-ratio statistic of the 2×2 presence table built from
/// a joint count, two marginal counts and the number of segment pairs.
pub fn g2_score(joint: u64, occ_source: u64, occ_target: u64, segments: u64) -> Result<f64> {
    let a = joint as i128;
    let b = occ_source as i128 - a;
    let c = occ_target as i128 - a;
    let d = segments as i128 - a - b - c;
    if b < 0 || c < 0 || d < 0 {
        return Err(Error::Contingency(format!(
            "cells a={a} b={b} c={c} d={d} from joint={joint} occ=({occ_source}, {occ_target}) P={segments}"
        )));
    }
    Ok(g2_from_cells(a as f64, b as f64, c as f64, d as f64))
}

/// G² over explicit cells; `b` and `c` enter symmetrically so swapping
/// the roles of the two words gives a bit-identical value.
fn g2_from_cells(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let total = a + b + c + d;
    if total == 0.0 {
        return 0.0;
    }
    let (r1, r2) = (a + b, c + d);
    let (c1, c2) = (a + c, b + d);
    let term = |o: f64, row: f64, col: f64| {
        if o == 0.0 {
            0.0
        } else {
            o * (o * total / (row * col)).ln()
        }
    };
    let g = 2.0 * ((term(a, r1, c1) + term(d, r2, c2)) + (term(b, r1, c2) + term(c, r2, c1)));
    g.max(0.0)
}

/// Options for [`build_initial_lexicon`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialLexiconOptions {
    pub min_score: f64,
    pub max_candidates_per_word: Option<usize>,
}

impl Default for InitialLexiconOptions {
    fn default() -> Self {
        InitialLexiconOptions {
            min_score: 0.0,
            max_candidates_per_word: None,
        }
    }
}

/// Every co-occurring pair whose G² reaches `min_score`, optionally keeping
/// only pairs that rank within the top `max_candidates_per_word` for both
/// their source word and their target word. Links start at zero.
pub fn build_initial_lexicon(
    table: &CoocTable,
    corpus: &Corpus,
    options: &InitialLexiconOptions,
) -> Result<Lexicon> {
    let scored: Vec<LexiconEntry> = table
        .sorted_pairs()
        .into_par_iter()
        .map(|((v, w), counts)| {
            Ok(LexiconEntry {
                source: v,
                target: w,
                score: table.g2(v, w)?,
                links: 0,
                cooc: counts.cooc,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries: Vec<LexiconEntry> = scored
        .into_iter()
        .filter(|e| e.score >= options.min_score)
        .collect();

    if let Some(limit) = options.max_candidates_per_word {
        let sv = corpus.source_vocab();
        let tv = corpus.target_vocab();
        let top_source = top_per_word(&entries, limit, |e| e.source, |a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| tv.word(a.target).cmp(tv.word(b.target)))
        });
        let top_target = top_per_word(&entries, limit, |e| e.target, |a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| sv.word(a.source).cmp(sv.word(b.source)))
        });
        entries.retain(|e| top_source.contains(&e.key()) && top_target.contains(&e.key()));
    }
    Lexicon::new(entries)
}

/// Counts co-occurrences and builds the initial lexicon in one step.
pub fn induce(corpus: &Corpus, options: &InitialLexiconOptions) -> Result<Lexicon> {
    let table = count_cooccurrences(corpus, None)?;
    build_initial_lexicon(&table, corpus, options)
}

fn top_per_word(
    entries: &[LexiconEntry],
    limit: usize,
    word: impl Fn(&LexiconEntry) -> WordId,
    order: impl Fn(&LexiconEntry, &LexiconEntry) -> std::cmp::Ordering,
) -> FxHashSet<(WordId, WordId)> {
    let mut groups: FxHashMap<WordId, Vec<&LexiconEntry>> = FxHashMap::default();
    for e in entries {
        groups.entry(word(e)).or_default().push(e);
    }
    let mut keep = FxHashSet::default();
    for mut group in groups.into_values() {
        group.sort_by(|a, b| order(a, b));
        keep.extend(group.into_iter().take(limit).map(LexiconEntry::key));
    }
    keep
}
