use std::cmp::Ordering;

use crate::corpus::{Corpus, Vocabulary, WordId};
use crate::error::{Error, Result};
use crate::mixture::MixtureParams;

/// One graded lexicon entry `(source, target)`.
///
/// `score` holds the initial association score for generation 0 and the
/// log-likelihood ratio after every regrade. `links` is k and `cooc` is n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LexiconEntry {
    pub source: WordId,
    pub target: WordId,
    pub score: f64,
    pub links: u64,
    pub cooc: u64,
}

impl LexiconEntry {
    pub fn key(&self) -> (WordId, WordId) {
        (self.source, self.target)
    }
}

/// A graded translation lexicon. Entries are unique by `(source, target)`
/// and stored in id order, so storage order never depends on how the
/// lexicon was built.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    generation: usize,
    params: Option<MixtureParams>,
}

impl Lexicon {
    pub fn new(mut entries: Vec<LexiconEntry>) -> Result<Self> {
        entries.sort_by_key(LexiconEntry::key);
        if let Some(w) = entries.windows(2).find(|w| w[0].key() == w[1].key()) {
            return Err(Error::Config(format!(
                "duplicate lexicon entry ({}, {})",
                w[0].source.0, w[0].target.0
            )));
        }
        Ok(Lexicon {
            entries,
            generation: 0,
            params: None,
        })
    }

    pub fn with_state(mut self, generation: usize, params: Option<MixtureParams>) -> Self {
        self.generation = generation;
        self.params = params;
        self
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    #[cfg(test)]
    pub(crate) fn entries_mut(&mut self) -> &mut [LexiconEntry] {
        &mut self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of completed cleaning iterations that produced these scores.
    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn params(&self) -> Option<&MixtureParams> {
        self.params.as_ref()
    }

    pub fn is_regraded(&self) -> bool {
        self.generation > 0 && self.params.is_some()
    }

    pub fn get(&self, source: WordId, target: WordId) -> Option<&LexiconEntry> {
        self.entries
            .binary_search_by_key(&(source, target), LexiconEntry::key)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn contains(&self, source: WordId, target: WordId) -> bool {
        self.get(source, target).is_some()
    }

    pub fn keys(&self) -> impl Iterator<Item = (WordId, WordId)> + '_ {
        self.entries.iter().map(LexiconEntry::key)
    }

    /// Copy keeping only entries accepted by `keep`; generation and params
    /// carry over.
    pub fn filtered(&self, mut keep: impl FnMut(&LexiconEntry) -> bool) -> Lexicon {
        Lexicon {
            entries: self.entries.iter().filter(|e| keep(e)).copied().collect(),
            generation: self.generation,
            params: self.params.clone(),
        }
    }

    /// Entries by descending score, ties by (source word, target word).
    pub fn ranked<'a>(&'a self, source: &Vocabulary, target: &Vocabulary) -> Vec<&'a LexiconEntry> {
        let mut out: Vec<&LexiconEntry> = self.entries.iter().collect();
        out.sort_by(|a, b| rank_order(a, b, source, target));
        out
    }

    pub fn ranked_in<'a>(&'a self, corpus: &Corpus) -> Vec<&'a LexiconEntry> {
        self.ranked(corpus.source_vocab(), corpus.target_vocab())
    }

    /// Entry set with source and target exchanged, matching
    /// [`Corpus::transposed`].
    pub fn transposed(&self) -> Lexicon {
        let entries = self
            .entries
            .iter()
            .map(|e| LexiconEntry {
                source: e.target,
                target: e.source,
                ..*e
            })
            .collect();
        Lexicon::new(entries)
            .expect("transposition preserves uniqueness")
            .with_state(self.generation, self.params.clone())
    }
}

pub(crate) fn rank_order(
    a: &LexiconEntry,
    b: &LexiconEntry,
    source: &Vocabulary,
    target: &Vocabulary,
) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| source.word(a.source).cmp(source.word(b.source)))
        .then_with(|| target.word(a.target).cmp(target.word(b.target)))
}
