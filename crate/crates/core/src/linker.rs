//! Competitive linking.
//!
//! Within one segment pair the highest-scoring applicable lexicon entry wins,
//! one token of each of its words is consumed, and the competition repeats
//! until no entry applies. Equal scores go to the lexicographically smaller
//! `(source word, target word)`; among repeated tokens of the same word the
//! leftmost free position is used.

use std::cmp::Ordering;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::assoc::type_counts;
use crate::corpus::{Corpus, SegmentPair, WordId};
use crate::lexicon::Lexicon;

/// One link between token positions of a segment pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub source_pos: usize,
    pub target_pos: usize,
    /// Index of the linked entry in [`Lexicon::entries`].
    pub entry: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkAssignment {
    pub segment: usize,
    /// Links in the order they were made.
    pub links: Vec<Link>,
}

/// Link counts accumulated over a corpus, aligned with the lexicon's entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkTally {
    pub links: Vec<u64>,
    /// K
    pub total_links: u64,
    /// N, summed over current lexicon entries only.
    pub total_cooc: u64,
}

#[derive(Clone, Copy)]
struct Candidate {
    score: f64,
    source_rank: u32,
    target_rank: u32,
    source: WordId,
    target: WordId,
    entry: usize,
}

fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.source_rank.cmp(&b.source_rank))
        .then(a.target_rank.cmp(&b.target_rank))
}

/// A lexicon indexed for linking against one corpus.
pub struct Linker<'a> {
    lexicon: &'a Lexicon,
    index: FxHashMap<(WordId, WordId), usize>,
    source_ranks: Vec<u32>,
    target_ranks: Vec<u32>,
}

impl<'a> Linker<'a> {
    pub fn new(lexicon: &'a Lexicon, corpus: &Corpus) -> Self {
        let index = lexicon
            .entries()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.key(), i))
            .collect();
        Linker {
            lexicon,
            index,
            source_ranks: corpus.source_vocab().lexical_ranks(),
            target_ranks: corpus.target_vocab().lexical_ranks(),
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        self.lexicon
    }

    /// Runs the greedy competition on one segment pair.
    pub fn link_segment(&self, pair: &SegmentPair) -> LinkAssignment {
        let src = type_counts(&pair.source);
        let tgt = type_counts(&pair.target);
        let entries = self.lexicon.entries();

        let mut candidates = Vec::new();
        for &(v, _) in &src {
            for &(w, _) in &tgt {
                if let Some(&entry) = self.index.get(&(v, w)) {
                    candidates.push(Candidate {
                        score: entries[entry].score,
                        source_rank: self.source_ranks[v.index()],
                        target_rank: self.target_ranks[w.index()],
                        source: v,
                        target: w,
                        entry,
                    });
                }
            }
        }
        // Scores are fixed within a segment, so the repeated "pick the best
        // applicable entry" loop is a single sweep over the sorted candidates:
        // the current best stays best until one of its words runs out.
        candidates.sort_unstable_by(candidate_order);

        let mut source_used = vec![false; pair.source.len()];
        let mut target_used = vec![false; pair.target.len()];
        let mut links = Vec::new();
        for c in &candidates {
            loop {
                let s = (0..pair.source.len()).find(|&i| !source_used[i] && pair.source[i] == c.source);
                let t = (0..pair.target.len()).find(|&j| !target_used[j] && pair.target[j] == c.target);
                match (s, t) {
                    (Some(i), Some(j)) => {
                        source_used[i] = true;
                        target_used[j] = true;
                        links.push(Link {
                            source_pos: i,
                            target_pos: j,
                            entry: c.entry,
                        });
                    }
                    _ => break,
                }
            }
        }
        LinkAssignment {
            segment: pair.index,
            links,
        }
    }

    /// Links every segment pair and tallies links per entry.
    ///
    /// Segments are processed on the current rayon pool; per-worker tallies
    /// are summed so the result is independent of the partitioning.
    pub fn link_corpus(&self, corpus: &Corpus) -> LinkTally {
        let n = self.lexicon.len();
        let links = corpus
            .segments()
            .par_chunks(1024)
            .map(|chunk| {
                let mut counts = vec![0u64; n];
                for seg in chunk {
                    for link in self.link_segment(seg).links {
                        counts[link.entry] += 1;
                    }
                }
                counts
            })
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        let total_links = links.iter().sum();
        let total_cooc = self.lexicon.entries().iter().map(|e| e.cooc).sum();
        LinkTally {
            links,
            total_links,
            total_cooc,
        }
    }

    /// Every segment's assignment, in segment order.
    pub fn assignments(&self, corpus: &Corpus) -> Vec<LinkAssignment> {
        corpus
            .segments()
            .par_iter()
            .map(|seg| self.link_segment(seg))
            .collect()
    }
}

/// Links one segment pair against `lexicon`.
pub fn link_segment(pair: &SegmentPair, lexicon: &Lexicon, corpus: &Corpus) -> LinkAssignment {
    Linker::new(lexicon, corpus).link_segment(pair)
}

/// Links the whole corpus against `lexicon`.
pub fn link_corpus(corpus: &Corpus, lexicon: &Lexicon) -> LinkTally {
    Linker::new(lexicon, corpus).link_corpus(corpus)
}

/// Link dump rows `(segment, source word, target word)`, ordered by segment
/// then source token position.
pub fn link_dump_rows(corpus: &Corpus, lexicon: &Lexicon) -> Vec<(usize, String, String)> {
    let linker = Linker::new(lexicon, corpus);
    let mut rows = Vec::new();
    for assignment in linker.assignments(corpus) {
        let mut links = assignment.links;
        links.sort_by_key(|l| l.source_pos);
        for l in links {
            let e = &lexicon.entries()[l.entry];
            rows.push((
                assignment.segment,
                corpus.source_vocab().word(e.source).to_owned(),
                corpus.target_vocab().word(e.target).to_owned(),
            ));
        }
    }
    rows
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::corpus::{CorpusBuilder, Preprocessor};
    use crate::lexicon::LexiconEntry;

    pub(crate) fn corpus_of(pairs: &[(&str, &str)]) -> Corpus {
        let mut b = CorpusBuilder::new(Preprocessor::default());
        for (s, t) in pairs {
            let s: Vec<&str> = s.split_whitespace().collect();
            let t: Vec<&str> = t.split_whitespace().collect();
            b.push(&s, &t);
        }
        b.finish()
    }

    pub(crate) fn lexicon_of(corpus: &Corpus, scored: &[(&str, &str, f64)]) -> Lexicon {
        let entries = scored
            .iter()
            .map(|&(v, w, score)| LexiconEntry {
                source: corpus.source_vocab().get(v).unwrap(),
                target: corpus.target_vocab().get(w).unwrap(),
                score,
                links: 0,
                cooc: 0,
            })
            .collect();
        Lexicon::new(entries).unwrap()
    }

    fn linked_words(corpus: &Corpus, lex: &Lexicon, a: &LinkAssignment) -> Vec<(String, String)> {
        let mut out: Vec<_> = a
            .links
            .iter()
            .map(|l| {
                let e = &lex.entries()[l.entry];
                (
                    corpus.source_vocab().word(e.source).to_owned(),
                    corpus.target_vocab().word(e.target).to_owned(),
                )
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn best_entry_wins_then_remaining_pair_links() {
        let c = corpus_of(&[("a b", "x y")]);
        let lex = lexicon_of(&c, &[("a", "x", 5.0), ("a", "y", 4.0), ("b", "x", 3.0), ("b", "y", 1.0)]);
        let got = link_segment(&c.segments()[0], &lex, &c);
        assert_eq!(
            linked_words(&c, &lex, &got),
            vec![("a".into(), "x".into()), ("b".into(), "y".into())]
        );
    }

    #[test]
    fn out_of_lexicon_pairs_never_link() {
        let c = corpus_of(&[("a", "x"), ("b", "y")]);
        let lex = lexicon_of(&c, &[("b", "y", 1.0)]);
        assert!(link_segment(&c.segments()[0], &lex, &c).links.is_empty());
    }

    #[test]
    fn token_consumption_caps_links() {
        let c = corpus_of(&[("a a", "x")]);
        let lex = lexicon_of(&c, &[("a", "x", 1.0)]);
        let got = link_segment(&c.segments()[0], &lex, &c);
        assert_eq!(got.links, vec![Link { source_pos: 0, target_pos: 0, entry: 0 }]);
    }

    #[test]
    fn repeated_tokens_use_leftmost_positions() {
        let c = corpus_of(&[("a b a", "x x")]);
        let lex = lexicon_of(&c, &[("a", "x", 1.0)]);
        let got = link_segment(&c.segments()[0], &lex, &c);
        let pos: Vec<_> = got.links.iter().map(|l| (l.source_pos, l.target_pos)).collect();
        assert_eq!(pos, vec![(0, 0), (2, 1)]);
    }

    #[test]
    fn ties_break_on_word_strings() {
        // "b" is interned before "a", but "a" sorts first.
        let c = corpus_of(&[("b a", "x")]);
        let lex = lexicon_of(&c, &[("b", "x", 2.0), ("a", "x", 2.0)]);
        let got = link_segment(&c.segments()[0], &lex, &c);
        assert_eq!(linked_words(&c, &lex, &got), vec![("a".into(), "x".into())]);
    }

    #[test]
    fn tallies_over_identical_segments() {
        let c = corpus_of(&[("a", "x"); 3]);
        let mut lex = lexicon_of(&c, &[("a", "x", 1.0)]);
        lex.entries_mut()[0].cooc = 3;
        let t = link_corpus(&c, &lex);
        assert_eq!(t, LinkTally { links: vec![3], total_links: 3, total_cooc: 3 });
    }

    #[test]
    fn repeated_two_by_two_example() {
        let c = corpus_of(&[("a b", "x y"); 10]);
        let lex = lexicon_of(&c, &[("a", "x", 5.0), ("a", "y", 4.0), ("b", "x", 3.0), ("b", "y", 1.0)]);
        let t = link_corpus(&c, &lex);
        let k = |v: &str, w: &str| {
            let key = (c.source_vocab().get(v).unwrap(), c.target_vocab().get(w).unwrap());
            t.links[lex.keys().position(|x| x == key).unwrap()]
        };
        assert_eq!((k("a", "x"), k("b", "y"), k("a", "y"), k("b", "x")), (10, 10, 0, 0));
        assert_eq!(t.total_links, 20);
    }

    #[test]
    fn lexicon_missing_corpus_pairs_gives_no_links() {
        let c = corpus_of(&[("a", "x"), ("b", "y")]);
        let lex = lexicon_of(&c, &[("a", "y", 3.0)]);
        assert_eq!(link_corpus(&c, &lex).total_links, 0);
    }

    #[test]
    fn dump_rows_are_ordered_by_source_position() {
        let c = corpus_of(&[("b a", "y x"), ("a", "x")]);
        let lex = lexicon_of(&c, &[("a", "x", 9.0), ("b", "y", 1.0)]);
        let rows = link_dump_rows(&c, &lex);
        assert_eq!(
            rows,
            vec![
                (0, "b".into(), "y".into()),
                (0, "a".into(), "x".into()),
                (1, "a".into(), "x".into()),
            ]
        );
    }
}
