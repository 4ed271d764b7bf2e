mod common;

use common::{build_case, library_links, oracle_links, LinkCase, SOURCE_WORDS, TARGET_WORDS};
use lexclean::corpus::{Corpus, CorpusBuilder, Preprocessor};
use lexclean::lexicon::Lexicon;
use lexclean::linker::{link_corpus, link_segment};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_case() -> impl Strategy<Value = LinkCase> {
    any::<u64>().prop_map(|seed| common::random_link_case(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn word_links(corpus: &Corpus, lexicon: &Lexicon, index: usize) -> Vec<(usize, usize, String, String)> {
    link_segment(&corpus.segments()[index], lexicon, corpus)
        .links
        .iter()
        .map(|l| {
            let e = &lexicon.entries()[l.entry];
            (
                l.source_pos,
                l.target_pos,
                corpus.source_vocab().word(e.source).to_owned(),
                corpus.target_vocab().word(e.target).to_owned(),
            )
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn matches_sort_all_candidates_oracle(case in arb_case()) {
        prop_assert_eq!(library_links(&case), oracle_links(&case));
    }

    #[test]
    fn links_are_one_to_one(case in arb_case()) {
        let links = library_links(&case);
        prop_assert!(links.len() <= case.source.len().min(case.target.len()));
        let mut s: Vec<_> = links.iter().map(|l| l.0).collect();
        let mut t: Vec<_> = links.iter().map(|l| l.1).collect();
        s.sort_unstable();
        s.dedup();
        t.sort_unstable();
        t.dedup();
        prop_assert_eq!(s.len(), links.len());
        prop_assert_eq!(t.len(), links.len());
    }

    #[test]
    fn id_assignment_does_not_change_links(case in arb_case()) {
        let (c1, l1, i1) = build_case(&case, &[]);
        let mut reversed_s = SOURCE_WORDS.to_vec();
        let mut reversed_t = TARGET_WORDS.to_vec();
        reversed_s.reverse();
        reversed_t.reverse();
        let (c2, l2, i2) = build_case(&case, &[(reversed_s, reversed_t)]);
        prop_assert_eq!(word_links(&c1, &l1, i1), word_links(&c2, &l2, i2));
    }

    #[test]
    fn removing_an_unlinked_entry_changes_nothing(case in arb_case()) {
        let (corpus, lexicon, index) = build_case(&case, &[]);
        let before = link_corpus(&corpus, &lexicon);
        let kept = lexicon.filtered(|e| {
            let i = lexicon.entries().iter().position(|x| x.key() == e.key()).unwrap();
            before.links[i] > 0
        });
        prop_assert_eq!(word_links(&corpus, &lexicon, index), word_links(&corpus, &kept, index));
    }

    #[test]
    fn removing_a_linked_entry_frees_at_most_its_links(case in arb_case()) {
        let (corpus, lexicon, _) = build_case(&case, &[]);
        let before = link_corpus(&corpus, &lexicon);
        for (idx, &k) in before.links.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let removed = lexicon.entries()[idx].key();
            let after = link_corpus(&corpus, &lexicon.filtered(|e| e.key() != removed));
            prop_assert!(after.total_links <= before.total_links + k);
        }
    }
}

#[test]
fn removing_a_linked_entry_can_add_links() {
    let case = LinkCase {
        source: vec!["a", "b"],
        target: vec!["x", "y"],
        scores: vec![("a", "x", 5.0), ("a", "y", 4.0), ("b", "x", 3.0)],
    };
    let (corpus, lexicon, index) = build_case(&case, &[]);
    let (a, x) = (corpus.source_vocab().get("a").unwrap(), corpus.target_vocab().get("x").unwrap());
    let smaller = lexicon.filtered(|e| e.key() != (a, x));
    assert_eq!(word_links(&corpus, &lexicon, index).len(), 1);
    assert_eq!(word_links(&corpus, &smaller, index).len(), 2);
}

#[test]
fn tally_counts_over_repeated_pairs() {
    let mut builder = CorpusBuilder::new(Preprocessor::default());
    for _ in 0..10 {
        builder.push(&["a", "b"], &["x", "y"]);
    }
    let corpus = builder.finish();
    let entries = [("a", "x", 5.0), ("a", "y", 4.0), ("b", "x", 3.0), ("b", "y", 1.0)]
        .iter()
        .map(|&(s, t, score)| lexclean::lexicon::LexiconEntry {
            source: corpus.source_vocab().get(s).unwrap(),
            target: corpus.target_vocab().get(t).unwrap(),
            score,
            links: 0,
            cooc: 10,
        })
        .collect();
    let lexicon = Lexicon::new(entries).unwrap();
    let tally = link_corpus(&corpus, &lexicon);
    for (e, &k) in lexicon.entries().iter().zip(&tally.links) {
        let pair = (corpus.source_vocab().word(e.source), corpus.target_vocab().word(e.target));
        let want = if matches!(pair, ("a", "x") | ("b", "y")) { 10 } else { 0 };
        assert_eq!(k, want, "{pair:?}");
    }
    assert_eq!((tally.total_links, tally.total_cooc), (20, 40));
}

#[test]
fn linking_is_independent_of_worker_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut builder = CorpusBuilder::new(Preprocessor::default());
    builder.push(&SOURCE_WORDS, &TARGET_WORDS);
    let cases: Vec<LinkCase> = (0..3000).map(|_| common::random_link_case(&mut rng)).collect();
    for c in &cases {
        builder.push(&c.source, &c.target);
    }
    let corpus = builder.finish();
    let (_, lexicon, _) = build_case(&cases[0], &[]);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| link_corpus(&corpus, &lexicon));
    let b = four.install(|| link_corpus(&corpus, &lexicon));
    assert_eq!(a, b);
}
