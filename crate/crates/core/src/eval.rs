//! Recall, sampled precision and concordances.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::corpus::{Corpus, Preprocessor, Side, WordId};
use crate::error::{Error, Result};
use crate::io::{read_text, write_text};
use crate::lexicon::{Lexicon, LexiconEntry};

/// Word-type recall for one side (or both).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SideRecall {
    pub represented: usize,
    pub total: usize,
    pub percent: f64,
}

impl SideRecall {
    fn new(represented: usize, total: usize) -> Self {
        let percent = if total == 0 {
            0.0
        } else {
            100.0 * represented as f64 / total as f64
        };
        SideRecall {
            represented,
            total,
            percent,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecallReport {
    pub source: SideRecall,
    pub target: SideRecall,
    pub combined: SideRecall,
}

fn distinct_words(corpus: &Corpus, side: Side) -> usize {
    let vocab = corpus.vocab(side);
    vocab.ids().filter(|&id| vocab.count(id) > 0).count()
}

/// Share of each side's distinct corpus words that appear in at least one
/// entry; the combined figure pools both sides without merging homographs.
pub fn measure_recall(lexicon: &Lexicon, corpus: &Corpus) -> RecallReport {
    measure_recall_of(lexicon.entries().iter(), corpus)
}

pub(crate) fn measure_recall_of<'a>(
    entries: impl Iterator<Item = &'a LexiconEntry>,
    corpus: &Corpus,
) -> RecallReport {
    let mut sources = FxHashSet::default();
    let mut targets = FxHashSet::default();
    for e in entries {
        sources.insert(e.source);
        targets.insert(e.target);
    }
    let (ts, tt) = (distinct_words(corpus, Side::Source), distinct_words(corpus, Side::Target));
    RecallReport {
        source: SideRecall::new(sources.len(), ts),
        target: SideRecall::new(targets.len(), tt),
        combined: SideRecall::new(sources.len() + targets.len(), ts + tt),
    }
}

pub fn format_recall(report: &RecallReport) -> String {
    let mut out = String::from("side\trepresented\ttotal\tpercent\n");
    for (name, r) in [
        ("source", report.source),
        ("target", report.target),
        ("combined", report.combined),
    ] {
        let _ = writeln!(out, "{name}\t{}\t{}\t{:.4}", r.represented, r.total, r.percent);
    }
    out
}

/// Reference translation pairs, normalized the same way as the corpus.
#[derive(Clone, Debug, Default)]
pub struct GoldLexicon {
    pairs: FxHashSet<(String, String)>,
}

impl GoldLexicon {
    /// Pairs are normalized with `pre`; pairs with a stop-listed word are
    /// dropped.
    pub fn from_pairs<I, S, T>(pairs: I, pre: &Preprocessor) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let pairs = pairs
            .into_iter()
            .filter_map(|(s, t)| {
                let s = pre.normalize(Side::Source, s.as_ref())?;
                let t = pre.normalize(Side::Target, t.as_ref())?;
                Some((s.into_owned(), t.into_owned()))
            })
            .collect();
        GoldLexicon { pairs }
    }

    /// `source TAB target` per line; `#` comments and blank lines ignored.
    pub fn parse(text: &str, path: &Path, pre: &Preprocessor) -> Result<Self> {
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (s, t) = line
                .split_once('\t')
                .filter(|(_, t)| !t.contains('\t'))
                .ok_or_else(|| Error::parse(path, i + 1, "expected `source TAB target`"))?;
            raw.push((s.trim().to_owned(), t.trim().to_owned()));
        }
        Ok(GoldLexicon::from_pairs(raw, pre))
    }

    pub fn load(path: &Path, pre: &Preprocessor) -> Result<Self> {
        GoldLexicon::parse(&read_text(path)?, path, pre)
    }

    pub fn contains(&self, source: &str, target: &str) -> bool {
        // avoids allocating a key for every probe
        self.pairs.contains(&(source.to_owned(), target.to_owned()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Gold pairs as corpus ids; pairs with a word absent from the corpus are
    /// skipped.
    pub fn ids_in(&self, corpus: &Corpus) -> FxHashSet<(WordId, WordId)> {
        self.pairs
            .iter()
            .filter_map(|(s, t)| Some((corpus.source_vocab().get(s)?, corpus.target_vocab().get(t)?)))
            .collect()
    }
}

/// Fraction of entries found in `gold` (1.0 for an empty lexicon).
pub fn gold_precision(lexicon: &Lexicon, corpus: &Corpus, gold: &GoldLexicon) -> f64 {
    let ids = gold.ids_in(corpus);
    if lexicon.is_empty() {
        return 1.0;
    }
    let hits = lexicon.keys().filter(|k| ids.contains(k)).count();
    hits as f64 / lexicon.len() as f64
}

/// Precision and recall of the shortest top-ranked prefix of `lexicon`
/// whose combined recall reaches `target_percent`. `None` if no prefix does.
pub fn precision_at_recall(
    lexicon: &Lexicon,
    corpus: &Corpus,
    gold: &GoldLexicon,
    target_percent: f64,
) -> Option<(f64, RecallReport, usize)> {
    let ids = gold.ids_in(corpus);
    let ranked = lexicon.ranked_in(corpus);
    let total = distinct_words(corpus, Side::Source) + distinct_words(corpus, Side::Target);
    let mut sources = FxHashSet::default();
    let mut targets = FxHashSet::default();
    let mut hits = 0usize;
    for (i, e) in ranked.iter().enumerate() {
        sources.insert(e.source);
        targets.insert(e.target);
        hits += ids.contains(&e.key()) as usize;
        let percent = 100.0 * (sources.len() + targets.len()) as f64 / total as f64;
        if percent >= target_percent {
            let prefix = &ranked[..=i];
            let recall = measure_recall_of(prefix.iter().copied(), corpus);
            return Some((hits as f64 / (i + 1) as f64, recall, i + 1));
        }
    }
    None
}

/// Judgement attached to a sampled entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    GoldMatch,
    HumanPending,
    HumanCorrect,
    HumanIncorrect,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledEntry {
    pub source: String,
    pub target: String,
    pub score: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionSample {
    pub id: usize,
    pub seed: u64,
    pub entries: Vec<SampledEntry>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerdictCounts {
    pub gold_matches: usize,
    pub human_correct: usize,
    pub human_incorrect: usize,
    pub pending: usize,
}

impl PrecisionSample {
    pub fn counts(&self) -> VerdictCounts {
        let mut c = VerdictCounts::default();
        for e in &self.entries {
            match e.verdict {
                Verdict::GoldMatch => c.gold_matches += 1,
                Verdict::HumanCorrect => c.human_correct += 1,
                Verdict::HumanIncorrect => c.human_incorrect += 1,
                Verdict::HumanPending => c.pending += 1,
            }
        }
        c
    }

    /// Percent correct, or `None` while any verdict is pending.
    pub fn precision(&self) -> Option<f64> {
        let c = self.counts();
        (c.pending == 0 && !self.entries.is_empty())
            .then(|| 100.0 * (c.gold_matches + c.human_correct) as f64 / self.entries.len() as f64)
    }
}

/// Draws `n_samples` samples of `size` entries with replacement. Entries
/// found in `gold` are marked as matches; the rest await human judgement.
pub fn sample_for_precision(
    lexicon: &Lexicon,
    corpus: &Corpus,
    gold: &GoldLexicon,
    n_samples: usize,
    size: usize,
    seed: u64,
) -> Result<Vec<PrecisionSample>> {
    if lexicon.is_empty() {
        return Err(Error::Config("cannot sample from an empty lexicon".into()));
    }
    let ranked = lexicon.ranked_in(corpus);
    let (sv, tv) = (corpus.source_vocab(), corpus.target_vocab());
    Ok((0..n_samples)
        .map(|id| {
            let sample_seed = seed.wrapping_add(id as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
            let entries = (0..size)
                .map(|_| {
                    let e = ranked[rng.random_range(0..ranked.len())];
                    let (source, target) = (sv.word(e.source), tv.word(e.target));
                    SampledEntry {
                        source: source.to_owned(),
                        target: target.to_owned(),
                        score: e.score,
                        verdict: if gold.contains(source, target) {
                            Verdict::GoldMatch
                        } else {
                            Verdict::HumanPending
                        },
                    }
                })
                .collect();
            PrecisionSample {
                id,
                seed: sample_seed,
                entries,
            }
        })
        .collect())
}

/// Human verdicts keyed by `(source, target)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Adjudication {
    verdicts: FxHashMap<(String, String), bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum HumanVerdict {
    Correct,
    Incorrect,
    Pending,
}

impl FromStr for HumanVerdict {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "?" | "pending" => Ok(HumanVerdict::Pending),
            "correct" | "c" | "y" | "yes" | "1" => Ok(HumanVerdict::Correct),
            "incorrect" | "i" | "n" | "no" | "0" => Ok(HumanVerdict::Incorrect),
            _ => Err(()),
        }
    }
}

pub const ADJUDICATION_HEADER: &str = "source_word\ttarget_word\tverdict";

impl Adjudication {
    pub fn insert(&mut self, source: &str, target: &str, correct: bool) {
        self.verdicts.insert((source.to_owned(), target.to_owned()), correct);
    }

    pub fn get(&self, source: &str, target: &str) -> Option<bool> {
        self.verdicts.get(&(source.to_owned(), target.to_owned())).copied()
    }

    pub fn len(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }

    /// Reads the file written by [`format_adjudication_template`] after a
    /// human filled in the verdict column (`correct` / `incorrect`; blank
    /// stays pending).
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut adj = Adjudication::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if i == 0 && line == ADJUDICATION_HEADER {
                continue;
            }
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 || cols.len() > 3 {
                return Err(Error::parse(path, i + 1, "expected `source TAB target TAB verdict`"));
            }
            let verdict = cols
                .get(2)
                .copied()
                .unwrap_or("")
                .parse::<HumanVerdict>()
                .map_err(|_| Error::parse(path, i + 1, format!("unknown verdict `{}`", cols[2])))?;
            match verdict {
                HumanVerdict::Correct => adj.insert(cols[0], cols[1], true),
                HumanVerdict::Incorrect => adj.insert(cols[0], cols[1], false),
                HumanVerdict::Pending => {}
            }
        }
        Ok(adj)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Adjudication::parse(&read_text(path)?, path)
    }
}

/// Fills pending verdicts from `adjudication`; gold matches are left alone.
pub fn apply_adjudication(samples: &mut [PrecisionSample], adjudication: &Adjudication) {
    for e in samples.iter_mut().flat_map(|s| s.entries.iter_mut()) {
        if e.verdict == Verdict::GoldMatch {
            continue;
        }
        e.verdict = match adjudication.get(&e.source, &e.target) {
            Some(true) => Verdict::HumanCorrect,
            Some(false) => Verdict::HumanIncorrect,
            None => Verdict::HumanPending,
        };
    }
}

/// Distinct pending entries with an empty verdict column, sorted.
pub fn format_adjudication_template(samples: &[PrecisionSample]) -> String {
    let mut pending: Vec<(&str, &str)> = samples
        .iter()
        .flat_map(|s| &s.entries)
        .filter(|e| e.verdict == Verdict::HumanPending)
        .map(|e| (e.source.as_str(), e.target.as_str()))
        .collect();
    pending.sort_unstable();
    pending.dedup();
    let mut out = String::from(ADJUDICATION_HEADER);
    out.push('\n');
    for (s, t) in pending {
        let _ = writeln!(out, "{s}\t{t}\t");
    }
    out
}

/// Mean and sample standard deviation of per-sample precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PrecisionSummary {
    Complete { mean: f64, std_dev: f64 },
    IncompleteAdjudication { pending: usize },
}

pub fn summarize_precision(samples: &[PrecisionSample]) -> PrecisionSummary {
    let pending: usize = samples.iter().map(|s| s.counts().pending).sum();
    let values: Vec<f64> = samples.iter().filter_map(PrecisionSample::precision).collect();
    if pending > 0 || values.is_empty() {
        return PrecisionSummary::IncompleteAdjudication { pending };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std_dev = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    PrecisionSummary::Complete { mean, std_dev }
}

pub const PRECISION_HEADER: &str = "sample_id\tgold_matches\thuman_correct\thuman_incorrect\tpending\tprecision";

/// Per-sample rows, then a `#` summary line. Samples with pending verdicts
/// show `NA` instead of a precision.
pub fn format_precision_report(samples: &[PrecisionSample]) -> String {
    let mut out = String::from(PRECISION_HEADER);
    out.push('\n');
    for s in samples {
        let c = s.counts();
        let precision = s.precision().map_or_else(|| "NA".to_owned(), |p| format!("{p:.2}"));
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            s.id, c.gold_matches, c.human_correct, c.human_incorrect, c.pending, precision
        );
    }
    match summarize_precision(samples) {
        PrecisionSummary::Complete { mean, std_dev } => {
            let _ = writeln!(out, "# mean={mean:.4}\tstd_dev={std_dev:.4}");
        }
        PrecisionSummary::IncompleteAdjudication { pending } => {
            let _ = writeln!(out, "# incomplete adjudication: {pending} verdicts pending");
        }
    }
    out
}

/// One aligned segment pair containing both words of an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Excerpt {
    pub segment: usize,
    /// Token positions equal to the source word.
    pub source_marks: Vec<usize>,
    /// Token positions equal to the target word.
    pub target_marks: Vec<usize>,
}

/// Up to `max_lines` segment pairs with `source` on the source side and
/// `target` on the target side, in segment order.
pub fn concordance(source: WordId, target: WordId, corpus: &Corpus, max_lines: usize) -> Vec<Excerpt> {
    corpus
        .segments()
        .iter()
        .filter_map(|seg| {
            let source_marks: Vec<usize> = positions(&seg.source, source);
            let target_marks: Vec<usize> = positions(&seg.target, target);
            (!source_marks.is_empty() && !target_marks.is_empty()).then_some(Excerpt {
                segment: seg.index,
                source_marks,
                target_marks,
            })
        })
        .take(max_lines)
        .collect()
}

fn positions(tokens: &[WordId], word: WordId) -> Vec<usize> {
    tokens
        .iter()
        .enumerate()
        .filter(|(_, &t)| t == word)
        .map(|(i, _)| i)
        .collect()
}

/// Concordance by word strings, normalized with `pre`. Unknown words give an
/// empty result.
pub fn concordance_words(
    source: &str,
    target: &str,
    corpus: &Corpus,
    pre: &Preprocessor,
    max_lines: usize,
) -> Vec<Excerpt> {
    let lookup = |side: Side, w: &str| {
        let w = pre.normalize(side, w)?;
        corpus.vocab(side).get(&w)
    };
    match (lookup(Side::Source, source), lookup(Side::Target, target)) {
        (Some(v), Some(w)) => concordance(v, w, corpus, max_lines),
        _ => Vec::new(),
    }
}

/// Two lines per excerpt, `S<index>` and `T<index>`, with the entry's words
/// wrapped in `[[...]]`.
pub fn render_excerpt(excerpt: &Excerpt, corpus: &Corpus) -> String {
    let seg = &corpus.segments()[excerpt.segment];
    let line = |tokens: &[WordId], marks: &[usize], side: Side| {
        tokens
            .iter()
            .enumerate()
            .map(|(i, &id)| {
                let w = corpus.vocab(side).word(id);
                if marks.contains(&i) {
                    format!("[[{w}]]")
                } else {
                    w.to_owned()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "S{idx}\t{}\nT{idx}\t{}\n",
        line(&seg.source, &excerpt.source_marks, Side::Source),
        line(&seg.target, &excerpt.target_marks, Side::Target),
        idx = excerpt.segment
    )
}

pub fn write_concordance(path: &Path, excerpts: &[Excerpt], corpus: &Corpus) -> Result<()> {
    let text: String = excerpts.iter().map(|e| render_excerpt(e, corpus)).collect();
    write_text(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linker::tests::{corpus_of, lexicon_of};

    #[test]
    fn recall_examples() {
        let c = corpus_of(&[("a b", "w x"), ("c d", "y z")]);
        let full = lexicon_of(&c, &[("a", "w", 1.0), ("b", "x", 1.0), ("c", "y", 1.0), ("d", "z", 1.0)]);
        let r = measure_recall(&full, &c);
        assert_eq!((r.source.percent, r.target.percent, r.combined.percent), (100.0, 100.0, 100.0));

        let partial = lexicon_of(&c, &[("a", "w", 1.0), ("b", "w", 1.0), ("c", "x", 1.0)]);
        let r = measure_recall(&partial, &c);
        assert_eq!((r.source.percent, r.target.percent, r.combined.percent), (75.0, 50.0, 62.5));
        assert_eq!(r.combined.represented, 5);

        let r = measure_recall(&Lexicon::default(), &c);
        assert_eq!(r.combined.percent, 0.0);
    }

    fn gold_of(pairs: &[(&str, &str)]) -> GoldLexicon {
        GoldLexicon::from_pairs(pairs.iter().copied(), &Preprocessor::default())
    }

    #[test]
    fn full_gold_gives_full_precision() {
        let c = corpus_of(&[("a b", "x y")]);
        let lex = lexicon_of(&c, &[("a", "x", 2.0), ("b", "y", 1.0)]);
        let samples = sample_for_precision(&lex, &c, &gold_of(&[("a", "x"), ("b", "y")]), 5, 100, 7).unwrap();
        assert_eq!(samples.len(), 5);
        for s in &samples {
            assert_eq!(s.entries.len(), 100);
            assert_eq!(s.precision(), Some(100.0));
        }
        assert_eq!(
            summarize_precision(&samples),
            PrecisionSummary::Complete { mean: 100.0, std_dev: 0.0 }
        );
    }

    #[test]
    fn empty_gold_leaves_everything_pending() {
        let c = corpus_of(&[("a b", "x y")]);
        let lex = lexicon_of(&c, &[("a", "x", 2.0), ("b", "y", 1.0)]);
        let samples = sample_for_precision(&lex, &c, &GoldLexicon::default(), 5, 100, 7).unwrap();
        let pending: usize = samples.iter().map(|s| s.counts().pending).sum();
        assert_eq!(pending, 500);
        assert_eq!(
            summarize_precision(&samples),
            PrecisionSummary::IncompleteAdjudication { pending: 500 }
        );
        let report = format_precision_report(&samples);
        assert!(report.contains("\tNA\n"));
        assert!(report.contains("incomplete adjudication"));
    }

    #[test]
    fn sampling_is_reproducible() {
        let c = corpus_of(&[("a b c", "x y z")]);
        let lex = lexicon_of(&c, &[("a", "x", 2.0), ("b", "y", 1.0), ("c", "z", 0.5)]);
        let gold = gold_of(&[("a", "x")]);
        let one = sample_for_precision(&lex, &c, &gold, 5, 100, 11).unwrap();
        let two = sample_for_precision(&lex, &c, &gold, 5, 100, 11).unwrap();
        assert_eq!(one, two);
        let other = sample_for_precision(&lex, &c, &gold, 5, 100, 12).unwrap();
        assert_ne!(one, other);
    }

    #[test]
    fn adjudication_round_trip_completes_precision() {
        let c = corpus_of(&[("a b c", "x y z")]);
        let lex = lexicon_of(&c, &[("a", "x", 2.0), ("b", "y", 1.0), ("c", "z", 0.5)]);
        let gold = gold_of(&[("a", "x")]);
        let mut samples = sample_for_precision(&lex, &c, &gold, 2, 50, 3).unwrap();
        let template = format_adjudication_template(&samples);
        assert_eq!(template, "source_word\ttarget_word\tverdict\nb\ty\t\nc\tz\t\n");

        let filled = template.replace("b\ty\t\n", "b\ty\tcorrect\n").replace("c\tz\t\n", "c\tz\tincorrect\n");
        let adj = Adjudication::parse(&filled, Path::new("adj")).unwrap();
        apply_adjudication(&mut samples, &adj);
        for s in &samples {
            let c = s.counts();
            assert_eq!(c.pending, 0);
            let want = 100.0 * (c.gold_matches + c.human_correct) as f64 / 50.0;
            assert_eq!(s.precision(), Some(want));
        }
        assert!(matches!(summarize_precision(&samples), PrecisionSummary::Complete { .. }));
        assert!(Adjudication::parse("a\tx\tmaybe\n", Path::new("adj")).is_err());
    }

    #[test]
    fn gold_is_normalized_like_the_corpus() {
        use crate::corpus::{Stemmer, StopList};
        let pre = Preprocessor::new(
            StopList::default(),
            StopList::from_words(["la"]),
            Stemmer::suffixes(["s"], 3),
            true,
        );
        let gold = GoldLexicon::parse("# comment\nHouses\tmaisons\nthe\tla\n", Path::new("g"), &pre).unwrap();
        assert!(gold.contains("house", "maison"));
        assert_eq!(gold.len(), 1);
        assert!(GoldLexicon::parse("only-one-column\n", Path::new("g"), &pre).is_err());
    }

    #[test]
    fn concordance_examples() {
        let c = corpus_of(&[("a b", "x y"), ("a", "z"), ("b a", "x"), ("a", "x"), ("c", "q")]);
        let (a, x) = (c.source_vocab().get("a").unwrap(), c.target_vocab().get("x").unwrap());
        let ex = concordance(a, x, &c, 10);
        assert_eq!(ex.iter().map(|e| e.segment).collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(concordance(a, x, &c, 2).len(), 2);
        assert_eq!(render_excerpt(&ex[1], &c), "S2\tb [[a]]\nT2\t[[x]]\n");
        let (cc, z) = (c.source_vocab().get("c").unwrap(), c.target_vocab().get("z").unwrap());
        assert!(concordance(cc, z, &c, 10).is_empty());
        assert!(concordance_words("nope", "x", &c, &Preprocessor::default(), 5).is_empty());
    }

    #[test]
    fn precision_at_recall_uses_ranked_prefix() {
        let c = corpus_of(&[("a b", "x y")]);
        let lex = lexicon_of(&c, &[("a", "x", 3.0), ("a", "y", 2.0), ("b", "y", 1.0)]);
        let gold = gold_of(&[("a", "x"), ("b", "y")]);
        let (p, r, n) = precision_at_recall(&lex, &c, &gold, 100.0).unwrap();
        assert_eq!(n, 3);
        assert_eq!(r.combined.percent, 100.0);
        assert!((p - 2.0 / 3.0).abs() < 1e-12);
        let (p, _, n) = precision_at_recall(&lex, &c, &gold, 50.0).unwrap();
        assert_eq!((p, n), (1.0, 1));
        assert!((gold_precision(&lex, &c, &gold) - 2.0 / 3.0).abs() < 1e-12);
    }
}
