//! Aligned bitext ingestion.
//!
//! Input is pre-tokenized: one segment pair per line, source and target
//! separated by a single TAB, tokens separated by spaces. Each token is
//! optionally lowercased, dropped if it is on the side's stop-list, stemmed,
//! and finally interned into the side's [`Vocabulary`].

use std::borrow::Cow;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Which half of the bitext a word belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Source => "source",
            Side::Target => "target",
        }
    }
}

/// Interned word identifier, scoped to one [`Vocabulary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordId(pub u32);

impl WordId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bijection between word strings and [`WordId`]s for one side, plus token
/// counts. Ids are assigned in first-seen order.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    side: Side,
    words: Vec<String>,
    index: FxHashMap<String, WordId>,
    counts: Vec<u64>,
}

impl Vocabulary {
    pub fn new(side: Side) -> Self {
        Vocabulary {
            side,
            words: Vec::new(),
            index: FxHashMap::default(),
            counts: Vec::new(),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Returns the id for `word`, assigning a fresh one on first sight.
    /// Does not touch occurrence counts.
    pub fn intern(&mut self, word: &str) -> WordId {
        if let Some(&id) = self.index.get(word) {
            return id;
        }
        let id = WordId(self.words.len() as u32);
        self.words.push(word.to_owned());
        self.index.insert(word.to_owned(), id);
        self.counts.push(0);
        id
    }

    fn intern_occurrence(&mut self, word: &str) -> WordId {
        let id = self.intern(word);
        self.counts[id.index()] += 1;
        id
    }

    pub fn get(&self, word: &str) -> Option<WordId> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: WordId) -> &str {
        &self.words[id.index()]
    }

    /// Token count of `id` over the whole corpus, after preprocessing.
    pub fn count(&self, id: WordId) -> u64 {
        self.counts[id.index()]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = WordId> + '_ {
        (0..self.words.len() as u32).map(WordId)
    }

    /// Position of every word in byte-lexicographic order of the strings,
    /// indexed by id. Used wherever ties must break on word strings.
    pub fn lexical_ranks(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.words.len() as u32).collect();
        order.sort_by(|&a, &b| self.words[a as usize].cmp(&self.words[b as usize]));
        let mut ranks = vec![0u32; order.len()];
        for (rank, id) in order.into_iter().enumerate() {
            ranks[id as usize] = rank as u32;
        }
        ranks
    }
}

/// One aligned source/target segment as interned word sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentPair {
    pub index: usize,
    pub source: Vec<WordId>,
    pub target: Vec<WordId>,
}

/// How tokens are reduced to a canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Stemmer {
    #[default]
    Identity,
    /// Strips the first listed suffix that leaves at least `min_stem_len`
    /// characters, and repeats until no suffix applies.
    Suffixes {
        suffixes: Vec<String>,
        min_stem_len: usize,
    },
}

pub const DEFAULT_MIN_STEM_LEN: usize = 3;

impl Stemmer {
    pub fn suffixes<I, S>(suffixes: I, min_stem_len: usize) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Stemmer::Suffixes {
            suffixes: suffixes.into_iter().map(Into::into).collect(),
            min_stem_len,
        }
    }

    pub fn stem<'a>(&self, word: &'a str) -> Cow<'a, str> {
        match self {
            Stemmer::Identity => Cow::Borrowed(word),
            Stemmer::Suffixes {
                suffixes,
                min_stem_len,
            } => {
                let mut current = word;
                loop {
                    let stripped = suffixes.iter().find_map(|suffix| {
                        let stem = current.strip_suffix(suffix.as_str())?;
                        (!suffix.is_empty() && stem.chars().count() >= *min_stem_len)
                            .then_some(stem)
                    });
                    match stripped {
                        Some(stem) => current = stem,
                        None => break,
                    }
                }
                Cow::Borrowed(current)
            }
        }
    }
}

impl fmt::Display for Stemmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stemmer::Identity => f.write_str("identity"),
            Stemmer::Suffixes {
                suffixes,
                min_stem_len,
            } => write!(
                f,
                "suffixes=[{}];min_stem_len={}",
                suffixes.join(","),
                min_stem_len
            ),
        }
    }
}

impl FromStr for Stemmer {
    type Err = Error;

    /// Accepts `identity` or `suffixes=[s,es,ing,ed]` with an optional
    /// `;min_stem_len=N` suffix.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "identity" {
            return Ok(Stemmer::Identity);
        }
        let bad = || Error::Config(format!("unrecognized stemmer spec `{spec}`"));
        let mut parts = spec.split(';');
        let list = parts
            .next()
            .and_then(|p| p.trim().strip_prefix("suffixes="))
            .ok_or_else(bad)?;
        let list = list
            .trim()
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(bad)?;
        let suffixes: Vec<String> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        let mut min_stem_len = DEFAULT_MIN_STEM_LEN;
        for part in parts {
            let value = part
                .trim()
                .strip_prefix("min_stem_len=")
                .ok_or_else(bad)?;
            min_stem_len = value.trim().parse().map_err(|_| bad())?;
        }
        Ok(Stemmer::Suffixes {
            suffixes,
            min_stem_len,
        })
    }
}

/// Set of words deleted before stemming.
#[derive(Clone, Debug, Default)]
pub struct StopList {
    words: FxHashSet<String>,
    checksum: Option<String>,
}

impl StopList {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        StopList {
            words: words.into_iter().map(Into::into).collect(),
            checksum: None,
        }
    }

    /// One word per line; blank lines and lines starting with `#` are ignored.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Error::parse(path, 0, "stop-list is not valid UTF-8"))?;
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_owned)
            .collect();
        Ok(StopList {
            words,
            checksum: Some(hex::encode(Sha256::digest(&bytes))),
        })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// SHA-256 of the file the list was loaded from, if any.
    pub fn checksum(&self) -> Option<&str> {
        self.checksum.as_deref()
    }

    fn lowercased(&self) -> Self {
        StopList {
            words: self.words.iter().map(|w| w.to_lowercase()).collect(),
            checksum: self.checksum.clone(),
        }
    }
}

/// User-facing preprocessing switches.
#[derive(Clone, Debug, Default)]
pub struct PreprocessOptions {
    pub source_stoplist: Option<PathBuf>,
    pub target_stoplist: Option<PathBuf>,
    pub stemmer: Stemmer,
    pub lowercase: bool,
}

/// What was applied to the corpus, for the run record.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessRecord {
    pub source_stoplist_sha256: Option<String>,
    pub target_stoplist_sha256: Option<String>,
    pub stemmer: String,
    pub lowercase: bool,
}

/// Token normalizer: lowercase (optional), stop-list deletion, stemming.
#[derive(Clone, Debug, Default)]
pub struct Preprocessor {
    source_stop: StopList,
    target_stop: StopList,
    stemmer: Stemmer,
    lowercase: bool,
}

impl Preprocessor {
    pub fn new(source_stop: StopList, target_stop: StopList, stemmer: Stemmer, lowercase: bool) -> Self {
        let (source_stop, target_stop) = if lowercase {
            (source_stop.lowercased(), target_stop.lowercased())
        } else {
            (source_stop, target_stop)
        };
        Preprocessor {
            source_stop,
            target_stop,
            stemmer,
            lowercase,
        }
    }

    pub fn from_options(options: &PreprocessOptions) -> Result<Self> {
        let load = |p: &Option<PathBuf>| match p {
            Some(path) => StopList::load(path),
            None => Ok(StopList::default()),
        };
        Ok(Preprocessor::new(
            load(&options.source_stoplist)?,
            load(&options.target_stoplist)?,
            options.stemmer.clone(),
            options.lowercase,
        ))
    }

    pub fn stemmer(&self) -> &Stemmer {
        &self.stemmer
    }

    /// Canonical form of `token`, or `None` if it is stop-listed.
    pub fn normalize<'a>(&self, side: Side, token: &'a str) -> Option<Cow<'a, str>> {
        let token: Cow<'a, str> = if self.lowercase {
            Cow::Owned(token.to_lowercase())
        } else {
            Cow::Borrowed(token)
        };
        let stop = match side {
            Side::Source => &self.source_stop,
            Side::Target => &self.target_stop,
        };
        if stop.contains(&token) {
            return None;
        }
        Some(match token {
            Cow::Borrowed(t) => self.stemmer.stem(t),
            Cow::Owned(t) => Cow::Owned(self.stemmer.stem(&t).into_owned()),
        })
    }

    pub fn record(&self) -> PreprocessRecord {
        PreprocessRecord {
            source_stoplist_sha256: self.source_stop.checksum().map(str::to_owned),
            target_stoplist_sha256: self.target_stop.checksum().map(str::to_owned),
            stemmer: self.stemmer.to_string(),
            lowercase: self.lowercase,
        }
    }
}

/// An immutable, interned bitext.
#[derive(Clone, Debug)]
pub struct Corpus {
    segments: Vec<SegmentPair>,
    source: Vocabulary,
    target: Vocabulary,
    preprocessing: PreprocessRecord,
}

impl Corpus {
    pub fn segments(&self) -> &[SegmentPair] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn source_vocab(&self) -> &Vocabulary {
        &self.source
    }

    pub fn target_vocab(&self) -> &Vocabulary {
        &self.target
    }

    pub fn vocab(&self, side: Side) -> &Vocabulary {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    pub fn preprocessing(&self) -> &PreprocessRecord {
        &self.preprocessing
    }

    /// The same corpus with source and target sides exchanged.
    pub fn transposed(&self) -> Corpus {
        let mut source = self.target.clone();
        let mut target = self.source.clone();
        source.side = Side::Source;
        target.side = Side::Target;
        Corpus {
            segments: self
                .segments
                .iter()
                .map(|s| SegmentPair {
                    index: s.index,
                    source: s.target.clone(),
                    target: s.source.clone(),
                })
                .collect(),
            source,
            target,
            preprocessing: PreprocessRecord {
                source_stoplist_sha256: self.preprocessing.target_stoplist_sha256.clone(),
                target_stoplist_sha256: self.preprocessing.source_stoplist_sha256.clone(),
                ..self.preprocessing.clone()
            },
        }
    }
}

/// Builds a [`Corpus`] one segment pair at a time.
#[derive(Debug)]
pub struct CorpusBuilder {
    preprocessor: Preprocessor,
    source: Vocabulary,
    target: Vocabulary,
    segments: Vec<SegmentPair>,
}

impl CorpusBuilder {
    pub fn new(preprocessor: Preprocessor) -> Self {
        CorpusBuilder {
            preprocessor,
            source: Vocabulary::new(Side::Source),
            target: Vocabulary::new(Side::Target),
            segments: Vec::new(),
        }
    }

    pub fn push<S, T>(&mut self, source: &[S], target: &[T])
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let pre = &self.preprocessor;
        let source_ids = source
            .iter()
            .filter_map(|tok| pre.normalize(Side::Source, tok.as_ref()))
            .map(|w| self.source.intern_occurrence(&w))
            .collect();
        let target_ids = target
            .iter()
            .filter_map(|tok| pre.normalize(Side::Target, tok.as_ref()))
            .map(|w| self.target.intern_occurrence(&w))
            .collect();
        let index = self.segments.len();
        self.segments.push(SegmentPair {
            index,
            source: source_ids,
            target: target_ids,
        });
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn finish(self) -> Corpus {
        Corpus {
            preprocessing: self.preprocessor.record(),
            segments: self.segments,
            source: self.source,
            target: self.target,
        }
    }
}

/// Source and target tokens of one bitext line.
pub type LineTokens<'a> = (Vec<&'a str>, Vec<&'a str>);

/// Splits one bitext line into source and target tokens.
///
/// Returns `Ok(None)` for blank lines.
pub fn parse_bitext_line(line: &str) -> std::result::Result<Option<LineTokens<'_>>, String> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    if line.trim().is_empty() {
        return Ok(None);
    }
    let mut halves = line.split('\t');
    let source = halves.next().unwrap_or_default();
    let target = halves
        .next()
        .ok_or_else(|| "missing TAB separator between source and target".to_owned())?;
    if halves.next().is_some() {
        return Err("more than one TAB separator".to_owned());
    }
    Ok(Some((split_tokens(source), split_tokens(target))))
}

fn split_tokens(s: &str) -> Vec<&str> {
    s.split(' ').filter(|t| !t.is_empty()).collect()
}

/// Reads a bitext file and applies preprocessing.
pub fn load_corpus(path: &Path, options: &PreprocessOptions) -> Result<Corpus> {
    let preprocessor = Preprocessor::from_options(options)?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8(bytes).map_err(|e| {
        let line = 1 + e.as_bytes()[..e.utf8_error().valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        Error::parse(path, line, "invalid UTF-8")
    })?;
    let mut builder = CorpusBuilder::new(preprocessor);
    for (n, line) in text.lines().enumerate() {
        match parse_bitext_line(line) {
            Ok(Some((source, target))) => builder.push(&source, &target),
            Ok(None) => {}
            Err(message) => return Err(Error::parse(path, n + 1, message)),
        }
    }
    if builder.is_empty() {
        return Err(Error::EmptyCorpus(path.to_owned()));
    }
    Ok(builder.finish())
}
