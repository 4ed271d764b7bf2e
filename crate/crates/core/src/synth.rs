//! Seeded synthetic bitext with a known translation lexicon.
//!
//! Source words `s0000..` follow a Zipf distribution; each has one true
//! translation `tNNNN` (a seeded permutation) and one preferred collocate.
//! Every source token is translated, dropped, translated together with the
//! translation of its collocate (an indirect association), or replaced by a
//! random target word. Target order is shuffled.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, CorpusBuilder, Preprocessor};
use crate::error::{Error, Result};
use crate::io::write_text;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub segments: usize,
    pub vocabulary: usize,
    pub zipf_exponent: f64,
    pub min_length: usize,
    pub max_length: usize,
    /// Probability a source token is followed by its collocate.
    pub p_collocate: f64,
    pub p_translate: f64,
    pub p_drop: f64,
    /// Probability a token is translated along with its collocate's translation.
    pub p_indirect: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            segments: 50_000,
            vocabulary: 1_000,
            zipf_exponent: 1.5,
            min_length: 3,
            max_length: 8,
            p_collocate: 0.3,
            p_translate: 0.93,
            p_drop: 0.02,
            p_indirect: 0.05,
            seed: 42,
        }
    }
}

impl GeneratorConfig {
    /// Probability a source token is replaced by a random target word.
    pub fn p_noise(&self) -> f64 {
        1.0 - self.p_translate - self.p_drop - self.p_indirect
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [self.p_collocate, self.p_translate, self.p_drop, self.p_indirect];
        if rates.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config("generator probabilities must lie in [0, 1]".into()));
        }
        if self.p_translate + self.p_drop + self.p_indirect > 1.0 + 1e-12 {
            return Err(Error::Config(format!(
                "p_translate + p_drop + p_indirect = {} exceeds 1",
                self.p_translate + self.p_drop + self.p_indirect
            )));
        }
        if self.vocabulary < 2 {
            return Err(Error::Config("vocabulary must hold at least 2 words".into()));
        }
        if self.min_length == 0 || self.min_length > self.max_length {
            return Err(Error::Config("need 1 <= min_length <= max_length".into()));
        }
        if self.zipf_exponent.is_nan() || self.zipf_exponent < 0.0 {
            return Err(Error::Config("zipf_exponent must be non-negative".into()));
        }
        Ok(())
    }
}

/// The true lexicon behind a generated bitext.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    pub pairs: Vec<(String, String)>,
}

impl GroundTruth {
    /// `source TAB target` lines, in source-word order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (s, t) in &self.pairs {
            let _ = writeln!(out, "{s}\t{t}");
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_tsv())
    }
}

/// Token sequences of one generated segment pair.
pub type RawPair = (Vec<String>, Vec<String>);

fn source_word(i: usize) -> String {
    format!("s{i:04}")
}

fn target_word(i: usize) -> String {
    format!("t{i:04}")
}

/// Generates the raw token pairs; identical for identical configs.
pub fn generate_pairs(config: &GeneratorConfig) -> Result<(Vec<RawPair>, GroundTruth)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.vocabulary;
    let zipf = Zipf::new(n as f64, config.zipf_exponent).map_err(|e| Error::Config(format!("zipf: {e}")))?;
    let draw = |rng: &mut ChaCha8Rng| zipf.sample(rng) as usize - 1;

    let mut translation: Vec<usize> = (0..n).collect();
    translation.shuffle(&mut rng);
    let collocate: Vec<usize> = (0..n)
        .map(|v| loop {
            let c = draw(&mut rng);
            if c != v {
                break c;
            }
        })
        .collect();

    let mut pairs = Vec::with_capacity(config.segments);
    for _ in 0..config.segments {
        let len = rng.random_range(config.min_length..=config.max_length);
        let mut source = Vec::with_capacity(len);
        while source.len() < len {
            let v = draw(&mut rng);
            source.push(v);
            if source.len() < len && rng.random_bool(config.p_collocate) {
                source.push(collocate[v]);
            }
        }
        let mut target = Vec::with_capacity(len);
        for &v in &source {
            let r: f64 = rng.random();
            if r < config.p_translate {
                target.push(translation[v]);
            } else if r < config.p_translate + config.p_drop {
            } else if r < config.p_translate + config.p_drop + config.p_indirect {
                target.push(translation[v]);
                target.push(translation[collocate[v]]);
            } else {
                target.push(translation[draw(&mut rng)]);
            }
        }
        target.shuffle(&mut rng);
        pairs.push((
            source.into_iter().map(source_word).collect(),
            target.into_iter().map(target_word).collect(),
        ));
    }
    let truth = GroundTruth {
        pairs: (0..n).map(|v| (source_word(v), target_word(translation[v]))).collect(),
    };
    Ok((pairs, truth))
}

/// Generated bitext loaded as a corpus without further preprocessing.
pub fn generate_bitext(config: &GeneratorConfig) -> Result<(Corpus, GroundTruth)> {
    let (pairs, truth) = generate_pairs(config)?;
    let mut builder = CorpusBuilder::new(Preprocessor::default());
    for (s, t) in &pairs {
        builder.push(s, t);
    }
    Ok((builder.finish(), truth))
}

/// Bitext lines in the corpus file format.
pub fn format_bitext(pairs: &[RawPair]) -> String {
    let mut out = String::new();
    for (s, t) in pairs {
        let _ = writeln!(out, "{}\t{}", s.join(" "), t.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GeneratorConfig {
        GeneratorConfig {
            segments: 200,
            vocabulary: 50,
            ..GeneratorConfig::default()
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_pairs(&small()).unwrap();
        let b = generate_pairs(&small()).unwrap();
        assert_eq!(a, b);
        let c = generate_pairs(&GeneratorConfig { seed: 7, ..small() }).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn rates_over_one_rejected() {
        let cfg = GeneratorConfig {
            p_translate: 0.9,
            p_drop: 0.1,
            p_indirect: 0.05,
            ..small()
        };
        assert!(matches!(generate_pairs(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn truth_is_a_bijection() {
        let (_, truth) = generate_pairs(&small()).unwrap();
        let mut targets: Vec<_> = truth.pairs.iter().map(|p| p.1.clone()).collect();
        targets.sort();
        targets.dedup();
        assert_eq!(targets.len(), 50);
    }

    #[test]
    fn perfect_translation_gives_parallel_multisets() {
        let cfg = GeneratorConfig {
            p_translate: 1.0,
            p_drop: 0.0,
            p_indirect: 0.0,
            ..small()
        };
        let (pairs, truth) = generate_pairs(&cfg).unwrap();
        let map: std::collections::HashMap<_, _> = truth.pairs.into_iter().collect();
        for (s, t) in pairs {
            let mut want: Vec<_> = s.iter().map(|w| map[w].clone()).collect();
            let mut got = t.clone();
            want.sort();
            got.sort();
            assert_eq!(want, got);
        }
    }

    #[test]
    fn bitext_lines_parse_back() {
        let (pairs, _) = generate_pairs(&small()).unwrap();
        let text = format_bitext(&pairs);
        let first = text.lines().next().unwrap();
        let (s, t) = crate::corpus::parse_bitext_line(first).unwrap().unwrap();
        assert_eq!(s, pairs[0].0.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(t, pairs[0].1.iter().map(String::as_str).collect::<Vec<_>>());
    }
}
