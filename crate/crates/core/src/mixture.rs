//! Two-binomial link model.
//!
//! Each entry E was linked k times out of its n co-occurrences. Correct
//! entries are linked with probability `lambda_right`, incorrect ones with
//! `lambda_wrong`, and a fraction `tau` of co-occurring pairs are correct.
//! Since the overall link rate `lambda = K/N` is observed directly, `tau`
//! is pinned by the two rates and only those two are optimized.

use std::collections::BTreeMap;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::simplex::NelderMead;

/// Probabilities are kept inside `[PROB_FLOOR, 1 - PROB_FLOOR]`.
pub const PROB_FLOOR: f64 = 1e-9;

/// Estimated model parameters for one cleaning iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureParams {
    pub lambda_right: f64,
    pub lambda_wrong: f64,
    /// K/N
    pub lambda: f64,
    pub tau: f64,
    pub total_links: u64,
    pub total_cooc: u64,
    /// ln Pr(data | model), binomial coefficients included.
    pub log_data_prob: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Every co-occurrence was linked (K = N); the rates were pinned rather
    /// than estimated.
    pub saturated: bool,
}

impl MixtureParams {
    /// Parameters with `tau` and `lambda` derived from fixed rates, for
    /// scoring without estimation.
    pub fn from_rates(lambda_right: f64, lambda_wrong: f64, total_links: u64, total_cooc: u64) -> Self {
        let lambda = link_rate(total_links, total_cooc);
        MixtureParams {
            lambda_right,
            lambda_wrong,
            lambda,
            tau: (lambda - lambda_wrong) / (lambda_right - lambda_wrong),
            total_links,
            total_cooc,
            log_data_prob: f64::NAN,
            converged: true,
            iterations: 0,
            saturated: false,
        }
    }

    /// ln L for an entry linked `k` times out of `n`.
    pub fn score(&self, k: u64, n: u64) -> f64 {
        likelihood_ratio_log(k, n, self)
    }
}

fn link_rate(k: u64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

/// ln C(n, k).
pub fn log_binomial_coefficient(n: u64, k: u64) -> f64 {
    if k == 0 || k == n {
        return 0.0;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `k·ln p + (n−k)·ln(1−p)` with `0·ln 0 = 0`.
fn log_kernel(k: u64, n: u64, p: f64) -> f64 {
    let hits = if k == 0 { 0.0 } else { k as f64 * p.ln() };
    let misses = if k == n { 0.0 } else { (n - k) as f64 * (-p).ln_1p() };
    hits + misses
}

/// ln B(k, n, p), the binomial log-probability of `k` successes in `n`
/// trials.
pub fn binomial_log_pmf(k: u64, n: u64, p: f64) -> Result<f64> {
    if k > n {
        return Err(Error::BinomialDomain { k, n });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Estimation(format!("probability {p} outside [0, 1]")));
    }
    Ok(log_binomial_coefficient(n, k) + log_kernel(k, n, p))
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// The (k, n) histogram of a set of entries: the sufficient statistics of
/// the mixture.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tallies {
    classes: BTreeMap<(u64, u64), u64>,
    total_links: u64,
    total_cooc: u64,
}

impl Tallies {
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut t = Tallies::default();
        for (k, n) in pairs {
            if k > n {
                return Err(Error::BinomialDomain { k, n });
            }
            *t.classes.entry((k, n)).or_default() += 1;
            t.total_links += k;
            t.total_cooc += n;
        }
        Ok(t)
    }

    pub fn from_lexicon(lexicon: &Lexicon) -> Result<Self> {
        Tallies::from_pairs(lexicon.entries().iter().map(|e| (e.links, e.cooc)))
    }

    /// K
    pub fn total_links(&self) -> u64 {
        self.total_links
    }

    /// N
    pub fn total_cooc(&self) -> u64 {
        self.total_cooc
    }

    pub fn num_entries(&self) -> u64 {
        self.classes.values().sum()
    }

    /// `((k, n), multiplicity)` in ascending (k, n) order.
    pub fn classes(&self) -> impl Iterator<Item = ((u64, u64), u64)> + '_ {
        self.classes.iter().map(|(&kn, &m)| (kn, m))
    }

    pub fn link_rate(&self) -> f64 {
        link_rate(self.total_links, self.total_cooc)
    }
}

/// `tau` implied by the two rates and the observed link rate.
pub fn implied_tau(lambda: f64, lambda_right: f64, lambda_wrong: f64) -> f64 {
    (lambda - lambda_wrong) / (lambda_right - lambda_wrong)
}

/// Σ_E ln[τ·B(k_E, n_E, λ_right) + (1−τ)·B(k_E, n_E, λ_wrong)].
///
/// Returns `-inf` unless `lambda_wrong < K/N < lambda_right`.
pub fn mixture_log_likelihood(tallies: &Tallies, lambda_right: f64, lambda_wrong: f64) -> f64 {
    let lambda = tallies.link_rate();
    if !(lambda_wrong < lambda && lambda < lambda_right)
        || !(0.0..=1.0).contains(&lambda_wrong)
        || !(0.0..=1.0).contains(&lambda_right)
    {
        return f64::NEG_INFINITY;
    }
    let tau = implied_tau(lambda, lambda_right, lambda_wrong);
    let (ln_tau, ln_not_tau) = (tau.ln(), (-tau).ln_1p());
    tallies
        .classes()
        .map(|((k, n), count)| {
            let coef = log_binomial_coefficient(n, k);
            let right = ln_tau + log_kernel(k, n, lambda_right);
            let wrong = ln_not_tau + log_kernel(k, n, lambda_wrong);
            count as f64 * (coef + log_sum_exp(right, wrong))
        })
        .sum()
}

/// ln L(E) = ln B(k, n, λ_right) − ln B(k, n, λ_wrong); the binomial
/// coefficients cancel.
pub fn likelihood_ratio_log(k: u64, n: u64, params: &MixtureParams) -> f64 {
    rates_log_ratio(k, n, params.lambda_right, params.lambda_wrong)
}

pub(crate) fn rates_log_ratio(k: u64, n: u64, lambda_right: f64, lambda_wrong: f64) -> f64 {
    let hit = if k == 0 {
        0.0
    } else {
        k as f64 * (lambda_right.ln() - lambda_wrong.ln())
    };
    let miss = if k == n {
        0.0
    } else {
        (n - k) as f64 * ((-lambda_right).ln_1p() - (-lambda_wrong).ln_1p())
    };
    hit + miss
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_FLOOR, 1.0 - PROB_FLOOR)
}

fn logistic(x: f64) -> f64 {
    clamp_prob(1.0 / (1.0 + (-x).exp()))
}

fn logit(p: f64) -> f64 {
    let p = clamp_prob(p);
    (p / (1.0 - p)).ln()
}

/// Settings for [`estimate_params_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorConfig {
    pub start_right: f64,
    pub start_wrong: f64,
    pub simplex: NelderMead,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            start_right: 1.0 - 1e-6,
            start_wrong: 1e-6,
            simplex: NelderMead::default(),
        }
    }
}

/// Maximum-likelihood `(lambda_right, lambda_wrong)` with default settings.
pub fn estimate_params(tallies: &Tallies) -> Result<MixtureParams> {
    estimate_params_with(tallies, &EstimatorConfig::default())
}

/// Maximizes [`mixture_log_likelihood`] with a Nelder–Mead simplex over the
/// logits of the two rates.
pub fn estimate_params_with(tallies: &Tallies, config: &EstimatorConfig) -> Result<MixtureParams> {
    let (k, n) = (tallies.total_links(), tallies.total_cooc());
    if k == 0 {
        return Err(Error::Estimation("no links; lexicon empty after discard".into()));
    }
    let lambda = link_rate(k, n);
    if k == n {
        log::warn!("all {n} co-occurrences are linked; lambda_right pinned to 1");
        let (right, wrong) = (1.0, PROB_FLOOR);
        let log_data_prob = tallies
            .classes()
            .map(|((k, n), count)| count as f64 * log_kernel(k, n, right))
            .sum();
        return Ok(MixtureParams {
            lambda_right: right,
            lambda_wrong: wrong,
            lambda,
            tau: implied_tau(lambda, right, wrong),
            total_links: k,
            total_cooc: n,
            log_data_prob,
            converged: true,
            iterations: 0,
            saturated: true,
        });
    }

    let objective = |x: &[f64]| -mixture_log_likelihood(tallies, logistic(x[0]), logistic(x[1]));
    let mut start = [logit(config.start_right), logit(config.start_wrong)];
    if !objective(&start).is_finite() {
        start = [logit((1.0 + lambda) / 2.0), logit(lambda / 2.0)];
    }
    let min = config.simplex.minimize(objective, &start);
    let (right, wrong) = (logistic(min.x[0]), logistic(min.x[1]));
    let log_data_prob = mixture_log_likelihood(tallies, right, wrong);
    if !log_data_prob.is_finite() {
        return Err(Error::Estimation(format!(
            "no feasible rates found for K={k}, N={n}"
        )));
    }
    Ok(MixtureParams {
        lambda_right: right,
        lambda_wrong: wrong,
        lambda,
        tau: implied_tau(lambda, right, wrong),
        total_links: k,
        total_cooc: n,
        log_data_prob,
        converged: min.converged,
        iterations: min.iterations,
        saturated: false,
    })
}
