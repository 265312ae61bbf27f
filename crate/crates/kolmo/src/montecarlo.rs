//! Monte Carlo analogues of the zero--one laws.
//!
//! A window is `N` coin flips; the statistic is the indicator of
//! `mean ≥ θ`. The Kolmogorov demo flips an i.i.d. coin, so the empirical
//! probability collapses towards 0 or 1 as `N` grows. The Hewitt--Savage
//! negative control first draws the bias once per window from a mixture and
//! then flips i.i.d.: the sequence is exchangeable but not independent, and
//! the probability stays strictly inside `(0, 1)`.
//!
//! Reproducibility: window `w` is simulated by `ChaCha8Rng::seed_from_u64(seed)`
//! on stream `w`, so the estimate depends on the seed only; shards split the
//! windows into contiguous blocks whose positive counts are summed. Flips are
//! exact rational Bernoulli draws (`gen_range(0..den) < num`). Floating point
//! appears only in the final ratio and the oracle bound.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::json::parse_rational;
use crate::report::{Case, Report};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("bad probability `{0}`")]
    BadProbability(String),
    #[error("invalid Monte Carlo configuration: {0}")]
    Invalid(String),
}

/// A probability `num/den` with `den ≤ 2³²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prob {
    num: u64,
    den: u64,
}

impl Prob {
    pub fn new(num: u64, den: u64) -> Result<Self, ConfigError> {
        let shown = format!("{num}/{den}");
        if den == 0 || num > den || den > 1 << 32 {
            return Err(ConfigError::BadProbability(shown));
        }
        let g = gcd(num, den);
        Ok(Prob { num: num / g, den: den / g })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn flip<R: Rng>(&self, rng: &mut R) -> bool {
        rng.gen_range(0..self.den) < self.num
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl FromStr for Prob {
    type Err = ConfigError;

    /// `"1/2"`, `"0.3"`, `"1"`.
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError::BadProbability(s.to_string());
        let q = parse_rational(s.trim()).ok_or_else(bad)?;
        let num = q.numer().to_u64().ok_or_else(bad)?;
        let den = q.denom().to_u64().ok_or_else(bad)?;
        Prob::new(num, den).map_err(|_| bad())
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloConfig {
    /// One bias for the Kolmogorov demo; the mixture components otherwise.
    pub biases: Vec<Prob>,
    /// Mixture weights, summing to one; ignored for a single bias.
    pub weights: Vec<Prob>,
    pub theta: Prob,
    /// Flips per window, `N`.
    pub window: u64,
    pub samples: u64,
    pub seed: u64,
    pub shards: usize,
}

impl MonteCarloConfig {
    pub fn kolmogorov(q: Prob, theta: Prob, window: u64, samples: u64, seed: u64) -> Self {
        MonteCarloConfig {
            biases: vec![q],
            weights: vec![Prob { num: 1, den: 1 }],
            theta,
            window,
            samples,
            seed,
            shards: 1,
        }
    }

    pub fn mixture(biases: Vec<Prob>, weights: Vec<Prob>, theta: Prob, window: u64, samples: u64, seed: u64) -> Self {
        MonteCarloConfig {
            biases,
            weights,
            theta,
            window,
            samples,
            seed,
            shards: 1,
        }
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shards = shards;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        if self.window == 0 || self.samples == 0 {
            return bad("window and sample count must be ≥ 1");
        }
        if self.shards == 0 {
            return bad("shard count must be ≥ 1");
        }
        if self.biases.is_empty() || self.biases.len() != self.weights.len() {
            return bad("need one weight per bias");
        }
        if self.weights.len() > 2 {
            return bad("at most two mixture components");
        }
        // Σ num_k/den_k = 1, checked over the product of denominators
        let total: u128 = self.weights.iter().map(|w| w.den as u128).product();
        let sum: u128 = self.weights.iter().map(|w| w.num as u128 * (total / w.den as u128)).sum();
        if sum != total {
            return bad("mixture weights must sum to 1");
        }
        Ok(())
    }

    /// Index of the mixture component drawn by `u ∈ [0, 1)` scaled to the
    /// common denominator.
    fn component<R: Rng>(&self, rng: &mut R) -> usize {
        if self.biases.len() == 1 {
            return 0;
        }
        let total: u64 = self.weights.iter().map(|w| w.den).product();
        let u = rng.gen_range(0..total);
        let mut acc = 0u64;
        for (k, w) in self.weights.iter().enumerate() {
            acc += w.num * (total / w.den);
            if u < acc {
                return k;
            }
        }
        self.weights.len() - 1
    }

    /// Simulates window `w`: `mean ≥ θ`.
    fn window_statistic(&self, w: u64) -> (usize, bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(w);
        let k = self.component(&mut rng);
        let bias = self.biases[k];
        let ones = (0..self.window).filter(|_| bias.flip(&mut rng)).count() as u128;
        // ones / N ≥ θ.num / θ.den
        (k, ones * self.theta.den as u128 >= self.theta.num as u128 * self.window as u128)
    }

    /// Bounds on the true `P(mean ≥ θ)` from Hoeffding's inequality,
    /// `exp(−2N(θ − q)²)` per component, averaged over the mixture.
    pub fn oracle_band(&self) -> (f64, f64) {
        let theta = self.theta.as_f64();
        let n = self.window as f64;
        let (mut lo, mut hi) = (0.0, 0.0);
        for (b, w) in self.biases.iter().zip(&self.weights) {
            let q = b.as_f64();
            let h = (-2.0 * n * (theta - q).powi(2)).exp();
            let (l, u) = if theta > q {
                (0.0, h)
            } else if theta < q {
                (1.0 - h, 1.0)
            } else {
                (0.0, 1.0)
            };
            lo += w.as_f64() * l;
            hi += w.as_f64() * u;
        }
        (lo, hi.min(1.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloResult {
    pub positives: u64,
    pub samples: u64,
    /// Windows drawn from each mixture component.
    pub per_component: Vec<u64>,
    pub estimate: f64,
    pub oracle_band: (f64, f64),
}

impl MonteCarloResult {
    /// Empirical probability inside the oracle band widened by four
    /// binomial standard errors.
    pub fn within_oracle(&self) -> bool {
        let tol = 4.0 * (0.25 / self.samples as f64).sqrt();
        self.estimate >= self.oracle_band.0 - tol && self.estimate <= self.oracle_band.1 + tol
    }
}

/// Runs the configured simulation.
pub fn simulate(cfg: &MonteCarloConfig) -> Result<MonteCarloResult, ConfigError> {
    cfg.validate()?;
    let shards = cfg.shards as u64;
    let (base, extra) = (cfg.samples / shards, cfg.samples % shards);
    let blocks: Vec<(u64, u64)> = (0..shards)
        .scan(0u64, |start, s| {
            let len = base + u64::from(s < extra);
            let block = (*start, *start + len);
            *start += len;
            Some(block)
        })
        .collect();
    let k = cfg.biases.len();
    let counts: Vec<(u64, Vec<u64>)> = blocks
        .par_iter()
        .map(|&(from, to)| {
            let mut per = vec![0u64; k];
            let mut pos = 0u64;
            for w in from..to {
                let (c, hit) = cfg.window_statistic(w);
                per[c] += 1;
                pos += u64::from(hit);
            }
            (pos, per)
        })
        .collect();
    let positives = counts.iter().map(|c| c.0).sum();
    let per_component = (0..k).map(|j| counts.iter().map(|c| c.1[j]).sum()).collect();
    Ok(MonteCarloResult {
        positives,
        samples: cfg.samples,
        per_component,
        estimate: positives as f64 / cfg.samples as f64,
        oracle_band: cfg.oracle_band(),
    })
}

/// Kolmogorov demo: needs a single bias.
pub fn simulate_kolmogorov_demo(cfg: &MonteCarloConfig) -> Result<MonteCarloResult, ConfigError> {
    if cfg.biases.len() != 1 {
        return Err(ConfigError::Invalid("the Kolmogorov demo takes a single bias".into()));
    }
    simulate(cfg)
}

/// Hewitt--Savage negative control: a mixture of biases.
pub fn simulate_hs_negative_control(cfg: &MonteCarloConfig) -> Result<MonteCarloResult, ConfigError> {
    if cfg.biases.len() < 2 {
        return Err(ConfigError::Invalid("the negative control needs at least two biases".into()));
    }
    simulate(cfg)
}

/// A report with one case; it passes when the estimate lies inside the
/// widened oracle band.
pub fn report(suite: &str, cfg: &MonteCarloConfig, res: &MonteCarloResult) -> Report {
    let biases: Vec<String> = cfg.biases.iter().map(ToString::to_string).collect();
    let weights: Vec<String> = cfg.weights.iter().map(ToString::to_string).collect();
    let name = format!(
        "P(mean ≥ {}) with biases [{}], weights [{}], N = {}, samples = {}, shards = {}",
        cfg.theta,
        biases.join(", "),
        weights.join(", "),
        cfg.window,
        cfg.samples,
        cfg.shards
    );
    let detail = format!(
        "empirical {:.6} ({} of {}), windows per component {:?}, oracle band [{:.6}, {:.6}]",
        res.estimate, res.positives, res.samples, res.per_component, res.oracle_band.0, res.oracle_band.1
    );
    let mut r = Report::new(suite, Some(cfg.seed));
    r.push(if res.within_oracle() {
        Case::pass(name, detail)
    } else {
        Case::fail(name, format!("estimate {:.6}", res.estimate), detail)
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Prob {
        s.parse().unwrap()
    }

    #[test]
    fn probabilities() {
        assert_eq!(p("0.3"), Prob::new(3, 10).unwrap());
        assert_eq!(p("2/4"), Prob::new(1, 2).unwrap());
        assert_eq!(p("1").to_string(), "1");
        assert!("3/2".parse::<Prob>().is_err());
        assert!("-0.5".parse::<Prob>().is_err());
        assert!("x".parse::<Prob>().is_err());
    }

    #[test]
    fn certain_coin_gives_one() {
        let cfg = MonteCarloConfig::kolmogorov(p("1"), p("1/2"), 50, 200, 3);
        let r = simulate_kolmogorov_demo(&cfg).unwrap();
        assert_eq!(r.estimate, 1.0);
        let cfg = MonteCarloConfig::kolmogorov(p("0"), p("1/2"), 50, 200, 3);
        assert_eq!(simulate(&cfg).unwrap().estimate, 0.0);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = MonteCarloConfig::kolmogorov(p("1/2"), p("1/2"), 0, 10, 0);
        assert!(simulate(&cfg).is_err());
        cfg.window = 10;
        cfg.shards = 0;
        assert!(simulate(&cfg).is_err());
        let m = MonteCarloConfig::mixture(vec![p("0.3"), p("0.7")], vec![p("1/2"), p("1/3")], p("1/2"), 10, 10, 0);
        assert!(simulate(&m).is_err());
        assert!(simulate_kolmogorov_demo(&MonteCarloConfig { weights: vec![p("1/2"), p("1/2")], ..m.clone() }).is_err());
        assert!(simulate_hs_negative_control(&MonteCarloConfig::kolmogorov(p("1/2"), p("1/2"), 5, 5, 0)).is_err());
    }

    #[test]
    fn shards_do_not_change_the_estimate() {
        let cfg = MonteCarloConfig::kolmogorov(p("1/2"), p("1/2"), 101, 500, 11);
        let one = simulate(&cfg).unwrap();
        for shards in [2, 3, 7] {
            assert_eq!(simulate(&cfg.clone().with_shards(shards)).unwrap(), one);
        }
    }

    #[test]
    fn degenerate_mixtures() {
        let single = MonteCarloConfig::kolmogorov(p("0.3"), p("1/2"), 200, 400, 5);
        // weight {1, 0}: the second component is never drawn
        let m = MonteCarloConfig::mixture(vec![p("0.3"), p("0.7")], vec![p("1"), p("0")], p("1/2"), 200, 400, 5);
        let r = simulate_hs_negative_control(&m).unwrap();
        assert_eq!(r.per_component, vec![400, 0]);
        assert_eq!(r.estimate, simulate(&single).unwrap().estimate);
        // identical components reduce to the single coin
        let fair = MonteCarloConfig::kolmogorov(p("1/2"), p("1/2"), 200, 2000, 5);
        let m = MonteCarloConfig::mixture(vec![p("1/2"), p("1/2")], vec![p("1/2"), p("1/2")], p("1/2"), 200, 2000, 5);
        let (a, b) = (simulate(&fair).unwrap().estimate, simulate(&m).unwrap().estimate);
        assert!((a - b).abs() < 0.06, "{a} vs {b}");
    }

    #[test]
    fn oracle_band_shapes() {
        let cfg = MonteCarloConfig::kolmogorov(p("1/2"), p("3/5"), 10_000, 1, 0);
        let (lo, hi) = cfg.oracle_band();
        assert_eq!(lo, 0.0);
        assert!(hi < 1e-80);
        let cfg = MonteCarloConfig::kolmogorov(p("1/2"), p("2/5"), 10_000, 1, 0);
        assert!(cfg.oracle_band().0 >= 1.0 - 1e-80);
    }
}
