//! Seeded synthetic dataset generators and the duplicate-ratio measure.

use rand::distr::Uniform;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Exp, LogNormal, Normal, Zipf};
use thiserror::Error;

use crate::key::SortKey;

#[derive(Debug, Error, PartialEq)]
pub enum DatagenError {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },
    #[error("unknown parameter `{0}` for family {1}")]
    UnknownParam(String, String),
    #[error("unknown dataset family `{0}`")]
    UnknownFamily(String),
    #[error("family {0} generates continuous values; no u64 instantiation")]
    NotIntegral(String),
}

/// Dataset family with its parameters. Defaults mirror the benchmark setup:
/// Uniform over `[0, N)`, Normal(0, 1), Lognormal(0, 0.5), Chi-square(k=4),
/// Exponential(lambda=2), Zipf skew 0.9 over a universe of N ranks.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Uniform,
    Normal { mean: f64, std_dev: f64 },
    Lognormal { mu: f64, sigma: f64 },
    ChiSquare { k: f64 },
    Exponential { lambda: f64 },
    Zipf { skew: f64 },
    MixGauss,
    RootDups,
    TwoDups,
}

impl Family {
    pub const ALL_NAMES: [&'static str; 9] = [
        "uniform",
        "normal",
        "lognormal",
        "chi_square",
        "exponential",
        "zipf",
        "mix_gauss",
        "root_dups",
        "two_dups",
    ];

    /// Family by name, with default parameters.
    pub fn from_name(name: &str) -> Result<Self, DatagenError> {
        Ok(match name {
            "uniform" => Family::Uniform,
            "normal" => Family::Normal {
                mean: 0.0,
                std_dev: 1.0,
            },
            "lognormal" => Family::Lognormal { mu: 0.0, sigma: 0.5 },
            "chi_square" => Family::ChiSquare { k: 4.0 },
            "exponential" => Family::Exponential { lambda: 2.0 },
            "zipf" => Family::Zipf { skew: 0.9 },
            "mix_gauss" => Family::MixGauss,
            "root_dups" => Family::RootDups,
            "two_dups" => Family::TwoDups,
            other => return Err(DatagenError::UnknownFamily(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Normal { .. } => "normal",
            Family::Lognormal { .. } => "lognormal",
            Family::ChiSquare { .. } => "chi_square",
            Family::Exponential { .. } => "exponential",
            Family::Zipf { .. } => "zipf",
            Family::MixGauss => "mix_gauss",
            Family::RootDups => "root_dups",
            Family::TwoDups => "two_dups",
        }
    }

    /// Applies a `key=value` parameter override.
    pub fn set_param(&mut self, key: &str, value: f64) -> Result<(), DatagenError> {
        match (self, key) {
            (Family::Normal { mean, .. }, "mu" | "mean") => *mean = value,
            (Family::Normal { std_dev, .. }, "sigma" | "std_dev") => *std_dev = value,
            (Family::Lognormal { mu, .. }, "mu") => *mu = value,
            (Family::Lognormal { sigma, .. }, "sigma") => *sigma = value,
            (Family::ChiSquare { k }, "k") => *k = value,
            (Family::Exponential { lambda }, "lambda") => *lambda = value,
            (Family::Zipf { skew }, "skew" | "s") => *skew = value,
            (me, other) => {
                return Err(DatagenError::UnknownParam(
                    other.to_string(),
                    me.name().to_string(),
                ))
            }
        }
        Ok(())
    }

    /// Whether the family produces integer-valued keys (and therefore has a
    /// `u64` instantiation).
    pub fn is_integral(&self) -> bool {
        matches!(
            self,
            Family::Uniform | Family::Zipf { .. } | Family::RootDups | Family::TwoDups
        )
    }

    fn validate(&self) -> Result<(), DatagenError> {
        let bad = |name: &'static str, reason: String| Err(DatagenError::InvalidParam { name, reason });
        match *self {
            Family::Normal { std_dev, .. } if !(std_dev > 0.0) => {
                bad("sigma", format!("must be > 0, got {std_dev}"))
            }
            Family::Lognormal { sigma, .. } if !(sigma > 0.0) => {
                bad("sigma", format!("must be > 0, got {sigma}"))
            }
            Family::ChiSquare { k } if !(k > 0.0) => bad("k", format!("must be > 0, got {k}")),
            Family::Exponential { lambda } if !(lambda > 0.0) => {
                bad("lambda", format!("must be > 0, got {lambda}"))
            }
            Family::Zipf { skew } if !(skew > 0.0) => {
                bad("skew", format!("must be > 0, got {skew}"))
            }
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Family::Normal { mean, std_dev } => write!(f, "normal(mu={mean};sigma={std_dev})"),
            Family::Lognormal { mu, sigma } => write!(f, "lognormal(mu={mu};sigma={sigma})"),
            Family::ChiSquare { k } => write!(f, "chi_square(k={k})"),
            Family::Exponential { lambda } => write!(f, "exponential(lambda={lambda})"),
            Family::Zipf { skew } => write!(f, "zipf(skew={skew})"),
            _ => f.write_str(self.name()),
        }
    }
}

/// A fully specified dataset: family, size and seed.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self { family, n, seed }
    }

    pub fn label(&self) -> String {
        self.family.to_string()
    }
}

/// Generates the dataset as 64-bit floats. Deterministic in the spec.
pub fn generate_f64(spec: &DatasetSpec) -> Result<Vec<f64>, DatagenError> {
    spec.family.validate()?;
    let n = spec.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let keys = match spec.family {
        Family::Uniform => {
            let d = Uniform::new(0.0, n as f64).expect("n > 0");
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
        Family::Normal { mean, std_dev } => {
            let d = Normal::new(mean, std_dev).expect("validated");
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
        Family::Lognormal { mu, sigma } => {
            let d = LogNormal::new(mu, sigma).expect("validated");
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
        Family::ChiSquare { k } => {
            let d = ChiSquared::new(k).expect("validated");
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
        Family::Exponential { lambda } => {
            let d = Exp::new(lambda).expect("validated");
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
        Family::Zipf { skew } => {
            let d = zipf_over_n_ranks(n, skew);
            (0..n)
                .map(|_| scramble_rank_53(d.sample(&mut rng) as u64) as f64)
                .collect()
        }
        Family::MixGauss => mix_gauss(n, &mut rng),
        Family::RootDups => {
            let m = isqrt(n).max(1);
            (0..n).map(|i| (i % m) as f64).collect()
        }
        Family::TwoDups => (0..n).map(|i| two_dups_value(i, n) as f64).collect(),
    };
    Ok(keys)
}

/// Generates the dataset as 64-bit unsigned integers. Only integer-valued
/// families (uniform, zipf, root_dups, two_dups) support this instantiation.
pub fn generate_u64(spec: &DatasetSpec) -> Result<Vec<u64>, DatagenError> {
    spec.family.validate()?;
    if !spec.family.is_integral() {
        return Err(DatagenError::NotIntegral(spec.family.name().to_string()));
    }
    let n = spec.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let keys = match spec.family {
        Family::Uniform => {
            let d = Uniform::new(0u64, n as u64).expect("n > 0");
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
        Family::Zipf { skew } => {
            let d = zipf_over_n_ranks(n, skew);
            (0..n)
                .map(|_| scramble_rank_64(d.sample(&mut rng) as u64))
                .collect()
        }
        Family::RootDups => {
            let m = isqrt(n).max(1);
            (0..n).map(|i| (i % m) as u64).collect()
        }
        Family::TwoDups => (0..n).map(|i| two_dups_value(i, n)).collect(),
        _ => unreachable!("integral families are handled above"),
    };
    Ok(keys)
}

/// Zipf law over a universe of `n` ranks (rejection-inversion sampler).
fn zipf_over_n_ranks(n: usize, skew: f64) -> Zipf<f64> {
    Zipf::new(n as f64, skew).expect("validated skew and n > 0")
}

/// Injective scrambling of a Zipf rank into a key value.
///
/// The Zipfian datasets exercise duplication: equal ranks must stay equal
/// keys (the duplicate ratio is untouched by any injective map), but emitting
/// the raw rank would additionally impose a heavily concentrated value
/// distribution, which is a property of the rank encoding rather than of the
/// duplication being stressed. Multiplying by an odd constant is a bijection
/// modulo a power of two, so ranks spread uniformly over the key space while
/// every duplicate structure survives bit for bit.
const RANK_SCRAMBLE: u64 = 0x9E37_79B9_7F4A_7C15;

fn scramble_rank_64(rank: u64) -> u64 {
    rank.wrapping_mul(RANK_SCRAMBLE)
}

/// Scramble into `[0, 2^53)` so the value is exactly representable as `f64`.
fn scramble_rank_53(rank: u64) -> u64 {
    rank.wrapping_mul(RANK_SCRAMBLE) & ((1 << 53) - 1)
}

/// `A[i] = (i^2 + N/2) mod N`.
fn two_dups_value(i: usize, n: usize) -> u64 {
    let n = n as u128;
    let i = i as u128;
    ((i * i + n / 2) % n) as u64
}

/// Additive mixture of five Gaussians; means ~ U(0, 100), standard
/// deviations ~ U(0.5, 10), weights uniform on the simplex, all drawn from
/// the dataset seed before the keys.
fn mix_gauss(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    const COMPONENTS: usize = 5;
    let mean_d = Uniform::new(0.0, 100.0).unwrap();
    let sd_d = Uniform::new(0.5, 10.0).unwrap();
    let comps: Vec<Normal<f64>> = (0..COMPONENTS)
        .map(|_| {
            let mean = mean_d.sample(rng);
            let sd = sd_d.sample(rng);
            Normal::new(mean, sd).expect("sd > 0")
        })
        .collect();
    // Exponential draws normalized onto the simplex = flat Dirichlet weights.
    let exp = Exp::new(1.0).unwrap();
    let raw: Vec<f64> = (0..COMPONENTS).map(|_| exp.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let mut cumulative = Vec::with_capacity(COMPONENTS);
    let mut acc = 0.0;
    for w in &raw {
        acc += w / total;
        cumulative.push(acc);
    }
    cumulative[COMPONENTS - 1] = 1.0;

    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let c = cumulative.partition_point(|&w| w < u).min(COMPONENTS - 1);
            comps[c].sample(rng)
        })
        .collect()
}

fn isqrt(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut m = (n as f64).sqrt() as usize;
    while m * m > n {
        m -= 1;
    }
    while (m + 1) * (m + 1) <= n {
        m += 1;
    }
    m
}

/// `1 - distinct/n`; 0 for empty input.
pub fn duplicate_ratio<K: SortKey>(keys: &[K]) -> f64 {
    if keys.is_empty() {
        return 0.0;
    }
    let mut images: Vec<u64> = keys.iter().map(|k| k.to_radix()).collect();
    images.sort_unstable();
    let distinct = 1 + images.windows(2).filter(|w| w[0] != w[1]).count();
    1.0 - distinct as f64 / keys.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_dups_formula() {
        let spec = DatasetSpec::new(Family::RootDups, 16, 0);
        assert_eq!(
            generate_u64(&spec).unwrap(),
            vec![0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3]
        );
    }

    #[test]
    fn two_dups_formula() {
        let spec = DatasetSpec::new(Family::TwoDups, 8, 0);
        assert_eq!(generate_u64(&spec).unwrap(), vec![4, 5, 0, 5, 4, 5, 0, 5]);
        assert_eq!(generate_f64(&spec).unwrap(), vec![4.0, 5.0, 0.0, 5.0, 4.0, 5.0, 0.0, 5.0]);
    }

    #[test]
    fn formulas_match_closed_forms_exhaustively() {
        let n = 10_000;
        let root = generate_u64(&DatasetSpec::new(Family::RootDups, n, 3)).unwrap();
        let m = isqrt(n);
        assert_eq!(m, 100);
        for (i, &v) in root.iter().enumerate() {
            assert_eq!(v, (i % m) as u64);
        }
        let two = generate_u64(&DatasetSpec::new(Family::TwoDups, n, 3)).unwrap();
        for (i, &v) in two.iter().enumerate() {
            assert_eq!(v as u128, (i as u128 * i as u128 + n as u128 / 2) % n as u128);
        }
    }

    #[test]
    fn duplicate_ratio_examples() {
        assert_eq!(duplicate_ratio(&[1u64, 2, 3]), 0.0);
        assert_eq!(duplicate_ratio(&[7u64, 7, 7, 7]), 0.75);
        assert_eq!(duplicate_ratio::<f64>(&[]), 0.0);
        let two = generate_u64(&DatasetSpec::new(Family::TwoDups, 8, 0)).unwrap();
        assert_eq!(duplicate_ratio(&two), 1.0 - 3.0 / 8.0);
    }

    #[test]
    fn generation_is_deterministic() {
        for name in Family::ALL_NAMES {
            let spec = DatasetSpec::new(Family::from_name(name).unwrap(), 2000, 99);
            let a = generate_f64(&spec).unwrap();
            let b = generate_f64(&spec).unwrap();
            assert_eq!(a, b, "family {name} not deterministic");
        }
    }

    #[test]
    fn continuous_families_have_no_duplicates() {
        for name in ["uniform", "normal", "lognormal", "chi_square", "exponential", "mix_gauss"] {
            let spec = DatasetSpec::new(Family::from_name(name).unwrap(), 100_000, 5);
            let keys = generate_f64(&spec).unwrap();
            let ratio = duplicate_ratio(&keys);
            assert!(ratio < 0.001, "family {name} has dup ratio {ratio}");
        }
    }

    #[test]
    fn zipf_duplicates_grow_with_skew() {
        let mut prev = -1.0;
        for skew in [0.5, 0.6, 0.7, 0.8, 0.9, 0.99] {
            let spec = DatasetSpec::new(Family::Zipf { skew }, 100_000, 11);
            let ratio = duplicate_ratio(&generate_f64(&spec).unwrap());
            assert!(
                ratio >= prev,
                "dup ratio not monotone at skew {skew}: {ratio} < {prev}"
            );
            prev = ratio;
        }
        assert!(prev > 0.5, "skew 0.99 should be duplicate-heavy, got {prev}");
    }

    #[test]
    fn invalid_params_name_the_parameter() {
        let spec = DatasetSpec::new(Family::Zipf { skew: 0.0 }, 10, 0);
        match generate_f64(&spec).unwrap_err() {
            DatagenError::InvalidParam { name, .. } => assert_eq!(name, "skew"),
            other => panic!("unexpected error {other:?}"),
        }
        let spec = DatasetSpec::new(Family::Normal { mean: 0.0, std_dev: -1.0 }, 10, 0);
        assert!(matches!(
            generate_f64(&spec).unwrap_err(),
            DatagenError::InvalidParam { name: "sigma", .. }
        ));
    }

    #[test]
    fn u64_only_for_integral_families() {
        let spec = DatasetSpec::new(Family::Normal { mean: 0.0, std_dev: 1.0 }, 10, 0);
        assert!(matches!(
            generate_u64(&spec).unwrap_err(),
            DatagenError::NotIntegral(_)
        ));
    }

    #[test]
    fn empty_spec_generates_empty() {
        let spec = DatasetSpec::new(Family::Uniform, 0, 0);
        assert!(generate_f64(&spec).unwrap().is_empty());
        assert!(generate_u64(&spec).unwrap().is_empty());
    }
}
