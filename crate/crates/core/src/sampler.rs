//! Exact sampling from rational distributions with fair coin flips
//! (Knuth–Yao), plus random-bit accounting.
//!
//! The generating tree is never materialized. Level `k` of the tree has a
//! leaf for outcome `i` exactly when the `k`-th binary digit of `p_i / q` is
//! 1; lower indices take the lower-numbered leaves. The walk tracks only the
//! position `d` among the nodes of the current level.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::game::MixedStrategy;

/// Walks deeper than this are treated as a bug rather than bad luck.
pub const DEPTH_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplerError {
    #[error("sampler did not terminate within {0} bits")]
    SamplerStall(usize),
    #[error("bit source exhausted")]
    BitsExhausted,
}

/// A stream of fair bits that counts what it hands out.
pub trait BitSource {
    fn next_bit(&mut self) -> Option<bool>;
    fn bits_consumed(&self) -> u64;
}

/// Seeded ChaCha8 stream, most significant bit of each word first.
#[derive(Debug, Clone)]
pub struct SeededBits {
    rng: ChaCha8Rng,
    word: u64,
    left: u32,
    consumed: u64,
}

impl SeededBits {
    pub fn new(seed: u64) -> Self {
        SeededBits { rng: ChaCha8Rng::seed_from_u64(seed), word: 0, left: 0, consumed: 0 }
    }
}

impl BitSource for SeededBits {
    fn next_bit(&mut self) -> Option<bool> {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        self.left -= 1;
        self.consumed += 1;
        Some((self.word >> self.left) & 1 == 1)
    }

    fn bits_consumed(&self) -> u64 {
        self.consumed
    }
}

/// A fixed bit string, for tests and worked examples.
#[derive(Debug, Clone)]
pub struct ScriptedBits {
    bits: Vec<bool>,
    pos: usize,
}

impl ScriptedBits {
    pub fn new(bits: Vec<bool>) -> Self {
        ScriptedBits { bits, pos: 0 }
    }

    /// From a string of `0`/`1` characters; anything else is ignored.
    pub fn parse(s: &str) -> Self {
        Self::new(s.chars().filter_map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        }).collect())
    }
}

impl BitSource for ScriptedBits {
    fn next_bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos).copied();
        if bit.is_some() {
            self.pos += 1;
        }
        bit
    }

    fn bits_consumed(&self) -> u64 {
        self.pos as u64
    }
}

/// Binary digits of all `p_i / q`, one level at a time.
struct DigitStream<'a> {
    q: &'a BigInt,
    rem: Vec<BigInt>,
    started: bool,
}

impl<'a> DigitStream<'a> {
    fn new(x: &'a MixedStrategy) -> Self {
        DigitStream { q: x.denominator(), rem: x.numerators().to_vec(), started: false }
    }

    /// Digits of the next level; level 0 is the integer part.
    fn next_level(&mut self, digits: &mut Vec<bool>) {
        digits.clear();
        for r in self.rem.iter_mut() {
            if self.started {
                *r <<= 1;
            }
            let one = &*r >= self.q;
            if one {
                *r -= self.q;
            }
            digits.push(one);
        }
        self.started = true;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdgSampler {
    target: MixedStrategy,
}

impl DdgSampler {
    pub fn build(target: MixedStrategy) -> Self {
        DdgSampler { target }
    }

    pub fn target(&self) -> &MixedStrategy {
        &self.target
    }

    /// One exact sample (0-based outcome index).
    pub fn sample(&self, bits: &mut impl BitSource) -> Result<usize, SamplerError> {
        let mut digits = Vec::with_capacity(self.target.len());
        let mut stream = DigitStream::new(&self.target);
        let mut d: usize = 0;
        for level in 0..=DEPTH_CAP {
            stream.next_level(&mut digits);
            let leaves = digits.iter().filter(|&&b| b).count();
            if d < leaves {
                return Ok(digits.iter().enumerate().filter(|(_, &b)| b).nth(d).expect("d < leaves").0);
            }
            if level == DEPTH_CAP {
                break;
            }
            let bit = bits.next_bit().ok_or(SamplerError::BitsExhausted)?;
            d = 2 * (d - leaves) + usize::from(bit);
        }
        Err(SamplerError::SamplerStall(DEPTH_CAP))
    }

    pub fn sample_many(&self, bits: &mut impl BitSource, count: usize) -> Result<SampleStats, SamplerError> {
        let start = bits.bits_consumed();
        let mut counts = vec![0u64; self.target.len()];
        for _ in 0..count {
            counts[self.sample(bits)?] += 1;
        }
        Ok(SampleStats { counts, samples: count as u64, bits: bits.bits_consumed() - start })
    }

    /// Exact mass resolved by the first `depth` levels of the tree.
    pub fn analyze(&self, depth: usize) -> Analysis {
        assert!(depth >= 1, "depth must be positive");
        let n = self.target.len();
        let q = self.target.denominator();
        let scale = BigInt::one() << depth;
        let resolved: Vec<BigRational> = self
            .target
            .numerators()
            .iter()
            .map(|p| BigRational::new((p * &scale) / q, scale.clone()))
            .collect();
        let tail = BigRational::one() - resolved.iter().sum::<BigRational>();

        // Σ_k k · c_k / 2^k, with c_k the number of leaves on level k.
        let mut stream = DigitStream::new(&self.target);
        let mut digits = Vec::with_capacity(n);
        let mut weighted = BigInt::zero();
        for level in 0..=depth {
            stream.next_level(&mut digits);
            let leaves = digits.iter().filter(|&&b| b).count();
            weighted += BigInt::from(level * leaves) << (depth - level);
        }
        let expected_bits = BigRational::new(weighted, scale.clone());

        let max_error = self
            .target
            .probabilities()
            .iter()
            .zip(&resolved)
            .map(|(p, r)| p - r)
            .max()
            .unwrap_or_else(BigRational::zero);
        let tail_bound = BigRational::new(BigInt::from(n), scale);
        Analysis {
            depth,
            errors_within_tail: max_error <= tail,
            tail_within_bound: tail <= tail_bound,
            resolved,
            tail,
            max_error,
            expected_bits,
            entropy: self.target.entropy(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleStats {
    pub counts: Vec<u64>,
    pub samples: u64,
    pub bits: u64,
}

impl SampleStats {
    pub fn mean_bits(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.bits as f64 / self.samples as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub depth: usize,
    pub resolved: Vec<BigRational>,
    pub tail: BigRational,
    /// Largest `p_i/q - resolved_i` (never negative).
    pub max_error: BigRational,
    /// Expected bits contributed by levels `<= depth`.
    pub expected_bits: BigRational,
    pub entropy: f64,
    /// `|resolved_i - p_i/q| <= tail` for every `i`.
    pub errors_within_tail: bool,
    /// `tail <= n · 2^-depth`.
    pub tail_within_bound: bool,
}

impl Analysis {
    pub fn expected_bits_f64(&self) -> f64 {
        self.expected_bits.to_f64().unwrap_or(f64::NAN)
    }

    pub fn bounds_hold(&self) -> bool {
        self.errors_within_tail && self.tail_within_bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub passed: bool,
}

/// Pearson goodness-of-fit of `counts` against `x` at significance `alpha`.
/// Outcomes outside the support must have zero counts.
pub fn chi_square_test(counts: &[u64], x: &MixedStrategy, alpha: f64) -> ChiSquareOutcome {
    assert_eq!(counts.len(), x.len(), "length mismatch");
    let total: u64 = counts.iter().sum();
    let support = x.support();
    let dof = support.len().saturating_sub(1);
    let off_support_hit = (0..x.len()).any(|i| !support.contains(&i) && counts[i] > 0);
    let statistic = if off_support_hit {
        f64::INFINITY
    } else {
        support
            .iter()
            .map(|&i| {
                let expected = total as f64 * crate::game::ratio_f64(&x.numerators()[i], x.denominator());
                let diff = counts[i] as f64 - expected;
                diff * diff / expected
            })
            .sum()
    };
    let critical = if dof == 0 {
        0.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").inverse_cdf(1.0 - alpha)
    };
    ChiSquareOutcome { statistic, dof, critical, passed: statistic <= critical }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(w: &[i64]) -> MixedStrategy {
        MixedStrategy::from_weights(w.iter().map(|&v| BigInt::from(v)).collect()).unwrap()
    }

    #[test]
    fn uniform_eight_convention() {
        let s = DdgSampler::build(MixedStrategy::uniform(8));
        let mut bits = ScriptedBits::parse("101");
        assert_eq!(s.sample(&mut bits), Ok(5));
        assert_eq!(bits.bits_consumed(), 3);
        // Every 3-bit string maps to its own binary value.
        for v in 0..8usize {
            let mut b = ScriptedBits::parse(&format!("{v:03b}"));
            assert_eq!(s.sample(&mut b), Ok(v));
        }
    }

    #[test]
    fn point_mass_uses_no_bits() {
        let s = DdgSampler::build(dist(&[1, 0]));
        let mut bits = ScriptedBits::new(vec![]);
        assert_eq!(s.sample(&mut bits), Ok(0));
        assert_eq!(bits.bits_consumed(), 0);
    }

    #[test]
    fn fair_coin_uses_one_bit() {
        let s = DdgSampler::build(MixedStrategy::uniform(2));
        assert_eq!(s.sample(&mut ScriptedBits::parse("0")), Ok(0));
        assert_eq!(s.sample(&mut ScriptedBits::parse("1")), Ok(1));
    }

    #[test]
    fn thirds() {
        // 1/3 = 0.0101..., 2/3 = 0.1010...; each level has one leaf, on the 0 branch.
        let s = DdgSampler::build(dist(&[1, 2]));
        assert_eq!(s.sample(&mut ScriptedBits::parse("0")), Ok(1));
        assert_eq!(s.sample(&mut ScriptedBits::parse("10")), Ok(0));
        assert_eq!(s.sample(&mut ScriptedBits::parse("110")), Ok(1));
        assert_eq!(s.sample(&mut ScriptedBits::parse("11")), Err(SamplerError::BitsExhausted));
    }

    #[test]
    fn seeded_is_reproducible() {
        let s = DdgSampler::build(dist(&[6, 2, 3, 1, 4, 5, 4, 9]));
        let run = |seed| {
            let mut b = SeededBits::new(seed);
            (0..50).map(|_| s.sample(&mut b).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
    }

    #[test]
    fn analyze_dyadic_is_exact() {
        let a = DdgSampler::build(MixedStrategy::uniform(8)).analyze(3);
        assert!(a.tail.is_zero());
        assert!(a.resolved.iter().all(|r| *r == BigRational::new(1.into(), 8.into())));
        assert_eq!(a.expected_bits, BigRational::from_integer(3.into()));
    }

    #[test]
    fn analyze_thirds() {
        let a = DdgSampler::build(dist(&[1, 2])).analyze(10);
        let bound = BigRational::new(1.into(), 512.into());
        assert!(a.max_error <= bound);
        assert!(a.bounds_hold());
    }

    #[test]
    fn chi_square_rejects_off_support() {
        let x = dist(&[1, 0]);
        assert!(!chi_square_test(&[5, 1], &x, 1e-3).passed);
        assert!(chi_square_test(&[6, 0], &x, 1e-3).passed);
    }
}
