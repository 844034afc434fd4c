//! Games, mixed strategies and the complexity measure `C`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("payoff matrices have different dimensions ({a} vs {b})")]
    DimensionMismatch { a: usize, b: usize },
    #[error("A + B is not {0} times the all-ones matrix")]
    NotConstantSum(BigInt),
    #[error("strategy index {index} out of range for {n} strategies")]
    IndexOutOfRange { index: usize, n: usize },
}

/// A rational distribution in canonical form `(p_1/q, ..., p_n/q)` with
/// `gcd(p_1, ..., p_n) = 1`. Zero numerators are allowed; the support is
/// never empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedStrategy {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl MixedStrategy {
    /// Canonical form of a rational distribution.
    pub fn canonicalize(raw: &[BigRational]) -> Result<Self, GameError> {
        if raw.is_empty() {
            return Err(GameError::NotADistribution("no entries".into()));
        }
        if let Some(neg) = raw.iter().find(|r| r.is_negative()) {
            return Err(GameError::NotADistribution(format!("negative entry {neg}")));
        }
        let total: BigRational = raw.iter().sum();
        if !total.is_one() {
            return Err(GameError::NotADistribution(format!("entries sum to {total}")));
        }
        let q = raw.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let weights = raw.iter().map(|r| r.numer() * (&q / r.denom())).collect();
        Self::from_weights(weights)
    }

    /// The distribution proportional to nonnegative integer weights.
    pub fn from_weights(mut weights: Vec<BigInt>) -> Result<Self, GameError> {
        if weights.iter().any(|w| w.is_negative()) {
            return Err(GameError::NotADistribution("negative weight".into()));
        }
        let g = weights.iter().fold(BigInt::zero(), |acc, w| acc.gcd(w));
        if g.is_zero() {
            return Err(GameError::NotADistribution("all weights are zero".into()));
        }
        if !g.is_one() {
            for w in weights.iter_mut() {
                *w /= &g;
            }
        }
        let denominator = weights.iter().sum();
        Ok(MixedStrategy { numerators: weights, denominator })
    }

    pub fn pure(n: usize, index: usize) -> Result<Self, GameError> {
        if index >= n {
            return Err(GameError::IndexOutOfRange { index, n });
        }
        let mut weights = vec![BigInt::zero(); n];
        weights[index] = BigInt::one();
        Self::from_weights(weights)
    }

    pub fn uniform(n: usize) -> Self {
        Self::from_weights(vec![BigInt::one(); n]).expect("n > 0")
    }

    /// Uniform over `support` (0-based indices), zero elsewhere.
    pub fn uniform_on(n: usize, support: &[usize]) -> Result<Self, GameError> {
        let mut weights = vec![BigInt::zero(); n];
        for &i in support {
            if i >= n {
                return Err(GameError::IndexOutOfRange { index: i, n });
            }
            weights[i] = BigInt::one();
        }
        Self::from_weights(weights)
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// `C(x) = q`.
    pub fn complexity(&self) -> &BigInt {
        &self.denominator
    }

    pub fn probability(&self, i: usize) -> BigRational {
        BigRational::new(self.numerators[i].clone(), self.denominator.clone())
    }

    pub fn probabilities(&self) -> Vec<BigRational> {
        (0..self.len()).map(|i| self.probability(i)).collect()
    }

    /// 0-based indices with positive probability.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.numerators[i].is_positive()).collect()
    }

    pub fn is_pure(&self) -> bool {
        self.denominator.is_one()
    }

    pub fn is_fully_mixed(&self) -> bool {
        self.numerators.iter().all(|p| p.is_positive())
    }

    /// Bits needed to store every numerator in binary, counting a zero
    /// numerator as one bit.
    pub fn storage_bits(&self) -> u64 {
        self.numerators.iter().map(|p| p.bits().max(1)).sum()
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        let log_q = log2_big(&self.denominator);
        self.numerators
            .iter()
            .filter(|p| p.is_positive())
            .map(|p| {
                let prob = ratio_f64(p, &self.denominator);
                prob * (log_q - log2_big(p))
            })
            .sum()
    }

    /// Largest ratio `x_i / x_j` over the support.
    pub fn max_ratio(&self) -> BigRational {
        let support: Vec<&BigInt> = self.numerators.iter().filter(|p| p.is_positive()).collect();
        let max = support.iter().max().expect("nonempty support");
        let min = support.iter().min().expect("nonempty support");
        BigRational::new((*max).clone(), (*min).clone())
    }
}

impl fmt::Debug for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nums: Vec<String> = self.numerators.iter().map(|p| p.to_string()).collect();
        write!(f, "({})/{}", nums.join(","), self.denominator)
    }
}

/// `log2` of a positive big integer, accurate to double precision.
pub(crate) fn log2_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits in f64").log2();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().expect("fits in f64").log2() + shift as f64
}

/// `num / den` as a float, without overflowing on huge operands.
pub(crate) fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    let shift = den.bits().saturating_sub(1000);
    let (num, den) = (num >> shift, den >> shift);
    match (num.to_f64(), den.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => (log2_big(&num) - log2_big(&den)).exp2(),
    }
}

/// A two-player `n x n` game `(A, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    a: IntMatrix,
    b: IntMatrix,
    family_tag: Option<String>,
    constant_sum: Option<BigInt>,
}

impl Game {
    pub fn new(a: IntMatrix, b: IntMatrix) -> Result<Self, GameError> {
        if a.dim() != b.dim() {
            return Err(GameError::DimensionMismatch { a: a.dim(), b: b.dim() });
        }
        Ok(Game { a, b, family_tag: None, constant_sum: None })
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.family_tag = Some(tag.into());
        self
    }

    /// Marks the game constant-sum with `A + B = u · 1`, checking the identity.
    pub fn with_constant_sum(mut self, u: BigInt) -> Result<Self, GameError> {
        let sum = self.a.add(&self.b);
        if sum.rows().flatten().any(|v| *v != u) {
            return Err(GameError::NotConstantSum(u));
        }
        self.constant_sum = Some(u);
        Ok(self)
    }

    /// The `u` with `A + B = u · 1`, if there is one.
    pub fn detect_constant_sum(&self) -> Option<BigInt> {
        let sum = self.a.add(&self.b);
        let mut entries = sum.rows().flatten();
        let first = entries.next()?.clone();
        entries.all(|v| *v == first).then_some(first)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn family_tag(&self) -> Option<&str> {
        self.family_tag.as_deref()
    }

    pub fn constant_sum(&self) -> Option<&BigInt> {
        self.constant_sum.as_ref()
    }

    /// Expected payoffs `(xᵀ A y, xᵀ B y)`.
    pub fn payoffs(&self, profile: &Profile) -> (BigRational, BigRational) {
        let den = profile.x.denominator() * profile.y.denominator();
        let ay = self.a.mul_vec(profile.y.numerators());
        let by = self.b.mul_vec(profile.y.numerators());
        let dot = |v: &[BigInt]| -> BigInt { profile.x.numerators().iter().zip(v).map(|(p, q)| p * q).sum() };
        (BigRational::new(dot(&ay), den.clone()), BigRational::new(dot(&by), den))
    }
}

/// A strategy profile `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
}

impl Profile {
    pub fn new(x: MixedStrategy, y: MixedStrategy) -> Result<Self, GameError> {
        if x.len() != y.len() {
            return Err(GameError::DimensionMismatch { a: x.len(), b: y.len() });
        }
        Ok(Profile { x, y })
    }

    pub fn complexities(&self) -> (&BigInt, &BigInt) {
        (self.x.complexity(), self.y.complexity())
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}, y = {}", self.x, self.y)
    }
}

/// Best-response check: every pure strategy in the support of each player's
/// mix earns the maximal payoff against the opponent's mix.
pub fn is_nash(game: &Game, profile: &Profile) -> bool {
    let n = game.dim();
    if profile.x.len() != n || profile.y.len() != n {
        return false;
    }
    // Payoff vectors scaled by the opponent's denominator stay integral.
    let row_payoffs = game.a().mul_vec(profile.y.numerators());
    let col_payoffs = game.b().vec_mul(profile.x.numerators());
    supported_strategies_are_best(&profile.x, &row_payoffs) && supported_strategies_are_best(&profile.y, &col_payoffs)
}

fn supported_strategies_are_best(mix: &MixedStrategy, payoffs: &[BigInt]) -> bool {
    let best = payoffs.iter().max().expect("n > 0");
    mix.support().into_iter().all(|i| payoffs[i] == *best)
}

/// `C(x) <= c`: whether a player with capability `c` can play `x`.
pub fn capability_admissible(x: &MixedStrategy, c: &BigInt) -> bool {
    x.complexity() <= c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn example1_x() -> MixedStrategy {
        MixedStrategy::from_weights(ints(&[6, 2, 3, 1, 4, 5, 4, 9])).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let x = MixedStrategy::canonicalize(&[rat(25, 100), rat(51, 100), rat(24, 100)]).unwrap();
        assert_eq!(x.numerators(), ints(&[25, 51, 24]).as_slice());
        assert_eq!(x.complexity(), &BigInt::from(100));

        let half = MixedStrategy::canonicalize(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(half.numerators(), ints(&[1, 1]).as_slice());
        assert_eq!(half.complexity(), &BigInt::from(2));

        let thirds = MixedStrategy::canonicalize(&[rat(2, 6), rat(4, 6)]).unwrap();
        assert_eq!(thirds.numerators(), ints(&[1, 2]).as_slice());
        assert_eq!(thirds.complexity(), &BigInt::from(3));
    }

    #[test]
    fn canonicalize_rejects_non_distributions() {
        assert!(matches!(
            MixedStrategy::canonicalize(&[rat(1, 2), rat(1, 3)]),
            Err(GameError::NotADistribution(_))
        ));
        assert!(matches!(
            MixedStrategy::canonicalize(&[rat(3, 2), rat(-1, 2)]),
            Err(GameError::NotADistribution(_))
        ));
        assert!(MixedStrategy::canonicalize(&[]).is_err());
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(example1_x().complexity(), &BigInt::from(34));
        assert_eq!(MixedStrategy::uniform(8).complexity(), &BigInt::from(8));
        for i in 0..4 {
            assert!(MixedStrategy::pure(4, i).unwrap().complexity().is_one());
        }
    }

    #[test]
    fn storage_bits_examples() {
        assert_eq!(MixedStrategy::uniform(8).storage_bits(), 8);
        assert_eq!(example1_x().storage_bits(), 21);
        let padded = MixedStrategy::from_weights(ints(&[1, 0, 0])).unwrap();
        assert_eq!(padded.storage_bits(), 3);
    }

    #[test]
    fn entropy_examples() {
        let half = MixedStrategy::uniform(2);
        assert!((half.entropy() - 1.0).abs() < 1e-12);
        assert!((MixedStrategy::uniform(8).entropy() - 3.0).abs() < 1e-12);
        // -Σ (p/34) log2(p/34), evaluated independently.
        let h = example1_x().entropy();
        assert!((h - 2.781_473_782_605_985).abs() < 1e-12, "entropy {h}");
        assert!(h < 3.0);
        assert_eq!(MixedStrategy::pure(3, 1).unwrap().entropy(), 0.0);
    }

    #[test]
    fn log2_of_huge_integers() {
        let v = BigInt::one() << 5000u32;
        assert!((log2_big(&v) - 5000.0).abs() < 1e-9);
        let w = BigInt::from(3) << 2000u32;
        assert!((log2_big(&w) - (2000.0 + 3f64.log2())).abs() < 1e-9);
    }

    #[test]
    fn coordination_game_pure_profile_is_nash() {
        let g = Game::new(IntMatrix::identity(2), IntMatrix::identity(2)).unwrap();
        let e1 = MixedStrategy::pure(2, 0).unwrap();
        assert!(is_nash(&g, &Profile::new(e1.clone(), e1.clone()).unwrap()));
        let e2 = MixedStrategy::pure(2, 1).unwrap();
        assert!(!is_nash(&g, &Profile::new(e1, e2).unwrap()));
    }

    #[test]
    fn capability_examples() {
        assert!(capability_admissible(&example1_x(), &BigInt::from(34)));
        assert!(!capability_admissible(&example1_x(), &BigInt::from(33)));
        assert!(capability_admissible(&MixedStrategy::pure(3, 0).unwrap(), &BigInt::one()));
    }

    #[test]
    fn constant_sum_is_checked() {
        let a = IntMatrix::identity(2);
        let b = IntMatrix::all_ones(2).sub(&a);
        let g = Game::new(a.clone(), b).unwrap();
        assert_eq!(g.detect_constant_sum(), Some(BigInt::one()));
        assert!(g.clone().with_constant_sum(BigInt::one()).is_ok());
        assert_eq!(
            g.with_constant_sum(BigInt::from(2)),
            Err(GameError::NotConstantSum(BigInt::from(2)))
        );
        let h = Game::new(a.clone(), a).unwrap();
        assert_eq!(h.detect_constant_sum(), None);
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            Game::new(IntMatrix::identity(2), IntMatrix::identity(3)),
            Err(GameError::DimensionMismatch { a: 2, b: 3 })
        );
    }
}
