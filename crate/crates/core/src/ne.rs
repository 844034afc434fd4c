//! Equilibrium computation: pure scan, equal-size support enumeration,
//! minimal complexities, the capability gate and the explicit upper bound.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{det, ff_solve, integer_solve, FfScalar, Overflow};
use crate::game::{is_nash, Game, MixedStrategy, Profile};

pub const DEFAULT_MAX_N: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NeError {
    #[error("game dimension {n} exceeds the enumeration limit {max_n}")]
    DimensionTooLarge { n: usize, max_n: usize },
    #[error("no equilibrium found with supports of size at most {max_support}")]
    NoEquilibriumFound { max_support: usize },
    #[error("payoff matrix is singular")]
    SingularMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub max_n: usize,
    /// Largest support size tried; `None` means all sizes up to `n`.
    pub max_support: Option<usize>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { max_n: DEFAULT_MAX_N, max_support: None }
    }
}

impl EnumConfig {
    pub fn with_max_n(max_n: usize) -> Self {
        EnumConfig { max_n, ..Self::default() }
    }

    fn support_cap(&self, n: usize) -> usize {
        self.max_support.map_or(n, |s| s.min(n))
    }

    fn check(&self, game: &Game) -> Result<(), NeError> {
        if game.dim() > self.max_n {
            return Err(NeError::DimensionTooLarge { n: game.dim(), max_n: self.max_n });
        }
        Ok(())
    }
}

/// Supports of an equilibrium, as 0-based index sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPair {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub equilibria: Vec<Profile>,
    pub supports: Vec<SupportPair>,
    pub c1_min: Option<BigInt>,
    pub c2_min: Option<BigInt>,
    pub degenerate: bool,
    pub enumerated_supports: u64,
}

impl SolveReport {
    /// Caveat to show next to the minima when the game looked degenerate.
    pub fn degeneracy_note(&self) -> Option<&'static str> {
        self.degenerate.then_some(
            "game appears degenerate: minima are over extreme equilibria only; \
             non-extreme equilibria might have smaller complexity",
        )
    }
}

/// All pure equilibria `(e_i, e_j)`, in row-major order.
pub fn pure_nash(game: &Game) -> Vec<Profile> {
    let n = game.dim();
    let col_max_a: Vec<BigInt> = (0..n).map(|j| game.a().column(j).into_iter().max().expect("n > 0")).collect();
    let row_max_b: Vec<&BigInt> = (0..n).map(|i| game.b().row(i).iter().max().expect("n > 0")).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if *game.a().get(i, j) == col_max_a[j] && game.b().get(i, j) == row_max_b[i] {
                out.push(Profile {
                    x: MixedStrategy::pure(n, i).expect("index in range"),
                    y: MixedStrategy::pure(n, j).expect("index in range"),
                });
            }
        }
    }
    out
}

enum Side {
    Rejected,
    /// Feasible on its nominal support, but with a zero there.
    ZeroOnSupport { off_support_ok: bool },
    Valid { weights: Vec<BigInt>, tie: bool },
}

/// Solves the indifference system that makes the opponent indifferent over
/// `opp` using a mix over `own`, i.e. `Σ_{r ∈ own} coef(r, o) p_r = u` for
/// all `o ∈ opp` and `Σ p = 1`, then checks the opponent's off-support
/// payoffs against `u`.
fn solve_side<T: FfScalar>(
    n: usize,
    own: &[usize],
    opp: &[usize],
    coef: impl Fn(usize, usize) -> T,
) -> Result<Side, Overflow> {
    let k = own.len();
    let mut aug = Vec::with_capacity((k + 1) * (k + 2));
    for &o in opp {
        aug.extend(own.iter().map(|&r| coef(r, o)));
        aug.push(T::from_i64(-1));
        aug.push(T::ff_zero());
    }
    aug.extend(std::iter::repeat_n(T::ff_one(), k));
    aug.push(T::ff_zero());
    aug.push(T::ff_one());

    let Some(sol) = ff_solve(aug, k + 1)? else {
        return Ok(Side::Rejected);
    };
    // Scale so the common denominator is positive.
    let scaled: Vec<T> = if sol.denominator < T::ff_zero() {
        sol.numerators.iter().map(T::neg).collect::<Result<_, _>>()?
    } else {
        sol.numerators
    };
    let (probs, u) = scaled.split_at(k);
    let u = &u[0];
    let zero = T::ff_zero();
    if probs.iter().any(|p| *p < zero) {
        return Ok(Side::Rejected);
    }

    let mut in_opp = vec![false; n];
    for &o in opp {
        in_opp[o] = true;
    }
    let mut tie = false;
    let mut off_support_ok = true;
    for o in (0..n).filter(|&o| !in_opp[o]) {
        let mut payoff = T::ff_zero();
        for (&r, p) in own.iter().zip(probs) {
            payoff = payoff.mul_add(&coef(r, o), p)?;
        }
        match payoff.cmp(u) {
            std::cmp::Ordering::Greater => {
                off_support_ok = false;
                break;
            }
            std::cmp::Ordering::Equal => tie = true,
            std::cmp::Ordering::Less => {}
        }
    }
    if probs.iter().any(|p| p.ff_is_zero()) {
        return Ok(Side::ZeroOnSupport { off_support_ok });
    }
    if !off_support_ok {
        return Ok(Side::Rejected);
    }
    let mut weights = vec![BigInt::zero(); n];
    for (&r, p) in own.iter().zip(probs) {
        weights[r] = p.to_big();
    }
    Ok(Side::Valid { weights, tie })
}

/// Payoff matrices prepared for enumeration, with a machine-integer copy
/// when the entries are small enough for the checked fast path.
struct Payoffs<'a> {
    game: &'a Game,
    small: Option<(Vec<i128>, Vec<i128>)>,
}

impl<'a> Payoffs<'a> {
    fn new(game: &'a Game) -> Self {
        let small = game.a().entries_as::<i128>().zip(game.b().entries_as::<i128>());
        Payoffs { game, small }
    }

    /// Player 1's side (mix over `rows` against `B`) then player 2's side.
    fn sides<T: FfScalar>(
        &self,
        rows: &[usize],
        cols: &[usize],
        a: impl Fn(usize, usize) -> T,
        b: impl Fn(usize, usize) -> T,
    ) -> Result<(Side, Option<Side>), Overflow> {
        let n = self.game.dim();
        let x_side = solve_side(n, rows, cols, &b)?;
        if matches!(x_side, Side::Rejected) {
            return Ok((x_side, None));
        }
        let y_side = solve_side(n, cols, rows, |c, o| a(o, c))?;
        Ok((x_side, Some(y_side)))
    }

    fn solve_pair(&self, rows: &[usize], cols: &[usize]) -> (Side, Option<Side>) {
        let n = self.game.dim();
        if let Some((a, b)) = &self.small {
            if let Ok(res) = self.sides(rows, cols, |i, j| a[i * n + j], |i, j| b[i * n + j]) {
                return res;
            }
        }
        let (a, b) = (self.game.a(), self.game.b());
        self.sides(rows, cols, |i, j| a.get(i, j).clone(), |i, j| b.get(i, j).clone())
            .expect("BigInt arithmetic cannot overflow")
    }

    fn examine(&self, rows: &[usize], cols: &[usize]) -> PairOutcome {
        let none = |degenerate| PairOutcome { found: None, degenerate };
        match self.solve_pair(rows, cols) {
            (Side::Rejected, _) | (_, None) | (_, Some(Side::Rejected)) => none(false),
            (Side::ZeroOnSupport { off_support_ok }, Some(y)) => {
                // Only evidence of degeneracy if the other side is also an equilibrium.
                none(off_support_ok && matches!(y, Side::Valid { .. } | Side::ZeroOnSupport { off_support_ok: true }))
            }
            (Side::Valid { .. }, Some(Side::ZeroOnSupport { off_support_ok })) => none(off_support_ok),
            (Side::Valid { weights: xw, tie: x_tie }, Some(Side::Valid { weights: yw, tie: y_tie })) => {
                let profile = Profile {
                    x: MixedStrategy::from_weights(xw).expect("positive weights"),
                    y: MixedStrategy::from_weights(yw).expect("positive weights"),
                };
                debug_assert!(is_nash(self.game, &profile));
                let pair = SupportPair { rows: rows.to_vec(), cols: cols.to_vec() };
                PairOutcome { found: Some((profile, pair)), degenerate: x_tie || y_tie }
            }
        }
    }
}

struct PairOutcome {
    found: Option<(Profile, SupportPair)>,
    degenerate: bool,
}

/// Ordered list of row-support sets: ascending size, lexicographic.
fn supports_upto(n: usize, cap: usize) -> Vec<Vec<usize>> {
    (1..=cap).flat_map(|k| (0..n).combinations(k)).collect()
}

/// Enumerates every equal-size support pair in the fixed order (ascending
/// size, then lexicographic rows, then lexicographic columns) and returns all
/// extreme equilibria found.
pub fn support_enumeration(game: &Game, config: &EnumConfig) -> Result<SolveReport, NeError> {
    config.check(game)?;
    let n = game.dim();
    let payoffs = Payoffs::new(game);
    let row_sets = supports_upto(n, config.support_cap(n));
    let per_row_set: Vec<(Vec<PairOutcome>, u64)> = row_sets
        .par_iter()
        .map(|rows| {
            let outcomes: Vec<PairOutcome> = (0..n)
                .combinations(rows.len())
                .map(|cols| payoffs.examine(rows, &cols))
                .collect();
            let count = outcomes.len() as u64;
            (outcomes, count)
        })
        .collect();

    let mut report = SolveReport {
        equilibria: Vec::new(),
        supports: Vec::new(),
        c1_min: None,
        c2_min: None,
        degenerate: false,
        enumerated_supports: 0,
    };
    // Merge so that size-k pairs come before size-(k+1) pairs regardless of
    // how rows were grouped; row sets are already size-ordered.
    for (outcomes, count) in per_row_set {
        report.enumerated_supports += count;
        for outcome in outcomes {
            report.degenerate |= outcome.degenerate;
            if let Some((profile, pair)) = outcome.found {
                let (c1, c2) = (profile.x.complexity(), profile.y.complexity());
                if report.c1_min.as_ref().is_none_or(|m| c1 < m) {
                    report.c1_min = Some(c1.clone());
                }
                if report.c2_min.as_ref().is_none_or(|m| c2 < m) {
                    report.c2_min = Some(c2.clone());
                }
                report.equilibria.push(profile);
                report.supports.push(pair);
            }
        }
    }
    Ok(report)
}

/// `(C_1, C_2)` minimized over the extreme equilibria found.
pub fn min_complexities(game: &Game, config: &EnumConfig) -> Result<(BigInt, BigInt), NeError> {
    let report = support_enumeration(game, config)?;
    match (report.c1_min, report.c2_min) {
        (Some(c1), Some(c2)) => Ok((c1, c2)),
        _ => Err(NeError::NoEquilibriumFound { max_support: config.support_cap(game.dim()) }),
    }
}

/// The fully mixed profile `x ∝ (Bᵀ)⁻¹1`, `y ∝ A⁻¹1`, if it is a strictly
/// positive equilibrium.
pub fn fully_mixed_ne(game: &Game) -> Result<Option<Profile>, NeError> {
    let n = game.dim();
    let ones = vec![BigInt::one(); n];
    let x = integer_solve(&game.b().transpose(), &ones).ok_or(NeError::SingularMatrix)?;
    let y = integer_solve(game.a(), &ones).ok_or(NeError::SingularMatrix)?;
    let positive_weights = |sol: crate::exact::FfSolution<BigInt>| -> Option<Vec<BigInt>> {
        let flip = sol.denominator.is_negative();
        let w: Vec<BigInt> = sol.numerators.into_iter().map(|v| if flip { -v } else { v }).collect();
        w.iter().all(|v| v.is_positive()).then_some(w)
    };
    let (Some(xw), Some(yw)) = (positive_weights(x), positive_weights(y)) else {
        return Ok(None);
    };
    let profile = Profile {
        x: MixedStrategy::from_weights(xw).expect("positive weights"),
        y: MixedStrategy::from_weights(yw).expect("positive weights"),
    };
    Ok(is_nash(game, &profile).then_some(profile))
}

/// Whether some equilibrium has `C(x) <= c1` and `C(y) <= c2`. Stops at the
/// first such equilibrium in enumeration order.
pub fn bounded_ne_exists(game: &Game, c1: &BigInt, c2: &BigInt, config: &EnumConfig) -> Result<bool, NeError> {
    config.check(game)?;
    let n = game.dim();
    // A strategy with support size k has C >= k (its numerators are
    // positive integers summing to C), so larger supports cannot qualify.
    let cap_limit = |c: &BigInt| c.to_usize().unwrap_or(usize::MAX);
    let cap = config.support_cap(n).min(cap_limit(c1)).min(cap_limit(c2));
    let payoffs = Payoffs::new(game);
    let row_sets = supports_upto(n, cap);
    Ok(row_sets.par_iter().any(|rows| {
        (0..n).combinations(rows.len()).any(|cols| {
            payoffs
                .examine(rows, &cols)
                .found
                .is_some_and(|(p, _)| p.x.complexity() <= c1 && p.y.complexity() <= c2)
        })
    }))
}

/// Smallest integer `r` with `r * r >= v`.
pub fn ceil_sqrt(v: &BigInt) -> BigInt {
    let r = v.sqrt();
    if &(&r * &r) < v {
        r + 1
    } else {
        r
    }
}

/// The explicit bound `n(n+1) · ceil(M^n · (2n+1)^((2n+1)/2))` for one player,
/// where `M` is the largest absolute entry of the matrix that determines that
/// player's equilibrium strategy (clamped to at least 1).
fn bound_for(n: usize, max_abs: BigInt) -> BigInt {
    let m = if max_abs.is_zero() { BigInt::one() } else { max_abs };
    let n32 = u32::try_from(n).expect("dimension fits in u32");
    let radicand = num_traits::pow(m, 2 * n) * num_traits::pow(BigInt::from(2 * n32 + 1), 2 * n + 1);
    BigInt::from(n) * BigInt::from(n + 1) * ceil_sqrt(&radicand)
}

/// Upper bounds on `(C_1, C_2)`: player 1's strategy is pinned down by `B`,
/// player 2's by `A`.
pub fn complexity_upper_bound(game: &Game) -> (BigInt, BigInt) {
    let n = game.dim();
    (bound_for(n, game.b().max_abs_entry()), bound_for(n, game.a().max_abs_entry()))
}

/// `det` of both payoff matrices; convenient for callers gating
/// [`fully_mixed_ne`].
pub fn payoff_determinants(game: &Game) -> (BigInt, BigInt) {
    (det(game.a()), det(game.b()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn game(a: &[[i64; 2]], b: &[[i64; 2]]) -> Game {
        Game::new(IntMatrix::from_rows(a).unwrap(), IntMatrix::from_rows(b).unwrap()).unwrap()
    }

    fn coordination() -> Game {
        Game::new(IntMatrix::identity(2), IntMatrix::identity(2)).unwrap()
    }

    fn matching_pennies() -> Game {
        game(&[[1, 0], [0, 1]], &[[0, 1], [1, 0]])
    }

    #[test]
    fn pure_scan() {
        let pure = pure_nash(&coordination());
        assert_eq!(pure.len(), 2);
        assert_eq!(pure[0].x, MixedStrategy::pure(2, 0).unwrap());
        assert_eq!(pure[1].y, MixedStrategy::pure(2, 1).unwrap());
        assert!(pure_nash(&matching_pennies()).is_empty());
    }

    #[test]
    fn coordination_has_three_equilibria() {
        let report = support_enumeration(&coordination(), &EnumConfig::default()).unwrap();
        assert_eq!(report.equilibria.len(), 3);
        assert_eq!(report.equilibria[2].x, MixedStrategy::uniform(2));
        assert_eq!(report.equilibria[2].y, MixedStrategy::uniform(2));
        assert_eq!(report.c1_min, Some(BigInt::one()));
        assert_eq!(report.enumerated_supports, 5);
        assert!(!report.degenerate);
    }

    #[test]
    fn matching_pennies_is_uniform() {
        let report = support_enumeration(&matching_pennies(), &EnumConfig::default()).unwrap();
        assert_eq!(report.equilibria.len(), 1);
        assert_eq!(report.equilibria[0].x, MixedStrategy::uniform(2));
        assert_eq!(
            min_complexities(&matching_pennies(), &EnumConfig::default()).unwrap(),
            (BigInt::from(2), BigInt::from(2))
        );
    }

    #[test]
    fn dimension_limit() {
        let g = Game::new(IntMatrix::identity(11), IntMatrix::identity(11)).unwrap();
        assert_eq!(
            support_enumeration(&g, &EnumConfig::default()),
            Err(NeError::DimensionTooLarge { n: 11, max_n: 10 })
        );
    }

    #[test]
    fn capped_support_can_miss() {
        let cfg = EnumConfig { max_n: 10, max_support: Some(1) };
        assert_eq!(
            min_complexities(&matching_pennies(), &cfg),
            Err(NeError::NoEquilibriumFound { max_support: 1 })
        );
    }

    #[test]
    fn zero_game_is_flagged_degenerate() {
        let g = Game::new(IntMatrix::zeros(2), IntMatrix::zeros(2)).unwrap();
        let report = support_enumeration(&g, &EnumConfig::default()).unwrap();
        assert!(report.degenerate);
        assert_eq!(report.c1_min, Some(BigInt::one()));
        assert!(report.degeneracy_note().is_some());
    }

    #[test]
    fn fully_mixed_examples() {
        let p = fully_mixed_ne(&coordination()).unwrap().unwrap();
        assert_eq!(p.x, MixedStrategy::uniform(2));
        let g = game(&[[1, 0], [0, 1]], &[[1, 1], [0, 1]]);
        assert_eq!(fully_mixed_ne(&g), Ok(None));
        let s = game(&[[1, 0], [0, 1]], &[[1, 1], [1, 1]]);
        assert_eq!(fully_mixed_ne(&s), Err(NeError::SingularMatrix));
    }

    #[test]
    fn capability_gate() {
        let cfg = EnumConfig::default();
        let one = BigInt::one();
        assert!(bounded_ne_exists(&coordination(), &one, &one, &cfg).unwrap());
        assert!(!bounded_ne_exists(&matching_pennies(), &one, &BigInt::from(2), &cfg).unwrap());
        assert!(bounded_ne_exists(&matching_pennies(), &BigInt::from(2), &BigInt::from(2), &cfg).unwrap());
    }

    #[test]
    fn upper_bound_examples() {
        let (b1, b2) = complexity_upper_bound(&matching_pennies());
        assert_eq!(b1, BigInt::from(336));
        assert_eq!(b2, BigInt::from(336));
        let zero = Game::new(IntMatrix::zeros(2), IntMatrix::zeros(2)).unwrap();
        assert_eq!(complexity_upper_bound(&zero).0, BigInt::from(336));
    }

    #[test]
    fn ceil_sqrt_edges() {
        for v in 0..200i64 {
            let r = ceil_sqrt(&BigInt::from(v));
            assert!(&r * &r >= BigInt::from(v));
            assert!(r.is_zero() || (&r - 1) * (&r - 1) < BigInt::from(v));
        }
        assert_eq!(ceil_sqrt(&BigInt::from(3125)), BigInt::from(56));
    }

    #[test]
    fn asymmetric_two_by_two() {
        let g = game(&[[3, 0], [0, 2]], &[[0, 1], [2, 0]]);
        let report = support_enumeration(&g, &EnumConfig::default()).unwrap();
        assert_eq!(report.equilibria.len(), 1);
        let p = &report.equilibria[0];
        assert_eq!(p.x.numerators(), ints(&[2, 1]).as_slice());
        assert_eq!(p.y.numerators(), ints(&[2, 3]).as_slice());
    }
}
