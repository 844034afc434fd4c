//! Test corpus and independent oracles shared by the integration tests.
#![allow(dead_code)]

use nashrand_core::families::{
    closed_form_ne, example1_game, example2_game, pad_game, permutation_game, Permutation,
};
use nashrand_core::{beta_game, prime_block_game, BigInt, BigRational, ClosedFormFamily, Game, IntMatrix, MixedStrategy, Profile};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE1_B: [[i64; 8]; 8] = [
    [0, 1, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0],
    [0, 1, 0, 1, 1, 0, 0, 0],
    [0, 0, 1, 0, 1, 1, 0, 0],
    [0, 0, 0, 1, 0, 1, 1, 0],
    [0, 0, 0, 0, 1, 0, 1, 1],
    [0, 0, 0, 0, 0, 1, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 0],
];

pub const EXAMPLE2_A: [[i64; 8]; 8] = [
    [1, 0, 0, 1, 1, 1, 1, 1],
    [1, 1, 0, 0, 1, 1, 1, 1],
    [1, 0, 1, 0, 0, 1, 1, 1],
    [1, 1, 0, 1, 0, 0, 1, 1],
    [1, 1, 1, 0, 1, 0, 0, 1],
    [1, 1, 1, 1, 0, 1, 0, 0],
    [1, 1, 1, 1, 1, 0, 1, 0],
    [0, 1, 1, 1, 1, 1, 1, 1],
];

/// Example 1 typed in from the displayed matrices, not built by the library.
pub fn literal_example1() -> Game {
    Game::new(IntMatrix::identity(8), IntMatrix::from_rows(&EXAMPLE1_B).unwrap()).unwrap()
}

pub fn literal_example2() -> Game {
    Game::new(IntMatrix::from_rows(&EXAMPLE2_A).unwrap(), IntMatrix::from_rows(&EXAMPLE1_B).unwrap()).unwrap()
}

pub fn dist(w: &[i64]) -> MixedStrategy {
    MixedStrategy::from_weights(w.iter().map(|&v| BigInt::from(v)).collect()).unwrap()
}

pub fn game2(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> Game {
    Game::new(IntMatrix::from_rows(&a).unwrap(), IntMatrix::from_rows(&b).unwrap()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_binary_matrix(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, |_, _| BigInt::from(rng.gen_range(0..=1)))
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> IntMatrix {
    IntMatrix::from_fn(n, |_, _| BigInt::from(rng.gen_range(lo..=hi)))
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

/// `det` by the Leibniz formula; only for small `n`.
pub fn leibniz_det(m: &IntMatrix) -> BigInt {
    fn go(m: &IntMatrix, row: usize, used: &mut Vec<bool>, sign: i32, acc: BigInt, out: &mut BigInt) {
        let n = m.dim();
        if row == n {
            if sign > 0 {
                *out += acc;
            } else {
                *out -= acc;
            }
            return;
        }
        for c in 0..n {
            if used[c] || m.get(row, c).is_zero() {
                continue;
            }
            // Inversions contributed by placing column c now.
            let inv = (c + 1..n).filter(|&k| used[k]).count();
            used[c] = true;
            let s = if inv % 2 == 0 { sign } else { -sign };
            go(m, row + 1, used, s, &acc * m.get(row, c), out);
            used[c] = false;
        }
    }
    let mut out = BigInt::zero();
    go(m, 0, &mut vec![false; m.dim()], 1, BigInt::one(), &mut out);
    out
}

/// Nash check by comparing the expected payoff of every unilateral pure
/// deviation, in exact rationals.
pub fn nash_by_deviation(g: &Game, p: &Profile) -> bool {
    let n = g.dim();
    let x = p.x.probabilities();
    let y = p.y.probabilities();
    let payoff = |m: &IntMatrix, xs: &[BigRational], ys: &[BigRational]| -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                s += &xs[i] * &ys[j] * BigRational::from_integer(m.get(i, j).clone());
            }
        }
        s
    };
    let (u1, u2) = (payoff(g.a(), &x, &y), payoff(g.b(), &x, &y));
    let unit = |k: usize| -> Vec<BigRational> {
        (0..n).map(|i| if i == k { BigRational::one() } else { BigRational::zero() }).collect()
    };
    (0..n).all(|i| payoff(g.a(), &unit(i), &y) <= u1) && (0..n).all(|j| payoff(g.b(), &x, &unit(j)) <= u2)
}

/// Named games from every family with dimension at most 10.
pub fn family_corpus() -> Vec<(String, Game)> {
    let mut out: Vec<(String, Game)> = Vec::new();
    for n in 2..=10 {
        out.push((format!("beta n={n}"), beta_game(n).unwrap()));
    }
    for k in 1..=2 {
        out.push((format!("primeblock k={k}"), prime_block_game(k).unwrap()));
        let cf = closed_form_ne(ClosedFormFamily::ConstSumPrimeBlock, k).unwrap();
        out.push((format!("constsum-primeblock k={k}"), cf.game));
    }
    for n in 8..=10 {
        let cf = closed_form_ne(ClosedFormFamily::ConstSumBeta, n).unwrap();
        out.push((format!("constsum-beta n={n}"), cf.game));
    }
    for n in 2..=8 {
        let (g, _) = permutation_game(&Permutation::identity(n), &Permutation::shift(n, 1)).unwrap();
        out.push((format!("permutation shift n={n}"), g));
    }
    let (g, _) = permutation_game(
        &Permutation::identity(4),
        &Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap(),
    )
    .unwrap();
    out.push(("permutation (12)(34)".into(), g));
    out.push(("example1".into(), example1_game()));
    out.push(("example2".into(), example2_game()));
    out.push(("example1 padded".into(), pad_game(&example1_game()).unwrap()));
    out.push(("coordination".into(), game2([[1, 0], [0, 1]], [[1, 0], [0, 1]])));
    out.push(("matching pennies".into(), game2([[1, 0], [0, 1]], [[0, 1], [1, 0]])));
    out.push(("asymmetric 2x2".into(), game2([[3, 0], [0, 2]], [[0, 1], [2, 0]])));
    out
}

/// 100 seeded random 3x3 binary games.
pub fn random_binary_games() -> Vec<(String, Game)> {
    let mut r = rng(0x3b3);
    (0..100)
        .map(|i| {
            let a = random_binary_matrix(&mut r, 3);
            let b = random_binary_matrix(&mut r, 3);
            (format!("random3x3 #{i}"), Game::new(a, b).unwrap())
        })
        .collect()
}
