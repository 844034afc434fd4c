mod common;

use common::{family_corpus, nash_by_deviation, random_binary_games, random_binary_matrix, rng};
use nashrand_core::families::{example1_game, pad_game};
use nashrand_core::{
    beta_game, bounded_ne_exists, cofactor_sum, fully_mixed_ne, is_nash, min_complexities, prime_block_game,
    support_enumeration, BigInt, EnumConfig, Game, IntMatrix, NeError,
};
use num_traits::{Signed, Zero};

fn imitation_games(count: usize, seed: u64) -> Vec<Game> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = 3 + i % 4;
            Game::new(IntMatrix::identity(n), random_binary_matrix(&mut r, n)).unwrap()
        })
        .collect()
}

#[test]
fn returned_profiles_are_equilibria() {
    let cfg = EnumConfig::default();
    for (name, g) in family_corpus().into_iter().chain(random_binary_games()) {
        let report = support_enumeration(&g, &cfg).unwrap();
        for p in &report.equilibria {
            assert!(is_nash(&g, p), "{name}: {p}");
            assert!(nash_by_deviation(&g, p), "{name}: {p}");
        }
        if let Ok(Some(p)) = fully_mixed_ne(&g) {
            assert!(nash_by_deviation(&g, &p), "{name}: fully mixed {p}");
            assert!(report.equilibria.contains(&p), "{name}: enumeration missed {p}");
        }
    }
}

#[test]
fn imitation_supports_are_nested_and_y_uniform() {
    let mut seen = 0;
    for g in imitation_games(120, 0x1317) {
        let report = support_enumeration(&g, &EnumConfig::default()).unwrap();
        for p in &report.equilibria {
            seen += 1;
            let (sx, sy) = (p.x.support(), p.y.support());
            assert!(sx.iter().all(|i| sy.contains(i)), "{g:?}: {p}");
            assert_eq!(p.y, nashrand_core::MixedStrategy::uniform_on(g.dim(), &sy).unwrap(), "{g:?}");
        }
    }
    assert!(seen > 100);
}

/// Checked against `|K|`: the sign of `K` follows the sign of `det`.
#[test]
fn fully_mixed_complexity_bounded_by_k() {
    let mut hits = 0;
    let mut r = rng(0x4b);
    let mut games: Vec<Game> = (0..3000)
        .map(|i| {
            let n = 2 + i % 4;
            Game::new(random_binary_matrix(&mut r, n), random_binary_matrix(&mut r, n)).unwrap()
        })
        .collect();
    games.extend(family_corpus().into_iter().map(|(_, g)| g).filter(|g| g.a().is_binary() && g.b().is_binary()));
    for g in games {
        let Ok(Some(p)) = fully_mixed_ne(&g) else { continue };
        hits += 1;
        assert!(p.x.complexity() <= &cofactor_sum(g.b()).abs(), "{g:?}");
        assert!(p.y.complexity() <= &cofactor_sum(g.a()).abs(), "{g:?}");
    }
    assert!(hits >= 20, "only {hits} fully mixed equilibria");
}

#[test]
fn padding_keeps_minimal_complexities() {
    let cfg = EnumConfig::default();
    let g = beta_game(8).unwrap();
    let padded = pad_game(&g).unwrap();
    let expected = (BigInt::from(34), BigInt::from(8));
    assert_eq!(min_complexities(&g, &cfg).unwrap(), expected);
    assert_eq!(min_complexities(&padded, &cfg).unwrap(), expected);

    let mut checked = 0;
    for g in imitation_games(80, 0xbad) {
        let Ok(padded) = pad_game(&g) else { continue };
        let Ok(before) = min_complexities(&g, &cfg) else { continue };
        assert_eq!(min_complexities(&padded, &cfg).unwrap(), before, "{g:?}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn family_imitation_games_have_one_fully_mixed_equilibrium() {
    let cfg = EnumConfig::default();
    let games = (2..=10)
        .filter(|n| ![3, 6, 7].contains(n))
        .map(|n| (format!("beta {n}"), beta_game(n).unwrap()))
        .chain((1..=2).map(|k| (format!("primeblock {k}"), prime_block_game(k).unwrap())));
    for (name, g) in games {
        let report = support_enumeration(&g, &cfg).unwrap();
        assert_eq!(report.equilibria.len(), 1, "{name}");
        assert!(report.equilibria[0].x.is_fully_mixed() && report.equilibria[0].y.is_fully_mixed(), "{name}");
        assert!(!report.degenerate, "{name}");
    }
}

#[test]
fn example1_capability_boundary() {
    let g = example1_game();
    let cfg = EnumConfig::default();
    let ok = |c1: i64, c2: i64| bounded_ne_exists(&g, &c1.into(), &c2.into(), &cfg).unwrap();
    assert!(ok(34, 8));
    assert!(ok(100, 100));
    assert!(!ok(33, 8));
    assert!(!ok(34, 7));
    assert!(!ok(1, 1));
}

#[test]
fn enumeration_is_deterministic() {
    let g = nashrand_core::families::example2_game();
    let first = support_enumeration(&g, &EnumConfig::default()).unwrap();
    for _ in 0..5 {
        assert_eq!(support_enumeration(&g, &EnumConfig::default()).unwrap(), first);
    }
}

#[test]
fn dimension_limit_is_enforced() {
    let g = beta_game(11).unwrap();
    assert_eq!(
        support_enumeration(&g, &EnumConfig::default()).unwrap_err(),
        NeError::DimensionTooLarge { n: 11, max_n: 10 }
    );
    let zero = Game::new(IntMatrix::zeros(3), IntMatrix::zeros(3)).unwrap();
    let report = support_enumeration(&zero, &EnumConfig::default()).unwrap();
    assert!(report.degenerate);
    assert!(report.c1_min.as_ref().is_some_and(|c| !c.is_zero()));
}
