//! Game families with closed-form equilibria: the `B^k` prime-block games,
//! the `β_n` imitation games driven by the `a_n`/`b_n` recurrences, the
//! constant-sum transform, padding, permutation games and the 2x2 formula.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{cofactor_sum_by_solve, det, IntMatrix};
use crate::game::{log2_big, Game, GameError, MixedStrategy, Profile};
use crate::ne::pure_nash;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family `{family}` does not support n = {n} (needs n >= {min})")]
    UnsupportedDimension { family: &'static str, n: usize, min: usize },
    #[error("matrix is not (pi, tau)-symmetric: row {row} of the transpose differs")]
    SymmetryViolation { row: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("game has a pure equilibrium; both complexities are 1")]
    HasPureNe,
    #[error("closed-form identity failed: {0}")]
    IdentityViolation(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

fn require(family: &'static str, n: usize, min: usize) -> Result<(), FamilyError> {
    if n < min {
        return Err(FamilyError::UnsupportedDimension { family, n, min });
    }
    Ok(())
}

/// `[[0 | inner], [1 | 0]]`: shifts `inner` one column right and adds a
/// bottom row `e_1`.
pub fn bordered(inner: &IntMatrix) -> IntMatrix {
    let m = inner.dim();
    IntMatrix::from_fn(m + 1, |i, j| {
        if i == m {
            BigInt::from(u8::from(j == 0))
        } else if j == 0 {
            BigInt::zero()
        } else {
            inner.get(i, j - 1).clone()
        }
    })
}

// ---------------------------------------------------------------------------
// Prime blocks

/// `B^k`: the `(k+1) x (k+1)` binary matrix that is 0 exactly where
/// `i ≡ j + 1 (mod k + 1)`.
pub fn block_matrix(k: usize) -> IntMatrix {
    assert!(k >= 1, "block size must be at least 1");
    let m = k + 1;
    IntMatrix::from_fn(m, |i, j| BigInt::from(u8::from(i != (j + 1) % m)))
}

static PRIMES: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();

/// The first `count` primes; grown incrementally and cached.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut cache = PRIMES.get_or_init(|| Mutex::new(vec![2])).lock().expect("prime cache poisoned");
    let mut candidate = *cache.last().expect("nonempty");
    while cache.len() < count {
        candidate += 1;
        if cache.iter().take_while(|&&p| p * p <= candidate).all(|&p| !candidate.is_multiple_of(p)) {
            cache.push(candidate);
        }
    }
    cache[..count].to_vec()
}

/// Dimension `N = Σ (p_k + 1) + 1` of the prime-block game.
pub fn prime_block_dim(num_primes: usize) -> usize {
    first_primes(num_primes).iter().map(|&p| p as usize + 1).sum::<usize>() + 1
}

/// `[[0 | diag(B^{p_1}, ..., B^{p_n})], [1 | 0]]` over the first `num_primes` primes.
pub fn prime_block_matrix(num_primes: usize) -> IntMatrix {
    assert!(num_primes >= 1, "need at least one prime");
    let primes = first_primes(num_primes);
    let inner_dim = prime_block_dim(num_primes) - 1;
    let mut inner = IntMatrix::zeros(inner_dim);
    let mut offset = 0;
    for &p in &primes {
        let block = block_matrix(p as usize);
        for (i, row) in block.rows().enumerate() {
            for (j, v) in row.iter().enumerate() {
                inner.set(offset + i, offset + j, v.clone());
            }
        }
        offset += block.dim();
    }
    bordered(&inner)
}

pub fn prime_block_game(num_primes: usize) -> Result<Game, FamilyError> {
    require("primeblock", num_primes, 1)?;
    let b = prime_block_matrix(num_primes);
    Ok(Game::new(IntMatrix::identity(b.dim()), b)?.with_tag("primeblock"))
}

/// `C_1 = (n + 1) Π p_k + Σ_k Π_{l≠k} p_l`.
pub fn prime_block_c1(num_primes: usize) -> BigInt {
    let primes: Vec<BigInt> = first_primes(num_primes).into_iter().map(BigInt::from).collect();
    let product: BigInt = primes.iter().product();
    let others: BigInt = primes.iter().map(|p| &product / p).sum();
    BigInt::from(num_primes + 1) * &product + others
}

/// Closed-form equilibrium: `y` uniform; `x` is `1/(p_k D)` on the rows of
/// block `k` and `1/D` on the last row, where `D = n + 1 + Σ 1/p_k`.
pub fn prime_block_ne(num_primes: usize) -> Result<(Profile, BigInt), FamilyError> {
    require("primeblock", num_primes, 1)?;
    let primes: Vec<BigInt> = first_primes(num_primes).into_iter().map(BigInt::from).collect();
    let product: BigInt = primes.iter().product();
    // Weights scaled by Π p.
    let mut weights = Vec::new();
    for p in &primes {
        let w = &product / p;
        let size = p.to_usize().expect("small prime") + 1;
        weights.extend(std::iter::repeat_n(w, size));
    }
    weights.push(product);
    let n = weights.len();
    let x = MixedStrategy::from_weights(weights)?;
    Ok((Profile { x, y: MixedStrategy::uniform(n) }, prime_block_c1(num_primes)))
}

/// A `(π, τ)` pair under which the prime-block matrix is symmetric: inside
/// each block, rows map to the reversed columns of the same block and
/// columns to the reversed rows; the border row and column swap.
pub fn prime_block_symmetry(num_primes: usize) -> (Permutation, Permutation) {
    let n = prime_block_dim(num_primes);
    let mut pi = vec![0; n];
    let mut tau = vec![0; n];
    let mut offset = 0;
    for p in first_primes(num_primes) {
        let m = p as usize + 1;
        for local in 0..m {
            // Block rows sit at offset.., its columns at offset + 1...
            pi[offset + local] = offset + 1 + (m - 1 - local);
            tau[offset + 1 + local] = offset + (m - 1 - local);
        }
        offset += m;
    }
    pi[n - 1] = 0;
    tau[0] = n - 1;
    (
        Permutation::new(pi).expect("block reversal is a bijection"),
        Permutation::new(tau).expect("block reversal is a bijection"),
    )
}

// ---------------------------------------------------------------------------
// Recurrences

/// Exact values of `a_k`, `b_k`, `det B_k` and `g_k = gcd(b_k, b_{k+1})`.
/// Accessors take 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceTable {
    upto: usize,
    a: Vec<BigInt>,
    b: Vec<BigInt>,
    det_b: Vec<BigInt>,
    g: Vec<BigInt>,
}

impl RecurrenceTable {
    pub fn upto(&self) -> usize {
        self.upto
    }
    pub fn a(&self, n: usize) -> &BigInt {
        &self.a[n - 1]
    }
    /// Defined up to `upto + 1`.
    pub fn b(&self, n: usize) -> &BigInt {
        &self.b[n - 1]
    }
    pub fn det_b(&self, n: usize) -> &BigInt {
        &self.det_b[n - 1]
    }
    pub fn g(&self, n: usize) -> &BigInt {
        &self.g[n - 1]
    }
}

fn four_term(seq: &mut Vec<BigInt>, len: usize) {
    while seq.len() < len {
        let k = seq.len();
        let next = &seq[k - 2] - &seq[k - 3] + &seq[k - 4];
        seq.push(next);
    }
}

pub fn recurrence_table(upto: usize) -> RecurrenceTable {
    assert!(upto >= 4, "table needs at least the four base values");
    let mut a: Vec<BigInt> = [1, 1, 1, 0].map(BigInt::from).to_vec();
    let mut b: Vec<BigInt> = [0, 1, 0, 1].map(BigInt::from).to_vec();
    four_term(&mut a, upto);
    four_term(&mut b, upto + 1);
    let mut det_b: Vec<BigInt> = [1, 1, 2].map(BigInt::from).to_vec();
    while det_b.len() < upto {
        let k = det_b.len();
        let next = &det_b[k - 1] + &det_b[k - 3];
        det_b.push(next);
    }
    det_b.truncate(upto);
    let g = (0..upto).map(|i| b[i].gcd(&b[i + 1])).collect();
    RecurrenceTable { upto, a, b, det_b, g }
}

/// Roots of `x^3 + x^2 + 1` and the coefficients of the closed form
/// `b_n = w_0 + w_1 ρ^n + w_2 z^n + conj(w_2) conj(z)^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceConstants {
    pub rho: f64,
    pub z: Complex64,
    pub w0: f64,
    pub w1: f64,
    pub w2: Complex64,
}

impl RecurrenceConstants {
    /// Evaluates the Cardano expressions for the roots, then solves the 4x4
    /// system fixed by `b_1..b_4`.
    pub fn compute() -> Self {
        let s93 = 93f64.sqrt();
        let lo = 29.0 - 3.0 * s93;
        let hi = 29.0 + 3.0 * s93;
        let rho = (-1.0 - (2.0 / lo).cbrt() - (0.5 * lo).cbrt()) / 3.0;
        let i_s3 = Complex64::new(0.0, 3f64.sqrt());
        let one = Complex64::new(1.0, 0.0);
        let z = (Complex64::new(-4.0, 0.0) + (one + i_s3) * (4.0 * lo).cbrt() + (one - i_s3) * (4.0 * hi).cbrt()) / 12.0;

        let roots = [one, Complex64::new(rho, 0.0), z, z.conj()];
        let rhs = [0.0, 1.0, 0.0, 1.0];
        let mut m = [[Complex64::new(0.0, 0.0); 5]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            for (j, r) in roots.iter().enumerate() {
                row[j] = r.powu(k as u32 + 1);
            }
            row[4] = Complex64::new(rhs[k], 0.0);
        }
        let w = solve_complex_4(m);
        RecurrenceConstants { rho, z, w0: w[0].re, w1: w[1].re, w2: w[2] }
    }

    /// `b_n` evaluated from the closed form.
    pub fn b_closed_form(&self, n: u32) -> f64 {
        self.w0 + self.w1 * self.rho.powi(n as i32) + 2.0 * (self.w2 * self.z.powu(n)).re
    }

    /// `-(ρ - 1)^2 / (3ρ)`.
    pub fn claim_limit_1(&self) -> f64 {
        -(self.rho - 1.0).powi(2) / (3.0 * self.rho)
    }

    /// `(ρ - 1)^2 / 3`.
    pub fn claim_limit_2(&self) -> f64 {
        (self.rho - 1.0).powi(2) / 3.0
    }
}

/// Gaussian elimination with partial pivoting on a 4x5 augmented system.
fn solve_complex_4(mut m: [[Complex64; 5]; 4]) -> [Complex64; 4] {
    for k in 0..4 {
        let pivot = (k..4).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm())).expect("rows");
        m.swap(k, pivot);
        for i in k + 1..4 {
            let f = m[i][k] / m[k][k];
            for j in k..5 {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for k in (0..4).rev() {
        let s: Complex64 = (k + 1..4).map(|j| m[k][j] * x[j]).sum();
        x[k] = (m[k][4] - s) / m[k][k];
    }
    x
}

/// `B_n`: ones on the main diagonal, the diagonal above it and the second
/// diagonal below it.
pub fn three_diagonal(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, |i, j| BigInt::from(u8::from(j == i || j == i + 1 || j + 2 == i)))
}

/// `β_n = [[0 | B_{n-1}], [1 | 0]]`.
pub fn beta_matrix(n: usize) -> IntMatrix {
    assert!(n >= 2, "beta matrices start at n = 2");
    bordered(&three_diagonal(n - 1))
}

pub fn beta_game(n: usize) -> Result<Game, FamilyError> {
    require("beta", n, 2)?;
    Ok(Game::new(IntMatrix::identity(n), beta_matrix(n))?.with_tag("beta"))
}

/// Exact quantities attached to `β_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaInvariants {
    pub det: BigInt,
    pub k: BigInt,
    pub g: BigInt,
}

pub fn beta_invariants(n: usize, table: &RecurrenceTable) -> BetaInvariants {
    let m = beta_matrix(n);
    BetaInvariants {
        det: det(&m),
        k: cofactor_sum_by_solve(&m).unwrap_or_else(BigInt::zero),
        g: table.g(n).clone(),
    }
}

/// Unnormalized closed-form weights: `x'_{n-k} = a_k |b_n| + b_k |a_n|` for
/// `1 <= k < n` and `x'_n = 2|b_n| + |a_n|`.
fn beta_weights(n: usize, table: &RecurrenceTable) -> Vec<BigInt> {
    let bn = table.b(n).abs();
    let an = table.a(n).abs();
    let mut w = vec![BigInt::zero(); n];
    for k in 1..n {
        w[n - k - 1] = table.a(k) * &bn + table.b(k) * &an;
    }
    w[n - 1] = BigInt::from(2) * &bn + &an;
    w
}

/// Closed-form equilibrium of the `β_n` imitation game and `C(x)`. Checks
/// `C(x) = |K(β_n)| / g_n` before returning.
pub fn beta_ne(n: usize) -> Result<(Profile, BigInt), FamilyError> {
    require("beta", n, 8)?;
    let table = recurrence_table(n);
    beta_ne_with(n, &table)
}

/// As [`beta_ne`], reusing a table with `upto >= n`.
pub fn beta_ne_with(n: usize, table: &RecurrenceTable) -> Result<(Profile, BigInt), FamilyError> {
    require("beta", n, 8)?;
    let x = MixedStrategy::from_weights(beta_weights(n, table))?;
    let inv = beta_invariants(n, table);
    let expected = inv.k.abs() / &inv.g;
    if *x.complexity() != expected {
        return Err(FamilyError::IdentityViolation(format!(
            "n = {n}: C(x) = {} but |K|/g = {expected}",
            x.complexity()
        )));
    }
    let c = x.complexity().clone();
    Ok((Profile { x, y: MixedStrategy::uniform(n) }, c))
}

// ---------------------------------------------------------------------------
// Permutations and symmetry

/// A bijection on `{0, ..., n-1}` with its cycle decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self, FamilyError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(FamilyError::HypothesisViolation(format!("{map:?} is not a permutation")));
            }
        }
        let mut cycles = Vec::new();
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut i = map[start];
            while i != start {
                visited[i] = true;
                cycle.push(i);
                i = map[i];
            }
            cycles.push(cycle);
        }
        Ok(Permutation { map, cycles })
    }

    /// From 1-based images, as in cycle notation on `[n]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self, FamilyError> {
        if images.contains(&0) {
            return Err(FamilyError::HypothesisViolation("0 in a 1-based permutation".into()));
        }
        Self::new(images.iter().map(|&v| v - 1).collect())
    }

    /// From disjoint cycles written 1-based; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, FamilyError> {
        let mut map: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (idx, &from) in cycle.iter().enumerate() {
                let to = cycle[(idx + 1) % cycle.len()];
                if from == 0 || from > n || to == 0 || to > n {
                    return Err(FamilyError::HypothesisViolation(format!("cycle entry out of range 1..={n}")));
                }
                map[from - 1] = to - 1;
            }
        }
        Self::new(map)
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect()).expect("identity")
    }

    /// `i ↦ n - 1 - i`.
    pub fn reversal(n: usize) -> Self {
        Self::new((0..n).rev().collect()).expect("reversal")
    }

    /// `i ↦ i + k (mod n)`.
    pub fn shift(n: usize, k: usize) -> Self {
        Self::new((0..n).map(|i| (i + k) % n).collect()).expect("shift")
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.map
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn min_cycle_len(&self) -> usize {
        self.cycles.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Self::new(inv).expect("inverse of a bijection")
    }

    /// `self ∘ other`: `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "length mismatch");
        Self::new(other.map.iter().map(|&i| self.map[i]).collect()).expect("composition of bijections")
    }

    /// Coordinate permutation `π(v)_j = v_{π(j)}`.
    pub fn permute<T: Clone>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len(), "length mismatch");
        self.map.iter().map(|&i| v[i].clone()).collect()
    }

    pub fn permute_strategy(&self, x: &MixedStrategy) -> MixedStrategy {
        MixedStrategy::from_weights(self.permute(x.numerators())).expect("permuted distribution")
    }

    /// `P_π` with `(P_π)_{π(i), i} = 1`.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.len(), |r, c| BigInt::from(u8::from(self.map[c] == r)))
    }
}

/// First row `i` with `(Bᵀ)_i ≠ π(B_{τ(i)})`, i.e. some `j` with
/// `B_{j,i} ≠ B_{τ(i), π(j)}`.
pub fn symmetry_violation(b: &IntMatrix, pi: &Permutation, tau: &Permutation) -> Option<usize> {
    let n = b.dim();
    assert!(pi.len() == n && tau.len() == n, "permutation length mismatch");
    (0..n).find(|&i| (0..n).any(|j| b.get(j, i) != b.get(tau.image(i), pi.image(j))))
}

pub fn is_pi_tau_symmetric(b: &IntMatrix, pi: &Permutation, tau: &Permutation) -> bool {
    symmetry_violation(b, pi, tau).is_none()
}

/// `(1 - B, B)` for an imitation game `(I, B)` whose `B` is `(π, τ)`-symmetric,
/// invertible and has `K(B) ≠ det B`.
pub fn constant_sum_transform(g: &Game, pi: &Permutation, tau: &Permutation) -> Result<Game, FamilyError> {
    let n = g.dim();
    if *g.a() != IntMatrix::identity(n) {
        return Err(FamilyError::HypothesisViolation("A is not the identity".into()));
    }
    if pi.len() != n || tau.len() != n {
        return Err(FamilyError::HypothesisViolation("permutation length differs from n".into()));
    }
    if let Some(row) = symmetry_violation(g.b(), pi, tau) {
        return Err(FamilyError::SymmetryViolation { row });
    }
    let d = det(g.b());
    if d.is_zero() {
        return Err(FamilyError::HypothesisViolation("det B = 0".into()));
    }
    let k = cofactor_sum_by_solve(g.b()).expect("nonsingular");
    if k == d {
        return Err(FamilyError::HypothesisViolation(format!("K(B) = det B = {d}")));
    }
    let a = IntMatrix::all_ones(n).sub(g.b());
    let tag = format!("constsum-{}", g.family_tag().unwrap_or("game"));
    Ok(Game::new(a, g.b().clone())?.with_tag(tag).with_constant_sum(BigInt::one())?)
}

/// The equilibrium `(x̃, π⁻¹(x̃))` of the transformed game, where `x̃` is
/// player 1's strategy in the imitation game.
pub fn constant_sum_ne(x_tilde: &MixedStrategy, pi: &Permutation) -> Profile {
    Profile { x: x_tilde.clone(), y: pi.inverse().permute_strategy(x_tilde) }
}

/// Adds a dummy strategy to each player: `A' = [[A, 1], [0, 1]]`,
/// `B' = [[B, 0], [1, 0]]`.
pub fn pad_game(g: &Game) -> Result<Game, FamilyError> {
    let n = g.dim();
    if let Some(j) = (0..n).find(|&j| g.a().column(j).iter().all(Zero::is_zero)) {
        return Err(FamilyError::HypothesisViolation(format!("column {j} of A is zero")));
    }
    if let Some(i) = (0..n).find(|&i| g.b().row(i).iter().all(Zero::is_zero)) {
        return Err(FamilyError::HypothesisViolation(format!("row {i} of B is zero")));
    }
    let a = IntMatrix::from_fn(n + 1, |i, j| match (i < n, j < n) {
        (true, true) => g.a().get(i, j).clone(),
        (_, false) => BigInt::one(),
        (false, true) => BigInt::zero(),
    });
    let b = IntMatrix::from_fn(n + 1, |i, j| match (i < n, j < n) {
        (true, true) => g.b().get(i, j).clone(),
        (false, true) => BigInt::one(),
        (_, false) => BigInt::zero(),
    });
    let mut padded = Game::new(a, b)?;
    if let Some(tag) = g.family_tag() {
        padded = padded.with_tag(format!("{tag}-padded"));
    }
    if g.constant_sum().is_some_and(One::is_one) {
        padded = padded.with_constant_sum(BigInt::one())?;
    }
    Ok(padded)
}

/// The game `(P_π, P_τ)` and its common complexity, the shortest cycle of `π⁻¹τ`.
pub fn permutation_game(pi: &Permutation, tau: &Permutation) -> Result<(Game, BigInt), FamilyError> {
    if pi.len() != tau.len() {
        return Err(FamilyError::HypothesisViolation("permutations of different lengths".into()));
    }
    let game = Game::new(pi.matrix(), tau.matrix())?.with_tag("permutation");
    let c = pi.inverse().compose(tau).min_cycle_len();
    Ok((game, BigInt::from(c)))
}

/// Closed-form `(C_1, C_2)` of a 2x2 game without pure equilibria.
pub fn two_by_two_complexities(g: &Game) -> Result<(BigInt, BigInt), FamilyError> {
    if g.dim() != 2 {
        return Err(FamilyError::HypothesisViolation(format!("expected a 2x2 game, got n = {}", g.dim())));
    }
    if !pure_nash(g).is_empty() {
        return Err(FamilyError::HasPureNe);
    }
    let (a, b) = (g.a(), g.b());
    let e = |m: &IntMatrix, i: usize, j: usize| m.get(i, j).clone();
    // Orient so that A_11 > A_21 by swapping the rows.
    let (r1, r2) = if a.get(0, 0) > a.get(1, 0) { (0, 1) } else { (1, 0) };
    let (d1, d2) = (e(b, r1, 1) - e(b, r1, 0), e(b, r2, 0) - e(b, r2, 1));
    let (f1, f2) = (e(a, r1, 0) - e(a, r2, 0), e(a, r2, 1) - e(a, r1, 1));
    let c1 = (&d1 + &d2).abs() / d1.gcd(&d2);
    let c2 = (&f1 + &f2).abs() / f1.gcd(&f2);
    Ok((c1, c2))
}

// ---------------------------------------------------------------------------
// Named games and closed-form scans

pub fn example1_game() -> Game {
    Game::new(IntMatrix::identity(8), beta_matrix(8)).expect("square").with_tag("example1")
}

pub fn example2_game() -> Game {
    let n = 8;
    let rev = Permutation::reversal(n);
    constant_sum_transform(&example1_game(), &rev, &rev)
        .expect("β_8 satisfies the transform hypotheses")
        .with_tag("example2")
}

/// Families that come with a closed-form equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormFamily {
    Beta,
    PrimeBlock,
    ConstSumBeta,
    ConstSumPrimeBlock,
}

impl ClosedFormFamily {
    pub fn name(self) -> &'static str {
        match self {
            ClosedFormFamily::Beta => "beta",
            ClosedFormFamily::PrimeBlock => "primeblock",
            ClosedFormFamily::ConstSumBeta => "constsum-beta",
            ClosedFormFamily::ConstSumPrimeBlock => "constsum-primeblock",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [Self::Beta, Self::PrimeBlock, Self::ConstSumBeta, Self::ConstSumPrimeBlock]
            .into_iter()
            .find(|f| f.name() == name)
    }

    /// Smallest admissible parameter.
    pub fn min_n(self) -> usize {
        match self {
            ClosedFormFamily::Beta | ClosedFormFamily::ConstSumBeta => 8,
            ClosedFormFamily::PrimeBlock | ClosedFormFamily::ConstSumPrimeBlock => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormNe {
    pub game: Game,
    pub profile: Profile,
    pub c1: BigInt,
    pub c2: BigInt,
}

/// Game and closed-form equilibrium for parameter `n` (dimension for the
/// β families, number of primes for the prime-block families).
pub fn closed_form_ne(family: ClosedFormFamily, n: usize) -> Result<ClosedFormNe, FamilyError> {
    require(family.name(), n, family.min_n())?;
    let (imitation, profile, symmetry) = match family {
        ClosedFormFamily::Beta | ClosedFormFamily::ConstSumBeta => {
            let (p, _) = beta_ne(n)?;
            let rev = Permutation::reversal(n);
            (beta_game(n)?, p, (rev.clone(), rev))
        }
        ClosedFormFamily::PrimeBlock | ClosedFormFamily::ConstSumPrimeBlock => {
            let (p, _) = prime_block_ne(n)?;
            (prime_block_game(n)?, p, prime_block_symmetry(n))
        }
    };
    let (game, profile) = match family {
        ClosedFormFamily::Beta | ClosedFormFamily::PrimeBlock => (imitation, profile),
        _ => {
            let (pi, tau) = symmetry;
            let g = constant_sum_transform(&imitation, &pi, &tau)?.with_tag(family.name());
            (g, constant_sum_ne(&profile.x, &pi))
        }
    };
    let (c1, c2) = (profile.x.complexity().clone(), profile.y.complexity().clone());
    Ok(ClosedFormNe { game, profile, c1, c2 })
}

// ---------------------------------------------------------------------------
// Asymptotics

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    /// Index `l = upto - 1` at which the limits are evaluated.
    pub at: usize,
    pub ratio: f64,
    pub ratio_error: f64,
    /// First `n >= 5` where `b_{n+1}/b_n` leaves its side of `ρ` or breaks
    /// monotonicity along its parity class.
    pub sandwich_violation: Option<usize>,
    pub claim1: f64,
    pub claim1_expected: f64,
    pub claim2: f64,
    pub claim2_expected: f64,
    /// `(n, (1/n) log2 max(g_n, 1))`.
    pub gcd_growth: Vec<(usize, f64)>,
}

impl AsymptoticReport {
    pub fn sandwich_holds(&self) -> bool {
        self.sandwich_violation.is_none()
    }
}

fn rational_f64(r: &BigRational) -> f64 {
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs();
    if num.is_zero() {
        return 0.0;
    }
    sign * (log2_big(&num) - log2_big(r.denom())).exp2()
}

/// `x < ρ` iff `x^3 + x^2 + 1 < 0`, since that cubic has a single real
/// root and is increasing left of it and positive right of it.
fn below_rho(x: &BigRational) -> bool {
    let v = x * x * x + x * x + BigRational::one();
    v.is_negative()
}

/// Ratio convergence of `b_{n+1}/b_n` to `ρ` and the two limits of the
/// `b`-sequence, evaluated at `l = upto - 1` (they need `b_{l+2}`).
pub fn asymptotic_checks(table: &RecurrenceTable, consts: &RecurrenceConstants) -> AsymptoticReport {
    let l = table.upto() - 1;
    assert!(l >= 5, "table too short for asymptotic checks");
    let r = |n: usize| BigRational::new(table.b(n + 1).clone(), table.b(n).clone());

    let mut sandwich_violation = None;
    for n in 5..=table.upto() {
        let rn = r(n);
        // Odd indices approach from below, even ones from above.
        let side_ok = below_rho(&rn) == (n % 2 == 1);
        let monotone_ok = n < 7 || if n % 2 == 1 { r(n - 2) <= rn } else { r(n - 2) >= rn };
        if !(side_ok && monotone_ok) {
            sandwich_violation = Some(n);
            break;
        }
    }

    let ratio = rational_f64(&r(l));
    let (bm, b0, b1, b2) = (table.b(l - 1), table.b(l), table.b(l + 1), table.b(l + 2));
    let claim1 = rational_f64(&BigRational::new(b0 * b0 - b1 * bm, b0.clone()));
    let claim2 = rational_f64(&BigRational::new(b2 * b0 - b1 * b1, b0.clone()));
    let gcd_growth = (1..=table.upto())
        .map(|n| {
            let g = table.g(n);
            let bits = if g.is_zero() || g.is_one() { 0.0 } else { log2_big(g) };
            (n, bits / n as f64)
        })
        .collect();
    AsymptoticReport {
        at: l,
        ratio,
        ratio_error: (ratio - consts.rho).abs(),
        sandwich_violation,
        claim1,
        claim1_expected: consts.claim_limit_1(),
        claim2,
        claim2_expected: consts.claim_limit_2(),
        gcd_growth,
    }
}
