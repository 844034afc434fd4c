//! Exact Nash equilibria of bimatrix games and the randomness they need.
//!
//! Every equilibrium quantity is an exact integer or rational. The
//! complexity of a mixed strategy `x = (p_1/q, ..., p_n/q)` in lowest terms
//! is `C(x) = q`.

pub mod exact;
pub mod families;
pub mod game;
pub mod io;
pub mod ne;
pub mod sampler;

pub use exact::{cofactor_sum, cofactor_sum_by_solve, det, replace_column, solve_exact, ExactError, IntMatrix};
pub use families::{
    beta_game, beta_ne, block_matrix, closed_form_ne, constant_sum_transform, pad_game, permutation_game,
    prime_block_game, prime_block_ne, recurrence_table, two_by_two_complexities, ClosedFormFamily, FamilyError,
    Permutation, RecurrenceConstants, RecurrenceTable,
};
pub use game::{capability_admissible, is_nash, Game, GameError, MixedStrategy, Profile};
pub use io::ParseError;
pub use ne::{
    bounded_ne_exists, complexity_upper_bound, fully_mixed_ne, min_complexities, pure_nash, support_enumeration,
    EnumConfig, NeError, SolveReport, SupportPair,
};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use sampler::{BitSource, DdgSampler, SamplerError, ScriptedBits, SeededBits};
