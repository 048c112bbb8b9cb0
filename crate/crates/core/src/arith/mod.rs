//! Number-theoretic and integer linear algebra primitives.

mod congruence;
mod crt;
mod factor;
mod matrix;
mod primes;

pub use congruence::{
    reduce_offset, solve_congruence_system, solve_integer_system, AffineLattice, IntegerSolution,
    SystemError,
};
pub use crt::{crt, crt_pair, crt_u64, CrtError};

pub use factor::{
    factor, factor_small, factor_u64, factor_with_budget, FactorError, Factorization, RhoBudget,
};
pub use matrix::{hermite_normal_form, smith_normal_form, IntMatrix, SnfDecomposition};
pub use primes::{
    gcd_u64, inv_mod, is_prime, is_prime_u64, isqrt_u64, mul_mod, pow_mod, primes_up_to,
};
