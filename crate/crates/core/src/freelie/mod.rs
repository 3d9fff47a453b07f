//! Bigraded free Lie algebras, the universal logarithm of the hypotenuse
//! transport and the commutant of the free Lie algebra on two letters.

pub mod commutant;
pub mod lie;
pub mod tensor;
pub mod universal;
pub mod words;

/// Coefficients of universal Lie polynomials are rational.
pub type Coeff = crate::algebra::Rational;

pub use commutant::{commutant_generators, BidegreeRank, CommutantReport};
pub use lie::{lyndon_expansion, LiePolynomial, LieTarget};
pub use tensor::TensorSeries;
pub use universal::{
    abelian_coefficient, beta_coefficient, coefficient_comparison, invert_generator_change,
    lie_tables, stated_coefficient, universal_log_pexp, universal_pexp, CoefficientComparison,
    LieTables, CACHE_ENV, MAX_TRUNCATION,
};
pub use words::{is_lyndon, necklace_count, standard_factorization, Alphabet, AlphabetKind, Letter, Word};
