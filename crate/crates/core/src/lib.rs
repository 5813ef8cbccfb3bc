//! Fibres of commutator word maps on finite `p`-groups of class below `p`
//! and exponent `p`, computed from the Lie algebra side by a rank
//! stratification of the commutator matrix, with a brute-force group oracle
//! for cross-checking.

pub mod algebra;
pub mod enumeration;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod zeta;

pub use algebra::{builtin, FullLieAlgebra, LiePresentation, Relation, ValidationReport, BUILTINS};
pub use enumeration::{
    build_matrix, classify_elements, classify_with, kv_vectors, rank_profile, rank_skew, Classification,
    CommutatorMatrix, KvClass, KvVectors, RankProfile, StratumTable, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use field::{enumerate_vectors, is_prime, make_field, FieldConfig, FieldElement};
pub use oracle::{compare, ComparisonReport, FibreTable, LazardGroup, Mismatch, DEFAULT_PAIR_BUDGET};
pub use zeta::{
    analyze, class_number, degree_counts, direct_product, fibre_count, fibre_prob, l1_distance,
    predicted_second_moment, second_moment, uniformity_bound, word_exponent, zeta, zeta_stratum, zeta_total,
    FibreReport, FibreRow, FibresAtT, UniformityBound, ZetaValue,
};
