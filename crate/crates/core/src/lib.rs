//! Exact max-plus linear algebra for inhomogeneous matrix products.
//!
//! Given a finite family of geometrically equivalent irreducible matrices
//! whose unique critical cycle is a weight-0 loop at the first node, every
//! sufficiently long product `A_1 ⊗ … ⊗ A_k` is a max-plus outer product.
//! This crate computes an explicit length after which that holds
//! ([`explicit_bound`]), the sharper bound read off a realised product
//! ([`implicit_bound`]), and checks the claims on concrete products through
//! trellis-digraph dynamic programming and brute-force walk enumeration.
//!
//! All algorithms are generic over the weight type ([`Weight`]). Exact
//! rationals are the intended instantiation and the aliases below fix them;
//! `f64` works for exploration but gives up exact tie detection.
//!
//! Node and member indices are 0-based in the library.

pub mod bounds;
pub mod error;
pub mod family;
pub mod graph;
pub mod matrix;
pub mod product;
pub mod scalar;
pub mod trellis;

pub use bounds::{
    bound_from_parts, check_length_sufficient, explicit_bound, implicit_bound, BoundInputs,
    BoundMatrix, BoundMode, BoundReport, BoundValue, Term,
};
pub use error::{Error, Result};
pub use family::{MatrixFamily, Subject, ValidationReport, Verdict, Violation};
pub use graph::{
    alpha, beta, gamma, geometrically_equivalent, is_irreducible, lambda_star, max_cycle_mean,
    support, CycleMeanResult, EdgeSet,
};
pub use matrix::{mat_mul, mat_power, outer_product, TropicalMatrix};
pub use product::{
    estimate_transient, fold, random_sequence, ProductSequence, SearchMode, TransientConfig,
    TransientEstimate,
};
pub use scalar::{oplus, otimes, Epsilon, Finite, TropicalScalar, Weight};
pub use trellis::{
    build_trellis, check_lemma_bounds, enumerate_walks, LemmaOutcome, LemmaReport, TrellisDigraph,
    WalkClass, WalkSummary,
};

/// Arbitrary-precision rational weight.
pub type Rational = num_rational::BigRational;

pub type Scalar = TropicalScalar<Rational>;
pub type Matrix = TropicalMatrix<Rational>;
pub type Family = MatrixFamily<Rational>;
pub type Bound = BoundReport<Rational>;

/// Floating-point instantiations, for quick experiments.
pub type Matrix64 = TropicalMatrix<f64>;
pub type Family64 = MatrixFamily<f64>;
